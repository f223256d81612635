//! The plane context: a compiled norm, the symplectic form, and the cached
//! unit-circle table every other module reads from.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::birkhoff;
use crate::error::{domain, Error, Result};
use crate::norm::{NormModel, NormSpec};
use crate::oracles;
use crate::vec2::Vec2;

pub const DEFAULT_TABLE_SIZE: usize = 4096;
pub const MIN_TABLE_SIZE: usize = 64;
/// Environment variable overriding the circle table size in the CLI.
pub const TABLE_SIZE_ENV: &str = "MINKTRIG_TABLE_SIZE";
/// Number of unit vectors probed by the Radon detector during construction.
pub const RADON_PROBE_SAMPLES: usize = 256;
/// Below this Birkhoff-asymmetry defect a plane is classified Radon.
pub const RADON_DEFECT_MAX: f64 = 1e-7;
/// Above this defect a plane is classified not Radon.
pub const NOT_RADON_DEFECT_MIN: f64 = 1e-4;

/// Result of probing whether Birkhoff orthogonality is symmetric.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RadonFlag {
    Radon,
    NotRadon,
    Unknown,
}

impl RadonFlag {
    pub fn classify(max_defect: f64) -> Self {
        if max_defect < RADON_DEFECT_MAX {
            RadonFlag::Radon
        } else if max_defect > NOT_RADON_DEFECT_MIN {
            RadonFlag::NotRadon
        } else {
            RadonFlag::Unknown
        }
    }
}

/// One sample of the unit circle, with cumulative parameters measured from
/// polar angle 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CirclePoint {
    pub theta: f64,
    /// Point of the unit circle at polar angle `theta`.
    pub point: Vec2,
    /// Gradient of the norm at `point` (outward normal, `<normal, point> = 1`).
    pub normal: Vec2,
    /// `b(point)`: positively oriented tangent of unit antinorm.
    pub tangent: Vec2,
    pub s_norm: f64,
    pub s_anti: f64,
    /// Twice the oriented sector area swept from polar angle 0.
    pub sector_area2: f64,
}

/// Derivatives of the cumulative parameters with respect to the polar angle.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Rates {
    pub norm: f64,
    pub anti: f64,
    pub area: f64,
}

/// A smooth strictly convex norm together with its symplectic form and the
/// tabulated unit circle. Immutable once built.
#[derive(Clone, Debug)]
pub struct PlaneContext {
    spec: NormSpec,
    model: NormModel,
    omega_scale: f64,
    table: Vec<CirclePoint>,
    rates: Vec<Rates>,
    /// Polar angles of the table normals, unwrapped to increase monotonically.
    normal_angles: Vec<f64>,
    radon_flag: RadonFlag,
    radon_defect: f64,
    antinorm_deviation: f64,
    totals: Rates,
}

/// Builds a plane context with `table_size` circle samples uniform in polar
/// angle. When `normalize_radon` is set and the plane is detected to be Radon,
/// the symplectic form is rescaled so that the antinorm equals the norm.
pub fn build_context(spec: NormSpec, table_size: usize, normalize_radon: bool) -> Result<PlaneContext> {
    if table_size < MIN_TABLE_SIZE {
        return Err(Error::Config(format!(
            "circle table needs at least {MIN_TABLE_SIZE} samples, got {table_size}"
        )));
    }
    let model = NormModel::compile(&spec)?;
    let mut ctx = PlaneContext {
        spec,
        model,
        omega_scale: 1.0,
        table: Vec::with_capacity(table_size),
        rates: vec![Rates::default(); table_size],
        normal_angles: Vec::with_capacity(table_size),
        radon_flag: RadonFlag::Unknown,
        radon_defect: f64::NAN,
        antinorm_deviation: f64::NAN,
        totals: Rates::default(),
    };

    let mut last = f64::NEG_INFINITY;
    for i in 0..table_size {
        let theta = TAU * i as f64 / table_size as f64;
        let point = ctx.circle_point(theta);
        let normal = ctx.model.gradient(point);
        let mut a = normal.angle();
        if i > 0 {
            while a < last {
                a += TAU;
            }
        }
        last = a;
        ctx.normal_angles.push(a);
        ctx.table.push(CirclePoint {
            theta,
            point,
            normal,
            tangent: normal.perp(),
            s_norm: 0.0,
            s_anti: 0.0,
            sector_area2: 0.0,
        });
    }

    let report = birkhoff::is_radon(&ctx, RADON_PROBE_SAMPLES, RADON_DEFECT_MAX);
    ctx.radon_defect = report.max_residual;
    ctx.radon_flag = RadonFlag::classify(report.max_residual);

    let anti: Vec<f64> = ctx
        .table
        .iter()
        .map(|c| ctx.antinorm(c.point))
        .collect::<Result<_>>()?;
    let (lo, hi) = anti.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &a| (lo.min(a), hi.max(a)));
    if normalize_radon && ctx.radon_flag == RadonFlag::Radon {
        ctx.omega_scale = 2.0 / (lo + hi);
    }
    ctx.antinorm_deviation = anti
        .iter()
        .map(|a| (a * ctx.omega_scale - 1.0).abs())
        .fold(0.0, f64::max);
    for c in &mut ctx.table {
        c.tangent = c.normal.perp() / ctx.omega_scale;
    }

    // cumulative parameters: 3-point Gauss-Legendre on every table interval
    const NODES: [(f64, f64); 3] = [
        (-0.774_596_669_241_483_4, 5.0 / 9.0),
        (0.0, 8.0 / 9.0),
        (0.774_596_669_241_483_4, 5.0 / 9.0),
    ];
    let dt = TAU / table_size as f64;
    let mut acc = Rates::default();
    for i in 0..table_size {
        ctx.rates[i] = ctx.rates_at(ctx.table[i].theta)?;
        let c = &mut ctx.table[i];
        c.s_norm = acc.norm;
        c.s_anti = acc.anti;
        c.sector_area2 = acc.area;
        let mid = c.theta + 0.5 * dt;
        for (x, w) in NODES {
            let r = ctx.rates_at(mid + 0.5 * dt * x)?;
            acc.norm += 0.5 * dt * w * r.norm;
            acc.anti += 0.5 * dt * w * r.anti;
            acc.area += 0.5 * dt * w * r.area;
        }
    }
    ctx.totals = acc;
    Ok(ctx)
}

/// Table size taken from `MINKTRIG_TABLE_SIZE`, or the default.
pub fn table_size_from_env() -> Result<usize> {
    match std::env::var(TABLE_SIZE_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("{TABLE_SIZE_ENV}={v} is not a count"))),
        Err(_) => Ok(DEFAULT_TABLE_SIZE),
    }
}

impl PlaneContext {
    /// Shorthand for `build_context(spec, DEFAULT_TABLE_SIZE, true)`.
    pub fn new(spec: NormSpec) -> Result<Self> {
        build_context(spec, DEFAULT_TABLE_SIZE, true)
    }

    pub fn spec(&self) -> &NormSpec {
        &self.spec
    }

    pub fn omega_scale(&self) -> f64 {
        self.omega_scale
    }

    pub fn circle_table(&self) -> &[CirclePoint] {
        &self.table
    }

    pub fn radon_flag(&self) -> RadonFlag {
        self.radon_flag
    }

    pub fn is_radon(&self) -> bool {
        self.radon_flag == RadonFlag::Radon
    }

    /// Largest relative Birkhoff-asymmetry defect found while probing.
    pub fn radon_defect(&self) -> f64 {
        self.radon_defect
    }

    /// `max |antinorm(y) - 1|` over the table points.
    pub fn antinorm_deviation(&self) -> f64 {
        self.antinorm_deviation
    }

    /// Circumference of the unit circle measured in the norm.
    pub fn perimeter(&self) -> f64 {
        self.totals.norm
    }

    /// Circumference of the unit circle measured in the antinorm.
    pub fn anti_perimeter(&self) -> f64 {
        self.totals.anti
    }

    /// Twice the area of the unit ball under the symplectic form.
    pub fn sector_area2_total(&self) -> f64 {
        self.totals.area
    }

    pub(crate) fn model(&self) -> &NormModel {
        &self.model
    }

    pub(crate) fn rates(&self) -> &[Rates] {
        &self.rates
    }

    pub fn norm(&self, v: Vec2) -> Result<f64> {
        v.check_finite()?;
        Ok(self.model.eval(v))
    }

    /// Gradient of the norm; degree-0 homogeneous with `<g, v> = |v|`.
    pub fn norm_gradient(&self, v: Vec2) -> Result<Vec2> {
        v.check_nonzero("norm_gradient argument")?;
        Ok(self.model.gradient(v))
    }

    /// `v / |v|`.
    pub fn unit(&self, v: Vec2) -> Result<Vec2> {
        v.check_nonzero("vector")?;
        Ok(v / self.model.eval(v))
    }

    /// The symplectic form `omega_scale * det(u, v)`.
    #[inline]
    pub fn symplectic(&self, u: Vec2, v: Vec2) -> f64 {
        self.omega_scale * u.cross(v)
    }

    /// `sup { |[v, y]| : y on the unit circle }`.
    ///
    /// The table normal closest to the direction of `[v, .]` brackets the
    /// maximizer; golden-section search refines it.
    pub fn antinorm(&self, v: Vec2) -> Result<f64> {
        v.check_finite()?;
        if v.is_zero() {
            return Ok(0.0);
        }
        // [v, y] = omega <perp(v), y>
        let w = v.perp();
        let n = self.normal_angles.len();
        let a0 = self.normal_angles[0];
        let target = (w.angle() - a0).rem_euclid(TAU) + a0;
        let j = self.normal_angles.partition_point(|&a| a <= target).max(1) - 1;
        let dt = TAU / n as f64;
        let (lo, hi) = ((j as f64 - 1.0) * dt, (j as f64 + 2.0) * dt);
        let (_, best) = oracles::golden_section_min(|t| -w.dot(self.circle_point(t)), lo, hi)?;
        Ok(-best * self.omega_scale)
    }

    /// Polar angle of the unit-circle point whose outward normal points along
    /// `w`, by bisection inside the bracketing table interval.
    pub fn normal_preimage(&self, w: Vec2) -> Result<f64> {
        w.check_nonzero("normal direction")?;
        let n = self.normal_angles.len();
        let a0 = self.normal_angles[0];
        let target = (w.angle() - a0).rem_euclid(TAU) + a0;
        let j = self.normal_angles.partition_point(|&a| a <= target).max(1) - 1;
        let dt = TAU / n as f64;
        let side = |t: f64| w.cross(self.model.gradient(self.circle_point(t)));
        oracles::bisect(side, j as f64 * dt, (j + 1) as f64 * dt)
    }

    /// Point of the unit circle at polar angle `theta`.
    #[inline]
    pub fn circle_point(&self, theta: f64) -> Vec2 {
        let u = Vec2::from_angle(theta);
        u / self.model.eval(u)
    }

    /// Derivative of [`circle_point`](Self::circle_point) with respect to `theta`.
    pub fn circle_velocity(&self, theta: f64) -> Vec2 {
        let u = Vec2::from_angle(theta);
        let du = u.perp();
        let n = self.model.eval(u);
        let g = self.model.gradient(u);
        du / n - u * (g.dot(du) / (n * n))
    }

    pub(crate) fn rates_at(&self, theta: f64) -> Result<Rates> {
        let p = self.circle_point(theta);
        let v = self.circle_velocity(theta);
        Ok(Rates {
            norm: self.model.eval(v),
            anti: self.antinorm(v)?,
            area: self.symplectic(p, v),
        })
    }

    /// Index of the table interval containing polar angle `theta` and the
    /// angle reduced to `[0, 2pi)`.
    pub(crate) fn locate(&self, theta: f64) -> (usize, f64) {
        let n = self.table.len();
        let t = theta.rem_euclid(TAU);
        let i = ((t / TAU * n as f64).floor() as usize).min(n - 1);
        (i, t)
    }
}

/// Checks that a vector is a unit vector of the plane, within `tol`.
pub(crate) fn require_unit(ctx: &PlaneContext, v: Vec2, what: &str, tol: f64) -> Result<()> {
    v.check_nonzero(what)?;
    let n = ctx.model.eval(v);
    if (n - 1.0).abs() > tol {
        return domain(format!("{what} must be a unit vector, has norm {n}"));
    }
    Ok(())
}
