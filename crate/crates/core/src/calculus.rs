//! Arc-length and area parameters of the unit circle, the distortion `ρ` of
//! the Birkhoff image, arc-length derivatives of `sn` and `cm`, and residuals
//! of the second-order equation `f'' + ρ f = 0`.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::birkhoff::birkhoff_b;
use crate::context::PlaneContext;
use crate::error::{Error, Result};
use crate::trig::{cm, sn};
use crate::vec2::Vec2;

/// Step of the symmetric difference in [`rho`], as a fraction of the perimeter.
pub const RHO_STEP: f64 = 1e-4;
/// Step of the symmetric differences in [`d_ds_identities`].
pub const DERIVATIVE_STEP: f64 = 1e-5;
/// Tolerance on the initial conditions checked by [`ode_residual`].
pub const INITIAL_CONDITION_TOL: f64 = 1e-4;

const GAUSS3: [(f64, f64); 3] = [
    (-0.774_596_669_241_483_4, 5.0 / 9.0),
    (0.0, 8.0 / 9.0),
    (0.774_596_669_241_483_4, 5.0 / 9.0),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ArcKind {
    NormLength,
    AntinormLength,
    SectorArea,
}

/// A monotone parameter of the unit circle measured from polar angle 0.
#[derive(Clone, Debug)]
pub struct ArcParam {
    pub kind: ArcKind,
    /// Full-circle value: perimeter, antinorm perimeter or twice the area.
    pub total: f64,
    knots: Vec<f64>,
    rates: Vec<f64>,
}

impl ArcParam {
    pub fn new(ctx: &PlaneContext, kind: ArcKind) -> Result<Self> {
        let table = ctx.circle_table();
        let mut knots: Vec<f64> = table
            .iter()
            .map(|c| match kind {
                ArcKind::NormLength => c.s_norm,
                ArcKind::AntinormLength => c.s_anti,
                ArcKind::SectorArea => c.sector_area2,
            })
            .collect();
        let total = match kind {
            ArcKind::NormLength => ctx.perimeter(),
            ArcKind::AntinormLength => ctx.anti_perimeter(),
            ArcKind::SectorArea => ctx.sector_area2_total(),
        };
        knots.push(total);
        if knots.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Numerical(format!("{kind:?} parameter is not strictly increasing")));
        }
        let mut rates: Vec<f64> = ctx
            .rates()
            .iter()
            .map(|r| match kind {
                ArcKind::NormLength => r.norm,
                ArcKind::AntinormLength => r.anti,
                ArcKind::SectorArea => r.area,
            })
            .collect();
        rates.push(rates[0]);
        Ok(ArcParam { kind, total, knots, rates })
    }

    /// Derivative of the parameter with respect to the polar angle.
    pub fn rate(&self, ctx: &PlaneContext, theta: f64) -> Result<f64> {
        let r = ctx.rates_at(theta)?;
        Ok(match self.kind {
            ArcKind::NormLength => r.norm,
            ArcKind::AntinormLength => r.anti,
            ArcKind::SectorArea => r.area,
        })
    }

    fn fast_rate(&self, ctx: &PlaneContext, theta: f64) -> Result<f64> {
        match self.kind {
            ArcKind::NormLength => ctx.norm(ctx.circle_velocity(theta)),
            ArcKind::SectorArea => Ok(ctx.symplectic(ctx.circle_point(theta), ctx.circle_velocity(theta))),
            ArcKind::AntinormLength => ctx.antinorm(ctx.circle_velocity(theta)),
        }
    }

    /// Parameter value of the circle point at polar angle `theta`, continued
    /// periodically (one turn adds `total`).
    pub fn param_of_theta(&self, ctx: &PlaneContext, theta: f64) -> Result<f64> {
        let turns = (theta / TAU).floor();
        let (i, t) = ctx.locate(theta);
        let t0 = ctx.circle_table()[i].theta;
        let half = 0.5 * (t - t0);
        let mut acc = 0.0;
        if half > 0.0 {
            for (x, w) in GAUSS3 {
                acc += half * w * self.fast_rate(ctx, t0 + half * (1.0 + x))?;
            }
        }
        Ok(turns * self.total + self.knots[i] + acc)
    }

    /// Polar angle at parameter value `s` (taken modulo `total`): cubic
    /// Hermite guess from the knots, then Newton steps on the exact integral.
    pub fn theta_of_param(&self, ctx: &PlaneContext, s: f64) -> Result<f64> {
        let s = s.rem_euclid(self.total);
        let n = self.knots.len() - 1;
        let i = (self.knots.partition_point(|&k| k <= s).max(1) - 1).min(n - 1);
        let dt = TAU / n as f64;
        let (s0, s1) = (self.knots[i], self.knots[i + 1]);
        let h = s1 - s0;
        let u = (s - s0) / h;
        let (m0, m1) = (h / self.rates[i], h / self.rates[i + 1]);
        let (t0, t1) = (i as f64 * dt, (i + 1) as f64 * dt);
        let u2 = u * u;
        let u3 = u2 * u;
        let mut theta = (2.0 * u3 - 3.0 * u2 + 1.0) * t0
            + (u3 - 2.0 * u2 + u) * m0
            + (-2.0 * u3 + 3.0 * u2) * t1
            + (u3 - u2) * m1;
        for _ in 0..3 {
            let f = self.param_of_theta(ctx, theta)? - s;
            let next = (theta - f / self.fast_rate(ctx, theta)?).clamp(t0, t1);
            if next == theta {
                break;
            }
            theta = next;
        }
        Ok(theta)
    }

    /// Strictly increasing knot values, one per table point plus the total.
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }
}

/// Point of the unit circle at parameter value `s`.
pub fn param_point(ctx: &PlaneContext, param: &ArcParam, s: f64) -> Result<Vec2> {
    Ok(ctx.circle_point(param.theta_of_param(ctx, s)?))
}

/// `ρ(s) = |d/ds b(γ(s))|` along the norm arc length, by a symmetric
/// difference of step `perimeter * 1e-4`.
pub fn rho(ctx: &PlaneContext, s: f64) -> Result<f64> {
    rho_with(ctx, &ArcParam::new(ctx, ArcKind::NormLength)?, s)
}

pub fn rho_with(ctx: &PlaneContext, arc: &ArcParam, s: f64) -> Result<f64> {
    let h = arc.total * RHO_STEP;
    let bp = birkhoff_b(ctx, param_point(ctx, arc, s + h)?)?;
    let bm = birkhoff_b(ctx, param_point(ctx, arc, s - h)?)?;
    ctx.norm((bp - bm) / (2.0 * h))
}

/// Residuals `|d/ds₁ sn(x,y) - sn(b(x),y)|` and `|d/ds₂ cm(x,y) - cm(x,b(y))|`
/// for arc-length derivatives in the first and second slot.
pub fn d_ds_identities(ctx: &PlaneContext, x: Vec2, y: Vec2) -> Result<(f64, f64)> {
    d_ds_identities_with(ctx, &ArcParam::new(ctx, ArcKind::NormLength)?, x, y)
}

pub fn d_ds_identities_with(ctx: &PlaneContext, arc: &ArcParam, x: Vec2, y: Vec2) -> Result<(f64, f64)> {
    let (x, y) = (ctx.unit(x)?, ctx.unit(y)?);
    let h = arc.total * DERIVATIVE_STEP;
    let sx = arc.param_of_theta(ctx, x.angle())?;
    let sy = arc.param_of_theta(ctx, y.angle())?;
    let d1 = (sn(ctx, param_point(ctx, arc, sx + h)?, y)? - sn(ctx, param_point(ctx, arc, sx - h)?, y)?)
        / (2.0 * h);
    let d2 = (cm(ctx, x, param_point(ctx, arc, sy + h)?)? - cm(ctx, x, param_point(ctx, arc, sy - h)?)?)
        / (2.0 * h);
    let r1 = (d1 - sn(ctx, birkhoff_b(ctx, x)?, y)?).abs();
    let r2 = (d2 - cm(ctx, x, birkhoff_b(ctx, y)?)?).abs();
    Ok((r1, r2))
}

/// Which solution of `f'' + ρ f = 0` to test, with `x₀ = γ(0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OdeFunction {
    /// `s -> sn(γ(s), x₀)`
    SnFromX0,
    /// `s -> cm(x₀, γ(s))`
    CmFromX0,
}

/// One grid sample of the calculus table.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CalculusRow {
    pub s: f64,
    pub theta: f64,
    pub rho: f64,
    pub sn: f64,
    pub cm: f64,
    /// `|f'' + ρ f|` for the sine solution, by second differences.
    pub sn_residual: f64,
    /// The same for the cosine solution.
    pub cm_residual: f64,
}

/// Samples `ρ`, `sn(γ(s), x₀)` and `cm(x₀, γ(s))` on a uniform grid of `grid`
/// points over one turn and forms the second-difference residuals.
pub fn calculus_rows(ctx: &PlaneContext, grid: usize) -> Result<Vec<CalculusRow>> {
    if grid < 8 {
        return Err(Error::Config(format!("calculus grid needs at least 8 points, got {grid}")));
    }
    let arc = ArcParam::new(ctx, ArcKind::NormLength)?;
    let x0 = ctx.circle_point(0.0);
    let h = arc.total / grid as f64;
    let mut rows = Vec::with_capacity(grid);
    for k in 0..grid {
        let s = k as f64 * h;
        let theta = arc.theta_of_param(ctx, s)?;
        let g = ctx.circle_point(theta);
        rows.push(CalculusRow {
            s,
            theta,
            rho: rho_with(ctx, &arc, s)?,
            sn: sn(ctx, g, x0)?,
            cm: cm(ctx, x0, g)?,
            sn_residual: 0.0,
            cm_residual: 0.0,
        });
    }
    for k in 0..grid {
        let (prev, next) = (rows[(k + grid - 1) % grid], rows[(k + 1) % grid]);
        let r = &mut rows[k];
        r.sn_residual = ((prev.sn - 2.0 * r.sn + next.sn) / (h * h) + r.rho * r.sn).abs();
        r.cm_residual = ((prev.cm - 2.0 * r.cm + next.cm) / (h * h) + r.rho * r.cm).abs();
    }
    Ok(rows)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct OdeReport {
    pub function: OdeFunction,
    pub grid: usize,
    /// `max |f'' + ρ f|` over the grid.
    pub max_residual: f64,
    /// Arc length where the maximum occurs.
    pub worst_s: f64,
    /// Median residual over the grid.
    pub median_residual: f64,
    pub f0: f64,
    /// `f'(0)` by the grid's central difference.
    pub df0: f64,
    pub expected_f0: f64,
    pub expected_df0: f64,
    pub initial_ok: bool,
}

/// Residual of `f'' + ρ f = 0` for one of the two trigonometric solutions,
/// together with a check of its initial values.
///
/// The expected initial values follow from the derivative identities:
/// `sn(x₀, x₀) = 0`, `d/ds sn(γ, x₀) = sn(b(x₀), x₀) = -1`, `cm(x₀, x₀) = 1`,
/// `d/ds cm(x₀, γ) = cm(x₀, b(x₀)) = 0`.
pub fn ode_residual(ctx: &PlaneContext, function: OdeFunction, grid: usize) -> Result<OdeReport> {
    if !ctx.is_radon() {
        return Err(Error::Unsupported("the trigonometric equation only holds in Radon planes".into()));
    }
    let rows = calculus_rows(ctx, grid)?;
    let x0 = ctx.circle_point(0.0);
    let b0 = birkhoff_b(ctx, x0)?;
    let pick = |r: &CalculusRow| match function {
        OdeFunction::SnFromX0 => (r.sn, r.sn_residual),
        OdeFunction::CmFromX0 => (r.cm, r.cm_residual),
    };
    let (expected_f0, expected_df0) = match function {
        OdeFunction::SnFromX0 => (sn(ctx, x0, x0)?, sn(ctx, b0, x0)?),
        OdeFunction::CmFromX0 => (cm(ctx, x0, x0)?, cm(ctx, x0, b0)?),
    };
    let h = rows[1].s;
    let f0 = pick(&rows[0]).0;
    let df0 = (pick(&rows[1]).0 - pick(&rows[grid - 1]).0) / (2.0 * h);
    let (mut max_residual, mut worst_s) = (0.0f64, 0.0);
    let mut all: Vec<f64> = Vec::with_capacity(grid);
    for r in &rows {
        let res = pick(r).1;
        all.push(res);
        if res.is_nan() || res > max_residual {
            max_residual = res;
            worst_s = r.s;
        }
    }
    all.sort_by(f64::total_cmp);
    let initial_ok = (f0 - expected_f0).abs() <= INITIAL_CONDITION_TOL
        && (df0 - expected_df0).abs() <= INITIAL_CONDITION_TOL;
    Ok(OdeReport {
        function,
        grid,
        max_residual,
        worst_s,
        median_residual: all[grid / 2],
        f0,
        df0,
        expected_f0,
        expected_df0,
        initial_ok,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct AreaCheck {
    /// `max |Δ(sector_area2) - Δ(s_anti)|` over the table steps.
    pub max_step_diff: f64,
    pub total_norm: f64,
    pub total_anti: f64,
    pub total_area2: f64,
    /// In Radon planes, `max |s_norm - s_anti|, |s_norm - sector_area2|` over
    /// the table; `None` otherwise.
    pub coincidence: Option<f64>,
}

/// Compares the area parameter with the antinorm arc length step by step and,
/// in Radon planes, all three cumulative parameters.
pub fn area_param_check(ctx: &PlaneContext) -> AreaCheck {
    let t = ctx.circle_table();
    let n = t.len();
    let step = |i: usize, f: &dyn Fn(usize) -> f64| f(i + 1) - f(i);
    let area = |i: usize| if i == n { ctx.sector_area2_total() } else { t[i].sector_area2 };
    let anti = |i: usize| if i == n { ctx.anti_perimeter() } else { t[i].s_anti };
    let max_step_diff = (0..n)
        .map(|i| (step(i, &area) - step(i, &anti)).abs())
        .fold(0.0, f64::max);
    let coincidence = ctx.is_radon().then(|| {
        t.iter()
            .map(|c| (c.s_norm - c.s_anti).abs().max((c.s_norm - c.sector_area2).abs()))
            .chain([
                (ctx.perimeter() - ctx.anti_perimeter()).abs(),
                (ctx.perimeter() - ctx.sector_area2_total()).abs(),
            ])
            .fold(0.0, f64::max)
    });
    AreaCheck {
        max_step_diff,
        total_norm: ctx.perimeter(),
        total_anti: ctx.anti_perimeter(),
        total_area2: ctx.sector_area2_total(),
        coincidence,
    }
}

/// `max |1 - |γ(s+δ) - γ(s-δ)| / 2δ|` at the midpoints of the table steps of
/// the norm arc length, with `δ = perimeter * 1e-7`.
pub fn norm_speed_defect(ctx: &PlaneContext) -> Result<f64> {
    let arc = ArcParam::new(ctx, ArcKind::NormLength)?;
    let d = arc.total * 1e-7;
    let mut worst = 0.0f64;
    for w in arc.knots().windows(2) {
        let s = 0.5 * (w[0] + w[1]);
        let chord = param_point(ctx, &arc, s + d)? - param_point(ctx, &arc, s - d)?;
        worst = worst.max((ctx.norm(chord)? / (2.0 * d) - 1.0).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::NormSpec;
    use std::f64::consts::PI;

    fn ctx(spec: NormSpec) -> PlaneContext {
        PlaneContext::new(spec).unwrap()
    }

    #[test]
    fn euclidean_param_points() {
        let e = ctx(NormSpec::Euclidean);
        let arc = ArcParam::new(&e, ArcKind::NormLength).unwrap();
        assert!((arc.total - 2.0 * PI).abs() < 1e-12);
        assert!((param_point(&e, &arc, PI / 2.0).unwrap() - Vec2::new(0.0, 1.0)).euclid_len() < 1e-12);
        assert!((param_point(&e, &arc, 0.0).unwrap() - Vec2::new(1.0, 0.0)).euclid_len() < 1e-15);
    }

    #[test]
    fn lp_half_perimeter_is_antipode() {
        let l = ctx(NormSpec::Lp { p: 4.0 });
        let arc = ArcParam::new(&l, ArcKind::NormLength).unwrap();
        let y = param_point(&l, &arc, arc.total / 2.0).unwrap();
        assert!((y + l.circle_point(0.0)).euclid_len() < 1e-10, "{y}");
    }

    #[test]
    fn round_trip() {
        let m = ctx(NormSpec::MixedLpLq { p: 4.0 });
        for kind in [ArcKind::NormLength, ArcKind::AntinormLength, ArcKind::SectorArea] {
            let arc = ArcParam::new(&m, kind).unwrap();
            for k in 0..37 {
                let theta = 0.01 + k as f64 * 0.17;
                let s = arc.param_of_theta(&m, theta).unwrap();
                let back = arc.theta_of_param(&m, s).unwrap();
                assert!((back - theta).abs() < 1e-8, "{kind:?} {theta} {back}");
            }
        }
    }

    #[test]
    fn rho_euclidean_is_one() {
        let e = ctx(NormSpec::Euclidean);
        for s in [0.0, 1.0, 2.5, 5.9] {
            assert!((rho(&e, s).unwrap() - 1.0).abs() < 1e-5);
        }
    }

    #[test]
    fn derivative_identities_euclidean() {
        let e = ctx(NormSpec::Euclidean);
        let (a, b) = d_ds_identities(&e, Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)).unwrap();
        assert!(a < 1e-8 && b < 1e-8);
    }

    #[test]
    fn ode_euclidean_and_guards() {
        let e = ctx(NormSpec::Euclidean);
        let r = ode_residual(&e, OdeFunction::SnFromX0, 2000).unwrap();
        assert!(r.max_residual < 1e-4 && r.initial_ok, "{r:?}");
        assert_eq!(r.expected_df0, -1.0);
        let l = ctx(NormSpec::Lp { p: 4.0 });
        assert!(matches!(ode_residual(&l, OdeFunction::SnFromX0, 100), Err(Error::Unsupported(_))));
    }

    #[test]
    fn area_parameter_euclidean() {
        let e = ctx(NormSpec::Euclidean);
        let a = area_param_check(&e);
        assert!(a.max_step_diff < 1e-8);
        assert!((a.total_area2 - 2.0 * PI).abs() < 1e-10);
        assert!(a.coincidence.unwrap() < 1e-10);
        assert!(norm_speed_defect(&e).unwrap() < 1e-6);
    }
}
