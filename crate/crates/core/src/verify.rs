//! Property suites: every identity and characterization checked by sampling,
//! each producing a [`VerifyReport`].

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::birkhoff::{birkhoff_b, birkhoff_defect, conjugate_pair, is_radon, left_orthogonal_unit};
use crate::calculus::{
    area_param_check, d_ds_identities_with, norm_speed_defect, ode_residual, rho_with, ArcKind, ArcParam,
    OdeFunction,
};
use crate::context::{PlaneContext, RadonFlag, RADON_DEFECT_MAX, RADON_PROBE_SAMPLES};
use crate::distortion::{
    busemann_ray, gamma_limit_probe, gamma_pair, inscribed_circle, mixed_configuration, mixed_gamma_closed_form,
    parallel_chords, radon_gamma_formula, tangent_points, EXTERIOR_TOL,
};
use crate::error::{Error, Result};
use crate::norm::NormSpec;
use crate::oracles::{equilateral_triangle, shoelace_area2};
use crate::report::{VerifyReport, Worst};
use crate::trig::{ca, cm, cm_external_form, cm_inf_form, cn, gateaux, sn};
use crate::vec2::Vec2;

/// Distortion limit probe distances.
pub const LIMIT_EPS: [f64; 4] = [0.3, 0.1, 0.03, 0.01];
/// Pairs closer than this to dependence (in `|sin|` of the polar angles) are
/// not sampled by the distortion checks.
pub const MIN_SEPARATION: f64 = 0.05;
/// `|γ - 1|` below this counts as converged in the limit probe; near `-x`
/// the ratio is 0/0 and rounding noise grows as `ε` shrinks.
pub const LIMIT_NOISE_FLOOR: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Trig,
    Distortion,
    Calculus,
    Radon,
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "trig" => Suite::Trig,
            "distortion" => Suite::Distortion,
            "calculus" => Suite::Calculus,
            "radon" => Suite::Radon,
            _ => return Err(Error::Config(format!("unknown suite '{s}'"))),
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { samples: 256, seed: 0 }
    }
}

/// Whether the norm description gives a Euclidean plane, when that is known up front.
pub fn known_euclidean(spec: &NormSpec) -> Option<bool> {
    match *spec {
        NormSpec::Euclidean => Some(true),
        NormSpec::Lp { p } | NormSpec::MixedLpLq { p } => Some(p == 2.0),
        NormSpec::SupportTable { .. } => None,
    }
}

/// Deterministic generator for one check.
pub fn check_rng(seed: u64, check: &str) -> ChaCha8Rng {
    let h = check.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

/// A uniformly random point of the unit circle.
pub fn random_unit(ctx: &PlaneContext, rng: &mut impl Rng) -> Vec2 {
    ctx.circle_point(rng.random_range(0.0..TAU))
}

/// Two random unit vectors whose polar angles are at least `MIN_SEPARATION`
/// away from dependence.
pub fn random_independent_pair(ctx: &PlaneContext, rng: &mut impl Rng) -> (Vec2, Vec2) {
    loop {
        let (a, b) = (rng.random_range(0.0..TAU), rng.random_range(0.0..TAU));
        if (b - a).sin().abs() >= MIN_SEPARATION {
            return (ctx.circle_point(a), ctx.circle_point(b));
        }
    }
}

/// A random vector with norm in `[0.1, 10]`.
pub fn random_vector(ctx: &PlaneContext, rng: &mut impl Rng) -> Vec2 {
    random_unit(ctx, rng) * 10f64.powf(rng.random_range(-1.0..1.0))
}

/// A random exterior point with norm in `[1.2, 4]`.
pub fn random_exterior(ctx: &PlaneContext, rng: &mut impl Rng) -> Vec2 {
    random_unit(ctx, rng) * rng.random_range(1.2..4.0)
}

/// Runs `f` on `n` samples and keeps the worst residual; an error counts as NaN.
fn sweep<F>(n: usize, mut f: F) -> Worst
where
    F: FnMut(usize) -> Result<(f64, Vec2, Vec2)>,
{
    let mut w = Worst::default();
    for i in 0..n {
        match f(i) {
            Ok((v, x, y)) => w.push(v, x, y),
            Err(_) => w.push(f64::NAN, Vec2::ZERO, Vec2::ZERO),
        }
    }
    w
}

// ---- trig ----

pub fn check_cm_bounds(ctx: &PlaneContext, rng: &mut impl Rng, n: usize) -> VerifyReport {
    let w = sweep(n, |_| {
        let (x, y) = (random_vector(ctx, rng), random_vector(ctx, rng));
        Ok(((cm(ctx, x, y)?.abs() - 1.0).max(0.0), x, y))
    });
    VerifyReport::below("cm_bounds", &w, 1e-12)
}

pub fn check_cm_equivalence(ctx: &PlaneContext, rng: &mut impl Rng, n: usize) -> VerifyReport {
    let w = sweep(n, |_| {
        let (x, y) = (random_vector(ctx, rng), random_vector(ctx, rng));
        let a = cm(ctx, x, y)?;
        let b = cm_inf_form(ctx, x, y)?;
        let c = cm_external_form(ctx, x, y)?;
        Ok(((a - b).abs().max((a - c).abs()).max((b - c).abs()), x, y))
    });
    VerifyReport::below("cm_equivalence", &w, 1e-6)
}

/// `|y - cm(x,y) x - sn(x,y) b(x)|` for unit `x, y`.
pub fn polar_residual(ctx: &PlaneContext, x: Vec2, y: Vec2) -> Result<f64> {
    let r = y - x * cm(ctx, x, y)? - birkhoff_b(ctx, x)? * sn(ctx, x, y)?;
    ctx.norm(r)
}

pub fn check_polar_coordinates(ctx: &PlaneContext, rng: &mut impl Rng, n: usize) -> VerifyReport {
    let w = sweep(n, |_| {
        let (x, y) = (random_unit(ctx, rng), random_unit(ctx, rng));
        Ok((polar_residual(ctx, x, y)?, x, y))
    });
    if ctx.is_radon() {
        VerifyReport::below("polar_coordinates", &w, 1e-6)
    } else {
        VerifyReport::above("polar_coordinates_violation", &w, 1e-3)
    }
}

/// `|y - cm(u,y) u - cm(w,y) w|` for the norm-unit conjugate frame `(u, w)`.
pub fn conjugate_expansion_residual(ctx: &PlaneContext, z: Vec2, y: Vec2) -> Result<f64> {
    let (u, w) = conjugate_pair(ctx, z)?.frame();
    ctx.norm(y - u * cm(ctx, u, y)? - w * cm(ctx, w, y)?)
}

pub fn check_conjugate_expansion(ctx: &PlaneContext, rng: &mut impl Rng, n: usize) -> VerifyReport {
    let w = sweep(n, |_| {
        let (z, y) = (random_unit(ctx, rng), random_unit(ctx, rng));
        Ok((conjugate_expansion_residual(ctx, z, y)?, z, y))
    });
    VerifyReport::below("conjugate_expansion", &w, 1e-6)
}

pub fn check_cm_symmetry(ctx: &PlaneContext, rng: &mut impl Rng, n: usize) -> VerifyReport {
    let w = sweep(n, |_| {
        let (x, y) = (random_unit(ctx, rng), random_unit(ctx, rng));
        Ok(((cm(ctx, x, y)? - cm(ctx, y, x)?).abs(), x, y))
    });
    match known_euclidean(ctx.spec()) {
        Some(true) => VerifyReport::below("cm_symmetry", &w, 1e-9),
        Some(false) => VerifyReport::above("cm_asymmetry_witness", &w, 1e-2),
        None => VerifyReport::new("cm_symmetry_decisive", w.value < 1e-6 || w.value > 1e-2, w.value, w.witness),
    }
}

pub fn check_sign_symmetry(ctx: &PlaneContext, rng: &mut impl Rng, n: usize) -> VerifyReport {
    let mut most_negative = Worst::default();
    for _ in 0..n {
        let (x, y) = (random_unit(ctx, rng), random_unit(ctx, rng));
        match (cm(ctx, x, y), cm(ctx, y, x)) {
            (Ok(a), Ok(b)) => most_negative.push(-(a * b), x, y),
            _ => most_negative.push(f64::NAN, x, y),
        }
    }
    // residual reported as the most negative product
    let min_product = -most_negative.value;
    let w = Worst { value: min_product, witness: most_negative.witness };
    if ctx.is_radon() {
        VerifyReport::new("cm_sign_symmetry", min_product >= -1e-12, min_product, w.witness)
    } else {
        VerifyReport::new("cm_sign_violation", min_product < -1e-3, min_product, w.witness)
    }
}

pub fn check_gateaux(ctx: &PlaneContext, rng: &mut impl Rng, n: usize) -> VerifyReport {
    let w = sweep(n, |_| {
        let (x, y) = (random_vector(ctx, rng), random_vector(ctx, rng));
        let (nx, ny) = (ctx.norm(x)?, ctx.norm(y)?);
        Ok(((gateaux(ctx, x, y)? - nx * ny * cm(ctx, x, y)?).abs() / (nx * ny), x, y))
    });
    VerifyReport::below("gateaux", &w, 1e-5)
}

pub fn check_equilateral(ctx: &PlaneContext, rng: &mut impl Rng, n: usize) -> Vec<VerifyReport> {
    let (mut cms, mut cas) = (Worst::default(), Worst::default());
    for _ in 0..n {
        let x = random_unit(ctx, rng);
        let r = equilateral_triangle(ctx, x).and_then(|(y, z)| {
            let a = cm(ctx, x, y)? + cm(ctx, x, z)?;
            let b = ca(ctx, x, y)? + ca(ctx, x, z)? + ca(ctx, y, -z)?;
            Ok(((a - 1.0).abs(), (b - 1.5).abs(), y))
        });
        match r {
            Ok((a, b, y)) => {
                cms.push(a, x, y);
                cas.push(b, x, y);
            }
            Err(_) => {
                cms.push(f64::NAN, x, x);
                cas.push(f64::NAN, x, x);
            }
        }
    }
    vec![
        VerifyReport::below("equilateral_cm_sum", &cms, 1e-6),
        VerifyReport::below("equilateral_ca_sum", &cas, 1e-6),
    ]
}

pub fn check_isosceles(ctx: &PlaneContext, rng: &mut impl Rng, n: usize) -> VerifyReport {
    let w = sweep(n, |_| {
        let (x, y) = random_independent_pair(ctx, rng);
        let z = left_orthogonal_unit(ctx, y - x)?;
        Ok(((cm(ctx, z, x)? - cm(ctx, z, y)?).abs(), x, y))
    });
    VerifyReport::below("isosceles_altitude", &w, 1e-7)
}

pub fn check_busemann(ctx: &PlaneContext, rng: &mut impl Rng, n: usize) -> VerifyReport {
    let w = sweep(n, |_| {
        let (x, y) = random_independent_pair(ctx, rng);
        let z = ctx.unit(busemann_ray(x, y, ctx)?)?;
        Ok(((cm(ctx, z, x)? + cm(ctx, z, y)? - ctx.norm(x + y)?).abs(), x, y))
    });
    VerifyReport::below("busemann_identity", &w, 1e-7)
}

pub fn check_pythagorean(ctx: &PlaneContext, rng: &mut impl Rng, n: usize) -> Vec<VerifyReport> {
    let mut out = Vec::new();
    if ctx.is_radon() {
        let w = sweep(n, |_| {
            let (x, z) = (random_unit(ctx, rng), random_unit(ctx, rng));
            let bz = birkhoff_b(ctx, z)?;
            Ok(((cn(ctx, x, z)?.powi(2) + cn(ctx, x, bz)?.powi(2) - 1.0).abs(), x, z))
        });
        out.push(VerifyReport::below("pythagorean_cn", &w, 1e-6));
    }
    let w = sweep(n, |_| {
        let (x, z) = (random_unit(ctx, rng), random_unit(ctx, rng));
        let pair = conjugate_pair(ctx, z)?;
        let (u, v) = (pair.u, pair.v);
        let s = cm(ctx, x, u)? * cm(ctx, u, x)? + cm(ctx, x, v)? * cm(ctx, v, x)?;
        Ok(((s - 1.0).abs(), x, u))
    });
    out.push(VerifyReport::below("pythagorean_conjugate", &w, 1e-6));
    out
}

pub fn trig_suite(ctx: &PlaneContext, opts: VerifyOptions) -> Vec<VerifyReport> {
    let n = opts.samples;
    let r = |name: &str| check_rng(opts.seed, name);
    let mut out = vec![
        check_cm_bounds(ctx, &mut r("cm_bounds"), n),
        check_cm_equivalence(ctx, &mut r("cm_equivalence"), n),
        check_polar_coordinates(ctx, &mut r("polar"), n),
        check_conjugate_expansion(ctx, &mut r("conjugate"), n),
        check_cm_symmetry(ctx, &mut r("symmetry"), n),
        check_sign_symmetry(ctx, &mut r("sign"), n),
        check_gateaux(ctx, &mut r("gateaux"), n),
    ];
    out.extend(check_equilateral(ctx, &mut r("equilateral"), n));
    out.push(check_isosceles(ctx, &mut r("isosceles"), n));
    out.push(check_busemann(ctx, &mut r("busemann"), n));
    out.extend(check_pythagorean(ctx, &mut r("pythagorean"), n));
    out
}

// ---- distortion ----

pub fn check_gamma_lemma(ctx: &PlaneContext, rng: &mut impl Rng, n: usize) -> Vec<VerifyReport> {
    let (mut recip, mut central, mut radii) = (Worst::default(), Worst::default(), Worst::default());
    for _ in 0..n {
        let (x, y) = random_independent_pair(ctx, rng);
        let r = (|| -> Result<(f64, f64, f64)> {
            let g = inscribed_circle(ctx, x, y, 1.0)?.gamma;
            let a = (g * gamma_pair(ctx, y, x)? - 1.0).abs();
            let b = (g - gamma_pair(ctx, -x, -y)?).abs();
            let c = (g - inscribed_circle(ctx, x, y, 3.0)?.gamma).abs();
            Ok((a, b, c))
        })();
        let (a, b, c) = r.unwrap_or((f64::NAN, f64::NAN, f64::NAN));
        recip.push(a, x, y);
        central.push(b, x, y);
        radii.push(c, x, y);
    }
    vec![
        VerifyReport::below("gamma_reciprocal", &recip, 1e-7),
        VerifyReport::below("gamma_central_symmetry", &central, 1e-7),
        VerifyReport::below("gamma_inscribed_independence", &radii, 1e-7),
    ]
}

pub fn check_point_vs_pair(ctx: &PlaneContext, rng: &mut impl Rng, n: usize) -> VerifyReport {
    let w = sweep(n, |_| {
        let p = random_exterior(ctx, rng);
        let t = tangent_points(ctx, p, EXTERIOR_TOL)?;
        let g = gamma_pair(ctx, t.q1 - p, t.q2 - p)?;
        Ok(((t.len1 / t.len2 - g).abs(), p, t.q1))
    });
    VerifyReport::below("gamma_point_vs_pair", &w, 1e-6)
}

pub fn check_radon_formula(ctx: &PlaneContext, rng: &mut impl Rng, n: usize) -> Vec<VerifyReport> {
    let (mut diff, mut neg) = (Worst::default(), Worst::default());
    for _ in 0..n {
        let (x, y) = random_independent_pair(ctx, rng);
        let r = (|| -> Result<(f64, f64)> {
            let d = (gamma_pair(ctx, x, y)? - radon_gamma_formula(ctx, x, y)?).abs();
            let m = cm(ctx, x, x + y)?.min(cm(ctx, y, x + y)?);
            Ok((d, -m))
        })();
        let (d, m) = r.unwrap_or((f64::NAN, f64::NAN));
        diff.push(d, x, y);
        neg.push(m, x, y);
    }
    vec![
        VerifyReport::below("radon_gamma_formula", &diff, 1e-6),
        VerifyReport::below("radon_gamma_factors_nonnegative", &neg, 1e-12),
    ]
}

/// Largest `|γ - 1|` at the smallest probe distance, and whether `|γ - 1|`
/// decreases along the probe list, near `x` and near `-x`.
pub fn limit_profile(ctx: &PlaneContext, x: Vec2) -> Result<(f64, bool)> {
    let probe = gamma_limit_probe(ctx, x, &LIMIT_EPS)?;
    let dec = |f: &dyn Fn(&crate::distortion::LimitSample) -> f64| {
        probe.windows(2).all(|w| (f(&w[1]) - 1.0).abs() < (f(&w[0]) - 1.0).abs() || (f(&w[1]) - 1.0).abs() < LIMIT_NOISE_FLOOR)
    };
    let last = probe.last().map(|s| (s.near - 1.0).abs().max((s.antipodal - 1.0).abs())).unwrap_or(0.0);
    Ok((last, dec(&|s| s.near) && dec(&|s| s.antipodal)))
}

pub fn check_limits(ctx: &PlaneContext, rng: &mut impl Rng, n: usize) -> VerifyReport {
    let mut w = Worst::default();
    let mut monotone = true;
    for _ in 0..n {
        let x = random_unit(ctx, rng);
        match limit_profile(ctx, x) {
            Ok((last, dec)) => {
                if !dec && monotone {
                    monotone = false;
                    w.push(f64::INFINITY, x, x);
                }
                w.push(last, x, x);
            }
            Err(_) => w.push(f64::NAN, x, x),
        }
    }
    VerifyReport::new("gamma_limits", monotone && w.value.is_finite(), w.value, w.witness)
}

/// Tangent directions `b(q1), b(q2)` at two random circle points, resampled
/// until the tangent lines meet at a finite angle.
pub fn random_meeting_tangents(ctx: &PlaneContext, rng: &mut impl Rng) -> (Vec2, Vec2) {
    loop {
        let (q1, q2) = random_independent_pair(ctx, rng);
        if let (Ok(t1), Ok(t2)) = (birkhoff_b(ctx, q1), birkhoff_b(ctx, q2)) {
            if t1.cross(t2).abs() >= MIN_SEPARATION * t1.euclid_len() * t2.euclid_len() {
                return (t1, t2);
            }
        }
    }
}

pub fn check_parallel_chords(ctx: &PlaneContext, rng: &mut impl Rng, n: usize) -> Vec<VerifyReport> {
    let (mut par, mut col) = (Worst::default(), Worst::default());
    for _ in 0..n {
        let (t1, t2) = random_meeting_tangents(ctx, rng);
        match parallel_chords(ctx, t1, t2) {
            Ok(c) => {
                par.push(c.defect, t1, t2);
                col.push(c.collinearity, t1, t2);
            }
            Err(_) => {
                par.push(f64::NAN, t1, t2);
                col.push(f64::NAN, t1, t2);
            }
        }
    }
    if ctx.is_radon() {
        vec![
            VerifyReport::below("parallel_chords", &par, 1e-6),
            VerifyReport::below("bisector_collinearity", &col, 1e-6),
        ]
    } else {
        vec![VerifyReport::above("bisector_collinearity_violation", &col, 1e-3)]
    }
}

pub fn check_orthogonal_gamma(ctx: &PlaneContext, rng: &mut impl Rng, n: usize) -> VerifyReport {
    let w = sweep(n, |_| {
        let x = random_unit(ctx, rng);
        let y = birkhoff_b(ctx, x)?;
        Ok(((gamma_pair(ctx, x, y)? - 1.0).abs(), x, y))
    });
    if ctx.is_radon() {
        VerifyReport::below("gamma_orthogonal_pairs", &w, 1e-6)
    } else {
        VerifyReport::above("gamma_orthogonal_violation", &w, 1e-3)
    }
}

pub fn check_euclidean_gamma(ctx: &PlaneContext, rng: &mut impl Rng, n: usize) -> VerifyReport {
    let w = sweep(n, |_| {
        let p = random_exterior(ctx, rng);
        let t = tangent_points(ctx, p, EXTERIOR_TOL)?;
        Ok(((t.len1 / t.len2 - 1.0).abs(), p, t.q1))
    });
    VerifyReport::below("gamma_identically_one", &w, 1e-8)
}

pub fn check_mixed_apex(ctx: &PlaneContext, p: f64) -> VerifyReport {
    let c = mixed_configuration(p);
    let g = tangent_points(ctx, c.apex, EXTERIOR_TOL).map(|t| t.len1 / t.len2);
    let r = g.map(|g| (g - mixed_gamma_closed_form(p).abs()).abs()).unwrap_or(f64::NAN);
    VerifyReport::new("mixed_apex_gamma", r <= 1e-6, r, [c.apex, c.a])
}

pub fn distortion_suite(ctx: &PlaneContext, opts: VerifyOptions) -> Vec<VerifyReport> {
    let n = opts.samples;
    let r = |name: &str| check_rng(opts.seed, name);
    let mut out = check_gamma_lemma(ctx, &mut r("gamma_lemma"), n);
    out.push(check_point_vs_pair(ctx, &mut r("point_vs_pair"), n));
    out.push(check_orthogonal_gamma(ctx, &mut r("orthogonal_gamma"), n));
    out.extend(check_parallel_chords(ctx, &mut r("chords"), n));
    if ctx.is_radon() {
        out.extend(check_radon_formula(ctx, &mut r("radon_formula"), n));
        out.push(check_limits(ctx, &mut r("limits"), n.min(16)));
    }
    if let NormSpec::MixedLpLq { p } = *ctx.spec() {
        out.push(check_mixed_apex(ctx, p));
    }
    if known_euclidean(ctx.spec()) == Some(true) {
        out.push(check_euclidean_gamma(ctx, &mut r("euclidean_gamma"), n));
    }
    out
}

// ---- calculus ----

pub fn check_d_ds(ctx: &PlaneContext, arc: &ArcParam, rng: &mut impl Rng, n: usize) -> VerifyReport {
    let w = sweep(n, |_| {
        let (x, y) = (random_unit(ctx, rng), random_unit(ctx, rng));
        let (a, b) = d_ds_identities_with(ctx, arc, x, y)?;
        Ok((a.max(b), x, y))
    });
    VerifyReport::below("d_ds_identities", &w, 1e-5)
}

/// `(min ρ, max ρ)` over `n` uniformly spaced arc-length values.
pub fn rho_range(ctx: &PlaneContext, arc: &ArcParam, n: usize) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for k in 0..n {
        let r = rho_with(ctx, arc, arc.total * (k as f64 + 0.5) / n as f64)?;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    Ok((lo, hi))
}

pub fn check_rho(ctx: &PlaneContext, arc: &ArcParam, n: usize) -> VerifyReport {
    let (lo, hi) = rho_range(ctx, arc, n).unwrap_or((f64::NAN, f64::NAN));
    let none = [Vec2::ZERO; 2];
    match known_euclidean(ctx.spec()) {
        Some(true) => {
            let dev = (hi - 1.0).abs().max((lo - 1.0).abs());
            VerifyReport::new("rho_constant", dev <= 1e-5, dev, none)
        }
        Some(false) => VerifyReport::new("rho_nonconstant", hi - lo > 0.01, hi - lo, none),
        None => VerifyReport::new("rho_spread_decisive", hi - lo < 1e-5 || hi - lo > 0.01, hi - lo, none),
    }
}

pub fn check_ode(ctx: &PlaneContext, function: OdeFunction, grid: usize) -> VerifyReport {
    let name = match function {
        OdeFunction::SnFromX0 => "ode_sn",
        OdeFunction::CmFromX0 => "ode_cm",
    };
    match ode_residual(ctx, function, grid) {
        Ok(r) => VerifyReport::new(
            name,
            r.max_residual < 1e-3 && r.initial_ok,
            r.max_residual,
            [Vec2::new(r.worst_s, 0.0), Vec2::new(r.f0, r.df0)],
        ),
        Err(_) => VerifyReport::new(name, false, f64::NAN, [Vec2::ZERO; 2]),
    }
}

/// Polar angle of `b(γ)` along the table: nondecreasing with total
/// winding one turn, so the tangent map traverses the whole circle.
pub fn b_winding(ctx: &PlaneContext) -> (bool, f64) {
    let t = ctx.circle_table();
    let mut last = t[0].tangent.angle();
    let start = last;
    let mut monotone = true;
    for c in t.iter().skip(1).chain(std::iter::once(&t[0])) {
        let mut a = c.tangent.angle();
        while a < last - PI {
            a += TAU;
        }
        if a < last {
            monotone = false;
        }
        last = a;
    }
    (monotone, ((last - start) / TAU - 1.0).abs())
}

pub fn calculus_suite(ctx: &PlaneContext, opts: VerifyOptions) -> Vec<VerifyReport> {
    let none = [Vec2::ZERO; 2];
    let arc = match ArcParam::new(ctx, ArcKind::NormLength) {
        Ok(a) => a,
        Err(_) => return vec![VerifyReport::new("arc_parameter", false, f64::NAN, none)],
    };
    let mut out = vec![
        check_d_ds(ctx, &arc, &mut check_rng(opts.seed, "d_ds"), opts.samples.min(64)),
        check_rho(ctx, &arc, 512),
    ];
    let a = area_param_check(ctx);
    out.push(VerifyReport::new("area_step_vs_antinorm_step", a.max_step_diff <= 1e-7, a.max_step_diff, none));
    if let Some(c) = a.coincidence {
        out.push(VerifyReport::new("parameters_coincide", c <= 1e-5, c, none));
    }
    let shoelace = shoelace_area2(ctx);
    let rel = (a.total_area2 - shoelace).abs() / shoelace;
    out.push(VerifyReport::new("area_vs_shoelace", rel <= 1e-7, rel, none));
    let speed = norm_speed_defect(ctx).unwrap_or(f64::NAN);
    out.push(VerifyReport::new("norm_length_speed", speed <= 1e-6, speed, none));
    if ctx.is_radon() {
        let (monotone, wind) = b_winding(ctx);
        out.push(VerifyReport::new("b_traverses_circle", monotone && wind < 1e-9, wind, none));
        out.push(check_ode(ctx, OdeFunction::SnFromX0, 2000));
        out.push(check_ode(ctx, OdeFunction::CmFromX0, 2000));
    }
    out
}

// ---- Birkhoff map ----

pub fn check_b_map(ctx: &PlaneContext, rng: &mut impl Rng, n: usize) -> Vec<VerifyReport> {
    let (mut sym, mut hom, mut anti, mut ortho, mut sq) =
        (Worst::default(), Worst::default(), Worst::default(), Worst::default(), Worst::default());
    for _ in 0..n {
        let x = random_unit(ctx, rng);
        let r = (|| -> Result<[f64; 5]> {
            let b = birkhoff_b(ctx, x)?;
            let s = (ctx.symplectic(x, b) - 1.0).abs();
            let h = (birkhoff_b(ctx, x * 2.0)? - b)
                .euclid_len()
                .max((birkhoff_b(ctx, -x)? + b).euclid_len())
                .max((birkhoff_b(ctx, x * 0.3)? - b).euclid_len());
            let a = (ctx.antinorm(b)? - 1.0).abs();
            let o = birkhoff_defect(ctx, x, b)?;
            let q = if ctx.is_radon() {
                (birkhoff_b(ctx, b)? + x / ctx.antinorm(x)?).euclid_len()
            } else {
                0.0
            };
            Ok([s, h, a, o, q])
        })();
        let v = r.unwrap_or([f64::NAN; 5]);
        sym.push(v[0], x, x);
        hom.push(v[1], x, x);
        anti.push(v[2], x, x);
        ortho.push(v[3], x, x);
        sq.push(v[4], x, x);
    }
    let mut out = vec![
        VerifyReport::below("b_symplectic_unit", &sym, 1e-8),
        VerifyReport::below("b_homogeneous_odd", &hom, 1e-10),
        VerifyReport::below("b_antinorm_unit", &anti, 1e-9),
        VerifyReport::below("b_birkhoff_oracle", &ortho, 1e-9),
    ];
    if ctx.is_radon() {
        out.push(VerifyReport::below("b_squared", &sq, 1e-6));
    }
    out
}

pub fn radon_suite(ctx: &PlaneContext, opts: VerifyOptions) -> Vec<VerifyReport> {
    let mut probe = is_radon(ctx, RADON_PROBE_SAMPLES, RADON_DEFECT_MAX);
    probe.check = format!("radon:{:?}", ctx.radon_flag());
    let mut out = vec![probe];
    if ctx.is_radon() {
        let dev = ctx.antinorm_deviation();
        out.push(VerifyReport::new("antinorm_equals_norm", dev < 1e-6, dev, [Vec2::ZERO; 2]));
    }
    out.extend(check_b_map(ctx, &mut check_rng(opts.seed, "b_map"), opts.samples));
    out
}

/// Runs one suite. The `all` suite replaces the raw Radon probe with a check
/// that the classification is decisive, so non-Radon planes can pass it.
pub fn run_suite(ctx: &PlaneContext, suite: Suite, opts: VerifyOptions) -> Vec<VerifyReport> {
    match suite {
        Suite::Trig => trig_suite(ctx, opts),
        Suite::Distortion => distortion_suite(ctx, opts),
        Suite::Calculus => calculus_suite(ctx, opts),
        Suite::Radon => radon_suite(ctx, opts),
        Suite::All => {
            let flag = ctx.radon_flag();
            let mut out = vec![VerifyReport::new(
                "radon_classification",
                flag != RadonFlag::Unknown,
                ctx.radon_defect(),
                [Vec2::ZERO; 2],
            )];
            let mut radon = radon_suite(ctx, opts);
            radon.remove(0);
            out.extend(radon);
            out.extend(trig_suite(ctx, opts));
            out.extend(distortion_suite(ctx, opts));
            out.extend(calculus_suite(ctx, opts));
            out
        }
    }
}
