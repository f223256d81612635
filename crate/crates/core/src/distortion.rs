//! Tangent segments from exterior points, the outer distortion functional
//! `γ`, angular bisectors and the parallel-chords construction.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::birkhoff::{birkhoff_b, left_orthogonal_unit};
use crate::calculus::{param_point, ArcKind, ArcParam};
use crate::context::PlaneContext;
use crate::error::{domain, Error, Result};
use crate::oracles::bisect;
use crate::trig::{cm, sn};
use crate::vec2::Vec2;

/// Points closer than this to the unit circle are rejected by default.
pub const EXTERIOR_TOL: f64 = 1e-9;
/// Points with `|p| < 1 + LOW_ACCURACY_MARGIN` are accepted but flagged.
pub const LOW_ACCURACY_MARGIN: f64 = 1e-6;
/// `|[x̂, ŷ]|` below this counts as linearly dependent.
pub const DEPENDENCE_TOL: f64 = 1e-12;
/// Bisection range for the center of the inscribed circle along the chord
/// between the two unit directions.
const CENTER_RANGE: (f64, f64) = (1e-6, 1.0 - 1e-6);

/// The two tangent lines from an exterior point to the unit circle.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TangentPair {
    pub p: Vec2,
    /// First tangency point counterclockwise from the direction of `p`.
    pub q1: Vec2,
    pub q2: Vec2,
    pub len1: f64,
    pub len2: f64,
    /// `|p|` is within `1e-6` of the circle; lengths lose accuracy.
    pub low_accuracy: bool,
}

/// Unit normal at grid index `k` of `n` directions, exact on the axes.
fn grid_normal(k: usize, n: usize) -> Vec2 {
    if (4 * k).is_multiple_of(n) {
        match (4 * k / n) % 4 {
            0 => Vec2::new(1.0, 0.0),
            1 => Vec2::new(0.0, 1.0),
            2 => Vec2::new(-1.0, 0.0),
            _ => Vec2::new(0.0, -1.0),
        }
    } else {
        Vec2::from_angle(TAU * k as f64 / n as f64)
    }
}

/// Tangency points of the tangent lines through `p`.
///
/// Supporting lines are parameterized by their outer normal `n`; the line
/// passes through `p` where `<n, p> - h(n)` vanishes, `h` being the support
/// function. Sign changes over a grid of normals (which contains the axis
/// directions exactly) are refined by bisection and the tangency point is the
/// contact point of the supporting line. Near flat stretches of the circle the
/// contact point is far better conditioned in this parameterization than as a
/// root in polar angle.
pub fn tangent_points(ctx: &PlaneContext, p: Vec2, tol: f64) -> Result<TangentPair> {
    let np = ctx.norm(p)?;
    if !(np > 1.0 + tol) {
        return domain(format!("point {p} with norm {np} is not outside the unit circle"));
    }
    let m = ctx.model();
    let f = |n: Vec2| n.dot(p) - m.support(n);
    let count = ctx.circle_table().len();
    let vals: Vec<f64> = (0..count).map(|k| f(grid_normal(k, count))).collect();
    let mut normals = Vec::with_capacity(2);
    for k in 0..count {
        let (a, b) = (vals[k], vals[(k + 1) % count]);
        if a == 0.0 {
            normals.push(grid_normal(k, count));
        } else if b != 0.0 && (a > 0.0) != (b > 0.0) {
            let t0 = TAU * k as f64 / count as f64;
            let t = bisect(|t| f(Vec2::from_angle(t)), t0, t0 + TAU / count as f64)?;
            normals.push(Vec2::from_angle(t));
        }
    }
    if normals.len() != 2 {
        return Err(Error::Numerical(format!(
            "expected two tangency points from {p}, found {}",
            normals.len()
        )));
    }
    let phi = p.angle();
    let mut qs: Vec<Vec2> = normals.iter().map(|&n| m.contact_point(n)).collect();
    qs.sort_by(|a, b| {
        let da = (a.angle() - phi).rem_euclid(TAU);
        let db = (b.angle() - phi).rem_euclid(TAU);
        da.total_cmp(&db)
    });
    let (q1, q2) = (qs[0], qs[1]);
    Ok(TangentPair {
        p,
        q1,
        q2,
        len1: ctx.norm(p - q1)?,
        len2: ctx.norm(p - q2)?,
        low_accuracy: np < 1.0 + LOW_ACCURACY_MARGIN,
    })
}

/// Ratio `len1 / len2` of the tangent segments from `p`.
pub fn gamma_from_point(ctx: &PlaneContext, p: Vec2) -> Result<f64> {
    let t = tangent_points(ctx, p, EXTERIOR_TOL)?;
    Ok(t.len1 / t.len2)
}

/// Foot of the perpendicular in the Birkhoff sense: the `t` minimizing
/// `|t x - v|`, where `(t x - v) ⊣_B x`. The circle `v + dB` with `d` the
/// distance to the line touches it at its support point for the line's
/// normal. Returns `(t, |t x - v|)`.
pub fn foot(ctx: &PlaneContext, v: Vec2, x: Vec2) -> Result<(f64, f64)> {
    x.check_nonzero("foot direction")?;
    v.check_finite()?;
    let m = ctx.model();
    // normal of the line, pointing from v towards it
    let mut n = x.perp();
    let side = n.dot(v);
    if side > 0.0 {
        n = -n;
    }
    let d = side.abs() / m.support(n);
    let touch = v + m.contact_point(n) * d;
    Ok((touch.dot(x) / x.dot(x), d))
}

fn independent_units(ctx: &PlaneContext, x: Vec2, y: Vec2) -> Result<(Vec2, Vec2)> {
    let (xu, yu) = (ctx.unit(x)?, ctx.unit(y)?);
    if xu.cross(yu).abs() <= DEPENDENCE_TOL * xu.euclid_len() * yu.euclid_len() {
        return domain(format!("directions {x} and {y} are linearly dependent"));
    }
    Ok((xu, yu))
}

/// `cm(αx - v, v) - cm(βy - v, v)` for unit `x, y` and the feet `α, β`.
fn defect_unchecked(ctx: &PlaneContext, x: Vec2, y: Vec2, v: Vec2) -> Result<f64> {
    let (a, _) = foot(ctx, v, x)?;
    let (b, _) = foot(ctx, v, y)?;
    Ok(cm(ctx, x * a - v, v)? - cm(ctx, y * b - v, v)?)
}

/// Vanishes exactly when `v` lies on the Glogovskii bisector of the angle
/// spanned by the rays through `x` and `y`, i.e. when `v` is equidistant from
/// both rays.
pub fn glogovskii_defect(ctx: &PlaneContext, x: Vec2, y: Vec2, v: Vec2) -> Result<f64> {
    let (xu, yu) = independent_units(ctx, x, y)?;
    v.check_finite()?;
    // v = a xu + b yu with a, b > 0
    let det = xu.cross(yu);
    let (a, b) = (v.cross(yu) / det, xu.cross(v) / det);
    if !(a > 0.0 && b > 0.0) {
        return domain(format!("{v} is not inside the angle spanned by {x} and {y}"));
    }
    defect_unchecked(ctx, xu, yu, v)
}

fn distance_gap(ctx: &PlaneContext, x: Vec2, y: Vec2, v: Vec2) -> Result<f64> {
    Ok(foot(ctx, v, x)?.1 - foot(ctx, v, y)?.1)
}

/// A circle inscribed in the angle between two rays.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct InscribedCircle {
    pub x: Vec2,
    pub y: Vec2,
    pub center: Vec2,
    pub radius: f64,
    /// Touching parameter on the ray through `x` (the point is `foot_x * x`).
    pub foot_x: f64,
    pub foot_y: f64,
    /// `|foot_x x| / |foot_y y|`.
    pub gamma: f64,
}

/// Inscribed circle with center at norm distance `scale` from the origin.
/// The center is located on the segment between the unit directions by
/// bisection of the difference of its distances to the two rays.
pub fn inscribed_circle(ctx: &PlaneContext, x: Vec2, y: Vec2, scale: f64) -> Result<InscribedCircle> {
    if !(scale > 0.0 && scale.is_finite()) {
        return domain(format!("inscribed circle scale must be positive, got {scale}"));
    }
    let (xu, yu) = independent_units(ctx, x, y)?;
    let along = |tau: f64| xu * (1.0 - tau) + yu * tau;
    let mut err = None;
    let tau = bisect(
        |tau| match distance_gap(ctx, xu, yu, along(tau)) {
            Ok(d) => d,
            Err(e) => {
                err.get_or_insert(e);
                f64::NAN
            }
        },
        CENTER_RANGE.0,
        CENTER_RANGE.1,
    );
    if let Some(e) = err {
        return Err(e);
    }
    let v = along(tau?);
    let center = v * (scale / ctx.norm(v)?);
    let (fx, radius) = foot(ctx, center, xu)?;
    let (fy, _) = foot(ctx, center, yu)?;
    Ok(InscribedCircle {
        x: xu,
        y: yu,
        center,
        radius,
        foot_x: fx,
        foot_y: fy,
        gamma: ctx.norm(xu * fx)? / ctx.norm(yu * fy)?,
    })
}

/// Outer distortion `γ(x, y)`: ratio of the touching distances of a circle
/// inscribed in the angle between the rays through `x` and `y`.
pub fn gamma_pair(ctx: &PlaneContext, x: Vec2, y: Vec2) -> Result<f64> {
    Ok(inscribed_circle(ctx, x, y, 1.0)?.gamma)
}

/// `cm(x, x+y) / cm(y, x+y)` for unit `x, y`; equals `γ(x, y)` in Radon planes.
pub fn radon_gamma_formula(ctx: &PlaneContext, x: Vec2, y: Vec2) -> Result<f64> {
    if !ctx.is_radon() {
        return Err(Error::Unsupported("the cosine formula for γ needs a Radon plane".into()));
    }
    let (xu, yu) = independent_units(ctx, x, y)?;
    Ok(cm(ctx, xu, xu + yu)? / cm(ctx, yu, xu + yu)?)
}

/// `x/|x| + y/|y|`, spanning the Busemann bisector.
pub fn busemann_ray(x: Vec2, y: Vec2, ctx: &PlaneContext) -> Result<Vec2> {
    let (xu, yu) = independent_units(ctx, x, y)?;
    Ok(xu + yu)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct LimitSample {
    pub eps: f64,
    /// `γ(x, y)` with `y` at arc length `eps` past `x`.
    pub near: f64,
    /// `γ(x, y)` with `y` at arc length `eps` past `-x`.
    pub antipodal: f64,
}

/// `γ(x, y_ε)` as `y_ε` approaches `x` and `-x` along the circle.
pub fn gamma_limit_probe(ctx: &PlaneContext, x: Vec2, eps_list: &[f64]) -> Result<Vec<LimitSample>> {
    let arc = ArcParam::new(ctx, ArcKind::NormLength)?;
    let xu = ctx.unit(x)?;
    let sx = arc.param_of_theta(ctx, xu.angle())?;
    eps_list
        .iter()
        .map(|&eps| {
            let near = param_point(ctx, &arc, sx + eps)?;
            let far = param_point(ctx, &arc, sx + 0.5 * arc.total + eps)?;
            Ok(LimitSample {
                eps,
                near: gamma_pair(ctx, xu, near)?,
                antipodal: gamma_pair(ctx, xu, far)?,
            })
        })
        .collect()
}

/// All points of the parallel-chords construction for two tangent directions.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ParallelChords {
    pub p: Vec2,
    pub q1: Vec2,
    pub q2: Vec2,
    pub b1: Vec2,
    pub b2: Vec2,
    pub b: Vec2,
    pub c1: Vec2,
    pub c2: Vec2,
    /// `|sn(q1 - q2, c1 - c2)|`.
    pub defect: f64,
    /// `|sn(p, b)|`: zero when `p`, the origin and `b` are collinear.
    pub collinearity: f64,
}

fn line_meet(a: Vec2, da: Vec2, b: Vec2, db: Vec2) -> Result<Vec2> {
    // a + s da = b + t db
    let den = da.cross(db);
    if den.abs() <= DEPENDENCE_TOL * da.euclid_len() * db.euclid_len() {
        return domain("construction lines are parallel");
    }
    Ok(a + da * ((b - a).cross(db) / den))
}

/// Tangent lines along `t1` and `t2` touch the circle at `q1, q2` and meet at
/// `p`. With `b_i` the unit vectors along `q_i - p` and `b` the unit vector
/// along `b1 + b2`, the line through `b` parallel to the supporting line at
/// `b_i` meets the line through `±b_i` at `c_i`.
pub fn parallel_chords(ctx: &PlaneContext, t1: Vec2, t2: Vec2) -> Result<ParallelChords> {
    independent_units(ctx, t1, t2)?;
    let q1 = left_orthogonal_unit(ctx, t1)?;
    let q2 = left_orthogonal_unit(ctx, t2)?;
    let p = line_meet(q1, t1, q2, t2)?;
    let b1 = ctx.unit(q1 - p)?;
    let b2 = ctx.unit(q2 - p)?;
    let b = ctx.unit(b1 + b2)?;
    let c1 = line_meet(b, birkhoff_b(ctx, b1)?, Vec2::ZERO, b1)?;
    let c2 = line_meet(b, birkhoff_b(ctx, b2)?, Vec2::ZERO, b2)?;
    Ok(ParallelChords {
        p,
        q1,
        q2,
        b1,
        b2,
        b,
        c1,
        c2,
        defect: sn(ctx, q1 - q2, c1 - c2)?.abs(),
        collinearity: sn(ctx, p, b)?.abs(),
    })
}

/// Parallelism defect of the construction; only meaningful in Radon planes.
pub fn parallel_chords_check(ctx: &PlaneContext, t1: Vec2, t2: Vec2) -> Result<f64> {
    if !ctx.is_radon() {
        return Err(Error::Unsupported("the parallel-chords property needs a Radon plane".into()));
    }
    Ok(parallel_chords(ctx, t1, t2)?.defect)
}

/// Configuration in the mixed `l_p`-`l_q` plane: tangents at
/// `a = (-2^{-1/q}, 2^{-1/q})` and `b = (0, 1)` meet at the apex
/// `c = (1 - 2^{1-1/q}, 1)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MixedConfiguration {
    pub p: f64,
    pub apex: Vec2,
    pub a: Vec2,
    pub b: Vec2,
}

pub fn mixed_configuration(p: f64) -> MixedConfiguration {
    let q = p / (p - 1.0);
    let s = 2f64.powf(-1.0 / q);
    MixedConfiguration {
        p,
        apex: Vec2::new(1.0 - 2f64.powf(1.0 - 1.0 / q), 1.0),
        a: Vec2::new(-s, s),
        b: Vec2::new(0.0, 1.0),
    }
}

/// `2^{1/p} (1 + 2^{-1/q} / (1 - 2^{1-1/q}))`. Its absolute value is the
/// tangent-length ratio at the mixed configuration's apex; the expression
/// itself is negative for every `p > 1`.
pub fn mixed_gamma_closed_form(p: f64) -> f64 {
    let q = p / (p - 1.0);
    2f64.powf(1.0 / p) * (1.0 + 2f64.powf(-1.0 / q) / (1.0 - 2f64.powf(1.0 - 1.0 / q)))
}

/// `2^{1/p} (1 - 2^{-1/q}) / (2^{1/p} - 1)`, the ratio `|c - a| / |c - b|`
/// computed by hand.
pub fn mixed_gamma_geometric(p: f64) -> f64 {
    let q = p / (p - 1.0);
    let r = 2f64.powf(1.0 / p);
    r * (1.0 - 2f64.powf(-1.0 / q)) / (r - 1.0)
}
