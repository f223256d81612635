//! Brute-force numerical routines: line minimization, circle suprema, finite
//! differences, bisection. They back the analytic fast paths in the other
//! modules and serve as independent cross-checks in tests.

use std::f64::consts::PI;

use crate::context::{require_unit, PlaneContext};
use crate::error::{Error, Result};
use crate::vec2::Vec2;

/// Iteration cap for golden-section search.
pub const GOLDEN_MAX_ITER: usize = 200;
/// Cap on bracket doublings in [`minimize_line`].
pub const BRACKET_MAX_DOUBLINGS: usize = 60;
/// Golden-section stops once the bracket is this fraction of its initial width.
pub const GOLDEN_REL_TOL: f64 = 1e-10;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Minimizer and minimum of a function of one variable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineMin {
    pub arg: f64,
    pub value: f64,
}

/// Golden-section search for the minimum of a unimodal `f` on `[a, b]`.
/// Returns `(argmin, min)`.
pub fn golden_section_min<F>(mut f: F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let tol = GOLDEN_REL_TOL * (b - a);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = finite(f(c), c)?;
    let mut fd = finite(f(d), d)?;
    for _ in 0..GOLDEN_MAX_ITER {
        if b - a <= tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = finite(f(c), c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = finite(f(d), d)?;
        }
    }
    Ok(if fc <= fd { (c, fc) } else { (d, fd) })
}

fn finite(v: f64, at: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Numerical(format!("objective is not finite at t = {at}")))
    }
}

/// Minimizes a convex `f` over the whole real line: the bracket is found by
/// doubling outward from 0, then refined by golden-section search.
pub fn minimize_line<F>(mut f: F) -> Result<LineMin>
where
    F: FnMut(f64) -> f64,
{
    let f0 = finite(f(0.0), 0.0)?;
    let (fp, fm) = (finite(f(1.0), 1.0)?, finite(f(-1.0), -1.0)?);
    // the minimizer lies on the side of the smaller neighbour
    let (dir, mut fprev) = if fp < f0 {
        (1.0, fp)
    } else if fm < f0 {
        (-1.0, fm)
    } else {
        let (arg, value) = golden_section_min(&mut f, -1.0, 1.0)?;
        return Ok(LineMin { arg, value });
    };
    // f(dir * back) >= f(dir * step) holds throughout
    let (mut back, mut step) = (0.0, 1.0);
    for _ in 0..BRACKET_MAX_DOUBLINGS {
        let next = 2.0 * step;
        let fnext = finite(f(dir * next), dir * next)?;
        if fnext >= fprev {
            let (a, b) = (dir * back, dir * next);
            let (arg, value) = golden_section_min(&mut f, a.min(b), a.max(b))?;
            return Ok(LineMin { arg, value });
        }
        back = step;
        step = next;
        fprev = fnext;
    }
    Err(Error::Numerical(format!(
        "no bracket for the line minimum after {BRACKET_MAX_DOUBLINGS} doublings"
    )))
}

/// Symmetric difference quotient `(f(t0 + h) - f(t0 - h)) / 2h`.
pub fn finite_diff<F: Fn(f64) -> f64>(f: F, t0: f64, h: f64) -> f64 {
    (f(t0 + h) - f(t0 - h)) / (2.0 * h)
}

/// Bisection for a sign change of `f` on `[a, b]`; `f(a)` and `f(b)` must
/// have opposite signs (zero counts as either). Runs to floating-point
/// resolution.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> Result<f64> {
    let (mut lo, mut hi) = (a, b);
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if !(flo.is_finite() && fhi.is_finite()) || flo.signum() == fhi.signum() {
        return Err(Error::Numerical(format!(
            "bisection bracket [{a}, {b}] has no sign change ({flo}, {fhi})"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Supremum of `h` over the unit circle: full table scan, then golden-section
/// refinement around the best sample. Returns `(polar angle, value)`.
pub fn sup_circle<F: Fn(Vec2) -> f64>(ctx: &PlaneContext, h: F) -> Result<(f64, f64)> {
    let table = ctx.circle_table();
    let (best, _) = table
        .iter()
        .enumerate()
        .map(|(i, c)| (i, h(c.point)))
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    let dt = std::f64::consts::TAU / table.len() as f64;
    let t = table[best].theta;
    let (arg, neg) = golden_section_min(|s| -h(ctx.circle_point(s)), t - dt, t + dt)?;
    Ok((arg, -neg))
}

/// Given a unit `x`, returns unit `y` with `|x - y| = 1` (found by bisection
/// in polar angle, counterclockwise from `x`) and `z = x - y`, so that
/// `x, y, z` are the sides of an equilateral triangle with `x = y + z`.
pub fn equilateral_triangle(ctx: &PlaneContext, x: Vec2) -> Result<(Vec2, Vec2)> {
    require_unit(ctx, x, "equilateral_triangle side", 1e-9)?;
    let base = x.angle();
    let gap = |phi: f64| ctx.norm(x - ctx.circle_point(base + phi)).map(|n| n - 1.0);
    // |x - y| runs from 0 at phi = 0 to 2 at phi = pi
    let phi = bisect(|phi| gap(phi).unwrap_or(f64::NAN), 0.0, PI)?;
    let y = ctx.circle_point(base + phi);
    Ok((y, x - y))
}

/// Twice the area of the unit ball by the shoelace formula over the table
/// polygon, Richardson-extrapolated against the half-resolution polygon.
pub fn shoelace_area2(ctx: &PlaneContext) -> f64 {
    let pts: Vec<Vec2> = ctx.circle_table().iter().map(|c| c.point).collect();
    let poly = |step: usize| -> f64 {
        let idx: Vec<usize> = (0..pts.len()).step_by(step).collect();
        idx.iter()
            .zip(idx.iter().cycle().skip(1))
            .map(|(&i, &j)| pts[i].cross(pts[j]))
            .sum::<f64>()
    };
    let (fine, coarse) = (poly(1), poly(2));
    ctx.omega_scale() * (4.0 * fine - coarse) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::NormSpec;
    use crate::PlaneContext;

    #[test]
    fn minimize_line_smooth() {
        let m = minimize_line(|t| (1.0 + t * t).sqrt()).unwrap();
        assert!(m.arg.abs() < 1e-7);
        assert!((m.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn minimize_line_kink_far_away() {
        let m = minimize_line(|t| (t - 3.0).abs() + 1.0).unwrap();
        assert!((m.arg - 3.0).abs() < 1e-9);
        assert!((m.value - 1.0).abs() < 1e-9);
        let m = minimize_line(|t| (t + 1000.0).abs()).unwrap();
        assert!((m.arg + 1000.0).abs() < 1e-6);
    }

    #[test]
    fn minimize_line_unbounded_is_an_error() {
        assert!(matches!(minimize_line(|t| -t), Err(Error::Numerical(_))));
        assert!(matches!(minimize_line(|_| f64::NAN), Err(Error::Numerical(_))));
    }

    #[test]
    fn finite_diff_square() {
        let d = finite_diff(|t| t * t, 1.0, 1e-6);
        assert!((d - 2.0).abs() < 1e-9);
    }

    #[test]
    fn bisect_finds_root() {
        let r = bisect(|t| t * t - 2.0, 0.0, 2.0).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
        assert!(bisect(|t| t * t + 1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn sup_circle_constant_and_linear() {
        let ctx = PlaneContext::new(NormSpec::Euclidean).unwrap();
        let (_, v) = sup_circle(&ctx, |_| 0.25).unwrap();
        assert_eq!(v, 0.25);
        let (t, v) = sup_circle(&ctx, |y| ctx.symplectic(y, Vec2::new(1.0, 0.0))).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        // [y, (1,0)] = -y.y is maximal at (0, -1)
        assert!((ctx.circle_point(t) - Vec2::new(0.0, -1.0)).euclid_len() < 1e-6);
    }

    #[test]
    fn equilateral_triangle_euclidean() {
        let ctx = PlaneContext::new(NormSpec::Euclidean).unwrap();
        let (y, z) = equilateral_triangle(&ctx, Vec2::new(1.0, 0.0)).unwrap();
        let s3 = 3f64.sqrt() / 2.0;
        assert!((y - Vec2::new(0.5, s3)).euclid_len() < 1e-12);
        assert!((z - Vec2::new(0.5, -s3)).euclid_len() < 1e-12);
    }

    #[test]
    fn equilateral_triangle_rejects_non_unit() {
        let ctx = PlaneContext::new(NormSpec::Euclidean).unwrap();
        assert!(equilateral_triangle(&ctx, Vec2::new(2.0, 0.0)).is_err());
    }
}
