//! Birkhoff orthogonality, the map `b`, conjugate pairs and the Radon probe.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::context::PlaneContext;
use crate::error::{Error, Result};
use crate::oracles::{bisect, minimize_line};
use crate::report::{VerifyReport, Worst};
use crate::vec2::Vec2;

/// `x ⊣_B y`: `min_λ |x + λy| >= |x| - tol`, by line search.
pub fn is_birkhoff(ctx: &PlaneContext, x: Vec2, y: Vec2, tol: f64) -> Result<bool> {
    x.check_nonzero("is_birkhoff x")?;
    y.check_nonzero("is_birkhoff y")?;
    let nx = ctx.norm(x)?;
    let m = minimize_line(|l| ctx.model().eval(x + y * l))?;
    Ok(m.value >= nx - tol)
}

/// Relative Birkhoff defect `(|x| - min_λ |x + λy|) / |x|`, zero iff `x ⊣_B y`.
pub fn birkhoff_defect(ctx: &PlaneContext, x: Vec2, y: Vec2) -> Result<f64> {
    x.check_nonzero("birkhoff_defect x")?;
    y.check_nonzero("birkhoff_defect y")?;
    let nx = ctx.norm(x)?;
    let m = minimize_line(|l| ctx.model().eval(x + y * l))?;
    Ok(((nx - m.value) / nx).max(0.0))
}

/// The tangent vector `b(x)` of unit antinorm with `x ⊣_B b(x)` and
/// `[x, b(x)] > 0`.
///
/// A quarter turn of the gradient `g` has antinorm `omega * |g|_*` and the
/// gradient has unit dual norm, so no search is needed.
pub fn birkhoff_b(ctx: &PlaneContext, x: Vec2) -> Result<Vec2> {
    let g = ctx.norm_gradient(x)?;
    Ok(g.perp() / ctx.omega_scale())
}

/// A conjugate pair: `u ⊣_B v`, `v ⊣_B u`, `|u| = 1`, `|v|_a = 1`, `[u, v] > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConjugatePair {
    pub u: Vec2,
    pub v: Vec2,
    /// `|v|` in the norm.
    pub v_norm: f64,
}

impl ConjugatePair {
    /// The pair rescaled to a basis of two norm-unit vectors.
    pub fn frame(&self) -> (Vec2, Vec2) {
        (self.u, self.v / self.v_norm)
    }
}

/// The unit vector `u` with outer normal at angle `phi`, and `cm(b(u), u)`
/// up to a positive factor; zero exactly when the tangent at `u` is Birkhoff
/// orthogonal back to `u`.
fn back_defect_normal(ctx: &PlaneContext, phi: f64) -> (Vec2, f64) {
    let m = ctx.model();
    let n = Vec2::from_angle(phi);
    let u = m.contact_point(n);
    (u, u.dot(m.gradient(n.perp())))
}

/// The same defect with `u` at polar angle `theta`.
fn back_defect_polar(ctx: &PlaneContext, theta: f64) -> f64 {
    let m = ctx.model();
    let u = ctx.circle_point(theta);
    u.dot(m.gradient(m.gradient(u).perp()))
}

/// Conjugacy error below which the Radon shortcut is taken as exact.
pub const CONJUGACY_TOL: f64 = 1e-12;

/// Sines of the angles by which `v ∥ b(u)` and `u ∥ b(v)` fail.
fn conjugacy_error(ctx: &PlaneContext, u: Vec2, v: Vec2) -> f64 {
    let m = ctx.model();
    let (gu, gv) = (m.gradient(u), m.gradient(v));
    (gu.dot(v) / (gu.euclid_len() * v.euclid_len())).abs() + (gv.dot(u) / (gv.euclid_len() * u.euclid_len())).abs()
}

/// Finds a conjugate pair by scanning counterclockwise from `x` for the first
/// sign change of `cm(b(u), u)` in the normal angle. The root is refined both
/// in the normal angle and in the polar angle (each is ill-conditioned where
/// the other is not: near infinite and near vanishing curvature) and the
/// better pair is kept. In a Radon plane `(x/|x|, b(x))` is returned directly
/// when it is conjugate to rounding accuracy.
pub fn conjugate_pair(ctx: &PlaneContext, x: Vec2) -> Result<ConjugatePair> {
    let u0 = ctx.unit(x)?;
    let mut shortcut = None;
    if ctx.is_radon() {
        let pair = pair_at(ctx, u0)?;
        let e = conjugacy_error(ctx, pair.u, pair.v);
        if e <= CONJUGACY_TOL {
            return Ok(pair);
        }
        // a tabulated norm is Radon only up to its resolution
        shortcut = Some((e, pair.u, pair.v));
    }
    let p0 = ctx.norm_gradient(u0)?.angle();
    let n = ctx.circle_table().len();
    let dt = TAU / n as f64;
    let mut prev = back_defect_normal(ctx, p0).1;
    if prev == 0.0 {
        return pair_at(ctx, u0);
    }
    for k in 1..=n {
        let t = p0 + k as f64 * dt;
        let cur = back_defect_normal(ctx, t).1;
        if cur == 0.0 || cur.signum() != prev.signum() {
            let phi = bisect(|s| back_defect_normal(ctx, s).1, t - dt, t)?;
            let m = ctx.model();
            let mut us = vec![m.contact_point(Vec2::from_angle(phi))];
            // the polar-angle root lies between the contact points of the bracket
            let a = m.contact_point(Vec2::from_angle(t - dt)).angle();
            let mut b = m.contact_point(Vec2::from_angle(t)).angle();
            while b < a {
                b += TAU;
            }
            if back_defect_polar(ctx, a).signum() != back_defect_polar(ctx, b).signum() {
                us.push(ctx.circle_point(bisect(|s| back_defect_polar(ctx, s), a, b)?));
            }
            let mut best: Option<(f64, Vec2, Vec2)> = shortcut;
            for u in us {
                // v = b(u), or the point whose normal is a quarter turn of u
                let c = m.contact_point(u.perp());
                for v in [birkhoff_b(ctx, u)?, c / ctx.symplectic(u, c)] {
                    let e = conjugacy_error(ctx, u, v);
                    if best.is_none_or(|(be, _, _)| e < be) {
                        best = Some((e, u, v));
                    }
                }
            }
            let (_, u, v) = best.expect("at least one candidate");
            let best = ConjugatePair { u, v, v_norm: ctx.norm(v)? };
            return Ok(best);
        }
        prev = cur;
    }
    Err(Error::Numerical("no conjugate direction found on a full turn of the circle".into()))
}

fn pair_at(ctx: &PlaneContext, u: Vec2) -> Result<ConjugatePair> {
    let v = birkhoff_b(ctx, u)?;
    Ok(ConjugatePair { u, v, v_norm: ctx.norm(v)? })
}

/// The unit vector `z` with `z ⊣_B d` and `[z, d] > 0`: the point of the
/// circle whose tangent runs along `d`.
pub fn left_orthogonal_unit(ctx: &PlaneContext, d: Vec2) -> Result<Vec2> {
    d.check_nonzero("direction")?;
    d.check_finite()?;
    // b(z) along d means the normal at z is a negative quarter turn of d
    Ok(ctx.model().contact_point(Vec2::new(d.y, -d.x)))
}

/// Probes `samples` unit vectors `x` for `b(x) ⊣_B x`. The residual is the
/// relative defect `(|b| - min_λ |b + λx|) / |b|`; the report passes when it
/// stays below `tol` everywhere.
pub fn is_radon(ctx: &PlaneContext, samples: usize, tol: f64) -> VerifyReport {
    let mut worst = Worst::default();
    for i in 0..samples.max(1) {
        let x = ctx.circle_point(TAU * i as f64 / samples.max(1) as f64);
        let b = ctx.model().gradient(x).perp() / ctx.omega_scale();
        let d = birkhoff_defect(ctx, b, x).unwrap_or(f64::NAN);
        worst.push(d, x, b);
    }
    VerifyReport::below("radon", &worst, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::RadonFlag;
    use crate::norm::NormSpec;

    fn lp4() -> PlaneContext {
        PlaneContext::new(NormSpec::Lp { p: 4.0 }).unwrap()
    }

    #[test]
    fn birkhoff_examples() {
        let e = PlaneContext::new(NormSpec::Euclidean).unwrap();
        assert!(is_birkhoff(&e, Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), 1e-9).unwrap());
        assert!(!is_birkhoff(&e, Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), 1e-9).unwrap());
        assert!(is_birkhoff(&lp4(), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), 1e-9).unwrap());
        assert!(is_birkhoff(&e, Vec2::ZERO, Vec2::new(0.0, 1.0), 1e-9).is_err());
    }

    #[test]
    fn b_examples() {
        let ctx = lp4();
        let b = birkhoff_b(&ctx, Vec2::new(1.0, 0.0)).unwrap();
        assert!((b - Vec2::new(0.0, 1.0)).euclid_len() < 1e-15);
        let d = Vec2::new(1.0, 1.0) * 2f64.powf(-0.25);
        let b = birkhoff_b(&ctx, d).unwrap();
        let want = Vec2::new(-1.0, 1.0) / 2f64.powf(0.75);
        assert!((b - want).euclid_len() < 1e-12, "{b}");
        assert!((ctx.antinorm(b).unwrap() - 1.0).abs() < 1e-12);
        assert!(birkhoff_b(&ctx, Vec2::ZERO).is_err());
    }

    #[test]
    fn b_is_tangent_oracle() {
        // x ⊣_B b(x), checked by line search
        let ctx = lp4();
        for k in 0..12 {
            let x = ctx.circle_point(0.37 + k as f64 * 0.5);
            let b = birkhoff_b(&ctx, x).unwrap();
            assert!(birkhoff_defect(&ctx, x, b).unwrap() < 1e-12);
            assert!(ctx.symplectic(x, b) > 0.0);
        }
    }

    #[test]
    fn radon_probe_classifies() {
        let e = PlaneContext::new(NormSpec::Euclidean).unwrap();
        let r = is_radon(&e, 256, 1e-9);
        assert!(r.pass, "{r:?}");
        let m = PlaneContext::new(NormSpec::MixedLpLq { p: 4.0 }).unwrap();
        assert_eq!(m.radon_flag(), RadonFlag::Radon);
        let l = lp4();
        assert_eq!(l.radon_flag(), RadonFlag::NotRadon);
        let r = is_radon(&l, 256, 1e-7);
        assert!(!r.pass && r.max_residual > 1e-3, "{r:?}");
        // the witness really is a one-sided orthogonality
        let [x, b] = r.witness;
        assert!(is_birkhoff(&l, x, b, 1e-12).unwrap());
        assert!(!is_birkhoff(&l, b, x, 1e-6).unwrap());
    }

    #[test]
    fn conjugate_pairs() {
        let l = lp4();
        let pair = conjugate_pair(&l, Vec2::new(1.0, 0.0)).unwrap();
        assert!(birkhoff_defect(&l, pair.u, pair.v).unwrap() < 1e-7);
        assert!(birkhoff_defect(&l, pair.v, pair.u).unwrap() < 1e-7);
        let pair = conjugate_pair(&l, Vec2::new(1.0, 0.3)).unwrap();
        assert!(birkhoff_defect(&l, pair.u, pair.v).unwrap() < 1e-7);
        assert!(birkhoff_defect(&l, pair.v, pair.u).unwrap() < 1e-7);
        assert!(l.symplectic(pair.u, pair.v) > 0.0);
        let m = PlaneContext::new(NormSpec::MixedLpLq { p: 4.0 }).unwrap();
        let pair = conjugate_pair(&m, Vec2::new(1.0, 0.0)).unwrap();
        assert_eq!(pair.u, Vec2::new(1.0, 0.0));
        assert!(birkhoff_defect(&m, pair.v, pair.u).unwrap() < 1e-7);
    }

    #[test]
    fn left_orthogonal() {
        let l = lp4();
        for k in 0..16 {
            let d = Vec2::from_angle(0.1 + k as f64 * 0.4);
            let z = left_orthogonal_unit(&l, d).unwrap();
            assert!((l.norm(z).unwrap() - 1.0).abs() < 1e-14);
            assert!(birkhoff_defect(&l, z, d).unwrap() < 1e-13);
            assert!(l.symplectic(z, d) > 0.0);
        }
    }
}
