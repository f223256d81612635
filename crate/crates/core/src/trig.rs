//! The cosine `cm` in its three forms, the signed sine `sn`, the symmetric
//! cosines `cn` and `ca`, the semi-inner product and the Gateaux derivative.

use crate::birkhoff::birkhoff_b;
use crate::context::PlaneContext;
use crate::error::{Error, Result};
use crate::oracles::{bisect, minimize_line, sup_circle};
use crate::vec2::Vec2;

/// Products `cm(x,y) cm(y,x)` below this are treated as genuinely negative.
pub const CN_NEGATIVE_TOL: f64 = 1e-9;

/// `cm(x, y) = [y, b(x)] / |y|`.
pub fn cm(ctx: &PlaneContext, x: Vec2, y: Vec2) -> Result<f64> {
    y.check_nonzero("cm second argument")?;
    let b = birkhoff_b(ctx, x)?;
    Ok(ctx.symplectic(y, b) / ctx.norm(y)?)
}

/// `sgn([y, b(x)]) * inf_t |y + t b(x)| / |y|`, by line search.
pub fn cm_inf_form(ctx: &PlaneContext, x: Vec2, y: Vec2) -> Result<f64> {
    y.check_nonzero("cm second argument")?;
    let b = birkhoff_b(ctx, x)?;
    let s = ctx.symplectic(y, b);
    if s == 0.0 {
        return Ok(0.0);
    }
    let m = minimize_line(|t| ctx.norm(y + b * t).unwrap_or(f64::NAN))?;
    Ok(s.signum() * m.value / ctx.norm(y)?)
}

/// Signed inverse distance from the origin to the point where the ray through
/// `y` meets the supporting line at `x/|x|`; negative when the line is met on
/// the opposite ray, zero when the ray is parallel to it.
pub fn cm_external_form(ctx: &PlaneContext, x: Vec2, y: Vec2) -> Result<f64> {
    let xu = ctx.unit(x)?;
    let yu = ctx.unit(y)?;
    let d = birkhoff_b(ctx, xu)?;
    // xu + s d = t yu
    let den = yu.cross(d);
    if den.abs() <= 1e-300 {
        return Ok(0.0);
    }
    let t = xu.cross(d) / den;
    let q = yu * t;
    Ok(t.signum() / ctx.norm(q)?)
}

/// Signed sine `sn(x, y) = [x, y] / (|y|_a |x|)`.
pub fn sn(ctx: &PlaneContext, x: Vec2, y: Vec2) -> Result<f64> {
    x.check_nonzero("sn first argument")?;
    y.check_nonzero("sn second argument")?;
    Ok(ctx.symplectic(x, y) / (ctx.antinorm(y)? * ctx.norm(x)?))
}

/// `sqrt(cm(x,y) cm(y,x))`; only defined in Radon planes.
pub fn cn(ctx: &PlaneContext, x: Vec2, y: Vec2) -> Result<f64> {
    if !ctx.is_radon() {
        return Err(Error::Unsupported("cn is only defined in Radon planes".into()));
    }
    let prod = cm(ctx, x, y)? * cm(ctx, y, x)?;
    if prod < -CN_NEGATIVE_TOL {
        return Err(Error::Numerical(format!("cm(x,y) cm(y,x) = {prod} is negative")));
    }
    Ok(prod.max(0.0).sqrt())
}

/// Arithmetic mean of `cm(x, y)` and `cm(y, x)`.
pub fn ca(ctx: &PlaneContext, x: Vec2, y: Vec2) -> Result<f64> {
    Ok(0.5 * (cm(ctx, x, y)? + cm(ctx, y, x)?))
}

/// The semi-inner product `|x| |y| cm(x, y)`, zero if either vector is zero.
pub fn semi_inner(ctx: &PlaneContext, x: Vec2, y: Vec2) -> Result<f64> {
    x.check_finite()?;
    y.check_finite()?;
    if x.is_zero() || y.is_zero() {
        return Ok(0.0);
    }
    Ok(ctx.norm(x)? * ctx.norm(y)? * cm(ctx, x, y)?)
}

/// Raw directional derivative `lim (|x + ty| - |x|) / t`, by the symmetric
/// quotient with `t = 1e-6 |x| / |y|`.
pub fn norm_derivative(ctx: &PlaneContext, x: Vec2, y: Vec2) -> Result<f64> {
    x.check_nonzero("gateaux base point")?;
    y.check_finite()?;
    if y.is_zero() {
        return Ok(0.0);
    }
    let t = 1e-6 * ctx.norm(x)? / ctx.norm(y)?;
    Ok((ctx.norm(x + y * t)? - ctx.norm(x - y * t)?) / (2.0 * t))
}

/// Gateaux functional `g(x, y) = |x| lim (|x + ty| - |x|) / t`.
pub fn gateaux(ctx: &PlaneContext, x: Vec2, y: Vec2) -> Result<f64> {
    Ok(ctx.norm(x)? * norm_derivative(ctx, x, y)?)
}

/// Maximizer over the unit circle of `y -> [y, b(x)]`; it coincides with
/// `x / |x|`.
///
/// The best table sample is refined by bisection on the sign of the
/// derivative `[γ'(θ), b(x)]`. Where the circle is very flat a value-based
/// search cannot place the maximizer to better than the fourth root of machine
/// precision, the derivative sign can.
pub fn norm_gradient_direction(ctx: &PlaneContext, x: Vec2) -> Result<Vec2> {
    let b = birkhoff_b(ctx, x)?;
    let (theta, _) = sup_circle(ctx, |y| ctx.symplectic(y, b))?;
    let dt = std::f64::consts::TAU / ctx.circle_table().len() as f64;
    let slope = |t: f64| ctx.symplectic(ctx.circle_velocity(t), b);
    let refined = bisect(slope, theta - 2.0 * dt, theta + 2.0 * dt).unwrap_or(theta);
    Ok(ctx.circle_point(refined))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::NormSpec;

    fn ctx(spec: NormSpec) -> PlaneContext {
        PlaneContext::new(spec).unwrap()
    }

    const S2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn cm_examples() {
        let e = ctx(NormSpec::Euclidean);
        let l = ctx(NormSpec::Lp { p: 4.0 });
        let (x, d) = (Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0));
        assert!((cm(&e, x, d).unwrap() - S2).abs() < 1e-15);
        assert!((cm_inf_form(&e, x, d).unwrap() - S2).abs() < 1e-9);
        assert!((cm_external_form(&e, x, d / 2f64.sqrt()).unwrap() - S2).abs() < 1e-15);
        assert_eq!(cm(&l, x, Vec2::new(0.0, 1.0)).unwrap(), 0.0);
        assert_eq!(cm_inf_form(&l, x, Vec2::new(0.0, 1.0)).unwrap(), 0.0);
        let y = d * 2f64.powf(-0.25);
        assert!((cm_inf_form(&l, x, y).unwrap() - cm(&l, x, y).unwrap()).abs() < 1e-7);
        for c in [&e, &l] {
            let v = Vec2::new(0.3, -1.7);
            assert!((cm(c, v, v).unwrap() - 1.0).abs() < 1e-14);
            assert!((cm_external_form(c, v, v).unwrap() - 1.0).abs() < 1e-14);
        }
        assert!(cm(&e, Vec2::ZERO, d).is_err());
        assert!(cm(&e, d, Vec2::ZERO).is_err());
    }

    #[test]
    fn external_form_signs() {
        let e = ctx(NormSpec::Euclidean);
        let x = Vec2::new(1.0, 0.0);
        assert!((cm_external_form(&e, x, Vec2::new(-1.0, 1.0)).unwrap() + S2).abs() < 1e-15);
        assert_eq!(cm_external_form(&e, x, Vec2::new(0.0, 1.0)).unwrap(), 0.0);
    }

    #[test]
    fn sn_examples() {
        let e = ctx(NormSpec::Euclidean);
        let l = ctx(NormSpec::Lp { p: 4.0 });
        assert!((sn(&e, Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)).unwrap() - 1.0).abs() < 1e-15);
        let v = Vec2::new(0.4, 2.0);
        assert_eq!(sn(&l, v, v).unwrap(), 0.0);
        // |(1,1)|_a in l_4 is the l_{4/3} norm of (-1,1)
        let (x, y) = (Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0));
        let want = 1.0 / 2f64.powf(0.75);
        assert!((sn(&l, x, y).unwrap() - want).abs() < 1e-12);
        let z = Vec2::new(0.2, 0.9);
        let b = birkhoff_b(&l, z).unwrap();
        assert!((cm(&l, z, y).unwrap() - sn(&l, y, b).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn cn_and_ca() {
        let e = ctx(NormSpec::Euclidean);
        let m = ctx(NormSpec::MixedLpLq { p: 4.0 });
        let l = ctx(NormSpec::Lp { p: 4.0 });
        let (x, y) = (Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0));
        assert!((cn(&e, x, y).unwrap() - S2).abs() < 1e-15);
        assert!((ca(&e, x, y).unwrap() - cm(&e, x, y).unwrap()).abs() < 1e-15);
        assert!(matches!(cn(&l, x, y), Err(Error::Unsupported(_))));
        let z = Vec2::new(0.3, 0.8);
        assert!(cn(&m, z, birkhoff_b(&m, z).unwrap()).unwrap() < 1e-7);
        assert!((cn(&m, z, y).unwrap() - cn(&m, y, z).unwrap()).abs() < 1e-15);
        assert!((ca(&l, z, z).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn semi_inner_and_gateaux() {
        let e = ctx(NormSpec::Euclidean);
        let l = ctx(NormSpec::Lp { p: 4.0 });
        assert_eq!(semi_inner(&l, Vec2::ZERO, Vec2::new(1.0, 2.0)).unwrap(), 0.0);
        assert_eq!(semi_inner(&e, Vec2::new(3.0, 0.0), Vec2::new(0.0, 4.0)).unwrap(), 0.0);
        let x = Vec2::new(1.5, -0.5);
        assert!((semi_inner(&l, x, x).unwrap() - l.norm(x).unwrap().powi(2)).abs() < 1e-12);
        assert!((gateaux(&e, Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0)).unwrap() - 1.0).abs() < 1e-9);
        assert!((gateaux(&l, x, x).unwrap() - l.norm(x).unwrap().powi(2)).abs() < 1e-9);
        assert!(gateaux(&l, Vec2::ZERO, x).is_err());
        let y = Vec2::new(-0.2, 1.1);
        let b = birkhoff_b(&l, x).unwrap();
        assert!((norm_derivative(&l, x, y).unwrap() - l.symplectic(y, b)).abs() < 1e-9);
    }

    #[test]
    fn gradient_direction() {
        let e = ctx(NormSpec::Euclidean);
        let l = ctx(NormSpec::Lp { p: 4.0 });
        let m = ctx(NormSpec::MixedLpLq { p: 4.0 });
        assert!((norm_gradient_direction(&e, Vec2::new(2.0, 0.0)).unwrap() - Vec2::new(1.0, 0.0)).euclid_len() < 1e-6);
        let d = Vec2::new(1.0, 1.0) * 2f64.powf(-0.25);
        assert!((norm_gradient_direction(&l, d).unwrap() - d).euclid_len() < 1e-6);
        assert!((norm_gradient_direction(&m, Vec2::new(0.0, -3.0)).unwrap() - Vec2::new(0.0, -1.0)).euclid_len() < 1e-6);
    }
}
