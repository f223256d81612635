//! Property tests for the invariants of norms, the Birkhoff map, the cosines
//! and the distortion functional.

use std::f64::consts::TAU;
use std::sync::OnceLock;

use approx::assert_abs_diff_eq;
use minktrig::birkhoff::{birkhoff_b, birkhoff_defect};
use minktrig::calculus::{ArcKind, ArcParam};
use minktrig::distortion::gamma_pair;
use minktrig::oracles::finite_diff;
use minktrig::trig::{cm, sn};
use minktrig::{build_context, NormSpec, PlaneContext, Vec2};
use proptest::prelude::*;

fn planes() -> &'static [PlaneContext] {
    static P: OnceLock<Vec<PlaneContext>> = OnceLock::new();
    P.get_or_init(|| {
        vec![
            build_context(NormSpec::Euclidean, 1024, true).unwrap(),
            build_context(NormSpec::Lp { p: 4.0 }, 1024, false).unwrap(),
            build_context(NormSpec::Lp { p: 1.5 }, 1024, false).unwrap(),
            build_context(NormSpec::MixedLpLq { p: 4.0 }, 1024, true).unwrap(),
            build_context(NormSpec::ellipse(1.5, 0.7, 256), 1024, true).unwrap(),
        ]
    })
}

fn vector() -> impl Strategy<Value = Vec2> {
    (0.0..TAU, -2.0f64..2.0).prop_map(|(t, e)| Vec2::from_angle(t) * 10f64.powf(e))
}

fn plane() -> impl Strategy<Value = usize> {
    0..5usize
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn norm_is_absolutely_homogeneous(i in plane(), v in vector(), l in -50.0f64..50.0) {
        let c = &planes()[i];
        let lhs = c.norm(v * l).unwrap();
        let rhs = l.abs() * c.norm(v).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
    }

    #[test]
    fn norm_triangle_inequality(i in plane(), u in vector(), v in vector()) {
        let c = &planes()[i];
        let (a, b, s) = (c.norm(u).unwrap(), c.norm(v).unwrap(), c.norm(u + v).unwrap());
        prop_assert!(s <= (a + b) * (1.0 + 1e-12));
    }

    #[test]
    fn antinorm_is_a_norm(i in plane(), u in vector(), v in vector(), l in -5.0f64..5.0) {
        let c = &planes()[i];
        let (a, b, s) = (c.antinorm(u).unwrap(), c.antinorm(v).unwrap(), c.antinorm(u + v).unwrap());
        prop_assert!(s <= (a + b) * (1.0 + 1e-9));
        let h = c.antinorm(u * l).unwrap();
        prop_assert!((h - l.abs() * a).abs() <= 1e-9 * (1.0 + l.abs() * a));
    }

    #[test]
    fn euler_identity(i in plane(), v in vector()) {
        let c = &planes()[i];
        let g = c.norm_gradient(v).unwrap();
        let n = c.norm(v).unwrap();
        prop_assert!((g.dot(v) - n).abs() <= 1e-12 * n);
    }

    #[test]
    fn gradient_matches_finite_differences(i in plane(), t in 0.0..TAU) {
        let c = &planes()[i];
        let v = Vec2::from_angle(t);
        let g = c.norm_gradient(v).unwrap();
        let gx = finite_diff(|h| c.norm(v + Vec2::new(h, 0.0)).unwrap(), 0.0, 1e-6);
        let gy = finite_diff(|h| c.norm(v + Vec2::new(0.0, h)).unwrap(), 0.0, 1e-6);
        // the mixed and l_1.5 norms are only C^1 at the axes
        prop_assert!((g.x - gx).abs() < 1e-4 && (g.y - gy).abs() < 1e-4, "{g} vs ({gx}, {gy})");
    }

    #[test]
    fn b_is_birkhoff_orthogonal_and_normalized(i in plane(), x in vector()) {
        let c = &planes()[i];
        let b = birkhoff_b(c, x).unwrap();
        let xu = c.unit(x).unwrap();
        prop_assert!(birkhoff_defect(c, xu, b).unwrap() < 1e-9);
        prop_assert!((c.symplectic(xu, b) - 1.0).abs() < 1e-9);
        prop_assert!((birkhoff_b(c, -x).unwrap() + b).euclid_len() < 1e-12);
    }

    #[test]
    fn cm_is_bounded_and_homogeneous(i in plane(), x in vector(), y in vector(), l in 0.01f64..100.0) {
        let c = &planes()[i];
        let v = cm(c, x, y).unwrap();
        prop_assert!(v.abs() <= 1.0 + 1e-12);
        prop_assert!((cm(c, x * l, y / l).unwrap() - v).abs() < 1e-12);
        prop_assert!((cm(c, x, -y).unwrap() + v).abs() < 1e-12);
    }

    #[test]
    fn cm_vanishes_on_birkhoff_pairs(i in plane(), x in vector()) {
        let c = &planes()[i];
        let b = birkhoff_b(c, x).unwrap();
        prop_assert!(cm(c, x, b).unwrap().abs() < 1e-12);
        prop_assert!((cm(c, x, x).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sn_is_antisymmetric_in_radon_planes(t in 0.0..TAU, s in 0.0..TAU) {
        let c = &planes()[3];
        let (x, y) = (c.circle_point(t), c.circle_point(s));
        prop_assert!((sn(c, x, y).unwrap() + sn(c, y, x).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn gamma_reciprocal(i in plane(), t in 0.0..TAU, d in 0.2f64..2.9) {
        let c = &planes()[i];
        let (x, y) = (c.circle_point(t), c.circle_point(t + d));
        let g = gamma_pair(c, x, y).unwrap();
        prop_assert!(g > 0.0);
        assert_abs_diff_eq!(g * gamma_pair(c, y, x).unwrap(), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn arc_parameter_round_trip(i in plane(), t in 0.0..TAU) {
        let c = &planes()[i];
        for kind in [ArcKind::NormLength, ArcKind::AntinormLength, ArcKind::SectorArea] {
            let a = ArcParam::new(c, kind).unwrap();
            let s = a.param_of_theta(c, t).unwrap();
            let back = a.theta_of_param(c, s).unwrap();
            prop_assert!((back - t).abs() < 1e-8, "{kind:?}: {t} -> {s} -> {back}");
        }
    }
}
