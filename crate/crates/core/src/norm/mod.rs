//! Norm descriptions and their evaluators.
//!
//! A [`NormSpec`] is the declarative, serializable description of a smooth
//! strictly convex norm. [`NormModel`] is the compiled evaluator: value and
//! gradient of the norm at any nonzero vector.

mod spline;

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vec2::Vec2;
use spline::PeriodicSpline;

/// Smallest exponent accepted for `Lp`.
pub const P_MIN: f64 = 1.001;
/// Largest exponent accepted for `Lp` and `MixedLpLq`.
pub const P_MAX: f64 = 64.0;

/// Declarative description of a smooth, strictly convex norm on the plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub enum NormSpec {
    Euclidean,
    /// `(|x|^p + |y|^p)^(1/p)`.
    Lp { p: f64 },
    /// `l_p` on the first and third quadrants, `l_q` on the others, `1/p + 1/q = 1`.
    MixedLpLq { p: f64 },
    /// Unit ball given by samples `(angle, h(angle))` of its support function.
    SupportTable { samples: Vec<(f64, f64)> },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    samples: Option<Vec<[f64; 2]>>,
}

impl TryFrom<RawSpec> for NormSpec {
    type Error = String;

    fn try_from(raw: RawSpec) -> std::result::Result<Self, String> {
        let need_p = |kind: &str| raw.p.ok_or_else(|| format!("kind \"{kind}\" requires \"p\""));
        match raw.kind.as_str() {
            "euclidean" => Ok(NormSpec::Euclidean),
            "lp" => Ok(NormSpec::Lp { p: need_p("lp")? }),
            "mixed_lp_lq" => Ok(NormSpec::MixedLpLq { p: need_p("mixed_lp_lq")? }),
            "support_table" => {
                let samples = raw
                    .samples
                    .ok_or("kind \"support_table\" requires \"samples\"")?
                    .into_iter()
                    .map(|[t, h]| (t, h))
                    .collect();
                Ok(NormSpec::SupportTable { samples })
            }
            other => Err(format!("unknown norm kind \"{other}\"")),
        }
    }
}

impl From<NormSpec> for RawSpec {
    fn from(spec: NormSpec) -> Self {
        match spec {
            NormSpec::Euclidean => RawSpec { kind: "euclidean".into(), p: None, samples: None },
            NormSpec::Lp { p } => RawSpec { kind: "lp".into(), p: Some(p), samples: None },
            NormSpec::MixedLpLq { p } => {
                RawSpec { kind: "mixed_lp_lq".into(), p: Some(p), samples: None }
            }
            NormSpec::SupportTable { samples } => RawSpec {
                kind: "support_table".into(),
                p: None,
                samples: Some(samples.into_iter().map(|(t, h)| [t, h]).collect()),
            },
        }
    }
}

impl NormSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("bad norm spec: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("norm spec serializes")
    }

    /// Parses the `builtin:` shorthands used on the command line:
    /// `builtin:euclidean`, `builtin:lp:P`, `builtin:mixed:P`.
    pub fn parse_builtin(arg: &str) -> Result<Self> {
        let rest = arg
            .strip_prefix("builtin:")
            .ok_or_else(|| Error::Config(format!("not a builtin spec: {arg}")))?;
        let mut parts = rest.splitn(2, ':');
        let kind = parts.next().unwrap_or_default();
        let p = parts.next().map(|s| {
            s.parse::<f64>()
                .map_err(|_| Error::Config(format!("bad exponent in {arg}")))
        });
        let spec = match (kind, p) {
            ("euclidean", None) => NormSpec::Euclidean,
            ("lp", Some(p)) => NormSpec::Lp { p: p? },
            ("mixed", Some(p)) => NormSpec::MixedLpLq { p: p? },
            _ => return Err(Error::Config(format!("unknown builtin spec {arg}"))),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Support-function samples of an ellipse with semi-axes `a`, `b`.
    pub fn ellipse(a: f64, b: f64, n: usize) -> Self {
        let samples = (0..n)
            .map(|i| {
                let t = TAU * i as f64 / n as f64;
                (t, (a * a * t.cos().powi(2) + b * b * t.sin().powi(2)).sqrt())
            })
            .collect();
        NormSpec::SupportTable { samples }
    }

    /// Conjugate exponent of a mixed norm.
    pub fn conjugate_exponent(p: f64) -> f64 {
        p / (p - 1.0)
    }

    /// Whether a context built from this spec should be rescaled to the
    /// Radon normalization. Plain lp norms keep their own unit ball.
    pub fn normalized_by_default(&self) -> bool {
        !matches!(self, NormSpec::Lp { .. })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            NormSpec::Euclidean => Ok(()),
            NormSpec::Lp { p } => {
                if p.is_finite() && (P_MIN..=P_MAX).contains(&p) {
                    Ok(())
                } else {
                    Err(Error::Config(format!("lp exponent {p} outside [{P_MIN}, {P_MAX}]")))
                }
            }
            NormSpec::MixedLpLq { p } => {
                if p.is_finite() && (2.0..=P_MAX).contains(&p) {
                    Ok(())
                } else {
                    Err(Error::Config(format!("mixed exponent {p} outside [2, {P_MAX}]")))
                }
            }
            NormSpec::SupportTable { .. } => SupportBody::new(self).map(|_| ()),
        }
    }
}

/// Compiled norm evaluator.
#[derive(Clone, Debug)]
pub(crate) enum NormModel {
    Euclidean,
    Lp { p: f64 },
    Mixed { p: f64, q: f64 },
    Support(Box<SupportBody>),
}

impl NormModel {
    pub(crate) fn compile(spec: &NormSpec) -> Result<Self> {
        spec.validate()?;
        Ok(match *spec {
            NormSpec::Euclidean => NormModel::Euclidean,
            NormSpec::Lp { p } => NormModel::Lp { p },
            NormSpec::MixedLpLq { p } => {
                NormModel::Mixed { p, q: NormSpec::conjugate_exponent(p) }
            }
            NormSpec::SupportTable { .. } => NormModel::Support(Box::new(SupportBody::new(spec)?)),
        })
    }

    /// Norm of a finite vector.
    pub(crate) fn eval(&self, v: Vec2) -> f64 {
        match self {
            NormModel::Euclidean => v.euclid_len(),
            NormModel::Lp { p } => lp_norm(v, *p),
            NormModel::Mixed { p, q } => lp_norm(v, if v.x * v.y >= 0.0 { *p } else { *q }),
            NormModel::Support(body) => body.eval(v),
        }
    }

    /// Gradient of the norm at a finite nonzero vector.
    pub(crate) fn gradient(&self, v: Vec2) -> Vec2 {
        match self {
            NormModel::Euclidean => v / v.euclid_len(),
            NormModel::Lp { p } => lp_gradient(v, *p),
            NormModel::Mixed { p, q } => lp_gradient(v, if v.x * v.y >= 0.0 { *p } else { *q }),
            NormModel::Support(body) => body.gradient(v),
        }
    }
}

impl NormModel {
    /// Support function of the unit ball, `h(n) = sup { <n, y> : |y| <= 1 }`,
    /// i.e. the dual norm.
    pub(crate) fn support(&self, n: Vec2) -> f64 {
        match self {
            NormModel::Euclidean => n.euclid_len(),
            NormModel::Lp { p } => lp_norm(n, NormSpec::conjugate_exponent(*p)),
            // the mixed plane is Radon with antinorm equal to the norm, so the
            // dual norm is the norm after a quarter turn
            NormModel::Mixed { .. } => self.eval(Vec2::new(n.y, -n.x)),
            NormModel::Support(body) => {
                let t = n.angle();
                n.euclid_len() * body.h.eval(t).0
            }
        }
    }

    /// The boundary point where the supporting line with outer normal `n`
    /// touches the unit ball (the gradient of the support function).
    pub(crate) fn contact_point(&self, n: Vec2) -> Vec2 {
        match self {
            NormModel::Euclidean => n / n.euclid_len(),
            NormModel::Lp { p } => lp_gradient(n, NormSpec::conjugate_exponent(*p)),
            NormModel::Mixed { .. } => self.gradient(Vec2::new(n.y, -n.x)).perp(),
            NormModel::Support(body) => body.boundary(n.angle()),
        }
    }
}

fn lp_norm(v: Vec2, p: f64) -> f64 {
    let (ax, ay) = (v.x.abs(), v.y.abs());
    let m = ax.max(ay);
    if m == 0.0 {
        return 0.0;
    }
    m * ((ax / m).powf(p) + (ay / m).powf(p)).powf(1.0 / p)
}

fn lp_gradient(v: Vec2, p: f64) -> Vec2 {
    let n = lp_norm(v, p);
    let comp = |c: f64| c.signum() * (c.abs() / n).powf(p - 1.0);
    // signum(0.0) is 1.0 but 0^(p-1) = 0, so exact zeros stay zero
    Vec2::new(comp(v.x), comp(v.y))
}

/// A unit ball described by its support function `h(theta)`.
///
/// The boundary point with outward normal direction `u(t) = (cos t, sin t)`
/// is `h(t) u(t) + h'(t) u'(t)`; the gradient of the norm there is `u(t) / h(t)`.
#[derive(Clone, Debug)]
pub(crate) struct SupportBody {
    h: PeriodicSpline,
    /// Normal angles sampled uniformly and the (unwrapped) polar angles of the
    /// matching boundary points, used to seed the inverse lookup.
    seed_normal: Vec<f64>,
    seed_polar: Vec<f64>,
}

const SUPPORT_SEED: usize = 1024;

impl SupportBody {
    fn new(spec: &NormSpec) -> Result<Self> {
        let NormSpec::SupportTable { samples } = spec else {
            unreachable!("SupportBody::new called with a non-table spec")
        };
        if samples.len() < 8 {
            return Err(Error::Config("support table needs at least 8 samples".into()));
        }
        let mut pts: Vec<(f64, f64)> = Vec::with_capacity(samples.len());
        for &(t, h) in samples {
            if !t.is_finite() || !h.is_finite() {
                return Err(Error::Config("support table contains non-finite values".into()));
            }
            if h <= 0.0 {
                return Err(Error::Config(format!(
                    "support value {h} at angle {t} is not positive (origin must be interior)"
                )));
            }
            pts.push((t.rem_euclid(TAU), h));
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pts.windows(2).any(|w| w[1].0 - w[0].0 < 1e-12) {
            return Err(Error::Config("support table has repeated angles".into()));
        }
        let (knots, values): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
        let h = PeriodicSpline::new(knots, values, TAU)?;

        let hmax = (0..h.knots().len()).map(|i| h.eval(h.knots()[i]).0).fold(0.0, f64::max);
        let knots = h.knots().to_vec();
        for (i, &t) in knots.iter().enumerate() {
            let next = knots.get(i + 1).copied().unwrap_or(knots[0] + TAU);
            for probe in [t, 0.5 * (t + next)] {
                let (v, _, dd) = h.eval(probe);
                if !(v + dd > 0.0) {
                    return Err(Error::Config(format!(
                        "support table is not strictly convex near angle {probe:.6} (h + h'' = {:.3e})",
                        v + dd
                    )));
                }
                let opposite = h.eval(probe + PI).0;
                if (opposite - v).abs() > 1e-6 * hmax {
                    return Err(Error::Config(format!(
                        "support table is not centrally symmetric near angle {probe:.6}"
                    )));
                }
            }
        }

        let mut body = SupportBody { h, seed_normal: Vec::new(), seed_polar: Vec::new() };
        let mut last = f64::NEG_INFINITY;
        for j in 0..=SUPPORT_SEED {
            let t = TAU * j as f64 / SUPPORT_SEED as f64;
            let mut phi = body.boundary(t).angle();
            if j == 0 {
                last = phi;
            } else {
                while phi < last {
                    phi += TAU;
                }
                last = phi;
            }
            body.seed_normal.push(t);
            body.seed_polar.push(phi);
        }
        Ok(body)
    }

    fn boundary(&self, t: f64) -> Vec2 {
        let (h, dh, _) = self.h.eval(t);
        let u = Vec2::from_angle(t);
        u * h + u.perp() * dh
    }

    /// Normal angle of the boundary point in direction `v`.
    fn normal_angle(&self, v: Vec2) -> f64 {
        let phi0 = self.seed_polar[0];
        let phi = (v.angle() - phi0).rem_euclid(TAU) + phi0;
        let j = self
            .seed_polar
            .partition_point(|&s| s <= phi)
            .clamp(1, SUPPORT_SEED)
            - 1;
        let (mut lo, mut hi) = (self.seed_normal[j], self.seed_normal[j + 1]);
        let (plo, phi_hi) = (self.seed_polar[j], self.seed_polar[j + 1]);
        let mut t = lo + (hi - lo) * ((phi - plo) / (phi_hi - plo)).clamp(0.0, 1.0);
        // signed angle from the boundary point to v; decreasing in t
        let resid = |t: f64| {
            let x = self.boundary(t);
            x.cross(v).atan2(x.dot(v))
        };
        for _ in 0..60 {
            let r = resid(t);
            if r == 0.0 {
                break;
            }
            if r > 0.0 {
                lo = t;
            } else {
                hi = t;
            }
            let (h, dh, ddh) = self.h.eval(t);
            let x2 = h * h + dh * dh;
            let rate = h * (h + ddh) / x2;
            let mut next = t + r / rate;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - t).abs() <= 1e-16 * (1.0 + t.abs()) {
                t = next;
                break;
            }
            t = next;
        }
        t
    }

    fn eval(&self, v: Vec2) -> f64 {
        if v.is_zero() {
            return 0.0;
        }
        let t = self.normal_angle(v);
        v.dot(Vec2::from_angle(t)) / self.h.eval(t).0
    }

    fn gradient(&self, v: Vec2) -> Vec2 {
        let t = self.normal_angle(v);
        Vec2::from_angle(t) / self.h.eval(t).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_uses_fixed_field_names() {
        let spec = NormSpec::Lp { p: 4.0 };
        assert_eq!(spec.to_json(), r#"{"kind":"lp","p":4.0}"#);
        let mixed: NormSpec = serde_json::from_str(r#"{"kind":"mixed_lp_lq","p":3}"#).unwrap();
        assert_eq!(mixed, NormSpec::MixedLpLq { p: 3.0 });
        let e: NormSpec = serde_json::from_str(r#"{"kind":"euclidean"}"#).unwrap();
        assert_eq!(e, NormSpec::Euclidean);
        let t: NormSpec =
            serde_json::from_str(r#"{"kind":"support_table","samples":[[0,1],[1,2]]}"#).unwrap();
        assert_eq!(t, NormSpec::SupportTable { samples: vec![(0.0, 1.0), (1.0, 2.0)] });
    }

    #[test]
    fn json_rejects_unknown_kind_and_fields() {
        assert!(NormSpec::from_json(r#"{"kind":"l1"}"#).is_err());
        assert!(NormSpec::from_json(r#"{"kind":"lp"}"#).is_err());
        assert!(NormSpec::from_json(r#"{"kind":"lp","p":4,"q":2}"#).is_err());
    }

    #[test]
    fn exponent_ranges() {
        assert!(NormSpec::Lp { p: 1.0 }.validate().is_err());
        assert!(NormSpec::Lp { p: 1.001 }.validate().is_ok());
        assert!(NormSpec::Lp { p: 64.0 }.validate().is_ok());
        assert!(NormSpec::Lp { p: 65.0 }.validate().is_err());
        assert!(NormSpec::Lp { p: f64::NAN }.validate().is_err());
        assert!(NormSpec::MixedLpLq { p: 1.5 }.validate().is_err());
        assert!(NormSpec::MixedLpLq { p: 2.0 }.validate().is_ok());
    }

    #[test]
    fn builtin_shorthand() {
        assert_eq!(NormSpec::parse_builtin("builtin:lp:4").unwrap(), NormSpec::Lp { p: 4.0 });
        assert_eq!(
            NormSpec::parse_builtin("builtin:mixed:8").unwrap(),
            NormSpec::MixedLpLq { p: 8.0 }
        );
        assert_eq!(NormSpec::parse_builtin("builtin:euclidean").unwrap(), NormSpec::Euclidean);
        assert!(NormSpec::parse_builtin("builtin:lp").is_err());
        assert!(NormSpec::parse_builtin("builtin:lp:0.5").is_err());
        assert!(NormSpec::parse_builtin("lp:4").is_err());
    }

    #[test]
    fn support_table_validation() {
        // a square-ish support function fails strict convexity
        let bad: Vec<(f64, f64)> = (0..64)
            .map(|i| {
                let t = TAU * i as f64 / 64.0;
                (t, 1.0 + 0.2 * (4.0 * t).cos())
            })
            .collect();
        assert!(matches!(
            NormSpec::SupportTable { samples: bad }.validate(),
            Err(Error::Config(_))
        ));
        // not symmetric
        let lopsided: Vec<(f64, f64)> = (0..64)
            .map(|i| {
                let t = TAU * i as f64 / 64.0;
                (t, 1.0 + 0.1 * t.cos())
            })
            .collect();
        assert!(NormSpec::SupportTable { samples: lopsided }.validate().is_err());
        assert!(NormSpec::SupportTable { samples: vec![(0.0, 1.0); 3] }.validate().is_err());
        assert!(NormSpec::ellipse(2.0, 1.0, 128).validate().is_ok());
    }

    #[test]
    fn ellipse_support_table_matches_closed_form() {
        let m = NormModel::compile(&NormSpec::ellipse(2.0, 1.0, 256)).unwrap();
        for k in 0..50 {
            let v = Vec2::from_angle(0.13 * k as f64) * (0.5 + 0.05 * k as f64);
            let exact = ((v.x / 2.0).powi(2) + v.y.powi(2)).sqrt();
            assert!((m.eval(v) - exact).abs() < 1e-6 * exact, "k={k}");
            let g = m.gradient(v);
            let ge = Vec2::new(v.x / 4.0, v.y) / exact;
            assert!((g - ge).euclid_len() < 1e-5, "k={k}");
        }
    }

    #[test]
    fn support_function_matches_brute_force() {
        let specs = [
            NormSpec::Euclidean,
            NormSpec::Lp { p: 4.0 },
            NormSpec::Lp { p: 1.5 },
            NormSpec::MixedLpLq { p: 4.0 },
            NormSpec::MixedLpLq { p: 16.0 },
            NormSpec::ellipse(2.0, 0.5, 256),
        ];
        for spec in specs {
            let m = NormModel::compile(&spec).unwrap();
            for k in 0..24 {
                let n = Vec2::from_angle(0.05 + k as f64 * 0.26) * 1.7;
                let (mut best, mut arg, mut at) = (f64::NEG_INFINITY, Vec2::ZERO, 0.0);
                let dt = TAU / 20000.0;
                let grids = [(0.0, dt, 20000), (-dt, dt / 2000.0, 4000)];
                for (g, &(off, step, count)) in grids.iter().enumerate() {
                    let base = if g == 0 { 0.0 } else { at + off };
                    for j in 0..count {
                        let t = base + step * j as f64;
                        let u = Vec2::from_angle(t);
                        let y = u / m.eval(u);
                        if n.dot(y) > best {
                            (best, arg, at) = (n.dot(y), y, t);
                        }
                    }
                }
                let h = m.support(n);
                assert!((h - best).abs() < 1e-9 * h, "{spec:?} {n}: {h} vs {best}");
                let c = m.contact_point(n);
                assert!((m.eval(c) - 1.0).abs() < 1e-9, "{spec:?}");
                assert!((n.dot(c) - h).abs() < 1e-9 * h, "{spec:?}");
                assert!((c - arg).euclid_len() < 1e-3, "{spec:?} {c} {arg}");
            }
        }
    }

    #[test]
    fn lp_gradient_keeps_exact_zeros() {
        let g = lp_gradient(Vec2::new(0.0, 2.0), 4.0);
        assert_eq!(g, Vec2::new(0.0, 1.0));
    }
}
