use serde::Serialize;

use crate::vec2::Vec2;

/// Outcome of one property check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub check: String,
    pub pass: bool,
    pub max_residual: f64,
    /// The worst inputs seen, as `[[x1, x2], [y1, y2]]`.
    pub witness: [Vec2; 2],
}

impl VerifyReport {
    pub fn new(check: impl Into<String>, pass: bool, max_residual: f64, witness: [Vec2; 2]) -> Self {
        VerifyReport { check: check.into(), pass, max_residual, witness }
    }

    /// Report for a residual that must stay below `tol`.
    pub fn below(check: impl Into<String>, worst: &Worst, tol: f64) -> Self {
        Self::new(check, worst.value <= tol, worst.value, worst.witness)
    }

    /// Report for a witness value that must exceed `min`.
    pub fn above(check: impl Into<String>, worst: &Worst, min: f64) -> Self {
        Self::new(check, worst.value > min, worst.value, worst.witness)
    }
}

/// Running maximum of a residual together with the inputs that produced it.
#[derive(Clone, Copy, Debug)]
pub struct Worst {
    pub value: f64,
    pub witness: [Vec2; 2],
}

impl Default for Worst {
    fn default() -> Self {
        Worst { value: 0.0, witness: [Vec2::ZERO; 2] }
    }
}

impl Worst {
    /// Records `value` if it is larger than the current maximum. NaN always wins,
    /// so a broken computation cannot hide behind a good one.
    pub fn push(&mut self, value: f64, x: Vec2, y: Vec2) {
        if !self.value.is_nan() && (value.is_nan() || value > self.value) {
            self.value = value;
            self.witness = [x, y];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let r = VerifyReport::new("c", true, 0.5, [Vec2::new(1.0, 2.0), Vec2::new(3.0, 4.0)]);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"check":"c","pass":true,"max_residual":0.5,"witness":[[1.0,2.0],[3.0,4.0]]}"#);
    }

    #[test]
    fn worst_keeps_max_and_sticks_on_nan() {
        let mut w = Worst::default();
        w.push(1.0, Vec2::new(1.0, 0.0), Vec2::ZERO);
        w.push(0.5, Vec2::new(2.0, 0.0), Vec2::ZERO);
        assert_eq!(w.value, 1.0);
        assert_eq!(w.witness[0].x, 1.0);
        w.push(f64::NAN, Vec2::new(3.0, 0.0), Vec2::ZERO);
        w.push(9.0, Vec2::new(4.0, 0.0), Vec2::ZERO);
        assert!(w.value.is_nan());
        assert_eq!(w.witness[0].x, 3.0);
        let r = VerifyReport::below("x", &w, 1.0);
        assert!(!r.pass);
    }
}
