//! Periodic cubic spline on a non-uniform knot sequence.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub(crate) struct PeriodicSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
    /// Second derivatives at the knots.
    curv: Vec<f64>,
    period: f64,
}

impl PeriodicSpline {
    /// `knots` must be strictly increasing and span less than one period.
    pub(crate) fn new(knots: Vec<f64>, values: Vec<f64>, period: f64) -> Result<Self> {
        let n = knots.len();
        if n < 4 || values.len() != n {
            return Err(Error::Config(format!(
                "periodic spline needs at least 4 knots with matching values, got {n}"
            )));
        }
        let span = knots[n - 1] - knots[0];
        if !(span < period) || knots.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Config(
                "spline knots must be strictly increasing within one period".into(),
            ));
        }
        let step = |i: usize| -> f64 {
            if i + 1 < n {
                knots[i + 1] - knots[i]
            } else {
                knots[0] + period - knots[n - 1]
            }
        };
        let slope = |i: usize| -> f64 { (values[(i + 1) % n] - values[i]) / step(i) };

        // Row i: h_{i-1} M_{i-1} + 2 (h_{i-1} + h_i) M_i + h_i M_{i+1} = rhs_i
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            let prev = (i + n - 1) % n;
            let hp = step(prev);
            let hi = step(i);
            sub[i] = hp;
            diag[i] = 2.0 * (hp + hi);
            sup[i] = hi;
            rhs[i] = 6.0 * (slope(i) - slope(prev));
        }
        let curv = solve_cyclic(&sub, &diag, &sup, &rhs);
        Ok(PeriodicSpline { knots, values, curv, period })
    }

    pub(crate) fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Value, first and second derivative at `t` (any real, reduced modulo the period).
    pub(crate) fn eval(&self, t: f64) -> (f64, f64, f64) {
        let n = self.knots.len();
        let t0 = self.knots[0];
        let mut u = (t - t0).rem_euclid(self.period) + t0;
        if u >= t0 + self.period {
            u = t0;
        }
        // index of the last knot <= u
        let i = match self.knots.partition_point(|&k| k <= u) {
            0 => 0,
            k => k - 1,
        };
        let j = (i + 1) % n;
        let left = self.knots[i];
        let right = if j == 0 { t0 + self.period } else { self.knots[j] };
        let h = right - left;
        let a = (right - u) / h;
        let b = (u - left) / h;
        let (yi, yj) = (self.values[i], self.values[j]);
        let (mi, mj) = (self.curv[i], self.curv[j]);
        let f = a * yi + b * yj + ((a * a * a - a) * mi + (b * b * b - b) * mj) * h * h / 6.0;
        let df = (yj - yi) / h - (3.0 * a * a - 1.0) / 6.0 * h * mi + (3.0 * b * b - 1.0) / 6.0 * h * mj;
        let ddf = a * mi + b * mj;
        (f, df, ddf)
    }
}

/// Cyclic tridiagonal solve (Sherman-Morrison on top of the Thomas algorithm).
/// Row i reads `sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]`, indices mod n.
fn solve_cyclic(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let alpha = sup[n - 1]; // row n-1, column 0
    let beta = sub[0]; // row 0, column n-1
    let gamma = -diag[0];
    let mut bb = diag.to_vec();
    bb[0] = diag[0] - gamma;
    bb[n - 1] = diag[n - 1] - alpha * beta / gamma;
    let x = solve_tridiagonal(sub, &bb, sup, rhs);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = alpha;
    let z = solve_tridiagonal(sub, &bb, sup, &u);
    let fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
    x.iter().zip(&z).map(|(xi, zi)| xi - fact * zi).collect()
}

fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / m;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}
