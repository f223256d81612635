//! Number formatting, CSV and a small SVG writer for the CLI.

use std::fmt::Write as _;

use crate::vec2::Vec2;

/// Rounds to 10 significant digits; `-0` becomes `0`.
pub fn round10(v: f64) -> f64 {
    if !v.is_finite() {
        return v;
    }
    let r: f64 = format!("{v:.9e}").parse().unwrap_or(v);
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// A number as it appears in CSV and JSON output.
pub fn num(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{}", round10(v))
    }
}

/// JSON value for a number; non-finite values become `null`.
pub fn json_num(v: f64) -> serde_json::Value {
    serde_json::Number::from_f64(round10(v)).map_or(serde_json::Value::Null, serde_json::Value::Number)
}

pub fn json_vec(v: Vec2) -> serde_json::Value {
    serde_json::Value::Array(vec![json_num(v.x), json_num(v.y)])
}

/// Rounds every number inside a JSON tree.
pub fn round_json(v: serde_json::Value) -> serde_json::Value {
    use serde_json::Value;
    match v {
        Value::Number(n) => n.as_f64().map_or(Value::Number(n), json_num),
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

pub fn csv(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        let cells: Vec<String> = r.iter().map(|&v| num(v)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

/// Hand-emitted SVG in world coordinates (y up).
pub struct Svg {
    half: f64,
    size: f64,
    body: String,
}

impl Svg {
    /// A square canvas showing `[-half, half]^2`.
    pub fn new(half: f64) -> Self {
        Svg { half, size: 600.0, body: String::new() }
    }

    fn map(&self, p: Vec2) -> (f64, f64) {
        let k = self.size / (2.0 * self.half);
        (round10((p.x + self.half) * k), round10((self.half - p.y) * k))
    }

    pub fn polyline(&mut self, pts: &[Vec2], closed: bool, stroke: &str, dashed: bool) {
        let mut d = String::new();
        for (i, &p) in pts.iter().enumerate() {
            let (x, y) = self.map(p);
            let _ = write!(d, "{}{x} {y} ", if i == 0 { "M" } else { "L" });
        }
        if closed {
            d.push('Z');
        }
        let dash = if dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(
            self.body,
            r#"<path d="{}" fill="none" stroke="{stroke}" stroke-width="1.5"{dash}/>"#,
            d.trim_end()
        );
    }

    pub fn line(&mut self, a: Vec2, b: Vec2, stroke: &str) {
        self.polyline(&[a, b], false, stroke, false);
    }

    /// Line through `a` and `b` clipped to the canvas.
    pub fn full_line(&mut self, a: Vec2, b: Vec2, stroke: &str) {
        let d = b - a;
        let len = d.euclid_len();
        if len == 0.0 {
            return;
        }
        let t = 4.0 * self.half / len;
        self.polyline(&[a - d * t, a + d * t], false, stroke, true);
    }

    pub fn point(&mut self, p: Vec2, label: &str) {
        let (x, y) = self.map(p);
        let _ = writeln!(self.body, r#"<circle cx="{x}" cy="{y}" r="3" fill="black"/>"#);
        if !label.is_empty() {
            let _ = writeln!(
                self.body,
                r#"<text x="{}" y="{}" font-family="sans-serif" font-size="14">{label}</text>"#,
                round10(x + 5.0),
                round10(y - 5.0)
            );
        }
    }

    pub fn finish(self) -> String {
        let s = self.size;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.body
        )
    }
}
