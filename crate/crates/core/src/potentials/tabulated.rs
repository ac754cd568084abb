//! Tabulated potentials: monotone cubic (Fritsch–Carlson) interpolation of
//! `(r, V)` samples and the plain-text sample file format.

use super::{PotentialError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated {
    r: Vec<f64>,
    v: Vec<f64>,
    slopes: Vec<f64>,
}

impl Tabulated {
    pub fn new(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < 4 {
            return Err(PotentialError::InvalidParameter(format!(
                "tabulated potential needs at least 4 samples, got {}",
                samples.len()
            )));
        }
        if !(samples[0].0 >= 0.0) {
            return Err(PotentialError::InvalidParameter(
                "first tabulated radius must be non-negative".into(),
            ));
        }
        for (i, pair) in samples.windows(2).enumerate() {
            if !(pair[1].0 > pair[0].0) {
                return Err(PotentialError::InvalidParameter(format!(
                    "radii must be strictly increasing (sample {})",
                    i + 2
                )));
            }
        }
        if samples.iter().any(|&(r, v)| !r.is_finite() || !v.is_finite()) {
            return Err(PotentialError::InvalidParameter("non-finite sample".into()));
        }
        let r: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let v: Vec<f64> = samples.iter().map(|s| s.1).collect();
        let slopes = fritsch_carlson_slopes(&r, &v);
        Ok(Self { r, v, slopes })
    }

    /// Parse two whitespace-separated columns `r V(r)`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut samples = Vec::new();
        for (index, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let mut number = || -> Result<f64> {
                let field = fields.next().ok_or_else(|| PotentialError::Parse {
                    line: index + 1,
                    message: "expected two columns".into(),
                })?;
                field.parse::<f64>().map_err(|e| PotentialError::Parse {
                    line: index + 1,
                    message: format!("{field:?}: {e}"),
                })
            };
            let r = number()?;
            let v = number()?;
            if fields.next().is_some() {
                return Err(PotentialError::Parse {
                    line: index + 1,
                    message: "expected exactly two columns".into(),
                });
            }
            samples.push((r, v));
        }
        Self::new(&samples)
    }

    pub fn radii(&self) -> &[f64] {
        &self.r
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    /// Interpolated value; constant below the first sample, zero beyond the
    /// last one.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.r.len();
        if x <= self.r[0] {
            return self.v[0];
        }
        if x > self.r[n - 1] {
            return 0.0;
        }
        let i = self.r.partition_point(|&ri| ri <= x).saturating_sub(1).min(n - 2);
        let h = self.r[i + 1] - self.r[i];
        let t = (x - self.r[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.v[i] + h10 * h * self.slopes[i] + h01 * self.v[i + 1] + h11 * h * self.slopes[i + 1]
    }
}

fn fritsch_carlson_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let secants: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / (x[i + 1] - x[i])).collect();
    let mut m = vec![0.0; n];
    m[0] = secants[0];
    m[n - 1] = secants[n - 2];
    for i in 1..n - 1 {
        m[i] = if secants[i - 1] * secants[i] <= 0.0 {
            0.0
        } else {
            0.5 * (secants[i - 1] + secants[i])
        };
    }
    for i in 0..n - 1 {
        if secants[i] == 0.0 {
            m[i] = 0.0;
            m[i + 1] = 0.0;
            continue;
        }
        let a = m[i] / secants[i];
        let b = m[i + 1] / secants[i];
        let s = a * a + b * b;
        if s > 9.0 {
            let tau = 3.0 / s.sqrt();
            m[i] = tau * a * secants[i];
            m[i + 1] = tau * b * secants[i];
        }
    }
    m
}
