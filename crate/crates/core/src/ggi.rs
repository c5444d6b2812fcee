//! Generalized Gini Index: weight schemes, Lorenz components and evaluation.
//!
//! A GGI is an ordered weighted average whose weights are strictly decreasing
//! and positive, so the smallest component receives the largest weight. It is
//! evaluated here through the Lorenz rewriting
//!
//! ```text
//! G_w(v) = sum_k w'_k * L_k(v),   w'_k = w_k - w_{k+1},  w_{n+1} = 0
//! ```
//!
//! where `L_k(v)` is the sum of the `k` smallest components of `v`.

use crate::error::{Error, Result};

/// Absolute tolerance for weight comparisons.
pub const WEIGHT_TOL: f64 = 1e-12;

/// Named families of GGI weights.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightScheme {
    /// `w_k = 1 / k^2`.
    InverseSquare,
    /// `w_k = (2(n - k) + 1) / n^2`, the classic Gini index.
    ClassicGini,
    Custom(Vec<f64>),
}

impl std::str::FromStr for WeightScheme {
    type Err = Error;

    /// Accepts `inverse-square`, `classic-gini` or `custom:w1,w2,...`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inverse-square" => Ok(WeightScheme::InverseSquare),
            "classic-gini" => Ok(WeightScheme::ClassicGini),
            other => {
                let list = other.strip_prefix("custom:").ok_or_else(|| {
                    Error::InvalidArgument(format!("unknown weight scheme `{other}`"))
                })?;
                let weights = list
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<f64>()
                            .map_err(|_| Error::InvalidArgument(format!("bad custom weight `{t}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(WeightScheme::Custom(weights))
            }
        }
    }
}

/// Validated GGI weights together with their consecutive differences.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    w: Vec<f64>,
    deltas: Vec<f64>,
}

impl WeightVector {
    /// Validates `w` as a GGI weight vector (strictly decreasing, positive).
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::InvalidWeights {
                index: 0,
                reason: "weight vector is empty".into(),
            });
        }
        for (i, &wi) in w.iter().enumerate() {
            if !wi.is_finite() || wi <= WEIGHT_TOL {
                return Err(Error::InvalidWeights {
                    index: i,
                    reason: format!("weight {wi} is not strictly positive"),
                });
            }
            if i > 0 && w[i - 1] - wi <= WEIGHT_TOL {
                return Err(Error::InvalidWeights {
                    index: i,
                    reason: format!(
                        "weights must be strictly decreasing ({} then {wi})",
                        w[i - 1]
                    ),
                });
            }
        }
        let deltas = (0..w.len())
            .map(|k| w[k] - w.get(k + 1).copied().unwrap_or(0.0))
            .collect();
        Ok(Self { w, deltas })
    }

    pub fn from_scheme(n: usize, scheme: &WeightScheme) -> Result<Self> {
        weight_scheme(n, scheme)
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    /// `w'_k = w_k - w_{k+1}` with `w_{n+1} = 0`.
    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }
}

pub fn weight_scheme(n: usize, scheme: &WeightScheme) -> Result<WeightVector> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "weight vector size must be >= 1".into(),
        ));
    }
    let w = match scheme {
        WeightScheme::InverseSquare => (1..=n).map(|k| 1.0 / (k * k) as f64).collect(),
        WeightScheme::ClassicGini => {
            let nn = (n * n) as f64;
            (1..=n).map(|k| (2 * (n - k) + 1) as f64 / nn).collect()
        }
        WeightScheme::Custom(list) => {
            if list.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: list.len(),
                });
            }
            list.clone()
        }
    };
    WeightVector::new(w)
}

/// Lorenz components: `out[k]` is the sum of the `k + 1` smallest entries.
pub fn lorenz(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted
        .iter()
        .scan(0.0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

/// GGI value computed in Lorenz form.
pub fn ggi(v: &[f64], w: &WeightVector) -> Result<f64> {
    check_len(v, w)?;
    Ok(lorenz(v).iter().zip(w.deltas()).map(|(l, d)| l * d).sum())
}

/// GGI value computed as a sorted weighted sum, `sum_k w_k v_(k)` with `v`
/// sorted increasingly.
pub fn ggi_sorted(v: &[f64], w: &WeightVector) -> Result<f64> {
    check_len(v, w)?;
    let mut sorted = v.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted.iter().zip(w.weights()).map(|(x, wk)| x * wk).sum())
}

fn check_len(v: &[f64], w: &WeightVector) -> Result<()> {
    if v.len() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: w.len(),
            found: v.len(),
        });
    }
    Ok(())
}

/// Moves `eps` from the richer component `j` to the poorer component `i`.
///
/// Requires `v[i] < v[j]` and `0 < eps < v[j] - v[i]`.
pub fn pigou_dalton_transfer(v: &[f64], i: usize, j: usize, eps: f64) -> Result<Vec<f64>> {
    let n = v.len();
    if i >= n || j >= n {
        return Err(Error::InvalidArgument(format!(
            "transfer indices ({i}, {j}) out of range for length {n}"
        )));
    }
    if v[i] >= v[j] {
        return Err(Error::InvalidArgument(format!(
            "transfer requires v[{i}] < v[{j}], got {} >= {}",
            v[i], v[j]
        )));
    }
    if !(eps > 0.0 && eps < v[j] - v[i]) {
        return Err(Error::InvalidArgument(format!(
            "transfer amount {eps} outside (0, {})",
            v[j] - v[i]
        )));
    }
    let mut out = v.to_vec();
    out[i] += eps;
    out[j] -= eps;
    Ok(out)
}
