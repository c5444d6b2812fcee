//! Euclidean projection onto the dual-weight polytope
//!
//! ```text
//! L = { y in R^{n x n} : 0 <= y_ik <= w'_k,  sum_i y_ik = k w'_k }
//! ```
//!
//! The polytope is a product over columns `k` of capped simplices scaled by
//! `w'_k`, so the projection splits into `n` independent capped-simplex
//! projections of the rescaled columns `y_.k / w'_k` with budget `k`.

use ndarray::{Array2, ArrayView2, Axis};

use crate::error::{Error, Result};

/// Membership tolerance for the box and sum constraints.
pub const FEAS_TOL: f64 = 1e-9;

const ORACLE_CAP: usize = 6;

/// Dual weights `y` (equivalently the Lagrange multipliers), indexed
/// `[component, rank]` with ranks 0-based (rank `k` has budget `k + 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct DualWeights(Array2<f64>);

impl DualWeights {
    /// Wraps a matrix after checking it lies in the polytope for `deltas`.
    pub fn new(y: Array2<f64>, deltas: &[f64]) -> Result<Self> {
        check_membership(y.view(), deltas, FEAS_TOL)?;
        Ok(Self(y))
    }

    pub(crate) fn new_unchecked(y: Array2<f64>) -> Self {
        Self(y)
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> Array2<f64> {
        self.0
    }

    /// Component weights `theta_i = sum_k y_ik`.
    pub fn theta(&self) -> Vec<f64> {
        self.0.sum_axis(Axis(1)).to_vec()
    }

    pub fn is_member(&self, deltas: &[f64], tol: f64) -> bool {
        check_membership(self.0.view(), deltas, tol).is_ok()
    }
}

/// Checks `0 <= y_ik <= w'_k` and `sum_i y_ik = (k+1) w'_k` to within `tol`.
pub fn check_membership(y: ArrayView2<f64>, deltas: &[f64], tol: f64) -> Result<()> {
    let n = deltas.len();
    if y.nrows() != n || y.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: y.nrows().max(y.ncols()),
        });
    }
    for (k, col) in y.axis_iter(Axis(1)).enumerate() {
        let cap = deltas[k];
        if let Some((i, &val)) = col
            .iter()
            .enumerate()
            .find(|&(_, &val)| !(val >= -tol && val <= cap + tol))
        {
            return Err(Error::OutsidePolytope(format!(
                "y[{i}][{k}] = {val} outside [0, {cap}]"
            )));
        }
        let sum: f64 = col.sum();
        let target = (k + 1) as f64 * cap;
        if (sum - target).abs() > tol * (1.0 + target.abs()) {
            return Err(Error::OutsidePolytope(format!(
                "column {k} sums to {sum}, expected {target}"
            )));
        }
    }
    Ok(())
}

/// `argmin_{x in [0,1]^n, sum x = k} ||v - x||`.
///
/// The solution is `x_i = clamp(v_i - tau, 0, 1)` for the threshold `tau`
/// where the (piecewise linear, non-increasing) total equals `k`. The
/// threshold is located by binary search over the sorted breakpoints
/// `{v_i, v_i - 1}` and linear interpolation inside the bracketing segment.
pub fn project_capped_simplex(v: &[f64], k: usize) -> Result<Vec<f64>> {
    let n = v.len();
    if k < 1 || k > n {
        return Err(Error::InvalidArgument(format!(
            "capped simplex budget {k} outside [1, {n}]"
        )));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument(
            "projection input must be finite".into(),
        ));
    }
    let budget = k as f64;
    let total = |tau: f64| v.iter().map(|&x| (x - tau).clamp(0.0, 1.0)).sum::<f64>();

    let mut breaks: Vec<f64> = v.iter().flat_map(|&x| [x - 1.0, x]).collect();
    breaks.sort_by(f64::total_cmp);

    // total(breaks[0]) == n >= k and total(breaks[last]) == 0 < k.
    let (mut lo, mut hi) = (0usize, breaks.len() - 1);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if total(breaks[mid]) >= budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (f_lo, f_hi) = (total(breaks[lo]), total(breaks[hi]));
    let tau = if f_lo <= budget || f_lo == f_hi {
        breaks[lo]
    } else {
        breaks[lo] + (f_lo - budget) * (breaks[hi] - breaks[lo]) / (f_lo - f_hi)
    };

    let mut x: Vec<f64> = v.iter().map(|&vi| (vi - tau).clamp(0.0, 1.0)).collect();
    snap_sum(&mut x, budget);
    Ok(x)
}

/// Pushes a tiny float residual of the sum onto interior coordinates.
fn snap_sum(x: &mut [f64], budget: f64) {
    let residual = budget - x.iter().sum::<f64>();
    if residual == 0.0 || residual.abs() > FEAS_TOL {
        return;
    }
    let interior: Vec<usize> = (0..x.len()).filter(|&i| x[i] > 0.0 && x[i] < 1.0).collect();
    if interior.is_empty() {
        return;
    }
    let share = residual / interior.len() as f64;
    for i in interior {
        x[i] = (x[i] + share).clamp(0.0, 1.0);
    }
}

/// Exact capped-simplex projection by enumerating all `3^n` active sets.
///
/// Each coordinate is fixed at 0, fixed at 1, or free. With free set `F` and
/// upper set `U`, stationarity gives `x_F = v_F - tau` with
/// `tau = (sum_F v + |U| - k) / |F|`; a pattern is kept when the free values
/// lie in `[0, 1]` and the multiplier signs hold (`v_i <= tau` on the lower
/// set, `v_i >= tau + 1` on the upper set). Intended for verification only.
pub fn qp_projection_oracle(v: &[f64], k: usize) -> Result<Vec<f64>> {
    let n = v.len();
    if n > ORACLE_CAP {
        return Err(Error::Capacity {
            what: "projection oracle",
            size: n,
            cap: ORACLE_CAP,
            hint: " coordinates",
        });
    }
    if k < 1 || k > n {
        return Err(Error::InvalidArgument(format!(
            "capped simplex budget {k} outside [1, {n}]"
        )));
    }
    const TOL: f64 = 1e-12;
    let mut best: Option<(f64, Vec<f64>)> = None;
    let patterns = 3usize.pow(n as u32);
    for code in 0..patterns {
        // 0 = lower, 1 = upper, 2 = free
        let mut state = vec![0u8; n];
        let mut c = code;
        for s in state.iter_mut() {
            *s = (c % 3) as u8;
            c /= 3;
        }
        let uppers = state.iter().filter(|&&s| s == 1).count();
        let free: Vec<usize> = (0..n).filter(|&i| state[i] == 2).collect();

        let (x, tau_range) = if free.is_empty() {
            if uppers != k {
                continue;
            }
            let x: Vec<f64> = state
                .iter()
                .map(|&s| if s == 1 { 1.0 } else { 0.0 })
                .collect();
            (x, None)
        } else {
            let sum_free: f64 = free.iter().map(|&i| v[i]).sum();
            let tau = (sum_free + uppers as f64 - k as f64) / free.len() as f64;
            let mut x = vec![0.0; n];
            for i in 0..n {
                x[i] = match state[i] {
                    0 => 0.0,
                    1 => 1.0,
                    _ => v[i] - tau,
                };
            }
            (x, Some(tau))
        };

        let consistent = match tau_range {
            Some(tau) => (0..n).all(|i| match state[i] {
                0 => v[i] <= tau + TOL,
                1 => v[i] >= tau + 1.0 - TOL,
                _ => x[i] >= -TOL && x[i] <= 1.0 + TOL,
            }),
            None => {
                let max_lower = (0..n)
                    .filter(|&i| state[i] == 0)
                    .map(|i| v[i])
                    .fold(f64::NEG_INFINITY, f64::max);
                let min_upper = (0..n)
                    .filter(|&i| state[i] == 1)
                    .map(|i| v[i] - 1.0)
                    .fold(f64::INFINITY, f64::min);
                max_lower <= min_upper + TOL
            }
        };
        if !consistent {
            continue;
        }
        let dist: f64 = v.iter().zip(&x).map(|(a, b)| (a - b) * (a - b)).sum();
        if best.as_ref().is_none_or(|(d, _)| dist < *d) {
            best = Some((dist, x));
        }
    }
    best.map(|(_, x)| x)
        .ok_or_else(|| Error::InvalidArgument("no KKT-consistent pattern found".into()))
}

/// Projects `yraw` onto the dual-weight polytope for `deltas`.
pub fn project_dual(yraw: ArrayView2<f64>, deltas: &[f64]) -> Result<DualWeights> {
    let n = deltas.len();
    if yraw.nrows() != n || yraw.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: yraw.nrows().max(yraw.ncols()),
        });
    }
    if let Some(k) = deltas.iter().position(|&d| !(d > 0.0)) {
        return Err(Error::InvalidWeights {
            index: k,
            reason: format!("weight difference {} must be positive", deltas[k]),
        });
    }
    let mut out = Array2::<f64>::zeros((n, n));
    for (k, col) in yraw.axis_iter(Axis(1)).enumerate() {
        let cap = deltas[k];
        let scaled: Vec<f64> = col.iter().map(|&x| x / cap).collect();
        let proj = project_capped_simplex(&scaled, k + 1)?;
        for (i, p) in proj.into_iter().enumerate() {
            out[[i, k]] = p * cap;
        }
    }
    Ok(DualWeights::new_unchecked(out))
}
