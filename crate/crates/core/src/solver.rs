//! Alternating primal-dual heuristic for GGI-optimal combinatorial problems.
//!
//! Each iteration solves the component-weighted subproblem for the current
//! dual weights `y` (a feasible point, and for `y` in the dual polytope its
//! value is an upper bound on the optimal GGI), then moves `y` by a projected
//! subgradient step built from the `(r, d)` certificate of the new solution.
//! The incumbent with the highest GGI is returned.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::ggi::{ggi, WeightVector};
use crate::instance::{agent_values, Instance, Solution};
use crate::projection::{check_membership, project_dual, DualWeights, FEAS_TOL};
use crate::subsolvers::{max_weight, solve_weighted};

/// Tolerance used when matching dual weights against an extreme point.
pub const CERTIFICATE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitStrategy {
    /// `y_ik = (k / n) w'_k`: the barycentre of the dual polytope.
    Uniform,
    /// Extreme point matching the ranking of the max-weight solution.
    RankBased,
}

impl InitStrategy {
    pub fn as_str(self) -> &'static str {
        match self {
            InitStrategy::Uniform => "uniform",
            InitStrategy::RankBased => "rank-based",
        }
    }
}

impl fmt::Display for InitStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InitStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(InitStrategy::Uniform),
            "rank-based" => Ok(InitStrategy::RankBased),
            other => Err(Error::InvalidArgument(format!(
                "unknown init strategy `{other}`"
            ))),
        }
    }
}

/// Direction of the dual update `y' = y -/+ gamma * g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubgradientSign {
    /// `y' = y - gamma * g`. Adds weight to components valued above `r_k`.
    Paper,
    /// `y' = y + gamma * g`, a descent step on the Lagrangian bound.
    Descent,
}

impl SubgradientSign {
    pub fn as_str(self) -> &'static str {
        match self {
            SubgradientSign::Paper => "paper",
            SubgradientSign::Descent => "descent",
        }
    }
}

impl fmt::Display for SubgradientSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SubgradientSign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(SubgradientSign::Paper),
            "descent" => Ok(SubgradientSign::Descent),
            other => Err(Error::InvalidArgument(format!(
                "unknown subgradient sign `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub max_iter: usize,
    pub rho0: f64,
    /// Halve rho after this many consecutive iterations without a better
    /// upper bound.
    pub halving_patience: usize,
    /// Stop once `max |y_t - y_{t-1}|` drops to this value.
    pub y_change_tol: f64,
    pub init: InitStrategy,
    pub sign: SubgradientSign,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iter: 200,
            rho0: 2.0,
            halving_patience: 3,
            y_change_tol: 1e-6,
            init: InitStrategy::RankBased,
            sign: SubgradientSign::Paper,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iter < 1 {
            return Err(Error::InvalidArgument("max_iter must be >= 1".into()));
        }
        if !(self.rho0 > 0.0 && self.rho0.is_finite()) {
            return Err(Error::InvalidArgument("rho0 must be positive".into()));
        }
        if self.halving_patience < 1 {
            return Err(Error::InvalidArgument(
                "halving patience must be >= 1".into(),
            ));
        }
        if !(self.y_change_tol >= 0.0) {
            return Err(Error::InvalidArgument(
                "y change tolerance must be >= 0".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    MaxIterations,
    /// The dual weights stopped moving.
    Converged,
    /// The extreme-point optimality condition held.
    Certificate,
}

/// Per-iteration trace entry.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    /// GGI of the solution found in this iteration.
    pub ggi: f64,
    /// Lagrangian bound of the dual weights used in this iteration.
    pub upper_bound: f64,
    /// Step relaxation in effect for this iteration's dual update.
    pub rho: f64,
    pub step: f64,
}

#[derive(Debug, Clone)]
pub struct SolverReport {
    pub best_solution: Solution,
    pub best_values: Vec<f64>,
    pub best_ggi: f64,
    /// GGI of the max-weight solution when the rank-based start was used.
    pub initial_ggi: Option<f64>,
    pub iterations: usize,
    pub trace: Vec<IterationRecord>,
    pub certificate: bool,
    pub stop_reason: StopReason,
    pub wall_time: Duration,
    pub config: SolverConfig,
}

impl SolverReport {
    pub fn upper_bounds(&self) -> Vec<f64> {
        self.trace.iter().map(|r| r.upper_bound).collect()
    }

    pub fn ggi_values(&self) -> Vec<f64> {
        self.trace.iter().map(|r| r.ggi).collect()
    }

    /// Tightest upper bound seen.
    pub fn best_upper_bound(&self) -> f64 {
        self.trace
            .iter()
            .map(|r| r.upper_bound)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Optimal `(r, d)` for the Lorenz dual given fixed component values.
#[derive(Debug, Clone, PartialEq)]
pub struct RdPair {
    /// `r[k]` is the `(k+1)`-th smallest component value.
    pub r: Vec<f64>,
    /// `d[[i, k]] = max(0, r[k] - T_i)`.
    pub d: Array2<f64>,
}

impl RdPair {
    /// `sum_k w'_k ((k+1) r_k - sum_i d_ik)`.
    pub fn objective(&self, deltas: &[f64]) -> f64 {
        deltas
            .iter()
            .enumerate()
            .map(|(k, wk)| wk * ((k + 1) as f64 * self.r[k] - self.d.column(k).sum()))
            .sum()
    }
}

/// Component indices sorted by increasing value, ties by index.
pub fn ascending_order(t: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..t.len()).collect();
    order.sort_by(|&a, &b| t[a].total_cmp(&t[b]).then(a.cmp(&b)));
    order
}

pub fn reconstruct_rd(t: &[f64]) -> RdPair {
    let n = t.len();
    let order = ascending_order(t);
    let r: Vec<f64> = order.iter().map(|&i| t[i]).collect();
    let d = Array2::from_shape_fn((n, n), |(i, k)| (r[k] - t[i]).max(0.0));
    RdPair { r, d }
}

/// `g_ik = r_k - d_ik - T_i`. With `d` reconstructed from `T` this is
/// `min(r_k - T_i, 0)`, which is how it is evaluated.
pub fn subgradient(t: &[f64], rd: &RdPair) -> Array2<f64> {
    let n = t.len();
    Array2::from_shape_fn((n, n), |(i, k)| (rd.r[k] - t[i]).min(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step {
    Move(f64),
    /// Zero subgradient: the dual weights stay put.
    Stationary,
}

/// `gamma = (val - best) * rho / sqn`.
pub fn step_size(val_zt: f64, bestvalue: f64, sqn: f64, rho: f64) -> Step {
    if sqn <= 0.0 {
        Step::Stationary
    } else {
        Step::Move((val_zt - bestvalue) * rho / sqn)
    }
}

/// Barycentre of the dual polytope, `y_ik = (k / n) w'_k`.
pub fn uniform_dual(deltas: &[f64]) -> DualWeights {
    let n = deltas.len();
    DualWeights::new_unchecked(Array2::from_shape_fn((n, n), |(_, k)| {
        (k + 1) as f64 / n as f64 * deltas[k]
    }))
}

/// Extreme point giving `w'_k` to the `k` smallest components of `t`.
pub fn rank_dual(t: &[f64], deltas: &[f64]) -> DualWeights {
    let n = t.len();
    let mut rank = vec![0usize; n];
    for (pos, i) in ascending_order(t).into_iter().enumerate() {
        rank[i] = pos;
    }
    DualWeights::new_unchecked(Array2::from_shape_fn((n, n), |(i, k)| {
        if rank[i] <= k {
            deltas[k]
        } else {
            0.0
        }
    }))
}

/// Starting dual weights, with the max-weight incumbent when it was computed.
pub struct DualInit {
    pub y: DualWeights,
    pub incumbent: Option<(Solution, Vec<f64>)>,
}

pub fn init_dual(inst: &Instance, w: &WeightVector, strategy: InitStrategy) -> Result<DualInit> {
    check_dims(inst, w)?;
    match strategy {
        InitStrategy::Uniform => Ok(DualInit {
            y: uniform_dual(w.deltas()),
            incumbent: None,
        }),
        InitStrategy::RankBased => {
            let (sol, _) = max_weight(inst)?;
            let t = agent_values(inst, &sol)?;
            Ok(DualInit {
                y: rank_dual(&t, w.deltas()),
                incumbent: Some((sol, t)),
            })
        }
    }
}

fn check_dims(inst: &Instance, w: &WeightVector) -> Result<()> {
    if inst.n() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: inst.n(),
            found: w.len(),
        });
    }
    Ok(())
}

/// Lagrangian bound `max_z sum_i theta_i(y) T_i(z)` for `y` in the dual
/// polytope; at least the optimal GGI value.
pub fn upper_bound(inst: &Instance, y: &DualWeights, w: &WeightVector) -> Result<f64> {
    check_dims(inst, w)?;
    check_membership(y.matrix().view(), w.deltas(), FEAS_TOL)?;
    Ok(solve_weighted(inst, &y.theta())?.1)
}

/// Extreme-point optimality condition: every column `k` of `y` puts exactly
/// `w'_k` on a set of `k` components with the smallest values of `t` and zero
/// elsewhere. Ties in `t` may be split either way.
pub fn certificate(y: &DualWeights, t: &[f64], deltas: &[f64]) -> bool {
    let n = t.len();
    let m = y.matrix();
    if m.nrows() != n || m.ncols() != n || deltas.len() != n {
        return false;
    }
    for k in 0..n {
        let cap = deltas[k];
        let mut max_selected = f64::NEG_INFINITY;
        let mut min_rest = f64::INFINITY;
        let mut count = 0;
        for i in 0..n {
            let v = m[[i, k]];
            if (v - cap).abs() <= CERTIFICATE_TOL {
                count += 1;
                max_selected = max_selected.max(t[i]);
            } else if v.abs() <= CERTIFICATE_TOL {
                min_rest = min_rest.min(t[i]);
            } else {
                return false;
            }
        }
        if count != k + 1 || max_selected > min_rest {
            return false;
        }
    }
    true
}

/// Worst-case ratio of the max-weight solution's GGI to the optimum:
/// `max(2 w'_n / ((n+1) w'_max), n min(T) / sum(T))`.
pub fn maxweight_ratio_bound(t_bar: &[f64], deltas: &[f64]) -> Result<f64> {
    let n = t_bar.len();
    if n == 0 || deltas.len() != n {
        return Err(Error::DimensionMismatch {
            expected: deltas.len(),
            found: n,
        });
    }
    let total: f64 = t_bar.iter().sum();
    if !(total > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "ratio bound needs a positive total utility, got {total}"
        )));
    }
    let dmax = deltas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let first = 2.0 * deltas[n - 1] / ((n + 1) as f64 * dmax);
    let tmin = t_bar.iter().copied().fold(f64::INFINITY, f64::min);
    let second = n as f64 * tmin / total;
    Ok(first.max(second))
}

/// Runs the alternating primal-dual heuristic.
pub fn solve(inst: &Instance, w: &WeightVector, config: &SolverConfig) -> Result<SolverReport> {
    config.validate()?;
    check_dims(inst, w)?;
    let start = Instant::now();
    let deltas = w.deltas();

    let DualInit { mut y, incumbent } = init_dual(inst, w, config.init)?;
    let mut best: Option<(Solution, Vec<f64>, f64)> = None;
    let mut initial_ggi = None;
    if let Some((sol, t)) = incumbent {
        let g = ggi(&t, w)?;
        initial_ggi = Some(g);
        best = Some((sol, t, g));
    }

    let mut rho = config.rho0;
    let mut best_ub = f64::INFINITY;
    let mut streak = 0usize;
    let mut trace = Vec::with_capacity(config.max_iter);
    let mut certified = false;
    let mut stop_reason = StopReason::MaxIterations;

    for _ in 0..config.max_iter {
        let theta = y.theta();
        let (sol, val) = solve_weighted(inst, &theta)?;
        let t = agent_values(inst, &sol)?;
        let g_t = ggi(&t, w)?;
        let fires = certificate(&y, &t, deltas);

        if best.as_ref().is_none_or(|b| g_t > b.2) {
            best = Some((sol, t.clone(), g_t));
        }
        let bestvalue = best.as_ref().map(|b| b.2).unwrap_or(g_t);

        if val < best_ub {
            best_ub = val;
            streak = 0;
        } else {
            streak += 1;
            if streak == config.halving_patience {
                rho /= 2.0;
                streak = 0;
            }
        }

        let mut record = IterationRecord {
            ggi: g_t,
            upper_bound: val,
            rho,
            step: 0.0,
        };

        if fires {
            certified = true;
            stop_reason = StopReason::Certificate;
            trace.push(record);
            break;
        }

        let rd = reconstruct_rd(&t);
        let g = subgradient(&t, &rd);
        let sqn: f64 = g.iter().map(|x| x * x).sum();
        let gamma = match step_size(val, bestvalue, sqn, rho) {
            Step::Move(gamma) => gamma,
            Step::Stationary => 0.0,
        };
        record.step = gamma;
        trace.push(record);

        // val >= optimum >= bestvalue, so a non-positive step means the gap closed
        if gamma <= 0.0 {
            stop_reason = StopReason::Converged;
            break;
        }
        let moved = match config.sign {
            SubgradientSign::Paper => y.matrix() - &(&g * gamma),
            SubgradientSign::Descent => y.matrix() + &(&g * gamma),
        };
        let next = project_dual(moved.view(), deltas)?;
        let change = (next.matrix() - y.matrix())
            .iter()
            .fold(0.0f64, |acc, v| acc.max(v.abs()));
        y = next;
        if change <= config.y_change_tol {
            stop_reason = StopReason::Converged;
            break;
        }
    }

    let (best_solution, best_values, best_ggi) = best.expect("at least one iteration always runs");
    Ok(SolverReport {
        best_solution,
        best_values,
        best_ggi,
        initial_ggi,
        iterations: trace.len(),
        trace,
        certificate: certified,
        stop_reason,
        wall_time: start.elapsed(),
        config: config.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ggi::{weight_scheme, WeightScheme};
    use crate::instance::{gen_assignment, gen_matching};
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn inverse_square(n: usize) -> WeightVector {
        weight_scheme(n, &WeightScheme::InverseSquare).unwrap()
    }

    #[test]
    fn uniform_init_two() {
        let w = inverse_square(2);
        let inst = Instance::assignment(vec![vec![5, 1], vec![2, 3]]).unwrap();
        let init = init_dual(&inst, &w, InitStrategy::Uniform).unwrap();
        assert_eq!(init.y.matrix(), &array![[0.375, 0.25], [0.375, 0.25]]);
        assert!(init.incumbent.is_none());
        let again = project_dual(init.y.matrix().view(), w.deltas()).unwrap();
        assert!((again.matrix() - init.y.matrix())
            .iter()
            .all(|v| v.abs() < 1e-12));
        assert!(!certificate(&init.y, &[5.0, 3.0], w.deltas()));
    }

    #[test]
    fn rank_init_two() {
        let w = inverse_square(2);
        let inst = Instance::assignment(vec![vec![5, 1], vec![2, 3]]).unwrap();
        let init = init_dual(&inst, &w, InitStrategy::RankBased).unwrap();
        let (sol, t) = init.incumbent.unwrap();
        assert_eq!(
            sol,
            Solution::Assignment {
                columns: vec![0, 1]
            }
        );
        assert_eq!(t, vec![5.0, 3.0]);
        assert_eq!(init.y.matrix(), &array![[0.0, 0.25], [0.75, 0.25]]);
        assert!(certificate(&init.y, &t, w.deltas()));
        let again = project_dual(init.y.matrix().view(), w.deltas()).unwrap();
        assert_eq!(again.matrix(), init.y.matrix());
    }

    #[test]
    fn rd_examples() {
        let rd = reconstruct_rd(&[5.0, 2.0, 9.0]);
        assert_eq!(rd.r, vec![2.0, 5.0, 9.0]);
        assert_eq!(
            rd.d,
            array![[0.0, 0.0, 4.0], [0.0, 3.0, 7.0], [0.0, 0.0, 0.0]]
        );

        let rd = reconstruct_rd(&[4.0; 3]);
        assert_eq!(rd.r, vec![4.0; 3]);
        assert!(rd.d.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn rd_objective_equals_ggi() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=9);
            let t: Vec<f64> = (0..n).map(|_| rng.gen_range(-50..=150) as f64).collect();
            let w = inverse_square(n);
            let rd = reconstruct_rd(&t);
            for i in 0..n {
                for k in 0..n {
                    assert!(rd.r[k] - rd.d[[i, k]] <= t[i] + 1e-12);
                    assert!(rd.d[[i, k]] >= 0.0);
                }
            }
            assert!((rd.objective(w.deltas()) - ggi(&t, &w).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn subgradient_examples() {
        let t = [5.0, 2.0];
        let rd = RdPair {
            r: vec![2.0, 5.0],
            d: array![[0.0, 0.0], [0.0, 3.0]],
        };
        assert_eq!(subgradient(&t, &rd), array![[-3.0, 0.0], [0.0, 0.0]]);
        assert_eq!(reconstruct_rd(&t), rd);

        let c = [3.0; 4];
        assert!(subgradient(&c, &reconstruct_rd(&c))
            .iter()
            .all(|&g| g == 0.0));

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let t: Vec<f64> = (0..6).map(|_| rng.gen_range(-10.0..10.0)).collect();
            let rd = reconstruct_rd(&t);
            let g = subgradient(&t, &rd);
            for ((i, k), &v) in g.indexed_iter() {
                assert!(v <= 0.0);
                assert_eq!(v, (rd.r[k] - t[i]).min(0.0));
            }
        }
    }

    #[test]
    fn step_examples() {
        assert_eq!(step_size(10.0, 8.0, 4.0, 1.0), Step::Move(0.5));
        assert_eq!(step_size(7.0, 7.0, 3.0, 2.0), Step::Move(0.0));
        assert_eq!(step_size(10.0, 8.0, 0.0, 1.0), Step::Stationary);
    }

    #[test]
    fn bound_single_component() {
        let inst = Instance::assignment(vec![vec![7]]).unwrap();
        let w = WeightVector::new(vec![0.6]).unwrap();
        let y = project_dual(array![[3.0]].view(), w.deltas()).unwrap();
        assert!((upper_bound(&inst, &y, &w).unwrap() - 0.6 * 7.0).abs() < 1e-12);
    }

    #[test]
    fn bound_rejects_outside_polytope() {
        let inst = Instance::assignment(vec![vec![5, 1], vec![2, 3]]).unwrap();
        let w = inverse_square(2);
        let y = DualWeights::new_unchecked(array![[1.0, 0.0], [0.0, 0.0]]);
        assert!(matches!(
            upper_bound(&inst, &y, &w),
            Err(Error::OutsidePolytope(_))
        ));
    }

    #[test]
    fn uniform_bound_is_scaled_max_weight() {
        for seed in 0..10 {
            let inst = gen_assignment(6, 30, seed).unwrap();
            let w = inverse_square(6);
            let y = uniform_dual(w.deltas());
            let scale: f64 = w
                .deltas()
                .iter()
                .enumerate()
                .map(|(k, d)| (k + 1) as f64 * d)
                .sum::<f64>()
                / 6.0;
            let (_, mw) = max_weight(&inst).unwrap();
            assert!((upper_bound(&inst, &y, &w).unwrap() - scale * mw).abs() < 1e-9);
        }
    }

    #[test]
    fn certificate_cases() {
        let w = WeightVector::new(vec![2.0]).unwrap();
        assert!(certificate(
            &rank_dual(&[9.0], w.deltas()),
            &[9.0],
            w.deltas()
        ));
        let w3 = inverse_square(3);
        let t = [4.0, 1.0, 7.0];
        let y = rank_dual(&t, w3.deltas());
        assert!(certificate(&y, &t, w3.deltas()));
        assert!(!certificate(&y, &[1.0, 4.0, 7.0], w3.deltas()));
        assert!(!certificate(&uniform_dual(w3.deltas()), &t, w3.deltas()));
        // ties may be split either way
        let tied = [3.0, 3.0, 5.0];
        let alt = rank_dual(&[3.0, 2.0, 5.0], w3.deltas());
        assert!(certificate(&alt, &tied, w3.deltas()));
    }

    #[test]
    fn ratio_bound_examples() {
        assert_eq!(maxweight_ratio_bound(&[12.0], &[0.3]).unwrap(), 1.0);
        let w = inverse_square(4);
        assert!((maxweight_ratio_bound(&[6.0; 4], w.deltas()).unwrap() - 1.0).abs() < 1e-12);
        let r = maxweight_ratio_bound(&[9.0, 1.0], &[0.75, 0.25]).unwrap();
        assert!((r - 2.0 / 9.0).abs() < 1e-12);
        assert!(maxweight_ratio_bound(&[0.0, 0.0], &[0.75, 0.25]).is_err());
    }

    #[test]
    fn single_component_solve() {
        let inst = Instance::assignment(vec![vec![42]]).unwrap();
        let w = WeightVector::new(vec![1.0]).unwrap();
        for init in [InitStrategy::Uniform, InitStrategy::RankBased] {
            let cfg = SolverConfig {
                init,
                ..SolverConfig::default()
            };
            let rep = solve(&inst, &w, &cfg).unwrap();
            assert_eq!(rep.best_ggi, 42.0);
            assert!(rep.certificate);
            assert_eq!(rep.iterations, 1);
        }
    }

    #[test]
    fn rank_based_never_worse_than_max_weight() {
        for seed in 0..20 {
            let inst = gen_assignment(8, 20, seed).unwrap();
            let w = inverse_square(8);
            let rep = solve(&inst, &w, &SolverConfig::default()).unwrap();
            assert!(rep.best_ggi >= rep.initial_ggi.unwrap());
        }
    }

    #[test]
    fn report_invariants() {
        for (seed, sign) in [(1, SubgradientSign::Paper), (2, SubgradientSign::Descent)] {
            for inst in [
                gen_assignment(10, 30, seed).unwrap(),
                gen_matching(5, 30, seed).unwrap(),
            ] {
                let w = inverse_square(inst.n());
                let cfg = SolverConfig {
                    sign,
                    init: InitStrategy::Uniform,
                    ..SolverConfig::default()
                };
                let rep = solve(&inst, &w, &cfg).unwrap();
                let max_iter_ggi = rep
                    .ggi_values()
                    .into_iter()
                    .fold(f64::NEG_INFINITY, f64::max);
                assert_eq!(rep.best_ggi, max_iter_ggi);
                for r in &rep.trace {
                    assert!(r.ggi <= r.upper_bound + 1e-6);
                }
                assert!((ggi(&rep.best_values, &w).unwrap() - rep.best_ggi).abs() < 1e-12);
                assert_eq!(
                    agent_values(&inst, &rep.best_solution).unwrap(),
                    rep.best_values
                );

                // rho replays from the upper-bound sequence alone
                let mut best = f64::INFINITY;
                let mut streak = 0;
                let mut halvings = 0;
                for r in &rep.trace {
                    if r.upper_bound < best {
                        best = r.upper_bound;
                        streak = 0;
                    } else {
                        streak += 1;
                        if streak == cfg.halving_patience {
                            halvings += 1;
                            streak = 0;
                        }
                    }
                    assert_eq!(r.rho, cfg.rho0 * 0.5f64.powi(halvings));
                }
            }
        }
    }

    #[test]
    fn deterministic_modulo_time() {
        let inst = gen_assignment(12, 10, 3).unwrap();
        let w = inverse_square(12);
        let cfg = SolverConfig::default();
        let a = solve(&inst, &w, &cfg).unwrap();
        let b = solve(&inst, &w, &cfg).unwrap();
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.best_solution, b.best_solution);
        assert_eq!(a.stop_reason, b.stop_reason);
    }

    #[test]
    fn config_validation() {
        let inst = Instance::assignment(vec![vec![1]]).unwrap();
        let w = WeightVector::new(vec![1.0]).unwrap();
        for bad in [
            SolverConfig {
                max_iter: 0,
                ..SolverConfig::default()
            },
            SolverConfig {
                rho0: 0.0,
                ..SolverConfig::default()
            },
            SolverConfig {
                halving_patience: 0,
                ..SolverConfig::default()
            },
        ] {
            assert!(solve(&inst, &w, &bad).is_err());
        }
        assert!(solve(&inst, &inverse_square(2), &SolverConfig::default()).is_err());
    }
}
