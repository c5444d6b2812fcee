//! Exact maximum-weight oracles for the component-weighted subproblem
//! `max sum_i theta_i T_i(z)` over feasible `z`.
//!
//! Assignment is solved with the O(n^3) Hungarian method, general perfect
//! matching with a bitmask DP over vertex subsets, and tiny instances of
//! either kind can be enumerated exhaustively.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::instance::{Instance, ProblemKind, Solution};

/// Largest vertex count accepted by [`dp_perfect_matching`].
pub const DP_VERTEX_CAP: usize = 24;
/// Largest `n` accepted by assignment enumeration.
pub const ENUM_ASSIGNMENT_CAP: usize = 8;
/// Largest vertex count accepted by matching enumeration.
pub const ENUM_MATCHING_VERTEX_CAP: usize = 10;

/// Maximizes `sum_i theta_i T_i(z)` and returns the solution with its
/// objective value.
pub fn solve_weighted(inst: &Instance, theta: &[f64]) -> Result<(Solution, f64)> {
    if theta.len() != inst.n() {
        return Err(Error::DimensionMismatch {
            expected: inst.n(),
            found: theta.len(),
        });
    }
    match inst.kind() {
        ProblemKind::Assignment => {
            let n = inst.n();
            let weights: Vec<Vec<f64>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| theta[i] * inst.utility(i, j) as f64)
                        .collect()
                })
                .collect();
            let (columns, objective) = hungarian(&weights)?;
            Ok((Solution::Assignment { columns }, objective))
        }
        ProblemKind::Matching => {
            let dim = inst.dim();
            if dim > DP_VERTEX_CAP {
                return Err(capacity_for_dp(dim));
            }
            let n = inst.n();
            let weights: Vec<Vec<f64>> = (0..dim)
                .map(|i| {
                    (0..dim)
                        .map(|j| {
                            if i < n && i < j {
                                theta[i] * inst.utility(i, j) as f64
                            } else {
                                0.0
                            }
                        })
                        .collect()
                })
                .collect();
            let (mate, objective) = dp_perfect_matching(&weights)?;
            Ok((Solution::Matching { mate }, objective))
        }
    }
}

/// The plain maximum-weight problem (`theta = 1`).
pub fn max_weight(inst: &Instance) -> Result<(Solution, f64)> {
    solve_weighted(inst, &vec![1.0; inst.n()])
}

fn capacity_for_dp(size: usize) -> Error {
    Error::Capacity {
        what: "perfect matching DP",
        size,
        cap: DP_VERTEX_CAP,
        hint: " vertices; export the model with `export-lp` and use a MILP solver",
    }
}

/// Maximum-weight assignment. Returns `columns` with `columns[i]` the column
/// of row `i`, and the total weight.
///
/// Maximization is done by minimizing `shift - weight[i][j]` where `shift`
/// is the largest weight, so all costs are non-negative.
pub fn hungarian(weight: &[Vec<f64>]) -> Result<(Vec<usize>, f64)> {
    let n = weight.len();
    if let Some(row) = weight.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: row.len(),
        });
    }
    if n == 0 {
        return Ok((Vec::new(), 0.0));
    }
    let shift = weight
        .iter()
        .flatten()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    if !shift.is_finite() {
        return Err(Error::InvalidArgument("weights must be finite".into()));
    }
    let cost = |i: usize, j: usize| shift - weight[i][j];

    // 1-based potentials; column 0 is a virtual root.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut columns = vec![0usize; n];
    for j in 1..=n {
        columns[row_of[j] - 1] = j - 1;
    }
    let objective = columns.iter().enumerate().map(|(i, &j)| weight[i][j]).sum();
    Ok((columns, objective))
}

/// Maximum-weight perfect matching on `weight.len()` vertices by DP over
/// vertex subsets. Only entries `weight[i][j]` with `i < j` are read.
///
/// `best[S]` is the best perfect matching of the vertex set `S`; the lowest
/// vertex of `S` is paired with every other member in turn.
pub fn dp_perfect_matching(weight: &[Vec<f64>]) -> Result<(Vec<usize>, f64)> {
    let dim = weight.len();
    if let Some(row) = weight.iter().find(|r| r.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: row.len(),
        });
    }
    if !dim.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "perfect matching needs an even vertex count, got {dim}"
        )));
    }
    if dim > DP_VERTEX_CAP {
        return Err(capacity_for_dp(dim));
    }
    if dim == 0 {
        return Ok((Vec::new(), 0.0));
    }

    let states = 1usize << dim;
    let mut best = vec![f64::NEG_INFINITY; states];
    let mut partner = vec![0u8; states];
    best[0] = 0.0;
    for mask in 1..states {
        if mask.count_ones() % 2 != 0 {
            continue;
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let cand = weight[i][j] + best[rest & !(1 << j)];
            if cand > best[mask] {
                best[mask] = cand;
                partner[mask] = j as u8;
            }
        }
    }

    let full = states - 1;
    let mut mate = vec![0usize; dim];
    let mut mask = full;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        let j = partner[mask] as usize;
        mate[i] = j;
        mate[j] = i;
        mask &= !((1 << i) | (1 << j));
    }
    Ok((mate, best[full]))
}

/// Every feasible solution of a small instance, each exactly once.
///
/// Assignments are listed in lexicographic order of `columns`; matchings by
/// pairing the lowest free vertex with each later free vertex in turn.
pub fn enumerate_feasible(inst: &Instance) -> Result<Vec<Solution>> {
    match inst.kind() {
        ProblemKind::Assignment => {
            let n = inst.n();
            if n > ENUM_ASSIGNMENT_CAP {
                return Err(Error::Capacity {
                    what: "assignment enumeration",
                    size: n,
                    cap: ENUM_ASSIGNMENT_CAP,
                    hint: " components",
                });
            }
            Ok((0..n)
                .permutations(n)
                .map(|columns| Solution::Assignment { columns })
                .collect())
        }
        ProblemKind::Matching => {
            let dim = inst.dim();
            if dim > ENUM_MATCHING_VERTEX_CAP {
                return Err(Error::Capacity {
                    what: "matching enumeration",
                    size: dim,
                    cap: ENUM_MATCHING_VERTEX_CAP,
                    hint: " vertices",
                });
            }
            let mut out = Vec::new();
            let mut mate = vec![usize::MAX; dim];
            enumerate_matchings(&mut mate, &mut out);
            Ok(out)
        }
    }
}

fn enumerate_matchings(mate: &mut [usize], out: &mut Vec<Solution>) {
    let Some(i) = mate.iter().position(|&m| m == usize::MAX) else {
        out.push(Solution::Matching {
            mate: mate.to_vec(),
        });
        return;
    };
    for j in i + 1..mate.len() {
        if mate[j] != usize::MAX {
            continue;
        }
        mate[i] = j;
        mate[j] = i;
        enumerate_matchings(mate, out);
        mate[i] = usize::MAX;
        mate[j] = usize::MAX;
    }
}
