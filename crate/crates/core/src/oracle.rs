//! Ground truth for small instances and export of the linearized 0-1 program.
//!
//! The exported model is the Lorenz-dual linearization of GGI maximization:
//!
//! ```text
//! max  sum_k w'_k (k r_k - sum_i d_ik)
//! s.t. feasibility of z (degree equalities)
//!      r_k - d_ik - sum_j u_ij z_ij <= 0     for all i, k
//!      d_ik >= 0,  r_k free,  z binary
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::Result;
use crate::ggi::{ggi, WeightVector};
use crate::instance::{agent_values, Instance, ProblemKind, Solution};
use crate::subsolvers::enumerate_feasible;

/// Terms per line before an LP expression wraps.
const TERMS_PER_LINE: usize = 8;

/// Exhaustive GGI maximization. Ties keep the first solution in enumeration
/// order.
pub fn ggi_brute_force(inst: &Instance, w: &WeightVector) -> Result<(Solution, f64)> {
    let mut best: Option<(Solution, f64)> = None;
    for sol in enumerate_feasible(inst)? {
        let value = ggi(&agent_values(inst, &sol)?, w)?;
        if best.as_ref().is_none_or(|(_, b)| value > *b) {
            best = Some((sol, value));
        }
    }
    Ok(best.expect("every instance has a feasible solution"))
}

/// Writes the model for `inst` in LP text format to `path`.
pub fn export_ip(inst: &Instance, w: &WeightVector, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_lp(inst, w)?)?;
    Ok(())
}

struct Expr {
    terms: Vec<String>,
}

impl Expr {
    fn new() -> Self {
        Self { terms: Vec::new() }
    }

    fn add(&mut self, coef: f64, var: String) {
        if coef == 0.0 {
            return;
        }
        let sign = if coef < 0.0 { "-" } else { "+" };
        let mag = coef.abs();
        let term = if mag == 1.0 {
            format!("{sign} {var}")
        } else {
            format!("{sign} {mag} {var}")
        };
        self.terms.push(term);
    }

    fn render(&self, out: &mut String, label: &str, tail: &str) {
        let _ = write!(out, " {label}:");
        for (idx, term) in self.terms.iter().enumerate() {
            if idx > 0 && idx % TERMS_PER_LINE == 0 {
                out.push_str("\n   ");
            }
            // a leading "+" is legal but noisy
            let t = if idx == 0 {
                term.trim_start_matches("+ ")
            } else {
                term
            };
            out.push(' ');
            out.push_str(t);
        }
        out.push_str(tail);
        out.push('\n');
    }
}

/// Renders the model. Variables are 1-based: `z_i_j`, `r_k`, `d_i_k`.
/// Degree constraints come first by vertex index, then linking constraints
/// in `(i, k)` order.
pub fn format_lp(inst: &Instance, w: &WeightVector) -> Result<String> {
    let n = inst.n();
    if w.len() != n {
        return Err(crate::error::Error::DimensionMismatch {
            expected: n,
            found: w.len(),
        });
    }
    let deltas = w.deltas();
    let dim = inst.dim();
    let z_vars: Vec<(usize, usize)> = match inst.kind() {
        ProblemKind::Assignment => (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect(),
        ProblemKind::Matching => (0..dim)
            .flat_map(|i| (i + 1..dim).map(move |j| (i, j)))
            .collect(),
    };
    let z = |i: usize, j: usize| format!("z_{}_{}", i + 1, j + 1);

    let mut out = String::new();
    let _ = writeln!(out, "\\ GGI-optimal {} with n = {n}", inst.kind());
    if let Some(name) = inst.name() {
        let _ = writeln!(out, "\\ instance {name}");
    }

    out.push_str("Maximize\n");
    let mut obj = Expr::new();
    for k in 0..n {
        obj.add((k + 1) as f64 * deltas[k], format!("r_{}", k + 1));
    }
    for k in 0..n {
        for i in 0..n {
            obj.add(-deltas[k], format!("d_{}_{}", i + 1, k + 1));
        }
    }
    obj.render(&mut out, "obj", "");

    out.push_str("Subject To\n");
    match inst.kind() {
        ProblemKind::Assignment => {
            for i in 0..n {
                let mut e = Expr::new();
                (0..n).for_each(|j| e.add(1.0, z(i, j)));
                e.render(&mut out, &format!("row_{}", i + 1), " = 1");
            }
            for j in 0..n {
                let mut e = Expr::new();
                (0..n).for_each(|i| e.add(1.0, z(i, j)));
                e.render(&mut out, &format!("col_{}", j + 1), " = 1");
            }
        }
        ProblemKind::Matching => {
            for v in 0..dim {
                let mut e = Expr::new();
                for &(a, b) in z_vars.iter().filter(|&&(a, b)| a == v || b == v) {
                    e.add(1.0, z(a, b));
                }
                e.render(&mut out, &format!("deg_{}", v + 1), " = 1");
            }
        }
    }
    for i in 0..n {
        for k in 0..n {
            let mut e = Expr::new();
            e.add(1.0, format!("r_{}", k + 1));
            e.add(-1.0, format!("d_{}_{}", i + 1, k + 1));
            let row: Vec<usize> = match inst.kind() {
                ProblemKind::Assignment => (0..n).collect(),
                ProblemKind::Matching => (i + 1..dim).collect(),
            };
            for j in row {
                e.add(-(inst.utility(i, j) as f64), z(i, j));
            }
            e.render(&mut out, &format!("link_{}_{}", i + 1, k + 1), " <= 0");
        }
    }

    out.push_str("Bounds\n");
    for k in 0..n {
        let _ = writeln!(out, " r_{} free", k + 1);
    }
    for i in 0..n {
        for k in 0..n {
            let _ = writeln!(out, " d_{}_{} >= 0", i + 1, k + 1);
        }
    }

    out.push_str("Binaries\n");
    for chunk in z_vars.chunks(TERMS_PER_LINE) {
        let names: Vec<String> = chunk.iter().map(|&(i, j)| z(i, j)).collect();
        let _ = writeln!(out, " {}", names.join(" "));
    }
    out.push_str("End\n");
    Ok(out)
}
