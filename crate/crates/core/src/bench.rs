//! Benchmark harness: run the heuristic over a grid of generated instances
//! and report one CSV row per run.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ggi::{weight_scheme, WeightScheme};
use crate::instance::{generate, Instance, ProblemKind};
use crate::oracle::ggi_brute_force;
use crate::solver::{solve, SolverConfig};
use crate::subsolvers::{ENUM_ASSIGNMENT_CAP, ENUM_MATCHING_VERTEX_CAP};

pub const CSV_HEADER: &str = "instance,kind,n,d,seed,init,sign,iters,best_ggi,upper_bound,gap_vs_ub,gap_vs_exact,certificate,time_ms";

/// Relative shortfall `(opt - sol) * 100 / opt`, in percent.
pub fn gap(opt: f64, sol: f64) -> Result<f64> {
    if !(opt > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "gap needs a positive reference value, got {opt}"
        )));
    }
    Ok((opt - sol) * 100.0 / opt)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRow {
    pub instance: String,
    pub kind: ProblemKind,
    pub n: usize,
    pub d: Option<u32>,
    pub seed: Option<u64>,
    pub config: SolverConfig,
    pub iters: usize,
    pub best_ggi: f64,
    pub upper_bound: f64,
    pub gap_vs_ub: Option<f64>,
    pub exact: Option<f64>,
    pub gap_vs_exact: Option<f64>,
    pub certificate: bool,
    pub time_ms: f64,
}

fn opt_field<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Six decimals, with float dust that rounds to zero printed unsigned.
fn fixed6(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        s[1..].to_string()
    } else {
        s
    }
}

fn opt_float(v: Option<f64>) -> String {
    v.map(fixed6).unwrap_or_default()
}

impl RunRow {
    pub fn to_csv(&self) -> String {
        [
            self.instance.clone(),
            self.kind.to_string(),
            self.n.to_string(),
            opt_field(self.d),
            opt_field(self.seed),
            self.config.init.to_string(),
            self.config.sign.to_string(),
            self.iters.to_string(),
            fixed6(self.best_ggi),
            fixed6(self.upper_bound),
            opt_float(self.gap_vs_ub),
            opt_float(self.gap_vs_exact),
            self.certificate.to_string(),
            format!("{:.3}", self.time_ms),
        ]
        .join(",")
    }
}

pub fn within_exact_caps(inst: &Instance) -> bool {
    match inst.kind() {
        ProblemKind::Assignment => inst.n() <= ENUM_ASSIGNMENT_CAP,
        ProblemKind::Matching => inst.dim() <= ENUM_MATCHING_VERTEX_CAP,
    }
}

/// Solves one instance and, when it is small enough, compares with the
/// brute-force optimum.
pub fn run_instance(
    inst: &Instance,
    name: &str,
    weights: &WeightScheme,
    config: &SolverConfig,
) -> Result<RunRow> {
    let w = weight_scheme(inst.n(), weights)?;
    let report = solve(inst, &w, config)?;
    let upper_bound = report.best_upper_bound();
    let exact = if within_exact_caps(inst) {
        Some(ggi_brute_force(inst, &w)?.1)
    } else {
        None
    };
    Ok(RunRow {
        instance: name.to_string(),
        kind: inst.kind(),
        n: inst.n(),
        d: inst.provenance().map(|p| p.d),
        seed: inst.provenance().map(|p| p.seed),
        config: config.clone(),
        iters: report.iterations,
        best_ggi: report.best_ggi,
        upper_bound,
        gap_vs_ub: gap(upper_bound, report.best_ggi).ok(),
        exact,
        gap_vs_exact: exact.and_then(|opt| gap(opt, report.best_ggi).ok()),
        certificate: report.certificate,
        time_ms: report.wall_time.as_secs_f64() * 1e3,
    })
}

#[derive(Debug, Clone)]
pub struct BenchSpec {
    pub kind: ProblemKind,
    /// Vertex counts `x`; each run uses `n = x / 2` components.
    pub sizes: Vec<usize>,
    pub deviations: Vec<u32>,
    pub reps: usize,
    pub seed: u64,
    pub weights: WeightScheme,
    pub config: SolverConfig,
}

impl BenchSpec {
    /// `(vertices, d, seed)` for every run, in output order. Seeds are
    /// `seed + run index`.
    pub fn runs(&self) -> Vec<(usize, u32, u64)> {
        let mut out = Vec::new();
        for &x in &self.sizes {
            for &d in &self.deviations {
                for _ in 0..self.reps {
                    let idx = out.len() as u64;
                    out.push((x, d, self.seed.wrapping_add(idx)));
                }
            }
        }
        out
    }
}

/// Runs the whole grid on at most `threads` workers (all cores when `None`).
/// Rows come back in grid order regardless of completion order.
pub fn run_bench(spec: &BenchSpec, threads: Option<usize>) -> Result<Vec<RunRow>> {
    if let Some(&x) = spec.sizes.iter().find(|&&x| x < 2 || !x.is_multiple_of(2)) {
        return Err(Error::InvalidArgument(format!(
            "size {x} must be an even vertex count >= 2"
        )));
    }
    let runs = spec.runs();
    let job = |&(x, d, seed): &(usize, u32, u64)| -> Result<RunRow> {
        let inst = generate(spec.kind, x / 2, d, seed)?;
        let name = format!("v{d}-{x}");
        run_instance(&inst, &name, &spec.weights, &spec.config)
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
    pool.install(|| runs.par_iter().map(job).collect())
}

pub fn write_csv(rows: &[RunRow], mut out: impl Write) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.to_csv())?;
    }
    Ok(())
}
