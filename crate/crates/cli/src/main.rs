use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fairopt::bench::{run_bench, run_instance, write_csv, BenchSpec, CSV_HEADER};
use fairopt::ggi::weight_scheme;
use fairopt::instance::{agent_values, generate, read_instance, write_instance};
use fairopt::oracle::{export_ip, format_lp, ggi_brute_force};
use fairopt::{Error, InitStrategy, ProblemKind, SolverConfig, SubgradientSign, WeightScheme};

const THREADS_ENV: &str = "FAIROPT_THREADS";

#[derive(Parser)]
#[command(name = "fairopt", version, about = "GGI-fair assignment and matching")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance file.
    Gen {
        #[arg(long)]
        kind: ProblemKind,
        /// Number of GGI components (matching instances have 2n vertices).
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path; defaults to `v<d>-<2n>.inst`.
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Run the primal-dual heuristic on an instance and print one CSV row.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Brute-force the GGI optimum of a small instance.
    Exact {
        instance: PathBuf,
        #[arg(long, default_value = "inverse-square")]
        weights: WeightScheme,
    },
    /// Write the linearized 0-1 program in LP format.
    ExportLp {
        instance: PathBuf,
        #[arg(long, default_value = "inverse-square")]
        weights: WeightScheme,
        /// Output path; stdout when omitted.
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Solve a grid of generated instances and write a CSV table.
    Bench {
        #[arg(long)]
        kind: ProblemKind,
        /// Vertex counts x (n = x / 2 components each).
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long = "d", value_delimiter = ',', required = true)]
        deviations: Vec<u32>,
        #[arg(long, default_value_t = 10)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        solver: SolverArgs,
        /// CSV output path; stdout when omitted.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value = "inverse-square")]
    weights: WeightScheme,
    #[arg(long, default_value = "rank-based")]
    init: InitStrategy,
    #[arg(long, default_value = "paper")]
    sign: SubgradientSign,
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    #[arg(long, default_value_t = 2.0)]
    rho0: f64,
    #[arg(long, default_value_t = 3)]
    patience: usize,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

impl SolverArgs {
    fn config(&self) -> fairopt::Result<SolverConfig> {
        let config = SolverConfig {
            max_iter: self.max_iter,
            rho0: self.rho0,
            halving_patience: self.patience,
            y_change_tol: self.tol,
            init: self.init,
            sign: self.sign,
        };
        config.validate()?;
        Ok(config)
    }
}

fn instance_label(inst: &fairopt::Instance, path: &Path) -> String {
    inst.name().unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string())
    })
}

fn threads_from_env() -> fairopt::Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&t| t > 0)
            .map(Some)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "{THREADS_ENV} must be a positive integer, got {v:?}"
                ))
            }),
        Err(_) => Ok(None),
    }
}

fn open_output(path: Option<&Path>) -> fairopt::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> fairopt::Result<()> {
    match cli.command {
        Command::Gen {
            kind,
            n,
            d,
            seed,
            output,
        } => {
            let inst = generate(kind, n, d, seed)?;
            let path = output.unwrap_or_else(|| PathBuf::from(format!("v{d}-{}.inst", 2 * n)));
            write_instance(&inst, &path)?;
            println!("{}", path.display());
        }
        Command::Solve { instance, solver } => {
            let config = solver.config()?;
            let inst = read_instance(&instance)?;
            let row = run_instance(
                &inst,
                &instance_label(&inst, &instance),
                &solver.weights,
                &config,
            )?;
            println!("{CSV_HEADER}");
            println!("{}", row.to_csv());
        }
        Command::Exact { instance, weights } => {
            let inst = read_instance(&instance)?;
            let w = weight_scheme(inst.n(), &weights)?;
            let (sol, value) = ggi_brute_force(&inst, &w)?;
            let values = agent_values(&inst, &sol)?;
            println!("ggi {value:.6}");
            println!("solution {sol}");
            let shown: Vec<String> = values.iter().map(|v| v.to_string()).collect();
            println!("values {}", shown.join(" "));
        }
        Command::ExportLp {
            instance,
            weights,
            output,
        } => {
            let inst = read_instance(&instance)?;
            let w = weight_scheme(inst.n(), &weights)?;
            match output {
                Some(path) => export_ip(&inst, &w, path)?,
                None => {
                    let mut out = io::stdout().lock();
                    out.write_all(format_lp(&inst, &w)?.as_bytes())?;
                }
            }
        }
        Command::Bench {
            kind,
            sizes,
            deviations,
            reps,
            seed,
            solver,
            csv,
        } => {
            let spec = BenchSpec {
                kind,
                sizes,
                deviations,
                reps,
                seed,
                weights: solver.weights.clone(),
                config: solver.config()?,
            };
            let rows = run_bench(&spec, threads_from_env()?)?;
            let mut out = open_output(csv.as_deref())?;
            write_csv(&rows, &mut out)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_capacity() {
                ExitCode::from(3)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
