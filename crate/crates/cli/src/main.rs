use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use sosadmm::assembly::{to_json, to_sdpa};
use sosadmm::baseline::flop_model;
use sosadmm::experiments::{ExperimentSpec, Family, GeneratedProblem};
use sosadmm::report::{run_generated, write_bench_csv, RunReport};
use sosadmm::{verify_partial_orthogonality, AffineMethod, SolveStatus, SolverOptions};

#[derive(Parser)]
#[command(name = "sosadmm", version, about = "SOS programs solved by ADMM with partial orthogonality")]
struct Cli {
    /// Log progress at info level (RUST_LOG overrides).
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the conic program and dump it as JSON or SDPA.
    Assemble {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve one instance and print its run report.
    Solve {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve a family over several sizes and emit one CSV row per size.
    Bench {
        #[arg(long, value_enum, default_value = "pop")]
        family: FamilyArg,
        /// Sizes, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that the Gram block of A has mutually orthogonal rows.
    CheckOrth {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-iteration flop estimates of the three affine solvers.
    Flops {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        t: u64,
        #[arg(long = "N")]
        n_psd: u64,
        #[arg(long, default_value_t = 10)]
        n_cg: u64,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct Source {
    #[arg(long, value_enum, conflicts_with = "file")]
    family: Option<FamilyArg>,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Problem file (see problems/ for the format).
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct SolverArgs {
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    #[arg(long, default_value_t = 2000)]
    max_iters: usize,
    #[arg(long, value_enum, default_value = "lowrank")]
    method: MethodArg,
    #[arg(long, default_value_t = 25)]
    check_interval: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Pop,
    Lyapunov,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Sdpa,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Lowrank,
    Direct,
    Cg,
}

impl SolverArgs {
    fn options(&self) -> SolverOptions {
        SolverOptions {
            tol: self.tol,
            max_iters: self.max_iters,
            affine_method: match self.method {
                MethodArg::Lowrank => AffineMethod::LowRank,
                MethodArg::Direct => AffineMethod::DenseDirect,
                MethodArg::Cg => AffineMethod::Cg,
            },
            check_interval: self.check_interval,
            ..SolverOptions::default()
        }
    }
}

fn family(arg: FamilyArg) -> Family {
    match arg {
        FamilyArg::Pop => Family::Pop,
        FamilyArg::Lyapunov => Family::Lyapunov,
    }
}

type CliResult<T> = Result<T, String>;

fn load(source: &Source, options: SolverOptions) -> CliResult<(ExperimentSpec, GeneratedProblem<f64>)> {
    let (fam, text) = match (&source.file, source.family) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            (Family::FromFile, Some(text))
        }
        (None, Some(f)) => (family(f), None),
        (None, None) => return Err("give either --family or --file".into()),
    };
    let mut spec = ExperimentSpec {
        family: fam,
        n: source.n,
        seed: source.seed,
        options,
        output: None,
    };
    let generated = spec.generate::<f64>(text.as_deref()).map_err(|e| match (&source.file, e) {
        (Some(path), sosadmm::SosError::Parse { line, column, message }) => {
            format!("{}:{line}:{column}: {message}", path.display())
        }
        (_, e) => e.to_string(),
    })?;
    if fam == Family::FromFile {
        spec.n = generated.specs[0].num_vars();
    }
    Ok((spec, generated))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| if text.ends_with('\n') { Ok(()) } else { stdout.write_all(b"\n") })
                .map_err(|e| e.to_string())
        }
    }
}

fn csv_text(reports: &[RunReport]) -> CliResult<String> {
    let rows: Vec<_> = reports.iter().map(RunReport::bench_row).collect();
    let mut buf = Vec::new();
    write_bench_csv(&rows, &mut buf).map_err(|e| e.to_string())?;
    String::from_utf8(buf).map_err(|e| e.to_string())
}

fn exit_for(status: SolveStatus) -> u8 {
    match status {
        SolveStatus::Optimal => 0,
        SolveStatus::PrimalInfeasible | SolveStatus::DualInfeasible => 2,
        SolveStatus::MaxIters | SolveStatus::Inconclusive => 1,
    }
}

fn log_progress(p: &sosadmm::admm::Progress) {
    info!(
        "iter {:>5}  primal {:.2e}  dual {:.2e}  gap {:.2e}  tau {:.2e}  kappa {:.2e}",
        p.iteration, p.primal, p.dual, p.gap, p.tau, p.kappa
    );
}

fn worker_count(jobs: usize) -> usize {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    let cap = std::env::var("SOSADMM_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v > 0)
        .unwrap_or(available);
    cap.min(jobs).max(1)
}

fn bench(fam: Family, ns: &[usize], seed: u64, options: &SolverOptions) -> CliResult<Vec<RunReport>> {
    let slots: Vec<Mutex<Option<CliResult<RunReport>>>> = ns.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = worker_count(ns.len());
    info!("bench: {} instances on {workers} workers", ns.len());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&n) = ns.get(k) else { break };
                let spec = ExperimentSpec {
                    family: fam,
                    n,
                    seed,
                    options: options.clone(),
                    output: None,
                };
                let result = spec
                    .generate::<f64>(None)
                    .and_then(|g| run_generated(&spec.label(), &g, options, |_| {}))
                    .map(|(report, _)| report)
                    .map_err(|e| format!("n = {n}: {e}"));
                if let Ok(r) = &result {
                    info!("n = {n}: {} in {} iterations, {:.3} s", r.status, r.iterations, r.times.total());
                }
                *slots[k].lock().expect("slot lock") = Some(result);
            });
        }
    });
    slots
        .into_iter()
        .map(|s| s.into_inner().expect("slot lock").expect("every job ran"))
        .collect()
}

fn run(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Assemble { source, format, out } => {
            let (_, generated) = load(&source, SolverOptions::default())?;
            let problem = generated.assemble().map_err(|e| e.to_string())?;
            let text = match format {
                Format::Json => to_json(&problem),
                Format::Sdpa => to_sdpa(&problem),
                Format::Csv => return Err("assemble supports --format json or sdpa".into()),
            };
            emit(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Solve {
            source,
            solver,
            format,
            out,
        } => {
            let options = solver.options();
            options.validate().map_err(|e| e.to_string())?;
            let (spec, generated) = load(&source, options.clone())?;
            let (report, _) =
                run_generated(&spec.label(), &generated, &options, log_progress).map_err(|e| e.to_string())?;
            let text = match format {
                Format::Json => report.to_json(),
                Format::Csv => csv_text(std::slice::from_ref(&report))?,
                Format::Sdpa => return Err("solve supports --format json or csv".into()),
            };
            emit(out.as_deref(), &text)?;
            Ok(exit_for(report.status))
        }
        Command::Bench {
            family: fam,
            n,
            seed,
            solver,
            format,
            out,
        } => {
            let options = solver.options();
            options.validate().map_err(|e| e.to_string())?;
            let reports = bench(family(fam), &n, seed, &options)?;
            let text = match format {
                Format::Csv => csv_text(&reports)?,
                Format::Json => serde_json::to_string_pretty(&reports).map_err(|e| e.to_string())?,
                Format::Sdpa => return Err("bench supports --format csv or json".into()),
            };
            emit(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::CheckOrth { source, out } => {
            let (_, generated) = load(&source, SolverOptions::default())?;
            let problem = generated.assemble().map_err(|e| e.to_string())?;
            let report = verify_partial_orthogonality(&problem);
            emit(out.as_deref(), &serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?)?;
            Ok(if report.is_diagonal { 0 } else { 1 })
        }
        Command::Flops {
            m,
            t,
            n_psd,
            n_cg,
            format,
            out,
        } => {
            if m == 0 || n_psd == 0 || n_cg == 0 {
                return Err("flops needs positive --m, --N and --n-cg".into());
            }
            let estimates = flop_model(m, t, n_psd, n_cg);
            let text = match format {
                Some(Format::Json) => serde_json::to_string_pretty(&estimates).map_err(|e| e.to_string())?,
                Some(Format::Csv) => {
                    let mut s = String::from("method,flops_per_iteration,asymptotic\n");
                    for e in &estimates {
                        s += &format!("{},{},{}\n", e.method, e.flops_per_iteration, e.asymptotic);
                    }
                    s
                }
                Some(Format::Sdpa) => return Err("flops supports --format json or csv".into()),
                None => {
                    let mut s = format!("m = {m}, t = {t}, N = {n_psd}, n_cg = {n_cg}\n");
                    for e in &estimates {
                        let note = if e.asymptotic { "  (order of magnitude)" } else { "" };
                        s += &format!("{:<8} {:>24}{note}\n", e.method.name(), e.flops_per_iteration);
                    }
                    s
                }
            };
            emit(out.as_deref(), &text)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let level = if cli.verbose { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
