//! `smc`: generate, solve, kernelize and verify signed Max Cut instances.
//!
//! Exit codes: 0 yes, 1 no or kernel emitted, 2 usage or parse error,
//! 3 decomposition stuck, 4 invariant violation.

mod record;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use smc_kernel::drivers::{kernelize, linear_kernel_dsplit, ClassSpec, GraphClass, Outcome};
use smc_kernel::error::{DecomposeError, DriverError};
use smc_kernel::gen::{generate, GenSpec, Partition};
use smc_kernel::oracle::{beta_exact_capped, pt, DEFAULT_CAP};
use smc_kernel::Instance;

use record::{
    read_graph, read_json, read_sidecar, sidecar_path, with_suffix, write_graph, write_json, InputRef, RunRecord,
    Sidecar, Timings,
};

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("decomposition stuck; residual graph written to {}", .0.display())]
    Stuck(PathBuf),
    #[error("{0}")]
    Invariant(String),
}

impl Failure {
    pub fn io(path: &Path, e: std::io::Error) -> Failure {
        Failure::Usage(format!("{}: {e}", path.display()))
    }

    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Stuck(_) => 3,
            Failure::Invariant(_) => 4,
        }
    }
}

#[derive(Parser)]
#[command(name = "smc", version, about = "Kernelization for signed Max Cut above the tight lower bound")]
struct Cli {
    /// Largest vertex count handed to the exhaustive oracle.
    #[arg(long, global = true, env = "SMC_ORACLE_CAP", default_value_t = DEFAULT_CAP, value_parser = parse_cap)]
    oracle_cap: usize,
    #[command(subcommand)]
    command: Command,
}

fn parse_cap(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v @ 1..=40) => Ok(v),
        _ => Err(format!("expected an integer in 1..=40, got {s:?}")),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph, plus `<out>.partition.json` with the spec and
    /// any planted partition.
    Generate(GenerateArgs),
    /// Decide an instance exactly.
    Solve(SolveArgs),
    /// Run the kernelization pipeline and write a run record.
    Kernelize(KernelizeArgs),
    /// Run the invariant suites over a graph file or a directory of `*.sg`
    /// files, or replay a saved run with `--record`.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    NegativeClique,
    RandomSigned,
    Split,
    Rl,
    Dsplit,
    Double,
    NonEdgeSplit,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    edge_p: f64,
    #[arg(long, default_value_t = 0.0)]
    positive_p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    k_size: Option<usize>,
    #[arg(long)]
    i_size: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    /// Comma-separated sizes of the planted independent sets.
    #[arg(long, value_delimiter = ',')]
    independent_sizes: Vec<usize>,
    /// Comma-separated sizes of the planted cliques.
    #[arg(long, value_delimiter = ',')]
    clique_sizes: Vec<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    k: i64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    General,
    Split,
    Rl,
    Dsplit,
}

#[derive(Args)]
struct KernelizeArgs {
    file: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    k: i64,
    /// Graph class; `--d` alone implies `dsplit`.
    #[arg(long, value_enum)]
    class: Option<ClassArg>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    /// Planted partition (JSON); defaults to `<file>.partition.json` when present.
    #[arg(long)]
    partition: Option<PathBuf>,
    /// Use the linear kernel for `d*`-split graphs.
    #[arg(long, requires = "d")]
    linear: bool,
    /// Run record path [default: <file>.run.json].
    #[arg(long)]
    record: Option<PathBuf>,
    /// Kernel graph path [default: <file>.kernel.sg].
    #[arg(long)]
    kernel_out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    path: PathBuf,
    #[arg(long, default_value_t = 1)]
    k_min: i64,
    #[arg(long, default_value_t = 4)]
    k_max: i64,
    /// Saved run record to replay against `path`.
    #[arg(long)]
    record: Option<PathBuf>,
    /// Write the detailed JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

fn need<T>(value: Option<T>, flag: &str, family: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("--{flag} is required for --family {family}")))
}

fn gen_spec(a: &GenerateArgs) -> Result<GenSpec, Failure> {
    let (edge_p, positive_p, seed) = (a.edge_p, a.positive_p, a.seed);
    Ok(match a.family {
        Family::NegativeClique => GenSpec::NegativeClique { n: need(a.n, "n", "negative-clique")? },
        Family::RandomSigned => GenSpec::RandomSigned { n: need(a.n, "n", "random-signed")?, edge_p, positive_p, seed },
        Family::Split => GenSpec::Split {
            k_size: need(a.k_size, "k-size", "split")?,
            i_size: need(a.i_size, "i-size", "split")?,
            edge_p,
            positive_p,
            seed,
        },
        Family::Rl => {
            if a.independent_sizes.is_empty() && a.clique_sizes.is_empty() {
                return Err(Failure::Usage("--independent-sizes or --clique-sizes is required for --family rl".into()));
            }
            GenSpec::Rl {
                independent_sizes: a.independent_sizes.clone(),
                clique_sizes: a.clique_sizes.clone(),
                edge_p,
                positive_p,
                seed,
            }
        }
        Family::Dsplit => GenSpec::Dsplit {
            d: need(a.d, "d", "dsplit")?,
            k_size: need(a.k_size, "k-size", "dsplit")?,
            i_size: need(a.i_size, "i-size", "dsplit")?,
            positive_p,
            seed,
        },
        Family::Double => GenSpec::Double { n: need(a.n, "n", "double")?, edge_p, seed },
        Family::NonEdgeSplit => GenSpec::NonEdgeSplit { n: need(a.n, "n", "non-edge-split")?, edge_p, seed },
    })
}

fn cmd_generate(a: &GenerateArgs) -> Result<ExitCode, Failure> {
    if !(0.0..=1.0).contains(&a.edge_p) || !(0.0..=1.0).contains(&a.positive_p) {
        return Err(Failure::Usage("probabilities must lie in [0, 1]".into()));
    }
    let spec = gen_spec(a)?;
    let generated = generate(&spec).map_err(|e| Failure::Usage(e.to_string()))?;
    write_graph(&a.out, &generated.graph)?;
    let side = sidecar_path(&a.out);
    write_json(&side, &Sidecar { spec, partition: generated.partition.clone() })?;
    let summary = json!({
        "graph": a.out,
        "sidecar": side,
        "n": generated.graph.n(),
        "m": generated.graph.m(),
        "partitioned": generated.partition.is_some(),
    });
    println!("{summary}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(a: &SolveArgs, cap: usize) -> Result<ExitCode, Failure> {
    let (g, _) = read_graph(&a.file)?;
    if !g.is_connected() {
        return Err(Failure::Usage("the graph must be connected".into()));
    }
    let result =
        beta_exact_capped(&g, cap).map_err(|e| Failure::Usage(format!("{e}; raise SMC_ORACLE_CAP to allow it")))?;
    let four_beta = 4 * result.beta as i64;
    let bound = pt(&g).quarters();
    let yes = a.k <= 0 || four_beta >= bound + a.k;
    let summary = json!({
        "n": g.n(),
        "m": g.m(),
        "k": a.k,
        "beta": result.beta,
        "pt_quarters": bound,
        "slack_quarters": four_beta - bound,
        "verdict": if yes { "yes" } else { "no" },
        "assignment": result.assignment,
    });
    println!("{summary}");
    Ok(if yes { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn class_spec(a: &KernelizeArgs, partition: Option<Partition>) -> Result<ClassSpec, Failure> {
    let class = match (a.class, a.d) {
        (None, Some(d)) | (Some(ClassArg::Dsplit), Some(d)) => GraphClass::Dsplit { d },
        (Some(ClassArg::Dsplit), None) => return Err(Failure::Usage("--class dsplit requires --d".into())),
        (None | Some(ClassArg::General), None) => GraphClass::General,
        (Some(ClassArg::General), Some(_)) => return Err(Failure::Usage("--d conflicts with --class general".into())),
        (Some(ClassArg::Split), _) => GraphClass::Split,
        (Some(ClassArg::Rl), _) => {
            let derived = match &partition {
                Some(Partition::Rl(rl)) => Some((rl.independent.len(), rl.cliques.len())),
                Some(Partition::Split(_)) => Some((1, 1)),
                None => None,
            };
            match (a.r.or(derived.map(|x| x.0)), a.l.or(derived.map(|x| x.1))) {
                (Some(r), Some(l)) => GraphClass::Rl { r, l },
                _ => return Err(Failure::Usage("--class rl requires --r and --l or a partition".into())),
            }
        }
    };
    let partition = if class == GraphClass::General { None } else { partition };
    Ok(ClassSpec::with(class, partition))
}

fn driver_failure(e: DriverError, input: &Path) -> Failure {
    match e {
        DriverError::Decompose(DecomposeError::Stuck { residual, .. }) => {
            let path = with_suffix(input, ".residual.sg");
            match write_graph(&path, &residual) {
                Ok(()) => Failure::Stuck(path),
                Err(w) => w,
            }
        }
        DriverError::Partition(_)
        | DriverError::Precondition(_)
        | DriverError::Decompose(DecomposeError::NotConnected) => Failure::Usage(e.to_string()),
        other => Failure::Invariant(other.to_string()),
    }
}

fn cmd_kernelize(a: &KernelizeArgs, command: Vec<String>) -> Result<ExitCode, Failure> {
    let start = Instant::now();
    let (g, sha256) = read_graph(&a.file)?;
    let sidecar = read_sidecar(&a.file)?;
    let partition = match &a.partition {
        Some(p) => Some(read_json::<Partition>(p)?),
        None => sidecar.as_ref().and_then(|s| s.partition.clone()),
    };
    let spec = class_spec(a, partition)?;
    let parsed = start.elapsed();
    let inst = Instance::new(g, a.k);
    let report = if a.linear {
        let GraphClass::Dsplit { d } = spec.class else {
            return Err(Failure::Usage("--linear needs the dsplit class".into()));
        };
        let split = match &spec.partition {
            Some(Partition::Split(p)) => Some(p),
            Some(Partition::Rl(_)) => {
                return Err(Failure::Usage("--linear needs a clique/independent partition".into()))
            }
            None => None,
        };
        linear_kernel_dsplit(&inst, d, split)
    } else {
        kernelize(&inst, &spec)
    }
    .map_err(|e| driver_failure(e, &a.file))?;
    smc_kernel::drivers::assert_kernel_size(&report, &spec).map_err(|e| driver_failure(e, &a.file))?;
    let pipeline = start.elapsed() - parsed;

    let kernel_path = match &report.kernel {
        Some(kernel) => {
            let path = a.kernel_out.clone().unwrap_or_else(|| with_suffix(&a.file, ".kernel.sg"));
            write_graph(&path, &kernel.graph)?;
            Some(path)
        }
        None => None,
    };
    let outcome = report.outcome;
    let record = RunRecord {
        schema: record::SCHEMA,
        command,
        input: InputRef { path: a.file.clone(), sha256, gen_spec: sidecar.map(|s| s.spec) },
        k: a.k,
        report,
        kernel_path,
        timings: Timings {
            parse_ms: parsed.as_secs_f64() * 1e3,
            pipeline_ms: pipeline.as_secs_f64() * 1e3,
            total_ms: start.elapsed().as_secs_f64() * 1e3,
        },
        versions: Default::default(),
    };
    let record_path = a.record.clone().unwrap_or_else(|| with_suffix(&a.file, ".run.json"));
    write_json(&record_path, &record)?;
    let summary = json!({
        "outcome": outcome,
        "reason": record.report.reason,
        "kernel_n": record.report.kernel.as_ref().map(|k| k.graph.n()),
        "kernel_k": record.report.kernel.as_ref().map(|k| k.k),
        "steps": record.report.trace.len(),
        "record": record_path,
        "kernel": record.kernel_path,
    });
    println!("{summary}");
    Ok(if outcome == Outcome::Yes { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_verify(a: &VerifyArgs, cap: usize) -> Result<ExitCode, Failure> {
    if a.k_min > a.k_max {
        return Err(Failure::Usage("--k-min exceeds --k-max".into()));
    }
    let report = match &a.record {
        Some(path) => verify::verify_record(&a.path, &read_json::<RunRecord>(path)?)?,
        None => verify::verify_corpus(&a.path, a.k_min, a.k_max, cap)?,
    };
    print!("{}", report.table());
    for v in report.violations.iter().take(20) {
        eprintln!("violation [{}] {} k={:?}: {}", v.check, v.file.display(), v.k, v.detail);
    }
    if let Some(path) = &a.report {
        write_json(path, &report)?;
    }
    Ok(if report.ok() { ExitCode::SUCCESS } else { ExitCode::from(4) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command: Vec<String> = std::env::args().collect();
    let result = match &cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Solve(a) => cmd_solve(a, cli.oracle_cap),
        Command::Kernelize(a) => cmd_kernelize(a, command),
        Command::Verify(a) => cmd_verify(a, cli.oracle_cap),
    };
    result.unwrap_or_else(|e| {
        eprintln!("smc: {e}");
        ExitCode::from(e.code())
    })
}
