use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use circuit_fold::{GammaMode, Observable};
use circuit_fold_cli::{
    cmd_cut, cmd_gen, cmd_sweep, cmd_verify, emit, parse_sizes, read_circuit, sweep_table, CliError, CutOptions,
    GenSpec, VerifyMode, WorkloadKind,
};

#[derive(Parser)]
#[command(name = "cfold", version, about = "Fold, partition and verify quantum circuit cuts")]
struct Cli {
    /// Worker thread cap.
    #[arg(long, global = true, env = "CFOLD_THREADS")]
    threads: Option<usize>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Bv,
    Ghz,
    Adder,
    Qft,
}

impl From<Kind> for WorkloadKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Bv => WorkloadKind::Bv,
            Kind::Ghz => WorkloadKind::Ghz,
            Kind::Adder => WorkloadKind::Adder,
            Kind::Qft => WorkloadKind::Qft,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Theoretical,
    Practical,
}

#[derive(Clone, Copy, ValueEnum)]
enum Verify {
    Exact,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Limit {
    /// Qubit constraint K (at least 2).
    #[arg(short = 'k', long = "qubit-limit", value_parser = clap::value_parser!(u64).range(2..))]
    qubit_limit: u64,
    #[arg(long, value_enum, default_value = "theoretical")]
    gamma_mode: Mode,
    #[arg(long, default_value_t = circuit_fold::DEFAULT_MIN_LEN, value_parser = clap::value_parser!(usize))]
    min_fold_len: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Write a benchmark circuit as OpenQASM 2.0.
    Gen {
        kind: Kind,
        /// Generator size: qubits (ghz, qft), bits per operand (adder), secret length (bv).
        size: Option<usize>,
        /// Bernstein-Vazirani secret; overrides the all-ones default.
        #[arg(long)]
        secret: Option<String>,
        /// Append the terminal swap network to a QFT.
        #[arg(long)]
        qft_swaps: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Partition a circuit and report its cost.
    Cut {
        qasm: PathBuf,
        #[command(flatten)]
        limit: Limit,
        /// Also run the contiguous-block baseline.
        #[arg(long)]
        baseline: bool,
        /// Write the folded meta-graph as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Cut, reconstruct an observable and compare to the uncut simulation.
    Verify {
        qasm: PathBuf,
        #[command(flatten)]
        limit: Limit,
        /// Pauli string, one symbol per qubit; defaults to all Z.
        #[arg(long)]
        observable: Option<String>,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Verify,
        #[arg(long, default_value_t = 100_000)]
        shots: usize,
    },
    /// Plot-ready QRO table over a range of sizes (total qubits).
    Sweep {
        kind: Kind,
        /// `lo..hi:step`, `lo..hi` or a comma list.
        #[arg(long)]
        sizes: String,
        #[command(flatten)]
        limit: Limit,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn options(limit: &Limit, cli: &Cli) -> CutOptions {
    CutOptions {
        qubit_limit: limit.qubit_limit as usize,
        gamma_mode: match limit.gamma_mode {
            Mode::Theoretical => GammaMode::Theoretical,
            Mode::Practical => GammaMode::Practical,
        },
        min_fold_len: limit.min_fold_len,
        baseline: false,
        threads: cli.threads,
        seed: cli.seed,
    }
}

fn print(out: Option<String>) {
    if let Some(s) = out {
        print!("{s}");
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match &cli.command {
        Command::Gen {
            kind,
            size,
            secret,
            qft_swaps,
            out,
        } => {
            let spec = GenSpec {
                kind: (*kind).into(),
                size: *size,
                secret: secret.clone(),
                qft_swaps: *qft_swaps,
            };
            let (c, text) = cmd_gen(&spec, out.as_deref())?;
            match out {
                Some(p) => eprintln!("wrote {} ({} qubits, {} gates)", p.display(), c.num_qubits(), c.len()),
                None => print!("{text}"),
            }
        }
        Command::Cut {
            qasm,
            limit,
            baseline,
            dot,
            report,
            format,
        } => {
            if limit.min_fold_len == 0 {
                return Err(CliError::Usage("--min-fold-len must be positive".into()));
            }
            let c = read_circuit(qasm)?;
            let opts = CutOptions {
                baseline: *baseline,
                ..options(limit, cli)
            };
            let run = cmd_cut(&c, &qasm.display().to_string(), &opts, dot.is_some())?;
            if let (Some(path), Some(text)) = (dot, &run.dot) {
                emit(text, Some(path))?;
            }
            let text = match format {
                Format::Text => run.report.to_text(),
                Format::Json => run.report.to_json() + "\n",
            };
            print(emit(&text, report.as_ref())?);
        }
        Command::Verify {
            qasm,
            limit,
            observable,
            mode,
            shots,
        } => {
            let c = read_circuit(qasm)?;
            let o = observable
                .as_deref()
                .map(|s| s.parse::<Observable>().map_err(|e| CliError::Usage(e.to_string())))
                .transpose()?;
            let mode = match mode {
                Verify::Exact => VerifyMode::Exact,
                Verify::Sampled if *shots == 0 => return Err(CliError::Usage("--shots must be positive".into())),
                Verify::Sampled => VerifyMode::Sampled { shots: *shots },
            };
            let r = cmd_verify(&c, &options(limit, cli), o.as_ref(), mode)?;
            print!("{}", r.to_text());
            if !r.passed {
                return Err(CliError::Verification {
                    oracle: r.oracle,
                    reconstructed: r.reconstructed,
                    error: r.abs_error,
                    tolerance: r.tolerance,
                });
            }
        }
        Command::Sweep {
            kind,
            sizes,
            limit,
            out,
        } => {
            let sizes = parse_sizes(sizes)?;
            let rows = cmd_sweep((*kind).into(), &sizes, &options(limit, cli))?;
            print(emit(&sweep_table(&rows), out.as_ref())?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
