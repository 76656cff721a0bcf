//! Subcommand implementations behind the `cfold` binary.
//!
//! Reports come in two encodings: a key-value text layout with whitespace
//! separated tables, and JSON. Both carry the same fields; see the README
//! for the schema.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use circuit_fold::knit::{MAX_EXACT_CUTS, MAX_QUBITS};
use circuit_fold::{
    export_dot, gen_adder, gen_bv, gen_ghz, gen_qft, gen_qft_with_swaps, naive_baseline, oracle_expectation,
    parse_qasm, partition_circuit_detailed, qro, reconstruct_expectation, write_qasm, Circuit, CircuitGraph,
    CostReport, GammaMode, KnitError, Observable, Partition, PartitionConfig, ReconstructionMode,
};
use serde::Serialize;
use thiserror::Error;

pub const TOOL: &str = "cfold";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Absolute tolerance of an exact-mode verification.
pub const EXACT_TOLERANCE: f64 = 1e-8;
/// Sampled verification passes within this many predicted standard errors.
pub const SAMPLED_SIGMAS: f64 = 5.0;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("verification failed: |{reconstructed} - {oracle}| = {error} > {tolerance}")]
    Verification {
        oracle: f64,
        reconstructed: f64,
        error: f64,
        tolerance: f64,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Input(_) => 3,
            CliError::Verification { .. } => 4,
        }
    }
}

fn input<E: std::fmt::Display>(context: impl std::fmt::Display) -> impl FnOnce(E) -> CliError {
    move |e| CliError::Input(format!("{context}: {e}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WorkloadKind {
    Bv,
    Ghz,
    Adder,
    Qft,
}

impl WorkloadKind {
    pub fn name(self) -> &'static str {
        match self {
            WorkloadKind::Bv => "bv",
            WorkloadKind::Ghz => "ghz",
            WorkloadKind::Adder => "adder",
            WorkloadKind::Qft => "qft",
        }
    }

    /// Generator parameter giving `qubits` total qubits.
    pub fn size_for_qubits(self, qubits: usize) -> Result<usize, CliError> {
        let bad = || CliError::Usage(format!("{} has no instance with {qubits} qubits", self.name()));
        match self {
            WorkloadKind::Bv => qubits.checked_sub(1).filter(|&n| n >= 1).ok_or_else(bad),
            WorkloadKind::Adder => {
                if qubits >= 4 && qubits.is_multiple_of(2) {
                    Ok((qubits - 2) / 2)
                } else {
                    Err(bad())
                }
            }
            WorkloadKind::Ghz | WorkloadKind::Qft => Ok(qubits),
        }
    }
}

/// Generator request. `size` is the generator parameter: qubits for GHZ and
/// QFT, bits per operand for the adder, secret length for BV (all-ones).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSpec {
    pub kind: WorkloadKind,
    pub size: Option<usize>,
    pub secret: Option<String>,
    pub qft_swaps: bool,
}

impl GenSpec {
    pub fn new(kind: WorkloadKind, size: usize) -> GenSpec {
        GenSpec {
            kind,
            size: Some(size),
            secret: None,
            qft_swaps: false,
        }
    }

    pub fn build(&self) -> Result<Circuit, CliError> {
        let need = || CliError::Usage(format!("{} needs a size", self.kind.name()));
        let gen_err = |e: circuit_fold::GeneratorError| CliError::Usage(e.to_string());
        match self.kind {
            WorkloadKind::Bv => {
                let secret = match (&self.secret, self.size) {
                    (Some(s), _) => s.clone(),
                    (None, Some(n)) => "1".repeat(n),
                    (None, None) => return Err(need()),
                };
                gen_bv(&secret).map_err(gen_err)
            }
            WorkloadKind::Ghz => gen_ghz(self.size.ok_or_else(need)?).map_err(gen_err),
            WorkloadKind::Adder => gen_adder(self.size.ok_or_else(need)?).map_err(gen_err),
            WorkloadKind::Qft if self.qft_swaps => gen_qft_with_swaps(self.size.ok_or_else(need)?).map_err(gen_err),
            WorkloadKind::Qft => gen_qft(self.size.ok_or_else(need)?).map_err(gen_err),
        }
    }

    pub fn describe(&self) -> String {
        match (&self.secret, self.size) {
            (Some(s), _) => format!("{} secret={s}", self.kind.name()),
            (None, Some(n)) => format!("{} {n}", self.kind.name()),
            (None, None) => self.kind.name().to_string(),
        }
    }
}

/// Writes the generated circuit as QASM and returns it.
pub fn cmd_gen(spec: &GenSpec, out: Option<&Path>) -> Result<(Circuit, String), CliError> {
    let c = spec.build()?;
    let text = write_qasm(&c);
    if let Some(path) = out {
        std::fs::write(path, &text).map_err(input(path.display()))?;
    }
    Ok((c, text))
}

pub fn read_circuit(path: &Path) -> Result<Circuit, CliError> {
    let text = std::fs::read_to_string(path).map_err(input(path.display()))?;
    parse_qasm(&text).map_err(input(path.display()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutOptions {
    pub qubit_limit: usize,
    pub gamma_mode: GammaMode,
    pub min_fold_len: usize,
    pub baseline: bool,
    pub threads: Option<usize>,
    pub seed: u64,
}

impl CutOptions {
    pub fn new(qubit_limit: usize) -> CutOptions {
        CutOptions {
            qubit_limit,
            gamma_mode: GammaMode::Theoretical,
            min_fold_len: circuit_fold::DEFAULT_MIN_LEN,
            baseline: false,
            threads: None,
            seed: 0,
        }
    }

    fn config(&self) -> PartitionConfig {
        PartitionConfig {
            min_fold_len: self.min_fold_len,
            gamma_mode: self.gamma_mode,
            threads: self.threads,
            ..PartitionConfig::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputInfo {
    pub source: String,
    pub num_qubits: usize,
    pub num_gates: usize,
    pub graph_nodes: usize,
    pub graph_edges: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub gamma_mode: GammaMode,
    pub min_fold_len: usize,
    pub wl_iterations: usize,
    pub refine_passes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FragmentRow {
    pub id: usize,
    pub width: usize,
    pub depth: usize,
    pub nodes: usize,
    pub qubits: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutRow {
    pub kind: String,
    pub gate: String,
    pub src: usize,
    pub dst: usize,
    pub fragments: (usize, usize),
    pub gamma: f64,
    pub class: String,
}

/// QRO of one partition. The raw values overflow `f64` on large circuits,
/// so the base-10 logarithms are the primary fields.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QroSummary {
    pub log10_theoretical: f64,
    pub log10_practical: f64,
    pub theoretical: String,
    pub practical: String,
    pub log10_total_sampling_overhead: f64,
    pub wire_cuts: usize,
    pub gate_cuts: usize,
    pub parallel_groups: usize,
    pub blackbox_groups: usize,
}

impl QroSummary {
    fn of(p: &Partition, g: &CircuitGraph) -> QroSummary {
        let th: CostReport = qro(p, g, GammaMode::Theoretical);
        let ln_overhead: f64 = th.fragments.iter().map(|f| f.ln_variation_product).sum::<f64>() / 2.0;
        QroSummary {
            log10_theoretical: round12(th.log10_qro_theoretical),
            log10_practical: round12(th.log10_qro_practical),
            theoretical: sci(th.log10_qro_theoretical),
            practical: sci(th.log10_qro_practical),
            log10_total_sampling_overhead: round12(ln_overhead / std::f64::consts::LN_10),
            wire_cuts: th.wire_cuts,
            gate_cuts: th.gate_cuts,
            parallel_groups: th.parallel_groups().count(),
            blackbox_groups: th
                .groups
                .iter()
                .filter(|g| g.class == circuit_fold::CutClass::Blackbox)
                .count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaselineSummary {
    pub fragments: usize,
    pub qro: QroSummary,
    /// `QRO(baseline) / QRO(pipeline)` in theoretical mode.
    pub ratio_theoretical: String,
    pub log10_ratio_theoretical: f64,
    pub log10_ratio_practical: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoldStats {
    pub original_nodes: usize,
    pub folded_nodes: usize,
    pub compression_ratio: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Timings {
    pub fold_ms: f64,
    pub module_find_ms: f64,
    pub merge_ms: f64,
    pub refine_ms: f64,
    pub total_ms: f64,
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub input: InputInfo,
    pub qubit_limit: usize,
    pub config: ConfigEcho,
    pub fragments: Vec<FragmentRow>,
    pub cuts: Vec<CutRow>,
    pub qro: QroSummary,
    pub fold: FoldStats,
    pub baseline: Option<BaselineSummary>,
    pub timings: Timings,
}

impl RunReport {
    /// The report with every timing zeroed, for reproducibility checks.
    pub fn without_timings(&self) -> RunReport {
        RunReport {
            timings: Timings::default(),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let kv = |s: &mut String, k: &str, v: &dyn std::fmt::Display| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv(&mut s, "tool", &self.tool);
        kv(&mut s, "version", &self.version);
        kv(&mut s, "seed", &self.seed);
        kv(&mut s, "source", &self.input.source);
        kv(&mut s, "num_qubits", &self.input.num_qubits);
        kv(&mut s, "num_gates", &self.input.num_gates);
        kv(&mut s, "graph_nodes", &self.input.graph_nodes);
        kv(&mut s, "graph_edges", &self.input.graph_edges);
        kv(&mut s, "qubit_limit", &self.qubit_limit);
        kv(&mut s, "gamma_mode", &self.config.gamma_mode.name());
        kv(&mut s, "min_fold_len", &self.config.min_fold_len);
        kv(&mut s, "wl_iterations", &self.config.wl_iterations);
        kv(&mut s, "refine_passes", &self.config.refine_passes);
        kv(&mut s, "fold_original_nodes", &self.fold.original_nodes);
        kv(&mut s, "fold_folded_nodes", &self.fold.folded_nodes);
        kv(
            &mut s,
            "fold_compression_ratio",
            &format!("{:.6}", self.fold.compression_ratio),
        );
        qro_text(&mut s, "qro", &self.qro);
        if let Some(b) = &self.baseline {
            kv(&mut s, "baseline_fragments", &b.fragments);
            qro_text(&mut s, "baseline_qro", &b.qro);
            kv(&mut s, "baseline_ratio_theoretical", &b.ratio_theoretical);
            kv(&mut s, "baseline_log10_ratio_theoretical", &b.log10_ratio_theoretical);
            kv(&mut s, "baseline_log10_ratio_practical", &b.log10_ratio_practical);
        }
        kv(&mut s, "fragments", &self.fragments.len());
        let _ = writeln!(s, "\n[fragments]\nid width depth nodes qubits");
        for f in &self.fragments {
            let _ = writeln!(s, "{} {} {} {} {}", f.id, f.width, f.depth, f.nodes, f.qubits);
        }
        let _ = writeln!(s, "\n[cuts]\nkind gate src dst from to gamma class");
        for c in &self.cuts {
            let _ = writeln!(
                s,
                "{} {} {} {} {} {} {} {}",
                c.kind, c.gate, c.src, c.dst, c.fragments.0, c.fragments.1, c.gamma, c.class
            );
        }
        let _ = writeln!(s, "\n[timings]");
        kv(&mut s, "fold_ms", &format!("{:.3}", self.timings.fold_ms));
        kv(&mut s, "module_find_ms", &format!("{:.3}", self.timings.module_find_ms));
        kv(&mut s, "merge_ms", &format!("{:.3}", self.timings.merge_ms));
        kv(&mut s, "refine_ms", &format!("{:.3}", self.timings.refine_ms));
        kv(&mut s, "total_ms", &format!("{:.3}", self.timings.total_ms));
        s
    }
}

fn qro_text(s: &mut String, prefix: &str, q: &QroSummary) {
    let _ = writeln!(s, "{prefix}_theoretical = {}", q.theoretical);
    let _ = writeln!(s, "{prefix}_practical = {}", q.practical);
    let _ = writeln!(s, "{prefix}_log10_theoretical = {}", q.log10_theoretical);
    let _ = writeln!(s, "{prefix}_log10_practical = {}", q.log10_practical);
    let _ = writeln!(
        s,
        "{prefix}_log10_sampling_overhead = {}",
        q.log10_total_sampling_overhead
    );
    let _ = writeln!(s, "{prefix}_wire_cuts = {}", q.wire_cuts);
    let _ = writeln!(s, "{prefix}_gate_cuts = {}", q.gate_cuts);
    let _ = writeln!(s, "{prefix}_parallel_groups = {}", q.parallel_groups);
    let _ = writeln!(s, "{prefix}_blackbox_groups = {}", q.blackbox_groups);
}

/// Rounds away last-bit noise so reports compare byte for byte.
fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

/// `10^l` in scientific notation without going through `f64`.
pub fn sci(log10: f64) -> String {
    if !log10.is_finite() {
        return "inf".into();
    }
    let mut e = log10.floor();
    let mut m = 10f64.powf(log10 - e);
    if m >= 9.9995 {
        m /= 10.0;
        e += 1.0;
    }
    format!("{m:.3}e{e}")
}

/// Compact qubit list: `0-3,7,9-10`.
pub fn qubit_ranges(qs: &[usize]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < qs.len() {
        let mut j = i;
        while j + 1 < qs.len() && qs[j + 1] == qs[j] + 1 {
            j += 1;
        }
        parts.push(if i == j {
            qs[i].to_string()
        } else {
            format!("{}-{}", qs[i], qs[j])
        });
        i = j + 1;
    }
    parts.join(",")
}

pub struct CutRun {
    pub report: RunReport,
    pub graph: CircuitGraph,
    pub partition: Partition,
    pub dot: Option<String>,
}

/// Runs the pipeline on `c`. `with_dot` renders the folded meta-graph, or the
/// circuit graph when the circuit fit without folding.
pub fn cmd_cut(c: &Circuit, source: &str, opts: &CutOptions, with_dot: bool) -> Result<CutRun, CliError> {
    if opts.qubit_limit < 2 {
        return Err(CliError::Usage("qubit limit must be at least 2".into()));
    }
    let start = Instant::now();
    let config = opts.config();
    let run = partition_circuit_detailed(c, opts.qubit_limit, &config).map_err(|e| CliError::Input(e.to_string()))?;
    let total = start.elapsed();
    let g = &run.graph;
    let p = &run.partition;
    let th = qro(p, g, GammaMode::Theoretical);
    let class_of = |i: usize| {
        th.groups
            .iter()
            .find(|grp| grp.cuts.contains(&i))
            .map_or("single", |grp| grp.class.name())
    };
    let folded = run.meta.as_ref().map_or(g.len(), |m| m.len());
    let qro_summary = QroSummary::of(p, g);
    let baseline = if opts.baseline {
        let b = naive_baseline(g, opts.qubit_limit).map_err(|e| CliError::Input(e.to_string()))?;
        let bq = QroSummary::of(&b, g);
        let lr = bq.log10_theoretical - qro_summary.log10_theoretical;
        Some(BaselineSummary {
            fragments: b.fragments.len(),
            ratio_theoretical: sci(lr),
            log10_ratio_theoretical: round12(lr),
            log10_ratio_practical: round12(bq.log10_practical - qro_summary.log10_practical),
            qro: bq,
        })
    } else {
        None
    };
    let report = RunReport {
        tool: TOOL.into(),
        version: VERSION.into(),
        seed: opts.seed,
        input: InputInfo {
            source: source.into(),
            num_qubits: c.num_qubits(),
            num_gates: c.len(),
            graph_nodes: g.len(),
            graph_edges: g.edges().len(),
        },
        qubit_limit: opts.qubit_limit,
        config: ConfigEcho {
            gamma_mode: config.gamma_mode,
            min_fold_len: config.min_fold_len,
            wl_iterations: config.wl_iterations,
            refine_passes: config.refine_passes,
        },
        fragments: p
            .fragments
            .iter()
            .map(|f| FragmentRow {
                id: f.id,
                width: f.width,
                depth: f.depth,
                nodes: f.node_ids.len(),
                qubits: qubit_ranges(&f.qubits(g)),
            })
            .collect(),
        cuts: p
            .cuts
            .iter()
            .enumerate()
            .map(|(i, cut)| CutRow {
                kind: cut.kind.name().into(),
                gate: cut.gate.name().into(),
                src: cut.edge.src,
                dst: cut.edge.dst,
                fragments: cut.fragments,
                gamma: cut.gamma,
                class: class_of(i).into(),
            })
            .collect(),
        qro: qro_summary,
        fold: FoldStats {
            original_nodes: g.len(),
            folded_nodes: folded,
            compression_ratio: round12(folded as f64 / g.len().max(1) as f64),
        },
        baseline,
        timings: Timings {
            fold_ms: ms(run.timings.fold),
            module_find_ms: ms(run.timings.module_find),
            merge_ms: ms(run.timings.merge),
            refine_ms: ms(run.timings.refine),
            total_ms: ms(total),
        },
    };
    let dot = with_dot.then(|| match &run.meta {
        Some(m) => export_dot(&(m, g)),
        None => export_dot(g),
    });
    Ok(CutRun {
        report,
        graph: run.graph,
        partition: run.partition,
        dot,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    Exact,
    Sampled { shots: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyRecord {
    pub mode: String,
    /// `pipeline`, or `baseline` when the pipeline cut exceeds the exact-mode budget.
    pub partition: String,
    pub fragments: usize,
    pub cuts: usize,
    pub oracle: f64,
    pub reconstructed: f64,
    pub abs_error: f64,
    pub tolerance: f64,
    pub evaluations: u64,
    pub std_error: Option<f64>,
    pub seed: u64,
    pub passed: bool,
}

impl VerifyRecord {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "mode = {}", self.mode);
        let _ = writeln!(s, "partition = {}", self.partition);
        let _ = writeln!(s, "fragments = {}", self.fragments);
        let _ = writeln!(s, "cuts = {}", self.cuts);
        let _ = writeln!(s, "oracle = {:.12}", self.oracle);
        let _ = writeln!(s, "reconstructed = {:.12}", self.reconstructed);
        let _ = writeln!(s, "abs_error = {:.3e}", self.abs_error);
        let _ = writeln!(s, "tolerance = {:.3e}", self.tolerance);
        let _ = writeln!(s, "evaluations = {}", self.evaluations);
        if let Some(se) = self.std_error {
            let _ = writeln!(s, "std_error = {se:.6}");
        }
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "result = {}", if self.passed { "pass" } else { "fail" });
        s
    }
}

/// Cuts `c` with the pipeline and reconstructs `⟨o⟩` from the fragments.
/// In exact mode a pipeline cut with more than [`MAX_EXACT_CUTS`] cuts is
/// replaced by the baseline partition when that one fits the budget.
/// A record is returned even when the check fails; `passed` tells.
pub fn cmd_verify(
    c: &Circuit,
    opts: &CutOptions,
    observable: Option<&Observable>,
    mode: VerifyMode,
) -> Result<VerifyRecord, CliError> {
    if c.num_qubits() > MAX_QUBITS {
        return Err(CliError::Input(format!(
            "{} qubits exceed the verification limit of {MAX_QUBITS}",
            c.num_qubits()
        )));
    }
    let o = observable.cloned().unwrap_or_else(|| Observable::all_z(c.num_qubits()));
    let run = cmd_cut(c, "", opts, false)?;
    let oracle = oracle_expectation(c, &o).map_err(knit_input)?;
    let (rmode, name) = match mode {
        VerifyMode::Exact => (ReconstructionMode::Exact, "exact"),
        VerifyMode::Sampled { shots } => (ReconstructionMode::Sampled { shots, seed: opts.seed }, "sampled"),
    };
    let (partition, which) = match mode {
        VerifyMode::Exact if run.partition.cuts.len() > MAX_EXACT_CUTS => {
            let b = naive_baseline(&run.graph, opts.qubit_limit).map_err(|e| CliError::Input(e.to_string()))?;
            if b.cuts.len() > MAX_EXACT_CUTS {
                return Err(knit_input(KnitError::TooManyCuts {
                    n: run.partition.cuts.len(),
                    max: MAX_EXACT_CUTS,
                }));
            }
            (b, "baseline")
        }
        _ => (run.partition, "pipeline"),
    };
    let r = reconstruct_expectation::<f64>(c, &partition, &o, rmode).map_err(knit_input)?;
    let tolerance = match r.std_error {
        Some(se) => SAMPLED_SIGMAS * se,
        None => EXACT_TOLERANCE,
    };
    let abs_error = (r.value - oracle).abs();
    Ok(VerifyRecord {
        mode: name.into(),
        partition: which.into(),
        fragments: partition.fragments.len(),
        cuts: partition.cuts.len(),
        oracle,
        reconstructed: r.value,
        abs_error,
        tolerance,
        evaluations: r.evaluations,
        std_error: r.std_error,
        seed: opts.seed,
        passed: abs_error <= tolerance,
    })
}

fn knit_input(e: KnitError) -> CliError {
    CliError::Input(e.to_string())
}

/// Parses `50..190:20` (inclusive, step), `30..100` (step 1) or `8,16,32`.
pub fn parse_sizes(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Usage(format!("bad size list `{s}`"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    if let Some((lo, rest)) = s.split_once("..") {
        let (hi, step) = match rest.split_once(':') {
            Some((hi, step)) => (num(hi)?, num(step)?),
            None => (num(rest)?, 1),
        };
        let lo = num(lo)?;
        if step == 0 || hi < lo {
            return Err(bad());
        }
        Ok((lo..=hi).step_by(step).collect())
    } else {
        s.split(',').map(num).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub qubits: usize,
    pub qubit_limit: usize,
    pub fragments: usize,
    pub cuts: usize,
    pub log10_qro_theoretical: f64,
    pub log10_qro_practical: f64,
    pub log10_baseline_theoretical: f64,
    pub log10_baseline_practical: f64,
    pub log10_ratio_theoretical: f64,
    pub log10_ratio_practical: f64,
    pub compression_ratio: f64,
    pub runtime_ms: f64,
}

pub const SWEEP_HEADER: &str = "qubits K fragments cuts log10_qro_th log10_qro_pr log10_base_th log10_base_pr \
                                log10_ratio_th log10_ratio_pr compression runtime_ms";

impl SweepRow {
    pub fn to_line(&self) -> String {
        format!(
            "{} {} {} {} {:.4} {:.4} {:.4} {:.4} {:.4} {:.4} {:.4} {:.1}",
            self.qubits,
            self.qubit_limit,
            self.fragments,
            self.cuts,
            self.log10_qro_theoretical,
            self.log10_qro_practical,
            self.log10_baseline_theoretical,
            self.log10_baseline_practical,
            self.log10_ratio_theoretical,
            self.log10_ratio_practical,
            self.compression_ratio,
            self.runtime_ms
        )
    }
}

/// One row per size; sizes are total qubit counts.
pub fn cmd_sweep(kind: WorkloadKind, sizes: &[usize], opts: &CutOptions) -> Result<Vec<SweepRow>, CliError> {
    let opts = CutOptions {
        baseline: true,
        ..opts.clone()
    };
    sizes
        .iter()
        .map(|&q| {
            let c = GenSpec::new(kind, kind.size_for_qubits(q)?).build()?;
            let run = cmd_cut(&c, &format!("{} {q}", kind.name()), &opts, false)?;
            let r = &run.report;
            let b = r.baseline.as_ref().expect("baseline requested");
            Ok(SweepRow {
                qubits: c.num_qubits(),
                qubit_limit: opts.qubit_limit,
                fragments: r.fragments.len(),
                cuts: r.cuts.len(),
                log10_qro_theoretical: r.qro.log10_theoretical,
                log10_qro_practical: r.qro.log10_practical,
                log10_baseline_theoretical: b.qro.log10_theoretical,
                log10_baseline_practical: b.qro.log10_practical,
                log10_ratio_theoretical: b.log10_ratio_theoretical,
                log10_ratio_practical: b.log10_ratio_practical,
                compression_ratio: r.fold.compression_ratio,
                runtime_ms: r.timings.total_ms,
            })
        })
        .collect()
}

pub fn sweep_table(rows: &[SweepRow]) -> String {
    let mut s = String::from(SWEEP_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.to_line());
        s.push('\n');
    }
    s
}

/// Writes `text` to `path`, or returns it for stdout when `path` is `None`.
pub fn emit(text: &str, path: Option<&PathBuf>) -> Result<Option<String>, CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map(|_| None).map_err(input(p.display())),
        None => Ok(Some(text.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_lists() {
        assert_eq!(parse_sizes("50..190:20").unwrap().len(), 8);
        assert_eq!(parse_sizes("3..5").unwrap(), vec![3, 4, 5]);
        assert_eq!(parse_sizes("8,16").unwrap(), vec![8, 16]);
        assert!(parse_sizes("5..3").is_err());
        assert!(parse_sizes("1..9:0").is_err());
    }

    #[test]
    fn scientific() {
        assert_eq!(sci(2.0), "1.000e2");
        assert_eq!(sci(1304.5), "3.162e1304");
        assert_eq!(sci(0.0), "1.000e0");
    }

    #[test]
    fn ranges() {
        assert_eq!(qubit_ranges(&[0, 1, 2, 3, 7, 9, 10]), "0-3,7,9-10");
        assert_eq!(qubit_ranges(&[]), "");
    }

    #[test]
    fn qubit_sizes() {
        assert_eq!(WorkloadKind::Bv.size_for_qubits(50).unwrap(), 49);
        assert_eq!(WorkloadKind::Adder.size_for_qubits(190).unwrap(), 94);
        assert!(WorkloadKind::Adder.size_for_qubits(51).is_err());
    }

    #[test]
    fn ghz8_report() {
        let c = GenSpec::new(WorkloadKind::Ghz, 8).build().unwrap();
        let run = cmd_cut(&c, "ghz 8", &CutOptions::new(4), true).unwrap();
        assert_eq!((run.report.fragments.len(), run.report.cuts.len()), (2, 1));
        assert!(run.dot.unwrap().starts_with("digraph"));
        let text = run.report.to_text();
        assert!(text.contains("qubit_limit = 4"));
    }

    #[test]
    fn verify_ghz4() {
        let c = GenSpec::new(WorkloadKind::Ghz, 4).build().unwrap();
        let r = cmd_verify(&c, &CutOptions::new(2), None, VerifyMode::Exact).unwrap();
        assert!(r.passed);
        assert!((r.oracle - 1.0).abs() < 1e-12);
    }
}
