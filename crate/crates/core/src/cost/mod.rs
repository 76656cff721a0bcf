//! Cut weights, cut classification and quantum resource overhead.
//!
//! The per-cut multiplicand used throughout is the sampling weight: 16 for a
//! lone wire cut, 9 for the CNOT family (cx, cz, cp) and 49 for swap. A group
//! of `n >= 2` parallel wire cuts costs `(2^(n+1) + 1)^2` in theoretical mode
//! and `16^n` in practical mode.
//!
//! QRO of a partition is `Σ_i (Π_j γ_ij) · w(c_i) · d(c_i)` over fragments.

mod groups;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::circuit::GateKind;
use crate::graph::CircuitGraph;
use crate::partition::Partition;
use crate::scalar::Real;

pub(crate) use groups::classify_wire_bucket;
pub use groups::{group_parallel_cuts, CutClass, CutGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CutKind {
    Wire,
    Gate,
}

impl CutKind {
    pub fn name(self) -> &'static str {
        match self {
            CutKind::Wire => "wire",
            CutKind::Gate => "gate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaMode {
    /// Parallel wire cuts share the reduced joint weight.
    Theoretical,
    /// Every cut pays its fixed single-cut weight.
    Practical,
}

impl GammaMode {
    pub fn name(self) -> &'static str {
        match self {
            GammaMode::Theoretical => "theoretical",
            GammaMode::Practical => "practical",
        }
    }

    pub fn other(self) -> GammaMode {
        match self {
            GammaMode::Theoretical => GammaMode::Practical,
            GammaMode::Practical => GammaMode::Theoretical,
        }
    }
}

/// Which quantity enters the QRO product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GammaConvention {
    /// Squared one-norm of the decomposition (9 for cx).
    #[default]
    SamplingWeight,
    /// Square root of the sampling weight (3 for cx).
    VariationCount,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CostError {
    #[error("no gate-cut weight for gate `{0}`")]
    UnknownGate(GateKind),
    #[error("gate cut lookup needs a gate name")]
    MissingGate,
}

const WIRE_WEIGHT: f64 = 16.0;
const CX_FAMILY_WEIGHT: f64 = 9.0;
const SWAP_WEIGHT: f64 = 49.0;

#[derive(Debug, Clone, PartialEq)]
pub struct GammaTable<T: Real> {
    pub wire_single: T,
    pub gate: BTreeMap<GateKind, T>,
    pub mode: GammaMode,
    pub convention: GammaConvention,
}

impl<T: Real> GammaTable<T> {
    pub fn new(mode: GammaMode) -> Self {
        Self::with_convention(mode, GammaConvention::SamplingWeight)
    }

    pub fn with_convention(mode: GammaMode, convention: GammaConvention) -> Self {
        let conv = |x: f64| match convention {
            GammaConvention::SamplingWeight => T::lit(x),
            GammaConvention::VariationCount => T::lit(x).sqrt(),
        };
        let gate = [
            (GateKind::Cx, CX_FAMILY_WEIGHT),
            (GateKind::Cz, CX_FAMILY_WEIGHT),
            (GateKind::Cp, CX_FAMILY_WEIGHT),
            (GateKind::Swap, SWAP_WEIGHT),
        ]
        .into_iter()
        .map(|(k, v)| (k, conv(v)))
        .collect();
        GammaTable {
            wire_single: conv(WIRE_WEIGHT),
            gate,
            mode,
            convention,
        }
    }

    pub fn in_mode(&self, mode: GammaMode) -> Self {
        GammaTable { mode, ..self.clone() }
    }

    pub fn gate_weight(&self, kind: GateKind) -> Result<T, CostError> {
        self.gate.get(&kind).copied().ok_or(CostError::UnknownGate(kind))
    }

    pub fn lookup(&self, kind: CutKind, gate: Option<GateKind>) -> Result<T, CostError> {
        match kind {
            CutKind::Wire => Ok(self.wire_single),
            CutKind::Gate => self.gate_weight(gate.ok_or(CostError::MissingGate)?),
        }
    }

    /// Joint weight of `n` wire cuts cut together.
    pub fn parallel_wire(&self, n: usize) -> T {
        match (self.mode, n) {
            (_, 0) => T::one(),
            (_, 1) => self.wire_single,
            (GammaMode::Practical, n) => self.wire_single.powi(n as i32),
            (GammaMode::Theoretical, n) => {
                let base = T::lit(2.0).powi(n as i32 + 1) + T::one();
                match self.convention {
                    GammaConvention::SamplingWeight => base * base,
                    GammaConvention::VariationCount => base,
                }
            }
        }
    }
}

/// Single-cut weight from the default table.
pub fn gamma_lookup(kind: CutKind, gate: Option<GateKind>, mode: GammaMode) -> Result<f64, CostError> {
    GammaTable::<f64>::new(mode).lookup(kind, gate)
}

/// `gamma^n`.
pub fn sampling_overhead<T: Real>(gamma: T, n_cuts: u32) -> T {
    gamma.powi(n_cuts as i32)
}

/// Shot count needed for additive error `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBudget<T: Real> {
    pub epsilon: T,
}

impl<T: Real> Default for ErrorBudget<T> {
    fn default() -> Self {
        ErrorBudget { epsilon: T::lit(0.05) }
    }
}

impl<T: Real> ErrorBudget<T> {
    /// `ceil(weight / epsilon^2)`.
    pub fn shots(&self, weight: T) -> T {
        (weight / (self.epsilon * self.epsilon)).ceil()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FragmentCost<T: Real> {
    pub fragment: usize,
    pub width: usize,
    pub depth: usize,
    /// `Π_j γ_ij` in the report's mode.
    pub variation_product: T,
    /// Natural log of `variation_product`, finite even when the product overflows.
    pub ln_variation_product: f64,
    pub shots: T,
}

impl<T: Real> FragmentCost<T> {
    pub fn contribution(&self) -> T {
        self.variation_product * T::lit(self.width as f64) * T::lit(self.depth as f64)
    }

    pub fn ln_contribution(&self) -> f64 {
        self.ln_variation_product + (self.width as f64).ln() + (self.depth as f64).ln()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostReport<T: Real> {
    pub mode: GammaMode,
    pub fragments: Vec<FragmentCost<T>>,
    pub qro: T,
    pub log10_qro: f64,
    pub qro_theoretical: T,
    pub log10_qro_theoretical: f64,
    pub qro_practical: T,
    pub log10_qro_practical: f64,
    /// Product of the weights of every cut unit in the report's mode.
    pub total_sampling_overhead: T,
    pub wire_cuts: usize,
    pub gate_cuts: usize,
    pub groups: Vec<CutGroup>,
}

impl<T: Real> CostReport<T> {
    /// Sum of the per-fragment terms, for cross-checking `qro`.
    pub fn recomputed_qro(&self) -> T {
        self.fragments.iter().map(|f| f.contribution()).sum()
    }

    pub fn parallel_groups(&self) -> impl Iterator<Item = &CutGroup> {
        self.groups.iter().filter(|g| g.class == CutClass::Parallel)
    }
}

/// Per-fragment variation products for a grouping in `mode`, both direct
/// (exact while representable, infinite on overflow) and as natural logs.
struct Products<T> {
    direct: Vec<T>,
    ln: Vec<f64>,
    total: T,
    ln_total: f64,
}

fn products<T: Real>(p: &Partition, groups: &[CutGroup], table: &GammaTable<T>) -> Products<T> {
    let k = p.fragments.len();
    let mut out = Products {
        direct: vec![T::one(); k],
        ln: vec![0.0f64; k],
        total: T::one(),
        ln_total: 0.0,
    };
    for g in groups {
        let weight = unit_weight(p, g, table);
        let lw = weight.to_f64_lossy().ln();
        let (a, b) = g.fragments;
        for f in if b != a { vec![a, b] } else { vec![a] } {
            out.direct[f] = out.direct[f] * weight;
            out.ln[f] += lw;
        }
        out.total = out.total * weight;
        out.ln_total += lw;
    }
    out
}

/// Weight a group contributes to each endpoint's product.
fn unit_weight<T: Real>(p: &Partition, g: &CutGroup, table: &GammaTable<T>) -> T {
    let single = |i: usize| {
        let cut = &p.cuts[i];
        table.lookup(cut.kind, Some(cut.gate)).unwrap_or(table.wire_single)
    };
    match (g.class, table.mode) {
        (CutClass::Parallel, GammaMode::Theoretical) => table.parallel_wire(g.cuts.len()),
        _ => g.cuts.iter().fold(T::one(), |acc, &i| acc * single(i)),
    }
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Natural log of QRO; well defined when QRO itself overflows.
pub fn ln_qro<T: Real>(p: &Partition, g: &CircuitGraph, table: &GammaTable<T>) -> f64 {
    let groups = group_parallel_cuts(p, g);
    let ln_prod = products(p, &groups, table).ln;
    let terms: Vec<f64> = p
        .fragments
        .iter()
        .map(|f| ln_prod[f.id] + (f.width as f64).ln() + (f.depth as f64).ln())
        .collect();
    log_sum_exp(&terms)
}

pub fn qro<T: Real>(p: &Partition, g: &CircuitGraph, table: &GammaTable<T>) -> CostReport<T> {
    let groups = group_parallel_cuts(p, g);
    let budget = ErrorBudget::<T>::default();
    let ln10 = std::f64::consts::LN_10;

    let totals = |mode: GammaMode| {
        let t = table.in_mode(mode);
        let prod = products(p, &groups, &t);
        let terms: Vec<f64> = p
            .fragments
            .iter()
            .map(|f| prod.ln[f.id] + (f.width as f64).ln() + (f.depth as f64).ln())
            .collect();
        let direct: T = p
            .fragments
            .iter()
            .map(|f| prod.direct[f.id] * T::lit(f.width as f64) * T::lit(f.depth as f64))
            .sum();
        let ln_q = log_sum_exp(&terms);
        (prod, exact_or_exp(direct, ln_q), ln_q)
    };
    // direct arithmetic when representable, so small cases come out exact
    fn exact_or_exp<T: Real>(direct: T, ln: f64) -> T {
        if direct.is_finite() {
            direct
        } else {
            T::lit(ln.exp())
        }
    }

    let (prod, _, ln_q) = totals(table.mode);
    let (_, q_other, ln_other) = totals(table.mode.other());
    let (ln_theo, ln_prac) = match table.mode {
        GammaMode::Theoretical => (ln_q, ln_other),
        GammaMode::Practical => (ln_other, ln_q),
    };
    let ln_prod = &prod.ln;

    let fragments: Vec<FragmentCost<T>> = p
        .fragments
        .iter()
        .map(|f| {
            let product = exact_or_exp(prod.direct[f.id], ln_prod[f.id]);
            FragmentCost {
                fragment: f.id,
                width: f.width,
                depth: f.depth,
                variation_product: product,
                ln_variation_product: ln_prod[f.id],
                shots: budget.shots(product),
            }
        })
        .collect();
    let qro_value: T = fragments.iter().map(|f| f.contribution()).sum();
    let (qro_theoretical, qro_practical) = match table.mode {
        GammaMode::Theoretical => (qro_value, q_other),
        GammaMode::Practical => (q_other, qro_value),
    };

    CostReport {
        mode: table.mode,
        qro: qro_value,
        log10_qro: ln_q / ln10,
        qro_theoretical,
        log10_qro_theoretical: ln_theo / ln10,
        qro_practical,
        log10_qro_practical: ln_prac / ln10,
        total_sampling_overhead: exact_or_exp(prod.total, prod.ln_total),
        wire_cuts: p.num_cuts(CutKind::Wire),
        gate_cuts: p.num_cuts(CutKind::Gate),
        fragments,
        groups,
    }
}
