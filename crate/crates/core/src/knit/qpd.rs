//! Quasiprobability decompositions of the cut channels.
//!
//! Wire cut: measure a Pauli and prepare one of its eigenstates,
//! `ρ = ½ Σ_P Tr(Pρ) P` with each `P` split into eigenprojectors.
//!
//! Gate cut of `cz`: six products of local operations,
//! `½[S⊗S] + ½[S†⊗S†] + ½[Mz⊗I] − ½[Mz⊗Z] + ½[I⊗Mz] − ½[Z⊗Mz]`, where
//! `Mz(ρ) = Σ_a a·Π_a ρ Π_a` is a mid-circuit Z measurement weighted by its
//! outcome. `cx` conjugates the target side by `h`. `cp(θ)` factors into
//! local `rz(θ/2)` rotations and `exp(iθ/4 Z⊗Z)`.

use crate::circuit::{GateKind, Pauli};
use crate::scalar::Real;

use super::KnitError;

/// One step of a fragment-local operation.
#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    Gate(GateKind, Vec<f64>),
    /// Outcome-weighted mid-circuit measurement in the Z basis.
    MeasureZ,
}

impl Step {
    fn gate(kind: GateKind) -> Step {
        Step::Gate(kind, Vec::new())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Prep {
    Zero,
    One,
    Plus,
    Minus,
    PlusI,
    MinusI,
}

impl Prep {
    /// Gates taking `|0⟩` to this state.
    pub fn gates(self) -> &'static [GateKind] {
        match self {
            Prep::Zero => &[],
            Prep::One => &[GateKind::X],
            Prep::Plus => &[GateKind::H],
            Prep::Minus => &[GateKind::X, GateKind::H],
            Prep::PlusI => &[GateKind::H, GateKind::S],
            Prep::MinusI => &[GateKind::H, GateKind::Sdg],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Prep::Zero => "|0>",
            Prep::One => "|1>",
            Prep::Plus => "|+>",
            Prep::Minus => "|->",
            Prep::PlusI => "|+i>",
            Prep::MinusI => "|-i>",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum QpdAction {
    /// Terminal measurement of a Pauli, weighted by its eigenvalue.
    Measure(Pauli),
    Prepare(Prep),
    Ops(Vec<Step>),
}

/// `coefficient · (left ⊗ right)`. For wire cuts `left` acts on the
/// upstream side and `right` on the downstream side; for gate cuts on the
/// first and second operand.
#[derive(Debug, Clone, PartialEq)]
pub struct QpdTerm<T: Real> {
    pub coefficient: T,
    pub left: QpdAction,
    pub right: QpdAction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    Wire,
    Gate(GateKind),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QpdDecomposition<T: Real> {
    pub terms: Vec<QpdTerm<T>>,
    /// `(Σ|a_i|)²`.
    pub gamma: T,
    pub channel_kind: ChannelKind,
    /// Angles of the decomposed gate.
    pub params: Vec<f64>,
}

impl<T: Real> QpdDecomposition<T> {
    fn new(terms: Vec<QpdTerm<T>>, channel_kind: ChannelKind, params: Vec<f64>) -> Self {
        let l1: T = terms.iter().map(|t| t.coefficient.abs()).sum();
        QpdDecomposition {
            gamma: l1 * l1,
            terms,
            channel_kind,
            params,
        }
    }

    /// `Σ|a_i|`.
    pub fn one_norm(&self) -> T {
        self.terms.iter().map(|t| t.coefficient.abs()).sum()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

pub fn wire_cut_decomposition<T: Real>() -> QpdDecomposition<T> {
    let half = T::lit(0.5);
    let t = |p: Pauli, s: Prep, sign: f64| QpdTerm {
        coefficient: half * T::lit(sign),
        left: QpdAction::Measure(p),
        right: QpdAction::Prepare(s),
    };
    let terms = vec![
        t(Pauli::I, Prep::Zero, 1.0),
        t(Pauli::I, Prep::One, 1.0),
        t(Pauli::X, Prep::Plus, 1.0),
        t(Pauli::X, Prep::Minus, -1.0),
        t(Pauli::Y, Prep::PlusI, 1.0),
        t(Pauli::Y, Prep::MinusI, -1.0),
        t(Pauli::Z, Prep::Zero, 1.0),
        t(Pauli::Z, Prep::One, -1.0),
    ];
    QpdDecomposition::new(terms, ChannelKind::Wire, Vec::new())
}

fn ops(steps: Vec<Step>) -> QpdAction {
    QpdAction::Ops(steps)
}

fn cz_terms<T: Real>(target: impl Fn(Vec<Step>) -> Vec<Step>) -> Vec<QpdTerm<T>> {
    use GateKind::{Sdg, S, Z};
    let half = T::lit(0.5);
    let term = |a: f64, l: Vec<Step>, r: Vec<Step>| QpdTerm {
        coefficient: half * T::lit(a),
        left: ops(l),
        right: ops(target(r)),
    };
    vec![
        term(1.0, vec![Step::gate(S)], vec![Step::gate(S)]),
        term(1.0, vec![Step::gate(Sdg)], vec![Step::gate(Sdg)]),
        term(1.0, vec![Step::MeasureZ], vec![]),
        term(-1.0, vec![Step::MeasureZ], vec![Step::gate(Z)]),
        term(1.0, vec![], vec![Step::MeasureZ]),
        term(-1.0, vec![Step::gate(Z)], vec![Step::MeasureZ]),
    ]
}

fn cp_terms<T: Real>(theta: f64) -> Vec<QpdTerm<T>> {
    use GateKind::{Rz, Sdg, S, Z};
    let phi = theta / 4.0;
    let (s, c) = phi.sin_cos();
    let l = || Step::Gate(Rz, vec![theta / 2.0]);
    let with = |k: GateKind| vec![Step::gate(k), l()];
    let term = |a: f64, left: Vec<Step>, right: Vec<Step>| QpdTerm {
        coefficient: T::lit(a),
        left: ops(left),
        right: ops(right),
    };
    let mz = || vec![Step::MeasureZ];
    let mut terms = vec![
        term(c * c, vec![l()], vec![l()]),
        term(s * s, with(Z), with(Z)),
        term(c * s, mz(), with(Sdg)),
        term(-c * s, mz(), with(S)),
        term(c * s, with(Sdg), mz()),
        term(-c * s, with(S), mz()),
    ];
    terms.retain(|t| t.coefficient != T::zero());
    terms
}

/// Decomposition of a gate cut. `params` holds the gate's angles.
pub fn gate_cut_decomposition<T: Real>(kind: GateKind, params: &[f64]) -> Result<QpdDecomposition<T>, KnitError> {
    let terms = match kind {
        GateKind::Cz => cz_terms(|r| r),
        GateKind::Cx => cz_terms(|r| {
            let mut v = vec![Step::gate(GateKind::H)];
            v.extend(r);
            v.push(Step::gate(GateKind::H));
            v
        }),
        GateKind::Cp => {
            let theta = *params.first().ok_or(KnitError::UnsupportedGateCut(kind))?;
            cp_terms(theta)
        }
        _ => return Err(KnitError::UnsupportedGateCut(kind)),
    };
    Ok(QpdDecomposition::new(terms, ChannelKind::Gate(kind), params.to_vec()))
}
