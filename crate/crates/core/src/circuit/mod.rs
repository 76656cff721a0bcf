//! Circuit intermediate representation.
//!
//! A [`Circuit`] is an ordered list of one- and two-qubit [`Gate`]s over
//! indexed qubits. Program order is temporal order.

mod generators;
mod qasm;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use generators::{gen_adder, gen_bv, gen_ghz, gen_qft, gen_qft_with_swaps, AdderLayout, GeneratorError};
pub use qasm::{parse_qasm, write_qasm, QasmError};

/// Absolute tolerance used whenever two gate angles are compared.
pub const ANGLE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    T,
    Sdg,
    Tdg,
    Rx,
    Ry,
    Rz,
    /// Phase gate, also accepted as `u1`.
    P,
    Cx,
    Cz,
    Cp,
    Swap,
}

impl GateKind {
    pub const ALL: [GateKind; 16] = [
        GateKind::H,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::S,
        GateKind::T,
        GateKind::Sdg,
        GateKind::Tdg,
        GateKind::Rx,
        GateKind::Ry,
        GateKind::Rz,
        GateKind::P,
        GateKind::Cx,
        GateKind::Cz,
        GateKind::Cp,
        GateKind::Swap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::T => "t",
            GateKind::Sdg => "sdg",
            GateKind::Tdg => "tdg",
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::P => "p",
            GateKind::Cx => "cx",
            GateKind::Cz => "cz",
            GateKind::Cp => "cp",
            GateKind::Swap => "swap",
        }
    }

    pub fn from_name(name: &str) -> Option<GateKind> {
        let kind = match name {
            "h" => GateKind::H,
            "x" => GateKind::X,
            "y" => GateKind::Y,
            "z" => GateKind::Z,
            "s" => GateKind::S,
            "t" => GateKind::T,
            "sdg" => GateKind::Sdg,
            "tdg" => GateKind::Tdg,
            "rx" => GateKind::Rx,
            "ry" => GateKind::Ry,
            "rz" => GateKind::Rz,
            "p" | "u1" => GateKind::P,
            "cx" | "CX" => GateKind::Cx,
            "cz" => GateKind::Cz,
            "cp" | "cu1" => GateKind::Cp,
            "swap" => GateKind::Swap,
            _ => return None,
        };
        Some(kind)
    }

    /// Number of qubit operands.
    pub fn arity(self) -> usize {
        match self {
            GateKind::Cx | GateKind::Cz | GateKind::Cp | GateKind::Swap => 2,
            _ => 1,
        }
    }

    /// Number of angle parameters.
    pub fn num_params(self) -> usize {
        match self {
            GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::P | GateKind::Cp => 1,
            _ => 0,
        }
    }

    /// Two-qubit gates whose operands play interchangeable roles.
    pub fn is_symmetric(self) -> bool {
        matches!(self, GateKind::Cz | GateKind::Cp | GateKind::Swap)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("gate {gate} expects {expected} qubit operand(s), got {got}")]
    Arity {
        gate: GateKind,
        expected: usize,
        got: usize,
    },
    #[error("gate {gate} expects {expected} parameter(s), got {got}")]
    ParamCount {
        gate: GateKind,
        expected: usize,
        got: usize,
    },
    #[error("duplicate qubit operand {0}")]
    DuplicateQubit(usize),
    #[error("qubit index {qubit} out of range for {num_qubits}-qubit circuit")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("circuit must have at least one qubit")]
    NoQubits,
}

#[derive(Debug, Clone)]
pub struct Gate {
    pub kind: GateKind,
    pub params: Vec<f64>,
    pub qubits: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, params: Vec<f64>, qubits: Vec<usize>) -> Result<Gate, CircuitError> {
        if qubits.len() != kind.arity() {
            return Err(CircuitError::Arity {
                gate: kind,
                expected: kind.arity(),
                got: qubits.len(),
            });
        }
        if params.len() != kind.num_params() {
            return Err(CircuitError::ParamCount {
                gate: kind,
                expected: kind.num_params(),
                got: params.len(),
            });
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(CircuitError::DuplicateQubit(qubits[0]));
        }
        Ok(Gate { kind, params, qubits })
    }

    pub fn one(kind: GateKind, q: usize) -> Gate {
        Gate::new(kind, vec![], vec![q]).expect("valid single-qubit gate")
    }

    pub fn rotation(kind: GateKind, theta: f64, q: usize) -> Gate {
        Gate::new(kind, vec![theta], vec![q]).expect("valid rotation gate")
    }

    pub fn two(kind: GateKind, a: usize, b: usize) -> Gate {
        Gate::new(kind, vec![], vec![a, b]).expect("valid two-qubit gate")
    }

    pub fn cp(theta: f64, a: usize, b: usize) -> Gate {
        Gate::new(GateKind::Cp, vec![theta], vec![a, b]).expect("valid cp gate")
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn is_two_qubit(&self) -> bool {
        self.qubits.len() == 2
    }
}

impl PartialEq for Gate {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.qubits == other.qubits
            && self.params.len() == other.params.len()
            && self
                .params
                .iter()
                .zip(&other.params)
                .all(|(a, b)| (a - b).abs() <= ANGLE_TOLERANCE)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self.params.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", ps.join(","))?;
        }
        let qs: Vec<String> = self.qubits.iter().map(|q| q.to_string()).collect();
        write!(f, " {}", qs.join(","))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Result<Circuit, CircuitError> {
        if num_qubits == 0 {
            return Err(CircuitError::NoQubits);
        }
        Ok(Circuit {
            num_qubits,
            gates: Vec::new(),
        })
    }

    pub fn from_gates(num_qubits: usize, gates: Vec<Gate>) -> Result<Circuit, CircuitError> {
        let mut c = Circuit::new(num_qubits)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        for &q in &gate.qubits {
            if q >= self.num_qubits {
                return Err(CircuitError::QubitOutOfRange {
                    qubit: q,
                    num_qubits: self.num_qubits,
                });
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    /// Appends all gates of `other`, which must not use more qubits.
    pub fn extend(&mut self, other: &Circuit) -> Result<(), CircuitError> {
        for g in other.gates() {
            self.push(g.clone())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObservableError {
    #[error("invalid Pauli symbol {0:?}")]
    BadSymbol(char),
    #[error("observable must not be empty")]
    Empty,
}

/// Pauli string, one operator per qubit (index 0 is qubit 0).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Observable {
    paulis: Vec<Pauli>,
}

impl Observable {
    pub fn new(paulis: Vec<Pauli>) -> Observable {
        Observable { paulis }
    }

    pub fn all_z(n: usize) -> Observable {
        Observable {
            paulis: vec![Pauli::Z; n],
        }
    }

    /// `Z` on `qubit`, identity elsewhere.
    pub fn z_on(n: usize, qubit: usize) -> Observable {
        let mut paulis = vec![Pauli::I; n];
        paulis[qubit] = Pauli::Z;
        Observable { paulis }
    }

    pub fn paulis(&self) -> &[Pauli] {
        &self.paulis
    }

    pub fn len(&self) -> usize {
        self.paulis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paulis.is_empty()
    }
}

impl FromStr for Observable {
    type Err = ObservableError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let paulis = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(ObservableError::BadSymbol(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if paulis.is_empty() {
            return Err(ObservableError::Empty);
        }
        Ok(Observable { paulis })
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.paulis {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}
