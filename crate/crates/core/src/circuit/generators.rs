//! Deterministic benchmark workloads: GHZ, Bernstein-Vazirani, Cuccaro
//! ripple-carry adder and QFT.

use std::f64::consts::PI;

use thiserror::Error;

use super::{Circuit, Gate, GateKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("{kind} needs {min} or more, got {got}")]
    TooSmall { kind: &'static str, min: usize, got: usize },
    #[error("secret string must be non-empty")]
    EmptySecret,
    #[error("secret string may only contain '0' and '1', found {0:?}")]
    BadSecret(char),
}

fn too_small(kind: &'static str, min: usize, got: usize) -> Result<(), GeneratorError> {
    if got < min {
        Err(GeneratorError::TooSmall { kind, min, got })
    } else {
        Ok(())
    }
}

fn build(n: usize, gates: Vec<Gate>) -> Circuit {
    Circuit::from_gates(n, gates).expect("generator emits in-range gates")
}

/// `h(0)` followed by a CNOT ladder.
pub fn gen_ghz(n: usize) -> Result<Circuit, GeneratorError> {
    too_small("ghz qubit count", 2, n)?;
    let mut gates = Vec::with_capacity(n);
    gates.push(Gate::one(GateKind::H, 0));
    for i in 0..n - 1 {
        gates.push(Gate::two(GateKind::Cx, i, i + 1));
    }
    Ok(build(n, gates))
}

/// Bernstein-Vazirani for a bit string; `secret[i]` is data qubit `i`, the
/// ancilla is the last qubit.
pub fn gen_bv(secret: &str) -> Result<Circuit, GeneratorError> {
    let bits = secret
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(GeneratorError::BadSecret(other)),
        })
        .collect::<Result<Vec<bool>, _>>()?;
    if bits.is_empty() {
        return Err(GeneratorError::EmptySecret);
    }
    let n = bits.len();
    let anc = n;
    let mut gates = Vec::new();
    for q in 0..n {
        gates.push(Gate::one(GateKind::H, q));
    }
    gates.push(Gate::one(GateKind::X, anc));
    gates.push(Gate::one(GateKind::H, anc));
    for (q, &b) in bits.iter().enumerate() {
        if b {
            gates.push(Gate::two(GateKind::Cx, q, anc));
        }
    }
    for q in 0..n {
        gates.push(Gate::one(GateKind::H, q));
    }
    Ok(build(n + 1, gates))
}

/// Toffoli lowered to {h, t, tdg, cx}.
fn push_ccx(gates: &mut Vec<Gate>, a: usize, b: usize, c: usize) {
    use GateKind::*;
    gates.extend([
        Gate::one(H, c),
        Gate::two(Cx, b, c),
        Gate::one(Tdg, c),
        Gate::two(Cx, a, c),
        Gate::one(T, c),
        Gate::two(Cx, b, c),
        Gate::one(Tdg, c),
        Gate::two(Cx, a, c),
        Gate::one(T, b),
        Gate::one(T, c),
        Gate::one(H, c),
        Gate::two(Cx, a, b),
        Gate::one(T, a),
        Gate::one(Tdg, b),
        Gate::two(Cx, a, b),
    ]);
}

fn push_maj(gates: &mut Vec<Gate>, c: usize, b: usize, a: usize) {
    gates.push(Gate::two(GateKind::Cx, a, b));
    gates.push(Gate::two(GateKind::Cx, a, c));
    push_ccx(gates, c, b, a);
}

fn push_uma(gates: &mut Vec<Gate>, c: usize, b: usize, a: usize) {
    push_ccx(gates, c, b, a);
    gates.push(Gate::two(GateKind::Cx, a, c));
    gates.push(Gate::two(GateKind::Cx, c, b));
}

/// Qubit layout of [`gen_adder`]: carry-in, interleaved operand bits, carry-out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdderLayout {
    pub bits: usize,
}

impl AdderLayout {
    pub fn carry_in(&self) -> usize {
        0
    }

    /// Bit `i` of the `b` operand; holds the sum bit afterwards.
    pub fn b(&self, i: usize) -> usize {
        1 + 2 * i
    }

    pub fn a(&self, i: usize) -> usize {
        2 + 2 * i
    }

    pub fn carry_out(&self) -> usize {
        2 * self.bits + 1
    }

    pub fn num_qubits(&self) -> usize {
        2 * self.bits + 2
    }
}

/// Cuccaro ripple-carry adder computing `b <- a + b` on `2n + 2` qubits.
pub fn gen_adder(n: usize) -> Result<Circuit, GeneratorError> {
    too_small("adder operand width", 1, n)?;
    let l = AdderLayout { bits: n };
    let carry = |i: usize| if i == 0 { l.carry_in() } else { l.a(i - 1) };
    let mut gates = Vec::new();
    for i in 0..n {
        push_maj(&mut gates, carry(i), l.b(i), l.a(i));
    }
    gates.push(Gate::two(GateKind::Cx, l.a(n - 1), l.carry_out()));
    for i in (0..n).rev() {
        push_uma(&mut gates, carry(i), l.b(i), l.a(i));
    }
    Ok(build(l.num_qubits(), gates))
}

/// QFT without the terminal swap network.
pub fn gen_qft(n: usize) -> Result<Circuit, GeneratorError> {
    qft(n, false)
}

/// QFT followed by the bit-reversal swaps.
pub fn gen_qft_with_swaps(n: usize) -> Result<Circuit, GeneratorError> {
    qft(n, true)
}

fn qft(n: usize, swaps: bool) -> Result<Circuit, GeneratorError> {
    too_small("qft qubit count", 1, n)?;
    let mut gates = Vec::with_capacity(n + n * (n - 1) / 2);
    for i in 0..n {
        gates.push(Gate::one(GateKind::H, i));
        for j in i + 1..n {
            let theta = PI / (1u64 << (j - i).min(62)) as f64;
            gates.push(Gate::cp(theta, j, i));
        }
    }
    if swaps {
        for i in 0..n / 2 {
            gates.push(Gate::two(GateKind::Swap, i, n - 1 - i));
        }
    }
    Ok(build(n, gates))
}
