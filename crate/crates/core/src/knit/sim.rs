//! Dense statevector simulator. Qubit `q` is bit `q` of the basis index.

use num_complex::Complex;

use super::KnitError;
use crate::circuit::{Circuit, Gate, GateKind, Observable, Pauli};
use crate::scalar::Real;

pub const MAX_QUBITS: usize = 14;

pub type Mat2<T> = [[Complex<T>; 2]; 2];

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Real> {
    n: usize,
    amps: Vec<Complex<T>>,
}

fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// Matrix of a single-qubit gate.
pub fn gate_matrix<T: Real>(kind: GateKind, params: &[f64]) -> Mat2<T> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let phase = |t: f64| c(t.cos(), t.sin());
    let th = params.first().copied().unwrap_or(0.0);
    match kind {
        GateKind::H => [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]],
        GateKind::X => [[z, one], [one, z]],
        GateKind::Y => [[z, c(0.0, -1.0)], [c(0.0, 1.0), z]],
        GateKind::Z => [[one, z], [z, c(-1.0, 0.0)]],
        GateKind::S => [[one, z], [z, c(0.0, 1.0)]],
        GateKind::Sdg => [[one, z], [z, c(0.0, -1.0)]],
        GateKind::T => [[one, z], [z, phase(std::f64::consts::FRAC_PI_4)]],
        GateKind::Tdg => [[one, z], [z, phase(-std::f64::consts::FRAC_PI_4)]],
        GateKind::Rx => {
            let (s, co) = (th / 2.0).sin_cos();
            [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
        }
        GateKind::Ry => {
            let (s, co) = (th / 2.0).sin_cos();
            [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
        }
        GateKind::Rz => [[phase(-th / 2.0), z], [z, phase(th / 2.0)]],
        GateKind::P => [[one, z], [z, phase(th)]],
        GateKind::Cx | GateKind::Cz | GateKind::Cp | GateKind::Swap => {
            panic!("{kind} is not a single-qubit gate")
        }
    }
}

impl<T: Real> StateVector<T> {
    /// `|0…0⟩` on `n` qubits.
    pub fn zero(n: usize) -> Result<Self, KnitError> {
        if n > MAX_QUBITS {
            return Err(KnitError::TooManyQubits { n, max: MAX_QUBITS });
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << n];
        amps[0] = Complex::new(T::one(), T::zero());
        Ok(StateVector { n, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex<T>>) -> Self {
        assert!(amps.len().is_power_of_two(), "length must be a power of two");
        StateVector {
            n: amps.len().trailing_zeros() as usize,
            amps,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply_matrix(&mut self, q: usize, m: &Mat2<T>) {
        let bit = 1 << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a, b) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a + m[0][1] * b;
                self.amps[i | bit] = m[1][0] * a + m[1][1] * b;
            }
        }
    }

    pub fn apply(&mut self, kind: GateKind, params: &[f64], qubits: &[usize]) {
        match (kind, qubits) {
            (GateKind::Cx, &[ctl, tgt]) => {
                let (cb, tb) = (1 << ctl, 1 << tgt);
                for i in 0..self.amps.len() {
                    if i & cb != 0 && i & tb == 0 {
                        self.amps.swap(i, i | tb);
                    }
                }
            }
            (GateKind::Cz, &[a, b]) => self.phase_both(a, b, -Complex::new(T::one(), T::zero())),
            (GateKind::Cp, &[a, b]) => {
                let t = params[0];
                self.phase_both(a, b, c(t.cos(), t.sin()))
            }
            (GateKind::Swap, &[a, b]) => {
                let (ab, bb) = (1 << a, 1 << b);
                for i in 0..self.amps.len() {
                    if i & ab != 0 && i & bb == 0 {
                        self.amps.swap(i, (i & !ab) | bb);
                    }
                }
            }
            (k, &[q]) => self.apply_matrix(q, &gate_matrix(k, params)),
            _ => panic!("gate {kind} applied to {} qubits", qubits.len()),
        }
    }

    pub fn apply_gate(&mut self, g: &Gate) {
        self.apply(g.kind, &g.params, &g.qubits);
    }

    fn phase_both(&mut self, a: usize, b: usize, ph: Complex<T>) {
        let mask = (1 << a) | (1 << b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = *amp * ph;
            }
        }
    }

    /// Projects qubit `q` onto `outcome` without renormalizing; returns the
    /// remaining squared norm.
    pub fn project(&mut self, q: usize, outcome: bool) -> T {
        let bit = 1 << q;
        let zero = Complex::new(T::zero(), T::zero());
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if (i & bit != 0) != outcome {
                *amp = zero;
            }
        }
        self.norm_sqr()
    }

    /// `Re ⟨ψ|P|ψ⟩` for a Pauli string indexed by qubit. Unnormalized
    /// states give the norm-weighted value.
    pub fn pauli_expectation(&self, paulis: &[Pauli]) -> T {
        let (mut flip, mut sign, mut ys) = (0usize, 0usize, 0u32);
        for (q, p) in paulis.iter().enumerate() {
            match p {
                Pauli::I => {}
                Pauli::X => flip |= 1 << q,
                Pauli::Y => {
                    flip |= 1 << q;
                    sign |= 1 << q;
                    ys += 1;
                }
                Pauli::Z => sign |= 1 << q,
            }
        }
        let global = match ys % 4 {
            0 => c(1.0, 0.0),
            1 => c(0.0, 1.0),
            2 => c(-1.0, 0.0),
            _ => c(0.0, -1.0),
        };
        let mut acc = Complex::new(T::zero(), T::zero());
        for (i, &a) in self.amps.iter().enumerate() {
            let term = self.amps[i ^ flip].conj() * a;
            if (i & sign).count_ones() % 2 == 1 {
                acc = acc - term;
            } else {
                acc = acc + term;
            }
        }
        (acc * global).re
    }
}

/// Exact final state from `|0…0⟩`.
pub fn simulate<T: Real>(c: &Circuit) -> Result<StateVector<T>, KnitError> {
    let mut s = StateVector::zero(c.num_qubits())?;
    for g in c.gates() {
        s.apply_gate(g);
    }
    Ok(s)
}

pub fn expectation<T: Real>(s: &StateVector<T>, o: &Observable) -> Result<T, KnitError> {
    if o.len() != s.num_qubits() {
        return Err(KnitError::ObservableLength {
            expected: s.num_qubits(),
            got: o.len(),
        });
    }
    Ok(s.pauli_expectation(o.paulis()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{gen_bv, gen_ghz, gen_qft};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-10
    }

    #[test]
    fn ghz3_amplitudes() {
        let s = simulate::<f64>(&gen_ghz(3).unwrap()).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        for (i, a) in s.amplitudes().iter().enumerate() {
            let want = if i == 0 || i == 7 { r } else { 0.0 };
            assert!(close(a.re, want) && close(a.im, 0.0));
        }
        assert!(close(s.norm_sqr(), 1.0));
    }

    #[test]
    fn parity_expectations() {
        let s4 = simulate::<f64>(&gen_ghz(4).unwrap()).unwrap();
        assert!(close(expectation(&s4, &Observable::all_z(4)).unwrap(), 1.0));
        let s3 = simulate::<f64>(&gen_ghz(3).unwrap()).unwrap();
        assert!(close(expectation(&s3, &Observable::all_z(3)).unwrap(), 0.0));
        let xs: Observable = "XXX".parse().unwrap();
        assert!(close(expectation(&s3, &xs).unwrap(), 1.0));
    }

    #[test]
    fn bv_reads_secret() {
        let s = simulate::<f64>(&gen_bv("10").unwrap()).unwrap();
        assert!(close(expectation(&s, &Observable::z_on(3, 0)).unwrap(), -1.0));
        assert!(close(expectation(&s, &Observable::z_on(3, 1)).unwrap(), 1.0));
    }

    #[test]
    fn qft_of_zero_is_uniform() {
        let s = simulate::<f64>(&gen_qft(3).unwrap()).unwrap();
        let want = 2f64.powf(-1.5);
        assert!(s.amplitudes().iter().all(|a| close(a.norm(), want)));
    }

    #[test]
    fn y_expectation_sign() {
        // S H |0> = |+i>, <Y> = 1
        let mut s = StateVector::<f64>::zero(1).unwrap();
        s.apply(GateKind::H, &[], &[0]);
        s.apply(GateKind::S, &[], &[0]);
        assert!(close(s.pauli_expectation(&[Pauli::Y]), 1.0));
    }

    #[test]
    fn rejects_wide_circuits() {
        assert!(matches!(
            StateVector::<f64>::zero(15),
            Err(KnitError::TooManyQubits { n: 15, .. })
        ));
    }

    #[test]
    fn single_precision_runs() {
        let s = simulate::<f32>(&gen_ghz(3).unwrap()).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-5);
    }
}
