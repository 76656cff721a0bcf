//! Small dense density matrices for checking channel identities.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::qpd::{ChannelKind, QpdAction, QpdDecomposition, Step};
use super::sim::{gate_matrix, Mat2, StateVector};
use crate::circuit::{GateKind, Pauli};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    n: usize,
    /// Row-major `2^n × 2^n`.
    m: Vec<Complex<T>>,
}

fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

impl<T: Real> DensityMatrix<T> {
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.m[i * self.dim() + j]
    }

    pub fn zeros(n: usize) -> Self {
        DensityMatrix {
            n,
            m: vec![zero(); 1 << (2 * n)],
        }
    }

    pub fn pure(s: &StateVector<T>) -> Self {
        let a = s.amplitudes();
        let d = a.len();
        let mut out = DensityMatrix::zeros(s.num_qubits());
        for i in 0..d {
            for j in 0..d {
                out.m[i * d + j] = a[i] * a[j].conj();
            }
        }
        out
    }

    /// `G G† / Tr(G G†)` for a Gaussian `G`: a full-rank mixed state.
    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        let d = 1 << n;
        let mut gauss = || {
            let (u1, u2): (f64, f64) = (rng.random::<f64>().max(1e-300), rng.random());
            let r = (-2.0 * u1.ln()).sqrt();
            let t = 2.0 * std::f64::consts::PI * u2;
            Complex::new(T::lit(r * t.cos()), T::lit(r * t.sin()))
        };
        let g: Vec<Complex<T>> = (0..d * d).map(|_| gauss()).collect();
        let mut out = DensityMatrix::zeros(n);
        for i in 0..d {
            for j in 0..d {
                out.m[i * d + j] = (0..d)
                    .map(|k| g[i * d + k] * g[j * d + k].conj())
                    .fold(zero(), |a, b| a + b);
            }
        }
        let tr = out.trace().re;
        for x in out.m.iter_mut() {
            *x = *x / tr;
        }
        out
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim()).map(|i| self.get(i, i)).fold(zero(), |a, b| a + b)
    }

    /// `U ρ U†` with `U` given by its full matrix.
    fn conjugate(&self, u: &[Complex<T>]) -> Self {
        let d = self.dim();
        let mut tmp = vec![zero::<T>(); d * d];
        for i in 0..d {
            for j in 0..d {
                tmp[i * d + j] = (0..d)
                    .map(|k| u[i * d + k] * self.m[k * d + j])
                    .fold(zero(), |a, b| a + b);
            }
        }
        let mut out = DensityMatrix::zeros(self.n);
        for i in 0..d {
            for j in 0..d {
                out.m[i * d + j] = (0..d)
                    .map(|k| tmp[i * d + k] * u[j * d + k].conj())
                    .fold(zero(), |a, b| a + b);
            }
        }
        out
    }

    fn full_1q(&self, q: usize, g: &Mat2<T>) -> Vec<Complex<T>> {
        let d = self.dim();
        let bit = 1 << q;
        let mut u = vec![zero(); d * d];
        for i in 0..d {
            for j in 0..d {
                if i & !bit == j & !bit {
                    u[i * d + j] = g[usize::from(i & bit != 0)][usize::from(j & bit != 0)];
                }
            }
        }
        u
    }

    pub fn apply_gate(&self, kind: GateKind, params: &[f64], qubits: &[usize]) -> Self {
        if qubits.len() == 1 {
            return self.conjugate(&self.full_1q(qubits[0], &gate_matrix(kind, params)));
        }
        let d = self.dim();
        let mut u = vec![zero(); d * d];
        for j in 0..d {
            let mut amps = vec![zero(); d];
            amps[j] = Complex::new(T::one(), T::zero());
            let mut s = StateVector::from_amplitudes(amps);
            s.apply(kind, params, qubits);
            for (i, a) in s.amplitudes().iter().enumerate() {
                u[i * d + j] = *a;
            }
        }
        self.conjugate(&u)
    }

    /// `Π₀ρΠ₀ − Π₁ρΠ₁` on qubit `q`.
    pub fn measure_z(&self, q: usize) -> Self {
        let d = self.dim();
        let bit = 1 << q;
        let mut out = self.clone();
        for i in 0..d {
            for j in 0..d {
                let v = &mut out.m[i * d + j];
                if (i & bit) != (j & bit) {
                    *v = zero();
                } else if i & bit != 0 {
                    *v = -*v;
                }
            }
        }
        out
    }

    fn apply_steps(&self, q: usize, steps: &[Step]) -> Self {
        steps.iter().fold(self.clone(), |rho, s| match s {
            Step::Gate(k, p) => rho.apply_gate(*k, p, &[q]),
            Step::MeasureZ => rho.measure_z(q),
        })
    }

    /// `Tr(Pρ)` for a single-qubit matrix.
    pub fn pauli_trace(&self, p: Pauli) -> Complex<T> {
        let (a, b, c, d) = (self.get(0, 0), self.get(0, 1), self.get(1, 0), self.get(1, 1));
        let i = Complex::new(T::zero(), T::one());
        match p {
            Pauli::I => a + d,
            Pauli::X => b + c,
            Pauli::Y => i * b - i * c,
            Pauli::Z => a - d,
        }
    }

    fn axpy(&mut self, a: T, x: &Self) {
        for (y, v) in self.m.iter_mut().zip(&x.m) {
            *y = *y + *v * a;
        }
    }

    pub fn max_abs_diff(&self, o: &Self) -> T {
        self.m
            .iter()
            .zip(&o.m)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }
}

fn prepared<T: Real>(p: super::qpd::Prep) -> DensityMatrix<T> {
    let mut s = StateVector::zero(1).expect("one qubit");
    for &g in p.gates() {
        s.apply(g, &[], &[0]);
    }
    DensityMatrix::pure(&s)
}

/// `Σ a_i Tr(M_i ρ) σ_i` for a single-qubit `ρ`.
pub fn apply_wire_decomposition<T: Real>(d: &QpdDecomposition<T>, rho: &DensityMatrix<T>) -> DensityMatrix<T> {
    let mut out = DensityMatrix::zeros(1);
    for t in &d.terms {
        let (QpdAction::Measure(p), QpdAction::Prepare(s)) = (&t.left, &t.right) else {
            panic!("wire terms measure then prepare");
        };
        let weight = t.coefficient * rho.pauli_trace(*p).re;
        out.axpy(weight, &prepared(*s));
    }
    out
}

/// `Σ a_i (A_i ⊗ B_i)(ρ)` for a two-qubit `ρ`; `A` acts on qubit 0.
pub fn apply_gate_decomposition<T: Real>(d: &QpdDecomposition<T>, rho: &DensityMatrix<T>) -> DensityMatrix<T> {
    let mut out = DensityMatrix::zeros(2);
    for t in &d.terms {
        let (QpdAction::Ops(a), QpdAction::Ops(b)) = (&t.left, &t.right) else {
            panic!("gate terms are local operations");
        };
        let r = rho.apply_steps(0, a).apply_steps(1, b);
        out.axpy(t.coefficient, &r);
    }
    out
}

/// Largest entrywise deviation between the decomposed and the exact channel
/// over `samples` random mixed inputs.
pub fn channel_identity_error<T: Real>(d: &QpdDecomposition<T>, samples: usize, seed: u64) -> T {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = T::zero();
    for _ in 0..samples {
        let err = match d.channel_kind {
            ChannelKind::Wire => {
                let rho = DensityMatrix::random(1, &mut rng);
                apply_wire_decomposition(d, &rho).max_abs_diff(&rho)
            }
            ChannelKind::Gate(k) => {
                let rho = DensityMatrix::random(2, &mut rng);
                let want = rho.apply_gate(k, &d.params, &[0, 1]);
                apply_gate_decomposition(d, &rho).max_abs_diff(&want)
            }
        };
        worst = worst.max(err);
    }
    worst
}
