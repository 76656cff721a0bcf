//! Statevector oracle, cut decompositions and expectation reconstruction.

mod density;
mod qpd;
mod reconstruct;
mod sim;

use thiserror::Error;

use crate::circuit::GateKind;

pub use density::{apply_gate_decomposition, apply_wire_decomposition, channel_identity_error, DensityMatrix};
pub use qpd::{
    gate_cut_decomposition, wire_cut_decomposition, ChannelKind, Prep, QpdAction, QpdDecomposition, QpdTerm, Step,
};
pub use reconstruct::{reconstruct_expectation, Reconstruction, ReconstructionMode, MAX_EXACT_CUTS};
pub use sim::{expectation, gate_matrix, simulate, Mat2, StateVector, MAX_QUBITS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KnitError {
    #[error("{n} qubits exceed the simulator limit of {max}")]
    TooManyQubits { n: usize, max: usize },
    #[error("observable has {got} terms, expected {expected}")]
    ObservableLength { expected: usize, got: usize },
    #[error("no gate-cut decomposition for `{0}`")]
    UnsupportedGateCut(GateKind),
    #[error("{n} cuts exceed the exact-mode limit of {max}")]
    TooManyCuts { n: usize, max: usize },
    #[error("fragment {id} has width {width}, above the simulator limit of {max}")]
    FragmentTooWide { id: usize, width: usize, max: usize },
    #[error("partition does not belong to this circuit")]
    PartitionMismatch,
    #[error("sampled mode needs at least one shot")]
    NoShots,
}
