// Copyright 2026 The refocus developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

use thiserror::Error;

/// Errors surfaced by statevector operations, protocol configuration and the
/// estimators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("number of qubits must be in [1, 4], got {0}")]
    QubitCountOutOfRange(usize),
    #[error("qubit index {qubit} out of range for {num_qubits} qubits")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("two-qubit gate requires distinct qubits, got {0} twice")]
    DuplicateQubit(usize),
    #[error("bitstring length {got} does not match {expected} qubits")]
    BitstringLength { expected: usize, got: usize },
    #[error("invalid bitstring character {0:?}, expected '0' or '1'")]
    BitstringChar(char),
    #[error("amplitude count {0} is not a power of two for 1..=4 qubits")]
    InvalidAmplitudeCount(usize),
    #[error("statevectors have different qubit counts: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("state is not normalized: squared norm {0}")]
    NotNormalized(f64),
    #[error("measurement sampled a branch with vanishing norm ({0:e})")]
    ZeroNormBranch(f64),
    #[error("invalid noise parameters: {0}")]
    InvalidNoiseParams(String),
    #[error("protocol roles must be distinct qubits inside the register")]
    InvalidRoles,
    #[error("majority count must be at least 1")]
    InvalidMajorityCount,
    #[error("trial count must be at least 1")]
    NoTrials,
    #[error("quadrature grid would span {dims} error dimensions (max {max})")]
    QuadratureDimensions { dims: usize, max: usize },
    #[error("quadrature estimation requires eps2 = 0, got {0}")]
    QuadratureWithPauliNoise(f64),
    #[error("scaling fit needs at least 3 grid points with distinct e > 0 and eps2 = 0")]
    DegenerateGrid,
    #[error("threshold target must be positive, got {0}")]
    NonPositiveThreshold(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
