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

//! Simulation and analysis of measurement-based refocusing for noisy
//! two-qubit entangling gates.
//!
//! A two-body entangling pulse whose rotation angle fluctuates produces a
//! faulty CNOT that cannot be fixed by echo techniques. It can, however,
//! drive an ancilla-assisted parity measurement, and a measurement becomes
//! arbitrarily sharp when repeated under a majority vote: `2n - 1` rounds
//! push the syndrome infidelity from order `e^2` down to order `e^(2n)`. Two
//! such parity measurements plus one ancilla then reassemble a high-fidelity
//! CNOT out of a low-fidelity entangling gate.
//!
//! The crate provides:
//!
//! * [`statevector`] - a dense simulator for registers of up to four qubits;
//! * [`noise`] - amplitude errors on entangling pulses and per-gate Pauli
//!   faults, with counter-seeded trajectory streams;
//! * [`parity`] - single and repeated parity measurements with majority vote,
//!   early stopping, and corrections derived from the zero-noise circuit;
//! * [`cnot`] - the measurement-based CNOT and the direct five-gate faulty
//!   CNOT it replaces;
//! * [`fidelity`] - Monte Carlo, branch-enumerated and quadrature estimators
//!   of the average fidelities;
//! * [`analytics`] - the closed-form infidelity expressions and the threshold
//!   solver;
//! * [`runner`] - a deterministic trajectory harness that yields identical
//!   results for any worker count (parallel with the default `parallel`
//!   feature, sequential otherwise).

pub mod analytics;
pub mod cnot;
pub mod error;
pub mod fidelity;
pub mod noise;
pub mod parity;
pub mod quadrature;
pub mod runner;
pub mod statevector;

pub use error::{Error, Result};
pub use noise::{NoiseParams, TrajectoryLog};
pub use parity::{MeasurementRecord, Parity, ParityKind, ProtocolConfig, RepetitionMode, Roles};
pub use statevector::{PauliAxis, Statevector};
