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

//! Stochastic error injection.
//!
//! Two channels are modeled. Every entangling pulse carries an amplitude
//! error drawn uniformly from `[-e, +e]`, redrawn independently per pulse.
//! Additionally, each gate is followed by a uniformly chosen Pauli fault with
//! probability `eps2`, independently on each qubit the gate touched. Errors
//! come after the ideal gate. Correction pulses applied by the protocols are
//! treated as classically tracked Paulis and are not a noise source; they are
//! counted in the log so gate budgets can still be audited.
//!
//! Reproducibility: every trajectory owns a counter-seeded RNG stream
//! ([`trajectory_rng`]), so results are independent of execution order and of
//! how trajectories are distributed over workers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::statevector::{PauliAxis, Statevector};

/// Noise strengths plus the seed policy for reproducible sampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    /// Half-width of the uniform amplitude-error distribution (radians).
    pub e: f64,
    /// Probability of a single-body Pauli fault per touched qubit per gate.
    pub eps2: f64,
    /// Base seed; trajectories derive independent streams from it.
    pub seed: u64,
}

impl NoiseParams {
    pub fn new(e: f64, eps2: f64, seed: u64) -> Result<Self> {
        if e.is_nan() || e < 0.0 {
            return Err(Error::InvalidNoiseParams(format!("e must be >= 0, got {e}")));
        }
        if !(0.0..=1.0).contains(&eps2) {
            return Err(Error::InvalidNoiseParams(format!(
                "eps2 must be in [0, 1], got {eps2}"
            )));
        }
        Ok(Self { e, eps2, seed })
    }

    pub fn noiseless(seed: u64) -> Self {
        Self {
            e: 0.0,
            eps2: 0.0,
            seed,
        }
    }

    pub fn is_noiseless(&self) -> bool {
        self.e == 0.0 && self.eps2 == 0.0
    }
}

/// Per-trajectory record of drawn errors and gate counts.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrajectoryLog {
    /// One entry per entangling pulse, in application order.
    pub drawn_epsilons: Vec<f64>,
    /// Pauli faults that actually fired, as `(qubit, axis)`.
    pub injected_paulis: Vec<(usize, PauliAxis)>,
    pub ms_gates: u64,
    pub single_rotations: u64,
    /// Outcome-conditioned correction Paulis applied by the protocols.
    pub corrections: u64,
}

impl TrajectoryLog {
    pub fn new() -> Self {
        Self::default()
    }
}

/// Independent RNG stream for one trajectory. Same `(seed, trajectory)`
/// always yields the same stream, regardless of which worker runs it.
pub fn trajectory_rng(seed: u64, trajectory: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trajectory);
    rng
}

/// Fresh amplitude-error draw, uniform on `[-e, +e]`.
pub fn draw_amplitude_error(rng: &mut impl Rng, params: &NoiseParams) -> f64 {
    if params.e == 0.0 {
        return 0.0;
    }
    rng.gen_range(-params.e..=params.e)
}

/// Entangling pulse with a fresh amplitude error, followed by the per-qubit
/// Pauli channel. Returns the drawn error.
pub fn noisy_ms(
    sv: &mut Statevector,
    q1: usize,
    q2: usize,
    params: &NoiseParams,
    rng: &mut impl Rng,
    log: &mut TrajectoryLog,
) -> Result<f64> {
    let eps = draw_amplitude_error(rng, params);
    sv.apply_ms(q1, q2, eps)?;
    log.ms_gates += 1;
    log.drawn_epsilons.push(eps);
    for q in [q1, q2] {
        maybe_inject_pauli(sv, q, params, rng, log)?;
    }
    Ok(eps)
}

/// Ideal single-qubit rotation followed by the Pauli channel on that qubit.
pub fn noisy_single(
    sv: &mut Statevector,
    qubit: usize,
    axis: PauliAxis,
    angle: f64,
    params: &NoiseParams,
    rng: &mut impl Rng,
    log: &mut TrajectoryLog,
) -> Result<()> {
    sv.apply_rotation(qubit, axis, angle)?;
    log.single_rotations += 1;
    maybe_inject_pauli(sv, qubit, params, rng, log)
}

fn maybe_inject_pauli(
    sv: &mut Statevector,
    qubit: usize,
    params: &NoiseParams,
    rng: &mut impl Rng,
    log: &mut TrajectoryLog,
) -> Result<()> {
    if params.eps2 == 0.0 {
        return Ok(());
    }
    if rng.gen::<f64>() < params.eps2 {
        let axis = PauliAxis::ALL[rng.gen_range(0..3usize)];
        sv.apply_pauli(qubit, axis)?;
        log.injected_paulis.push((qubit, axis));
    }
    Ok(())
}
