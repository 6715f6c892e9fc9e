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

//! Ancilla-assisted two-body parity measurements and their majority-vote
//! repetition.
//!
//! A single XX-parity round entangles both measured qubits to a fresh `|0>`
//! ancilla with one entangling pulse each, then reads the ancilla in Z. The
//! ZZ round is the same circuit wrapped in Y-basis quarter rotations on the
//! measured pair. With the conventions used here the ancilla reads 1 when the
//! pair is in the even (+1) parity sector; this labeling is not hard-coded
//! but derived once from the zero-noise circuit, as is the single-body
//! correction that follows each outcome. The derived corrections make the
//! zero-noise round act as the exact projective parity measurement on
//! arbitrary (entangled) registers. Deriving them (instead of writing the
//! table down by hand) removes any transcription risk: two corrections per
//! outcome are equally valid and differ only in a sector-relative sign, an
//! easy thing to get wrong on paper.
//!
//! Repetition: the round is repeated either a fixed `2n-1` times or until one
//! outcome has occurred `n` times (early stop), and the parity is decided by
//! majority vote.

use std::sync::OnceLock;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::noise::{noisy_ms, noisy_single, NoiseParams, TrajectoryLog};
use crate::statevector::{haar_random_state, PauliAxis, Statevector};

use std::f64::consts::FRAC_PI_4;

/// Which two-body parity is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParityKind {
    Zz,
    Xx,
}

impl ParityKind {
    pub const ALL: [ParityKind; 2] = [ParityKind::Zz, ParityKind::Xx];

    /// The Pauli axis whose two-body product is measured.
    pub fn pauli(self) -> PauliAxis {
        match self {
            ParityKind::Zz => PauliAxis::Z,
            ParityKind::Xx => PauliAxis::X,
        }
    }

    fn table_index(self) -> usize {
        match self {
            ParityKind::Zz => 0,
            ParityKind::Xx => 1,
        }
    }
}

impl std::fmt::Display for ParityKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParityKind::Zz => write!(f, "ZZ"),
            ParityKind::Xx => write!(f, "XX"),
        }
    }
}

/// Eigenvalue sector of the measured two-body operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// +1 eigenvalue.
    Even,
    /// -1 eigenvalue.
    Odd,
}

impl Parity {
    pub fn flipped(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// How the repeated measurement terminates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepetitionMode {
    /// Always run `2n - 1` rounds.
    FixedTwoNMinusOne,
    /// Stop as soon as one outcome has occurred `n` times.
    EarlyStop,
}

/// Register positions of the measured pair and the readout ancilla.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Roles {
    pub qubit_a: usize,
    pub qubit_b: usize,
    pub ancilla: usize,
}

impl Roles {
    pub fn new(qubit_a: usize, qubit_b: usize, ancilla: usize) -> Result<Self> {
        if qubit_a == qubit_b || qubit_a == ancilla || qubit_b == ancilla {
            return Err(Error::InvalidRoles);
        }
        Ok(Self {
            qubit_a,
            qubit_b,
            ancilla,
        })
    }
}

/// Majority count, stopping mode and qubit roles of a repeated measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProtocolConfig {
    /// Majority count n; the vote needs n identical outcomes.
    pub majority: usize,
    pub mode: RepetitionMode,
    pub roles: Roles,
}

impl ProtocolConfig {
    pub fn new(majority: usize, mode: RepetitionMode, roles: Roles) -> Result<Self> {
        if majority < 1 {
            return Err(Error::InvalidMajorityCount);
        }
        Ok(Self {
            majority,
            mode,
            roles,
        })
    }

    /// Upper bound on rounds: `2n - 1`.
    pub fn max_rounds(&self) -> usize {
        2 * self.majority - 1
    }

    pub fn validate_for(&self, num_qubits: usize) -> Result<()> {
        for q in [self.roles.qubit_a, self.roles.qubit_b, self.roles.ancilla] {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, num_qubits });
            }
        }
        Ok(())
    }
}

/// Outcomes and bookkeeping of one repeated parity measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    /// Ancilla readouts, one per round.
    pub outcomes: Vec<u8>,
    /// Winning outcome of the vote.
    pub majority: u8,
    pub repetitions_used: usize,
    /// Correction Paulis applied after each round, as `(qubit, axis)`.
    pub corrections: Vec<(usize, PauliAxis)>,
}

impl MeasurementRecord {
    /// Checks the structural invariants for the mode that produced it.
    pub fn is_consistent_with(&self, cfg: &ProtocolConfig) -> bool {
        if self.repetitions_used != self.outcomes.len() {
            return false;
        }
        let majority_count = self
            .outcomes
            .iter()
            .filter(|&&o| o == self.majority)
            .count();
        match cfg.mode {
            RepetitionMode::FixedTwoNMinusOne => {
                self.outcomes.len() == cfg.max_rounds() && 2 * majority_count > self.outcomes.len()
            }
            RepetitionMode::EarlyStop => {
                majority_count == cfg.majority && self.outcomes.len() <= cfg.max_rounds()
            }
        }
    }
}

/// One outcome branch of a single round: corrected, ancilla re-prepared,
/// amplitudes left unnormalized so the squared norm is the branch weight.
#[derive(Debug, Clone)]
pub struct RoundBranch {
    pub state: Statevector,
    pub outcome: u8,
}

/// One leaf of the exhaustive outcome tree of a repeated measurement.
#[derive(Debug, Clone)]
pub struct ParityLeaf {
    /// Unnormalized final state; its squared norm is the path weight.
    pub state: Statevector,
    pub outcomes: Vec<u8>,
    pub majority: u8,
}

/// Branches with squared norm below this are dropped from outcome trees.
const PRUNE_WEIGHT: f64 = 1e-30;

// ---------------------------------------------------------------------------
// Circuit
// ---------------------------------------------------------------------------

/// The deterministic round circuit with explicit amplitude errors and no
/// Pauli channel: entangling pulses `(a, anc)`, `(b, anc)` with errors
/// `eps.0`, `eps.1`, wrapped in the Y-basis frame for the ZZ kind.
pub fn apply_round_circuit(
    sv: &mut Statevector,
    kind: ParityKind,
    roles: Roles,
    eps: (f64, f64),
) -> Result<()> {
    let Roles {
        qubit_a: a,
        qubit_b: b,
        ancilla: r,
    } = roles;
    if kind == ParityKind::Zz {
        sv.apply_rotation(a, PauliAxis::Y, FRAC_PI_4)?;
        sv.apply_rotation(b, PauliAxis::Y, FRAC_PI_4)?;
    }
    sv.apply_ms(a, r, eps.0)?;
    sv.apply_ms(b, r, eps.1)?;
    if kind == ParityKind::Zz {
        sv.apply_rotation(a, PauliAxis::Y, -FRAC_PI_4)?;
        sv.apply_rotation(b, PauliAxis::Y, -FRAC_PI_4)?;
    }
    Ok(())
}

fn apply_noisy_round(
    sv: &mut Statevector,
    kind: ParityKind,
    roles: Roles,
    params: &NoiseParams,
    rng: &mut impl Rng,
    log: &mut TrajectoryLog,
) -> Result<()> {
    let Roles {
        qubit_a: a,
        qubit_b: b,
        ancilla: r,
    } = roles;
    if kind == ParityKind::Zz {
        noisy_single(sv, a, PauliAxis::Y, FRAC_PI_4, params, rng, log)?;
        noisy_single(sv, b, PauliAxis::Y, FRAC_PI_4, params, rng, log)?;
    }
    noisy_ms(sv, a, r, params, rng, log)?;
    noisy_ms(sv, b, r, params, rng, log)?;
    if kind == ParityKind::Zz {
        noisy_single(sv, a, PauliAxis::Y, -FRAC_PI_4, params, rng, log)?;
        noisy_single(sv, b, PauliAxis::Y, -FRAC_PI_4, params, rng, log)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Derived outcome labels and corrections
// ---------------------------------------------------------------------------

/// Which measured-pair slot a correction acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoleSlot {
    A,
    B,
}

impl RoleSlot {
    fn qubit(self, roles: Roles) -> usize {
        match self {
            RoleSlot::A => roles.qubit_a,
            RoleSlot::B => roles.qubit_b,
        }
    }
}

struct KindTable {
    outcome_for_even: u8,
    corrections: [Option<(RoleSlot, PauliAxis)>; 2],
}

static TABLES: OnceLock<[KindTable; 2]> = OnceLock::new();

fn tables() -> &'static [KindTable; 2] {
    TABLES.get_or_init(|| [derive_table(ParityKind::Zz), derive_table(ParityKind::Xx)])
}

/// The parity sector a given ancilla readout indicates.
pub fn sector_for(kind: ParityKind, outcome: u8) -> Parity {
    let table = &tables()[kind.table_index()];
    if outcome == table.outcome_for_even {
        Parity::Even
    } else {
        Parity::Odd
    }
}

/// The correction applied after reading `outcome`, mapped onto actual qubits.
pub fn correction_for(kind: ParityKind, outcome: u8, roles: Roles) -> Option<(usize, PauliAxis)> {
    let table = &tables()[kind.table_index()];
    table.corrections[usize::from(outcome == 1)].map(|(slot, axis)| (slot.qubit(roles), axis))
}

/// Projects onto a parity sector of the pair `(a, b)`: `(1 +- P_a P_b)/2`.
/// The result is unnormalized.
pub fn project_parity(
    sv: &Statevector,
    kind: ParityKind,
    pair: (usize, usize),
    parity: Parity,
) -> Result<Statevector> {
    let mut flipped = sv.clone();
    flipped.apply_pauli(pair.0, kind.pauli())?;
    flipped.apply_pauli(pair.1, kind.pauli())?;
    let sign = match parity {
        Parity::Even => 1.0,
        Parity::Odd => -1.0,
    };
    let amps = sv
        .amplitudes()
        .iter()
        .zip(flipped.amplitudes())
        .map(|(u, v)| 0.5 * (u + sign * v))
        .collect();
    Statevector::from_amplitudes(amps)
}

/// Raw outcome branches of one round: projected, ancilla re-prepared, but
/// without the outcome-conditioned correction.
fn raw_round_branches(
    sv: &Statevector,
    kind: ParityKind,
    roles: Roles,
    eps: (f64, f64),
) -> Result<[RoundBranch; 2]> {
    let mut evolved = sv.clone();
    apply_round_circuit(&mut evolved, kind, roles, eps)?;
    let (b0, mut b1) = evolved.branch_z(roles.ancilla)?;
    // Perfect re-preparation of the collapsed ancilla.
    b1.apply_pauli(roles.ancilla, PauliAxis::X)?;
    Ok([
        RoundBranch {
            state: b0,
            outcome: 0,
        },
        RoundBranch {
            state: b1,
            outcome: 1,
        },
    ])
}

/// Both corrected outcome branches of a single round with explicit amplitude
/// errors. Branch weights sum to the input's squared norm.
pub fn parity_round_branches(
    sv: &Statevector,
    kind: ParityKind,
    roles: Roles,
    eps: (f64, f64),
) -> Result<[RoundBranch; 2]> {
    let mut branches = raw_round_branches(sv, kind, roles, eps)?;
    for branch in &mut branches {
        if let Some((qubit, axis)) = correction_for(kind, branch.outcome, roles) {
            branch.state.apply_pauli(qubit, axis)?;
        }
    }
    Ok(branches)
}

/// Derives outcome labels and corrections from the zero-noise circuit, never
/// from transcription. The correction for each outcome is the first
/// single-body Pauli (or identity) that turns the raw branch into the exact
/// parity projection of the input, verified on random entangled registers.
fn derive_table(kind: ParityKind) -> KindTable {
    let roles = Roles {
        qubit_a: 0,
        qubit_b: 1,
        ancilla: 2,
    };

    // Outcome labeling: feed in an even eigenstate and read the ancilla.
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let even_pair = match kind {
        ParityKind::Zz => Statevector::basis_state(2, "00").unwrap(),
        ParityKind::Xx => Statevector::from_amplitudes(vec![
            Complex64::new(half, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(half, 0.0),
        ])
        .unwrap(),
    };
    let mut probe = even_pair
        .tensor(&Statevector::basis_state(1, "0").unwrap())
        .unwrap();
    apply_round_circuit(&mut probe, kind, roles, (0.0, 0.0)).unwrap();
    let p1 = probe.probability_one(roles.ancilla).unwrap();
    assert!(
        !(1e-9..=1.0 - 1e-9).contains(&p1),
        "zero-noise parity circuit must resolve the even sector deterministically, got p1 = {p1}"
    );
    let outcome_for_even = u8::from(p1 > 0.5);

    // Random registers with an extra spectator qubit so corrections are
    // validated in the presence of outside entanglement.
    let mut rng = crate::noise::trajectory_rng(0x0DD5_EED5, 0);
    let states: Vec<Statevector> = (0..12)
        .map(|_| {
            let mut s = haar_random_state(4, &mut rng).unwrap();
            s.collapse_z(roles.ancilla, 0).unwrap();
            s
        })
        .collect();

    const CANDIDATES: [Option<(RoleSlot, PauliAxis)>; 7] = [
        None,
        Some((RoleSlot::A, PauliAxis::Z)),
        Some((RoleSlot::B, PauliAxis::Z)),
        Some((RoleSlot::A, PauliAxis::X)),
        Some((RoleSlot::B, PauliAxis::X)),
        Some((RoleSlot::A, PauliAxis::Y)),
        Some((RoleSlot::B, PauliAxis::Y)),
    ];

    let mut corrections = [None; 2];
    for outcome in 0..2u8 {
        let sector = if outcome == outcome_for_even {
            Parity::Even
        } else {
            Parity::Odd
        };
        let found = CANDIDATES.iter().find(|cand| {
            states.iter().all(|s| {
                let branches = raw_round_branches(s, kind, roles, (0.0, 0.0)).unwrap();
                let mut branch = branches[outcome as usize].state.clone();
                if let Some((slot, axis)) = cand {
                    branch.apply_pauli(slot.qubit(roles), *axis).unwrap();
                }
                let expected =
                    project_parity(s, kind, (roles.qubit_a, roles.qubit_b), sector).unwrap();
                let ne = expected.norm_sqr();
                let nb = branch.norm_sqr();
                (ne - nb).abs() < 1e-10
                    && (expected.overlap(&branch).unwrap().norm() - ne).abs() < 1e-10
            })
        });
        corrections[outcome as usize] =
            *found.expect("no single-body correction restores the parity projection");
    }

    KindTable {
        outcome_for_even,
        corrections,
    }
}

// ---------------------------------------------------------------------------
// Sampled protocol
// ---------------------------------------------------------------------------

/// One noisy parity round: prepares the ancilla, runs the round circuit with
/// fresh error draws, samples the readout, re-prepares the ancilla and
/// applies the outcome-conditioned correction. Returns the outcome and the
/// correction that was applied.
pub fn measure_parity_once(
    sv: &mut Statevector,
    kind: ParityKind,
    roles: Roles,
    params: &NoiseParams,
    rng: &mut impl Rng,
    log: &mut TrajectoryLog,
) -> Result<(u8, Option<(usize, PauliAxis)>)> {
    let r = roles.ancilla;
    // The ancilla must enter in |0>. After a previous round it is exactly
    // there; anything else is prepared by a projective reset.
    let p1 = sv.probability_one(r)?;
    if p1 > 0.0 {
        if !(1e-9..=1.0 - 1e-9).contains(&p1) {
            let bit = u8::from(p1 > 0.5);
            sv.collapse_z(r, bit)?;
            if bit == 1 {
                sv.apply_pauli(r, PauliAxis::X)?;
            }
        } else {
            let m = sv.sample_measure_z(r, rng)?;
            if m.outcome == 1 {
                sv.apply_pauli(r, PauliAxis::X)?;
            }
        }
    }

    apply_noisy_round(sv, kind, roles, params, rng, log)?;
    let m = sv.sample_measure_z(r, rng)?;
    if m.outcome == 1 {
        sv.apply_pauli(r, PauliAxis::X)?;
    }
    let correction = correction_for(kind, m.outcome, roles);
    if let Some((qubit, axis)) = correction {
        sv.apply_pauli(qubit, axis)?;
        log.corrections += 1;
    }
    Ok((m.outcome, correction))
}

/// Repeated parity measurement with majority vote, per the configured mode.
/// The state is left in the post-selected branch after all rounds and
/// corrections.
pub fn measure_parity_repeated(
    sv: &mut Statevector,
    kind: ParityKind,
    cfg: &ProtocolConfig,
    params: &NoiseParams,
    rng: &mut impl Rng,
    log: &mut TrajectoryLog,
) -> Result<MeasurementRecord> {
    cfg.validate_for(sv.num_qubits())?;
    let max_rounds = cfg.max_rounds();
    let mut outcomes = Vec::with_capacity(max_rounds);
    let mut corrections = Vec::new();
    let mut counts = [0usize; 2];
    let majority;
    loop {
        let (outcome, correction) =
            measure_parity_once(sv, kind, cfg.roles, params, rng, log)?;
        outcomes.push(outcome);
        counts[usize::from(outcome)] += 1;
        if let Some(c) = correction {
            corrections.push(c);
        }
        match cfg.mode {
            RepetitionMode::EarlyStop => {
                if counts[usize::from(outcome)] == cfg.majority {
                    majority = outcome;
                    break;
                }
            }
            RepetitionMode::FixedTwoNMinusOne => {
                if outcomes.len() == max_rounds {
                    majority = u8::from(counts[1] > counts[0]);
                    break;
                }
            }
        }
    }
    let repetitions_used = outcomes.len();
    Ok(MeasurementRecord {
        outcomes,
        majority,
        repetitions_used,
        corrections,
    })
}

// ---------------------------------------------------------------------------
// Exhaustive outcome enumeration
// ---------------------------------------------------------------------------

/// Walks every outcome path of the repeated measurement with the given
/// per-round error pairs, which must cover at least `max_rounds` rounds.
/// Leaf weights (squared norms) sum to the input's squared norm.
pub fn enumerate_parity_repeated(
    sv: &Statevector,
    kind: ParityKind,
    cfg: &ProtocolConfig,
    eps_rounds: &[(f64, f64)],
) -> Result<Vec<ParityLeaf>> {
    cfg.validate_for(sv.num_qubits())?;
    if eps_rounds.len() < cfg.max_rounds() {
        return Err(Error::InvalidNoiseParams(format!(
            "need {} per-round error pairs, got {}",
            cfg.max_rounds(),
            eps_rounds.len()
        )));
    }
    let mut leaves = Vec::new();
    let mut outcomes = Vec::with_capacity(cfg.max_rounds());
    walk(sv, kind, cfg, eps_rounds, &mut outcomes, &mut leaves)?;
    Ok(leaves)
}

fn walk(
    state: &Statevector,
    kind: ParityKind,
    cfg: &ProtocolConfig,
    eps_rounds: &[(f64, f64)],
    outcomes: &mut Vec<u8>,
    leaves: &mut Vec<ParityLeaf>,
) -> Result<()> {
    let counts = {
        let ones = outcomes.iter().filter(|&&o| o == 1).count();
        [outcomes.len() - ones, ones]
    };
    let done = match cfg.mode {
        RepetitionMode::EarlyStop => counts[0] == cfg.majority || counts[1] == cfg.majority,
        RepetitionMode::FixedTwoNMinusOne => outcomes.len() == cfg.max_rounds(),
    };
    if done {
        let majority = match cfg.mode {
            RepetitionMode::EarlyStop => u8::from(counts[1] == cfg.majority),
            RepetitionMode::FixedTwoNMinusOne => u8::from(counts[1] > counts[0]),
        };
        leaves.push(ParityLeaf {
            state: state.clone(),
            outcomes: outcomes.clone(),
            majority,
        });
        return Ok(());
    }
    let branches = parity_round_branches(state, kind, cfg.roles, eps_rounds[outcomes.len()])?;
    for branch in branches {
        if branch.state.norm_sqr() > PRUNE_WEIGHT {
            outcomes.push(branch.outcome);
            walk(&branch.state, kind, cfg, eps_rounds, outcomes, leaves)?;
            outcomes.pop();
        }
    }
    Ok(())
}
