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

//! The measurement-based CNOT and the direct faulty CNOT it replaces.
//!
//! Register layout: qubit 0 is the control, qubit 1 the target, qubit 2 a
//! scheme ancilla prepared in `(|0> + |1>)/sqrt(2)`, and qubit 3 the parity
//! readout ancilla. The protocol runs a repeated ZZ parity measurement on
//! (control, scheme), flips the scheme ancilla if the vote lands in the odd
//! sector, then a repeated XX measurement on (target, scheme) with a
//! Z(control) Z(scheme) fix-up on the odd vote, reads the scheme ancilla in Z
//! and finishes with an outcome-conditioned data correction. The final
//! correction table is derived by zero-noise brute force over all eight
//! outcome combinations rather than transcribed.
//!
//! Two distinct two-body measurements are genuinely required: a single
//! two-qubit measurement together with single-qubit operations maps some
//! pair of orthogonal states onto one state and therefore cannot implement
//! a unitary CNOT, which is why the scheme spends one measurement of each
//! kind plus the ancilla readout.

use std::sync::OnceLock;

use rand::Rng;

use crate::error::{Error, Result};
use crate::noise::{NoiseParams, TrajectoryLog};
use crate::parity::{
    enumerate_parity_repeated, measure_parity_repeated, sector_for, MeasurementRecord, Parity,
    ParityKind, ProtocolConfig, RepetitionMode, Roles,
};
use crate::statevector::{haar_random_state, PauliAxis, Statevector};

use std::f64::consts::FRAC_PI_4;

pub const CONTROL: usize = 0;
pub const TARGET: usize = 1;
pub const SCHEME_ANCILLA: usize = 2;
pub const READOUT_ANCILLA: usize = 3;

const PRUNE_WEIGHT: f64 = 1e-30;

/// Majority count and stopping mode shared by both parity stages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CnotConfig {
    pub majority: usize,
    pub mode: RepetitionMode,
}

impl CnotConfig {
    pub fn new(majority: usize, mode: RepetitionMode) -> Result<Self> {
        if majority < 1 {
            return Err(Error::InvalidMajorityCount);
        }
        Ok(Self { majority, mode })
    }

    pub fn max_rounds(&self) -> usize {
        2 * self.majority - 1
    }

    pub fn zz_protocol(&self) -> ProtocolConfig {
        ProtocolConfig {
            majority: self.majority,
            mode: self.mode,
            roles: Roles {
                qubit_a: CONTROL,
                qubit_b: SCHEME_ANCILLA,
                ancilla: READOUT_ANCILLA,
            },
        }
    }

    pub fn xx_protocol(&self) -> ProtocolConfig {
        ProtocolConfig {
            majority: self.majority,
            mode: self.mode,
            roles: Roles {
                qubit_a: TARGET,
                qubit_b: SCHEME_ANCILLA,
                ancilla: READOUT_ANCILLA,
            },
        }
    }
}

/// Everything observed during one run of the measurement-based CNOT.
#[derive(Debug, Clone, PartialEq)]
pub struct CnotRecord {
    pub zz_record: MeasurementRecord,
    pub xx_record: MeasurementRecord,
    pub ancilla_outcome: u8,
    /// Fix-ups applied after a wrong-sector majority vote.
    pub stage_corrections: Vec<(usize, PauliAxis)>,
    /// Outcome-conditioned data correction after the ancilla readout.
    pub final_corrections: Vec<(usize, PauliAxis)>,
}

/// One leaf of the exhaustive outcome tree of the full CNOT.
#[derive(Debug, Clone)]
pub struct CnotLeaf {
    /// Unnormalized two-qubit output; squared norm is the path weight.
    pub state: Statevector,
    pub zz_sector: Parity,
    pub xx_sector: Parity,
    pub ancilla_outcome: u8,
}

/// Per-round amplitude errors for both stages of an enumerated CNOT.
#[derive(Debug, Clone)]
pub struct CnotErrorSchedule {
    pub zz: Vec<(f64, f64)>,
    pub xx: Vec<(f64, f64)>,
}

impl CnotErrorSchedule {
    pub fn zero(cfg: &CnotConfig) -> Self {
        Self {
            zz: vec![(0.0, 0.0); cfg.max_rounds()],
            xx: vec![(0.0, 0.0); cfg.max_rounds()],
        }
    }
}

/// Exact CNOT, used as the reference the protocol is compared against.
pub fn apply_ideal_cnot(sv: &mut Statevector, control: usize, target: usize) -> Result<()> {
    if control == target {
        return Err(Error::DuplicateQubit(control));
    }
    // Swap the target pair inside the control = 1 subspace: build from
    // branch_z to stay on the public surface of the statevector.
    let n = sv.num_qubits();
    for q in [control, target] {
        if q >= n {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                num_qubits: n,
            });
        }
    }
    let (keep, mut flip) = sv.branch_z(control)?;
    flip.apply_pauli(target, PauliAxis::X)?;
    let amps = keep
        .amplitudes()
        .iter()
        .zip(flip.amplitudes())
        .map(|(a, b)| a + b)
        .collect();
    *sv = Statevector::from_amplitudes(amps)?;
    Ok(())
}

/// The five-gate direct CNOT with an amplitude error in the entangling step.
///
/// At `epsilon = 0` this equals the ideal CNOT up to a global phase; at
/// finite error it equals `exp(-i epsilon Z(control) X(target))` times the
/// ideal CNOT, which is the error form the parity-propagation table encodes.
pub fn faulty_direct_cnot(
    sv: &mut Statevector,
    control: usize,
    target: usize,
    epsilon: f64,
) -> Result<()> {
    if control == target {
        return Err(Error::DuplicateQubit(control));
    }
    sv.apply_rotation(control, PauliAxis::Y, FRAC_PI_4)?;
    sv.apply_ms(control, target, epsilon)?;
    sv.apply_rotation(control, PauliAxis::Y, -FRAC_PI_4)?;
    sv.apply_rotation(target, PauliAxis::X, -FRAC_PI_4)?;
    sv.apply_rotation(control, PauliAxis::Z, -FRAC_PI_4)?;
    Ok(())
}

/// Extends a normalized two-qubit state with the scheme ancilla in
/// `(|0> + |1>)/sqrt(2)` and the readout ancilla in `|0>`.
pub fn prepare_register(input: &Statevector) -> Result<Statevector> {
    if input.num_qubits() != 2 {
        return Err(Error::DimensionMismatch(input.num_qubits(), 2));
    }
    if !input.is_normalized(1e-9) {
        return Err(Error::NotNormalized(input.norm_sqr()));
    }
    input
        .tensor(&Statevector::plus_one_qubit())?
        .tensor(&Statevector::basis_state(1, "0")?)
}

fn stage_correction(sector: Parity, stage: ParityKind) -> &'static [(usize, PauliAxis)] {
    match (stage, sector) {
        (_, Parity::Even) => &[],
        (ParityKind::Zz, Parity::Odd) => &[(SCHEME_ANCILLA, PauliAxis::X)],
        (ParityKind::Xx, Parity::Odd) => &[
            (CONTROL, PauliAxis::Z),
            (SCHEME_ANCILLA, PauliAxis::Z),
        ],
    }
}

/// Runs the full measurement-based CNOT on a two-qubit input, sampling all
/// measurement outcomes. Returns the collapsed two-qubit output and the run
/// record. With noise off the map equals the ideal CNOT up to global phase on
/// every outcome branch.
pub fn run_measurement_cnot(
    input: &Statevector,
    cfg: &CnotConfig,
    params: &NoiseParams,
    rng: &mut impl Rng,
    log: &mut TrajectoryLog,
) -> Result<(Statevector, CnotRecord)> {
    let mut reg = prepare_register(input)?;
    let mut stage_corrections = Vec::new();

    let zz_record =
        measure_parity_repeated(&mut reg, ParityKind::Zz, &cfg.zz_protocol(), params, rng, log)?;
    let zz_sector = sector_for(ParityKind::Zz, zz_record.majority);
    for &(q, ax) in stage_correction(zz_sector, ParityKind::Zz) {
        reg.apply_pauli(q, ax)?;
        stage_corrections.push((q, ax));
        log.corrections += 1;
    }

    let xx_record =
        measure_parity_repeated(&mut reg, ParityKind::Xx, &cfg.xx_protocol(), params, rng, log)?;
    let xx_sector = sector_for(ParityKind::Xx, xx_record.majority);
    for &(q, ax) in stage_correction(xx_sector, ParityKind::Xx) {
        reg.apply_pauli(q, ax)?;
        stage_corrections.push((q, ax));
        log.corrections += 1;
    }

    let readout = reg.sample_measure_z(SCHEME_ANCILLA, rng)?;
    let final_corrections =
        final_correction(zz_sector, xx_sector, readout.outcome).to_vec();
    for &(q, ax) in &final_corrections {
        reg.apply_pauli(q, ax)?;
        log.corrections += 1;
    }

    let mut out = reg.restricted_to(&[(SCHEME_ANCILLA, readout.outcome), (READOUT_ANCILLA, 0)])?;
    out.normalize()?;
    Ok((
        out,
        CnotRecord {
            zz_record,
            xx_record,
            ancilla_outcome: readout.outcome,
            stage_corrections,
            final_corrections,
        },
    ))
}

/// Walks every outcome path of the CNOT with explicit per-round amplitude
/// errors. Leaf weights sum to 1 for a normalized input.
pub fn enumerate_cnot_branches(
    input: &Statevector,
    cfg: &CnotConfig,
    schedule: &CnotErrorSchedule,
) -> Result<Vec<CnotLeaf>> {
    enumerate_with(input, cfg, schedule, true)
}

fn enumerate_with(
    input: &Statevector,
    cfg: &CnotConfig,
    schedule: &CnotErrorSchedule,
    apply_final: bool,
) -> Result<Vec<CnotLeaf>> {
    let reg = prepare_register(input)?;
    let mut leaves = Vec::new();
    let zz_leaves =
        enumerate_parity_repeated(&reg, ParityKind::Zz, &cfg.zz_protocol(), &schedule.zz)?;
    for zz_leaf in zz_leaves {
        let zz_sector = sector_for(ParityKind::Zz, zz_leaf.majority);
        let mut after_zz = zz_leaf.state;
        for &(q, ax) in stage_correction(zz_sector, ParityKind::Zz) {
            after_zz.apply_pauli(q, ax)?;
        }
        let xx_leaves =
            enumerate_parity_repeated(&after_zz, ParityKind::Xx, &cfg.xx_protocol(), &schedule.xx)?;
        for xx_leaf in xx_leaves {
            let xx_sector = sector_for(ParityKind::Xx, xx_leaf.majority);
            let mut after_xx = xx_leaf.state;
            for &(q, ax) in stage_correction(xx_sector, ParityKind::Xx) {
                after_xx.apply_pauli(q, ax)?;
            }
            let (b0, b1) = after_xx.branch_z(SCHEME_ANCILLA)?;
            for (outcome, mut branch) in [(0u8, b0), (1u8, b1)] {
                if branch.norm_sqr() <= PRUNE_WEIGHT {
                    continue;
                }
                if apply_final {
                    for &(q, ax) in final_correction(zz_sector, xx_sector, outcome) {
                        branch.apply_pauli(q, ax)?;
                    }
                }
                let state =
                    branch.restricted_to(&[(SCHEME_ANCILLA, outcome), (READOUT_ANCILLA, 0)])?;
                leaves.push(CnotLeaf {
                    state,
                    zz_sector,
                    xx_sector,
                    ancilla_outcome: outcome,
                });
            }
        }
    }
    Ok(leaves)
}

/// Worst-case numbers from a residual-subspace check. `leakage` is the
/// squared weight outside the predicted error plane, maximized over outcome
/// branches; `error_component` is the largest overlap magnitude with the
/// residual direction, which shows the faulty stage actually excites it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationStats {
    pub leakage: f64,
    pub error_component: f64,
}

/// Confines the amplitude error to one stage (the same `eps` pair in every
/// round of that stage, the other stage ideal) and checks that every outcome
/// branch of the CNOT lies in the plane spanned by the ideal output and the
/// stage's residual direction: a target flip for the ZZ stage, a control
/// phase for the XX stage.
pub fn propagation_check(
    stage: ParityKind,
    cfg: &CnotConfig,
    eps: (f64, f64),
    input: &Statevector,
) -> Result<PropagationStats> {
    let mut schedule = CnotErrorSchedule::zero(cfg);
    match stage {
        ParityKind::Zz => schedule.zz.iter_mut().for_each(|p| *p = eps),
        ParityKind::Xx => schedule.xx.iter_mut().for_each(|p| *p = eps),
    }
    let mut ideal = input.clone();
    apply_ideal_cnot(&mut ideal, CONTROL, TARGET)?;
    let mut deflected = ideal.clone();
    match stage {
        ParityKind::Zz => deflected.apply_pauli(TARGET, PauliAxis::X)?,
        ParityKind::Xx => deflected.apply_pauli(CONTROL, PauliAxis::Z)?,
    }
    // Orthonormal direction of the residual inside the plane.
    let along = ideal.overlap(&deflected)?;
    let residual_amps: Vec<_> = deflected
        .amplitudes()
        .iter()
        .zip(ideal.amplitudes())
        .map(|(d, r)| d - along * r)
        .collect();
    let residual_norm: f64 = residual_amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let residual = if residual_norm > 1e-9 {
        Some(Statevector::from_amplitudes(
            residual_amps.iter().map(|a| a / residual_norm).collect(),
        )?)
    } else {
        None
    };

    let mut stats = PropagationStats {
        leakage: 0.0,
        error_component: 0.0,
    };
    for leaf in enumerate_cnot_branches(input, cfg, &schedule)? {
        let weight = leaf.state.norm_sqr();
        let mut inside = ideal.overlap(&leaf.state)?.norm_sqr();
        if let Some(direction) = &residual {
            let component = direction.overlap(&leaf.state)?.norm();
            inside += component * component;
            stats.error_component = stats.error_component.max(component);
        }
        stats.leakage = stats.leakage.max((weight - inside).max(0.0));
    }
    Ok(stats)
}

// ---------------------------------------------------------------------------
// Derived final-correction table
// ---------------------------------------------------------------------------

static FINAL_TABLE: OnceLock<[Vec<(usize, PauliAxis)>; 8]> = OnceLock::new();

fn combo_index(zz_sector: Parity, xx_sector: Parity, ancilla_outcome: u8) -> usize {
    (usize::from(zz_sector == Parity::Odd) << 2)
        | (usize::from(xx_sector == Parity::Odd) << 1)
        | usize::from(ancilla_outcome == 1)
}

/// The derived final data correction for an outcome combination.
pub fn final_correction(
    zz_sector: Parity,
    xx_sector: Parity,
    ancilla_outcome: u8,
) -> &'static [(usize, PauliAxis)] {
    &FINAL_TABLE.get_or_init(derive_final_table)[combo_index(zz_sector, xx_sector, ancilla_outcome)]
}

fn final_candidates() -> Vec<Vec<(usize, PauliAxis)>> {
    let axes = [PauliAxis::X, PauliAxis::Z, PauliAxis::Y];
    let mut out = vec![Vec::new()];
    for ax in axes {
        out.push(vec![(TARGET, ax)]);
    }
    for ax in axes {
        out.push(vec![(CONTROL, ax)]);
    }
    for a1 in axes {
        for a2 in axes {
            out.push(vec![(CONTROL, a1), (TARGET, a2)]);
        }
    }
    out
}

/// Brute-force derivation of the post-readout correction: for each of the
/// eight outcome combinations, the first Pauli word on the data qubits that
/// maps the zero-noise branch onto the ideal CNOT output (up to phase) for a
/// panel of random inputs.
fn derive_final_table() -> [Vec<(usize, PauliAxis)>; 8] {
    let cfg = CnotConfig::new(1, RepetitionMode::FixedTwoNMinusOne).unwrap();
    let schedule = CnotErrorSchedule::zero(&cfg);
    let mut rng = crate::noise::trajectory_rng(0x0DD5_EED5, 1);
    let cases: Vec<(Statevector, Statevector, Vec<CnotLeaf>)> = (0..8)
        .map(|_| {
            let input = haar_random_state(2, &mut rng).unwrap();
            let mut ideal = input.clone();
            apply_ideal_cnot(&mut ideal, 0, 1).unwrap();
            let leaves = enumerate_with(&input, &cfg, &schedule, false).unwrap();
            (input, ideal, leaves)
        })
        .collect();

    let candidates = final_candidates();
    std::array::from_fn(|key| {
        let found = candidates.iter().find(|cand| {
            cases.iter().all(|(_, ideal, leaves)| {
                let leaf = leaves
                    .iter()
                    .find(|l| combo_index(l.zz_sector, l.xx_sector, l.ancilla_outcome) == key)
                    .expect("every outcome combination occurs for a generic input");
                let weight = leaf.state.norm_sqr();
                assert!(
                    weight > 1e-9,
                    "outcome combination {key} has degenerate weight {weight}"
                );
                let mut corrected = leaf.state.clone();
                for &(q, ax) in cand.iter() {
                    corrected.apply_pauli(q, ax).unwrap();
                }
                let overlap = ideal.overlap(&corrected).unwrap().norm();
                (overlap - weight.sqrt()).abs() < 1e-10
            })
        });
        found
            .expect("no Pauli word on the data qubits completes the CNOT branch")
            .clone()
    })
}
