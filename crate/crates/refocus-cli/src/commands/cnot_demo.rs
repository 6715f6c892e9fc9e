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

//! Traces one sampled run of the measurement-based CNOT: per-stage outcomes,
//! corrections, the ancilla readout and the final state.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{ensure, Result};
use serde::Serialize;
use serde_json::json;

use refocus_core::cnot::{apply_ideal_cnot, run_measurement_cnot, CnotConfig, CONTROL, TARGET};
use refocus_core::noise::{trajectory_rng, TrajectoryLog};
use refocus_core::parity::sector_for;
use refocus_core::{MeasurementRecord, NoiseParams, Parity, ParityKind, RepetitionMode};

use crate::commands::mode_name;
use crate::manifest::write_manifest;
use crate::output::{ensure_out_dir, write_json};
use crate::state_arg::parse_state;

pub struct CnotDemoParams {
    pub state: String,
    pub e: f64,
    pub eps2: f64,
    pub majority: usize,
    pub mode: RepetitionMode,
    pub seed: u64,
    pub noise_off: bool,
    pub out: PathBuf,
}

#[derive(Serialize)]
struct StageTrace {
    kind: String,
    outcomes: Vec<u8>,
    majority: u8,
    sector: String,
    repetitions: usize,
    corrections: Vec<(usize, String)>,
}

#[derive(Serialize)]
struct DemoReport {
    /// Input amplitudes in the order (alpha, beta, gamma, delta) on
    /// |11>, |00>, |10>, |01>, after normalization.
    input_alpha_beta_gamma_delta: Vec<[f64; 2]>,
    /// The same state in computational order |00>, |01>, |10>, |11>.
    input_computational: Vec<[f64; 2]>,
    e: f64,
    eps2: f64,
    majority: usize,
    mode: String,
    seed: u64,
    zz: StageTrace,
    xx: StageTrace,
    ancilla_outcome: u8,
    stage_corrections: Vec<(usize, String)>,
    final_corrections: Vec<(usize, String)>,
    output_computational: Vec<[f64; 2]>,
    fidelity_to_ideal: f64,
    entangling_pulses: u64,
    single_rotations: u64,
    injected_faults: usize,
}

fn sector_name(p: Parity) -> &'static str {
    match p {
        Parity::Even => "even",
        Parity::Odd => "odd",
    }
}

fn corrections_out(list: &[(usize, refocus_core::PauliAxis)]) -> Vec<(usize, String)> {
    list.iter().map(|&(q, ax)| (q, ax.to_string())).collect()
}

fn stage_trace(kind: ParityKind, record: &MeasurementRecord) -> StageTrace {
    StageTrace {
        kind: crate::commands::kind_name(kind).to_string(),
        outcomes: record.outcomes.clone(),
        majority: record.majority,
        sector: sector_name(sector_for(kind, record.majority)).to_string(),
        repetitions: record.repetitions_used,
        corrections: corrections_out(&record.corrections),
    }
}

fn amps_out(amps: &[num_complex::Complex64]) -> Vec<[f64; 2]> {
    amps.iter().map(|a| [a.re, a.im]).collect()
}

pub fn run(p: &CnotDemoParams) -> Result<()> {
    let started = Instant::now();
    ensure_out_dir(&p.out)?;
    let (input, abcd) = parse_state(&p.state)?;
    let (e, eps2) = if p.noise_off { (0.0, 0.0) } else { (p.e, p.eps2) };
    let params = NoiseParams::new(e, eps2, p.seed)?;
    let cfg = CnotConfig::new(p.majority, p.mode)?;

    let mut rng = trajectory_rng(params.seed, 0);
    let mut log = TrajectoryLog::new();
    let (output, record) = run_measurement_cnot(&input, &cfg, &params, &mut rng, &mut log)?;
    let mut ideal = input.clone();
    apply_ideal_cnot(&mut ideal, CONTROL, TARGET)?;
    let fidelity = ideal.overlap(&output)?.norm().min(1.0);
    if params.is_noiseless() {
        ensure!(
            fidelity >= 1.0 - 1e-10,
            "noise-off run deviated from the ideal CNOT: fidelity {fidelity}"
        );
    }

    let report = DemoReport {
        input_alpha_beta_gamma_delta: abcd.iter().map(|a| [a.re, a.im]).collect(),
        input_computational: amps_out(input.amplitudes()),
        e,
        eps2,
        majority: p.majority,
        mode: mode_name(p.mode).to_string(),
        seed: p.seed,
        zz: stage_trace(ParityKind::Zz, &record.zz_record),
        xx: stage_trace(ParityKind::Xx, &record.xx_record),
        ancilla_outcome: record.ancilla_outcome,
        stage_corrections: corrections_out(&record.stage_corrections),
        final_corrections: corrections_out(&record.final_corrections),
        output_computational: amps_out(output.amplitudes()),
        fidelity_to_ideal: fidelity,
        entangling_pulses: log.ms_gates,
        single_rotations: log.single_rotations,
        injected_faults: log.injected_paulis.len(),
    };

    println!(
        "cnot-demo: e={} eps2={} n={} mode={} seed={}",
        e,
        eps2,
        p.majority,
        report.mode,
        p.seed
    );
    println!(
        "  ZZ outcomes {:?} -> {} sector; XX outcomes {:?} -> {} sector; ancilla {}",
        report.zz.outcomes,
        report.zz.sector,
        report.xx.outcomes,
        report.xx.sector,
        report.ancilla_outcome
    );
    println!("  fidelity to ideal CNOT output: {fidelity:.12}");

    let outputs = vec![write_json(&p.out, "cnot_demo.json", &report)?];
    let manifest = write_manifest(
        &p.out,
        "cnot-demo",
        json!({
            "state": p.state,
            "e": e,
            "eps2": eps2,
            "n": p.majority,
            "mode": report.mode,
            "seed": p.seed,
            "noise_off": p.noise_off,
        }),
        Some(p.seed),
        started,
        &outputs,
    )?;
    for path in outputs.iter().chain(std::iter::once(&manifest)) {
        println!("wrote {}", path.display());
    }
    Ok(())
}
