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

//! Residual-subspace report: with the amplitude error confined to one
//! measurement stage, every outcome branch of the CNOT must stay in the
//! plane spanned by the ideal output and that stage's residual direction.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::Result;
use serde::Serialize;
use serde_json::json;

use refocus_core::cnot::{propagation_check, CnotConfig};
use refocus_core::noise::trajectory_rng;
use refocus_core::statevector::haar_random_state;
use refocus_core::{ParityKind, RepetitionMode};

use crate::commands::kind_name;
use crate::manifest::write_manifest;
use crate::output::{ensure_out_dir, fmt_value, write_json};

const LEAKAGE_TOLERANCE: f64 = 1e-10;

pub struct PropagationParams {
    pub epsilon1: f64,
    pub epsilon2: f64,
    pub majority: usize,
    pub states: usize,
    pub seed: u64,
    pub out: PathBuf,
}

#[derive(Serialize)]
struct StageReport {
    stage: String,
    residual_direction: String,
    max_leakage: f64,
    max_error_component: f64,
    pass: bool,
}

#[derive(Serialize)]
struct PropagationReport {
    epsilon1: f64,
    epsilon2: f64,
    majority: usize,
    states: usize,
    seed: u64,
    tolerance: f64,
    stages: Vec<StageReport>,
    pass: bool,
}

/// Returns whether the check passed; the caller maps failure to a nonzero
/// exit code.
pub fn run(p: &PropagationParams) -> Result<bool> {
    let started = Instant::now();
    ensure_out_dir(&p.out)?;
    let cfg = CnotConfig::new(p.majority, RepetitionMode::FixedTwoNMinusOne)?;
    let mut rng = trajectory_rng(p.seed, 0);
    let inputs: Vec<_> = (0..p.states.max(1))
        .map(|_| haar_random_state(2, &mut rng))
        .collect::<Result<_, _>>()?;

    let mut stages = Vec::new();
    for (stage, direction) in [
        (ParityKind::Zz, "X on target"),
        (ParityKind::Xx, "Z on control"),
    ] {
        let mut max_leakage = 0.0f64;
        let mut max_component = 0.0f64;
        for input in &inputs {
            let stats = propagation_check(stage, &cfg, (p.epsilon1, p.epsilon2), input)?;
            max_leakage = max_leakage.max(stats.leakage);
            max_component = max_component.max(stats.error_component);
        }
        let pass = max_leakage < LEAKAGE_TOLERANCE;
        println!(
            "propagation {} stage: residual along {direction}, max leakage {}, max component {} -> {}",
            kind_name(stage),
            fmt_value(max_leakage),
            fmt_value(max_component),
            if pass { "pass" } else { "FAIL" }
        );
        stages.push(StageReport {
            stage: kind_name(stage).to_string(),
            residual_direction: direction.to_string(),
            max_leakage,
            max_error_component: max_component,
            pass,
        });
    }
    let pass = stages.iter().all(|s| s.pass);
    let report = PropagationReport {
        epsilon1: p.epsilon1,
        epsilon2: p.epsilon2,
        majority: p.majority,
        states: p.states.max(1),
        seed: p.seed,
        tolerance: LEAKAGE_TOLERANCE,
        stages,
        pass,
    };

    let outputs = vec![write_json(&p.out, "propagation.json", &report)?];
    let manifest = write_manifest(
        &p.out,
        "propagation",
        json!({
            "epsilon1": p.epsilon1,
            "epsilon2": p.epsilon2,
            "n": p.majority,
            "states": p.states,
            "seed": p.seed,
        }),
        Some(p.seed),
        started,
        &outputs,
    )?;
    for path in outputs.iter().chain(std::iter::once(&manifest)) {
        println!("wrote {}", path.display());
    }
    Ok(pass)
}
