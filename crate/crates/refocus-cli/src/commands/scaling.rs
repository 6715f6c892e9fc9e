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

//! Log-log scaling fit of the vote infidelity against the error half-width;
//! the slope measures the majority-vote suppression exponent 2n.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{ensure, Result};
use serde::Serialize;
use serde_json::json;

use refocus_core::fidelity::fit_scaling_exponent;
use refocus_core::{NoiseParams, ParityKind, ProtocolConfig, RepetitionMode, Roles};

use crate::commands::{kind_name, mode_name};
use crate::manifest::write_manifest;
use crate::output::{ensure_out_dir, write_json};

pub struct ScalingParams {
    pub kind: ParityKind,
    pub majority: usize,
    pub e_grid: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub out: PathBuf,
}

#[derive(Serialize)]
struct PointOut {
    e: f64,
    infidelity: f64,
    std_error: f64,
}

#[derive(Serialize)]
struct ScalingReport {
    kind: String,
    majority: usize,
    mode: String,
    trials: u64,
    seed: u64,
    expected_slope: f64,
    slope: f64,
    intercept: f64,
    residual: f64,
    points: Vec<PointOut>,
}

pub fn run(p: &ScalingParams) -> Result<()> {
    let started = Instant::now();
    ensure_out_dir(&p.out)?;
    let cfg = ProtocolConfig::new(
        p.majority,
        RepetitionMode::FixedTwoNMinusOne,
        Roles::new(0, 1, 2)?,
    )?;
    let grid: Vec<NoiseParams> = p
        .e_grid
        .iter()
        .enumerate()
        .map(|(i, &e)| NoiseParams::new(e, 0.0, p.seed.wrapping_add(i as u64)))
        .collect::<Result<_, _>>()?;
    let fit = fit_scaling_exponent(p.kind, &cfg, &grid, p.trials)?;
    ensure!(
        fit.slope.is_finite() && fit.residual.is_finite(),
        "scaling fit produced non-finite values"
    );

    let report = ScalingReport {
        kind: kind_name(p.kind).to_string(),
        majority: p.majority,
        mode: mode_name(RepetitionMode::FixedTwoNMinusOne).to_string(),
        trials: p.trials,
        seed: p.seed,
        expected_slope: 2.0 * p.majority as f64,
        slope: fit.slope,
        intercept: fit.intercept,
        residual: fit.residual,
        points: fit
            .points
            .iter()
            .map(|pt| PointOut {
                e: pt.e,
                infidelity: pt.infidelity,
                std_error: pt.std_error,
            })
            .collect(),
    };
    println!(
        "scaling: kind={} n={} trials={} seed={}",
        report.kind, p.majority, p.trials, p.seed
    );
    println!(
        "  slope {:.4} (expected {}), intercept {:.4}, residual {:.3e}",
        fit.slope, report.expected_slope, fit.intercept, fit.residual
    );

    let outputs = vec![write_json(&p.out, "scaling.json", &report)?];
    let manifest = write_manifest(
        &p.out,
        "scaling",
        json!({
            "kind": report.kind,
            "n": p.majority,
            "e_grid": p.e_grid,
            "trials": p.trials,
            "seed": p.seed,
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
