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

//! Measurement-infidelity table for fixed 3- and 5-round votes: sampled
//! Monte Carlo against the leading-order formula.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{ensure, Context, Result};
use serde::Serialize;
use serde_json::json;

use refocus_core::analytics::measurement_infidelity_leading;
use refocus_core::fidelity::{
    balanced_parity_state, constrained_random_state, estimate_measurement_fidelity,
    EstimatorMethod,
};
use refocus_core::noise::trajectory_rng;
use refocus_core::{NoiseParams, ParityKind, ProtocolConfig, RepetitionMode, Roles};

use crate::manifest::write_manifest;
use crate::output::{ensure_out_dir, fmt_value, write_csv, write_json};

pub struct Table1Params {
    pub e: f64,
    pub trials: u64,
    pub seed: u64,
    pub sweep_states: usize,
    pub out: PathBuf,
}

#[derive(Serialize)]
struct SweepEntry {
    index: usize,
    infidelity: f64,
    std_error: f64,
}

#[derive(Serialize)]
struct SweepReport {
    repetitions: usize,
    trials: u64,
    entries: Vec<SweepEntry>,
    spread: f64,
}

pub fn run(p: &Table1Params) -> Result<()> {
    let started = Instant::now();
    ensure_out_dir(&p.out)?;
    let input = balanced_parity_state();
    let roles = Roles::new(0, 1, 2)?;

    println!("table1: e={} trials={} seed={}", p.e, p.trials, p.seed);
    let mut rows = Vec::new();
    for n in [2usize, 3] {
        let repetitions = 2 * n - 1;
        let cfg = ProtocolConfig::new(n, RepetitionMode::FixedTwoNMinusOne, roles)?;
        let params = NoiseParams::new(p.e, 0.0, p.seed.wrapping_add(repetitions as u64))
            .context("invalid noise parameters")?;
        let report = estimate_measurement_fidelity(
            &input,
            ParityKind::Zz,
            &cfg,
            &params,
            EstimatorMethod::McSampled { trials: p.trials },
        )?;
        ensure!(
            report.std_error.is_finite() && report.std_error >= 0.0,
            "estimator returned an invalid standard error"
        );
        ensure!(
            report.estimate <= 1.0 + 3.0 * report.std_error + 1e-12
                && report.estimate >= -3.0 * report.std_error - 1e-12,
            "estimate escaped [0, 1]"
        );
        let approximated = measurement_infidelity_leading(p.e, n)?;
        println!(
            "  {repetitions} repetitions: numeric {} +- {}, approximated {}",
            fmt_value(report.infidelity()),
            fmt_value(report.std_error),
            fmt_value(approximated)
        );
        rows.push(vec![
            repetitions.to_string(),
            fmt_value(report.infidelity()),
            fmt_value(approximated),
            fmt_value(report.std_error),
        ]);
    }
    let csv = write_csv(
        &p.out,
        "table1.csv",
        "repetitions,numeric,approximated,std_error",
        &rows,
    )?;
    let mut outputs = vec![csv];

    if p.sweep_states > 0 {
        // Sweep random inputs with half their weight in each parity sector:
        // the leading-order infidelity should not care which one.
        let cfg = ProtocolConfig::new(2, RepetitionMode::FixedTwoNMinusOne, roles)?;
        let sweep_trials = 20_000u64;
        let mut state_rng = trajectory_rng(p.seed, u64::MAX);
        let mut entries = Vec::with_capacity(p.sweep_states);
        for index in 0..p.sweep_states {
            let state = constrained_random_state(&mut state_rng);
            let params = NoiseParams::new(p.e, 0.0, p.seed.wrapping_add(1000 + index as u64))?;
            let report = estimate_measurement_fidelity(
                &state,
                ParityKind::Zz,
                &cfg,
                &params,
                EstimatorMethod::McEnumerated {
                    trials: sweep_trials,
                },
            )?;
            entries.push(SweepEntry {
                index,
                infidelity: report.infidelity(),
                std_error: report.std_error,
            });
        }
        let spread = entries
            .iter()
            .map(|e| e.infidelity)
            .fold(f64::NEG_INFINITY, f64::max)
            - entries
                .iter()
                .map(|e| e.infidelity)
                .fold(f64::INFINITY, f64::min);
        println!(
            "  sweep over {} sector-balanced states: spread {}",
            p.sweep_states,
            fmt_value(spread)
        );
        outputs.push(write_json(
            &p.out,
            "table1_sweep.json",
            &SweepReport {
                repetitions: 3,
                trials: sweep_trials,
                entries,
                spread,
            },
        )?);
    }

    let manifest = write_manifest(
        &p.out,
        "table1",
        json!({
            "e": p.e,
            "trials": p.trials,
            "seed": p.seed,
            "sweep_states": p.sweep_states,
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
