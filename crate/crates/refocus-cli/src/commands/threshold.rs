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

//! Threshold of the original entangling-gate error as a function of the
//! single-body fault rate, for a given infidelity target.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{ensure, Result};
use serde_json::json;

use refocus_core::analytics::threshold_curve;

use crate::manifest::write_manifest;
use crate::output::{ensure_out_dir, fmt_exact, fmt_value, write_csv};

pub struct ThresholdParams {
    pub target: f64,
    pub eps2_min: f64,
    pub eps2_max: f64,
    pub points: usize,
    pub out: PathBuf,
}

pub fn run(p: &ThresholdParams) -> Result<()> {
    let started = Instant::now();
    ensure!(p.points >= 1, "--points must be at least 1");
    ensure!(
        p.eps2_min >= 0.0 && p.eps2_max >= p.eps2_min,
        "need 0 <= eps2-min <= eps2-max"
    );
    ensure_out_dir(&p.out)?;

    let grid: Vec<f64> = if p.points == 1 {
        vec![p.eps2_min]
    } else {
        (0..p.points)
            .map(|i| {
                p.eps2_min
                    + (p.eps2_max - p.eps2_min) * i as f64 / (p.points - 1) as f64
            })
            .collect()
    };
    let curve = threshold_curve(p.target, &grid)?;
    // The refocused infidelity grows with both errors, so the curve must
    // come out monotone non-increasing.
    for pair in curve.windows(2) {
        ensure!(
            pair[1].threshold <= pair[0].threshold + 1e-12,
            "threshold curve is not monotone at eps2 = {}",
            pair[1].eps2
        );
    }

    let rows: Vec<Vec<String>> = curve
        .iter()
        .map(|pt| {
            vec![
                fmt_exact(pt.eps2),
                fmt_value(pt.threshold),
                pt.best_n.to_string(),
            ]
        })
        .collect();
    let csv = write_csv(&p.out, "threshold.csv", "eps2,threshold,best_n", &rows)?;

    println!(
        "threshold: T={} over eps2 in [{}, {}] ({} points)",
        p.target, p.eps2_min, p.eps2_max, p.points
    );
    if let (Some(first), Some(last)) = (curve.first(), curve.last()) {
        println!(
            "  eps2={}: threshold {} (n={})",
            fmt_exact(first.eps2),
            fmt_value(first.threshold),
            first.best_n
        );
        println!(
            "  eps2={}: threshold {} (n={})",
            fmt_exact(last.eps2),
            fmt_value(last.threshold),
            last.best_n
        );
    }

    let outputs = vec![csv];
    let manifest = write_manifest(
        &p.out,
        "threshold",
        json!({
            "T": p.target,
            "eps2_min": p.eps2_min,
            "eps2_max": p.eps2_max,
            "points": p.points,
        }),
        None,
        started,
        &outputs,
    )?;
    for path in outputs.iter().chain(std::iter::once(&manifest)) {
        println!("wrote {}", path.display());
    }
    Ok(())
}
