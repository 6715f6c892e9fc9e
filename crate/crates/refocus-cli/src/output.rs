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

//! CSV and JSON writers. CSV files are UTF-8 with a mandatory header row and
//! '.' as the decimal separator (Rust's float formatting guarantees the
//! latter). Computed values below the crate's 1e-12 exact-algebra floor are
//! written as plain `0`.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

/// Formats a computed value, flooring numerical dust to an exact zero.
pub fn fmt_value(x: f64) -> String {
    if x.abs() < 1e-12 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}

/// Formats an input/grid value without flooring.
pub fn fmt_exact(x: f64) -> String {
    format!("{x}")
}

pub fn write_csv(
    out_dir: &Path,
    name: &str,
    header: &str,
    rows: &[Vec<String>],
) -> Result<PathBuf> {
    let mut body = String::with_capacity(64 * (rows.len() + 1));
    body.push_str(header);
    body.push('\n');
    for row in rows {
        body.push_str(&row.join(","));
        body.push('\n');
    }
    let path = out_dir.join(name);
    std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

pub fn write_json(out_dir: &Path, name: &str, value: &impl serde::Serialize) -> Result<PathBuf> {
    let path = out_dir.join(name);
    let body = serde_json::to_string_pretty(value)?;
    std::fs::write(&path, body + "\n").with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

pub fn ensure_out_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path)
        .with_context(|| format!("creating output directory {}", path.display()))
}
