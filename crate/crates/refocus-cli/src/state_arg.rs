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

//! Parsing of `--state` amplitude lists. The four comma-separated complex
//! amplitudes are (alpha, beta, gamma, delta) on the basis kets
//! `|11>, |00>, |10>, |01>`, matching the labeling used by the analytics.
//! Accepted forms per entry: `1`, `-0.5`, `i`, `-i`, `0.5i`, `1+2i`, `1-0.5i`.

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use refocus_core::Statevector;

pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        bail!("empty amplitude");
    }
    if !t.contains('i') {
        let re: f64 = t.parse().with_context(|| format!("bad real amplitude {t:?}"))?;
        return Ok(Complex64::new(re, 0.0));
    }
    // Pure imaginary or a+bi form: split at the sign that separates the two
    // parts (skipping a leading sign and exponent signs).
    let bytes = t.as_bytes();
    let mut split = None;
    for idx in 1..bytes.len() {
        let ch = bytes[idx] as char;
        if (ch == '+' || ch == '-') && !matches!(bytes[idx - 1] as char, 'e' | 'E') {
            split = Some(idx);
        }
    }
    let (re_str, im_str) = match split {
        Some(idx) => (&t[..idx], &t[idx..]),
        None => ("0", t.as_str()),
    };
    if !im_str.ends_with('i') {
        bail!("imaginary part of {t:?} must end in 'i'");
    }
    let im_core = &im_str[..im_str.len() - 1];
    let im: f64 = match im_core {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other
            .parse()
            .with_context(|| format!("bad imaginary amplitude {t:?}"))?,
    };
    let re: f64 = re_str
        .parse()
        .with_context(|| format!("bad real amplitude {t:?}"))?;
    Ok(Complex64::new(re, im))
}

/// Parses `alpha,beta,gamma,delta` and returns the normalized two-qubit
/// state plus the normalized amplitudes in that order.
pub fn parse_state(s: &str) -> Result<(Statevector, [Complex64; 4])> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        bail!("--state needs 4 comma-separated amplitudes, got {}", parts.len());
    }
    let mut amps = [Complex64::new(0.0, 0.0); 4];
    for (slot, part) in amps.iter_mut().zip(&parts) {
        *slot = parse_complex(part)?;
    }
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-12 {
        bail!("--state must not be the zero vector");
    }
    let [alpha, beta, gamma, delta] = amps.map(|a| a / norm);
    // computational order |00>, |01>, |10>, |11>
    let sv = Statevector::from_amplitudes(vec![beta, delta, gamma, alpha])?;
    Ok((sv, [alpha, beta, gamma, delta]))
}
