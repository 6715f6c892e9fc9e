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

//! Closed-form infidelity expressions and the threshold solver.
//!
//! Notation: `e` is the half-width of the uniform amplitude-error
//! distribution, `eps2` the single-body fault probability per gate per qubit,
//! and `n` the majority count (so a fixed-schedule vote uses `2n - 1`
//! rounds). `C(e)` and `S(e)` are the averages of `cos^2(x + y)` and
//! `sin^2(x + y)` over two independent draws from `[-e, e]`; to leading order
//! `S(e) ~ 2 e^2 / 3`, which is the form the approximated expressions use.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::parity::ParityKind;

/// Amplitude and single-body contributions to an infidelity value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfidelityBreakdown {
    pub amplitude_term: f64,
    pub single_body_term: f64,
    pub total: f64,
    pub n: usize,
}

impl InfidelityBreakdown {
    fn new(amplitude_term: f64, single_body_term: f64, n: usize) -> Self {
        Self {
            amplitude_term,
            single_body_term,
            total: amplitude_term + single_body_term,
            n,
        }
    }
}

/// One point of the threshold curve. `best_n = 0` marks an empty entry where
/// even a perfect entangling gate misses the target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdPoint {
    pub eps2: f64,
    pub threshold: f64,
    pub best_n: usize,
}

/// Largest majority count the threshold solver scans. Terms are evaluated in
/// log space, so large counts cost nothing in accuracy.
pub const THRESHOLD_N_MAX: usize = 400;

/// Absolute bisection tolerance of the threshold solver.
pub const THRESHOLD_BISECTION_TOL: f64 = 1e-8;

fn check_e(e: f64) -> Result<()> {
    if !e.is_finite() || e < 0.0 {
        return Err(Error::InvalidNoiseParams(format!(
            "e must be finite and >= 0, got {e}"
        )));
    }
    Ok(())
}

fn check_n(n: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidMajorityCount);
    }
    Ok(())
}

/// Average of `sin^2(x + y)` for `x, y` uniform on `[-e, e]`.
/// Closed form `1/2 - sin^2(2e) / (8 e^2)`, with the series
/// `2e^2/3 - 16e^4/45` near zero where the closed form cancels.
pub fn s_of_e(e: f64) -> Result<f64> {
    check_e(e)?;
    if e == 0.0 {
        return Ok(0.0);
    }
    if e < 1e-3 {
        let e2 = e * e;
        return Ok(2.0 / 3.0 * e2 - 16.0 / 45.0 * e2 * e2);
    }
    Ok(0.5 - (2.0 * e).sin().powi(2) / (8.0 * e * e))
}

/// Average of `cos^2(x + y)`; complements [`s_of_e`] so the two always sum
/// to one exactly.
pub fn c_of_e(e: f64) -> Result<f64> {
    Ok(1.0 - s_of_e(e)?)
}

/// Leading-order flip weight `2 e^2 / 3` used by the approximated formulas.
pub fn s_leading(e: f64) -> f64 {
    2.0 * e * e / 3.0
}

/// Exact `C(2n-1, n)` as a float.
fn binom_2nm1_n(n: usize) -> f64 {
    if n <= 30 {
        let mut num = 1u128;
        let mut den = 1u128;
        for k in 1..n as u128 {
            num *= n as u128 + k;
            den *= k;
        }
        num as f64 / den as f64
    } else {
        ln_binom_2nm1_n(n).exp()
    }
}

/// `ln C(2n-1, n)`, stable for any `n`.
fn ln_binom_2nm1_n(n: usize) -> f64 {
    (1..n).map(|k| ((n + k) as f64 / k as f64).ln()).sum()
}

/// Leading-order infidelity of the repeated parity measurement:
/// `1/2 C(2n-1, n) (2e^2/3)^n`.
pub fn measurement_infidelity_leading(e: f64, n: usize) -> Result<f64> {
    check_e(e)?;
    check_n(n)?;
    Ok(0.5 * binom_2nm1_n(n) * s_leading(e).powi(n as i32))
}

/// Full measurement infidelity including single-body faults. The constant
/// differs between kinds because the ZZ round carries four extra basis
/// rotations: `[4n(1 + 2e^2/3) + 5] eps2` for ZZ, `... + 1` for XX, plus the
/// amplitude term.
pub fn measurement_infidelity_full(
    e: f64,
    eps2: f64,
    n: usize,
    kind: ParityKind,
) -> Result<InfidelityBreakdown> {
    check_e(e)?;
    check_n(n)?;
    let amplitude = measurement_infidelity_leading(e, n)?;
    let constant = match kind {
        ParityKind::Zz => 5.0,
        ParityKind::Xx => 1.0,
    };
    let single = (4.0 * n as f64 * (1.0 + s_leading(e)) + constant) * eps2;
    Ok(InfidelityBreakdown::new(amplitude, single, n))
}

/// State-independent bound on the measurement-based CNOT infidelity:
/// `C(2n-1, n)(2e^2/3)^n + 8n(1 + 2e^2/3) eps2 + 9 eps2`.
pub fn cnot_infidelity_bound(e: f64, eps2: f64, n: usize) -> Result<InfidelityBreakdown> {
    check_e(e)?;
    check_n(n)?;
    let amplitude = binom_2nm1_n(n) * s_leading(e).powi(n as i32);
    let single = (8.0 * n as f64 * (1.0 + s_leading(e)) + 9.0) * eps2;
    Ok(InfidelityBreakdown::new(amplitude, single, n))
}

/// State-dependent CNOT infidelity for the input
/// `alpha|11> + beta|00> + gamma|10> + delta|01>`. The bracket carries the
/// squared overlap deficits of the two residual error directions (a target
/// flip and a control phase on the ideal output), so the coherence term
/// pairs the amplitudes a target flip connects: alpha with gamma and beta
/// with delta. Both bracket terms are squared.
pub fn cnot_infidelity_state(
    e: f64,
    eps2: f64,
    n: usize,
    alpha: Complex64,
    beta: Complex64,
    gamma: Complex64,
    delta: Complex64,
) -> Result<f64> {
    check_e(e)?;
    check_n(n)?;
    let norm = alpha.norm_sqr() + beta.norm_sqr() + gamma.norm_sqr() + delta.norm_sqr();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized(norm));
    }
    // <out| Z(control) |out> with out the ideal CNOT output.
    let population = beta.norm_sqr() + delta.norm_sqr() - alpha.norm_sqr() - gamma.norm_sqr();
    // <out| X(target) |out>.
    let coherence = 2.0 * (alpha.conj() * gamma).re + 2.0 * (beta.conj() * delta).re;
    let bracket = 2.0 - population * population - coherence * coherence;
    let amplitude = measurement_infidelity_leading(e, n)? * bracket;
    let single = (8.0 * n as f64 * (1.0 + s_leading(e)) + 9.0) * eps2;
    Ok(amplitude + single)
}

/// Mean number of rounds of the early-stop vote, to leading order:
/// `n (1 + 2e^2/3)`.
pub fn expected_repetitions(e: f64, n: usize) -> Result<f64> {
    check_e(e)?;
    check_n(n)?;
    Ok(n as f64 * (1.0 + s_leading(e)))
}

/// Infidelity of the bare faulty CNOT before refocusing: `e^2 / 6`.
pub fn original_cnot_error(e: f64) -> Result<f64> {
    check_e(e)?;
    Ok(e * e / 6.0)
}

/// CNOT infidelity as a function of the original CNOT error `eps` (so that
/// `4 eps` replaces `2e^2/3`): `[8n(1 + 4 eps) + 9] eps2 + C(2n-1, n)(4 eps)^n`.
pub fn infidelity_vs_eps(n: usize, eps: f64, eps2: f64) -> Result<f64> {
    check_n(n)?;
    if !eps.is_finite() || eps < 0.0 {
        return Err(Error::InvalidNoiseParams(format!(
            "original CNOT error must be >= 0, got {eps}"
        )));
    }
    let single = (8.0 * n as f64 * (1.0 + 4.0 * eps) + 9.0) * eps2;
    let amplitude = amplitude_term_log_safe(n, eps);
    Ok(single + amplitude)
}

fn ln_binom_table() -> &'static Vec<f64> {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| (0..=THRESHOLD_N_MAX).map(ln_binom_2nm1_n).collect())
}

fn amplitude_term_log_safe(n: usize, eps: f64) -> f64 {
    if eps == 0.0 {
        return 0.0;
    }
    let ln_binom = if n <= THRESHOLD_N_MAX {
        ln_binom_table()[n]
    } else {
        ln_binom_2nm1_n(n)
    };
    (ln_binom + n as f64 * (4.0 * eps).ln()).exp()
}

/// Minimum of [`infidelity_vs_eps`] over the majority count, with the
/// minimizing `n`.
pub fn min_infidelity_over_n(eps: f64, eps2: f64, n_max: usize) -> (f64, usize) {
    let mut best = f64::INFINITY;
    let mut best_n = 1;
    for n in 1..=n_max {
        let single = (8.0 * n as f64 * (1.0 + 4.0 * eps) + 9.0) * eps2;
        let value = single + amplitude_term_log_safe(n, eps);
        if value < best {
            best = value;
            best_n = n;
        }
    }
    (best, best_n)
}

/// Largest original-CNOT error whose refocused infidelity can still be pushed
/// below the target `t` by choosing the majority count. Returns an empty
/// entry (threshold 0, `best_n` 0) when even a perfect entangling gate
/// exceeds `t`, which happens exactly for `17 eps2 > t`.
pub fn threshold_for(t: f64, eps2: f64) -> Result<ThresholdPoint> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::NonPositiveThreshold(t));
    }
    if eps2.is_nan() || eps2 < 0.0 {
        return Err(Error::InvalidNoiseParams(format!(
            "eps2 must be >= 0, got {eps2}"
        )));
    }
    let (at_zero, _) = min_infidelity_over_n(0.0, eps2, THRESHOLD_N_MAX);
    if at_zero > t {
        return Ok(ThresholdPoint {
            eps2,
            threshold: 0.0,
            best_n: 0,
        });
    }
    let mut lo = 0.0f64;
    let mut hi = 0.25f64;
    while min_infidelity_over_n(hi, eps2, THRESHOLD_N_MAX).0 <= t {
        hi *= 2.0;
    }
    while hi - lo > THRESHOLD_BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if min_infidelity_over_n(mid, eps2, THRESHOLD_N_MAX).0 <= t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (_, best_n) = min_infidelity_over_n(lo, eps2, THRESHOLD_N_MAX);
    Ok(ThresholdPoint {
        eps2,
        threshold: lo,
        best_n,
    })
}

/// The threshold curve over a grid of single-body error rates.
pub fn threshold_curve(t: f64, eps2_grid: &[f64]) -> Result<Vec<ThresholdPoint>> {
    eps2_grid
        .iter()
        .map(|&eps2| threshold_for(t, eps2))
        .collect()
}
