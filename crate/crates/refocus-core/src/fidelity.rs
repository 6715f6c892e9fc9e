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

//! Average-fidelity estimation for the repeated parity measurement and the
//! measurement-based CNOT.
//!
//! The per-branch fidelity weight is `<psi|psi> * |<psi_p~|psi~>|`, where
//! `psi` is the unnormalized post-measurement branch and `psi_p~` the
//! normalized projection onto the sector consistent with the majority
//! outcome (for the CNOT, the ideal output state instead). Three estimation
//! strategies are offered:
//!
//! * sampled Monte Carlo - amplitude errors and measurement outcomes are both
//!   sampled, one branch per trajectory;
//! * branch-enumerated Monte Carlo - amplitude errors are sampled but every
//!   outcome branch is summed exactly with its Born weight, which removes the
//!   outcome shot noise and resolves infidelities far below `1/sqrt(trials)`;
//! * quadrature - outcome branches are enumerated and the amplitude-error
//!   average is taken on a tensor-product Gauss-Legendre grid, limited to six
//!   error dimensions and to `eps2 = 0`.
//!
//! Wrong-majority branches keep their weight; nothing is post-selected away.

use rand::Rng;

use crate::cnot::{
    apply_ideal_cnot, enumerate_cnot_branches, run_measurement_cnot, CnotConfig,
    CnotErrorSchedule,
};
use crate::error::{Error, Result};
use crate::noise::{draw_amplitude_error, trajectory_rng, NoiseParams, TrajectoryLog};
use crate::parity::{
    enumerate_parity_repeated, measure_parity_repeated, project_parity, sector_for, ParityKind,
    ProtocolConfig, RepetitionMode,
};
use crate::quadrature::GaussLegendre;
use crate::runner::{trajectory_mean, KahanSum, MeanStats};
use crate::statevector::Statevector;

use num_complex::Complex64;

/// Most error dimensions the quadrature strategy will grid.
pub const MAX_QUADRATURE_DIMS: usize = 6;

/// How an estimate was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodTag {
    Mc,
    Quadrature,
    Formula,
}

impl std::fmt::Display for MethodTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MethodTag::Mc => write!(f, "MC"),
            MethodTag::Quadrature => write!(f, "quadrature"),
            MethodTag::Formula => write!(f, "formula"),
        }
    }
}

/// Estimation strategy and its budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorMethod {
    /// Sample both the errors and the outcomes.
    McSampled { trials: u64 },
    /// Sample the errors, enumerate the outcome branches exactly.
    McEnumerated { trials: u64 },
    /// Gauss-Legendre grid over the errors, enumerated branches.
    Quadrature { nodes_per_dim: usize },
}

/// Echo of the configuration an estimate was produced under.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportConfig {
    pub kind: Option<ParityKind>,
    pub majority: usize,
    pub mode: RepetitionMode,
    pub e: f64,
    pub eps2: f64,
    pub seed: u64,
}

/// An average-fidelity estimate with its statistical error.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityReport {
    pub estimate: f64,
    pub std_error: f64,
    pub trajectories: u64,
    pub method: MethodTag,
    pub config: ReportConfig,
}

impl FidelityReport {
    pub fn infidelity(&self) -> f64 {
        1.0 - self.estimate
    }
}

/// Log-log fit of infidelity against the error half-width.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    /// Sum of squared residuals of the fit.
    pub residual: f64,
    pub points: Vec<ScalingPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingPoint {
    pub e: f64,
    pub infidelity: f64,
    pub std_error: f64,
}

// ---------------------------------------------------------------------------
// Reference input states
// ---------------------------------------------------------------------------

/// The evenly weighted state `(|11> + |00> + |10> + |01>)/2`, which balances
/// the two parity sectors.
pub fn balanced_parity_state() -> Statevector {
    let h = Complex64::new(0.5, 0.0);
    Statevector::from_amplitudes(vec![h, h, h, h]).unwrap()
}

/// `alpha = beta = 1/2, gamma = delta = i/2` on `|11>,|00>,|10>,|01>`; the
/// state for which the CNOT infidelity attains twice the measurement
/// infidelity.
pub fn bound_attaining_state() -> Statevector {
    let h = Complex64::new(0.5, 0.0);
    let ih = Complex64::new(0.0, 0.5);
    // computational order |00>, |01>, |10>, |11>
    Statevector::from_amplitudes(vec![h, ih, ih, h]).unwrap()
}

/// Random two-qubit state with exactly half its weight in each parity sector
/// of the computational basis.
pub fn constrained_random_state(rng: &mut impl Rng) -> Statevector {
    loop {
        let raw = crate::statevector::haar_random_state(2, rng).unwrap();
        let a = raw.amplitudes();
        // even sector: |00>, |11>; odd: |01>, |10>
        let we = (a[0].norm_sqr() + a[3].norm_sqr()).sqrt();
        let wo = (a[1].norm_sqr() + a[2].norm_sqr()).sqrt();
        if we < 1e-6 || wo < 1e-6 {
            continue;
        }
        let se = std::f64::consts::FRAC_1_SQRT_2 / we;
        let so = std::f64::consts::FRAC_1_SQRT_2 / wo;
        return Statevector::from_amplitudes(vec![a[0] * se, a[1] * so, a[2] * so, a[3] * se])
            .unwrap();
    }
}

// ---------------------------------------------------------------------------
// Measurement fidelity
// ---------------------------------------------------------------------------

/// Average fidelity of the repeated parity measurement on a normalized
/// two-qubit input.
pub fn estimate_measurement_fidelity(
    input: &Statevector,
    kind: ParityKind,
    cfg: &ProtocolConfig,
    params: &NoiseParams,
    method: EstimatorMethod,
) -> Result<FidelityReport> {
    if input.num_qubits() != 2 {
        return Err(Error::DimensionMismatch(input.num_qubits(), 2));
    }
    if !input.is_normalized(1e-9) {
        return Err(Error::NotNormalized(input.norm_sqr()));
    }
    cfg.validate_for(3)?;
    let base = Statevector::embed_pair(input, 3, cfg.roles.qubit_a, cfg.roles.qubit_b)?;
    let pair = (cfg.roles.qubit_a, cfg.roles.qubit_b);

    let report_config = ReportConfig {
        kind: Some(kind),
        majority: cfg.majority,
        mode: cfg.mode,
        e: params.e,
        eps2: params.eps2,
        seed: params.seed,
    };

    match method {
        EstimatorMethod::McSampled { trials } => {
            check_trials(trials)?;
            let stats = trajectory_mean(trials, |t| {
                let mut rng = trajectory_rng(params.seed, t);
                let mut log = TrajectoryLog::new();
                let mut reg = base.clone();
                let rec = measure_parity_repeated(&mut reg, kind, cfg, params, &mut rng, &mut log)
                    .expect("validated configuration");
                let sector = sector_for(kind, rec.majority);
                let proj = project_parity(&reg, kind, pair, sector).expect("valid pair");
                proj.norm_sqr().sqrt().min(1.0)
            });
            Ok(report_from_stats(stats, MethodTag::Mc, report_config))
        }
        EstimatorMethod::McEnumerated { trials } => {
            check_trials(trials)?;
            let rounds = cfg.max_rounds();
            let stats = trajectory_mean(trials, |t| {
                let mut rng = trajectory_rng(params.seed, t);
                let eps: Vec<(f64, f64)> = (0..rounds)
                    .map(|_| {
                        (
                            draw_amplitude_error(&mut rng, params),
                            draw_amplitude_error(&mut rng, params),
                        )
                    })
                    .collect();
                enumerated_measurement_value(&base, kind, cfg, &eps)
            });
            Ok(report_from_stats(stats, MethodTag::Mc, report_config))
        }
        EstimatorMethod::Quadrature { nodes_per_dim } => {
            let dims = 2 * cfg.max_rounds();
            let (estimate, points) = quadrature_average(params, dims, nodes_per_dim, |eps| {
                let pairs: Vec<(f64, f64)> =
                    eps.chunks_exact(2).map(|c| (c[0], c[1])).collect();
                enumerated_measurement_value(&base, kind, cfg, &pairs)
            })?;
            Ok(FidelityReport {
                estimate,
                std_error: 0.0,
                trajectories: points,
                method: MethodTag::Quadrature,
                config: report_config,
            })
        }
    }
}

/// Exact branch sum for one draw of the per-round errors.
fn enumerated_measurement_value(
    base: &Statevector,
    kind: ParityKind,
    cfg: &ProtocolConfig,
    eps: &[(f64, f64)],
) -> f64 {
    let leaves =
        enumerate_parity_repeated(base, kind, cfg, eps).expect("validated configuration");
    let pair = (cfg.roles.qubit_a, cfg.roles.qubit_b);
    let mut acc = KahanSum::default();
    for leaf in &leaves {
        let sector = sector_for(kind, leaf.majority);
        let proj = project_parity(&leaf.state, kind, pair, sector).expect("valid pair");
        acc.add(leaf.state.norm_sqr().sqrt() * proj.norm_sqr().sqrt());
    }
    acc.value().min(1.0)
}

/// Sum of enumerated branch weights for one error draw; 1 up to roundoff.
/// Exposed for the weight-conservation check.
pub fn enumerated_measurement_weight_sum(
    input: &Statevector,
    kind: ParityKind,
    cfg: &ProtocolConfig,
    eps: &[(f64, f64)],
) -> Result<f64> {
    let base = Statevector::embed_pair(input, 3, cfg.roles.qubit_a, cfg.roles.qubit_b)?;
    let leaves = enumerate_parity_repeated(&base, kind, cfg, eps)?;
    let mut acc = KahanSum::default();
    for leaf in &leaves {
        acc.add(leaf.state.norm_sqr());
    }
    Ok(acc.value())
}

// ---------------------------------------------------------------------------
// CNOT fidelity
// ---------------------------------------------------------------------------

/// Average fidelity of the measurement-based CNOT against the ideal CNOT
/// output for the given input.
pub fn estimate_cnot_fidelity(
    input: &Statevector,
    cfg: &CnotConfig,
    params: &NoiseParams,
    method: EstimatorMethod,
) -> Result<FidelityReport> {
    if input.num_qubits() != 2 {
        return Err(Error::DimensionMismatch(input.num_qubits(), 2));
    }
    if !input.is_normalized(1e-9) {
        return Err(Error::NotNormalized(input.norm_sqr()));
    }
    let mut ideal = input.clone();
    apply_ideal_cnot(&mut ideal, crate::cnot::CONTROL, crate::cnot::TARGET)?;

    let report_config = ReportConfig {
        kind: None,
        majority: cfg.majority,
        mode: cfg.mode,
        e: params.e,
        eps2: params.eps2,
        seed: params.seed,
    };

    match method {
        EstimatorMethod::McSampled { trials } => {
            check_trials(trials)?;
            let stats = trajectory_mean(trials, |t| {
                let mut rng = trajectory_rng(params.seed, t);
                let mut log = TrajectoryLog::new();
                let (out, _) = run_measurement_cnot(input, cfg, params, &mut rng, &mut log)
                    .expect("validated configuration");
                ideal.overlap(&out).expect("two qubits").norm().min(1.0)
            });
            Ok(report_from_stats(stats, MethodTag::Mc, report_config))
        }
        EstimatorMethod::McEnumerated { trials } => {
            check_trials(trials)?;
            let rounds = cfg.max_rounds();
            let stats = trajectory_mean(trials, |t| {
                let mut rng = trajectory_rng(params.seed, t);
                let draw_pairs = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<(f64, f64)> {
                    (0..rounds)
                        .map(|_| {
                            (
                                draw_amplitude_error(rng, params),
                                draw_amplitude_error(rng, params),
                            )
                        })
                        .collect()
                };
                let schedule = CnotErrorSchedule {
                    zz: draw_pairs(&mut rng),
                    xx: draw_pairs(&mut rng),
                };
                enumerated_cnot_value(input, &ideal, cfg, &schedule)
            });
            Ok(report_from_stats(stats, MethodTag::Mc, report_config))
        }
        EstimatorMethod::Quadrature { nodes_per_dim } => {
            let per_stage = 2 * cfg.max_rounds();
            let dims = 2 * per_stage;
            let (estimate, points) = quadrature_average(params, dims, nodes_per_dim, |eps| {
                let to_pairs = |slice: &[f64]| -> Vec<(f64, f64)> {
                    slice.chunks_exact(2).map(|c| (c[0], c[1])).collect()
                };
                let schedule = CnotErrorSchedule {
                    zz: to_pairs(&eps[..per_stage]),
                    xx: to_pairs(&eps[per_stage..]),
                };
                enumerated_cnot_value(input, &ideal, cfg, &schedule)
            })?;
            Ok(FidelityReport {
                estimate,
                std_error: 0.0,
                trajectories: points,
                method: MethodTag::Quadrature,
                config: report_config,
            })
        }
    }
}

fn enumerated_cnot_value(
    input: &Statevector,
    ideal: &Statevector,
    cfg: &CnotConfig,
    schedule: &CnotErrorSchedule,
) -> f64 {
    let leaves =
        enumerate_cnot_branches(input, cfg, schedule).expect("validated configuration");
    let mut acc = KahanSum::default();
    for leaf in &leaves {
        // weight * |<ideal|psi_b~>| = ||psi_b|| * |<ideal|psi_b>|
        let norm = leaf.state.norm_sqr().sqrt();
        acc.add(norm * ideal.overlap(&leaf.state).expect("two qubits").norm());
    }
    acc.value().min(1.0)
}

// ---------------------------------------------------------------------------
// Scaling fit
// ---------------------------------------------------------------------------

/// Least-squares slope of `log(infidelity)` against `log(e)` for the repeated
/// measurement on the balanced input state, using branch-enumerated Monte
/// Carlo at each grid point. All grid entries must have `eps2 = 0` and
/// distinct positive `e`.
pub fn fit_scaling_exponent(
    kind: ParityKind,
    cfg: &ProtocolConfig,
    params_grid: &[NoiseParams],
    trials: u64,
) -> Result<ScalingFit> {
    if params_grid.len() < 3 {
        return Err(Error::DegenerateGrid);
    }
    for p in params_grid {
        if p.eps2 != 0.0 || p.e <= 0.0 {
            return Err(Error::DegenerateGrid);
        }
    }
    let input = balanced_parity_state();
    let mut points = Vec::with_capacity(params_grid.len());
    for p in params_grid {
        let report = estimate_measurement_fidelity(
            &input,
            kind,
            cfg,
            p,
            EstimatorMethod::McEnumerated { trials },
        )?;
        let infidelity = report.infidelity();
        if infidelity <= 0.0 {
            return Err(Error::DegenerateGrid);
        }
        points.push(ScalingPoint {
            e: p.e,
            infidelity,
            std_error: report.std_error,
        });
    }
    let xs: Vec<f64> = points.iter().map(|p| p.e.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.infidelity.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx < 1e-12 {
        return Err(Error::DegenerateGrid);
    }
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    Ok(ScalingFit {
        slope,
        intercept,
        residual,
        points,
    })
}

// ---------------------------------------------------------------------------
// Shared pieces
// ---------------------------------------------------------------------------

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    Ok(())
}

fn report_from_stats(stats: MeanStats, method: MethodTag, config: ReportConfig) -> FidelityReport {
    FidelityReport {
        estimate: stats.mean,
        std_error: stats.std_error,
        trajectories: stats.trials,
        method,
        config,
    }
}

/// Tensor-product Gauss-Legendre average of `f` over `dims` independent
/// uniform error variables on `[-e, e]`. Returns the average and the number
/// of grid points visited.
fn quadrature_average(
    params: &NoiseParams,
    dims: usize,
    nodes_per_dim: usize,
    f: impl Fn(&[f64]) -> f64,
) -> Result<(f64, u64)> {
    if params.eps2 != 0.0 {
        return Err(Error::QuadratureWithPauliNoise(params.eps2));
    }
    if dims > MAX_QUADRATURE_DIMS {
        return Err(Error::QuadratureDimensions {
            dims,
            max: MAX_QUADRATURE_DIMS,
        });
    }
    if nodes_per_dim == 0 {
        return Err(Error::NoTrials);
    }
    let rule = GaussLegendre::new(nodes_per_dim);
    let mut indices = vec![0usize; dims];
    let mut eps = vec![0.0f64; dims];
    let mut acc = KahanSum::default();
    let mut points = 0u64;
    loop {
        let mut weight = 1.0;
        for (d, &i) in indices.iter().enumerate() {
            // Uniform average over [-e, e]: scale nodes by e, halve weights.
            eps[d] = params.e * rule.nodes()[i];
            weight *= 0.5 * rule.weights()[i];
        }
        acc.add(weight * f(&eps));
        points += 1;
        // odometer increment
        let mut d = 0;
        loop {
            if d == dims {
                return Ok((acc.value().min(1.0), points));
            }
            indices[d] += 1;
            if indices[d] < nodes_per_dim {
                break;
            }
            indices[d] = 0;
            d += 1;
        }
    }
}
