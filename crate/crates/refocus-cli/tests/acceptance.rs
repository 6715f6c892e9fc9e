//! Acceptance suite: one test per criterion, each printing a pass line with
//! the measured numbers (visible with `-- --nocapture`). Criteria cover the
//! reference infidelity table, the propagation table against the matrix
//! oracle, the faulty-CNOT error form, the noise-off ideal limit, residual
//! error subspaces, vote-scaling exponents, the early-stop repetition count,
//! the state-dependence factor, the threshold curve and byte-level
//! determinism of the command-line tool.

// The brute-force matrix oracle is shared with the core crate's tests.
#[path = "../../refocus-core/tests/common/mod.rs"]
mod oracle;

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use oracle::*;
use refocus_core::analytics::{
    measurement_infidelity_leading, threshold_curve, threshold_for,
};
use refocus_core::cnot::{
    apply_ideal_cnot, enumerate_cnot_branches, faulty_direct_cnot, CnotConfig, CnotErrorSchedule,
    CONTROL, TARGET,
};
use refocus_core::fidelity::{
    balanced_parity_state, bound_attaining_state, estimate_cnot_fidelity,
    estimate_measurement_fidelity, fit_scaling_exponent, EstimatorMethod,
};
use refocus_core::noise::{trajectory_rng, TrajectoryLog};
use refocus_core::parity::measure_parity_repeated;
use refocus_core::runner::trajectory_mean;
use refocus_core::statevector::{haar_random_state, PauliAxis};
use refocus_core::{
    NoiseParams, ParityKind, ProtocolConfig, RepetitionMode, Roles, Statevector as Sv,
};

fn pass(number: u32, name: &str, details: &str) {
    println!("acceptance {number:02} {name}: PASS ({details})");
}

fn roles012() -> Roles {
    Roles::new(0, 1, 2).unwrap()
}

#[test]
fn criterion_01_reference_table() {
    let started = Instant::now();
    let input = balanced_parity_state();
    let mut numerics = Vec::new();
    for (n, reference, window) in [(2usize, 0.0058, 0.0007), (3, 0.00137, 0.0003)] {
        let cfg = ProtocolConfig::new(n, RepetitionMode::FixedTwoNMinusOne, roles012()).unwrap();
        let params = NoiseParams::new(0.3, 0.0, 20_000 + n as u64).unwrap();
        let report = estimate_measurement_fidelity(
            &input,
            ParityKind::Zz,
            &cfg,
            &params,
            EstimatorMethod::McSampled { trials: 1_000_000 },
        )
        .unwrap();
        let infidelity = report.infidelity();
        assert!(
            (infidelity - reference).abs() < window,
            "{} repetitions: Monte Carlo {infidelity} outside {reference} +- {window}",
            2 * n - 1
        );
        numerics.push(infidelity);
    }
    let f3 = measurement_infidelity_leading(0.3, 2).unwrap();
    let f5 = measurement_infidelity_leading(0.3, 3).unwrap();
    assert!((f3 - 0.0054).abs() < 1e-12, "formula 3 reps: {f3}");
    assert!((f5 - 0.00108).abs() < 1e-12, "formula 5 reps: {f5}");
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed <= 60.0, "runtime {elapsed:.1}s exceeds 60s");
    pass(
        1,
        "reference table",
        &format!(
            "numeric ({:.5}, {:.5}) in (0.0058+-0.0007, 0.00137+-0.0003); formula (0.0054, 0.00108); {elapsed:.1}s",
            numerics[0], numerics[1]
        ),
    );
}

/// The four tabulated rows for two faulty CNOTs (controls 0 and 1, target 2).
fn propagation_rows(e1: f64, e2: f64) -> [(usize, Vec<(usize, Complex64)>); 4] {
    let (s, d) = (e1 + e2, e1 - e2);
    [
        (0b000, vec![(0b000, c(s.cos(), 0.0)), (0b001, c(0.0, -s.sin()))]),
        (0b010, vec![(0b011, c((-d).cos(), 0.0)), (0b010, c(0.0, (-d).sin()))]),
        (0b100, vec![(0b101, c(d.cos(), 0.0)), (0b100, c(0.0, d.sin()))]),
        (0b110, vec![(0b110, c(s.cos(), 0.0)), (0b111, c(0.0, s.sin()))]),
    ]
}

#[test]
fn criterion_02_parity_table() {
    let (e1, e2) = (0.23, 0.11);
    // Matrix oracle: exp(-i (e1 Z0 + e2 Z1) X2) CNOT(1->2) CNOT(0->2)
    // reproduces the tabulated amplitudes literally.
    let zx = pauli_matrix(PauliAxis::Z).kron(&pauli_matrix(PauliAxis::X));
    let generator = embed(&zx, &[0, 2], 3)
        .scale(c(0.0, -e1))
        .add(&embed(&zx, &[1, 2], 3).scale(c(0.0, -e2)));
    let oracle_circuit = expm(&generator)
        .mul(&cnot_matrix(1, 2, 3))
        .mul(&cnot_matrix(0, 2, 3));

    let mut worst_oracle = 0.0f64;
    let mut worst_sim = 0.0f64;
    let mut common_phase: Option<Complex64> = None;
    for (input, expected) in propagation_rows(e1, e2) {
        let mut amps = vec![c(0.0, 0.0); 8];
        amps[input] = c(1.0, 0.0);
        let basis = Sv::from_amplitudes(amps).unwrap();
        let mut want = vec![c(0.0, 0.0); 8];
        for (idx, amp) in &expected {
            want[*idx] = *amp;
        }

        // Oracle row, literal amplitudes.
        let got = apply_matrix(&oracle_circuit, &basis);
        let d: f64 = got
            .amplitudes()
            .iter()
            .zip(&want)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst_oracle = worst_oracle.max(d);
        assert!(d < 1e-12, "oracle row {input:03b}: distance {d}");

        // Simulated five-gate decomposition: same rows up to one shared
        // global phase (exp(i pi/4) per composed gate).
        let mut sim = basis;
        faulty_direct_cnot(&mut sim, 0, 2, e1).unwrap();
        faulty_direct_cnot(&mut sim, 1, 2, e2).unwrap();
        let want_sv = Sv::from_amplitudes(want).unwrap();
        let ov = want_sv.overlap(&sim).unwrap();
        assert!((ov.norm() - 1.0).abs() < 1e-12, "row {input:03b} overlap {}", ov.norm());
        match common_phase {
            None => common_phase = Some(ov),
            Some(p) => {
                let d = (ov - p).norm();
                worst_sim = worst_sim.max(d);
                assert!(d < 1e-12, "rows disagree on the global phase");
            }
        }
    }
    pass(
        2,
        "parity table",
        &format!(
            "4/4 rows; oracle residual {worst_oracle:.1e}; circuit phase spread {worst_sim:.1e}"
        ),
    );
}

#[test]
fn criterion_03_faulty_cnot_error_form() {
    // The decomposition equals exp(i eps sigma_Z x sigma_X) CNOT up to global
    // phase on a 20-point grid. The sign convention that reproduces the
    // propagation table verbatim is an exponent of -i eps Z (x) X; the
    // opposite sign describes a different unitary, and the two differ by
    // more than the tolerance away from eps = 0, so the form is pinned.
    let zx = pauli_matrix(PauliAxis::Z).kron(&pauli_matrix(PauliAxis::X));
    let mut worst = 0.0f64;
    for k in 0..20 {
        let eps = -0.5 + k as f64 / 19.0;
        let sim = matrix_of(2, |sv| faulty_direct_cnot(sv, 0, 1, eps).unwrap());
        let target = expm(&zx.scale(c(0.0, -eps))).mul(&cnot_matrix(0, 1, 2));
        let d = phase_aligned_distance(&sim, &target);
        worst = worst.max(d);
        assert!(d < 1e-10, "eps {eps}: operator distance {d}");
    }
    pass(
        3,
        "faulty-CNOT error form",
        &format!("20/20 grid points, worst operator distance {worst:.1e}"),
    );
}

#[test]
fn criterion_04_ideal_limit() {
    let mut rng = trajectory_rng(0xACCE, 4);
    let mut worst = 1.0f64;
    for n in [1usize, 2] {
        let cfg = CnotConfig::new(n, RepetitionMode::EarlyStop).unwrap();
        let schedule = CnotErrorSchedule::zero(&cfg);
        for _ in 0..50 {
            let input = haar_random_state(2, &mut rng).unwrap();
            let mut ideal = input.clone();
            apply_ideal_cnot(&mut ideal, CONTROL, TARGET).unwrap();
            let leaves = enumerate_cnot_branches(&input, &cfg, &schedule).unwrap();
            assert_eq!(leaves.len(), 8, "expected all eight outcome branches");
            for leaf in &leaves {
                let fid = state_fidelity(&ideal, &leaf.state);
                worst = worst.min(fid);
                assert!(fid >= 1.0 - 1e-10, "branch fidelity {fid}");
            }
        }
    }
    pass(
        4,
        "ideal limit",
        &format!("100 random inputs x 8 branches, min fidelity 1 - {:.1e}", 1.0 - worst),
    );
}

#[test]
fn criterion_05_error_propagation() {
    // Single faulty stage at eps2 = 0 and fixed errors: branches stay in the
    // plane spanned by the ideal output and the predicted residual, built
    // here from oracle matrices.
    let mut rng = trajectory_rng(0xACCE, 5);
    let cfg = CnotConfig::new(1, RepetitionMode::FixedTwoNMinusOne).unwrap();
    let eps = (0.19, 0.07);
    let mut worst_leak = 0.0f64;
    for (stage, residual_qubit, residual_axis) in [
        (ParityKind::Zz, TARGET, PauliAxis::X),
        (ParityKind::Xx, CONTROL, PauliAxis::Z),
    ] {
        let mut schedule = CnotErrorSchedule::zero(&cfg);
        match stage {
            ParityKind::Zz => schedule.zz.iter_mut().for_each(|p| *p = eps),
            ParityKind::Xx => schedule.xx.iter_mut().for_each(|p| *p = eps),
        }
        let mut excited = false;
        for _ in 0..20 {
            let input = haar_random_state(2, &mut rng).unwrap();
            let mut ideal = input.clone();
            apply_ideal_cnot(&mut ideal, CONTROL, TARGET).unwrap();
            let deflected = apply_matrix(
                &embed(&pauli_matrix(residual_axis), &[residual_qubit], 2),
                &ideal,
            );
            // Orthonormal residual direction inside the plane.
            let along = ideal.overlap(&deflected).unwrap();
            let mut res: Vec<Complex64> = deflected
                .amplitudes()
                .iter()
                .zip(ideal.amplitudes())
                .map(|(d, r)| d - along * r)
                .collect();
            let norm: f64 = res.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-6 {
                continue;
            }
            for a in &mut res {
                *a /= norm;
            }
            let residual = Sv::from_amplitudes(res).unwrap();
            for leaf in enumerate_cnot_branches(&input, &cfg, &schedule).unwrap() {
                let w = leaf.state.norm_sqr();
                let inside = ideal.overlap(&leaf.state).unwrap().norm_sqr()
                    + residual.overlap(&leaf.state).unwrap().norm_sqr();
                let leak = (w - inside).max(0.0);
                worst_leak = worst_leak.max(leak);
                assert!(leak < 1e-10, "{stage:?}: leakage {leak}");
                if residual.overlap(&leaf.state).unwrap().norm() > 1e-3 {
                    excited = true;
                }
            }
        }
        assert!(excited, "{stage:?}: residual direction never excited");
    }
    pass(
        5,
        "error propagation",
        &format!("ZZ -> X(target), XX -> Z(control); max out-of-subspace leakage {worst_leak:.1e}"),
    );
}

#[test]
fn criterion_06_scaling_exponents() {
    let mut summary = String::new();
    for n in [1usize, 2, 3] {
        let cfg = ProtocolConfig::new(n, RepetitionMode::FixedTwoNMinusOne, roles012()).unwrap();
        let grid: Vec<NoiseParams> = [0.05, 0.1, 0.2]
            .iter()
            .map(|&e| NoiseParams::new(e, 0.0, 60_000 + n as u64).unwrap())
            .collect();
        let fit = fit_scaling_exponent(ParityKind::Zz, &cfg, &grid, 20_000).unwrap();
        let expected = 2.0 * n as f64;
        assert!(
            (fit.slope - expected).abs() / expected < 0.15,
            "n={n}: slope {} outside 2n +- 15%",
            fit.slope
        );
        summary.push_str(&format!("n={n}: {:.3}; ", fit.slope));
    }
    pass(6, "scaling exponents", summary.trim_end_matches("; "));
}

#[test]
fn criterion_07_expected_repetitions() {
    let params = NoiseParams::new(0.3, 0.0, 70_001).unwrap();
    let cfg = ProtocolConfig::new(2, RepetitionMode::EarlyStop, roles012()).unwrap();
    let base = Sv::embed_pair(&balanced_parity_state(), 3, 0, 1).unwrap();
    let stats = trajectory_mean(100_000, |t| {
        let mut rng = trajectory_rng(params.seed, t);
        let mut log = TrajectoryLog::new();
        let mut reg = base.clone();
        let rec =
            measure_parity_repeated(&mut reg, ParityKind::Zz, &cfg, &params, &mut rng, &mut log)
                .unwrap();
        rec.repetitions_used as f64
    });
    assert!(
        (stats.mean - 2.12).abs() < 0.02,
        "mean repetitions {} outside 2.12 +- 0.02",
        stats.mean
    );
    pass(
        7,
        "expected repetitions",
        &format!("mean {:.4} +- {:.4} vs 2.12 +- 0.02", stats.mean, stats.std_error),
    );
}

#[test]
fn criterion_08_state_dependence() {
    let params = NoiseParams::new(0.1, 0.0, 80_001).unwrap();
    let cnot = estimate_cnot_fidelity(
        &bound_attaining_state(),
        &CnotConfig::new(2, RepetitionMode::FixedTwoNMinusOne).unwrap(),
        &params,
        EstimatorMethod::McEnumerated { trials: 40_000 },
    )
    .unwrap();
    let meas = estimate_measurement_fidelity(
        &balanced_parity_state(),
        ParityKind::Zz,
        &ProtocolConfig::new(2, RepetitionMode::FixedTwoNMinusOne, roles012()).unwrap(),
        &params,
        EstimatorMethod::McEnumerated { trials: 40_000 },
    )
    .unwrap();
    let ratio = cnot.infidelity() / meas.infidelity();
    assert!(
        (ratio - 2.0).abs() / 2.0 < 0.15,
        "CNOT/measurement infidelity ratio {ratio} outside 2 +- 15%"
    );
    pass(
        8,
        "state dependence",
        &format!(
            "CNOT {:.3e} / measurement {:.3e} = {ratio:.3} (target 2 +- 15%)",
            cnot.infidelity(),
            meas.infidelity()
        ),
    );
}

#[test]
fn criterion_09_threshold_curve() {
    let t = 1e-4;
    let boundary = t / 17.0;
    // Monotone non-increasing across the range.
    let grid: Vec<f64> = (0..40).map(|i| i as f64 * boundary / 33.0).collect();
    let curve = threshold_curve(t, &grid).unwrap();
    for w in curve.windows(2) {
        assert!(
            w[1].threshold <= w[0].threshold + 1e-12,
            "curve not monotone at eps2 = {}",
            w[1].eps2
        );
    }
    // Zero is reached exactly at t/17 within 1e-8.
    let below = threshold_for(t, boundary - 1e-8).unwrap();
    let above = threshold_for(t, boundary + 1e-8).unwrap();
    assert!(below.threshold > 0.0, "feasible just below the boundary");
    assert_eq!(above.threshold, 0.0, "infeasible just above the boundary");
    // Shape endpoints: a finite plateau near 1/16 at eps2 = 0, decaying to 0.
    let left = curve.first().unwrap();
    assert!(
        left.threshold > 0.05 && left.threshold <= 1.0 / 16.0 + 1e-9,
        "left endpoint {}",
        left.threshold
    );
    let interior_strictly_decreasing = curve
        .windows(2)
        .filter(|w| w[0].threshold > 0.0)
        .all(|w| w[1].threshold < w[0].threshold);
    assert!(interior_strictly_decreasing, "interior must strictly decrease");
    pass(
        9,
        "threshold curve",
        &format!(
            "monotone over {} points; eps2->0 gives {:.4}; zero at T/17 +- 1e-8",
            curve.len(),
            left.threshold
        ),
    );
}

fn run_cli(args: &[&str], threads: &str) {
    let out = Command::new(env!("CARGO_BIN_EXE_refocus"))
        .args(args)
        .env("REFOCUS_THREADS", threads)
        .output()
        .expect("spawn refocus");
    assert!(
        out.status.success(),
        "refocus {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn assert_identical(left: &Path, right: &Path, names: &[&str]) {
    for name in names {
        let a = std::fs::read(left.join(name)).unwrap();
        let b = std::fs::read(right.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between runs");
    }
}

#[test]
fn criterion_10_determinism() {
    let tmp = tempfile::tempdir().unwrap();
    let cases: Vec<(Vec<String>, Vec<&str>)> = vec![
        (
            vec![
                "table1".into(),
                "--trials".into(),
                "30000".into(),
                "--seed".into(),
                "9".into(),
            ],
            vec!["table1.csv"],
        ),
        (
            vec!["threshold".into(), "--points".into(), "9".into()],
            vec!["threshold.csv"],
        ),
        (
            vec![
                "scaling".into(),
                "--n".into(),
                "1".into(),
                "--trials".into(),
                "3000".into(),
                "--seed".into(),
                "4".into(),
            ],
            vec!["scaling.json"],
        ),
        (
            vec![
                "cnot-demo".into(),
                "--state".into(),
                "1,1,i,i".into(),
                "--e".into(),
                "0.3".into(),
                "--seed".into(),
                "12".into(),
            ],
            vec!["cnot_demo.json"],
        ),
        (
            vec![
                "propagation".into(),
                "--states".into(),
                "3".into(),
                "--seed".into(),
                "2".into(),
            ],
            vec!["propagation.json"],
        ),
    ];
    for (i, (args, files)) in cases.iter().enumerate() {
        let dir_a = tmp.path().join(format!("a{i}"));
        let dir_b = tmp.path().join(format!("b{i}"));
        let with_out = |dir: &Path| {
            let mut v: Vec<String> = args.clone();
            v.push("--out".into());
            v.push(dir.display().to_string());
            v
        };
        let a_args = with_out(&dir_a);
        let b_args = with_out(&dir_b);
        // Same seed, different worker counts: outputs must be byte-identical.
        run_cli(&a_args.iter().map(String::as_str).collect::<Vec<_>>(), "1");
        run_cli(&b_args.iter().map(String::as_str).collect::<Vec<_>>(), "4");
        assert_identical(&dir_a, &dir_b, files);
        // Manifests agree on the output hashes (wall clock aside).
        let ma: serde_json::Value =
            serde_json::from_slice(&std::fs::read(dir_a.join("manifest.json")).unwrap()).unwrap();
        let mb: serde_json::Value =
            serde_json::from_slice(&std::fs::read(dir_b.join("manifest.json")).unwrap()).unwrap();
        assert_eq!(ma["outputs"], mb["outputs"], "manifest hashes differ");
    }
    pass(
        10,
        "determinism",
        "5 commands byte-identical across reruns and worker counts 1 vs 4",
    );
}
