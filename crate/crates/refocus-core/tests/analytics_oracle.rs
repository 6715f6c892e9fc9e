//! Closed-form expressions checked against independent quadrature and
//! asymptotic oracles.

use refocus_core::analytics::{
    c_of_e, expected_repetitions, infidelity_vs_eps, measurement_infidelity_leading,
    min_infidelity_over_n, original_cnot_error, s_of_e, threshold_curve, threshold_for,
    THRESHOLD_N_MAX,
};

/// Composite Simpson rule on [a, b].
fn simpson(a: f64, b: f64, panels: usize, f: impl Fn(f64) -> f64) -> f64 {
    let n = 2 * panels;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// Double-integral oracle for the flip weight: the average of sin^2(x + y)
/// over the square [-e, e]^2, by nested Simpson quadrature.
fn flip_weight_oracle(e: f64) -> f64 {
    let inner = |x: f64| simpson(-e, e, 200, |y| (x + y).sin().powi(2));
    simpson(-e, e, 200, inner) / (4.0 * e * e)
}

#[test]
fn closed_form_flip_weight_matches_quadrature_oracle() {
    for &e in &[0.05, 0.1, 0.2, 0.3, 0.5] {
        let oracle = flip_weight_oracle(e);
        let closed = s_of_e(e).unwrap();
        assert!(
            (oracle - closed).abs() < 1e-10,
            "e={e}: oracle {oracle} vs closed form {closed}"
        );
        assert!((c_of_e(e).unwrap() - (1.0 - oracle)).abs() < 1e-10);
    }
    // Frozen oracle value at the reference width 0.3.
    assert!((flip_weight_oracle(0.3) - 0.05719288505324556).abs() < 1e-12);
}

#[test]
fn original_cnot_error_matches_its_single_integral_oracle() {
    // e^2/6 is the leading order of (1/2)(1/2e) int sin^2(x) dx; at the
    // widths used here the relative gap stays below 2 percent.
    for &e in &[0.05, 0.1, 0.3] {
        let oracle = 0.5 * simpson(-e, e, 400, |x| x.sin().powi(2)) / (2.0 * e);
        let leading = original_cnot_error(e).unwrap();
        assert!(
            (oracle - leading).abs() / leading < 0.02,
            "e={e}: oracle {oracle} vs leading {leading}"
        );
    }
}

#[test]
fn leading_infidelity_tracks_the_exact_flip_weight_form() {
    // Replacing 2e^2/3 by the exact S(e) changes the n = 2 value by the
    // expected few percent at e = 0.3 and much less at e = 0.1.
    for (e, max_rel) in [(0.3, 0.1), (0.1, 0.02)] {
        let s = s_of_e(e).unwrap();
        let exact_form = 0.5 * 3.0 * s * s;
        let leading = measurement_infidelity_leading(e, 2).unwrap();
        let rel = (exact_form - leading).abs() / leading;
        assert!(rel < max_rel, "e={e}: rel {rel}");
    }
}

#[test]
fn threshold_reaches_zero_exactly_at_t_over_17() {
    let t = 1e-4;
    let boundary = t / 17.0;
    let below = threshold_for(t, boundary - 1e-8).unwrap();
    assert!(below.threshold > 0.0, "just below the boundary must be feasible");
    assert!(below.best_n >= 1);
    let above = threshold_for(t, boundary + 1e-8).unwrap();
    assert_eq!(above.threshold, 0.0);
    assert_eq!(above.best_n, 0);
}

#[test]
fn threshold_limit_matches_stirling_oracle() {
    // With no single-body error the solver pushes the vote depth to the cap
    // and the threshold approaches 1/16. A Stirling estimate of the binomial
    // gives the finite-depth value (2 sqrt(pi n) t)^(1/n) / 16 at the cap.
    let t = 1e-4;
    let p = threshold_for(t, 0.0).unwrap();
    let n = THRESHOLD_N_MAX as f64;
    let stirling = (2.0 * (std::f64::consts::PI * n).sqrt() * t).powf(1.0 / n) / 16.0;
    assert!(
        (p.threshold - stirling).abs() / stirling < 0.02,
        "solver {} vs stirling {stirling}",
        p.threshold
    );
    assert!(p.threshold < 1.0 / 16.0 + 1e-9);
    assert!(p.threshold > 0.055);
}

#[test]
fn threshold_points_are_feasible_and_tight() {
    let t = 1e-4;
    let grid: Vec<f64> = (0..20).map(|i| i as f64 * 3e-7).collect();
    for point in threshold_curve(t, &grid).unwrap() {
        if point.threshold == 0.0 {
            continue;
        }
        let value = infidelity_vs_eps(point.best_n, point.threshold, point.eps2).unwrap();
        assert!(value <= t * (1.0 + 1e-9), "best_n misses the target: {value}");
        // A slightly larger error must fail for every vote depth.
        let (min_above, _) =
            min_infidelity_over_n(point.threshold + 1e-6, point.eps2, THRESHOLD_N_MAX);
        assert!(min_above > t, "threshold is not tight");
    }
}

#[test]
fn expected_repetitions_is_leading_order_of_the_race_mean() {
    // Exact early-stop mean for n = 2 is 2 + 2 C S; the leading form
    // n (1 + 2e^2/3) agrees to O(e^4).
    for &e in &[0.05, 0.1, 0.2] {
        let exact = 2.0 + 2.0 * c_of_e(e).unwrap() * s_of_e(e).unwrap();
        let leading = expected_repetitions(e, 2).unwrap();
        assert!(
            (exact - leading).abs() < 2.0 * e.powi(4),
            "e={e}: exact {exact} vs leading {leading}"
        );
    }
}
