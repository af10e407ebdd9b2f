use proptest::prelude::*;
use tdq_core::observables::observe;
use tdq_core::states::state;
use tdq_core::verify::{oracle_grid, quadrature_moments, run_suite, test_window};
use tdq_core::{Case, Regime, Sign, StateFamily, StateSpec, SuiteConfig, SystemKind, SystemSpec, TimeCoord};

fn suite_lines(threads: usize, cfg: &SuiteConfig) -> Vec<String> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    pool.install(|| run_suite(cfg)).iter().map(|r| r.to_json_line()).collect()
}

#[test]
fn suite_output_is_independent_of_thread_count() {
    let cfg = SuiteConfig { times_per_case: 2, ..Default::default() };
    let one = suite_lines(1, &cfg);
    let four = suite_lines(4, &cfg);
    assert_eq!(one, four);
    assert!(one.len() >= 60);
}

#[test]
fn reports_follow_schema_and_cover_all_cases() {
    let cfg = SuiteConfig { times_per_case: 2, ..Default::default() };
    let reports = run_suite(&cfg);
    for case in Case::all() {
        assert!(reports.iter().any(|r| r.case == case.label()), "{}", case.label());
    }
    for r in &reports {
        assert!(r.passed, "{}", r.to_json_line());
        let v: serde_json::Value = serde_json::from_str(&r.to_json_line()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, ["case", "check", "max_abs_error", "metadata", "passed", "tolerance"]);
    }
    assert!(reports.iter().any(|r| r.check.starts_with("control.")));
}

#[test]
fn case_labels_round_trip() {
    for c in Case::all() {
        assert_eq!(c.label().parse::<Case>().unwrap(), c);
    }
    assert!("tm,under".parse::<Case>().is_err());
}

fn spec_for(regime: Regime, sign: Sign, mag: f64) -> SystemSpec {
    let u = match regime {
        Regime::Over => 4.0 + mag,
        Regime::Critical => 4.0,
        Regime::Under => mag.min(3.8),
    };
    SystemSpec::new(u * sign.factor(), 2.0, 0.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_forms_match_quadrature(
        ci in 0usize..18,
        mag in 0.5..4.0f64,
        frac in 0.0..1.0f64,
        x0 in -2.0..2.0f64,
        p0 in -2.0..2.0f64,
        r in 0.0..1.0f64,
        theta in -3.0..3.0f64,
    ) {
        let case = Case::all()[ci];
        let spec = spec_for(case.regime, case.sign, mag);
        let (a, b) = test_window(&spec, case.kind);
        let t = TimeCoord::new(case.kind, a + frac * (b - a));
        let family = StateFamily::Squeezed { x0, p0, r, theta };
        let st = StateSpec { kind: case.kind, family };
        let m = quadrature_moments(&state(&spec, &st, t, &oracle_grid(&spec, &st, t).unwrap()).unwrap()).unwrap();
        let c = observe(&spec, case.kind, &family, t).unwrap();
        let rel = |q: f64, e: f64| (q - e).abs() / e.abs().max(1.0);
        prop_assert!(rel(m.norm, 1.0) < 1e-7);
        prop_assert!(rel(m.x_mean, c.x_mean) < 1e-7);
        prop_assert!(rel(m.p_mean, c.p_mean) < 1e-7);
        prop_assert!(rel(m.x_var, c.x_var) < 1e-7);
        prop_assert!(rel(m.p_var, c.p_var) < 1e-7);
    }

    #[test]
    fn means_at_origin_are_initial_values(x0 in -3.0..3.0f64, p0 in -3.0..3.0f64, mag in 0.5..4.0f64) {
        for kind in SystemKind::ALL {
            let spec = spec_for(Regime::Under, Sign::Pos, mag);
            let p = observe(&spec, kind, &StateFamily::Coherent { x0, p0 }, TimeCoord::new(kind, 0.0)).unwrap();
            prop_assert!((p.x_mean - x0).abs() < 1e-12 && (p.p_mean - p0).abs() < 1e-12);
        }
    }
}
