use approx::assert_abs_diff_eq;
use tanbundle::paperlib::calibration::calibration_battery;
use tanbundle::paperlib::*;

fn report(name: &str) -> Report {
    verify(&example(name).unwrap().build().unwrap()).unwrap()
}

fn record<'a>(r: &'a Report, id: &str) -> &'a CheckRecord {
    r.get(id).unwrap_or_else(|| panic!("missing {id}"))
}

#[test]
fn ex4_1_is_proper_biharmonic() {
    let r = report("ex4_1");
    assert!(r.ok());
    let c = &r.summary.classifications[0];
    assert_eq!(c.result.verdict.to_string(), "proper_biharmonic");
    assert!(c.result.max_bitension < 1e-5);
}

#[test]
fn ex4_1_tension_is_two_over_t() {
    let s = example("ex4_1").unwrap().build().unwrap();
    for p in &s.samples[..3] {
        let f = &map_fields(&s, p).unwrap()[0];
        let t = p.x[0];
        assert_abs_diff_eq!(f.tension[0], 2.0 / t, epsilon = 1e-6);
        assert_abs_diff_eq!(f.tension[1], 0.0, epsilon = 1e-6);
        assert!(f.bitension_norm < 1e-5);
    }
}

#[test]
fn ex4_2_log_ode_holds_but_map_is_not_biharmonic() {
    let r = report("ex4_2");
    assert!(record(&r, "ex4_2.id_alpha.ode").pass);
    assert!(!record(&r, "ex4_2.id_alpha.bitension").pass);
    assert!(r.summary.findings.iter().any(|f| f.topic.contains("sign") || f.outcome.contains("sign")));
}

#[test]
fn ex5_1_bitension_is_one_over_f_cubed() {
    let s = example("ex5_1").unwrap().build().unwrap();
    for p in &s.samples {
        let f = &map_fields(&s, p).unwrap()[0];
        let fx: f64 = s.f.value_at(&p.x).unwrap();
        assert_abs_diff_eq!(f.bitension_norm, fx.powi(-3), epsilon = 1e-6 * fx.powi(-3).max(1.0));
    }
}

#[test]
fn ex5_2_cubic_ode_sides_are_opposite() {
    let s = example("ex5_2").unwrap().build().unwrap();
    for x in [0.5, 1.0, 2.0] {
        let o = cubic_ode_sides(&s.f, 2.0, &[x, 0.0], 0).unwrap();
        let oracle = 32.0 / (2.0 * x + 1.0f64).powi(3);
        assert_abs_diff_eq!(o.lhs.abs(), oracle, epsilon = 1e-9);
        assert_abs_diff_eq!(o.lhs + o.rhs, 0.0, epsilon = 1e-9);
    }
    let r = report("ex5_2");
    assert!(r.ok());
    assert_eq!(r.summary.classifications.len(), 2);
}

#[test]
fn filtered_suite_keeps_prefix() {
    let r = suite(DEFAULT_SEED, Some("lemma41")).unwrap();
    assert!(!r.records.is_empty());
    assert!(r.records.iter().all(|c| c.id.starts_with("lemma41")));
    assert!(r.ok());
}

#[test]
fn calibration_battery_passes() {
    let rs = calibration_battery(1e-5).unwrap();
    assert_eq!(rs.len(), 12);
    assert!(rs.iter().all(|r| r.pass), "{rs:?}");
}
