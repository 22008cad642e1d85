//! One line per acceptance criterion. Exits non-zero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use tanbundle::paperlib::calibration::calibration_battery;
use tanbundle::paperlib::*;
use tanbundle_cli::ReportFile;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn group(r: &Report, prefix: &str) -> Vec<CheckRecord> {
    r.records.iter().filter(|c| c.id.starts_with(prefix)).cloned().collect()
}

fn all_pass(rs: &[CheckRecord]) -> bool {
    !rs.is_empty() && rs.iter().all(|c| c.pass)
}

fn failing(rs: &[CheckRecord]) -> String {
    let bad: Vec<&str> = rs.iter().filter(|c| !c.pass).map(|c| c.id.as_str()).collect();
    if bad.is_empty() {
        String::new()
    } else {
        format!(", failing {}", bad.join(" "))
    }
}

fn record<'a>(r: &'a Report, id: &str) -> Option<&'a CheckRecord> {
    r.get(id)
}

fn run(name: &str) -> (Scenario, Report, Duration) {
    let start = Instant::now();
    let s = example(name).expect("example").build().expect("builds");
    let r = verify(&s).expect("verifies");
    (s, r, start.elapsed())
}

fn calibration() -> Outcome {
    let start = Instant::now();
    let rs = calibration_battery(1e-5).expect("battery");
    let t = start.elapsed();
    let worst = rs.iter().map(|r| r.residual).fold(0.0, f64::max);
    outcome(
        rs.len() == 12 && all_pass(&rs) && t < Duration::from_secs(1),
        format!("{} functions, worst relative error {worst:.2e}, {t:.2?}{}", rs.len(), failing(&rs)),
    )
}

fn sasaki() -> Outcome {
    let start = Instant::now();
    let r = suite(DEFAULT_SEED, Some("sasaki")).expect("suite");
    let t = start.elapsed();
    let rs = group(&r, "sasaki.");
    outcome(
        rs.len() == 10 && all_pass(&rs) && t < Duration::from_secs(10),
        format!("{} Sasaki connection and curvature checks, {t:.2?}{}", rs.len(), failing(&rs)),
    )
}

fn musgrad() -> Outcome {
    let r = suite(DEFAULT_SEED, Some("musgrad")).expect("suite");
    let mut rs = group(&r, "musgrad.collapse.");
    let collapse = rs.len();
    rs.extend(group(&r, "musgrad.connection."));
    outcome(
        collapse == 4 && rs.len() > collapse && all_pass(&rs),
        format!("{collapse} collapse and {} connection checks{}", rs.len() - collapse, failing(&rs)),
    )
}

fn flatness() -> Outcome {
    let r = suite(DEFAULT_SEED, Some("flatness")).expect("suite");
    let rs: Vec<CheckRecord> = ["flatness.constant_f", "flatness.ex4_1"]
        .iter()
        .filter_map(|id| record(&r, id).cloned())
        .collect();
    outcome(
        rs.len() == 2 && all_pass(&rs),
        format!(
            "constant f flat ({:.1e}), ex4_1 non-flat ({:.1e}){}",
            rs.first().map_or(f64::NAN, |c| c.residual),
            rs.get(1).map_or(f64::NAN, |c| c.residual),
            failing(&rs)
        ),
    )
}

fn ex4_1() -> Outcome {
    let (s, r, t) = run("ex4_1");
    let mut worst = 0.0f64;
    for p in &s.samples[..3] {
        let tau = &map_fields(&s, p).expect("fields")[0].tension;
        let t0 = p.x[0];
        worst = worst.max((tau[0] - 2.0 / t0).abs()).max(tau[1].abs());
    }
    let c = &r.summary.classifications[0].result;
    let residual = record(&r, "ex4_1.pi_alpha.residual").map_or(f64::INFINITY, |c| c.residual);
    let verdict = c.verdict.to_string();
    outcome(
        worst <= 1e-6
            && c.max_bitension <= 1e-5
            && residual <= 1e-8
            && verdict == "proper_biharmonic"
            && t < Duration::from_secs(5),
        format!(
            "|τ − (2/t, 0)| {worst:.1e} at t = 1.5, 2, 3; ‖τ₂‖ {:.1e}; residual {residual:.1e}; {verdict}; {t:.2?}",
            c.max_bitension
        ),
    )
}

fn ex4_2() -> Outcome {
    let (s, r, _) = run("ex4_2");
    let ode = [-0.5f64, 0.0, 0.5]
        .iter()
        .map(|&x| log_alpha_ode_residual(&s.f, &[x, 0.0], 0).expect("ode").abs())
        .fold(0.0, f64::max);
    let c = &r.summary.classifications[0].result;
    let sign = r.summary.findings.iter().any(|f| f.topic.contains("sign") || f.outcome.contains("sign"));
    outcome(
        ode <= 1e-9 && c.max_bitension <= 1e-5 && c.max_tension >= 1e-3 && sign,
        format!(
            "ODE residual {ode:.1e} at x = −0.5, 0, 0.5; ‖τ‖ {:.3e}; ‖τ₂‖ {:.3e} (needs ≤ 1e-5); sign finding {sign}; verdict {}",
            c.max_tension, c.max_bitension, c.verdict
        ),
    )
}

fn ex5_1() -> Outcome {
    let (_, r, _) = run("ex5_1");
    let tension = record(&r, "ex5_1.id_f.tension").map_or(f64::INFINITY, |c| c.residual);
    let c = &r.summary.classifications[0].result;
    let verdict = c.verdict.to_string();
    outcome(
        tension <= 1e-6 && c.max_bitension <= 1e-6 && verdict == "proper_biharmonic",
        format!(
            "closed τ vs generic {tension:.1e}; ‖τ₂‖ {:.3e} (needs ≤ 1e-6); verdict {verdict}",
            c.max_bitension
        ),
    )
}

fn ex5_2() -> Outcome {
    let (s, r, _) = run("ex5_2");
    let mut magnitude = 0.0f64;
    let mut oracle = 0.0f64;
    for x in [0.5, 1.0, 2.0] {
        let o = cubic_ode_sides(&s.f, s.dim() as f64, &[x, 0.0], 0).expect("ode");
        let want = 32.0 / (2.0 * x + 1.0f64).powi(3);
        magnitude = magnitude.max((o.lhs.abs() - o.rhs.abs()).abs());
        oracle = oracle.max((o.lhs.abs() - want).abs());
    }
    let directions = r.summary.classifications.len();
    let finding = r.summary.findings.iter().any(|f| f.topic.contains("direction") || f.outcome.contains("direction"));
    outcome(
        magnitude <= 1e-9 && oracle <= 1e-9 && directions == 2 && finding,
        format!(
            "|f‴| − |(m/4)((f′)²)′| {magnitude:.1e}; vs 32/(2x+1)³ {oracle:.1e}; {directions} directions; direction finding {finding}"
        ),
    )
}

fn harmonicity() -> Outcome {
    let r = suite(DEFAULT_SEED, Some("harmonicity")).expect("suite");
    let rs = group(&r, "harmonicity.");
    outcome(all_pass(&rs), format!("{} harmonicity checks{}", rs.len(), failing(&rs)))
}

fn lemma41() -> Outcome {
    let r = suite(DEFAULT_SEED, Some("lemma41")).expect("suite");
    match record(&r, "lemma41.projection") {
        Some(c) => outcome(c.pass, format!("projection residual {:.1e}", c.residual)),
        None => outcome(false, "no projection record"),
    }
}

fn untimed(mut f: ReportFile) -> ReportFile {
    f.metadata.timestamp = 0;
    f
}

fn determinism() -> Outcome {
    let start = Instant::now();
    let a = ReportFile::for_suite(DEFAULT_SEED, None, suite(DEFAULT_SEED, None).expect("suite"));
    let b = ReportFile::for_suite(DEFAULT_SEED, None, suite(DEFAULT_SEED, None).expect("suite"));
    let t = start.elapsed();
    let back = ReportFile::from_json(&a.to_json()).expect("round trip");
    let out = Command::new(env!("CARGO_BIN_EXE_tanbundle"))
        .args(["suite", "--format", "machine"])
        .output()
        .expect("binary runs");
    let binary = ReportFile::from_json(&String::from_utf8_lossy(&out.stdout)).ok();
    let same = untimed(a.clone()) == untimed(b);
    let round = back.summary == a.summary;
    let cli = binary.map(untimed) == Some(untimed(a.clone()));
    outcome(
        same && round && cli && a.summary.checks >= 40 && t < Duration::from_secs(60),
        format!(
            "{} checks; two runs equal {same}; JSON round trip {round}; binary output equal {cli}; {t:.2?} for both runs",
            a.summary.checks
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("jet calibration battery", calibration),
        ("Sasaki connection and curvature", sasaki),
        ("Mus-Gradient connection", musgrad),
        ("flatness of g^f", flatness),
        ("ex4_1 π_α proper biharmonic", ex4_1),
        ("ex4_2 Id_α biharmonic", ex4_2),
        ("ex5_1 Id_f proper biharmonic", ex5_1),
        ("ex5_2 cubic ODE and directions", ex5_2),
        ("harmonicity of π_α and Id_α", harmonicity),
        ("projection lemma", lemma41),
        ("suite determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        println!("{} criterion {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
