use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::bundle::lift::{mus_gradient_metric, mus_sasaki_metric, sasaki_metric};
use crate::bundle::vectors::BundlePoint;
use crate::error::Result;
use crate::geometry::field::ScalarField;
use crate::geometry::metric::MetricField;
use crate::harmonic::classify::{evaluate, Verdict};
use crate::harmonic::map::SmoothMap;
use crate::paperlib::calibration::calibration_battery;
use crate::paperlib::closed::*;
use crate::paperlib::generic::max_curvature;
use crate::paperlib::prims::BasePrims;
use crate::paperlib::report::{CheckRecord, Report};
use crate::paperlib::scenario::*;
use crate::paperlib::verify::*;

pub const DEFAULT_SEED: u64 = 20_240_601;

const SAMPLES: usize = 10;

fn spec(name: &str, metric: &str, coords: &[&str], value: &str, selector: MapSelector) -> ScenarioSpec {
    ScenarioSpec {
        name: name.into(),
        base: BaseSpec {
            dim: Some(coords.len()),
            coordinates: coords.iter().map(|s| s.to_string()).collect(),
            bounds: Vec::new(),
            metric: MetricSpec::Builtin(metric.into()),
        },
        function: FunctionSpec {
            value: Some(value.into()),
            gradient: None,
            constants: BTreeMap::new(),
        },
        map: MapSpec { selector, expect: None },
        samples: SampleSpec {
            points: Vec::new(),
            count: SAMPLES,
            seed: 0,
        },
        tolerances: Tolerances::default(),
        einstein: None,
    }
}

fn sphere(value: &str, seed: u64) -> Result<Scenario> {
    spec("sphere", "sphere", &["theta", "phi"], value, MapSelector::PiAlpha).build_with_seed(seed)
}

fn plane(value: &str, seed: u64) -> Result<Scenario> {
    spec("plane", "euclidean", &["x1", "x2"], value, MapSelector::PiAlpha).build_with_seed(seed)
}

fn ctx<'a>(s: &'a Scenario, lifted: MetricField, f: Option<&'a ScalarField>) -> LiftContext<'a> {
    LiftContext {
        lifted,
        base: &s.base,
        f,
        samples: &s.samples,
        seed: s.seed,
    }
}

fn sasaki_group(seed: u64, rep: &mut Report) -> Result<()> {
    let s = sphere("0", seed)?;
    let tol = s.tolerances();
    let c = ctx(&s, sasaki_metric(&s.base), None);
    for (k, case) in ConnCase::ALL.into_iter().enumerate() {
        rep.push(c.connection(
            format!("sasaki.connection.{}", case.name()),
            sasaki_connection_anchor(case),
            tol.connection,
            case,
            k as u64,
            |b, p, x, y| sasaki_connection_closed(case, b, p, x, y),
        )?);
    }
    for (k, case) in CurvCase::SASAKI.into_iter().enumerate() {
        rep.push(c.curvature(
            format!("sasaki.curvature.{}", case.name()),
            sasaki_curvature_anchor(case),
            tol.curvature,
            case,
            false,
            10 + k as u64,
            |b, p, x, y, z| sasaki_curvature_closed(case, b, p, x, y, z),
        )?);
    }
    Ok(())
}

fn worst_curvature(id: &str, anchor: &str, metric: &MetricField, samples: &[BundlePoint<f64>]) -> Result<CheckRecord> {
    worst_by(
        id.into(),
        anchor,
        0.0,
        samples.len(),
        |i| {
            let c = samples[i].coords();
            let r = max_curvature(metric, &c)?;
            Ok(Sampled::new(c, Vec::new(), vec![r]))
        },
        |x| x.generic[0],
    )
}

fn with_tol(r: CheckRecord, tol: f64, at_least: bool) -> CheckRecord {
    let r = CheckRecord {
        tolerance: tol,
        pass: r.residual <= tol,
        ..r
    };
    if at_least {
        r.at_least()
    } else {
        r
    }
}

fn flatness_group(seed: u64, rep: &mut Report) -> Result<()> {
    let tol = Tolerances::default();
    let s = plane("0", seed)?;
    rep.push(with_tol(
        worst_curvature("flatness.sasaki_flat_base", "R̂ = 0 over a flat base", &sasaki_metric(&s.base), &s.samples)?,
        tol.flat,
        false,
    ));
    let s = plane("3", seed)?;
    rep.push(with_tol(
        worst_curvature(
            "flatness.constant_f",
            "max|R^f| = 0 for constant f",
            &mus_gradient_metric(&s.base, &s.f),
            &s.samples,
        )?,
        tol.flat,
        false,
    ));
    let e = example("ex4_1")?.build_with_seed(seed)?;
    rep.push(with_tol(
        worst_curvature(
            "flatness.ex4_1",
            "max|R^f| > 0 for grad f = (√(t⁴−1), 0)",
            &mus_gradient_metric(&e.base, &e.f),
            &e.samples,
        )?,
        tol.nonflat,
        true,
    ));
    let s = plane("x1 + 2*x2", seed)?;
    let r = with_tol(
        worst_curvature(
            "flatness.linear_f",
            "(TM,g^f) is flat only if f is constant",
            &mus_gradient_metric(&s.base, &s.f),
            &s.samples,
        )?,
        tol.nonflat,
        true,
    )
    .advisory();
    let outcome = if r.pass {
        "g^f is not flat for linear f".to_string()
    } else {
        format!("g^f is flat for the non-constant linear f = x1 + 2·x2 (max|R^f| = {:.1e})", r.residual)
    };
    rep.push(r);
    rep.finding("flatness of g^f over a flat base", outcome);
    Ok(())
}

fn musgrad_group(seed: u64, rep: &mut Report) -> Result<()> {
    let s = sphere("3", seed)?;
    let tol = s.tolerances();
    for case in ConnCase::ALL {
        rep.push(worst(
            format!("musgrad.collapse.{}", case.name()),
            "∇^f = ∇̂ for constant f",
            1e-12,
            s.samples.len(),
            |i| {
                let p = &s.samples[i];
                let v = random_vectors(s.seed, 50, i, 2, s.dim());
                let b = BasePrims::new(&s.base, Some(&s.f), &p.x)?;
                let mg = musgrad_connection_closed(case, &b, p, &v[0], &v[1])?.lift(&b, p);
                let sa = sasaki_connection_closed(case, &b, p, &v[0], &v[1])?.lift(&b, p);
                Ok(Sampled::new(p.coords(), mg.components, sa.components))
            },
        )?);
    }
    for (base, s) in [
        ("euclidean", plane("x1^2*x2 + sin(x1)", seed)?),
        ("sphere", sphere("theta", seed)?),
    ] {
        let c = ctx(&s, mus_gradient_metric(&s.base, &s.f), Some(&s.f));
        for (k, case) in ConnCase::ALL.into_iter().enumerate() {
            rep.push(c.connection(
                format!("musgrad.connection.{base}.{}", case.name()),
                musgrad_connection_anchor(case),
                tol.connection,
                case,
                60 + k as u64,
                |b, p, x, y| musgrad_connection_closed(case, b, p, x, y),
            )?);
        }
    }
    let s = plane("x1^2*x2 + sin(x1)", seed)?;
    let c = ctx(&s, mus_gradient_metric(&s.base, &s.f), Some(&s.f));
    let mut sub = Report::new();
    musgrad_flat_curvature_checks("plane", &c, tol, &mut sub)?;
    for r in sub.records {
        rep.push(CheckRecord {
            id: r.id.trim_start_matches("plane.").to_string(),
            ..r
        });
    }
    rep.summary.findings.extend(sub.summary.findings);
    Ok(())
}

fn mus_sasaki_group(seed: u64, rep: &mut Report) -> Result<()> {
    let s = plane("2 + x1^2 + sin(x2)", seed)?;
    let f = s.f.clone().positive();
    let c = LiftContext {
        lifted: mus_sasaki_metric(&s.base, &f)?,
        base: &s.base,
        f: Some(&f),
        samples: &s.samples,
        seed: s.seed,
    };
    let mut sub = Report::new();
    mus_sasaki_checks("plane", &c, s.tolerances(), &mut sub)?;
    for r in sub.records {
        rep.push(CheckRecord {
            id: r.id.trim_start_matches("plane.").to_string(),
            ..r
        });
    }
    rep.summary.findings.extend(sub.summary.findings);
    Ok(())
}

fn projection_group(seed: u64, rep: &mut Report) -> Result<()> {
    let s = sphere("0", seed)?;
    let map = SmoothMap::projection(sasaki_metric(&s.base), s.base.clone())?;
    rep.push(worst_by(
        "lemma41.projection".into(),
        "π:(TM,ĝ)→(M,g) is harmonic",
        1e-7,
        s.samples.len(),
        |i| {
            let e = evaluate(&map, &s.samples[i].coords())?;
            Ok(Sampled::new(e.point, Vec::new(), e.tension))
        },
        |x| crate::geometry::linalg::norm(&x.generic),
    )?);
    Ok(())
}

fn tension_norms(map: &SmoothMap, samples: &[BundlePoint<f64>]) -> Result<Vec<(Vec<f64>, f64)>> {
    samples
        .par_iter()
        .map(|p| {
            let e = evaluate(map, &p.coords())?;
            Ok((e.point, e.tension_norm))
        })
        .collect()
}

fn harmonicity_group(seed: u64, rep: &mut Report) -> Result<()> {
    let tol = Tolerances::default();
    for (label, value, harmonic) in [("linear_f", "x1 + 2*x2", true), ("square_f", "x1^2", false)] {
        let mut s = spec(label, "euclidean", &["x1", "x2"], value, MapSelector::PiAlpha);
        // keep grad α away from zero for x1²
        s.base.bounds = vec![Bound::new(Some(0.5), Some(2.5)), Bound::default()];
        let s = s.build_with_seed(seed)?;
        let g = mus_gradient_metric(&s.base, &s.f);
        let maps = [
            ("pi_alpha", SmoothMap::projection(g.clone(), s.base.clone())?),
            ("id_alpha", SmoothMap::identity(g, sasaki_metric(&s.base))?),
        ];
        for (name, map) in maps {
            let norms = tension_norms(&map, &s.samples)?;
            let id = format!("harmonicity.{label}.{name}");
            let r = if harmonic {
                let (p, n) = norms.iter().fold((vec![], 0.0), |b, (p, n)| if *n >= b.1 { (p.clone(), *n) } else { b });
                CheckRecord::new(id, "‖grad f‖ constant ⇒ τ = 0", n, tol.flat).at(&p)
            } else {
                let (p, n) = norms
                    .iter()
                    .fold((vec![], f64::INFINITY), |b, (p, n)| if *n <= b.1 { (p.clone(), *n) } else { b });
                CheckRecord::new(id, "‖grad f‖ not constant ⇒ τ ≠ 0", n, tol.nonzero).at(&p).at_least()
            };
            rep.push(r);
        }
    }
    Ok(())
}

fn extra_pi_alpha(seed: u64) -> Result<Vec<Scenario>> {
    let mut q = spec("pi_alpha_quadratic", "euclidean", &["x1", "x2"], "x1^2 + x1*x2/2", MapSelector::PiAlpha);
    q.map.expect = Some(Verdict::Neither);
    let mut sph = spec("pi_alpha_sphere", "sphere", &["theta", "phi"], "cos(theta)", MapSelector::PiAlpha);
    sph.samples.count = 6;
    Ok(vec![q.build_with_seed(seed)?, sph.build_with_seed(seed)?])
}

type Group = (&'static str, fn(u64, &mut Report) -> Result<()>);

const GROUPS: [Group; 7] = [
    ("jets", |_, rep| {
        for r in calibration_battery(1e-5)? {
            rep.push(r);
        }
        Ok(())
    }),
    ("sasaki", sasaki_group),
    ("flatness", flatness_group),
    ("musgrad", musgrad_group),
    ("mussasaki", mus_sasaki_group),
    ("lemma41", projection_group),
    ("harmonicity", harmonicity_group),
];

fn relevant(group: &str, filter: Option<&str>) -> bool {
    match filter {
        None => true,
        Some(f) => group.starts_with(f) || f.starts_with(group),
    }
}

/// Every builtin check with one seed; with a filter, only records whose id
/// starts with it.
pub fn suite(seed: u64, filter: Option<&str>) -> Result<Report> {
    let mut rep = Report::new();
    for (name, group) in GROUPS {
        if relevant(name, filter) {
            group(seed, &mut rep)?;
        }
    }
    let mut scenarios = Vec::new();
    for name in EXAMPLES {
        if relevant(name, filter) {
            scenarios.push(example(name)?.build_with_seed(seed)?);
        }
    }
    if relevant("pi_alpha_", filter) {
        scenarios.extend(extra_pi_alpha(seed)?);
    }
    let reports: Vec<Report> = scenarios.par_iter().map(verify).collect::<Result<_>>()?;
    for r in reports {
        rep.merge(r);
    }
    if let Some(f) = filter {
        rep.records.retain(|r| r.id.starts_with(f));
    }
    rep.recount();
    Ok(rep)
}
