use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::bundle::lift::{mus_gradient_metric, mus_sasaki_metric, sasaki_metric};
use crate::bundle::vectors::{BundlePoint, LiftedVector};
use crate::error::{Error, Result};
use crate::geometry::field::ScalarField;
use crate::geometry::linalg::norm;
use crate::geometry::metric::MetricField;
use crate::harmonic::classify::{evaluate, verdict_for, MapClassification, MapEvaluation, Verdict};
use crate::harmonic::map::SmoothMap;
use crate::paperlib::closed::*;
use crate::paperlib::generic::{lifted_connection, lifted_curvature, max_curvature};
use crate::paperlib::maps::*;
use crate::paperlib::prims::BasePrims;
use crate::paperlib::report::{CheckRecord, Report};
use crate::paperlib::scenario::{MapSelector, Scenario, Tolerances};

fn mix(seed: u64, stream: u64, i: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ stream.wrapping_mul(0xBF58_476D_1CE4_E5B9)
        ^ (i as u64).wrapping_mul(0x94D0_49BB_1331_11EB)
}

/// `count` standard normal vectors of length `m`, fixed by `(seed, stream, i)`.
pub fn random_vectors(seed: u64, stream: u64, i: usize, count: usize, m: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, stream, i));
    (0..count)
        .map(|_| (0..m).map(|_| StandardNormal.sample(&mut rng)).collect())
        .collect()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// One evaluation at a sample: the closed and generic values compared.
pub struct Sampled {
    pub point: Vec<f64>,
    pub closed: Vec<f64>,
    pub generic: Vec<f64>,
}

impl Sampled {
    pub fn new(point: Vec<f64>, closed: Vec<f64>, generic: Vec<f64>) -> Self {
        Sampled { point, closed, generic }
    }
}

/// Worst-case record over samples, in parallel and in sample order.
pub fn worst<F>(id: String, anchor: &str, tol: f64, n: usize, eval: F) -> Result<CheckRecord>
where
    F: Fn(usize) -> Result<Sampled> + Sync,
{
    worst_by(id, anchor, tol, n, eval, |s| max_diff(&s.closed, &s.generic))
}

pub fn worst_by<F, M>(id: String, anchor: &str, tol: f64, n: usize, eval: F, metric: M) -> Result<CheckRecord>
where
    F: Fn(usize) -> Result<Sampled> + Sync,
    M: Fn(&Sampled) -> f64,
{
    let all: Vec<Sampled> = (0..n).into_par_iter().map(&eval).collect::<Result<_>>()?;
    let mut best: Option<(f64, &Sampled)> = None;
    for s in &all {
        let r = metric(s);
        let r = if r.is_nan() { f64::INFINITY } else { r };
        if best.is_none_or(|(b, _)| r > b) {
            best = Some((r, s));
        }
    }
    let (r, s) = best.ok_or_else(|| Error::Scenario("no samples".into()))?;
    Ok(CheckRecord::new(id, anchor, r, tol)
        .at(&s.point)
        .values(s.closed.clone(), s.generic.clone()))
}

/// A lifted metric together with what its closed forms need.
pub struct LiftContext<'a> {
    pub lifted: MetricField,
    pub base: &'a MetricField,
    pub f: Option<&'a ScalarField>,
    pub samples: &'a [BundlePoint<f64>],
    pub seed: u64,
}

impl LiftContext<'_> {
    fn prims(&self, p: &BundlePoint<f64>) -> Result<BasePrims<f64>> {
        BasePrims::new(self.base, self.f, &p.x)
    }

    /// Connection closed form vs generic, worst over samples.
    pub fn connection<C>(&self, id: String, anchor: &str, tol: f64, case: ConnCase, stream: u64, closed: C) -> Result<CheckRecord>
    where
        C: Fn(&BasePrims<f64>, &BundlePoint<f64>, &[f64], &[f64]) -> Result<Split<f64>> + Sync,
    {
        let m = self.base.dim();
        worst(id, anchor, tol, self.samples.len(), |i| {
            let p = &self.samples[i];
            let v = random_vectors(self.seed, stream, i, 2, m);
            let b = self.prims(p)?;
            let cl = closed(&b, p, &v[0], &v[1])?.lift(&b, p);
            let (ka, kb) = case.kinds();
            let ge = lifted_connection(&self.lifted, p, (ka, &v[0]), (kb, &v[1]))?;
            Ok(Sampled::new(p.coords(), cl.components, ge.components))
        })
    }

    /// Curvature closed form vs generic at `(X,Y,Z)`, or `(X,Y,Y)` when
    /// `repeat` is set.
    #[allow(clippy::too_many_arguments)]
    pub fn curvature<C>(
        &self,
        id: String,
        anchor: &str,
        tol: f64,
        case: CurvCase,
        repeat: bool,
        stream: u64,
        closed: C,
    ) -> Result<CheckRecord>
    where
        C: Fn(&BasePrims<f64>, &BundlePoint<f64>, &[f64], &[f64], &[f64]) -> Result<Split<f64>> + Sync,
    {
        let m = self.base.dim();
        worst(id, anchor, tol, self.samples.len(), |i| {
            let p = &self.samples[i];
            let mut v = random_vectors(self.seed, stream, i, 3, m);
            if repeat {
                v[2] = v[1].clone();
            }
            let b = self.prims(p)?;
            let cl = closed(&b, p, &v[0], &v[1], &v[2])?.lift(&b, p);
            let (ka, kb, kc) = case.kinds();
            let ge = lifted_curvature(&self.lifted, p, (ka, &v[0]), (kb, &v[1]), (kc, &v[2]))?;
            Ok(Sampled::new(p.coords(), cl.components, ge.components))
        })
    }
}

pub fn sasaki_connection_anchor(case: ConnCase) -> &'static str {
    match case {
        ConnCase::HH => "∇̂_{X^H}Y^H = (∇_XY)^H − ½(R(X,Y)u)^V",
        ConnCase::HV => "∇̂_{X^H}Y^V = (∇_XY)^V + ½(R(u,Y)X)^H",
        ConnCase::VH => "∇̂_{X^V}Y^H = ½(R(u,X)Y)^H",
        ConnCase::VV => "∇̂_{X^V}Y^V = 0",
    }
}

pub fn sasaki_curvature_anchor(case: CurvCase) -> &'static str {
    match case {
        CurvCase::VVV => "R̂(X^V,Y^V)Z^V = 0",
        CurvCase::VVH => "R̂(X^V,Y^V)Z^H = [R(X,Y)Z + ¼R(u,X)R(u,Y)Z − ¼R(u,Y)R(u,X)Z]^H",
        CurvCase::HVV => "R̂(X^H,Y^V)Z^V = −[½R(Y,Z)X + ¼R(u,Y)R(u,Z)X]^H",
        CurvCase::HVH => "R̂(X^H,Y^V)Z^H = [¼R(R(u,Y)Z,X)u + ½R(X,Z)Y]^V + ½[(∇_XR)(u,Y)Z]^H",
        CurvCase::HHV => {
            "R̂(X^H,Y^H)Z^V = [R(X,Y)Z + ¼R(R(u,Z)Y,X)u − ¼R(R(u,Z)X,Y)u]^V + ½[(∇_XR)(u,Z)Y − (∇_YR)(u,Z)X]^H"
        }
        CurvCase::HHH => {
            "R̂(X^H,Y^H)Z^H = ½[(∇_ZR)(X,Y)u]^V + [R(X,Y)Z + ¼R(u,R(Z,Y)u)X + ¼R(u,R(X,Z)u)Y + ½R(u,R(X,Y)u)Z]^H"
        }
        CurvCase::VHH => "",
    }
}

pub fn musgrad_connection_anchor(case: ConnCase) -> &'static str {
    match case {
        ConnCase::HH => "∇^f_{X^H}Y^H = (∇_XY)^H − ½(R(X,Y)u)^V",
        ConnCase::HV => {
            "∇^f_{X^H}Y^V = ½(R(u,Y)X)^H + ½Y(f)(R(u,grad f)X)^H + ½Y(f)(∇_X grad f)^V + (∇_XY)^V + (1/2α)[g(Y,∇_X grad f) − ½X(α)Y(f)](grad f)^V"
        }
        ConnCase::VH => {
            "∇^f_{X^V}Y^H = ½(R(u,X)Y)^H + ½X(f)(R(u,grad f)Y)^H + ½X(f)(∇_Y grad f)^V + (1/2α)[g(X,∇_Y grad f) − ½Y(α)X(f)](grad f)^V"
        }
        ConnCase::VV => "∇^f_{X^V}Y^V = −½X(f)(∇_Y grad f)^H − ½Y(f)(∇_X grad f)^H",
    }
}

pub fn musgrad_curvature_anchor(case: CurvCase) -> &'static str {
    match case {
        CurvCase::HHH => "R^f(X^H,Y^H)Y^H = 0 (flat base)",
        CurvCase::HVV => "R^f(X^H,Y^V)Y^V = −Y(f)(∇_X∇_Y grad f)^H + ¼Y(f)²(∇_{∇_X grad f}grad f)^H + … (flat base)",
        CurvCase::VHH => "−R^f(X^V,Y^H)Y^H = ½X(f)(∇_Y∇_Y grad f)^V + … − (1/8α²)X(f)Y(α)²(grad f)^V − … (flat base)",
        CurvCase::VVV => {
            "R^f(X^V,Y^V)Y^V = (1/8α)g(∇_{X(f)Y−Y(f)X}grad f, Y(f)grad α + 2∇_Y grad f)(grad f)^V + ¼Y(f)(∇_{∇_{Y(f)X−X(f)Y}grad f}grad f)^V (flat base)"
        }
        _ => "",
    }
}

pub fn mus_sasaki_connection_anchor(case: ConnCase) -> &'static str {
    match case {
        ConnCase::HH => "∇̃_{X^H}Y^H = (∇_XY)^H (flat base)",
        ConnCase::HV => "∇̃_{X^H}Y^V = (∇_XY)^V + ½X(f)Y^V (flat base)",
        ConnCase::VH => "∇̃_{X^V}Y^H = ½Y(f)X^V (flat base)",
        ConnCase::VV => "∇̃_{X^V}Y^V = −½g(X,Y)(grad f)^H (flat base)",
    }
}

/// Connection and curvature checks of `g^f` (any base) and, on a flat base,
/// of the flat-base curvature forms and of `g̃` when `f` is positive.
pub fn lifted_checks(prefix: &str, s: &Scenario, rep: &mut Report) -> Result<()> {
    let tol = s.tolerances();
    let ctx = LiftContext {
        lifted: mus_gradient_metric(&s.base, &s.f),
        base: &s.base,
        f: Some(&s.f),
        samples: &s.samples,
        seed: s.seed,
    };
    for (k, case) in ConnCase::ALL.into_iter().enumerate() {
        rep.push(ctx.connection(
            format!("{prefix}.musgrad.connection.{}", case.name()),
            musgrad_connection_anchor(case),
            tol.connection,
            case,
            10 + k as u64,
            |b, p, x, y| musgrad_connection_closed(case, b, p, x, y),
        )?);
    }
    if s.base.is_constant() {
        musgrad_flat_curvature_checks(prefix, &ctx, tol, rep)?;
        if s.f.is_positive() {
            let ms = LiftContext {
                lifted: mus_sasaki_metric(&s.base, &s.f)?,
                ..ctx
            };
            mus_sasaki_checks(prefix, &ms, tol, rep)?;
        }
    }
    flatness_check(prefix, s, rep)
}

pub fn musgrad_flat_curvature_checks(prefix: &str, ctx: &LiftContext, tol: &Tolerances, rep: &mut Report) -> Result<()> {
    for (k, case) in CurvCase::MUSGRAD_FLAT.into_iter().enumerate() {
        let variants: &[MusGradVariant] = if case == CurvCase::VHH {
            &[MusGradVariant::Printed, MusGradVariant::SignCorrected]
        } else {
            &[MusGradVariant::Printed]
        };
        for &v in variants {
            let id = if variants.len() > 1 {
                format!("{prefix}.musgrad.flat_curvature.{}.{}", case.name(), v.name())
            } else {
                format!("{prefix}.musgrad.flat_curvature.{}", case.name())
            };
            let mut anchor = musgrad_curvature_anchor(case).to_string();
            if v == MusGradVariant::SignCorrected {
                anchor = anchor.replace("− (1/8α²)X(f)Y(α)²", "+ (1/8α²)X(f)Y(α)²");
            }
            let r = ctx.curvature(id, &anchor, tol.curvature, case, true, 20 + k as u64, |b, p, x, y, _| {
                musgrad_curvature_flat_variant(case, v, b, p, x, y)
            })?;
            let r = if v == MusGradVariant::Printed && variants.len() > 1 {
                r.advisory().note("reading as printed")
            } else {
                r
            };
            rep.push(r);
        }
    }
    if let (Some(p), Some(c)) = (
        rep.get(&format!("{prefix}.musgrad.flat_curvature.VHH.printed")).map(|r| r.pass),
        rep.get(&format!("{prefix}.musgrad.flat_curvature.VHH.sign_corrected")).map(|r| r.pass),
    ) {
        rep.finding(
            "R^f(X^V,Y^H)Y^H over a flat base",
            match (p, c) {
                (true, _) => "the printed formula matches the generic curvature",
                (false, true) => "the printed formula does not match; it matches with +X(f)Y(α)²/8α² in place of −X(f)Y(α)²/8α²",
                (false, false) => "neither the printed formula nor the sign-corrected reading matches",
            },
        );
    }
    Ok(())
}

pub fn mus_sasaki_checks(prefix: &str, ctx: &LiftContext, tol: &Tolerances, rep: &mut Report) -> Result<()> {
    let variants = [MusSasakiVariant::Printed, MusSasakiVariant::Rescaled];
    let mut outcome = Vec::new();
    for (k, case) in ConnCase::ALL.into_iter().enumerate() {
        let split = matches!(case, ConnCase::HV | ConnCase::VH);
        for v in variants {
            if !split && v == MusSasakiVariant::Rescaled {
                continue;
            }
            let id = if split {
                format!("{prefix}.mussasaki.connection.{}.{}", case.name(), v.name())
            } else {
                format!("{prefix}.mussasaki.connection.{}", case.name())
            };
            let mut anchor = mus_sasaki_connection_anchor(case).to_string();
            if v == MusSasakiVariant::Rescaled {
                anchor = anchor.replace("½X(f)", "(1/2f)X(f)").replace("½Y(f)", "(1/2f)Y(f)");
            }
            let r = ctx.connection(id, &anchor, tol.connection, case, 30 + k as u64, |b, p, x, y| {
                mus_sasaki_connection_flat_closed(case, v, b, p, x, y)
            })?;
            if split {
                outcome.push((format!("{} {}", case.name(), v.name()), r.pass));
            }
            rep.push(if split && v == MusSasakiVariant::Printed { r.advisory() } else { r });
        }
    }
    rep.push(ctx.curvature(
        format!("{prefix}.mussasaki.curvature.HHH"),
        "R̃(X^H,Y^H)Y^H = 0 (flat base)",
        tol.curvature,
        CurvCase::HHH,
        true,
        40,
        |b, p, x, y, _| mus_sasaki_curvature_flat_closed(CurvCase::HHH, MusSasakiVariant::Printed, b, p, x, y),
    )?);
    for v in variants {
        let anchor = match v {
            MusSasakiVariant::Printed => "R̃(X^H,Y^V)Y^V = −½‖Y‖²(∇_X grad f)^H + (1/4f)‖Y‖X(f)(grad f)^H (flat base)",
            MusSasakiVariant::Rescaled => "R̃(X^H,Y^V)Y^V = −½‖Y‖²(∇_X grad f)^H + (1/4f)‖Y‖²X(f)(grad f)^H (flat base)",
        };
        let r = ctx.curvature(
            format!("{prefix}.mussasaki.curvature.HVV.{}", v.name()),
            anchor,
            tol.curvature,
            CurvCase::HVV,
            true,
            41,
            |b, p, x, y, _| mus_sasaki_curvature_flat_closed(CurvCase::HVV, v, b, p, x, y),
        )?;
        outcome.push((format!("HVV {}", v.name()), r.pass));
        rep.push(if v == MusSasakiVariant::Printed { r.advisory() } else { r });
    }
    let matched: Vec<&str> = outcome.iter().filter(|(_, p)| *p).map(|(n, _)| n.as_str()).collect();
    rep.finding(
        "Mus-Sasaki connection and curvature over a flat base",
        format!("readings matching the generic engine: {}", if matched.is_empty() { "none".into() } else { matched.join(", ") }),
    );
    Ok(())
}

fn flatness_check(prefix: &str, s: &Scenario, rep: &mut Report) -> Result<()> {
    if !s.base.is_constant() {
        return Ok(());
    }
    let tol = s.tolerances();
    let lifted = mus_gradient_metric(&s.base, &s.f);
    let rec = worst_by(
        format!("{prefix}.flatness"),
        "",
        0.0,
        s.samples.len(),
        |i| {
            let c = s.samples[i].coords();
            let r = max_curvature(&lifted, &c)?;
            Ok(Sampled::new(c, Vec::new(), vec![r]))
        },
        |x| x.generic[0],
    )?;
    let rec = if s.f.is_constant() {
        CheckRecord {
            anchor: "(TM,g^f) is flat for constant f over a flat base".into(),
            tolerance: tol.flat,
            pass: rec.residual <= tol.flat,
            ..rec
        }
    } else {
        let r = CheckRecord {
            anchor: "(TM,g^f) is flat only if f is constant (flat base)".into(),
            tolerance: tol.nonflat,
            ..rec
        }
        .at_least();
        if r.pass {
            r
        } else {
            r.advisory().note("g^f is flat here although f is not constant")
        }
    };
    rep.push(rec);
    Ok(())
}

fn evaluations(map: &SmoothMap, points: &[Vec<f64>]) -> Result<Vec<MapEvaluation>> {
    points.par_iter().map(|p| evaluate(map, p)).collect()
}

fn classification_of(evals: &[MapEvaluation], tol: &Tolerances) -> MapClassification {
    let max_tension = evals.iter().map(|e| e.tension_norm).fold(0.0, f64::max);
    let max_bitension = evals.iter().map(|e| e.bitension_norm).fold(0.0, f64::max);
    MapClassification {
        verdict: verdict_for(max_tension, max_bitension, tol.harmonic, tol.biharmonic),
        max_tension,
        max_bitension,
        tol_harmonic: tol.harmonic,
        tol_biharmonic: tol.biharmonic,
        samples: evals.len(),
    }
}

fn argmax(evals: &[MapEvaluation], key: impl Fn(&MapEvaluation) -> f64) -> &MapEvaluation {
    evals
        .iter()
        .fold(None::<&MapEvaluation>, |b, e| match b {
            Some(b) if key(b) >= key(e) => Some(b),
            _ => Some(e),
        })
        .expect("non-empty")
}

/// Records each expectation implied by the claimed verdict.
fn expectation_checks(prefix: &str, claim: Option<Verdict>, evals: &[MapEvaluation], tol: &Tolerances, rep: &mut Report) {
    let Some(v) = claim else { return };
    let t = argmax(evals, |e| e.tension_norm);
    let b = argmax(evals, |e| e.bitension_norm);
    let tension = |tol: f64| {
        CheckRecord::new(format!("{prefix}.expect.tension"), "", t.tension_norm, tol)
            .at(&t.point)
            .values(Vec::new(), t.tension.clone())
    };
    let bitension = |tol: f64| {
        CheckRecord::new(format!("{prefix}.expect.bitension"), "", b.bitension_norm, tol)
            .at(&b.point)
            .values(Vec::new(), b.bitension.clone())
    };
    match v {
        Verdict::Harmonic => rep.push(CheckRecord {
            anchor: "harmonic: ‖τ‖ vanishes".into(),
            ..tension(tol.harmonic)
        }),
        Verdict::ProperBiharmonic => {
            rep.push(
                CheckRecord {
                    anchor: "proper biharmonic: ‖τ‖ bounded away from 0".into(),
                    ..tension(tol.nonzero)
                }
                .at_least(),
            );
            rep.push(CheckRecord {
                anchor: "proper biharmonic: ‖τ₂‖ vanishes".into(),
                ..bitension(tol.biharmonic)
            });
        }
        Verdict::Neither => rep.push(
            CheckRecord {
                anchor: "not biharmonic: ‖τ₂‖ bounded away from 0".into(),
                ..bitension(tol.biharmonic)
            }
            .at_least(),
        ),
    }
}

/// Runs every comparison that applies to the scenario.
pub fn verify(s: &Scenario) -> Result<Report> {
    let mut rep = Report::new();
    let prefix = s.name().to_string();
    lifted_checks(&prefix, s, &mut rep)?;
    match s.selector() {
        MapSelector::PiAlpha => pi_alpha_checks(&prefix, s, &mut rep)?,
        MapSelector::IdAlpha => id_alpha_checks(&prefix, s, &mut rep)?,
        MapSelector::IdF => id_f_checks(&prefix, s, &mut rep)?,
        MapSelector::IdHatF => id_hat_f_checks(&prefix, s, &mut rep)?,
    }
    for f in &mut rep.summary.findings {
        f.topic = format!("{prefix}: {}", f.topic);
    }
    rep.recount();
    Ok(rep)
}

fn require_flat(s: &Scenario) -> Result<()> {
    if s.base.is_constant() {
        Ok(())
    } else {
        Err(Error::Hypothesis(format!(
            "{} needs a flat base with constant metric coefficients",
            s.selector().name()
        )))
    }
}

fn lifted_split(sp: &Split<f64>, b: &BasePrims<f64>, p: &BundlePoint<f64>) -> LiftedVector<f64> {
    sp.lift(b, p)
}

fn pi_alpha_checks(prefix: &str, s: &Scenario, rep: &mut Report) -> Result<()> {
    let tol = s.tolerances();
    let pre = format!("{prefix}.pi_alpha");
    let n = s.samples.len();
    let map = SmoothMap::projection(mus_gradient_metric(&s.base, &s.f), s.base.clone())?;
    let points: Vec<Vec<f64>> = s.samples.iter().map(BundlePoint::coords).collect();
    let evals = evaluations(&map, &points)?;
    let prims: Vec<BasePrims<f64>> = s
        .samples
        .par_iter()
        .map(|p| BasePrims::new(&s.base, Some(&s.f), &p.x))
        .collect::<Result<_>>()?;
    rep.push(worst(
        format!("{pre}.tension.forms"),
        "(1/α)∇_{grad f}grad f = grad α/2α",
        tol.identity,
        n,
        |i| {
            let (a, b) = tension_pi_alpha_closed(&prims[i]);
            Ok(Sampled::new(points[i].clone(), a, b))
        },
    )?);
    rep.push(worst(
        format!("{pre}.tension"),
        "τ(π_α) = grad α/2α",
        tol.connection,
        n,
        |i| Ok(Sampled::new(points[i].clone(), tension_pi_alpha_closed(&prims[i]).1, evals[i].tension.clone())),
    )?);
    let residuals: Vec<Vec<f64>> = s
        .samples
        .par_iter()
        .map(|p| biharm_residual_pi_alpha(&s.f, &s.base, &p.x))
        .collect::<Result<_>>()?;
    rep.push(worst(
        format!("{pre}.bitension.residual"),
        "τ₂(π_α) = −[Ricci(grad ln α) + ½grad(Δ ln α) + ⅛grad(‖grad ln α‖²)]",
        tol.curvature,
        n,
        |i| {
            let neg: Vec<f64> = residuals[i].iter().map(|r| -r).collect();
            Ok(Sampled::new(points[i].clone(), neg, evals[i].bitension.clone()))
        },
    )?);
    let claim = s.expect();
    let biharmonic_claim = matches!(claim, Some(Verdict::ProperBiharmonic | Verdict::Harmonic));
    rep.push(
        worst_by(
            format!("{pre}.residual"),
            "Ricci(grad ln α) + ½grad(Δ ln α) + ⅛grad(‖grad ln α‖²) = 0",
            tol.residual,
            n,
            |i| Ok(Sampled::new(points[i].clone(), residuals[i].clone(), Vec::new())),
            |x| norm(&x.closed),
        )?
        .gating(biharmonic_claim),
    );
    if let Some(e) = s.spec.einstein {
        rep.push(
            worst_by(
                format!("{pre}.einstein_residual"),
                "λ ln α + ½Δ ln α + ⅛‖grad ln α‖² is constant",
                tol.ode,
                n,
                |i| {
                    let r = einstein_residual(&s.f, &s.base, e.lambda, &s.samples[i].x)?;
                    Ok(Sampled::new(s.samples[i].x.clone(), vec![r], Vec::new()))
                },
                |x| x.closed[0],
            )?
            .gating(biharmonic_claim),
        );
    }
    expectation_checks(&pre, claim, &evals, tol, rep);
    rep.classification("pi_alpha", classification_of(&evals, tol));
    Ok(())
}

fn id_alpha_checks(prefix: &str, s: &Scenario, rep: &mut Report) -> Result<()> {
    require_flat(s)?;
    let tol = s.tolerances();
    let pre = format!("{prefix}.id_alpha");
    let n = s.samples.len();
    let map = SmoothMap::identity(mus_gradient_metric(&s.base, &s.f), sasaki_metric(&s.base))?;
    let points: Vec<Vec<f64>> = s.samples.iter().map(BundlePoint::coords).collect();
    let evals = evaluations(&map, &points)?;
    let prims: Vec<BasePrims<f64>> = s
        .samples
        .par_iter()
        .map(|p| BasePrims::new(&s.base, Some(&s.f), &p.x))
        .collect::<Result<_>>()?;
    let closed: Vec<(LiftedVector<f64>, LiftedVector<f64>)> = (0..n)
        .map(|i| {
            let (a, b) = tension_id_alpha_closed(&prims[i])?;
            Ok((
                lifted_split(&a, &prims[i], &s.samples[i]),
                lifted_split(&b, &prims[i], &s.samples[i]),
            ))
        })
        .collect::<Result<_>>()?;
    let stated = worst(
        format!("{pre}.tension.stated"),
        "τ(Id_α) = +‖grad f‖/(1+‖grad f‖²)(grad‖grad f‖)^H",
        tol.connection,
        n,
        |i| Ok(Sampled::new(points[i].clone(), closed[i].0.components.clone(), evals[i].tension.clone())),
    )?
    .advisory();
    let proof = worst(
        format!("{pre}.tension.proof"),
        "τ(Id_α) = −(grad α/2α)^H",
        tol.connection,
        n,
        |i| Ok(Sampled::new(points[i].clone(), closed[i].1.components.clone(), evals[i].tension.clone())),
    )?
    .advisory();
    let topic = "sign of τ(Id_α)";
    rep.finding(
        topic,
        match (stated.pass, proof.pass) {
            (true, false) => "positive: (grad α/2α)^H matches the generic tension",
            (false, true) => "negative: −(grad α/2α)^H matches the generic tension",
            (true, true) => "undetermined: the tension vanishes at every sample",
            (false, false) => "neither sign matches the generic tension",
        },
    );
    rep.push(stated);
    rep.push(proof);
    rep.push(worst_by(
        format!("{pre}.tension.magnitude"),
        "|τ(Id_α)| = |grad α/2α| componentwise",
        tol.connection,
        n,
        |i| Ok(Sampled::new(points[i].clone(), closed[i].0.components.clone(), evals[i].tension.clone())),
        |x| x.closed.iter().zip(&x.generic).map(|(a, b)| (a.abs() - b.abs()).abs()).fold(0.0, f64::max),
    )?);
    rep.push(worst(
        format!("{pre}.bitension"),
        "τ₂(Id_α) = [J_{Id_M}(grad α/α)]^H",
        tol.curvature,
        n,
        |i| {
            let b = bitension_id_alpha_closed(&s.f, &s.base, &s.samples[i].x)?;
            Ok(Sampled::new(
                points[i].clone(),
                lifted_split(&b, &prims[i], &s.samples[i]).components,
                evals[i].bitension.clone(),
            ))
        },
    )?);
    let claim = s.expect();
    rep.push(
        worst_by(
            format!("{pre}.ode"),
            "(α′/2α)″ = 0 along x₁",
            tol.ode,
            n,
            |i| {
                let r = log_alpha_ode_residual(&s.f, &s.samples[i].x, 0)?;
                Ok(Sampled::new(s.samples[i].x.clone(), vec![r], Vec::new()))
            },
            |x| x.closed[0].abs(),
        )?
        .gating(matches!(claim, Some(Verdict::ProperBiharmonic))),
    );
    expectation_checks(&pre, claim, &evals, tol, rep);
    rep.classification("id_alpha", classification_of(&evals, tol));
    Ok(())
}

fn id_f_checks(prefix: &str, s: &Scenario, rep: &mut Report) -> Result<()> {
    require_flat(s)?;
    let tol = s.tolerances();
    let pre = format!("{prefix}.id_f");
    let n = s.samples.len();
    let m = s.dim() as f64;
    let tilde = mus_sasaki_metric(&s.base, &s.f)?;
    let hat = sasaki_metric(&s.base);
    let map = SmoothMap::identity(tilde.clone(), hat.clone())?;
    let points: Vec<Vec<f64>> = s.samples.iter().map(BundlePoint::coords).collect();
    let evals = evaluations(&map, &points)?;
    let prims: Vec<BasePrims<f64>> = s
        .samples
        .par_iter()
        .map(|p| BasePrims::new(&s.base, Some(&s.f), &p.x))
        .collect::<Result<_>>()?;
    rep.push(worst(
        format!("{pre}.tension"),
        "τ(Id_f) = (m/2f)(grad f)^H",
        tol.connection,
        n,
        |i| {
            let t = tension_id_f_closed(&prims[i], m)?;
            Ok(Sampled::new(points[i].clone(), lifted_split(&t, &prims[i], &s.samples[i]).components, evals[i].tension.clone()))
        },
    )?);
    let readings: Vec<(LiftedVector<f64>, LiftedVector<f64>)> = (0..n)
        .map(|i| {
            let (a, b) = bitension_id_f_closed(&prims[i], m)?;
            Ok((lifted_split(&a, &prims[i], &s.samples[i]), lifted_split(&b, &prims[i], &s.samples[i])))
        })
        .collect::<Result<_>>()?;
    let full = worst(
        format!("{pre}.bitension.full"),
        "τ₂(Id_f) = m/(f√f)(∇_{grad f}grad √f)^V + m²/2f²(∇_{grad f}grad f)^H",
        tol.curvature,
        n,
        |i| Ok(Sampled::new(points[i].clone(), readings[i].0.components.clone(), evals[i].bitension.clone())),
    )?
    .advisory();
    let horizontal = worst(
        format!("{pre}.bitension.horizontal"),
        "τ₂(Id_f) = m²/4f²(grad‖grad f‖²)^H",
        tol.curvature,
        n,
        |i| Ok(Sampled::new(points[i].clone(), readings[i].1.components.clone(), evals[i].bitension.clone())),
    )?
    .advisory();
    let (best_id, best) = if full.residual <= horizontal.residual {
        ("full", &full)
    } else {
        ("horizontal", &horizontal)
    };
    rep.push(
        CheckRecord {
            id: format!("{pre}.bitension.resolved"),
            anchor: "one reading of τ₂(Id_f) matches the generic bitension".into(),
            gating: true,
            note: Some(format!("closest reading: {best_id}")),
            ..best.clone()
        },
    );
    rep.finding(
        "closed form of τ₂(Id_f)",
        match (full.pass, horizontal.pass) {
            (true, true) => "both readings match the generic bitension".to_string(),
            (true, false) => "the full reading with the vertical term matches".to_string(),
            (false, true) => "the horizontal-only reading matches".to_string(),
            (false, false) => format!(
                "neither reading matches; closest is {best_id} with residual {:.3e}",
                best.residual
            ),
        },
    );
    rep.push(full);
    rep.push(horizontal);
    let reverse = SmoothMap::identity(hat, tilde)?;
    let rev = evaluations(&reverse, &points)?;
    let rb = argmax(&rev, |e| e.bitension_norm);
    rep.push(
        CheckRecord::new(
            format!("{pre}.reverse.bitension"),
            "‖τ₂‖ of the identity (TM,ĝ)→(TM,g̃)",
            rb.bitension_norm,
            tol.biharmonic,
        )
        .at(&rb.point)
        .values(Vec::new(), rb.bitension.clone())
        .advisory(),
    );
    let claim = s.expect();
    expectation_checks(&pre, claim, &evals, tol, rep);
    rep.classification("id_f", classification_of(&evals, tol));
    rep.classification("id_f reverse", classification_of(&rev, tol));
    Ok(())
}

fn id_hat_f_checks(prefix: &str, s: &Scenario, rep: &mut Report) -> Result<()> {
    require_flat(s)?;
    let tol = s.tolerances();
    let pre = format!("{prefix}.id_hat_f");
    let n = s.samples.len();
    let m = s.dim() as f64;
    let tilde = mus_sasaki_metric(&s.base, &s.f)?;
    let hat = sasaki_metric(&s.base);
    let points: Vec<Vec<f64>> = s.samples.iter().map(BundlePoint::coords).collect();
    let prims: Vec<BasePrims<f64>> = s
        .samples
        .par_iter()
        .map(|p| BasePrims::new(&s.base, Some(&s.f), &p.x))
        .collect::<Result<_>>()?;

    let forward = evaluations(&SmoothMap::identity(hat.clone(), tilde.clone())?, &points)?;
    let fwd = format!("{pre}.sasaki_to_mus");
    rep.push(worst(
        format!("{fwd}.tension"),
        "τ(Îd_f) = −(m/2)(grad f)^H for (TM,ĝ)→(TM,g̃)",
        tol.connection,
        n,
        |i| {
            let t = tension_idhat_closed(&prims[i], m);
            Ok(Sampled::new(points[i].clone(), lifted_split(&t, &prims[i], &s.samples[i]).components, forward[i].tension.clone()))
        },
    )?);
    rep.push(worst(
        format!("{fwd}.bitension"),
        "τ₂(Îd_f) = −(m²/8)(grad‖grad f‖²)^H + (m/2)(Tr_g∇²grad f)^H",
        tol.curvature,
        n,
        |i| {
            let t = bitension_idhat_closed(&prims[i], m);
            Ok(Sampled::new(points[i].clone(), lifted_split(&t, &prims[i], &s.samples[i]).components, forward[i].bitension.clone()))
        },
    )?);
    rep.push(worst(
        format!("{fwd}.trace_condition"),
        "τ₂(Îd_f) = −(m/2)[(m/4)grad‖grad f‖² − Tr_g∇²grad f]^H",
        tol.curvature,
        n,
        |i| {
            let r = residual_trace_condition(&prims[i], m);
            let t = Split::horizontal(r.iter().map(|c| -m / 2.0 * c).collect());
            Ok(Sampled::new(points[i].clone(), lifted_split(&t, &prims[i], &s.samples[i]).components, forward[i].bitension.clone()))
        },
    )?);

    let backward = evaluations(&SmoothMap::identity(tilde, hat)?, &points)?;
    let bwd = format!("{pre}.mus_to_sasaki");
    rep.push(
        worst(
            format!("{bwd}.tension"),
            "τ(Îd_f) = −(m/2)(grad f)^H for (TM,g̃)→(TM,ĝ)",
            tol.connection,
            n,
            |i| {
                let t = tension_idhat_closed(&prims[i], m);
                Ok(Sampled::new(points[i].clone(), lifted_split(&t, &prims[i], &s.samples[i]).components, backward[i].tension.clone()))
            },
        )?
        .advisory(),
    );

    let mut combos = Vec::new();
    for (dir, evals) in [("sasaki_to_mus", &forward), ("mus_to_sasaki", &backward)] {
        let b = argmax(evals, |e| e.bitension_norm);
        let r = CheckRecord::new(
            format!("{pre}.{dir}.bitension_norm"),
            "‖τ₂(Îd_f)‖ vanishes",
            b.bitension_norm,
            tol.biharmonic,
        )
        .at(&b.point)
        .values(Vec::new(), b.bitension.clone())
        .advisory();
        if r.pass {
            combos.push(dir);
        }
        rep.push(r);
        rep.classification(format!("id_hat_f {dir}"), classification_of(evals, tol));
    }

    let sides: Vec<OdeSides<f64>> = s
        .samples
        .iter()
        .map(|p| cubic_ode_sides(&s.f, m, &p.x, 0))
        .collect::<Result<_>>()?;
    let side_record = |id: &str, anchor: &str, key: &dyn Fn(&OdeSides<f64>) -> f64| {
        let (i, r) = sides
            .iter()
            .map(key)
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, br), (i, r)| if r > br { (i, r) } else { (bi, br) });
        CheckRecord::new(format!("{pre}.cubic_ode.{id}"), anchor, r, tol.ode)
            .at(&s.samples[i].x)
            .values(vec![sides[i].lhs], vec![sides[i].rhs])
            .advisory()
    };
    let printed = side_record("as_printed", "f‴ = (m/4)((f′)²)′ along x₁", &|o| o.residual().abs());
    let flipped = side_record("sign_flipped", "f‴ = −(m/4)((f′)²)′ along x₁", &|o| o.flipped_residual().abs());
    let magnitude = side_record("magnitude", "|f‴| = |(m/4)((f′)²)′| along x₁", &|o| (o.lhs.abs() - o.rhs.abs()).abs());
    let sign = match (printed.pass, flipped.pass) {
        (true, true) => "both sides vanish".to_string(),
        (true, false) => "f‴ = (m/4)((f′)²)′ holds as printed".to_string(),
        (false, true) => "f‴ = −(m/4)((f′)²)′ holds: the sides agree in magnitude with opposite sign".to_string(),
        (false, false) => "neither sign holds".to_string(),
    };
    rep.finding("sign in f‴ = (m/4)((f′)²)′", sign);
    rep.finding(
        "biharmonic direction of Îd_f",
        if combos.is_empty() {
            "no direction has vanishing τ₂ at the samples".to_string()
        } else {
            format!("τ₂ vanishes for: {}", combos.join(", "))
        },
    );
    rep.push(printed);
    rep.push(flipped);
    rep.push(magnitude);
    expectation_checks(&fwd, s.expect(), &forward, tol, rep);
    Ok(())
}

/// Generic and closed-form fields of one map at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct MapFields {
    pub map: String,
    pub point: Vec<f64>,
    pub tension: Vec<f64>,
    pub bitension: Vec<f64>,
    pub tension_norm: f64,
    pub bitension_norm: f64,
    pub closed_tension: Option<Vec<f64>>,
    pub closed_bitension: Option<Vec<f64>>,
}

/// The maps a selector names, each with its closed forms where they exist.
pub fn map_fields(s: &Scenario, p: &BundlePoint<f64>) -> Result<Vec<MapFields>> {
    let m = s.dim() as f64;
    let b = BasePrims::new(&s.base, Some(&s.f), &p.x)?;
    let lift = |sp: Split<f64>| sp.lift(&b, p).components;
    let mut maps: Vec<(String, SmoothMap, Option<Vec<f64>>, Option<Vec<f64>>)> = Vec::new();
    match s.selector() {
        MapSelector::PiAlpha => {
            let res = biharm_residual_pi_alpha(&s.f, &s.base, &p.x)?;
            maps.push((
                "pi_alpha".into(),
                SmoothMap::projection(mus_gradient_metric(&s.base, &s.f), s.base.clone())?,
                Some(tension_pi_alpha_closed(&b).1),
                Some(res.iter().map(|r| -r).collect()),
            ));
        }
        MapSelector::IdAlpha => {
            require_flat(s)?;
            let t = tension_id_alpha_closed(&b).ok().map(|(st, _)| lift(st));
            let bt = lift(bitension_id_alpha_closed(&s.f, &s.base, &p.x)?);
            maps.push((
                "id_alpha".into(),
                SmoothMap::identity(mus_gradient_metric(&s.base, &s.f), sasaki_metric(&s.base))?,
                t,
                Some(bt),
            ));
        }
        MapSelector::IdF => {
            require_flat(s)?;
            let tilde = mus_sasaki_metric(&s.base, &s.f)?;
            maps.push((
                "id_f".into(),
                SmoothMap::identity(tilde, sasaki_metric(&s.base))?,
                Some(lift(tension_id_f_closed(&b, m)?)),
                Some(lift(bitension_id_f_closed(&b, m)?.0)),
            ));
        }
        MapSelector::IdHatF => {
            require_flat(s)?;
            let tilde = mus_sasaki_metric(&s.base, &s.f)?;
            let hat = sasaki_metric(&s.base);
            let t = lift(tension_idhat_closed(&b, m));
            maps.push((
                "id_hat_f sasaki_to_mus".into(),
                SmoothMap::identity(hat.clone(), tilde.clone())?,
                Some(t.clone()),
                Some(lift(bitension_idhat_closed(&b, m))),
            ));
            maps.push(("id_hat_f mus_to_sasaki".into(), SmoothMap::identity(tilde, hat)?, Some(t), None));
        }
    }
    maps.into_iter()
        .map(|(name, map, ct, cb)| {
            let e = evaluate(&map, &p.coords())?;
            Ok(MapFields {
                map: name,
                point: e.point,
                tension: e.tension,
                bitension: e.bitension,
                tension_norm: e.tension_norm,
                bitension_norm: e.bitension_norm,
                closed_tension: ct,
                closed_bitension: cb,
            })
        })
        .collect()
}
