use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::bundle::vectors::BundlePoint;
use crate::calculus::expr::{parse, Expr};
use crate::error::{Error, Result};
use crate::geometry::chart::Chart;
use crate::geometry::field::ScalarField;
use crate::geometry::metric::MetricField;
use crate::harmonic::classify::{Verdict, DEFAULT_TOL_BIHARMONIC, DEFAULT_TOL_HARMONIC};

/// Which map between lifted metrics a scenario studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapSelector {
    /// `π_α:(TM,g^f)→(M,g)`
    PiAlpha,
    /// `Id_α:(TM,g^f)→(TM,ĝ)`
    IdAlpha,
    /// `Id_f:(TM,g̃)→(TM,ĝ)`
    IdF,
    /// `Îd_f` between `(TM,ĝ)` and `(TM,g̃)`, both directions.
    IdHatF,
}

impl MapSelector {
    pub fn name(self) -> &'static str {
        match self {
            MapSelector::PiAlpha => "pi_alpha",
            MapSelector::IdAlpha => "id_alpha",
            MapSelector::IdF => "id_f",
            MapSelector::IdHatF => "id_hat_f",
        }
    }
}

/// Metric entries as expressions, or a builtin name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MetricSpec {
    Builtin(String),
    Entries(Vec<Vec<String>>),
}

/// Open interval; a missing end is unbounded.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<f64>,
}

impl Bound {
    pub fn new(lo: Option<f64>, hi: Option<f64>) -> Self {
        Bound { lo, hi }
    }

    fn pair(self) -> (f64, f64) {
        (self.lo.unwrap_or(f64::NEG_INFINITY), self.hi.unwrap_or(f64::INFINITY))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaseSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coordinates: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bounds: Vec<Bound>,
    pub metric: MetricSpec,
}

/// `f` given by value or by its gradient components.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FunctionSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gradient: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub constants: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    pub selector: MapSelector,
    /// Verdict the scenario claims; turns the classification into checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Verdict>,
}

/// Sample points: explicit base or bundle points plus `count` random ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    #[serde(default)]
    pub points: Vec<Vec<f64>>,
    #[serde(default)]
    pub count: usize,
    #[serde(default)]
    pub seed: u64,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec {
            points: Vec::new(),
            count: 4,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub harmonic: f64,
    pub biharmonic: f64,
    pub connection: f64,
    pub curvature: f64,
    pub residual: f64,
    pub identity: f64,
    pub ode: f64,
    pub flat: f64,
    pub nonflat: f64,
    pub nonzero: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            harmonic: DEFAULT_TOL_HARMONIC,
            biharmonic: DEFAULT_TOL_BIHARMONIC,
            connection: 1e-6,
            curvature: 1e-5,
            residual: 1e-8,
            identity: 1e-10,
            ode: 1e-9,
            flat: 1e-8,
            nonflat: 1e-3,
            nonzero: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EinsteinSpec {
    pub lambda: f64,
}

/// A complete, serialisable experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub name: String,
    pub base: BaseSpec,
    pub function: FunctionSpec,
    pub map: MapSpec,
    #[serde(default)]
    pub samples: SampleSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub einstein: Option<EinsteinSpec>,
}

/// A scenario with every expression parsed and every sample drawn.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub spec: ScenarioSpec,
    pub base: MetricField,
    pub f: ScalarField,
    pub samples: Vec<BundlePoint<f64>>,
    pub seed: u64,
}

impl Scenario {
    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.spec.tolerances
    }

    pub fn selector(&self) -> MapSelector {
        self.spec.map.selector
    }

    pub fn expect(&self) -> Option<Verdict> {
        self.spec.map.expect
    }

    pub fn base_points(&self) -> Vec<Vec<f64>> {
        self.samples.iter().map(|p| p.x.clone()).collect()
    }

    /// A deterministic generator for auxiliary random vectors.
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(stream);
        r
    }
}

impl ScenarioSpec {
    pub fn build(&self) -> Result<Scenario> {
        self.build_with_seed(self.samples.seed)
    }

    pub fn build_with_seed(&self, seed: u64) -> Result<Scenario> {
        let base = self.base_metric()?;
        let m = base.dim();
        let consts = &self.function.constants;
        if let Some(&mc) = consts.get("m") {
            if mc != m as f64 {
                return Err(Error::Scenario(format!("constant m = {mc} but the base has dimension {m}")));
            }
        }
        let names = base.chart().names().to_vec();
        let f = match (&self.function.value, &self.function.gradient) {
            (Some(v), None) => ScalarField::value(parse(v, &names, consts)?),
            (None, Some(g)) => {
                if g.len() != m {
                    return Err(Error::Scenario(format!(
                        "gradient has {} components for a {m}-dimensional base",
                        g.len()
                    )));
                }
                ScalarField::gradient(g.iter().map(|c| parse(c, &names, consts)).collect::<Result<_>>()?)
            }
            _ => {
                return Err(Error::Scenario(
                    "function needs exactly one of `value` or `gradient`".into(),
                ))
            }
        };
        let f = if matches!(self.map.selector, MapSelector::IdF | MapSelector::IdHatF) {
            if f.is_gradient_only() {
                return Err(Error::Scenario("this map needs a value-specified function".into()));
            }
            f.positive()
        } else {
            f
        };
        if self.einstein.is_some() && self.map.selector != MapSelector::PiAlpha {
            return Err(Error::Scenario("an Einstein constant only applies to pi_alpha".into()));
        }
        let samples = draw_samples(base.chart(), &self.samples, seed)?;
        for p in &samples {
            base.chart().check(&p.x)?;
            base.values(&p.x)?;
            if f.is_positive() {
                let v = f.value_at(&p.x)?;
                if v <= 0.0 {
                    return Err(Error::NotPositive {
                        point: p.x.clone(),
                        value: v,
                    });
                }
            }
        }
        Ok(Scenario {
            spec: self.clone(),
            base,
            f,
            samples,
            seed,
        })
    }

    fn base_metric(&self) -> Result<MetricField> {
        let b = &self.base;
        match &b.metric {
            MetricSpec::Builtin(name) => {
                let metric = match name.as_str() {
                    "euclidean" => {
                        let m = b.dim.unwrap_or(b.coordinates.len().max(1));
                        let chart = if b.coordinates.is_empty() {
                            Chart::numbered("x", m)
                        } else {
                            Chart::new(b.coordinates.clone())
                        };
                        if chart.dim() != m {
                            return Err(Error::Scenario(format!(
                                "dim = {m} but {} coordinates are named",
                                chart.dim()
                            )));
                        }
                        MetricField::euclidean_on(self.bounded(chart)?)
                    }
                    "sphere" => {
                        if b.dim.is_some_and(|d| d != 2) {
                            return Err(Error::Scenario("the sphere is two-dimensional".into()));
                        }
                        let s = MetricField::sphere();
                        if !b.coordinates.is_empty() && b.coordinates.as_slice() != s.chart().names() {
                            return Err(Error::Scenario("sphere coordinates are theta, phi".into()));
                        }
                        if b.bounds.is_empty() {
                            s
                        } else {
                            let chart = self.bounded(s.chart().clone())?;
                            match s {
                                MetricField::Coordinate { entries, .. } => MetricField::coordinate(chart, entries)?,
                                other => other,
                            }
                        }
                    }
                    other => return Err(Error::Scenario(format!("unknown builtin metric `{other}`"))),
                };
                Ok(metric)
            }
            MetricSpec::Entries(rows) => {
                let m = rows.len();
                if b.dim.is_some_and(|d| d != m) || (!b.coordinates.is_empty() && b.coordinates.len() != m) {
                    return Err(Error::Scenario("metric size does not match the coordinates".into()));
                }
                let chart = if b.coordinates.is_empty() {
                    Chart::numbered("x", m)
                } else {
                    Chart::new(b.coordinates.clone())
                };
                let chart = self.bounded(chart)?;
                let names = chart.names().to_vec();
                let consts = &self.function.constants;
                let entries = rows
                    .iter()
                    .map(|r| {
                        if r.len() != m {
                            return Err(Error::Scenario("metric must be square".into()));
                        }
                        r.iter().map(|e| parse(e, &names, consts)).collect::<Result<Vec<Expr>>>()
                    })
                    .collect::<Result<_>>()?;
                MetricField::coordinate(chart, entries)
            }
        }
    }

    fn bounded(&self, chart: Chart) -> Result<Chart> {
        let bounds = &self.base.bounds;
        if bounds.is_empty() {
            return Ok(chart);
        }
        if bounds.len() != chart.dim() {
            return Err(Error::Scenario(format!(
                "{} bounds for {} coordinates",
                bounds.len(),
                chart.dim()
            )));
        }
        chart.with_bounds(bounds.iter().map(|b| b.pair()).collect())
    }
}

fn random_coordinate(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => {
            let w = hi - lo;
            rng.random_range(lo + 0.1 * w..hi - 0.1 * w)
        }
        (true, false) => lo + rng.random_range(0.25..2.25),
        (false, true) => hi - rng.random_range(0.25..2.25),
        (false, false) => StandardNormal.sample(rng),
    }
}

/// Fibre for the `i`-th base-only sample: `0`, `e₁`, then standard normal.
fn fibre(rng: &mut ChaCha8Rng, i: usize, m: usize) -> Vec<f64> {
    match i % 3 {
        0 => vec![0.0; m],
        1 => {
            let mut e = vec![0.0; m];
            e[0] = 1.0;
            e
        }
        _ => (0..m).map(|_| StandardNormal.sample(rng)).collect(),
    }
}

fn draw_samples(chart: &Chart, spec: &SampleSpec, seed: u64) -> Result<Vec<BundlePoint<f64>>> {
    let m = chart.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(spec.points.len() + spec.count);
    for p in &spec.points {
        let bp = if p.len() == m {
            BundlePoint::new(p.clone(), fibre(&mut rng, out.len(), m))?
        } else if p.len() == 2 * m {
            BundlePoint::from_coords(p)
        } else {
            return Err(Error::Scenario(format!(
                "sample point has {} coordinates; expected {m} or {}",
                p.len(),
                2 * m
            )));
        };
        out.push(bp);
    }
    for _ in 0..spec.count {
        let x = chart.bounds().iter().map(|&b| random_coordinate(&mut rng, b)).collect();
        let u = fibre(&mut rng, out.len(), m);
        out.push(BundlePoint::new(x, u)?);
    }
    if out.is_empty() {
        return Err(Error::Scenario("no sample points".into()));
    }
    Ok(out)
}

/// Names of the builtin examples.
pub const EXAMPLES: [&str; 4] = ["ex4_1", "ex4_2", "ex5_1", "ex5_2"];

fn consts(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

fn line(xs: &[f64]) -> Vec<Vec<f64>> {
    xs.iter().map(|&x| vec![x, 0.0]).collect()
}

/// The builtin worked examples.
pub fn example(name: &str) -> Result<ScenarioSpec> {
    let half_plane = |coords: [&str; 2], lo: f64| BaseSpec {
        dim: Some(2),
        coordinates: coords.iter().map(|s| s.to_string()).collect(),
        bounds: vec![Bound::new(Some(lo), None), Bound::default()],
        metric: MetricSpec::Builtin("euclidean".into()),
    };
    let spec = match name {
        "ex4_1" => ScenarioSpec {
            name: name.into(),
            base: half_plane(["t", "x"], 1.0),
            function: FunctionSpec {
                gradient: Some(vec!["sqrt(t^4 - 1)".into(), "0".into()]),
                ..Default::default()
            },
            map: MapSpec {
                selector: MapSelector::PiAlpha,
                expect: Some(Verdict::ProperBiharmonic),
            },
            samples: SampleSpec {
                points: line(&[1.5, 2.0, 3.0]),
                count: 3,
                seed: 41,
            },
            tolerances: Tolerances::default(),
            einstein: Some(EinsteinSpec { lambda: 0.0 }),
        },
        "ex4_2" => ScenarioSpec {
            name: name.into(),
            base: BaseSpec {
                dim: Some(2),
                coordinates: vec!["x1".into(), "x2".into()],
                bounds: Vec::new(),
                metric: MetricSpec::Builtin("euclidean".into()),
            },
            function: FunctionSpec {
                gradient: Some(vec!["sqrt(exp(a*x1^2 + b*x1 + c) - 1)".into(), "0".into()]),
                constants: consts(&[("a", 1.0), ("b", 0.0), ("c", 1.0)]),
                ..Default::default()
            },
            map: MapSpec {
                selector: MapSelector::IdAlpha,
                expect: Some(Verdict::ProperBiharmonic),
            },
            samples: SampleSpec {
                points: line(&[-0.5, 0.0, 0.5]),
                count: 3,
                seed: 42,
            },
            tolerances: Tolerances::default(),
            einstein: None,
        },
        "ex5_1" => ScenarioSpec {
            name: name.into(),
            base: half_plane(["x1", "x2"], 0.0),
            function: FunctionSpec {
                value: Some("a1*x1 + b1".into()),
                constants: consts(&[("a1", 1.0), ("b1", 1.0)]),
                ..Default::default()
            },
            map: MapSpec {
                selector: MapSelector::IdF,
                expect: Some(Verdict::ProperBiharmonic),
            },
            samples: SampleSpec {
                points: line(&[0.5, 1.0, 2.0]),
                count: 3,
                seed: 51,
            },
            tolerances: Tolerances::default(),
            einstein: None,
        },
        "ex5_2" => ScenarioSpec {
            name: name.into(),
            base: half_plane(["x1", "x2"], 0.0),
            function: FunctionSpec {
                value: Some("4/m*ln(m*x1 + c)".into()),
                constants: consts(&[("m", 2.0), ("c", 1.0)]),
                ..Default::default()
            },
            map: MapSpec {
                selector: MapSelector::IdHatF,
                expect: None,
            },
            samples: SampleSpec {
                points: line(&[0.5, 1.0, 2.0]),
                count: 3,
                seed: 52,
            },
            tolerances: Tolerances::default(),
            einstein: None,
        },
        other => return Err(Error::UnknownExample(other.to_string())),
    };
    Ok(spec)
}
