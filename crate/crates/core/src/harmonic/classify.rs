use serde::{Deserialize, Serialize};

use crate::calculus::real::Real;
use crate::error::Result;
use crate::harmonic::map::{MapJets, SmoothMap};

pub const DEFAULT_TOL_HARMONIC: f64 = 1e-7;
pub const DEFAULT_TOL_BIHARMONIC: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Harmonic,
    ProperBiharmonic,
    Neither,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Harmonic => "harmonic",
            Verdict::ProperBiharmonic => "proper_biharmonic",
            Verdict::Neither => "neither",
        })
    }
}

/// Tension and bitension of a map at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapEvaluation {
    pub point: Vec<f64>,
    pub tension: Vec<f64>,
    pub bitension: Vec<f64>,
    pub tension_norm: f64,
    pub bitension_norm: f64,
}

/// Verdict over a finite sample set; it says nothing about other points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapClassification {
    pub verdict: Verdict,
    pub max_tension: f64,
    pub max_bitension: f64,
    pub tol_harmonic: f64,
    pub tol_biharmonic: f64,
    pub samples: usize,
}

pub fn evaluate<R: Real>(map: &SmoothMap, p: &[R]) -> Result<MapEvaluation> {
    let mj = MapJets::new(map, p)?;
    let t = mj.tension();
    let b = mj.bitension(None)?;
    Ok(MapEvaluation {
        point: p.iter().map(|x| x.as_f64()).collect(),
        tension_norm: mj.h_norm(&t).as_f64(),
        bitension_norm: mj.h_norm(&b).as_f64(),
        tension: t.iter().map(|x| x.as_f64()).collect(),
        bitension: b.iter().map(|x| x.as_f64()).collect(),
    })
}

pub fn verdict_for(max_tension: f64, max_bitension: f64, tol_harmonic: f64, tol_biharmonic: f64) -> Verdict {
    if max_tension <= tol_harmonic {
        Verdict::Harmonic
    } else if max_bitension <= tol_biharmonic {
        Verdict::ProperBiharmonic
    } else {
        Verdict::Neither
    }
}

pub fn classify<R: Real>(
    map: &SmoothMap,
    samples: &[Vec<R>],
    tol_harmonic: f64,
    tol_biharmonic: f64,
) -> Result<MapClassification> {
    let mut max_tension = 0.0f64;
    let mut max_bitension = 0.0f64;
    for p in samples {
        let e = evaluate(map, p)?;
        max_tension = max_tension.max(e.tension_norm);
        max_bitension = max_bitension.max(e.bitension_norm);
    }
    Ok(MapClassification {
        verdict: verdict_for(max_tension, max_bitension, tol_harmonic, tol_biharmonic),
        max_tension,
        max_bitension,
        tol_harmonic,
        tol_biharmonic,
        samples: samples.len(),
    })
}
