//! Lifted metrics on tangent bundles, their curvature, and harmonic and
//! biharmonic maps between them, computed with truncated Taylor jets.

pub mod bundle;
pub mod calculus;
pub mod error;
pub mod geometry;
pub mod harmonic;
pub mod paperlib;

pub use error::{Error, Result};

pub type Jet64 = calculus::Jet<f64>;
pub type Jet32 = calculus::Jet<f32>;
