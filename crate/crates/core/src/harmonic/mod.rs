pub mod classify;
pub mod map;

pub use classify::{
    classify, evaluate, verdict_for, MapClassification, MapEvaluation, Verdict, DEFAULT_TOL_BIHARMONIC,
    DEFAULT_TOL_HARMONIC,
};
pub use map::{
    bitension, bitension_with_frame, jacobi, jacobi_field, pullback_cov_deriv, tension, MapJets, SmoothMap,
};
