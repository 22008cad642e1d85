pub mod calibration;
pub mod closed;
pub mod generic;
pub mod maps;
pub mod prims;
pub mod report;
pub mod scenario;
pub mod suite;
pub mod verify;

pub use closed::{
    mus_sasaki_connection_flat_closed, mus_sasaki_curvature_flat_closed, musgrad_connection_closed,
    musgrad_curvature_flat_closed, musgrad_curvature_flat_variant, sasaki_connection_closed, sasaki_curvature_closed,
    ConnCase, CurvCase, Kind, MusGradVariant, MusSasakiVariant, Split,
};
pub use generic::{lifted_connection, lifted_curvature, max_curvature};
pub use maps::*;
pub use prims::{BasePrims, FieldPrims};
pub use report::{CheckRecord, Classification, Comparison, Finding, Report, Summary};
pub use scenario::{example, MapSelector, Scenario, ScenarioSpec, Tolerances, EXAMPLES};
pub use verify::{map_fields, verify, MapFields};
pub use suite::{suite, DEFAULT_SEED};
