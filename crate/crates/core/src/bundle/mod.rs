pub mod lift;
pub mod vectors;

pub use lift::{mus_gradient_metric, mus_sasaki_metric, sasaki_metric, tangent_chart};
pub use vectors::{
    adapted_frame, connection_values, horizontal_lift, horizontal_lift_jets, horizontal_lift_with, vertical_lift,
    vertical_lift_jets, BundlePoint, LiftedVector,
};
