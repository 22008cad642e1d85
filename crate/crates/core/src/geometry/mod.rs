pub mod chart;
pub mod field;
pub mod frame;
pub mod linalg;
pub mod local;
pub mod metric;
pub mod ops;

pub use chart::Chart;
pub use field::{ScalarField, ScalarSpec, VectorField};
pub use frame::{gram_schmidt, orthonormal_frame_from_values, Frame};
pub use local::{LocalGeometry, Riemann};
pub use metric::{Lift, MetricField};
pub use ops::{
    alpha, christoffel, covariant_derivative, curvature_apply, grad, inverse_metric_at, laplacian, metric_at,
    nabla_grad, orthonormal_frame, ricci_apply, ricci_operator, riemann, trace_hessian_vec,
};
