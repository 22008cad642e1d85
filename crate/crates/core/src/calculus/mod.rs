pub mod expr;
pub mod fd;
pub mod jet;
pub mod multi_index;
pub mod real;
pub mod scalar;

pub use expr::{parse, parse_coords, Expr, Func};
pub use fd::fd_derivative;
pub use jet::{jet_apply, jet_combine, jet_var, Jet, JetOp, Operand, DEFAULT_ORDER};
pub use multi_index::MultiIndex;
pub use real::Real;
pub use scalar::Scalar;
