use crate::calculus::expr::Expr;
use crate::calculus::jet::Jet;
use crate::calculus::real::Real;
use crate::error::{Error, Result};
use crate::geometry::local::LocalGeometry;

#[derive(Debug, Clone, PartialEq)]
pub enum ScalarSpec {
    /// `f` given by an expression.
    Value(Expr),
    /// Only the partials `∂ᵢf` are known.
    Gradient(Vec<Expr>),
}

/// A scalar field on a chart, possibly known only through its differential.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    spec: ScalarSpec,
    positive: bool,
}

impl ScalarField {
    pub fn value(expr: Expr) -> Self {
        ScalarField {
            spec: ScalarSpec::Value(expr),
            positive: false,
        }
    }

    /// Field specified by its partial derivatives `∂ᵢf`, one per coordinate.
    pub fn gradient(components: Vec<Expr>) -> Self {
        ScalarField {
            spec: ScalarSpec::Gradient(components),
            positive: false,
        }
    }

    pub fn constant(c: f64) -> Self {
        ScalarField::value(Expr::Const(c))
    }

    /// Requires the value to be positive wherever it is evaluated.
    pub fn positive(mut self) -> Self {
        self.positive = true;
        self
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    pub fn spec(&self) -> &ScalarSpec {
        &self.spec
    }

    pub fn is_gradient_only(&self) -> bool {
        matches!(self.spec, ScalarSpec::Gradient(_))
    }

    /// True when the field is structurally constant.
    pub fn is_constant(&self) -> bool {
        match &self.spec {
            ScalarSpec::Value(e) => e.is_constant(),
            ScalarSpec::Gradient(d) => d.iter().all(|e| matches!(e, Expr::Const(c) if *c == 0.0)),
        }
    }

    pub fn value_jet<R: Real>(&self, coords: &[Jet<R>]) -> Result<Jet<R>> {
        match &self.spec {
            ScalarSpec::Gradient(_) => Err(Error::GradientOnly),
            ScalarSpec::Value(e) => {
                let v = e.eval(coords)?;
                if self.positive && !(v.value() > R::zero()) {
                    return Err(Error::NotPositive {
                        point: coords.iter().map(|c| c.value().as_f64()).collect(),
                        value: v.value().as_f64(),
                    });
                }
                Ok(v)
            }
        }
    }

    /// Jets of `∂ᵢf`. A value-specified field loses one order.
    pub fn differential_jets<R: Real>(&self, coords: &[Jet<R>]) -> Result<Vec<Jet<R>>> {
        match &self.spec {
            ScalarSpec::Gradient(d) => {
                if d.len() != coords.len() {
                    return Err(Error::Dimension {
                        expected: coords.len(),
                        got: d.len(),
                    });
                }
                d.iter().map(|e| e.eval(coords)).collect()
            }
            ScalarSpec::Value(_) => {
                let v = self.value_jet(coords)?;
                (0..coords.len()).map(|i| v.partial_jet(i)).collect()
            }
        }
    }

    pub fn value_at<R: Real>(&self, point: &[R]) -> Result<R> {
        Ok(self.value_jet(&Jet::seed(point, 0))?.value())
    }

    pub fn differential_at<R: Real>(&self, point: &[R]) -> Result<Vec<R>> {
        Ok(self
            .differential_jets(&Jet::seed(point, 1))?
            .iter()
            .map(Jet::value)
            .collect())
    }
}

/// A tangent vector field on a chart, in the coordinate basis.
#[derive(Debug, Clone, PartialEq)]
pub enum VectorField {
    Components(Vec<Expr>),
    /// The metric gradient of a scalar field.
    Gradient(ScalarField),
}

impl VectorField {
    pub fn constant(v: &[f64]) -> Self {
        VectorField::Components(v.iter().map(|&c| Expr::Const(c)).collect())
    }

    pub fn jets<R: Real>(&self, geo: &LocalGeometry<R>) -> Result<Vec<Jet<R>>> {
        match self {
            VectorField::Components(c) => {
                if c.len() != geo.dim() {
                    return Err(Error::Dimension {
                        expected: geo.dim(),
                        got: c.len(),
                    });
                }
                c.iter().map(|e| e.eval(geo.coords())).collect()
            }
            VectorField::Gradient(f) => geo.grad(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::expr::parse_coords;

    #[test]
    fn gradient_specified_fields_have_no_value() {
        let f = ScalarField::gradient(vec![parse_coords("sqrt(t^4 - 1)", &["t"]).unwrap()]);
        assert_eq!(f.value_at(&[2.0]), Err(Error::GradientOnly));
        let d = f.differential_at(&[2.0]).unwrap();
        assert!((d[0] - 15f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn positivity_is_checked() {
        let f = ScalarField::value(parse_coords("x - 1", &["x"]).unwrap()).positive();
        assert!(f.value_at(&[2.0]).is_ok());
        assert!(matches!(f.value_at(&[0.5]), Err(Error::NotPositive { .. })));
    }
}
