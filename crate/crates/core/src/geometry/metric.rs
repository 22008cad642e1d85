use crate::calculus::expr::{Expr, Func};
use crate::calculus::jet::Jet;
use crate::calculus::real::Real;
use crate::error::{Error, Result};
use crate::geometry::chart::Chart;
use crate::geometry::field::ScalarField;
use crate::geometry::linalg::Mat;

/// Which lift of a base metric to the tangent bundle.
#[derive(Debug, Clone, PartialEq)]
pub enum Lift {
    Sasaki,
    /// Vertical block scaled by a positive function.
    MusSasaki(ScalarField),
    /// Vertical block `g + df ⊗ df`.
    MusGradient(ScalarField),
}

/// A Riemannian metric on a chart.
///
/// Coordinate metrics hold their entries as expressions. Lifted metrics live on
/// the tangent chart of their base and are assembled from the base geometry
/// when evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricField {
    Coordinate { chart: Chart, entries: Vec<Vec<Expr>> },
    Lifted { chart: Chart, base: Box<MetricField>, lift: Lift },
}

impl MetricField {
    /// Metric from a full symmetric matrix of expressions.
    pub fn coordinate(chart: Chart, entries: Vec<Vec<Expr>>) -> Result<Self> {
        let m = chart.dim();
        if entries.len() != m || entries.iter().any(|r| r.len() != m) {
            return Err(Error::ShapeMismatch(format!("metric on a {m}-dimensional chart needs {m}x{m} entries")));
        }
        for i in 0..m {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::ShapeMismatch(format!("metric entries ({i},{j}) and ({j},{i}) differ")));
                }
            }
        }
        Ok(MetricField::Coordinate { chart, entries })
    }

    pub fn diagonal(chart: Chart, diag: Vec<Expr>) -> Result<Self> {
        let m = diag.len();
        let mut entries = vec![vec![Expr::Const(0.0); m]; m];
        for (i, d) in diag.into_iter().enumerate() {
            entries[i][i] = d;
        }
        MetricField::coordinate(chart, entries)
    }

    /// Flat metric on `ℝᵐ` with coordinates `x1..xm`.
    pub fn euclidean(m: usize) -> Self {
        MetricField::euclidean_on(Chart::numbered("x", m))
    }

    pub fn euclidean_on(chart: Chart) -> Self {
        let m = chart.dim();
        MetricField::diagonal(chart, vec![Expr::Const(1.0); m]).expect("square")
    }

    /// Round metric `dθ² + sin²θ dφ²` on `(0,π)×(0,2π)`.
    pub fn sphere() -> Self {
        let chart = Chart::new(["theta", "phi"])
            .bound(0, 0.0, std::f64::consts::PI)
            .bound(1, 0.0, 2.0 * std::f64::consts::PI);
        let s = Expr::call(Func::Sin, Expr::Var(0)).pow(Expr::Const(2.0));
        MetricField::diagonal(chart, vec![Expr::Const(1.0), s]).expect("square")
    }

    pub fn chart(&self) -> &Chart {
        match self {
            MetricField::Coordinate { chart, .. } | MetricField::Lifted { chart, .. } => chart,
        }
    }

    pub fn dim(&self) -> usize {
        self.chart().dim()
    }

    /// Number of derivatives lost between the coordinate seeds and the entries.
    pub fn depth(&self) -> usize {
        match self {
            MetricField::Coordinate { .. } => 0,
            MetricField::Lifted { base, .. } => base.depth() + 1,
        }
    }

    pub fn base(&self) -> Option<&MetricField> {
        match self {
            MetricField::Lifted { base, .. } => Some(base),
            MetricField::Coordinate { .. } => None,
        }
    }

    pub fn lift(&self) -> Option<&Lift> {
        match self {
            MetricField::Lifted { lift, .. } => Some(lift),
            MetricField::Coordinate { .. } => None,
        }
    }

    /// True when all entries are constants.
    pub fn is_constant(&self) -> bool {
        match self {
            MetricField::Coordinate { entries, .. } => entries.iter().flatten().all(Expr::is_constant),
            MetricField::Lifted { .. } => false,
        }
    }

    /// Entry jets at the given coordinate jets.
    pub fn jets<R: Real>(&self, coords: &[Jet<R>]) -> Result<Mat<Jet<R>>> {
        if coords.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: coords.len(),
            });
        }
        match self {
            MetricField::Coordinate { entries, .. } => {
                let m = entries.len();
                let mut out: Mat<Jet<R>> = vec![Vec::with_capacity(m); m];
                for i in 0..m {
                    for j in 0..m {
                        let v = if j < i { out[j][i].clone() } else { entries[i][j].eval(coords)? };
                        out[i].push(v);
                    }
                }
                Ok(out)
            }
            MetricField::Lifted { base, lift, .. } => crate::bundle::lift::assemble(base, lift, coords),
        }
    }

    pub fn values<R: Real>(&self, point: &[R]) -> Result<Mat<R>> {
        let seeds = Jet::seed(point, self.depth());
        Ok(self
            .jets(&seeds)?
            .iter()
            .map(|r| r.iter().map(Jet::value).collect())
            .collect())
    }
}
