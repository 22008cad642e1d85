use serde::{Deserialize, Serialize};

use crate::calculus::real::Real;
use crate::error::{Error, Result};

/// A coordinate chart: coordinate names plus an open box of allowed values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chart {
    names: Vec<String>,
    bounds: Vec<(f64, f64)>,
}

impl Chart {
    /// Unbounded chart with the given coordinate names.
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let bounds = vec![(f64::NEG_INFINITY, f64::INFINITY); names.len()];
        Chart { names, bounds }
    }

    /// Chart with coordinates `x1..xm`.
    pub fn numbered(prefix: &str, m: usize) -> Self {
        Chart::new((1..=m).map(|i| format!("{prefix}{i}")))
    }

    pub fn with_bounds(mut self, bounds: Vec<(f64, f64)>) -> Result<Self> {
        if bounds.len() != self.names.len() {
            return Err(Error::Dimension {
                expected: self.names.len(),
                got: bounds.len(),
            });
        }
        if let Some((i, _)) = bounds.iter().enumerate().find(|(_, (lo, hi))| !(lo < hi)) {
            return Err(Error::Scenario(format!(
                "empty interval for coordinate `{}`",
                self.names[i]
            )));
        }
        self.bounds = bounds;
        Ok(self)
    }

    /// Restricts coordinate `i` to the open interval `(lo, hi)`.
    pub fn bound(mut self, i: usize, lo: f64, hi: f64) -> Self {
        self.bounds[i] = (lo, hi);
        self
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn contains<R: Real>(&self, point: &[R]) -> bool {
        self.check(point).is_ok()
    }

    /// Errors unless `point` has the right length and lies strictly inside the bounds.
    pub fn check<R: Real>(&self, point: &[R]) -> Result<()> {
        if point.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: point.len(),
            });
        }
        for (i, (x, (lo, hi))) in point.iter().zip(&self.bounds).enumerate() {
            let x = x.as_f64();
            if !(x > *lo && x < *hi) {
                return Err(Error::OutOfDomain {
                    point: point.iter().map(|v| v.as_f64()).collect(),
                    coordinate: self.names[i].clone(),
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_are_open() {
        let c = Chart::new(["t", "x"]).bound(0, 1.0, f64::INFINITY);
        assert!(c.contains(&[2.0, -5.0]));
        assert!(!c.contains(&[1.0, 0.0]));
        assert!(matches!(c.check(&[0.5, 0.0]), Err(Error::OutOfDomain { .. })));
        assert!(matches!(c.check(&[2.0]), Err(Error::Dimension { .. })));
    }
}
