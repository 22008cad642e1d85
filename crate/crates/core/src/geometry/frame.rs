use crate::calculus::real::Real;
use crate::error::{Error, Result};
use crate::geometry::linalg::{bilinear, Mat};

/// Tangent vectors at a point, orthonormal for some metric when produced by
/// [`gram_schmidt`].
#[derive(Debug, Clone, PartialEq)]
pub struct Frame<R: Real> {
    pub point: Vec<R>,
    pub vectors: Vec<Vec<R>>,
}

impl<R: Real> Frame<R> {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// `G[a][b] = g(E_a, E_b)`
    pub fn gram(&self, g: &[Vec<R>]) -> Mat<R> {
        self.vectors
            .iter()
            .map(|a| self.vectors.iter().map(|b| bilinear(g, a, b)).collect())
            .collect()
    }

    /// `Σ_a E_aⁱ E_aʲ`, which equals `gⁱʲ` for an orthonormal frame.
    pub fn trace_tensor(&self) -> Mat<R> {
        let n = self.vectors.first().map_or(0, Vec::len);
        let mut t = vec![vec![R::zero(); n]; n];
        for e in &self.vectors {
            for i in 0..n {
                for j in 0..n {
                    t[i][j] = t[i][j] + e[i] * e[j];
                }
            }
        }
        t
    }
}

/// Orthonormalises `candidates` in order under `g`, dropping vectors that are
/// already spanned, until `g.len()` vectors are collected.
pub fn gram_schmidt<R: Real>(g: &[Vec<R>], point: &[R], candidates: &[Vec<R>]) -> Result<Frame<R>> {
    let n = g.len();
    let mut out: Vec<Vec<R>> = Vec::with_capacity(n);
    let tiny = R::lit(1e-10);
    for c in candidates {
        if out.len() == n {
            break;
        }
        let scale = bilinear(g, c, c).sqrt();
        if !(scale > R::zero()) {
            continue;
        }
        let mut v = c.clone();
        // two passes keep the result orthonormal to working precision
        for _ in 0..2 {
            for e in &out {
                let p = bilinear(g, &v, e);
                for (vi, &ei) in v.iter_mut().zip(e) {
                    *vi = *vi - p * ei;
                }
            }
        }
        let len = bilinear(g, &v, &v).sqrt();
        if len <= tiny * scale {
            continue;
        }
        out.push(v.iter().map(|&x| x / len).collect());
    }
    if out.len() < n {
        return Err(Error::ShapeMismatch(format!(
            "candidates span only {} of {} dimensions",
            out.len(),
            n
        )));
    }
    Ok(Frame {
        point: point.to_vec(),
        vectors: out,
    })
}

/// Gram–Schmidt over the coordinate frame, optionally starting from `align`.
pub fn orthonormal_frame_from_values<R: Real>(g: &[Vec<R>], point: &[R], align: Option<&[R]>) -> Result<Frame<R>> {
    let n = g.len();
    let mut candidates = Vec::with_capacity(n + 1);
    if let Some(a) = align {
        let norm = bilinear(g, a, a).sqrt();
        if !(norm > R::lit(1e-10)) {
            return Err(Error::DegenerateAlign { norm: norm.as_f64() });
        }
        candidates.push(a.to_vec());
    }
    for i in 0..n {
        let mut e = vec![R::zero(); n];
        e[i] = R::one();
        candidates.push(e);
    }
    gram_schmidt(g, point, &candidates)
}
