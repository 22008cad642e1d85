//! Pointwise geometric quantities on a chart.

use crate::calculus::real::Real;
use crate::error::Result;
use crate::geometry::field::{ScalarField, VectorField};
use crate::geometry::frame::{orthonormal_frame_from_values, Frame};
use crate::geometry::linalg::{bilinear, mat_vec, Mat};
use crate::geometry::local::{LocalGeometry, Riemann};
use crate::geometry::metric::MetricField;

fn local<R: Real>(g: &MetricField, p: &[R], need: usize) -> Result<LocalGeometry<R>> {
    LocalGeometry::at(g, p, need + g.depth())
}

fn trace_weights<R: Real>(geo: &LocalGeometry<R>, frame: Option<&Frame<R>>) -> Mat<R> {
    match frame {
        Some(f) => f.trace_tensor(),
        None => geo.inverse_values(),
    }
}

pub fn metric_at<R: Real>(g: &MetricField, p: &[R]) -> Result<Mat<R>> {
    Ok(local(g, p, 1)?.metric_values())
}

pub fn inverse_metric_at<R: Real>(g: &MetricField, p: &[R]) -> Result<Mat<R>> {
    Ok(local(g, p, 1)?.inverse_values())
}

/// `Γ[k][i][j]`
pub fn christoffel<R: Real>(g: &MetricField, p: &[R]) -> Result<Vec<Mat<R>>> {
    Ok(local(g, p, 1)?.christoffel_values())
}

/// `R[l][i][j][k]`
pub fn riemann<R: Real>(g: &MetricField, p: &[R]) -> Result<Riemann<R>> {
    local(g, p, 2)?.riemann_values()
}

/// `R(X,Y)Z`
pub fn curvature_apply<R: Real>(r: &Riemann<R>, x: &[R], y: &[R], z: &[R]) -> Vec<R> {
    r.iter()
        .map(|rl| {
            let mut s = R::zero();
            for (i, &xi) in x.iter().enumerate() {
                for (j, &yj) in y.iter().enumerate() {
                    for (k, &zk) in z.iter().enumerate() {
                        s = s + rl[i][j][k] * xi * yj * zk;
                    }
                }
            }
            s
        })
        .collect()
}

/// `Σ_a R(X,E_a)E_a`, summed with `gⁱʲ` when no frame is given.
pub fn ricci_apply<R: Real>(r: &Riemann<R>, weights: &[Vec<R>], x: &[R]) -> Vec<R> {
    r.iter()
        .map(|rl| {
            let mut s = R::zero();
            for (i, &xi) in x.iter().enumerate() {
                for (j, wj) in weights.iter().enumerate() {
                    for (k, &w) in wj.iter().enumerate() {
                        s = s + rl[i][j][k] * xi * w;
                    }
                }
            }
            s
        })
        .collect()
}

pub fn ricci_operator<R: Real>(g: &MetricField, p: &[R], x: &[R], frame: Option<&Frame<R>>) -> Result<Vec<R>> {
    let geo = local(g, p, 2)?;
    let r = geo.riemann_values()?;
    Ok(ricci_apply(&r, &trace_weights(&geo, frame), x))
}

pub fn grad<R: Real>(f: &ScalarField, g: &MetricField, p: &[R]) -> Result<Vec<R>> {
    let geo = local(g, p, 1)?;
    Ok(geo.grad(f)?.iter().map(|j| j.value()).collect())
}

/// `∇_X grad f`
pub fn nabla_grad<R: Real>(f: &ScalarField, g: &MetricField, p: &[R], x: &[R]) -> Result<Vec<R>> {
    covariant_derivative(&VectorField::Gradient(f.clone()), g, p, x)
}

/// `∇_X V` for a vector field `V`.
pub fn covariant_derivative<R: Real>(v: &VectorField, g: &MetricField, p: &[R], x: &[R]) -> Result<Vec<R>> {
    let geo = local(g, p, 2)?;
    let vj = v.jets(&geo)?;
    let m = geo.dim();
    let mut out = vec![R::zero(); m];
    for (i, &xi) in x.iter().enumerate() {
        let d = geo.cov_deriv(&vj, i)?;
        for k in 0..m {
            out[k] = out[k] + xi * d[k].value();
        }
    }
    Ok(out)
}

pub fn laplacian<R: Real>(f: &ScalarField, g: &MetricField, p: &[R], frame: Option<&Frame<R>>) -> Result<R> {
    let geo = local(g, p, 2)?;
    let h = geo.hessian(f)?;
    let w = trace_weights(&geo, frame);
    let mut s = R::zero();
    for i in 0..geo.dim() {
        for j in 0..geo.dim() {
            s = s + w[i][j] * h[i][j].value();
        }
    }
    Ok(s)
}

/// `Tr_g ∇²V`
pub fn trace_hessian_vec<R: Real>(
    v: &VectorField,
    g: &MetricField,
    p: &[R],
    frame: Option<&Frame<R>>,
) -> Result<Vec<R>> {
    let geo = local(g, p, 3)?;
    let vj = v.jets(&geo)?;
    let h = geo.cov_hessian_vec(&vj)?;
    let w = trace_weights(&geo, frame);
    let m = geo.dim();
    let mut out = vec![R::zero(); m];
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                out[k] = out[k] + w[i][j] * h[i][j][k].value();
            }
        }
    }
    Ok(out)
}

pub fn alpha<R: Real>(f: &ScalarField, g: &MetricField, p: &[R]) -> Result<R> {
    Ok(local(g, p, 1)?.alpha(f)?.value())
}

/// Orthonormal frame at `p`; with `align`, the first vector is `align/‖align‖`.
pub fn orthonormal_frame<R: Real>(g: &MetricField, p: &[R], align: Option<&[R]>) -> Result<Frame<R>> {
    orthonormal_frame_from_values(&metric_at(g, p)?, p, align)
}

/// `g(u, v)` at `p`.
pub fn inner<R: Real>(g: &MetricField, p: &[R], u: &[R], v: &[R]) -> Result<R> {
    Ok(bilinear(&metric_at(g, p)?, u, v))
}

/// `g⁻¹ w` at `p`.
pub fn raise<R: Real>(g: &MetricField, p: &[R], w: &[R]) -> Result<Vec<R>> {
    Ok(mat_vec(&inverse_metric_at(g, p)?, w))
}
