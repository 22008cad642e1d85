use serde::{Deserialize, Serialize};

use crate::calculus::jet::Jet;
use crate::calculus::real::Real;
use crate::error::{Error, Result};
use crate::geometry::frame::{gram_schmidt, orthonormal_frame_from_values, Frame};
use crate::geometry::linalg::{bilinear, Mat};
use crate::geometry::local::{sum_products, LocalGeometry};
use crate::geometry::metric::{Lift, MetricField};
use crate::geometry::ops::christoffel;

/// A point `(x, u)` of the tangent bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundlePoint<R> {
    pub x: Vec<R>,
    pub u: Vec<R>,
}

impl<R: Real> BundlePoint<R> {
    pub fn new(x: Vec<R>, u: Vec<R>) -> Result<Self> {
        if x.len() != u.len() {
            return Err(Error::Dimension {
                expected: x.len(),
                got: u.len(),
            });
        }
        Ok(BundlePoint { x, u })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// Induced coordinates `(x, u)`.
    pub fn coords(&self) -> Vec<R> {
        self.x.iter().chain(&self.u).copied().collect()
    }

    pub fn from_coords(c: &[R]) -> Self {
        let m = c.len() / 2;
        BundlePoint {
            x: c[..m].to_vec(),
            u: c[m..].to_vec(),
        }
    }
}

/// A tangent vector to `TM` in induced coordinates `(∂/∂xⁱ, ∂/∂yⁱ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedVector<R> {
    pub point: BundlePoint<R>,
    pub components: Vec<R>,
}

/// `Aᵏᵢ = uʲΓᵏⱼᵢ` from Christoffel values.
pub fn connection_values<R: Real>(gamma: &[Mat<R>], u: &[R]) -> Mat<R> {
    let m = u.len();
    (0..m)
        .map(|k| {
            (0..m)
                .map(|i| (0..m).fold(R::zero(), |s, j| s + u[j] * gamma[k][j][i]))
                .collect()
        })
        .collect()
}

impl<R: Real> LiftedVector<R> {
    /// Splits into `(X, Y)` with `self = X^H + Y^V`.
    pub fn decompose(&self, gamma: &[Mat<R>]) -> (Vec<R>, Vec<R>) {
        let m = self.point.dim();
        let a = connection_values(gamma, &self.point.u);
        let h = self.components[..m].to_vec();
        let v = (0..m)
            .map(|k| {
                let ah = (0..m).fold(R::zero(), |s, i| s + a[k][i] * h[i]);
                self.components[m + k] + ah
            })
            .collect();
        (h, v)
    }

    pub fn horizontal_part(&self, gamma: &[Mat<R>]) -> Vec<R> {
        self.decompose(gamma).0
    }

    pub fn vertical_part(&self, gamma: &[Mat<R>]) -> Vec<R> {
        self.decompose(gamma).1
    }
}

/// `X^H` from Christoffel values at the base point.
pub fn horizontal_lift_with<R: Real>(x: &[R], gamma: &[Mat<R>], p: &BundlePoint<R>) -> LiftedVector<R> {
    let m = p.dim();
    let a = connection_values(gamma, &p.u);
    let mut c = x.to_vec();
    for k in 0..m {
        c.push(-(0..m).fold(R::zero(), |s, i| s + a[k][i] * x[i]));
    }
    LiftedVector {
        point: p.clone(),
        components: c,
    }
}

/// `X^H = (Xⁱ, −uʲΓᵏⱼᵢXⁱ)`
pub fn horizontal_lift<R: Real>(x: &[R], p: &BundlePoint<R>, g: &MetricField) -> Result<LiftedVector<R>> {
    let gamma = christoffel(g, &p.x)?;
    Ok(horizontal_lift_with(x, &gamma, p))
}

/// `X^V = (0, X)`
pub fn vertical_lift<R: Real>(x: &[R], p: &BundlePoint<R>) -> LiftedVector<R> {
    let mut c = vec![R::zero(); x.len()];
    c.extend_from_slice(x);
    LiftedVector {
        point: p.clone(),
        components: c,
    }
}

/// Horizontal lift of a field given by jets over the bundle variables, with
/// `geo` the base geometry at the same jets and `y` the fibre coordinates.
pub fn horizontal_lift_jets<R: Real>(x: &[Jet<R>], geo: &LocalGeometry<R>, y: &[Jet<R>]) -> Vec<Jet<R>> {
    let m = x.len();
    let a = super::lift::connection_map(geo.gamma(), y);
    let mut c = x.to_vec();
    for row in a.iter().take(m) {
        c.push(-sum_products(row, x));
    }
    c
}

pub fn vertical_lift_jets<R: Real>(x: &[Jet<R>]) -> Vec<Jet<R>> {
    let mut c: Vec<Jet<R>> = x.iter().map(Jet::zero_like).collect();
    c.extend_from_slice(x);
    c
}

/// Orthonormal frame of `TM` at `p` for the lift of `g`:
/// `(E₁^H,…,E_m^H, c₁E₁^V,…,c_mE_m^V)`.
///
/// For the Mus-Gradient lift `E₁` is aligned with `grad f` and `c₁ = 1/√α`;
/// for Mus-Sasaki every `c_a = 1/√f`.
pub fn adapted_frame<R: Real>(p: &BundlePoint<R>, g: &MetricField, lift: &Lift) -> Result<Frame<R>> {
    let m = p.dim();
    let geo = LocalGeometry::at(g, &p.x, 1 + g.depth())?;
    let gamma = geo.christoffel_values();
    let gv = geo.metric_values();
    let (base, scales): (Frame<R>, Vec<R>) = match lift {
        Lift::Sasaki => (orthonormal_frame_from_values(&gv, &p.x, None)?, vec![R::one(); m]),
        Lift::MusSasaki(f) => {
            let fv = f.value_jet(geo.coords())?.value();
            (
                orthonormal_frame_from_values(&gv, &p.x, None)?,
                vec![R::one() / fv.sqrt(); m],
            )
        }
        Lift::MusGradient(f) => {
            let grad: Vec<R> = geo.grad(f)?.iter().map(Jet::value).collect();
            let alpha = R::one() + bilinear(&gv, &grad, &grad);
            let frame = orthonormal_frame_from_values(&gv, &p.x, Some(&grad))?;
            let mut s = vec![R::one(); m];
            s[0] = R::one() / alpha.sqrt();
            (frame, s)
        }
    };
    let mut vectors = Vec::with_capacity(2 * m);
    for e in &base.vectors {
        vectors.push(horizontal_lift_with(e, &gamma, p).components);
    }
    for (e, &c) in base.vectors.iter().zip(&scales) {
        let scaled: Vec<R> = e.iter().map(|&x| x * c).collect();
        vectors.push(vertical_lift(&scaled, p).components);
    }
    Ok(Frame {
        point: p.coords(),
        vectors,
    })
}

/// Orthonormal frame of `TM` from arbitrary spanning vectors under the
/// assembled lifted metric.
pub fn lifted_frame_from<R: Real>(lifted: &MetricField, p: &BundlePoint<R>, candidates: &[Vec<R>]) -> Result<Frame<R>> {
    let gv = crate::geometry::ops::metric_at(lifted, &p.coords())?;
    gram_schmidt(&gv, &p.coords(), candidates)
}
