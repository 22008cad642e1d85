use crate::calculus::jet::Jet;
use crate::calculus::real::Real;
use crate::error::Result;
use crate::geometry::field::ScalarField;
use crate::geometry::linalg::{bilinear, mat_vec, Mat};
use crate::geometry::local::{LocalGeometry, Riemann};
use crate::geometry::metric::MetricField;
use crate::geometry::ops::curvature_apply;

/// Quantities derived from `f` at the base point.
#[derive(Debug, Clone)]
pub struct FieldPrims<R> {
    /// `None` when `f` is only known through its gradient.
    pub value: Option<R>,
    pub df: Vec<R>,
    pub grad: Vec<R>,
    /// `hess[k][i] = (∇ᵢ grad f)ᵏ`
    pub hess: Mat<R>,
    /// `hess2[i][j][k] = (∇²grad f)ᵢⱼᵏ`
    pub hess2: Vec<Mat<R>>,
    pub alpha: R,
    pub dalpha: Vec<R>,
    pub grad_alpha: Vec<R>,
    /// `hess_alpha[k][i] = (∇ᵢ grad α)ᵏ`
    pub hess_alpha: Mat<R>,
}

/// Values of the base geometry at one point, enough for every closed form.
#[derive(Debug, Clone)]
pub struct BasePrims<R> {
    pub x: Vec<R>,
    pub g: Mat<R>,
    pub ginv: Mat<R>,
    pub gamma: Vec<Mat<R>>,
    pub riem: Riemann<R>,
    /// `nabla_riem[i][l][a][j][k] = (∇ᵢR)ˡₐⱼₖ`
    pub nabla_riem: Vec<Riemann<R>>,
    pub f: Option<FieldPrims<R>>,
}

const SEED_ORDER: usize = 4;

impl<R: Real> BasePrims<R> {
    pub fn new(g: &MetricField, f: Option<&ScalarField>, x: &[R]) -> Result<Self> {
        let geo = LocalGeometry::at(g, x, SEED_ORDER + g.depth())?;
        let riem_jets = geo.riemann()?;
        let nabla_riem = nabla_riemann(&geo, &riem_jets)?;
        let riem = riem_jets
            .iter()
            .map(|a| a.iter().map(|b| b.iter().map(|c| c.iter().map(Jet::value).collect()).collect()).collect())
            .collect();
        let f = f.map(|f| field_prims(&geo, f)).transpose()?;
        Ok(BasePrims {
            x: x.to_vec(),
            g: geo.metric_values(),
            ginv: geo.inverse_values(),
            gamma: geo.christoffel_values(),
            riem,
            nabla_riem,
            f,
        })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn field(&self) -> &FieldPrims<R> {
        self.f.as_ref().expect("closed form needs a function")
    }

    pub fn inner(&self, a: &[R], b: &[R]) -> R {
        bilinear(&self.g, a, b)
    }

    pub fn norm_sq(&self, a: &[R]) -> R {
        self.inner(a, a)
    }

    /// `R(X,Y)Z`
    pub fn r(&self, x: &[R], y: &[R], z: &[R]) -> Vec<R> {
        curvature_apply(&self.riem, x, y, z)
    }

    /// `(∇_W R)(X,Y)Z`
    pub fn nabla_r(&self, w: &[R], x: &[R], y: &[R], z: &[R]) -> Vec<R> {
        let m = self.dim();
        let mut out = vec![R::zero(); m];
        for (i, &wi) in w.iter().enumerate() {
            if wi == R::zero() {
                continue;
            }
            let part = curvature_apply(&self.nabla_riem[i], x, y, z);
            for (o, p) in out.iter_mut().zip(part) {
                *o = *o + wi * p;
            }
        }
        out
    }

    /// `∇_X Y` for `Y` with constant components.
    pub fn nabla(&self, x: &[R], y: &[R]) -> Vec<R> {
        self.gamma.iter().map(|gk| bilinear(gk, x, y)).collect()
    }

    /// `∇_X grad f`
    pub fn hess_f(&self, x: &[R]) -> Vec<R> {
        mat_vec(&self.field().hess, x)
    }

    /// `∇²_{X,Y} grad f`
    pub fn hess2_f(&self, x: &[R], y: &[R]) -> Vec<R> {
        let h2 = &self.field().hess2;
        let m = self.dim();
        let mut out = vec![R::zero(); m];
        for i in 0..m {
            for j in 0..m {
                let c = x[i] * y[j];
                if c == R::zero() {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o = *o + c * h2[i][j][k];
                }
            }
        }
        out
    }

    /// `∇_X grad α`
    pub fn hess_alpha(&self, x: &[R]) -> Vec<R> {
        mat_vec(&self.field().hess_alpha, x)
    }

    /// `X(f) = df(X)`
    pub fn xf(&self, x: &[R]) -> R {
        dot(&self.field().df, x)
    }

    /// `X(α)`
    pub fn xalpha(&self, x: &[R]) -> R {
        dot(&self.field().dalpha, x)
    }
}

fn dot<R: Real>(a: &[R], b: &[R]) -> R {
    a.iter().zip(b).fold(R::zero(), |s, (&p, &q)| s + p * q)
}

fn nabla_riemann<R: Real>(geo: &LocalGeometry<R>, r: &Riemann<Jet<R>>) -> Result<Vec<Riemann<R>>> {
    let m = geo.dim();
    let gamma = geo.christoffel_values();
    let rv: Riemann<R> = r
        .iter()
        .map(|a| a.iter().map(|b| b.iter().map(|c| c.iter().map(Jet::value).collect()).collect()).collect())
        .collect();
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let mut ri = vec![vec![vec![vec![R::zero(); m]; m]; m]; m];
        for l in 0..m {
            for a in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        let mut s = r[l][a][j][k].d1(i)?;
                        for b in 0..m {
                            s = s + gamma[l][i][b] * rv[b][a][j][k]
                                - gamma[b][i][a] * rv[l][b][j][k]
                                - gamma[b][i][j] * rv[l][a][b][k]
                                - gamma[b][i][k] * rv[l][a][j][b];
                        }
                        ri[l][a][j][k] = s;
                    }
                }
            }
        }
        out.push(ri);
    }
    Ok(out)
}

fn field_prims<R: Real>(geo: &LocalGeometry<R>, f: &ScalarField) -> Result<FieldPrims<R>> {
    let m = geo.dim();
    let value = if f.is_gradient_only() {
        None
    } else {
        Some(f.value_jet(geo.coords())?.value())
    };
    let df_j = geo.differential(f)?;
    let grad_j = geo.raise(&df_j);
    let first: Vec<Vec<Jet<R>>> = (0..m).map(|i| geo.cov_deriv(&grad_j, i)).collect::<Result<_>>()?;
    let hess = (0..m).map(|k| (0..m).map(|i| first[i][k].value()).collect()).collect();
    let hess2 = geo
        .cov_hessian_vec(&grad_j)?
        .iter()
        .map(|row| row.iter().map(|v| v.iter().map(Jet::value).collect()).collect())
        .collect();
    let alpha_j = geo.alpha(f)?;
    let dalpha_j: Vec<Jet<R>> = (0..m).map(|i| alpha_j.partial_jet(i)).collect::<Result<_>>()?;
    let grad_alpha_j = geo.raise(&dalpha_j);
    let ha: Vec<Vec<Jet<R>>> = (0..m).map(|i| geo.cov_deriv(&grad_alpha_j, i)).collect::<Result<_>>()?;
    Ok(FieldPrims {
        value,
        df: df_j.iter().map(Jet::value).collect(),
        grad: grad_j.iter().map(Jet::value).collect(),
        hess,
        hess2,
        alpha: alpha_j.value(),
        dalpha: dalpha_j.iter().map(Jet::value).collect(),
        grad_alpha: grad_alpha_j.iter().map(Jet::value).collect(),
        hess_alpha: (0..m).map(|k| (0..m).map(|i| ha[i][k].value()).collect()).collect(),
    })
}
