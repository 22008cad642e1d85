use crate::calculus::expr::Expr;
use crate::calculus::jet::{Jet, DEFAULT_ORDER};
use crate::calculus::real::Real;
use crate::error::{Error, Result};
use crate::geometry::field::VectorField;
use crate::geometry::frame::Frame;
use crate::geometry::linalg::{bilinear, Mat};
use crate::geometry::local::{LocalGeometry, Riemann};
use crate::geometry::metric::MetricField;

/// A map between two charts given by component expressions in the domain
/// coordinates, with a metric on each side.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothMap {
    pub domain: MetricField,
    pub codomain: MetricField,
    pub components: Vec<Expr>,
}

impl SmoothMap {
    pub fn new(domain: MetricField, codomain: MetricField, components: Vec<Expr>) -> Result<Self> {
        if components.len() != codomain.dim() {
            return Err(Error::Dimension {
                expected: codomain.dim(),
                got: components.len(),
            });
        }
        if let Some(v) = components.iter().filter_map(Expr::max_var).max() {
            if v >= domain.dim() {
                return Err(Error::IndexOutOfRange {
                    index: v,
                    nvars: domain.dim(),
                });
            }
        }
        Ok(SmoothMap {
            domain,
            codomain,
            components,
        })
    }

    /// Identity between two metrics on charts of the same dimension.
    pub fn identity(domain: MetricField, codomain: MetricField) -> Result<Self> {
        if domain.dim() != codomain.dim() {
            return Err(Error::Dimension {
                expected: domain.dim(),
                got: codomain.dim(),
            });
        }
        let c = (0..domain.dim()).map(Expr::Var).collect();
        SmoothMap::new(domain, codomain, c)
    }

    /// Bundle projection `(x, y) ↦ x`.
    pub fn projection(bundle: MetricField, base: MetricField) -> Result<Self> {
        if bundle.dim() != 2 * base.dim() {
            return Err(Error::Dimension {
                expected: 2 * base.dim(),
                got: bundle.dim(),
            });
        }
        let c = (0..base.dim()).map(Expr::Var).collect();
        SmoothMap::new(bundle, base, c)
    }
}

/// Everything about a map at one domain point that tension, bitension and the
/// Jacobi operator need, as jets in the domain coordinates.
#[derive(Debug, Clone)]
pub struct MapJets<R: Real> {
    dom: LocalGeometry<R>,
    phi: Vec<Jet<R>>,
    /// `dphi[γ][i] = ∂ᵢφ^γ`
    dphi: Vec<Vec<Jet<R>>>,
    /// `ddphi[γ][i][j] = ∂ᵢ∂ⱼφ^γ`
    ddphi: Vec<Mat<Jet<R>>>,
    /// Codomain Christoffel symbols along `φ`: `gamma_c[γ][a][b]`.
    gamma_c: Vec<Mat<Jet<R>>>,
    riem_c: Riemann<R>,
    h: Mat<R>,
}

impl<R: Real> MapJets<R> {
    pub fn new(map: &SmoothMap, p: &[R]) -> Result<Self> {
        let order = DEFAULT_ORDER.max(3 + map.domain.depth());
        let dom = LocalGeometry::at(&map.domain, p, order)?;
        let phi: Vec<Jet<R>> = map
            .components
            .iter()
            .map(|e| e.eval(dom.coords()))
            .collect::<Result<_>>()?;
        let m = dom.dim();
        let dphi: Vec<Vec<Jet<R>>> = phi
            .iter()
            .map(|c| (0..m).map(|i| c.partial_jet(i)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let ddphi: Vec<Mat<Jet<R>>> = dphi
            .iter()
            .map(|row| {
                (0..m)
                    .map(|i| (0..m).map(|j| row[j].partial_jet(i)).collect::<Result<_>>())
                    .collect::<Result<_>>()
            })
            .collect::<Result<_>>()?;
        let q: Vec<R> = phi.iter().map(Jet::value).collect();
        let cod = LocalGeometry::at(&map.codomain, &q, 3 + map.codomain.depth())?;
        let gamma_c: Vec<Mat<Jet<R>>> = cod
            .gamma()
            .iter()
            .map(|mat| {
                mat.iter()
                    .map(|row| row.iter().map(|c| c.compose(&phi)).collect::<Result<_>>())
                    .collect::<Result<_>>()
            })
            .collect::<Result<_>>()?;
        let riem_c = cod.riemann_values()?;
        let h = cod.metric_values();
        Ok(MapJets {
            dom,
            phi,
            dphi,
            ddphi,
            gamma_c,
            riem_c,
            h,
        })
    }

    pub fn domain(&self) -> &LocalGeometry<R> {
        &self.dom
    }

    pub fn image(&self) -> Vec<R> {
        self.phi.iter().map(Jet::value).collect()
    }

    /// Codomain metric at `φ(p)`.
    pub fn codomain_metric(&self) -> &Mat<R> {
        &self.h
    }

    pub fn codomain_riemann(&self) -> &Riemann<R> {
        &self.riem_c
    }

    pub fn differential_values(&self) -> Mat<R> {
        self.dphi.iter().map(|r| r.iter().map(Jet::value).collect()).collect()
    }

    pub fn h_norm(&self, v: &[R]) -> R {
        bilinear(&self.h, v, v).max(R::zero()).sqrt()
    }

    fn n(&self) -> usize {
        self.phi.len()
    }

    /// `τ^γ = gⁱʲ(∂ᵢ∂ⱼφ^γ − Γᵏᵢⱼ∂ₖφ^γ + Γ^γ_ab ∂ᵢφᵃ∂ⱼφᵇ)` as jets.
    pub fn tension_jets(&self) -> Vec<Jet<R>> {
        let m = self.dom.dim();
        let n = self.n();
        let gd = self.dom.gamma();
        let ginv = self.dom.ginv();
        (0..n)
            .map(|c| {
                let mut acc: Option<Jet<R>> = None;
                for i in 0..m {
                    for j in 0..m {
                        let mut s = self.ddphi[c][i][j].clone();
                        for k in 0..m {
                            s = &s - &(&gd[k][i][j] * &self.dphi[c][k]);
                        }
                        for a in 0..n {
                            for b in 0..n {
                                s = &s + &(&self.gamma_c[c][a][b] * &(&self.dphi[a][i] * &self.dphi[b][j]));
                            }
                        }
                        let t = &ginv[i][j] * &s;
                        acc = Some(match acc {
                            None => t,
                            Some(x) => &x + &t,
                        });
                    }
                }
                acc.expect("non-empty domain")
            })
            .collect()
    }

    pub fn tension(&self) -> Vec<R> {
        self.tension_jets().iter().map(Jet::value).collect()
    }

    /// `(∇^φ_{∂ⱼ}V)^γ = ∂ⱼV^γ + Γ^γ_ab ∂ⱼφᵃ Vᵇ`, one order lower than `V`.
    pub fn pullback_cov_deriv_jets(&self, v: &[Jet<R>], j: usize) -> Result<Vec<Jet<R>>> {
        let n = self.n();
        (0..n)
            .map(|c| {
                let mut s = v[c].partial_jet(j)?;
                for a in 0..n {
                    for b in 0..n {
                        s = &s + &(&self.gamma_c[c][a][b] * &(&self.dphi[a][j] * &v[b]));
                    }
                }
                Ok(s)
            })
            .collect()
    }

    /// `(∇^φ_W V)` at the point for a domain vector `W`.
    pub fn pullback_cov_deriv(&self, v: &[Jet<R>], w: &[R]) -> Result<Vec<R>> {
        let n = self.n();
        let mut out = vec![R::zero(); n];
        for (j, &wj) in w.iter().enumerate() {
            let d = self.pullback_cov_deriv_jets(v, j)?;
            for c in 0..n {
                out[c] = out[c] + wj * d[c].value();
            }
        }
        Ok(out)
    }

    /// `(∇^φ)²V` indexed `[i][j][γ]`.
    pub fn second_cov_deriv(&self, v: &[Jet<R>]) -> Result<Vec<Mat<Jet<R>>>> {
        let m = self.dom.dim();
        let n = self.n();
        let gd = self.dom.gamma();
        let first: Vec<Vec<Jet<R>>> = (0..m)
            .map(|j| self.pullback_cov_deriv_jets(v, j))
            .collect::<Result<_>>()?;
        let mut out = Vec::with_capacity(m);
        for i in 0..m {
            let mut row = Vec::with_capacity(m);
            for j in 0..m {
                let mut comp = self.pullback_cov_deriv_jets(&first[j], i)?;
                for (c, x) in comp.iter_mut().enumerate().take(n) {
                    for k in 0..m {
                        *x = &*x - &(&gd[k][i][j] * &first[k][c]);
                    }
                }
                row.push(comp);
            }
            out.push(row);
        }
        Ok(out)
    }

    /// Trace weights `Σ_a E_aⁱE_aʲ` of a domain frame, or `gⁱʲ`.
    pub fn weights(&self, frame: Option<&Frame<R>>) -> Mat<R> {
        match frame {
            Some(f) => f.trace_tensor(),
            None => self.dom.inverse_values(),
        }
    }

    /// `J(V) = −Σ R^N(V, dφE_a)dφE_a − Σ ((∇^φ)²V)(E_a, E_a)`.
    pub fn jacobi(&self, v: &[Jet<R>], frame: Option<&Frame<R>>) -> Result<Vec<R>> {
        let m = self.dom.dim();
        let n = self.n();
        let w = self.weights(frame);
        let hess = self.second_cov_deriv(v)?;
        let dphi = self.differential_values();
        let vv: Vec<R> = v.iter().map(Jet::value).collect();
        let mut out = vec![R::zero(); n];
        for (c, o) in out.iter_mut().enumerate() {
            let mut s = R::zero();
            for i in 0..m {
                for j in 0..m {
                    if w[i][j] == R::zero() {
                        continue;
                    }
                    let mut curv = R::zero();
                    for a in 0..n {
                        for b in 0..n {
                            for d in 0..n {
                                curv = curv + self.riem_c[c][a][b][d] * vv[a] * dphi[b][i] * dphi[d][j];
                            }
                        }
                    }
                    s = s + w[i][j] * (curv + hess[i][j][c].value());
                }
            }
            *o = -s;
        }
        Ok(out)
    }

    pub fn bitension(&self, frame: Option<&Frame<R>>) -> Result<Vec<R>> {
        self.jacobi(&self.tension_jets(), frame)
    }
}

pub fn tension<R: Real>(map: &SmoothMap, p: &[R]) -> Result<Vec<R>> {
    Ok(MapJets::new(map, p)?.tension())
}

pub fn bitension<R: Real>(map: &SmoothMap, p: &[R]) -> Result<Vec<R>> {
    MapJets::new(map, p)?.bitension(None)
}

pub fn bitension_with_frame<R: Real>(map: &SmoothMap, p: &[R], frame: &Frame<R>) -> Result<Vec<R>> {
    MapJets::new(map, p)?.bitension(Some(frame))
}

/// `∇^φ_W V` for `V` given by its component jets along `φ`.
pub fn pullback_cov_deriv<R, F>(map: &SmoothMap, p: &[R], v: F, w: &[R]) -> Result<Vec<R>>
where
    R: Real,
    F: Fn(&LocalGeometry<R>) -> Result<Vec<Jet<R>>>,
{
    let mj = MapJets::new(map, p)?;
    let vj = v(mj.domain())?;
    mj.pullback_cov_deriv(&vj, w)
}

/// Jacobi operator applied to a field along `φ` built from the domain geometry.
pub fn jacobi<R, F>(map: &SmoothMap, p: &[R], v: F) -> Result<Vec<R>>
where
    R: Real,
    F: Fn(&LocalGeometry<R>) -> Result<Vec<Jet<R>>>,
{
    let mj = MapJets::new(map, p)?;
    let vj = v(mj.domain())?;
    mj.jacobi(&vj, None)
}

/// Jacobi operator applied to a vector field whose components are read in the
/// codomain basis.
pub fn jacobi_field<R: Real>(map: &SmoothMap, p: &[R], v: &VectorField) -> Result<Vec<R>> {
    jacobi(map, p, |geo| v.jets(geo))
}
