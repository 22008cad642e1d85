use crate::calculus::jet::Jet;
use crate::calculus::real::Real;
use crate::error::{Error, Result};
use crate::geometry::field::ScalarField;
use crate::geometry::linalg::{spd_inverse, Mat};
use crate::geometry::metric::MetricField;

/// Jets of `g`, `g⁻¹` and `Γ` around one point.
///
/// Coordinate `i` is the seeded variable `i`, so every derived quantity can be
/// differentiated again with [`Jet::partial_jet`].
#[derive(Debug, Clone)]
pub struct LocalGeometry<R: Real> {
    coords: Vec<Jet<R>>,
    point: Vec<R>,
    g: Mat<Jet<R>>,
    ginv: Mat<Jet<R>>,
    /// `gamma[k][i][j] = Γᵏᵢⱼ`
    gamma: Vec<Mat<Jet<R>>>,
}

pub type Riemann<R> = Vec<Vec<Vec<Vec<R>>>>;

impl<R: Real> LocalGeometry<R> {
    pub fn new(metric: &MetricField, coords: Vec<Jet<R>>) -> Result<Self> {
        let point: Vec<R> = coords.iter().map(Jet::value).collect();
        metric.chart().check(&point)?;
        let m = metric.dim();
        let g = metric.jets(&coords)?;
        let ginv = spd_inverse(&g).map_err(|e| match e {
            Error::NotPositiveDefinite { pivot, value, .. } => Error::NotPositiveDefinite {
                point: point.iter().map(|v| v.as_f64()).collect(),
                pivot,
                value,
            },
            other => other,
        })?;
        // dg[l][i][j] = ∂ₗ g_ij
        let mut dg = Vec::with_capacity(m);
        for l in 0..m {
            let mut d: Mat<Jet<R>> = vec![Vec::with_capacity(m); m];
            for i in 0..m {
                for j in 0..m {
                    let v = if j < i { d[j][i].clone() } else { g[i][j].partial_jet(l)? };
                    d[i].push(v);
                }
            }
            dg.push(d);
        }
        // first kind: [ij,l] = ½(∂ᵢg_jl + ∂ⱼg_il − ∂ₗg_ij)
        let mut first = vec![vec![Vec::with_capacity(m); m]; m];
        for i in 0..m {
            for j in 0..m {
                for l in 0..m {
                    let s = &(&dg[i][j][l] + &dg[j][i][l]) - &dg[l][i][j];
                    first[i][j].push(s.scale(R::lit(0.5)));
                }
            }
        }
        let mut gamma: Vec<Mat<Jet<R>>> = vec![vec![Vec::with_capacity(m); m]; m];
        for k in 0..m {
            for i in 0..m {
                for j in 0..m {
                    if j < i {
                        let v: Jet<R> = gamma[k][j][i].clone();
                        gamma[k][i].push(v);
                        continue;
                    }
                    let s = sum_products(&ginv[k], &first[i][j]);
                    gamma[k][i].push(s);
                }
            }
        }
        Ok(LocalGeometry {
            coords,
            point,
            g,
            ginv,
            gamma,
        })
    }

    /// Seeds `point` at `order` and builds the local geometry.
    pub fn at(metric: &MetricField, point: &[R], order: usize) -> Result<Self> {
        LocalGeometry::new(metric, Jet::seed(point, order))
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Jet<R>] {
        &self.coords
    }

    pub fn point(&self) -> &[R] {
        &self.point
    }

    pub fn g(&self) -> &Mat<Jet<R>> {
        &self.g
    }

    pub fn ginv(&self) -> &Mat<Jet<R>> {
        &self.ginv
    }

    pub fn gamma(&self) -> &[Mat<Jet<R>>] {
        &self.gamma
    }

    pub fn metric_values(&self) -> Mat<R> {
        values2(&self.g)
    }

    pub fn inverse_values(&self) -> Mat<R> {
        values2(&self.ginv)
    }

    pub fn christoffel_values(&self) -> Vec<Mat<R>> {
        self.gamma.iter().map(|m| values2(m)).collect()
    }

    /// `R[l][i][j][k]`, the components of `R(∂ᵢ,∂ⱼ)∂ₖ`.
    pub fn riemann(&self) -> Result<Riemann<Jet<R>>> {
        let m = self.dim();
        // dgamma[i][l][j][k] = ∂ᵢ Γˡⱼₖ
        let mut dgamma = Vec::with_capacity(m);
        for i in 0..m {
            let mut a = Vec::with_capacity(m);
            for l in 0..m {
                let mut b = Vec::with_capacity(m);
                for j in 0..m {
                    let row: Result<Vec<_>> = (0..m).map(|k| self.gamma[l][j][k].partial_jet(i)).collect();
                    b.push(row?);
                }
                a.push(b);
            }
            dgamma.push(a);
        }
        let mut out: Riemann<Jet<R>> = vec![vec![vec![Vec::with_capacity(m); m]; m]; m];
        for l in 0..m {
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        if j < i {
                            let v = -&out[l][j][i][k];
                            out[l][i][j].push(v);
                            continue;
                        }
                        let mut s = &dgamma[i][l][j][k] - &dgamma[j][l][i][k];
                        for a in 0..m {
                            s = &s + &(&self.gamma[l][i][a] * &self.gamma[a][j][k]);
                            s = &s - &(&self.gamma[l][j][a] * &self.gamma[a][i][k]);
                        }
                        out[l][i][j].push(s);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn riemann_values(&self) -> Result<Riemann<R>> {
        Ok(self
            .riemann()?
            .iter()
            .map(|a| a.iter().map(|b| values2(b)).collect())
            .collect())
    }

    /// Jets of `∂ᵢf`.
    pub fn differential(&self, f: &ScalarField) -> Result<Vec<Jet<R>>> {
        f.differential_jets(&self.coords)
    }

    /// Jets of `grad f = gⁱʲ∂ⱼf`.
    pub fn grad(&self, f: &ScalarField) -> Result<Vec<Jet<R>>> {
        let df = self.differential(f)?;
        Ok(self.raise(&df))
    }

    pub fn raise(&self, w: &[Jet<R>]) -> Vec<Jet<R>> {
        self.ginv
            .iter()
            .map(|row| sum_products(row, w))
            .collect()
    }

    pub fn lower(&self, v: &[Jet<R>]) -> Vec<Jet<R>> {
        self.g.iter().map(|row| sum_products(row, v)).collect()
    }

    /// `(∇ᵢV)ᵏ = ∂ᵢVᵏ + ΓᵏᵢⱼVʲ`, one order lower than `V`.
    pub fn cov_deriv(&self, v: &[Jet<R>], i: usize) -> Result<Vec<Jet<R>>> {
        (0..self.dim())
            .map(|k| Ok(&v[k].partial_jet(i)? + &sum_products(&self.gamma[k][i], v)))
            .collect()
    }

    /// `(∇²V)ᵢⱼ = ∇ᵢ(∇V)(∂ⱼ) − (∇V)(∇ᵢ∂ⱼ)`, indexed `[i][j][k]`.
    pub fn cov_hessian_vec(&self, v: &[Jet<R>]) -> Result<Vec<Mat<Jet<R>>>> {
        let m = self.dim();
        let first: Vec<Vec<Jet<R>>> = (0..m).map(|j| self.cov_deriv(v, j)).collect::<Result<_>>()?;
        let mut out = Vec::with_capacity(m);
        for i in 0..m {
            let mut row = Vec::with_capacity(m);
            for j in 0..m {
                let outer = self.cov_deriv(&first[j], i)?;
                let comp: Vec<Jet<R>> = (0..m)
                    .map(|k| {
                        let mut s = outer[k].clone();
                        for a in 0..m {
                            s = &s - &(&self.gamma[a][i][j] * &first[a][k]);
                        }
                        s
                    })
                    .collect();
                row.push(comp);
            }
            out.push(row);
        }
        Ok(out)
    }

    /// Covariant Hessian `∂ᵢ∂ⱼf − Γᵏᵢⱼ∂ₖf`.
    pub fn hessian(&self, f: &ScalarField) -> Result<Mat<Jet<R>>> {
        let df = self.differential(f)?;
        let m = self.dim();
        let mut h = Vec::with_capacity(m);
        for i in 0..m {
            let mut row = Vec::with_capacity(m);
            for j in 0..m {
                let mut s = df[j].partial_jet(i)?;
                for k in 0..m {
                    s = &s - &(&self.gamma[k][i][j] * &df[k]);
                }
                row.push(s);
            }
            h.push(row);
        }
        Ok(h)
    }

    /// `Δf = gⁱʲ Hess(f)ᵢⱼ`
    pub fn laplacian(&self, f: &ScalarField) -> Result<Jet<R>> {
        let h = self.hessian(f)?;
        Ok(trace_with(&self.ginv, &h))
    }

    /// `α = 1 + ‖grad f‖²`
    pub fn alpha(&self, f: &ScalarField) -> Result<Jet<R>> {
        let df = self.differential(f)?;
        let grad = self.raise(&df);
        Ok(sum_products(&df, &grad).add_real(R::one()))
    }
}

fn values2<R: Real>(m: &[Vec<Jet<R>>]) -> Mat<R> {
    m.iter().map(|r| r.iter().map(Jet::value).collect()).collect()
}

/// `Σ aᵢ bᵢ`
pub fn sum_products<R: Real>(a: &[Jet<R>], b: &[Jet<R>]) -> Jet<R> {
    let mut it = a.iter().zip(b);
    let (x, y) = it.next().expect("non-empty");
    it.fold(x * y, |s, (x, y)| &s + &(x * y))
}

/// `Σᵢⱼ aⁱʲ bᵢⱼ`
pub fn trace_with<R: Real>(a: &[Vec<Jet<R>>], b: &[Vec<Jet<R>>]) -> Jet<R> {
    let mut s: Option<Jet<R>> = None;
    for (ra, rb) in a.iter().zip(b) {
        let t = sum_products(ra, rb);
        s = Some(match s {
            None => t,
            Some(s) => &s + &t,
        });
    }
    s.expect("non-empty")
}
