use crate::calculus::jet::Jet;
use crate::calculus::multi_index::MultiIndex;
use crate::calculus::real::Real;
use crate::error::{Error, Result};
use crate::geometry::field::ScalarField;
use crate::geometry::linalg::{add, bilinear, scale};
use crate::geometry::local::{sum_products, trace_with, LocalGeometry};
use crate::geometry::metric::MetricField;
use crate::geometry::ops::ricci_apply;
use crate::harmonic::map::{jacobi, SmoothMap};
use crate::paperlib::closed::Split;
use crate::paperlib::prims::BasePrims;

/// `τ(π_α)` in its two printed forms: `(1/α)∇_{grad f}grad f` and
/// `grad α / 2α`.
pub fn tension_pi_alpha_closed<R: Real>(b: &BasePrims<R>) -> (Vec<R>, Vec<R>) {
    let fp = b.field();
    let first = scale(R::one() / fp.alpha, &b.hess_f(&fp.grad));
    let second = scale(R::one() / (R::lit(2.0) * fp.alpha), &fp.grad_alpha);
    (first, second)
}

/// Jets of `ln α`, its differential and gradient on `geo`.
struct LogAlpha<R: Real> {
    dla: Vec<Jet<R>>,
    grad_la: Vec<Jet<R>>,
}

fn log_alpha<R: Real>(geo: &LocalGeometry<R>, f: &ScalarField) -> Result<LogAlpha<R>> {
    let la = geo.alpha(f)?.ln()?;
    let dla: Vec<Jet<R>> = (0..geo.dim()).map(|i| la.partial_jet(i)).collect::<Result<_>>()?;
    let grad_la = geo.raise(&dla);
    Ok(LogAlpha { dla, grad_la })
}

fn laplacian_of_differential<R: Real>(geo: &LocalGeometry<R>, dh: &[Jet<R>]) -> Result<Jet<R>> {
    let m = geo.dim();
    let gamma = geo.gamma();
    let mut hess = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(m);
        for j in 0..m {
            let mut s = dh[j].partial_jet(i)?;
            for (k, d) in dh.iter().enumerate() {
                s = &s - &(&gamma[k][i][j] * d);
            }
            row.push(s);
        }
        hess.push(row);
    }
    Ok(trace_with(geo.ginv(), &hess))
}

fn grad_values<R: Real>(geo: &LocalGeometry<R>, h: &Jet<R>) -> Result<Vec<R>> {
    let dh: Vec<Jet<R>> = (0..geo.dim()).map(|i| h.partial_jet(i)).collect::<Result<_>>()?;
    Ok(geo.raise(&dh).iter().map(Jet::value).collect())
}

const RESIDUAL_ORDER: usize = 5;

/// `Ricci(grad ln α) + ½grad(Δ ln α) + ⅛grad(‖grad ln α‖²)`
pub fn biharm_residual_pi_alpha<R: Real>(f: &ScalarField, g: &MetricField, x: &[R]) -> Result<Vec<R>> {
    let geo = LocalGeometry::at(g, x, RESIDUAL_ORDER + g.depth())?;
    let la = log_alpha(&geo, f)?;
    let ric = ricci_apply(
        &geo.riemann_values()?,
        &geo.inverse_values(),
        &la.grad_la.iter().map(Jet::value).collect::<Vec<_>>(),
    );
    let lap = laplacian_of_differential(&geo, &la.dla)?;
    let nsq = sum_products(&la.dla, &la.grad_la);
    let r = add(&ric, &scale(R::lit(0.5), &grad_values(&geo, &lap)?));
    Ok(add(&r, &scale(R::lit(0.125), &grad_values(&geo, &nsq)?)))
}

/// Norm of `grad(λ ln α + ½Δ ln α + ⅛‖grad ln α‖²)`.
pub fn einstein_residual<R: Real>(f: &ScalarField, g: &MetricField, lambda: R, x: &[R]) -> Result<R> {
    let geo = LocalGeometry::at(g, x, RESIDUAL_ORDER + g.depth())?;
    let la = log_alpha(&geo, f)?;
    let lap = laplacian_of_differential(&geo, &la.dla)?;
    let nsq = sum_products(&la.dla, &la.grad_la);
    let gl: Vec<R> = la.grad_la.iter().map(Jet::value).collect();
    let mut v = add(&scale(lambda, &gl), &scale(R::lit(0.5), &grad_values(&geo, &lap)?));
    v = add(&v, &scale(R::lit(0.125), &grad_values(&geo, &nsq)?));
    Ok(bilinear(&geo.metric_values(), &v, &v).sqrt())
}

/// `τ(Id_α)` for `Id_α:(TM,g^f)→(TM,ĝ)`, as stated
/// (`‖grad f‖/(1+‖grad f‖²)·(grad‖grad f‖)^H`) and as concluded in the proof
/// (`−(grad α/2α)^H`).
pub fn tension_id_alpha_closed<R: Real>(b: &BasePrims<R>) -> Result<(Split<R>, Split<R>)> {
    let fp = b.field();
    let n = b.norm_sq(&fp.grad).sqrt();
    if n == R::zero() {
        return Err(Error::DivisionByZero);
    }
    // grad‖grad f‖ = grad α / 2‖grad f‖
    let grad_norm = scale(R::one() / (R::lit(2.0) * n), &fp.grad_alpha);
    let stated = scale(n / fp.alpha, &grad_norm);
    let proof = scale(-R::one() / (R::lit(2.0) * fp.alpha), &fp.grad_alpha);
    Ok((Split::horizontal(stated), Split::horizontal(proof)))
}

/// `J_{Id_M}(W)` with `W = grad α / α`, computed on the base.
pub fn jacobi_id_base<R: Real>(f: &ScalarField, g: &MetricField, x: &[R]) -> Result<Vec<R>> {
    let id = SmoothMap::identity(g.clone(), g.clone())?;
    jacobi(&id, x, |geo| {
        let al = geo.alpha(f)?;
        let d: Vec<Jet<R>> = (0..geo.dim()).map(|i| al.partial_jet(i)).collect::<Result<_>>()?;
        let inv = al.recip()?;
        Ok(geo.raise(&d).iter().map(|c| c * &inv).collect())
    })
}

/// `τ₂(Id_α) = [J_{Id_M}(W)]^H`
pub fn bitension_id_alpha_closed<R: Real>(f: &ScalarField, g: &MetricField, x: &[R]) -> Result<Split<R>> {
    Ok(Split::horizontal(jacobi_id_base(f, g, x)?))
}

/// Jet of `∂f/∂x_axis` through `point`.
fn axis_derivative<R: Real>(f: &ScalarField, point: &[R], axis: usize, order: usize) -> Result<Jet<R>> {
    let coords = Jet::seed(point, order);
    f.differential_jets(&coords)?
        .get(axis)
        .cloned()
        .ok_or(Error::IndexOutOfRange {
            index: axis,
            nvars: point.len(),
        })
}

fn pure<R: Real>(j: &Jet<R>, axis: usize, k: u8) -> Result<R> {
    j.partial(&MultiIndex::pure(j.nvars(), axis, k))
}

/// `(α′/2α)″` along coordinate `axis`, with `α = 1 + (f′)²`.
pub fn log_alpha_ode_residual<R: Real>(f: &ScalarField, point: &[R], axis: usize) -> Result<R> {
    let d = axis_derivative(f, point, axis, 4)?;
    let alpha = (&d * &d).add_real(R::one());
    let da = alpha.partial_jet(axis)?;
    let q = da.try_div(&alpha.scale(R::lit(2.0)))?;
    pure(&q, axis, 2)
}

/// `τ(Id_f) = (m/2f)(grad f)^H` for `Id_f:(TM,g̃)→(TM,ĝ)`.
pub fn tension_id_f_closed<R: Real>(b: &BasePrims<R>, m: R) -> Result<Split<R>> {
    let fp = b.field();
    let fv = fp.value.ok_or(Error::GradientOnly)?;
    Ok(Split::horizontal(scale(m / (R::lit(2.0) * fv), &fp.grad)))
}

/// `τ₂(Id_f)` as two readings: the full form
/// `m/(f√f)(∇_{grad f}grad √f)^V + m²/2f²(∇_{grad f}grad f)^H` and the
/// horizontal-only form `m²/4f²(grad‖grad f‖²)^H`.
pub fn bitension_id_f_closed<R: Real>(b: &BasePrims<R>, m: R) -> Result<(Split<R>, Split<R>)> {
    let fp = b.field();
    let fv = fp.value.ok_or(Error::GradientOnly)?;
    let two = R::lit(2.0);
    let sf = fv.sqrt();
    let hg = b.hess_f(&fp.grad);
    // ∇_{grad f} grad √f = ∇_{grad f}grad f / 2√f − ‖grad f‖² grad f / 4f√f
    let grad_sqrt = add(
        &scale(R::one() / (two * sf), &hg),
        &scale(-b.norm_sq(&fp.grad) / (R::lit(4.0) * fv * sf), &fp.grad),
    );
    let full = Split {
        h: scale(m * m / (two * fv * fv), &hg),
        v: scale(m / (fv * sf), &grad_sqrt),
    };
    let horizontal = Split::horizontal(scale(m * m / (R::lit(4.0) * fv * fv), &fp.grad_alpha));
    Ok((full, horizontal))
}

/// `Tr_g ∇²grad f`
pub fn trace_hess2<R: Real>(b: &BasePrims<R>) -> Vec<R> {
    let fp = b.field();
    let m = b.dim();
    let mut out = vec![R::zero(); m];
    for i in 0..m {
        for j in 0..m {
            out = add(&out, &scale(b.ginv[i][j], &fp.hess2[i][j]));
        }
    }
    out
}

/// `τ(Îd_f) = −(m/2)(grad f)^H`
pub fn tension_idhat_closed<R: Real>(b: &BasePrims<R>, m: R) -> Split<R> {
    Split::horizontal(scale(-m / R::lit(2.0), &b.field().grad))
}

/// `τ₂(Îd_f) = −(m²/8)(grad‖grad f‖²)^H + (m/2)(Tr_g∇²grad f)^H`
pub fn bitension_idhat_closed<R: Real>(b: &BasePrims<R>, m: R) -> Split<R> {
    let fp = b.field();
    Split::horizontal(add(
        &scale(-m * m / R::lit(8.0), &fp.grad_alpha),
        &scale(m / R::lit(2.0), &trace_hess2(b)),
    ))
}

/// `(m/4)grad‖grad f‖² − Tr_g∇²grad f`
pub fn residual_trace_condition<R: Real>(b: &BasePrims<R>, m: R) -> Vec<R> {
    add(
        &scale(m / R::lit(4.0), &b.field().grad_alpha),
        &scale(-R::one(), &trace_hess2(b)),
    )
}

/// Both sides of `f‴ = (m/4)((f′)²)′` along coordinate `axis`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeSides<R> {
    pub lhs: R,
    pub rhs: R,
}

impl<R: Real> OdeSides<R> {
    pub fn residual(&self) -> R {
        self.lhs - self.rhs
    }

    /// Residual with the sign of the right-hand side flipped.
    pub fn flipped_residual(&self) -> R {
        self.lhs + self.rhs
    }
}

pub fn cubic_ode_sides<R: Real>(f: &ScalarField, m: R, point: &[R], axis: usize) -> Result<OdeSides<R>> {
    let d = axis_derivative(f, point, axis, 4)?;
    let lhs = pure(&d, axis, 2)?;
    let sq = &d * &d;
    let rhs = m / R::lit(4.0) * pure(&sq, axis, 1)?;
    Ok(OdeSides { lhs, rhs })
}
