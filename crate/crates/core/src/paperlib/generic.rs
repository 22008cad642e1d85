use crate::bundle::vectors::{
    horizontal_lift_jets, horizontal_lift_with, vertical_lift, vertical_lift_jets, BundlePoint, LiftedVector,
};
use crate::calculus::jet::Jet;
use crate::calculus::real::Real;
use crate::error::{Error, Result};
use crate::geometry::local::LocalGeometry;
use crate::geometry::metric::MetricField;
use crate::geometry::ops::{christoffel, curvature_apply, riemann};
use crate::paperlib::closed::Kind;

fn base_of(lifted: &MetricField) -> Result<&MetricField> {
    lifted
        .base()
        .ok_or_else(|| Error::Hypothesis("a lifted metric is required".into()))
}

/// Value of the lift of a base vector at `p`.
pub fn lift_value<R: Real>(kind: Kind, x: &[R], gamma: &[Vec<Vec<R>>], p: &BundlePoint<R>) -> LiftedVector<R> {
    match kind {
        Kind::H => horizontal_lift_with(x, gamma, p),
        Kind::V => vertical_lift(x, p),
    }
}

/// `∇_A B` for the Levi-Civita connection of `lifted`, where `A` and `B`
/// are lifts of base fields with constant components.
pub fn lifted_connection<R: Real>(
    lifted: &MetricField,
    p: &BundlePoint<R>,
    a: (Kind, &[R]),
    b: (Kind, &[R]),
) -> Result<LiftedVector<R>> {
    let base = base_of(lifted)?;
    let m = base.dim();
    let n = 2 * m;
    let coords = Jet::seed(&p.coords(), 2 + lifted.depth());
    let geo = LocalGeometry::new(lifted, coords.clone())?;
    let gamma_hat = geo.christoffel_values();
    let base_geo = LocalGeometry::new(base, coords[..m].to_vec())?;
    let yj: Vec<Jet<R>> = b.1.iter().map(|&c| coords[0].constant_like(c)).collect();
    let bj = match b.0 {
        Kind::H => horizontal_lift_jets(&yj, &base_geo, &coords[m..]),
        Kind::V => vertical_lift_jets(&yj),
    };
    let gamma = christoffel(base, &p.x)?;
    let av = lift_value(a.0, a.1, &gamma, p).components;
    let bv: Vec<R> = bj.iter().map(Jet::value).collect();
    let mut out = vec![R::zero(); n];
    for (c, o) in out.iter_mut().enumerate() {
        let mut s = R::zero();
        for i in 0..n {
            if av[i] == R::zero() {
                continue;
            }
            s = s + av[i] * bj[c].d1(i)?;
            for j in 0..n {
                s = s + gamma_hat[c][i][j] * av[i] * bv[j];
            }
        }
        *o = s;
    }
    Ok(LiftedVector {
        point: p.clone(),
        components: out,
    })
}

/// `R(A,B)C` for the curvature of `lifted` on lifts of base vectors.
pub fn lifted_curvature<R: Real>(
    lifted: &MetricField,
    p: &BundlePoint<R>,
    a: (Kind, &[R]),
    b: (Kind, &[R]),
    c: (Kind, &[R]),
) -> Result<LiftedVector<R>> {
    let base = base_of(lifted)?;
    let gamma = christoffel(base, &p.x)?;
    let r = riemann(lifted, &p.coords())?;
    let av = lift_value(a.0, a.1, &gamma, p).components;
    let bv = lift_value(b.0, b.1, &gamma, p).components;
    let cv = lift_value(c.0, c.1, &gamma, p).components;
    Ok(LiftedVector {
        point: p.clone(),
        components: curvature_apply(&r, &av, &bv, &cv),
    })
}

/// `max |R^l_ijk|` of a metric at a point.
pub fn max_curvature<R: Real>(metric: &MetricField, point: &[R]) -> Result<R> {
    let r = riemann(metric, point)?;
    Ok(r.iter()
        .flatten()
        .flatten()
        .flatten()
        .fold(R::zero(), |s, &v| s.max(v.abs())))
}
