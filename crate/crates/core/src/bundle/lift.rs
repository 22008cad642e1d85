use crate::calculus::jet::Jet;
use crate::calculus::real::Real;
use crate::error::{Error, Result};
use crate::geometry::chart::Chart;
use crate::geometry::field::ScalarField;
use crate::geometry::linalg::Mat;
use crate::geometry::local::{sum_products, LocalGeometry};
use crate::geometry::metric::{Lift, MetricField};

/// Induced chart `(x, y)` on the tangent bundle of `base`.
///
/// Fibre coordinates are `y1..ym`, or `u1..um` if a base coordinate already
/// uses one of those names.
pub fn tangent_chart(base: &Chart) -> Chart {
    let m = base.dim();
    let prefix = ["y", "u", "v", "w"]
        .into_iter()
        .find(|p| (1..=m).all(|i| base.index_of(&format!("{p}{i}")).is_none()))
        .unwrap_or("fib");
    let names: Vec<String> = base
        .names()
        .iter()
        .cloned()
        .chain((1..=m).map(|i| format!("{prefix}{i}")))
        .collect();
    let mut bounds = base.bounds().to_vec();
    bounds.extend(std::iter::repeat_n((f64::NEG_INFINITY, f64::INFINITY), m));
    Chart::new(names).with_bounds(bounds).expect("bounds match names")
}

pub fn sasaki_metric(g: &MetricField) -> MetricField {
    lifted(g, Lift::Sasaki)
}

/// Vertical block scaled by `f`. `f` must be value-specified.
pub fn mus_sasaki_metric(g: &MetricField, f: &ScalarField) -> Result<MetricField> {
    if f.is_gradient_only() {
        return Err(Error::GradientOnly);
    }
    Ok(lifted(g, Lift::MusSasaki(f.clone().positive())))
}

/// Vertical block `g + df ⊗ df`.
pub fn mus_gradient_metric(g: &MetricField, f: &ScalarField) -> MetricField {
    lifted(g, Lift::MusGradient(f.clone()))
}

fn lifted(g: &MetricField, lift: Lift) -> MetricField {
    MetricField::Lifted {
        chart: tangent_chart(g.chart()),
        base: Box::new(g.clone()),
        lift,
    }
}

/// `A[k][i] = yʲ Γᵏⱼᵢ`
pub fn connection_map<R: Real>(gamma: &[Mat<Jet<R>>], y: &[Jet<R>]) -> Mat<Jet<R>> {
    let m = y.len();
    (0..m)
        .map(|k| {
            (0..m)
                .map(|i| {
                    let col: Vec<Jet<R>> = (0..m).map(|j| gamma[k][j][i].clone()).collect();
                    sum_products(y, &col)
                })
                .collect()
        })
        .collect()
}

/// The vertical block of a lift.
pub fn vertical_block<R: Real>(
    geo: &LocalGeometry<R>,
    lift: &Lift,
) -> Result<Mat<Jet<R>>> {
    let g = geo.g();
    Ok(match lift {
        Lift::Sasaki => g.clone(),
        Lift::MusSasaki(f) => {
            let fv = f.value_jet(geo.coords())?;
            g.iter().map(|r| r.iter().map(|e| e * &fv).collect()).collect()
        }
        Lift::MusGradient(f) => {
            let df = f.differential_jets(geo.coords())?;
            g.iter()
                .enumerate()
                .map(|(a, r)| r.iter().enumerate().map(|(b, e)| e + &(&df[a] * &df[b])).collect())
                .collect()
        }
    })
}

/// Lifted metric in induced coordinates:
/// `G_xx = g + AᵀvA`, `G_xy = Aᵀv`, `G_yy = v`.
pub(crate) fn assemble<R: Real>(base: &MetricField, lift: &Lift, coords: &[Jet<R>]) -> Result<Mat<Jet<R>>> {
    let m = base.dim();
    if coords.len() != 2 * m {
        return Err(Error::Dimension {
            expected: 2 * m,
            got: coords.len(),
        });
    }
    let geo = LocalGeometry::new(base, coords[..m].to_vec())?;
    let a = connection_map(geo.gamma(), &coords[m..]);
    let v = vertical_block(&geo, lift)?;
    // av[i][n] = Σ_k A[k][i] v[k][n] = (Aᵀv)[i][n]
    let av: Mat<Jet<R>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|n| {
                    let col: Vec<Jet<R>> = (0..m).map(|k| a[k][i].clone()).collect();
                    let vcol: Vec<Jet<R>> = (0..m).map(|k| v[k][n].clone()).collect();
                    sum_products(&col, &vcol)
                })
                .collect()
        })
        .collect();
    let g = geo.g();
    let mut out: Mat<Jet<R>> = vec![Vec::with_capacity(2 * m); 2 * m];
    for i in 0..m {
        for l in 0..m {
            let acol: Vec<Jet<R>> = (0..m).map(|n| a[n][l].clone()).collect();
            out[i].push(&g[i][l] + &sum_products(&av[i], &acol));
        }
        for n in 0..m {
            out[i].push(av[i][n].clone());
        }
    }
    for n in 0..m {
        for i in 0..m {
            out[m + n].push(av[i][n].clone());
        }
        for k in 0..m {
            out[m + n].push(v[n][k].clone());
        }
    }
    Ok(out)
}
