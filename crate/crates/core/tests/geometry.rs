use approx::assert_abs_diff_eq;
use std::f64::consts::{E, FRAC_PI_4};

use tanbundle::calculus::{parse_coords, Expr};
use tanbundle::geometry::*;

fn value(s: &str, names: &[&str]) -> ScalarField {
    ScalarField::value(parse_coords(s, names).unwrap())
}

fn ex41_f() -> ScalarField {
    ScalarField::gradient(vec![
        parse_coords("sqrt(t^4 - 1)", &["t", "x"]).unwrap(),
        Expr::Const(0.0),
    ])
}

fn ex41_base() -> MetricField {
    MetricField::euclidean_on(Chart::new(["t", "x"]).bound(0, 1.0, f64::INFINITY))
}

#[test]
fn euclidean_metric_is_identity() {
    let g = MetricField::euclidean(2);
    assert_eq!(metric_at(&g, &[0.3, -1.0]).unwrap(), vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
    let gamma = christoffel(&g, &[0.3, -1.0]).unwrap();
    assert!(gamma.iter().flatten().flatten().all(|&v| v == 0.0));
}

#[test]
fn sphere_inverse_and_christoffel() {
    let g = MetricField::sphere();
    let p = [FRAC_PI_4, 1.0];
    let inv = inverse_metric_at(&g, &p).unwrap();
    assert_abs_diff_eq!(inv[0][0], 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(inv[1][1], 2.0, epsilon = 1e-12);
    let gamma = christoffel(&g, &p).unwrap();
    assert_abs_diff_eq!(gamma[0][1][1], -0.5, epsilon = 1e-12);
    assert_abs_diff_eq!(gamma[1][0][1], 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(gamma[1][1][0], 1.0, epsilon = 1e-12);
}

#[test]
fn sphere_ricci_is_identity() {
    let g = MetricField::sphere();
    let p = [1.1, 2.0];
    let x = [0.3, -0.7];
    let r = ricci_operator(&g, &p, &x, None).unwrap();
    assert_abs_diff_eq!(r[0], x[0], epsilon = 1e-10);
    assert_abs_diff_eq!(r[1], x[1], epsilon = 1e-10);
    // frame independence
    let f1 = orthonormal_frame(&g, &p, Some(&[1.0, 2.0])).unwrap();
    let f2 = orthonormal_frame(&g, &p, Some(&[-0.3, 0.4])).unwrap();
    let a = ricci_operator(&g, &p, &x, Some(&f1)).unwrap();
    let b = ricci_operator(&g, &p, &x, Some(&f2)).unwrap();
    for k in 0..2 {
        assert_abs_diff_eq!(a[k], b[k], epsilon = 1e-9);
    }
}

#[test]
fn riemann_symmetries_on_sphere() {
    let g = MetricField::sphere();
    let r = riemann::<f64>(&g, &[0.9, 0.5]).unwrap();
    for l in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    assert_eq!(r[l][i][j][k], -r[l][j][i][k]);
                    let bianchi = r[l][i][j][k] + r[l][j][k][i] + r[l][k][i][j];
                    assert!(bianchi.abs() < 1e-9);
                }
            }
        }
    }
}

#[test]
fn gradient_examples() {
    let g = MetricField::euclidean(2);
    let f = value("x^2 + y", &["x", "y"]);
    let gr = grad(&f, &g, &[1.0, 1.0]).unwrap();
    assert_abs_diff_eq!(gr[0], 2.0);
    assert_abs_diff_eq!(gr[1], 1.0);
    let gr = grad(&ex41_f(), &ex41_base(), &[2.0, 0.3]).unwrap();
    assert_abs_diff_eq!(gr[0], 15f64.sqrt(), epsilon = 1e-14);
    let theta = value("theta", &["theta", "phi"]);
    let gr = grad(&theta, &MetricField::sphere(), &[1.0, 1.0]).unwrap();
    assert_abs_diff_eq!(gr[0], 1.0);
    assert_abs_diff_eq!(gr[1], 0.0);
}

#[test]
fn nabla_grad_examples() {
    let g = MetricField::euclidean(2);
    let lin = value("2*x - y", &["x", "y"]);
    let v: Vec<f64> = nabla_grad(&lin, &g, &[0.4, 1.0], &[1.0, 3.0]).unwrap();
    assert!(v.iter().all(|c| c.abs() < 1e-14));
    // (1/α)∇_{grad f} grad f at t = 2 is (2/t)∂ₜ
    let base = ex41_base();
    let p = [2.0, 0.5];
    let gr = grad(&ex41_f(), &base, &p).unwrap();
    let a = alpha(&ex41_f(), &base, &p).unwrap();
    let v = nabla_grad(&ex41_f(), &base, &p, &gr).unwrap();
    assert_abs_diff_eq!(v[0] / a, 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(v[1] / a, 0.0, epsilon = 1e-12);
}

#[test]
fn laplacian_and_trace_hessian() {
    let g = MetricField::euclidean(1);
    let f = value("ln(x1^4)", &["x1"]);
    assert_abs_diff_eq!(laplacian(&f, &g, &[2.0], None).unwrap(), -1.0, epsilon = 1e-12);
    let lin = value("3*x1 + 1", &["x1"]);
    assert_abs_diff_eq!(laplacian(&lin, &g, &[2.0], None).unwrap(), 0.0);

    let g2 = MetricField::euclidean(2);
    let f = value("2*ln(2*x1 + 1)", &["x1", "x2"]);
    let v = trace_hessian_vec(&VectorField::Gradient(f), &g2, &[1.0, 0.0], None).unwrap();
    assert_abs_diff_eq!(v[0], 32.0 / 27.0, epsilon = 1e-12);
    assert_abs_diff_eq!(v[1], 0.0, epsilon = 1e-12);
}

#[test]
fn alpha_examples() {
    let g = MetricField::euclidean(2);
    assert_eq!(alpha(&ScalarField::constant(3.0), &g, &[0.0, 0.0]).unwrap(), 1.0);
    assert_abs_diff_eq!(alpha(&ex41_f(), &ex41_base(), &[2.0, 0.0]).unwrap(), 16.0, epsilon = 1e-12);
    let f = ScalarField::gradient(vec![parse_coords("sqrt(exp(x^2 + 1) - 1)", &["x"]).unwrap()]);
    assert_abs_diff_eq!(alpha(&f, &MetricField::euclidean(1), &[0.0]).unwrap(), E, epsilon = 1e-12);
}

#[test]
fn frames() {
    let g = MetricField::euclidean(3);
    let f = orthonormal_frame(&g, &[0.0, 0.0, 0.0], None).unwrap();
    assert_eq!(f.vectors[1], vec![0.0, 1.0, 0.0]);
    let s = orthonormal_frame(&MetricField::sphere(), &[FRAC_PI_4, 0.1], None).unwrap();
    assert_abs_diff_eq!(s.vectors[1][1], 2f64.sqrt(), epsilon = 1e-12);
    let p = [2.0, 0.2];
    let gr = grad(&ex41_f(), &ex41_base(), &p).unwrap();
    let e = orthonormal_frame(&ex41_base(), &p, Some(&gr)).unwrap();
    assert_abs_diff_eq!(e.vectors[0][0], 1.0, epsilon = 1e-14);
    assert!(matches!(
        orthonormal_frame(&g, &[0.0; 3], Some(&[0.0; 3])),
        Err(tanbundle::Error::DegenerateAlign { .. })
    ));
}

#[test]
fn out_of_domain_and_non_spd() {
    assert!(matches!(
        metric_at(&ex41_base(), &[0.5, 0.0]),
        Err(tanbundle::Error::OutOfDomain { .. })
    ));
    let chart = Chart::new(["x", "y"]);
    let bad = MetricField::coordinate(
        chart,
        vec![vec![Expr::Const(1.0), Expr::Const(2.0)], vec![Expr::Const(2.0), Expr::Const(1.0)]],
    )
    .unwrap();
    assert!(matches!(
        inverse_metric_at(&bad, &[0.0, 0.0]),
        Err(tanbundle::Error::NotPositiveDefinite { .. })
    ));
}
