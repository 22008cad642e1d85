use approx::assert_abs_diff_eq;

use tanbundle::bundle::*;
use tanbundle::calculus::{parse_coords, Expr};
use tanbundle::geometry::*;
use tanbundle::harmonic::*;

fn ex41() -> (MetricField, ScalarField) {
    let base = MetricField::euclidean_on(Chart::new(["t", "x"]).bound(0, 1.0, f64::INFINITY));
    let f = ScalarField::gradient(vec![
        parse_coords("sqrt(t^4 - 1)", &["t", "x"]).unwrap(),
        Expr::Const(0.0),
    ]);
    (base, f)
}

#[test]
fn identity_is_harmonic() {
    for g in [MetricField::euclidean(2), MetricField::sphere()] {
        let map = SmoothMap::identity(g.clone(), g).unwrap();
        let t: Vec<f64> = tension(&map, &[1.0, 0.5]).unwrap();
        assert!(t.iter().all(|v| v.abs() < 1e-10), "{t:?}");
    }
}

#[test]
fn projection_from_sasaki_is_harmonic() {
    let g = MetricField::sphere();
    let map = SmoothMap::projection(sasaki_metric(&g), g).unwrap();
    let t: Vec<f64> = tension(&map, &[1.0, 0.5, 0.3, -0.8]).unwrap();
    assert!(t.iter().all(|v| v.abs() < 1e-7), "{t:?}");
}

#[test]
fn pi_alpha_of_first_example() {
    let (base, f) = ex41();
    let map = SmoothMap::projection(mus_gradient_metric(&base, &f), base).unwrap();
    for t in [1.5, 2.0, 3.0] {
        let e = evaluate(&map, &[t, 0.2, 0.7, -1.1]).unwrap();
        assert_abs_diff_eq!(e.tension[0], 2.0 / t, epsilon = 1e-6);
        assert_abs_diff_eq!(e.tension[1], 0.0, epsilon = 1e-6);
        assert!(e.bitension_norm < 1e-5, "{:?}", e.bitension);
    }
    let c = classify(
        &map,
        &[vec![1.5, 0.0, 0.0, 0.0], vec![2.0, 1.0, 0.3, 0.2]],
        DEFAULT_TOL_HARMONIC,
        DEFAULT_TOL_BIHARMONIC,
    )
    .unwrap();
    assert_eq!(c.verdict, Verdict::ProperBiharmonic);
}

#[test]
fn pi_alpha_with_quadratic_potential_is_neither() {
    let base = MetricField::euclidean(2);
    let f = ScalarField::value(parse_coords("x1^2", &["x1", "x2"]).unwrap());
    let map = SmoothMap::projection(mus_gradient_metric(&base, &f), base).unwrap();
    let c = classify(&map, &[vec![0.7, 0.0, 0.1, 0.2]], 1e-7, 1e-5).unwrap();
    assert_eq!(c.verdict, Verdict::Neither);
}

#[test]
fn bitension_is_frame_independent() {
    let (base, f) = ex41();
    let dom = mus_gradient_metric(&base, &f);
    let map = SmoothMap::projection(dom.clone(), MetricField::sphere()).unwrap();
    let p = [1.3, 0.4, 0.2, -0.5];
    let g = metric_at(&dom, &p).unwrap();
    let f1 = gram_schmidt(&g, &p, &[vec![1.0, 2.0, 0.0, 1.0], vec![0.0, 1.0, 1.0, 0.0], vec![1.0, 0.0, 0.0, 3.0], vec![0.0, 0.0, 1.0, 1.0], vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 0.0, 0.0, 1.0]]).unwrap();
    let a = bitension(&map, &p).unwrap();
    let b = bitension_with_frame(&map, &p, &f1).unwrap();
    for k in 0..2 {
        assert_abs_diff_eq!(a[k], b[k], epsilon = 1e-6);
    }
}
