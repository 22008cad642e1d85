use approx::assert_abs_diff_eq;
use tanbundle::bundle::*;
use tanbundle::calculus::parse_coords;
use tanbundle::geometry::linalg::bilinear;
use tanbundle::geometry::*;

fn pairings(lifted: &MetricField, p: &BundlePoint<f64>, x: &[f64], y: &[f64]) -> [f64; 3] {
    let base = MetricField::sphere();
    let gl = metric_at(lifted, &p.coords()).unwrap();
    let h = |v: &[f64]| horizontal_lift(v, p, &base).unwrap().components;
    let v = |w: &[f64]| vertical_lift(w, p).components;
    [
        bilinear(&gl, &h(x), &h(y)),
        bilinear(&gl, &h(x), &v(y)),
        bilinear(&gl, &v(x), &v(y)),
    ]
}

fn point() -> BundlePoint<f64> {
    BundlePoint::new(vec![1.1, 0.4], vec![0.7, -1.3]).unwrap()
}

#[test]
fn sasaki_splits_orthogonally() {
    let g = MetricField::sphere();
    let p = point();
    let (x, y) = ([0.3, -0.8], [1.2, 0.5]);
    let gx = bilinear(&metric_at(&g, &p.x).unwrap(), &x, &y);
    let [hh, hv, vv] = pairings(&sasaki_metric(&g), &p, &x, &y);
    assert_abs_diff_eq!(hh, gx, epsilon = 1e-12);
    assert_abs_diff_eq!(hv, 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(vv, gx, epsilon = 1e-12);
}

#[test]
fn mus_sasaki_scales_the_vertical_block() {
    let g = MetricField::sphere();
    let f = ScalarField::value(parse_coords("2 + cos(theta)*phi", &["theta", "phi"]).unwrap());
    let p = point();
    let fv = 2.0 + 1.1f64.cos() * 0.4;
    let (x, y) = ([0.3, -0.8], [1.2, 0.5]);
    let gx = bilinear(&metric_at(&g, &p.x).unwrap(), &x, &y);
    let [hh, hv, vv] = pairings(&mus_sasaki_metric(&g, &f).unwrap(), &p, &x, &y);
    assert_abs_diff_eq!(hh, gx, epsilon = 1e-12);
    assert_abs_diff_eq!(hv, 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(vv, fv * gx, epsilon = 1e-12);
}

#[test]
fn mus_gradient_adds_df_squared() {
    let g = MetricField::sphere();
    let f = ScalarField::value(parse_coords("theta^2*phi", &["theta", "phi"]).unwrap());
    let p = point();
    let df = [2.0 * 1.1 * 0.4, 1.1 * 1.1];
    let (x, y) = ([0.3, -0.8], [1.2, 0.5]);
    let gx = bilinear(&metric_at(&g, &p.x).unwrap(), &x, &y);
    let xf = df[0] * x[0] + df[1] * x[1];
    let yf = df[0] * y[0] + df[1] * y[1];
    let [hh, hv, vv] = pairings(&mus_gradient_metric(&g, &f), &p, &x, &y);
    assert_abs_diff_eq!(hh, gx, epsilon = 1e-12);
    assert_abs_diff_eq!(hv, 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(vv, gx + xf * yf, epsilon = 1e-12);
}

#[test]
fn nonpositive_f_is_rejected_for_mus_sasaki() {
    let g = MetricField::euclidean(1);
    let f = ScalarField::value(parse_coords("x1 - 1", &["x1"]).unwrap());
    let lifted = mus_sasaki_metric(&g, &f).unwrap();
    assert!(metric_at(&lifted, &[0.5, 0.0]).unwrap_err().is_domain_error());
    assert!(metric_at(&lifted, &[2.0, 0.0]).is_ok());
}

#[test]
fn lifts_decompose_back() {
    let g = MetricField::sphere();
    let p = point();
    let gamma = christoffel(&g, &p.x).unwrap();
    let mut w = horizontal_lift(&[0.3, -0.8], &p, &g).unwrap();
    let v = vertical_lift(&[1.2, 0.5], &p);
    for (a, b) in w.components.iter_mut().zip(&v.components) {
        *a += b;
    }
    let (h, vv) = w.decompose(&gamma);
    assert_abs_diff_eq!(h.as_slice(), [0.3, -0.8].as_slice(), epsilon = 1e-14);
    assert_abs_diff_eq!(vv.as_slice(), [1.2, 0.5].as_slice(), epsilon = 1e-14);
}

#[test]
fn tangent_chart_doubles_names() {
    let c = tangent_chart(MetricField::sphere().chart());
    assert_eq!(c.dim(), 4);
}
