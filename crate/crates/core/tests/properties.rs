use std::collections::BTreeMap;

use proptest::prelude::*;
use tanbundle::bundle::lift::{mus_gradient_metric, sasaki_metric};
use tanbundle::bundle::vectors::BundlePoint;
use tanbundle::calculus::{fd_derivative, parse, Expr, Func, Jet, MultiIndex};
use tanbundle::geometry::linalg::{mat_mul, spd_inverse};
use tanbundle::geometry::local::LocalGeometry;
use tanbundle::geometry::*;
use tanbundle::paperlib::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn jets_close(a: &Jet<f64>, b: &Jet<f64>, tol: f64) -> bool {
    a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| close(*x, *y, tol))
}

/// A jet in two variables built from a small polynomial with the given coefficients.
fn poly_jet(c: &[f64; 4], p: &[f64]) -> Jet<f64> {
    let v = Jet::seed(p, 3);
    let (x, y) = (&v[0], &v[1]);
    let xy = x * y;
    let yy = y * y;
    (&(&x.scale(c[1]) + &xy.scale(c[2])) + &yy.scale(c[3])).add_real(c[0])
}

fn coeffs() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(-2.0f64..2.0)
}

fn point() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 2)
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (-3.0f64..3.0).prop_map(Expr::Const),
        (0usize..2).prop_map(Expr::Var),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            inner.clone().prop_map(|a| -a),
            (inner.clone(), 0u8..4).prop_map(|(a, k)| a.pow(Expr::Const(k as f64))),
            inner.clone().prop_map(|a| Expr::call(Func::Sin, a)),
            inner.prop_map(|a| Expr::call(Func::Cos, a)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jets_form_a_commutative_ring(a in coeffs(), b in coeffs(), c in coeffs(), p in point()) {
        let (a, b, c) = (poly_jet(&a, &p), poly_jet(&b, &p), poly_jet(&c, &p));
        prop_assert!(jets_close(&(&(&a + &b) + &c), &(&a + &(&b + &c)), 1e-12));
        prop_assert!(jets_close(&(&a * &b), &(&b * &a), 1e-12));
        prop_assert!(jets_close(&(&(&a * &b) * &c), &(&a * &(&b * &c)), 1e-12));
        prop_assert!(jets_close(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c)), 1e-12));
        prop_assert!(jets_close(&(&a - &a), &a.zero_like(), 0.0));
    }

    #[test]
    fn division_inverts_multiplication(a in coeffs(), b in coeffs(), p in point()) {
        let a = poly_jet(&a, &p);
        let b = poly_jet(&b, &p).add_real(5.0);
        let q = (&a * &b).try_div(&b).unwrap();
        prop_assert!(jets_close(&q, &a, 1e-10));
    }

    #[test]
    fn printed_expressions_parse_back(e in expr(), p in point()) {
        let names = ["x", "y"];
        let text = e.display(&names).to_string();
        let back = parse(&text, &names, &BTreeMap::new()).unwrap();
        let (a, b): (f64, f64) = (e.eval(&p).unwrap(), back.eval(&p).unwrap());
        prop_assert!(close(a, b, 1e-12), "{text}: {a} vs {b}");
    }

    #[test]
    fn jets_agree_with_finite_differences(e in expr(), p in point()) {
        let jet: Jet<f64> = e.eval(&Jet::seed(&p, 2)).unwrap();
        for mu in MultiIndex::enumerate(2, 2) {
            let fd = fd_derivative(|x| e.eval(x), &p, &mu).unwrap();
            let a = jet.partial(&mu).unwrap();
            prop_assert!(close(a, fd, 1e-5) || (a - fd).abs() <= 1e-6 * jet.value().abs().max(1.0) * 1e3,
                "{}: ∂{mu:?} jet {a} fd {fd}", e.display(&["x", "y"]));
        }
    }

    #[test]
    fn spd_inverse_is_an_inverse(b in prop::collection::vec(-1.0f64..1.0, 9)) {
        let m: Vec<Vec<f64>> = (0..3)
            .map(|i| (0..3).map(|j| (0..3).map(|k| b[3 * i + k] * b[3 * j + k]).sum::<f64>() + if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        let inv = spd_inverse(&m).unwrap();
        let id = mat_mul(&m, &inv);
        for (i, row) in id.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((v - want).abs() < 1e-10);
            }
        }
    }
}

fn plane_field(c: &[f64; 4]) -> ScalarField {
    let text = format!("{}*x1^2 + {}*x1*x2 + {}*sin(x2) + {}*x1", c[0], c[1], c[2], c[3]);
    ScalarField::value(parse(&text, &["x1", "x2"], &BTreeMap::new()).unwrap())
}

/// `∂ₖgᵢⱼ = Γˡₖᵢ gₗⱼ + Γˡₖⱼ gᵢₗ`
fn levi_civita_is_metric(g: &MetricField, p: &[f64]) -> f64 {
    let geo = LocalGeometry::at(g, p, 1 + g.depth()).unwrap();
    let n = geo.dim();
    let gv = geo.metric_values();
    let gamma = geo.christoffel_values();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let lhs = geo.g()[i][j].d1(k).unwrap();
                let rhs: f64 = (0..n).map(|l| gamma[l][k][i] * gv[l][j] + gamma[l][k][j] * gv[i][l]).sum();
                worst = worst.max((lhs - rhs).abs());
            }
        }
    }
    worst
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn lifted_connections_are_metric(c in coeffs(), p in prop::collection::vec(-1.0f64..1.0, 4)) {
        let base = MetricField::euclidean(2);
        prop_assert!(levi_civita_is_metric(&mus_gradient_metric(&base, &plane_field(&c)), &p) < 1e-10);
        let q = [0.3 + (p[0] + 1.0), 2.0 + p[1], p[2], p[3]];
        prop_assert!(levi_civita_is_metric(&sasaki_metric(&MetricField::sphere()), &q) < 1e-10);
    }

    #[test]
    fn lifted_curvature_is_skew(c in coeffs(), v in prop::collection::vec(-1.0f64..1.0, 16)) {
        let g = mus_gradient_metric(&MetricField::euclidean(2), &plane_field(&c));
        let p = &v[..4];
        let r = riemann(&g, p).unwrap();
        let gv = metric_at(&g, p).unwrap();
        let (x, y, z, w) = (&v[4..8], &v[8..12], &v[12..16], &v[0..4]);
        let lhs = tanbundle::geometry::linalg::bilinear(&gv, &curvature_apply(&r, x, y, z), w);
        let rhs = tanbundle::geometry::linalg::bilinear(&gv, &curvature_apply(&r, x, y, w), z);
        prop_assert!((lhs + rhs).abs() < 1e-9 * lhs.abs().max(1.0));
        let swapped = curvature_apply(&r, y, x, z);
        let direct = curvature_apply(&r, x, y, z);
        prop_assert!(direct.iter().zip(&swapped).all(|(a, b)| (a + b).abs() < 1e-9));
    }

    #[test]
    fn musgrad_connection_matches_generic(c in coeffs(), v in prop::collection::vec(-1.0f64..1.0, 8)) {
        let base = MetricField::euclidean(2);
        let f = plane_field(&c);
        let lifted = mus_gradient_metric(&base, &f);
        let p = BundlePoint::from_coords(&v[..4]);
        let b = BasePrims::new(&base, Some(&f), &p.x).unwrap();
        for case in ConnCase::ALL {
            let (ka, kb) = case.kinds();
            let closed = musgrad_connection_closed(case, &b, &p, &v[4..6], &v[6..8]).unwrap().lift(&b, &p);
            let generic = lifted_connection(&lifted, &p, (ka, &v[4..6]), (kb, &v[6..8])).unwrap();
            for (a, g) in closed.components.iter().zip(&generic.components) {
                prop_assert!((a - g).abs() < 1e-9, "{case:?}");
            }
        }
    }
}

#[test]
fn verification_is_deterministic() {
    for name in EXAMPLES {
        let s = example(name).unwrap().build().unwrap();
        assert_eq!(verify(&s).unwrap(), verify(&s).unwrap(), "{name}");
    }
}

#[test]
fn seeds_keep_listed_base_points() {
    let spec = example("ex4_1").unwrap();
    let a = spec.build_with_seed(1).unwrap();
    let b = spec.build_with_seed(2).unwrap();
    assert_eq!(a.base_points()[..3], b.base_points()[..3]);
    assert_ne!(a.samples, b.samples);
    assert_eq!(a.samples, spec.build_with_seed(1).unwrap().samples);
}
