use rayon::prelude::*;

use crate::calculus::{fd_derivative, parse_coords, Expr, Jet, MultiIndex};
use crate::error::Result;
use crate::paperlib::report::CheckRecord;

/// Functions of `(x, y)` with the point at which they are calibrated.
pub const BATTERY: [(&str, &str, [f64; 2]); 12] = [
    ("polynomial", "x^2*y + 3*x - y^3/4", [0.7, -0.4]),
    ("trig_product", "sin(x)*cos(y)", [0.3, 1.1]),
    ("exp_bilinear", "exp(x*y/2)", [0.8, 0.5]),
    ("log_quadratic", "ln(1 + x^2 + y^2)", [0.6, -0.9]),
    ("sqrt_shifted", "sqrt(2 + x^2 + y)", [0.4, 0.3]),
    ("rational", "1/(1 + x^2 + y^2)", [0.5, 0.2]),
    ("real_power", "(1 + x^2)^1.5 * y", [0.9, 0.6]),
    ("nested", "sin(exp(x/2) + y)", [0.2, -0.3]),
    ("quotient", "(x - y)/(2 + cos(x))", [1.2, 0.4]),
    ("gaussian", "exp(-(x^2 + y^2)/2)", [0.3, -0.7]),
    ("log_sqrt", "ln(1 + sqrt(1 + x^2))*y^2", [-0.5, 0.8]),
    ("alpha_like", "1 + (x^3 - y)^2", [0.6, 0.9]),
];

const MAX_ORDER: usize = 3;

fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

/// Every partial of order at most 3 from jets against finite differences;
/// the residual is the worst `|jet − fd| / max(1, |fd|)`.
pub fn calibrate(name: &str, text: &str, point: [f64; 2], tol: f64) -> Result<CheckRecord> {
    let e: Expr = parse_coords(text, &["x", "y"])?;
    let jet: Jet<f64> = e.eval(&Jet::seed(&point, MAX_ORDER))?;
    let mut worst = (0.0, 0.0, 0.0);
    for mu in MultiIndex::enumerate(2, MAX_ORDER) {
        let a = jet.partial(&mu)?;
        let b = fd_derivative(|p| e.eval(p), &point, &mu)?;
        let r = relative_error(a, b);
        if r >= worst.0 {
            worst = (r, a, b);
        }
    }
    Ok(CheckRecord::new(
        format!("jets.calibration.{name}"),
        format!("∂^μ({text}) by jets = finite differences, |μ| ≤ {MAX_ORDER}"),
        worst.0,
        tol,
    )
    .at(&point)
    .values(vec![worst.1], vec![worst.2]))
}

pub fn calibration_battery(tol: f64) -> Result<Vec<CheckRecord>> {
    BATTERY.par_iter().map(|&(n, t, p)| calibrate(n, t, p, tol)).collect()
}
