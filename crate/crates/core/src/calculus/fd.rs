//! Central finite differences, used as an independent check on the jets.

use crate::calculus::multi_index::MultiIndex;
use crate::error::{Error, Result};

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Tensor-product central difference with uniform steps `h[i]` per axis.
fn stencil<F>(field: &F, point: &[f64], mu: &[u8], h: &[f64]) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    // each axis contributes offsets (k/2 - j) * h for j = 0..=k
    let axes: Vec<(usize, usize)> = mu
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| (i, k as usize))
        .collect();
    let mut counters = vec![0usize; axes.len()];
    let mut x = point.to_vec();
    let mut total = 0.0;
    loop {
        let mut weight = 1.0;
        for (slot, &(i, k)) in axes.iter().enumerate() {
            let j = counters[slot];
            x[i] = point[i] + (k as f64 / 2.0 - j as f64) * h[i];
            let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
            weight *= sign * binomial(k, j);
        }
        total += weight * field(&x)?;

        let mut slot = 0;
        loop {
            if slot == axes.len() {
                let scale: f64 = axes.iter().map(|&(i, k)| h[i].powi(k as i32)).product();
                return Ok(total / scale);
            }
            counters[slot] += 1;
            if counters[slot] <= axes[slot].1 {
                break;
            }
            counters[slot] = 0;
            slot += 1;
        }
    }
}

/// Approximates `∂^μ field` at `point`.
///
/// The base step on axis `i` is `max(|xᵢ|, 1)·ε^(1/(|μ|+2))`; the estimate is
/// refined with one Richardson step against the stencil at twice the step.
pub fn fd_derivative<F>(field: F, point: &[f64], mu: &MultiIndex) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    if mu.nvars() != point.len() {
        return Err(Error::ShapeMismatch(format!(
            "multi-index over {} variables at a point with {} coordinates",
            mu.nvars(),
            point.len()
        )));
    }
    if mu.order() == 0 {
        return field(point);
    }
    let exponent = 1.0 / (mu.order() as f64 + 2.0);
    let h: Vec<f64> = point
        .iter()
        .map(|x| x.abs().max(1.0) * f64::EPSILON.powf(exponent))
        .collect();
    let h2: Vec<f64> = h.iter().map(|s| 2.0 * s).collect();
    let fine = stencil(&field, point, mu.exponents(), &h)?;
    let coarse = stencil(&field, point, mu.exponents(), &h2)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn first_derivative_of_square() {
        let d = fd_derivative(|x| Ok(x[0] * x[0]), &[3.0], &MultiIndex::new(vec![1])).unwrap();
        assert_abs_diff_eq!(d, 6.0, epsilon = 1e-8);
    }

    #[test]
    fn second_derivative_of_log_quartic() {
        let d = fd_derivative(|x| Ok(x[0].powi(4).ln()), &[2.0], &MultiIndex::new(vec![2])).unwrap();
        assert_abs_diff_eq!(d, -1.0, epsilon = 1e-5);
    }

    #[test]
    fn third_derivative_of_exp() {
        let d = fd_derivative(|x| Ok(x[0].exp()), &[0.0], &MultiIndex::new(vec![3])).unwrap();
        assert_abs_diff_eq!(d, 1.0, epsilon = 1e-3);
    }

    #[test]
    fn mixed_partial() {
        let d = fd_derivative(
            |x| Ok(x[0].powi(2) * x[1].powi(3)),
            &[1.5, -0.5],
            &MultiIndex::new(vec![1, 2]),
        )
        .unwrap();
        // 2x · 6y
        assert_abs_diff_eq!(d, 2.0 * 1.5 * 6.0 * -0.5, epsilon = 1e-6);
    }

    #[test]
    fn failures_inside_the_stencil_propagate() {
        let r = fd_derivative(
            |x| if x[0] > 0.0 { Ok(x[0].ln()) } else { Err(Error::Domain { func: "ln", value: x[0] }) },
            &[1e-9],
            &MultiIndex::new(vec![1]),
        );
        assert!(r.is_err());
    }
}
