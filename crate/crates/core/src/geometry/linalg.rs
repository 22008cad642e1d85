//! Small dense kernels for symmetric positive definite matrices, generic over
//! reals and jets.

use crate::calculus::real::Real;
use num_traits::Zero;
use crate::calculus::scalar::Scalar;
use crate::error::{Error, Result};

pub type Mat<S> = Vec<Vec<S>>;

/// Lower triangular `L` with `L Lᵀ = a`. Positivity is judged on values.
pub fn cholesky<S: Scalar>(a: &[Vec<S>]) -> Result<Mat<S>> {
    let n = a.len();
    let zero = a[0][0].constant_like(S::Real::zero());
    let mut l = vec![vec![zero; n]; n];
    for j in 0..n {
        let mut s = a[j][j].clone();
        for k in 0..j {
            s = s - l[j][k].clone() * l[j][k].clone();
        }
        if !(s.value() > S::Real::zero()) {
            return Err(Error::NotPositiveDefinite {
                point: Vec::new(),
                pivot: j,
                value: s.value().as_f64(),
            });
        }
        let d = s.try_sqrt()?;
        for i in j + 1..n {
            let mut t = a[i][j].clone();
            for k in 0..j {
                t = t - l[i][k].clone() * l[j][k].clone();
            }
            l[i][j] = t.try_div(&d)?;
        }
        l[j][j] = d;
    }
    Ok(l)
}

/// Inverse of a symmetric positive definite matrix through its Cholesky factor.
pub fn spd_inverse<S: Scalar>(a: &[Vec<S>]) -> Result<Mat<S>> {
    let l = cholesky(a)?;
    let n = a.len();
    let zero = a[0][0].constant_like(S::Real::zero());
    let mut li = vec![vec![zero.clone(); n]; n];
    for i in 0..n {
        li[i][i] = l[i][i].try_recip()?;
        for j in 0..i {
            let mut s = zero.clone();
            for k in j..i {
                s = s + l[i][k].clone() * li[k][j].clone();
            }
            li[i][j] = -(s * li[i][i].clone());
        }
    }
    let mut inv = vec![vec![zero.clone(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = zero.clone();
            for k in i..n {
                s = s + li[k][i].clone() * li[k][j].clone();
            }
            inv[i][j] = s.clone();
            inv[j][i] = s;
        }
    }
    Ok(inv)
}

pub fn mat_vec<R: Real>(a: &[Vec<R>], v: &[R]) -> Vec<R> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(R::zero(), |s, (&x, &y)| s + x * y))
        .collect()
}

pub fn mat_mul<R: Real>(a: &[Vec<R>], b: &[Vec<R>]) -> Mat<R> {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().zip(b).fold(R::zero(), |s, (&x, br)| s + x * br[j]))
                .collect()
        })
        .collect()
}

/// `uᵀ a v`
pub fn bilinear<R: Real>(a: &[Vec<R>], u: &[R], v: &[R]) -> R {
    u.iter()
        .zip(mat_vec(a, v))
        .fold(R::zero(), |s, (&x, y)| s + x * y)
}

pub fn dot<R: Real>(u: &[R], v: &[R]) -> R {
    u.iter().zip(v).fold(R::zero(), |s, (&x, &y)| s + x * y)
}

pub fn sub<R: Real>(u: &[R], v: &[R]) -> Vec<R> {
    u.iter().zip(v).map(|(&x, &y)| x - y).collect()
}

pub fn add<R: Real>(u: &[R], v: &[R]) -> Vec<R> {
    u.iter().zip(v).map(|(&x, &y)| x + y).collect()
}

pub fn scale<R: Real>(c: R, v: &[R]) -> Vec<R> {
    v.iter().map(|&x| c * x).collect()
}

/// Largest absolute entry.
pub fn max_abs<R: Real>(v: &[R]) -> R {
    v.iter().fold(R::zero(), |m, x| m.max(x.abs()))
}

pub fn norm<R: Real>(v: &[R]) -> R {
    dot(v, v).sqrt()
}

pub fn identity<R: Real>(n: usize) -> Mat<R> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { R::one() } else { R::zero() }).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn inverse_of_spd() {
        let a = vec![
            vec![4.0, 1.0, 0.5],
            vec![1.0, 3.0, -0.2],
            vec![0.5, -0.2, 2.0],
        ];
        let inv = spd_inverse(&a).unwrap();
        let p = mat_mul(&a, &inv);
        for i in 0..3 {
            for j in 0..3 {
                assert_abs_diff_eq!(p[i][j], if i == j { 1.0 } else { 0.0 }, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn indefinite_is_rejected() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 1.0]];
        assert!(matches!(
            cholesky(&a),
            Err(Error::NotPositiveDefinite { pivot: 1, .. })
        ));
    }
}
