//! Truncated multivariate Taylor expansions.
//!
//! A [`Jet`] stores the coefficients `coeff(μ) = ∂^μ F / μ!` of a function `F`
//! at an expansion point for every multi-index `|μ| ≤ order`. Arithmetic is the
//! truncated power-series algebra: products are Cauchy products that drop every
//! term above the order, and elementary functions compose a univariate series
//! with the non-constant part of the argument.
//!
//! Jets of different orders over the same variables can be mixed; the result
//! has the smaller order. Differentiating a jet with [`Jet::partial_jet`]
//! lowers the order by one, so derivative bookkeeping is automatic: a quantity
//! that has been differentiated too often reports [`Error::InsufficientOrder`].

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use crate::calculus::multi_index::MultiIndex;
use crate::calculus::real::Real;
use crate::error::{Error, Result};

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 4;

/// Monomial layout and product tables for a fixed `(nvars, max_order)`.
#[derive(Debug)]
pub(crate) struct Layout {
    nvars: usize,
    max_order: usize,
    monomials: Vec<MultiIndex>,
    /// `degree_end[d]` = number of monomials with degree `≤ d`.
    degree_end: Vec<usize>,
    index: HashMap<MultiIndex, usize>,
    /// `(i, j, k)` with `mono_i + mono_j = mono_k`, sorted by `deg(mono_k)`.
    mul: Vec<[u32; 3]>,
    mul_end: Vec<usize>,
    /// `deriv[v][j] = (k, factor)` with `mono_k = mono_j + e_v`, for `deg(mono_j) < max_order`.
    deriv: Vec<Vec<(u32, u32)>>,
}

impl Layout {
    fn build(nvars: usize, max_order: usize) -> Layout {
        let monomials = MultiIndex::enumerate(nvars, max_order);
        let index: HashMap<MultiIndex, usize> = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let mut degree_end = vec![0; max_order + 1];
        for m in &monomials {
            for d in m.order()..=max_order {
                degree_end[d] += 1;
            }
        }

        let mut mul = Vec::new();
        let mut mul_end = vec![0; max_order + 1];
        for (k, mk) in monomials.iter().enumerate() {
            let target = mk.exponents();
            let mut div = vec![0u8; nvars];
            loop {
                let rest: Vec<u8> = target.iter().zip(&div).map(|(t, d)| t - d).collect();
                let i = index[&MultiIndex::new(div.clone())];
                let j = index[&MultiIndex::new(rest)];
                mul.push([i as u32, j as u32, k as u32]);
                // odometer over 0..=target[v]
                let mut v = 0;
                while v < nvars {
                    if div[v] < target[v] {
                        div[v] += 1;
                        break;
                    }
                    div[v] = 0;
                    v += 1;
                }
                if v == nvars {
                    break;
                }
            }
            for d in mk.order()..=max_order {
                mul_end[d] = mul.len();
            }
        }

        let mut deriv = vec![Vec::new(); nvars];
        if max_order > 0 {
            for (v, table) in deriv.iter_mut().enumerate() {
                for mj in &monomials[..degree_end[max_order - 1]] {
                    let mut e = mj.exponents().to_vec();
                    e[v] += 1;
                    let factor = e[v] as u32;
                    table.push((index[&MultiIndex::new(e)] as u32, factor));
                }
            }
        }

        Layout {
            nvars,
            max_order,
            monomials,
            degree_end,
            index,
            mul,
            mul_end,
            deriv,
        }
    }

    fn get(nvars: usize, max_order: usize) -> Arc<Layout> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<Layout>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = cache.lock().expect("layout cache poisoned");
        map.entry((nvars, max_order))
            .or_insert_with(|| Arc::new(Layout::build(nvars, max_order)))
            .clone()
    }

    fn len(&self, order: usize) -> usize {
        self.degree_end[order]
    }
}

/// Truncated Taylor expansion in `nvars` variables.
#[derive(Clone)]
pub struct Jet<R: Real> {
    layout: Arc<Layout>,
    order: usize,
    coeffs: Vec<R>,
}

/// Binary operations accepted by [`jet_combine`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Right operand of [`jet_combine`].
#[derive(Debug, Clone)]
pub enum Operand<R: Real> {
    Jet(Jet<R>),
    Real(R),
}

impl<R: Real> Jet<R> {
    pub fn constant(c: R, nvars: usize, order: usize) -> Self {
        let layout = Layout::get(nvars, order);
        let mut coeffs = vec![R::zero(); layout.len(order)];
        coeffs[0] = c;
        Jet {
            layout,
            order,
            coeffs,
        }
    }

    /// Seeded independent variable `x_i` with value `v`.
    pub fn variable(i: usize, v: R, nvars: usize, order: usize) -> Result<Self> {
        if i >= nvars {
            return Err(Error::IndexOutOfRange { index: i, nvars });
        }
        let mut jet = Jet::constant(v, nvars, order);
        if order >= 1 {
            let idx = jet.layout.index[&MultiIndex::unit(nvars, i)];
            jet.coeffs[idx] = R::one();
        }
        Ok(jet)
    }

    /// Seeds every coordinate of `point` as its own variable.
    pub fn seed(point: &[R], order: usize) -> Vec<Self> {
        let n = point.len();
        point
            .iter()
            .enumerate()
            .map(|(i, &v)| Jet::variable(i, v, n, order).expect("index in range"))
            .collect()
    }

    /// A constant in the same variable space and order as `self`.
    pub fn constant_like(&self, c: R) -> Self {
        let mut coeffs = vec![R::zero(); self.coeffs.len()];
        coeffs[0] = c;
        Jet {
            layout: self.layout.clone(),
            order: self.order,
            coeffs,
        }
    }

    pub fn zero_like(&self) -> Self {
        self.constant_like(R::zero())
    }

    pub fn nvars(&self) -> usize {
        self.layout.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> R {
        self.coeffs[0]
    }

    /// Raw coefficients in graded lexicographic monomial order.
    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn monomials(&self) -> &[MultiIndex] {
        &self.layout.monomials[..self.coeffs.len()]
    }

    /// `∂^μ F / μ!`
    pub fn coeff(&self, mu: &MultiIndex) -> Result<R> {
        if mu.nvars() != self.nvars() {
            return Err(Error::Dimension {
                expected: self.nvars(),
                got: mu.nvars(),
            });
        }
        if mu.order() > self.order {
            return Err(Error::InsufficientOrder);
        }
        Ok(self.coeffs[self.layout.index[mu]])
    }

    /// `∂^μ F`
    pub fn partial(&self, mu: &MultiIndex) -> Result<R> {
        Ok(self.coeff(mu)? * R::lit(mu.factorial()))
    }

    /// First partial `∂F/∂x_i` as a number.
    pub fn d1(&self, i: usize) -> Result<R> {
        self.partial(&MultiIndex::unit(self.nvars(), i))
    }

    /// Drops every coefficient above `order`.
    pub fn truncate(&self, order: usize) -> Self {
        if order >= self.order {
            return self.clone();
        }
        Jet {
            layout: self.layout.clone(),
            order,
            coeffs: self.coeffs[..self.layout.len(order)].to_vec(),
        }
    }

    /// Taylor expansion of `∂F/∂x_v`, one order lower.
    pub fn partial_jet(&self, v: usize) -> Result<Self> {
        if v >= self.nvars() {
            return Err(Error::IndexOutOfRange {
                index: v,
                nvars: self.nvars(),
            });
        }
        if self.order == 0 {
            return Err(Error::InsufficientOrder);
        }
        let order = self.order - 1;
        let n = self.layout.len(order);
        let table = &self.layout.deriv[v];
        let coeffs = (0..n)
            .map(|j| {
                let (k, factor) = table[j];
                self.coeffs[k as usize] * R::lit(factor as f64)
            })
            .collect();
        Ok(Jet {
            layout: self.layout.clone(),
            order,
            coeffs,
        })
    }

    pub fn scale(&self, c: R) -> Self {
        Jet {
            layout: self.layout.clone(),
            order: self.order,
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
        }
    }

    pub fn add_real(&self, c: R) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0] + c;
        out
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.nvars() != other.nvars() {
            return Err(Error::ShapeMismatch(format!(
                "jets over {} and {} variables",
                self.nvars(),
                other.nvars()
            )));
        }
        Ok(())
    }

    fn joint_layout(&self, other: &Self) -> (Arc<Layout>, usize) {
        let layout = if self.layout.max_order >= other.layout.max_order {
            self.layout.clone()
        } else {
            other.layout.clone()
        };
        (layout, self.order.min(other.order))
    }

    fn add_ref(&self, other: &Self) -> Self {
        self.check_shape(other).expect("jet shapes");
        let (layout, order) = self.joint_layout(other);
        let n = layout.len(order);
        let coeffs = (0..n).map(|i| self.coeffs[i] + other.coeffs[i]).collect();
        Jet {
            layout,
            order,
            coeffs,
        }
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.check_shape(other).expect("jet shapes");
        let (layout, order) = self.joint_layout(other);
        let n = layout.len(order);
        let coeffs = (0..n).map(|i| self.coeffs[i] - other.coeffs[i]).collect();
        Jet {
            layout,
            order,
            coeffs,
        }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.check_shape(other).expect("jet shapes");
        let (layout, order) = self.joint_layout(other);
        let n = layout.len(order);
        let mut coeffs = vec![R::zero(); n];
        for &[i, j, k] in &layout.mul[..layout.mul_end[order]] {
            let (i, j, k) = (i as usize, j as usize, k as usize);
            coeffs[k] = coeffs[k] + self.coeffs[i] * other.coeffs[j];
        }
        Jet {
            layout,
            order,
            coeffs,
        }
    }

    /// `Σ_k series[k] · (self − self.value())^k` by Horner's rule.
    fn compose_series(&self, series: &[R]) -> Self {
        let mut delta = self.clone();
        delta.coeffs[0] = R::zero();
        let mut acc = self.constant_like(series[self.order]);
        for k in (0..self.order).rev() {
            acc = acc.mul_ref(&delta).add_real(series[k]);
        }
        acc
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        let mut series = Vec::with_capacity(self.order + 1);
        let mut fact = R::one();
        for k in 0..=self.order {
            if k > 0 {
                fact = fact * R::lit(k as f64);
            }
            series.push(e / fact);
        }
        self.compose_series(&series)
    }

    pub fn ln(&self) -> Result<Self> {
        let v = self.value();
        if !(v > R::zero()) {
            return Err(Error::Domain {
                func: "ln",
                value: v.as_f64(),
            });
        }
        let mut series = vec![v.ln()];
        let mut vk = R::one();
        for k in 1..=self.order {
            vk = vk * v;
            let sign = if k % 2 == 1 { R::one() } else { -R::one() };
            series.push(sign / (R::lit(k as f64) * vk));
        }
        Ok(self.compose_series(&series))
    }

    /// `self^r` for real `r`; the value must be positive.
    pub fn powf(&self, r: R) -> Result<Self> {
        self.powf_named(r, "pow")
    }

    fn powf_named(&self, r: R, func: &'static str) -> Result<Self> {
        let v = self.value();
        if !(v > R::zero()) {
            return Err(Error::Domain {
                func,
                value: v.as_f64(),
            });
        }
        let mut series = Vec::with_capacity(self.order + 1);
        let mut binom = R::one();
        for k in 0..=self.order {
            if k > 0 {
                binom = binom * (r - R::lit((k - 1) as f64)) / R::lit(k as f64);
            }
            series.push(binom * v.powf(r - R::lit(k as f64)));
        }
        Ok(self.compose_series(&series))
    }

    pub fn sqrt(&self) -> Result<Self> {
        self.powf_named(R::lit(0.5), "sqrt")
    }

    pub fn recip(&self) -> Result<Self> {
        let v = self.value();
        if v == R::zero() || !v.is_finite() {
            return Err(Error::DivisionByZero);
        }
        let inv = R::one() / v;
        let mut series = Vec::with_capacity(self.order + 1);
        let mut term = inv;
        for _ in 0..=self.order {
            series.push(term);
            term = -term * inv;
        }
        Ok(self.compose_series(&series))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(self.mul_ref(&other.recip()?))
    }

    /// Integer power by repeated multiplication.
    pub fn powi(&self, n: i32) -> Result<Self> {
        if n < 0 {
            return self.recip()?.powi(-n);
        }
        let mut result = self.constant_like(R::one());
        let mut base = self.clone();
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        Ok(result)
    }

    fn trig_series(&self, start: usize) -> Self {
        let v = self.value();
        let cycle = [v.sin(), v.cos(), -v.sin(), -v.cos()];
        let mut series = Vec::with_capacity(self.order + 1);
        let mut fact = R::one();
        for k in 0..=self.order {
            if k > 0 {
                fact = fact * R::lit(k as f64);
            }
            series.push(cycle[(start + k) % 4] / fact);
        }
        self.compose_series(&series)
    }

    pub fn sin(&self) -> Self {
        self.trig_series(0)
    }

    pub fn cos(&self) -> Self {
        self.trig_series(1)
    }

    /// Taylor expansion of `self ∘ inner`, where `self` is expanded over
    /// `inner.len()` variables at the point `inner[c].value()` and the inner
    /// jets live in some other variable space.
    pub fn compose(&self, inner: &[Jet<R>]) -> Result<Self> {
        if inner.len() != self.nvars() {
            return Err(Error::Dimension {
                expected: self.nvars(),
                got: inner.len(),
            });
        }
        let first = inner.first().ok_or(Error::Dimension {
            expected: 1,
            got: 0,
        })?;
        for j in inner {
            first.check_shape(j)?;
        }
        let target = inner
            .iter()
            .map(|j| j.order)
            .min()
            .unwrap_or(0)
            .min(self.order);
        let deltas: Vec<Jet<R>> = inner
            .iter()
            .map(|j| {
                let mut d = j.truncate(target);
                d.coeffs[0] = R::zero();
                d
            })
            .collect();
        let powers: Vec<Vec<Jet<R>>> = deltas
            .iter()
            .map(|d| {
                let mut p = vec![d.constant_like(R::one())];
                for k in 1..=target {
                    let next = p[k - 1].mul_ref(d);
                    p.push(next);
                }
                p
            })
            .collect();
        let mut acc = deltas[0].zero_like();
        for (idx, mono) in self.layout.monomials[..self.layout.len(target)]
            .iter()
            .enumerate()
        {
            let c = self.coeffs[idx];
            if c == R::zero() {
                continue;
            }
            let mut term: Option<Jet<R>> = None;
            for (var, &e) in mono.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = &powers[var][e as usize];
                term = Some(match term {
                    None => p.clone(),
                    Some(t) => t.mul_ref(p),
                });
            }
            acc = match term {
                None => acc.add_real(c),
                Some(t) => acc.add_ref(&t.scale(c)),
            };
        }
        Ok(acc)
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> R {
        self.coeffs
            .iter()
            .fold(R::zero(), |m, &c| if c.abs() > m { c.abs() } else { m })
    }
}

/// Checked binary arithmetic on jets.
pub fn jet_combine<R: Real>(op: JetOp, a: &Jet<R>, b: &Operand<R>) -> Result<Jet<R>> {
    match (op, b) {
        (JetOp::Add, Operand::Jet(b)) => a.check_shape(b).map(|_| a.add_ref(b)),
        (JetOp::Sub, Operand::Jet(b)) => a.check_shape(b).map(|_| a.sub_ref(b)),
        (JetOp::Mul, Operand::Jet(b)) => a.check_shape(b).map(|_| a.mul_ref(b)),
        (JetOp::Div, Operand::Jet(b)) => a.try_div(b),
        (JetOp::Pow, Operand::Jet(b)) => {
            a.check_shape(b)?;
            Ok(a.ln()?.mul_ref(b).exp())
        }
        (JetOp::Add, Operand::Real(c)) => Ok(a.add_real(*c)),
        (JetOp::Sub, Operand::Real(c)) => Ok(a.add_real(-*c)),
        (JetOp::Mul, Operand::Real(c)) => Ok(a.scale(*c)),
        (JetOp::Div, Operand::Real(c)) => {
            if *c == R::zero() {
                Err(Error::DivisionByZero)
            } else {
                Ok(a.scale(R::one() / *c))
            }
        }
        (JetOp::Pow, Operand::Real(c)) => {
            if c.fract() == R::zero() && c.abs() < R::lit(1024.0) {
                a.powi(c.as_f64() as i32)
            } else {
                a.powf(*c)
            }
        }
    }
}

/// Seeded variable jet; see [`Jet::variable`].
pub fn jet_var<R: Real>(i: usize, v: R, nvars: usize, order: usize) -> Result<Jet<R>> {
    if order < 1 {
        return Err(Error::InsufficientOrder);
    }
    Jet::variable(i, v, nvars, order)
}

/// Elementary function application by name.
pub fn jet_apply<R: Real>(func: &str, a: &Jet<R>) -> Result<Jet<R>> {
    match func {
        "exp" => Ok(a.exp()),
        "ln" => a.ln(),
        "sqrt" => a.sqrt(),
        "sin" => Ok(a.sin()),
        "cos" => Ok(a.cos()),
        other => Err(Error::UnknownIdentifier {
            name: other.to_string(),
            pos: 0,
        }),
    }
}

impl<R: Real> fmt::Debug for Jet<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("nvars", &self.nvars())
            .field("order", &self.order)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl<R: Real> PartialEq for Jet<R> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars() == other.nvars() && self.order == other.order && self.coeffs == other.coeffs
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl<R: Real> $trait<&Jet<R>> for &Jet<R> {
            type Output = Jet<R>;
            fn $method(self, rhs: &Jet<R>) -> Jet<R> {
                self.$inner(rhs)
            }
        }
        impl<R: Real> $trait<Jet<R>> for Jet<R> {
            type Output = Jet<R>;
            fn $method(self, rhs: Jet<R>) -> Jet<R> {
                self.$inner(&rhs)
            }
        }
        impl<R: Real> $trait<&Jet<R>> for Jet<R> {
            type Output = Jet<R>;
            fn $method(self, rhs: &Jet<R>) -> Jet<R> {
                self.$inner(rhs)
            }
        }
        impl<R: Real> $trait<Jet<R>> for &Jet<R> {
            type Output = Jet<R>;
            fn $method(self, rhs: Jet<R>) -> Jet<R> {
                self.$inner(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl<R: Real> Neg for Jet<R> {
    type Output = Jet<R>;
    fn neg(self) -> Jet<R> {
        self.scale(-R::one())
    }
}

impl<R: Real> Neg for &Jet<R> {
    type Output = Jet<R>;
    fn neg(self) -> Jet<R> {
        self.scale(-R::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn x(v: f64, order: usize) -> Jet<f64> {
        jet_var(0, v, 1, order).unwrap()
    }

    fn partials(j: &Jet<f64>) -> Vec<f64> {
        (0..=j.order())
            .map(|k| j.partial(&MultiIndex::pure(1, 0, k as u8)).unwrap())
            .collect()
    }

    #[test]
    fn seeded_variable() {
        let j = x(3.0, 4);
        assert_eq!(j.value(), 3.0);
        assert_eq!(j.coeff(&MultiIndex::unit(1, 0)).unwrap(), 1.0);
        assert_eq!(j.coeff(&MultiIndex::pure(1, 0, 2)).unwrap(), 0.0);
    }

    #[test]
    fn square_and_exp() {
        let s = &x(3.0, 4) * &x(3.0, 4);
        assert_eq!(partials(&s)[1], 6.0);
        assert_eq!(partials(&s)[2], 2.0);
        let e = x(0.0, 4).exp();
        for p in partials(&e) {
            assert_relative_eq!(p, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn product_coefficients() {
        let s = &x(3.0, 2) * &x(3.0, 2);
        assert_eq!(s.coeffs(), &[9.0, 6.0, 1.0]);
    }

    #[test]
    fn reciprocal_derivative() {
        let r = x(2.0, 3).recip().unwrap();
        assert_relative_eq!(partials(&r)[1], -0.25, epsilon = 1e-15);
        assert!(x(0.0, 2).recip().is_err());
    }

    #[test]
    fn log_series_at_one() {
        let l = x(1.0, 4).ln().unwrap();
        let expect = [0.0, 1.0, -1.0, 2.0, -6.0];
        for (p, e) in partials(&l).iter().zip(expect) {
            assert_relative_eq!(*p, e, epsilon = 1e-13);
        }
        assert!(matches!(
            x(0.0, 2).ln(),
            Err(Error::Domain { func: "ln", .. })
        ));
    }

    #[test]
    fn sqrt_derivative() {
        let s = x(4.0, 2).sqrt().unwrap();
        assert_relative_eq!(partials(&s)[1], 0.25, epsilon = 1e-15);
        assert!(x(-1.0, 2).sqrt().is_err());
        assert!(x(0.0, 2).sqrt().is_err());
    }

    #[test]
    fn ln_of_t4_second_derivative() {
        let t = x(2.0, 4);
        let l = t.powi(4).unwrap().ln().unwrap();
        assert_relative_eq!(partials(&l)[2], -1.0, epsilon = 1e-13);
    }

    #[test]
    fn trig_series() {
        let s = x(0.0, 4).sin();
        let c = x(0.0, 4).cos();
        let ps = partials(&s);
        let pc = partials(&c);
        assert_eq!(ps, vec![0.0, 1.0, 0.0, -1.0, 0.0]);
        assert_eq!(pc, vec![1.0, 0.0, -1.0, 0.0, 1.0]);
    }

    #[test]
    fn mixed_orders_truncate_to_smaller() {
        let a = x(1.0, 4);
        let b = x(1.0, 2);
        assert_eq!((&a * &b).order(), 2);
        assert_eq!((a.partial_jet(0).unwrap()).order(), 3);
        assert!(x(1.0, 1)
            .partial_jet(0)
            .unwrap()
            .partial_jet(0)
            .is_err());
    }

    #[test]
    fn mismatched_shapes_are_errors() {
        let a = jet_var(0, 1.0, 1, 2).unwrap();
        let b = jet_var(0, 1.0, 2, 2).unwrap();
        assert!(matches!(
            jet_combine(JetOp::Add, &a, &Operand::Jet(b)),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(jet_var(2, 1.0, 2, 2).is_err());
        assert!(jet_combine(JetOp::Div, &a, &Operand::Real(0.0)).is_err());
    }

    #[test]
    fn multivariate_mixed_partial() {
        // F = x^2 y^3 at (1, 2): ∂x∂y² F = 2x·6y = 24
        let v = Jet::seed(&[1.0, 2.0], 4);
        let f = v[0].powi(2).unwrap() * v[1].powi(3).unwrap();
        let mu = MultiIndex::new(vec![1, 2]);
        assert_relative_eq!(f.partial(&mu).unwrap(), 24.0, epsilon = 1e-12);
    }

    #[test]
    fn composition_matches_direct_evaluation() {
        // outer F(a, b) = a·b + a², inner a = sin x, b = exp x
        let q = [0.3f64.sin(), 0.3f64.exp()];
        let outer_vars = Jet::seed(&q, 3);
        let outer = &outer_vars[0] * &outer_vars[1] + outer_vars[0].powi(2).unwrap();
        let xj = x(0.3, 3);
        let inner = vec![xj.sin(), xj.exp()];
        let composed = outer.compose(&inner).unwrap();
        let direct = &inner[0] * &inner[1] + inner[0].powi(2).unwrap();
        for (a, b) in composed.coeffs().iter().zip(direct.coeffs()) {
            assert_relative_eq!(*a, *b, epsilon = 1e-13);
        }
    }

    #[test]
    fn works_in_single_precision() {
        let t = jet_var(0, 2.0f32, 1, 3).unwrap();
        let l = t.powi(4).unwrap().ln().unwrap();
        let d2 = l.partial(&MultiIndex::pure(1, 0, 2)).unwrap();
        assert!((d2 + 1.0).abs() < 1e-5);
    }
}
