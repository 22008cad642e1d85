use std::fmt;

/// Exponent vector `μ` of a monomial `x^μ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u8>);

impl MultiIndex {
    pub fn new(exponents: Vec<u8>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(nvars: usize) -> Self {
        MultiIndex(vec![0; nvars])
    }

    /// The unit index `e_i`.
    pub fn unit(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MultiIndex(e)
    }

    /// Index of a pure partial of order `k` in variable `i`.
    pub fn pure(nvars: usize, i: usize, k: u8) -> Self {
        let mut e = vec![0; nvars];
        e[i] = k;
        MultiIndex(e)
    }

    pub fn from_slice(exponents: &[u8]) -> Self {
        MultiIndex(exponents.to_vec())
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    /// `|μ|`
    pub fn order(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    /// `μ! = Π μᵢ!`
    pub fn factorial(&self) -> f64 {
        self.0
            .iter()
            .map(|&e| (1..=e as u64).product::<u64>() as f64)
            .product()
    }

    pub fn exponents(&self) -> &[u8] {
        &self.0
    }

    /// All indices with `nvars` entries and `|μ| ≤ max_order`, in graded
    /// lexicographic order.
    pub fn enumerate(nvars: usize, max_order: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for degree in 0..=max_order {
            let mut current = vec![0u8; nvars];
            fill(&mut current, 0, degree, &mut out);
        }
        out
    }
}

fn fill(current: &mut [u8], pos: usize, remaining: usize, out: &mut Vec<MultiIndex>) {
    if pos + 1 == current.len() {
        current[pos] = remaining as u8;
        out.push(MultiIndex(current.to_vec()));
        return;
    }
    if current.is_empty() {
        if remaining == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e as u8;
        fill(current, pos + 1, remaining - e, out);
    }
    current[pos] = 0;
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts_match_binomials() {
        // C(n + k, k)
        assert_eq!(MultiIndex::enumerate(1, 4).len(), 5);
        assert_eq!(MultiIndex::enumerate(2, 4).len(), 15);
        assert_eq!(MultiIndex::enumerate(4, 4).len(), 70);
        assert_eq!(MultiIndex::enumerate(8, 4).len(), 495);
    }

    #[test]
    fn enumeration_is_graded() {
        let all = MultiIndex::enumerate(3, 3);
        assert!(all.windows(2).all(|w| w[0].order() <= w[1].order()));
        assert_eq!(all[0], MultiIndex::zero(3));
        assert_eq!(all[1], MultiIndex::unit(3, 0));
    }

    #[test]
    fn factorial_is_product() {
        assert_eq!(MultiIndex::new(vec![2, 3]).factorial(), 12.0);
        assert_eq!(MultiIndex::zero(4).factorial(), 1.0);
    }
}
