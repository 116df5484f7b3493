//! Polynomials in a fixed number of commuting variables.

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;

use crate::partitions::Partition;
use crate::scalar::{Scalar, Q};

#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<usize>, Scalar>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = MPoly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, j: usize) -> Self {
        let mut e = vec![0; nvars];
        e[j] = 1;
        let mut p = MPoly::zero(nvars);
        p.add_term(e, Scalar::from(1));
        p
    }

    /// Monomial symmetric polynomial `m_μ(x_1..x_N)`; zero when `l(μ) > N`.
    pub fn monomial_symmetric(nvars: usize, mu: &Partition) -> Self {
        let mut p = MPoly::zero(nvars);
        if mu.len() > nvars {
            return p;
        }
        let mut exps = mu.parts().to_vec();
        exps.resize(nvars, 0);
        exps.sort_unstable();
        loop {
            p.add_term(exps.clone(), Scalar::from(1));
            if !next_permutation(&mut exps) {
                break;
            }
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, exps: &[usize]) -> Scalar {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, exps: Vec<usize>, c: Scalar) {
        assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps.clone()).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.scale(&-Scalar::from(1)))
    }

    pub fn scale(&self, c: &Scalar) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// `∂/∂x_j`.
    pub fn derivative(&self, j: usize) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[j] > 0 {
                let mut e2 = e.clone();
                e2[j] -= 1;
                out.add_term(e2, c * &Scalar::from(e[j] as i64));
            }
        }
        out
    }

    /// Multiply by `x_j^k`.
    pub fn shift(&self, j: usize, k: usize) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[j] += k;
            out.add_term(e2, c.clone());
        }
        out
    }

    fn swap_vars(e: &[usize], j: usize, k: usize) -> Vec<usize> {
        let mut e2 = e.to_vec();
        e2.swap(j, k);
        e2
    }

    /// Exact quotient by `x_j - x_k` of a polynomial antisymmetric in `x_j, x_k`.
    ///
    /// Returns `None` if the input is not antisymmetric in that pair.
    pub fn divide_antisymmetric(&self, j: usize, k: usize) -> Option<MPoly> {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let partner = self.coeff(&Self::swap_vars(e, j, k));
            if (c + &partner).re != Q::zero() || !(c + &partner).im.is_zero() {
                return None;
            }
            let (a, b) = (e[j], e[k]);
            if a <= b {
                continue;
            }
            // x_j^a x_k^b - x_j^b x_k^a = x_j^b x_k^b (x_j - x_k) Σ_i x_j^i x_k^{a-b-1-i}
            for i in 0..a - b {
                let mut e2 = e.clone();
                e2[j] = b + i;
                e2[k] = b + (a - b - 1 - i);
                out.add_term(e2, c.clone());
            }
        }
        Some(out)
    }

    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        assert_eq!(x.len(), self.nvars);
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t = &t * &xi.pow(k as u32);
                }
            }
            acc += &t;
        }
        acc
    }
}

/// Lexicographic successor; false once the last permutation has been reached.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (i, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "x{}", i + 1)?,
                    _ => write!(f, "x{}^{p}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly[{}] {}", self.nvars, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::part;

    #[test]
    fn monomial_symmetric_counts() {
        assert_eq!(MPoly::monomial_symmetric(3, &part![2, 1]).terms().len(), 6);
        assert_eq!(MPoly::monomial_symmetric(3, &part![1, 1]).terms().len(), 3);
        assert!(MPoly::monomial_symmetric(1, &part![1, 1]).is_zero());
        assert_eq!(
            MPoly::monomial_symmetric(2, &Partition::empty()),
            MPoly::constant(2, Scalar::from(1))
        );
    }

    #[test]
    fn antisymmetric_division() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let diff = x.sub(&y);
        let f = x.mul(&x).add(&y.scale(&Scalar::from(3))).add(&x.mul(&y));
        let g = diff.mul(&f.add(&f.clone()));
        let sym = MPoly::monomial_symmetric(2, &part![2, 1]);
        let anti = diff.mul(&sym);
        assert_eq!(anti.divide_antisymmetric(0, 1), Some(sym));
        assert!(g.divide_antisymmetric(0, 1).is_none());
    }

    #[test]
    fn derivative_and_eval() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let f = x.mul(&x).mul(&y);
        assert_eq!(f.derivative(0), x.mul(&y).scale(&Scalar::from(2)));
        let v = f.eval(&[Scalar::from(3), Scalar::ratio(1, 2)]);
        assert_eq!(v, Scalar::ratio(9, 2));
    }
}
