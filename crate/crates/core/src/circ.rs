//! `Λ° = Λ/(p_1 - 1)` as the polynomial ring in `p°_2, p°_3, …`, and
//! bi-functions on `Ω × Ω` built from it.

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;

use crate::error::Result;
use crate::partitions::Partition;
use crate::scalar::{Scalar, Q};
use crate::symalg::{Basis, SymFunc};
use crate::zmeasure::ThomaPoint;

/// Polynomial in `p°_k`, `k ≥ 2`, keyed by the partition of indices (no parts equal to 1).
#[derive(Clone, Default, PartialEq, Eq)]
pub struct CircPoly {
    terms: BTreeMap<Partition, Scalar>,
}

impl CircPoly {
    pub fn zero() -> Self {
        CircPoly::default()
    }

    pub fn constant(c: Scalar) -> Self {
        let mut f = CircPoly::zero();
        f.add_term(Partition::empty(), c);
        f
    }

    pub fn one() -> Self {
        CircPoly::constant(Scalar::from(1))
    }

    /// `p°_ν`, with every part 1 replaced by the constant 1.
    pub fn monomial(nu: &Partition) -> Self {
        let mut f = CircPoly::zero();
        f.add_term(nu.without_ones(), Scalar::from(1));
        f
    }

    pub fn p(k: usize) -> Self {
        CircPoly::monomial(&Partition::from_multiset(vec![k]))
    }

    pub fn terms(&self) -> &BTreeMap<Partition, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, nu: &Partition) -> Scalar {
        self.terms.get(nu).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Filtration degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Partition::size).max()
    }

    pub fn add_term(&mut self, nu: Partition, c: Scalar) {
        debug_assert!(nu.multiplicity(1) == 0);
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(nu.clone()).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&nu);
        }
    }

    pub fn add(&self, other: &CircPoly) -> CircPoly {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &CircPoly) -> CircPoly {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), -v.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> CircPoly {
        let mut out = CircPoly::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &CircPoly) -> CircPoly {
        let mut out = CircPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.union(b), ca * cb);
            }
        }
        out
    }

    /// Multiply by `p°_k` (a no-op for `k = 1`).
    pub fn mul_p(&self, k: usize) -> CircPoly {
        if k == 1 {
            return self.clone();
        }
        let extra = Partition::from_multiset(vec![k]);
        let mut out = CircPoly::zero();
        for (a, c) in &self.terms {
            out.add_term(a.union(&extra), c.clone());
        }
        out
    }

    /// Formal `∂/∂p°_i`, `i ≥ 2`.
    pub fn derivative(&self, i: usize) -> CircPoly {
        let mut out = CircPoly::zero();
        for (nu, c) in &self.terms {
            let m = nu.multiplicity(i);
            if m == 0 {
                continue;
            }
            let mut parts = nu.parts().to_vec();
            let pos = parts.iter().position(|&x| x == i).unwrap();
            parts.remove(pos);
            out.add_term(Partition::from_multiset(parts), c * &Scalar::from(m as i64));
        }
        out
    }

    /// Part of filtration degree at most `n`.
    pub fn truncate(&self, n: usize) -> CircPoly {
        CircPoly {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.size() <= n)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Image of a symmetric function under `p_1 ↦ 1`.
    pub fn from_symfunc(f: &SymFunc) -> Result<CircPoly> {
        let fp = f.to_powersum()?;
        let mut out = CircPoly::zero();
        for (nu, c) in fp.terms() {
            out.add_term(nu.without_ones(), c.clone());
        }
        Ok(out)
    }

    /// A lift to `Λ` (power-sum basis, no `p_1` factors).
    pub fn to_symfunc(&self, theta: &Q) -> SymFunc {
        SymFunc::new(
            Basis::PowerSum,
            theta.clone(),
            self.terms.iter().map(|(k, v)| (k.clone(), v.clone())),
        )
    }

    pub fn eval(&self, omega: &ThomaPoint, theta: &Q) -> Scalar {
        let mut cache: BTreeMap<usize, Q> = BTreeMap::new();
        let mut acc = Scalar::zero();
        for (nu, c) in &self.terms {
            let mut v = Q::from_integer(1.into());
            for &k in nu.parts() {
                v *= cache.entry(k).or_insert_with(|| omega.power_sum(k, theta)).clone();
            }
            acc += c.scale(&v);
        }
        acc
    }
}

impl fmt::Display for CircPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (nu, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if nu.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})p°{nu}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CircPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CircPoly {self}")
    }
}

/// Function on `Ω × Ω` as a finite sum of `p°_μ ⊗ p°_ν`.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct BiCirc {
    terms: BTreeMap<(Partition, Partition), Scalar>,
}

impl BiCirc {
    pub fn zero() -> Self {
        BiCirc::default()
    }

    pub fn outer(f: &CircPoly, g: &CircPoly) -> Self {
        let mut out = BiCirc::zero();
        out.add_outer(f, g, &Scalar::from(1));
        out
    }

    pub fn terms(&self) -> &BTreeMap<(Partition, Partition), Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: (Partition, Partition), c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// `self += w · f ⊗ g`.
    pub fn add_outer(&mut self, f: &CircPoly, g: &CircPoly, w: &Scalar) {
        for (a, ca) in f.terms() {
            for (b, cb) in g.terms() {
                self.add_term((a.clone(), b.clone()), &(ca * cb) * w);
            }
        }
    }

    pub fn add(&self, other: &BiCirc) -> BiCirc {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> BiCirc {
        let mut out = BiCirc::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn transpose(&self) -> BiCirc {
        let mut out = BiCirc::zero();
        for ((a, b), v) in &self.terms {
            out.add_term((b.clone(), a.clone()), v.clone());
        }
        out
    }

    /// Integrate out the first argument with a linear functional on monomials.
    pub fn contract_first(&self, mut e: impl FnMut(&Partition) -> Scalar) -> CircPoly {
        let mut out = CircPoly::zero();
        for ((a, b), v) in &self.terms {
            out.add_term(b.clone(), v * &e(a));
        }
        out
    }

    pub fn eval(&self, sigma: &ThomaPoint, omega: &ThomaPoint, theta: &Q) -> Scalar {
        let mut acc = Scalar::zero();
        for ((a, b), v) in &self.terms {
            let fa = CircPoly::monomial(a).eval(sigma, theta);
            let fb = CircPoly::monomial(b).eval(omega, theta);
            acc += &(v * &fa) * &fb;
        }
        acc
    }
}

impl fmt::Debug for BiCirc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiCirc[")?;
        for (k, ((a, b), v)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({v})p°{a}⊗p°{b}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::part;
    use crate::scalar::{q, qr};

    #[test]
    fn monomial_drops_ones() {
        assert_eq!(CircPoly::monomial(&part![3, 1, 1]), CircPoly::p(3));
        assert_eq!(CircPoly::p(1), CircPoly::one());
    }

    #[test]
    fn derivative_rules() {
        let f = CircPoly::p(2).mul(&CircPoly::p(2)).mul_p(3);
        let d = f.derivative(2);
        assert_eq!(d, CircPoly::p(2).mul_p(3).scale(&Scalar::from(2)));
        assert!(f.derivative(4).is_zero());
    }

    #[test]
    fn symfunc_round_trip_and_eval() {
        let th = qr(1, 2);
        let f = SymFunc::m(&th, part![2, 1]);
        let c = CircPoly::from_symfunc(&f).unwrap();
        // m_(2,1) = p_2 p_1 - p_3
        let expected = CircPoly::p(2).sub(&CircPoly::p(3));
        assert_eq!(c, expected);
        let w = ThomaPoint::new(vec![qr(1, 2)], vec![qr(1, 3)]).unwrap();
        assert_eq!(c.eval(&w, &th), crate::zmeasure::eval_point(&f, &w, &th).unwrap());
        assert_eq!(CircPoly::from_symfunc(&c.to_symfunc(&th)).unwrap(), c);
    }

    #[test]
    fn bicirc_outer_and_transpose() {
        let f = CircPoly::p(2).add(&CircPoly::one());
        let g = CircPoly::p(3);
        let k = BiCirc::outer(&f, &g);
        assert_eq!(k.terms().len(), 2);
        assert_eq!(k.transpose(), BiCirc::outer(&g, &f));
        let w = ThomaPoint::new(vec![qr(1, 2)], vec![]).unwrap();
        let v = k.eval(&w, &w, &q(1));
        assert_eq!(v, Scalar::real(qr(5, 4) * qr(1, 8)));
    }
}
