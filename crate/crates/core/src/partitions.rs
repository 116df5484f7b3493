//! Integer partitions, Young diagrams and the θ-deformed box statistics built on them.
//!
//! Boxes are 1-based `(row, column)` pairs, so the θ-content of `(i, j)` is
//! `(j - 1) - θ(i - 1)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{factorial_q, q, Scalar, Q};

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Invalid(format!("partition {parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Invalid(format!("partition {parts:?} is not weakly decreasing")));
        }
        Ok(Partition(parts))
    }

    /// Sorts and drops zeros; for callers building partitions from multisets.
    pub fn from_multiset(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `λ_i` with 1-based `i`, zero beyond the length.
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn multiplicity(&self, i: usize) -> usize {
        self.0.iter().filter(|&&p| p == i).count()
    }

    pub fn multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for &p in &self.0 {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.part(1);
        Partition((1..=cols).map(|j| self.0.iter().filter(|&&p| p >= j).count()).collect())
    }

    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    pub fn contains_box(&self, b: Box) -> bool {
        b.row >= 1 && b.col >= 1 && self.part(b.row) >= b.col
    }

    pub fn boxes(&self) -> impl Iterator<Item = Box> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| (1..=len).map(move |j| Box { row: i + 1, col: j }))
    }

    /// Arm length `λ_i - j` of a box inside the diagram.
    pub fn arm(&self, b: Box) -> usize {
        self.part(b.row) - b.col
    }

    /// Leg length `λ'_j - i`, computed without materialising the conjugate.
    pub fn leg(&self, b: Box) -> usize {
        self.0.iter().filter(|&&p| p >= b.col).count() - b.row
    }

    /// Same multiset with all parts equal to one removed.
    pub fn without_ones(&self) -> Partition {
        Partition(self.0.iter().copied().filter(|&p| p > 1).collect())
    }

    /// Concatenate two partitions as multisets (product of power sums).
    pub fn union(&self, other: &Partition) -> Partition {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Partition::from_multiset(v)
    }

    /// Partitions obtained by adding one box.
    pub fn add_box_options(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        for i in 0..=self.0.len() {
            let cur = self.0.get(i).copied().unwrap_or(0);
            let above = if i == 0 { usize::MAX } else { self.0[i - 1] };
            if cur < above {
                let mut v = self.0.clone();
                if i == v.len() {
                    v.push(1);
                } else {
                    v[i] += 1;
                }
                out.push(Partition(v));
            }
        }
        out
    }

    /// Partitions obtained by removing one corner box.
    pub fn remove_box_options(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        for i in 0..self.0.len() {
            let below = self.0.get(i + 1).copied().unwrap_or(0);
            if self.0[i] > below {
                let mut v = self.0.clone();
                v[i] -= 1;
                if v[i] == 0 {
                    v.pop();
                }
                out.push(Partition(v));
            }
        }
        out
    }

    /// Dominance order `self ≥ other` (same size assumed).
    pub fn dominates(&self, other: &Partition) -> bool {
        let n = self.len().max(other.len());
        let (mut a, mut b) = (0usize, 0usize);
        for i in 1..=n {
            a += self.part(i);
            b += other.part(i);
            if a < b {
                return false;
            }
        }
        true
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

/// Graded reverse-lexicographic order: smaller size first, then lexicographically
/// larger parts first, so `(n)` leads each degree and `(1^n)` closes it.
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size().cmp(&other.size()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "(")?;
        for (k, p) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Shorthand used throughout tests: `part![2, 1]`.
#[macro_export]
macro_rules! part {
    () => { $crate::partitions::Partition::empty() };
    ($($x:expr),+ $(,)?) => {
        $crate::partitions::Partition::new(vec![$($x),+]).expect("valid partition literal")
    };
}

/// A cell of a Young diagram, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Box {
    pub row: usize,
    pub col: usize,
}

impl Box {
    /// θ-content `(j-1) - θ(i-1)`.
    pub fn content(&self, theta: &Q) -> Q {
        q(self.col as i64 - 1) - theta * q(self.row as i64 - 1)
    }
}

/// A skew diagram `outer / inner`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewShape {
    outer: Partition,
    inner: Partition,
}

impl SkewShape {
    pub fn new(outer: Partition, inner: Partition) -> Result<Self> {
        if !outer.contains(&inner) {
            return Err(Error::Invalid(format!("{inner} is not contained in {outer}")));
        }
        Ok(SkewShape { outer, inner })
    }

    pub fn straight(outer: Partition) -> Self {
        SkewShape {
            outer,
            inner: Partition::empty(),
        }
    }

    pub fn outer(&self) -> &Partition {
        &self.outer
    }

    pub fn inner(&self) -> &Partition {
        &self.inner
    }

    pub fn size(&self) -> usize {
        self.outer.size() - self.inner.size()
    }

    pub fn boxes(&self) -> impl Iterator<Item = Box> + '_ {
        self.outer.boxes().filter(|b| !self.inner.contains_box(*b))
    }

    /// At most one box in each column.
    pub fn is_horizontal_strip(&self) -> bool {
        (1..=self.outer.len()).all(|i| self.outer.part(i + 1) <= self.inner.part(i))
    }

    /// At most one box in each row.
    pub fn is_vertical_strip(&self) -> bool {
        (1..=self.outer.len()).all(|i| self.outer.part(i) <= self.inner.part(i) + 1)
    }
}

/// All partitions of `n` in graded reverse-lexicographic order.
pub fn enumerate(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    rec(n, n, &mut cur, &mut out);
    out
}

/// All partitions of size at most `n`, ordered by degree.
pub fn enumerate_up_to(n: usize) -> Vec<Partition> {
    (0..=n).flat_map(enumerate).collect()
}

/// Partitions of `n` with every part at least 2 (indices of `Λ°` monomials).
pub fn enumerate_no_ones(n: usize) -> Vec<Partition> {
    enumerate(n).into_iter().filter(|p| p.multiplicity(1) == 0).collect()
}

/// Partitions μ ⊆ λ (all sizes), in graded order.
pub fn subpartitions(lambda: &Partition) -> Vec<Partition> {
    fn rec(lambda: &Partition, i: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        out.push(Partition(cur.clone()));
        for p in 1..=lambda.part(i).min(max) {
            cur.push(p);
            rec(lambda, i + 1, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(lambda, 1, usize::MAX, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// ρ(n), the number of partitions of `n`, by Euler's pentagonal recurrence.
pub fn partition_count(n: usize) -> u128 {
    let mut p = vec![0u128; n + 1];
    p[0] = 1;
    for i in 1..=n {
        let mut acc: i128 = 0;
        let mut k: i64 = 1;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > i {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc += sign * p[i - g1] as i128;
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= i {
                acc += sign * p[i - g2] as i128;
            }
            k += 1;
        }
        p[i] = acc as u128;
    }
    p[n]
}

/// Generalised Pochhammer symbol `(t)_{λ/μ,θ} = Π_{□ ∈ λ/μ} (t + c_θ(□))`.
pub fn skew_pochhammer(t: &Scalar, shape: &SkewShape, theta: &Q) -> Scalar {
    shape
        .boxes()
        .fold(Scalar::one(), |acc, b| &acc * &(t + &Scalar::real(b.content(theta))))
}

/// `(z)_{λ/μ,θ}(z')_{λ/μ,θ}` from the symmetric data `e1 = z + z'`, `e2 = zz'`.
///
/// Each box contributes `(z + c)(z' + c) = e2 + c·e1 + c²`.
pub fn pair_pochhammer(e1: &Scalar, e2: &Scalar, shape: &SkewShape, theta: &Q) -> Scalar {
    shape.boxes().fold(Scalar::one(), |acc, b| {
        let c = b.content(theta);
        let factor = e2 + &(&e1.scale(&c) + &Scalar::real(&c * &c));
        &acc * &factor
    })
}

/// `H_θ(λ) = Π (λ_i - j + θ(λ'_j - i) + 1)`.
pub fn hook_product(lambda: &Partition, theta: &Q) -> Q {
    lambda.boxes().fold(Q::one(), |acc, b| {
        acc * (q(lambda.arm(b) as i64) + theta * q(lambda.leg(b) as i64) + Q::one())
    })
}

/// `H'_θ(λ) = Π (λ_i - j + θ(λ'_j - i + 1))`.
pub fn upper_hook_product(lambda: &Partition, theta: &Q) -> Q {
    lambda.boxes().fold(Q::one(), |acc, b| {
        acc * (q(lambda.arm(b) as i64) + theta * q(lambda.leg(b) as i64 + 1))
    })
}

/// One-box factor `b_λ(s) = (a + θ(l+1)) / (a + 1 + θl)`; equal to 1 outside the diagram.
pub fn box_b(lambda: &Partition, b: Box, theta: &Q) -> Q {
    if !lambda.contains_box(b) {
        return Q::one();
    }
    let a = q(lambda.arm(b) as i64);
    let l = q(lambda.leg(b) as i64);
    (&a + theta * (&l + Q::one())) / (a + Q::one() + theta * l)
}

/// `b_λ^{(1/θ)} = ⟨P_λ, P_λ⟩_θ^{-1}` as the arm/leg product `H'_θ(λ) / H_θ(λ)`.
pub fn b_factor(lambda: &Partition, theta: &Q) -> Q {
    upper_hook_product(lambda, theta) / hook_product(lambda, theta)
}

/// `z_λ = Π_i i^{m_i} m_i!`.
pub fn z_lambda(lambda: &Partition) -> u128 {
    lambda
        .multiplicities()
        .into_iter()
        .map(|(i, m)| (i as u128).pow(m as u32) * (1..=m as u128).product::<u128>())
        .product()
}

pub fn z_lambda_q(lambda: &Partition) -> Q {
    lambda
        .multiplicities()
        .into_iter()
        .fold(Q::one(), |acc, (i, m)| acc * q(i as i64).pow(m as i32) * factorial_q(m as u64))
}

/// Number of partitions of `m` with no part equal to 1 (multiplicity of `-α_m`).
pub fn count_no_ones(m: usize) -> u128 {
    if m == 0 {
        return 1;
    }
    if m == 1 {
        return 0;
    }
    partition_count(m) - partition_count(m - 1)
}

/// `|λ|! / H_θ(λ)`.
pub fn dim_total_closed(lambda: &Partition, theta: &Q) -> Q {
    factorial_q(lambda.size() as u64) / hook_product(lambda, theta)
}

/// One-box branching coefficient: the coefficient of `P_λ` in `p_1 P_μ` for `λ = μ + □`.
///
/// Obtained from the horizontal-strip Pieri coefficient `φ_{λ/μ}` of `Q_(1) = θ p_1`.
pub fn one_box_dim(mu: &Partition, lambda: &Partition, theta: &Q) -> Q {
    debug_assert_eq!(mu.size() + 1, lambda.size());
    pieri_phi(mu, lambda, theta) / theta
}

/// `φ_{λ/μ} = Π_{s ∈ C_{λ/μ}} b_λ(s) / b_μ(s)` over the columns meeting `λ/μ`.
pub fn pieri_phi(mu: &Partition, lambda: &Partition, theta: &Q) -> Q {
    let cols: Vec<usize> = (1..=lambda.len()).flat_map(|i| (mu.part(i) + 1)..=lambda.part(i)).collect();
    let mut acc = Q::one();
    for b in lambda.boxes().filter(|b| cols.contains(&b.col)) {
        acc *= box_b(lambda, b, theta) / box_b(mu, b, theta);
    }
    acc
}

/// `ψ_{λ/μ} = Π_{s ∈ R_{λ/μ} \ C_{λ/μ}} b_μ(s) / b_λ(s)` for a horizontal strip.
pub fn pieri_psi(mu: &Partition, lambda: &Partition, theta: &Q) -> Q {
    let rows: Vec<usize> = (1..=lambda.len()).filter(|&i| lambda.part(i) > mu.part(i)).collect();
    let cols: Vec<usize> = (1..=lambda.len()).flat_map(|i| (mu.part(i) + 1)..=lambda.part(i)).collect();
    let mut acc = Q::one();
    for b in lambda.boxes().filter(|b| rows.contains(&b.row) && !cols.contains(&b.col)) {
        acc *= box_b(mu, b, theta) / box_b(lambda, b, theta);
    }
    acc
}

/// Sub-partitions μ ⊆ λ with λ/μ a horizontal strip.
pub fn horizontal_strip_inners(lambda: &Partition) -> Vec<Partition> {
    // μ_i ranges over [λ_{i+1}, λ_i]
    let mut out = vec![Vec::new()];
    for i in 1..=lambda.len() {
        let lo = lambda.part(i + 1);
        let hi = lambda.part(i);
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<usize>| {
                (lo..=hi).map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(Partition::from_multiset).collect()
}

/// Sub-partitions μ ⊆ λ with λ/μ a vertical strip.
pub fn vertical_strip_inners(lambda: &Partition) -> Vec<Partition> {
    horizontal_strip_inners(&lambda.conjugate())
        .into_iter()
        .map(|m| m.conjugate())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qr;
    use proptest::prelude::*;

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(enumerate(0), vec![Partition::empty()]);
        assert_eq!(enumerate(4).len(), 5);
        assert_eq!(enumerate(6).len(), 11);
        assert_eq!(enumerate(4)[0], part![4]);
        assert_eq!(enumerate(4)[4], part![1, 1, 1, 1]);
        for n in 0..=12 {
            assert_eq!(enumerate(n).len() as u128, partition_count(n));
        }
        // order refines dominance: a dominating partition never comes later
        for n in 1..=8 {
            let ps = enumerate(n);
            for (i, a) in ps.iter().enumerate() {
                for b in &ps[i + 1..] {
                    assert!(!b.dominates(a) || a == b, "{b} dominates {a} but sorts later");
                }
            }
        }
    }

    #[test]
    fn partition_counts_bounded_by_factorial() {
        let mut fact: u128 = 1;
        for n in 1..=12u128 {
            fact *= n;
            assert!(partition_count(n as usize) <= fact);
        }
        assert_eq!(partition_count(24), 1575);
        assert_eq!(partition_count(100), 190_569_292);
    }

    #[test]
    fn invalid_partitions_rejected() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert!(SkewShape::new(part![1], part![2]).is_err());
    }

    #[test]
    fn skew_pochhammer_examples() {
        let theta = qr(1, 3);
        let z = Scalar::new(q(1), q(2));
        let zr = |v: Q| Scalar::real(v);
        let two = SkewShape::straight(part![2]);
        assert_eq!(skew_pochhammer(&z, &two, &theta), &z * &(&z + &Scalar::one()));
        let col = SkewShape::straight(part![1, 1]);
        assert_eq!(skew_pochhammer(&z, &col, &theta), &z * &(&z - &zr(theta.clone())));
        let skew = SkewShape::new(part![2, 1], part![1]).unwrap();
        assert_eq!(
            skew_pochhammer(&z, &skew, &theta),
            &(&z + &Scalar::one()) * &(&z - &zr(theta.clone()))
        );
        assert_eq!(skew_pochhammer(&z, &SkewShape::straight(Partition::empty()), &theta), Scalar::one());
    }

    #[test]
    fn hook_and_b_examples() {
        let th = qr(2, 5);
        assert_eq!(hook_product(&part![2], &th), q(2));
        assert_eq!(hook_product(&part![1, 1], &th), &th + q(1));
        assert_eq!(hook_product(&Partition::empty(), &th), q(1));
        assert_eq!(b_factor(&part![1], &th), th.clone());
        assert_eq!(b_factor(&Partition::empty(), &th), q(1));
        assert_eq!(b_factor(&part![2], &th), &th * (&th + q(1)) / q(2));
    }

    #[test]
    fn z_lambda_examples() {
        assert_eq!(z_lambda(&part![3]), 3);
        assert_eq!(z_lambda(&part![1, 1, 1]), 6);
        assert_eq!(z_lambda(&part![2, 1, 1]), 4);
        assert_eq!(z_lambda_q(&part![2, 2, 1]), q(8));
    }

    #[test]
    fn no_ones_counts() {
        assert_eq!(count_no_ones(1), 0);
        assert_eq!(count_no_ones(2), 1);
        assert_eq!(count_no_ones(4), 2);
        assert_eq!(count_no_ones(6), 4);
        for m in 1..=14 {
            assert_eq!(count_no_ones(m), enumerate_no_ones(m).len() as u128);
        }
    }

    #[test]
    fn hook_at_theta_one_matches_classical() {
        // classical hook lengths via an independent row/column count
        for n in 0..=10 {
            for lam in enumerate(n) {
                let conj = lam.conjugate();
                let mut classical = 1u128;
                for i in 1..=lam.len() {
                    for j in 1..=lam.part(i) {
                        classical *= (lam.part(i) - j + conj.part(j) - i + 1) as u128;
                    }
                }
                assert_eq!(hook_product(&lam, &q(1)), Q::from_integer((classical as u64).into()));
            }
        }
    }

    #[test]
    fn b_factor_bounded() {
        for th in [qr(1, 2), q(1), q(2)] {
            let bound_base = &th + q(1);
            for n in 0..=10 {
                for lam in enumerate(n) {
                    assert!(b_factor(&lam, &th) <= bound_base.pow(n as i32), "{lam}");
                }
            }
        }
    }

    #[test]
    fn conjugate_is_involution() {
        for n in 0..=9 {
            for lam in enumerate(n) {
                assert_eq!(lam.conjugate().conjugate(), lam);
                assert_eq!(lam.conjugate().size(), n);
            }
        }
    }

    #[test]
    fn strips() {
        let lam = part![3, 1];
        let hs = horizontal_strip_inners(&lam);
        assert!(hs.contains(&part![1]) && hs.contains(&part![3, 1]) && hs.contains(&part![1, 1]));
        for mu in &hs {
            assert!(SkewShape::new(lam.clone(), mu.clone()).unwrap().is_horizontal_strip());
        }
        for mu in vertical_strip_inners(&part![2, 2]) {
            assert!(SkewShape::new(part![2, 2], mu.clone()).unwrap().is_vertical_strip());
        }
        assert_eq!(vertical_strip_inners(&part![2, 2]).len(), 3);
    }

    #[test]
    fn subpartitions_complete() {
        let lam = part![3, 2, 1];
        let subs = subpartitions(&lam);
        let brute: Vec<Partition> = enumerate_up_to(6).into_iter().filter(|m| lam.contains(m)).collect();
        assert_eq!(subs, brute);
    }

    fn arb_partition(max: usize) -> impl Strategy<Value = Partition> {
        proptest::collection::vec(1..=max, 0..=max).prop_map(Partition::from_multiset)
    }

    proptest! {
        #[test]
        fn pochhammer_factorises(lam in arb_partition(4), pick in 0usize..64, num in -5i64..5, den in 1i64..5) {
            let subs = subpartitions(&lam);
            let mu = &subs[pick % subs.len()];
            let t = Scalar::ratio(num, den);
            let th = qr(3, 2);
            let whole = skew_pochhammer(&t, &SkewShape::straight(lam.clone()), &th);
            let inner = skew_pochhammer(&t, &SkewShape::straight(mu.clone()), &th);
            let skew = skew_pochhammer(&t, &SkewShape::new(lam.clone(), mu.clone()).unwrap(), &th);
            prop_assert_eq!(whole, &inner * &skew);
        }
    }
}
