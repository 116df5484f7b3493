//! Sparse symmetric functions over `Q(i)` with exact basis changes.
//!
//! Power sums are the canonical internal basis: products concatenate index
//! partitions and the θ-inner product is diagonal there. Every other basis is
//! reached through per-degree transition tables that are built once per
//! `(degree, θ)` and shared.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num::{One, Zero};
use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::laguerre;
use crate::partitions::{self, Partition};
use crate::scalar::{q, Scalar, Q};

/// Largest degree for which Jack and monomial tables are built.
pub const MAX_DEGREE: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Basis {
    PowerSum,
    Monomial,
    JackP,
    JackQ,
    /// Laguerre functions at fixed parameters, given through `e1 = z + z'`, `e2 = zz'`.
    Laguerre {
        e1: Scalar,
        e2: Scalar,
    },
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::PowerSum => write!(f, "p"),
            Basis::Monomial => write!(f, "m"),
            Basis::JackP => write!(f, "P"),
            Basis::JackQ => write!(f, "Q"),
            Basis::Laguerre { .. } => write!(f, "L"),
        }
    }
}

/// Transition data for one degree.
///
/// Rows are indexed by `parts` in graded reverse-lexicographic order, so `(n)`
/// has index 0 and `(1^n)` the last index.
pub struct DegreeTable {
    pub degree: usize,
    pub theta: Q,
    pub parts: Vec<Partition>,
    pub index: HashMap<Partition, usize>,
    /// `p_to_m[ν][μ]`: coefficient of `m_μ` in `p_ν`.
    pub p_to_m: Vec<Vec<Q>>,
    /// `m_to_p[μ][ν]`: coefficient of `p_ν` in `m_μ`.
    pub m_to_p: Vec<Vec<Q>>,
    /// `jack_p[λ][ν]`: coefficient of `p_ν` in `P_λ`.
    pub jack_p: Vec<Vec<Q>>,
    /// `jack_m[λ][μ]`: coefficient of `m_μ` in `P_λ`.
    pub jack_m: Vec<Vec<Q>>,
    /// `⟨p_ν, p_ν⟩_θ = z_ν θ^{-l(ν)}`.
    pub p_norm: Vec<Q>,
    /// `b_λ = ⟨P_λ, P_λ⟩_θ^{-1}`, read off the Gram–Schmidt norms.
    pub b: Vec<Q>,
}

impl DegreeTable {
    fn build(n: usize, theta: &Q) -> DegreeTable {
        let parts = partitions::enumerate(n);
        let len = parts.len();
        let index: HashMap<Partition, usize> = parts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();

        let p_to_m = powersum_to_monomial(&parts, &index);

        // p_ν involves only m_μ with μ dominating ν, i.e. index(μ) ≤ index(ν).
        let mut m_to_p = vec![vec![Q::zero(); len]; len];
        for nu in 0..len {
            let mut row = vec![Q::zero(); len];
            row[nu] = Q::one();
            for mu in 0..nu {
                let c = &p_to_m[nu][mu];
                if c.is_zero() {
                    continue;
                }
                for k in 0..len {
                    if !m_to_p[mu][k].is_zero() {
                        row[k] -= c * &m_to_p[mu][k];
                    }
                }
            }
            let d = &p_to_m[nu][nu];
            for v in row.iter_mut() {
                *v /= d;
            }
            m_to_p[nu] = row;
        }

        let p_norm: Vec<Q> = parts
            .iter()
            .map(|nu| partitions::z_lambda_q(nu) / theta.pow(nu.len() as i32))
            .collect();
        let ip = |u: &[Q], v: &[Q]| -> Q {
            let mut acc = Q::zero();
            for k in 0..len {
                if !u[k].is_zero() && !v[k].is_zero() {
                    acc += &u[k] * &v[k] * &p_norm[k];
                }
            }
            acc
        };

        // Gram–Schmidt from (1^n) upward; each P_λ = m_λ + Σ_{μ later in order} a m_μ.
        let mut jack_p: Vec<Vec<Q>> = vec![Vec::new(); len];
        let mut jack_m: Vec<Vec<Q>> = vec![Vec::new(); len];
        let mut norms = vec![Q::zero(); len];
        for lam in (0..len).rev() {
            let mut vp = m_to_p[lam].clone();
            let mut vm = vec![Q::zero(); len];
            vm[lam] = Q::one();
            for mu in lam + 1..len {
                let coef = ip(&m_to_p[lam], &jack_p[mu]) / &norms[mu];
                if coef.is_zero() {
                    continue;
                }
                for k in 0..len {
                    if !jack_p[mu][k].is_zero() {
                        vp[k] -= &coef * &jack_p[mu][k];
                    }
                    if !jack_m[mu][k].is_zero() {
                        vm[k] -= &coef * &jack_m[mu][k];
                    }
                }
            }
            norms[lam] = ip(&vp, &vp);
            jack_p[lam] = vp;
            jack_m[lam] = vm;
        }
        let b = norms.iter().map(|nrm| nrm.recip()).collect();

        DegreeTable {
            degree: n,
            theta: theta.clone(),
            parts,
            index,
            p_to_m,
            m_to_p,
            jack_p,
            jack_m,
            p_norm,
            b,
        }
    }

    pub fn idx(&self, p: &Partition) -> usize {
        self.index[p]
    }

    pub fn b_of(&self, lam: &Partition) -> &Q {
        &self.b[self.idx(lam)]
    }
}

/// Coefficients of monomials in power sums, built by multiplying one power sum at a time.
fn powersum_to_monomial(parts: &[Partition], index: &HashMap<Partition, usize>) -> Vec<Vec<Q>> {
    let len = parts.len();
    let mut out = vec![vec![Q::zero(); len]; len];
    for (row, nu) in parts.iter().enumerate() {
        let mut cur: BTreeMap<Partition, u64> = BTreeMap::new();
        cur.insert(Partition::empty(), 1);
        for &r in nu.parts() {
            let mut next = BTreeMap::new();
            for (mu, c) in &cur {
                for (mu2, k) in monomial_times_power(mu, r) {
                    *next.entry(mu2).or_insert(0) += c * k;
                }
            }
            cur = next;
        }
        for (mu, c) in cur {
            out[row][index[&mu]] = q(c as i64);
        }
    }
    out
}

/// `m_μ · p_r = Σ c m_{μ'}` where μ' adds `r` to one part (or appends it) and `c`
/// is the multiplicity of the modified part in μ'.
pub fn monomial_times_power(mu: &Partition, r: usize) -> Vec<(Partition, u64)> {
    let mut out = Vec::new();
    let mut seen = Vec::new();
    let mut candidates: Vec<Option<usize>> = mu.parts().iter().map(|&p| Some(p)).collect();
    candidates.push(None);
    for cand in candidates {
        if seen.contains(&cand) {
            continue;
        }
        seen.push(cand);
        let mut v = mu.parts().to_vec();
        let new_val = match cand {
            Some(p) => {
                let pos = v.iter().position(|&x| x == p).unwrap();
                v[pos] += r;
                p + r
            }
            None => {
                v.push(r);
                r
            }
        };
        let mu2 = Partition::from_multiset(v);
        let c = mu2.multiplicity(new_val) as u64;
        out.push((mu2, c));
    }
    out
}

static TABLES: Lazy<Mutex<HashMap<(usize, Q), Arc<DegreeTable>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// Memoised per-degree transition table.
pub fn table(n: usize, theta: &Q) -> Result<Arc<DegreeTable>> {
    if n > MAX_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree: n,
            max: MAX_DEGREE,
        });
    }
    if theta <= &Q::zero() {
        return Err(Error::Invalid("θ must be positive".into()));
    }
    let key = (n, theta.clone());
    if let Some(t) = TABLES.lock().unwrap().get(&key) {
        return Ok(t.clone());
    }
    let built = Arc::new(DegreeTable::build(n, theta));
    Ok(TABLES.lock().unwrap().entry(key).or_insert(built).clone())
}

/// A finite linear combination of basis elements indexed by partitions.
#[derive(Clone, PartialEq, Eq)]
pub struct SymFunc {
    basis: Basis,
    theta: Q,
    terms: BTreeMap<Partition, Scalar>,
}

impl SymFunc {
    pub fn new(basis: Basis, theta: Q, terms: impl IntoIterator<Item = (Partition, Scalar)>) -> Self {
        let mut f = SymFunc::zero(basis, theta);
        for (p, c) in terms {
            f.add_term(p, c);
        }
        f
    }

    pub fn zero(basis: Basis, theta: Q) -> Self {
        SymFunc {
            basis,
            theta,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(theta: Q) -> Self {
        SymFunc::single(Basis::PowerSum, theta, Partition::empty())
    }

    pub fn single(basis: Basis, theta: Q, lam: Partition) -> Self {
        SymFunc::new(basis, theta, [(lam, Scalar::one())])
    }

    pub fn p(theta: &Q, lam: Partition) -> Self {
        SymFunc::single(Basis::PowerSum, theta.clone(), lam)
    }

    pub fn m(theta: &Q, lam: Partition) -> Self {
        SymFunc::single(Basis::Monomial, theta.clone(), lam)
    }

    pub fn jack_p(theta: &Q, lam: Partition) -> Self {
        SymFunc::single(Basis::JackP, theta.clone(), lam)
    }

    pub fn jack_q(theta: &Q, lam: Partition) -> Self {
        SymFunc::single(Basis::JackQ, theta.clone(), lam)
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn theta(&self) -> &Q {
        &self.theta
    }

    pub fn terms(&self) -> &BTreeMap<Partition, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, lam: &Partition) -> Scalar {
        self.terms.get(lam).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest index size carrying a nonzero coefficient (0 for the zero function).
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Partition::size).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, lam: Partition, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(lam).or_default();
        *slot += &c;
        if slot.is_zero() {
            let key = self.terms.iter().find(|(_, v)| v.is_zero()).map(|(k, _)| k.clone()).unwrap();
            self.terms.remove(&key);
        }
    }

    pub fn scale(&self, c: &Scalar) -> SymFunc {
        SymFunc::new(
            self.basis.clone(),
            self.theta.clone(),
            self.terms.iter().map(|(k, v)| (k.clone(), v * c)),
        )
    }

    fn check_context(&self, other: &SymFunc) -> Result<()> {
        if self.theta != other.theta {
            return Err(Error::ContextMismatch(format!("θ = {} vs θ = {}", self.theta, other.theta)));
        }
        Ok(())
    }

    /// Sum, expressed in `self`'s basis when both share it and in power sums otherwise.
    pub fn add(&self, other: &SymFunc) -> Result<SymFunc> {
        self.check_context(other)?;
        if self.basis == other.basis {
            let mut out = self.clone();
            for (k, v) in &other.terms {
                out.add_term(k.clone(), v.clone());
            }
            return Ok(out);
        }
        self.to_powersum()?.add(&other.to_powersum()?)
    }

    pub fn sub(&self, other: &SymFunc) -> Result<SymFunc> {
        self.add(&other.scale(&-Scalar::one()))
    }

    /// Product in the power-sum basis.
    pub fn multiply(&self, other: &SymFunc) -> Result<SymFunc> {
        self.check_context(other)?;
        let a = self.to_powersum()?;
        let b = other.to_powersum()?;
        let mut out = SymFunc::zero(Basis::PowerSum, self.theta.clone());
        for (la, ca) in &a.terms {
            for (lb, cb) in &b.terms {
                out.add_term(la.union(lb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: usize) -> Result<SymFunc> {
        let mut acc = SymFunc::one(self.theta.clone());
        for _ in 0..k {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }

    /// Degree-`n` homogeneous part, in the current basis when that basis is graded.
    pub fn homogeneous_part(&self, n: usize) -> Result<SymFunc> {
        let graded = match self.basis {
            Basis::Laguerre { .. } => self.to_powersum()?,
            _ => self.clone(),
        };
        Ok(SymFunc::new(
            graded.basis.clone(),
            graded.theta.clone(),
            graded
                .terms
                .iter()
                .filter(|(k, _)| k.size() == n)
                .map(|(k, v)| (k.clone(), v.clone())),
        ))
    }

    pub fn to_powersum(&self) -> Result<SymFunc> {
        let theta = &self.theta;
        let mut out = SymFunc::zero(Basis::PowerSum, theta.clone());
        match &self.basis {
            Basis::PowerSum => return Ok(self.clone()),
            Basis::Monomial | Basis::JackP | Basis::JackQ => {
                for (lam, c) in &self.terms {
                    let t = table(lam.size(), theta)?;
                    let i = t.idx(lam);
                    let (row, factor) = match self.basis {
                        Basis::Monomial => (&t.m_to_p[i], Q::one()),
                        Basis::JackP => (&t.jack_p[i], Q::one()),
                        _ => (&t.jack_p[i], t.b[i].clone()),
                    };
                    for (k, v) in row.iter().enumerate() {
                        if !v.is_zero() {
                            out.add_term(t.parts[k].clone(), c.scale(&(v * &factor)));
                        }
                    }
                }
            }
            Basis::Laguerre { e1, e2 } => {
                for (lam, c) in &self.terms {
                    let lq = laguerre::laguerre_in_q(lam, theta, e1, e2)?;
                    out = out.add(&SymFunc::new(Basis::JackQ, theta.clone(), lq).scale(c))?;
                }
                out = out.to_powersum()?;
            }
        }
        Ok(out)
    }

    /// Exact change of basis.
    pub fn convert(&self, target: &Basis) -> Result<SymFunc> {
        if &self.basis == target {
            return Ok(self.clone());
        }
        let p = self.to_powersum()?;
        let theta = &self.theta;
        let mut out = SymFunc::zero(target.clone(), theta.clone());
        match target {
            Basis::PowerSum => return Ok(p),
            Basis::Monomial => {
                for (nu, c) in &p.terms {
                    let t = table(nu.size(), theta)?;
                    for (k, v) in t.p_to_m[t.idx(nu)].iter().enumerate() {
                        if !v.is_zero() {
                            out.add_term(t.parts[k].clone(), c.scale(v));
                        }
                    }
                }
            }
            Basis::JackP | Basis::JackQ => {
                // coefficient of P_λ is ⟨f, Q_λ⟩; of Q_λ it is ⟨f, P_λ⟩
                for n in degrees(&p) {
                    let t = table(n, theta)?;
                    for (i, lam) in t.parts.iter().enumerate() {
                        let mut acc = Scalar::zero();
                        for (nu, c) in p.terms.iter().filter(|(k, _)| k.size() == n) {
                            let k = t.idx(nu);
                            if !t.jack_p[i][k].is_zero() {
                                acc += c.scale(&(&t.jack_p[i][k] * &t.p_norm[k]));
                            }
                        }
                        if *target == Basis::JackP {
                            acc = acc.scale(&t.b[i]);
                        }
                        out.add_term(lam.clone(), acc);
                    }
                }
            }
            Basis::Laguerre { e1, e2 } => {
                let in_p = p.convert(&Basis::JackP)?;
                for (lam, c) in &in_p.terms {
                    for (mu, d) in laguerre::jack_in_laguerre_sym(lam, theta, e1, e2)? {
                        out.add_term(mu, c * &d);
                    }
                }
            }
        }
        Ok(out)
    }
}

fn degrees(f: &SymFunc) -> Vec<usize> {
    let mut d: Vec<usize> = f.terms.keys().map(Partition::size).collect();
    d.sort_unstable();
    d.dedup();
    d
}

impl fmt::Display for SymFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (lam, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}){}{lam}", self.basis)?;
        }
        Ok(())
    }
}

impl fmt::Debug for SymFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymFunc[θ={}] {}", self.theta, self)
    }
}

/// `⟨f, g⟩_θ` with `⟨p_λ, p_μ⟩_θ = δ_{λμ} z_λ θ^{-l(λ)}` (bilinear, no conjugation).
pub fn inner_product_theta(f: &SymFunc, g: &SymFunc) -> Result<Scalar> {
    f.check_context(g)?;
    let a = f.to_powersum()?;
    let b = g.to_powersum()?;
    let theta = f.theta();
    let mut acc = Scalar::zero();
    for (lam, ca) in &a.terms {
        if let Some(cb) = b.terms.get(lam) {
            let w = partitions::z_lambda_q(lam) / theta.pow(lam.len() as i32);
            acc += (ca * cb).scale(&w);
        }
    }
    Ok(acc)
}

/// Jack `P_λ` for all `|λ| = n`, each expressed in the monomial basis.
pub fn jack_basis(n: usize, theta: &Q) -> Result<BTreeMap<Partition, SymFunc>> {
    let t = table(n, theta)?;
    Ok(t.parts
        .iter()
        .enumerate()
        .map(|(i, lam)| {
            let f = SymFunc::new(
                Basis::Monomial,
                theta.clone(),
                t.jack_m[i]
                    .iter()
                    .enumerate()
                    .map(|(k, v)| (t.parts[k].clone(), Scalar::real(v.clone()))),
            );
            (lam.clone(), f)
        })
        .collect())
}

/// `b_λ` read from the Jack table (the closed form lives in [`partitions::b_factor`]).
pub fn jack_b(lam: &Partition, theta: &Q) -> Result<Q> {
    let t = table(lam.size(), theta)?;
    Ok(t.b_of(lam).clone())
}

/// `dim_θ(μ, λ) = ⟨p_1^{|λ|-|μ|} P_μ, Q_λ⟩_θ`, zero unless μ ⊆ λ.
pub fn dim_theta(mu: &Partition, lam: &Partition, theta: &Q) -> Result<Q> {
    if mu.size() > lam.size() {
        return Err(Error::Invalid(format!("|{mu}| > |{lam}|")));
    }
    let k = lam.size() - mu.size();
    let lhs = SymFunc::p(theta, Partition::new(vec![1; k])?).multiply(&SymFunc::jack_p(theta, mu.clone()))?;
    let v = inner_product_theta(&lhs, &SymFunc::jack_q(theta, lam.clone()))?;
    Ok(v.re)
}

/// `dim_θ(λ) = |λ|! / H_θ(λ)`.
pub fn dim_theta_total(lam: &Partition, theta: &Q) -> Q {
    partitions::dim_total_closed(lam, theta)
}

/// `dim_θ(μ, λ)` as a weighted path count through one-box branching coefficients.
///
/// Needs no Jack tables, so it works at any degree.
pub fn dim_theta_paths(mu: &Partition, lam: &Partition, theta: &Q) -> Q {
    if !lam.contains(mu) {
        return Q::zero();
    }
    let mut layer: BTreeMap<Partition, Q> = BTreeMap::new();
    layer.insert(mu.clone(), Q::one());
    for _ in mu.size()..lam.size() {
        let mut next: BTreeMap<Partition, Q> = BTreeMap::new();
        for (nu, w) in &layer {
            for up in nu.add_box_options() {
                if lam.contains(&up) {
                    let c = partitions::one_box_dim(nu, &up, theta);
                    *next.entry(up).or_insert_with(Q::zero) += w * c;
                }
            }
        }
        layer = next;
    }
    layer.remove(lam).unwrap_or_else(Q::zero)
}
