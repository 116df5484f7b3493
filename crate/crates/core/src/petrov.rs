//! The `θ → 0` degeneration: Kingman simplex, `θ = 0` branching dimensions,
//! Poisson–Dirichlet Laguerre functions and the two-parameter pregenerator.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laguerre::{self, ParamContext};
use crate::partitions::{self, Partition};
use crate::scalar::{factorial_q, fmt_q, q, q_to_f64, Scalar, Q};
use crate::symalg::{self, Basis, SymFunc};

/// Point `x_1 ≥ x_2 ≥ … ≥ 0` with `Σ x_i ≤ 1`; zeros are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KingmanPoint {
    x: Vec<Q>,
}

impl KingmanPoint {
    pub fn new(mut x: Vec<Q>) -> Result<Self> {
        if x.iter().any(|v| v.is_negative()) {
            return Err(Error::Invalid("negative Kingman coordinate".into()));
        }
        x.retain(|v| !v.is_zero());
        x.sort_by(|a, b| b.cmp(a));
        if x.iter().sum::<Q>() > Q::one() {
            return Err(Error::Invalid("Kingman coordinates sum above 1".into()));
        }
        Ok(KingmanPoint { x })
    }

    pub fn coords(&self) -> &[Q] {
        &self.x
    }

    /// Moment coordinate `q_k = Σ x_i^k`, with `q_0 = 1`.
    pub fn moment(&self, k: usize) -> Q {
        if k == 0 {
            return Q::one();
        }
        self.x.iter().map(|v| v.pow(k as i32)).sum()
    }

    /// Evaluate a symmetric function on the finite sequence `x`.
    pub fn eval(&self, f: &SymFunc) -> Result<Scalar> {
        let fp = f.to_powersum()?;
        let mut acc = Scalar::zero();
        for (nu, c) in fp.terms() {
            let v: Q = nu.parts().iter().map(|&k| self.moment(k)).product();
            acc += c.scale(&v);
        }
        Ok(acc)
    }
}

impl fmt::Display for KingmanPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let xs: Vec<String> = self.x.iter().map(fmt_q).collect();
        write!(f, "x=({})", xs.join(","))
    }
}

/// Parameters `(a, τ)` of the limit regime `z + z' → -a`, `zz'/θ → τ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PDParams {
    pub a: Q,
    pub tau: Q,
}

impl PDParams {
    pub fn new(a: Q, tau: Q) -> Result<Self> {
        if !tau.is_positive() {
            return Err(Error::NotAdmissible(format!("τ = {} must be positive", fmt_q(&tau))));
        }
        Ok(PDParams { a, tau })
    }

    /// Laguerre context at `θ` on the approach path `e1 = -a`, `e2 = θτ`.
    pub fn context_at(&self, theta: &Q) -> ParamContext {
        ParamContext::from_symmetric(Scalar::real(-self.a.clone()), Scalar::real(theta * &self.tau), theta.clone())
    }

    /// Box weight `𝔮(i, j)`.
    pub fn box_weight(&self, b: partitions::Box) -> Q {
        let (i, j) = (q(b.row as i64), q(b.col as i64));
        if b.col > 1 {
            (&j - Q::one()) * (&j - Q::one() - &self.a)
        } else {
            &self.tau + &self.a * (i - Q::one())
        }
    }
}

/// Coefficient of `m_λ` in `p_1^{|λ|-|μ|} m_μ`.
pub fn dim0(mu: &Partition, lam: &Partition) -> Q {
    if mu.size() > lam.size() || !lam.contains(mu) {
        return Q::zero();
    }
    let mut layer: BTreeMap<Partition, u64> = BTreeMap::from([(mu.clone(), 1)]);
    for _ in mu.size()..lam.size() {
        let mut next = BTreeMap::new();
        for (nu, w) in &layer {
            for (up, c) in symalg::monomial_times_power(nu, 1) {
                if lam.contains(&up) {
                    *next.entry(up).or_insert(0) += w * c;
                }
            }
        }
        layer = next;
    }
    Q::from_integer(layer.get(lam).copied().unwrap_or(0).into())
}

/// Leading term `coef · θ^power` of a positive rational function of `θ` near 0.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Lead {
    coef: Q,
    power: i32,
}

impl Lead {
    /// `x + θ y` with `x, y ≥ 0` not both zero.
    fn linear(x: Q, y: Q) -> Lead {
        if x.is_zero() {
            Lead { coef: y, power: 1 }
        } else {
            Lead { coef: x, power: 0 }
        }
    }

    fn mul(&self, o: &Lead) -> Lead {
        Lead {
            coef: &self.coef * &o.coef,
            power: self.power + o.power,
        }
    }

    fn div(&self, o: &Lead) -> Lead {
        Lead {
            coef: &self.coef / &o.coef,
            power: self.power - o.power,
        }
    }

    /// Sum of positive terms: no cancellation in the leading order.
    fn add(&self, o: &Lead) -> Lead {
        match self.power.cmp(&o.power) {
            std::cmp::Ordering::Less => self.clone(),
            std::cmp::Ordering::Greater => o.clone(),
            std::cmp::Ordering::Equal => Lead {
                coef: &self.coef + &o.coef,
                power: self.power,
            },
        }
    }
}

fn box_b_lead(lam: &Partition, b: partitions::Box) -> Lead {
    if !lam.contains_box(b) {
        return Lead { coef: Q::one(), power: 0 };
    }
    let a = q(lam.arm(b) as i64);
    let l = q(lam.leg(b) as i64);
    Lead::linear(a.clone(), l.clone() + Q::one()).div(&Lead::linear(a + Q::one(), l))
}

fn one_box_lead(mu: &Partition, lam: &Partition) -> Lead {
    let cols: Vec<usize> = (1..=lam.len()).flat_map(|i| (mu.part(i) + 1)..=lam.part(i)).collect();
    let mut acc = Lead { coef: Q::one(), power: -1 };
    for b in lam.boxes().filter(|b| cols.contains(&b.col)) {
        acc = acc.mul(&box_b_lead(lam, b)).div(&box_b_lead(mu, b));
    }
    acc
}

/// `lim_{θ→0} dim_θ(μ, λ)` from leading terms of the one-box branching weights.
///
/// `None` if the limit is infinite.
pub fn dim0_limit(mu: &Partition, lam: &Partition) -> Option<Q> {
    if !lam.contains(mu) {
        return Some(Q::zero());
    }
    let mut layer: BTreeMap<Partition, Lead> = BTreeMap::from([(mu.clone(), Lead { coef: Q::one(), power: 0 })]);
    for _ in mu.size()..lam.size() {
        let mut next: BTreeMap<Partition, Lead> = BTreeMap::new();
        for (nu, w) in &layer {
            for up in nu.add_box_options() {
                if lam.contains(&up) {
                    let t = w.mul(&one_box_lead(nu, &up));
                    let slot = next.remove(&up);
                    next.insert(up, slot.map_or(t.clone(), |s| s.add(&t)));
                }
            }
        }
        layer = next;
    }
    let l = layer.remove(lam)?;
    match l.power {
        p if p < 0 => None,
        0 => Some(l.coef),
        _ => Some(Q::zero()),
    }
}

/// Normalization `r_μ` of the monomial terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RCoefficient {
    /// `Π_i m_i(μ) / Π_i μ_i`.
    Literal,
    /// `Π_i m_i(μ)! / Π_i μ_i`, the one produced by the `θ → 0` limit of `Q_μ`.
    Factorial,
}

pub fn r_coefficient(mu: &Partition, rule: RCoefficient) -> Q {
    let num: Q = mu
        .multiplicities()
        .values()
        .map(|&m| match rule {
            RCoefficient::Literal => q(m as i64),
            RCoefficient::Factorial => factorial_q(m as u64),
        })
        .product();
    let den: Q = mu.parts().iter().map(|&k| q(k as i64)).product();
    num / den
}

/// `Σ_{μ⊆λ} (-1)^{|λ/μ|} dim_0(μ,λ)/|λ/μ|! · Π_{x∈λ/μ} 𝔮(x) · r_μ m_μ`, monomial basis.
pub fn laguerre_pd(lam: &Partition, pd: &PDParams) -> SymFunc {
    laguerre_pd_with(lam, pd, RCoefficient::Literal)
}

/// The result is tagged with `θ = 1`; monomial and power-sum conversions do not depend on it.
pub fn laguerre_pd_with(lam: &Partition, pd: &PDParams, rule: RCoefficient) -> SymFunc {
    let mut out = SymFunc::zero(Basis::Monomial, Q::one());
    for mu in partitions::subpartitions(lam) {
        let k = lam.size() - mu.size();
        let weight: Q = lam.boxes().filter(|b| !mu.contains_box(*b)).map(|b| pd.box_weight(b)).product();
        let mut c = dim0(&mu, lam) / factorial_q(k as u64) * weight * r_coefficient(&mu, rule);
        if k % 2 == 1 {
            c = -c;
        }
        out.add_term(mu, Scalar::real(c));
    }
    out
}

/// Polynomial in `q_1, q_2, …` keyed by the multiset of indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QPoly {
    terms: BTreeMap<Partition, Q>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut f = QPoly::zero();
        f.add_term(Partition::empty(), c);
        f
    }

    /// `q_k`; `q_0 = 1`.
    pub fn q(k: usize) -> Self {
        if k == 0 {
            return QPoly::constant(Q::one());
        }
        let mut f = QPoly::zero();
        f.add_term(Partition::from_multiset(vec![k]), Q::one());
        f
    }

    pub fn terms(&self) -> &BTreeMap<Partition, Q> {
        &self.terms
    }

    pub fn coeff(&self, nu: &Partition) -> Q {
        self.terms.get(nu).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree with `q_k` weighted by `k`.
    pub fn weighted_degree(&self) -> Option<usize> {
        self.terms.keys().map(Partition::size).max()
    }

    pub fn add_term(&mut self, nu: Partition, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(nu.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&nu);
        }
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let mut out = self.clone();
        for (k, v) in &o.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> QPoly {
        let mut out = QPoly::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        let mut out = QPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                out.add_term(a.union(b), ca * cb);
            }
        }
        out
    }

    pub fn derivative(&self, i: usize) -> QPoly {
        let mut out = QPoly::zero();
        for (nu, c) in &self.terms {
            let m = nu.multiplicity(i);
            if m == 0 {
                continue;
            }
            let mut parts = nu.parts().to_vec();
            parts.remove(parts.iter().position(|&x| x == i).unwrap());
            out.add_term(Partition::from_multiset(parts), c * q(m as i64));
        }
        out
    }

    pub fn eval(&self, x: &KingmanPoint) -> Q {
        self.terms
            .iter()
            .map(|(nu, c)| c * nu.parts().iter().map(|&k| x.moment(k)).product::<Q>())
            .sum()
    }
}

/// The pregenerator on polynomials in the moment coordinates:
/// `Σ_{i,j} (i+1)(j+1)(q_{i+j} - q_i q_j) ∂_i∂_j + Σ_i (i+1)[(i-a) q_{i-1} - (i+τ) q_i] ∂_i`.
pub fn petrov_generator_apply(f: &QPoly, pd: &PDParams) -> QPoly {
    let mut idx: Vec<usize> = f.terms.keys().flat_map(|k| k.parts().to_vec()).collect();
    idx.sort_unstable();
    idx.dedup();
    let mut out = QPoly::zero();
    for &i in &idx {
        let di = f.derivative(i);
        let qi = q(i as i64);
        for &j in &idx {
            let dij = di.derivative(j);
            if dij.is_zero() {
                continue;
            }
            let w = (&qi + Q::one()) * q(j as i64 + 1);
            let mixed = QPoly::q(i + j).add(&QPoly::q(i).mul(&QPoly::q(j)).scale(&-Q::one()));
            out = out.add(&dij.mul(&mixed).scale(&w));
        }
        let lower = QPoly::q(i - 1).scale(&((&qi + Q::one()) * (&qi - &pd.a)));
        let diag = QPoly::q(i).scale(&-((&qi + Q::one()) * (&qi + &pd.tau)));
        out = out.add(&di.mul(&lower.add(&diag)));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitRow {
    pub theta: String,
    /// Max over `μ` of the normalized coefficient deviation, exact.
    pub deviation: Option<String>,
    pub deviation_f64: Option<f64>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitReport {
    pub lambda: String,
    pub rows: Vec<LimitRow>,
    pub strictly_decreasing: bool,
}

/// Normalized coefficient deviation of `𝔏_λ(θ)` from `target` in the monomial basis.
///
/// Returns `None` when the `m_λ` coefficient of `𝔏_λ(θ)` vanishes.
pub fn normalized_deviation(lam: &Partition, target: &SymFunc, pd: &PDParams, theta: &Q) -> Result<Option<Q>> {
    let ctx = pd.context_at(theta);
    let l = laguerre::laguerre_fn(lam, &ctx)?.convert(&Basis::Monomial)?;
    let lead = l.coeff(lam);
    if lead.is_zero() {
        return Ok(None);
    }
    let scale = &target.coeff(lam) * &lead.inv();
    let mut keys: Vec<&Partition> = l.terms().keys().chain(target.terms().keys()).collect();
    keys.sort();
    keys.dedup();
    let mut worst = Q::zero();
    for mu in keys {
        let d = &(&l.coeff(mu) * &scale) - &target.coeff(mu);
        let mag = d.re.abs().max(d.im.abs());
        if mag > worst {
            worst = mag;
        }
    }
    Ok(Some(worst))
}

/// Normalized deviations along a decreasing `θ` sequence, against [`laguerre_pd`].
pub fn limit_compare(lam: &Partition, pd: &PDParams, thetas: &[Q]) -> Result<LimitReport> {
    limit_compare_with(lam, pd, thetas, RCoefficient::Literal)
}

pub fn limit_compare_with(lam: &Partition, pd: &PDParams, thetas: &[Q], rule: RCoefficient) -> Result<LimitReport> {
    let target = laguerre_pd_with(lam, pd, rule);
    let mut rows = Vec::new();
    let mut devs = Vec::new();
    for th in thetas {
        if !th.is_positive() {
            return Err(Error::Invalid(format!("θ = {} must be positive", fmt_q(th))));
        }
        let d = normalized_deviation(lam, &target, pd, th)?;
        rows.push(LimitRow {
            theta: fmt_q(th),
            deviation: d.as_ref().map(fmt_q),
            deviation_f64: d.as_ref().map(q_to_f64),
            note: d.is_none().then(|| "leading coefficient vanishes".to_string()),
        });
        devs.push(d);
    }
    let strictly_decreasing = devs.windows(2).all(|w| match (&w[0], &w[1]) {
        (Some(x), Some(y)) => y < x || (x.is_zero() && y.is_zero()),
        _ => false,
    });
    Ok(LimitReport {
        lambda: lam.to_string(),
        rows,
        strictly_decreasing,
    })
}
