//! Kernels `K°_n`, block kernels `G_m`, the truncated transition density with a
//! rigorous truncation bound, and total-variation bounds.
//!
//! Kernel coefficients and point values are exact; only the time factors
//! `e^{-tα_m}` and the final combination are floating point.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num::{One, Zero};
use serde::Serialize;

use crate::circ::{BiCirc, CircPoly};
use crate::error::{Error, Result};
use crate::partitions::{self, Partition, SkewShape};
use crate::scalar::{factorial_q, pochhammer_q, q, q_to_f64, Scalar, Q};
use crate::symalg::SymFunc;
use crate::zmeasure::{self, JackEvaluator, ParamTriple, ThomaPoint};

/// `Σ_λ c_λ P°_λ ⊗ P°_λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel {
    pub entries: Vec<(Partition, Scalar)>,
}

impl Kernel {
    pub fn zero() -> Self {
        Kernel { entries: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn combine(parts: impl IntoIterator<Item = (Partition, Scalar)>) -> Kernel {
        let mut map: std::collections::BTreeMap<Partition, Scalar> = Default::default();
        for (lam, c) in parts {
            *map.entry(lam).or_default() += &c;
        }
        Kernel {
            entries: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn scale(&self, w: &Scalar) -> Kernel {
        Kernel::combine(self.entries.iter().map(|(l, c)| (l.clone(), c * w)))
    }

    pub fn add(&self, other: &Kernel) -> Kernel {
        Kernel::combine(self.entries.iter().chain(&other.entries).cloned())
    }

    pub fn max_degree(&self) -> usize {
        self.entries.iter().map(|(l, _)| l.size()).max().unwrap_or(0)
    }

    /// Exact value at `(σ, ω)`.
    pub fn eval(&self, sigma: &ThomaPoint, omega: &ThomaPoint, theta: &Q) -> Scalar {
        let ev = JackEvaluator::get(self.max_degree(), theta);
        let (vs, vo) = (ev.values(sigma), ev.values(omega));
        let mut acc = Scalar::zero();
        for (lam, c) in &self.entries {
            let i = ev.index[lam];
            acc += c.scale(&(&vs[i] * &vo[i]));
        }
        acc
    }

    /// The kernel as a polynomial in `p°` on each side (needs the Jack tables).
    pub fn to_bicirc(&self, theta: &Q) -> Result<BiCirc> {
        let mut out = BiCirc::zero();
        for (lam, c) in &self.entries {
            let f = CircPoly::from_symfunc(&SymFunc::jack_p(theta, lam.clone()))?;
            out.add_outer(&f, &f, c);
        }
        Ok(out)
    }
}

fn require_diffusion(p: &ParamTriple) -> Result<()> {
    if p.is_diffusion_series() {
        Ok(())
    } else {
        Err(Error::NotAdmissible(format!("{} series has no diffusion", p.series)))
    }
}

/// `b_λ / ((z)_λ (z')_λ)`.
pub fn kernel_coefficient(lam: &Partition, p: &ParamTriple) -> Scalar {
    let pp = p.context().pair_pochhammer(&SkewShape::straight(lam.clone()));
    pp.inv().scale(&partitions::b_factor(lam, &p.theta))
}

/// `K°_n = Σ_{|λ|=n} b_λ P°_λ ⊗ P°_λ / ((z)_λ (z')_λ)`.
#[allow(non_snake_case)]
pub fn kernel_K(n: usize, p: &ParamTriple) -> Result<Kernel> {
    require_diffusion(p)?;
    Ok(Kernel {
        entries: partitions::enumerate(n)
            .into_iter()
            .map(|lam| {
                let c = kernel_coefficient(&lam, p);
                (lam, c)
            })
            .collect(),
    })
}

/// `(-1)^{m-n} (c+2m-1)(c)_{m+n-1} / (m-n)!`, with `(c)_{-1} = 1/(c-1)`; equal to 1 at `m = n = 0`.
pub fn inclusion_weight(m: usize, n: usize, c: &Q) -> Q {
    assert!(n <= m);
    if m == 0 {
        return Q::one();
    }
    let w = (c + q(2 * m as i64 - 1)) * pochhammer_q(c, (m + n) as i64 - 1) / factorial_q((m - n) as u64);
    if (m - n) % 2 == 1 {
        -w
    } else {
        w
    }
}

/// `G_m = Σ_{n ≤ m} inclusion_weight(m, n) K°_n`.
#[allow(non_snake_case)]
pub fn G_m(m: usize, p: &ParamTriple) -> Result<Kernel> {
    require_diffusion(p)?;
    let mut out = Kernel::zero();
    for n in 0..=m {
        let w = Scalar::real(inclusion_weight(m, n, &p.c));
        out = out.add(&kernel_K(n, p)?.scale(&w));
    }
    Ok(out)
}

/// Regrouped time coefficient `C_n(t) = Σ_{m=max(n,2)}^{M} e^{-tα_m} inclusion_weight(m, n)`.
#[allow(non_snake_case)]
pub fn coeff_C(n: usize, t: f64, max_degree: usize, p: &ParamTriple) -> f64 {
    (n.max(2)..=max_degree)
        .map(|m| (-t * q_to_f64(&p.alpha(m))).exp() * q_to_f64(&inclusion_weight(m, n, &p.c)))
        .sum()
}

/// `∫ K°_n(σ, ω) M(dω)`, exact.
pub fn kernel_integral(n: usize, sigma: &ThomaPoint, p: &ParamTriple) -> Result<Scalar> {
    require_diffusion(p)?;
    let ev = JackEvaluator::get(n, &p.theta);
    let vals = ev.values(sigma);
    let mut acc = Scalar::zero();
    for lam in partitions::enumerate(n) {
        let v = &vals[ev.index[&lam]];
        acc += (&kernel_coefficient(&lam, p) * &zmeasure::moment_p(&lam, p)).scale(v);
    }
    Ok(acc)
}

/// Key-lemma residual `∫ K°_n(σ, ·) f(σ) M(dσ) - f / ((n-m)! (c)_{m+n})` for `m = deg f`.
///
/// The lemma asserts the residual has filtration degree below `m`.
pub fn key_lemma_residual(n: usize, f: &CircPoly, p: &ParamTriple) -> Result<CircPoly> {
    require_diffusion(p)?;
    let m = f.degree().unwrap_or(0);
    if n < m {
        return Err(Error::Invalid(format!("n = {n} below deg f = {m}")));
    }
    let th = &p.theta;
    let lift = f.to_symfunc(th);
    let mut h = CircPoly::zero();
    for lam in partitions::enumerate(n) {
        let pl = SymFunc::jack_p(th, lam.clone());
        let e = zmeasure::expect(&pl.multiply(&lift)?, p)?;
        let w = &kernel_coefficient(&lam, p) * &e;
        h = h.add(&CircPoly::from_symfunc(&pl)?.scale(&w));
    }
    let d = factorial_q((n - m) as u64) * pochhammer_q(&p.c, (m + n) as i64);
    Ok(h.sub(&f.scale(&Scalar::real(d.recip()))))
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityResult {
    pub t: f64,
    pub value: f64,
    pub rigorous_tail: f64,
    pub max_degree: usize,
    pub alpha2: f64,
    pub sigma: String,
    pub omega: String,
}

/// Cached exact data for evaluating the truncated density up to degree `M`.
pub struct DensityEngine {
    pub params: ParamTriple,
    pub max_degree: usize,
    evaluator: Arc<JackEvaluator>,
    coefs: Vec<Q>,
    points: Mutex<HashMap<ThomaPoint, Arc<Vec<Q>>>>,
}

impl DensityEngine {
    pub fn new(p: &ParamTriple, max_degree: usize) -> Result<Self> {
        require_diffusion(p)?;
        let evaluator = JackEvaluator::get(max_degree, &p.theta);
        let coefs = evaluator
            .parts
            .iter()
            .map(|lam| {
                let c = kernel_coefficient(lam, p);
                c.as_real()
                    .cloned()
                    .ok_or_else(|| Error::NotAdmissible(format!("kernel coefficient {c} is not real")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DensityEngine {
            params: p.clone(),
            max_degree,
            evaluator,
            coefs,
            points: Mutex::new(HashMap::new()),
        })
    }

    fn values(&self, w: &ThomaPoint) -> Arc<Vec<Q>> {
        if let Some(v) = self.points.lock().unwrap().get(w) {
            return v.clone();
        }
        let v = Arc::new(self.evaluator.values(w));
        self.points.lock().unwrap().insert(w.clone(), v.clone());
        v
    }

    /// Exact `K°_n(σ, ω)` for `n = 0..=M`.
    pub fn kernel_values(&self, sigma: &ThomaPoint, omega: &ThomaPoint) -> Vec<Q> {
        let (vs, vo) = (self.values(sigma), self.values(omega));
        let mut out = vec![Q::zero(); self.max_degree + 1];
        for (i, lam) in self.evaluator.parts.iter().enumerate() {
            if !vs[i].is_zero() && !vo[i].is_zero() {
                out[lam.size()] += &self.coefs[i] * &vs[i] * &vo[i];
            }
        }
        out
    }

    /// Exact `G_m(σ, ω)` for `m = 0..=M`.
    pub fn g_values(&self, sigma: &ThomaPoint, omega: &ThomaPoint) -> Vec<Q> {
        let k = self.kernel_values(sigma, omega);
        (0..=self.max_degree)
            .map(|m| (0..=m).map(|n| inclusion_weight(m, n, &self.params.c) * &k[n]).sum())
            .collect()
    }

    /// `e^{-tα_m} G_m(σ, ω)` for `m = 2..=M`.
    pub fn terms(&self, t: f64, sigma: &ThomaPoint, omega: &ThomaPoint) -> Vec<f64> {
        let g = self.g_values(sigma, omega);
        (2..=self.max_degree)
            .map(|m| (-t * q_to_f64(&self.params.alpha(m))).exp() * q_to_f64(&g[m]))
            .collect()
    }

    pub fn density(&self, t: f64, sigma: &ThomaPoint, omega: &ThomaPoint) -> Result<DensityResult> {
        if !(t > 0.0) {
            return Err(Error::Invalid(format!("t = {t} must be positive")));
        }
        let tail = tail_bound(t, self.max_degree, &self.params)?;
        let value = 1.0 + self.terms(t, sigma, omega).iter().sum::<f64>();
        Ok(DensityResult {
            t,
            value,
            rigorous_tail: tail,
            max_degree: self.max_degree,
            alpha2: q_to_f64(&self.params.alpha(2)),
            sigma: sigma.to_string(),
            omega: omega.to_string(),
        })
    }

    /// `∫ p_M(t, σ, ω) M(dω)` split as `1 + Σ_m e^{-tα_m} ∫G_m`; returns the exact `∫G_m`.
    pub fn g_integrals(&self, sigma: &ThomaPoint) -> Vec<Q> {
        let vs = self.values(sigma);
        let mut k = vec![Q::zero(); self.max_degree + 1];
        for (i, lam) in self.evaluator.parts.iter().enumerate() {
            let mp = zmeasure::moment_p(lam, &self.params).re;
            k[lam.size()] += &self.coefs[i] * &vs[i] * mp;
        }
        (0..=self.max_degree)
            .map(|m| (0..=m).map(|n| inclusion_weight(m, n, &self.params.c) * &k[n]).sum())
            .collect()
    }
}

/// Truncated density `1 + Σ_{m=2}^{M} e^{-tα_m} G_m(σ, ω)` with its truncation bound.
pub fn density(t: f64, sigma: &ThomaPoint, omega: &ThomaPoint, p: &ParamTriple, max_degree: usize) -> Result<DensityResult> {
    DensityEngine::new(p, max_degree)?.density(t, sigma, omega)
}

/// Upward-rounded `exp`; never returns 0 for a finite argument.
fn exp_up(x: f64) -> f64 {
    let v = x.exp() * (1.0 + 4.0 * f64::EPSILON);
    if v == 0.0 {
        f64::from_bits(1)
    } else {
        v
    }
}

fn ln_partition_count(n: usize) -> f64 {
    if n <= 1000 {
        (partitions::partition_count(n) as f64).ln()
    } else {
        std::f64::consts::PI * (2.0 * n as f64 / 3.0).sqrt()
    }
}

/// Log-space sup-norm bounds along the proof chain, with a small outward margin.
struct BoundChain {
    c: f64,
    ln_theta1: f64,
    ln_dd: f64,
    ln_fact: Vec<f64>,
    ln_poch: Vec<f64>,
}

impl BoundChain {
    fn new(p: &ParamTriple) -> Result<Self> {
        let (dz, dzp) = p.deltas()?;
        Ok(BoundChain {
            c: q_to_f64(&p.c),
            ln_theta1: (1.0 + q_to_f64(&p.theta)).ln(),
            ln_dd: q_to_f64(&dz).ln() + q_to_f64(&dzp).ln(),
            ln_fact: vec![0.0],
            ln_poch: vec![0.0],
        })
    }

    fn grow(&mut self, k: usize) {
        while self.ln_fact.len() <= k {
            let i = self.ln_fact.len();
            let lf = self.ln_fact[i - 1] + (i as f64).ln();
            self.ln_fact.push(lf);
        }
        while self.ln_poch.len() <= k {
            let i = self.ln_poch.len();
            let lp = self.ln_poch[i - 1] + (self.c + (i - 1) as f64).ln();
            self.ln_poch.push(lp);
        }
    }

    /// `ln` of `ρ(n)(θ+1)^{3n} n^{2n} / ((n!)² δ^n δ'^n)`.
    fn ln_kernel(&mut self, n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        self.grow(n);
        let nf = n as f64;
        ln_partition_count(n) + 3.0 * nf * self.ln_theta1 + 2.0 * nf * nf.ln() - 2.0 * self.ln_fact[n] - nf * self.ln_dd
    }

    /// `ln B_m` with `B_m = Σ_n (c+2m-1)(c)_{m+n-1}/(m-n)! · Kbound(n)`.
    fn ln_g(&mut self, m: usize) -> f64 {
        self.grow(2 * m);
        let lead = (self.c + 2.0 * m as f64 - 1.0).ln();
        let logs: Vec<f64> = (0..=m)
            .map(|n| lead + self.ln_poch[m + n - 1] - self.ln_fact[m - n] + self.ln_kernel(n))
            .collect();
        let mx = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let s: f64 = logs.iter().map(|l| (l - mx).exp()).sum();
        let v = mx + s.ln();
        v + 1e-9 * (1.0 + v.abs())
    }
}

/// Sup-norm bound `B_m ≥ ‖G_m‖` (returned in log form).
pub fn ln_g_bound(m: usize, p: &ParamTriple) -> Result<f64> {
    Ok(BoundChain::new(p)?.ln_g(m))
}

/// Sup-norm bound on `K°_n` (log form).
pub fn ln_kernel_bound(n: usize, p: &ParamTriple) -> Result<f64> {
    Ok(BoundChain::new(p)?.ln_kernel(n))
}

const TERM_LIMIT: usize = 100_000;

/// `ln Σ_{m > M} e^{-tα_m} B_m`, or an error if the terms are not yet decaying
/// geometrically (ratio below 1/2) at `M + 1`.
fn ln_tail(t: f64, max_degree: usize, p: &ParamTriple, chain: &mut BoundChain) -> Result<f64> {
    let ln_term = |m: usize, chain: &mut BoundChain| -t * (m as f64 * (m as f64 - 1.0 + chain.c)) + chain.ln_g(m);
    let first = max_degree.max(1) + 1;
    let mut prev = ln_term(first, chain);
    let mut acc = prev;
    let mut run = 0usize;
    let mut m = first + 1;
    loop {
        let cur = ln_term(m, chain);
        let ratio = cur - prev;
        if m == first + 1 && ratio >= -std::f64::consts::LN_2 {
            return Err(Error::TailNotConverged(format!(
                "terms of the truncation bound still grow at M = {max_degree}, t = {t} (c = {})",
                p.c
            )));
        }
        acc = log_add(acc, cur);
        run = if ratio < -std::f64::consts::LN_2 { run + 1 } else { 0 };
        if run >= 8 && cur < acc - 40.0 {
            // geometric remainder with ratio ≤ 1/2
            acc = log_add(acc, cur);
            return Ok(acc);
        }
        if m - first > TERM_LIMIT {
            return Err(Error::TailNotConverged(format!("no geometric decay within {TERM_LIMIT} terms")));
        }
        prev = cur;
        m += 1;
    }
}

fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Rigorous bound on `|p(t,σ,ω) - p_M(t,σ,ω)|`, uniform in `σ, ω`.
pub fn tail_bound(t: f64, max_degree: usize, p: &ParamTriple) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Invalid(format!("t = {t} must be positive")));
    }
    let mut chain = BoundChain::new(p)?;
    Ok(exp_up(ln_tail(t, max_degree, p, &mut chain)?))
}

#[derive(Clone, Debug, Serialize)]
pub struct TvBound {
    pub t: f64,
    /// `K e^{-tα_2}` with `K = Σ_{m≥2} B_m e^{-t(α_m-α_2)} + 2e^{-tα_2}`.
    pub crude: f64,
    /// `2(c+1)(c+3) e^{-tα_2} + Σ_{m≥3} B_m e^{-tα_m}`.
    pub refined: f64,
    /// `2(c+1)(c+3)` as an exact rational string.
    pub leading_constant: String,
    pub k_constant: f64,
}

/// `2(c+1)(c+3)`.
pub fn refined_leading_constant(p: &ParamTriple) -> Q {
    q(2) * (&p.c + q(1)) * (&p.c + q(3))
}

/// Total-variation bounds at time `t`; explicit terms up to `M`, the rest from [`tail_bound`].
pub fn tv_bound(t: f64, p: &ParamTriple, max_degree: usize) -> Result<TvBound> {
    if !(t > 0.0) {
        return Err(Error::Invalid(format!("t = {t} must be positive")));
    }
    require_diffusion(p)?;
    let max_degree = max_degree.max(3);
    let mut chain = BoundChain::new(p)?;
    let a2 = q_to_f64(&p.alpha(2));
    let tail = ln_tail(t, max_degree, p, &mut chain)?;
    let mut ln_sum_3 = tail;
    for m in 3..=max_degree {
        ln_sum_3 = log_add(ln_sum_3, -t * q_to_f64(&p.alpha(m)) + chain.ln_g(m));
    }
    let ln_sum_2 = log_add(ln_sum_3, -t * a2 + chain.ln_g(2));
    let k0 = exp_up(ln_sum_2 + t * a2);
    let k = k0 + exp_up(-t * a2) * 2.0;
    let lead = refined_leading_constant(p);
    let up = 1.0 + 4.0 * f64::EPSILON;
    Ok(TvBound {
        t,
        crude: k * exp_up(-t * a2) * up,
        refined: (q_to_f64(&lead) * exp_up(-t * a2) + exp_up(ln_sum_3)) * up,
        leading_constant: crate::scalar::fmt_q(&lead),
        k_constant: k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::part;
    use crate::scalar::qr;
    use crate::spectral::{self, CircExpect};
    use crate::zmeasure::validate_params;

    fn principal() -> ParamTriple {
        validate_params(&Scalar::new(q(1), q(2)), &Scalar::new(q(1), q(-2)), &q(1)).unwrap()
    }

    fn complementary() -> ParamTriple {
        validate_params(&Scalar::ratio(1, 10), &Scalar::ratio(3, 10), &qr(1, 2)).unwrap()
    }

    fn points() -> Vec<ThomaPoint> {
        vec![
            ThomaPoint::origin(),
            ThomaPoint::new(vec![qr(1, 2), qr(1, 4)], vec![]).unwrap(),
            ThomaPoint::new(vec![], vec![qr(2, 3)]).unwrap(),
            ThomaPoint::new(vec![qr(1, 3)], vec![qr(1, 5), qr(1, 7)]).unwrap(),
            ThomaPoint::new(vec![q(1)], vec![]).unwrap(),
        ]
    }

    #[test]
    fn kernel_examples() {
        let p = principal();
        assert_eq!(kernel_K(0, &p).unwrap().entries, vec![(Partition::empty(), Scalar::one())]);
        let k1 = kernel_K(1, &p).unwrap();
        assert_eq!(k1.entries, vec![(part![1], Scalar::real(&p.theta / q(5)))]);
        let w = &points()[3];
        assert_eq!(k1.eval(w, &points()[1], &p.theta), Scalar::real(p.theta.clone() / q(5)));
    }

    #[test]
    fn kernel_integrals() {
        for p in [principal(), complementary()] {
            for n in 0..=4 {
                let expected = (factorial_q(n as u64) * pochhammer_q(&p.c, n as i64)).recip();
                for w in points() {
                    assert_eq!(kernel_integral(n, &w, &p).unwrap(), Scalar::real(expected.clone()));
                }
            }
        }
    }

    #[test]
    fn g_examples() {
        let p = complementary();
        assert!(G_m(1, &p).unwrap().to_bicirc(&p.theta).unwrap().is_zero());
        for m in 2..=4 {
            let eng = DensityEngine::new(&p, m).unwrap();
            for w in points() {
                assert!(eng.g_integrals(&w)[m].is_zero(), "∫G_{m}");
            }
        }
        let sys = spectral::eigen_decompose(2, &p).unwrap();
        assert_eq!(
            G_m(2, &p).unwrap().to_bicirc(&p.theta).unwrap(),
            spectral::G_from_eigen(2, &sys).unwrap()
        );
        assert_eq!(inclusion_weight(0, 0, &p.c), q(1));
    }

    #[test]
    fn eigen_route_equals_inclusion_route() {
        for p in [principal(), complementary()] {
            let sys = spectral::eigen_decompose(5, &p).unwrap();
            for m in 0..=5 {
                let lhs = G_m(m, &p).unwrap().to_bicirc(&p.theta).unwrap();
                assert_eq!(lhs, spectral::G_from_eigen(m, &sys).unwrap(), "m = {m}");
            }
        }
    }

    #[test]
    fn inversion_identity() {
        let p = principal();
        let th = &p.theta;
        for n in 0..=4usize {
            let mut rhs = BiCirc::outer(&CircPoly::one(), &CircPoly::one())
                .scale(&Scalar::real((factorial_q(n as u64) * pochhammer_q(&p.c, n as i64)).recip()));
            for m in 2..=n {
                let w = (pochhammer_q(&p.c, (n + m) as i64) * factorial_q((n - m) as u64)).recip();
                rhs = rhs.add(&G_m(m, &p).unwrap().to_bicirc(th).unwrap().scale(&Scalar::real(w)));
            }
            assert_eq!(kernel_K(n, &p).unwrap().to_bicirc(th).unwrap(), rhs, "n = {n}");
        }
    }

    #[test]
    fn chapman_kolmogorov() {
        let p = complementary();
        let th = &p.theta;
        let mut e = CircExpect::new(&p);
        let gs: Vec<BiCirc> = (0..=4).map(|m| G_m(m, &p).unwrap().to_bicirc(th).unwrap()).collect();
        for m in 0..=4 {
            for k in 0..=4 {
                let mut comp = BiCirc::zero();
                for ((a, b), v) in gs[m].terms() {
                    for ((c, d), w) in gs[k].terms() {
                        let mid = e.monomial(&b.union(c));
                        comp.add_term((a.clone(), d.clone()), &(v * w) * &mid);
                    }
                }
                if m == k && m != 1 {
                    assert_eq!(comp, gs[m], "G_{m}∘G_{k}");
                } else {
                    assert!(comp.is_zero(), "G_{m}∘G_{k}");
                }
            }
        }
    }

    #[test]
    fn key_lemma_small() {
        let p = principal();
        for m in 0..=2 {
            for n in m..=3 {
                for nu in (0..=m).flat_map(partitions::enumerate_no_ones) {
                    let f = CircPoly::monomial(&nu);
                    let r = key_lemma_residual(n, &f, &p).unwrap();
                    let d = f.degree().unwrap();
                    assert!(r.degree().is_none_or(|k| k < d) || (d == 0 && r.is_zero()), "n={n} f={f} r={r}");
                }
            }
        }
    }

    #[test]
    fn density_symmetry_and_late_time() {
        let p = principal();
        let eng = DensityEngine::new(&p, 8).unwrap();
        let pts = points();
        for a in &pts {
            for b in &pts {
                assert_eq!(eng.g_values(a, b), eng.g_values(b, a));
            }
        }
        let r = eng.density(50.0, &pts[1], &pts[3]).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12 + r.rigorous_tail);
    }

    #[test]
    fn positivity_probe() {
        let p = principal();
        let eng = DensityEngine::new(&p, 12).unwrap();
        let pts = points();
        let pairs: Vec<_> = pts.iter().flat_map(|a| pts.iter().map(move |b| (a, b))).take(10).collect();
        for t in [1.0, 2.0] {
            for (a, b) in &pairs {
                let r = eng.density(t, a, b).unwrap();
                assert!(r.value - r.rigorous_tail > 0.0, "{r:?}");
            }
        }
    }

    #[test]
    fn regrouped_coefficients_agree() {
        let p = principal();
        let m_max = 8;
        let eng = DensityEngine::new(&p, m_max).unwrap();
        let pts = points();
        for t in [0.5, 1.0, 2.0] {
            for (a, b) in [(&pts[1], &pts[3]), (&pts[2], &pts[4]), (&pts[0], &pts[3])] {
                let k = eng.kernel_values(a, b);
                let by_c: f64 = 1.0 + (0..=m_max).map(|n| coeff_C(n, t, m_max, &p) * q_to_f64(&k[n])).sum::<f64>();
                let by_g = 1.0 + eng.terms(t, a, b).iter().sum::<f64>();
                assert!((by_c - by_g).abs() < 1e-10, "{by_c} vs {by_g}");
            }
        }
        for n in 0..4 {
            assert!(coeff_C(n, 200.0, 10, &p).abs() < 1e-300);
        }
    }

    #[test]
    fn bounds_are_monotone() {
        let p = principal();
        let a = tail_bound(1.0, 12, &p).unwrap();
        assert!(a >= tail_bound(2.0, 12, &p).unwrap());
        assert!(a >= tail_bound(1.0, 13, &p).unwrap());
        assert!(a > 0.0);
        assert!(tail_bound(1e-4, 3, &p).is_err());
        let (dz, _) = p.deltas().unwrap();
        assert_eq!(dz, q(2));
    }

    #[test]
    fn kernel_bound_dominates_values() {
        let p = complementary();
        let eng = DensityEngine::new(&p, 8).unwrap();
        let pts = points();
        for a in &pts {
            for b in &pts {
                let k = eng.kernel_values(a, b);
                for (n, v) in k.iter().enumerate() {
                    assert!(*v >= Q::zero());
                    assert!(q_to_f64(v) <= ln_kernel_bound(n, &p).unwrap().exp());
                }
                let g = eng.g_values(a, b);
                for m in 2..=8 {
                    assert!(q_to_f64(&g[m]).abs() <= ln_g_bound(m, &p).unwrap().exp());
                }
            }
        }
    }

    #[test]
    fn tv_examples() {
        let p = principal();
        assert_eq!(refined_leading_constant(&p), q(96));
        let mut last = f64::INFINITY;
        for t in [1.0, 2.0, 4.0, 8.0] {
            let b = tv_bound(t, &p, 12).unwrap();
            assert_eq!(b.leading_constant, "96");
            assert!(b.crude >= 0.0 && b.refined >= 0.0);
            assert!(b.refined < last);
            last = b.refined;
        }
        assert!(tv_bound(60.0, &p, 12).unwrap().crude < 1e-200);
    }
}
