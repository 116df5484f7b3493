//! Admissible parameter triples, points of the Thoma simplex, the z-measure
//! moment functional and evaluation of `f°` at a point.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num::{One, Signed, Zero};
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laguerre::{self, ParamContext};
use crate::partitions::{self, Partition};
use crate::scalar::{pochhammer, q, Scalar, Q};
use crate::symalg::SymFunc;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Series {
    Principal,
    Complementary,
    Degenerate { n: usize },
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Series::Principal => write!(f, "principal"),
            Series::Complementary => write!(f, "complementary"),
            Series::Degenerate { n } => write!(f, "degenerate(N={n})"),
        }
    }
}

/// A validated `(z, z', θ)` together with its series and `c = zz'/θ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamTriple {
    pub z: Scalar,
    pub zp: Scalar,
    pub theta: Q,
    pub series: Series,
    pub c: Q,
}

/// Classifies `(z, z', θ)` as principal or complementary.
///
/// Degenerate triples are only built through [`ParamTriple::degenerate`].
pub fn validate_params(z: &Scalar, zp: &Scalar, theta: &Q) -> Result<ParamTriple> {
    if !theta.is_positive() {
        return Err(Error::NotAdmissible(format!("θ = {theta} is not positive")));
    }
    let e2 = z * zp;
    let series = if !z.is_real() {
        if *zp != z.conj() {
            return Err(Error::NotAdmissible(format!(
                "z = {z} is not real but z' = {zp} is not its conjugate"
            )));
        }
        Series::Principal
    } else {
        if !zp.is_real() {
            return Err(Error::NotAdmissible(format!("z = {z} is real but z' = {zp} is not")));
        }
        let den = Q::from_integer(theta.denom().clone());
        let (a, b) = (&z.re * &den, &zp.re * &den);
        if a.is_integer() || b.is_integer() {
            return Err(Error::NotAdmissible(format!(
                "z = {z} or z' = {zp} lies on the lattice (1/{})Z",
                theta.denom()
            )));
        }
        if a.floor() != b.floor() {
            return Err(Error::NotAdmissible(format!(
                "z = {z} and z' = {zp} lie in different intervals of (1/{})Z",
                theta.denom()
            )));
        }
        Series::Complementary
    };
    let c = e2.scale(&theta.recip());
    match c.as_real() {
        Some(c) if c.is_positive() => Ok(ParamTriple {
            z: z.clone(),
            zp: zp.clone(),
            theta: theta.clone(),
            series,
            c: c.clone(),
        }),
        _ => Err(Error::NotAdmissible(format!("zz'/θ = {c} is not a positive real"))),
    }
}

impl ParamTriple {
    /// `(z, z') = (Nθ, c + (N-1)θ)`; note that the stored `c` is `zz'/θ`.
    pub fn degenerate(n: usize, c: &Q, theta: &Q) -> Result<ParamTriple> {
        if n == 0 || !c.is_positive() || !theta.is_positive() {
            return Err(Error::NotAdmissible(format!(
                "degenerate series needs N ≥ 1, c > 0, θ > 0 (N={n}, c={c}, θ={theta})"
            )));
        }
        let z = Scalar::real(q(n as i64) * theta);
        let zp = Scalar::real(c + q(n as i64 - 1) * theta);
        let cc = (&z * &zp).re / theta;
        Ok(ParamTriple {
            z,
            zp,
            theta: theta.clone(),
            series: Series::Degenerate { n },
            c: cc,
        })
    }

    pub fn context(&self) -> ParamContext {
        ParamContext::new(&self.z, &self.zp, &self.theta)
    }

    /// `α_m = m(m - 1 + c)`.
    pub fn alpha(&self, m: usize) -> Q {
        let m = q(m as i64);
        &m * (&m - Q::one() + &self.c)
    }

    pub fn is_diffusion_series(&self) -> bool {
        matches!(self.series, Series::Principal | Series::Complementary)
    }

    /// Lower bounds `(δ_z, δ_z')` on `|z + k - θl|` over all integers `k, l`.
    pub fn deltas(&self) -> Result<(Q, Q)> {
        match self.series {
            Series::Principal => {
                let d = self.z.im.abs();
                Ok((d.clone(), d))
            }
            Series::Complementary => {
                let den = Q::from_integer(self.theta.denom().clone());
                let dist = |x: &Q| {
                    let y = x * &den;
                    let lo = &y - y.floor();
                    let hi = y.ceil() - &y;
                    lo.min(hi) / &den
                };
                Ok((dist(&self.z.re), dist(&self.zp.re)))
            }
            Series::Degenerate { .. } => Err(Error::NotAdmissible("degenerate triples have lattice-point parameters".into())),
        }
    }
}

/// A finitely supported point `(α, β)` of the Thoma simplex with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThomaPoint {
    alpha: Vec<Q>,
    beta: Vec<Q>,
}

impl ThomaPoint {
    pub fn new(mut alpha: Vec<Q>, mut beta: Vec<Q>) -> Result<Self> {
        if alpha.iter().chain(&beta).any(|x| x.is_negative()) {
            return Err(Error::Invalid("Thoma coordinates must be nonnegative".into()));
        }
        alpha.retain(|x| !x.is_zero());
        beta.retain(|x| !x.is_zero());
        alpha.sort_by(|a, b| b.cmp(a));
        beta.sort_by(|a, b| b.cmp(a));
        let total: Q = alpha.iter().chain(&beta).sum();
        if total > Q::one() {
            return Err(Error::Invalid(format!("Σα + Σβ = {total} exceeds 1")));
        }
        Ok(ThomaPoint { alpha, beta })
    }

    pub fn origin() -> Self {
        ThomaPoint {
            alpha: Vec::new(),
            beta: Vec::new(),
        }
    }

    pub fn alpha(&self) -> &[Q] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Q] {
        &self.beta
    }

    /// `γ = 1 - Σα - Σβ`, the weight carried by `p_1` alone.
    pub fn gamma(&self) -> Q {
        Q::one() - self.alpha.iter().chain(&self.beta).sum::<Q>()
    }

    /// `p°_k(ω)`; equal to 1 for `k = 1`.
    pub fn power_sum(&self, k: usize, theta: &Q) -> Q {
        if k == 1 {
            return Q::one();
        }
        let sa: Q = self.alpha.iter().map(|a| a.pow(k as i32)).sum();
        let sb: Q = self.beta.iter().map(|b| b.pow(k as i32)).sum();
        sa + (-theta).pow(k as i32 - 1) * sb
    }
}

impl fmt::Display for ThomaPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[Q]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "α=({}) β=({})", show(&self.alpha), show(&self.beta))
    }
}

/// `∫ Q°_λ dM = dim_θ(λ)(z)_λ(z')_λ / (|λ|! (c)_{|λ|})`.
pub fn moment_q(lam: &Partition, p: &ParamTriple) -> Scalar {
    let lifted = laguerre::lifted_moment_q(lam, &p.context());
    lifted.scale(&crate::scalar::pochhammer_q(&p.c, lam.size() as i64).recip())
}

/// `∫ P°_λ dM`.
pub fn moment_p(lam: &Partition, p: &ParamTriple) -> Scalar {
    moment_q(lam, p).scale(&partitions::b_factor(lam, &p.theta).recip())
}

/// `∫ f° dM`, computed degree by degree from the lifted functional.
pub fn expect(f: &SymFunc, p: &ParamTriple) -> Result<Scalar> {
    if f.theta() != &p.theta {
        return Err(Error::ContextMismatch(format!("θ = {} vs θ = {}", f.theta(), p.theta)));
    }
    let f = f.to_powersum()?;
    let ctx = p.context();
    let c = Scalar::real(p.c.clone());
    let mut acc = Scalar::zero();
    for n in 0..=f.degree() {
        let part = f.homogeneous_part(n)?;
        if part.is_zero() {
            continue;
        }
        acc += laguerre::lifted_expect(&part, &ctx)? * pochhammer(&c, n as i64).inv();
    }
    Ok(acc)
}

/// `f°(ω)`: substitute `p_1 ↦ 1` and `p_k ↦ Σα^k + (-θ)^{k-1} Σβ^k`.
pub fn eval_point(f: &SymFunc, omega: &ThomaPoint, theta: &Q) -> Result<Scalar> {
    if f.theta() != theta {
        return Err(Error::ContextMismatch(format!("θ = {} vs θ = {}", f.theta(), theta)));
    }
    let f = f.to_powersum()?;
    let mut cache: HashMap<usize, Q> = HashMap::new();
    let mut acc = Scalar::zero();
    for (nu, c) in f.terms() {
        let mut v = Q::one();
        for &k in nu.parts() {
            v *= cache.entry(k).or_insert_with(|| omega.power_sum(k, theta)).clone();
        }
        acc += c.scale(&v);
    }
    Ok(acc)
}

/// Branching coefficients for evaluating every `P°_λ`, `|λ| ≤ n_max`, at a point.
///
/// A point is the union of single-variable specialisations `x = α_i`, dual
/// single-variable specialisations for each `β_j`, and a Plancherel part of
/// weight `γ`. Each `α_i` contributes skew functions on horizontal strips with
/// weight `ψ_{κ/μ} α^{|κ/μ|}`, each `β_j` contributes vertical strips with
/// weight `φ_{κ'/μ'}(1/θ) (θβ)^{|κ/μ|}`, and the `γ` part gives
/// `P_μ = (γθ)^{|μ|} dim_θ(μ) / (b_μ |μ|!)`.
pub struct JackEvaluator {
    pub theta: Q,
    pub n_max: usize,
    pub parts: Vec<Partition>,
    pub index: HashMap<Partition, usize>,
    horizontal: Vec<Vec<(usize, usize, Q)>>,
    vertical: Vec<Vec<(usize, usize, Q)>>,
    plancherel: Vec<Q>,
}

static EVALUATORS: Lazy<Mutex<HashMap<(usize, Q), Arc<JackEvaluator>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

impl JackEvaluator {
    /// Shared evaluator for `(n_max, θ)`.
    pub fn get(n_max: usize, theta: &Q) -> Arc<JackEvaluator> {
        let key = (n_max, theta.clone());
        if let Some(e) = EVALUATORS.lock().unwrap().get(&key) {
            return e.clone();
        }
        let built = Arc::new(JackEvaluator::build(n_max, theta));
        EVALUATORS.lock().unwrap().entry(key).or_insert(built).clone()
    }

    fn build(n_max: usize, theta: &Q) -> JackEvaluator {
        let parts = partitions::enumerate_up_to(n_max);
        let index: HashMap<Partition, usize> = parts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let dual = theta.recip();
        let mut horizontal = Vec::with_capacity(parts.len());
        let mut vertical = Vec::with_capacity(parts.len());
        let mut plancherel = Vec::with_capacity(parts.len());
        for kappa in &parts {
            horizontal.push(
                partitions::horizontal_strip_inners(kappa)
                    .into_iter()
                    .map(|mu| {
                        let w = partitions::pieri_psi(&mu, kappa, theta);
                        (index[&mu], kappa.size() - mu.size(), w)
                    })
                    .collect(),
            );
            let kc = kappa.conjugate();
            vertical.push(
                partitions::vertical_strip_inners(kappa)
                    .into_iter()
                    .map(|mu| {
                        let w = partitions::pieri_phi(&mu.conjugate(), &kc, &dual);
                        (index[&mu], kappa.size() - mu.size(), w)
                    })
                    .collect(),
            );
            let n = kappa.size() as u64;
            plancherel
                .push(partitions::dim_total_closed(kappa, theta) / (partitions::b_factor(kappa, theta) * crate::scalar::factorial_q(n)));
        }
        JackEvaluator {
            theta: theta.clone(),
            n_max,
            parts,
            index,
            horizontal,
            vertical,
            plancherel,
        }
    }

    fn strip_step(&self, v: &[Q], table: &[Vec<(usize, usize, Q)>], x: &Q) -> Vec<Q> {
        let powers: Vec<Q> = (0..=self.n_max).map(|k| x.pow(k as i32)).collect();
        table
            .iter()
            .map(|row| {
                let mut acc = Q::zero();
                for (mu, k, w) in row {
                    if !v[*mu].is_zero() {
                        acc += &v[*mu] * w * &powers[*k];
                    }
                }
                acc
            })
            .collect()
    }

    /// `P°_λ(ω)` for every `λ` in [`JackEvaluator::parts`].
    pub fn values(&self, omega: &ThomaPoint) -> Vec<Q> {
        // Homogeneity: evaluate at integer coordinates `D·ω`, then divide by `D^{|λ|}`.
        let gamma = omega.gamma();
        let d = omega
            .alpha()
            .iter()
            .chain(omega.beta())
            .chain(std::iter::once(&gamma))
            .fold(num::BigInt::one(), |acc, x| num::integer::lcm(acc, x.denom().clone()));
        let d = Q::from_integer(d);
        let gt = &gamma * &d * &self.theta;
        let mut v: Vec<Q> = self
            .parts
            .iter()
            .zip(&self.plancherel)
            .map(|(lam, w)| w * gt.pow(lam.size() as i32))
            .collect();
        for b in omega.beta() {
            v = self.strip_step(&v, &self.vertical, &(b * &d * &self.theta));
        }
        for a in omega.alpha() {
            v = self.strip_step(&v, &self.horizontal, &(a * &d));
        }
        let scale: Vec<Q> = (0..=self.n_max).map(|k| d.pow(k as i32).recip()).collect();
        for (x, lam) in v.iter_mut().zip(&self.parts) {
            *x *= &scale[lam.size()];
        }
        v
    }

    pub fn value_map(&self, omega: &ThomaPoint) -> BTreeMap<Partition, Q> {
        self.parts.iter().cloned().zip(self.values(omega)).collect()
    }
}

/// `P°_λ(ω)` through the branching evaluator.
pub fn jack_point_value(lam: &Partition, omega: &ThomaPoint, theta: &Q) -> Q {
    let ev = JackEvaluator::get(lam.size(), theta);
    ev.values(omega)[ev.index[lam]].clone()
}
