//! Laguerre symmetric functions and the lifted moment functional.
//!
//! Everything here depends on `(z, z')` only through `e1 = z + z'` and
//! `e2 = zz'`, so the same code serves conjugate pairs, real pairs and the
//! irrational pairs that appear in the Poisson–Dirichlet limit.

use std::collections::BTreeMap;

use num::Zero;

use crate::error::{Error, Result};
use crate::partitions::{self, Partition, SkewShape};
use crate::poly::MPoly;
use crate::scalar::{factorial_q, q, Scalar, Q};
use crate::symalg::{self, Basis, SymFunc};

/// Parameters `(θ, e1 = z + z', e2 = zz')` shared by the Laguerre functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamContext {
    pub theta: Q,
    pub e1: Scalar,
    pub e2: Scalar,
}

impl ParamContext {
    pub fn new(z: &Scalar, zp: &Scalar, theta: &Q) -> Self {
        ParamContext {
            theta: theta.clone(),
            e1: z + zp,
            e2: z * zp,
        }
    }

    pub fn from_symmetric(e1: Scalar, e2: Scalar, theta: Q) -> Self {
        ParamContext { theta, e1, e2 }
    }

    /// `(z, z') = (Nθ, c + (N-1)θ)`.
    pub fn degenerate(n: usize, c: &Q, theta: &Q) -> Self {
        let z = Scalar::real(q(n as i64) * theta);
        let zp = Scalar::real(c + q(n as i64 - 1) * theta);
        ParamContext::new(&z, &zp, theta)
    }

    /// `c = zz'/θ`.
    pub fn c(&self) -> Scalar {
        self.e2.scale(&self.theta.recip())
    }

    pub fn basis(&self) -> Basis {
        Basis::Laguerre {
            e1: self.e1.clone(),
            e2: self.e2.clone(),
        }
    }

    /// `(z)_{λ/μ,θ} (z')_{λ/μ,θ}`.
    pub fn pair_pochhammer(&self, shape: &SkewShape) -> Scalar {
        partitions::pair_pochhammer(&self.e1, &self.e2, shape, &self.theta)
    }
}

fn skew_weight(mu: &Partition, lam: &Partition, theta: &Q, e1: &Scalar, e2: &Scalar) -> Scalar {
    let shape = SkewShape::new(lam.clone(), mu.clone()).expect("μ ⊆ λ");
    let k = (lam.size() - mu.size()) as u64;
    let d = symalg::dim_theta_paths(mu, lam, theta) / factorial_q(k);
    partitions::pair_pochhammer(e1, e2, &shape, theta).scale(&d)
}

/// Coefficients of `𝔏_λ` in the `Q_μ` basis.
pub fn laguerre_in_q(lam: &Partition, theta: &Q, e1: &Scalar, e2: &Scalar) -> Result<Vec<(Partition, Scalar)>> {
    Ok(partitions::subpartitions(lam)
        .into_iter()
        .map(|mu| {
            let mut w = skew_weight(&mu, lam, theta, e1, e2);
            if (lam.size() - mu.size()) % 2 == 1 {
                w = -w;
            }
            (mu, w)
        })
        .filter(|(_, w)| !w.is_zero())
        .collect())
}

/// Coefficients of `P_λ` in the `𝔏_μ` basis.
pub fn jack_in_laguerre_sym(lam: &Partition, theta: &Q, e1: &Scalar, e2: &Scalar) -> Result<Vec<(Partition, Scalar)>> {
    let inv_b = partitions::b_factor(lam, theta).recip();
    Ok(partitions::subpartitions(lam)
        .into_iter()
        .map(|mu| {
            let w = skew_weight(&mu, lam, theta, e1, e2).scale(&inv_b);
            (mu, w)
        })
        .filter(|(_, w)| !w.is_zero())
        .collect())
}

/// `𝔏_λ` expanded in the `Q_μ` basis with the parameters substituted.
pub fn laguerre_fn(lam: &Partition, ctx: &ParamContext) -> Result<SymFunc> {
    let terms = laguerre_in_q(lam, &ctx.theta, &ctx.e1, &ctx.e2)?;
    Ok(SymFunc::new(Basis::JackQ, ctx.theta.clone(), terms))
}

/// `P_λ = Σ_μ a_μ 𝔏_μ`, returned as the table `μ ↦ a_μ`.
pub fn jack_in_laguerre(lam: &Partition, ctx: &ParamContext) -> BTreeMap<Partition, Scalar> {
    jack_in_laguerre_sym(lam, &ctx.theta, &ctx.e1, &ctx.e2)
        .expect("closed form")
        .into_iter()
        .collect()
}

/// `E[Q_λ] = dim_θ(λ) (z)_λ (z')_λ / |λ|!` under the lifted measure.
pub fn lifted_moment_q(lam: &Partition, ctx: &ParamContext) -> Scalar {
    let d = partitions::dim_total_closed(lam, &ctx.theta) / factorial_q(lam.size() as u64);
    ctx.pair_pochhammer(&SkewShape::straight(lam.clone())).scale(&d)
}

/// Linear lifted functional applied to `f`.
pub fn lifted_expect(f: &SymFunc, ctx: &ParamContext) -> Result<Scalar> {
    if f.theta() != &ctx.theta {
        return Err(Error::ContextMismatch(format!("θ = {} vs θ = {}", f.theta(), ctx.theta)));
    }
    let fq = f.convert(&Basis::JackQ)?;
    let mut acc = Scalar::zero();
    for (lam, c) in fq.terms() {
        acc += c * &lifted_moment_q(lam, ctx);
    }
    Ok(acc)
}

/// `⟨f, g⟩` under the lifted measure: `E[f g]`.
pub fn lifted_inner_product(f: &SymFunc, g: &SymFunc, ctx: &ParamContext) -> Result<Scalar> {
    lifted_expect(&f.multiply(g)?, ctx)
}

/// Restriction to the first `n` variables.
pub fn truncate_n(f: &SymFunc, n: usize) -> Result<MPoly> {
    let fm = f.convert(&Basis::Monomial)?;
    let mut out = MPoly::zero(n);
    for (mu, c) in fm.terms() {
        if mu.len() <= n {
            out = out.add(&MPoly::monomial_symmetric(n, mu).scale(c));
        }
    }
    Ok(out)
}

/// `(z)_λ (z')_λ b_λ`, the squared lifted norm of `𝔏_λ`.
pub fn laguerre_norm(lam: &Partition, ctx: &ParamContext) -> Scalar {
    ctx.pair_pochhammer(&SkewShape::straight(lam.clone()))
        .scale(&partitions::b_factor(lam, &ctx.theta))
}
