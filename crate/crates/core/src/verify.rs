//! Named invariant suites with exact witnesses, driven by `thoma verify`.

use serde::Serialize;

use crate::circ::CircPoly;
use crate::density;
use crate::error::{Error, Result};
use crate::laguerre;
use crate::partitions::{self, Partition};
use crate::petrov::{self, PDParams};
use crate::scalar::{factorial_q, pochhammer_q, qr, Scalar, Q};
use crate::spectral::{self, CircExpect};
use crate::symalg::{self, SymFunc, MAX_DEGREE};
use crate::zmeasure::{self, ParamTriple, ThomaPoint};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub passed: bool,
    /// First failing instance, if any.
    pub witness: Option<String>,
}

pub const SUITES: &[&str] = &[
    "partitions",
    "symalg",
    "laguerre",
    "zmeasure",
    "keylemma",
    "spectral",
    "density",
    "petrov",
];

struct Builder {
    suite: &'static str,
    out: Vec<Check>,
}

impl Builder {
    fn record(&mut self, name: &str, failures: impl IntoIterator<Item = String>) {
        let witness = failures.into_iter().next();
        self.out.push(Check {
            suite: self.suite.to_string(),
            name: name.to_string(),
            passed: witness.is_none(),
            witness,
        });
    }
}

fn capped(d: usize) -> usize {
    d.min(MAX_DEGREE)
}

fn sample_points() -> Vec<ThomaPoint> {
    vec![
        ThomaPoint::origin(),
        ThomaPoint::new(vec![qr(1, 2), qr(1, 4)], vec![]).unwrap(),
        ThomaPoint::new(vec![], vec![qr(2, 3)]).unwrap(),
        ThomaPoint::new(vec![qr(1, 3)], vec![qr(1, 5), qr(1, 7)]).unwrap(),
    ]
}

/// Runs one suite (or `"all"`) at parameters `p` up to degree `max_degree`.
pub fn run_suite(suite: &str, max_degree: usize, p: &ParamTriple) -> Result<Vec<Check>> {
    if suite == "all" {
        let mut out = Vec::new();
        for s in SUITES {
            out.extend(run_suite(s, max_degree, p)?);
        }
        return Ok(out);
    }
    let name = SUITES
        .iter()
        .find(|s| **s == suite)
        .ok_or_else(|| Error::Invalid(format!("unknown suite {suite:?}; expected one of {SUITES:?} or \"all\"")))?;
    let mut b = Builder {
        suite: name,
        out: Vec::new(),
    };
    let th = &p.theta;
    let d = max_degree;
    match suite {
        "partitions" => {
            b.record(
                "dimension closed form equals path count",
                partitions::enumerate_up_to(d).into_iter().filter_map(|lam| {
                    let (x, y) = (
                        partitions::dim_total_closed(&lam, th),
                        symalg::dim_theta_paths(&Partition::empty(), &lam, th),
                    );
                    (x != y).then(|| format!("λ = {lam}: {x} vs {y}"))
                }),
            );
            b.record(
                "norm closed form equals Gram-Schmidt norm",
                partitions::enumerate_up_to(capped(d)).into_iter().filter_map(|lam| {
                    let x = partitions::b_factor(&lam, th);
                    match symalg::jack_b(&lam, th) {
                        Ok(y) if x == y => None,
                        Ok(y) => Some(format!("λ = {lam}: {x} vs {y}")),
                        Err(e) => Some(e.to_string()),
                    }
                }),
            );
        }
        "symalg" => {
            let mut fails = Vec::new();
            for n in 0..=capped(d) {
                let parts = partitions::enumerate(n);
                for l in &parts {
                    for m in &parts {
                        let v = symalg::inner_product_theta(&SymFunc::jack_p(th, l.clone()), &SymFunc::jack_p(th, m.clone()))?;
                        let want = if l == m {
                            Scalar::real(partitions::b_factor(l, th).recip())
                        } else {
                            Scalar::from(0)
                        };
                        if v != want {
                            fails.push(format!("⟨P_{l}, P_{m}⟩ = {v}, expected {want}"));
                        }
                    }
                }
            }
            b.record("Jack orthogonality with closed-form norms", fails);
        }
        "laguerre" => {
            let ctx = p.context();
            // inner products multiply two functions of degree d
            let parts = partitions::enumerate_up_to(d.min(MAX_DEGREE / 2));
            let funcs = parts.iter().map(|l| laguerre::laguerre_fn(l, &ctx)).collect::<Result<Vec<_>>>()?;
            let mut fails = Vec::new();
            for (i, l) in parts.iter().enumerate() {
                for (j, m) in parts.iter().enumerate().skip(i) {
                    let v = laguerre::lifted_inner_product(&funcs[i], &funcs[j], &ctx)?;
                    let want = if i == j {
                        laguerre::laguerre_norm(l, &ctx)
                    } else {
                        Scalar::from(0)
                    };
                    if v != want {
                        fails.push(format!("⟨𝔏_{l}, 𝔏_{m}⟩ = {v}, expected {want}"));
                    }
                }
            }
            b.record("Laguerre orthogonality under the lifted measure", fails);
        }
        "zmeasure" => {
            let mut e = CircExpect::new(p);
            let mut fails = Vec::new();
            for n in 0..=capped(d) {
                for nu in partitions::enumerate(n) {
                    let via_moments = zmeasure::expect(&SymFunc::p(th, nu.clone()), p)?;
                    let via_invariance = e.monomial(&nu.without_ones());
                    if via_moments != via_invariance {
                        fails.push(format!("E[p°_{nu}]: {via_moments} vs {via_invariance}"));
                    }
                }
            }
            b.record("moment formula equals invariance recursion", fails);
        }
        "keylemma" => {
            let mut fails = Vec::new();
            for m in 0..=d.min(3) {
                for nu in partitions::enumerate_no_ones(m) {
                    let f = CircPoly::monomial(&nu);
                    for n in m..=capped(d).min(MAX_DEGREE - m) {
                        let r = density::key_lemma_residual(n, &f, p)?;
                        let ok = if m == 0 { r.is_zero() } else { r.degree().is_none_or(|k| k < m) };
                        if !ok {
                            fails.push(format!("n = {n}, f = p°_{nu}: residual {r}"));
                        }
                    }
                }
            }
            b.record("reproducing kernel lemma", fails);
        }
        "spectral" => {
            let top = capped(d).min(7);
            let sys = spectral::eigen_decompose(top, p)?;
            let mut fails = Vec::new();
            for m in 0..=top {
                let a = density::G_m(m, p)?.to_bicirc(th)?;
                let g = spectral::G_from_eigen(m, &sys)?;
                if a != g {
                    fails.push(format!("m = {m}: inclusion-exclusion {a:?} vs eigen {g:?}"));
                }
            }
            b.record("block kernels: eigen route equals inclusion-exclusion route", fails);
            let dims = (2..=top).filter_map(|m| {
                let found = sys.block(m).map_or(0, |blk| blk.basis.len());
                let expected = partitions::count_no_ones(m) as usize;
                (found != expected).then(|| format!("m = {m}: {found} vs {expected}"))
            });
            b.record("eigenspace dimensions", dims.collect::<Vec<_>>());
        }
        "density" => {
            let pts = sample_points();
            let mut fails = Vec::new();
            for n in 0..=d {
                let want = Scalar::real((factorial_q(n as u64) * pochhammer_q(&p.c, n as i64)).recip());
                for w in &pts {
                    let v = density::kernel_integral(n, w, p)?;
                    if v != want {
                        fails.push(format!("n = {n}, σ = {w}: {v} vs {want}"));
                    }
                }
            }
            b.record("kernel integrals", fails);
            let eng = density::DensityEngine::new(p, d)?;
            let mut fails = Vec::new();
            let mut asym = Vec::new();
            for s in &pts {
                for (m, v) in eng.g_integrals(s).iter().enumerate().skip(1) {
                    if *v != Q::from_integer(0.into()) {
                        fails.push(format!("∫G_{m}(σ = {s}, ·) = {v}"));
                    }
                }
                for w in &pts {
                    if eng.g_values(s, w) != eng.g_values(w, s) {
                        asym.push(format!("σ = {s}, ω = {w}"));
                    }
                }
            }
            b.record("truncated density integrates to one", fails);
            b.record("kernel symmetry", asym);
        }
        "petrov" => {
            let pd = PDParams::new(qr(1, 3), qr(3, 2))?;
            let thetas = [qr(1, 100), qr(1, 10_000), qr(1, 1_000_000)];
            let mut fails = Vec::new();
            for lam in [vec![1], vec![2], vec![1, 1]] {
                let lam = Partition::new(lam)?;
                let r = petrov::limit_compare(&lam, &pd, &thetas)?;
                if !r.strictly_decreasing {
                    fails.push(format!("{lam}: {:?}", r.rows));
                }
            }
            b.record("normalized deviation decreases as θ → 0", fails);
            let mut fails = Vec::new();
            for lam in partitions::enumerate_up_to(d.min(5)) {
                for mu in partitions::subpartitions(&lam) {
                    let (x, y) = (petrov::dim0(&mu, &lam), petrov::dim0_limit(&mu, &lam));
                    if y.as_ref() != Some(&x) {
                        fails.push(format!("{mu} ⊆ {lam}: {x} vs {y:?}"));
                    }
                }
            }
            b.record("θ = 0 dimensions are limits of dim_θ", fails);
        }
        _ => unreachable!(),
    }
    Ok(b.out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use crate::zmeasure::validate_params;

    #[test]
    fn all_suites_pass_at_low_degree() {
        let p = validate_params(&Scalar::new(q(1), q(2)), &Scalar::new(q(1), q(-2)), &q(1)).unwrap();
        let checks = run_suite("all", 4, &p).unwrap();
        assert!(checks.len() >= SUITES.len());
        for c in &checks {
            assert!(c.passed, "{c:?}");
        }
        assert!(run_suite("nope", 3, &p).is_err());
    }
}
