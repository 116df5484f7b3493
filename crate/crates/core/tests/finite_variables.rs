//! Oracles in finitely many variables, independent of the symmetric-function machinery.

use num::{One, Zero};
use thoma::laguerre::{laguerre_fn, truncate_n, ParamContext};
use thoma::partitions::{self, Partition};
use thoma::poly::MPoly;
use thoma::scalar::{factorial_q, pochhammer_q, q, qr, Scalar, Q};
use thoma::symalg::SymFunc;

/// `Σ_j x_j ∂_j² + (c - x_j) ∂_j + 2θ Σ_{j<k} (x_j ∂_j - x_k ∂_k)/(x_j - x_k)`.
fn finite_operator(f: &MPoly, c: &Q, theta: &Q) -> MPoly {
    let n = f.nvars();
    let mut out = MPoly::zero(n);
    let first: Vec<MPoly> = (0..n).map(|j| f.derivative(j)).collect();
    for j in 0..n {
        out = out.add(&first[j].derivative(j).shift(j, 1));
        out = out.add(&first[j].scale(&Scalar::real(c.clone())));
        out = out.sub(&first[j].shift(j, 1));
    }
    for j in 0..n {
        for k in j + 1..n {
            let num = first[j].shift(j, 1).sub(&first[k].shift(k, 1));
            let quot = num.divide_antisymmetric(j, k).expect("antisymmetric numerator");
            out = out.add(&quot.scale(&Scalar::real(q(2) * theta)));
        }
    }
    out
}

#[test]
fn truncated_laguerre_functions_are_eigenfunctions() {
    for theta in [qr(1, 2), q(1), q(2)] {
        for n in [2usize, 3] {
            let c = qr(7, 3);
            let ctx = ParamContext::degenerate(n, &c, &theta);
            for lam in partitions::enumerate_up_to(3) {
                if lam.len() > n {
                    continue;
                }
                let f = truncate_n(&laguerre_fn(&lam, &ctx).unwrap(), n).unwrap();
                let lhs = finite_operator(&f, &c, &theta);
                let rhs = f.scale(&Scalar::from(-(lam.size() as i64)));
                assert_eq!(lhs, rhs, "θ = {theta}, N = {n}, λ = {lam}");
            }
        }
    }
}

#[test]
fn one_variable_case_is_classical_laguerre() {
    // 𝔏_(n) restricted to one variable is proportional to Σ_j C(n,j) (-x)^j / (c)_j
    let theta = qr(3, 4);
    let c = qr(5, 2);
    let ctx = ParamContext::degenerate(1, &c, &theta);
    for n in 0..=5usize {
        let lam = Partition::new(if n == 0 { vec![] } else { vec![n] }).unwrap();
        let f = truncate_n(&laguerre_fn(&lam, &ctx).unwrap(), 1).unwrap();
        let mut classical = MPoly::zero(1);
        let mut binom = Q::one();
        for j in 0..=n {
            let sign = if j % 2 == 0 { Q::one() } else { -Q::one() };
            classical.add_term(vec![j], Scalar::real(&sign * &binom / pochhammer_q(&c, j as i64)));
            binom = binom * q((n - j) as i64) / q(j as i64 + 1);
        }
        let ratio = &f.coeff(&[0]) * &classical.coeff(&[0]).inv();
        assert!(!ratio.is_zero());
        assert_eq!(f, classical.scale(&ratio), "n = {n}");
        // the constant is (-1)^n (θ)_n (c)_n / n!
        let sign = if n % 2 == 0 { q(1) } else { q(-1) };
        let expected = Scalar::real(sign * pochhammer_q(&theta, n as i64) * pochhammer_q(&c, n as i64) / factorial_q(n as u64));
        assert_eq!(ratio, expected, "n = {n}");
    }
}

fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    if n == 0 {
        return vec![(vec![], true)];
    }
    let mut out = Vec::new();
    for (p, even) in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut v = p.clone();
            v.insert(pos, n - 1);
            let moved = p.len() - pos;
            out.push((v, even == (moved % 2 == 0)));
        }
    }
    out
}

/// `det(x_i^{e_j})`.
fn alternant(n: usize, exps: &[usize]) -> MPoly {
    let mut out = MPoly::zero(n);
    for (perm, even) in permutations(n) {
        let mut e = vec![0; n];
        for (j, &i) in perm.iter().enumerate() {
            e[i] = exps[j];
        }
        out.add_term(e, Scalar::from(if even { 1 } else { -1 }));
    }
    out
}

#[test]
fn jack_at_theta_one_is_bialternant_schur() {
    let n = 3;
    let delta: Vec<usize> = (0..n).rev().collect();
    let mut vandermonde = MPoly::constant(n, Scalar::one());
    for j in 0..n {
        for k in j + 1..n {
            vandermonde = vandermonde.mul(&MPoly::var(n, j).sub(&MPoly::var(n, k)));
        }
    }
    assert_eq!(vandermonde, alternant(n, &delta));
    for lam in partitions::enumerate_up_to(5) {
        if lam.len() > n {
            continue;
        }
        let s = truncate_n(&SymFunc::jack_p(&q(1), lam.clone()), n).unwrap();
        let exps: Vec<usize> = (0..n).map(|i| lam.part(i + 1) + delta[i]).collect();
        assert_eq!(s.mul(&vandermonde), alternant(n, &exps), "λ = {lam}");
    }
}
