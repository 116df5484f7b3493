//! Acceptance criteria, run in sequence with one PASS/FAIL line each.
//!
//! Runtime limits are part of each criterion. The process exits non-zero if any criterion fails.

use std::time::{Duration, Instant};

use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use thoma::circ::CircPoly;
use thoma::density::{self, DensityEngine};
use thoma::laguerre;
use thoma::partitions::{self, Partition};
use thoma::petrov::{self, PDParams};
use thoma::scalar::{factorial_q, q, qr, Scalar, Q};
use thoma::spectral;
use thoma::symalg::{self, SymFunc};
use thoma::zmeasure::{validate_params, ParamTriple, ThomaPoint};

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn principal() -> ParamTriple {
    validate_params(&Scalar::new(q(1), q(2)), &Scalar::new(q(1), q(-2)), &q(1)).unwrap()
}

fn complementary() -> ParamTriple {
    validate_params(&Scalar::real(qr(1, 10)), &Scalar::real(qr(3, 10)), &qr(1, 2)).unwrap()
}

fn degenerate() -> ParamTriple {
    ParamTriple::degenerate(2, &q(3), &q(1)).unwrap()
}

fn pt(alpha: &[(i64, i64)], beta: &[(i64, i64)]) -> ThomaPoint {
    let f = |v: &[(i64, i64)]| v.iter().map(|&(n, d)| qr(n, d)).collect();
    ThomaPoint::new(f(alpha), f(beta)).unwrap()
}

fn grid() -> Vec<ThomaPoint> {
    vec![
        ThomaPoint::origin(),
        pt(&[(1, 1)], &[]),
        pt(&[], &[(1, 1)]),
        pt(&[(1, 2), (1, 4)], &[]),
        pt(&[], &[(2, 3)]),
        pt(&[(1, 3)], &[(1, 5), (1, 7)]),
        pt(&[(1, 2)], &[(1, 2)]),
        pt(&[(3, 5), (1, 5)], &[(1, 10)]),
        pt(&[(1, 4), (1, 4), (1, 4)], &[]),
        pt(&[], &[(1, 3), (1, 3)]),
    ]
}

/// Independent norm oracle: `Π (a + θ(l+1)) / (a + 1 + θl)` over boxes, arms and legs from the diagram.
fn norm_oracle(lam: &Partition, th: &Q) -> Q {
    let conj = lam.conjugate();
    let mut out = Q::one();
    for (i, &row) in lam.parts().iter().enumerate() {
        for j in 0..row {
            let a = q((row - j - 1) as i64);
            let l = q((conj.parts()[j] - i - 1) as i64);
            out *= (&a + th * (&l + Q::one())) / (&a + Q::one() + th * &l);
        }
    }
    out
}

/// Independent hook oracle: `Π (a + θl + 1)`.
fn hook_oracle(lam: &Partition, th: &Q) -> Q {
    let conj = lam.conjugate();
    let mut out = Q::one();
    for (i, &row) in lam.parts().iter().enumerate() {
        for j in 0..row {
            out *= q((row - j - 1) as i64) + th * q((conj.parts()[j] - i - 1) as i64) + Q::one();
        }
    }
    out
}

fn fail_on(fails: Vec<String>, ok: String) -> Outcome {
    match fails.first() {
        None => Ok(ok),
        Some(f) => Err(format!("{} failures, first: {f}", fails.len())),
    }
}

fn c1_jack_orthogonality() -> Outcome {
    let mut fails = Vec::new();
    let mut checked = 0usize;
    for th in [qr(1, 2), q(1), q(2)] {
        let parts = partitions::enumerate_up_to(6);
        for l in &parts {
            let pl = SymFunc::jack_p(&th, l.clone());
            for m in &parts {
                let v = symalg::inner_product_theta(&pl, &SymFunc::jack_p(&th, m.clone())).map_err(|e| e.to_string())?;
                let want = if l == m {
                    Scalar::real(norm_oracle(l, &th).recip())
                } else {
                    Scalar::zero()
                };
                checked += 1;
                if v != want {
                    fails.push(format!("θ = {th}: ⟨P_{l}, P_{m}⟩ = {v}, expected {want}"));
                }
            }
        }
    }
    fail_on(fails, format!("{checked} pairs exact"))
}

fn c2_dimensions() -> Outcome {
    let mut fails = Vec::new();
    let mut checked = 0usize;
    for th in [qr(1, 2), q(1), q(2), qr(7, 3)] {
        for lam in partitions::enumerate_up_to(8) {
            let want = factorial_q(lam.size() as u64) / hook_oracle(&lam, &th);
            let table = symalg::dim_theta(&Partition::empty(), &lam, &th).map_err(|e| e.to_string())?;
            let paths = symalg::dim_theta_paths(&Partition::empty(), &lam, &th);
            checked += 1;
            if table != want || paths != want {
                fails.push(format!(
                    "θ = {th}, λ = {lam}: ⟨p_1^n, Q_λ⟩ = {table}, paths = {paths}, |λ|!/H = {want}"
                ));
            }
        }
    }
    fail_on(fails, format!("{checked} (θ, λ) exact"))
}

fn c3_laguerre_orthogonality() -> Outcome {
    let parts = partitions::enumerate_up_to(5);
    let mut fails = Vec::new();
    for (label, p) in [
        ("principal", principal()),
        ("complementary", complementary()),
        ("degenerate N=2 c=3", degenerate()),
    ] {
        let ctx = p.context();
        let funcs = parts
            .iter()
            .map(|l| laguerre::laguerre_fn(l, &ctx))
            .collect::<thoma::Result<Vec<_>>>()
            .map_err(|e| e.to_string())?;
        for (i, l) in parts.iter().enumerate() {
            for (j, m) in parts.iter().enumerate().skip(i) {
                let v = laguerre::lifted_inner_product(&funcs[i], &funcs[j], &ctx).map_err(|e| e.to_string())?;
                let want = if i == j {
                    let shape = partitions::SkewShape::straight(l.clone());
                    (&partitions::skew_pochhammer(&p.z, &shape, &p.theta) * &partitions::skew_pochhammer(&p.zp, &shape, &p.theta))
                        .scale(&norm_oracle(l, &p.theta))
                } else {
                    Scalar::zero()
                };
                if v != want {
                    fails.push(format!("{label}: ⟨𝔏_{l}, 𝔏_{m}⟩ = {v}, expected {want}"));
                }
            }
        }
    }
    let n = parts.len();
    fail_on(fails, format!("3 triples × {} pairs exact", n * (n + 1) / 2))
}

fn c4_key_lemma() -> Outcome {
    let mut fails = Vec::new();
    let mut checked = 0usize;
    for p in [principal(), complementary()] {
        for m in 0..=3 {
            for nu in partitions::enumerate_no_ones(m) {
                let f = CircPoly::monomial(&nu);
                for n in m..=5 {
                    let r = density::key_lemma_residual(n, &f, &p).map_err(|e| e.to_string())?;
                    checked += 1;
                    let ok = if m == 0 { r.is_zero() } else { r.degree().is_none_or(|k| k < m) };
                    if !ok {
                        fails.push(format!("c = {}, n = {n}, f = p°_{nu}: residual {r}", p.c));
                    }
                }
            }
        }
    }
    fail_on(fails, format!("{checked} (c, n, f) residuals of lower degree"))
}

fn c5_spectral() -> Outcome {
    let mut fails = Vec::new();
    for p in [principal(), complementary()] {
        let sys = spectral::eigen_decompose(5, &p).map_err(|e| e.to_string())?;
        for m in 0..=5 {
            let a = density::G_m(m, &p).and_then(|k| k.to_bicirc(&p.theta)).map_err(|e| e.to_string())?;
            let b = spectral::G_from_eigen(m, &sys).map_err(|e| e.to_string())?;
            if a != b {
                fails.push(format!("c = {}, m = {m}", p.c));
            }
        }
    }
    fail_on(fails, "G_0..G_5 equal at c = 5 and c = 3/50".into())
}

fn c6_density_sanity() -> Outcome {
    let p = principal();
    let pts = grid();
    let mut fails = Vec::new();
    for m in [2usize, 4, 6, 8, 10] {
        let eng = DensityEngine::new(&p, m).map_err(|e| e.to_string())?;
        for s in &pts {
            let ints = eng.g_integrals(s);
            if ints[0] != Q::one() || ints[1..].iter().any(|v| !v.is_zero()) {
                fails.push(format!("(a) M = {m}, σ = {s}: {ints:?}"));
            }
        }
        if m == 10 {
            for s in &pts {
                for w in &pts {
                    if eng.g_values(s, w) != eng.g_values(w, s) {
                        fails.push(format!("(b) σ = {s}, ω = {w}"));
                    }
                }
            }
            let mut worst = 0f64;
            for (s, w) in pts.iter().zip(pts.iter().rev().chain(pts.iter()).skip(3)).take(10) {
                let r = eng.density(50.0, s, w).map_err(|e| e.to_string())?;
                let dev = (r.value - 1.0).abs();
                worst = worst.max(dev);
                if dev > 1e-12 + r.rigorous_tail {
                    fails.push(format!("(c) σ = {s}, ω = {w}: {} with tail {}", r.value, r.rigorous_tail));
                }
            }
            if fails.is_empty() {
                return Ok(format!(
                    "(a) exact for M ∈ {{2,4,6,8,10}}, (b) exact, (c) max |p - 1| = {worst:.3e} at t = 50"
                ));
            }
        }
    }
    fail_on(fails, String::new())
}

fn c7_ergodic_bound() -> Outcome {
    let mut fails = Vec::new();
    for p in [principal(), complementary()] {
        let want = q(2) * (&p.c + q(1)) * (&p.c + q(3));
        let got = density::refined_leading_constant(&p);
        if got != want {
            fails.push(format!("c = {}: leading constant {got}, expected {want}", p.c));
        }
    }
    let p = principal();
    let pts = grid();
    let eng = DensityEngine::new(&p, 12).map_err(|e| e.to_string())?;
    let mut summary = Vec::new();
    for t in [1.0, 2.0, 4.0] {
        let b = density::tv_bound(t, &p, 12).map_err(|e| e.to_string())?;
        for s in &pts[..4] {
            let mut acc = 0f64;
            for w in &pts {
                acc += (eng.density(t, s, w).map_err(|e| e.to_string())?.value - 1.0).abs();
            }
            let avg = acc / pts.len() as f64;
            if !(avg <= b.refined && b.refined <= b.crude) {
                fails.push(format!(
                    "t = {t}, σ = {s}: grid mean {avg:.3e}, refined {:.3e}, crude {:.3e}",
                    b.refined, b.crude
                ));
            }
            if s == &pts[0] {
                summary.push(format!("t = {t}: mean {avg:.2e} ≤ {:.2e} ≤ {:.2e}", b.refined, b.crude));
            }
        }
    }
    fail_on(fails, format!("constant 96 at c = 5; {}", summary.join(", ")))
}

fn c8_petrov() -> Outcome {
    let pd = PDParams::new(qr(1, 3), qr(3, 2)).map_err(|e| e.to_string())?;
    let thetas = [qr(1, 100), qr(1, 10_000), qr(1, 1_000_000)];
    let mut fails = Vec::new();
    let mut summary = Vec::new();
    for lam in [vec![1], vec![2], vec![1, 1]] {
        let lam = Partition::new(lam).unwrap();
        let r = petrov::limit_compare(&lam, &pd, &thetas).map_err(|e| e.to_string())?;
        let devs: Vec<String> = r
            .rows
            .iter()
            .map(|row| row.deviation.clone().unwrap_or_else(|| "-".into()))
            .collect();
        let ok = if lam.size() == 1 {
            devs.iter().all(|d| d == "0")
        } else {
            r.strictly_decreasing
        };
        if !ok {
            fails.push(format!("{lam}: {devs:?}"));
        }
        if lam.size() == 1 {
            summary.push(format!("{lam}: exact"));
        } else {
            let f: Vec<String> = r
                .rows
                .iter()
                .map(|row| format!("{:.1e}", row.deviation_f64.unwrap_or(f64::NAN)))
                .collect();
            summary.push(format!("{lam}: {}", f.join(" > ")));
        }
    }
    fail_on(fails, summary.join("; "))
}

fn random_point(rng: &mut ChaCha8Rng) -> ThomaPoint {
    let mut left = Q::one();
    let mut take = |rng: &mut ChaCha8Rng| {
        let x = &left * qr(rng.gen_range(0..4), 5);
        left -= &x;
        x
    };
    let na = rng.gen_range(0..3);
    let nb = rng.gen_range(0..3);
    let alpha = (0..na).map(|_| take(rng)).collect();
    let beta = (0..nb).map(|_| take(rng)).collect();
    ThomaPoint::new(alpha, beta).unwrap()
}

fn c9_tail_soundness() -> Outcome {
    let p = principal();
    let eng = DensityEngine::new(&p, 24).map_err(|e| e.to_string())?;
    let tail = density::tail_bound(1.0, 12, &p).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x7401);
    let mut fails = Vec::new();
    let mut worst = 0f64;
    for _ in 0..5 {
        let (s, w) = (random_point(&mut rng), random_point(&mut rng));
        let terms = eng.terms(1.0, &s, &w);
        // terms[k] belongs to m = k + 2, so m = 13..=24 starts at 11
        let diff = terms[11..].iter().sum::<f64>().abs();
        worst = worst.max(diff);
        if !(diff < tail) {
            fails.push(format!("σ = {s}, ω = {w}: |Δ| = {diff:e} vs tail {tail:e}"));
        }
    }
    fail_on(fails, format!("max |p_24 - p_12| = {worst:.2e} < tail(12) = {tail:.2e}"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("Jack orthogonality and norms, |λ| ≤ 6, θ ∈ {1/2, 1, 2}", 60, c1_jack_orthogonality),
        ("dim_θ(∅, λ) = |λ|!/H_θ(λ), |λ| ≤ 8", 60, c2_dimensions),
        ("Laguerre orthogonality, |λ| ≤ 5, three series", 300, c3_laguerre_orthogonality),
        ("reproducing kernel lemma, m ≤ 3, n ≤ 5", 300, c4_key_lemma),
        ("block kernels, eigen route = inclusion-exclusion, m ≤ 5", 300, c5_spectral),
        ("density sanity: integral, symmetry, t = 50", 120, c6_density_sanity),
        ("ergodic bound constant and grid domination", 120, c7_ergodic_bound),
        ("θ → 0 limit of Laguerre functions", 60, c8_petrov),
        ("tail bound soundness, M = 12 vs 24", 120, c9_tail_soundness),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let late = took > Duration::from_secs(*limit);
        let (status, detail) = match (&out, late) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("over time limit; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "{status} [{}] {name} ({:.2} s, limit {limit} s): {detail}",
            i + 1,
            took.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
