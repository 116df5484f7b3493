use num::{One, Zero};
use proptest::prelude::*;

use thoma::circ::CircPoly;
use thoma::cli::{ComplexSpec, Format, JobConfig, PdSpec, PointSpec};
use thoma::density::{self, DensityEngine};
use thoma::partitions::{self, Partition};
use thoma::petrov::{self, PDParams, QPoly};
use thoma::scalar::{fmt_q, pochhammer_q, q, qr, Scalar, Q};
use thoma::symalg::{self, Basis, SymFunc};
use thoma::zmeasure::{validate_params, JackEvaluator, ParamTriple, ThomaPoint};

fn principal() -> ParamTriple {
    validate_params(&Scalar::new(q(1), q(2)), &Scalar::new(q(1), q(-2)), &q(1)).unwrap()
}

fn rational() -> impl Strategy<Value = Q> {
    (-20i64..=20, 1i64..=9).prop_map(|(n, d)| qr(n, d))
}

fn theta() -> impl Strategy<Value = Q> {
    prop_oneof![Just(qr(1, 2)), Just(q(1)), Just(q(2)), Just(qr(5, 3))]
}

fn partition(max: usize) -> impl Strategy<Value = Partition> {
    (0..=max).prop_flat_map(|n| {
        let parts = partitions::enumerate(n);
        (0..parts.len()).prop_map(move |i| parts[i].clone())
    })
}

/// Point with small-denominator coordinates.
fn thoma_point() -> impl Strategy<Value = ThomaPoint> {
    (prop::collection::vec(0i64..4, 0..3), prop::collection::vec(0i64..4, 0..3)).prop_map(|(a, b)| {
        let mut left = Q::one();
        let mut take = |k: i64| {
            let x = &left * qr(k, 5);
            left -= &x;
            x
        };
        let alpha = a.into_iter().map(&mut take).collect();
        let beta = b.into_iter().map(&mut take).collect();
        ThomaPoint::new(alpha, beta).unwrap()
    })
}

fn symfunc(th: Q) -> impl Strategy<Value = SymFunc> {
    prop::collection::vec((partition(5), rational()), 1..5)
        .prop_map(move |terms| SymFunc::new(Basis::PowerSum, th.clone(), terms.into_iter().map(|(l, c)| (l, Scalar::real(c)))))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, .. ProptestConfig::default() })]

    #[test]
    fn conjugation_is_an_involution(lam in partition(12)) {
        let c = lam.conjugate();
        prop_assert_eq!(c.size(), lam.size());
        prop_assert_eq!(c.conjugate(), lam.clone());
        prop_assert_eq!(c.len(), lam.part(1));
    }

    #[test]
    fn enumeration_order_refines_dominance(n in 1usize..9) {
        let parts = partitions::enumerate(n);
        prop_assert_eq!(parts.len() as u128, partitions::partition_count(n));
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                prop_assert!(!parts[j].dominates(&parts[i]) || parts[i] == parts[j]);
            }
        }
    }

    #[test]
    fn pochhammer_recursion(x in rational(), n in 0i64..8) {
        prop_assume!(&x + q(n) != Q::zero());
        prop_assert_eq!(pochhammer_q(&x, n + 1), pochhammer_q(&x, n) * (&x + q(n)));
    }

    #[test]
    fn scalar_inverse(re in rational(), im in rational()) {
        let z = Scalar::new(re, im);
        prop_assume!(!z.is_zero());
        prop_assert_eq!(&z * &z.inv(), Scalar::one());
    }

    #[test]
    fn basis_round_trips((th, f) in theta().prop_flat_map(|th| (Just(th.clone()), symfunc(th)))) {
        for b in [Basis::Monomial, Basis::JackP, Basis::JackQ, Basis::Laguerre { e1: Scalar::from(2), e2: Scalar::from(5) }] {
            let g = f.convert(&b).unwrap();
            prop_assert_eq!(g.convert(&Basis::PowerSum).unwrap(), f.clone());
        }
        let circ = CircPoly::from_symfunc(&f).unwrap();
        prop_assert_eq!(CircPoly::from_symfunc(&circ.to_symfunc(&th)).unwrap(), circ);
    }

    #[test]
    fn inner_product_is_symmetric_and_positive((a, b) in theta().prop_flat_map(|th| (symfunc(th.clone()), symfunc(th)))) {
        prop_assert_eq!(symalg::inner_product_theta(&a, &b).unwrap(), symalg::inner_product_theta(&b, &a).unwrap());
        prop_assume!(!a.is_zero());
        let n = symalg::inner_product_theta(&a, &a).unwrap();
        prop_assert!(n.im.is_zero() && n.re > Q::zero());
    }

    #[test]
    fn dimensions_are_positive_and_branch(th in theta(), lam in partition(7)) {
        let d = symalg::dim_theta_paths(&Partition::empty(), &lam, &th);
        prop_assert!(d > Q::zero());
        let below: Q = lam
            .remove_box_options()
            .iter()
            .map(|mu| symalg::dim_theta_paths(&Partition::empty(), mu, &th) * partitions::one_box_dim(mu, &lam, &th))
            .sum();
        if !lam.is_empty() {
            prop_assert_eq!(below, d);
        }
    }

    #[test]
    fn normalized_jack_values_are_bounded(th in theta(), w in thoma_point()) {
        let ev = JackEvaluator::get(6, &th);
        let vals = ev.values(&w);
        for (lam, v) in ev.parts.iter().zip(&vals) {
            prop_assert!(*v >= Q::zero(), "{} at {}", lam, w);
            prop_assert!(v * partitions::dim_total_closed(lam, &th) <= Q::one(), "{} at {}", lam, w);
        }
    }

    #[test]
    fn block_kernels_are_symmetric(a in thoma_point(), b in thoma_point()) {
        let eng = DensityEngine::new(&principal(), 6).unwrap();
        prop_assert_eq!(eng.g_values(&a, &b), eng.g_values(&b, &a));
        let integrals = eng.g_integrals(&a);
        prop_assert!(integrals[1..].iter().all(Zero::is_zero));
        prop_assert_eq!(&integrals[0], &Q::one());
    }

    #[test]
    fn tail_bound_is_monotone(t in 0.5f64..6.0, dt in 0.0f64..3.0, m in 6usize..14) {
        let p = principal();
        let a = density::tail_bound(t, m, &p).unwrap();
        prop_assert!(a > 0.0);
        prop_assert!(a >= density::tail_bound(t + dt, m, &p).unwrap());
        prop_assert!(a >= density::tail_bound(t, m + 1, &p).unwrap());
    }

    #[test]
    fn pregenerator_preserves_weighted_degree(nu in partition(6), a in rational(), tau in 1i64..9) {
        let pd = PDParams::new(a, qr(tau, 2)).unwrap();
        let mut f = QPoly::zero();
        f.add_term(nu.clone(), q(1));
        let g = petrov::petrov_generator_apply(&f, &pd);
        prop_assert!(g.weighted_degree().is_none_or(|d| d <= nu.size()));
        prop_assert!(petrov::petrov_generator_apply(&QPoly::constant(q(3)), &pd).is_zero());
    }
}

fn job_config() -> impl Strategy<Value = JobConfig> {
    let rat = || rational().prop_map(|x| fmt_q(&x));
    let point = (prop::collection::vec(rat(), 0..3), prop::collection::vec(rat(), 0..3));
    (
        (rat(), rat(), rat(), rat(), rat()),
        prop::collection::vec(point, 0..3),
        prop::collection::vec(0.01f64..100.0, 0..4),
        prop::option::of(1usize..20),
        prop::option::of(prop_oneof![Just(Format::Json), Just(Format::Csv)]),
        prop::option::of(prop_oneof![Just("all".to_string()), Just("density".to_string())]),
        prop::collection::vec(prop::collection::vec(1usize..4, 0..3), 0..3),
        prop::option::of((rat(), rat())),
    )
        .prop_map(|((zr, zi, pr, pi, th), pts, t, m, format, suite, lambdas, pd)| {
            let points: Vec<PointSpec> = pts
                .into_iter()
                .enumerate()
                .map(|(i, (alpha, beta))| PointSpec {
                    id: format!("p{i}"),
                    alpha,
                    beta,
                })
                .collect();
            let pairs = points.iter().take(1).map(|p| (p.id.clone(), p.id.clone())).collect();
            JobConfig {
                command: Some("density".into()),
                z: ComplexSpec { re: zr, im: zi },
                zp: ComplexSpec { re: pr, im: pi },
                theta: th,
                points,
                pairs,
                t,
                max_degree: m,
                out: None,
                format,
                suite,
                lambdas,
                pd: pd.map(|(a, tau)| PdSpec { a, tau }),
                thetas: vec!["1/100".into()],
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, .. ProptestConfig::default() })]

    #[test]
    fn config_round_trips(cfg in job_config()) {
        prop_assert_eq!(JobConfig::from_toml(&cfg.to_toml()).unwrap(), cfg.clone());
        prop_assert_eq!(JobConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }
}
