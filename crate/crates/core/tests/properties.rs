use num_bigint::{BigInt, BigUint};
use num_traits::One;
use proptest::prelude::*;

use logiw::growth::{fit_invariants, fit_with_known_mu, gold_lambda, InvariantTriple, Stabilization};
use logiw::lambda::LambdaRing;
use logiw::padic::{log_one_unit, teichmuller, LogContext, PadicInt, Rational};

const PREC: u32 = 16;

fn ell_strategy() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7])
}

fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

proptest! {
    #[test]
    fn log_is_additive_on_one_units(ell in ell_strategy(), a in -10_000i64..10_000, b in -10_000i64..10_000) {
        let l = ell as i64;
        let x = PadicInt::new(ell, PREC, 1 + l * a).unwrap();
        let y = PadicInt::new(ell, PREC, 1 + l * b).unwrap();
        let lhs = log_one_unit(&(&x * &y)).unwrap();
        let rhs = &log_one_unit(&x).unwrap() + &log_one_unit(&y).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn teichmuller_is_a_root_of_unity(ell in ell_strategy(), u in 1i64..100_000) {
        prop_assume!(u % ell as i64 != 0);
        let x = PadicInt::new(ell, PREC, u).unwrap();
        let w = teichmuller(&x).unwrap();
        prop_assert!(w.pow_u64(ell - 1) == PadicInt::one(ell, PREC));
        prop_assert!((&w - &x).valuation().is_none_or(|v| v >= 1));
    }

    #[test]
    fn log_valuation_is_a_homomorphism(
        ell in ell_strategy(),
        p in prop::sample::select(vec![2u64, 3, 5, 7, 11]),
        (a, b, c, d) in (1i64..5000, 1i64..5000, 1i64..5000, 1i64..5000),
    ) {
        let ctx = LogContext::new(ell, PREC).unwrap();
        let x = rational(a, b);
        let y = rational(-c, d);
        let lhs = ctx.log_valuation(p, &(&x * &y)).unwrap();
        let rhs = &ctx.log_valuation(p, &x).unwrap() + &ctx.log_valuation(p, &y).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn tame_log_valuation_is_classical(ell in ell_strategy(), k in 0u32..6, u in 1i64..1000) {
        let p = if ell == 3 { 5 } else { 3 };
        prop_assume!(u % p as i64 != 0);
        let ctx = LogContext::new(ell, PREC).unwrap();
        let x = rational((p as i64).pow(k) * u, 1);
        prop_assert_eq!(ctx.log_valuation(p, &x).unwrap(), ctx.int(k));
    }

    #[test]
    fn weierstrass_recomposes(ell in prop::sample::select(vec![3u64, 5]), raw in prop::collection::vec(-40i64..40, 1..7), mu in 0u32..3) {
        prop_assume!(raw.iter().any(|&c| c % ell as i64 != 0));
        let ring = LambdaRing::new(ell, PREC, 12).unwrap();
        let scale = BigInt::from(ell).pow(mu);
        let coeffs: Vec<BigInt> = raw.iter().map(|&c| &scale * c).collect();
        let f = ring.from_poly(&coeffs).unwrap();
        let w = f.weierstrass().unwrap();
        prop_assert_eq!(w.mu, mu);
        let lambda = raw.iter().position(|&c| c % ell as i64 != 0).unwrap();
        prop_assert_eq!(w.lambda(), lambda);
        // U is only known mod ℓ^{N−μ}; ℓ^μ·U is then exact mod ℓ^N.
        let u = ring.from_poly(&w.u.centered()).unwrap();
        let p = w.p.to_lambda(&ring).unwrap();
        let back = &(&ring.from_poly(std::slice::from_ref(&scale)).unwrap() * &p) * &u;
        prop_assert_eq!(back, f);
    }

    #[test]
    fn invariants_add_under_products(
        ell in prop::sample::select(vec![3u64, 5]),
        a in prop::collection::vec(-20i64..20, 1..5),
        b in prop::collection::vec(-20i64..20, 1..5),
    ) {
        let unit = |v: &[i64]| v.iter().any(|&c| c % ell as i64 != 0);
        prop_assume!(unit(&a) && unit(&b));
        let ring = LambdaRing::new(ell, PREC, 16).unwrap();
        let fa = ring.from_i64s(&a).unwrap();
        let fb = ring.from_i64s(&b).unwrap();
        let (mu_a, la) = fa.invariants().unwrap();
        let (mu_b, lb) = fb.invariants().unwrap();
        prop_assert_eq!((&fa * &fb).invariants().unwrap(), (mu_a + mu_b, la + lb));
    }

    #[test]
    fn fit_recovers_growth_law(ell in ell_strategy(), mu in 0i64..4, lambda in 0i64..8, nu in -5i64..20, layers in 3usize..6) {
        let e: Vec<i64> = (0..layers).map(|n| mu * (ell as i64).pow(n as u32) + lambda * n as i64 + nu).collect();
        let t = fit_invariants(&e, ell).unwrap();
        prop_assert_eq!(t, InvariantTriple { mu, lambda, nu, n0: 0 });
        let k = fit_with_known_mu(&e, ell, mu, Stabilization::AssumeFromZero).unwrap();
        prop_assert_eq!(k, t);
    }

    #[test]
    fn fit_locates_stabilization(ell in ell_strategy(), lambda in 0i64..6, nu in 0i64..10, early in 0i64..40) {
        let law = |n: usize| lambda * n as i64 + nu;
        let e = vec![early, law(1), law(2), law(3)];
        let t = fit_invariants(&e, ell).unwrap();
        prop_assert_eq!((t.mu, t.lambda, t.nu), (0, lambda, nu));
        prop_assert_eq!(t.n0, usize::from(early != law(0)));
        let assumed = fit_with_known_mu(&e, ell, 0, Stabilization::AssumeFromZero);
        prop_assert_eq!(assumed.is_ok(), early == law(0));
    }

    #[test]
    fn gold_reads_the_first_small_difference(ell in ell_strategy(), lambda in 0i64..3, nu in 0i64..10) {
        // With λ′ < ℓ − 1 = φ(ℓ) the criterion fires at n = 1.
        prop_assume!(lambda < ell as i64 - 1);
        let e: Vec<i64> = (0..3).map(|n| lambda * n + nu).collect();
        prop_assert_eq!(gold_lambda(&e, ell), Some(lambda));
    }
}

#[test]
fn h_ell_normalization() {
    for ell in [3u64, 5, 7, 11] {
        let ctx = LogContext::new(ell, 32).unwrap();
        let h = ctx.h_ell(&rational(ell as i64 + 1, 1)).unwrap();
        assert!(h.centered().is_one());
        assert_eq!(h.value(), &BigUint::one());
    }
}
