//! Property tests for the structural invariants the library relies on.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use perigee::construction::{build_plan, compensated_envelope, GrowthTarget, Strategy as Plan};
use perigee::interval::Interval;
use perigee::numtheory::{
    divisors, element_of_order, least_prime_congruent_one, mobius, sigma, totient,
};
use perigee::orbits::{
    fixed_from_least, least_from_fixed, lemma_sandwich_check, realizability_check, CountSequence,
};
use perigee::toral::{cyclotomic_index, delta_n, delta_n_resultant, toral_fix_sequence, IntegerPolynomial};
use perigee::zeta::{fixed_from_zeta, has_nonnegative_integer_coeffs, orbit_product_form, zeta_truncate};
use perigee::{ExactZeta, F64Zeta, IntPoly, RatPoly};

/// Fixed-point counts of a map with the given numbers of orbits of each
/// least period.
fn from_orbits(orbits: &[u64]) -> CountSequence {
    let n_max = orbits.len();
    CountSequence::fixed((1..=n_max as u64).map(|n| {
        divisors(n)
            .into_iter()
            .map(|d| BigInt::from(d) * BigInt::from(orbits[d as usize - 1]))
            .sum::<BigInt>()
    }))
}

fn rational_rate() -> impl Strategy<Value = BigRational> {
    (1i64..=300, 1i64..=100).prop_map(|(a, b)| BigRational::new(a.into(), b.into()))
}

fn monic_poly(max_deg: usize, bound: i64) -> impl Strategy<Value = IntegerPolynomial> {
    (1..=max_deg).prop_flat_map(move |d| {
        prop::collection::vec(-bound..=bound, d).prop_map(|mut cs| {
            cs.push(1);
            IntegerPolynomial::from_i64s(&cs).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn mobius_round_trip(values in prop::collection::vec(0u64..(1 << 32), 1..64)) {
        let fixed = CountSequence::fixed(values.iter().copied());
        let back = fixed_from_least(&least_from_fixed(&fixed).unwrap()).unwrap();
        prop_assert_eq!(back.values(), fixed.values());

        let least = CountSequence::least(values.iter().copied());
        let back = least_from_fixed(&fixed_from_least(&least).unwrap()).unwrap();
        prop_assert_eq!(back.values(), least.values());
    }

    #[test]
    fn divisor_sums(n in 1u64..5000) {
        let ds = divisors(n);
        let mu: i64 = ds.iter().map(|&d| mobius(d) as i64).sum();
        prop_assert_eq!(mu, i64::from(n == 1));
        prop_assert_eq!(ds.iter().map(|&d| totient(d)).sum::<u64>(), n);
        prop_assert_eq!(ds.iter().sum::<u64>(), sigma(n));
    }

    #[test]
    fn realizable_sequences_behave(orbits in prop::collection::vec(0u64..=10, 8..40)) {
        let fixed = from_orbits(&orbits);
        let report = realizability_check(&fixed).unwrap();
        prop_assert!(report.realizable);
        let least = least_from_fixed(&fixed).unwrap();
        for (i, o) in orbits.iter().enumerate() {
            prop_assert_eq!(least.get(i + 1), &(BigInt::from(*o) * BigInt::from(i + 1)));
        }
        prop_assert!(lemma_sandwich_check(&fixed, &least).unwrap().holds());

        let m = fixed.horizon();
        let z: ExactZeta = zeta_truncate(&fixed, m).unwrap();
        prop_assert!(has_nonnegative_integer_coeffs(&z));
        prop_assert!(z.satisfies_recurrence());
        let product: ExactZeta = orbit_product_form(&fixed, m).unwrap();
        prop_assert_eq!(product.coeffs(), z.coeffs());
        let back = fixed_from_zeta(z.coeffs()).unwrap();
        let expect: Vec<BigRational> = fixed.values().iter().cloned().map(BigRational::from_integer).collect();
        prop_assert_eq!(back, expect);
    }

    #[test]
    fn float_zeta_tracks_exact(orbits in prop::collection::vec(0u64..=3, 12)) {
        let fixed = from_orbits(&orbits);
        let exact: ExactZeta = zeta_truncate(&fixed, 12).unwrap();
        let approx: F64Zeta = zeta_truncate(&fixed, 12).unwrap();
        for (e, a) in exact.coeffs().iter().zip(approx.coeffs()) {
            let e = e.to_f64().unwrap();
            prop_assert!((e - a).abs() <= 1e-9 * e.abs().max(1.0));
        }
    }

    #[test]
    fn mobius_inversion_detects_non_divisibility(v in 2u64..1000) {
        // F = (1, v): L_2 = v - 1 must be even.
        let fixed = CountSequence::fixed([1u64, v]);
        prop_assert_eq!(realizability_check(&fixed).unwrap().realizable, v % 2 == 1);
    }

    #[test]
    fn element_of_order_has_exact_order(n in 1u64..400) {
        let p = least_prime_congruent_one(n, &BigUint::zero()).unwrap().p;
        prop_assert!(((&p - 1u32) % n).is_zero());
        let cert = perigee::numtheory::primitive_root(&p).unwrap();
        let a = element_of_order(&p, &cert.g, n).unwrap();
        prop_assert!(a.modpow(&BigUint::from(n), &p).is_one());
        for q in divisors(n).into_iter().filter(|&d| d < n) {
            prop_assert!(!a.modpow(&BigUint::from(q), &p).is_one());
        }
    }

    #[test]
    fn plan_counts(c in rational_rate(), n_max in 2usize..24) {
        let plan = build_plan(GrowthTarget::finite(c).unwrap(), Plan::Paper, n_max).unwrap();
        let fixed = plan.fixed_sequence(n_max).unwrap();
        prop_assert!(realizability_check(&fixed).unwrap().realizable);
        let least = least_from_fixed(&fixed).unwrap();
        for n in 1..=n_max {
            prop_assert!(fixed.get(n).is_positive());
            // Fix(T^d) is a subgroup of Fix(T^n) when d | n.
            for d in divisors(n as u64) {
                prop_assert!(fixed.get(n).is_multiple_of(fixed.get(d as usize)));
            }
            let exact = BigInt::from(plan.least_count_exact(n).unwrap());
            let claimed = BigInt::from(plan.least_count_claimed(n).unwrap());
            prop_assert_eq!(&exact, least.get(n));
            prop_assert!(exact >= claimed);
        }
    }

    #[test]
    fn compensated_stays_below_target(c in rational_rate(), n_max in 1usize..60) {
        let plan = build_plan(GrowthTarget::finite(c).unwrap(), Plan::Compensated, n_max).unwrap();
        let env = compensated_envelope(&plan, 96).unwrap();
        prop_assert!(env.holds());
        for row in &env.rows {
            prop_assert!(row.deficit.is_nonnegative());
            prop_assert!(row.deficit.certainly_le(&row.log_p) || !row.certified);
        }
    }

    #[test]
    fn ln_natural_encloses_float(n in 1u64..u64::MAX) {
        let iv = Interval::ln_natural(&BigUint::from(n), 80);
        let x = (n as f64).ln();
        prop_assert!(iv.lo_f64() <= x + 1e-12 && x - 1e-12 <= iv.hi_f64());
        prop_assert!(iv.hi_f64() - iv.lo_f64() < 1e-20);
    }

    #[test]
    fn poly_division_identity(a in prop::collection::vec(-20i64..=20, 1..9),
                              b in prop::collection::vec(-20i64..=20, 1..5)) {
        let a = IntPoly::from_i64s(&a).to_rational();
        let b = IntPoly::from_i64s(&b).to_rational();
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b);
        prop_assert_eq!(q.mul(&b).add(&r), a);
        prop_assert!(r.is_zero() || r.degree() < b.degree());
    }

    #[test]
    fn resultant_is_multiplicative(f in monic_poly(3, 4), g in monic_poly(3, 4), h in monic_poly(2, 4)) {
        let (f, g, h) = (f.as_poly().to_rational(), g.as_poly().to_rational(), h.as_poly().to_rational());
        let lhs = f.mul(&g).resultant(&h);
        let rhs = f.resultant(&h) * g.resultant(&h);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn delta_routes_agree(f in monic_poly(5, 5), n in 1u64..25) {
        prop_assume!(cyclotomic_index(&f).is_none());
        prop_assert_eq!(delta_n(&f, n), delta_n_resultant(&f, n));
    }

    #[test]
    fn delta_is_multiplicative(f in monic_poly(3, 4), g in monic_poly(3, 4), n in 1u64..16) {
        let fg = f.mul(&g);
        prop_assert_eq!(delta_n(&fg, n), delta_n(&f, n) * delta_n(&g, n));
    }

    #[test]
    fn toral_counts_are_realizable(f in monic_poly(4, 4)) {
        prop_assume!(cyclotomic_index(&f).is_none());
        let seq = toral_fix_sequence(&f, 24).unwrap();
        prop_assert!(realizability_check(&seq).unwrap().realizable);
        for n in 1..=24usize {
            for d in divisors(n as u64) {
                prop_assert!(seq.get(n).is_multiple_of(seq.get(d as usize)));
            }
        }
    }

    #[test]
    fn squarefree_decomposition_reassembles(f in monic_poly(2, 3), g in monic_poly(2, 3)) {
        // f g^2 has a repeated factor whenever g is non-constant.
        let (f, g) = (f.as_poly().to_rational(), g.as_poly().to_rational());
        let p = f.mul(&g).mul(&g);
        let parts = p.squarefree_decomposition();
        let rebuilt = parts.iter().fold(RatPoly::one(), |acc, (k, q)| {
            (0..*k).fold(acc, |a, _| a.mul(q))
        });
        prop_assert_eq!(rebuilt, p.monic());
    }
}
