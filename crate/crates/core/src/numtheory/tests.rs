use num_bigint::BigUint;
use proptest::prelude::*;

use super::*;

fn big(v: u128) -> BigUint {
    BigUint::from(v)
}

fn gcd128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn prime_powers_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&q| prime_power(q).is_some()).collect()
}

/// Distinct prime divisors of x by trial division.
fn trial_primes(mut x: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= x {
        if x.is_multiple_of(d) {
            out.push(d);
            while x.is_multiple_of(d) {
                x /= d;
            }
        }
        d += 1;
    }
    if x > 1 {
        out.push(x);
    }
    out
}

#[test]
fn q_number_examples() {
    assert_eq!(q_number(5, 3), big(121));
    for q in 2..=16u64 {
        assert_eq!(q_number(1, q), big(1));
        for n in 1..=20u32 {
            assert_eq!(q_number(n, q) * BigUint::from(q - 1), q_power_minus_one(q, n));
        }
    }
}

#[test]
fn prime_power_split() {
    assert_eq!(prime_power(2), Some((2, 1)));
    assert_eq!(prime_power(9), Some((3, 2)));
    assert_eq!(prime_power(64), Some((2, 6)));
    assert_eq!(prime_power(49), Some((7, 2)));
    assert_eq!(prime_power(12), None);
    assert_eq!(prime_power(1), None);
    assert_eq!(prime_powers_up_to(16), vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16]);
}

#[test]
fn gcd_identity_examples() {
    let r = gcd_identities(5, 11).unwrap();
    assert_eq!(r.checks[3].lhs, vec![big(5)]);
    assert_eq!(r.checks[3].rhs, big(5));
    let r = gcd_identities(3, 4).unwrap();
    assert_eq!(r.checks[2].lhs, vec![big(3)]);
    assert!(r.checks[1].applies && !r.checks[0].applies);
    let r = gcd_identities(7, 2).unwrap();
    assert!(r.checks[0].applies);
    assert_eq!(r.checks[0].lhs, vec![big(1), big(1)]);
    assert!(gcd_identities(9, 2).is_err());
    assert!(gcd_identities(2, 5).is_err());
}

#[test]
fn gcd_identities_exhaustive() {
    for n in [3u64, 5, 7, 11, 13] {
        for q in prime_powers_up_to(64) {
            let r = gcd_identities(n, q).unwrap();
            assert!(r.all_hold(), "n = {n}, q = {q}: {r:?}");
            // recompute with machine integers
            let qn: u128 = (0..n).map(|i| (q as u128).pow(i as u32)).sum();
            let nq = gcd128(n as u128, q as u128 - 1);
            assert_eq!(r.checks[2].lhs[0], big(gcd128(q as u128 - 1, qn)));
            assert_eq!(r.checks[3].lhs[0], big(gcd128(n as u128 * (q as u128 - 1), qn)));
            assert_eq!(r.checks[3].rhs, big(nq));
            assert_eq!(r.checks[0].applies, nq == 1);
            assert_eq!(r.checks[1].applies, nq == n as u128);
        }
    }
}

#[test]
fn subfield_gcd_holds() {
    for n in [2u64, 3, 5, 7] {
        for q0 in prime_powers_up_to(16) {
            for d in 1..=6 {
                let (l, r) = subfield_gcd(n, q0, d);
                assert_eq!(l, r);
            }
        }
    }
}

#[test]
fn ppd_examples() {
    assert_eq!(primitive_prime_divisors(2, 4).unwrap(), vec![big(5)]);
    assert!(primitive_prime_divisors(2, 6).unwrap().is_empty());
    assert_eq!(primitive_prime_divisors(3, 5).unwrap(), vec![big(11)]);
    assert!(ppd_element_check(&big(7), 2, 3).unwrap());
    assert!(!ppd_element_check(&big(1), 2, 3).unwrap());
    for q in prime_powers_up_to(32) {
        for n in 2..=6 {
            assert!(!ppd_element_check(&BigUint::from(q - 1), q, n).unwrap());
        }
    }
}

#[test]
fn ppd_match_trial_division() {
    for q in prime_powers_up_to(25) {
        for n in 1..=8u32 {
            let x = (q as u128).pow(n) - 1;
            if x > 1 << 40 {
                continue;
            }
            let want: Vec<BigUint> = trial_primes(x)
                .into_iter()
                .filter(|&l| (1..n).all(|e| ((q as u128).pow(e) - 1) % l != 0))
                .map(big)
                .collect();
            assert_eq!(primitive_prime_divisors(q, n).unwrap(), want, "q = {q}, n = {n}");
        }
    }
}

#[test]
fn factorization_of_large_values() {
    let x = q_power_minus_one(7, 40);
    let f = factorize(&x).unwrap();
    let back = f
        .iter()
        .fold(BigUint::from(1u32), |acc, (p, &e)| acc * Pow::pow(p.clone(), e as u32));
    assert_eq!(back, x);
    let huge = Pow::pow(BigUint::from(2u32), 300u32);
    assert!(matches!(factorize(&huge), Err(Error::BoundExceeded { .. })));
}

#[test]
fn xn_eps_examples() {
    assert!(xn_eps_irreducible(2, 1, 3));
    assert!(!xn_eps_irreducible(2, 1, 5));
    assert!(!xn_eps_irreducible(4, 1, 3));
}

#[test]
fn xn_eps_closed_form_matches_factoring() {
    for q in prime_powers_up_to(16) {
        for n in 2..=8 {
            for eps in [1i8, -1] {
                assert_eq!(
                    xn_eps_irreducible(n, eps, q),
                    xn_eps_irreducible_direct(n, eps, q).unwrap(),
                    "n = {n}, eps = {eps}, q = {q}"
                );
            }
        }
    }
}

proptest! {
    #[test]
    fn q_number_telescopes(n in 1u32..40, q in 2u64..1000) {
        prop_assert_eq!(q_number(n, q) * BigUint::from(q - 1), q_power_minus_one(q, n));
    }

    #[test]
    fn ppds_have_order_n(q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 11, 13]), n in 1u32..12) {
        for l in primitive_prime_divisors(q, n).unwrap() {
            let l = l.to_u64().unwrap();
            let ord = (1..=n as u64).find(|&e| crate::gfq::mod_pow_u64(q % l, e, l) == 1);
            prop_assert_eq!(ord, Some(n as u64));
        }
    }
}
