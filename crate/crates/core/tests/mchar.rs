use std::collections::BTreeSet;

use gl_distinction::ffield::field_of_size;
use gl_distinction::mchar::{
    count_sigma_selfdual_supercuspidals, lift_sigma_selfdual, regular_orbits, sigma_selfdual_regular_orbits, MultChar,
};
use proptest::prelude::*;

fn orbit(a: u128, q: u128, n: u32, m: u128) -> BTreeSet<u128> {
    let mut out = BTreeSet::new();
    let mut x = a % m;
    for _ in 0..n {
        out.insert(x);
        x = x * q % m;
    }
    out
}

/// Galois twist by `x -> x^q0` lands in the orbit of the inverse.
fn sigma_selfdual_oracle(a: u128, q0: u128, n: u32) -> bool {
    let q = q0 * q0;
    let m = q.pow(n) - 1;
    orbit((m - a % m) % m, q, n, m).contains(&(a * q0 % m))
}

#[test]
fn regularity_examples() {
    assert!(MultChar::new(4, 3, 7).unwrap().is_regular());
    assert!(!MultChar::new(5, 2, 0).unwrap().is_regular());
    assert!(!MultChar::new(4, 3, 21).unwrap().is_regular());
}

#[test]
fn orbit_examples() {
    let c = MultChar::new(4, 3, 49).unwrap();
    assert_eq!(c.galois_orbit(), vec![7, 28, 49]);
    assert_eq!(c.orbit_rep(), 7);
    let c = MultChar::new(3, 2, 2).unwrap();
    assert_eq!(c.galois_orbit(), vec![2, 6]);
}

#[test]
fn selfduality_examples() {
    assert!(MultChar::new(4, 3, 7).unwrap().is_sigma_selfdual(2).unwrap());
    assert!(!MultChar::new(4, 3, 1).unwrap().is_sigma_selfdual(2).unwrap());
    assert!(MultChar::new(3, 2, 2).unwrap().is_selfdual());
    assert!(!MultChar::new(3, 2, 1).unwrap().is_selfdual());
    assert!(MultChar::new(9, 2, 8).unwrap().is_selfdual());
    assert!(MultChar::new(4, 3, 7).unwrap().is_sigma_selfdual(3).is_err());
}

#[test]
fn norm_examples() {
    assert!(MultChar::new(4, 3, 21).unwrap().factors_through_norm(1).unwrap());
    assert!(!MultChar::new(4, 3, 7).unwrap().factors_through_norm(1).unwrap());
    assert!(MultChar::new(4, 3, 7).unwrap().factors_through_norm(2).is_err());
}

#[test]
fn reduction_examples() {
    let c = MultChar::new(4, 3, 7).unwrap();
    let r3 = c.reduce_mod_ell(3).unwrap();
    assert_eq!((r3.exp, r3.modulus), (0, 7));
    assert!(!c.reduction_is_supercuspidal(3).unwrap());
    let r7 = c.reduce_mod_ell(7).unwrap();
    assert_eq!((r7.exp, r7.modulus), (7, 9));
    assert_eq!(r7.galois_orbit(), vec![1, 4, 7]);
    assert!(c.reduction_is_supercuspidal(7).unwrap());
    assert!(c.reduce_mod_ell(2).is_err());
    assert!(c.reduce_mod_ell(4).is_err());
}

#[test]
fn lifting_examples() {
    let l = lift_sigma_selfdual(1, 2, 3, 7).unwrap();
    assert_eq!((l.exp, l.modulus), (28, 63));
    for r in 0..7 {
        assert!(lift_sigma_selfdual(r, 2, 3, 3).is_err());
    }
}

#[test]
fn counts_match_direct_enumeration() {
    assert_eq!(count_sigma_selfdual_supercuspidals(2, 3).unwrap(), 2);
    assert_eq!(count_sigma_selfdual_supercuspidals(2, 2).unwrap(), 0);
    assert_eq!(count_sigma_selfdual_supercuspidals(2, 1).unwrap(), 3);
    assert_eq!(sigma_selfdual_regular_orbits(2, 3).unwrap(), vec![7, 14]);
    for (q0, n) in [(2u128, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3), (5, 2), (4, 3)] {
        let q = q0 * q0;
        let m = q.pow(n) - 1;
        let mut reps = BTreeSet::new();
        for a in 0..m {
            let o = orbit(a, q, n, m);
            if o.len() == n as usize && sigma_selfdual_oracle(a, q0, n) {
                reps.insert(*o.iter().next().unwrap());
            }
        }
        assert_eq!(count_sigma_selfdual_supercuspidals(q0, n).unwrap(), reps.len(), "q0={q0} n={n}");
        if n % 2 == 0 {
            assert!(reps.is_empty());
        }
    }
}

#[test]
fn regular_orbit_count_is_the_necklace_count() {
    // Number of regular orbits: (1/n) sum_{d | n} mu(d) (q^{n/d} - 1), q^n - 1 for n = 1.
    let mobius = |d: u32| match d {
        1 => 1i128,
        2 | 3 | 5 => -1,
        4 => 0,
        6 => 1,
        _ => unreachable!(),
    };
    for (q, n) in [(2u128, 3u32), (3, 2), (4, 3), (9, 2), (2, 4), (2, 6), (3, 4)] {
        let total: i128 = (1..=n).filter(|d| n % d == 0).map(|d| mobius(d) * (q.pow(n / d) as i128 - 1)).sum();
        assert_eq!(regular_orbits(q, n).unwrap().len() as i128, total / n as i128, "q={q} n={n}");
    }
}

#[test]
fn norm_factorization_matches_field_kernel() {
    // q = 4, n = 3: the character factors through the norm to F_4 iff it
    // kills every element of F_64 of norm 1.
    let (small, big) = (field_of_size(4).unwrap(), field_of_size(64).unwrap());
    let kernel: Vec<u32> = (1..64).filter(|&x| big.norm_to(&small, x).unwrap() == 1).map(|x| big.log(x).unwrap()).collect();
    assert_eq!(kernel.len(), 21);
    for a in 0..63u128 {
        let direct = kernel.iter().all(|&j| (a * j as u128).is_multiple_of(63));
        assert_eq!(MultChar::new(4, 3, a).unwrap().factors_through_norm(1).unwrap(), direct, "a={a}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sigma_selfduality_matches_oracle(q0 in prop::sample::select(vec![2u128, 3, 4, 5, 7]), n in 1u32..4, a in 0u128..1_000_000) {
        let q = q0 * q0;
        let c = MultChar::new(q, n, a).unwrap();
        prop_assert_eq!(c.is_sigma_selfdual(q0).unwrap(), sigma_selfdual_oracle(c.exp, q0, n));
        if c.is_regular() && c.is_sigma_selfdual(q0).unwrap() {
            prop_assert!(n % 2 == 1);
            prop_assert!(c.is_trivial_on_norm_subfield(q0).unwrap());
        }
    }

    #[test]
    fn regularity_iff_no_norm_factorization(q in prop::sample::select(vec![2u128, 3, 4, 5, 9]), n in 1u32..5, a in 0u128..1_000_000) {
        let c = MultChar::new(q, n, a).unwrap();
        let through = (1..n).filter(|d| n % d == 0).any(|d| c.factors_through_norm(d).unwrap());
        prop_assert_eq!(c.is_regular(), !through);
        let m = c.modulus;
        prop_assert_eq!(c.is_regular(), orbit(c.exp, q, n, m).len() == n as usize);
    }

    #[test]
    fn orbit_properties_are_orbit_invariant(q in prop::sample::select(vec![2u128, 3, 4, 9]), n in 1u32..4, a in 0u128..100_000, i in 0u32..4) {
        let c = MultChar::new(q, n, a).unwrap();
        let t = MultChar::new(q, n, a * q.pow(i)).unwrap();
        prop_assert_eq!(c.orbit_rep(), t.orbit_rep());
        prop_assert_eq!(c.is_regular(), t.is_regular());
        prop_assert_eq!(c.is_selfdual(), t.is_selfdual());
    }

    #[test]
    fn reduction_commutes_with_frobenius(a in 0u128..63, ell in prop::sample::select(vec![3u128, 7])) {
        let c = MultChar::new(4, 3, a).unwrap();
        let t = MultChar::new(4, 3, a * 4).unwrap();
        let (rc, rt) = (c.reduce_mod_ell(ell).unwrap(), t.reduce_mod_ell(ell).unwrap());
        prop_assert_eq!(rc.orbit_rep(), rt.orbit_rep());
    }
}
