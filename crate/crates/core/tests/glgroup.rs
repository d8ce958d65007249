use std::collections::{BTreeMap, HashSet};

use gl_distinction::glgroup::{gl_order, w_perm, ClassList, GeneralLinear, Mat, SubgroupKind};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const BUDGET: u64 = 1_000_000;

/// Orbits of conjugation by every element, as sorted sizes, with class_of
/// checked to be constant on each orbit and distinct across orbits.
fn conjugation_orbits(g: &GeneralLinear) -> Vec<u64> {
    let elements = g.elements(BUDGET).unwrap();
    let inverses: Vec<Mat> = elements.iter().map(|x| g.inv(x).unwrap()).collect();
    let mut seen = HashSet::new();
    let mut keys = HashSet::new();
    let mut sizes = Vec::new();
    for x in &elements {
        if seen.contains(&g.encode(x)) {
            continue;
        }
        let key = g.class_of(x).unwrap();
        assert!(keys.insert(key.clone()), "two orbits share a class key");
        let mut size = 0;
        for (h, hi) in elements.iter().zip(&inverses) {
            let y = g.mul(&g.mul(h, x), hi);
            if seen.insert(g.encode(&y)) {
                assert_eq!(g.class_of(&y).unwrap(), key);
                size += 1;
            }
        }
        sizes.push(size);
    }
    sizes.sort();
    sizes
}

#[test]
fn class_counts() {
    assert_eq!(ClassList::build(&GeneralLinear::new(2, 3).unwrap()).unwrap().len(), 8);
    assert_eq!(ClassList::build(&GeneralLinear::new(2, 9).unwrap()).unwrap().len(), 80);
    for q in [2u64, 3, 4, 5, 7] {
        let c = ClassList::build(&GeneralLinear::new(1, q).unwrap()).unwrap();
        assert_eq!(c.len() as u64, q - 1);
        assert!(c.classes().iter().all(|k| k.size == 1));
    }
    for q in [2u64, 3, 4] {
        assert_eq!(ClassList::build(&GeneralLinear::new(3, q).unwrap()).unwrap().len() as u64, q * q * q - q);
    }
    assert_eq!(ClassList::build(&GeneralLinear::new(4, 2).unwrap()).unwrap().len(), 14);
}

#[test]
fn classes_match_brute_force_orbits() {
    for (n, q) in [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2)] {
        let g = GeneralLinear::new(n, q).unwrap();
        let list = ClassList::build(&g).unwrap();
        let mut sizes: Vec<u64> = list.classes().iter().map(|c| c.size).collect();
        sizes.sort();
        assert_eq!(sizes, conjugation_orbits(&g), "GL_{n}(F_{q})");
    }
}

#[test]
fn class_data_is_consistent() {
    for (n, q) in [(2, 9), (3, 3), (3, 4), (4, 2)] {
        let g = GeneralLinear::new(n, q).unwrap();
        let list = ClassList::build(&g).unwrap();
        let mut total = 0;
        for (i, c) in list.classes().iter().enumerate() {
            assert_eq!(c.size * c.centralizer, g.order());
            assert_eq!(g.class_of(&c.representative).unwrap(), c.key);
            assert_eq!(g.element_order(&c.representative), c.element_order);
            let inv = g.inv(&c.representative).unwrap();
            assert_eq!(list.classes()[list.inverse_class(i)].key, g.class_of(&inv).unwrap());
            total += c.size;
        }
        assert_eq!(total, g.order());
        assert_eq!(g.order(), gl_order(n, q).unwrap());
    }
}

#[test]
fn subgroup_orders() {
    let g23 = GeneralLinear::new(2, 3).unwrap();
    assert_eq!(g23.build_subgroup(SubgroupKind::Mirabolic, BUDGET).unwrap().order(), 6);
    let g34 = GeneralLinear::new(3, 4).unwrap();
    let rf = g34.build_subgroup(SubgroupKind::RationalForm { sub_degree: 1 }, BUDGET).unwrap();
    assert_eq!(rf.order(), 168);
    assert!(rf.is_closed(&g34));
    let g29 = GeneralLinear::new(2, 9).unwrap();
    let h = g29.build_subgroup(SubgroupKind::H { r: 1, s: 1 }, BUDGET).unwrap();
    let t = g29.build_subgroup(SubgroupKind::DiagonalTorus, BUDGET).unwrap();
    let hs: HashSet<Mat> = h.elements.iter().copied().collect();
    assert_eq!(hs, t.elements.iter().copied().collect());
    for (n, q) in [(2, 3), (3, 2), (3, 3), (4, 2)] {
        let g = GeneralLinear::new(n, q).unwrap();
        let mut kinds = vec![
            SubgroupKind::Mirabolic,
            SubgroupKind::UnipotentUpper,
            SubgroupKind::DiagonalTorus,
            SubgroupKind::EllipticTorus,
        ];
        for r in n.div_ceil(2)..n {
            kinds.push(SubgroupKind::Levi { r, s: n - r });
            kinds.push(SubgroupKind::H { r, s: n - r });
        }
        for kind in kinds {
            let sg = g.build_subgroup(kind.clone(), BUDGET).unwrap();
            assert_eq!(sg.elements.len() as u64, g.subgroup_order(&kind).unwrap());
            assert!(sg.is_closed(&g), "{kind:?} in GL_{n}(F_{q})");
        }
    }
}

#[test]
fn w_perm_examples() {
    assert_eq!(w_perm(2, 1).unwrap().0, vec![0, 1, 2]);
    assert_eq!(w_perm(1, 1).unwrap().0, vec![0, 1]);
    assert_eq!(w_perm(2, 2).unwrap().0, vec![0, 2, 1, 3]);
    assert!(w_perm(1, 2).is_err());
    let (_, w) = w_perm(2, 2).unwrap();
    let g = GeneralLinear::new(4, 2).unwrap();
    assert_eq!(g.mul(&w, &w), g.identity());
}

#[test]
fn budget_is_enforced() {
    let g = GeneralLinear::new(3, 4).unwrap();
    assert!(g.elements(1000).is_err());
    assert!(g.build_subgroup(SubgroupKind::RationalForm { sub_degree: 1 }, 100).is_err());
    assert!(GeneralLinear::new(5, 2).is_err());
}

#[test]
fn power_map_entries_are_class_indices_of_powers() {
    let g = GeneralLinear::new(2, 5).unwrap();
    let list = ClassList::build(&g).unwrap();
    let e = list.exponent();
    for c in list.classes() {
        assert_eq!(g.pow(&c.representative, e), g.identity());
    }
    let pm = list.power_map();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let x = g.random_element(&mut rng);
        let i = list.class_index(&x);
        let ord = list.classes()[i].element_order;
        assert_eq!(pm[i].len() as u64, ord);
        for k in 0..2 * ord {
            assert_eq!(pm[i][(k % ord) as usize], list.class_index(&g.pow(&x, k)), "power {k}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn class_of_is_conjugation_invariant(seed in any::<u64>(), which in 0usize..5) {
        let (n, q) = [(2, 9), (3, 4), (3, 5), (4, 3), (4, 2)][which];
        let g = GeneralLinear::new(n, q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = g.random_element(&mut rng);
        let h = g.random_element(&mut rng);
        let y = g.conjugate(&x, &h).unwrap();
        prop_assert_eq!(g.class_of(&x).unwrap(), g.class_of(&y).unwrap());
        prop_assert_eq!(g.charpoly(&x), g.charpoly(&y));
        prop_assert_eq!(g.det(&x), g.det(&y));
    }
}

#[test]
fn class_keys_are_sorted_and_stable() {
    let g = GeneralLinear::new(2, 3).unwrap();
    let a = ClassList::build(&g).unwrap();
    let b = ClassList::build(&g).unwrap();
    let ka: Vec<String> = a.classes().iter().map(|c| c.key.to_string()).collect();
    let kb: Vec<String> = b.classes().iter().map(|c| c.key.to_string()).collect();
    assert_eq!(ka, kb);
    let by_order: BTreeMap<u64, usize> = a.classes().iter().fold(BTreeMap::new(), |mut m, c| {
        *m.entry(c.element_order).or_default() += 1;
        m
    });
    // GL_2(F_3): orders 1, 2 (two classes), 3, 4, 6, 8 (two classes)
    assert_eq!(by_order, BTreeMap::from([(1, 1), (2, 2), (3, 1), (4, 1), (6, 1), (8, 2)]));
}
