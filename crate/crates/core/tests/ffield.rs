use gl_distinction::ffield::{build_field, field_of_size};
use proptest::prelude::*;

/// Schoolbook product of two coordinate vectors modulo a monic `f`
/// (constant term first).
fn mul_mod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let k = f.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for d in (k..prod.len()).rev() {
        let c = prod[d];
        if c != 0 {
            for i in 0..=k {
                prod[d - k + i] = (prod[d - k + i] + p * p - c * f[i]) % p;
            }
        }
    }
    prod.truncate(k);
    prod
}

fn pow_poly(base: &[u32], e: u32, f: &[u32], p: u32) -> Vec<u32> {
    let k = f.len() - 1;
    let mut acc: Vec<u32> = (0..k).map(|i| u32::from(i == 0)).collect();
    for _ in 0..e {
        acc = mul_mod(&acc, base, f, p);
    }
    acc
}

/// First monic degree-k polynomial, leading digits compared first, whose
/// root generates the multiplicative group and whose root raised to
/// `(p^k-1)/(p^d-1)` is a root of the chosen degree-d polynomial for every
/// proper divisor d.
fn least_primitive(p: u32, k: u32) -> Vec<u32> {
    let q = p.pow(k);
    let subs: Vec<(u32, Vec<u32>)> = (1..k).filter(|d| k.is_multiple_of(*d)).map(|d| (d, least_primitive(p, d))).collect();
    for code in 0..q {
        let mut f: Vec<u32> = (0..k).map(|i| (code / p.pow(i)) % p).collect();
        f.push(1);
        if f[0] == 0 {
            continue;
        }
        let root: Vec<u32> = if k == 1 { vec![(p - f[0]) % p] } else { (0..k).map(|i| u32::from(i == 1)).collect() };
        let one: Vec<u32> = (0..k).map(|i| u32::from(i == 0)).collect();
        let mut acc = root.clone();
        let mut ord = 1;
        while acc != one {
            acc = mul_mod(&acc, &root, &f, p);
            ord += 1;
        }
        if ord != q - 1 {
            continue;
        }
        let compatible = subs.iter().all(|(d, g)| {
            let y = pow_poly(&root, (q - 1) / (p.pow(*d) - 1), &f, p);
            let mut val = vec![0u32; k as usize];
            for &c in g.iter().rev() {
                val = mul_mod(&val, &y, &f, p);
                val[0] = (val[0] + c) % p;
            }
            val.iter().all(|&c| c == 0)
        });
        if compatible {
            return f;
        }
    }
    unreachable!()
}

#[test]
fn small_field_examples() {
    let f3 = build_field(3, 1).unwrap();
    assert_eq!(f3.size(), 3);
    assert_eq!(f3.generator(), 2);
    let f4 = build_field(2, 2).unwrap();
    assert_eq!(f4.unit_order(), 3);
    let f9 = build_field(3, 2).unwrap();
    assert_eq!(f9.unit_order(), 8);
    let g = f9.generator();
    assert!((1..8).all(|e| f9.pow(g, e) != 1));
}

#[test]
fn defining_polys_are_least_primitive() {
    for (p, k) in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 2), (2, 6)] {
        let f = build_field(p, k).unwrap();
        assert_eq!(f.defining_poly(), least_primitive(p, k).as_slice(), "F_{p}^{k}");
    }
}

#[test]
fn multiplication_matches_polynomial_model() {
    for q in [4u64, 8, 9, 16, 25, 27] {
        let f = field_of_size(q).unwrap();
        let poly = f.defining_poly().to_vec();
        for a in f.elements() {
            for b in f.elements() {
                let want = mul_mod(&f.coords(a), &f.coords(b), &poly, f.p());
                assert_eq!(f.coords(f.mul(a, b)), want, "F_{q}: {a}*{b}");
            }
        }
    }
}

#[test]
fn registry_returns_the_same_field() {
    let a = build_field(2, 4).unwrap();
    let b = field_of_size(16).unwrap();
    assert!(std::sync::Arc::ptr_eq(&a, &b));
    assert!(field_of_size(6).is_err());
    assert!(field_of_size(1).is_err());
}

#[test]
fn mixing_fields_is_an_error() {
    let f4 = field_of_size(4).unwrap();
    let f16 = field_of_size(16).unwrap();
    assert!(f4.elem(2).add(&f16.elem(2)).is_err());
    let up = f4.elem(2).embed(&f16).unwrap();
    assert_eq!(up.norm(&f4).unwrap(), f4.elem(2).pow(5));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn embeddings_compose(x in 0u32..4) {
        let (f2, f4, f16) = (field_of_size(2).unwrap(), field_of_size(4).unwrap(), field_of_size(16).unwrap());
        let _ = f2;
        let direct = f16.embed_from(&f4, x).unwrap();
        prop_assert!(f16.lies_in_subfield(direct, 2));
        prop_assert_eq!(f16.pow(direct, 4), f16.embed_from(&f4, f4.pow(x, 4)).unwrap());
    }

    #[test]
    fn embedding_is_a_ring_map(x in 0u32..9, y in 0u32..9) {
        let (f9, f81) = (field_of_size(9).unwrap(), field_of_size(81).unwrap());
        let e = |v| f81.embed_from(&f9, v).unwrap();
        prop_assert_eq!(e(f9.add(x, y)), f81.add(e(x), e(y)));
        prop_assert_eq!(e(f9.mul(x, y)), f81.mul(e(x), e(y)));
    }

    #[test]
    fn norms_are_transitive_and_multiplicative(x in 1u32..729, y in 1u32..729) {
        let (f3, f9, f729) = (field_of_size(3).unwrap(), field_of_size(9).unwrap(), field_of_size(729).unwrap());
        let n = |v| f729.norm_to(&f3, v).unwrap();
        prop_assert_eq!(n(x), f9.norm_to(&f3, f729.norm_to(&f9, x).unwrap()).unwrap());
        prop_assert_eq!(n(f729.mul(x, y)), f3.mul(n(x), n(y)));
        // norm of x is the product of its conjugates
        let mut prod = 1;
        let mut c = x;
        for _ in 0..6 {
            prod = f729.mul(prod, c);
            c = f729.frobenius(c);
        }
        prop_assert_eq!(prod, f729.embed_from(&f3, n(x)).unwrap());
    }

    #[test]
    fn inverse_and_log(x in 1u32..125) {
        let f = field_of_size(125).unwrap();
        let inv = f.inv(x).unwrap();
        prop_assert_eq!(f.mul(x, inv), 1);
        let j = f.log(x).unwrap();
        prop_assert_eq!(f.exp(j as u128), x);
    }
}
