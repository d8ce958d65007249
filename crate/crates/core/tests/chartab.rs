use gl_distinction::chartab::{cached_table, parse_table_csv, CharTable, ClassFunction, Cyclotomic};
use gl_distinction::glgroup::{ClassList, SubgroupKind};
use gl_distinction::mchar::regular_orbits;
use proptest::prelude::*;

const BUDGET: u64 = 1_000_000;

fn complex(c: &Cyclotomic) -> (f64, f64) {
    c.to_f64_pair()
}

/// Row and column orthogonality in floating point, independent of the
/// exact arithmetic used to build the table.
fn numeric_orthogonality(t: &CharTable) {
    let sizes: Vec<f64> = t.classes().classes().iter().map(|c| c.size as f64).collect();
    let order = t.order() as f64;
    let vals: Vec<Vec<(f64, f64)>> = t.characters().iter().map(|c| c.values.iter().map(complex).collect()).collect();
    for (i, a) in vals.iter().enumerate() {
        for (j, b) in vals.iter().enumerate() {
            let (mut re, mut im) = (0.0, 0.0);
            for k in 0..sizes.len() {
                re += sizes[k] * (a[k].0 * b[k].0 + a[k].1 * b[k].1);
                im += sizes[k] * (a[k].1 * b[k].0 - a[k].0 * b[k].1);
            }
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((re / order - want).abs() < 1e-6 && (im / order).abs() < 1e-6, "rows {i},{j}");
        }
    }
    for k in 0..sizes.len() {
        for l in 0..sizes.len() {
            let (mut re, mut im) = (0.0, 0.0);
            for row in &vals {
                re += row[k].0 * row[l].0 + row[k].1 * row[l].1;
                im += row[k].1 * row[l].0 - row[k].0 * row[l].1;
            }
            let want = if k == l { order / sizes[k] } else { 0.0 };
            assert!((re - want).abs() < 1e-6 * order && im.abs() < 1e-6 * order, "columns {k},{l}");
        }
    }
}

#[test]
fn gl2_f3() {
    let t = cached_table(2, 3).unwrap();
    let mut dims = t.dims().to_vec();
    dims.sort();
    assert_eq!(dims, vec![1, 1, 2, 2, 2, 3, 3, 4]);
    assert_eq!(dims.iter().map(|d| d * d).sum::<u64>(), 48);
    numeric_orthogonality(&t);
    let cusp = t.cuspidal_indices().unwrap();
    assert_eq!(cusp.len(), 3);
    assert!(cusp.iter().all(|&c| t.dims()[c] == 2));
    let assignment = t.green_assignment().unwrap();
    assert_eq!(assignment.len(), regular_orbits(3, 2).unwrap().len());
    let mut matched: Vec<usize> = assignment.iter().map(|&(_, c)| c).collect();
    matched.sort();
    assert_eq!(matched, cusp);
}

#[test]
fn abelian_tables() {
    let t = cached_table(1, 4).unwrap();
    assert_eq!(t.len(), 3);
    for chi in t.characters() {
        for v in &chi.values {
            let (re, im) = complex(v);
            assert!((re * re + im * im - 1.0).abs() < 1e-9);
            assert_eq!(v.mul(v).mul(v), Cyclotomic::from_int(1));
        }
    }
    let t = cached_table(1, 2).unwrap();
    assert_eq!(t.len(), 1);
    assert_eq!(t.character(0).values, vec![Cyclotomic::from_int(1)]);
}

#[test]
fn larger_tables() {
    // (n, q, irreducibles, cuspidals)
    for (n, q, irr, cusp) in [(2, 4, 15, 6), (2, 5, 24, 10), (3, 2, 6, 2), (3, 3, 24, 8), (2, 9, 80, 36), (4, 2, 14, 3)] {
        let t = cached_table(n, q).unwrap();
        assert_eq!(t.len(), irr, "GL_{n}(F_{q})");
        assert_eq!(t.len(), ClassList::build(t.group()).unwrap().len());
        assert_eq!(t.dims().iter().map(|d| d * d).sum::<u64>(), t.order());
        assert_eq!(t.cuspidal_indices().unwrap().len(), cusp);
        assert_eq!(regular_orbits(q as u128, n as u32).unwrap().len(), cusp);
        assert_eq!(t.green_assignment().unwrap().len(), cusp);
        let reg = t.regular_character();
        let mult = t.decompose(&reg).unwrap();
        for (m, &d) in mult.iter().zip(t.dims()) {
            assert_eq!(m.to_integer(), Some(d as i128));
        }
        if t.order() < 20_000 {
            numeric_orthogonality(&t);
        }
    }
}

#[test]
fn cuspidal_dimensions() {
    // Cuspidals of GL_n(F_q) have dimension (q-1)(q^2-1)...(q^{n-1}-1).
    for (n, q) in [(2u32, 3u64), (2, 9), (3, 3), (3, 4), (4, 2)] {
        let t = cached_table(n as usize, q).unwrap();
        let want: u64 = (1..n).map(|i| q.pow(i) - 1).product();
        for c in t.cuspidal_indices().unwrap() {
            assert_eq!(t.dims()[c], want, "GL_{n}(F_{q})");
        }
    }
}

#[test]
fn green_values_on_the_elliptic_torus() {
    // On a generator theta of F_{q^n}^x embedded in GL_n, the cuspidal of
    // orbit a takes the value (-1)^{n-1} sum_i zeta^{a q^i}.
    for (n, q) in [(2usize, 3u64), (2, 5), (3, 2), (3, 3)] {
        let t = cached_table(n, q).unwrap();
        let g = t.group();
        let model = gl_distinction::glgroup::EllipticModel::new(g).unwrap();
        let m = (q as u128).pow(n as u32) - 1;
        let theta = g.class_of(&model.companion).unwrap();
        let idx = t.classes().index_of_key(&theta).unwrap();
        for (a, chi) in t.green_assignment().unwrap() {
            let (mut re, mut im) = (0.0, 0.0);
            let mut e = a;
            for _ in 0..n {
                let ang = std::f64::consts::TAU * e as f64 / m as f64;
                re += ang.cos();
                im += ang.sin();
                e = e * q as u128 % m;
            }
            let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
            let (vr, vi) = complex(&t.character(chi).values[idx]);
            assert!((vr - sign * re).abs() < 1e-9 && (vi - sign * im).abs() < 1e-9, "GL_{n}(F_{q}) orbit {a}");
        }
    }
}

#[test]
fn csv_round_trip() {
    let t = cached_table(2, 3).unwrap();
    let parsed = parse_table_csv(&format!("# comment\n{}", t.to_csv())).unwrap();
    assert_eq!(parsed.order as u64, t.exponent());
    assert_eq!(parsed.class_keys.len(), 8);
    assert_eq!(parsed.class_sizes.iter().sum::<u64>(), 48);
    assert_eq!(parsed.rows.len(), 8);
    for (row, chi) in parsed.rows.iter().zip(t.characters()) {
        assert_eq!(row.1, chi.values);
    }
    assert!(parse_table_csv("order,0\n").is_err());
    assert!(parse_table_csv("").is_err());
}

#[test]
fn budget_and_bad_input() {
    assert!(CharTable::build(3, 4, 1000).is_err());
    assert!(CharTable::build(2, 6, 1_000_000).is_err());
    let t = cached_table(2, 3).unwrap();
    let other = cached_table(2, 4).unwrap();
    assert!(t.inner_product(&t.character(0).clone(), other.character(0)).is_err());
}

/// Frobenius reciprocity by direct sums over H, against both induction
/// routes.
fn reciprocity(t: &CharTable, kind: SubgroupKind, chi_h: usize) {
    let g = t.group();
    let h = g.build_subgroup(kind, BUDGET).unwrap();
    // a linear character of H: det^k composed with a root of unity
    let f = g.field().clone();
    let qm1 = (g.q() - 1) as u32;
    let k = chi_h as i64;
    let lin = |m: &gl_distinction::glgroup::Mat| {
        let d = f.log(g.det(m)).unwrap() as i64;
        Cyclotomic::root(qm1, d * k)
    };
    let fast = t.induce(&h.elements, lin).unwrap();
    let slow = t.induce_brute(&h.elements, lin).unwrap();
    assert_eq!(fast.values, slow.values);
    for chi in t.characters() {
        let lhs = t.inner_product(&fast, chi).unwrap();
        let rhs = t.restricted_inner(&h.elements, lin, chi);
        assert_eq!(lhs, rhs);
        let (re, im) = complex(&lhs);
        assert!(im.abs() < 1e-9 && (re - re.round()).abs() < 1e-9 && re > -1e-9);
    }
    let total: i128 = t.decompose(&fast).unwrap().iter().zip(t.dims()).map(|(m, &d)| m.to_integer().unwrap() * d as i128).sum();
    assert_eq!(total as u64 * h.order(), t.order());
}

#[test]
fn frobenius_reciprocity_on_standard_subgroups() {
    let t = cached_table(2, 5).unwrap();
    for kind in [SubgroupKind::Mirabolic, SubgroupKind::DiagonalTorus, SubgroupKind::UnipotentUpper, SubgroupKind::EllipticTorus] {
        for k in 0..4 {
            reciprocity(&t, kind.clone(), k);
        }
    }
    let t = cached_table(3, 2).unwrap();
    reciprocity(&t, SubgroupKind::Levi { r: 2, s: 1 }, 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn class_functions_respect_conjugacy(seed in any::<u64>(), which in 0usize..3) {
        use rand::SeedableRng;
        let (n, q) = [(2, 9), (3, 3), (2, 5)][which];
        let t = cached_table(n, q).unwrap();
        let g = t.group();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let x = g.random_element(&mut rng);
        let h = g.random_element(&mut rng);
        let y = g.conjugate(&x, &h).unwrap();
        prop_assert_eq!(t.classes().class_index(&x), t.classes().class_index(&y));
        // chi(x^{-1}) is the conjugate of chi(x)
        let xi = g.inv(&x).unwrap();
        let (cx, cxi) = (t.classes().class_index(&x), t.classes().class_index(&xi));
        let chi: &ClassFunction = t.character((seed % t.len() as u64) as usize);
        prop_assert_eq!(chi.values[cxi].clone(), chi.values[cx].conj());
    }
}
