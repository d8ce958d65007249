//! Exact character tables of `GL_n(F_q)` and the character sums built on
//! them: inner products, induction, cuspidality, the Green correspondence
//! for cuspidal characters, and distinction multiplicities.

mod csv;
pub mod cyclotomic;
mod dixon;
mod mirabolic;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

pub use self::csv::{parse_table_csv, ParsedTable};
pub use cyclotomic::{parse_cyclotomic, Cyclotomic};
pub use dixon::dixon_prime;
pub use mirabolic::{gamma_on, mirabolic_hom_dim, LeviCharacter};

use crate::error::{broken, invalid, Error, Result};
use crate::glgroup::{
    ClassList, EllipticModel, GeneralLinear, Mat, SubgroupKind, DEFAULT_GROUP_BUDGET,
    DEFAULT_SUBGROUP_BUDGET,
};
use crate::mchar::{self, MultChar};

/// A function on the conjugacy classes of one `GL_n(F_q)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassFunction {
    pub n: usize,
    pub q: u64,
    pub values: Vec<Cyclotomic>,
}

pub struct CharTable {
    classes: ClassList,
    elements: Vec<Mat>,
    power_map: Vec<Vec<usize>>,
    prime: u64,
    chars: Vec<ClassFunction>,
    dims: Vec<u64>,
    cuspidal: OnceLock<Vec<usize>>,
}

impl std::fmt::Debug for CharTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CharTable({:?}, {} irreducibles)", self.classes.group(), self.chars.len())
    }
}

fn sum_cyc<I: IntoIterator<Item = Cyclotomic>>(order: u32, it: I) -> Cyclotomic {
    it.into_iter().fold(Cyclotomic::zero(order), |acc, v| acc.add(&v))
}

impl CharTable {
    /// Builds the full table of `GL_n(F_q)` and verifies it.
    pub fn build(n: usize, q: u64, budget: u64) -> Result<CharTable> {
        let group = GeneralLinear::new(n, q)?;
        let elements = group.elements(budget)?;
        let classes = ClassList::build(&group)?.with_dense_lookup()?;
        let power_map = classes.power_map();
        let out = dixon::dixon(&classes, &elements, &power_map)?;
        let mut rows: Vec<(u64, ClassFunction)> = out
            .dims
            .into_iter()
            .zip(out.values)
            .map(|(d, values)| (d, ClassFunction { n, q, values }))
            .collect();
        // Trivial character first, then by degree and printed values.
        rows.sort_by_cached_key(|(d, f)| {
            let trivial = f.values.iter().all(|v| *v == Cyclotomic::from_int(1));
            let text: Vec<String> = f.values.iter().map(|v| v.to_string()).collect();
            (!trivial, *d, text)
        });
        let table = CharTable {
            classes,
            elements,
            power_map,
            prime: out.prime,
            dims: rows.iter().map(|(d, _)| *d).collect(),
            chars: rows.into_iter().map(|(_, f)| f).collect(),
            cuspidal: OnceLock::new(),
        };
        table.verify()?;
        Ok(table)
    }

    pub fn group(&self) -> &Arc<GeneralLinear> {
        self.classes.group()
    }
    pub fn classes(&self) -> &ClassList {
        &self.classes
    }
    pub fn elements(&self) -> &[Mat] {
        &self.elements
    }
    pub fn power_map(&self) -> &[Vec<usize>] {
        &self.power_map
    }
    /// Prime used for the modular eigenvector computation.
    pub fn lifting_prime(&self) -> u64 {
        self.prime
    }
    pub fn order(&self) -> u64 {
        self.group().order()
    }
    pub fn exponent(&self) -> u64 {
        self.classes.exponent()
    }
    pub fn len(&self) -> usize {
        self.chars.len()
    }
    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }
    pub fn dims(&self) -> &[u64] {
        &self.dims
    }
    pub fn character(&self, i: usize) -> &ClassFunction {
        &self.chars[i]
    }
    pub fn characters(&self) -> &[ClassFunction] {
        &self.chars
    }

    fn nq(&self) -> (usize, u64) {
        (self.group().n(), self.group().q())
    }

    fn check_same(&self, f: &ClassFunction) -> Result<()> {
        if (f.n, f.q) != self.nq() || f.values.len() != self.classes.len() {
            return invalid(format!(
                "class function of GL_{}(F_{}) used with GL_{}(F_{})",
                f.n,
                f.q,
                self.nq().0,
                self.nq().1
            ));
        }
        Ok(())
    }

    /// `(1/|G|) sum_c h_c f(c) conj(g(c))`.
    pub fn inner_product(&self, f: &ClassFunction, g: &ClassFunction) -> Result<Cyclotomic> {
        self.check_same(f)?;
        self.check_same(g)?;
        let e = self.exponent() as u32;
        let total = sum_cyc(
            e,
            self.classes.classes().iter().enumerate().map(|(c, cls)| {
                f.values[c].mul(&g.values[c].conj()).scale(cls.size as i128, 1)
            }),
        );
        Ok(total.scale(1, self.order() as i128))
    }

    /// Multiplicity of each irreducible in a class function.
    pub fn decompose(&self, f: &ClassFunction) -> Result<Vec<Cyclotomic>> {
        self.chars.par_iter().map(|chi| self.inner_product(f, chi)).collect()
    }

    /// Checks orthogonality of rows and columns, degrees, and counts.
    pub fn verify(&self) -> Result<()> {
        let r = self.classes.len();
        if self.chars.len() != r {
            return broken(format!("{} irreducibles for {r} classes", self.chars.len()));
        }
        let sq: u64 = self.dims.iter().map(|d| d * d).sum();
        if sq != self.order() {
            return broken(format!("sum of squared degrees {sq} != |G| = {}", self.order()));
        }
        let id = self.classes.identity_class();
        for (chi, &d) in self.chars.iter().zip(&self.dims) {
            if chi.values[id] != Cyclotomic::from_int(d as i128) {
                return broken("character value at the identity differs from its degree");
            }
        }
        let pairs: Vec<(usize, usize)> = (0..r).flat_map(|i| (i..r).map(move |j| (i, j))).collect();
        pairs.par_iter().try_for_each(|&(i, j)| {
            let ip = self.inner_product(&self.chars[i], &self.chars[j])?;
            let want = Cyclotomic::from_int((i == j) as i128);
            if ip != want {
                return broken(format!("<chi_{i}, chi_{j}> = {ip}, expected {want}"));
            }
            Ok(())
        })?;
        let e = self.exponent() as u32;
        pairs.par_iter().try_for_each(|&(k, l)| {
            let s = sum_cyc(e, self.chars.iter().map(|chi| chi.values[k].mul(&chi.values[l].conj())));
            let want = if k == l { self.classes.classes()[k].centralizer as i128 } else { 0 };
            if s != Cyclotomic::from_int(want) {
                return broken(format!("column orthogonality fails at classes {k}, {l}"));
            }
            Ok(())
        })?;
        Ok(())
    }

    pub fn trivial_character(&self) -> ClassFunction {
        let (n, q) = self.nq();
        ClassFunction { n, q, values: vec![Cyclotomic::from_int(1); self.classes.len()] }
    }

    pub fn regular_character(&self) -> ClassFunction {
        let (n, q) = self.nq();
        let id = self.classes.identity_class();
        let values = (0..self.classes.len())
            .map(|c| Cyclotomic::from_int(if c == id { self.order() as i128 } else { 0 }))
            .collect();
        ClassFunction { n, q, values }
    }

    /// Number of the given elements in each class.
    pub fn class_counts(&self, elements: &[Mat]) -> Vec<u64> {
        let mut counts = vec![0u64; self.classes.len()];
        for m in elements {
            counts[self.classes.class_index(m)] += 1;
        }
        counts
    }

    /// `sum_c counts[c] f(c)`.
    pub fn weighted_sum(&self, f: &ClassFunction, counts: &[u64]) -> Cyclotomic {
        let e = self.exponent() as u32;
        sum_cyc(
            e,
            counts
                .iter()
                .enumerate()
                .filter(|(_, &n)| n > 0)
                .map(|(c, &n)| f.values[c].scale(n as i128, 1)),
        )
    }

    /// Induction from an enumerated subgroup of a class function given on
    /// its elements: `Ind f(g_c) = |G| / (|H| h_c) * sum_{h in H ∩ C_c} f(h)`.
    pub fn induce<F>(&self, h: &[Mat], f: F) -> Result<ClassFunction>
    where
        F: Fn(&Mat) -> Cyclotomic,
    {
        let r = self.classes.len();
        let mut buckets: Vec<Cyclotomic> = vec![Cyclotomic::zero(1); r];
        for m in h {
            let c = self.classes.class_index(m);
            buckets[c] = buckets[c].add(&f(m));
        }
        let (n, q) = self.nq();
        let values = buckets
            .into_iter()
            .zip(self.classes.classes())
            .map(|(s, cls)| s.scale(self.order() as i128, h.len() as i128 * cls.size as i128))
            .collect();
        Ok(ClassFunction { n, q, values })
    }

    /// Induction by the defining sum over `x in G` with `x g x^{-1} in H`.
    /// Quadratic in the group order; kept as an independent check.
    pub fn induce_brute<F>(&self, h: &[Mat], f: F) -> Result<ClassFunction>
    where
        F: Fn(&Mat) -> Cyclotomic + Sync,
    {
        let g = self.group();
        let set: std::collections::HashSet<&Mat> = h.iter().collect();
        let values = self
            .classes
            .classes()
            .par_iter()
            .map(|cls| -> Result<Cyclotomic> {
                let mut acc = Cyclotomic::zero(1);
                for x in &self.elements {
                    let y = g.conjugate(&cls.representative, x)?;
                    if set.contains(&y) {
                        acc = acc.add(&f(&y));
                    }
                }
                Ok(acc.scale(1, h.len() as i128))
            })
            .collect::<Result<Vec<_>>>()?;
        let (n, q) = self.nq();
        Ok(ClassFunction { n, q, values })
    }

    /// `(1/|H|) sum_{h in H} f(h) conj(chi(h))`.
    pub fn restricted_inner<F>(&self, h: &[Mat], f: F, chi: &ClassFunction) -> Cyclotomic
    where
        F: Fn(&Mat) -> Cyclotomic,
    {
        let s = h.iter().fold(Cyclotomic::zero(1), |acc, m| {
            acc.add(&f(m).mul(&chi.values[self.classes.class_index(m)].conj()))
        });
        s.scale(1, h.len() as i128)
    }

    /// Irreducibles with no nonzero vector fixed by the unipotent radical of
    /// any proper standard parabolic subgroup.
    pub fn cuspidal_indices(&self) -> Result<Vec<usize>> {
        if let Some(c) = self.cuspidal.get() {
            return Ok(c.clone());
        }
        let g = self.group();
        let n = g.n();
        let mut radical_counts = Vec::new();
        for comp in compositions(n).into_iter().filter(|c| c.len() > 1) {
            let u = g.build_subgroup(SubgroupKind::UnipotentRadical(comp), DEFAULT_SUBGROUP_BUDGET)?;
            radical_counts.push(self.class_counts(&u.elements));
        }
        let out: Vec<usize> = (0..self.chars.len())
            .filter(|&i| {
                radical_counts.iter().all(|counts| self.weighted_sum(&self.chars[i], counts).is_zero())
            })
            .collect();
        let _ = self.cuspidal.set(out.clone());
        Ok(out)
    }

    /// The cuspidal irreducible attached to a regular character of
    /// `F_{q^n}^x`: its value on every regular elliptic element `theta^j`
    /// is `(-1)^{n-1} sum_i zeta^{a j q^i}`.
    pub fn green_match(&self, a: u128) -> Result<usize> {
        let g = self.group();
        let (n, q) = (g.n(), g.q());
        let c = MultChar::new(q as u128, n as u32, a)?;
        if !c.is_regular() {
            return invalid(format!("exponent {a} is not regular for GL_{n}(F_{q})"));
        }
        let model = EllipticModel::new(g)?;
        let big_order = c.modulus as u32;
        let sign = if n % 2 == 0 { -1 } else { 1 };
        let mut seen: HashMap<usize, Cyclotomic> = HashMap::new();
        let mut x = g.identity();
        for j in 0..big_order as u128 {
            if model.is_regular_power(g, j) {
                let cls = self.classes.class_index(&x);
                seen.entry(cls).or_insert_with(|| {
                    let mut v = Cyclotomic::zero(big_order);
                    let mut e = crate::arith::mul_mod(a, j, c.modulus);
                    for _ in 0..n {
                        v = v.add(&Cyclotomic::root(big_order, e as i64));
                        e = crate::arith::mul_mod(e, q as u128, c.modulus);
                    }
                    v.scale(sign, 1)
                });
            }
            x = g.mul(&x, &model.companion);
        }
        let matches: Vec<usize> = self
            .cuspidal_indices()?
            .into_iter()
            .filter(|&i| seen.iter().all(|(&cls, v)| self.chars[i].values[cls] == *v))
            .collect();
        match matches.as_slice() {
            [i] => Ok(*i),
            [] => broken(format!("no cuspidal character matches exponent {a}")),
            _ => broken(format!("{} cuspidal characters match exponent {a}", matches.len())),
        }
    }

    /// Green correspondence on all regular orbits, checked to be a bijection
    /// onto the cuspidal characters. Returns `(orbit rep, character index)`.
    pub fn green_assignment(&self) -> Result<Vec<(u128, usize)>> {
        let g = self.group();
        let reps = mchar::regular_orbits(g.q() as u128, g.n() as u32)?;
        let pairs: Vec<(u128, usize)> = reps
            .par_iter()
            .map(|&a| Ok((a, self.green_match(a)?)))
            .collect::<Result<Vec<_>>>()?;
        let mut used: Vec<usize> = pairs.iter().map(|p| p.1).collect();
        used.sort_unstable();
        used.dedup();
        let cusp = self.cuspidal_indices()?;
        if used.len() != pairs.len() || used != cusp {
            return broken(format!(
                "{} regular orbits map onto {} characters; {} cuspidals",
                pairs.len(),
                used.len(),
                cusp.len()
            ));
        }
        Ok(pairs)
    }

    /// `dim Hom_H(chi, 1) = (1/|H|) sum_{h in H} chi(h)`.
    pub fn distinction_dim(&self, chi: usize, h: &[Mat]) -> Result<u64> {
        let counts = self.class_counts(h);
        self.distinction_dim_counts(chi, &counts, h.len() as u64)
    }

    /// As [`CharTable::distinction_dim`] with precomputed class counts.
    pub fn distinction_dim_counts(&self, chi: usize, counts: &[u64], h_order: u64) -> Result<u64> {
        let s = self.weighted_sum(&self.chars[chi], counts).scale(1, h_order as i128);
        nonneg_integer(&s, "distinction dimension")
    }

    /// `dim Hom_H(chi, mu)` for a linear character `mu` of `H` given by
    /// exponents: `mu(h) = zeta_{mu_order}^{e(h)}`.
    pub fn twisted_distinction_dim(&self, chi: usize, h: &[(Mat, u64)], mu_order: u32) -> Result<u64> {
        let r = self.classes.len();
        let mut counts: HashMap<(usize, u64), i128> = HashMap::new();
        for (m, e) in h {
            *counts.entry((self.classes.class_index(m), e % mu_order as u64)).or_default() += 1;
        }
        let mut keys: Vec<_> = counts.into_iter().collect();
        keys.sort();
        let mut acc = Cyclotomic::zero(1);
        for ((c, e), n) in keys {
            debug_assert!(c < r);
            let mu_bar = Cyclotomic::root(mu_order, -(e as i64));
            acc = acc.add(&self.chars[chi].values[c].mul(&mu_bar).scale(n, 1));
        }
        let s = acc.scale(1, h.len() as i128);
        nonneg_integer(&s, "twisted distinction dimension")
    }

    /// CSV export: an `order,E` row, a header of class keys, class sizes,
    /// then one row per irreducible with values written over `zeta_E`.
    pub fn to_csv(&self) -> String {
        csv::write_table(self)
    }
}

fn nonneg_integer(v: &Cyclotomic, what: &str) -> Result<u64> {
    match v.to_rational() {
        Some((n, 1)) if n >= 0 => Ok(n as u64),
        _ => Err(Error::Invariant(format!("{what} {v} is not a non-negative integer"))),
    }
}

/// All compositions of `n` (ordered tuples of positive integers).
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

type Slot = Arc<Mutex<Option<Arc<CharTable>>>>;

/// Process-wide cache of tables built with the default budget.
pub fn cached_table(n: usize, q: u64) -> Result<Arc<CharTable>> {
    cached_table_with_budget(n, q, DEFAULT_GROUP_BUDGET)
}

pub fn cached_table_with_budget(n: usize, q: u64, budget: u64) -> Result<Arc<CharTable>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u64), Slot>>> = OnceLock::new();
    let slot = CACHE
        .get_or_init(|| Mutex::new(HashMap::new()))
        .lock()
        .unwrap()
        .entry((n, q))
        .or_default()
        .clone();
    let mut guard = slot.lock().unwrap();
    if let Some(t) = guard.as_ref() {
        return Ok(t.clone());
    }
    let t = Arc::new(CharTable::build(n, q, budget)?);
    *guard = Some(t.clone());
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl2_f3() {
        let t = cached_table(2, 3).unwrap();
        let mut dims = t.dims().to_vec();
        dims.sort_unstable();
        assert_eq!(dims, vec![1, 1, 2, 2, 2, 3, 3, 4]);
        let cusp = t.cuspidal_indices().unwrap();
        assert_eq!(cusp.len(), 3);
        assert!(cusp.iter().all(|&i| t.dims()[i] == 2));
        assert_eq!(t.green_assignment().unwrap().len(), 3);
    }

    #[test]
    fn abelian_cases() {
        let t = cached_table(1, 4).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.cuspidal_indices().unwrap().len(), 3);
        let t = cached_table(1, 2).unwrap();
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn compositions_of_three() {
        assert_eq!(compositions(3).len(), 4);
    }
}
