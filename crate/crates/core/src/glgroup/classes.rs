use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use super::{gl_order, poly_divrem, poly_mul, GeneralLinear, Mat, Poly};
use crate::error::{invalid, Error, Result};

/// Similarity type: for each monic irreducible factor of the characteristic
/// polynomial, the partition of its multiplicity into elementary divisor
/// exponents. Sorted by (degree, coefficients).
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct ClassKey(pub Vec<(Poly, Vec<u32>)>);

impl fmt::Display for ClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, (poly, part)) in self.0.iter().enumerate() {
            if idx > 0 {
                write!(f, "*")?;
            }
            let coeffs: Vec<String> = poly.iter().rev().map(|c| c.to_string()).collect();
            let parts: Vec<String> = part.iter().map(|c| c.to_string()).collect();
            write!(f, "[{}]({})", coeffs.join("."), parts.join("."))?;
        }
        Ok(())
    }
}

fn sort_key(poly: &Poly) -> (usize, Vec<u32>) {
    (poly.len(), poly.iter().rev().copied().collect())
}

impl ClassKey {
    fn normalize(mut parts: Vec<(Poly, Vec<u32>)>) -> ClassKey {
        parts.sort_by_key(|(p, _)| sort_key(p));
        ClassKey(parts)
    }
}

#[derive(Clone, Debug)]
pub struct ConjClass {
    pub key: ClassKey,
    pub representative: Mat,
    pub size: u64,
    pub centralizer: u64,
    pub element_order: u64,
}

fn conjugate_partition(part: &[u32]) -> Vec<u32> {
    let max = part.first().copied().unwrap_or(0);
    (1..=max).map(|j| part.iter().filter(|&&x| x >= j).count() as u32).collect()
}

fn partitions(k: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, &mut Vec::new(), &mut out);
    out
}

/// Centralizer order of a similarity type.
fn centralizer_order(q: u64, key: &ClassKey) -> u64 {
    let mut acc: u64 = 1;
    for (poly, part) in &key.0 {
        let qq = q.pow(poly.len() as u32 - 1);
        let conj = conjugate_partition(part);
        let sum_sq: u32 = conj.iter().map(|c| c * c).sum();
        let mut mults: HashMap<u32, u32> = HashMap::new();
        for &p in part {
            *mults.entry(p).or_default() += 1;
        }
        let msq: u32 = mults.values().map(|m| m * m).sum();
        acc *= qq.pow(sum_sq - msq);
        for &m in mults.values() {
            acc *= gl_order(m as usize, qq).expect("small");
        }
    }
    acc
}

impl GeneralLinear {
    /// Similarity invariant of an invertible matrix.
    pub fn class_of(&self, a: &Mat) -> Result<ClassKey> {
        if !self.is_invertible(a) {
            return invalid("class_of needs an invertible matrix");
        }
        let f = &**self.field();
        let n = a.n();
        let mut rest = self.charpoly(a);
        let mut parts = Vec::new();
        for d in 1..=n {
            if rest.len() <= 1 {
                break;
            }
            for g in self.irreducibles(d) {
                let mut mult = 0u32;
                loop {
                    let (quo, rem) = poly_divrem(f, &rest, g);
                    if rest.len() > g.len() - 1 && rem.iter().all(|&c| c == 0) {
                        rest = quo;
                        mult += 1;
                    } else {
                        break;
                    }
                }
                if mult == 0 {
                    continue;
                }
                let ga = self.eval_poly(g, a);
                let mut power = ga;
                let mut prev = 0u32;
                let mut counts = Vec::new();
                for j in 1..=mult {
                    if j > 1 {
                        power = self.mul(&power, &ga);
                    }
                    let nullity = (n - self.rank(&power)) as u32 / d as u32;
                    counts.push(nullity - prev);
                    prev = nullity;
                    if nullity == mult {
                        break;
                    }
                }
                // counts[j-1] = number of parts >= j, i.e. the conjugate partition.
                let part = conjugate_partition(&counts);
                parts.push((g.clone(), part));
            }
        }
        Ok(ClassKey::normalize(parts))
    }

    /// Block-diagonal rational canonical representative of a key.
    pub fn class_representative(&self, key: &ClassKey) -> Mat {
        let f = &**self.field();
        let mut blocks: Vec<Mat> = Vec::new();
        for (poly, part) in &key.0 {
            for &lam in part {
                let mut h = vec![1u32];
                for _ in 0..lam {
                    h = poly_mul(f, &h, poly);
                }
                blocks.push(self.companion(&h));
            }
        }
        let mut m = blocks[0];
        for b in &blocks[1..] {
            m = Mat::block_diag(&m, b);
        }
        m
    }

    /// All similarity types of `GL_n(F_q)`, via the centralizer formula.
    pub fn enumerate_similarity_types(&self) -> Vec<ClassKey> {
        let mut all: Vec<&Poly> = Vec::new();
        for d in 1..=self.n() {
            all.extend(self.irreducibles(d).iter());
        }
        all.sort_by_key(|p| sort_key(p));
        let mut out = Vec::new();
        fn go(
            all: &[&Poly],
            start: usize,
            rest: usize,
            cur: &mut Vec<(Poly, Vec<u32>)>,
            out: &mut Vec<ClassKey>,
        ) {
            if rest == 0 {
                out.push(ClassKey::normalize(cur.clone()));
                return;
            }
            for i in start..all.len() {
                let d = all[i].len() - 1;
                if d > rest {
                    continue;
                }
                for k in 1..=(rest / d) {
                    for part in partitions(k as u32) {
                        cur.push((all[i].clone(), part));
                        go(all, i + 1, rest - d * k, cur, out);
                        cur.pop();
                    }
                }
            }
        }
        go(&all, 0, self.n(), &mut Vec::new(), &mut out);
        out.sort();
        out
    }
}

/// Conjugacy classes of one `GL_n(F_q)` with a fast element-to-class map.
pub struct ClassList {
    group: Arc<GeneralLinear>,
    classes: Vec<ConjClass>,
    index: HashMap<ClassKey, usize>,
    inverse: Vec<usize>,
    dense: Option<Vec<u16>>,
    identity: usize,
}

const DENSE_LIMIT: u64 = 1 << 24;

impl ClassList {
    /// Enumerates similarity types and derives sizes from centralizer orders.
    pub fn build(group: &Arc<GeneralLinear>) -> Result<ClassList> {
        let keys = group.enumerate_similarity_types();
        if keys.len() >= u16::MAX as usize {
            return Err(Error::Budget(format!("{} classes", keys.len())));
        }
        let order = group.order();
        let classes: Vec<ConjClass> = keys
            .into_par_iter()
            .map(|key| {
                let representative = group.class_representative(&key);
                let centralizer = centralizer_order(group.q(), &key);
                ConjClass {
                    size: order / centralizer,
                    element_order: group.element_order(&representative),
                    key,
                    representative,
                    centralizer,
                }
            })
            .collect();
        let total: u64 = classes.iter().map(|c| c.size).sum();
        if total != order {
            return Err(Error::Invariant(format!("class sizes sum to {total}, not {order}")));
        }
        let index: HashMap<ClassKey, usize> =
            classes.iter().enumerate().map(|(i, c)| (c.key.clone(), i)).collect();
        let mut list = ClassList {
            group: group.clone(),
            classes,
            index,
            inverse: Vec::new(),
            dense: None,
            identity: 0,
        };
        list.identity = list.index_of_key(&group.class_of(&group.identity())?)?;
        let inverse = (0..list.classes.len())
            .map(|i| {
                let inv = group.inv(&list.classes[i].representative)?;
                list.index_of_key(&group.class_of(&inv)?)
            })
            .collect::<Result<Vec<_>>>()?;
        list.inverse = inverse;
        Ok(list)
    }

    /// Also tabulates the class of every matrix code (for fast lookup in
    /// structure-constant and induction loops).
    pub fn with_dense_lookup(mut self) -> Result<ClassList> {
        let space = self.group.code_space();
        if space > DENSE_LIMIT {
            return Ok(self);
        }
        let g = &self.group;
        let index = &self.index;
        let table: Vec<u16> = (0..space)
            .into_par_iter()
            .map(|code| {
                let m = g.decode(code);
                if !g.is_invertible(&m) {
                    return u16::MAX;
                }
                let key = g.class_of(&m).expect("invertible");
                index[&key] as u16
            })
            .collect();
        self.dense = Some(table);
        Ok(self)
    }

    pub fn group(&self) -> &Arc<GeneralLinear> {
        &self.group
    }
    pub fn classes(&self) -> &[ConjClass] {
        &self.classes
    }
    pub fn len(&self) -> usize {
        self.classes.len()
    }
    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
    pub fn identity_class(&self) -> usize {
        self.identity
    }
    /// Index of the class of `g^{-1}` for `g` in class `i`.
    pub fn inverse_class(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn index_of_key(&self, key: &ClassKey) -> Result<usize> {
        self.index
            .get(key)
            .copied()
            .ok_or_else(|| Error::Invariant(format!("unknown class key {key}")))
    }

    /// Class index of an invertible matrix.
    #[inline]
    pub fn class_index(&self, a: &Mat) -> usize {
        if let Some(t) = &self.dense {
            let c = t[self.group.encode(a) as usize];
            debug_assert!(c != u16::MAX, "singular matrix");
            return c as usize;
        }
        let key = self.group.class_of(a).expect("invertible matrix");
        self.index[&key]
    }

    /// `power_map[k][l]` = class of `rep_k^l` for `0 <= l < order_k`.
    pub fn power_map(&self) -> Vec<Vec<usize>> {
        self.classes
            .par_iter()
            .map(|c| {
                let mut out = Vec::with_capacity(c.element_order as usize);
                let mut x = self.group.identity();
                for _ in 0..c.element_order {
                    out.push(self.class_index(&x));
                    x = self.group.mul(&x, &c.representative);
                }
                out
            })
            .collect()
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> u64 {
        self.classes
            .iter()
            .fold(1u64, |acc, c| crate::arith::lcm(acc as u128, c.element_order as u128) as u64)
    }
}

/// Partition of the group into conjugation orbits by closure under a
/// generating set; returns sorted orbit sizes. Used as an oracle.
pub fn enumerate_classes_brute(group: &GeneralLinear, budget: u64) -> Result<Vec<(ClassKey, u64)>> {
    let elements = group.elements(budget)?;
    let n = group.n();
    let f = group.field();
    let mut gens = Vec::new();
    let mut d = group.identity();
    d.set(0, 0, f.generator());
    gens.push(d);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut e = group.identity();
                e.set(i, j, 1);
                gens.push(e);
            }
        }
    }
    let gens: Vec<(Mat, Mat)> = gens.iter().map(|g| (*g, group.inv(g).unwrap())).collect();
    let mut seen: HashSet<u64> = HashSet::with_capacity(elements.len());
    let mut out = Vec::new();
    for x in &elements {
        if seen.contains(&group.encode(x)) {
            continue;
        }
        let key = group.class_of(x)?;
        let mut stack = vec![*x];
        seen.insert(group.encode(x));
        let mut size = 0u64;
        while let Some(y) = stack.pop() {
            size += 1;
            if group.class_of(&y)? != key {
                return Err(Error::Invariant(format!("class_of not constant on orbit of {key}")));
            }
            for (g, gi) in &gens {
                let z = group.mul(&group.mul(g, &y), gi);
                if seen.insert(group.encode(&z)) {
                    stack.push(z);
                }
            }
        }
        out.push((key, size));
    }
    out.sort();
    Ok(out)
}
