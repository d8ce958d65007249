//! Canonical finite fields `F_{p^k}`.
//!
//! An element is stored as the base-`p` code of its coefficient vector in
//! `F_p[x]/(f)`: digit `i` (least significant first) is the coefficient of
//! `x^i`. The prime field is therefore the codes `0..p` in every field.
//!
//! The defining polynomial `f` is the least monic polynomial, comparing
//! coefficients from `x^{k-1}` down to the constant term as base-`p`
//! digits, whose root `x` is primitive and for which `x^((p^k-1)/(p^d-1))`
//! is a root of the chosen polynomial of `F_{p^d}` for every proper divisor
//! `d | k`. The second condition makes `g_d -> g_k^((p^k-1)/(p^d-1))` a ring
//! homomorphism, so embeddings compose along divisor chains.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::arith;
use crate::error::{invalid, Error, Result};

/// Largest field that will be tabulated.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

const ADD_TABLE_LIMIT: u32 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldId {
    pub p: u32,
    pub k: u32,
}

impl fmt::Display for FieldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.k)
    }
}

pub struct FqField {
    id: FieldId,
    q: u32,
    /// Monic defining polynomial, coefficients low to high (length `k + 1`).
    poly: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u32>>,
    neg: Vec<u32>,
}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FqField")
            .field("id", &self.id)
            .field("poly", &self.poly)
            .finish()
    }
}

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && self.poly == other.poly
    }
}

impl Eq for FqField {}

fn registry() -> &'static Mutex<HashMap<FieldId, Arc<FqField>>> {
    static REG: OnceLock<Mutex<HashMap<FieldId, Arc<FqField>>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Returns the canonical field with `p^k` elements, building it on first use.
pub fn build_field(p: u32, k: u32) -> Result<Arc<FqField>> {
    if !arith::is_prime(p as u64) {
        return invalid(format!("{p} is not prime"));
    }
    if k == 0 {
        return invalid("field degree must be positive");
    }
    let size = arith::checked_pow(p as u128, k).filter(|&s| s <= MAX_FIELD_SIZE as u128);
    if size.is_none() {
        return Err(Error::Budget(format!(
            "F_{p}^{k} exceeds the tabulation limit of {MAX_FIELD_SIZE} elements"
        )));
    }
    let id = FieldId { p, k };
    if let Some(f) = registry().lock().unwrap().get(&id) {
        return Ok(f.clone());
    }
    let mut subs = Vec::new();
    for d in 1..k {
        if k.is_multiple_of(d) {
            subs.push(build_field(p, d)?);
        }
    }
    let field = Arc::new(FqField::construct(p, k, &subs));
    let mut reg = registry().lock().unwrap();
    Ok(reg.entry(id).or_insert(field).clone())
}

/// Field with `q` elements, `q` a prime power.
pub fn field_of_size(q: u64) -> Result<Arc<FqField>> {
    let p = arith::factorize(q);
    if p.len() != 1 {
        return invalid(format!("{q} is not a prime power"));
    }
    build_field(p[0].0 as u32, p[0].1)
}

// Polynomials over F_p, coefficients low to high.

fn poly_mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let k = f.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for deg in (k..prod.len()).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        for i in 0..k {
            let sub = c * f[i] as u64 % p as u64;
            prod[deg - k + i] = (prod[deg - k + i] + p as u64 - sub) % p as u64;
        }
    }
    prod.truncate(k);
    prod.resize(k, 0);
    prod.into_iter().map(|c| c as u32).collect()
}

fn poly_powmod(base: &[u32], mut e: u128, f: &[u32], p: u32) -> Vec<u32> {
    let k = f.len() - 1;
    let mut acc = vec![0u32; k];
    acc[0] = 1;
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, f, p);
        }
        b = poly_mulmod(&b, &b, f, p);
        e >>= 1;
    }
    acc
}

fn is_one(v: &[u32]) -> bool {
    v[0] == 1 && v[1..].iter().all(|&c| c == 0)
}

fn code_of(v: &[u32], p: u32) -> u32 {
    v.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn digits_of(mut code: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = code % p;
            code /= p;
            d
        })
        .collect()
}

impl FqField {
    fn construct(p: u32, k: u32, subs: &[Arc<FqField>]) -> FqField {
        let q = p.pow(k);
        let order = (q - 1) as u128;
        let primes: Vec<u64> = arith::factorize(order as u64).into_iter().map(|(r, _)| r).collect();
        let mut x = vec![0u32; k as usize];
        if k == 1 {
            x[0] = 0;
        } else {
            x[1] = 1;
        }
        for n in 0..q {
            let low = digits_of(n, p, k);
            if low[0] == 0 {
                continue;
            }
            let mut f = low.clone();
            f.push(1);
            // For k = 1 the root of x + a0 is -a0.
            let root = if k == 1 { vec![(p - low[0]) % p] } else { x.clone() };
            if !is_one(&poly_powmod(&root, order, &f, p)) {
                continue;
            }
            if primes.iter().any(|&r| is_one(&poly_powmod(&root, order / r as u128, &f, p))) {
                continue;
            }
            let compatible = subs.iter().all(|sub| {
                let e = order / (sub.q as u128 - 1);
                let y = poly_powmod(&root, e, &f, p);
                // Evaluate sub.poly at y with Horner.
                let mut acc = vec![0u32; k as usize];
                for &c in sub.poly.iter().rev() {
                    acc = poly_mulmod(&acc, &y, &f, p);
                    acc[0] = (acc[0] + c) % p;
                }
                acc.iter().all(|&c| c == 0)
            });
            if !compatible {
                continue;
            }
            return FqField::tabulate(p, k, f, &root);
        }
        unreachable!("a compatible primitive polynomial always exists")
    }

    fn tabulate(p: u32, k: u32, poly: Vec<u32>, root: &[u32]) -> FqField {
        let q = p.pow(k);
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = vec![0u32; k as usize];
        cur[0] = 1;
        for j in 0..q - 1 {
            let c = code_of(&cur, p);
            exp.push(c);
            log[c as usize] = j;
            cur = poly_mulmod(&cur, root, &poly, p);
        }
        let add_digits = |a: u32, b: u32| -> u32 {
            let (mut a, mut b) = (a, b);
            let mut out = 0;
            let mut place = 1;
            for _ in 0..k {
                out += ((a % p + b % p) % p) * place;
                a /= p;
                b /= p;
                place *= p;
            }
            out
        };
        let neg = (0..q)
            .map(|a| {
                let mut out = 0;
                let mut place = 1;
                let mut a = a;
                for _ in 0..k {
                    out += ((p - a % p) % p) * place;
                    a /= p;
                    place *= p;
                }
                out
            })
            .collect();
        let add = (q <= ADD_TABLE_LIMIT).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = add_digits(a, b);
                }
            }
            t
        });
        FqField { id: FieldId { p, k }, q, poly, exp, log, add, neg }
    }

    pub fn id(&self) -> FieldId {
        self.id
    }
    pub fn p(&self) -> u32 {
        self.id.p
    }
    pub fn k(&self) -> u32 {
        self.id.k
    }
    pub fn size(&self) -> u32 {
        self.q
    }
    /// Order of the multiplicative group.
    pub fn unit_order(&self) -> u32 {
        self.q - 1
    }
    /// Defining polynomial, coefficients from the constant term up.
    pub fn defining_poly(&self) -> &[u32] {
        &self.poly
    }
    /// The primitive element used as discrete-log base.
    pub fn generator(&self) -> u32 {
        self.exp[1 % self.exp.len()]
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add {
            Some(t) => t[(a * self.q + b) as usize],
            None => {
                let p = self.id.p;
                let (mut a, mut b) = (a, b);
                let mut out = 0;
                let mut place = 1;
                while a > 0 || b > 0 {
                    out += ((a % p + b % p) % p) * place;
                    a /= p;
                    b /= p;
                    place *= p;
                }
                out
            }
        }
    }
    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }
    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.exp[(s % (self.q as u64 - 1)) as usize]
    }
    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let l = self.log[a as usize];
        Some(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
    }
    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        Some(self.mul(a, self.inv(b)?))
    }
    pub fn pow(&self, a: u32, e: u128) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let m = (self.q - 1) as u128;
        let l = arith::mul_mod(self.log[a as usize] as u128, e % m, m);
        self.exp[l as usize]
    }
    /// Discrete logarithm to the generator; `None` for zero.
    #[inline]
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }
    /// `generator^j`.
    #[inline]
    pub fn exp(&self, j: u128) -> u32 {
        self.exp[(j % (self.q as u128 - 1)) as usize]
    }
    /// Image of the integer `n` in the prime field.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.id.p as i64) as u32
    }
    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.id.p as u128)
    }
    pub fn in_prime_field(&self, a: u32) -> bool {
        a < self.id.p
    }
    /// Absolute trace to `F_p`, returned as an integer in `0..p`.
    pub fn trace(&self, a: u32) -> u32 {
        let mut acc = 0;
        let mut y = a;
        for _ in 0..self.id.k {
            acc = self.add(acc, y);
            y = self.frobenius(y);
        }
        debug_assert!(acc < self.id.p);
        acc
    }

    fn check_sub(&self, sub: &FqField) -> Result<u128> {
        if sub.id.p != self.id.p || !self.id.k.is_multiple_of(sub.id.k) {
            return invalid(format!("F_{} is not a subfield of F_{}", sub.id, self.id));
        }
        Ok((self.q as u128 - 1) / (sub.q as u128 - 1))
    }

    /// Canonical embedding of an element of the subfield `sub`.
    pub fn embed_from(&self, sub: &FqField, x: u32) -> Result<u32> {
        let e = self.check_sub(sub)?;
        Ok(match sub.log(x) {
            None => 0,
            Some(j) => self.exp(j as u128 * e),
        })
    }

    /// Norm `x -> x^((p^k-1)/(p^d-1))` into the subfield `sub`.
    pub fn norm_to(&self, sub: &FqField, x: u32) -> Result<u32> {
        self.check_sub(sub)?;
        Ok(match self.log(x) {
            None => 0,
            Some(j) => sub.exp(j as u128),
        })
    }

    /// Whether `x` lies in the image of the subfield with `p^d` elements.
    pub fn lies_in_subfield(&self, x: u32, d: u32) -> bool {
        self.pow(x, (self.id.p as u128).pow(d)) == x
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    pub fn elem(self: &Arc<Self>, rep: u32) -> FqElem {
        assert!(rep < self.q, "rep {rep} out of range for F_{}", self.id);
        FqElem { field: self.clone(), rep }
    }

    /// Polynomial coordinates over `F_p`, constant term first.
    pub fn coords(&self, a: u32) -> Vec<u32> {
        digits_of(a, self.id.p, self.id.k)
    }
}

/// An element bound to its field; mixing fields is an error.
#[derive(Clone)]
pub struct FqElem {
    field: Arc<FqField>,
    rep: u32,
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@F_{}", self.rep, self.field.id)
    }
}

impl PartialEq for FqElem {
    fn eq(&self, other: &Self) -> bool {
        self.field.id == other.field.id && self.rep == other.rep
    }
}

impl Eq for FqElem {}

impl FqElem {
    pub fn rep(&self) -> u32 {
        self.rep
    }
    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }
    pub fn dlog(&self) -> Option<u32> {
        self.field.log(self.rep)
    }

    fn same(&self, other: &FqElem) -> Result<()> {
        if self.field.id != other.field.id {
            return Err(Error::FieldMismatch(
                self.field.id.to_string(),
                other.field.id.to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &FqElem) -> Result<FqElem> {
        self.same(other)?;
        Ok(self.field.elem(self.field.add(self.rep, other.rep)))
    }
    pub fn sub(&self, other: &FqElem) -> Result<FqElem> {
        self.same(other)?;
        Ok(self.field.elem(self.field.sub(self.rep, other.rep)))
    }
    pub fn mul(&self, other: &FqElem) -> Result<FqElem> {
        self.same(other)?;
        Ok(self.field.elem(self.field.mul(self.rep, other.rep)))
    }
    pub fn inv(&self) -> Option<FqElem> {
        self.field.inv(self.rep).map(|r| self.field.elem(r))
    }
    pub fn pow(&self, e: u128) -> FqElem {
        self.field.elem(self.field.pow(self.rep, e))
    }
    pub fn frobenius(&self) -> FqElem {
        self.field.elem(self.field.frobenius(self.rep))
    }

    /// Embeds into `target`, which must contain this element's field.
    pub fn embed(&self, target: &Arc<FqField>) -> Result<FqElem> {
        Ok(target.elem(target.embed_from(&self.field, self.rep)?))
    }

    /// Norm down to the subfield `sub`.
    pub fn norm(&self, sub: &Arc<FqField>) -> Result<FqElem> {
        Ok(sub.elem(self.field.norm_to(sub, self.rep)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_three() {
        let f = build_field(3, 1).unwrap();
        assert_eq!(f.generator(), 2);
        assert_eq!(f.defining_poly(), &[1, 1]);
    }

    #[test]
    fn f4_and_f9() {
        let f4 = build_field(2, 2).unwrap();
        assert_eq!(f4.unit_order(), 3);
        assert_eq!(f4.defining_poly(), &[1, 1, 1]);
        let f9 = build_field(3, 2).unwrap();
        // x^2 + x + 2
        assert_eq!(f9.defining_poly(), &[2, 1, 1]);
        assert_eq!(f9.generator(), 3);
    }

    #[test]
    fn norm_of_generator_f9_to_f3() {
        let f9 = build_field(3, 2).unwrap();
        let f3 = build_field(3, 1).unwrap();
        let g = f9.elem(f9.generator());
        assert_eq!(g.norm(&f3).unwrap().rep(), 2);
    }

    #[test]
    fn embed_f4_into_f64() {
        let f4 = build_field(2, 2).unwrap();
        let f64_ = build_field(2, 6).unwrap();
        let img = f64_.embed_from(&f4, f4.generator()).unwrap();
        assert_eq!(img, f64_.exp(21));
        assert_eq!(f64_.embed_from(&f4, 0).unwrap(), 0);
        assert_eq!(f64_.embed_from(&f4, 1).unwrap(), 1);
    }

    #[test]
    fn cross_field_arith_is_rejected() {
        let f4 = build_field(2, 2).unwrap();
        let f8 = build_field(2, 3).unwrap();
        assert!(f4.elem(1).add(&f8.elem(1)).is_err());
        assert!(f8.embed_from(&f4, 1).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(build_field(4, 1).is_err());
        assert!(build_field(3, 0).is_err());
        assert!(matches!(build_field(3, 40), Err(Error::Budget(_))));
    }
}
