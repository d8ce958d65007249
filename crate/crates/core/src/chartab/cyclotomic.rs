//! Exact elements of cyclotomic fields `Q(zeta_E)`.
//!
//! A value is `(sum_j num[j] zeta_E^j) / den` with `zeta_E = exp(2 pi i / E)`.
//! The numerator is kept modulo `x^E - 1` and reduced modulo the cyclotomic
//! polynomial `Phi_E` only when a canonical form is needed.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::arith::gcd;

fn gcd_i(a: i128, b: i128) -> i128 {
    gcd(a.unsigned_abs(), b.unsigned_abs()) as i128
}

/// Coefficients of `Phi_n`, constant term first.
pub fn cyclotomic_poly(n: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Phi_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if !n.is_multiple_of(d) {
            continue;
        }
        let phi = cyclotomic_poly(d);
        let dd = phi.len() - 1;
        let mut quo = vec![0i64; num.len() - dd];
        for deg in (dd..num.len()).rev() {
            let c = num[deg];
            if c == 0 {
                continue;
            }
            quo[deg - dd] = c;
            for (i, &f) in phi.iter().enumerate() {
                num[deg - dd + i] -= c * f;
            }
        }
        debug_assert!(num[..dd].iter().all(|&c| c == 0));
        num = quo;
    }
    let out = Arc::new(num);
    cache.lock().unwrap().insert(n, out.clone());
    out
}

#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: u32,
    num: Vec<i128>,
    den: i128,
}

impl Cyclotomic {
    pub fn zero(order: u32) -> Cyclotomic {
        assert!(order >= 1);
        Cyclotomic { order, num: vec![0; order as usize], den: 1 }
    }
    pub fn from_int(v: i128) -> Cyclotomic {
        Cyclotomic { order: 1, num: vec![v], den: 1 }
    }
    pub fn from_rational(n: i128, d: i128) -> Cyclotomic {
        assert!(d != 0);
        let mut c = Cyclotomic { order: 1, num: vec![n], den: d };
        c.normalize_den();
        c
    }
    /// `zeta_order^j`.
    pub fn root(order: u32, j: i64) -> Cyclotomic {
        let mut c = Cyclotomic::zero(order);
        c.num[j.rem_euclid(order as i64) as usize] = 1;
        c
    }
    /// `sum_j coeffs[j] zeta_order^j`.
    pub fn from_coeffs(order: u32, coeffs: &[i128], den: i128) -> Cyclotomic {
        let mut c = Cyclotomic::zero(order);
        for (j, &v) in coeffs.iter().enumerate() {
            c.num[j % order as usize] += v;
        }
        c.den = den;
        c.normalize_den();
        c
    }

    pub fn order(&self) -> u32 {
        self.order
    }
    pub fn den(&self) -> i128 {
        self.den
    }
    pub fn coeffs(&self) -> &[i128] {
        &self.num
    }

    fn normalize_den(&mut self) {
        if self.den < 0 {
            self.den = -self.den;
            for v in &mut self.num {
                *v = -*v;
            }
        }
        let g = self.num.iter().fold(self.den, |acc, &v| gcd_i(acc, v));
        if g > 1 {
            self.den /= g;
            for v in &mut self.num {
                *v /= g;
            }
        }
    }

    /// The same number written over `zeta_new`, `order | new`.
    pub fn lift(&self, new: u32) -> Cyclotomic {
        assert!(new.is_multiple_of(self.order), "{new} is not a multiple of {}", self.order);
        if new == self.order {
            return self.clone();
        }
        let step = (new / self.order) as usize;
        let mut c = Cyclotomic::zero(new);
        for (j, &v) in self.num.iter().enumerate() {
            c.num[j * step] = v;
        }
        c.den = self.den;
        c
    }

    fn common(&self, other: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
        let l = crate::arith::lcm(self.order as u128, other.order as u128) as u32;
        (self.lift(l), other.lift(l))
    }

    pub fn add(&self, other: &Cyclotomic) -> Cyclotomic {
        let (mut a, b) = self.common(other);
        if a.den == b.den {
            for (x, y) in a.num.iter_mut().zip(&b.num) {
                *x += y;
            }
        } else {
            for (x, y) in a.num.iter_mut().zip(&b.num) {
                *x = *x * b.den + y * a.den;
            }
            a.den *= b.den;
        }
        a.normalize_den();
        a
    }

    pub fn neg(&self) -> Cyclotomic {
        let mut c = self.clone();
        for v in &mut c.num {
            *v = -*v;
        }
        c
    }

    pub fn sub(&self, other: &Cyclotomic) -> Cyclotomic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Cyclotomic) -> Cyclotomic {
        let (a, b) = self.common(other);
        let l = a.order as usize;
        let mut c = Cyclotomic::zero(a.order);
        for (i, &x) in a.num.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.num.iter().enumerate() {
                if y != 0 {
                    c.num[(i + j) % l] += x * y;
                }
            }
        }
        c.den = a.den * b.den;
        c.normalize_den();
        c
    }

    pub fn scale(&self, n: i128, d: i128) -> Cyclotomic {
        let mut c = self.clone();
        for v in &mut c.num {
            *v *= n;
        }
        c.den *= d;
        c.normalize_den();
        c
    }

    /// Complex conjugate, `zeta -> zeta^{-1}`.
    pub fn conj(&self) -> Cyclotomic {
        let l = self.order as usize;
        let mut c = Cyclotomic::zero(self.order);
        for (j, &v) in self.num.iter().enumerate() {
            c.num[(l - j) % l] = v;
        }
        c.den = self.den;
        c
    }

    /// Canonical numerator: remainder modulo `Phi_order`, length `phi(order)`.
    pub fn reduced_coeffs(&self) -> Vec<i128> {
        let phi = cyclotomic_poly(self.order);
        let dp = phi.len() - 1;
        let mut v = self.num.clone();
        for deg in (dp..v.len()).rev() {
            let c = v[deg];
            if c == 0 {
                continue;
            }
            for (i, &f) in phi.iter().enumerate() {
                if f != 0 {
                    v[deg - dp + i] -= c * f as i128;
                }
            }
        }
        v.truncate(dp);
        v
    }

    /// Canonical form at the current order.
    pub fn reduced(&self) -> Cyclotomic {
        let r = self.reduced_coeffs();
        Cyclotomic::from_coeffs(self.order, &r, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.reduced_coeffs().iter().all(|&v| v == 0)
    }

    /// `Some((n, d))` when the value is the rational number `n / d`.
    pub fn to_rational(&self) -> Option<(i128, i128)> {
        let r = self.reduced_coeffs();
        if r[1..].iter().any(|&v| v != 0) {
            return None;
        }
        let g = gcd_i(r[0], self.den).max(1);
        Some((r[0] / g, self.den / g))
    }

    pub fn to_integer(&self) -> Option<i128> {
        match self.to_rational()? {
            (n, 1) => Some(n),
            _ => None,
        }
    }

    /// Complex approximation, for reports and debugging only.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, &v) in self.num.iter().enumerate() {
            let t = std::f64::consts::TAU * j as f64 / self.order as f64;
            re += v as f64 * t.cos();
            im += v as f64 * t.sin();
        }
        (re / self.den as f64, im / self.den as f64)
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl Eq for Cyclotomic {}

/// Prints the canonical form at the value's own order as
/// `c0+c1*z^1+...`, with `z` the primitive root of that order.
impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self.reduced_coeffs();
        let terms: Vec<String> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(j, &v)| {
                let g = gcd_i(v, self.den).max(1);
                let (n, d) = (v / g, self.den / g);
                let c = if d == 1 { n.to_string() } else { format!("{n}/{d}") };
                if j == 0 {
                    c
                } else {
                    format!("{c}*z^{j}")
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

/// Parses the [`fmt::Display`] form; `z` is a primitive root of `order`.
pub fn parse_cyclotomic(s: &str, order: u32) -> Option<Cyclotomic> {
    let s = s.trim();
    if s == "0" {
        return Some(Cyclotomic::zero(order));
    }
    let mut acc = Cyclotomic::zero(order);
    // Split on '+' that separate terms; coefficients never contain '+'.
    for term in s.split('+') {
        let (coef, j) = match term.split_once("*z^") {
            Some((c, e)) => (c, e.parse::<i64>().ok()?),
            None => (term, 0),
        };
        let (n, d) = match coef.split_once('/') {
            Some((n, d)) => (n.parse::<i128>().ok()?, d.parse::<i128>().ok()?),
            None => (coef.parse::<i128>().ok()?, 1),
        };
        if d == 0 {
            return None;
        }
        acc = acc.add(&Cyclotomic::root(order, j).scale(n, d));
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(1260).len() - 1, 288);
    }

    #[test]
    fn roots_sum_to_zero() {
        let mut acc = Cyclotomic::zero(8);
        for j in 0..8 {
            acc = acc.add(&Cyclotomic::root(8, j));
        }
        assert!(acc.is_zero());
        // zeta_8 + zeta_8^3 = i sqrt(2), which is not rational
        let v = Cyclotomic::root(8, 1).add(&Cyclotomic::root(8, 3));
        assert!(v.to_rational().is_none());
        assert_eq!(v.mul(&v), Cyclotomic::from_int(-2));
    }

    #[test]
    fn equality_across_orders() {
        assert_eq!(Cyclotomic::root(4, 2), Cyclotomic::from_int(-1));
        assert_eq!(Cyclotomic::root(6, 2), Cyclotomic::root(3, 1));
        let c = Cyclotomic::root(12, 5).scale(3, 7);
        assert_eq!(c.conj().conj(), c);
    }

    #[test]
    fn display_roundtrip() {
        let c = Cyclotomic::root(9, 7).scale(-2, 3).add(&Cyclotomic::from_int(5));
        let s = c.reduced().to_string();
        assert_eq!(parse_cyclotomic(&s, 9).unwrap(), c);
        assert_eq!(Cyclotomic::zero(5).to_string(), "0");
    }
}
