//! `GL_n(F_q)` at desk scale: matrices, conjugacy classes and the subgroups
//! used by the distinction computations.
//!
//! A [`Mat`] does not carry its field; it is interpreted through the
//! [`GeneralLinear`] context that produced it. The context owns the field
//! and every operation goes through it.

mod classes;
mod subgroups;

use std::sync::Arc;

use rand::Rng;

use crate::arith;
use crate::error::{invalid, Error, Result};
use crate::ffield::{self, FqField};

pub use classes::{enumerate_classes_brute, ClassKey, ClassList, ConjClass};
pub use subgroups::{w_perm, EllipticModel, Subgroup, SubgroupKind};

pub const MAX_N: usize = 4;
const STRIDE: usize = MAX_N;

/// Default cap on the number of elements enumerated for a whole group.
pub const DEFAULT_GROUP_BUDGET: u64 = 1_000_000;
/// Default cap on the number of elements enumerated for a subgroup.
pub const DEFAULT_SUBGROUP_BUDGET: u64 = 10_000_000;

/// Square matrix of size at most [`MAX_N`], entries as field codes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Mat {
    n: u8,
    e: [u32; MAX_N * MAX_N],
}

impl Mat {
    pub fn zero(n: usize) -> Mat {
        assert!(n <= MAX_N);
        Mat { n: n as u8, e: [0; MAX_N * MAX_N] }
    }
    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zero(n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }
    pub fn from_rows(rows: &[Vec<u32>]) -> Mat {
        let n = rows.len();
        let mut m = Mat::zero(n);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n);
            for (j, &x) in r.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }
    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.e[i * STRIDE + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.e[i * STRIDE + j] = v;
    }
    pub fn rows(&self) -> Vec<Vec<u32>> {
        let n = self.n();
        (0..n).map(|i| (0..n).map(|j| self.get(i, j)).collect()).collect()
    }
    /// Block-diagonal matrix with blocks `a` then `b`.
    pub fn block_diag(a: &Mat, b: &Mat) -> Mat {
        let (na, nb) = (a.n(), b.n());
        let mut m = Mat::zero(na + nb);
        for i in 0..na {
            for j in 0..na {
                m.set(i, j, a.get(i, j));
            }
        }
        for i in 0..nb {
            for j in 0..nb {
                m.set(na + i, na + j, b.get(i, j));
            }
        }
        m
    }
}

/// Monic polynomial over `F_q`, coefficients as field codes, constant first.
pub type Poly = Vec<u32>;

pub struct GeneralLinear {
    n: usize,
    field: Arc<FqField>,
    /// `irreducibles[d]`: monic irreducibles of degree `d` other than `x`.
    irreducibles: Vec<Vec<Poly>>,
}

impl std::fmt::Debug for GeneralLinear {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GL_{}(F_{})", self.n, self.q())
    }
}

/// `|GL_n(F_q)|`, or `None` on overflow.
pub fn gl_order(n: usize, q: u64) -> Option<u64> {
    let qn = (q as u128).checked_pow(n as u32)?;
    let mut acc: u128 = 1;
    let mut qi: u128 = 1;
    for _ in 0..n {
        acc = acc.checked_mul(qn - qi)?;
        qi *= q as u128;
    }
    u64::try_from(acc).ok()
}

impl GeneralLinear {
    pub fn new(n: usize, q: u64) -> Result<Arc<GeneralLinear>> {
        if n == 0 || n > MAX_N {
            return invalid(format!("matrix size {n} outside 1..={MAX_N}"));
        }
        let field = ffield::field_of_size(q)?;
        Self::with_field(n, field)
    }

    pub fn with_field(n: usize, field: Arc<FqField>) -> Result<Arc<GeneralLinear>> {
        if n == 0 || n > MAX_N {
            return invalid(format!("matrix size {n} outside 1..={MAX_N}"));
        }
        let q = field.size() as u64;
        if arith::checked_pow(q as u128, n as u32).is_none_or(|v| v > 1_000_000) {
            return Err(Error::Budget(format!("q^n = {q}^{n} too large for polynomial scans")));
        }
        if arith::checked_pow(q as u128, (n * n) as u32).is_none_or(|v| v >= 1 << 62) {
            return Err(Error::Budget(format!("matrix codes for GL_{n}(F_{q}) overflow")));
        }
        let irreducibles = monic_irreducibles(&field, n);
        Ok(Arc::new(GeneralLinear { n, field, irreducibles }))
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn q(&self) -> u64 {
        self.field.size() as u64
    }
    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }
    pub fn order(&self) -> u64 {
        gl_order(self.n, self.q()).expect("bounded at construction")
    }
    pub fn irreducibles(&self, d: usize) -> &[Poly] {
        &self.irreducibles[d]
    }
    pub fn identity(&self) -> Mat {
        Mat::identity(self.n)
    }

    pub fn mul(&self, a: &Mat, b: &Mat) -> Mat {
        let n = a.n();
        let f = &*self.field;
        let mut c = Mat::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0;
                for k in 0..n {
                    acc = f.add(acc, f.mul(a.get(i, k), b.get(k, j)));
                }
                c.set(i, j, acc);
            }
        }
        c
    }

    pub fn pow(&self, a: &Mat, mut e: u64) -> Mat {
        let mut acc = Mat::identity(a.n());
        let mut b = *a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    pub fn add(&self, a: &Mat, b: &Mat) -> Mat {
        let mut c = *a;
        for i in 0..a.n() {
            for j in 0..a.n() {
                c.set(i, j, self.field.add(a.get(i, j), b.get(i, j)));
            }
        }
        c
    }

    pub fn scale(&self, a: &Mat, s: u32) -> Mat {
        let mut c = *a;
        for i in 0..a.n() {
            for j in 0..a.n() {
                c.set(i, j, self.field.mul(a.get(i, j), s));
            }
        }
        c
    }

    /// Gaussian elimination; returns `(rank, determinant)`.
    fn eliminate(&self, a: &Mat) -> (usize, u32) {
        let n = a.n();
        let f = &*self.field;
        let mut m = *a;
        let mut det = 1;
        let mut rank = 0;
        for col in 0..n {
            let Some(piv) = (rank..n).find(|&r| m.get(r, col) != 0) else {
                det = 0;
                continue;
            };
            if piv != rank {
                for j in 0..n {
                    let t = m.get(piv, j);
                    m.set(piv, j, m.get(rank, j));
                    m.set(rank, j, t);
                }
                det = f.neg(det);
            }
            let pv = m.get(rank, col);
            det = f.mul(det, pv);
            let pinv = f.inv(pv).unwrap();
            for r in rank + 1..n {
                let factor = f.mul(m.get(r, col), pinv);
                if factor == 0 {
                    continue;
                }
                for j in col..n {
                    let v = f.sub(m.get(r, j), f.mul(factor, m.get(rank, j)));
                    m.set(r, j, v);
                }
            }
            rank += 1;
        }
        (rank, if rank == n { det } else { 0 })
    }

    pub fn det(&self, a: &Mat) -> u32 {
        self.eliminate(a).1
    }
    pub fn rank(&self, a: &Mat) -> usize {
        self.eliminate(a).0
    }
    pub fn is_invertible(&self, a: &Mat) -> bool {
        self.det(a) != 0
    }

    pub fn inv(&self, a: &Mat) -> Result<Mat> {
        let n = a.n();
        let f = &*self.field;
        let mut m = *a;
        let mut r = Mat::identity(n);
        for col in 0..n {
            let piv = (col..n)
                .find(|&i| m.get(i, col) != 0)
                .ok_or_else(|| Error::InvalidInput("singular matrix".into()))?;
            for j in 0..n {
                let (x, y) = (m.get(piv, j), m.get(col, j));
                m.set(piv, j, y);
                m.set(col, j, x);
                let (x, y) = (r.get(piv, j), r.get(col, j));
                r.set(piv, j, y);
                r.set(col, j, x);
            }
            let pinv = f.inv(m.get(col, col)).unwrap();
            for j in 0..n {
                m.set(col, j, f.mul(m.get(col, j), pinv));
                r.set(col, j, f.mul(r.get(col, j), pinv));
            }
            for i in 0..n {
                if i == col || m.get(i, col) == 0 {
                    continue;
                }
                let factor = m.get(i, col);
                for j in 0..n {
                    m.set(i, j, f.sub(m.get(i, j), f.mul(factor, m.get(col, j))));
                    r.set(i, j, f.sub(r.get(i, j), f.mul(factor, r.get(col, j))));
                }
            }
        }
        Ok(r)
    }

    /// `h g h^{-1}`.
    pub fn conjugate(&self, g: &Mat, h: &Mat) -> Result<Mat> {
        Ok(self.mul(&self.mul(h, g), &self.inv(h)?))
    }

    /// Multiplicative order of an invertible matrix.
    pub fn element_order(&self, a: &Mat) -> u64 {
        let id = self.identity();
        let mut x = *a;
        let mut k = 1;
        while x != id {
            x = self.mul(&x, a);
            k += 1;
        }
        k
    }

    /// Row-major code with digit `dlog + 1` (or 0 for a zero entry) base q.
    pub fn encode(&self, a: &Mat) -> u64 {
        let q = self.q();
        let mut code = 0u64;
        for i in (0..a.n()).rev() {
            for j in (0..a.n()).rev() {
                let d = self.field.log(a.get(i, j)).map_or(0, |l| l as u64 + 1);
                code = code * q + d;
            }
        }
        code
    }

    pub fn decode(&self, mut code: u64) -> Mat {
        let q = self.q();
        let mut m = Mat::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let d = code % q;
                code /= q;
                m.set(i, j, if d == 0 { 0 } else { self.field.exp(d as u128 - 1) });
            }
        }
        m
    }

    /// Number of codes, `q^(n^2)`.
    pub fn code_space(&self) -> u64 {
        self.q().pow((self.n * self.n) as u32)
    }

    /// All group elements, in increasing code order.
    pub fn elements(&self, budget: u64) -> Result<Vec<Mat>> {
        let order = self.order();
        if order > budget {
            return Err(Error::Budget(format!(
                "|GL_{}(F_{})| = {order} exceeds the budget {budget}",
                self.n,
                self.q()
            )));
        }
        if self.code_space() > 64 * budget.max(1 << 20) {
            return Err(Error::Budget("matrix code space too large to scan".into()));
        }
        let mut out = Vec::with_capacity(order as usize);
        for code in 0..self.code_space() {
            let m = self.decode(code);
            if self.is_invertible(&m) {
                out.push(m);
            }
        }
        debug_assert_eq!(out.len() as u64, order);
        Ok(out)
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Mat {
        let q = self.q() as u32;
        loop {
            let mut m = Mat::zero(self.n);
            for i in 0..self.n {
                for j in 0..self.n {
                    m.set(i, j, rng.gen_range(0..q));
                }
            }
            if self.is_invertible(&m) {
                return m;
            }
        }
    }

    /// Companion matrix of a monic polynomial (ones on the subdiagonal).
    pub fn companion(&self, f: &[u32]) -> Mat {
        let d = f.len() - 1;
        let mut m = Mat::zero(d);
        for i in 1..d {
            m.set(i, i - 1, 1);
        }
        for i in 0..d {
            m.set(i, d - 1, self.field.neg(f[i]));
        }
        m
    }

    /// Characteristic polynomial via reduction to Hessenberg form.
    pub fn charpoly(&self, a: &Mat) -> Poly {
        let n = a.n();
        let f = &*self.field;
        let mut h = *a;
        for j in 0..n.saturating_sub(2) {
            let Some(piv) = (j + 1..n).find(|&i| h.get(i, j) != 0) else {
                continue;
            };
            if piv != j + 1 {
                for c in 0..n {
                    let t = h.get(piv, c);
                    h.set(piv, c, h.get(j + 1, c));
                    h.set(j + 1, c, t);
                }
                for r in 0..n {
                    let t = h.get(r, piv);
                    h.set(r, piv, h.get(r, j + 1));
                    h.set(r, j + 1, t);
                }
            }
            let pinv = f.inv(h.get(j + 1, j)).unwrap();
            for k in j + 2..n {
                let u = f.mul(h.get(k, j), pinv);
                if u == 0 {
                    continue;
                }
                for c in 0..n {
                    h.set(k, c, f.sub(h.get(k, c), f.mul(u, h.get(j + 1, c))));
                }
                for r in 0..n {
                    h.set(r, j + 1, f.add(h.get(r, j + 1), f.mul(u, h.get(r, k))));
                }
            }
        }
        let mut p: Vec<Poly> = vec![vec![1]];
        for m in 1..=n {
            // (x - h[m-1][m-1]) p[m-1]
            let prev = &p[m - 1];
            let mut cur = vec![0u32; m + 1];
            for (i, &c) in prev.iter().enumerate() {
                cur[i + 1] = f.add(cur[i + 1], c);
                cur[i] = f.sub(cur[i], f.mul(h.get(m - 1, m - 1), c));
            }
            let mut prod = 1;
            for i in 1..m {
                prod = f.mul(prod, h.get(m - i, m - i - 1));
                let coef = f.mul(h.get(m - i - 1, m - 1), prod);
                if coef == 0 {
                    continue;
                }
                for (k, &c) in p[m - i - 1].iter().enumerate() {
                    cur[k] = f.sub(cur[k], f.mul(coef, c));
                }
            }
            p.push(cur);
        }
        p.pop().unwrap()
    }

    /// `f(A)` by Horner's rule.
    pub fn eval_poly(&self, f: &[u32], a: &Mat) -> Mat {
        let n = a.n();
        let mut acc = Mat::zero(n);
        for &c in f.iter().rev() {
            acc = self.mul(&acc, a);
            for i in 0..n {
                acc.set(i, i, self.field.add(acc.get(i, i), c));
            }
        }
        acc
    }

    /// Additive character exponent `Tr(x_{12} + ... + x_{n-1,n})` in `0..p`.
    pub fn psi_exponent(&self, u: &Mat) -> u32 {
        let mut s = 0;
        for i in 0..u.n().saturating_sub(1) {
            s = self.field.add(s, u.get(i, i + 1));
        }
        self.field.trace(s)
    }
}

pub(crate) fn poly_mul(f: &FqField, a: &[u32], b: &[u32]) -> Poly {
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}

/// Quotient and remainder by a monic divisor.
pub(crate) fn poly_divrem(f: &FqField, a: &[u32], b: &[u32]) -> (Poly, Poly) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (vec![0], a.to_vec());
    }
    let mut r = a.to_vec();
    let mut quo = vec![0u32; a.len() - db];
    for deg in (db..a.len()).rev() {
        let c = r[deg];
        if c == 0 {
            continue;
        }
        quo[deg - db] = c;
        for i in 0..=db {
            r[deg - db + i] = f.sub(r[deg - db + i], f.mul(c, b[i]));
        }
    }
    r.truncate(db.max(1));
    (quo, r)
}

fn monic_irreducibles(f: &FqField, n: usize) -> Vec<Vec<Poly>> {
    let q = f.size();
    let mut out: Vec<Vec<Poly>> = vec![Vec::new(); n + 1];
    for d in 1..=n {
        let count = q.pow(d as u32);
        for code in 0..count {
            let mut poly: Poly = (0..d).map(|i| code / q.pow(i as u32) % q).collect();
            poly.push(1);
            if poly[0] == 0 {
                continue;
            }
            let reducible = (1..=d / 2).any(|e| {
                out[e].iter().any(|g| poly_divrem(f, &poly, g).1.iter().all(|&c| c == 0))
            });
            if !reducible {
                out[d].push(poly);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducible_counts() {
        let g = GeneralLinear::new(3, 4).unwrap();
        assert_eq!(g.irreducibles(1).len(), 3);
        assert_eq!(g.irreducibles(2).len(), 6);
        assert_eq!(g.irreducibles(3).len(), 20);
    }

    #[test]
    fn inverse_and_det() {
        let g = GeneralLinear::new(3, 3).unwrap();
        let mut rng = rand::thread_rng();
        for _ in 0..50 {
            let a = g.random_element(&mut rng);
            let b = g.inv(&a).unwrap();
            assert_eq!(g.mul(&a, &b), g.identity());
        }
        assert_eq!(gl_order(2, 3), Some(48));
        assert_eq!(g.elements(DEFAULT_GROUP_BUDGET).unwrap().len(), 11232);
    }

    #[test]
    fn charpoly_of_companion() {
        let g = GeneralLinear::new(3, 4).unwrap();
        for f in g.irreducibles(3) {
            assert_eq!(&g.charpoly(&g.companion(f)), f);
        }
    }

    #[test]
    fn code_roundtrip() {
        let g = GeneralLinear::new(2, 9).unwrap();
        for code in [0u64, 17, 6560] {
            assert_eq!(g.encode(&g.decode(code)), code);
        }
    }
}
