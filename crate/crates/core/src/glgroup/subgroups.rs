use std::collections::HashSet;
use std::sync::Arc;

use super::{gl_order, GeneralLinear, Mat, Poly};
use crate::error::{invalid, Error, Result};
use crate::ffield::{self, FqField};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SubgroupKind {
    /// `GL_n` of the subfield of degree `sub_degree` over the prime field.
    RationalForm { sub_degree: u32 },
    /// Block-diagonal `GL_r x GL_s`.
    Levi { r: usize, s: usize },
    /// `w_{r,s} (GL_r x GL_s) w_{r,s}^{-1}`.
    H { r: usize, s: usize },
    /// Last row `(0 ... 0 1)`.
    Mirabolic,
    UnipotentUpper,
    DiagonalTorus,
    /// `F_{q^n}^x` through the companion matrix of its generator.
    EllipticTorus,
    /// Block-upper unitriangular matrices for a composition of `n`.
    UnipotentRadical(Vec<usize>),
}

/// An explicitly enumerated subgroup.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub kind: SubgroupKind,
    pub elements: Vec<Mat>,
}

impl Subgroup {
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    /// Elements lying in both subgroups.
    pub fn intersect(&self, other: &Subgroup) -> Vec<Mat> {
        let set: HashSet<&Mat> = other.elements.iter().collect();
        self.elements.iter().filter(|m| set.contains(m)).copied().collect()
    }

    /// Closure under products and inverses, checked exhaustively.
    pub fn is_closed(&self, g: &GeneralLinear) -> bool {
        let set: HashSet<&Mat> = self.elements.iter().collect();
        self.elements.iter().all(|a| {
            set.contains(&g.inv(a).unwrap())
                && self.elements.iter().all(|b| set.contains(&g.mul(a, b)))
        })
    }
}

/// The permutation `w_{r,s}` of `{0, ..., n-1}` and its matrix, which sends
/// basis vector `e_i` to `e_{pi(i)}`.
///
/// With `t = r - s + 1` (one-based): `i -> i` for `i <= t`,
/// `t + i -> t + 2i` for `1 <= i <= s - 1`, `r + 1 + j -> t + 1 + 2j` for
/// `0 <= j <= s - 2`, and `n -> n`. For `s = 0` it is the identity.
pub fn w_perm(r: usize, s: usize) -> Result<(Vec<usize>, Mat)> {
    if r < s {
        return invalid(format!("w_perm needs r >= s, got r={r}, s={s}"));
    }
    let n = r + s;
    if !(2..=super::MAX_N).contains(&n) {
        return invalid(format!("w_perm needs 2 <= r + s <= {}", super::MAX_N));
    }
    let mut pi: Vec<usize> = (1..=n).collect();
    if s >= 1 {
        let t = r - s + 1;
        for i in 1..s {
            pi[t + i - 1] = t + 2 * i;
        }
        for j in 0..s.saturating_sub(1) {
            pi[r + j] = t + 1 + 2 * j;
        }
    }
    let pi: Vec<usize> = pi.into_iter().map(|x| x - 1).collect();
    let mut seen = vec![false; n];
    for &x in &pi {
        if seen[x] {
            return Err(Error::Invariant(format!("w_{r},{s} is not a permutation: {pi:?}")));
        }
        seen[x] = true;
    }
    let mut w = Mat::zero(n);
    for (i, &x) in pi.iter().enumerate() {
        w.set(x, i, 1);
    }
    Ok((pi, w))
}

/// `F_{q^n}^x` realized inside `GL_n(F_q)`: `theta^j -> C^j` with `C` the
/// companion matrix of the minimal polynomial of the generator `theta`.
pub struct EllipticModel {
    pub big: Arc<FqField>,
    pub min_poly: Poly,
    pub companion: Mat,
}

impl EllipticModel {
    pub fn new(g: &GeneralLinear) -> Result<EllipticModel> {
        let small = g.field();
        let big = ffield::build_field(small.p(), small.k() * g.n() as u32)?;
        let theta = big.generator();
        let q = small.size() as u128;
        let mut poly = vec![1u32];
        let mut root = theta;
        for _ in 0..g.n() {
            let neg = big.neg(root);
            let mut next = vec![0u32; poly.len() + 1];
            for (i, &c) in poly.iter().enumerate() {
                next[i + 1] = big.add(next[i + 1], c);
                next[i] = big.add(next[i], big.mul(neg, c));
            }
            poly = next;
            root = big.pow(root, q);
        }
        let e = (big.size() as u128 - 1) / (q - 1);
        let min_poly = poly
            .iter()
            .map(|&c| match big.log(c) {
                None => Ok(0),
                Some(j) if (j as u128).is_multiple_of(e) => Ok(small.exp(j as u128 / e)),
                Some(_) => Err(Error::Invariant("minimal polynomial not over F_q".into())),
            })
            .collect::<Result<Poly>>()?;
        let companion = g.companion(&min_poly);
        Ok(EllipticModel { big, min_poly, companion })
    }

    /// `C^j` for `j` in `0..q^n - 1`.
    pub fn powers(&self, g: &GeneralLinear) -> Vec<Mat> {
        let count = self.big.unit_order() as usize;
        let mut out = Vec::with_capacity(count);
        let mut x = g.identity();
        for _ in 0..count {
            out.push(x);
            x = g.mul(&x, &self.companion);
        }
        out
    }

    /// Whether `theta^j` generates `F_{q^n}` over `F_q`, i.e. `C^j` has
    /// irreducible characteristic polynomial.
    pub fn is_regular_power(&self, g: &GeneralLinear, j: u128) -> bool {
        let x = self.big.exp(j);
        let d = g.field().k();
        let n = g.n() as u32;
        (1..n).filter(|e| n.is_multiple_of(*e)).all(|e| !self.big.lies_in_subfield(x, d * e))
    }
}

fn cartesian_rows(g: &GeneralLinear, free: &[(usize, usize)], base: Mat, budget: u64) -> Result<Vec<Mat>> {
    let q = g.q();
    let total = (q as u128).checked_pow(free.len() as u32).unwrap_or(u128::MAX);
    if total > budget as u128 {
        return Err(Error::Budget(format!("{total} elements exceed the subgroup budget {budget}")));
    }
    let mut out = Vec::with_capacity(total as usize);
    for code in 0..total as u64 {
        let mut m = base;
        let mut c = code;
        for &(i, j) in free {
            m.set(i, j, (c % q) as u32);
            c /= q;
        }
        out.push(m);
    }
    Ok(out)
}

impl GeneralLinear {
    /// Closed-form order of a subgroup kind, if defined for this group.
    pub fn subgroup_order(&self, kind: &SubgroupKind) -> Result<u64> {
        let (n, q) = (self.n(), self.q());
        let ord = |m: usize, qq: u64| gl_order(m, qq).ok_or_else(|| Error::Budget("order overflow".into()));
        Ok(match kind {
            SubgroupKind::RationalForm { sub_degree } => {
                let k = self.field().k();
                if *sub_degree == 0 || !k.is_multiple_of(*sub_degree) {
                    return invalid(format!("degree {sub_degree} does not divide {k}"));
                }
                ord(n, (self.field().p() as u64).pow(*sub_degree))?
            }
            SubgroupKind::Levi { r, s } | SubgroupKind::H { r, s } => {
                if r + s != n {
                    return invalid(format!("r + s = {} differs from n = {n}", r + s));
                }
                ord(*r, q)? * if *s == 0 { 1 } else { ord(*s, q)? }
            }
            SubgroupKind::Mirabolic => {
                if n < 2 {
                    return invalid("mirabolic needs n >= 2");
                }
                ord(n - 1, q)? * q.pow(n as u32 - 1)
            }
            SubgroupKind::UnipotentUpper => q.pow((n * (n - 1) / 2) as u32),
            SubgroupKind::DiagonalTorus => (q - 1).pow(n as u32),
            SubgroupKind::EllipticTorus => q.pow(n as u32) - 1,
            SubgroupKind::UnipotentRadical(comp) => {
                if comp.iter().sum::<usize>() != n || comp.contains(&0) {
                    return invalid(format!("{comp:?} is not a composition of {n}"));
                }
                let mut dim = 0;
                for i in 0..comp.len() {
                    for j in i + 1..comp.len() {
                        dim += comp[i] * comp[j];
                    }
                }
                q.pow(dim as u32)
            }
        })
    }

    /// Enumerates a subgroup and checks its order against the closed form.
    pub fn build_subgroup(&self, kind: SubgroupKind, budget: u64) -> Result<Subgroup> {
        let expected = self.subgroup_order(&kind)?;
        if expected > budget {
            return Err(Error::Budget(format!("subgroup order {expected} exceeds budget {budget}")));
        }
        let n = self.n();
        let elements = match &kind {
            SubgroupKind::RationalForm { sub_degree } => {
                let sub = ffield::build_field(self.field().p(), *sub_degree)?;
                let small = GeneralLinear::with_field(n, sub.clone())?;
                small
                    .elements(budget)?
                    .into_iter()
                    .map(|m| {
                        let mut out = Mat::zero(n);
                        for i in 0..n {
                            for j in 0..n {
                                out.set(i, j, self.field().embed_from(&sub, m.get(i, j)).unwrap());
                            }
                        }
                        out
                    })
                    .collect()
            }
            SubgroupKind::Levi { r, s } => self.levi_elements(*r, *s, budget)?,
            SubgroupKind::H { r, s } => {
                let (_, w) = if *s == 0 { (vec![], Mat::identity(n)) } else { w_perm(*r, *s)? };
                let wi = self.inv(&w)?;
                self.levi_elements(*r, *s, budget)?
                    .iter()
                    .map(|m| self.mul(&self.mul(&w, m), &wi))
                    .collect()
            }
            SubgroupKind::Mirabolic => {
                let sub = GeneralLinear::with_field(n - 1, self.field().clone())?;
                let mut out = Vec::new();
                for a in sub.elements(budget)? {
                    let mut base = Mat::identity(n);
                    for i in 0..n - 1 {
                        for j in 0..n - 1 {
                            base.set(i, j, a.get(i, j));
                        }
                    }
                    let free: Vec<_> = (0..n - 1).map(|i| (i, n - 1)).collect();
                    out.extend(cartesian_rows(self, &free, base, budget)?);
                }
                out
            }
            SubgroupKind::UnipotentUpper => {
                let free: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
                cartesian_rows(self, &free, Mat::identity(n), budget)?
            }
            SubgroupKind::UnipotentRadical(comp) => {
                let mut block = Vec::new();
                for (b, &len) in comp.iter().enumerate() {
                    block.extend(std::iter::repeat_n(b, len));
                }
                let free: Vec<_> = (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| block[i] < block[j])
                    .collect();
                cartesian_rows(self, &free, Mat::identity(n), budget)?
            }
            SubgroupKind::DiagonalTorus => {
                let units = self.field().unit_order() as u64;
                let total = units.pow(n as u32);
                (0..total)
                    .map(|mut c| {
                        let mut m = Mat::zero(n);
                        for i in 0..n {
                            m.set(i, i, self.field().exp((c % units) as u128));
                            c /= units;
                        }
                        m
                    })
                    .collect()
            }
            SubgroupKind::EllipticTorus => EllipticModel::new(self)?.powers(self),
        };
        let sg = Subgroup { kind, elements };
        if sg.order() != expected {
            return Err(Error::Invariant(format!(
                "{:?} enumerated {} elements, expected {expected}",
                sg.kind,
                sg.order()
            )));
        }
        Ok(sg)
    }

    fn levi_elements(&self, r: usize, s: usize, budget: u64) -> Result<Vec<Mat>> {
        let n = self.n();
        if r + s != n {
            return invalid(format!("r + s = {} differs from n = {n}", r + s));
        }
        if s == 0 {
            return self.elements(budget);
        }
        if r == 0 {
            return invalid("r must be positive");
        }
        let a = GeneralLinear::with_field(r, self.field().clone())?.elements(budget)?;
        let b = GeneralLinear::with_field(s, self.field().clone())?.elements(budget)?;
        let mut out = Vec::with_capacity(a.len() * b.len());
        for x in &a {
            for y in &b {
                out.push(Mat::block_diag(x, y));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w_perm_examples() {
        assert_eq!(w_perm(2, 1).unwrap().0, vec![0, 1, 2]);
        assert_eq!(w_perm(1, 1).unwrap().0, vec![0, 1]);
        assert_eq!(w_perm(2, 2).unwrap().0, vec![0, 2, 1, 3]);
        assert!(w_perm(1, 2).is_err());
    }

    #[test]
    fn subgroup_orders() {
        let g = GeneralLinear::new(2, 3).unwrap();
        assert_eq!(g.build_subgroup(SubgroupKind::Mirabolic, 1000).unwrap().order(), 6);
        let g = GeneralLinear::new(3, 4).unwrap();
        let h = g.build_subgroup(SubgroupKind::RationalForm { sub_degree: 1 }, 1000).unwrap();
        assert_eq!(h.order(), 168);
        let t = g.build_subgroup(SubgroupKind::EllipticTorus, 1000).unwrap();
        assert_eq!(t.order(), 63);
        assert!(t.is_closed(&g));
    }

    #[test]
    fn h11_is_diagonal_torus() {
        let g = GeneralLinear::new(2, 5).unwrap();
        let h = g.build_subgroup(SubgroupKind::H { r: 1, s: 1 }, 1000).unwrap();
        let t = g.build_subgroup(SubgroupKind::DiagonalTorus, 1000).unwrap();
        let mut a = h.elements.clone();
        let mut b = t.elements.clone();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn psi_is_a_character_on_n() {
        let g = GeneralLinear::new(3, 3).unwrap();
        let u = g.build_subgroup(SubgroupKind::UnipotentUpper, 1000).unwrap();
        for a in &u.elements {
            for b in &u.elements {
                let lhs = g.psi_exponent(&g.mul(a, b));
                assert_eq!(lhs, (g.psi_exponent(a) + g.psi_exponent(b)) % 3);
            }
        }
        assert_eq!(g.psi_exponent(&g.identity()), 0);
    }
}
