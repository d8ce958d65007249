//! The representation `Gamma = Ind_N^P psi` of the mirabolic subgroup and
//! its Hom spaces against characters of `H_{r,s}`.

use std::collections::HashSet;
use std::sync::Arc;

use rayon::prelude::*;

use super::cyclotomic::Cyclotomic;
use crate::error::{invalid, Error, Result};
use crate::glgroup::{w_perm, GeneralLinear, Mat, SubgroupKind};

/// `alpha o det (x) beta o det` on `GL_r x GL_s`, exponents mod `q - 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LeviCharacter {
    pub alpha: u64,
    pub beta: u64,
}

impl LeviCharacter {
    pub const TRIVIAL: LeviCharacter = LeviCharacter { alpha: 0, beta: 0 };

    /// Exponent of the value at a block-diagonal `diag(A, B)`, with
    /// `A` of size `r`; the value is `zeta_{q-1}^e`.
    pub fn exponent_at(&self, g: &GeneralLinear, m: &Mat, r: usize) -> Result<u64> {
        let n = g.n();
        let f = g.field();
        let block_det = |lo: usize, hi: usize| -> Result<u128> {
            if lo == hi {
                return Ok(0);
            }
            let sub = GeneralLinear::with_field(hi - lo, f.clone())?;
            let mut b = Mat::zero(hi - lo);
            for i in lo..hi {
                for j in lo..hi {
                    b.set(i - lo, j - lo, m.get(i, j));
                }
            }
            f.log(sub.det(&b)).map(u128::from).ok_or_else(|| Error::InvalidInput("singular Levi block".into()))
        };
        let qm1 = g.q() as u128 - 1;
        let e = (self.alpha as u128 % qm1) * block_det(0, r)? + (self.beta as u128 % qm1) * block_det(r, n)?;
        Ok((e % qm1) as u64)
    }
}

/// Values of `Gamma` at the given elements of `P`, from the induction sum
/// over `x in P` with `x g x^{-1} in N`.
pub fn gamma_on(g: &Arc<GeneralLinear>, at: &[Mat]) -> Result<Vec<Cyclotomic>> {
    let p_elems = g.build_subgroup(SubgroupKind::Mirabolic, crate::glgroup::DEFAULT_SUBGROUP_BUDGET)?.elements;
    let n_elems = g.build_subgroup(SubgroupKind::UnipotentUpper, crate::glgroup::DEFAULT_SUBGROUP_BUDGET)?.elements;
    let n_set: HashSet<&Mat> = n_elems.iter().collect();
    let p = g.field().p();
    at.par_iter()
        .map(|h| {
            let mut acc = Cyclotomic::zero(p);
            for x in &p_elems {
                let y = g.conjugate(h, x)?;
                if n_set.contains(&y) {
                    acc = acc.add(&Cyclotomic::root(p, g.psi_exponent(&y) as i64));
                }
            }
            Ok(acc.scale(1, n_elems.len() as i128))
        })
        .collect()
}

/// `dim Hom_{P ∩ H_{r,s}}(Gamma, chi)` by an explicit character sum.
pub fn mirabolic_hom_dim(n: usize, q: u64, r: usize, s: usize, chi: LeviCharacter) -> Result<u64> {
    if q.is_multiple_of(2) {
        return invalid("mirabolic Hom spaces are only computed for odd q");
    }
    if r + s != n || r < s || n < 2 {
        return invalid(format!("need r + s = n >= 2 and r >= s, got r={r} s={s} n={n}"));
    }
    let g = GeneralLinear::new(n, q)?;
    let budget = crate::glgroup::DEFAULT_SUBGROUP_BUDGET;
    let h = g.build_subgroup(SubgroupKind::H { r, s }, budget)?;
    let p = g.build_subgroup(SubgroupKind::Mirabolic, budget)?;
    let meet = p.intersect(&h);
    let w = if s == 0 { Mat::identity(n) } else { w_perm(r, s)?.1 };
    let wi = g.inv(&w)?;
    let gamma = gamma_on(&g, &meet)?;
    let qm1 = (q - 1) as u32;
    let mut acc = Cyclotomic::zero(1);
    for (m, v) in meet.iter().zip(&gamma) {
        // w^{-1} h w is block diagonal
        let levi = g.mul(&g.mul(&wi, m), &w);
        let e = chi.exponent_at(&g, &levi, r)?;
        acc = acc.add(&v.mul(&Cyclotomic::root(qm1, -(e as i64))));
    }
    let dim = acc.scale(1, meet.len() as i128);
    match dim.to_rational() {
        Some((d, 1)) if d >= 0 => Ok(d as u64),
        _ => Err(Error::Invariant(format!("mirabolic Hom dimension {dim} is not a non-negative integer"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_gl2_f3() {
        let g = GeneralLinear::new(2, 3).unwrap();
        let d = Mat::from_rows(&[vec![2, 0], vec![0, 1]]);
        let v = gamma_on(&g, &[g.identity(), d]).unwrap();
        assert_eq!(v[0], Cyclotomic::from_int(2));
        assert!(v[1].is_zero());
    }

    #[test]
    fn small_hom_dims() {
        assert_eq!(mirabolic_hom_dim(2, 3, 1, 1, LeviCharacter::TRIVIAL).unwrap(), 1);
        assert_eq!(mirabolic_hom_dim(2, 3, 2, 0, LeviCharacter::TRIVIAL).unwrap(), 0);
        assert_eq!(mirabolic_hom_dim(3, 3, 2, 1, LeviCharacter::TRIVIAL).unwrap(), 0);
        assert!(mirabolic_hom_dim(2, 4, 1, 1, LeviCharacter::TRIVIAL).is_err());
    }
}
