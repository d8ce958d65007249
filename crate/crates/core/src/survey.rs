//! Finite-group surveys: distinction of supercuspidals over the rational
//! form `GL_n(F_q0)` and over the Levi `GL_r x GL_r`, Hom spaces of the
//! mirabolic representation, and reduction/lifting of parameters mod `ell`.
//!
//! Every survey returns its rows together with the list of expected
//! relations that failed, so callers decide how to report them.

use serde::Serialize;

use crate::chartab::{self, mirabolic_hom_dim, LeviCharacter};
use crate::error::{invalid, Result};
use crate::glgroup::{Mat, SubgroupKind, DEFAULT_GROUP_BUDGET, DEFAULT_SUBGROUP_BUDGET};
use crate::mchar::{self, MultChar};

/// Enumeration limits passed down from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budgets {
    pub group: u64,
    pub subgroup: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { group: DEFAULT_GROUP_BUDGET, subgroup: DEFAULT_SUBGROUP_BUDGET }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GowRow {
    pub orbit_rep: u128,
    pub character: usize,
    pub dim: u64,
    pub sigma_selfdual: bool,
    pub distinction_dim: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GowSurvey {
    pub n: usize,
    pub q0: u64,
    pub rows: Vec<GowRow>,
    /// Largest `dim Hom_{GL_n(F_q0)}(chi, 1)` over all irreducibles.
    pub max_dim_all_irreducibles: u64,
    pub failures: Vec<String>,
}

impl GowSurvey {
    pub fn selfdual_count(&self) -> usize {
        self.rows.iter().filter(|r| r.sigma_selfdual).count()
    }
}

/// All supercuspidals of `GL_n(F_{q0^2})` with their sigma-selfduality and
/// distinction by `GL_n(F_q0)`.
pub fn gow_survey(n: usize, q0: u64, budgets: &Budgets) -> Result<GowSurvey> {
    let q = q0.checked_mul(q0).ok_or_else(|| crate::Error::InvalidInput("q0^2 overflows".into()))?;
    let table = chartab::cached_table_with_budget(n, q, budgets.group)?;
    let g = table.group();
    let k0 = g.field().k() / 2;
    let h = g.build_subgroup(SubgroupKind::RationalForm { sub_degree: k0 }, budgets.subgroup)?;
    let counts = table.class_counts(&h.elements);
    let h_order = h.order();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (a, chi) in table.green_assignment()? {
        let sd = MultChar::new(q as u128, n as u32, a)?.is_sigma_selfdual(q0 as u128)?;
        let d = table.distinction_dim_counts(chi, &counts, h_order)?;
        if (d == 1) != sd || d > 1 {
            failures.push(format!("orbit {a}: sigma-selfdual {sd} but distinction dim {d}"));
        }
        rows.push(GowRow { orbit_rep: a, character: chi, dim: table.dims()[chi], sigma_selfdual: sd, distinction_dim: d });
    }
    let mut max_all = 0;
    for chi in 0..table.len() {
        max_all = max_all.max(table.distinction_dim_counts(chi, &counts, h_order)?);
    }
    if max_all > 1 {
        failures.push(format!("some irreducible has distinction dim {max_all} > 1"));
    }
    let expected = mchar::count_sigma_selfdual_supercuspidals(q0 as u128, n as u32)?;
    let found = rows.iter().filter(|r| r.sigma_selfdual).count();
    if expected != found {
        failures.push(format!("{found} sigma-selfdual rows, parameter count {expected}"));
    }
    Ok(GowSurvey { n, q0, rows, max_dim_all_irreducibles: max_all, failures })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeviRow {
    pub orbit_rep: u128,
    pub character: usize,
    pub dim: u64,
    pub selfdual: bool,
    pub distinction_dim: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LeviSurvey {
    pub n: usize,
    pub q: u64,
    pub rows: Vec<LeviRow>,
    /// Largest Levi distinction dimension over all irreducibles; only the
    /// cuspidal ones are bounded by 1.
    pub max_dim_all_irreducibles: u64,
    pub failures: Vec<String>,
}

impl LeviSurvey {
    pub fn selfdual_count(&self) -> usize {
        self.rows.iter().filter(|r| r.selfdual).count()
    }
}

/// Supercuspidals of `GL_n(F_q)`, `n = 2r`, against `GL_r x GL_r`.
pub fn levi_survey(n: usize, q: u64, budgets: &Budgets) -> Result<LeviSurvey> {
    if !n.is_multiple_of(2) || n == 0 {
        return invalid(format!("the Levi survey needs n even, got {n}"));
    }
    let r = n / 2;
    let table = chartab::cached_table_with_budget(n, q, budgets.group)?;
    let g = table.group();
    let h = g.build_subgroup(SubgroupKind::Levi { r, s: r }, budgets.subgroup)?;
    let counts = table.class_counts(&h.elements);
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (a, chi) in table.green_assignment()? {
        let sd = MultChar::new(q as u128, n as u32, a)?.is_selfdual();
        let d = table.distinction_dim_counts(chi, &counts, h.order())?;
        if d > 1 {
            failures.push(format!("cuspidal orbit {a} has Levi distinction dim {d} > 1"));
        }
        if (d == 1) != sd {
            failures.push(format!("orbit {a}: selfdual {sd} but distinction dim {d}"));
        }
        rows.push(LeviRow { orbit_rep: a, character: chi, dim: table.dims()[chi], selfdual: sd, distinction_dim: d });
    }
    let mut max_all = 0;
    for chi in 0..table.len() {
        max_all = max_all.max(table.distinction_dim_counts(chi, &counts, h.order())?);
    }
    Ok(LeviSurvey { n, q, rows, max_dim_all_irreducibles: max_all, failures })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeviCharRow {
    pub r: usize,
    pub s: usize,
    pub alpha: u64,
    pub beta: u64,
    pub orbit_rep: u128,
    pub dim: u64,
}

/// `dim Hom_{GL_r x GL_s}(rho, alpha o det (x) beta o det)` for every
/// cuspidal `rho` of `GL_n(F_q)`, every `r > s >= 0` with `r + s = n`, and
/// all `alpha, beta`. All of them should vanish for `n >= 2`.
pub fn levi_character_survey(n: usize, q: u64, budgets: &Budgets) -> Result<(Vec<LeviCharRow>, Vec<String>)> {
    if n < 2 {
        return invalid("needs n >= 2");
    }
    let table = chartab::cached_table_with_budget(n, q, budgets.group)?;
    let g = table.group().clone();
    let assignment = table.green_assignment()?;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for r in n.div_ceil(2)..=n {
        let s = n - r;
        if r == s {
            continue;
        }
        let levi = g.build_subgroup(SubgroupKind::Levi { r, s }, budgets.subgroup)?;
        // log det of each block, so every character is a linear combination
        let logs: Vec<(Mat, u64, u64)> = levi
            .elements
            .iter()
            .map(|m| {
                let a = LeviCharacter { alpha: 1, beta: 0 }.exponent_at(&g, m, r)?;
                let b = LeviCharacter { alpha: 0, beta: 1 }.exponent_at(&g, m, r)?;
                Ok((*m, a, b))
            })
            .collect::<Result<_>>()?;
        let qm1 = q - 1;
        let betas = if s == 0 { 1 } else { qm1 };
        for alpha in 0..qm1 {
            for beta in 0..betas {
                let h: Vec<(Mat, u64)> = logs.iter().map(|(m, a, b)| (*m, (alpha * a + beta * b) % qm1)).collect();
                for &(orbit, chi) in &assignment {
                    let d = table.twisted_distinction_dim(chi, &h, qm1 as u32)?;
                    if d != 0 {
                        failures.push(format!("r={r} s={s} alpha={alpha} beta={beta} orbit {orbit}: dim {d}"));
                    }
                    rows.push(LeviCharRow { r, s, alpha, beta, orbit_rep: orbit, dim: d });
                }
            }
        }
    }
    Ok((rows, failures))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MirabolicRow {
    pub r: usize,
    pub s: usize,
    pub alpha: u64,
    pub beta: u64,
    pub dim: u64,
}

/// `dim Hom_{P ∩ H_{r,s}}(Gamma, chi)` for `r >= s`, `r + s = n`: with the
/// trivial character when `r = s` (expected 1), with every `alpha, beta`
/// otherwise (expected 0).
pub fn mirabolic_survey(n: usize, q: u64) -> Result<(Vec<MirabolicRow>, Vec<String>)> {
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for r in n.div_ceil(2)..=n {
        let s = n - r;
        let chars: Vec<(u64, u64)> = if r == s {
            vec![(0, 0)]
        } else {
            let betas = if s == 0 { 1 } else { q - 1 };
            (0..q - 1).flat_map(|a| (0..betas).map(move |b| (a, b))).collect()
        };
        for (alpha, beta) in chars {
            let dim = mirabolic_hom_dim(n, q, r, s, LeviCharacter { alpha, beta })?;
            let want = u64::from(r == s);
            if dim != want {
                failures.push(format!("r={r} s={s} alpha={alpha} beta={beta}: dim {dim}, expected {want}"));
            }
            rows.push(MirabolicRow { r, s, alpha, beta, dim });
        }
    }
    Ok((rows, failures))
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ModularReport {
    pub ell: u64,
    /// Prime-to-`ell` part of `q^n - 1`.
    pub modulus: u128,
    pub exponents: usize,
    pub supercuspidal_reductions: usize,
    /// Regular sigma-selfdual exponents modulo `modulus`.
    pub selfdual_reduced: Vec<u128>,
    pub lifts: Vec<(u128, u128)>,
    pub failures: Vec<String>,
}

/// Exhaustive reduction and lifting checks for `GL_n(F_{q0^2})` mod `ell`.
pub fn modular_survey(q0: u64, n: u32, ell: u64) -> Result<ModularReport> {
    let q = (q0 * q0) as u128;
    let full = q.pow(n) - 1;
    let ell128 = ell as u128;
    let (m, _) = crate::arith::split_prime_part(full, ell128);
    let mut rep = ModularReport { ell, modulus: m, ..Default::default() };
    let divisors: Vec<u32> = (1..n).filter(|d| n.is_multiple_of(*d)).collect();
    for a in 0..full {
        let c = MultChar::new(q, n, a)?;
        let red = c.reduce_mod_ell(ell128)?;
        let sc = c.reduction_is_supercuspidal(ell128)?;
        // second route: the reduction is regular iff it factors through
        // no norm to a proper subfield
        let mut through_norm = false;
        for &d in &divisors {
            through_norm |= red.factors_through_norm(d)?;
        }
        if sc == through_norm {
            rep.failures.push(format!("a={a}: regularity of the reduction disagrees with the norm test"));
        }
        let orbit_red = MultChar::new(q, n, c.orbit_rep())?.reduce_mod_ell(ell128)?;
        if orbit_red.orbit_rep() != red.orbit_rep() {
            rep.failures.push(format!("a={a}: reduction does not commute with orbits"));
        }
        rep.exponents += 1;
        rep.supercuspidal_reductions += usize::from(sc);
    }
    for r in 0..m {
        let c = MultChar::with_modulus(q, n, m, r)?;
        if c.is_regular() && c.is_sigma_selfdual(q0 as u128)? {
            rep.selfdual_reduced.push(r);
            match mchar::lift_sigma_selfdual(r, q0 as u128, n, ell128) {
                Ok(l) => {
                    let back = l.reduce_mod_ell(ell128)?.exp;
                    if back != r || !l.is_regular() || !l.is_sigma_selfdual(q0 as u128)? {
                        rep.failures.push(format!("lift {} of {r} does not round-trip", l.exp));
                    }
                    rep.lifts.push((r, l.exp));
                }
                Err(e) => rep.failures.push(format!("no lift of {r}: {e}")),
            }
        }
    }
    if rep.selfdual_reduced.is_empty() {
        // nothing to lift; lifting any exponent must then be refused
        if mchar::lift_sigma_selfdual(0, q0 as u128, n, ell128).is_ok() {
            rep.failures.push("lifting succeeded although no reduced exponent qualifies".into());
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gow_small() {
        let s = gow_survey(1, 3, &Budgets::default()).unwrap();
        assert!(s.failures.is_empty(), "{:?}", s.failures);
        assert_eq!(s.rows.len(), 8);
    }

    #[test]
    fn levi_gl2_f3() {
        let s = levi_survey(2, 3, &Budgets::default()).unwrap();
        assert!(s.failures.is_empty(), "{:?}", s.failures);
        assert_eq!(s.rows.len(), 3);
        assert_eq!(s.selfdual_count(), 1);
        // the Steinberg character has two torus-invariant vectors
        assert_eq!(s.max_dim_all_irreducibles, 2);
        let (_, f) = levi_character_survey(2, 3, &Budgets::default()).unwrap();
        assert!(f.is_empty(), "{f:?}");
    }

    #[test]
    fn modular_gl3_f4() {
        let r = modular_survey(2, 3, 7).unwrap();
        assert!(r.failures.is_empty(), "{:?}", r.failures);
        assert!(r.lifts.contains(&(1, 28)));
        let r = modular_survey(2, 3, 3).unwrap();
        assert!(r.failures.is_empty(), "{:?}", r.failures);
        assert!(r.selfdual_reduced.is_empty());
    }
}
