//! Seeded randomized property suites and the full self-check run by
//! `gldist selftest`.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith;
use crate::chartab::{self, Cyclotomic};
use crate::error::Result;
use crate::ffield::build_field;
use crate::glgroup::{GeneralLinear, Mat, SubgroupKind};
use crate::localtower::{self, ExtType, LevelZeroChar, RootOfUnity};
use crate::mchar::{self, MultChar};
use crate::survey::{self, Budgets};
use crate::verdict::{self, GridConfig, UnramifiedTwist};

/// Outcome of one named check.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CheckResult {
    pub name: String,
    pub trials: usize,
    pub failures: Vec<String>,
}

impl CheckResult {
    fn new(name: impl Into<String>) -> CheckResult {
        CheckResult { name: name.into(), trials: 0, failures: Vec::new() }
    }
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(msg());
        }
    }
    fn absorb(&mut self, failures: Vec<String>) {
        self.trials += 1;
        self.failures.extend(failures.into_iter().take(20));
    }
}

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ salt)
}

/// Orbits, regularity, norm factorization and reduction of exponents.
pub fn mchar_properties(seed: u64, trials: usize) -> Result<CheckResult> {
    let mut rng = rng_for(seed, 1);
    let mut res = CheckResult::new("mchar orbit/regularity/norm equivalence");
    let qs = [2u128, 3, 4, 5, 7, 8, 9];
    for _ in 0..trials {
        let q = *qs.choose(&mut rng).unwrap();
        let n = rng.gen_range(1..=6u32);
        let full = q.pow(n) - 1;
        let a = rng.gen_range(0..full);
        let c = MultChar::new(q, n, a)?;
        let orbit = c.galois_orbit();
        let size = orbit.len() as u32;
        res.check(n % size == 0 && c.orbit_size() == size, || format!("q={q} n={n} a={a}: orbit size {size}"));
        res.check(c.is_regular() == (size == n), || format!("q={q} n={n} a={a}: regularity vs orbit size"));
        let mut through = false;
        for d in (1..n).filter(|d| n % d == 0) {
            through |= c.factors_through_norm(d)?;
        }
        res.check(c.is_regular() != through, || format!("q={q} n={n} a={a}: regularity vs norm factorization"));
        let rep = c.orbit_rep();
        res.check(
            orbit.iter().all(|&b| MultChar::new(q, n, b).map(|x| x.orbit_rep()).ok() == Some(rep)),
            || format!("q={q} n={n} a={a}: orbit reps differ"),
        );
        let ell = *[2u128, 3, 5, 7, 11, 13].iter().filter(|&&l| !q.is_multiple_of(l)).collect::<Vec<_>>().choose(&mut rng).unwrap();
        let red = c.reduce_mod_ell(*ell)?.orbit_rep();
        res.check(
            orbit.iter().all(|&b| MultChar::new(q, n, b).and_then(|x| x.reduce_mod_ell(*ell)).map(|x| x.orbit_rep()).ok() == Some(red)),
            || format!("q={q} n={n} a={a}: reduction mod {ell} not constant on the orbit"),
        );
    }
    Ok(res)
}

/// Parity constraints on sigma-selfdual and selfdual regular orbits.
pub fn mchar_parity(res: &mut CheckResult) -> Result<()> {
    for q0 in [2u128, 3, 4, 5] {
        for n in 1..=6u32 {
            let c = mchar::count_sigma_selfdual_supercuspidals(q0, n)?;
            res.check(c == 0 || n % 2 == 1, || format!("q0={q0} n={n}: {c} sigma-selfdual orbits for even n"));
            let sd = mchar::regular_orbits(q0, n)?
                .into_iter()
                .filter(|&a| MultChar::new(q0, n, a).map(|c| c.is_selfdual()).unwrap_or(false))
                .count();
            res.check(sd == 0 || n == 1 || n % 2 == 0, || format!("q={q0} n={n}: {sd} selfdual orbits for odd n > 1"));
        }
    }
    Ok(())
}

/// Embeddings and norms compose along towers `F_{p^d} ⊂ F_{p^e} ⊂ F_{p^k}`.
pub fn ffield_properties(seed: u64, trials: usize) -> Result<CheckResult> {
    let mut rng = rng_for(seed, 2);
    let mut res = CheckResult::new("ffield embedding/norm transitivity");
    let towers: [(u32, u32, u32, u32); 8] =
        [(2, 1, 2, 4), (2, 1, 3, 6), (2, 2, 4, 8), (2, 1, 2, 6), (3, 1, 2, 4), (3, 1, 3, 6), (5, 1, 2, 4), (7, 1, 2, 4)];
    for _ in 0..trials {
        let (p, d, e, k) = *towers.choose(&mut rng).unwrap();
        let (fd, fe, fk) = (build_field(p, d)?, build_field(p, e)?, build_field(p, k)?);
        let x = rng.gen_range(0..fd.size());
        let y = rng.gen_range(0..fd.size());
        let direct = fk.embed_from(&fd, x)?;
        let staged = fk.embed_from(&fe, fe.embed_from(&fd, x)?)?;
        res.check(direct == staged, || format!("p={p} {d}<{e}<{k}: embedding of {x} not transitive"));
        let hom = fk.embed_from(&fd, fd.add(x, y))? == fk.add(direct, fk.embed_from(&fd, y)?)
            && fk.embed_from(&fd, fd.mul(x, y))? == fk.mul(direct, fk.embed_from(&fd, y)?);
        res.check(hom, || format!("p={p} {d}<{k}: embedding not a ring map at {x}, {y}"));
        let z = rng.gen_range(1..fk.size());
        let w = rng.gen_range(1..fk.size());
        let n_direct = fk.norm_to(&fd, z)?;
        let n_staged = fe.norm_to(&fd, fk.norm_to(&fe, z)?)?;
        res.check(n_direct == n_staged, || format!("p={p} {d}<{e}<{k}: norm of {z} not transitive"));
        res.check(
            fk.norm_to(&fd, fk.mul(z, w))? == fd.mul(n_direct, fk.norm_to(&fd, w)?),
            || format!("p={p}: norm not multiplicative at {z}, {w}"),
        );
        res.check(
            fk.norm_to(&fd, direct)? == fd.pow(x, (k / d) as u128),
            || format!("p={p}: norm of embedded {x} is not its power"),
        );
    }
    Ok(res)
}

/// `class_of` is constant on conjugacy classes and matches representatives.
pub fn class_invariance(seed: u64, trials: usize) -> Result<CheckResult> {
    let mut rng = rng_for(seed, 3);
    let mut res = CheckResult::new("class_of conjugation invariance");
    let groups: Vec<_> = [(2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (2, 9), (4, 2), (3, 4)]
        .iter()
        .map(|&(n, q)| GeneralLinear::new(n, q))
        .collect::<Result<_>>()?;
    for _ in 0..trials {
        let g = groups.choose(&mut rng).unwrap();
        let a = g.random_element(&mut rng);
        let h = g.random_element(&mut rng);
        let key = g.class_of(&a)?;
        let conj = g.conjugate(&a, &h)?;
        res.check(g.class_of(&conj)? == key, || format!("GL_{}(F_{}): class changes under conjugation", g.n(), g.q()));
        let rep = g.class_representative(&key);
        res.check(
            g.class_of(&rep)? == key && g.charpoly(&rep) == g.charpoly(&a),
            || format!("GL_{}(F_{}): representative of {key} has another class", g.n(), g.q()),
        );
    }
    Ok(res)
}

/// `<Ind_H f, chi>_G = <f, Res_H chi>_H`.
pub fn frobenius_reciprocity(seed: u64, trials: usize) -> Result<CheckResult> {
    let mut rng = rng_for(seed, 4);
    let mut res = CheckResult::new("Frobenius reciprocity");
    let mut cases = Vec::new();
    for (n, q) in [(2usize, 3u64), (2, 4), (3, 2)] {
        let table = chartab::cached_table(n, q)?;
        let g = table.group().clone();
        let mut kinds = vec![
            (SubgroupKind::DiagonalTorus, true),
            (SubgroupKind::EllipticTorus, true),
            (SubgroupKind::UnipotentUpper, n == 2),
            (SubgroupKind::Mirabolic, false),
            (SubgroupKind::Levi { r: n - 1, s: 1 }, n == 2),
        ];
        if g.field().k() % 2 == 0 {
            kinds.push((SubgroupKind::RationalForm { sub_degree: g.field().k() / 2 }, false));
        }
        for (kind, abelian) in kinds {
            let h = g.build_subgroup(kind, crate::glgroup::DEFAULT_SUBGROUP_BUDGET)?;
            cases.push((table.clone(), h.elements, abelian));
        }
    }
    for t in 0..trials {
        let (table, h, abelian) = cases.choose(&mut rng).unwrap();
        let chi = table.character(rng.gen_range(0..table.len()));
        // on an abelian subgroup any function is a class function
        let f: Box<dyn Fn(&Mat) -> Cyclotomic + Sync> = if *abelian {
            let vals: HashMap<Mat, i128> = h.iter().map(|m| (*m, rng.gen_range(-3..=3))).collect();
            Box::new(move |m| Cyclotomic::from_int(vals[m]))
        } else {
            let psi = table.character(rng.gen_range(0..table.len())).clone();
            let tb = table.clone();
            Box::new(move |m| psi.values[tb.classes().class_index(m)].clone())
        };
        let ind = table.induce(h, &f)?;
        let lhs = table.inner_product(&ind, chi)?;
        let rhs = table.restricted_inner(h, &f, chi);
        res.check(lhs == rhs, || format!("trial {t}: <Ind f, chi> = {lhs}, <f, Res chi> = {rhs}"));
        let id = table.classes().identity_class();
        let index = (table.order() / h.len() as u64) as i128;
        res.check(
            ind.values[id] == f(&table.group().identity()).scale(index, 1),
            || format!("trial {t}: induced degree is not the index times f(1)"),
        );
        if t % 100 == 0 {
            let brute = table.induce_brute(h, &f)?;
            res.check(brute == ind, || format!("trial {t}: class-bucket induction differs from the direct sum"));
        }
    }
    Ok(res)
}

/// Degree identities, classification and quadratic characters on random
/// valid tower data, including twists.
pub fn tower_properties(seed: u64, trials: usize) -> Result<CheckResult> {
    let mut rng = rng_for(seed, 5);
    let mut res = CheckResult::new("tower degrees, delta0/epsilon0, twists");
    let towers = verdict::grid_towers(&GridConfig::default());
    let xis = [RootOfUnity::ONE, RootOfUnity::MINUS_ONE, RootOfUnity::QUARTER, RootOfUnity::THREE_QUARTERS];
    let mut done = 0;
    while done < trials {
        let s = towers.choose(&mut rng).unwrap();
        let (step, count) = localtower::sigma_selfdual_thetas(s)?;
        let x = LevelZeroChar { theta_exp: rng.gen_range(0..count) * step, xi_t: *xis.choose(&mut rng).unwrap() };
        if !localtower::validate_spec(s, &x, 0, true).is_empty() {
            continue;
        }
        done += 1;
        let d = localtower::tower_invariants(s);
        res.check(
            d.e_tf * d.e_ff0 == d.e_tt0 * s.e_t0 && d.f_tf * d.f_ff0 == d.f_tt0 * s.f_t0 && d.e_tt0 * d.f_tt0 == 2,
            || format!("{s:?}: degrees not multiplicative"),
        );
        let tt0 = localtower::classify_tt0(s);
        res.check(
            (localtower::classify_kk0(s) == ExtType::Ramified) == (tt0 == ExtType::Ramified && s.m == 1),
            || format!("{s:?}: K/K0 classification"),
        );
        let delta0 = localtower::compute_delta0(s, &x)?;
        if tt0 == ExtType::Unramified {
            res.check(localtower::compute_epsilon0(s, &x)? == delta0, || format!("{s:?} {x:?}: epsilon0 != delta0 on T0"));
        }
        let c = localtower::residue_card(s).unwrap();
        let q = localtower::big_q(s).unwrap();
        let y = LevelZeroChar { theta_exp: arith::mul_mod(x.theta_exp, c, q - 1), ..x };
        res.check(localtower::compute_delta0(s, &y)? == delta0, || format!("{s:?} {x:?}: delta0 depends on the orbit representative"));
        let order_two = UnramifiedTwist::new(RootOfUnity::MINUS_ONE);
        let trivial = UnramifiedTwist::new(RootOfUnity::ONE);
        res.check(
            verdict::twist(s, &verdict::twist(s, &x, &order_two), &order_two) == x && verdict::twist(s, &x, &trivial) == x,
            || format!("{s:?} {x:?}: twisting is not an action"),
        );
    }
    Ok(res)
}

/// Settings for [`run_all`].
#[derive(Clone, Debug)]
pub struct SelftestConfig {
    pub seed: u64,
    pub trials: usize,
    pub budgets: Budgets,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig { seed: 0, trials: 1000, budgets: Budgets::default() }
    }
}

/// The randomized property suites.
pub fn property_suites(seed: u64, trials: usize) -> Result<Vec<CheckResult>> {
    Ok(vec![
        mchar_properties(seed, trials)?,
        ffield_properties(seed, trials)?,
        class_invariance(seed, trials)?,
        frobenius_reciprocity(seed, trials)?,
        tower_properties(seed, trials)?,
    ])
}

/// Table invariants and Green matching for small groups.
pub fn table_checks(budgets: &Budgets) -> Result<CheckResult> {
    let mut res = CheckResult::new("character tables and Green correspondence");
    for (n, q) in [(1usize, 2u64), (1, 4), (1, 5), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3)] {
        let t = chartab::cached_table_with_budget(n, q, budgets.group)?;
        // verify() already ran at construction; repeat the cheap counts
        let sq: u64 = t.dims().iter().map(|d| d * d).sum();
        res.check(sq == t.order() && t.len() == t.classes().len(), || format!("GL_{n}(F_{q}): degree sum or count"));
        let reg = t.decompose(&t.regular_character())?;
        res.check(
            reg.iter().zip(t.dims()).all(|(m, &d)| *m == Cyclotomic::from_int(d as i128)),
            || format!("GL_{n}(F_{q}): regular character decomposition"),
        );
        let pairs = t.green_assignment()?;
        let orbits = mchar::regular_orbits(q as u128, n as u32)?.len();
        res.check(pairs.len() == orbits, || format!("GL_{n}(F_{q}): {} cuspidals for {orbits} orbits", pairs.len()));
        let full = (q as u128).pow(n as u32) - 1;
        for &(a, chi) in &pairs {
            let dual = t.green_match((full - a) % full)?;
            let conj: Vec<Cyclotomic> = t.character(chi).values.iter().map(|v| v.conj()).collect();
            res.check(t.character(dual).values == conj, || format!("GL_{n}(F_{q}): dual of orbit {a} is not the conjugate"));
        }
    }
    Ok(res)
}

/// Everything: property suites, tables, surveys, the verdict grid and the
/// level-zero cross-check.
pub fn run_all(cfg: &SelftestConfig) -> Result<Vec<CheckResult>> {
    let mut out = property_suites(cfg.seed, cfg.trials)?;
    let mut parity = CheckResult::new("parity of (sigma-)selfdual regular orbits");
    mchar_parity(&mut parity)?;
    out.push(parity);
    out.push(table_checks(&cfg.budgets)?);

    let mut gow = CheckResult::new("distinction over GL_n(F_q0)");
    for (n, q0) in [(1, 2), (1, 3), (3, 2), (2, 3)] {
        gow.absorb(survey::gow_survey(n, q0, &cfg.budgets)?.failures);
    }
    out.push(gow);
    let mut levi = CheckResult::new("distinction over GL_r x GL_r and Levi characters");
    for (n, q) in [(2, 3), (2, 9)] {
        levi.absorb(survey::levi_survey(n, q, &cfg.budgets)?.failures);
    }
    for (n, q) in [(2, 3), (3, 3)] {
        levi.absorb(survey::levi_character_survey(n, q, &cfg.budgets)?.1);
    }
    out.push(levi);
    let mut mir = CheckResult::new("mirabolic Hom spaces");
    for (n, q) in [(2, 3), (3, 3)] {
        mir.absorb(survey::mirabolic_survey(n, q)?.1);
    }
    out.push(mir);
    let mut modular = CheckResult::new("reduction and lifting mod ell");
    for ell in [3, 5, 7] {
        modular.absorb(survey::modular_survey(2, 3, ell)?.failures);
    }
    out.push(modular);
    let mut grid = CheckResult::new("verdict grid");
    let rep = verdict::scan_grid(&GridConfig { seed: cfg.seed, ..Default::default() })?;
    grid.trials = rep.data;
    grid.failures = rep.failures.into_iter().take(20).collect();
    out.push(grid);
    let mut lz = CheckResult::new("level-zero cross-check");
    for (q0, m) in [(2, 1), (3, 1), (2, 3)] {
        for (s, x) in verdict::level_zero_data(q0, m)? {
            let c = verdict::cross_check_level_zero(&s, &x)?;
            lz.check(c.consistent, || format!("q0={q0} m={m} theta={} xi(t)={}: mismatch", c.theta_exp, c.xi_t));
        }
    }
    out.push(lz);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_briefly() {
        for r in property_suites(7, 60).unwrap() {
            assert!(r.passed(), "{}: {:?}", r.name, r.failures);
            assert!(r.trials >= 60);
        }
    }
}
