//! Distinction verdicts for sigma-selfdual supercuspidals from the tower
//! invariants, unramified twists, and the level-zero comparison with the
//! finite-group engine.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{self, gcd};
use crate::chartab;
use crate::error::{invalid, Error, Result};
use crate::glgroup::{GeneralLinear, SubgroupKind, DEFAULT_SUBGROUP_BUDGET};
use crate::localtower::{
    self, CentralChar, ExtType, LevelZeroChar, QuadChar, RootOfUnity, TowerInvariants, TowerSpec,
};
use crate::mchar::MultChar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Outcome {
    Distinguished,
    OmegaDistinguished,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub rule: &'static str,
    pub invariants: TowerInvariants,
}

/// An unramified character of `F^x`, given by its value at a uniformizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct UnramifiedTwist {
    pub chi_at_uniformizer: RootOfUnity,
}

impl UnramifiedTwist {
    pub fn new(value: RootOfUnity) -> UnramifiedTwist {
        UnramifiedTwist { chi_at_uniformizer: value }
    }
}

/// Decides distinction of the supercuspidal attached to the datum. For
/// `ell != 2` the outcome not returned is the one that fails.
pub fn decide(s: &TowerSpec, x: &LevelZeroChar, ell: u64) -> Result<Verdict> {
    let inv = localtower::invariants(s, x, ell)?;
    let (dist, rule) = if ell == 2 {
        (true, "char-two")
    } else {
        match (inv.tt0, s.m) {
            (ExtType::Ramified, 1) => match inv.delta0 {
                QuadChar::Trivial => (true, "ramified-m1-delta0-trivial"),
                QuadChar::Omega => (false, "ramified-m1-delta0-nontrivial"),
            },
            (ExtType::Ramified, _) => match inv.delta0 {
                QuadChar::Omega => (true, "ramified-m-even-delta0-nontrivial"),
                QuadChar::Trivial => (false, "ramified-m-even-delta0-trivial"),
            },
            (ExtType::Unramified, _) => match inv.epsilon0 {
                Some(QuadChar::Trivial) => (true, "unramified-epsilon0-trivial"),
                Some(QuadChar::Omega) => (false, "unramified-epsilon0-nontrivial"),
                None => return Err(Error::Invariant("epsilon0 missing for unramified T/T0".into())),
            },
        }
    };
    let outcome = if dist { Outcome::Distinguished } else { Outcome::OmegaDistinguished };
    Ok(Verdict { outcome, rule, invariants: inv })
}

/// The datum of `pi (chi o det)`: `xi` is multiplied by `chi o N_{K/F}`.
/// On units this is trivial since `chi` is unramified, and
/// `v_F(N_{K/F}(t)) = f(K/F)`.
pub fn twist(s: &TowerSpec, x: &LevelZeroChar, chi: &UnramifiedTwist) -> LevelZeroChar {
    let f_kf = localtower::tower_invariants(s).f_kf;
    LevelZeroChar {
        theta_exp: x.theta_exp,
        xi_t: x.xi_t.mul(&chi.chi_at_uniformizer.pow(f_kf as u128)),
    }
}

/// Decides a twisted datum; `None` when the twist is not sigma-selfdual.
fn decide_if_valid(s: &TowerSpec, x: &LevelZeroChar, ell: u64) -> Option<Outcome> {
    if localtower::validate_spec(s, x, ell, true).is_empty() {
        decide(s, x, ell).ok().map(|v| v.outcome)
    } else {
        None
    }
}

fn require_distinguished(s: &TowerSpec, x: &LevelZeroChar, ell: u64) -> Result<()> {
    if ell == 2 {
        return invalid("omega-distinction needs ell != 2");
    }
    if decide(s, x, ell)?.outcome != Outcome::Distinguished {
        return invalid("the datum is not distinguished");
    }
    Ok(())
}

/// Whether some unramified twist is omega-distinguished, with a verified
/// witness. None exists exactly when `D/D0` is ramified; otherwise the
/// witness is searched among characters of order dividing `2 f(D/F)`.
pub fn omega_twist_exists(s: &TowerSpec, x: &LevelZeroChar, ell: u64) -> Result<Option<UnramifiedTwist>> {
    require_distinguished(s, x, ell)?;
    if localtower::classify_kk0(s) == ExtType::Ramified {
        return Ok(None);
    }
    let order = 2 * localtower::tower_invariants(s).f_df as u128;
    for j in 0..order {
        let chi = UnramifiedTwist::new(RootOfUnity::new(j, order));
        if decide_if_valid(s, &twist(s, x, &chi), ell) == Some(Outcome::OmegaDistinguished) {
            return Ok(Some(chi));
        }
    }
    Err(Error::Invariant("D/D0 unramified but no omega-distinguished twist was found".into()))
}

/// Searches every unramified character of order at most `max_order` for an
/// omega-distinguished twist.
pub fn exhaustive_twist_scan(
    s: &TowerSpec,
    x: &LevelZeroChar,
    ell: u64,
    max_order: u128,
) -> Result<Option<UnramifiedTwist>> {
    require_distinguished(s, x, ell)?;
    let mut seen: HashMap<RootOfUnity, Option<Outcome>> = HashMap::new();
    for n in 1..=max_order {
        for j in (0..n).filter(|&j| gcd(j, n) == 1) {
            let chi = UnramifiedTwist::new(RootOfUnity::new(j, n));
            let y = twist(s, x, &chi);
            let out = *seen.entry(y.xi_t).or_insert_with(|| decide_if_valid(s, &y, ell));
            if out == Some(Outcome::OmegaDistinguished) {
                return Ok(Some(chi));
            }
        }
    }
    Ok(None)
}

/// Result of comparing a level-zero verdict with the finite group
/// `GL_m(F_{q0^2}) ⊃ GL_m(F_{q0})`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossCheck {
    pub q0: u64,
    pub m: u32,
    pub theta_exp: u128,
    pub xi_t: RootOfUnity,
    pub outcome: Outcome,
    pub finite_dim: u64,
    pub sigma_selfdual: bool,
    pub consistent: bool,
}

/// For `F/F0` unramified, `E = F` and level zero: the verdict is
/// "distinguished" iff the cuspidal of `GL_m(F_{q0^2})` with parameter
/// `theta` is `GL_m(F_{q0})`-distinguished and `xi(t) = 1`.
pub fn cross_check_level_zero(s: &TowerSpec, x: &LevelZeroChar) -> Result<CrossCheck> {
    if s.base != ExtType::Unramified || s.wild_a != 0 || s.e_t0 != 1 || s.f_t0 != 1 {
        return invalid("cross-check needs an unramified base, e_T0 = f_T0 = 1 and wild_a = 0");
    }
    let verdict = decide(s, x, 0)?;
    let q = s.q0 * s.q0;
    let table = chartab::cached_table(s.m as usize, q)?;
    let group: &std::sync::Arc<GeneralLinear> = table.group();
    let k0 = group.field().k() / 2;
    let sub = group.build_subgroup(SubgroupKind::RationalForm { sub_degree: k0 }, DEFAULT_SUBGROUP_BUDGET)?;
    let chi = table.green_match(x.theta_exp)?;
    let finite_dim = table.distinction_dim(chi, &sub.elements)?;
    let sigma_selfdual = MultChar::new(q as u128, s.m, x.theta_exp)?.is_sigma_selfdual(s.q0 as u128)?;
    let dist = verdict.outcome == Outcome::Distinguished;
    let consistent = dist == (finite_dim == 1 && x.xi_t.is_one()) && (finite_dim == 1) == sigma_selfdual;
    Ok(CrossCheck {
        q0: s.q0,
        m: s.m,
        theta_exp: x.theta_exp,
        xi_t: x.xi_t,
        outcome: verdict.outcome,
        finite_dim,
        sigma_selfdual,
        consistent,
    })
}

/// All level-zero data for the cross-check at `(q0, m)`: every regular
/// sigma-selfdual `theta` with both signs of `xi(t)`.
pub fn level_zero_data(q0: u64, m: u32) -> Result<Vec<(TowerSpec, LevelZeroChar)>> {
    let p = arith::factorize(q0).first().map(|f| f.0).ok_or_else(|| Error::InvalidInput("q0 < 2".into()))?;
    let s = TowerSpec { p, q0, base: ExtType::Unramified, e_t0: 1, f_t0: 1, wild_a: 0, m };
    let (step, count) = localtower::sigma_selfdual_thetas(&s)?;
    let mut out = Vec::new();
    for k in 0..count {
        for xi_t in [RootOfUnity::ONE, RootOfUnity::MINUS_ONE] {
            let x = LevelZeroChar { theta_exp: k * step, xi_t };
            if localtower::validate_spec(&s, &x, 0, true).is_empty() {
                out.push((s.clone(), x));
            }
        }
    }
    Ok(out)
}

/// Bounds of a verdict grid scan.
#[derive(Clone, Debug)]
pub struct GridConfig {
    pub q0_max: u64,
    pub m_max: u32,
    pub e_max: u32,
    pub f_max: u32,
    pub wild_max: u32,
    pub ells: Vec<u64>,
    /// Thetas tried per tower when the sigma-selfdual set is larger.
    pub theta_samples: u128,
    pub seed: u64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { q0_max: 9, m_max: 6, e_max: 6, f_max: 4, wild_max: 1, ells: vec![0, 2, 3], theta_samples: 24, seed: 0 }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct GridReport {
    pub towers: usize,
    pub data: usize,
    pub by_rule: BTreeMap<&'static str, usize>,
    pub n_odd_checked: usize,
    pub twist_checked: usize,
    pub flip_checked: usize,
    pub failures: Vec<String>,
}

impl GridReport {
    fn merge(mut self, o: GridReport) -> GridReport {
        self.towers += o.towers;
        self.data += o.data;
        for (k, v) in o.by_rule {
            *self.by_rule.entry(k).or_default() += v;
        }
        self.n_odd_checked += o.n_odd_checked;
        self.twist_checked += o.twist_checked;
        self.flip_checked += o.flip_checked;
        self.failures.extend(o.failures);
        self
    }
}

/// Towers of the grid that pass the structural part of validation.
pub fn grid_towers(cfg: &GridConfig) -> Vec<TowerSpec> {
    let mut out = Vec::new();
    for q0 in 2..=cfg.q0_max {
        let f = arith::factorize(q0);
        if f.len() != 1 {
            continue;
        }
        let p = f[0].0;
        for base in [ExtType::Unramified, ExtType::Ramified] {
            for e_t0 in 1..=cfg.e_max {
                for f_t0 in 1..=cfg.f_max {
                    for wild_a in 0..=cfg.wild_max {
                        for m in 1..=cfg.m_max {
                            let s = TowerSpec { p, q0, base, e_t0, f_t0, wild_a, m };
                            let x = LevelZeroChar { theta_exp: 0, xi_t: RootOfUnity::ONE };
                            let structural = localtower::validate_spec(&s, &x, 0, true)
                                .iter()
                                .all(|v| matches!(v.clause, "sigma-selfdual-residual" | "sigma-selfdual-uniformizer" | "regular-theta"));
                            if structural {
                                out.push(s);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Candidate thetas for a tower: all sigma-selfdual exponents when there
/// are few, otherwise the first `samples / 2` multiples of the step plus
/// seeded random ones.
pub fn sample_thetas(s: &TowerSpec, samples: u128, seed: u64) -> Result<Vec<u128>> {
    let (step, count) = localtower::sigma_selfdual_thetas(s)?;
    if count <= samples {
        return Ok((0..count).map(|k| k * step).collect());
    }
    let mut ks: Vec<u128> = (0..samples / 2).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (s.q0 << 32) ^ ((s.m as u64) << 16) ^ s.f_t0 as u64);
    while (ks.len() as u128) < samples {
        ks.push(rng.gen_range(0..count));
    }
    ks.sort_unstable();
    ks.dedup();
    Ok(ks.into_iter().map(|k| k * step).collect())
}

const XI_T_CANDIDATES: [RootOfUnity; 4] = [
    RootOfUnity::ONE,
    RootOfUnity::MINUS_ONE,
    // +-i, allowed when T/T0 is ramified and theta(-1) = -1
    RootOfUnity::QUARTER,
    RootOfUnity::THREE_QUARTERS,
];

fn check_datum(s: &TowerSpec, x: &LevelZeroChar, ell: u64, rep: &mut GridReport) -> Result<()> {
    let v = decide(s, x, ell)?;
    rep.data += 1;
    *rep.by_rule.entry(v.rule).or_default() += 1;
    let mut fail = |what: &str| rep.failures.push(format!("{what}: {s:?} {x:?} ell={ell}"));
    if ell == 2 && v.outcome != Outcome::Distinguished {
        fail("ell = 2 but not distinguished");
    }
    // delta0 does not depend on the Frobenius orbit representative
    let c = localtower::residue_card(s).unwrap_or(1);
    let q = localtower::big_q(s).unwrap_or(2);
    let y = LevelZeroChar { theta_exp: arith::mul_mod(x.theta_exp, c, q - 1), xi_t: x.xi_t };
    if localtower::compute_delta0(s, &y)? != v.invariants.delta0 {
        fail("delta0 changes along the theta orbit");
    }
    if let Some(eps) = v.invariants.epsilon0 {
        if eps != v.invariants.delta0 {
            fail("epsilon0 differs from the restriction of delta0");
        }
    }
    if v.invariants.n % 2 == 1 {
        rep.n_odd_checked += 1;
        let trivial = v.invariants.central_char_on_f0 == CentralChar::Trivial;
        if (v.outcome == Outcome::Distinguished) != trivial {
            fail("n odd but distinction differs from triviality of the central character on F0");
        }
    }
    if ell != 2 && v.outcome == Outcome::Distinguished {
        rep.twist_checked += 1;
        let claimed = omega_twist_exists(s, x, ell)?;
        let bound = 8 * v.invariants.degrees.f_df as u128;
        let scanned = exhaustive_twist_scan(s, x, ell, bound)?;
        if claimed.is_some() != scanned.is_some() {
            fail("omega twist existence disagrees with the exhaustive scan");
        }
        if localtower::classify_kk0(s) == ExtType::Ramified && claimed.is_some() {
            fail("omega twist found although D/D0 is ramified");
        }
    }
    if ell != 2 && s.base == ExtType::Unramified {
        // chi(uniformizer) = -1 extends omega of the unramified F/F0
        rep.flip_checked += 1;
        let y = twist(s, x, &UnramifiedTwist::new(RootOfUnity::MINUS_ONE));
        match decide_if_valid(s, &y, ell) {
            Some(o) if o != v.outcome => {}
            _ => fail("twist by the extension of omega does not swap the outcome"),
        }
    }
    Ok(())
}

/// Runs every verdict property over the grid. Failures are collected in
/// the report; errors are reserved for inputs the engine cannot handle.
pub fn scan_grid(cfg: &GridConfig) -> Result<GridReport> {
    let towers = grid_towers(cfg);
    let reports = towers
        .par_iter()
        .map(|s| -> Result<GridReport> {
            let mut rep = GridReport { towers: 1, ..Default::default() };
            for theta in sample_thetas(s, cfg.theta_samples, cfg.seed)? {
                for xi_t in XI_T_CANDIDATES {
                    let x = LevelZeroChar { theta_exp: theta, xi_t };
                    for &ell in &cfg.ells {
                        if localtower::validate_spec(s, &x, ell, true).is_empty() {
                            check_datum(s, &x, ell, &mut rep)?;
                        }
                    }
                }
            }
            Ok(rep)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(reports.into_iter().fold(GridReport::default(), GridReport::merge))
}
