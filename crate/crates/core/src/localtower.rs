//! Degree bookkeeping for the tame tower `F0 ⊂ F`, `T0 ⊂ T`, `D0 ⊂ D`,
//! `K0 ⊂ K` of a sigma-selfdual supercuspidal, and the quadratic characters
//! `delta0`, `epsilon0` read off a level-zero admissible pair.
//!
//! Only numerical shadows are modelled: ramification indices, residue
//! degrees, the residue character `theta` of `K` as an exponent modulo
//! `Q - 1`, and the value `xi(t)` at the sigma-compatible uniformizer `t` of
//! `E` (`sigma(t) = t` when `T/T0` is unramified, `-t` otherwise).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{self, gcd, mul_mod};
use crate::error::{invalid, Error, Result};
use crate::mchar::MultChar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtType {
    Unramified,
    Ramified,
}

/// A quadratic character: trivial or the `omega` of the relevant extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QuadChar {
    Trivial,
    Omega,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CentralChar {
    Trivial,
    Nontrivial,
}

/// `exp(2 pi i num / den)`, kept with `0 <= num < den` and `gcd(num, den) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RootRepr", into = "RootRepr")]
pub struct RootOfUnity {
    num: u128,
    den: u128,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RootRepr {
    num: i128,
    den: u128,
}

impl TryFrom<RootRepr> for RootOfUnity {
    type Error = String;
    fn try_from(r: RootRepr) -> std::result::Result<Self, String> {
        if r.den == 0 {
            return Err("root of unity with den = 0".into());
        }
        let num = r.num.rem_euclid(r.den.min(i128::MAX as u128) as i128) as u128;
        Ok(RootOfUnity::new(num, r.den))
    }
}

impl From<RootOfUnity> for RootRepr {
    fn from(r: RootOfUnity) -> RootRepr {
        RootRepr { num: r.num as i128, den: r.den }
    }
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { num: 0, den: 1 };
    pub const MINUS_ONE: RootOfUnity = RootOfUnity { num: 1, den: 2 };
    pub const QUARTER: RootOfUnity = RootOfUnity { num: 1, den: 4 };
    pub const THREE_QUARTERS: RootOfUnity = RootOfUnity { num: 3, den: 4 };

    pub fn new(num: u128, den: u128) -> RootOfUnity {
        assert!(den > 0);
        let num = num % den;
        let g = gcd(num, den).max(1);
        RootOfUnity { num: num / g, den: den / g }
    }
    pub fn num(&self) -> u128 {
        self.num
    }
    pub fn den(&self) -> u128 {
        self.den
    }
    /// Multiplicative order.
    pub fn order(&self) -> u128 {
        self.den
    }
    pub fn is_one(&self) -> bool {
        self.num == 0
    }
    pub fn mul(&self, o: &RootOfUnity) -> RootOfUnity {
        let l = arith::lcm(self.den, o.den);
        let a = mul_mod(self.num, l / self.den, l);
        let b = mul_mod(o.num, l / o.den, l);
        RootOfUnity::new(arith::add_mod(a, b, l), l)
    }
    pub fn pow(&self, e: u128) -> RootOfUnity {
        RootOfUnity::new(mul_mod(self.num, e % self.den, self.den), self.den)
    }
    pub fn inv(&self) -> RootOfUnity {
        RootOfUnity::new(self.den - self.num, self.den)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.num, self.den) {
            (0, _) => write!(f, "1"),
            (1, 2) => write!(f, "-1"),
            (n, d) => write!(f, "exp(2pi i {n}/{d})"),
        }
    }
}

/// Extension data of a sigma-selfdual supercuspidal, up to the wild part.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TowerSpec {
    pub p: u64,
    /// Residue cardinality of `F0`.
    pub q0: u64,
    /// Type of `F/F0`.
    pub base: ExtType,
    pub e_t0: u32,
    pub f_t0: u32,
    /// `E/T` totally wildly ramified of degree `p^wild_a`.
    pub wild_a: u32,
    /// Relative degree, `[K:E]`.
    pub m: u32,
}

/// The character `xi` of `K^x` of a level-zero admissible pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LevelZeroChar {
    /// `theta(zeta) = zeta_{Q-1}^{theta_exp}` on a generator of `k_K^x`.
    pub theta_exp: u128,
    pub xi_t: RootOfUnity,
}

/// The flat JSON form of a spec, a level-zero character and `ell`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub p: u64,
    pub q0: u64,
    pub base: ExtType,
    #[serde(rename = "e_T0")]
    pub e_t0: u32,
    #[serde(rename = "f_T0")]
    pub f_t0: u32,
    #[serde(default)]
    pub wild_a: u32,
    pub m: u32,
    pub theta_exp: u128,
    pub xi_t: RootOfUnity,
    #[serde(default)]
    pub ell: u64,
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<SpecFile> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("spec JSON: {e}")))
    }
    pub fn parts(&self) -> (TowerSpec, LevelZeroChar, u64) {
        (
            TowerSpec {
                p: self.p,
                q0: self.q0,
                base: self.base,
                e_t0: self.e_t0,
                f_t0: self.f_t0,
                wild_a: self.wild_a,
                m: self.m,
            },
            LevelZeroChar { theta_exp: self.theta_exp, xi_t: self.xi_t },
            self.ell,
        )
    }
    pub fn from_parts(s: &TowerSpec, x: &LevelZeroChar, ell: u64) -> SpecFile {
        SpecFile {
            p: s.p,
            q0: s.q0,
            base: s.base,
            e_t0: s.e_t0,
            f_t0: s.f_t0,
            wild_a: s.wild_a,
            m: s.m,
            theta_exp: x.theta_exp,
            xi_t: x.xi_t,
            ell,
        }
    }
}

/// A violated constraint, tagged by a short descriptive name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub clause: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.clause, self.detail)
    }
}

/// Degrees of the tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Degrees {
    pub e_tf: u32,
    pub f_tf: u32,
    pub e_df: u32,
    pub f_df: u32,
    /// Torsion number `f(K/F)`.
    pub f_kf: u32,
    pub n: u64,
    /// `e(F/F0)`, `f(F/F0)`.
    pub e_ff0: u32,
    pub f_ff0: u32,
    /// `e(T/T0)`, `f(T/T0)`.
    pub e_tt0: u32,
    pub f_tt0: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TowerInvariants {
    #[serde(rename = "TT0")]
    pub tt0: ExtType,
    #[serde(rename = "KK0")]
    pub kk0: ExtType,
    pub delta0: QuadChar,
    /// Only defined when `T/T0` is unramified.
    pub epsilon0: Option<QuadChar>,
    pub torsion: u32,
    pub n: u64,
    pub central_char_on_f0: CentralChar,
    #[serde(skip)]
    pub degrees: Degrees,
}

pub fn classify_tt0(s: &TowerSpec) -> ExtType {
    if s.base == ExtType::Ramified && s.e_t0 % 2 == 1 {
        ExtType::Ramified
    } else {
        ExtType::Unramified
    }
}

pub fn classify_kk0(s: &TowerSpec) -> ExtType {
    if classify_tt0(s) == ExtType::Ramified && s.m == 1 {
        ExtType::Ramified
    } else {
        ExtType::Unramified
    }
}

pub fn tower_invariants(s: &TowerSpec) -> Degrees {
    let (e_tf, f_tf) = match (s.base, s.e_t0 % 2) {
        (ExtType::Unramified, _) | (ExtType::Ramified, 1) => (s.e_t0, s.f_t0),
        (ExtType::Ramified, _) => (s.e_t0 / 2, 2 * s.f_t0),
    };
    let (e_ff0, f_ff0) = match s.base {
        ExtType::Unramified => (1, 2),
        ExtType::Ramified => (2, 1),
    };
    let (e_tt0, f_tt0) = match classify_tt0(s) {
        ExtType::Unramified => (1, 2),
        ExtType::Ramified => (2, 1),
    };
    let wild = s.p.saturating_pow(s.wild_a);
    Degrees {
        e_tf,
        f_tf,
        e_df: e_tf,
        f_df: s.m * f_tf,
        f_kf: s.m * f_tf,
        n: s.m as u64 * e_tf as u64 * f_tf as u64 * wild,
        e_ff0,
        f_ff0,
        e_tt0,
        f_tt0,
    }
}

/// Residue cardinality `c` of `E` (equal to that of `T`).
pub fn residue_card(s: &TowerSpec) -> Option<u128> {
    let d = tower_invariants(s);
    arith::checked_pow(s.q0 as u128, d.f_tf * d.f_ff0)
}

/// `Q = c^m`, the residue cardinality of `K`.
pub fn big_q(s: &TowerSpec) -> Option<u128> {
    arith::checked_pow(residue_card(s)?, s.m)
}

/// The residual involution on `k_K = F_Q` as the exponent `x -> x^e`.
fn residual_sigma(s: &TowerSpec) -> Result<u128> {
    let c = residue_card(s).ok_or_else(overflow)?;
    let q = big_q(s).ok_or_else(overflow)?;
    Ok(match classify_tt0(s) {
        ExtType::Unramified => arith::isqrt(q),
        ExtType::Ramified if s.m == 1 => 1,
        ExtType::Ramified => c.pow(s.m / 2),
    })
}

fn overflow() -> Error {
    Error::Budget("residue field of K is too large for 128-bit exponents".into())
}

/// `theta` is sigma-selfdual iff `theta_exp * (sigma + 1) ≡ 0 mod Q - 1`.
/// Returns `(step, count)`: the solutions are `k * step` for `k < count`.
pub fn sigma_selfdual_thetas(s: &TowerSpec) -> Result<(u128, u128)> {
    let q = big_q(s).ok_or_else(overflow)?;
    let e = residual_sigma(s)?;
    let g = gcd(e + 1, q - 1);
    Ok(((q - 1) / g, g))
}

/// `theta(-1)`; `-1 = zeta^{(Q-1)/2}` when `Q` is odd and `1` otherwise.
fn theta_at_minus_one(s: &TowerSpec, x: &LevelZeroChar) -> Result<RootOfUnity> {
    let q = big_q(s).ok_or_else(overflow)?;
    if q % 2 == 0 {
        return Ok(RootOfUnity::ONE);
    }
    Ok(RootOfUnity::new(mul_mod(x.theta_exp % (q - 1), (q - 1) / 2, q - 1), q - 1))
}

/// Checks every constraint on the datum and returns the violated ones.
/// With `supercuspidal` set, the parity constraints on `m` are enforced.
pub fn validate_spec(s: &TowerSpec, x: &LevelZeroChar, ell: u64, supercuspidal: bool) -> Vec<Violation> {
    let mut v = Vec::new();
    let mut bad = |clause: &'static str, detail: String| v.push(Violation { clause, detail });
    if !arith::is_prime(s.p) {
        bad("p-prime", format!("p = {} is not prime", s.p));
        return v;
    }
    if arith::prime_power_exponent(s.q0, s.p).is_none() {
        bad("q0-power-of-p", format!("q0 = {} is not a power of p = {}", s.q0, s.p));
        return v;
    }
    if s.p == 2 && (s.base == ExtType::Ramified || s.wild_a > 0) {
        bad("p-odd", "p = 2 is only modelled for an unramified base without wild part".into());
    }
    if s.e_t0 == 0 || s.f_t0 == 0 || s.m == 0 {
        bad("positive-degrees", "e_T0, f_T0 and m must be positive".into());
        return v;
    }
    if (s.e_t0 as u64).is_multiple_of(s.p) {
        bad("tame-e-T0", format!("e_T0 = {} is divisible by p", s.e_t0));
    }
    if s.base == ExtType::Unramified && s.f_t0.is_multiple_of(2) {
        bad("odd-residue-degree", format!("F/F0 unramified needs f(T/F) = f_T0 odd, got {}", s.f_t0));
    }
    let tt0 = classify_tt0(s);
    if supercuspidal {
        match tt0 {
            ExtType::Ramified if s.m != 1 && s.m % 2 == 1 => {
                bad("ramified-m-even-or-one", format!("T/T0 ramified needs m even or 1, got {}", s.m))
            }
            ExtType::Unramified if s.m.is_multiple_of(2) => {
                bad("unramified-m-odd", format!("T/T0 unramified needs m odd, got {}", s.m))
            }
            _ => {}
        }
    }
    if ell == 1 || (ell > 1 && !arith::is_prime(ell)) || (ell > 0 && ell == s.p) {
        bad("ell", format!("ell = {ell} must be 0 or a prime different from p"));
    }
    if !v.is_empty() {
        return v;
    }
    let (q, sig) = match (big_q(s), residual_sigma(s)) {
        (Some(q), Ok(e)) => (q, e),
        _ => {
            v.push(Violation { clause: "size", detail: "residue field of K exceeds 128-bit arithmetic".into() });
            return v;
        }
    };
    let theta = x.theta_exp;
    if theta >= q - 1 {
        v.push(Violation { clause: "theta-range", detail: format!("theta_exp must be below Q - 1 = {}", q - 1) });
        return v;
    }
    let mut bad = |clause: &'static str, detail: String| v.push(Violation { clause, detail });
    if mul_mod(theta, sig + 1, q - 1) != 0 {
        bad("sigma-selfdual-residual", format!("theta_exp * ({sig} + 1) is not 0 mod {}", q - 1));
    }
    // xi(t) xi(sigma t) = 1, with sigma(t) = -t exactly when T/T0 is ramified.
    let sigma_t = match tt0 {
        ExtType::Unramified => x.xi_t,
        ExtType::Ramified => x.xi_t.mul(&theta_at_minus_one(s, x).unwrap_or(RootOfUnity::ONE)),
    };
    if !x.xi_t.mul(&sigma_t).is_one() {
        bad("sigma-selfdual-uniformizer", format!("xi(t) xi(sigma t) = {} != 1", x.xi_t.mul(&sigma_t)));
    }
    let c = residue_card(s).unwrap_or(0);
    match MultChar::with_modulus(c, s.m, q - 1, theta) {
        Ok(ch) if ch.is_regular() => {}
        _ => bad("regular-theta", format!("theta_exp = {theta} is not regular of degree {} over F_{c}", s.m)),
    }
    if ell > 0 {
        let order = (q - 1) / gcd(theta, q - 1);
        if order.is_multiple_of(ell as u128) || x.xi_t.order().is_multiple_of(ell as u128) {
            bad("ell-prime-order", format!("xi has values of order divisible by ell = {ell}"));
        }
    }
    if ell == 2 && v.is_empty() && compute_delta0(s, x).ok() == Some(QuadChar::Omega) {
        v.push(Violation { clause: "ell-two-no-omega", detail: "delta0 cannot be omega when ell = 2".into() });
    }
    v
}

/// Values of `xi` on a generating set of `D0^x` (modulo the kernel of the
/// level-zero character), with a short label for each generator.
pub fn delta0_generators(s: &TowerSpec, x: &LevelZeroChar) -> Result<Vec<(&'static str, RootOfUnity)>> {
    let q = big_q(s).ok_or_else(overflow)?;
    let c = residue_card(s).ok_or_else(overflow)?;
    let theta_of = |k: u128| RootOfUnity::new(mul_mod(x.theta_exp, k, q - 1), q - 1);
    Ok(match classify_tt0(s) {
        // Units of K0 are norms from K, so only t contributes.
        ExtType::Unramified => vec![("t", x.xi_t)],
        ExtType::Ramified if s.m == 1 => {
            vec![("unit generator", theta_of(1)), ("t^2", x.xi_t.pow(2))]
        }
        ExtType::Ramified => {
            let r = s.m / 2;
            let cr = c.pow(r);
            if c % 2 == 0 {
                return invalid("ramified T/T0 needs odd residue characteristic");
            }
            // alpha = zeta^{(c^r + 1) / 2} satisfies sigma(alpha) = -alpha
            let alpha = theta_of(cr.div_ceil(2));
            vec![("t alpha", x.xi_t.mul(&alpha)), ("alpha^2", theta_of(cr + 1))]
        }
    })
}

pub fn compute_delta0(s: &TowerSpec, x: &LevelZeroChar) -> Result<QuadChar> {
    let gens = delta0_generators(s, x)?;
    if let Some((name, v)) = gens.iter().find(|(_, v)| !v.pow(2).is_one()) {
        return Err(Error::Invariant(format!(
            "xi({name}) = {v} is not a sign; the datum is not sigma-selfdual"
        )));
    }
    Ok(if gens.iter().all(|(_, v)| v.is_one()) { QuadChar::Trivial } else { QuadChar::Omega })
}

/// Restriction of `xi` to `T0^x`; only meaningful when `T/T0` is unramified.
pub fn compute_epsilon0(s: &TowerSpec, x: &LevelZeroChar) -> Result<QuadChar> {
    if classify_tt0(s) == ExtType::Ramified {
        return invalid("epsilon0 is only defined when T/T0 is unramified");
    }
    if !x.xi_t.pow(2).is_one() {
        return Err(Error::Invariant(format!("xi(t) = {} is not a sign", x.xi_t)));
    }
    Ok(if x.xi_t.is_one() { QuadChar::Trivial } else { QuadChar::Omega })
}

pub fn central_char_on_f0(s: &TowerSpec, x: &LevelZeroChar) -> Result<CentralChar> {
    let nontrivial = match classify_tt0(s) {
        ExtType::Ramified if s.m > 1 => false,
        ExtType::Ramified => compute_delta0(s, x)? == QuadChar::Omega && s.f_t0 % 2 == 1,
        ExtType::Unramified => compute_epsilon0(s, x)? == QuadChar::Omega && s.e_t0 % 2 == 1,
    };
    Ok(if nontrivial { CentralChar::Nontrivial } else { CentralChar::Trivial })
}

/// Validates in supercuspidal mode and computes every invariant.
pub fn invariants(s: &TowerSpec, x: &LevelZeroChar, ell: u64) -> Result<TowerInvariants> {
    let v = validate_spec(s, x, ell, true);
    if !v.is_empty() {
        let msgs: Vec<String> = v.iter().map(|v| v.to_string()).collect();
        return invalid(msgs.join("; "));
    }
    let degrees = tower_invariants(s);
    let tt0 = classify_tt0(s);
    Ok(TowerInvariants {
        tt0,
        kk0: classify_kk0(s),
        delta0: compute_delta0(s, x)?,
        epsilon0: match tt0 {
            ExtType::Unramified => Some(compute_epsilon0(s, x)?),
            ExtType::Ramified => None,
        },
        torsion: degrees.f_kf,
        n: degrees.n,
        central_char_on_f0: central_char_on_f0(s, x)?,
        degrees,
    })
}
