//! Multiplicative characters of `F_{q^n}^x`, stored as exponents.
//!
//! The character with exponent `a` sends `g^j` to `zeta^(a j)` where `g` is
//! the canonical generator of `F_{q^n}` and `zeta` a fixed primitive root of
//! unity of order `q^n - 1`. All predicates reduce to congruences on `a`.

use std::collections::BTreeSet;

use crate::arith::{self, mul_mod};
use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MultChar {
    pub base_q: u128,
    pub deg_n: u32,
    /// Order of the cyclic group the exponent lives on: `q^n - 1`, or its
    /// prime-to-ell part after reduction.
    pub modulus: u128,
    pub exp: u128,
}

fn group_order(q: u128, n: u32) -> Result<u128> {
    if q < 2 || n == 0 {
        return invalid(format!("need q >= 2 and n >= 1, got q={q}, n={n}"));
    }
    arith::checked_pow(q, n)
        .map(|v| v - 1)
        .ok_or_else(|| Error::Budget(format!("{q}^{n} overflows 128 bits")))
}

fn is_sq(q0: u128, q: u128) -> bool {
    q0.checked_mul(q0) == Some(q)
}

impl MultChar {
    pub fn new(base_q: u128, deg_n: u32, exp: u128) -> Result<MultChar> {
        let modulus = group_order(base_q, deg_n)?;
        Ok(MultChar { base_q, deg_n, modulus, exp: exp % modulus })
    }

    /// Character on a cyclic quotient of order `modulus`, which must divide
    /// `q^n - 1`.
    pub fn with_modulus(base_q: u128, deg_n: u32, modulus: u128, exp: u128) -> Result<MultChar> {
        let full = group_order(base_q, deg_n)?;
        if modulus == 0 || full % modulus != 0 {
            return invalid(format!("{modulus} does not divide {base_q}^{deg_n} - 1"));
        }
        Ok(MultChar { base_q, deg_n, modulus, exp: exp % modulus })
    }

    pub fn full_order(&self) -> u128 {
        group_order(self.base_q, self.deg_n).expect("validated at construction")
    }

    /// Frobenius orbit `{a q^i mod M}` in ascending order.
    pub fn galois_orbit(&self) -> Vec<u128> {
        let mut set = BTreeSet::new();
        let mut x = self.exp;
        for _ in 0..self.deg_n {
            set.insert(x);
            x = mul_mod(x, self.base_q, self.modulus);
        }
        set.into_iter().collect()
    }

    pub fn orbit_rep(&self) -> u128 {
        self.galois_orbit()[0]
    }

    pub fn orbit_size(&self) -> u32 {
        let mut x = mul_mod(self.exp, self.base_q, self.modulus);
        let mut k = 1;
        while x != self.exp {
            x = mul_mod(x, self.base_q, self.modulus);
            k += 1;
        }
        k
    }

    /// The `n` Frobenius twists are pairwise distinct.
    pub fn is_regular(&self) -> bool {
        self.orbit_size() == self.deg_n
    }

    /// `xi^{-q0} = xi^{q0^{2i}}` for some `0 <= i < n`, where `q = q0^2`:
    /// the Galois conjugate of the representation is its contragredient.
    ///
    /// For regular characters this forces `n` odd and is then equivalent to
    /// [`MultChar::is_trivial_on_norm_subfield`].
    pub fn is_sigma_selfdual(&self, q0: u128) -> Result<bool> {
        if !is_sq(q0, self.base_q) {
            return invalid(format!("{} is not the square of {q0}", self.base_q));
        }
        let m = self.modulus;
        Ok((0..self.deg_n).any(|i| {
            let t = (arith::pow_mod(self.base_q, i as u128, m) + q0 % m) % m;
            mul_mod(t, self.exp, m) == 0
        }))
    }

    /// `(q0^n + 1) a ≡ 0`, i.e. `xi^{-1} = xi^{q0^n}`: the character is
    /// trivial on the subfield with `q0^n` elements.
    pub fn is_trivial_on_norm_subfield(&self, q0: u128) -> Result<bool> {
        if !is_sq(q0, self.base_q) {
            return invalid(format!("{} is not the square of {q0}", self.base_q));
        }
        let m = self.modulus;
        let t = (arith::pow_mod(q0, self.deg_n as u128, m) + 1) % m;
        Ok(mul_mod(t, self.exp, m) == 0)
    }

    /// `xi^{-1}` is a Frobenius twist of `xi`.
    pub fn is_selfdual(&self) -> bool {
        let (q, n, m, a) = (self.base_q, self.deg_n, self.modulus, self.exp);
        let kills = |i: u32| {
            let t = (arith::pow_mod(q, i as u128, m) + 1) % m;
            mul_mod(t, a, m) == 0
        };
        if n == 1 {
            kills(0)
        } else if n % 2 == 0 {
            kills(n / 2)
        } else {
            (0..n).any(kills)
        }
    }

    /// `xi` factors through the norm to `F_{q^d}`, `d` a proper divisor.
    pub fn factors_through_norm(&self, d: u32) -> Result<bool> {
        if d == 0 || d >= self.deg_n || !self.deg_n.is_multiple_of(d) {
            return invalid(format!("{d} is not a proper divisor of {}", self.deg_n));
        }
        let full = self.full_order();
        let index = full / group_order(self.base_q, d)?;
        // The norm kernel is generated by g^(q^d - 1); lift the exponent to
        // the full group and test index | a.
        Ok(mul_mod(self.exp, full / self.modulus, index) == 0)
    }

    /// Reduction modulo `ell`: the exponent on the prime-to-`ell` quotient.
    pub fn reduce_mod_ell(&self, ell: u128) -> Result<MultChar> {
        if !arith::is_prime(ell as u64) || ell > u64::MAX as u128 {
            return invalid(format!("{ell} is not prime"));
        }
        if self.base_q.is_multiple_of(ell) {
            return invalid(format!("ell = {ell} divides q = {}", self.base_q));
        }
        let (m, _) = arith::split_prime_part(self.modulus, ell);
        Ok(MultChar { modulus: m, exp: self.exp % m, ..*self })
    }

    /// The reduction mod `ell` is supercuspidal.
    pub fn reduction_is_supercuspidal(&self, ell: u128) -> Result<bool> {
        Ok(self.reduce_mod_ell(ell)?.is_regular())
    }
}

/// Finds a regular, sigma-selfdual exponent mod `q0^{2n} - 1` lifting
/// `reduced` (an exponent on the prime-to-`ell` quotient).
///
/// Candidates are the CRT lifts; the one with vanishing `ell`-component is
/// tried first, then the rest in increasing order of the full exponent.
pub fn lift_sigma_selfdual(reduced: u128, q0: u128, n: u32, ell: u128) -> Result<MultChar> {
    let q = q0
        .checked_mul(q0)
        .ok_or_else(|| Error::Budget("q0^2 overflows".into()))?;
    let full = group_order(q, n)?;
    if q % ell == 0 {
        return invalid(format!("ell = {ell} divides q = {q}"));
    }
    let (m, l) = arith::split_prime_part(full, ell);
    if reduced >= m {
        return invalid(format!("reduced exponent {reduced} not below {m}"));
    }
    let red = MultChar::with_modulus(q, n, m, reduced)?;
    if !red.is_sigma_selfdual(q0)? {
        return invalid(format!("{reduced} mod {m} is not sigma-selfdual"));
    }
    if !red.is_regular() {
        return invalid(format!("{reduced} mod {m} is not regular"));
    }
    let ok = |a: u128| -> Result<Option<MultChar>> {
        let c = MultChar::new(q, n, a)?;
        Ok((c.is_regular() && c.is_sigma_selfdual(q0)?).then_some(c))
    };
    // a = reduced + m t, and the ell-component is a mod l.
    let inv = if l > 1 { arith::inv_mod(m % l, l).expect("coprime parts") } else { 0 };
    let zero_part = if l > 1 {
        // Solve reduced + m t ≡ 0 mod l.
        let t = mul_mod((l - reduced % l) % l, inv, l);
        reduced + m * t
    } else {
        reduced
    };
    if let Some(c) = ok(zero_part)? {
        return Ok(c);
    }
    for t in 0..l {
        let a = reduced + m * t;
        if a != zero_part {
            if let Some(c) = ok(a)? {
                return Ok(c);
            }
        }
    }
    Err(Error::Invariant(format!(
        "no regular sigma-selfdual lift of {reduced} mod {m} (q0={q0}, n={n}, ell={ell})"
    )))
}

/// Exponents `a` mod `q0^{2n} - 1` trivial on the subfield with `q0^n`
/// elements: the multiples of `q0^n - 1`.
pub fn norm_subfield_trivial_exponents(q0: u128, n: u32) -> Result<Vec<u128>> {
    let q = q0 * q0;
    let full = group_order(q, n)?;
    let step = group_order(q0, n)?;
    Ok((0..full / step).map(|b| b * step).collect())
}

/// Canonical orbit representatives of regular sigma-selfdual exponents.
///
/// Every regular sigma-selfdual exponent is trivial on the `q0^n` subfield,
/// so the scan runs over those multiples only.
pub fn sigma_selfdual_regular_orbits(q0: u128, n: u32) -> Result<Vec<u128>> {
    let q = q0 * q0;
    let mut reps = BTreeSet::new();
    for a in norm_subfield_trivial_exponents(q0, n)? {
        let c = MultChar::new(q, n, a)?;
        if c.is_regular() && c.is_sigma_selfdual(q0)? {
            reps.insert(c.orbit_rep());
        }
    }
    Ok(reps.into_iter().collect())
}

/// Number of sigma-selfdual supercuspidals of `GL_n(F_{q0^2})`.
pub fn count_sigma_selfdual_supercuspidals(q0: u128, n: u32) -> Result<usize> {
    Ok(sigma_selfdual_regular_orbits(q0, n)?.len())
}

/// Canonical representatives of all regular orbits mod `q^n - 1`.
pub fn regular_orbits(q: u128, n: u32) -> Result<Vec<u128>> {
    let full = group_order(q, n)?;
    if full > 1 << 32 {
        return Err(Error::Budget(format!("{full} exponents is too many to scan")));
    }
    let mut out = Vec::new();
    for a in 0..full {
        let c = MultChar::new(q, n, a)?;
        if c.is_regular() && c.orbit_rep() == a {
            out.push(a);
        }
    }
    Ok(out)
}
