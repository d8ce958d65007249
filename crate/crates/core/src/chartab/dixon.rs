//! Burnside-Dixon character table computation.
//!
//! Class sums satisfy `K_i K_j = sum_k a_{ijk} K_k`, so the central
//! characters `omega_k = h_k chi(g_k) / chi(1)` are common eigenvectors of
//! the matrices `(M_i)_{jk} = a_{ijk}`. Working modulo a prime `P ≡ 1 mod e`
//! (`e` the group exponent) the eigenvectors split over `F_P`; degrees and
//! values are recovered mod `P` and lifted to cyclotomic integers through
//! eigenvalue multiplicities.

use rayon::prelude::*;

use super::cyclotomic::Cyclotomic;
use crate::arith::{self, isqrt};
use crate::error::{Error, Result};
use crate::glgroup::{ClassList, Mat};

pub(crate) struct DixonOutput {
    pub prime: u64,
    pub dims: Vec<u64>,
    /// `values[chi][class]`, each at the order of that class's elements.
    pub values: Vec<Vec<Cyclotomic>>,
}

fn mulp(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

fn powp(a: u64, e: u64, p: u64) -> u64 {
    arith::pow_mod(a as u128, e as u128, p as u128) as u64
}

fn invp(a: u64, p: u64) -> u64 {
    powp(a, p - 2, p)
}

/// Smallest prime `P ≡ 1 mod e` with `P > 2 sqrt(order)`.
pub fn dixon_prime(exponent: u64, order: u64) -> u64 {
    let bound = 2 * isqrt(order as u128) as u64 + 1;
    let mut p = exponent + 1;
    while p <= bound || !arith::is_prime(p) {
        p += exponent;
    }
    p
}

fn primitive_root(p: u64) -> u64 {
    let factors = arith::factorize(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&(r, _)| powp(g, (p - 1) / r, p) != 1))
        .expect("prime modulus has a primitive root")
}

/// Characteristic polynomial mod `p` of a square matrix (Hessenberg method),
/// coefficients constant first.
fn charpoly_mod(a: &[Vec<u64>], p: u64) -> Vec<u64> {
    let n = a.len();
    let mut h: Vec<Vec<u64>> = a.to_vec();
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| h[i][j] != 0) else {
            continue;
        };
        if piv != j + 1 {
            h.swap(piv, j + 1);
            for row in h.iter_mut() {
                row.swap(piv, j + 1);
            }
        }
        let pinv = invp(h[j + 1][j], p);
        for k in j + 2..n {
            let u = mulp(h[k][j], pinv, p);
            if u == 0 {
                continue;
            }
            for c in 0..n {
                let v = mulp(u, h[j + 1][c], p);
                h[k][c] = (h[k][c] + p - v) % p;
            }
            for row in h.iter_mut() {
                let v = mulp(u, row[k], p);
                row[j + 1] = (row[j + 1] + v) % p;
            }
        }
    }
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 1..=n {
        let prev = &polys[m - 1];
        let mut cur = vec![0u64; m + 1];
        let diag = h[m - 1][m - 1];
        for (i, &c) in prev.iter().enumerate() {
            cur[i + 1] = (cur[i + 1] + c) % p;
            cur[i] = (cur[i] + p - mulp(diag, c, p)) % p;
        }
        let mut prod = 1;
        for i in 1..m {
            prod = mulp(prod, h[m - i][m - i - 1], p);
            let coef = mulp(h[m - i - 1][m - 1], prod, p);
            if coef == 0 {
                continue;
            }
            for (k, &c) in polys[m - i - 1].iter().enumerate() {
                cur[k] = (cur[k] + p - mulp(coef, c, p)) % p;
            }
        }
        polys.push(cur);
    }
    polys.pop().unwrap()
}

fn eval_mod(poly: &[u64], x: u64, p: u64) -> u64 {
    poly.iter().rev().fold(0, |acc, &c| (mulp(acc, x, p) + c) % p)
}

/// Row-reduces `rows` in place; returns pivot columns.
fn rref(rows: &mut Vec<Vec<u64>>, p: u64) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = invp(rows[r][c], p);
        for v in rows[r].iter_mut() {
            *v = mulp(*v, inv, p);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for k in 0..ncols {
                    let sub = mulp(f, rows[r][k], p);
                    rows[i][k] = (rows[i][k] + p - sub) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of the null space of a square matrix mod `p`.
fn nullspace(a: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let mut rows = a.to_vec();
    let pivots = rref(&mut rows, p);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - rows[r][f]) % p;
            }
            v
        })
        .collect()
}

/// A subspace of `F_P^r` with basis vectors in reduced echelon form: the
/// coordinates of `v` in the basis are `v[pivots]`.
struct Space {
    basis: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Space {
    fn new(mut vectors: Vec<Vec<u64>>, p: u64) -> Space {
        let pivots = rref(&mut vectors, p);
        Space { basis: vectors, pivots }
    }
    fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Splits `w` into eigenspaces of `m` (which preserves it). Returns `None`
/// when `m` acts as a scalar on `w`.
fn split(w: &Space, m: &[Vec<u64>], p: u64) -> Result<Option<Vec<Space>>> {
    let dim = w.dim();
    // Images of basis vectors, then their coordinates.
    let restricted: Vec<Vec<u64>> = {
        let images: Vec<Vec<u64>> = w
            .basis
            .iter()
            .map(|b| {
                m.iter()
                    .map(|row| row.iter().zip(b).fold(0, |acc, (&x, &y)| (acc + mulp(x, y, p)) % p))
                    .collect()
            })
            .collect();
        // restricted[i][c] = coordinate i of image of basis vector c
        (0..dim).map(|i| (0..dim).map(|c| images[c][w.pivots[i]]).collect()).collect()
    };
    let cp = charpoly_mod(&restricted, p);
    let roots: Vec<u64> = (0..p).filter(|&x| eval_mod(&cp, x, p) == 0).collect();
    if roots.len() == 1 {
        return Ok(None);
    }
    let mut parts = Vec::new();
    let mut total = 0;
    for lam in roots {
        let shifted: Vec<Vec<u64>> = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|c| {
                        let v = restricted[i][c];
                        if i == c {
                            (v + p - lam) % p
                        } else {
                            v
                        }
                    })
                    .collect()
            })
            .collect();
        let ns = nullspace(&shifted, p);
        total += ns.len();
        let vectors: Vec<Vec<u64>> = ns
            .iter()
            .map(|coords| {
                let mut v = vec![0u64; w.basis[0].len()];
                for (c, &x) in coords.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (vi, &bi) in v.iter_mut().zip(&w.basis[c]) {
                        *vi = (*vi + mulp(x, bi, p)) % p;
                    }
                }
                v
            })
            .collect();
        parts.push(Space::new(vectors, p));
    }
    if total != dim {
        return Err(Error::Invariant(format!(
            "class matrix not diagonalizable mod {p}: eigenspaces span {total} of {dim}"
        )));
    }
    Ok(Some(parts))
}

pub(crate) fn dixon(
    classes: &ClassList,
    elements: &[Mat],
    power_map: &[Vec<usize>],
) -> Result<DixonOutput> {
    let group = classes.group();
    let r = classes.len();
    let order = group.order();
    let exponent = classes.exponent();
    let p = dixon_prime(exponent, order);
    let sizes: Vec<u64> = classes.classes().iter().map(|c| c.size).collect();

    // a[k][i][j] = #{u : class(u^{-1}) = i, class(u z_k) = j}
    let elem_inv_class: Vec<usize> =
        elements.par_iter().map(|u| classes.inverse_class(classes.class_index(u))).collect();
    let consts: Vec<Vec<u32>> = classes
        .classes()
        .par_iter()
        .map(|ck| {
            let z = ck.representative;
            let mut counts = vec![0u32; r * r];
            for (u, &i) in elements.iter().zip(&elem_inv_class) {
                let j = classes.class_index(&group.mul(u, &z));
                counts[i * r + j] += 1;
            }
            counts
        })
        .collect();
    let class_matrix = |i: usize| -> Vec<Vec<u64>> {
        (0..r).map(|j| (0..r).map(|k| consts[k][i * r + j] as u64 % p).collect()).collect()
    };

    let identity = classes.identity_class();
    let full: Vec<Vec<u64>> = (0..r)
        .map(|i| {
            let mut v = vec![0u64; r];
            v[i] = 1;
            v
        })
        .collect();
    let mut spaces = vec![Space::new(full, p)];
    // Large classes tend to separate characters fastest.
    let mut order_of_use: Vec<usize> = (0..r).filter(|&i| i != identity).collect();
    order_of_use.sort_by_key(|&i| (std::cmp::Reverse(sizes[i]), i));
    for i in order_of_use {
        if spaces.iter().all(|s| s.dim() == 1) {
            break;
        }
        let m = class_matrix(i);
        let mut next = Vec::new();
        for s in spaces {
            if s.dim() == 1 {
                next.push(s);
                continue;
            }
            match split(&s, &m, p)? {
                Some(parts) => next.extend(parts),
                None => next.push(s),
            }
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.dim() != 1) || spaces.len() != r {
        return Err(Error::Invariant("class matrices failed to split into lines".into()));
    }

    let g = primitive_root(p);
    let mut dims = Vec::with_capacity(r);
    let mut values = Vec::with_capacity(r);
    for s in &spaces {
        let v = &s.basis[0];
        if v[identity] == 0 {
            return Err(Error::Invariant("eigenvector vanishes at the identity".into()));
        }
        let scale = invp(v[identity], p);
        let omega: Vec<u64> = v.iter().map(|&x| mulp(x, scale, p)).collect();
        // sum_k omega_k omega_{k*} / h_k = |G| / d^2
        let mut sum = 0u64;
        for k in 0..r {
            let term = mulp(mulp(omega[k], omega[classes.inverse_class(k)], p), invp(sizes[k] % p, p), p);
            sum = (sum + term) % p;
        }
        if sum == 0 {
            return Err(Error::Invariant("degenerate norm in degree recovery".into()));
        }
        let d2 = mulp(order % p, invp(sum, p), p);
        let d = (1..=isqrt(order as u128) as u64)
            .find(|&d| mulp(d, d, p) == d2 && order.is_multiple_of(d))
            .ok_or_else(|| Error::Invariant("no admissible degree".into()))?;
        let chi_p: Vec<u64> =
            (0..r).map(|k| mulp(mulp(d, omega[k], p), invp(sizes[k] % p, p), p)).collect();
        let mut row = Vec::with_capacity(r);
        for k in 0..r {
            let o = classes.classes()[k].element_order;
            let zeta = powp(g, (p - 1) / o, p);
            let o_inv = invp(o % p, p);
            let pm = &power_map[k];
            let mut mults = vec![0i128; o as usize];
            for (j, mult) in mults.iter_mut().enumerate() {
                let step = powp(zeta, (o - j as u64 % o) % o, p);
                let mut acc = 0u64;
                let mut w = 1u64;
                for &cls in pm.iter() {
                    acc = (acc + mulp(chi_p[cls], w, p)) % p;
                    w = mulp(w, step, p);
                }
                let m = mulp(acc, o_inv, p);
                if m > d {
                    return Err(Error::Invariant(format!(
                        "eigenvalue multiplicity {m} exceeds degree {d} (lifting failed)"
                    )));
                }
                *mult = m as i128;
            }
            row.push(Cyclotomic::from_coeffs(o as u32, &mults, 1).reduced());
        }
        dims.push(d);
        values.push(row);
    }
    Ok(DixonOutput { prime: p, dims, values })
}
