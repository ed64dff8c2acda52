//! Pointwise rank oracle over small extension fields.
//!
//! Certificates assert that the bordered Jacobian matrix of a monomial
//! set has full expected rank at every point of a stratum. This module
//! provides the independent numeric side of that claim: it evaluates
//! the matrix at randomly sampled stratum points with coordinates in
//! the nonzero part of `F_{p^e}` and measures the rank by exact
//! Gaussian elimination. Extension arithmetic stays behind this module;
//! the polynomial layer itself never leaves `F_p`.

use crate::poly::Char;
use crate::wps::{Monomial, Stratum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `F_{p^e}` for `e <= 3`, as polynomials modulo a monic irreducible
/// found by scanning (a cubic or quadratic over `F_p` is irreducible
/// exactly when it has no root).
#[derive(Debug, Clone)]
pub struct ExtField {
    p: u32,
    e: usize,
    /// coefficients `c_0..c_{e-1}` with `x^e = -(c_0 + c_1 x + ...)`
    reduction: [u64; 3],
}

pub type El = [u64; 3];

impl ExtField {
    pub fn new(p: Char, e: usize) -> Self {
        assert!((1..=3).contains(&e), "extension degree must be 1..=3");
        assert!(crate::wps::is_prime(p), "characteristic must be prime");
        let p64 = p as u64;
        if e == 1 {
            return ExtField { p, e, reduction: [0; 3] };
        }
        // scan monic polynomials x^e + c_{e-1} x^{e-1} + ... + c_0 for
        // one with no root in F_p
        let mut coeffs = vec![0u64; e];
        loop {
            let has_root = (0..p64).any(|x| {
                let mut v = 1u64; // leading term x^e
                for _ in 0..e {
                    v = v * x % p64;
                }
                let mut xp = 1u64;
                for &c in coeffs.iter() {
                    v = (v + c * xp) % p64;
                    xp = xp * x % p64;
                }
                v == 0
            });
            if !has_root {
                let mut reduction = [0u64; 3];
                for (i, &c) in coeffs.iter().enumerate() {
                    reduction[i] = (p64 - c) % p64;
                }
                return ExtField { p, e, reduction };
            }
            // next coefficient tuple in lex order
            for c in coeffs.iter_mut() {
                *c += 1;
                if *c < p64 {
                    break;
                }
                *c = 0;
            }
        }
    }

    pub fn zero(&self) -> El {
        [0; 3]
    }

    pub fn one(&self) -> El {
        [1, 0, 0]
    }

    pub fn embed(&self, c: i64) -> El {
        [c.rem_euclid(self.p as i64) as u64, 0, 0]
    }

    pub fn is_zero(&self, a: &El) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &El, b: &El) -> El {
        let p = self.p as u64;
        let mut out = [0u64; 3];
        for i in 0..self.e {
            out[i] = (a[i] + b[i]) % p;
        }
        out
    }

    pub fn neg(&self, a: &El) -> El {
        let p = self.p as u64;
        let mut out = [0u64; 3];
        for i in 0..self.e {
            out[i] = (p - a[i]) % p;
        }
        out
    }

    pub fn sub(&self, a: &El, b: &El) -> El {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &El, b: &El) -> El {
        let p = self.p as u64;
        let mut prod = [0u64; 5];
        for i in 0..self.e {
            for j in 0..self.e {
                prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
            }
        }
        // fold degrees e..2e-2 down using x^e = reduction
        for d in (self.e..=2 * self.e.saturating_sub(1)).rev() {
            if prod[d] == 0 {
                continue;
            }
            let c = prod[d];
            prod[d] = 0;
            for i in 0..self.e {
                prod[d - self.e + i] = (prod[d - self.e + i] + c * self.reduction[i]) % p;
            }
        }
        [prod[0], prod[1], prod[2]]
    }

    pub fn pow(&self, a: &El, mut k: u64) -> El {
        let mut base = *a;
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.e as u32)
    }

    pub fn inv(&self, a: &El) -> El {
        assert!(!self.is_zero(a));
        self.pow(a, self.order() - 2)
    }

    pub fn random_nonzero<R: Rng>(&self, rng: &mut R) -> El {
        loop {
            let mut el = [0u64; 3];
            for c in el.iter_mut().take(self.e) {
                *c = rng.gen_range(0..self.p as u64);
            }
            if !self.is_zero(&el) {
                return el;
            }
        }
    }
}

/// Rank of a matrix over the extension field, by Gaussian elimination.
pub fn rank(field: &ExtField, mut m: Vec<Vec<El>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let Some(pivot) = (row..rows).find(|&r| !field.is_zero(&m[r][col])) else {
            continue;
        };
        m.swap(row, pivot);
        let inv = field.inv(&m[row][col].clone());
        for r in 0..rows {
            if r == row || field.is_zero(&m[r][col]) {
                continue;
            }
            let factor = field.mul(&m[r][col].clone(), &inv);
            let (pivot_row, other) = if r < row {
                let (a, b) = m.split_at_mut(row);
                (&b[0], &mut a[r])
            } else {
                let (a, b) = m.split_at_mut(r);
                (&a[row], &mut b[0])
            };
            for (dst, src) in other[col..].iter_mut().zip(&pivot_row[col..]) {
                *dst = field.sub(dst, &field.mul(&factor, src));
            }
        }
        row += 1;
        rank += 1;
        if row == rows {
            break;
        }
    }
    rank
}

/// Evaluates the bordered Jacobian of the whole monomial set at `s`
/// random points of the stratum (coordinates sampled from the nonzero
/// elements of `F_{p^e}`) and returns the minimum observed rank.
pub fn oracle_rank_at_points(
    lambda: &[Monomial],
    stratum: &Stratum,
    p: Char,
    e: usize,
    samples: usize,
    seed: u64,
) -> usize {
    if lambda.is_empty() {
        return 0;
    }
    let arity = lambda[0].0.len();
    let field = ExtField::new(p, e);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_exp = lambda.iter().flat_map(|m| m.0.iter()).copied().max().unwrap_or(0) as usize;

    let mut min_rank = usize::MAX;
    for _ in 0..samples.max(1) {
        // power tables per coordinate; off-stratum coordinates are zero
        let mut pows: Vec<Vec<El>> = Vec::with_capacity(arity);
        for v in 0..arity {
            let coord = if stratum.contains(v) {
                field.random_nonzero(&mut rng)
            } else {
                field.zero()
            };
            let mut table = Vec::with_capacity(max_exp + 1);
            table.push(field.one());
            for k in 1..=max_exp {
                let prev = table[k - 1];
                table.push(field.mul(&prev, &coord));
            }
            pows.push(table);
        }
        let eval = |m: &Monomial| -> El {
            let mut acc = field.one();
            for (v, &exp) in m.0.iter().enumerate() {
                acc = field.mul(&acc, &pows[v][exp as usize]);
            }
            acc
        };
        let eval_partial = |m: &Monomial, v: usize| -> El {
            let ev = m.0[v];
            if ev == 0 || ev.is_multiple_of(p) {
                return field.zero();
            }
            let mut acc = field.embed(ev as i64);
            for (u, &exp) in m.0.iter().enumerate() {
                let exp = if u == v { exp - 1 } else { exp };
                acc = field.mul(&acc, &pows[u][exp as usize]);
            }
            acc
        };
        let mut rows: Vec<Vec<El>> = Vec::with_capacity(arity + 1);
        rows.push(lambda.iter().map(&eval).collect());
        for v in 0..arity {
            rows.push(lambda.iter().map(|m| eval_partial(m, v)).collect());
        }
        min_rank = min_rank.min(rank(&field, rows));
        if min_rank == 0 {
            break;
        }
    }
    min_rank
}
