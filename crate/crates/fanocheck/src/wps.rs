//! Combinatorics of weighted projective spaces.
//!
//! A weighted projective space `P(a_0,...,a_n)` is described here only
//! through its weights. The module provides well-formedness, monomial
//! enumeration in a fixed weighted degree, the weight-one/weight-many
//! partition of the coordinate set, the singular coordinate strata, and
//! the combinatorial half of well-formedness for a generic hypersurface.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Weights `(a_0,...,a_n)` of the ambient space, in coordinate order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightSystem {
    weights: Vec<u32>,
}

/// An exponent vector, one entry per coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(pub Vec<u32>);

/// A coordinate stratum: the locus where exactly the coordinates in
/// `on_set` are nonzero. `on_set` is sorted, deduplicated, non-empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Stratum {
    on_set: Vec<usize>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum WpsError {
    #[error("weight system needs at least two positive weights")]
    BadWeights,
    #[error("stratum must be a non-empty subset of the coordinate set")]
    BadStratum,
    #[error("variable index {0} out of range")]
    IndexOutOfRange(usize),
}

impl WeightSystem {
    pub fn new(weights: Vec<u32>) -> Result<Self, WpsError> {
        if weights.len() < 2 || weights.contains(&0) {
            return Err(WpsError::BadWeights);
        }
        Ok(WeightSystem { weights })
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// Number of coordinates, i.e. `n + 1`.
    pub fn arity(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.weights[i]
    }

    /// Weighted degree of an exponent vector.
    pub fn degree(&self, m: &Monomial) -> u64 {
        m.0.iter()
            .zip(&self.weights)
            .map(|(&e, &a)| e as u64 * a as u64)
            .sum()
    }

    /// Sub-weight-system on the index set `on` (in increasing index order).
    pub fn restrict(&self, on: &[usize]) -> Result<WeightSystem, WpsError> {
        let mut ws = Vec::with_capacity(on.len());
        for &i in on {
            if i >= self.arity() {
                return Err(WpsError::IndexOutOfRange(i));
            }
            ws.push(self.weights[i]);
        }
        WeightSystem::new(ws)
    }
}

impl fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P(")?;
        for (i, a) in self.weights.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl Monomial {
    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Indices with nonzero exponent, increasing.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_supported_on(&self, on: &[usize]) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, &e)| e == 0 || on.contains(&i))
    }
}

impl Stratum {
    pub fn new(mut on_set: Vec<usize>) -> Result<Self, WpsError> {
        on_set.sort_unstable();
        on_set.dedup();
        if on_set.is_empty() {
            return Err(WpsError::BadStratum);
        }
        Ok(Stratum { on_set })
    }

    pub fn on_set(&self) -> &[usize] {
        &self.on_set
    }

    pub fn len(&self) -> usize {
        self.on_set.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, i: usize) -> bool {
        self.on_set.binary_search(&i).is_ok()
    }

    /// dim of the open stratum inside the ambient space.
    pub fn dim(&self) -> usize {
        self.on_set.len() - 1
    }
}

/// True iff omitting any single weight leaves coprime weights.
pub fn wps_is_well_formed(ws: &WeightSystem) -> bool {
    let n = ws.arity();
    (0..n).all(|omit| {
        let mut g = 0u32;
        for (i, &a) in ws.weights().iter().enumerate() {
            if i != omit {
                g = gcd(g, a);
            }
        }
        g == 1
    })
}

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// All exponent vectors of weighted degree exactly `d`, in lexicographic
/// order. `d = 0` yields the single constant monomial.
pub fn enumerate_monomials(ws: &WeightSystem, d: u64) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; ws.arity()];
    rec_enumerate(ws.weights(), 0, d, &mut cur, &mut out);
    out.sort();
    out
}

fn rec_enumerate(weights: &[u32], pos: usize, rem: u64, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if pos == weights.len() {
        if rem == 0 {
            out.push(Monomial(cur.clone()));
        }
        return;
    }
    if pos == weights.len() - 1 {
        // last variable must absorb the remainder exactly
        let a = weights[pos] as u64;
        if rem.is_multiple_of(a) {
            cur[pos] = (rem / a) as u32;
            out.push(Monomial(cur.clone()));
            cur[pos] = 0;
        }
        return;
    }
    let a = weights[pos] as u64;
    let max = rem / a;
    for e in 0..=max {
        cur[pos] = e as u32;
        rec_enumerate(weights, pos + 1, rem - e * a, cur, out);
    }
    cur[pos] = 0;
}

/// The partition `({i : a_i = 1}, {i : a_i > 1})` of the coordinate set.
pub fn partition_by_weight_one(ws: &WeightSystem) -> (Vec<usize>, Vec<usize>) {
    let mut ones = Vec::new();
    let mut many = Vec::new();
    for (i, &a) in ws.weights().iter().enumerate() {
        if a == 1 {
            ones.push(i);
        } else {
            many.push(i);
        }
    }
    (ones, many)
}

/// Maximal index subsets whose weights share a common factor, paired
/// with that gcd. These are the closures of the singular strata of a
/// well-formed weighted projective space.
pub fn singular_strata(ws: &WeightSystem) -> Vec<(Stratum, u32)> {
    // Every subset with gcd > 1 lies in {i : q | a_i} for a prime q, so
    // the maximal ones are the maximal sets of that shape.
    let mut candidate_sets: Vec<Vec<usize>> = Vec::new();
    let max_w = *ws.weights().iter().max().unwrap();
    for q in 2..=max_w {
        if !is_prime(q) {
            continue;
        }
        let set: Vec<usize> = (0..ws.arity()).filter(|&i| ws.weight(i).is_multiple_of(q)).collect();
        if !set.is_empty() && !candidate_sets.contains(&set) {
            candidate_sets.push(set);
        }
    }
    let all = candidate_sets.clone();
    candidate_sets.retain(|s| {
        !all.iter()
            .any(|t| t.len() > s.len() && s.iter().all(|i| t.contains(i)))
    });
    candidate_sets.sort();
    candidate_sets
        .into_iter()
        .map(|set| {
            let g = set.iter().fold(0u32, |acc, &i| gcd(acc, ws.weight(i)));
            (Stratum::new(set).unwrap(), g)
        })
        .collect()
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Combinatorial half of well-formedness for a general hypersurface of
/// degree `d`: the hypersurface must meet every singular stratum of the
/// ambient space in codimension at least two.
///
/// For a singular stratum `I`, the general member contains the whole of
/// `Pi_I` exactly when no degree-`d` monomial is supported on `I`; then
/// the intersection has dimension `|I| - 1`, otherwise `|I| - 2`.
pub fn hypersurface_well_formed_generic(ws: &WeightSystem, d: u64) -> bool {
    let n = ws.arity() as i64 - 1;
    let dim_x = n - 1;
    for (stratum, _) in singular_strata(ws) {
        let on = stratum.on_set();
        let sub = match ws.restrict(on) {
            Ok(sub) => Some(sub),
            Err(WpsError::BadWeights) if on.len() == 1 => None,
            Err(_) => unreachable!("stratum indices validated"),
        };
        let has_monomial = match sub {
            Some(sub) => !enumerate_monomials(&sub, d).is_empty(),
            // singleton stratum: a monomial supported on {i} exists iff a_i | d
            None => d.is_multiple_of(ws.weight(on[0]) as u64),
        };
        let dim_cut = if has_monomial {
            on.len() as i64 - 2
        } else {
            on.len() as i64 - 1
        };
        if dim_cut > dim_x - 2 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(v: &[u32]) -> WeightSystem {
        WeightSystem::new(v.to_vec()).unwrap()
    }

    #[test]
    fn well_formedness() {
        assert!(wps_is_well_formed(&ws(&[1, 1, 2, 2, 3])));
        assert!(wps_is_well_formed(&ws(&[2, 3, 5, 11, 19])));
        assert!(!wps_is_well_formed(&ws(&[2, 4, 6, 8])));
    }

    #[test]
    fn enumeration_contains_expected_monomials() {
        // degree 14 in P(1,2,2,3): y^7, z^7, t^4 y all appear
        let all = enumerate_monomials(&ws(&[1, 2, 2, 3]), 14);
        for m in [
            Monomial(vec![0, 7, 0, 0]),
            Monomial(vec![0, 0, 7, 0]),
            Monomial(vec![0, 1, 0, 4]),
        ] {
            assert!(all.contains(&m));
        }
        for m in &all {
            assert_eq!(ws(&[1, 2, 2, 3]).degree(m), 14);
        }
    }

    #[test]
    fn enumeration_small_cases() {
        let got = enumerate_monomials(&ws(&[1, 2]), 4);
        assert_eq!(
            got,
            vec![
                Monomial(vec![0, 2]),
                Monomial(vec![2, 1]),
                Monomial(vec![4, 0]),
            ]
        );
        assert!(enumerate_monomials(&ws(&[5, 7]), 3).is_empty());
        assert_eq!(enumerate_monomials(&ws(&[1, 2]), 0), vec![Monomial(vec![0, 0])]);
    }

    #[test]
    fn lexicographic_order() {
        let all = enumerate_monomials(&ws(&[1, 1, 2]), 6);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
    }

    #[test]
    fn partition() {
        assert_eq!(partition_by_weight_one(&ws(&[1, 2, 2, 3])), (vec![0], vec![1, 2, 3]));
        assert_eq!(
            partition_by_weight_one(&ws(&[1, 1, 1, 1])),
            (vec![0, 1, 2, 3], vec![])
        );
        assert_eq!(partition_by_weight_one(&ws(&[2, 3, 4, 5])), (vec![], vec![0, 1, 2, 3]));
    }

    #[test]
    fn singular_strata_examples() {
        let got = singular_strata(&ws(&[1, 1, 2, 2, 3]));
        assert_eq!(
            got,
            vec![
                (Stratum::new(vec![2, 3]).unwrap(), 2),
                (Stratum::new(vec![4]).unwrap(), 3),
            ]
        );
        assert!(singular_strata(&ws(&[1, 1, 1, 1, 1])).is_empty());
        let got = singular_strata(&ws(&[2, 3, 5, 11, 19]));
        assert_eq!(got.len(), 5);
        assert_eq!(
            got.iter().map(|(s, g)| (s.on_set().to_vec(), *g)).collect::<Vec<_>>(),
            vec![
                (vec![0], 2),
                (vec![1], 3),
                (vec![2], 5),
                (vec![3], 11),
                (vec![4], 19)
            ]
        );
    }

    #[test]
    fn hypersurface_well_formedness() {
        assert!(hypersurface_well_formed_generic(&ws(&[1, 3, 3, 4, 4]), 12));
        assert!(hypersurface_well_formed_generic(&ws(&[1, 1, 1, 1]), 7));
        // stratum {2,3} of P(1,1,2,2) has no degree-5 monomial, so a
        // general quintic contains the whole line
        assert!(!hypersurface_well_formed_generic(&ws(&[1, 1, 2, 2]), 5));
        // singleton singular strata: a surface in P(1,1,4) of degree 5
        // contains the weight-4 point, a degree-8 one cuts it out
        assert!(!hypersurface_well_formed_generic(&ws(&[1, 1, 4]), 5));
        assert!(hypersurface_well_formed_generic(&ws(&[1, 1, 2, 3]), 6));
    }

    #[test]
    fn restriction_matches_sub_enumeration() {
        let big = ws(&[1, 2, 2, 3]);
        let on = vec![1usize, 3];
        let sub = big.restrict(&on).unwrap();
        for d in 0..=20u64 {
            let restricted: Vec<Vec<u32>> = enumerate_monomials(&big, d)
                .into_iter()
                .filter(|m| m.is_supported_on(&on))
                .map(|m| on.iter().map(|&i| m.0[i]).collect())
                .collect();
            let direct: Vec<Vec<u32>> =
                enumerate_monomials(&sub, d).into_iter().map(|m| m.0).collect();
            assert_eq!(restricted, direct);
        }
    }
}
