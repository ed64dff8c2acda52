//! Arithmetic genericity checks, the Fano index, and the rationality
//! criterion.
//!
//! These are the purely numeric prerequisites attached to each family:
//! the critical-point condition on the branch section, the checkable
//! items of the cover construction (dimension, the twisted form's
//! degree and the existence of a section), the Fano index, and the
//! projection-based rationality test.

use crate::poly::Char;
use crate::wps::{
    enumerate_monomials, hypersurface_well_formed_generic, wps_is_well_formed, WeightSystem,
};
use serde::Serialize;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GenericityError {
    #[error("weights must be sorted ascending")]
    Unsorted,
    #[error("not Fano: weight sum {sum} does not exceed degree {d}")]
    NotFano { sum: u64, d: u64 },
}

/// Clause-by-clause outcome of the critical-point condition on base
/// weights `(a_0,...,a_n)` and a section degree `d`:
/// some weight equals one; `d >= 2 a_i` for every `i`; and when `p = 2`
/// with `n` odd, two distinct indices satisfy `d >= 3 a_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CritReport {
    pub has_weight_one: bool,
    pub degree_dominates: bool,
    pub char_two_clause: bool,
    pub pass: bool,
}

pub fn check_condition_crit(ws: &WeightSystem, d: u64, p: Char) -> CritReport {
    let has_weight_one = ws.weights().contains(&1);
    let degree_dominates = ws.weights().iter().all(|&a| d >= 2 * a as u64);
    let n = ws.arity() - 1;
    let char_two_clause = if p == 2 && n % 2 == 1 {
        ws.weights().iter().filter(|&&a| d >= 3 * a as u64).count() >= 2
    } else {
        true
    };
    CritReport {
        has_weight_one,
        degree_dominates,
        char_two_clause,
        pass: has_weight_one && degree_dominates && char_two_clause,
    }
}

/// Checkable content of the cover construction on the base `Z`:
/// `n >= 3`, the twist degree `delta = d - sum(base weights)` with its
/// sign, existence of a section of that degree, and well-formedness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CdgenReport {
    pub n_ok: bool,
    pub delta: i64,
    pub section_exists: bool,
    pub wf: bool,
}

/// `base` are the four base weights; `z_ambient` is the weight system
/// of the space containing `Z` (equal to `base` when the cover is over
/// the weighted projective space itself); `z_is_hypersurface` says
/// whether `Z` is a degree-`d` hypersurface there rather than the whole
/// space.
pub fn check_cdgen_arithmetic(
    base: &WeightSystem,
    z_ambient: &WeightSystem,
    z_is_hypersurface: bool,
    d: u64,
) -> CdgenReport {
    let n_ok = base.arity() >= 4;
    let a_sum: i64 = base.weights().iter().map(|&a| a as i64).sum();
    let delta = d as i64 - a_sum;
    let section_exists =
        delta >= 0 && !enumerate_monomials(z_ambient, delta as u64).is_empty();
    let wf = wps_is_well_formed(z_ambient)
        && (!z_is_hypersurface || hypersurface_well_formed_generic(z_ambient, d));
    CdgenReport { n_ok, delta, section_exists, wf }
}

/// Fano index of a degree-`d` hypersurface: weight sum minus degree.
pub fn fano_index(ws: &WeightSystem, d: u64) -> Result<u64, GenericityError> {
    let sum: u64 = ws.weights().iter().map(|&a| a as u64).sum();
    if sum <= d {
        return Err(GenericityError::NotFano { sum, d });
    }
    Ok(sum - d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rationality {
    RationalByCriterion,
    NotByCriterion,
}

/// Projection criterion: rational when `d < 2 a_last`, or when
/// `d = 2 a_last = 2 a_secondlast`. Weights must be sorted ascending.
pub fn rationality_classify(ws: &WeightSystem, d: u64) -> Result<Rationality, GenericityError> {
    let w = ws.weights();
    if w.windows(2).any(|p| p[0] > p[1]) {
        return Err(GenericityError::Unsorted);
    }
    let last = w[w.len() - 1] as u64;
    let second = w[w.len() - 2] as u64;
    let rational = d < 2 * last || (d == 2 * last && d == 2 * second);
    Ok(if rational {
        Rationality::RationalByCriterion
    } else {
        Rationality::NotByCriterion
    })
}

/// Which clause of the criterion fired, for report text.
pub fn rationality_clause(ws: &WeightSystem, d: u64) -> Option<&'static str> {
    let w = ws.weights();
    let last = w[w.len() - 1] as u64;
    let second = w[w.len() - 2] as u64;
    if d < 2 * last {
        Some("d < 2*a4")
    } else if d == 2 * last && d == 2 * second {
        Some("d = 2*a4 = 2*a3")
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(v: &[u32]) -> WeightSystem {
        WeightSystem::new(v.to_vec()).unwrap()
    }

    #[test]
    fn crit_condition() {
        let r = check_condition_crit(&ws(&[1, 1, 2, 2]), 6, 2);
        assert!(r.pass && r.char_two_clause);
        let r = check_condition_crit(&ws(&[2, 3, 5, 11]), 38, 2);
        assert!(!r.pass && !r.has_weight_one && r.degree_dominates);
        let r = check_condition_crit(&ws(&[1, 1]), 1, 2);
        assert!(!r.pass && !r.degree_dominates);
    }

    #[test]
    fn cdgen_examples() {
        // cover over the space itself, base (1,1,2,2), degree 6
        let base = ws(&[1, 1, 2, 2]);
        let r = check_cdgen_arithmetic(&base, &base, false, 6);
        assert_eq!(r.delta, 0);
        assert!(r.n_ok && r.section_exists && r.wf);

        // hypersurface cover base in P(1,1,1,1,4), degree 5
        let r = check_cdgen_arithmetic(&ws(&[1, 1, 1, 1]), &ws(&[1, 1, 1, 1, 4]), true, 5);
        assert_eq!(r.delta, 1);
        assert!(r.section_exists && r.wf);

        let base = ws(&[2, 3, 5, 11]);
        let r = check_cdgen_arithmetic(&base, &base, false, 38);
        assert_eq!(r.delta, 17);
        assert!(r.section_exists);
    }

    #[test]
    fn index_examples() {
        assert_eq!(fano_index(&ws(&[3, 4, 5, 6, 7]), 12), Ok(13));
        assert_eq!(fano_index(&ws(&[1, 2, 3, 5, 9]), 18), Ok(2));
        assert_eq!(fano_index(&ws(&[1, 1, 1, 1, 1]), 3), Ok(2));
        assert!(fano_index(&ws(&[1, 1, 1, 1, 1]), 9).is_err());
    }

    #[test]
    fn rationality_examples() {
        assert_eq!(
            rationality_classify(&ws(&[1, 1, 2, 2, 3]), 4),
            Ok(Rationality::RationalByCriterion)
        );
        assert_eq!(
            rationality_classify(&ws(&[1, 1, 1, 1, 1]), 2),
            Ok(Rationality::RationalByCriterion)
        );
        assert_eq!(
            rationality_classify(&ws(&[1, 2, 3, 4, 5]), 10),
            Ok(Rationality::NotByCriterion)
        );
        assert_eq!(
            rationality_classify(&ws(&[2, 1, 3, 4, 5]), 10),
            Err(GenericityError::Unsorted)
        );
    }
}
