//! Jacobian-minor witness certificates and their searches.
//!
//! For a set `Λ` of monomials of one weighted degree, quasi-smoothness
//! of a general member of the linear system spanned by `Λ` along a
//! coordinate stratum `Π*_I` is witnessed by a subset `Ξ ⊆ Λ` and a
//! variable set `J` such that the determinant of the Jacobian matrix of
//! `Ξ` with respect to `J` (optionally bordered by the row of the
//! monomials themselves), restricted to the stratum, is a single
//! nonzero monomial over `F_p`. This module builds those matrices,
//! checks explicit certificates, searches for certificates with support
//! pruning, and implements the pattern shortcuts that settle small
//! strata without any determinant work.

use crate::poly::{Char, PolyError, PolyMatrix, SparsePoly};
use crate::wps::{Monomial, Stratum};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CondError {
    #[error("certificate monomial is not a member of the given monomial set")]
    XiNotInLambda,
    #[error("certificate cardinalities do not match its kind: |xi|={xi}, |J|={j}, |I|={i}")]
    BadCardinality { xi: usize, j: usize, i: usize },
    #[error("the excluded variable {0} occurs in J")]
    ExcludedVarInJ(usize),
    #[error("empty monomial subset")]
    EmptyXi,
    #[error("shortcut rules only apply to strata of size at most 2, got {0}")]
    StratumTooLarge(usize),
    #[error("expected exactly 4 base variables, got {0}")]
    WrongArity(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Which condition a certificate witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertKind {
    /// Plain Jacobian minor: `|Ξ| = |J| = |I|`.
    Star,
    /// Bordered minor: `|Ξ| = |I|`, `|J| = |I| - 1`.
    StarPrime,
    /// Either shape with the variable `k` excluded from `J`.
    StarK { k: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessCertificate {
    pub kind: CertKind,
    pub stratum: Stratum,
    pub xi: Vec<Monomial>,
    pub j_vars: Vec<usize>,
    pub expected: Option<Monomial>,
}

impl WitnessCertificate {
    /// Whether the matrix carries the extra first row of the monomials.
    pub fn bordered(&self) -> bool {
        match self.kind {
            CertKind::Star => false,
            CertKind::StarPrime => true,
            CertKind::StarK { .. } => self.j_vars.len() + 1 == self.stratum.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionVerdict {
    pub holds: bool,
    pub certificate: Option<WitnessCertificate>,
    pub determinant: Option<Monomial>,
    /// Set when the certificate carried an expected determinant:
    /// whether the computed exponent vector reproduces it.
    pub expected_match: Option<bool>,
}

impl ConditionVerdict {
    pub fn failed() -> Self {
        ConditionVerdict { holds: false, certificate: None, determinant: None, expected_match: None }
    }
}

/// Matrix of partials: `|J|` rows by `|Ξ|` columns, entry `(i, j)`
/// being the derivative of the `j`-th monomial by the `i`-th variable.
pub fn build_jacobian(xi: &[Monomial], j_vars: &[usize], p: Char) -> Result<PolyMatrix, CondError> {
    if xi.is_empty() {
        return Err(CondError::EmptyXi);
    }
    let mut rows = Vec::with_capacity(j_vars.len());
    for &v in j_vars {
        let mut row = Vec::with_capacity(xi.len());
        for g in xi {
            row.push(SparsePoly::from_exponents(p, g).partial_derivative(v)?);
        }
        rows.push(row);
    }
    Ok(PolyMatrix::new(rows)?)
}

/// Same as [`build_jacobian`] with the row of the monomials themselves
/// prepended. `J` may be empty, leaving just that row.
pub fn build_bordered_jacobian(
    xi: &[Monomial],
    j_vars: &[usize],
    p: Char,
) -> Result<PolyMatrix, CondError> {
    if xi.is_empty() {
        return Err(CondError::EmptyXi);
    }
    let mut rows = Vec::with_capacity(j_vars.len() + 1);
    rows.push(xi.iter().map(|g| SparsePoly::from_exponents(p, g)).collect());
    for &v in j_vars {
        let mut row = Vec::with_capacity(xi.len());
        for g in xi {
            row.push(SparsePoly::from_exponents(p, g).partial_derivative(v)?);
        }
        rows.push(row);
    }
    Ok(PolyMatrix::new(rows)?)
}

/// Checks one explicit certificate: builds the matrix named by the
/// certificate kind, restricts every entry to the stratum, and demands
/// that the determinant be a single nonzero monomial.
pub fn check_witness(
    lambda: &[Monomial],
    cert: &WitnessCertificate,
    p: Char,
) -> Result<ConditionVerdict, CondError> {
    for g in &cert.xi {
        if !lambda.contains(g) {
            return Err(CondError::XiNotInLambda);
        }
    }
    let i_len = cert.stratum.len();
    let (xi_len, j_len) = (cert.xi.len(), cert.j_vars.len());
    let bordered = match cert.kind {
        CertKind::Star => {
            if xi_len != i_len || j_len != i_len {
                return Err(CondError::BadCardinality { xi: xi_len, j: j_len, i: i_len });
            }
            false
        }
        CertKind::StarPrime => {
            if xi_len != i_len || j_len + 1 != i_len {
                return Err(CondError::BadCardinality { xi: xi_len, j: j_len, i: i_len });
            }
            true
        }
        CertKind::StarK { k } => {
            if cert.j_vars.contains(&k) {
                return Err(CondError::ExcludedVarInJ(k));
            }
            if xi_len == i_len && j_len == i_len {
                false
            } else if xi_len == i_len && j_len + 1 == i_len {
                true
            } else {
                return Err(CondError::BadCardinality { xi: xi_len, j: j_len, i: i_len });
            }
        }
    };
    let m = if bordered {
        build_bordered_jacobian(&cert.xi, &cert.j_vars, p)?
    } else {
        build_jacobian(&cert.xi, &cert.j_vars, p)?
    };
    let det = m.restrict_to_stratum(&cert.stratum).determinant()?;
    let det_mono = det.as_nonzero_monomial();
    let expected_match = cert
        .expected
        .as_ref()
        .map(|want| det_mono.as_ref() == Some(want));
    Ok(ConditionVerdict {
        holds: det_mono.is_some(),
        certificate: det_mono.is_some().then(|| cert.clone()),
        determinant: det_mono,
        expected_match,
    })
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let universe: Vec<usize> = (0..n).collect();
    k_subsets_of(&universe, k)
}

/// All `k`-subsets of an ordered universe, lexicographic on positions.
pub fn k_subsets_of(universe: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(u: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..u.len() {
            cur.push(u[i]);
            rec(u, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(universe, k, 0, &mut cur, &mut out);
    out
}

/// The restricted column of `g` over the rows `J`; `None` when every
/// entry dies under derivative or restriction, so `g` can never
/// contribute to a nonzero determinant for this `(I, J)` pair.
fn restricted_column(g: &Monomial, j_vars: &[usize], s: &Stratum, p: Char) -> Option<Vec<SparsePoly>> {
    let gp = SparsePoly::from_exponents(p, g);
    let col: Vec<SparsePoly> = j_vars
        .iter()
        .map(|&v| gp.partial_derivative(v).unwrap().restrict_to_stratum(s))
        .collect();
    col.iter().any(|e| !e.is_zero()).then_some(col)
}

fn search(
    lambda: &[Monomial],
    stratum: &Stratum,
    p: Char,
    j_universe: &[usize],
    bordered: bool,
    kind: CertKind,
) -> ConditionVerdict {
    if lambda.is_empty() {
        return ConditionVerdict::failed();
    }
    let size = stratum.len();
    let j_size = if bordered { size - 1 } else { size };
    if j_size > j_universe.len() {
        return ConditionVerdict::failed();
    }
    for j_vars in k_subsets_of(j_universe, j_size) {
        // prune Λ down to monomials whose restricted column is nonzero
        let mut cand_idx = Vec::new();
        let mut cand_cols = Vec::new();
        for (gi, g) in lambda.iter().enumerate() {
            let top = bordered.then(|| {
                SparsePoly::from_exponents(p, g).restrict_to_stratum(stratum)
            });
            match restricted_column(g, &j_vars, stratum, p) {
                Some(col) => {
                    cand_idx.push(gi);
                    cand_cols.push((top, col));
                }
                None => {
                    if let Some(t) = top {
                        if !t.is_zero() {
                            cand_idx.push(gi);
                            cand_cols.push((Some(t), vec![SparsePoly::zero(p, g.0.len()); j_vars.len()]));
                        }
                    }
                }
            }
        }
        if cand_idx.len() < size {
            continue;
        }
        for combo in k_subsets(cand_idx.len(), size) {
            let mut rows: Vec<Vec<SparsePoly>> = Vec::with_capacity(j_size + 1);
            if bordered {
                rows.push(combo.iter().map(|&c| cand_cols[c].0.clone().unwrap()).collect());
            }
            for r in 0..j_size {
                rows.push(combo.iter().map(|&c| cand_cols[c].1[r].clone()).collect());
            }
            let m = PolyMatrix::new(rows).expect("bounded dimensions");
            if let Some(det) = m.determinant().expect("square").as_nonzero_monomial() {
                let cert = WitnessCertificate {
                    kind,
                    stratum: stratum.clone(),
                    xi: combo.iter().map(|&c| lambda[cand_idx[c]].clone()).collect(),
                    j_vars: j_vars.clone(),
                    expected: None,
                };
                return ConditionVerdict {
                    holds: true,
                    certificate: Some(cert),
                    determinant: Some(det),
                    expected_match: None,
                };
            }
        }
    }
    ConditionVerdict::failed()
}

fn arity_of(lambda: &[Monomial]) -> usize {
    lambda.first().map(|m| m.0.len()).unwrap_or(0)
}

/// Exhaustive pruned search for a plain Jacobian-minor certificate.
pub fn holds_star(lambda: &[Monomial], stratum: &Stratum, p: Char) -> ConditionVerdict {
    let n = arity_of(lambda);
    let universe: Vec<usize> = (0..n).collect();
    search(lambda, stratum, p, &universe, false, CertKind::Star)
}

/// Exhaustive pruned search for a bordered certificate.
pub fn holds_star_prime(lambda: &[Monomial], stratum: &Stratum, p: Char) -> ConditionVerdict {
    let n = arity_of(lambda);
    let universe: Vec<usize> = (0..n).collect();
    search(lambda, stratum, p, &universe, true, CertKind::StarPrime)
}

/// Plain first, bordered second; first hit wins.
pub fn holds_dagger(lambda: &[Monomial], stratum: &Stratum, p: Char) -> ConditionVerdict {
    let v = holds_star(lambda, stratum, p);
    if v.holds {
        return v;
    }
    holds_star_prime(lambda, stratum, p)
}

/// Search over both certificate shapes with variable `k` excluded
/// from `J`.
pub fn holds_star_k(lambda: &[Monomial], stratum: &Stratum, k: usize, p: Char) -> ConditionVerdict {
    let n = arity_of(lambda);
    let universe: Vec<usize> = (0..n).filter(|&i| i != k).collect();
    let v = search(lambda, stratum, p, &universe, false, CertKind::StarK { k });
    if v.holds {
        return v;
    }
    search(lambda, stratum, p, &universe, true, CertKind::StarK { k })
}

/// Pattern rules that settle the plain condition on strata of size at
/// most 2 by inspection of the monomial set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarRule {
    /// single variable: a pure power with exponent prime to `p`, or a
    /// power times exactly one other variable
    R1,
    /// pair: pure powers of both variables, product of exponents prime
    /// to `p`
    R2a,
    /// pair: a cross monomial on one variable and a pure power with
    /// exponent prime to `p` on the other
    R2b,
    /// pair: cross monomials through two distinct outside variables
    R2c,
}

impl std::fmt::Display for StarRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            StarRule::R1 => "1",
            StarRule::R2a => "2a",
            StarRule::R2b => "2b",
            StarRule::R2c => "2c",
        };
        write!(f, "{s}")
    }
}

/// `m` is `x_i^l * x_j` for the given `i` with `j != i`: returns `(l, j)`.
fn as_power_times_one(m: &Monomial, i: usize) -> Option<(u32, usize)> {
    let mut j = None;
    for (v, &e) in m.0.iter().enumerate() {
        if v == i || e == 0 {
            continue;
        }
        if e != 1 || j.is_some() {
            return None;
        }
        j = Some(v);
    }
    j.map(|j| (m.0[i], j))
}

fn as_pure_power(m: &Monomial, i: usize) -> Option<u32> {
    let ok = m.0.iter().enumerate().all(|(v, &e)| v == i || e == 0);
    (ok && m.0[i] > 0).then_some(m.0[i])
}

pub fn shortcut_star(
    lambda: &[Monomial],
    stratum: &Stratum,
    p: Char,
) -> Result<Option<StarRule>, CondError> {
    let on = stratum.on_set();
    match on.len() {
        1 => {
            let i = on[0];
            for m in lambda {
                if let Some(k) = as_pure_power(m, i) {
                    if k % p != 0 {
                        return Ok(Some(StarRule::R1));
                    }
                }
                if as_power_times_one(m, i).is_some() {
                    return Ok(Some(StarRule::R1));
                }
            }
            Ok(None)
        }
        2 => {
            let (i1, i2) = (on[0], on[1]);
            let pure1: Vec<u32> = lambda.iter().filter_map(|m| as_pure_power(m, i1)).collect();
            let pure2: Vec<u32> = lambda.iter().filter_map(|m| as_pure_power(m, i2)).collect();
            for &k1 in &pure1 {
                for &k2 in &pure2 {
                    if (k1 % p) != 0 && (k2 % p) != 0 {
                        return Ok(Some(StarRule::R2a));
                    }
                }
            }
            // cross on one side, pure prime-to-p power on the other
            for &(a, b) in &[(i1, i2), (i2, i1)] {
                let has_cross = lambda
                    .iter()
                    .any(|m| matches!(as_power_times_one(m, a), Some((_, j)) if !on.contains(&j)));
                let has_pure = lambda.iter().filter_map(|m| as_pure_power(m, b)).any(|k| k % p != 0);
                if has_cross && has_pure {
                    return Ok(Some(StarRule::R2b));
                }
            }
            for m1 in lambda {
                let Some((_, j1)) = as_power_times_one(m1, i1) else { continue };
                if on.contains(&j1) {
                    continue;
                }
                for m2 in lambda {
                    let Some((_, j2)) = as_power_times_one(m2, i2) else { continue };
                    if !on.contains(&j2) && j1 != j2 {
                        return Ok(Some(StarRule::R2c));
                    }
                }
            }
            Ok(None)
        }
        n => Err(CondError::StratumTooLarge(n)),
    }
}

/// Pattern rules for the `k`-excluded condition on strata of size at
/// most 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarKRule {
    R1a,
    R1b,
    R2a,
    R2b,
    R2c,
    R3a,
    R3b,
    R3c,
    R3d,
}

impl std::fmt::Display for StarKRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            StarKRule::R1a => "1a",
            StarKRule::R1b => "1b",
            StarKRule::R2a => "2a",
            StarKRule::R2b => "2b",
            StarKRule::R2c => "2c",
            StarKRule::R3a => "3a",
            StarKRule::R3b => "3b",
            StarKRule::R3c => "3c",
            StarKRule::R3d => "3d",
        };
        write!(f, "{s}")
    }
}

/// `m` involves only the two given variables: returns their exponents.
fn as_two_var(m: &Monomial, a: usize, b: usize) -> Option<(u32, u32)> {
    let ok = m.0.iter().enumerate().all(|(v, &e)| v == a || v == b || e == 0);
    ok.then(|| (m.0[a], m.0[b]))
}

/// `m = x_a^α x_b^β x_j` with `e_j = 1`, `j` outside `{a, b}` and the
/// excluded set: returns `(α, β, j)`.
fn as_two_var_times_one(m: &Monomial, a: usize, b: usize) -> Option<(u32, u32, usize)> {
    let mut j = None;
    for (v, &e) in m.0.iter().enumerate() {
        if v == a || v == b || e == 0 {
            continue;
        }
        if e != 1 || j.is_some() {
            return None;
        }
        j = Some(v);
    }
    j.map(|j| (m.0[a], m.0[b], j))
}

pub fn shortcut_star_k(
    lambda: &[Monomial],
    stratum: &Stratum,
    k: usize,
    p: Char,
) -> Result<Option<StarKRule>, CondError> {
    let on = stratum.on_set();
    match on.len() {
        1 => {
            let i = on[0];
            for m in lambda {
                if as_pure_power(m, i).is_some() {
                    return Ok(Some(StarKRule::R1a));
                }
            }
            for m in lambda {
                if let Some((l, j)) = as_power_times_one(m, i) {
                    if l > 0 && j != k {
                        return Ok(Some(StarKRule::R1b));
                    }
                }
            }
            Ok(None)
        }
        2 if !stratum.contains(k) => {
            let (i1, i2) = (on[0], on[1]);
            // two monomials supported inside the stratum with an
            // exponent difference prime to p
            let inside: Vec<(u32, u32)> =
                lambda.iter().filter_map(|m| as_two_var(m, i1, i2)).collect();
            for (a, m1) in inside.iter().enumerate() {
                for m2 in inside.iter().skip(a + 1) {
                    let d1 = (m1.0 as i64 - m2.0 as i64).unsigned_abs() % p as u64;
                    let d2 = (m1.1 as i64 - m2.1 as i64).unsigned_abs() % p as u64;
                    if d1 != 0 || d2 != 0 {
                        return Ok(Some(StarKRule::R2a));
                    }
                }
            }
            for &(a, b) in &[(i1, i2), (i2, i1)] {
                let has_pure = lambda.iter().any(|m| as_pure_power(m, a).is_some());
                let has_cross = lambda.iter().any(|m| {
                    matches!(as_power_times_one(m, b), Some((l, j)) if l > 0 && !on.contains(&j) && j != k)
                });
                if has_pure && has_cross {
                    return Ok(Some(StarKRule::R2b));
                }
            }
            for m1 in lambda {
                let Some((l1, j1)) = as_power_times_one(m1, i1) else { continue };
                if l1 == 0 || on.contains(&j1) || j1 == k {
                    continue;
                }
                for m2 in lambda {
                    let Some((l2, j2)) = as_power_times_one(m2, i2) else { continue };
                    if l2 > 0 && !on.contains(&j2) && j2 != k && j1 != j2 {
                        return Ok(Some(StarKRule::R2c));
                    }
                }
            }
            Ok(None)
        }
        2 => {
            let i = if on[0] == k { on[1] } else { on[0] };
            // (3a) two cross monomials through distinct outside variables
            let crosses: Vec<usize> = lambda
                .iter()
                .filter_map(|m| as_two_var_times_one(m, k, i).map(|(_, _, j)| j))
                .collect();
            for (a, j1) in crosses.iter().enumerate() {
                if crosses.iter().skip(a + 1).any(|j2| j2 != j1) {
                    return Ok(Some(StarKRule::R3a));
                }
            }
            // (3b) one cross monomial and one inside monomial
            let has_cross = !crosses.is_empty();
            let has_inside = lambda.iter().any(|m| as_two_var(m, k, i).is_some());
            if has_cross && has_inside {
                return Ok(Some(StarKRule::R3b));
            }
            // (3c) pure power of k and x_i^β x_k^γ with p ∤ β
            let has_pure_k = lambda.iter().any(|m| as_pure_power(m, k).is_some());
            if has_pure_k
                && lambda
                    .iter()
                    .filter_map(|m| as_two_var(m, k, i))
                    .any(|(_, beta)| beta > 0 && beta % p != 0)
            {
                return Ok(Some(StarKRule::R3c));
            }
            // (3d) x_k^α x_i and a pure power x_i^β with p ∤ β - 1
            let has_k_cross_i = lambda
                .iter()
                .filter_map(|m| as_two_var(m, k, i))
                .any(|(alpha, beta)| alpha > 0 && beta == 1);
            if has_k_cross_i
                && lambda
                    .iter()
                    .filter_map(|m| as_pure_power(m, i))
                    .any(|beta| (beta as i64 - 1).rem_euclid(p as i64) != 0)
            {
                return Ok(Some(StarKRule::R3d));
            }
            Ok(None)
        }
        n => Err(CondError::StratumTooLarge(n)),
    }
}

/// Outcome of the four-variable hypersurface shortcut: the matched case
/// together with the witnessing monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZCaseMatch {
    pub case: u8,
    pub witnesses: Vec<Monomial>,
}

/// Pattern cases proving that a general hypersurface `v x_k + f = 0`,
/// with `f` spanned by the degree-`d` monomials `Λ` in four base
/// variables, is quasi-smooth. Cases are tried in ascending order and
/// the first match wins; case 5 additionally requires the `k`-excluded
/// condition on the residual strata of the two non-distinguished
/// variables, which is verified here by generic search.
pub fn shortcut_z_qsm(lambda: &[Monomial], k: usize, p: Char) -> Result<Option<ZCaseMatch>, CondError> {
    if lambda.is_empty() {
        return Ok(None);
    }
    let arity = arity_of(lambda);
    if arity != 4 {
        return Err(CondError::WrongArity(arity));
    }
    let others: Vec<usize> = (0..4).filter(|&i| i != k).collect();
    let pure = |i: usize| lambda.iter().find_map(|m| as_pure_power(m, i).map(|l| (l, m.clone())));
    // m = x_head^l * x_tail, e_tail = 1
    let chain = |head: usize, tail: usize| {
        lambda.iter().find_map(|m| {
            as_power_times_one(m, head)
                .filter(|&(_, j)| j == tail)
                .map(|(l, _)| (l, m.clone()))
        })
    };

    // case 1: pure powers of all three, at least two exponents prime to p
    if let (Some((l1, m1)), Some((l2, m2)), Some((l3, m3))) =
        (pure(others[0]), pure(others[1]), pure(others[2]))
    {
        let coprime = [l1, l2, l3].iter().filter(|&&l| l % p != 0).count();
        if coprime >= 2 {
            return Ok(Some(ZCaseMatch { case: 1, witnesses: vec![m1, m2, m3] }));
        }
    }

    let perms3 = |v: &[usize]| -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for &a in v {
            for &b in v {
                for &c in v {
                    if a != b && a != c && b != c {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    };

    // case 2: two pure powers and a cross power landing on the first
    for [s1, s2, s3] in perms3(&others) {
        let (Some((l1, m1)), Some((l2, m2)), Some((l3, m3))) = (pure(s1), pure(s2), chain(s3, s1))
        else {
            continue;
        };
        if l3 % p != 0 && (l1 % p != 0 || l2 % p != 0) {
            return Ok(Some(ZCaseMatch { case: 2, witnesses: vec![m1, m2, m3] }));
        }
    }

    // case 3: pure p-th power and a two-step chain onto it
    for [s1, s2, s3] in perms3(&others) {
        let (Some((l1, m1)), Some((l2, m2)), Some((l3, m3))) =
            (pure(s1), chain(s2, s1), chain(s3, s2))
        else {
            continue;
        };
        if l1 % p == 0 && l2 > 0 && l3 > 0 {
            return Ok(Some(ZCaseMatch { case: 3, witnesses: vec![m1, m2, m3] }));
        }
    }

    // case 4: a three-cycle of cross powers with p not dividing
    // l1*l2*l3 + 1
    for perm in [[others[0], others[1], others[2]], [others[0], others[2], others[1]]] {
        let [s1, s2, s3] = perm;
        let (Some((l1, m1)), Some((l2, m2)), Some((l3, m3))) =
            (chain(s1, s2), chain(s2, s3), chain(s3, s1))
        else {
            continue;
        };
        if l1 > 0
            && l2 > 0
            && l3 > 0
            && !(l1 as u64 * l2 as u64 * l3 as u64 + 1).is_multiple_of(p as u64)
        {
            return Ok(Some(ZCaseMatch { case: 4, witnesses: vec![m1, m2, m3] }));
        }
    }

    // case 5: a pure power of one variable, cross powers of it onto the
    // other two, and the k-excluded condition on the residual strata
    for &s1 in &others {
        let rest: Vec<usize> = others.iter().copied().filter(|&i| i != s1).collect();
        let (Some((_, m1)), Some((_, m2)), Some((_, m3))) =
            (pure(s1), chain(s1, rest[0]), chain(s1, rest[1]))
        else {
            continue;
        };
        let residual_ok = [vec![rest[0]], vec![rest[1]], vec![rest[0], rest[1]]]
            .into_iter()
            .all(|set| holds_star_k(lambda, &Stratum::new(set).unwrap(), k, p).holds);
        if residual_ok {
            return Ok(Some(ZCaseMatch { case: 5, witnesses: vec![m1, m2, m3] }));
        }
    }

    Ok(None)
}
