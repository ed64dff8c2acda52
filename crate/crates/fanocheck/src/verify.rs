//! Family-level verification: runs every applicable phase for a record
//! and produces a machine-readable report.
//!
//! Phases per family class:
//!
//! * every family: `classification` (projection criterion against the
//!   recorded sign and class, plus the index column);
//! * cover families: `crit-condition` and `cdgen` (the arithmetic
//!   prerequisites of the construction), `z-qsm` (the certificate sweep
//!   on the cover base), and `x-boundary-qsm` where the covering itself
//!   needs boundary certificates;
//! * with the oracle enabled, an extra `oracle` phase samples stratum
//!   points over a small extension field and checks the observed rank
//!   against every certificate found.

use crate::conditions::{
    check_witness, holds_dagger, holds_star, holds_star_k, shortcut_star, shortcut_star_k,
    shortcut_z_qsm, CertKind, ConditionVerdict, WitnessCertificate,
};
use crate::db::{CertEntry, FamilyRecord, Klass, RatSign, Side, TableTag};
use crate::genericity::{
    check_cdgen_arithmetic, check_condition_crit, fano_index, rationality_classify,
    rationality_clause, Rationality,
};
use crate::oracle::oracle_rank_at_points;
use crate::poly::Char;
use crate::wps::{enumerate_monomials, Monomial, Stratum, WeightSystem};
use serde::Serialize;
use std::time::Instant;

pub const VAR_NAMES: [&str; 5] = ["x", "y", "z", "t", "w"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    pub seed: u64,
    pub samples: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { seed: 1, samples: 50 }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    pub oracle: Option<OracleOptions>,
}

/// Certificate rendering for reports: named variables, one string per
/// monomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertDescription {
    pub stratum: Vec<String>,
    pub xi: Vec<String>,
    pub j: Vec<String>,
    pub bordered: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseReport {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertDescription>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub determinant: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub millis: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub family: u32,
    pub phases: Vec<PhaseReport>,
    pub pass: bool,
    pub millis: u128,
}

impl VerificationReport {
    pub fn phase_pass(&self, name: &str) -> bool {
        let mut any = false;
        for ph in self.phases.iter().filter(|ph| ph.name == name) {
            any = true;
            if !ph.pass {
                return false;
            }
        }
        any
    }
}

pub fn mono_string(e: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let name = VAR_NAMES.get(i).copied().unwrap_or("?");
        if k == 1 {
            parts.push(name.to_string());
        } else {
            parts.push(format!("{name}^{k}"));
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn describe(cert: &WitnessCertificate) -> CertDescription {
    CertDescription {
        stratum: cert.stratum.on_set().iter().map(|&v| VAR_NAMES[v].to_string()).collect(),
        xi: cert.xi.iter().map(|m| mono_string(&m.0)).collect(),
        j: cert.j_vars.iter().map(|&v| VAR_NAMES[v].to_string()).collect(),
        bordered: cert.bordered(),
    }
}

fn stratum_names(on: &[usize]) -> String {
    on.iter().map(|&v| VAR_NAMES[v]).collect::<Vec<_>>().join(",")
}

/// All non-empty subsets of `vars`, smallest first, lexicographic
/// within one size.
fn nonempty_subsets(vars: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 1..=vars.len() {
        out.extend(crate::conditions::k_subsets_of(vars, size));
    }
    out
}

/// The degree-`d` monomials of the four base variables.
fn base_lambda(rec: &FamilyRecord) -> Vec<Monomial> {
    let ws = WeightSystem::new(rec.base_weights().to_vec()).expect("four positive weights");
    enumerate_monomials(&ws, rec.d)
}

fn pad5(m: &Monomial) -> Monomial {
    let mut e = m.0.clone();
    while e.len() < 5 {
        e.push(0);
    }
    Monomial(e)
}

struct PhaseClock(Instant);

impl PhaseClock {
    fn start() -> Self {
        PhaseClock(Instant::now())
    }
    fn report(
        &mut self,
        name: &str,
        pass: bool,
        certificate: Option<CertDescription>,
        determinant: Option<String>,
        note: Option<String>,
    ) -> PhaseReport {
        let millis = self.0.elapsed().as_millis();
        self.0 = Instant::now();
        PhaseReport { name: name.into(), pass, certificate, determinant, note, millis }
    }
}

/// Checks a stored certificate entry against the monomial set, falling
/// back to the generic search on failure or mismatch. The returned
/// note distinguishes a clean reproduction from a degraded pass.
fn check_stored_then_search(
    lambda: &[Monomial],
    entry: &CertEntry,
    kind: CertKind,
    p: Char,
    search: impl Fn() -> ConditionVerdict,
) -> (bool, Option<WitnessCertificate>, Option<Monomial>, Option<String>) {
    let stratum = Stratum::new(entry.stratum.clone()).expect("non-empty stratum");
    let cert = WitnessCertificate {
        kind,
        stratum,
        xi: entry.xi.iter().map(|e| Monomial(e.clone())).collect(),
        j_vars: entry.j.clone(),
        expected: entry.expected.clone().map(Monomial),
    };
    match check_witness(lambda, &cert, p) {
        Ok(v) if v.holds && v.expected_match != Some(false) => {
            (true, v.certificate, v.determinant, None)
        }
        Ok(v) => {
            let fallback = search();
            let note = if v.holds {
                "certificate mismatch, search succeeded"
            } else {
                "stored certificate degenerates, search succeeded"
            };
            if fallback.holds {
                (true, fallback.certificate, fallback.determinant, Some(note.into()))
            } else {
                (false, None, None, Some("stored certificate and search both fail".into()))
            }
        }
        Err(e) => {
            let fallback = search();
            if fallback.holds {
                (
                    true,
                    fallback.certificate,
                    fallback.determinant,
                    Some(format!("stored certificate rejected ({e}), search succeeded")),
                )
            } else {
                (false, None, None, Some(format!("stored certificate rejected ({e})")))
            }
        }
    }
}

pub fn verify_family(rec: &FamilyRecord, opts: &VerifyOptions) -> VerificationReport {
    let total = Instant::now();
    let mut phases = Vec::new();

    let cover_data_ok = match rec.klass {
        Klass::Type1 | Klass::Special => rec.p.is_some() && rec.cover.is_some(),
        Klass::Type2 => {
            rec.p.is_some() && rec.cover.is_some_and(|c| c.k.is_some())
        }
        _ => true,
    };
    if !cover_data_ok {
        let mut clock = PhaseClock::start();
        let ph = clock.report(
            "z-qsm",
            false,
            None,
            None,
            Some("record lacks characteristic or cover data".into()),
        );
        return VerificationReport {
            family: rec.no,
            phases: vec![ph],
            pass: false,
            millis: total.elapsed().as_millis(),
        };
    }

    phases.push(classification_phase(rec));
    match rec.klass {
        Klass::Type1 => {
            phases.push(crit_phase(rec));
            phases.push(cdgen_phase(rec));
            phases.extend(verify_typei_strata(rec));
        }
        Klass::Type2 => {
            phases.push(crit_phase(rec));
            phases.push(cdgen_phase(rec));
            phases.extend(verify_typeii_z(rec));
            phases.extend(verify_typeii_boundary(rec));
        }
        Klass::Special => {
            phases.push(crit_phase(rec));
            phases.push(cdgen_phase(rec));
            phases.extend(verify_special(rec));
        }
        Klass::Rational | Klass::Known | Klass::Excluded => {}
    }
    if let Some(oracle) = opts.oracle {
        if rec.has_cover() {
            phases.extend(oracle_phase(rec, &phases, oracle));
        }
    }

    let pass = phases.iter().all(|ph| ph.pass);
    VerificationReport {
        family: rec.no,
        phases,
        pass,
        millis: total.elapsed().as_millis(),
    }
}

fn classification_phase(rec: &FamilyRecord) -> PhaseReport {
    let mut clock = PhaseClock::start();
    let mut sorted = rec.weights.clone();
    sorted.sort_unstable();
    let ws = WeightSystem::new(sorted).expect("five weights");
    let verdict = rationality_classify(&ws, rec.d).expect("sorted");
    let index = fano_index(&ws, rec.d);

    let expect_rational = rec.klass == Klass::Rational;
    let class_ok = (verdict == Rationality::RationalByCriterion) == expect_rational;
    let sign_ok = match rec.rat {
        Some(sign) => {
            (verdict == Rationality::RationalByCriterion) == (sign == RatSign::Rational)
        }
        None => true,
    };
    let index_ok = match (index.as_ref(), rec.ind) {
        (Ok(&got), Some(want)) => got == want,
        (Ok(&got), None) => got == 1,
        (Err(_), _) => false,
    };
    let mut note = match verdict {
        Rationality::RationalByCriterion => {
            format!("RATIONAL_BY_CRITERION ({})", rationality_clause(&ws, rec.d).unwrap())
        }
        Rationality::NotByCriterion => "NOT_BY_CRITERION".to_string(),
    };
    if rec.no == 96 {
        note.push_str("; excluded: cubic threefold");
    }
    if let Ok(ix) = index {
        note.push_str(&format!("; index {ix}"));
    }
    clock.report("classification", class_ok && sign_ok && index_ok, None, None, Some(note))
}

fn crit_phase(rec: &FamilyRecord) -> PhaseReport {
    let mut clock = PhaseClock::start();
    let p = rec.p.expect("cover family");
    let base = WeightSystem::new(rec.base_weights().to_vec()).expect("base weights");
    let crit = check_condition_crit(&base, rec.d, p);
    // families 103 and 122 have no weight-one coordinate at all; their
    // branch sections are controlled by bespoke arguments instead, so
    // the expected outcome there is a clean clause-1 failure
    let expects_failure = matches!(rec.no, 103 | 122);
    let (pass, note) = if expects_failure {
        (
            !crit.has_weight_one && crit.degree_dominates,
            "clause 1 fails as required; branch section handled per-family".to_string(),
        )
    } else {
        (
            crit.pass,
            format!(
                "weight-one {}, degree bound {}, char-2 clause {}",
                crit.has_weight_one, crit.degree_dominates, crit.char_two_clause
            ),
        )
    };
    clock.report("crit-condition", pass, None, None, Some(note))
}

/// The weight system of the ambient of the cover base `Z`, and whether
/// `Z` is a hypersurface there (as opposed to the whole space).
fn z_ambient(rec: &FamilyRecord) -> (WeightSystem, bool) {
    let cover = rec.cover.expect("cover family");
    let base = rec.base_weights().to_vec();
    match (rec.no, cover.k) {
        // plain covers over the weighted projective space itself
        (103, _) | (122, _) => (WeightSystem::new(base).unwrap(), false),
        (_, None) if rec.no != 19 => (WeightSystem::new(base).unwrap(), false),
        // hypersurface bases
        _ => {
            let mut w = base;
            w.push(rec.weights[4] * cover.m);
            (WeightSystem::new(w).unwrap(), true)
        }
    }
}

fn cdgen_phase(rec: &FamilyRecord) -> PhaseReport {
    let mut clock = PhaseClock::start();
    let base = WeightSystem::new(rec.base_weights().to_vec()).expect("base weights");
    let (ambient, is_hyper) = z_ambient(rec);
    let rep = check_cdgen_arithmetic(&base, &ambient, is_hyper, rec.d);
    let pass = rep.n_ok && rep.delta >= 0 && rep.section_exists && rep.wf;
    let note = format!(
        "delta {}, section {}, well-formed {}",
        rep.delta, rep.section_exists, rep.wf
    );
    clock.report("cdgen", pass, None, None, Some(note))
}

/// Certificate sweep for a plain cover `w^m + f`: the plain minor
/// condition on every non-empty subset of the weight-many base
/// variables (for families 103 and 122, of the two index sets whose
/// strata cover the complement of the smooth open set).
fn verify_typei_strata(rec: &FamilyRecord) -> Vec<PhaseReport> {
    let p = rec.p.expect("cover family");
    let lambda = base_lambda(rec);
    let base = rec.base_weights();
    let wt_many: Vec<usize> = (0..4).filter(|&i| base[i] > 1).collect();
    let strata = nonempty_subsets(&wt_many);
    sweep_star_strata(rec, &lambda, strata, p)
}

fn sweep_star_strata(
    rec: &FamilyRecord,
    lambda: &[Monomial],
    strata: Vec<Vec<usize>>,
    p: Char,
) -> Vec<PhaseReport> {
    let mut out = Vec::new();
    for on in strata {
        let mut clock = PhaseClock::start();
        let stratum = Stratum::new(on.clone()).expect("non-empty");
        let label = format!("stratum {{{}}}", stratum_names(&on));
        // size-3 strata try the embedded certificate first
        let stored = rec
            .certs
            .iter()
            .find(|c| matches!(c.table, TableTag::T3 | TableTag::S103 | TableTag::S122)
                && c.stratum == on && !c.j.is_empty());
        let (pass, cert, det, note) = if let Some(entry) = stored {
            let lambda5: Vec<Monomial> = lambda.iter().map(pad5).collect();
            check_stored_then_search(&lambda5, entry, CertKind::Star, p, || {
                let v = holds_star(lambda, &stratum, p);
                lift_verdict(v)
            })
        } else {
            let shortcut = if on.len() <= 2 {
                shortcut_star(lambda, &stratum, p).expect("small stratum")
            } else {
                None
            };
            let v = holds_star(lambda, &stratum, p);
            let note = shortcut.map(|r| format!("shortcut rule {r}"));
            (v.holds, v.certificate, v.determinant, note)
        };
        out.push(clock.report(
            "z-qsm",
            pass,
            cert.as_ref().map(describe),
            det.as_ref().map(|m| mono_string(&m.0)),
            Some(match note {
                Some(n) => format!("{label}; {n}"),
                None => label,
            }),
        ));
    }
    out
}

/// Lifts a verdict found over four variables into the five-variable
/// coordinate system used by reports.
fn lift_verdict(v: ConditionVerdict) -> ConditionVerdict {
    ConditionVerdict {
        holds: v.holds,
        certificate: v.certificate.map(|c| WitnessCertificate {
            kind: c.kind,
            stratum: c.stratum,
            xi: c.xi.iter().map(pad5).collect(),
            j_vars: c.j_vars,
            expected: c.expected.as_ref().map(pad5),
        }),
        determinant: v.determinant.as_ref().map(pad5),
        expected_match: v.expected_match,
    }
}

/// Cover-base phase for `w^m x_k + f`: the `k`-excluded condition on
/// every non-empty subset of the base variables other than `k`, plus
/// the case shortcut compared against the recorded case number.
fn verify_typeii_z(rec: &FamilyRecord) -> Vec<PhaseReport> {
    let p = rec.p.expect("cover family");
    let k = rec.cover.expect("cover").k.expect("distinguished variable");
    let lambda = base_lambda(rec);
    let mut out = Vec::new();

    let mut clock = PhaseClock::start();
    let stored_case = rec
        .certs
        .iter()
        .find(|c| c.table == TableTag::T4 && c.stratum.len() == 3)
        .and_then(|c| c.case);
    let hit = shortcut_z_qsm(&lambda, k, p).expect("four base variables");
    let (pass, note, cert) = match (&hit, stored_case) {
        (Some(m), Some(want)) if m.case == want => (
            true,
            format!("case {} matches the recorded case", m.case),
            Some(CertDescription {
                stratum: Vec::new(),
                xi: m.witnesses.iter().map(|g| mono_string(&g.0)).collect(),
                j: Vec::new(),
                bordered: false,
            }),
        ),
        (Some(m), Some(want)) => {
            (false, format!("case {} disagrees with the recorded case {want}", m.case), None)
        }
        (Some(m), None) => (true, format!("case {}", m.case), None),
        (None, _) => (false, "no case pattern matched".into(), None),
    };
    out.push(clock.report("z-qsm", pass, cert, None, Some(note)));

    let others: Vec<usize> = (0..4).filter(|&i| i != k).collect();
    out.extend(sweep_star_k_strata(rec, &lambda, nonempty_subsets(&others), k, p, "z-qsm"));
    out
}

fn sweep_star_k_strata(
    rec: &FamilyRecord,
    lambda: &[Monomial],
    strata: Vec<Vec<usize>>,
    k: usize,
    p: Char,
    phase: &str,
) -> Vec<PhaseReport> {
    let mut out = Vec::new();
    for on in strata {
        let mut clock = PhaseClock::start();
        let stratum = Stratum::new(on.clone()).expect("non-empty");
        let label = format!("stratum {{{}}}", stratum_names(&on));
        let stored = rec
            .certs
            .iter()
            .find(|c| c.table == TableTag::T5 && c.stratum == on && !c.j.is_empty());
        let (pass, cert, det, note) = if let Some(entry) = stored {
            let lambda5: Vec<Monomial> = lambda.iter().map(pad5).collect();
            check_stored_then_search(&lambda5, entry, CertKind::StarK { k }, p, || {
                lift_verdict(holds_star_k(lambda, &stratum, k, p))
            })
        } else {
            let shortcut = if on.len() <= 2 {
                shortcut_star_k(lambda, &stratum, k, p).expect("small stratum")
            } else {
                None
            };
            let v = holds_star_k(lambda, &stratum, k, p);
            let note = shortcut.map(|r| format!("shortcut rule {r}"));
            (v.holds, v.certificate, v.determinant, note)
        };
        out.push(clock.report(
            phase,
            pass,
            cert.as_ref().map(describe),
            det.as_ref().map(|m| mono_string(&m.0)),
            Some(match note {
                Some(n) => format!("{label}; {n}"),
                None => label,
            }),
        ));
    }
    out
}

/// Boundary phase for `w^m x_k + f`: when the distinguished variable
/// has weight at least two, the `k`-excluded condition must also hold
/// on every non-empty subset of the weight-many base variables.
fn verify_typeii_boundary(rec: &FamilyRecord) -> Vec<PhaseReport> {
    let p = rec.p.expect("cover family");
    let k = rec.cover.expect("cover").k.expect("distinguished variable");
    let base = rec.base_weights();
    if base[k] == 1 {
        let mut clock = PhaseClock::start();
        return vec![clock.report(
            "x-boundary-qsm",
            true,
            None,
            None,
            Some("skipped: the distinguished variable has weight 1, the boundary lies in its zero locus".into()),
        )];
    }
    let lambda = base_lambda(rec);
    let wt_many: Vec<usize> = (0..4).filter(|&i| base[i] > 1).collect();
    sweep_star_k_strata(rec, &lambda, nonempty_subsets(&wt_many), k, p, "x-boundary-qsm")
}

/// Scripted certificate runs for the three families with bespoke
/// arguments.
fn verify_special(rec: &FamilyRecord) -> Vec<PhaseReport> {
    let p = rec.p.expect("cover family");
    match rec.no {
        103 | 122 => {
            // plain double covers without a weight-one coordinate: the
            // complement of the smooth open set is covered by the
            // strata of two index triples
            let lambda = base_lambda(rec);
            let mut strata: Vec<Vec<usize>> = Vec::new();
            for big in [vec![1usize, 2, 3], vec![0usize, 2, 3]] {
                for sub in nonempty_subsets(&big) {
                    if !strata.contains(&sub) {
                        strata.push(sub);
                    }
                }
            }
            strata.sort_by_key(|s| (s.len(), s.clone()));
            sweep_star_strata(rec, &lambda, strata, p)
        }
        19 => {
            let mut out = Vec::new();
            // base side: degree-12 monomials plus the two cover-base
            // monomials in the fifth coordinate of weight 4
            let mut lam_z: Vec<Monomial> = base_lambda(rec).iter().map(pad5).collect();
            lam_z.push(Monomial(vec![0, 0, 0, 0, 3]));
            lam_z.push(Monomial(vec![0, 0, 0, 1, 2]));
            out.extend(special_entries(rec, &lam_z, Side::Z, "z-qsm", p));
            // covering side: degree-12 monomials plus the two terms of
            // the cover equation that involve the cover coordinate
            let mut lam_x: Vec<Monomial> = base_lambda(rec).iter().map(pad5).collect();
            lam_x.push(Monomial(vec![0, 0, 0, 1, 4]));
            lam_x.push(Monomial(vec![0, 0, 0, 0, 6]));
            out.extend(special_entries(rec, &lam_x, Side::X, "x-boundary-qsm", p));
            out
        }
        _ => {
            let mut clock = PhaseClock::start();
            vec![clock.report("z-qsm", false, None, None, Some("unknown special family".into()))]
        }
    }
}

fn special_entries(
    rec: &FamilyRecord,
    lambda: &[Monomial],
    side: Side,
    phase: &str,
    p: Char,
) -> Vec<PhaseReport> {
    let mut out = Vec::new();
    for entry in rec.certs.iter().filter(|c| c.side == Some(side)) {
        let mut clock = PhaseClock::start();
        let stratum = Stratum::new(entry.stratum.clone()).expect("non-empty");
        let label = format!("stratum {{{}}}", stratum_names(entry.stratum.as_slice()));
        let kind = if entry.j.len() == entry.stratum.len() {
            CertKind::Star
        } else {
            CertKind::StarPrime
        };
        let (pass, cert, det, note) =
            check_stored_then_search(lambda, entry, kind, p, || holds_dagger(lambda, &stratum, p));
        out.push(clock.report(
            phase,
            pass,
            cert.as_ref().map(describe),
            det.as_ref().map(|m| mono_string(&m.0)),
            Some(match note {
                Some(n) => format!("{label}; {n}"),
                None => label,
            }),
        ));
    }
    out
}

/// Extension degree used by the sampling oracle: big enough for a few
/// dozen distinct nonzero coordinates at small characteristics.
pub fn oracle_extension_degree(p: Char) -> usize {
    match p {
        2 => 3,
        3 => 2,
        _ => 1,
    }
}

fn oracle_phase(
    rec: &FamilyRecord,
    phases: &[PhaseReport],
    opts: OracleOptions,
) -> Vec<PhaseReport> {
    let p = rec.p.expect("cover family");
    let e = oracle_extension_degree(p);
    let lambda = base_lambda(rec);
    let mut out = Vec::new();
    // re-derive the base strata that carried a certificate
    let mut seen = Vec::new();
    for ph in phases {
        let Some(cert) = &ph.certificate else { continue };
        if cert.stratum.is_empty() {
            continue;
        }
        let on: Vec<usize> = cert
            .stratum
            .iter()
            .filter_map(|name| VAR_NAMES.iter().position(|v| v == name))
            .collect();
        if on.contains(&4) || seen.contains(&on) {
            continue; // cover-coordinate strata live in a different system
        }
        seen.push(on.clone());
        let mut clock = PhaseClock::start();
        let stratum = Stratum::new(on.clone()).expect("non-empty");
        let rank = oracle_rank_at_points(&lambda, &stratum, p, e, opts.samples, opts.seed);
        out.push(clock.report(
            "oracle",
            rank >= on.len(),
            None,
            None,
            Some(format!(
                "stratum {{{}}}: min rank {rank} over {} samples in degree-{e} extension",
                stratum_names(&on),
                opts.samples
            )),
        ));
    }
    out
}
