//! Command-line front end: batch verification, single-family
//! drill-down, ad-hoc determinant evaluation, and database dumps.
//!
//! Exit codes: `0` on success, `1` when a verification (or determinant)
//! check fails, `2` on malformed input or database errors.

mod mono;

use clap::{Parser, Subcommand, ValueEnum};
use fanocheck::conditions::{build_bordered_jacobian, build_jacobian};
use fanocheck::db::{self, FamilyRecord, Klass};
use fanocheck::genericity::{rationality_classify, rationality_clause, Rationality};
use fanocheck::verify::{mono_string, verify_family, OracleOptions, VerifyOptions};
use fanocheck::wps::{Stratum, WeightSystem};
use rayon::prelude::*;
use serde::Serialize;
use std::process::ExitCode;

const DB_ENV: &str = "FANOCHECK_DB";

#[derive(Parser)]
#[command(
    name = "fanocheck",
    about = "Exact verification of quasi-smoothness certificates and rationality \
             classification for the 130 families of Fano 3-fold weighted hypersurfaces",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClassFilter {
    Type1,
    Type2,
    Special,
    Known,
    Rational,
    Excluded,
}

impl ClassFilter {
    fn matches(self, k: Klass) -> bool {
        matches!(
            (self, k),
            (ClassFilter::Type1, Klass::Type1)
                | (ClassFilter::Type2, Klass::Type2)
                | (ClassFilter::Special, Klass::Special)
                | (ClassFilter::Known, Klass::Known)
                | (ClassFilter::Rational, Klass::Rational)
                | (ClassFilter::Excluded, Klass::Excluded)
        )
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run every applicable verification phase for the selected families
    Verify {
        /// family selection: "all" or a comma-separated list of numbers
        #[arg(long, default_value = "all")]
        families: String,
        /// restrict the selection to one class
        #[arg(long, value_enum, ignore_case = true)]
        class: Option<ClassFilter>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// additionally sample stratum points and check matrix ranks
        #[arg(long)]
        oracle: bool,
        /// random seed for the sampling oracle
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// samples per stratum for the oracle
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// database path (falls back to $FANOCHECK_DB, then the built-in copy)
        #[arg(long)]
        db: Option<String>,
    },
    /// Print the rationality classification for the selected families
    Classify {
        #[arg(long, default_value = "all")]
        families: String,
        #[arg(long, value_enum, ignore_case = true)]
        class: Option<ClassFilter>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        db: Option<String>,
    },
    /// Evaluate one restricted (bordered) Jacobian determinant
    Det {
        /// ambient weights, e.g. 2,3,5,11,19 (coordinates x,y,z,t,w)
        #[arg(long, value_delimiter = ',')]
        weights: Vec<u32>,
        /// coefficient characteristic (a prime)
        #[arg(long)]
        p: u32,
        /// monomials, e.g. "t^3*z,z^7*y,y^12*x" (index fallback x0..x4)
        #[arg(long)]
        xi: String,
        /// differentiation variables, e.g. x,y,z
        #[arg(long, value_delimiter = ',')]
        j: Vec<String>,
        /// stratum variables: everything else is set to zero
        #[arg(long, value_delimiter = ',')]
        stratum: Vec<String>,
        /// prepend the row of the monomials themselves
        #[arg(long)]
        bordered: bool,
    },
    /// Write the loaded database back out in canonical form
    DumpDb {
        #[arg(long)]
        db: Option<String>,
    },
}

fn main() -> ExitCode {
    // die quietly when the read end of a pipe goes away
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_db(path: &Option<String>) -> Result<Vec<FamilyRecord>, String> {
    let path = path.clone().or_else(|| std::env::var(DB_ENV).ok());
    match path {
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|e| format!("{path}: {e}"))?;
            db::load_family_db(&text).map_err(|e| e.to_string())
        }
        None => Ok(db::embedded_family_db()),
    }
}

fn select(
    records: &[FamilyRecord],
    families: &str,
    class: Option<ClassFilter>,
) -> Result<Vec<FamilyRecord>, String> {
    let mut chosen: Vec<FamilyRecord> = if families.trim() == "all" {
        records.to_vec()
    } else {
        let mut out = Vec::new();
        for token in families.split(',') {
            let token = token.trim();
            if token.is_empty() {
                continue;
            }
            let no: u32 = token.parse().map_err(|_| format!("bad family number {token:?}"))?;
            let rec = records
                .iter()
                .find(|r| r.no == no)
                .ok_or_else(|| format!("unknown family {no}"))?;
            out.push(rec.clone());
        }
        out
    };
    if let Some(filter) = class {
        chosen.retain(|r| filter.matches(r.klass));
    }
    chosen.sort_by_key(|r| r.no);
    chosen.dedup_by_key(|r| r.no);
    if chosen.is_empty() {
        return Err("empty family selection".into());
    }
    Ok(chosen)
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Verify { families, class, format, oracle, seed, samples, db } => {
            let records = load_db(&db)?;
            let findings = db::validate_db(&records);
            if !findings.is_empty() {
                for f in &findings {
                    eprintln!("database: {:?} {}", f.family, f.message);
                }
                return Err("database failed validation".into());
            }
            let chosen = select(&records, &families, class)?;
            let opts = VerifyOptions {
                oracle: oracle.then_some(OracleOptions { seed, samples }),
            };
            let mut reports: Vec<_> =
                chosen.par_iter().map(|rec| verify_family(rec, &opts)).collect();
            reports.sort_by_key(|r| r.family);
            let pass = reports.iter().all(|r| r.pass);
            match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out<'a> {
                        pass: bool,
                        reports: &'a [fanocheck::verify::VerificationReport],
                    }
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&Out { pass, reports: &reports })
                            .expect("serializable")
                    );
                }
                Format::Text => {
                    for (rec, rep) in chosen.iter().zip(&reports) {
                        println!(
                            "family {:>3} [{}] {} ({} checks, {} ms)",
                            rep.family,
                            rec.klass,
                            if rep.pass { "pass" } else { "FAIL" },
                            rep.phases.len(),
                            rep.millis
                        );
                        for ph in &rep.phases {
                            let mut line = format!(
                                "    {:<16} {}",
                                ph.name,
                                if ph.pass { "ok" } else { "FAIL" }
                            );
                            if let Some(note) = &ph.note {
                                line.push_str(&format!("  {note}"));
                            }
                            if let Some(cert) = &ph.certificate {
                                line.push_str(&format!(
                                    "  [{}]_{{{}}}{}",
                                    cert.xi.join(", "),
                                    cert.j.join(","),
                                    if cert.bordered { "'" } else { "" }
                                ));
                            }
                            if let Some(det) = &ph.determinant {
                                line.push_str(&format!(" -> {det}"));
                            }
                            println!("{line}");
                        }
                    }
                    println!("{}", if pass { "all selected families pass" } else { "FAILURES" });
                }
            }
            Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Classify { families, class, format, db } => {
            let records = load_db(&db)?;
            let chosen = select(&records, &families, class)?;
            #[derive(Serialize)]
            struct Row {
                family: u32,
                degree: u64,
                weights: Vec<u32>,
                classification: &'static str,
                clause: Option<&'static str>,
                sign: Option<String>,
                note: Option<&'static str>,
            }
            let mut rows = Vec::new();
            for rec in &chosen {
                let mut sorted = rec.weights.clone();
                sorted.sort_unstable();
                let ws = WeightSystem::new(sorted.clone()).expect("weights");
                let verdict = rationality_classify(&ws, rec.d).expect("sorted");
                rows.push(Row {
                    family: rec.no,
                    degree: rec.d,
                    weights: sorted,
                    classification: match verdict {
                        Rationality::RationalByCriterion => "RATIONAL_BY_CRITERION",
                        Rationality::NotByCriterion => "NOT_BY_CRITERION",
                    },
                    clause: rationality_clause(&ws, rec.d),
                    sign: rec.rat.map(|s| {
                        serde_json::to_value(s).unwrap().as_str().unwrap().to_string()
                    }),
                    note: (rec.no == 96).then_some("excluded: cubic threefold"),
                });
            }
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&rows).expect("serializable")
                ),
                Format::Text => {
                    for r in &rows {
                        println!(
                            "family {:>3}  X_{:<2} P({})  {:<22} {}{}{}",
                            r.family,
                            r.degree,
                            r.weights.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","),
                            r.classification,
                            r.clause.map(|c| format!("[{c}] ")).unwrap_or_default(),
                            r.sign.as_deref().map(|s| format!("sign {s} ")).unwrap_or_default(),
                            r.note.unwrap_or(""),
                        );
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Det { weights, p, xi, j, stratum, bordered } => {
            if weights.len() < 2 || weights.len() > 5 {
                return Err("expected between two and five weights".into());
            }
            if !fanocheck::wps::is_prime(p) {
                return Err(format!("characteristic {p} is not prime"));
            }
            let arity = weights.len();
            let ws = WeightSystem::new(weights).map_err(|e| e.to_string())?;
            let xi = mono::parse_monomial_list(&xi, arity)?;
            if xi.is_empty() {
                return Err("empty monomial list".into());
            }
            let degs: Vec<u64> = xi.iter().map(|m| ws.degree(m)).collect();
            if degs.windows(2).any(|w| w[0] != w[1]) {
                return Err(format!("monomials of mixed weighted degrees {degs:?}"));
            }
            let jv = mono::parse_var_list(&j, arity)?;
            let on = mono::parse_var_list(&stratum, arity)?;
            let stratum = Stratum::new(on).map_err(|e| e.to_string())?;
            let matrix = if bordered {
                build_bordered_jacobian(&xi, &jv, p)
            } else {
                build_jacobian(&xi, &jv, p)
            }
            .map_err(|e| e.to_string())?;
            let det = matrix
                .restrict_to_stratum(&stratum)
                .determinant()
                .map_err(|e| e.to_string())?;
            match det.as_nonzero_monomial() {
                Some(m) => {
                    println!("{}", mono_string(&m.0));
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    println!("{det}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::DumpDb { db: path } => {
            let records = load_db(&path)?;
            print!("{}", db::serialize_db(&records));
            Ok(ExitCode::SUCCESS)
        }
    }
}
