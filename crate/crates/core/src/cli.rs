//! Command-line front end.
//!
//! Exit codes: `0` success or granted, `1` refused, replay mismatch or an
//! exhausted search, `2` invalid input.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use crate::conjugator::{issue_certificate, propose_tau, Verdict};
use crate::document::{Document, DocumentError, MarkingDocument, Provenance};
use crate::field::{
    certify_symmetric, find_split_prime, forge_field_with, FieldError, ForgeConfig, SplitPrimeWitness,
    TotallyRealField, DEFAULT_SPLIT_BUDGET,
};
use crate::forms::{
    parse_signatures, LocalTag, QuaternionDatum, ShimuraDatum, TypeDDatum, UnitaryDatum, UnitaryLocalType,
};
use crate::places::{real_places, FinitePlace, PlacePermutation};
use crate::poly::{degree_pattern_mod, roots_mod, IntPoly};

/// Name of the environment variable overriding the forge iteration budget.
pub const BUDGET_ENV: &str = "FORGE_BUDGET";

/// Split witnesses for primes named on the command line are found by a
/// residue scan; larger primes are refused.
const MAX_SCANNED_PRIME: u64 = 10_000_000;

#[derive(Parser, Debug)]
#[command(name = "conjforge", version, about = "Forge totally real fields and certify conjugate Shimura data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Forge a totally real field with Galois group S_d, or certify a given definer.
    ForgeField {
        #[arg(long, required_unless_present = "definer")]
        degree: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        prime_bound: u64,
        /// Coefficient list, constant term first, e.g. `-1,-3,0,1`.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "degree")]
        definer: Option<String>,
        /// Record the first completely split prime at or above this bound.
        #[arg(long, default_value_t = 2)]
        split_prime_start: u64,
    },
    /// Build a datum of one of the three families over a field document.
    ForgeDatum {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        field: PathBuf,
        /// Definite real places, e.g. `1` or `1,3`.
        #[arg(long, default_value = "")]
        ram_infinite: String,
        /// Ramified p-adic places, e.g. `p11:1,p11:2`.
        #[arg(long, default_value = "")]
        ram_finite: String,
        #[arg(long)]
        n: Option<usize>,
        /// `p,q:p,q:...` by real-place index.
        #[arg(long)]
        signatures: Option<String>,
        /// The hermitian matrix has enough `1` and `-1` diagonal entries.
        #[arg(long)]
        isotropic: bool,
        /// Marked p-adic local type, `p11:1=type-B`; repeatable.
        #[arg(long = "mark")]
        marks: Vec<String>,
        /// Primes inert in the CM extension, e.g. `11,13`.
        #[arg(long, default_value = "")]
        inert_primes: String,
        #[arg(long, default_value = "")]
        s_real: String,
        #[arg(long, default_value = "")]
        s_quaternionic: String,
    },
    /// Conjugate a datum and issue a rigidity certificate.
    #[command(group(ArgGroup::new("pi").required(true).args(["perm", "propose"])))]
    Certify {
        #[arg(long)]
        datum: PathBuf,
        /// Image list of the place permutation, e.g. `2,1,3`.
        #[arg(long)]
        perm: Option<String>,
        /// Use the smallest transposition of two non-isomorphic places.
        #[arg(long)]
        propose: bool,
        #[arg(long)]
        marking: Option<PathBuf>,
        /// Vouch that the permutation is induced by some automorphism of C.
        #[arg(long)]
        assert_tau: bool,
    },
    /// Recompute a document from its field block upward.
    Replay {
        #[arg(long)]
        certificate: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Quaternionic,
    Unitary,
    TypeD,
}

/// A failed command: message and exit code.
struct Failure(i32, String);

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        Failure(e.exit_code(), e.to_string())
    }
}

fn usage(msg: impl ToString) -> Failure {
    Failure(2, msg.to_string())
}

/// Run with the process environment.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_budget(args, std::env::var(BUDGET_ENV).ok().as_deref(), out, err)
}

/// Run with an explicit value for the budget override.
pub fn run_with_budget<I, T>(args: I, budget: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::ForgeField { degree, seed, prime_bound, definer, split_prime_start } => {
            forge_field_cmd(degree, seed, prime_bound, definer, split_prime_start, budget)
        }
        Command::ForgeDatum {
            kind,
            field,
            ram_infinite,
            ram_finite,
            n,
            signatures,
            isotropic,
            marks,
            inert_primes,
            s_real,
            s_quaternionic,
        } => forge_datum_cmd(&DatumArgs {
            kind,
            field,
            ram_infinite,
            ram_finite,
            n,
            signatures,
            isotropic,
            marks,
            inert_primes,
            s_real,
            s_quaternionic,
        }),
        Command::Certify { datum, perm, propose, marking, assert_tau } => {
            certify_cmd(&datum, perm.as_deref(), propose, marking.as_deref(), assert_tau)
        }
        Command::Replay { certificate } => replay_cmd(&certificate),
    };
    match result {
        Ok((code, text)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn read_document(path: &Path) -> Result<Document, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    text.parse::<Document>().map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn forge_field_cmd(
    degree: Option<usize>,
    seed: u64,
    prime_bound: u64,
    definer: Option<String>,
    split_start: u64,
    budget: Option<&str>,
) -> Result<(i32, String), Failure> {
    let mut config = ForgeConfig { prime_bound, ..ForgeConfig::default() };
    if let Some(b) = budget {
        config.budget = match b.trim().parse::<u64>() {
            Ok(n) if n > 0 => n,
            _ => return Err(usage(format!("{BUDGET_ENV} must be a positive integer, got `{b}`"))),
        };
    }
    let (mut field, seed) = match definer {
        Some(text) => {
            let f: IntPoly = text.parse().map_err(|e| usage(format!("--definer: {e}")))?;
            let cert = certify_symmetric(&f, prime_bound).ok();
            (TotallyRealField::new(f, cert).map_err(usage)?, None)
        }
        None => {
            let d = degree.expect("clap requires --degree without --definer");
            if d < 3 {
                return Err(usage(format!("--degree {d}: forging needs d ≥ 3 for the S_d certificate")));
            }
            match forge_field_with(d, seed, &config) {
                Ok((field, _)) => (field, Some(seed)),
                Err(e @ FieldError::SearchExhausted(_)) => return Err(Failure(1, e.to_string())),
                Err(e) => return Err(usage(e)),
            }
        }
    };
    match find_split_prime(field.definer(), split_start, DEFAULT_SPLIT_BUDGET) {
        Ok(w) => field.add_split_witness(w).map_err(usage)?,
        Err(e @ FieldError::SearchExhausted(_)) => return Err(Failure(1, e.to_string())),
        Err(e) => return Err(usage(e)),
    }
    Ok((0, Document::from_field(&field, Provenance::new("forge-field", seed)).to_toml()))
}

struct DatumArgs {
    kind: Kind,
    field: PathBuf,
    ram_infinite: String,
    ram_finite: String,
    n: Option<usize>,
    signatures: Option<String>,
    isotropic: bool,
    marks: Vec<String>,
    inert_primes: String,
    s_real: String,
    s_quaternionic: String,
}

fn list<T: std::str::FromStr>(s: &str, flag: &str) -> Result<Vec<T>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| usage(format!("--{flag}: cannot parse `{t}`"))))
        .collect()
}

/// Attach a verified split witness for every prime in `primes` not yet on the field.
fn ensure_split(field: &mut TotallyRealField, primes: impl IntoIterator<Item = u64>) -> Result<(), Failure> {
    for p in primes {
        if field.split_witness(p).is_some() {
            continue;
        }
        let split = degree_pattern_mod(field.definer(), p).is_ok_and(|pat| pat.is_totally_split());
        if !split {
            return Err(usage(format!("p = {p} does not split completely in the field")));
        }
        if p > MAX_SCANNED_PRIME {
            return Err(usage(format!("p = {p} exceeds the residue-scan limit {MAX_SCANNED_PRIME}")));
        }
        let w = SplitPrimeWitness { p, residues: roots_mod(field.definer(), p) };
        field.add_split_witness(w).map_err(usage)?;
    }
    Ok(())
}

fn marks<T>(entries: &[String], parse: impl Fn(&str) -> Result<T, Failure>) -> Result<BTreeMap<FinitePlace, T>, Failure> {
    entries
        .iter()
        .map(|m| {
            let (place, tag) = m.split_once('=').ok_or_else(|| usage(format!("--mark `{m}`: expected place=type")))?;
            let place = place.trim().parse().map_err(|e| usage(format!("--mark: {e}")))?;
            Ok((place, parse(tag.trim())?))
        })
        .collect()
}

fn forge_datum_cmd(a: &DatumArgs) -> Result<(i32, String), Failure> {
    let doc = read_document(&a.field)?;
    let mut field = doc.field.to_field()?;
    let d = field.degree();
    let places = |s: &str, flag: &str| real_places(d, &list::<usize>(s, flag)?).map_err(|e| usage(format!("--{flag}: {e}")));
    let need_n = || a.n.ok_or_else(|| usage("--n is required for this kind"));

    let datum = match a.kind {
        Kind::Quaternionic => {
            let fin: BTreeSet<FinitePlace> = list(&a.ram_finite, "ram-finite")?.into_iter().collect();
            ensure_split(&mut field, fin.iter().map(|v| v.p))?;
            let q = QuaternionDatum::new(Arc::new(field), places(&a.ram_infinite, "ram-infinite")?, fin);
            ShimuraDatum::Quaternionic(q.map_err(usage)?)
        }
        Kind::Unitary => {
            let sigs = a.signatures.as_deref().ok_or_else(|| usage("--signatures is required for unitary"))?;
            let sigs = parse_signatures(sigs).map_err(usage)?;
            let marks = marks(&a.marks, |t| t.parse::<UnitaryLocalType>().map_err(usage))?;
            let inert: BTreeSet<u64> = list(&a.inert_primes, "inert-primes")?.into_iter().collect();
            ensure_split(&mut field, marks.keys().map(|v| v.p))?;
            let u = UnitaryDatum::new(Arc::new(field), need_n()?, sigs, marks, inert, a.isotropic);
            ShimuraDatum::Unitary(u.map_err(usage)?)
        }
        Kind::TypeD => {
            let marks = marks(&a.marks, |t| LocalTag::new(t).map_err(usage))?;
            ensure_split(&mut field, marks.keys().map(|v| v.p))?;
            let s_real = places(&a.s_real, "s-real")?;
            let s_quat = places(&a.s_quaternionic, "s-quaternionic")?;
            let t = TypeDDatum::new(Arc::new(field), need_n()?, s_real, s_quat, marks);
            ShimuraDatum::TypeD(t.map_err(usage)?)
        }
    };
    let seed = doc.provenance.seed.as_deref().and_then(|s| s.parse().ok());
    Ok((0, Document::from_datum(&datum, Provenance::new("forge-datum", seed)).to_toml()))
}

fn certify_cmd(
    datum_path: &Path,
    perm: Option<&str>,
    propose: bool,
    marking: Option<&Path>,
    assert_tau: bool,
) -> Result<(i32, String), Failure> {
    let doc = read_document(datum_path)?;
    // a datum file must itself replay before it is certified
    doc.replay().map_err(|e| usage(format!("{}: {e}", datum_path.display())))?;
    let datum = doc.to_datum()?;
    let pi = match (perm, propose) {
        (Some(p), _) => p.parse::<PlacePermutation>().map_err(|e| usage(format!("--perm: {e}")))?,
        (None, _) => propose_tau(&datum)
            .ok_or_else(|| usage("no two real places carry non-isomorphic local groups; nothing to propose"))?,
    };
    let marking = match marking {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let m = MarkingDocument::parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            if datum.field().split_witness(m.p()).is_none() {
                return Err(usage(format!("marking refers to p = {} with no split witness on the field", m.p())));
            }
            Some(m)
        }
        None => None,
    };
    let cert = issue_certificate(&datum, &pi, marking.as_ref(), assert_tau).map_err(usage)?;
    let seed = doc.provenance.seed.as_deref().and_then(|s| s.parse().ok());
    let code = if cert.verdict.is_granted() { 0 } else { 1 };
    Ok((code, Document::from_certificate(&cert, Provenance::new("certify", seed)).to_toml()))
}

fn replay_cmd(path: &Path) -> Result<(i32, String), Failure> {
    let doc = read_document(path)?;
    let rebuilt = doc.replay()?;
    let verdict = match rebuilt.certificate.as_ref().map(|c| c.verdict()) {
        Some(Ok(Verdict::Granted)) => "granted".to_string(),
        Some(Ok(Verdict::Refused(c))) => {
            format!("refused ({})", c.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(", "))
        }
        Some(Err(e)) => return Err(e.into()),
        None if rebuilt.datum.is_some() => "datum ok".to_string(),
        None => "field ok".to_string(),
    };
    Ok((0, format!("replay ok: {verdict}\n")))
}
