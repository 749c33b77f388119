//! The serialized certificate format.
//!
//! One TOML document type covers every stage: a field block alone (from
//! `forge-field`), a field plus a datum, or a full certificate with its
//! conjugate, checks and verdict. Arbitrary-size integers are decimal
//! strings. Everything except the provenance block is recomputable, and
//! [`Document::replay`] recomputes it.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conjugator::{issue_certificate, AutControl, Clause, MarkingRecord, RigidityCertificate, Verdict};
use crate::field::{FieldError, FrobeniusWitness, GaloisCertificate, SplitPrimeWitness, TotallyRealField};
use crate::forms::{
    format_signatures, parse_signatures, LocalTag, QuaternionDatum, ShimuraDatum, TypeDDatum, UnitaryDatum,
    UnitaryLocalType,
};
use crate::places::{FinitePlace, PlacePermutation, RealPlace, Realizability};
use crate::poly::{DegreePattern, IntPoly, RootInterval};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("cannot parse document: {0}")]
    Parse(String),
    #[error("invalid document: {0}")]
    Invalid(String),
    #[error("replay mismatch: {0}")]
    Mismatch(String),
}

impl DocumentError {
    /// `1` for a recomputation that disagrees with the document, `2` for
    /// input that cannot be read or violates a constructor invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            DocumentError::Mismatch(_) => 1,
            _ => 2,
        }
    }
}

fn invalid(e: impl ToString) -> DocumentError {
    DocumentError::Invalid(e.to_string())
}

fn num<T: FromStr>(s: &str, what: &str) -> Result<T, DocumentError> {
    s.parse().map_err(|_| DocumentError::Parse(format!("{what} `{s}`")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub schema_version: String,
    pub provenance: Provenance,
    pub field: FieldBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub datum: Option<DatumBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateBlock>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub tool: String,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<String>,
}

impl Provenance {
    pub fn new(command: &str, seed: Option<u64>) -> Self {
        Provenance {
            tool: concat!("conjforge ", env!("CARGO_PKG_VERSION")).to_string(),
            command: command.to_string(),
            seed: seed.map(|s| s.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldBlock {
    pub degree: usize,
    /// Coefficients, constant term first.
    pub definer: Vec<String>,
    /// Isolating interval `(lo, hi)` of each real embedding, in order.
    pub intervals: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub split_primes: Vec<SplitBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub galois: Option<GaloisBlock>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitBlock {
    pub p: String,
    pub residues: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaloisBlock {
    pub conclusion: String,
    pub transitive: WitnessBlock,
    pub cycle: WitnessBlock,
    pub transposition: WitnessBlock,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessBlock {
    pub p: String,
    pub pattern: Vec<usize>,
}

impl WitnessBlock {
    fn from_witness(w: &FrobeniusWitness) -> Self {
        WitnessBlock { p: w.p.to_string(), pattern: w.pattern.parts().to_vec() }
    }

    fn to_witness(&self) -> Result<FrobeniusWitness, DocumentError> {
        Ok(FrobeniusWitness { p: num(&self.p, "prime")?, pattern: DegreePattern::new(self.pattern.clone()) })
    }
}

impl FieldBlock {
    pub fn from_field(field: &TotallyRealField) -> Self {
        FieldBlock {
            degree: field.degree(),
            definer: field.definer().coeffs().iter().map(BigInt::to_string).collect(),
            intervals: field.embeddings().intervals().iter().map(|i| (i.lo.to_string(), i.hi.to_string())).collect(),
            split_primes: field
                .split_primes()
                .iter()
                .map(|w| SplitBlock { p: w.p.to_string(), residues: w.residues.iter().map(u64::to_string).collect() })
                .collect(),
            galois: field.galois_certificate().map(|c| GaloisBlock {
                conclusion: GaloisCertificate::CONCLUSION.to_string(),
                transitive: WitnessBlock::from_witness(&c.transitive),
                cycle: WitnessBlock::from_witness(&c.cycle),
                transposition: WitnessBlock::from_witness(&c.transposition),
            }),
        }
    }

    /// Rebuild the field from its definer, replaying the Galois and split
    /// witnesses. Stored intervals are parsed but the field recomputes its
    /// own; [`Document::replay`] compares the two.
    pub fn to_field(&self) -> Result<TotallyRealField, DocumentError> {
        let coeffs = self.definer.iter().map(|c| num::<BigInt>(c, "coefficient")).collect::<Result<Vec<_>, _>>()?;
        for (lo, hi) in &self.intervals {
            num::<BigRational>(lo, "interval endpoint")?;
            num::<BigRational>(hi, "interval endpoint")?;
        }
        let definer = IntPoly::new(coeffs);
        if definer.degree() != Some(self.degree) {
            return Err(invalid(format!("definer {definer} does not have degree {}", self.degree)));
        }
        let galois = match &self.galois {
            None => None,
            Some(g) => {
                if g.conclusion != GaloisCertificate::CONCLUSION {
                    return Err(DocumentError::Mismatch(format!("galois conclusion `{}`", g.conclusion)));
                }
                Some(GaloisCertificate {
                    degree: self.degree,
                    transitive: g.transitive.to_witness()?,
                    cycle: g.cycle.to_witness()?,
                    transposition: g.transposition.to_witness()?,
                })
            }
        };
        let mut field = TotallyRealField::new(definer, galois).map_err(field_error)?;
        for s in &self.split_primes {
            let residues = s.residues.iter().map(|r| num(r, "residue")).collect::<Result<Vec<u64>, _>>()?;
            field.add_split_witness(SplitPrimeWitness { p: num(&s.p, "prime")?, residues }).map_err(field_error)?;
        }
        Ok(field)
    }

    /// The stored isolating intervals, parsed.
    pub fn intervals(&self) -> Result<Vec<RootInterval>, DocumentError> {
        self.intervals
            .iter()
            .map(|(lo, hi)| Ok(RootInterval { lo: num(lo, "interval endpoint")?, hi: num(hi, "interval endpoint")? }))
            .collect()
    }
}

fn field_error(e: FieldError) -> DocumentError {
    match e {
        FieldError::CertificateMismatch(_) | FieldError::BadSplitWitness(_) => DocumentError::Mismatch(e.to_string()),
        _ => invalid(e),
    }
}

/// Values computed from the datum, recorded for readers and checked on replay.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Derived {
    pub dimension: usize,
    pub real_rank: usize,
    pub compactness: String,
    pub existence_assumption: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DatumBlock {
    Quaternionic {
        ram_infinite: Vec<usize>,
        ram_finite: Vec<String>,
        derived: Derived,
    },
    Unitary {
        n: usize,
        /// `p,q:p,q:...` by real-place index.
        signatures: String,
        isotropic_diagonal: bool,
        inert_primes: Vec<String>,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        marks: BTreeMap<String, String>,
        derived: Derived,
    },
    TypeD {
        n: usize,
        s_real: Vec<usize>,
        s_quaternionic: Vec<usize>,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        marks: BTreeMap<String, String>,
        derived: Derived,
    },
}

fn indices(set: &BTreeSet<RealPlace>) -> Vec<usize> {
    set.iter().map(|v| v.index()).collect()
}

fn places(d: usize, idx: &[usize]) -> Result<BTreeSet<RealPlace>, DocumentError> {
    idx.iter().map(|&i| RealPlace::new(i, d).map_err(invalid)).collect()
}

fn finite_place(s: &str) -> Result<FinitePlace, DocumentError> {
    s.parse().map_err(|_| DocumentError::Parse(format!("finite place `{s}`")))
}

impl DatumBlock {
    pub fn from_datum(datum: &ShimuraDatum) -> Self {
        let derived = Derived {
            dimension: datum.dimension(),
            real_rank: datum.real_rank(),
            compactness: datum.compactness().as_str().to_string(),
            existence_assumption: datum.existence_assumption().to_string(),
        };
        match datum {
            ShimuraDatum::Quaternionic(q) => DatumBlock::Quaternionic {
                ram_infinite: indices(q.ram_infinite()),
                ram_finite: q.ram_finite().iter().map(ToString::to_string).collect(),
                derived,
            },
            ShimuraDatum::Unitary(u) => DatumBlock::Unitary {
                n: u.n(),
                signatures: format_signatures(u.signatures()),
                isotropic_diagonal: u.isotropic_diagonal(),
                inert_primes: u.inert_primes().iter().map(u64::to_string).collect(),
                marks: u.finite_marks().iter().map(|(v, t)| (v.to_string(), t.as_str().to_string())).collect(),
                derived,
            },
            ShimuraDatum::TypeD(t) => DatumBlock::TypeD {
                n: t.n(),
                s_real: indices(t.s_real()),
                s_quaternionic: indices(t.s_quaternionic()),
                marks: t.finite_marks().iter().map(|(v, tag)| (v.to_string(), tag.to_string())).collect(),
                derived,
            },
        }
    }

    /// Rebuild the datum over `field`. Derived values are not consulted.
    pub fn to_datum(&self, field: Arc<TotallyRealField>) -> Result<ShimuraDatum, DocumentError> {
        let d = field.degree();
        let datum = match self {
            DatumBlock::Quaternionic { ram_infinite, ram_finite, .. } => {
                let fin = ram_finite.iter().map(|s| finite_place(s)).collect::<Result<_, _>>()?;
                ShimuraDatum::Quaternionic(QuaternionDatum::new(field, places(d, ram_infinite)?, fin).map_err(invalid)?)
            }
            DatumBlock::Unitary { n, signatures, isotropic_diagonal, inert_primes, marks, .. } => {
                let sigs = parse_signatures(signatures).map_err(|e| DocumentError::Parse(e.to_string()))?;
                let inert = inert_primes.iter().map(|p| num(p, "prime")).collect::<Result<_, _>>()?;
                let marks = marks
                    .iter()
                    .map(|(v, t)| {
                        let ty = t.parse::<UnitaryLocalType>().map_err(|e| DocumentError::Parse(e.to_string()))?;
                        Ok((finite_place(v)?, ty))
                    })
                    .collect::<Result<_, DocumentError>>()?;
                ShimuraDatum::Unitary(
                    UnitaryDatum::new(field, *n, sigs, marks, inert, *isotropic_diagonal).map_err(invalid)?,
                )
            }
            DatumBlock::TypeD { n, s_real, s_quaternionic, marks, .. } => {
                let marks = marks
                    .iter()
                    .map(|(v, t)| Ok((finite_place(v)?, LocalTag::new(t).map_err(invalid)?)))
                    .collect::<Result<_, DocumentError>>()?;
                ShimuraDatum::TypeD(
                    TypeDDatum::new(field, *n, places(d, s_real)?, places(d, s_quaternionic)?, marks)
                        .map_err(invalid)?,
                )
            }
        };
        Ok(datum)
    }

    pub fn derived(&self) -> &Derived {
        match self {
            DatumBlock::Quaternionic { derived, .. }
            | DatumBlock::Unitary { derived, .. }
            | DatumBlock::TypeD { derived, .. } => derived,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateBlock {
    /// Image list of `π`.
    pub permutation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marking: Option<String>,
    /// `granted` or `refused`.
    pub verdict: String,
    pub failing: Vec<String>,
    pub checks: ChecksBlock,
    pub conjugate: DatumBlock,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChecksBlock {
    pub rank: usize,
    pub rank_ok: bool,
    pub partition_moved: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aut_control: Option<String>,
    pub realizability: String,
    pub tau_asserted: bool,
}

impl CertificateBlock {
    pub fn from_certificate(cert: &RigidityCertificate) -> Self {
        let (verdict, failing) = match &cert.verdict {
            Verdict::Granted => ("granted", Vec::new()),
            Verdict::Refused(c) => ("refused", c.iter().map(|c| c.as_str().to_string()).collect()),
        };
        let c = &cert.checks;
        CertificateBlock {
            permutation: cert.permutation.to_string(),
            marking: cert.marking.map(|m| m.place.to_string()),
            verdict: verdict.to_string(),
            failing,
            checks: ChecksBlock {
                rank: c.rank,
                rank_ok: c.rank_ok,
                partition_moved: c.partition_moved,
                aut_control: c.aut_control.map(|a| a.to_string()),
                realizability: c.realizability.as_str().to_string(),
                tau_asserted: c.tau_asserted,
            },
            conjugate: DatumBlock::from_datum(&cert.conjugate),
        }
    }

    pub fn permutation(&self) -> Result<PlacePermutation, DocumentError> {
        num(&self.permutation, "permutation")
    }

    pub fn marking(&self) -> Result<Option<MarkingRecord>, DocumentError> {
        self.marking.as_deref().map(|s| Ok(MarkingRecord { place: finite_place(s)? })).transpose()
    }

    /// The stored verdict, parsed.
    pub fn verdict(&self) -> Result<Verdict, DocumentError> {
        match self.verdict.as_str() {
            "granted" if self.failing.is_empty() => Ok(Verdict::Granted),
            "refused" => self
                .failing
                .iter()
                .map(|c| c.parse::<Clause>().map_err(DocumentError::Parse))
                .collect::<Result<_, _>>()
                .map(Verdict::Refused),
            v => Err(DocumentError::Parse(format!("verdict `{v}`"))),
        }
    }

    /// Syntax check of the stored checks block.
    fn validate(&self) -> Result<(), DocumentError> {
        if let Some(a) = &self.checks.aut_control {
            a.parse::<AutControl>().map_err(DocumentError::Parse)?;
        }
        self.checks.realizability.parse::<Realizability>().map_err(|e| DocumentError::Parse(e.to_string()))?;
        self.verdict().map(drop)
    }
}

impl Document {
    pub fn from_field(field: &TotallyRealField, provenance: Provenance) -> Self {
        Document {
            schema_version: SCHEMA_VERSION.to_string(),
            provenance,
            field: FieldBlock::from_field(field),
            datum: None,
            certificate: None,
        }
    }

    pub fn from_datum(datum: &ShimuraDatum, provenance: Provenance) -> Self {
        Document { datum: Some(DatumBlock::from_datum(datum)), ..Document::from_field(datum.field(), provenance) }
    }

    pub fn from_certificate(cert: &RigidityCertificate, provenance: Provenance) -> Self {
        Document {
            certificate: Some(CertificateBlock::from_certificate(cert)),
            ..Document::from_datum(&cert.datum, provenance)
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("document serializes")
    }

    pub fn to_field(&self) -> Result<Arc<TotallyRealField>, DocumentError> {
        self.field.to_field().map(Arc::new)
    }

    /// The datum over the rebuilt field.
    pub fn to_datum(&self) -> Result<ShimuraDatum, DocumentError> {
        let block = self.datum.as_ref().ok_or_else(|| invalid("document has no datum block"))?;
        block.to_datum(self.to_field()?)
    }

    /// Re-issue the certificate from the stored datum, permutation, marking
    /// and realizability assertion.
    pub fn to_certificate(&self) -> Result<RigidityCertificate, DocumentError> {
        let block = self.certificate.as_ref().ok_or_else(|| invalid("document has no certificate block"))?;
        block.validate()?;
        let datum = self.to_datum()?;
        let marking = block.marking()?;
        issue_certificate(&datum, &block.permutation()?, marking.as_ref(), block.checks.tau_asserted).map_err(invalid)
    }

    /// Recompute every block from the field definer upward and compare with
    /// the stored document. Returns the recomputed document, which equals
    /// `self` on success.
    pub fn replay(&self) -> Result<Document, DocumentError> {
        let rebuilt = if self.certificate.is_some() {
            Document::from_certificate(&self.to_certificate()?, self.provenance.clone())
        } else if self.datum.is_some() {
            Document::from_datum(&self.to_datum()?, self.provenance.clone())
        } else {
            Document::from_field(&self.field.to_field()?, self.provenance.clone())
        };
        let mismatch = |what: &str| Err(DocumentError::Mismatch(format!("{what} differs from the recomputed value")));
        if rebuilt.field.intervals != self.field.intervals {
            return mismatch("field.intervals");
        }
        if rebuilt.field != self.field {
            return mismatch("field block");
        }
        if rebuilt.datum != self.datum {
            return mismatch("datum block");
        }
        if let (Some(a), Some(b)) = (&rebuilt.certificate, &self.certificate) {
            if a.conjugate != b.conjugate {
                return mismatch("certificate.conjugate");
            }
            if a.checks != b.checks {
                return mismatch("certificate.checks");
            }
            if a.verdict != b.verdict || a.failing != b.failing {
                return mismatch("verdict");
            }
        }
        if rebuilt != *self {
            return mismatch("document");
        }
        Ok(rebuilt)
    }
}

impl FromStr for Document {
    type Err = DocumentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let doc: Document = toml::from_str(s).map_err(|e| DocumentError::Parse(e.message().to_string()))?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(DocumentError::Parse(format!(
                "schema_version `{}`, expected `{SCHEMA_VERSION}`",
                doc.schema_version
            )));
        }
        Ok(doc)
    }
}

/// The `--marking` input file: a single marked `p`-adic place.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkingDocument {
    pub schema_version: String,
    pub place: String,
}

impl MarkingDocument {
    pub fn new(marking: &MarkingRecord) -> Self {
        MarkingDocument { schema_version: SCHEMA_VERSION.to_string(), place: marking.place.to_string() }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("marking serializes")
    }

    pub fn parse(s: &str) -> Result<MarkingRecord, DocumentError> {
        let doc: MarkingDocument = toml::from_str(s).map_err(|e| DocumentError::Parse(e.message().to_string()))?;
        Ok(MarkingRecord { place: finite_place(&doc.place)? })
    }
}
