//! Local-invariant records for the three families of examples, with their
//! real-rank, dimension and compactness calculators.
//!
//! Each datum fixes the isomorphism class of the group at every real place
//! and at the marked `p`-adic places. The global group is not built: its
//! existence with the prescribed local types is the recorded
//! [`EXISTENCE_ASSUMPTION`].

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_integer::binomial;
use thiserror::Error;

use crate::field::TotallyRealField;
use crate::perm::Perm;
use crate::places::{FinitePlace, RealPlace};

mod quaternion;
mod type_d;
mod unitary;

pub use quaternion::QuaternionDatum;
pub use type_d::TypeDDatum;
pub use unitary::{format_signatures, parse_signatures, Signature, UnitaryDatum, UnitaryLocalType};

pub const EXISTENCE_ASSUMPTION: &str = "Borel-Harder: an absolutely simple, simply connected group over F \
     with the prescribed local types at finitely many places exists";

/// Brute-force reflex computations enumerate `S_d` up to this degree.
pub const BRUTE_FORCE_MAX_DEGREE: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("reciprocity parity: |ram_infinite| = {infinite} plus |ram_finite| = {finite} is odd")]
    ReciprocityParity { infinite: usize, finite: usize },
    #[error("every real place is definite; at least one indefinite place is required")]
    NoIndefinitePlace,
    #[error("real place {index} outside 1..={degree}")]
    RealPlaceOutOfRange { index: usize, degree: usize },
    #[error("place {0} lies over a prime with no split-prime witness on the field")]
    MissingSplitWitness(FinitePlace),
    #[error("place {place} has slot above the degree {degree}")]
    SlotOutOfRange { place: FinitePlace, degree: usize },
    #[error("n = {n} is below the minimum {minimum}")]
    RankTooSmall { n: usize, minimum: usize },
    #[error("expected {expected} real-place entries, found {found}")]
    PlaceCount { expected: usize, found: usize },
    #[error("signature ({p},{q}) at place {place} is not p >= q with p + q = {n}")]
    BadSignature { place: usize, p: usize, q: usize, n: usize },
    #[error("finite marks need even n; n = {0} has a single p-adic class")]
    OddRankMarks(usize),
    #[error("marked place {0} is not declared inert in the CM extension")]
    NotInert(FinitePlace),
    #[error("the real and quaternionic place sets do not partition the real places")]
    NotAPartition,
    #[error("both the real and the quaternionic place sets must be non-empty")]
    EmptyPart,
    #[error("the field carries no symmetric-group certificate")]
    CertificateRequired,
    #[error("invalid local tag `{0}`")]
    BadTag(String),
    #[error("cannot parse {0}")]
    Parse(String),
}

fn check_real_places(degree: usize, set: &BTreeSet<RealPlace>) -> Result<(), FormError> {
    match set.iter().find(|v| v.index() > degree) {
        Some(v) => Err(FormError::RealPlaceOutOfRange { index: v.index(), degree }),
        None => Ok(()),
    }
}

fn check_finite_place(field: &TotallyRealField, v: &FinitePlace) -> Result<(), FormError> {
    if field.split_witness(v.p).is_none() {
        return Err(FormError::MissingSplitWitness(*v));
    }
    if v.slot > field.degree() {
        return Err(FormError::SlotOutOfRange { place: *v, degree: field.degree() });
    }
    Ok(())
}

/// Opaque name of a local isomorphism class at a `p`-adic place.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalTag(String);

impl LocalTag {
    pub fn new(s: &str) -> Result<Self, FormError> {
        let ok = !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || "-_()".contains(c));
        if ok {
            Ok(LocalTag(s.to_string()))
        } else {
            Err(FormError::BadTag(s.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for LocalTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub const TAG_RAMIFIED: &str = "ramified";
pub const TAG_UNRAMIFIED: &str = "unramified";
/// Default tag at unmarked type-D `p`-adic places.
pub const TAG_SPLIT: &str = "split";

/// Isomorphism class of the group at a real place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RealLocalType {
    Definite,
    Indefinite,
    Unitary(Signature),
    /// `BD I(q=2)`, real rank 2.
    BdI,
    /// `D III`, real rank `⌊n/2⌋`.
    DIII,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Compactness {
    Compact,
    NoncompactWitnessed,
    Undetermined,
}

impl Compactness {
    pub fn as_str(self) -> &'static str {
        match self {
            Compactness::Compact => "compact",
            Compactness::NoncompactWitnessed => "noncompact-witnessed",
            Compactness::Undetermined => "undetermined",
        }
    }
}

/// A failed construction condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Condition (i): all real places carry isomorphic local groups.
    IdenticalLocalTypes,
    /// Condition (ii): the sum of real ranks is below 2.
    RankBelowTwo { rank: usize },
}

impl Violation {
    pub fn code(&self) -> &'static str {
        match self {
            Violation::IdenticalLocalTypes => "condition-i",
            Violation::RankBelowTwo { .. } => "condition-ii",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::IdenticalLocalTypes => write!(f, "local groups at all real places are isomorphic"),
            Violation::RankBelowTwo { rank } => write!(f, "real rank {rank} < 2"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShimuraDatum {
    Quaternionic(QuaternionDatum),
    Unitary(UnitaryDatum),
    TypeD(TypeDDatum),
}

impl ShimuraDatum {
    pub fn kind(&self) -> &'static str {
        match self {
            ShimuraDatum::Quaternionic(_) => "quaternionic",
            ShimuraDatum::Unitary(_) => "unitary",
            ShimuraDatum::TypeD(_) => "type-d",
        }
    }

    pub fn existence_assumption(&self) -> &'static str {
        EXISTENCE_ASSUMPTION
    }

    pub fn field(&self) -> &Arc<TotallyRealField> {
        match self {
            ShimuraDatum::Quaternionic(q) => q.field(),
            ShimuraDatum::Unitary(u) => u.field(),
            ShimuraDatum::TypeD(t) => t.field(),
        }
    }

    pub fn degree(&self) -> usize {
        self.field().degree()
    }

    pub fn real_places(&self) -> impl Iterator<Item = RealPlace> {
        let d = self.degree();
        (1..=d).map(move |i| RealPlace::new(i, d).unwrap())
    }

    pub fn real_local_type(&self, v: RealPlace) -> RealLocalType {
        match self {
            ShimuraDatum::Quaternionic(q) if q.is_definite_at(v) => RealLocalType::Definite,
            ShimuraDatum::Quaternionic(_) => RealLocalType::Indefinite,
            ShimuraDatum::Unitary(u) => RealLocalType::Unitary(u.signatures()[v.index() - 1]),
            ShimuraDatum::TypeD(t) if t.s_quaternionic().contains(&v) => RealLocalType::DIII,
            ShimuraDatum::TypeD(_) => RealLocalType::BdI,
        }
    }

    /// Local tags at the `p`-adic places over `p`, indexed by slot.
    pub fn finite_tags(&self, p: u64) -> Vec<LocalTag> {
        let d = self.degree();
        (1..=d)
            .map(|slot| {
                let v = FinitePlace { p, slot };
                let name = match self {
                    ShimuraDatum::Quaternionic(q) if q.ram_finite().contains(&v) => TAG_RAMIFIED.to_string(),
                    ShimuraDatum::Quaternionic(_) => TAG_UNRAMIFIED.to_string(),
                    ShimuraDatum::Unitary(u) => u.finite_marks().get(&v).copied().unwrap_or_default().as_str().to_string(),
                    ShimuraDatum::TypeD(t) => t.finite_marks().get(&v).map_or(TAG_SPLIT.to_string(), |t| t.to_string()),
                };
                LocalTag(name)
            })
            .collect()
    }

    /// Sum over real places of the real rank of the local group.
    pub fn real_rank(&self) -> usize {
        match self {
            ShimuraDatum::Quaternionic(q) => q.field().degree() - q.ram_infinite().len(),
            ShimuraDatum::Unitary(u) => u.signatures().iter().map(|s| s.q).sum(),
            ShimuraDatum::TypeD(t) => 2 * t.s_real().len() + (t.n() / 2) * t.s_quaternionic().len(),
        }
    }

    /// Complex dimension of the attached Shimura varieties.
    pub fn dimension(&self) -> usize {
        match self {
            ShimuraDatum::Quaternionic(q) => q.field().degree() - q.ram_infinite().len(),
            ShimuraDatum::Unitary(u) => u.signatures().iter().map(|s| s.p * s.q).sum(),
            ShimuraDatum::TypeD(t) => {
                let n = t.n();
                t.s_real().len() * (2 * n - 2) + t.s_quaternionic().len() * n * (n - 1) / 2
            }
        }
    }

    pub fn compactness(&self) -> Compactness {
        match self {
            ShimuraDatum::Quaternionic(q) if !q.ram_infinite().is_empty() => Compactness::Compact,
            ShimuraDatum::Quaternionic(_) => Compactness::Undetermined,
            ShimuraDatum::Unitary(u) if u.signatures().iter().any(|s| s.q == 0) => Compactness::Compact,
            ShimuraDatum::Unitary(u) if u.isotropic_diagonal() => Compactness::NoncompactWitnessed,
            ShimuraDatum::Unitary(_) => Compactness::Undetermined,
            // SU(A) contains SU(a1, -a1), hence a split torus
            ShimuraDatum::TypeD(_) => Compactness::NoncompactWitnessed,
        }
    }

    /// Conditions (i) and (ii) of the construction; empty when both hold.
    pub fn validate_construction_conditions(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut types = self.real_places().map(|v| self.real_local_type(v));
        let first = types.next();
        if types.all(|t| Some(t) == first) {
            out.push(Violation::IdenticalLocalTypes);
        }
        let rank = self.real_rank();
        if rank < 2 {
            out.push(Violation::RankBelowTwo { rank });
        }
        out
    }
}

/// Size of the orbit of `subset ⊆ {1..d}` under all of `S_d`, by enumeration.
pub fn subset_orbit_size(d: usize, subset: &BTreeSet<usize>) -> usize {
    let images: BTreeSet<BTreeSet<usize>> =
        Perm::all(d).iter().map(|g| subset.iter().map(|&i| g.apply(i)).collect()).collect();
    images.len()
}

/// Degree of the reflex field of a quaternionic datum over a field with
/// Galois closure group `S_d`: the index of the stabilizer of `Σ∞`.
pub fn reflex_degree_quaternionic(q: &QuaternionDatum) -> Result<u64, FormError> {
    if !q.field().has_trivial_automorphisms() {
        return Err(FormError::CertificateRequired);
    }
    let d = q.field().degree();
    let k = q.ram_infinite().len();
    let formula = binomial(d as u64, k as u64);
    if d <= BRUTE_FORCE_MAX_DEGREE {
        let subset = q.ram_infinite().iter().map(|v| v.index()).collect();
        let counted = subset_orbit_size(d, &subset) as u64;
        assert_eq!(counted, formula, "orbit enumeration disagrees with binomial({d},{k})");
    }
    Ok(formula)
}
