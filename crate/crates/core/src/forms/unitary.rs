use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::field::TotallyRealField;
use crate::places::FinitePlace;

use super::{check_finite_place, FormError};

/// Signature `(p, q)` of a hermitian form at a real place, `p >= q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub p: usize,
    pub q: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.p, self.q)
    }
}

/// Parses the `p,q:p,q:...` list, one entry per real place in index order.
pub fn parse_signatures(s: &str) -> Result<Vec<Signature>, FormError> {
    s.split(':')
        .map(|pair| {
            let bad = || FormError::Parse(format!("signature `{pair}`"));
            let (p, q) = pair.split_once(',').ok_or_else(bad)?;
            Ok(Signature { p: p.trim().parse().map_err(|_| bad())?, q: q.trim().parse().map_err(|_| bad())? })
        })
        .collect()
}

pub fn format_signatures(sigs: &[Signature]) -> String {
    sigs.iter().map(ToString::to_string).collect::<Vec<_>>().join(":")
}

/// The two isomorphism classes of special unitary groups at a `p`-adic place
/// inert in `E`, for even `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum UnitaryLocalType {
    #[default]
    TypeA,
    TypeB,
}

impl UnitaryLocalType {
    pub fn as_str(self) -> &'static str {
        match self {
            UnitaryLocalType::TypeA => "type-A",
            UnitaryLocalType::TypeB => "type-B",
        }
    }
}

impl FromStr for UnitaryLocalType {
    type Err = FormError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "type-A" => Ok(UnitaryLocalType::TypeA),
            "type-B" => Ok(UnitaryLocalType::TypeB),
            _ => Err(FormError::Parse(format!("unitary local type `{s}`"))),
        }
    }
}

/// `SU(A)` for a diagonal hermitian `A ∈ M_n(E)`, `E/F` a CM extension that
/// is not constructed: only the primes at which the marked places are inert
/// in `E` are recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitaryDatum {
    field: Arc<TotallyRealField>,
    n: usize,
    signatures: Vec<Signature>,
    finite_marks: BTreeMap<FinitePlace, UnitaryLocalType>,
    inert_primes: BTreeSet<u64>,
    isotropic_diagonal: bool,
}

impl UnitaryDatum {
    /// `isotropic_diagonal` records that `A` carries `1` and `-1` on the
    /// diagonal at least `min q_v` times each.
    pub fn new(
        field: Arc<TotallyRealField>,
        n: usize,
        signatures: Vec<Signature>,
        finite_marks: BTreeMap<FinitePlace, UnitaryLocalType>,
        inert_primes: BTreeSet<u64>,
        isotropic_diagonal: bool,
    ) -> Result<Self, FormError> {
        if n < 2 {
            return Err(FormError::RankTooSmall { n, minimum: 2 });
        }
        if signatures.len() != field.degree() {
            return Err(FormError::PlaceCount { expected: field.degree(), found: signatures.len() });
        }
        for (i, s) in signatures.iter().enumerate() {
            if s.p + s.q != n || s.p < s.q {
                return Err(FormError::BadSignature { place: i + 1, p: s.p, q: s.q, n });
            }
        }
        if !finite_marks.is_empty() && n % 2 == 1 {
            return Err(FormError::OddRankMarks(n));
        }
        for v in finite_marks.keys() {
            check_finite_place(&field, v)?;
            if !inert_primes.contains(&v.p) {
                return Err(FormError::NotInert(*v));
            }
        }
        Ok(UnitaryDatum { field, n, signatures, finite_marks, inert_primes, isotropic_diagonal })
    }

    pub fn field(&self) -> &Arc<TotallyRealField> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn signatures(&self) -> &[Signature] {
        &self.signatures
    }

    pub fn finite_marks(&self) -> &BTreeMap<FinitePlace, UnitaryLocalType> {
        &self.finite_marks
    }

    pub fn inert_primes(&self) -> &BTreeSet<u64> {
        &self.inert_primes
    }

    pub fn isotropic_diagonal(&self) -> bool {
        self.isotropic_diagonal
    }
}
