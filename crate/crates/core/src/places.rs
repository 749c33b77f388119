//! Real and marked `p`-adic places of a forged field, and the permutation of
//! real places induced by an automorphism `τ` of the complex numbers.
//!
//! Real places are numbered `1..=d` by the ascending order of the isolating
//! intervals of the definer; `p`-adic places over a completely split prime
//! by the ascending order of the definer's roots mod `p`. A
//! [`PlacePermutation`] `π` records `π(v) = τ∘v`; finite places are fixed.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::field::TotallyRealField;
use crate::perm::{Perm, PermError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlaceError {
    #[error("place index {index} outside 1..={degree}")]
    OutOfRange { index: usize, degree: usize },
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("cannot parse place: {0}")]
    Parse(String),
    #[error(transparent)]
    Perm(#[from] PermError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RealPlace(usize);

impl RealPlace {
    pub fn new(index: usize, degree: usize) -> Result<Self, PlaceError> {
        if index == 0 || index > degree {
            return Err(PlaceError::OutOfRange { index, degree });
        }
        Ok(RealPlace(index))
    }

    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for RealPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// The `slot`-th `p`-adic place over a completely split prime `p`. Written
/// `p11:1` in files and on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinitePlace {
    pub p: u64,
    pub slot: usize,
}

impl fmt::Display for FinitePlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}:{}", self.p, self.slot)
    }
}

impl FromStr for FinitePlace {
    type Err = PlaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PlaceError::Parse(s.to_string());
        let rest = s.trim().strip_prefix('p').ok_or_else(bad)?;
        let (p, slot) = rest.split_once(':').ok_or_else(bad)?;
        let p = p.parse().map_err(|_| bad())?;
        let slot = slot.parse().map_err(|_| bad())?;
        if slot == 0 {
            return Err(bad());
        }
        Ok(FinitePlace { p, slot })
    }
}

/// Permutation of the real places. Serialized as the image list `2,1,3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlacePermutation(Perm);

impl PlacePermutation {
    pub fn identity(degree: usize) -> Self {
        PlacePermutation(Perm::identity(degree))
    }

    pub fn from_images(images: &[usize]) -> Result<Self, PlaceError> {
        Ok(PlacePermutation(Perm::from_images(images)?))
    }

    /// Exchange real places `i` and `j`.
    pub fn transposition(degree: usize, i: usize, j: usize) -> Result<Self, PlaceError> {
        for k in [i, j] {
            RealPlace::new(k, degree)?;
        }
        Ok(PlacePermutation(Perm::transposition(degree, i, j)))
    }

    pub fn degree(&self) -> usize {
        self.0.degree()
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.images()
    }

    pub fn as_perm(&self) -> &Perm {
        &self.0
    }

    pub fn apply(&self, v: RealPlace) -> RealPlace {
        RealPlace(self.0.apply(v.0))
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    /// `(self ∘ other)(v) = self(other(v))`.
    pub fn compose(&self, other: &Self) -> Result<Self, PlaceError> {
        if self.degree() != other.degree() {
            return Err(PlaceError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(PlacePermutation(self.0.compose_unchecked(&other.0)))
    }

    pub fn inverse(&self) -> Self {
        PlacePermutation(self.0.inverse())
    }

    /// `π⁻¹(S) = {v : π(v) ∈ S}`, the pullback of a set of places.
    pub fn preimage(&self, set: &BTreeSet<RealPlace>) -> BTreeSet<RealPlace> {
        (1..=self.degree()).map(RealPlace).filter(|&v| set.contains(&self.apply(v))).collect()
    }

    /// True iff `π` maps `S` onto itself.
    pub fn preserves_subset(&self, set: &BTreeSet<RealPlace>) -> bool {
        &self.preimage(set) == set
    }
}

impl fmt::Display for PlacePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for PlacePermutation {
    type Err = PlaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(PlacePermutation(s.parse()?))
    }
}

/// Which permutations of real places are known to come from some `τ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Realizability {
    /// The Galois closure has group `S_d`, so every permutation occurs.
    FullSymmetric,
    /// Only transitivity of the action is guaranteed.
    TransitivityOnly,
}

impl Realizability {
    pub fn as_str(self) -> &'static str {
        match self {
            Realizability::FullSymmetric => "full-symmetric",
            Realizability::TransitivityOnly => "transitivity-only",
        }
    }
}

impl FromStr for Realizability {
    type Err = PlaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full-symmetric" => Ok(Realizability::FullSymmetric),
            "transitivity-only" => Ok(Realizability::TransitivityOnly),
            _ => Err(PlaceError::Parse(s.to_string())),
        }
    }
}

pub fn realizability_note(field: &TotallyRealField) -> Realizability {
    if field.degree() == 1 || field.has_trivial_automorphisms() {
        Realizability::FullSymmetric
    } else {
        Realizability::TransitivityOnly
    }
}

/// Convenience for building place sets from one-based indices.
pub fn real_places(degree: usize, indices: &[usize]) -> Result<BTreeSet<RealPlace>, PlaceError> {
    indices.iter().map(|&i| RealPlace::new(i, degree)).collect()
}
