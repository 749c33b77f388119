//! The conjugation action on local data and the rigidity certificates built
//! on top of it.
//!
//! Conjugating by `τ` pulls real-place data back along `π(v) = τ∘v`: the
//! conjugate has at `v` what the original had at `π(v)`. Finite data does
//! not move. A certificate is [`Verdict::Granted`] when the hypotheses of
//! the super-rigidity corollary verifiably hold for the pair, so the
//! conjugate lattices are not isomorphic. The rigidity theorem itself is
//! trusted.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::field::TotallyRealField;
use crate::forms::{
    FormError, LocalTag, QuaternionDatum, ShimuraDatum, TypeDDatum, UnitaryDatum, Violation,
};
use crate::places::{realizability_note, FinitePlace, PlacePermutation, RealPlace, Realizability};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConjugatorError {
    #[error("permutation of degree {perm} applied to a datum over a degree-{field} field")]
    DegreeMismatch { field: usize, perm: usize },
    #[error("datum fails the construction conditions: {}", list_violations(.0))]
    InvalidDatum(Vec<Violation>),
    #[error("no split-prime witness for {0} on the field")]
    MissingSplitWitness(u64),
    #[error(transparent)]
    Form(#[from] FormError),
}

fn list_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Pull the real-place local data back along `π`; copy finite data.
pub fn conjugate_datum(datum: &ShimuraDatum, pi: &PlacePermutation) -> Result<ShimuraDatum, ConjugatorError> {
    let d = datum.degree();
    if pi.degree() != d {
        return Err(ConjugatorError::DegreeMismatch { field: d, perm: pi.degree() });
    }
    let out = match datum {
        ShimuraDatum::Quaternionic(q) => ShimuraDatum::Quaternionic(QuaternionDatum::new(
            q.field().clone(),
            pi.preimage(q.ram_infinite()),
            q.ram_finite().clone(),
        )?),
        ShimuraDatum::Unitary(u) => {
            let signatures = (1..=d).map(|v| u.signatures()[pi.as_perm().apply(v) - 1]).collect();
            ShimuraDatum::Unitary(UnitaryDatum::new(
                u.field().clone(),
                u.n(),
                signatures,
                u.finite_marks().clone(),
                u.inert_primes().clone(),
                u.isotropic_diagonal(),
            )?)
        }
        ShimuraDatum::TypeD(t) => ShimuraDatum::TypeD(TypeDDatum::new(
            t.field().clone(),
            t.n(),
            pi.preimage(t.s_real()),
            pi.preimage(t.s_quaternionic()),
            t.finite_marks().clone(),
        )?),
    };
    Ok(out)
}

/// One marked `p`-adic place whose local type is claimed to differ from the
/// type at every other place over the same `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MarkingRecord {
    pub place: FinitePlace,
}

impl MarkingRecord {
    pub fn p(&self) -> u64 {
        self.place.p
    }
}

/// True iff the tag at the marked slot occurs nowhere else among the tags
/// at places over `p`. Any field automorphism respecting the finite data
/// then fixes the marked place and is therefore the identity.
pub fn verify_marking(
    field: &TotallyRealField,
    marking: &MarkingRecord,
    finite_data: &[LocalTag],
) -> Result<bool, ConjugatorError> {
    if field.split_witness(marking.p()).is_none() {
        return Err(ConjugatorError::MissingSplitWitness(marking.p()));
    }
    let slot = marking.place.slot;
    if slot == 0 || slot > finite_data.len() || finite_data.len() != field.degree() {
        return Ok(false);
    }
    let marked = &finite_data[slot - 1];
    Ok(finite_data.iter().enumerate().all(|(i, t)| i == slot - 1 || t != marked))
}

/// Lexicographically smallest transposition of two real places with
/// non-isomorphic local groups; `None` when all real places carry isomorphic groups.
pub fn propose_tau(datum: &ShimuraDatum) -> Option<PlacePermutation> {
    let d = datum.degree();
    let places: Vec<RealPlace> = datum.real_places().collect();
    for (i, &a) in places.iter().enumerate() {
        for &b in &places[i + 1..] {
            if datum.real_local_type(a) != datum.real_local_type(b) {
                return PlacePermutation::transposition(d, a.index(), b.index()).ok();
            }
        }
    }
    None
}

/// How field automorphisms are ruled out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AutControl {
    /// The field carries an `S_d` certificate, so `Aut(F) = 1`.
    CertifiedTrivialAut,
    /// A verified unique `p`-adic mark; any automorphism fixing it is trivial.
    FiniteMarking(FinitePlace),
}

impl fmt::Display for AutControl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AutControl::CertifiedTrivialAut => write!(f, "certified-trivial-aut"),
            AutControl::FiniteMarking(v) => write!(f, "finite-marking {v}"),
        }
    }
}

impl FromStr for AutControl {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "certified-trivial-aut" {
            return Ok(AutControl::CertifiedTrivialAut);
        }
        s.strip_prefix("finite-marking ")
            .and_then(|v| v.parse().ok())
            .map(AutControl::FiniteMarking)
            .ok_or_else(|| format!("unknown automorphism control `{s}`"))
    }
}

/// A clause of the granting rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Clause {
    Rank,
    PartitionMoved,
    AutControl,
    Realizability,
}

impl Clause {
    pub fn as_str(self) -> &'static str {
        match self {
            Clause::Rank => "rank",
            Clause::PartitionMoved => "partition_moved",
            Clause::AutControl => "aut_control",
            Clause::Realizability => "realizability",
        }
    }
}

impl FromStr for Clause {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Clause::Rank, Clause::PartitionMoved, Clause::AutControl, Clause::Realizability]
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown clause `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateChecks {
    pub rank: usize,
    pub rank_ok: bool,
    pub partition_moved: bool,
    pub aut_control: Option<AutControl>,
    pub realizability: Realizability,
    /// The caller vouches that `π` is induced by some `τ`.
    pub tau_asserted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Granted,
    Refused(Vec<Clause>),
}

impl Verdict {
    pub fn is_granted(&self) -> bool {
        matches!(self, Verdict::Granted)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigidityCertificate {
    pub datum: ShimuraDatum,
    pub permutation: PlacePermutation,
    pub conjugate: ShimuraDatum,
    pub marking: Option<MarkingRecord>,
    pub checks: CertificateChecks,
    pub verdict: Verdict,
}

impl RigidityCertificate {
    /// Re-issue from the stored inputs and compare every recorded value.
    pub fn replay(&self) -> Result<(), String> {
        let again = issue_certificate(&self.datum, &self.permutation, self.marking.as_ref(), self.checks.tau_asserted)
            .map_err(|e| e.to_string())?;
        if again.conjugate != self.conjugate {
            return Err("conjugate datum differs from the recomputed pullback".into());
        }
        if again.checks != self.checks {
            return Err(format!("checks differ: stored {:?}, recomputed {:?}", self.checks, again.checks));
        }
        if again.verdict != self.verdict {
            return Err(format!("verdict differs: stored {:?}, recomputed {:?}", self.verdict, again.verdict));
        }
        Ok(())
    }
}

fn partition_moved(datum: &ShimuraDatum, pi: &PlacePermutation) -> bool {
    match datum {
        ShimuraDatum::Quaternionic(q) => !pi.preserves_subset(q.ram_infinite()),
        ShimuraDatum::Unitary(u) => {
            let s = u.signatures();
            (1..=s.len()).any(|v| s[pi.as_perm().apply(v) - 1] != s[v - 1])
        }
        ShimuraDatum::TypeD(t) => !pi.preserves_subset(t.s_quaternionic()),
    }
}

/// Check the granting clauses for `(datum, π)`: real rank at least 2, `π`
/// moves the partition of real places into local isomorphism classes,
/// automorphisms of `F` are controlled (certificate or verified marking),
/// and `π` is realizable by some `τ` (full symmetric action, or asserted).
pub fn issue_certificate(
    datum: &ShimuraDatum,
    pi: &PlacePermutation,
    marking: Option<&MarkingRecord>,
    tau_asserted: bool,
) -> Result<RigidityCertificate, ConjugatorError> {
    let violations = datum.validate_construction_conditions();
    if !violations.is_empty() {
        return Err(ConjugatorError::InvalidDatum(violations));
    }
    let conjugate = conjugate_datum(datum, pi)?;
    let field = datum.field();
    let rank = datum.real_rank();

    let aut_control = if field.has_trivial_automorphisms() {
        Some(AutControl::CertifiedTrivialAut)
    } else {
        marking.and_then(|m| match verify_marking(field, m, &datum.finite_tags(m.p())) {
            Ok(true) => Some(AutControl::FiniteMarking(m.place)),
            _ => None,
        })
    };
    let checks = CertificateChecks {
        rank,
        rank_ok: rank >= 2,
        partition_moved: partition_moved(datum, pi),
        aut_control,
        realizability: realizability_note(field),
        tau_asserted,
    };

    let mut failed = BTreeSet::new();
    if !checks.rank_ok {
        failed.insert(Clause::Rank);
    }
    if !checks.partition_moved {
        failed.insert(Clause::PartitionMoved);
    }
    if checks.aut_control.is_none() {
        failed.insert(Clause::AutControl);
    }
    if checks.realizability != Realizability::FullSymmetric && !tau_asserted {
        failed.insert(Clause::Realizability);
    }
    let verdict = if failed.is_empty() { Verdict::Granted } else { Verdict::Refused(failed.into_iter().collect()) };

    Ok(RigidityCertificate {
        datum: datum.clone(),
        permutation: pi.clone(),
        conjugate,
        marking: marking.copied(),
        checks,
        verdict,
    })
}

#[cfg(test)]
mod tests;
