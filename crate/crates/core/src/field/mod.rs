//! Totally real number fields presented by a monic integer polynomial.
//!
//! A [`TotallyRealField`] stores its definer, one isolating interval per real
//! embedding, an optional certificate that the Galois group is the full
//! symmetric group, and any completely split primes found so far.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::poly::{self, DegreePattern, IntPoly, PolyError, RootIsolation};

mod forge;
mod galois;
mod oracle;
mod split;

pub use forge::{forge_field, forge_field_with, ForgeConfig};
pub use galois::{certify_symmetric, FrobeniusWitness, GaloisCertificate};
pub use oracle::{orbit_marking_oracle, subgroup_contains, OracleError};
pub use split::{find_split_prime, SplitPrimeWitness, DEFAULT_SPLIT_BUDGET};

/// Primes scanned for an irreducible reduction when a field without a
/// Galois certificate has degree above 3.
pub const IRREDUCIBILITY_SCAN_BOUND: u64 = 5000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("degree {degree} is below the minimum {minimum}")]
    DegreeTooSmall { degree: usize, minimum: usize },
    #[error("no complete set of Galois witnesses among primes up to {0} (inconclusive)")]
    NoWitnessFound(u64),
    #[error("search exhausted its budget of {0}")]
    SearchExhausted(u64),
    #[error("definer has {real_roots} distinct real roots, expected {degree}")]
    NotTotallyReal { real_roots: usize, degree: usize },
    #[error("definer has a rational root and is reducible")]
    Reducible,
    #[error("no irreducibility witness among primes up to {0}")]
    IrreducibilityUnwitnessed(u64),
    #[error("certificate does not replay: {0}")]
    CertificateMismatch(String),
    #[error("split-prime witness at {0} does not verify")]
    BadSplitWitness(u64),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotallyRealField {
    definer: IntPoly,
    embeddings: RootIsolation,
    galois: Option<GaloisCertificate>,
    split_primes: Vec<SplitPrimeWitness>,
}

impl TotallyRealField {
    /// Validate a definer and build the field. The definer must be monic with
    /// `deg` distinct real roots and must be irreducible: the Galois
    /// certificate (replayed here) witnesses that, otherwise an irreducible
    /// reduction modulo a small prime, or for degree at most 3 the absence of
    /// a rational root.
    pub fn new(definer: IntPoly, galois: Option<GaloisCertificate>) -> Result<Self, FieldError> {
        if !definer.is_monic() {
            return Err(PolyError::NotMonic.into());
        }
        let degree = definer.degree().unwrap();
        if degree == 0 {
            return Err(FieldError::DegreeTooSmall { degree, minimum: 1 });
        }
        let real_roots = poly::sturm_real_root_count(&definer)?;
        if real_roots != degree {
            return Err(FieldError::NotTotallyReal { real_roots, degree });
        }
        let embeddings = poly::isolate_real_roots(&definer)?;
        match &galois {
            Some(cert) => cert.replay(&definer)?,
            None => check_irreducible(&definer, &embeddings)?,
        }
        Ok(TotallyRealField { definer, embeddings, galois, split_primes: Vec::new() })
    }

    pub fn definer(&self) -> &IntPoly {
        &self.definer
    }

    pub fn degree(&self) -> usize {
        self.embeddings.len()
    }

    pub fn embeddings(&self) -> &RootIsolation {
        &self.embeddings
    }

    pub fn galois_certificate(&self) -> Option<&GaloisCertificate> {
        self.galois.as_ref()
    }

    /// True when the field carries a replayed symmetric-group certificate,
    /// which forces `Aut(F) = 1`.
    pub fn has_trivial_automorphisms(&self) -> bool {
        self.galois.is_some()
    }

    pub fn split_primes(&self) -> &[SplitPrimeWitness] {
        &self.split_primes
    }

    pub fn split_witness(&self, p: u64) -> Option<&SplitPrimeWitness> {
        self.split_primes.iter().find(|w| w.p == p)
    }

    /// Record a completely split prime after verifying it. Witnesses are kept
    /// sorted by prime; re-adding a known prime is a no-op.
    pub fn add_split_witness(&mut self, w: SplitPrimeWitness) -> Result<(), FieldError> {
        if !w.verify(&self.definer) {
            return Err(FieldError::BadSplitWitness(w.p));
        }
        if self.split_witness(w.p).is_none() {
            self.split_primes.push(w);
            self.split_primes.sort_by_key(|w| w.p);
        }
        Ok(())
    }

    pub fn with_split_witness(mut self, w: SplitPrimeWitness) -> Result<Self, FieldError> {
        self.add_split_witness(w)?;
        Ok(self)
    }
}

fn check_irreducible(f: &IntPoly, embeddings: &RootIsolation) -> Result<(), FieldError> {
    let d = f.degree().unwrap();
    if d == 1 {
        return Ok(());
    }
    if d <= 3 {
        // a monic integer polynomial only has integer rational roots, and each
        // isolating interval is narrower than 1 so holds at most one integer
        for iv in embeddings.intervals() {
            let lo = iv.lo.ceil().to_integer();
            let hi = iv.hi.floor().to_integer();
            let mut k = lo;
            while k <= hi {
                if f.eval(&k).is_zero() {
                    return Err(FieldError::Reducible);
                }
                k += BigInt::from(1);
            }
        }
        return Ok(());
    }
    let mut p = 2;
    while p <= IRREDUCIBILITY_SCAN_BOUND {
        if let Ok(pat) = poly::degree_pattern_mod(f, p) {
            if pat == DegreePattern::new(vec![d]) {
                return Ok(());
            }
        }
        p = poly::modp::next_prime(p + 1);
    }
    Err(FieldError::IrreducibilityUnwitnessed(IRREDUCIBILITY_SCAN_BOUND))
}
