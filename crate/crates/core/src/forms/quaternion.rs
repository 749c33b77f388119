use std::collections::BTreeSet;
use std::sync::Arc;

use crate::field::TotallyRealField;
use crate::places::{FinitePlace, RealPlace};

use super::{check_finite_place, check_real_places, FormError};

/// A quaternion algebra over `F` described by its ramification: the definite
/// real places (`Σ∞`) and the ramified `p`-adic places (`Σ_f`), the latter
/// restricted to places over completely split primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuaternionDatum {
    field: Arc<TotallyRealField>,
    ram_infinite: BTreeSet<RealPlace>,
    ram_finite: BTreeSet<FinitePlace>,
}

impl QuaternionDatum {
    pub fn new(
        field: Arc<TotallyRealField>,
        ram_infinite: BTreeSet<RealPlace>,
        ram_finite: BTreeSet<FinitePlace>,
    ) -> Result<Self, FormError> {
        let d = field.degree();
        check_real_places(d, &ram_infinite)?;
        for v in &ram_finite {
            check_finite_place(&field, v)?;
        }
        // Hilbert reciprocity: the ramification set has even cardinality
        if (ram_infinite.len() + ram_finite.len()) % 2 == 1 {
            return Err(FormError::ReciprocityParity { infinite: ram_infinite.len(), finite: ram_finite.len() });
        }
        if ram_infinite.len() == d {
            return Err(FormError::NoIndefinitePlace);
        }
        Ok(QuaternionDatum { field, ram_infinite, ram_finite })
    }

    pub fn field(&self) -> &Arc<TotallyRealField> {
        &self.field
    }

    pub fn ram_infinite(&self) -> &BTreeSet<RealPlace> {
        &self.ram_infinite
    }

    pub fn ram_finite(&self) -> &BTreeSet<FinitePlace> {
        &self.ram_finite
    }

    pub fn is_definite_at(&self, v: RealPlace) -> bool {
        self.ram_infinite.contains(&v)
    }
}
