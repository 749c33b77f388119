use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::field::TotallyRealField;
use crate::places::{FinitePlace, RealPlace};

use super::{check_finite_place, check_real_places, FormError, LocalTag};

/// Type `D_n` datum from a skew-hermitian form over a quaternion algebra `B`:
/// places where `B` is indefinite carry the form `BD I(q=2)`, definite
/// places carry `D III`. `p`-adic types are opaque tags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeDDatum {
    field: Arc<TotallyRealField>,
    n: usize,
    s_real: BTreeSet<RealPlace>,
    s_quaternionic: BTreeSet<RealPlace>,
    finite_marks: BTreeMap<FinitePlace, LocalTag>,
}

impl TypeDDatum {
    pub fn new(
        field: Arc<TotallyRealField>,
        n: usize,
        s_real: BTreeSet<RealPlace>,
        s_quaternionic: BTreeSet<RealPlace>,
        finite_marks: BTreeMap<FinitePlace, LocalTag>,
    ) -> Result<Self, FormError> {
        // the two series only differ from n = 5 on
        if n < 5 {
            return Err(FormError::RankTooSmall { n, minimum: 5 });
        }
        let d = field.degree();
        check_real_places(d, &s_real)?;
        check_real_places(d, &s_quaternionic)?;
        let disjoint = s_real.is_disjoint(&s_quaternionic);
        if !disjoint || s_real.len() + s_quaternionic.len() != d {
            return Err(FormError::NotAPartition);
        }
        if s_real.is_empty() || s_quaternionic.is_empty() {
            return Err(FormError::EmptyPart);
        }
        for v in finite_marks.keys() {
            check_finite_place(&field, v)?;
        }
        Ok(TypeDDatum { field, n, s_real, s_quaternionic, finite_marks })
    }

    pub fn field(&self) -> &Arc<TotallyRealField> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s_real(&self) -> &BTreeSet<RealPlace> {
        &self.s_real
    }

    pub fn s_quaternionic(&self) -> &BTreeSet<RealPlace> {
        &self.s_quaternionic
    }

    pub fn finite_marks(&self) -> &BTreeMap<FinitePlace, LocalTag> {
        &self.finite_marks
    }
}
