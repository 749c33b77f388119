//! Shared fields for unit tests.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use proptest::prelude::*;

use crate::field::{certify_symmetric, find_split_prime, forge_field, TotallyRealField};
use crate::forms::{QuaternionDatum, ShimuraDatum, Signature, TypeDDatum, UnitaryDatum};
use crate::places::{real_places, FinitePlace, PlacePermutation, RealPlace};
use crate::poly::IntPoly;

fn with_first_split(mut f: TotallyRealField) -> TotallyRealField {
    let w = find_split_prime(f.definer(), 2, 100_000).unwrap();
    f.add_split_witness(w).unwrap();
    f
}

/// `X^3 - 4X - 1`, certified `S_3`, split at 37.
pub fn cubic_s3() -> Arc<TotallyRealField> {
    let f = IntPoly::from_i64s(&[-1, -4, 0, 1]);
    let cert = certify_symmetric(&f, 10).unwrap();
    Arc::new(with_first_split(TotallyRealField::new(f, Some(cert)).unwrap()))
}

/// `X^3 - 3X - 1`, cyclic, no certificate.
pub fn cyclic_cubic() -> Arc<TotallyRealField> {
    Arc::new(with_first_split(TotallyRealField::new(IntPoly::from_i64s(&[-1, -3, 0, 1]), None).unwrap()))
}

/// `X^2 - 5`, split at 11.
pub fn real_quadratic() -> Arc<TotallyRealField> {
    Arc::new(with_first_split(TotallyRealField::new(IntPoly::from_i64s(&[-5, 0, 1]), None).unwrap()))
}

/// Forged `S_d` field with seed 0 and its first split prime, cached.
pub fn forged(d: usize) -> Arc<TotallyRealField> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<TotallyRealField>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(f) = cache.lock().unwrap().get(&d) {
        return f.clone();
    }
    let f = Arc::new(with_first_split(forge_field(d, 0).unwrap().0));
    cache.lock().unwrap().insert(d, f.clone());
    f
}

pub fn perm_strategy(d: usize) -> impl Strategy<Value = PlacePermutation> {
    Just((1..=d).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| PlacePermutation::from_images(&v).unwrap())
}

/// A valid datum of a random family over a forged field of degree `d`.
pub fn datum_strategy(d: usize) -> impl Strategy<Value = ShimuraDatum> {
    let field = forged(d);
    let p = field.split_primes()[0].p;
    (0u8..3, prop::collection::vec(any::<bool>(), d), 1usize..=d, 5usize..8, any::<bool>()).prop_map(
        move |(kind, bits, slot, n, iso)| {
            let mut set: BTreeSet<usize> = (1..=d).filter(|&i| bits[i - 1]).collect();
            // keep both parts non-empty
            if set.is_empty() {
                set.insert(1);
            }
            // quaternionic data need two indefinite places for rank 2
            let cap = if kind == 0 { d - 2 } else { d - 1 };
            while set.len() > cap {
                let last = *set.iter().next_back().unwrap();
                set.remove(&last);
            }
            let set = real_places(d, &set.into_iter().collect::<Vec<_>>()).unwrap();
            let rest: BTreeSet<RealPlace> = real_places(d, &(1..=d).collect::<Vec<_>>()).unwrap().difference(&set).copied().collect();
            match kind {
                0 => {
                    let fin: BTreeSet<FinitePlace> =
                        if set.len() % 2 == 1 { [FinitePlace { p, slot }].into() } else { BTreeSet::new() };
                    ShimuraDatum::Quaternionic(QuaternionDatum::new(field.clone(), set, fin).unwrap())
                }
                1 => {
                    let sigs = (1..=d)
                        .map(|i| {
                            let q = if set.contains(&RealPlace::new(i, d).unwrap()) { 1 } else { n / 2 };
                            Signature { p: n - q, q }
                        })
                        .collect();
                    ShimuraDatum::Unitary(
                        UnitaryDatum::new(field.clone(), n, sigs, BTreeMap::new(), BTreeSet::new(), iso).unwrap(),
                    )
                }
                _ => ShimuraDatum::TypeD(TypeDDatum::new(field.clone(), n, rest, set, BTreeMap::new()).unwrap()),
            }
        },
    )
}
