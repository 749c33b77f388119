//! Brute-force check of the fact behind p-adic marking: if `G` acts freely
//! on `X` and `g` normalizes `H ≤ G`, then `g` stabilizing one `H`-orbit
//! forces `g ∈ H`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::perm::{generate, Perm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("permutation has degree {found}, expected {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("orbit representative {0} is outside 1..={1}")]
    RepresentativeOutOfRange(usize, usize),
    #[error("element does not normalize the generated subgroup")]
    NotNormalizing,
    #[error("the group generated by the subgroup and the element does not act freely")]
    PrincipalHomogeneityViolated,
}

fn check_degree(n: usize, p: &Perm) -> Result<(), OracleError> {
    if p.degree() != n {
        return Err(OracleError::DegreeMismatch { expected: n, found: p.degree() });
    }
    Ok(())
}

/// Every non-identity element fixes no point.
fn acts_freely(group: &BTreeSet<Perm>) -> bool {
    group.iter().all(|g| g.is_identity() || (0..g.degree()).all(|i| g.apply0(i) != i))
}

/// Whether `element` maps the `H`-orbit of `representative` onto itself,
/// where `H` is generated by `generators`.
///
/// Rejects inputs outside the hypotheses: the element must normalize `H`
/// and `<H, element>` must act freely on `{1..n}`, i.e. the points form a
/// disjoint union of principal homogeneous spaces.
pub fn orbit_marking_oracle(
    n: usize,
    generators: &[Perm],
    element: &Perm,
    representative: usize,
) -> Result<bool, OracleError> {
    for g in generators.iter().chain(std::iter::once(element)) {
        check_degree(n, g)?;
    }
    if representative == 0 || representative > n {
        return Err(OracleError::RepresentativeOutOfRange(representative, n));
    }
    let subgroup = generate(n, generators);
    let inverse = element.inverse();
    let normalizes = generators
        .iter()
        .all(|h| subgroup.contains(&element.compose_unchecked(h).compose_unchecked(&inverse)));
    if !normalizes {
        return Err(OracleError::NotNormalizing);
    }
    let mut all_gens = generators.to_vec();
    all_gens.push(element.clone());
    if !acts_freely(&generate(n, &all_gens)) {
        return Err(OracleError::PrincipalHomogeneityViolated);
    }
    let orbit: BTreeSet<usize> = subgroup.iter().map(|h| h.apply(representative)).collect();
    Ok(orbit.iter().all(|&x| orbit.contains(&element.apply(x))))
}

/// Membership in the subgroup generated by `generators`, by enumeration.
pub fn subgroup_contains(n: usize, generators: &[Perm], element: &Perm) -> bool {
    generate(n, generators).contains(element)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Left-regular representation of a permutation group on itself: each
    /// element becomes a permutation of the indices of `elements`.
    fn regular(elements: &[Perm]) -> Vec<Perm> {
        elements
            .iter()
            .map(|g| {
                let images: Vec<usize> = elements
                    .iter()
                    .map(|x| elements.iter().position(|y| *y == g.compose_unchecked(x)).unwrap() + 1)
                    .collect();
                Perm::from_images(&images).unwrap()
            })
            .collect()
    }

    #[test]
    fn trivial_subgroup_identity() {
        let id = Perm::identity(3);
        assert_eq!(orbit_marking_oracle(3, std::slice::from_ref(&id), &id, 2), Ok(true));
        assert!(subgroup_contains(3, std::slice::from_ref(&id), &id));
    }

    #[test]
    fn transposition_on_four_points_violates_freeness() {
        let h = Perm::transposition(4, 1, 2);
        let g = Perm::transposition(4, 3, 4);
        // orbits of <(1 2)> on {1..4} have sizes 2, 1, 1
        let orbits: BTreeSet<BTreeSet<usize>> = (1..=4)
            .map(|x| generate(4, std::slice::from_ref(&h)).iter().map(|k| k.apply(x)).collect())
            .collect();
        let sizes: Vec<usize> = orbits.iter().map(BTreeSet::len).collect();
        assert_eq!(sizes, vec![2, 1, 1]);
        assert_eq!(orbit_marking_oracle(4, &[h], &g, 1), Err(OracleError::PrincipalHomogeneityViolated));
    }

    #[test]
    fn s3_regular_order_two_subgroup_is_self_normalizing() {
        let s3 = Perm::all(3);
        let reg = regular(&s3);
        let h = reg[s3.iter().position(|p| *p == Perm::transposition(3, 1, 2)).unwrap()].clone();
        let sub = generate(6, std::slice::from_ref(&h));
        let normalizer: Vec<&Perm> = reg
            .iter()
            .filter(|g| sub.iter().all(|x| sub.contains(&g.compose_unchecked(x).compose_unchecked(&g.inverse()))))
            .collect();
        assert_eq!(normalizer.len(), 2);
        for g in &reg {
            let r = orbit_marking_oracle(6, std::slice::from_ref(&h), g, 1);
            if normalizer.contains(&g) {
                assert_eq!(r, Ok(true));
            } else {
                assert_eq!(r, Err(OracleError::NotNormalizing));
            }
        }
    }

    #[test]
    fn normal_subgroup_cosets_move() {
        // A3 inside the regular S3: odd elements normalize it but swap the cosets
        let s3 = Perm::all(3);
        let reg = regular(&s3);
        let c3 = reg[s3.iter().position(|p| p.to_string() == "2,3,1").unwrap()].clone();
        for (g, p) in reg.iter().zip(&s3) {
            let stable = orbit_marking_oracle(6, std::slice::from_ref(&c3), g, 1).unwrap();
            let member = subgroup_contains(6, std::slice::from_ref(&c3), g);
            assert_eq!(stable, member, "element {p}");
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let id = Perm::identity(3);
        assert_eq!(
            orbit_marking_oracle(4, std::slice::from_ref(&id), &Perm::identity(4), 1),
            Err(OracleError::DegreeMismatch { expected: 4, found: 3 })
        );
        assert_eq!(orbit_marking_oracle(3, std::slice::from_ref(&id), &id, 4), Err(OracleError::RepresentativeOutOfRange(4, 3)));
    }
}
