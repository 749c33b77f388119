use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::forms::parse_signatures;
use crate::places::real_places;
use crate::testutil::{cubic_s3, cyclic_cubic, datum_strategy, perm_strategy};

fn quaternion(field: Arc<TotallyRealField>, inf: &[usize], fin: &[FinitePlace]) -> ShimuraDatum {
    let d = field.degree();
    let fin = fin.iter().copied().collect();
    ShimuraDatum::Quaternionic(QuaternionDatum::new(field, real_places(d, inf).unwrap(), fin).unwrap())
}

fn split_p(field: &TotallyRealField) -> u64 {
    field.split_primes()[0].p
}

fn tr(d: usize, i: usize, j: usize) -> PlacePermutation {
    PlacePermutation::transposition(d, i, j).unwrap()
}

#[test]
fn quaternionic_pullback_moves_the_definite_place() {
    let q = quaternion(cubic_s3(), &[1], &["p37:1".parse().unwrap()]);
    let c = conjugate_datum(&q, &tr(3, 1, 2)).unwrap();
    let ShimuraDatum::Quaternionic(cq) = &c else { panic!() };
    assert_eq!(cq.ram_infinite(), &real_places(3, &[2]).unwrap());
    assert_eq!(c.dimension(), q.dimension());
}

#[test]
fn pullback_follows_pi_not_its_inverse() {
    // π = 2,3,1 sends v1 -> v2; the conjugate at v1 carries the datum at v2
    let field = cubic_s3();
    let sigs = parse_signatures("3,1:2,2:4,0").unwrap();
    let u = UnitaryDatum::new(field, 4, sigs, BTreeMap::new(), BTreeSet::new(), false).unwrap();
    let pi = PlacePermutation::from_images(&[2, 3, 1]).unwrap();
    let c = conjugate_datum(&ShimuraDatum::Unitary(u), &pi).unwrap();
    let ShimuraDatum::Unitary(cu) = c else { panic!() };
    assert_eq!(cu.signatures(), parse_signatures("2,2:4,0:3,1").unwrap().as_slice());
}

#[test]
fn degree_mismatch() {
    let q = quaternion(cubic_s3(), &[1], &["p37:1".parse().unwrap()]);
    assert_eq!(
        conjugate_datum(&q, &PlacePermutation::identity(4)),
        Err(ConjugatorError::DegreeMismatch { field: 3, perm: 4 })
    );
}

#[test]
fn certified_cubic_is_granted() {
    let q = quaternion(cubic_s3(), &[1], &["p37:1".parse().unwrap()]);
    let pi = propose_tau(&q).unwrap();
    assert_eq!(pi, tr(3, 1, 2));
    let cert = issue_certificate(&q, &pi, None, false).unwrap();
    assert_eq!(cert.verdict, Verdict::Granted);
    assert_eq!(cert.checks.aut_control, Some(AutControl::CertifiedTrivialAut));
    assert_eq!(cert.checks.realizability, Realizability::FullSymmetric);
    cert.replay().unwrap();
}

#[test]
fn identity_is_always_refused() {
    let q = quaternion(cubic_s3(), &[1], &["p37:1".parse().unwrap()]);
    let cert = issue_certificate(&q, &PlacePermutation::identity(3), None, false).unwrap();
    assert_eq!(cert.verdict, Verdict::Refused(vec![Clause::PartitionMoved]));
}

#[test]
fn invalid_datum_is_an_error() {
    let q = quaternion(cubic_s3(), &[1, 2], &[]);
    assert_eq!(
        issue_certificate(&q, &tr(3, 1, 3), None, false).unwrap_err(),
        ConjugatorError::InvalidDatum(vec![Violation::RankBelowTwo { rank: 1 }])
    );
    let split = quaternion(cubic_s3(), &[], &[]);
    assert_eq!(propose_tau(&split), None);
}

#[test]
fn galois_evasion_is_refused() {
    // With every place over p ramified, the cyclic automorphism preserves
    // the finite data, and it carries v1 to another real place.
    let field = cyclic_cubic();
    let p = split_p(&field);
    let all: Vec<FinitePlace> = (1..=3).map(|slot| FinitePlace { p, slot }).collect();
    let q = quaternion(field, &[1], &all);
    let cert = issue_certificate(&q, &tr(3, 1, 2), None, false).unwrap();
    let Verdict::Refused(reasons) = &cert.verdict else { panic!("granted {cert:?}") };
    assert!(reasons.contains(&Clause::AutControl));
    assert!(cert.checks.partition_moved);
    assert_eq!(cert.checks.realizability, Realizability::TransitivityOnly);

    // a marking does not help here: all three tags agree
    let m = MarkingRecord { place: all[0] };
    let cert = issue_certificate(&q, &tr(3, 1, 2), Some(&m), true).unwrap();
    assert_eq!(cert.verdict, Verdict::Refused(vec![Clause::AutControl]));
}

#[test]
fn unique_marking_controls_automorphisms() {
    let field = cyclic_cubic();
    let p = split_p(&field);
    let marked = FinitePlace { p, slot: 2 };
    let q = quaternion(field.clone(), &[1], &[marked]);
    let m = MarkingRecord { place: marked };
    assert_eq!(verify_marking(&field, &m, &q.finite_tags(p)), Ok(true));

    let cert = issue_certificate(&q, &tr(3, 1, 2), Some(&m), false).unwrap();
    assert_eq!(cert.checks.aut_control, Some(AutControl::FiniteMarking(marked)));
    assert_eq!(cert.verdict, Verdict::Refused(vec![Clause::Realizability]));
    let cert = issue_certificate(&q, &tr(3, 1, 2), Some(&m), true).unwrap();
    assert_eq!(cert.verdict, Verdict::Granted);
    cert.replay().unwrap();
}

#[test]
fn marking_needs_a_split_witness() {
    let field = cyclic_cubic();
    let m = MarkingRecord { place: FinitePlace { p: 2, slot: 1 } };
    let tags = vec![LocalTag::new("a").unwrap(); 3];
    assert_eq!(verify_marking(&field, &m, &tags), Err(ConjugatorError::MissingSplitWitness(2)));
}

#[test]
fn marking_rejects_repeated_tag_and_bad_slot() {
    let field = cyclic_cubic();
    let p = split_p(&field);
    let t = |s| LocalTag::new(s).unwrap();
    let tags = vec![t("a"), t("b"), t("a")];
    let at = |slot| MarkingRecord { place: FinitePlace { p, slot } };
    assert_eq!(verify_marking(&field, &at(1), &tags), Ok(false));
    assert_eq!(verify_marking(&field, &at(2), &tags), Ok(true));
    assert_eq!(verify_marking(&field, &at(4), &tags), Ok(false));
}

#[test]
fn replay_detects_tampering() {
    let q = quaternion(cubic_s3(), &[1], &["p37:1".parse().unwrap()]);
    let mut cert = issue_certificate(&q, &tr(3, 1, 2), None, false).unwrap();
    cert.verdict = Verdict::Refused(vec![Clause::Rank]);
    assert!(cert.replay().is_err());
    let mut cert = issue_certificate(&q, &tr(3, 1, 2), None, false).unwrap();
    cert.conjugate = q.clone();
    assert!(cert.replay().is_err());
}

#[test]
fn clause_and_control_syntax() {
    for c in [Clause::Rank, Clause::PartitionMoved, Clause::AutControl, Clause::Realizability] {
        assert_eq!(c.as_str().parse::<Clause>(), Ok(c));
    }
    let m = AutControl::FiniteMarking(FinitePlace { p: 11, slot: 2 });
    assert_eq!(m.to_string().parse::<AutControl>(), Ok(m));
    assert_eq!("certified-trivial-aut".parse::<AutControl>(), Ok(AutControl::CertifiedTrivialAut));
}

fn pair(d: usize) -> impl Strategy<Value = (ShimuraDatum, PlacePermutation, PlacePermutation)> {
    (datum_strategy(d), perm_strategy(d), perm_strategy(d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugation_laws((datum, sigma, pi) in (3usize..=5).prop_flat_map(pair)) {
        let once = conjugate_datum(&datum, &sigma).unwrap();
        prop_assert_eq!(&conjugate_datum(&once, &sigma.inverse()).unwrap(), &datum);
        prop_assert_eq!(
            conjugate_datum(&once, &pi).unwrap(),
            conjugate_datum(&datum, &sigma.compose(&pi).unwrap()).unwrap()
        );
        prop_assert_eq!(once.dimension(), datum.dimension());
        prop_assert_eq!(once.real_rank(), datum.real_rank());
        prop_assert_eq!(once.compactness(), datum.compactness());
        for p in datum.field().split_primes().iter().map(|w| w.p) {
            prop_assert_eq!(once.finite_tags(p), datum.finite_tags(p));
        }
    }

    #[test]
    fn partition_moved_matches_local_types((datum, pi, _) in (3usize..=5).prop_flat_map(pair)) {
        let cert = issue_certificate(&datum, &pi, None, false).unwrap();
        let by_type = datum.real_places().any(|v| datum.real_local_type(pi.apply(v)) != datum.real_local_type(v));
        prop_assert_eq!(cert.checks.partition_moved, by_type);
        // forged fields are certified, so only the partition clause can fail
        prop_assert_eq!(cert.verdict.is_granted(), by_type);
        prop_assert!(cert.replay().is_ok());
    }

    #[test]
    fn proposed_tau_is_granted(datum in (3usize..=5).prop_flat_map(datum_strategy)) {
        let pi = propose_tau(&datum).unwrap();
        let moved = (1..=pi.degree()).filter(|&i| pi.as_perm().apply(i) != i).count();
        prop_assert_eq!(moved, 2);
        prop_assert!(issue_certificate(&datum, &pi, None, false).unwrap().verdict.is_granted());
    }
}
