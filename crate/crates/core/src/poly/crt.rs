//! Coefficientwise CRT recombination of monic polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{IntPoly, PolyError};

/// Combine `x = r1 (mod m1)` and `x = r2 (mod m2)` for coprime moduli.
fn crt_pair(r1: &BigInt, m1: &BigInt, r2: &BigInt, m2: &BigInt) -> BigInt {
    let eg = m1.extended_gcd(m2);
    debug_assert!(eg.gcd.is_one());
    // x = r1 + m1 * ((r2 - r1) * inv(m1) mod m2)
    let t = ((r2 - r1) * eg.x).mod_floor(m2);
    (r1 + m1 * t).mod_floor(&(m1 * m2))
}

/// The member of `r + mZ` closest to `target`; ties go to the larger value.
fn closest_in_class(r: &BigInt, m: &BigInt, target: &BigInt) -> BigInt {
    let below = r + m * (target - r).div_floor(m);
    let above = &below + m;
    if &above - target <= target - &below {
        above
    } else {
        below
    }
}

/// Monic polynomial congruent to every target modulo its prime, with each
/// non-leading coefficient taken as close as possible to the template's.
///
/// With no targets the template is returned unchanged.
pub fn crt_lift(targets: &[(u64, IntPoly)], template: &IntPoly) -> Result<IntPoly, PolyError> {
    if !template.is_monic() {
        return Err(PolyError::NotMonic);
    }
    let d = template.degree().unwrap();
    for (i, (p, t)) in targets.iter().enumerate() {
        if !t.is_monic() {
            return Err(PolyError::NotMonic);
        }
        let td = t.degree().unwrap();
        if td != d {
            return Err(PolyError::DegreeMismatch { expected: d, found: td });
        }
        for (q, _) in &targets[..i] {
            if p.gcd(q) != 1 {
                return Err(PolyError::NonCoprimeModuli(*q, *p));
            }
        }
    }

    let mut coeffs = Vec::with_capacity(d + 1);
    for j in 0..d {
        let mut r = BigInt::zero();
        let mut m = BigInt::one();
        for (p, t) in targets {
            let pb = BigInt::from(*p);
            r = crt_pair(&r, &m, &t.coeff(j).mod_floor(&pb), &pb);
            m *= pb;
        }
        coeffs.push(closest_in_class(&r, &m, &template.coeff(j)));
    }
    coeffs.push(BigInt::one());
    Ok(IntPoly::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn empty_targets_return_template() {
        let f = p(&[-1, -4, 0, 1]);
        assert_eq!(crt_lift(&[], &f).unwrap(), f);
    }

    #[test]
    fn single_target_tie_goes_up() {
        // odd integers closest to 0 are -1 and +1
        assert_eq!(crt_lift(&[(2, p(&[1, 1]))], &p(&[0, 1])).unwrap(), p(&[1, 1]));
    }

    #[test]
    fn degree_mismatch() {
        assert_eq!(
            crt_lift(&[(2, p(&[1, 0, 1]))], &p(&[0, 1])),
            Err(PolyError::DegreeMismatch { expected: 1, found: 2 })
        );
        assert_eq!(crt_lift(&[(2, p(&[1, 1])), (4, p(&[1, 1]))], &p(&[0, 1])), Err(PolyError::NonCoprimeModuli(2, 4)));
    }

    #[test]
    fn closest_representative_by_enumeration() {
        for m in 1i64..12 {
            for r in 0..m {
                for target in -30i64..30 {
                    let got = closest_in_class(&r.into(), &m.into(), &target.into());
                    // brute force over a window of representatives
                    let best = (-40..=40)
                        .map(|k| r + k * m)
                        .min_by_key(|&x| ((x - target).abs(), -x))
                        .unwrap();
                    assert_eq!(got, BigInt::from(best), "m={m} r={r} t={target}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn lift_reduces_to_each_target(
            t1 in prop::collection::vec(0i64..2, 4),
            t2 in prop::collection::vec(0i64..3, 4),
            t3 in prop::collection::vec(0i64..5, 4),
            tmpl in prop::collection::vec(-1000i64..1000, 4),
        ) {
            let mk = |mut v: Vec<i64>| { v.push(1); IntPoly::from_i64s(&v) };
            let targets = vec![(2u64, mk(t1)), (3, mk(t2)), (5, mk(t3))];
            let template = mk(tmpl);
            let g = crt_lift(&targets, &template).unwrap();
            prop_assert!(g.is_monic());
            for (prime, t) in &targets {
                let pb = BigInt::from(*prime);
                for j in 0..=4 {
                    prop_assert_eq!(g.coeff(j).mod_floor(&pb), t.coeff(j).mod_floor(&pb));
                }
            }
            for j in 0..4 {
                let diff = (g.coeff(j) - template.coeff(j)) * 2;
                prop_assert!(diff <= BigInt::from(30) && diff > BigInt::from(-30));
            }
        }
    }
}
