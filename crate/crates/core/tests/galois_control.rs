//! Symmetric-group certificates against the discriminant oracle: a monic
//! cubic has Galois group `S_3` iff it is irreducible and its discriminant
//! is not a square.

use conjforge::field::{certify_symmetric, FieldError};
use conjforge::poly::IntPoly;
use num_integer::Roots;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn discriminant(a: i64, b: i64, c: i64) -> i64 {
    18 * a * b * c - 4 * a.pow(3) * c + a * a * b * b - 4 * b.pow(3) - 27 * c * c
}

fn has_integer_root(a: i64, b: i64, c: i64) -> bool {
    if c == 0 {
        return true;
    }
    (1..=c.abs()).filter(|r| c % r == 0).any(|r| [r, -r].iter().any(|&x| x * x * x + a * x * x + b * x + c == 0))
}

fn is_square(n: i64) -> bool {
    n >= 0 && n.sqrt().pow(2) == n
}

#[test]
fn random_cubics_agree_with_the_discriminant_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    let mut symmetric = 0;
    while checked < 1000 {
        let (a, b, c) = (rng.gen_range(-20..=20), rng.gen_range(-20..=20), rng.gen_range(-20..=20));
        let disc = discriminant(a, b, c);
        if disc == 0 {
            continue;
        }
        checked += 1;
        let f = IntPoly::from_i64s(&[c, b, a, 1]);
        let oracle = !has_integer_root(a, b, c) && !is_square(disc);
        match certify_symmetric(&f, 1000) {
            Ok(cert) => {
                assert!(oracle, "{f} certified but disc {disc} is a square or f is reducible");
                cert.replay(&f).unwrap();
                symmetric += 1;
            }
            Err(FieldError::NoWitnessFound(1000)) => assert!(!oracle, "{f} with disc {disc} missed"),
            Err(e) => panic!("{f}: {e}"),
        }
    }
    assert!(symmetric > 500);
}

#[test]
fn cyclic_cubic_has_square_discriminant() {
    assert_eq!(discriminant(0, -3, -1), 81);
    assert!(is_square(81));
    let f = IntPoly::from_i64s(&[-1, -3, 0, 1]);
    assert_eq!(certify_symmetric(&f, 1000), Err(FieldError::NoWitnessFound(1000)));
}
