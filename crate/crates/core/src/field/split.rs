use crate::poly::{self, modp::next_prime, roots_mod, IntPoly};

use super::FieldError;

/// Number of primes [`find_split_prime`] examines before giving up.
pub const DEFAULT_SPLIT_BUDGET: u64 = 200_000;

/// A prime over which the field splits completely, with the roots of the
/// definer modulo `p` in ascending order. The position of a residue is the
/// index of the corresponding `p`-adic place.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPrimeWitness {
    pub p: u64,
    pub residues: Vec<u64>,
}

impl SplitPrimeWitness {
    pub fn degree(&self) -> usize {
        self.residues.len()
    }

    pub fn verify(&self, f: &IntPoly) -> bool {
        let Ok(pat) = poly::degree_pattern_mod(f, self.p) else { return false };
        pat.is_totally_split()
            && self.residues.len() == f.degree().unwrap_or(0)
            && roots_mod(f, self.p) == self.residues
    }
}

/// Smallest prime `p >= start` modulo which `f` is squarefree and splits into
/// linear factors. At most `budget` primes are tried.
pub fn find_split_prime(f: &IntPoly, start: u64, budget: u64) -> Result<SplitPrimeWitness, FieldError> {
    if !f.is_monic() {
        return Err(poly::PolyError::NotMonic.into());
    }
    let mut p = next_prime(start);
    for _ in 0..budget {
        if let Ok(pat) = poly::degree_pattern_mod(f, p) {
            if pat.is_totally_split() {
                return Ok(SplitPrimeWitness { p, residues: roots_mod(f, p) });
            }
        }
        p = next_prime(p + 1);
    }
    Err(FieldError::SearchExhausted(budget))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn x2_minus_5_splits_first_at_11() {
        // exhaustive residue scan: no square root of 5 mod 3 or 7, ramified at 2 and 5
        for q in [2u64, 3, 5, 7] {
            let roots = roots_mod(&p(&[-5, 0, 1]), q);
            assert!(roots.len() < 2 || poly::degree_pattern_mod(&p(&[-5, 0, 1]), q).is_err());
        }
        let w = find_split_prime(&p(&[-5, 0, 1]), 2, 100).unwrap();
        assert_eq!(w, SplitPrimeWitness { p: 11, residues: vec![4, 7] });
        assert!(w.verify(&p(&[-5, 0, 1])));
    }

    #[test]
    fn linear_definer_splits_at_start() {
        assert_eq!(find_split_prime(&p(&[0, 1]), 2, 1).unwrap(), SplitPrimeWitness { p: 2, residues: vec![0] });
    }

    // Independent oracle: scan primes in increasing order, accept the first
    // with deg f distinct roots found by exhaustive evaluation.
    fn brute_split_prime(f: &IntPoly) -> u64 {
        let d = f.degree().unwrap();
        (2u64..).filter(|&q| poly::is_prime(q)).find(|&q| roots_mod(f, q).len() == d).unwrap()
    }

    #[test]
    fn x3_minus_4x_minus_1_split_prime_is_pinned() {
        let f = p(&[-1, -4, 0, 1]);
        let w = find_split_prime(&f, 2, 1000).unwrap();
        assert_eq!(w.p, brute_split_prime(&f));
        assert_eq!(w.p, 37);
        assert_eq!(w.residues, vec![21, 24, 29]);
        assert!(w.verify(&f));
    }

    #[test]
    fn exhaustion() {
        // X^2 + 1 only splits at primes 1 mod 4; a budget of one prime from 3 fails
        assert_eq!(find_split_prime(&p(&[1, 0, 1]), 3, 1), Err(FieldError::SearchExhausted(1)));
    }
}
