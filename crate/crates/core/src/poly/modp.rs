//! Polynomials over the prime field with `p` elements, distinct-degree
//! factorization, and the factor-degree patterns fed to Dedekind's theorem.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{IntPoly, PolyError};

/// Sorted multiset of irreducible-factor degrees of a squarefree reduction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegreePattern(Vec<usize>);

impl DegreePattern {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.sort_unstable();
        DegreePattern(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_irreducible(&self) -> bool {
        self.0.len() == 1
    }

    pub fn is_totally_split(&self) -> bool {
        self.0.iter().all(|&k| k == 1)
    }
}

impl fmt::Display for DegreePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut k = 3u64;
    while k.saturating_mul(k) <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 2;
    }
    true
}

/// Smallest prime `>= n`.
pub fn next_prime(n: u64) -> u64 {
    (n.max(2)..).find(|&k| is_prime(k)).expect("primes are unbounded")
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

/// Dense polynomial over `F_p`, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

impl FpPoly {
    pub(crate) fn new(p: u64, mut c: Vec<u64>) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub(crate) fn reduce(f: &IntPoly, p: u64) -> Self {
        let pb = BigInt::from(p);
        let c = f
            .coeffs()
            .iter()
            .map(|x| x.mod_floor(&pb).to_u64().expect("residue fits in u64"))
            .collect();
        Self::new(p, c)
    }

    fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub(crate) fn coeffs(&self) -> &[u64] {
        &self.c
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub(crate) fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn derivative(&self) -> Self {
        let c = self.c.iter().enumerate().skip(1).map(|(i, &a)| mulmod(a, i as u64 % self.p, self.p)).collect();
        Self::new(self.p, c)
    }

    fn sub(&self, other: &Self) -> Self {
        let n = self.c.len().max(other.c.len());
        let c = (0..n)
            .map(|i| {
                let a = self.c.get(i).copied().unwrap_or(0);
                let b = other.c.get(i).copied().unwrap_or(0);
                (a + self.p - b) % self.p
            })
            .collect();
        Self::new(self.p, c)
    }

    pub(crate) fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(self.p, vec![]);
        }
        let mut c = vec![0u64; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in other.c.iter().enumerate() {
                c[i + j] = (c[i + j] + mulmod(a, b, self.p)) % self.p;
            }
        }
        Self::new(self.p, c)
    }

    fn monic(&self) -> Self {
        match self.c.last() {
            None => self.clone(),
            Some(&l) => {
                let inv = invmod(l, self.p);
                Self::new(self.p, self.c.iter().map(|&a| mulmod(a, inv, self.p)).collect())
            }
        }
    }

    fn divmod(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = invmod(*d.c.last().unwrap(), self.p);
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Self::new(self.p, vec![]), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let t = mulmod(r[k + dd], inv, self.p);
            q[k] = t;
            if t == 0 {
                continue;
            }
            for (j, &b) in d.c.iter().enumerate() {
                r[k + j] = (r[k + j] + self.p - mulmod(t, b, self.p)) % self.p;
            }
        }
        r.truncate(dd);
        (Self::new(self.p, q), Self::new(self.p, r))
    }

    fn rem(&self, d: &Self) -> Self {
        self.divmod(d).1
    }

    fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::new(self.p, vec![1]).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn eval(&self, x: u64) -> u64 {
        self.c.iter().rev().fold(0, |acc, &a| (mulmod(acc, x, self.p) + a) % self.p)
    }

    pub(crate) fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => {
                let d = self.derivative();
                !d.is_zero() && self.gcd(&d).degree() == Some(0)
            }
        }
    }

    /// Distinct-degree splitting of a monic squarefree polynomial: peel off
    /// `gcd(g, X^(p^i) - X)` for i = 1, 2, ... until what remains must be
    /// irreducible.
    pub(crate) fn distinct_degree_pattern(&self) -> Vec<usize> {
        let mut parts = Vec::new();
        let mut g = self.monic();
        let x = Self::x(self.p);
        let mut h = x.clone();
        let mut i = 1;
        while g.degree().unwrap_or(0) >= 2 * i {
            h = h.pow_mod(self.p, &g);
            let factor = g.gcd(&h.sub(&x));
            let fd = factor.degree().unwrap_or(0);
            if fd > 0 {
                parts.extend(std::iter::repeat_n(i, fd / i));
                g = g.divmod(&factor).0;
                h = h.rem(&g);
            }
            i += 1;
        }
        if let Some(k) = g.degree().filter(|&k| k > 0) {
            parts.push(k);
        }
        parts
    }
}

/// Factor-degree pattern of `f mod p`. Fails when `p` is not prime, when `f`
/// is not monic, or when the reduction is not squarefree (Dedekind's
/// theorem does not apply at such `p`).
pub fn degree_pattern_mod(f: &IntPoly, p: u64) -> Result<DegreePattern, PolyError> {
    if !is_prime(p) {
        return Err(PolyError::NotPrime(p));
    }
    if !f.is_monic() {
        return Err(PolyError::NotMonic);
    }
    let g = FpPoly::reduce(f, p);
    if !g.is_squarefree() {
        return Err(PolyError::NotSquarefreeModP(p));
    }
    Ok(DegreePattern::new(g.distinct_degree_pattern()))
}

/// All roots of `f` in `F_p`, ascending, by exhaustive evaluation.
pub fn roots_mod(f: &IntPoly, p: u64) -> Vec<u64> {
    let g = FpPoly::reduce(f, p);
    (0..p).filter(|&x| g.eval(x) == 0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn pat(v: &[usize]) -> DegreePattern {
        DegreePattern::new(v.to_vec())
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(7919));
        assert!(!is_prime(7917));
        assert_eq!(next_prime(24), 29);
    }

    #[test]
    fn pattern_examples() {
        // exhaustive root checks: X^2+1 mod 3 takes values 1,2,2
        assert_eq!(roots_mod(&p(&[1, 0, 1]), 3), Vec::<u64>::new());
        assert_eq!(degree_pattern_mod(&p(&[1, 0, 1]), 3).unwrap(), pat(&[2]));
        // X^3-X-1 mod 2 takes values 1,1
        assert_eq!(roots_mod(&p(&[-1, -1, 0, 1]), 2), Vec::<u64>::new());
        assert_eq!(degree_pattern_mod(&p(&[-1, -1, 0, 1]), 2).unwrap(), pat(&[3]));
        // 4^2 = 16 = 5 mod 11
        assert_eq!(roots_mod(&p(&[-5, 0, 1]), 11), vec![4, 7]);
        assert_eq!(degree_pattern_mod(&p(&[-5, 0, 1]), 11).unwrap(), pat(&[1, 1]));
    }

    #[test]
    fn pattern_errors() {
        assert_eq!(degree_pattern_mod(&p(&[1, 0, 1]), 2), Err(PolyError::NotSquarefreeModP(2)));
        assert_eq!(degree_pattern_mod(&p(&[1, 0, 1]), 9), Err(PolyError::NotPrime(9)));
        assert_eq!(degree_pattern_mod(&p(&[1, 0, 2]), 3), Err(PolyError::NotMonic));
        // X^p - X derivative is -1; X^p derivative vanishes mod p
        assert_eq!(degree_pattern_mod(&p(&[0, 0, 0, 1]), 3), Err(PolyError::NotSquarefreeModP(3)));
    }

    #[test]
    fn mixed_patterns() {
        // X^3 - 4X - 1: (X+1)(X^2+X+1) mod 2, irreducible mod 3
        let f = p(&[-1, -4, 0, 1]);
        assert_eq!(degree_pattern_mod(&f, 2).unwrap(), pat(&[1, 2]));
        assert_eq!(degree_pattern_mod(&f, 3).unwrap(), pat(&[3]));
        // X^4 + 1 splits as two quadratics mod 3
        assert_eq!(degree_pattern_mod(&p(&[1, 0, 0, 0, 1]), 3).unwrap(), pat(&[2, 2]));
        // X(X+1)(X^2+X+1)(X^3+X+1) mod 2
        let g = FpPoly::new(2, vec![0, 1])
            .mul(&FpPoly::new(2, vec![1, 1]))
            .mul(&FpPoly::new(2, vec![1, 1, 1]))
            .mul(&FpPoly::new(2, vec![1, 1, 0, 1]));
        let gi = IntPoly::from_i64s(&g.coeffs().iter().map(|&c| c as i64).collect::<Vec<_>>());
        assert_eq!(degree_pattern_mod(&gi, 2).unwrap(), pat(&[1, 1, 2, 3]));
    }

    // Brute-force oracle: count monic irreducibles of degree k over F_p by
    // testing for roots (k <= 3), compare against the necklace formula.
    #[test]
    fn irreducible_counts_match_necklace_formula() {
        for prime in [2u64, 3, 5] {
            for k in 2..=3usize {
                let total = prime.pow(k as u32);
                let mut count = 0;
                for code in 0..total {
                    let mut c: Vec<i64> = (0..k).map(|i| ((code / prime.pow(i as u32)) % prime) as i64).collect();
                    c.push(1);
                    let f = IntPoly::from_i64s(&c);
                    let no_roots = roots_mod(&f, prime).is_empty();
                    let pattern = degree_pattern_mod(&f, prime);
                    if no_roots {
                        count += 1;
                        assert_eq!(pattern.unwrap(), pat(&[k]));
                    } else if let Ok(pt) = pattern {
                        assert!(!pt.is_irreducible());
                    }
                }
                let expected = if k == 2 { (prime * prime - prime) / 2 } else { (prime.pow(3) - prime) / 3 };
                assert_eq!(count, expected, "p={prime} k={k}");
            }
        }
    }

    proptest! {
        #[test]
        fn pattern_sums_to_degree(c in prop::collection::vec(-50i64..=50, 1..=8), pi in 0usize..8) {
            let prime = [2u64, 3, 5, 7, 11, 13, 101, 257][pi];
            let mut c = c;
            c.push(1);
            let f = IntPoly::from_i64s(&c);
            if let Ok(pt) = degree_pattern_mod(&f, prime) {
                prop_assert_eq!(pt.total(), f.degree().unwrap());
                prop_assert_eq!(pt.parts().iter().filter(|&&k| k == 1).count(), roots_mod(&f, prime).len());
            }
        }
    }
}
