use crate::poly::{self, is_prime, DegreePattern, IntPoly, PolyError};

use super::FieldError;

/// A prime together with the factor-degree pattern of the definer modulo it.
/// By Dedekind's theorem the pattern is the cycle type of a Frobenius element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusWitness {
    pub p: u64,
    pub pattern: DegreePattern,
}

type ShapeCheck = fn(&DegreePattern, usize) -> bool;

/// Proof that the Galois group of a degree-`d` definer is `S_d`: it is
/// transitive (a `d`-cycle), contains a `(d-1)`-cycle and a transposition.
/// For `d >= 3` the stabilizer of a root is then self-normalizing, so the
/// field has no automorphism besides the identity.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisCertificate {
    pub degree: usize,
    pub transitive: FrobeniusWitness,
    pub cycle: FrobeniusWitness,
    pub transposition: FrobeniusWitness,
}

impl GaloisCertificate {
    pub const CONCLUSION: &'static str = "symmetric-group, Aut(F)=1";

    /// Recompute every witness pattern from the definer.
    pub fn replay(&self, f: &IntPoly) -> Result<(), FieldError> {
        let d = f.degree().unwrap_or(0);
        if d != self.degree || d < 3 {
            return Err(FieldError::CertificateMismatch(format!(
                "certificate degree {} vs definer degree {d}",
                self.degree
            )));
        }
        let roles: [(&str, &FrobeniusWitness, ShapeCheck); 3] = [
            ("transitive", &self.transitive, is_full_cycle),
            ("cycle", &self.cycle, is_near_full_cycle),
            ("transposition", &self.transposition, yields_transposition),
        ];
        for (role, w, shape_ok) in roles {
            let got = poly::degree_pattern_mod(f, w.p)
                .map_err(|e| FieldError::CertificateMismatch(format!("{role} witness at {}: {e}", w.p)))?;
            if got != w.pattern {
                return Err(FieldError::CertificateMismatch(format!(
                    "{role} witness at {}: recorded {} but recomputed {got}",
                    w.p, w.pattern
                )));
            }
            if !shape_ok(&got, d) {
                return Err(FieldError::CertificateMismatch(format!("{role} witness pattern {got} has the wrong shape")));
            }
        }
        Ok(())
    }
}

pub(crate) fn is_full_cycle(pat: &DegreePattern, d: usize) -> bool {
    pat.parts() == [d]
}

pub(crate) fn is_near_full_cycle(pat: &DegreePattern, d: usize) -> bool {
    d >= 3 && pat.parts() == [1, d - 1]
}

/// Patterns whose Frobenius has an odd power that is a transposition: one
/// quadratic factor, all other factors linear, or all other factors of
/// pairwise distinct odd degree.
pub(crate) fn yields_transposition(pat: &DegreePattern, _d: usize) -> bool {
    let parts = pat.parts();
    if parts.iter().filter(|&&k| k == 2).count() != 1 {
        return false;
    }
    let rest: Vec<usize> = parts.iter().copied().filter(|&k| k != 2).collect();
    let all_linear = rest.iter().all(|&k| k == 1);
    let distinct_odd = rest.iter().all(|&k| k % 2 == 1) && rest.windows(2).all(|w| w[0] != w[1]);
    all_linear || distinct_odd
}

/// Scan primes up to `prime_bound` for the three Frobenius shapes. A returned
/// certificate is a proof; `NoWitnessFound` proves nothing.
pub fn certify_symmetric(f: &IntPoly, prime_bound: u64) -> Result<GaloisCertificate, FieldError> {
    if !f.is_monic() {
        return Err(PolyError::NotMonic.into());
    }
    let d = f.degree().unwrap();
    if d < 3 {
        return Err(FieldError::DegreeTooSmall { degree: d, minimum: 3 });
    }
    if !f.is_squarefree() {
        return Err(PolyError::NotSquarefree.into());
    }
    let mut transitive = None;
    let mut cycle = None;
    let mut transposition = None;
    for p in (2..=prime_bound).filter(|&p| is_prime(p)) {
        let Ok(pattern) = poly::degree_pattern_mod(f, p) else { continue };
        let w = || FrobeniusWitness { p, pattern: pattern.clone() };
        if transitive.is_none() && is_full_cycle(&pattern, d) {
            transitive = Some(w());
        }
        if cycle.is_none() && is_near_full_cycle(&pattern, d) {
            cycle = Some(w());
        }
        if transposition.is_none() && yields_transposition(&pattern, d) {
            transposition = Some(w());
        }
        if let (Some(a), Some(b), Some(c)) = (&transitive, &cycle, &transposition) {
            return Ok(GaloisCertificate { degree: d, transitive: a.clone(), cycle: b.clone(), transposition: c.clone() });
        }
    }
    Err(FieldError::NoWitnessFound(prime_bound))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn pat(v: &[usize]) -> DegreePattern {
        DegreePattern::new(v.to_vec())
    }

    #[test]
    fn transposition_shapes() {
        assert!(yields_transposition(&pat(&[1, 2]), 3));
        assert!(yields_transposition(&pat(&[1, 1, 2]), 4));
        assert!(yields_transposition(&pat(&[2, 3]), 5));
        assert!(yields_transposition(&pat(&[1, 2, 3]), 6));
        assert!(!yields_transposition(&pat(&[2, 2]), 4));
        assert!(!yields_transposition(&pat(&[1, 1, 2, 3]), 7));
        assert!(!yields_transposition(&pat(&[2, 3, 3]), 8));
        assert!(!yields_transposition(&pat(&[4]), 4));
    }

    #[test]
    fn certifies_x3_minus_4x_minus_1() {
        let f = p(&[-1, -4, 0, 1]);
        let cert = certify_symmetric(&f, 10).unwrap();
        assert_eq!(cert.transitive, FrobeniusWitness { p: 3, pattern: pat(&[3]) });
        assert_eq!(cert.cycle, FrobeniusWitness { p: 2, pattern: pat(&[1, 2]) });
        assert_eq!(cert.transposition, FrobeniusWitness { p: 2, pattern: pat(&[1, 2]) });
        cert.replay(&f).unwrap();
    }

    #[test]
    fn cyclic_cubic_never_certifies() {
        assert_eq!(certify_symmetric(&p(&[-1, -3, 0, 1]), 1000), Err(FieldError::NoWitnessFound(1000)));
    }

    #[test]
    fn refuses_small_degree() {
        assert_eq!(
            certify_symmetric(&p(&[-2, 0, 1]), 100),
            Err(FieldError::DegreeTooSmall { degree: 2, minimum: 3 })
        );
    }

    #[test]
    fn replay_detects_tampering() {
        let f = p(&[-1, -4, 0, 1]);
        let mut cert = certify_symmetric(&f, 10).unwrap();
        // 3 is a root mod 7, so 7 cannot witness irreducibility
        cert.transitive.p = 7;
        assert!(matches!(cert.replay(&f), Err(FieldError::CertificateMismatch(_))));
        let cert = certify_symmetric(&f, 10).unwrap();
        assert!(cert.replay(&p(&[-1, -3, 0, 1])).is_err());
    }
}
