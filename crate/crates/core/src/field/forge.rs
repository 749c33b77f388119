//! Search for totally real definers with Galois group `S_d`.
//!
//! Three primes `p1 < p2 < p3` get target reductions of prescribed shape:
//! irreducible mod `p1`, linear times irreducible mod `p2`, and a shape that
//! yields a transposition mod `p3`. The targets are glued by CRT to a real
//! template with roots `t, 2t, ..., dt`; `t` doubles until the lifted
//! polynomial has `d` real roots.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::modp::{next_prime, FpPoly};
use crate::poly::{crt_lift, sturm_real_root_count, IntPoly};

use super::{certify_symmetric, FieldError, GaloisCertificate, TotallyRealField};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForgeConfig {
    /// Number of target triples drawn before giving up.
    pub budget: u64,
    /// Doublings of the template root spacing per target triple.
    pub max_doublings: u32,
    /// Upper bound for the certificate's prime scan; raised to `p3` if lower.
    pub prime_bound: u64,
}

impl Default for ForgeConfig {
    fn default() -> Self {
        ForgeConfig { budget: 64, max_doublings: 40, prime_bound: 1000 }
    }
}

/// Forge a degree-`d` totally real field with certified group `S_d`, using
/// the default configuration. Same `(d, seed)` gives the same field.
pub fn forge_field(d: usize, seed: u64) -> Result<(TotallyRealField, GaloisCertificate), FieldError> {
    forge_field_with(d, seed, &ForgeConfig::default())
}

pub fn forge_field_with(
    d: usize,
    seed: u64,
    config: &ForgeConfig,
) -> Result<(TotallyRealField, GaloisCertificate), FieldError> {
    if d < 3 {
        return Err(FieldError::DegreeTooSmall { degree: d, minimum: 3 });
    }
    let shapes = [vec![d], vec![1, d - 1], transposition_shape(d)];
    let primes = choose_primes(&shapes);
    let prime_bound = config.prime_bound.max(primes[2]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ d as u64);

    for _ in 0..config.budget {
        let targets: Vec<(u64, IntPoly)> = primes
            .iter()
            .zip(&shapes)
            .map(|(&p, shape)| (p, lift_residues(&random_with_shape(p, shape, &mut rng))))
            .collect();
        let mut spacing = BigInt::from(1);
        for _ in 0..=config.max_doublings {
            let roots: Vec<BigInt> = (1..=d).map(|k| &spacing * BigInt::from(k)).collect();
            let g = crt_lift(&targets, &IntPoly::from_roots(&roots))?;
            if sturm_real_root_count(&g)? == d {
                // the targets already supply witnesses at p1, p2, p3
                if let Ok(cert) = certify_symmetric(&g, prime_bound) {
                    let field = TotallyRealField::new(g, Some(cert.clone()))?;
                    return Ok((field, cert));
                }
                break;
            }
            spacing *= 2;
        }
    }
    Err(FieldError::SearchExhausted(config.budget))
}

/// Target shape for the transposition prime: a quadratic factor next to
/// distinct odd degrees summing to `d - 2`. A residual of 2 has no such
/// partition, so degree 4 uses two linear factors instead.
pub(crate) fn transposition_shape(d: usize) -> Vec<usize> {
    let r = d - 2;
    let mut shape = vec![2];
    match r {
        2 => shape.extend([1, 1]),
        r if r % 2 == 1 => shape.push(r),
        r => shape.extend([1, r - 1]),
    }
    shape
}

/// The three smallest increasing primes admitting each shape. A shape with
/// `k` linear factors needs at least `k` residues.
fn choose_primes(shapes: &[Vec<usize>; 3]) -> [u64; 3] {
    let mut out = [0u64; 3];
    let mut p = 1;
    for (slot, shape) in out.iter_mut().zip(shapes) {
        let linear = shape.iter().filter(|&&k| k == 1).count() as u64;
        p = next_prime(p + 1);
        while p < linear {
            p = next_prime(p + 1);
        }
        *slot = p;
    }
    out
}

fn random_monic_irreducible(p: u64, k: usize, rng: &mut ChaCha8Rng) -> FpPoly {
    loop {
        let mut c: Vec<u64> = (0..k).map(|_| rng.gen_range(0..p)).collect();
        c.push(1);
        let f = FpPoly::new(p, c);
        if f.is_squarefree() && f.distinct_degree_pattern() == [k] {
            return f;
        }
    }
}

/// Product of pairwise distinct random monic irreducibles with the given
/// degrees; squarefree by construction.
fn random_with_shape(p: u64, shape: &[usize], rng: &mut ChaCha8Rng) -> FpPoly {
    let mut factors: Vec<FpPoly> = Vec::with_capacity(shape.len());
    for &k in shape {
        let f = loop {
            let f = random_monic_irreducible(p, k, rng);
            if !factors.contains(&f) {
                break f;
            }
        };
        factors.push(f);
    }
    factors.iter().fold(FpPoly::new(p, vec![1]), |acc, f| acc.mul(f))
}

fn lift_residues(f: &FpPoly) -> IntPoly {
    IntPoly::new(f.coeffs().iter().map(|&c| BigInt::from(c)).collect())
}
