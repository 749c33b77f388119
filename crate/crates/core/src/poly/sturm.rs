//! Sturm chains over the integers and real-root isolation by bisection.
//!
//! Chains are built from positively scaled pseudo-remainders so every
//! element stays in `Z[X]` while keeping the sign pattern of the classical
//! rational chain.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::{IntPoly, PolyError};

/// Bisection stops once an isolating interval is narrower than this.
pub const ISOLATION_WIDTH: (i64, i64) = (1, 64);

/// An open interval `(lo, hi)` containing exactly one real root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootInterval {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo < x && x < &self.hi
    }
}

/// Isolating intervals for all real roots, sorted ascending and pairwise
/// disjoint. The position of an interval is the index of the corresponding
/// real embedding.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RootIsolation {
    intervals: Vec<RootInterval>,
}

impl RootIsolation {
    pub fn from_intervals(intervals: Vec<RootInterval>) -> Self {
        RootIsolation { intervals }
    }

    pub fn intervals(&self) -> &[RootInterval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Checks that every interval brackets a sign change of `f`, that the
    /// intervals are sorted and disjoint, and that their number matches the
    /// Sturm count.
    pub fn certifies(&self, f: &IntPoly) -> bool {
        let Ok(count) = sturm_real_root_count(f) else { return false };
        if count != self.intervals.len() {
            return false;
        }
        let ordered = self.intervals.windows(2).all(|w| w[0].hi < w[1].lo);
        ordered
            && self.intervals.iter().all(|iv| {
                let (a, b) = (f.sign_at(&iv.lo), f.sign_at(&iv.hi));
                iv.lo < iv.hi && a * b < 0
            })
    }
}

/// The Sturm chain of a squarefree polynomial.
#[derive(Debug, Clone)]
pub(crate) struct SturmChain {
    chain: Vec<IntPoly>,
}

impl SturmChain {
    pub(crate) fn new(f: &IntPoly) -> Self {
        let mut chain = vec![f.clone(), f.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            if chain[n - 1].degree() == Some(0) {
                break;
            }
            let r = chain[n - 2].positive_pseudo_rem(&chain[n - 1]).neg().primitive_part();
            chain.push(r);
        }
        SturmChain { chain }
    }

    fn variations(signs: impl Iterator<Item = i8>) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    fn at(&self, x: &BigRational) -> usize {
        Self::variations(self.chain.iter().map(|p| p.sign_at(x)))
    }

    fn at_pos_infinity(&self) -> usize {
        Self::variations(self.chain.iter().map(lead_sign))
    }

    fn at_neg_infinity(&self) -> usize {
        Self::variations(self.chain.iter().map(|p| {
            let s = lead_sign(p);
            if p.degree().unwrap_or(0) % 2 == 1 {
                -s
            } else {
                s
            }
        }))
    }

    /// Number of roots in the half-open interval `(a, b]`.
    pub(crate) fn count_between(&self, a: &BigRational, b: &BigRational) -> usize {
        self.at(a) - self.at(b)
    }

    pub(crate) fn count_all(&self) -> usize {
        self.at_neg_infinity() - self.at_pos_infinity()
    }
}

fn lead_sign(p: &IntPoly) -> i8 {
    p.leading().map_or(0, |c| if c.is_positive() { 1 } else { -1 })
}

/// Number of distinct real roots of `f`.
pub fn sturm_real_root_count(f: &IntPoly) -> Result<usize, PolyError> {
    if f.is_zero() {
        return Err(PolyError::Zero);
    }
    Ok(SturmChain::new(&f.squarefree_part()).count_all())
}

/// Strict upper bound on the absolute value of every root: `1 + max |c_i / c_d|`,
/// rounded up to an integer.
pub fn cauchy_bound(f: &IntPoly) -> BigInt {
    let lead = f.leading().expect("nonzero polynomial").abs();
    let max = f.coeffs()[..f.coeffs().len() - 1].iter().map(|c| c.abs()).max().unwrap_or_default();
    let q = (&max + &lead - BigInt::one()) / &lead;
    q + BigInt::one()
}

/// Disjoint isolating intervals for the real roots of a squarefree `f`,
/// each narrower than 1/64.
pub fn isolate_real_roots(f: &IntPoly) -> Result<RootIsolation, PolyError> {
    if f.is_zero() {
        return Err(PolyError::Zero);
    }
    if !f.is_squarefree() {
        return Err(PolyError::NotSquarefree);
    }
    let chain = SturmChain::new(f);
    let bound = BigRational::from_integer(cauchy_bound(f));
    let lo = -bound.clone();
    let total = chain.count_between(&lo, &bound);
    let max_width = BigRational::new(ISOLATION_WIDTH.0.into(), ISOLATION_WIDTH.1.into());

    let mut out = Vec::with_capacity(total);
    let mut stack = vec![(lo, bound, total)];
    while let Some((a, b, count)) = stack.pop() {
        if count == 0 {
            continue;
        }
        if count == 1 && b.clone() - &a < max_width {
            out.push(RootInterval { lo: a, hi: b });
            continue;
        }
        let m = split_point(f, &a, &b);
        let left = chain.count_between(&a, &m);
        // right half pushed first so the left half is processed first
        stack.push((m.clone(), b, count - left));
        stack.push((a, m, left));
    }

    separate(f, &mut out);
    Ok(RootIsolation { intervals: out })
}

/// A point strictly inside `(a, b)` that is not a root of `f`. Tries the
/// midpoint first, then other simple fractions.
fn split_point(f: &IntPoly, a: &BigRational, b: &BigRational) -> BigRational {
    let w = b - a;
    for den in 2i64.. {
        for num in 1..den {
            let m = a + &w * BigRational::new(num.into(), den.into());
            if f.sign_at(&m) != 0 {
                return m;
            }
        }
    }
    unreachable!()
}

/// Halve an isolating interval, keeping the half that brackets the root.
pub(crate) fn refine(f: &IntPoly, iv: &RootInterval) -> RootInterval {
    let two = BigRational::from_integer(2.into());
    let mid = (&iv.lo + &iv.hi) / &two;
    let s_mid = f.sign_at(&mid);
    if s_mid == 0 {
        let quarter = iv.width() / BigRational::from_integer(4.into());
        return RootInterval { lo: &mid - &quarter, hi: mid + quarter };
    }
    if f.sign_at(&iv.lo) * s_mid < 0 {
        RootInterval { lo: iv.lo.clone(), hi: mid }
    } else {
        RootInterval { lo: mid, hi: iv.hi.clone() }
    }
}

/// Bisection leaves neighbours sharing an endpoint; shrink until closed
/// intervals are disjoint too.
fn separate(f: &IntPoly, out: &mut [RootInterval]) {
    loop {
        let mut touched = false;
        for i in 1..out.len() {
            if out[i - 1].hi >= out[i].lo {
                out[i - 1] = refine(f, &out[i - 1]);
                out[i] = refine(f, &out[i]);
                touched = true;
            }
        }
        if !touched {
            return;
        }
    }
}

/// Refine every interval until each is narrower than `width`.
pub fn refine_to(f: &IntPoly, iso: &RootIsolation, width: &BigRational) -> RootIsolation {
    let intervals = iso
        .intervals
        .iter()
        .map(|iv| {
            let mut iv = iv.clone();
            while &iv.width() >= width {
                iv = refine(f, &iv);
            }
            iv
        })
        .collect();
    RootIsolation { intervals }
}
