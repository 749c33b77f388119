//! Permutations of `{1..n}` in one-line notation, plus brute-force group
//! closure for the small groups this crate enumerates.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("not a permutation of 1..{0}: {1}")]
    NotBijective(usize, String),
    #[error("cannot parse permutation: {0}")]
    Parse(String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
}

/// A permutation stored as its zero-based image list. Displayed and parsed
/// in one-based one-line notation, e.g. `2,1,3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// From one-based images.
    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in images {
            if i == 0 || i > n || seen[i - 1] {
                return Err(PermError::NotBijective(n, join(images)));
            }
            seen[i - 1] = true;
        }
        Ok(Perm(images.iter().map(|&i| i - 1).collect()))
    }

    /// The transposition exchanging the one-based points `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(i - 1, j - 1);
        Perm(v)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// One-based images.
    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&i| i + 1).collect()
    }

    /// Image of the one-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1] + 1
    }

    pub(crate) fn apply0(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`, i.e. `other` first.
    pub fn compose(&self, other: &Perm) -> Result<Perm, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    /// Every permutation of `{1..n}` in lexicographic order of image lists.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Perm(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join(&self.images()))
    }
}

impl FromStr for Perm {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let images = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| PermError::Parse(s.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Perm::from_images(&images)
    }
}

/// All elements of the group generated by `gens` acting on `{1..n}`.
pub fn generate(n: usize, gens: &[Perm]) -> BTreeSet<Perm> {
    let mut group = BTreeSet::new();
    let id = Perm::identity(n);
    group.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(g) = frontier.pop() {
        for s in gens {
            let h = s.compose_unchecked(&g);
            if group.insert(h.clone()) {
                frontier.push(h);
            }
        }
    }
    group
}
