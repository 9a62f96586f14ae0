use std::fmt;
use std::ops::{Deref, DerefMut, RangeInclusive};

use serde::{Deserialize, Serialize};

/// A pure strategy profile. Entry `i` is player `i`'s strategy index, 1-based,
/// where 1 is the most cooperative strategy and `k_i` the least.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Profile(pub Vec<usize>);

impl Profile {
    /// The joint-cooperation profile `(1, …, 1)`.
    pub fn cooperative(n: usize) -> Self {
        Profile(vec![1; n])
    }

    /// The all-defect profile `(k_1, …, k_n)`.
    pub fn all_defect(counts: &[usize]) -> Self {
        Profile(counts.to_vec())
    }

    pub fn with(&self, player: usize, strategy: usize) -> Self {
        let mut p = self.clone();
        p.0[player] = strategy;
        p
    }
}

impl Deref for Profile {
    type Target = [usize];
    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl DerefMut for Profile {
    fn deref_mut(&mut self) -> &mut [usize] {
        &mut self.0
    }
}

impl From<Vec<usize>> for Profile {
    fn from(v: Vec<usize>) -> Self {
        Profile(v)
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str(")")
    }
}

/// Mixed-radix odometer over per-player inclusive ranges. Player 0 is the
/// most significant digit and each digit counts upward from its low end.
#[derive(Debug, Clone)]
pub struct ProfileIter {
    lo: Vec<usize>,
    hi: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl ProfileIter {
    pub fn new(ranges: &[RangeInclusive<usize>]) -> Self {
        let lo: Vec<usize> = ranges.iter().map(|r| *r.start()).collect();
        let hi: Vec<usize> = ranges.iter().map(|r| *r.end()).collect();
        let next = if ranges.iter().any(|r| r.is_empty()) {
            None
        } else {
            Some(lo.clone())
        };
        ProfileIter { lo, hi, next }
    }

    /// Advances `cur` in place; returns false after the last profile.
    pub fn advance(cur: &mut [usize], lo: &[usize], hi: &[usize]) -> bool {
        for d in (0..cur.len()).rev() {
            if cur[d] < hi[d] {
                cur[d] += 1;
                return true;
            }
            cur[d] = lo[d];
        }
        false
    }
}

impl Iterator for ProfileIter {
    type Item = Profile;

    fn next(&mut self) -> Option<Profile> {
        let cur = self.next.take()?;
        let mut nxt = cur.clone();
        if Self::advance(&mut nxt, &self.lo, &self.hi) {
            self.next = Some(nxt);
        }
        Some(Profile(cur))
    }
}
