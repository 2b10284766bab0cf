//! Łukasiewicz walks and the cycle lemma.
//!
//! A walk `s_0, …, s_m` starts at 0, ends at −1 and never steps down by more
//! than one. Among the `m` cyclic rotations of its increments exactly one is
//! an excursion (stays non-negative until the final step), and it is reached
//! by rotating at the first time the walk attains its minimum.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WalkError {
    #[error("rotation {r} out of range for a walk of length {m}")]
    RotationOutOfRange { r: usize, m: usize },
    #[error("invalid walk: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LukWalk {
    values: Vec<i64>,
}

impl LukWalk {
    pub fn new(values: Vec<i64>) -> Result<Self, WalkError> {
        let bad = |m: &str| Err(WalkError::Invalid(m.to_string()));
        if values.len() < 2 {
            return bad("need at least two values");
        }
        if values[0] != 0 {
            return bad("must start at 0");
        }
        if *values.last().unwrap() != -1 {
            return bad("must end at -1");
        }
        if values.windows(2).any(|w| w[1] - w[0] < -1) {
            return bad("increment below -1");
        }
        Ok(LukWalk { values })
    }

    pub fn from_increments(increments: &[i64]) -> Result<Self, WalkError> {
        let mut values = Vec::with_capacity(increments.len() + 1);
        let mut s = 0;
        values.push(s);
        for &x in increments {
            s += x;
            values.push(s);
        }
        LukWalk::new(values)
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Number of steps `m`.
    pub fn len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn increments(&self) -> Vec<i64> {
        self.values.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Walk whose `i`-th increment is the `(i + r) mod m`-th increment of
    /// `self`.
    pub fn rot(&self, r: usize) -> Result<LukWalk, WalkError> {
        let m = self.len();
        if r >= m {
            return Err(WalkError::RotationOutOfRange { r, m });
        }
        let inc = self.increments();
        let mut values = Vec::with_capacity(m + 1);
        let mut s = 0;
        values.push(0);
        for i in 0..m {
            s += inc[(i + r) % m];
            values.push(s);
        }
        Ok(LukWalk { values })
    }

    pub fn is_excursion(&self) -> bool {
        let m = self.len();
        self.values[..m].iter().all(|&v| v >= 0) && self.values[m] == -1
    }

    /// Smallest index at which the minimum value is attained.
    pub fn first_argmin(&self) -> usize {
        let mut best = 0;
        for (j, &v) in self.values.iter().enumerate() {
            if v < self.values[best] {
                best = j;
            }
        }
        best
    }

    /// The unique `r` in `0..m` for which `rot(r)` is an excursion.
    pub fn excursion_shift(&self) -> usize {
        self.first_argmin() % self.len()
    }
}

impl fmt::Display for LukWalk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for LukWalk {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let values = s
            .trim()
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<i64>()
                    .map_err(|_| WalkError::Invalid(format!("bad value {p:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        LukWalk::new(values)
    }
}

/// Every walk of length `m` whose increments lie in `[-1, max_increment]`,
/// in lexicographic order of the increment sequence.
pub fn enumerate_walks(m: usize, max_increment: i64) -> Vec<LukWalk> {
    fn go(m: usize, max_inc: i64, inc: &mut Vec<i64>, sum: i64, out: &mut Vec<LukWalk>) {
        let left = (m - inc.len()) as i64;
        if left == 0 {
            if sum == -1 {
                out.push(LukWalk::from_increments(inc).expect("enumerated walk is valid"));
            }
            return;
        }
        // remaining steps must bring the sum to -1
        for x in -1..=max_inc {
            let s = sum + x;
            let rest = left - 1;
            if s - rest > -1 || s + rest * max_inc < -1 {
                continue;
            }
            inc.push(x);
            go(m, max_inc, inc, s, out);
            inc.pop();
        }
    }
    let mut out = Vec::new();
    if m >= 1 && max_increment >= -1 {
        go(m, max_increment, &mut Vec::with_capacity(m), 0, &mut out);
    }
    out
}
