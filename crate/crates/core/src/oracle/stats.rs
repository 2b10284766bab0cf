use std::collections::HashMap;

use num_traits::ToPrimitive;
use serde::Serialize;
use statrs::function::gamma::gamma_ur;

use crate::sampler::{GrowthState, Prng};

use super::{count_trees, OracleError, DEFAULT_LIMIT};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiSquareReport {
    pub classes: u64,
    pub statistic: f64,
    pub dof: u64,
    pub p_value: f64,
    pub samples: u64,
    pub seed: u64,
}

fn grow(d: usize, n: usize, seed: u64, letter: Option<usize>) -> Result<Vec<usize>, OracleError> {
    let mut state = GrowthState::new(d, seed)?;
    state.set_letter_override(letter);
    for _ in 0..n {
        state.grow_step()?;
    }
    Ok(state.tree().to_preorder_code())
}

/// Pearson goodness-of-fit of the sampler against the uniform law on trees
/// of size `n`. Sample `i` runs its own chain seeded with the `i`-th output
/// of a generator seeded with `seed`.
pub fn chi_square_uniformity(
    d: usize,
    n: usize,
    samples: u64,
    seed: u64,
) -> Result<ChiSquareReport, OracleError> {
    run_chi_square(d, n, samples, seed, None)
}

/// As [`chi_square_uniformity`] with every growth step forced to use
/// `letter`. Used to show the test detects a broken sampler.
pub fn chi_square_uniformity_tampered(
    d: usize,
    n: usize,
    samples: u64,
    seed: u64,
    letter: usize,
) -> Result<ChiSquareReport, OracleError> {
    run_chi_square(d, n, samples, seed, Some(letter))
}

fn run_chi_square(
    d: usize,
    n: usize,
    samples: u64,
    seed: u64,
    letter: Option<usize>,
) -> Result<ChiSquareReport, OracleError> {
    if d < 2 {
        return Err(OracleError::InvalidParams(format!("arity {d} is below 2")));
    }
    let classes = count_trees(d, n)
        .to_u64()
        .filter(|&c| c <= DEFAULT_LIMIT)
        .ok_or_else(|| OracleError::GuardExceeded {
            objects: count_trees(d, n).to_string(),
            limit: DEFAULT_LIMIT,
        })?;
    if samples < 10 * classes {
        return Err(OracleError::Underpowered { samples, classes });
    }
    let mut master = Prng::new(seed);
    let mut observed: HashMap<Vec<usize>, u64> = HashMap::new();
    for _ in 0..samples {
        *observed.entry(grow(d, n, master.next_u64(), letter)?).or_default() += 1;
    }
    let expected = samples as f64 / classes as f64;
    let mut counts: Vec<u64> = observed.into_values().collect();
    counts.sort_unstable();
    let missing = classes.saturating_sub(counts.len() as u64);
    let statistic = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum::<f64>()
        + missing as f64 * expected;
    let dof = classes - 1;
    let p_value = if dof == 0 {
        1.0
    } else {
        gamma_ur(dof as f64 / 2.0, statistic / 2.0)
    };
    Ok(ChiSquareReport {
        classes,
        statistic,
        dof,
        p_value,
        samples,
        seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeightSummary {
    pub reps: u64,
    pub mean: f64,
    pub stddev: f64,
    pub min: usize,
    pub max: usize,
}

/// Heights of `reps` independent trees of size `n`. Descriptive only.
pub fn height_stats(d: usize, n: usize, reps: u64, seed: u64) -> Result<HeightSummary, OracleError> {
    if reps == 0 {
        return Err(OracleError::InvalidParams("need at least one repetition".into()));
    }
    let mut master = Prng::new(seed);
    let mut heights = Vec::with_capacity(reps as usize);
    for _ in 0..reps {
        let mut state = GrowthState::new(d, master.next_u64())?;
        for _ in 0..n {
            state.grow_step()?;
        }
        heights.push(state.tree().height());
    }
    let mean = heights.iter().sum::<usize>() as f64 / reps as f64;
    let var = heights.iter().map(|&h| (h as f64 - mean).powi(2)).sum::<f64>() / reps as f64;
    Ok(HeightSummary {
        reps,
        mean,
        stddev: var.sqrt(),
        min: *heights.iter().min().expect("reps > 0"),
        max: *heights.iter().max().expect("reps > 0"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_class_is_degenerate() {
        let r = chi_square_uniformity(3, 1, 50, 9).unwrap();
        assert_eq!((r.classes, r.dof, r.statistic, r.p_value), (1, 0, 0.0, 1.0));
    }

    #[test]
    fn underpowered_is_refused() {
        assert_eq!(
            chi_square_uniformity(3, 4, 549, 1),
            Err(OracleError::Underpowered { samples: 549, classes: 55 })
        );
    }

    #[test]
    fn small_run_passes() {
        let r = chi_square_uniformity(3, 3, 6000, 42).unwrap();
        assert_eq!(r.classes, 12);
        assert!(r.p_value >= 0.001, "{r:?}");
    }

    #[test]
    fn p_value_reference() {
        // chi-square upper tail with 4 dof at x = 9.487729 is 0.05
        assert!((gamma_ur(2.0, 9.487729 / 2.0) - 0.05).abs() < 1e-6);
    }

    #[test]
    fn heights_trivial_sizes() {
        let h0 = height_stats(3, 0, 5, 1).unwrap();
        assert_eq!((h0.min, h0.max), (0, 0));
        let h1 = height_stats(3, 1, 5, 1).unwrap();
        assert_eq!((h1.min, h1.max), (1, 1));
    }
}
