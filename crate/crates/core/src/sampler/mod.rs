//! The growth chain: starting from the one-node tree, each step draws a
//! uniform `(d − 1)`-subset of the edges plus buds and a uniform letter,
//! applies the growth bijection, and forgets the marked leaves. Every tree of
//! the chain is uniform among trees of its size.

mod in_place;
mod prng;

use std::time::Duration;

use serde::Serialize;
use thiserror::Error;

use crate::bijections::{BijectionError, Letter};
use crate::marks::MarkTarget;
use crate::tree::{DaryTree, TreeError};

pub use in_place::{enlarge_in_place, Scratch};
pub use prng::Prng;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SamplerError {
    #[error("uniform draw from an empty range")]
    EmptyRange,
    #[error("target size {n} exceeds the arena limit for arity {d}")]
    TooLarge { d: usize, n: usize },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Bijection(#[from] BijectionError),
}

/// Work counters. Allocations, link redirections and random draws are the
/// constant-cost operations; `lex_letters_compared` counts the path letters
/// read while ordering marked edges, which grows with node depth.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct OpCounters {
    pub node_allocations: u64,
    pub link_redirections: u64,
    pub rng_draws: u64,
    pub lex_letters_compared: u64,
}

/// Draws `d − 1` distinct elements of `E(t) ∪ Buds(d)`, returned in draw
/// order. Ranks `0..d·n` are edges in arena order of their child node and
/// ranks `d·n..d·n+d−1` are the buds `b_0..b_{d−2}`; repeated ranks are
/// redrawn.
pub fn sample_mark_set(rng: &mut Prng, tree: &DaryTree) -> Vec<MarkTarget> {
    let d = tree.arity();
    let edges = tree.edge_count();
    let universe = (edges + d - 1) as u64;
    let mut ranks: Vec<u64> = Vec::with_capacity(d - 1);
    while ranks.len() < d - 1 {
        let r = rng.uniform_below(universe).expect("universe is never empty");
        if !ranks.contains(&r) {
            ranks.push(r);
        }
    }
    ranks
        .into_iter()
        .map(|r| {
            let r = r as usize;
            if r < edges {
                MarkTarget::Edge(tree.edge_by_rank(r).expect("rank below edge count"))
            } else {
                MarkTarget::Bud(r - edges)
            }
        })
        .collect()
}

#[derive(Debug)]
pub struct GrowthState {
    tree: DaryTree,
    step: usize,
    rng: Prng,
    counters: OpCounters,
    scratch: Scratch,
    letter_override: Option<usize>,
}

impl GrowthState {
    pub fn new(d: usize, seed: u64) -> Result<Self, SamplerError> {
        Ok(GrowthState {
            tree: DaryTree::new(d)?,
            step: 0,
            rng: Prng::new(seed),
            counters: OpCounters::default(),
            scratch: Scratch::default(),
            letter_override: None,
        })
    }

    pub fn tree(&self) -> &DaryTree {
        &self.tree
    }

    pub fn into_tree(self) -> DaryTree {
        self.tree
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn counters(&self) -> OpCounters {
        self.counters
    }

    /// Testing hook: forces every step to use this letter instead of a
    /// uniform one, which breaks uniformity on purpose.
    #[doc(hidden)]
    pub fn set_letter_override(&mut self, letter: Option<usize>) {
        self.letter_override = letter;
    }

    /// Timing instrumentation and edge-order logs.
    pub fn scratch_mut(&mut self) -> &mut Scratch {
        &mut self.scratch
    }

    pub fn lex_time(&self) -> Option<Duration> {
        self.scratch.lex_time()
    }

    pub fn grow_step(&mut self) -> Result<(), SamplerError> {
        let d = self.tree.arity();
        let marks = sample_mark_set(&mut self.rng, &self.tree);
        let drawn = self.rng.uniform_below(d as u64)? as usize + 1;
        let a = Letter::new(self.letter_override.unwrap_or(drawn), d)?;
        enlarge_in_place(
            &mut self.tree,
            &marks,
            a,
            &mut self.counters,
            &mut self.scratch,
        )?;
        self.counters.rng_draws = self.rng.draws();
        self.step += 1;
        Ok(())
    }
}

fn check_size(d: usize, n: usize) -> Result<(), SamplerError> {
    let nodes = d.checked_mul(n).and_then(|x| x.checked_add(1));
    match nodes {
        Some(x) if x < u32::MAX as usize => Ok(()),
        _ => Err(SamplerError::TooLarge { d, n }),
    }
}

/// Runs the chain for `n` steps from the one-node tree.
pub fn grow_to(d: usize, n: usize, seed: u64) -> Result<(DaryTree, OpCounters), SamplerError> {
    check_size(d, n)?;
    let mut state = GrowthState::new(d, seed)?;
    for _ in 0..n {
        state.grow_step()?;
    }
    let counters = state.counters();
    Ok((state.into_tree(), counters))
}

/// Lazily yields `t_0, t_1, …`, each a snapshot copy.
pub fn chain(d: usize, seed: u64) -> Result<Chain, SamplerError> {
    Ok(Chain {
        state: GrowthState::new(d, seed)?,
        started: false,
    })
}

#[derive(Debug)]
pub struct Chain {
    state: GrowthState,
    started: bool,
}

impl Iterator for Chain {
    type Item = DaryTree;

    fn next(&mut self) -> Option<DaryTree> {
        if self.started {
            self.state.grow_step().expect("growth step on a valid state");
        }
        self.started = true;
        Some(self.state.tree().clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn size_zero_forces_all_buds() {
        let t = DaryTree::new(4).unwrap();
        let mut rng = Prng::new(3);
        let mut marks = sample_mark_set(&mut rng, &t);
        marks.sort_by_key(|m| match m {
            MarkTarget::Bud(i) => *i,
            MarkTarget::Edge(_) => usize::MAX,
        });
        assert_eq!(marks, (0..3).map(MarkTarget::Bud).collect::<Vec<_>>());
    }

    #[test]
    fn mark_subsets_are_uniform() {
        let mut t = DaryTree::new(3).unwrap();
        t.expand_leaf(t.root()).unwrap();
        let mut rng = Prng::new(77);
        let trials = 100_000;
        let mut freq: HashMap<Vec<String>, usize> = HashMap::new();
        for _ in 0..trials {
            let mut key: Vec<String> = sample_mark_set(&mut rng, &t)
                .into_iter()
                .map(|m| format!("{m:?}"))
                .collect();
            key.sort();
            *freq.entry(key).or_default() += 1;
        }
        assert_eq!(freq.len(), 10);
        let p = 0.1;
        let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
        for (k, &c) in &freq {
            assert!((c as f64 - trials as f64 * p).abs() < 3.0 * sigma, "{k:?}: {c}");
        }
    }

    #[test]
    fn redraws_are_rare() {
        // extra draws per step are at most (d-1)^2 / (dn + d - 1) in expectation
        let d = 3;
        let mut state = GrowthState::new(d, 99).unwrap();
        for _ in 0..50 {
            state.grow_step().unwrap();
        }
        let before = state.counters().rng_draws;
        let steps = 2000;
        let mut bound = 0.0;
        for _ in 0..steps {
            let n = state.step();
            bound += ((d - 1) * (d - 1)) as f64 / (d * n + d - 1) as f64;
            state.grow_step().unwrap();
        }
        let extra = (state.counters().rng_draws - before) as f64 - (steps * d) as f64;
        assert!(extra <= bound + 3.0 * bound.sqrt() + 1.0, "{extra} vs {bound}");
    }

    #[test]
    fn first_steps() {
        let (t0, c0) = grow_to(3, 0, 1).unwrap();
        assert_eq!(t0.to_preorder_code(), vec![0]);
        assert_eq!(c0, OpCounters::default());
        for seed in 0..20 {
            let (t1, _) = grow_to(3, 1, seed).unwrap();
            assert_eq!(t1.to_preorder_code(), vec![3, 0, 0, 0]);
        }
    }

    #[test]
    fn second_step_hits_all_three_shapes_evenly() {
        let runs = 30_000;
        let mut freq: HashMap<Vec<usize>, usize> = HashMap::new();
        for seed in 0..runs {
            let (t, _) = grow_to(3, 2, seed).unwrap();
            *freq.entry(t.to_preorder_code()).or_default() += 1;
        }
        assert_eq!(freq.len(), 3);
        let expected = runs as f64 / 3.0;
        let stat: f64 = freq.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        // chi-square with 2 dof, 0.001 critical value
        assert!(stat < 13.82, "{stat}");
    }

    #[test]
    fn allocation_counter_tracks_steps() {
        for d in 2..6 {
            let mut state = GrowthState::new(d, 5).unwrap();
            for k in 1..=200u64 {
                state.grow_step().unwrap();
                let c = state.counters();
                assert_eq!(c.node_allocations, d as u64 * k);
            }
            assert_eq!(state.tree().internal_count(), state.step());
            state.tree().check_consistency().unwrap();
        }
    }

    #[test]
    fn chain_matches_grow_to() {
        let snapshots: Vec<_> = chain(3, 11).unwrap().take(30).collect();
        assert_eq!(snapshots[0].to_preorder_code(), vec![0]);
        for (k, t) in snapshots.iter().enumerate() {
            assert_eq!(t.internal_count(), k);
            assert_eq!(*t, grow_to(3, k, 11).unwrap().0);
        }
    }

    #[test]
    fn same_seed_same_tree() {
        let a = grow_to(4, 500, 8).unwrap();
        let b = grow_to(4, 500, 8).unwrap();
        assert_eq!(a.0.to_preorder_code(), b.0.to_preorder_code());
        assert_eq!(a.1, b.1);
    }

    #[test]
    fn replayed_orders_rebuild_the_same_chain() {
        let mut recorded = GrowthState::new(3, 21).unwrap();
        recorded.scratch_mut().record_orders();
        recorded.scratch_mut().enable_lex_timing();
        for _ in 0..3000 {
            recorded.grow_step().unwrap();
        }
        let log = recorded.scratch_mut().take_orders();
        assert!(!log.is_empty());
        assert!(recorded.lex_time().is_some());
        let mut replayed = GrowthState::new(3, 21).unwrap();
        replayed.scratch_mut().replay_orders(log);
        for _ in 0..3000 {
            replayed.grow_step().unwrap();
        }
        assert_eq!(replayed.tree(), recorded.tree());
        let (a, b) = (replayed.counters(), recorded.counters());
        assert_eq!(a.lex_letters_compared, 0);
        assert_eq!(
            (a.node_allocations, a.link_redirections, a.rng_draws),
            (b.node_allocations, b.link_redirections, b.rng_draws)
        );
        assert!(replayed.grow_step().is_err());
    }

    #[test]
    fn absurd_sizes_rejected() {
        assert_eq!(
            grow_to(3, usize::MAX / 2, 0).unwrap_err(),
            SamplerError::TooLarge { d: 3, n: usize::MAX / 2 }
        );
    }
}
