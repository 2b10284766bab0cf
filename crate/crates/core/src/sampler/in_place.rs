use std::time::{Duration, Instant};

use crate::bijections::{BijectionError, Letter};
use crate::marks::{EdgeMarkedTree, MarkTarget, Validate};
use crate::tree::{DaryTree, NodeId};

use super::OpCounters;

/// Reusable buffers and timing instrumentation for [`enlarge_in_place`].
///
/// The order of the marked edges can be logged and later replayed on the
/// same chain. A replay performs the same allocations, link rewrites and
/// draws and builds the same trees, but skips the root paths, which isolates
/// the constant-cost work for timing.
#[derive(Debug, Default)]
pub struct Scratch {
    paths: Vec<Vec<u32>>,
    lex_clock: Option<Duration>,
    log: Option<Vec<u32>>,
    replay: Option<(Vec<u32>, usize)>,
}

impl Scratch {
    /// Starts accumulating wall-clock time spent ordering marked edges.
    pub fn enable_lex_timing(&mut self) {
        self.lex_clock.get_or_insert(Duration::ZERO);
    }

    pub fn lex_time(&self) -> Option<Duration> {
        self.lex_clock
    }

    /// Starts logging the edge orders computed from root paths.
    pub fn record_orders(&mut self) {
        self.log.get_or_insert_with(Vec::new);
    }

    pub fn take_orders(&mut self) -> Vec<u32> {
        self.log.take().unwrap_or_default()
    }

    /// Uses a log from [`Scratch::take_orders`] instead of root paths.
    pub fn replay_orders(&mut self, log: Vec<u32>) {
        self.replay = Some((log, 0));
    }

    fn order(
        &mut self,
        tree: &DaryTree,
        edges: &[NodeId],
        counters: &mut OpCounters,
    ) -> Result<Vec<usize>, BijectionError> {
        if let Some((log, pos)) = self.replay.as_mut() {
            let end = *pos + edges.len();
            let slice = log
                .get(*pos..end)
                .ok_or_else(|| BijectionError::Corrupt("edge order log exhausted".into()))?;
            *pos = end;
            return Ok(slice.iter().map(|&i| i as usize).collect());
        }
        let started = self.lex_clock.map(|_| Instant::now());
        self.paths.resize_with(edges.len(), Vec::new);
        for (buf, &u) in self.paths.iter_mut().zip(edges) {
            tree.path_letters(u, buf);
            counters.lex_letters_compared += buf.len() as u64;
        }
        let mut order: Vec<usize> = (0..edges.len()).collect();
        let paths = &self.paths;
        order.sort_by(|&i, &j| paths[j].cmp(&paths[i]));
        if let (Some(clock), Some(t0)) = (self.lex_clock.as_mut(), started) {
            *clock += t0.elapsed();
        }
        if let Some(log) = self.log.as_mut() {
            log.extend(order.iter().map(|&i| i as u32));
        }
        Ok(order)
    }
}

/// `enlarge` performed by link rewrites inside one arena, without copying
/// any subtree. Returns the `d − 1` marked leaves of the result.
///
/// Exactly `d` nodes are allocated, in this order: one replacement leaf per
/// marked edge (edges by decreasing word), one leaf per marked bud
/// (increasing index), then the new root. Every other node keeps its id;
/// the node under a cut edge becomes the root of its fragment.
pub fn enlarge_in_place(
    tree: &mut DaryTree,
    marks: &[MarkTarget],
    a: Letter,
    counters: &mut OpCounters,
    scratch: &mut Scratch,
) -> Result<Vec<NodeId>, BijectionError> {
    let d = tree.arity();
    a.check(d)?;
    check_marks(tree, marks)?;

    let mut is_bud = vec![false; d];
    let mut edges: Vec<NodeId> = Vec::with_capacity(d - 1);
    for &m in marks {
        match m {
            MarkTarget::Bud(i) => is_bud[i] = true,
            MarkTarget::Edge(u) => edges.push(u),
        }
    }

    if edges.len() > 1 {
        let order = scratch.order(tree, &edges, counters)?;
        edges = order.into_iter().map(|i| edges[i]).collect();
    }

    let mut rem: Vec<usize> = (0..d).filter(|&i| !is_bud[i]).collect();
    let mut forest = vec![tree.root(); d];
    let mut marked = Vec::with_capacity(d - 1);
    for &u in &edges {
        let index = rem.pop().expect("one free position per marked edge plus one");
        let p = tree.parent(u).expect("edge child has a parent");
        let k = tree.slot(u).expect("edge child has a slot");
        let leaf = tree.raw_alloc_leaf();
        tree.raw_set_parent(leaf, p, k);
        tree.raw_set_child(p, k, leaf);
        counters.node_allocations += 1;
        counters.link_redirections += 1;
        forest[index] = u;
        marked.push(leaf);
    }
    let last = rem.pop().expect("smallest free position");
    debug_assert!(rem.is_empty());
    forest[last] = tree.root();
    for (i, _) in is_bud.iter().enumerate().filter(|(_, &b)| b) {
        let leaf = tree.raw_alloc_leaf();
        counters.node_allocations += 1;
        forest[i] = leaf;
        marked.push(leaf);
    }

    let shift = a.value() % d;
    forest.rotate_left(shift);
    let root = tree.raw_alloc_root(&forest);
    counters.node_allocations += 1;
    counters.link_redirections += d as u64;
    for (i, &c) in forest.iter().enumerate() {
        tree.raw_set_parent(c, root, i + 1);
        counters.link_redirections += 1;
    }
    Ok(marked)
}

fn check_marks(tree: &DaryTree, marks: &[MarkTarget]) -> Result<(), BijectionError> {
    let d = tree.arity();
    let cheap_ok = marks.len() == d - 1
        && marks.iter().enumerate().all(|(i, m)| {
            let valid = match *m {
                MarkTarget::Bud(b) => b < d - 1,
                MarkTarget::Edge(u) => tree.is_live(u) && u != tree.root(),
            };
            valid && !marks[..i].contains(m)
        });
    if cheap_ok {
        return Ok(());
    }
    // slow path only to build the violation report
    let x = EdgeMarkedTree::from_parts(tree.clone(), marks.to_vec());
    Err(BijectionError::InvalidInput(x.validate()))
}
