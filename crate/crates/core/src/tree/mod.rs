//! Arena-backed d-ary plane trees.
//!
//! Every node has either zero or exactly `d` children. Children of a node are
//! stored as one contiguous block of `d` ids in a shared link table, so a node
//! record stays small and subtree moves are a handful of link rewrites. Freed
//! node slots and link blocks are recycled through free lists.

mod code;
mod word;

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

pub use code::{format_code, parse_code};
pub use word::{lex_compare, NodeWord};

const NONE: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("invalid arity {0}: need d >= 2")]
    InvalidArity(usize),
    #[error("node {0} is not a leaf")]
    NotALeaf(NodeId),
    #[error("the root cannot be detached")]
    CannotDetachRoot,
    #[error("node {0} is not live in this tree")]
    StaleNode(NodeId),
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("malformed preorder code: {0}")]
    MalformedCode(String),
    #[error("malformed node word: {0}")]
    MalformedWord(String),
    #[error("no node at word {0}")]
    NoSuchWord(String),
    #[error("inconsistent tree: {0}")]
    Inconsistent(String),
}

/// Index of a node slot in a tree's arena. Only meaningful for the tree that
/// produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy)]
struct Node {
    parent: u32,
    /// Child slot in `1..=d`; 0 for a parentless node.
    slot: u32,
    /// Children block index, or `NONE` for a leaf.
    block: u32,
    live: bool,
}

impl Node {
    fn fresh(parent: u32, slot: u32) -> Self {
        Node {
            parent,
            slot,
            block: NONE,
            live: true,
        }
    }
}

#[derive(Clone)]
pub struct DaryTree {
    arity: usize,
    nodes: Vec<Node>,
    links: Vec<NodeId>,
    free_nodes: Vec<u32>,
    free_blocks: Vec<u32>,
    root: NodeId,
    internal: usize,
    live: usize,
}

impl DaryTree {
    /// The single tree with no internal node.
    pub fn new(d: usize) -> Result<Self, TreeError> {
        if d < 2 || d > u32::MAX as usize {
            return Err(TreeError::InvalidArity(d));
        }
        Ok(DaryTree {
            arity: d,
            nodes: vec![Node::fresh(NONE, 0)],
            links: Vec::new(),
            free_nodes: Vec::new(),
            free_blocks: Vec::new(),
            root: NodeId(0),
            internal: 0,
            live: 1,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn internal_count(&self) -> usize {
        self.internal
    }

    pub fn node_count(&self) -> usize {
        self.live
    }

    pub fn leaf_count(&self) -> usize {
        self.live - self.internal
    }

    pub fn edge_count(&self) -> usize {
        self.live - 1
    }

    /// Number of arena slots, live or free.
    pub fn arena_len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_live(&self, u: NodeId) -> bool {
        self.nodes.get(u.index()).is_some_and(|n| n.live)
    }

    fn check_live(&self, u: NodeId) -> Result<&Node, TreeError> {
        match self.nodes.get(u.index()) {
            Some(n) if n.live => Ok(n),
            _ => Err(TreeError::StaleNode(u)),
        }
    }

    pub fn is_leaf(&self, u: NodeId) -> bool {
        self.nodes[u.index()].block == NONE
    }

    /// The `d` children in slot order, or an empty slice for a leaf.
    pub fn children(&self, u: NodeId) -> &[NodeId] {
        let b = self.nodes[u.index()].block;
        if b == NONE {
            &[]
        } else {
            let start = b as usize * self.arity;
            &self.links[start..start + self.arity]
        }
    }

    /// Child in slot `k` (1-based).
    pub fn child(&self, u: NodeId, k: usize) -> Option<NodeId> {
        self.children(u).get(k.wrapping_sub(1)).copied()
    }

    pub fn parent(&self, u: NodeId) -> Option<NodeId> {
        let p = self.nodes[u.index()].parent;
        (p != NONE).then_some(NodeId(p))
    }

    /// Child slot of `u` under its parent, `None` for the root.
    pub fn slot(&self, u: NodeId) -> Option<usize> {
        let n = &self.nodes[u.index()];
        (n.parent != NONE).then_some(n.slot as usize)
    }

    pub fn depth(&self, u: NodeId) -> usize {
        let mut depth = 0;
        let mut cur = self.nodes[u.index()].parent;
        while cur != NONE {
            depth += 1;
            cur = self.nodes[cur as usize].parent;
        }
        depth
    }

    /// Live node ids in arena order.
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.live)
            .map(|(i, _)| NodeId(i as u32))
    }

    /// Depth-first preorder, children in slot order. Equals lexicographic
    /// order of the node words.
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.live);
        let mut stack = vec![self.root];
        while let Some(u) = stack.pop() {
            out.push(u);
            stack.extend(self.children(u).iter().rev());
        }
        out
    }

    /// Leaves in lexicographic order.
    pub fn leaves(&self) -> Vec<NodeId> {
        self.preorder()
            .into_iter()
            .filter(|&u| self.is_leaf(u))
            .collect()
    }

    pub fn height(&self) -> usize {
        let mut best = 0;
        let mut stack = vec![(self.root, 0usize)];
        while let Some((u, h)) = stack.pop() {
            best = best.max(h);
            stack.extend(self.children(u).iter().map(|&c| (c, h + 1)));
        }
        best
    }

    /// Edge of rank `rank` in `0..d·n`, edges being identified with their
    /// child node and ranked by arena order of the non-root nodes.
    pub fn edge_by_rank(&self, rank: usize) -> Option<NodeId> {
        if rank >= self.edge_count() {
            return None;
        }
        if self.free_nodes.is_empty() {
            let idx = rank + usize::from(rank >= self.root.index());
            Some(NodeId(idx as u32))
        } else {
            self.nodes().filter(|&u| u != self.root).nth(rank)
        }
    }

    pub fn node_word(&self, u: NodeId) -> Result<NodeWord, TreeError> {
        self.check_live(u)?;
        let mut letters = Vec::new();
        self.path_letters(u, &mut letters);
        Ok(NodeWord::from_letters(letters))
    }

    /// Writes the root-to-`u` slot path into `buf` (cleared first).
    pub(crate) fn path_letters(&self, u: NodeId, buf: &mut Vec<u32>) {
        buf.clear();
        let mut cur = u.0;
        loop {
            let n = &self.nodes[cur as usize];
            if n.parent == NONE {
                break;
            }
            buf.push(n.slot);
            cur = n.parent;
        }
        buf.reverse();
    }

    pub fn node_at(&self, word: &NodeWord) -> Result<NodeId, TreeError> {
        let mut cur = self.root;
        for &l in word.letters() {
            cur = self
                .child(cur, l as usize)
                .ok_or_else(|| TreeError::NoSuchWord(word.to_string()))?;
        }
        Ok(cur)
    }

    fn alloc_node(&mut self, parent: u32, slot: u32) -> NodeId {
        self.live += 1;
        match self.free_nodes.pop() {
            Some(i) => {
                self.nodes[i as usize] = Node::fresh(parent, slot);
                NodeId(i)
            }
            None => {
                self.nodes.push(Node::fresh(parent, slot));
                NodeId(self.nodes.len() as u32 - 1)
            }
        }
    }

    fn alloc_block(&mut self) -> u32 {
        match self.free_blocks.pop() {
            Some(b) => b,
            None => {
                let b = (self.links.len() / self.arity) as u32;
                self.links
                    .extend(std::iter::repeat_n(NodeId(NONE), self.arity));
                b
            }
        }
    }

    /// Gives the leaf `u` its `d` fresh leaf children.
    pub fn expand_leaf(&mut self, u: NodeId) -> Result<(), TreeError> {
        self.check_live(u)?;
        if !self.is_leaf(u) {
            return Err(TreeError::NotALeaf(u));
        }
        let block = self.alloc_block();
        self.nodes[u.index()].block = block;
        for k in 0..self.arity {
            let c = self.alloc_node(u.0, k as u32 + 1);
            self.links[block as usize * self.arity + k] = c;
        }
        self.internal += 1;
        Ok(())
    }

    /// Copies the subtree of `self` rooted at `src` onto the leaf `at` of
    /// `dst`, reporting every `(source, copy)` pair to `on_map`.
    fn copy_into(
        &self,
        src: NodeId,
        dst: &mut DaryTree,
        at: NodeId,
        mut on_map: impl FnMut(NodeId, NodeId),
    ) {
        let mut stack = vec![(src, at)];
        while let Some((s, t)) = stack.pop() {
            on_map(s, t);
            if !self.is_leaf(s) {
                dst.expand_leaf(t).expect("copy target is a live leaf");
                let pairs: Vec<_> = self
                    .children(s)
                    .iter()
                    .copied()
                    .zip(dst.children(t).iter().copied())
                    .collect();
                stack.extend(pairs.into_iter().rev());
            }
        }
    }

    /// Frees every strict descendant of `u`, leaving `u` a leaf.
    fn prune_below(&mut self, u: NodeId) {
        let mut stack = vec![u];
        while let Some(v) = stack.pop() {
            let block = self.nodes[v.index()].block;
            if block == NONE {
                continue;
            }
            let start = block as usize * self.arity;
            for k in 0..self.arity {
                let c = self.links[start + k];
                stack.push(c);
            }
            for k in 0..self.arity {
                let c = self.links[start + k];
                if self.nodes[c.index()].block == NONE {
                    self.free_node(c);
                }
            }
            self.nodes[v.index()].block = NONE;
            self.free_blocks.push(block);
            self.internal -= 1;
            if v != u {
                self.free_node(v);
            }
        }
    }

    fn free_node(&mut self, v: NodeId) {
        let n = &mut self.nodes[v.index()];
        if n.live {
            n.live = false;
            n.parent = NONE;
            n.slot = 0;
            self.live -= 1;
            self.free_nodes.push(v.0);
        }
    }

    /// Removes the strict descendants of `u` and returns them as an
    /// independent tree rooted at a relabelled `u`. `u` stays in place as a
    /// leaf.
    pub fn detach_subtree(&mut self, u: NodeId) -> Result<DaryTree, TreeError> {
        self.detach_subtree_mapped(u).map(|(t, _)| t)
    }

    /// Like [`detach_subtree`](Self::detach_subtree), also returning
    /// `(old id, id in the detached tree)` for every moved node.
    pub fn detach_subtree_mapped(
        &mut self,
        u: NodeId,
    ) -> Result<(DaryTree, Vec<(NodeId, NodeId)>), TreeError> {
        let node = self.check_live(u)?;
        if node.parent == NONE {
            return Err(TreeError::CannotDetachRoot);
        }
        let mut sub = DaryTree::new(self.arity)?;
        let root = sub.root;
        let mut map = Vec::new();
        self.copy_into(u, &mut sub, root, |a, b| map.push((a, b)));
        self.prune_below(u);
        Ok((sub, map))
    }

    /// Plugs a copy of `sub` at the leaf `leaf`, whose node becomes the copy's
    /// root.
    pub fn graft(&mut self, leaf: NodeId, sub: &DaryTree) -> Result<(), TreeError> {
        self.graft_mapped(leaf, sub).map(|_| ())
    }

    /// Like [`graft`](Self::graft), returning `(id in sub, new id)` pairs.
    pub fn graft_mapped(
        &mut self,
        leaf: NodeId,
        sub: &DaryTree,
    ) -> Result<Vec<(NodeId, NodeId)>, TreeError> {
        if sub.arity != self.arity {
            return Err(TreeError::ArityMismatch {
                expected: self.arity,
                found: sub.arity,
            });
        }
        self.check_live(leaf)?;
        if !self.is_leaf(leaf) {
            return Err(TreeError::NotALeaf(leaf));
        }
        let mut map = Vec::with_capacity(sub.live);
        sub.copy_into(sub.root, self, leaf, |a, b| map.push((a, b)));
        Ok(map)
    }

    /// Copies the subtree at `u` into a fresh tree, leaving `self` untouched.
    pub fn subtree(&self, u: NodeId) -> Result<(DaryTree, HashMap<NodeId, NodeId>), TreeError> {
        self.check_live(u)?;
        let mut sub = DaryTree::new(self.arity)?;
        let root = sub.root;
        let mut map = HashMap::new();
        self.copy_into(u, &mut sub, root, |a, b| {
            map.insert(a, b);
        });
        Ok((sub, map))
    }

    pub fn to_preorder_code(&self) -> Vec<usize> {
        self.preorder()
            .into_iter()
            .map(|u| if self.is_leaf(u) { 0 } else { self.arity })
            .collect()
    }

    pub fn from_preorder_code(d: usize, code: &[usize]) -> Result<DaryTree, TreeError> {
        let mut tree = DaryTree::new(d)?;
        let mut pending = vec![tree.root];
        for (i, &c) in code.iter().enumerate() {
            let u = pending.pop().ok_or_else(|| {
                TreeError::MalformedCode(format!("trailing symbols from position {i}"))
            })?;
            if c == d {
                tree.expand_leaf(u)?;
                pending.extend(tree.children(u).iter().rev());
            } else if c != 0 {
                return Err(TreeError::MalformedCode(format!(
                    "child count {c} at position {i} is neither 0 nor {d}"
                )));
            }
        }
        if !pending.is_empty() {
            return Err(TreeError::MalformedCode(format!(
                "premature termination: {} leaves unspecified",
                pending.len()
            )));
        }
        Ok(tree)
    }

    /// Checks every structural invariant, including the node/leaf/edge
    /// counts `d·n+1`, `(d−1)·n+1` and `d·n`.
    pub fn check_consistency(&self) -> Result<(), TreeError> {
        let bad = |m: String| Err(TreeError::Inconsistent(m));
        let d = self.arity;
        let n = self.internal;
        if !self.is_live(self.root) || self.nodes[self.root.index()].parent != NONE {
            return bad("root is not a live parentless node".into());
        }
        let parentless = self
            .nodes()
            .filter(|&u| self.nodes[u.index()].parent == NONE)
            .count();
        if parentless != 1 {
            return bad(format!("{parentless} parentless nodes"));
        }
        let order = self.preorder();
        let mut internal = 0;
        for &u in &order {
            if !self.is_live(u) {
                return bad(format!("dead node {u} reachable"));
            }
            for (k, &c) in self.children(u).iter().enumerate() {
                let cn = &self.nodes[c.index()];
                if cn.parent != u.0 || cn.slot as usize != k + 1 {
                    return bad(format!("child {c} of {u} has wrong parent/slot"));
                }
            }
            internal += usize::from(!self.is_leaf(u));
        }
        if order.len() != self.live || internal != n {
            return bad(format!(
                "reachable {} vs live {}, internal {} vs {}",
                order.len(),
                self.live,
                internal,
                n
            ));
        }
        if self.node_count() != d * n + 1
            || self.leaf_count() != (d - 1) * n + 1
            || self.edge_count() != d * n
        {
            return bad("size identities violated".into());
        }
        Ok(())
    }

    // Link-level surgery for the in-place growth step. These keep the arena
    // consistent only once the caller has finished a full rewrite.

    pub(crate) fn raw_alloc_leaf(&mut self) -> NodeId {
        self.alloc_node(NONE, 0)
    }

    pub(crate) fn raw_set_parent(&mut self, u: NodeId, parent: NodeId, slot: usize) {
        let n = &mut self.nodes[u.index()];
        n.parent = parent.0;
        n.slot = slot as u32;
    }

    pub(crate) fn raw_set_child(&mut self, p: NodeId, slot: usize, child: NodeId) {
        let block = self.nodes[p.index()].block as usize;
        self.links[block * self.arity + slot - 1] = child;
    }

    /// Allocates a new internal root whose children are `children` in slot
    /// order; parent links of the children are not touched.
    pub(crate) fn raw_alloc_root(&mut self, children: &[NodeId]) -> NodeId {
        debug_assert_eq!(children.len(), self.arity);
        let r = self.alloc_node(NONE, 0);
        let block = self.alloc_block();
        self.nodes[r.index()].block = block;
        let start = block as usize * self.arity;
        self.links[start..start + self.arity].copy_from_slice(children);
        self.root = r;
        self.internal += 1;
        r
    }
}

impl PartialEq for DaryTree {
    fn eq(&self, other: &Self) -> bool {
        if self.arity != other.arity || self.live != other.live {
            return false;
        }
        let mut stack = vec![(self.root, other.root)];
        while let Some((a, b)) = stack.pop() {
            match (self.is_leaf(a), other.is_leaf(b)) {
                (true, true) => {}
                (false, false) => stack.extend(
                    self.children(a)
                        .iter()
                        .copied()
                        .zip(other.children(b).iter().copied()),
                ),
                _ => return false,
            }
        }
        true
    }
}

impl Eq for DaryTree {}

impl Hash for DaryTree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.arity.hash(state);
        self.to_preorder_code().hash(state);
    }
}

impl fmt::Debug for DaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DaryTree(d={}, {})", self.arity, format_code(&self.to_preorder_code()))
    }
}
