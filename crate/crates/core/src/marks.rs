//! Edge-marked trees, leaf-marked trees and leaf-marked forests.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tree::{DaryTree, NodeId, NodeWord, TreeError};
use crate::walks::LukWalk;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MarkError {
    #[error("expected {expected} marks, found {found}")]
    MarkCount { expected: usize, found: usize },
    #[error("invalid marked object: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// One broken invariant of a marked object. Reported as data by
/// [`Validate::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MarkCount { expected: usize, found: usize },
    DuplicateMark(String),
    BudOutOfRange { index: usize, buds: usize },
    DeadNode(NodeId),
    RootEdge,
    NotALeaf(NodeId),
    ForestLength { expected: usize, found: usize },
    ArityMismatch { position: usize, expected: usize, found: usize },
    Tree(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MarkCount { expected, found } => {
                write!(f, "expected {expected} marks, found {found}")
            }
            Violation::DuplicateMark(m) => write!(f, "duplicate mark {m}"),
            Violation::BudOutOfRange { index, buds } => {
                write!(f, "bud b_{index} out of range (only {buds} buds)")
            }
            Violation::DeadNode(u) => write!(f, "node {u} is not in the tree"),
            Violation::RootEdge => write!(f, "the root carries no edge"),
            Violation::NotALeaf(u) => write!(f, "marked node {u} is not a leaf"),
            Violation::ForestLength { expected, found } => {
                write!(f, "forest has {found} trees, expected {expected}")
            }
            Violation::ArityMismatch { position, expected, found } => {
                write!(f, "tree {position} has arity {found}, expected {expected}")
            }
            Violation::Tree(m) => write!(f, "{m}"),
        }
    }
}

pub trait Validate {
    /// Empty iff every invariant of the type holds.
    fn validate(&self) -> Vec<Violation>;
}

/// An element of `E(t) ∪ Buds(d)`: one of the `d − 1` extra buds
/// `b_0 … b_{d−2}`, or the edge from a non-root node to its parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MarkTarget {
    Bud(usize),
    Edge(NodeId),
}

/// Arena-independent form of a [`MarkTarget`]. The derived order (buds by
/// index, then edges by word) is the canonical mark order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MarkKey {
    Bud(usize),
    Edge(NodeWord),
}

impl fmt::Display for MarkKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MarkKey::Bud(i) => write!(f, "b_{i}"),
            MarkKey::Edge(w) => write!(f, "edge {w}"),
        }
    }
}

/// A tree with exactly `d − 1` marks among its edges and the buds.
#[derive(Debug, Clone)]
pub struct EdgeMarkedTree {
    tree: DaryTree,
    marks: Vec<MarkTarget>,
}

impl EdgeMarkedTree {
    /// Validates and stores the marks in canonical order.
    pub fn new(tree: DaryTree, marks: Vec<MarkTarget>) -> Result<Self, MarkError> {
        let mut x = EdgeMarkedTree { tree, marks };
        let violations = x.validate();
        if !violations.is_empty() {
            return Err(MarkError::Invalid(violations));
        }
        let mut keyed: Vec<_> = x.marks.iter().map(|&m| (x.mark_key(m), m)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        x.marks = keyed.into_iter().map(|(_, m)| m).collect();
        Ok(x)
    }

    /// Unvalidated constructor; see [`Validate::validate`].
    pub fn from_parts(tree: DaryTree, marks: Vec<MarkTarget>) -> Self {
        EdgeMarkedTree { tree, marks }
    }

    pub fn tree(&self) -> &DaryTree {
        &self.tree
    }

    pub fn marks(&self) -> &[MarkTarget] {
        &self.marks
    }

    pub fn arity(&self) -> usize {
        self.tree.arity()
    }

    pub fn into_parts(self) -> (DaryTree, Vec<MarkTarget>) {
        (self.tree, self.marks)
    }

    fn mark_key(&self, m: MarkTarget) -> MarkKey {
        match m {
            MarkTarget::Bud(i) => MarkKey::Bud(i),
            MarkTarget::Edge(u) => MarkKey::Edge(
                self.tree.node_word(u).expect("validated edge mark is live"),
            ),
        }
    }

    pub fn mark_keys(&self) -> Vec<MarkKey> {
        let mut keys: Vec<_> = self.marks.iter().map(|&m| self.mark_key(m)).collect();
        keys.sort();
        keys
    }

    /// Structural identity: arity, preorder code and marks as words.
    pub fn key(&self) -> (usize, Vec<usize>, Vec<MarkKey>) {
        (self.arity(), self.tree.to_preorder_code(), self.mark_keys())
    }

    pub fn to_json(&self) -> MarkedTreeJson {
        MarkedTreeJson {
            d: self.arity(),
            code: self.tree.to_preorder_code(),
            marks: self
                .mark_keys()
                .into_iter()
                .map(|k| match k {
                    MarkKey::Bud(i) => MarkJson::Bud { bud: i },
                    MarkKey::Edge(w) => MarkJson::Edge { edge: w.to_string() },
                })
                .collect(),
            leaves: Vec::new(),
        }
    }

    pub fn from_json(json: &MarkedTreeJson) -> Result<Self, MarkError> {
        let tree = DaryTree::from_preorder_code(json.d, &json.code)?;
        if !json.leaves.is_empty() {
            return Err(MarkError::Invalid(vec![Violation::Tree(
                "edge-marked tree carries leaf marks".into(),
            )]));
        }
        let marks = json
            .marks
            .iter()
            .map(|m| match m {
                MarkJson::Bud { bud } => Ok(MarkTarget::Bud(*bud)),
                MarkJson::Edge { edge } => {
                    let w: NodeWord = edge.parse()?;
                    Ok(MarkTarget::Edge(tree.node_at(&w)?))
                }
            })
            .collect::<Result<Vec<_>, MarkError>>()?;
        EdgeMarkedTree::new(tree, marks)
    }
}

impl Validate for EdgeMarkedTree {
    fn validate(&self) -> Vec<Violation> {
        let d = self.tree.arity();
        let mut out = Vec::new();
        if self.marks.len() != d - 1 {
            out.push(Violation::MarkCount {
                expected: d - 1,
                found: self.marks.len(),
            });
        }
        let mut seen = HashSet::new();
        for &m in &self.marks {
            match m {
                MarkTarget::Bud(i) if i > d - 2 => {
                    out.push(Violation::BudOutOfRange { index: i, buds: d - 1 })
                }
                MarkTarget::Edge(u) if !self.tree.is_live(u) => out.push(Violation::DeadNode(u)),
                MarkTarget::Edge(u) if u == self.tree.root() => out.push(Violation::RootEdge),
                _ => {}
            }
            if !seen.insert(m) {
                out.push(Violation::DuplicateMark(format!("{m:?}")));
            }
        }
        out
    }
}

impl PartialEq for EdgeMarkedTree {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for EdgeMarkedTree {}

/// A tree with a set of distinguished leaves.
#[derive(Debug, Clone)]
pub struct LeafMarkedTree {
    tree: DaryTree,
    marked: Vec<NodeId>,
}

impl LeafMarkedTree {
    /// Validates and sorts the marked leaves lexicographically.
    pub fn new(tree: DaryTree, marked: Vec<NodeId>) -> Result<Self, MarkError> {
        let mut x = LeafMarkedTree { tree, marked };
        let violations = x.validate();
        if !violations.is_empty() {
            return Err(MarkError::Invalid(violations));
        }
        let mut keyed: Vec<_> = x
            .marked
            .iter()
            .map(|&u| (x.tree.node_word(u).expect("validated"), u))
            .collect();
        keyed.sort();
        x.marked = keyed.into_iter().map(|(_, u)| u).collect();
        Ok(x)
    }

    pub fn from_parts(tree: DaryTree, marked: Vec<NodeId>) -> Self {
        LeafMarkedTree { tree, marked }
    }

    /// Tree with no marks.
    pub fn unmarked(tree: DaryTree) -> Self {
        LeafMarkedTree { tree, marked: Vec::new() }
    }

    /// The one-node tree whose root is marked.
    pub fn marked_singleton(d: usize) -> Result<Self, MarkError> {
        let tree = DaryTree::new(d)?;
        let root = tree.root();
        Ok(LeafMarkedTree { tree, marked: vec![root] })
    }

    pub fn is_marked_singleton(&self) -> bool {
        self.tree.internal_count() == 0 && self.marked.len() == 1
    }

    pub fn tree(&self) -> &DaryTree {
        &self.tree
    }

    pub fn marked(&self) -> &[NodeId] {
        &self.marked
    }

    pub fn mark_count(&self) -> usize {
        self.marked.len()
    }

    pub fn into_parts(self) -> (DaryTree, Vec<NodeId>) {
        (self.tree, self.marked)
    }

    pub fn marked_words(&self) -> Vec<NodeWord> {
        let mut w: Vec<_> = self
            .marked
            .iter()
            .map(|&u| self.tree.node_word(u).expect("marked leaf is live"))
            .collect();
        w.sort();
        w
    }

    pub fn key(&self) -> (usize, Vec<usize>, Vec<NodeWord>) {
        (self.tree.arity(), self.tree.to_preorder_code(), self.marked_words())
    }

    pub fn to_json(&self) -> MarkedTreeJson {
        MarkedTreeJson {
            d: self.tree.arity(),
            code: self.tree.to_preorder_code(),
            marks: Vec::new(),
            leaves: self.marked_words().iter().map(|w| w.to_string()).collect(),
        }
    }

    pub fn from_json(json: &MarkedTreeJson) -> Result<Self, MarkError> {
        let tree = DaryTree::from_preorder_code(json.d, &json.code)?;
        if !json.marks.is_empty() {
            return Err(MarkError::Invalid(vec![Violation::Tree(
                "leaf-marked tree carries edge marks".into(),
            )]));
        }
        let marked = json
            .leaves
            .iter()
            .map(|s| {
                let w: NodeWord = s.parse()?;
                Ok(tree.node_at(&w)?)
            })
            .collect::<Result<Vec<_>, MarkError>>()?;
        LeafMarkedTree::new(tree, marked)
    }
}

impl Validate for LeafMarkedTree {
    fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for &u in &self.marked {
            if !self.tree.is_live(u) {
                out.push(Violation::DeadNode(u));
            } else if !self.tree.is_leaf(u) {
                out.push(Violation::NotALeaf(u));
            }
            if !seen.insert(u) {
                out.push(Violation::DuplicateMark(u.to_string()));
            }
        }
        out
    }
}

impl PartialEq for LeafMarkedTree {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for LeafMarkedTree {}

/// Ordered sequence of `d` leaf-marked trees, positions `0..d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedForest {
    trees: Vec<LeafMarkedTree>,
}

impl MarkedForest {
    /// Checks length and arities; mark totals are checked where required.
    pub fn new(trees: Vec<LeafMarkedTree>) -> Result<Self, MarkError> {
        let f = MarkedForest { trees };
        let violations: Vec<_> = f
            .validate()
            .into_iter()
            .filter(|v| !matches!(v, Violation::MarkCount { .. }))
            .collect();
        if !violations.is_empty() {
            return Err(MarkError::Invalid(violations));
        }
        Ok(f)
    }

    pub fn from_parts(trees: Vec<LeafMarkedTree>) -> Self {
        MarkedForest { trees }
    }

    pub fn arity(&self) -> usize {
        self.trees[0].tree().arity()
    }

    pub fn trees(&self) -> &[LeafMarkedTree] {
        &self.trees
    }

    pub fn into_trees(self) -> Vec<LeafMarkedTree> {
        self.trees
    }

    pub fn mark_counts(&self) -> Vec<usize> {
        self.trees.iter().map(|t| t.mark_count()).collect()
    }

    pub fn total_marks(&self) -> usize {
        self.trees.iter().map(|t| t.mark_count()).sum()
    }

    pub fn internal_count(&self) -> usize {
        self.trees.iter().map(|t| t.tree().internal_count()).sum()
    }

    pub fn key(&self) -> Vec<(usize, Vec<usize>, Vec<NodeWord>)> {
        self.trees.iter().map(|t| t.key()).collect()
    }

    /// The walk whose `i`-th increment is (marks in tree `i`) − 1.
    pub fn leaf_sequence(&self) -> Result<LukWalk, MarkError> {
        let d = self.arity();
        let total = self.total_marks();
        if total != d - 1 {
            return Err(MarkError::MarkCount {
                expected: d - 1,
                found: total,
            });
        }
        let inc: Vec<i64> = self.trees.iter().map(|t| t.mark_count() as i64 - 1).collect();
        Ok(LukWalk::from_increments(&inc).expect("d-1 marks give a walk ending at -1"))
    }

    pub fn is_excursion_forest(&self) -> Result<bool, MarkError> {
        Ok(self.leaf_sequence()?.is_excursion())
    }

    pub fn to_json(&self) -> Vec<MarkedTreeJson> {
        self.trees.iter().map(|t| t.to_json()).collect()
    }
}

impl Validate for MarkedForest {
    fn validate(&self) -> Vec<Violation> {
        let Some(first) = self.trees.first() else {
            return vec![Violation::ForestLength { expected: 2, found: 0 }];
        };
        let d = first.tree().arity();
        let mut out = Vec::new();
        if self.trees.len() != d {
            out.push(Violation::ForestLength {
                expected: d,
                found: self.trees.len(),
            });
        }
        for (i, t) in self.trees.iter().enumerate() {
            if t.tree().arity() != d {
                out.push(Violation::ArityMismatch {
                    position: i,
                    expected: d,
                    found: t.tree().arity(),
                });
            }
            out.extend(t.validate());
        }
        let total = self.total_marks();
        if total != d - 1 {
            out.push(Violation::MarkCount {
                expected: d - 1,
                found: total,
            });
        }
        out
    }
}

/// Debug serialization shared by edge-marked and leaf-marked trees.
/// `code` is the preorder code; words use the [`NodeWord`] text form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedTreeJson {
    pub d: usize,
    pub code: Vec<usize>,
    #[serde(default)]
    pub marks: Vec<MarkJson>,
    #[serde(default)]
    pub leaves: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MarkJson {
    Bud { bud: usize },
    Edge { edge: String },
}
