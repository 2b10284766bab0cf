//! Uniform random d-ary trees grown one internal node at a time.
//!
//! A uniform tree with `n` internal nodes plus `d − 1` uniformly chosen marks
//! among its edges and `d − 1` extra buds, together with a uniform letter in
//! `1..=d`, is mapped bijectively onto a tree with `n + 1` internal nodes and
//! `d − 1` marked leaves. Forgetting the marks therefore carries the uniform
//! law on trees of size `n` to the uniform law on trees of size `n + 1`.
//!
//! The map is the composition of three simpler bijections: [`bijections::cut`]
//! splits the tree at the marked edges into an excursion-type forest,
//! [`bijections::rotate`] shifts the forest cyclically by the letter, and
//! [`bijections::add_root`] hangs the forest under a new root.

pub mod bijections;
pub mod cli;
pub mod format;
pub mod marks;
pub mod oracle;
pub mod sampler;
pub mod tree;
pub mod walks;

pub use tree::{DaryTree, NodeId, NodeWord, TreeError};
