//! The growth bijection and its inverse.
//!
//! `enlarge = add_root ∘ rotate ∘ cut` maps an edge-marked tree of size `n`
//! together with a letter in `1..=d` onto a tree of size `n + 1` with `d − 1`
//! marked leaves; `reduce = cut_inv ∘ rotate_inv ∘ add_root_inv` undoes it.
//! For `d = 2` the module also carries Rémy's insertion map and a third
//! variant, used only to cross-check counts.

mod add_root;
mod binary;
mod cut;
mod rotate;
mod trace;

use thiserror::Error;

use crate::marks::{EdgeMarkedTree, LeafMarkedTree, MarkError, Violation};
use crate::tree::TreeError;

pub use add_root::{add_root, add_root_inv};
pub use binary::{remy_enlarge, third_enlarge, BinaryLetter};
pub use cut::{cut, cut_inv};
pub use rotate::{rotate, rotate_inv};
pub use trace::{trace_enlarge, CutStep, Frame};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BijectionError {
    #[error("letter {letter} outside 1..={d}")]
    LetterOutOfRange { letter: usize, d: usize },
    #[error("invalid input: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidInput(Vec<Violation>),
    #[error("forest is not of excursion type (leaf sequence {0})")]
    NotExcursion(String),
    #[error("corrupt input: {0}")]
    Corrupt(String),
    #[error("cannot remove the root of a tree without internal nodes")]
    CannotRemoveRoot,
    #[error("binary-only map called with arity {0}")]
    NotBinary(usize),
    #[error(transparent)]
    Mark(#[from] MarkError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// A letter of the alphabet `1..=d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(usize);

impl Letter {
    pub fn new(value: usize, d: usize) -> Result<Self, BijectionError> {
        if value == 0 || value > d {
            return Err(BijectionError::LetterOutOfRange { letter: value, d });
        }
        Ok(Letter(value))
    }

    pub fn value(self) -> usize {
        self.0
    }

    pub(crate) fn check(self, d: usize) -> Result<(), BijectionError> {
        Letter::new(self.0, d).map(|_| ())
    }
}

pub fn enlarge(input: &EdgeMarkedTree, a: Letter) -> Result<LeafMarkedTree, BijectionError> {
    let (forest, a) = cut(input, a)?;
    let rotated = rotate(&forest, a)?;
    add_root(&rotated)
}

pub fn reduce(t: &LeafMarkedTree) -> Result<(EdgeMarkedTree, Letter), BijectionError> {
    let forest = add_root_inv(t)?;
    let (unrotated, a) = rotate_inv(&forest)?;
    cut_inv(&unrotated, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::marks::MarkTarget;
    use crate::tree::DaryTree;

    fn buds_only(d: usize) -> EdgeMarkedTree {
        let marks = (0..d - 1).map(MarkTarget::Bud).collect();
        EdgeMarkedTree::new(DaryTree::new(d).unwrap(), marks).unwrap()
    }

    fn leaf_words(t: &LeafMarkedTree) -> Vec<String> {
        t.marked_words().iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn letters_are_range_checked() {
        assert!(Letter::new(0, 3).is_err());
        assert!(Letter::new(4, 3).is_err());
        assert_eq!(Letter::new(3, 3).unwrap().value(), 3);
    }

    #[test]
    fn enlarge_from_root_only() {
        let x = buds_only(3);
        let t = enlarge(&x, Letter::new(3, 3).unwrap()).unwrap();
        assert_eq!(t.tree().to_preorder_code(), vec![3, 0, 0, 0]);
        assert_eq!(leaf_words(&t), ["1", "2"]);

        let t = enlarge(&x, Letter::new(1, 3).unwrap()).unwrap();
        assert_eq!(leaf_words(&t), ["1", "3"]);
    }

    #[test]
    fn reduce_of_star() {
        let mut tree = DaryTree::new(3).unwrap();
        tree.expand_leaf(tree.root()).unwrap();
        let marked = vec![tree.child(tree.root(), 1).unwrap(), tree.child(tree.root(), 2).unwrap()];
        let t = LeafMarkedTree::new(tree, marked).unwrap();
        let (x, a) = reduce(&t).unwrap();
        assert_eq!(x, buds_only(3));
        assert_eq!(a.value(), 3);
    }

    #[test]
    fn round_trips_over_all_letters() {
        for d in 2..6 {
            let x = buds_only(d);
            for a in 1..=d {
                let a = Letter::new(a, d).unwrap();
                let t = enlarge(&x, a).unwrap();
                assert_eq!(t.tree().internal_count(), 1);
                assert_eq!(t.mark_count(), d - 1);
                let (y, b) = reduce(&t).unwrap();
                assert_eq!((y, b), (x.clone(), a));
            }
        }
    }
}
