//! Binary-only growth maps used to cross-check the general bijection.

use crate::marks::{EdgeMarkedTree, LeafMarkedTree, MarkTarget, Validate};
use crate::tree::{DaryTree, NodeId, NodeWord};

use super::BijectionError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryLetter {
    Left,
    Right,
}

impl BinaryLetter {
    pub const ALL: [BinaryLetter; 2] = [BinaryLetter::Left, BinaryLetter::Right];

    /// Slot of the new marked leaf (or of the moved subtree) and slot of the
    /// pre-existing part.
    fn slots(self) -> (usize, usize) {
        match self {
            BinaryLetter::Right => (2, 1),
            BinaryLetter::Left => (1, 2),
        }
    }
}

fn single_mark(input: &EdgeMarkedTree) -> Result<MarkTarget, BijectionError> {
    if input.arity() != 2 {
        return Err(BijectionError::NotBinary(input.arity()));
    }
    let violations = input.validate();
    if !violations.is_empty() {
        return Err(BijectionError::InvalidInput(violations));
    }
    Ok(input.marks()[0])
}

/// New root whose `a`-side child is a fresh marked leaf and whose other
/// child is the old tree.
fn new_root_with_leaf(tree: &DaryTree, a: BinaryLetter) -> Result<LeafMarkedTree, BijectionError> {
    let (new_side, old_side) = a.slots();
    let mut t = DaryTree::new(2)?;
    let root = t.root();
    t.expand_leaf(root)?;
    t.graft(t.child(root, old_side).expect("internal"), tree)?;
    let leaf = t.child(root, new_side).expect("internal");
    Ok(LeafMarkedTree::new(t, vec![leaf])?)
}

/// Rémy's insertion: a new internal node is placed in the middle of the
/// marked edge, with a fresh marked leaf on side `a` and the old subtree on
/// the other side. A marked bud does the same above the root.
pub fn remy_enlarge(input: &EdgeMarkedTree, a: BinaryLetter) -> Result<LeafMarkedTree, BijectionError> {
    match single_mark(input)? {
        MarkTarget::Bud(_) => new_root_with_leaf(input.tree(), a),
        MarkTarget::Edge(u) => {
            let (new_side, old_side) = a.slots();
            let mut t = input.tree().clone();
            let sub = t.detach_subtree(u)?;
            t.expand_leaf(u)?;
            t.graft(t.child(u, old_side).expect("internal"), &sub)?;
            let leaf = t.child(u, new_side).expect("internal");
            Ok(LeafMarkedTree::new(t, vec![leaf])?)
        }
    }
}

/// Third binary variant: the subtree `T` under the marked edge `(u, p(u))`
/// is detached and `u` is marked; a new node `v` is inserted on the edge
/// above `p(u)` (a new root when `p(u)` is the root) and `T` hangs from the
/// `a`-side child of `v`. A marked bud behaves as in Rémy's map.
pub fn third_enlarge(input: &EdgeMarkedTree, a: BinaryLetter) -> Result<LeafMarkedTree, BijectionError> {
    let u = match single_mark(input)? {
        MarkTarget::Bud(_) => return new_root_with_leaf(input.tree(), a),
        MarkTarget::Edge(u) => u,
    };
    let (moved_side, old_side) = a.slots();
    let mut t = input.tree().clone();
    let detached = t.detach_subtree(u)?;
    let p = t.parent(u).expect("edge child has a parent");
    let u_word = t.node_word(u)?;
    let p_word = t.node_word(p)?;
    let v: NodeId;
    if t.parent(p).is_none() {
        let old = t;
        t = DaryTree::new(2)?;
        v = t.root();
        t.expand_leaf(v)?;
        t.graft(t.child(v, old_side).expect("internal"), &old)?;
    } else {
        let above = t.detach_subtree(p)?;
        v = p;
        t.expand_leaf(v)?;
        t.graft(t.child(v, old_side).expect("internal"), &above)?;
    }
    t.graft(t.child(v, moved_side).expect("internal"), &detached)?;
    let mut letters = p_word.letters().to_vec();
    letters.push(old_side as u32);
    letters.push(*u_word.letters().last().expect("u is not the root"));
    let marked = t.node_at(&NodeWord::from_letters(letters))?;
    Ok(LeafMarkedTree::new(t, vec![marked])?)
}
