use crate::marks::{LeafMarkedTree, MarkError, MarkedForest, Validate};
use crate::tree::{DaryTree, NodeWord};

use super::BijectionError;

/// Hangs the forest under a new root: position `i` becomes the subtree at
/// child slot `i + 1`. Marks are carried over.
pub fn add_root(f: &MarkedForest) -> Result<LeafMarkedTree, BijectionError> {
    let violations = f.validate();
    if !violations.is_empty() {
        return Err(BijectionError::InvalidInput(violations));
    }
    let mut tree = DaryTree::new(f.arity())?;
    let root = tree.root();
    tree.expand_leaf(root)?;
    let mut marked = Vec::with_capacity(f.total_marks());
    for (i, piece) in f.trees().iter().enumerate() {
        let slot = i as u32 + 1;
        let at = tree.child(root, i + 1).expect("root is internal");
        tree.graft(at, piece.tree())?;
        for &m in piece.marked() {
            let w = NodeWord::from_letters(vec![slot]).concat(&piece.tree().node_word(m)?);
            marked.push(tree.node_at(&w)?);
        }
    }
    Ok(LeafMarkedTree::new(tree, marked)?)
}

/// The `d` root subtrees in child order, with their marks.
pub fn add_root_inv(t: &LeafMarkedTree) -> Result<MarkedForest, BijectionError> {
    let tree = t.tree();
    let d = tree.arity();
    if tree.internal_count() == 0 {
        return Err(BijectionError::CannotRemoveRoot);
    }
    if t.mark_count() != d - 1 {
        return Err(MarkError::MarkCount {
            expected: d - 1,
            found: t.mark_count(),
        }
        .into());
    }
    let words = t.marked_words();
    let mut pieces = Vec::with_capacity(d);
    for (i, &c) in tree.children(tree.root()).iter().enumerate() {
        let (sub, _) = tree.subtree(c)?;
        let marked = words
            .iter()
            .filter(|w| w.letters()[0] as usize == i + 1)
            .map(|w| sub.node_at(&NodeWord::from_letters(w.letters()[1..].to_vec())))
            .collect::<Result<Vec<_>, _>>()?;
        pieces.push(LeafMarkedTree::new(sub, marked)?);
    }
    Ok(MarkedForest::new(pieces)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(d: usize, marked_slots: &[usize]) -> LeafMarkedTree {
        let mut t = DaryTree::new(d).unwrap();
        t.expand_leaf(t.root()).unwrap();
        let marked = marked_slots.iter().map(|&k| t.child(t.root(), k).unwrap()).collect();
        LeafMarkedTree::new(t, marked).unwrap()
    }

    fn singleton(marked: bool) -> LeafMarkedTree {
        if marked {
            LeafMarkedTree::marked_singleton(3).unwrap()
        } else {
            LeafMarkedTree::unmarked(DaryTree::new(3).unwrap())
        }
    }

    #[test]
    fn add_root_of_singletons() {
        let f = MarkedForest::new(vec![singleton(true), singleton(true), singleton(false)]).unwrap();
        let t = add_root(&f).unwrap();
        assert_eq!(t, star(3, &[1, 2]));
        assert_eq!(t.tree().internal_count(), f.internal_count() + 1);
        assert_eq!(add_root_inv(&t).unwrap(), f);
    }

    #[test]
    fn decompose_star() {
        let f = add_root_inv(&star(3, &[1, 3])).unwrap();
        let expected =
            MarkedForest::new(vec![singleton(true), singleton(false), singleton(true)]).unwrap();
        assert_eq!(f, expected);
        assert_eq!(f.internal_count(), 0);
    }

    #[test]
    fn nested_marks_survive() {
        let t = DaryTree::from_preorder_code(2, &[2, 2, 0, 0, 2, 0, 2, 0, 0]).unwrap();
        let w: NodeWord = "221".parse().unwrap();
        let u = t.node_at(&w).unwrap();
        let x = LeafMarkedTree::new(t, vec![u]).unwrap();
        let f = add_root_inv(&x).unwrap();
        assert_eq!(f.mark_counts(), vec![0, 1]);
        assert_eq!(f.trees()[1].marked_words()[0].to_string(), "21");
        assert_eq!(add_root(&f).unwrap(), x);
    }

    #[test]
    fn root_only_cannot_be_reduced() {
        let t = LeafMarkedTree::marked_singleton(2).unwrap();
        assert_eq!(add_root_inv(&t), Err(BijectionError::CannotRemoveRoot));
    }
}
