use crate::marks::{
    EdgeMarkedTree, LeafMarkedTree, MarkJson, MarkTarget, MarkedForest, MarkedTreeJson, Validate,
};
use crate::tree::{DaryTree, NodeId, NodeWord};

use super::{BijectionError, CutStep, Letter};

/// Splits an edge-marked tree at its marked edges into an excursion-type
/// forest. The letter is passed through unchanged.
///
/// Marked buds `b_j` become root-marked singletons at position `j`. The
/// remaining positions are filled from the largest down: each round detaches
/// the subtree under the lexicographically largest remaining marked edge
/// (with the marked leaves it carries) and leaves a marked leaf in its place.
/// What is left of the tree takes the smallest free position.
pub fn cut(input: &EdgeMarkedTree, a: Letter) -> Result<(MarkedForest, Letter), BijectionError> {
    a.check(input.arity())?;
    Ok((cut_forest(input, None)?, a))
}

pub(crate) fn cut_forest(
    input: &EdgeMarkedTree,
    mut trace: Option<&mut Vec<CutStep>>,
) -> Result<MarkedForest, BijectionError> {
    let violations = input.validate();
    if !violations.is_empty() {
        return Err(BijectionError::InvalidInput(violations));
    }
    let d = input.arity();
    let mut slots: Vec<Option<LeafMarkedTree>> = vec![None; d];
    let mut edges: Vec<(NodeWord, NodeId)> = Vec::new();
    for &m in input.marks() {
        match m {
            MarkTarget::Bud(i) => slots[i] = Some(LeafMarkedTree::marked_singleton(d)?),
            MarkTarget::Edge(u) => edges.push((input.tree().node_word(u)?, u)),
        }
    }
    edges.sort();
    let mut rem: Vec<usize> = (0..d).filter(|&i| slots[i].is_none()).collect();
    debug_assert_eq!(rem.len(), edges.len() + 1);

    let mut working = input.tree().clone();
    let mut leaf_marks: Vec<(NodeWord, NodeId)> = Vec::new();
    while let Some((word, u)) = edges.pop() {
        // everything below u is lexicographically larger, so no marked edge
        // can remain there
        debug_assert!(edges.iter().all(|(w, _)| !word.is_prefix_of(w)));
        let rem_before = rem.clone();
        let index = rem.pop().expect("one free position per marked edge plus one");
        let sub = working.detach_subtree(u)?;
        let mut carried = Vec::new();
        let mut kept = Vec::new();
        for (w, id) in leaf_marks.drain(..) {
            if word.is_prefix_of(&w) {
                let suffix = NodeWord::from_letters(w.letters()[word.len()..].to_vec());
                carried.push(sub.node_at(&suffix)?);
            } else {
                kept.push((w, id));
            }
        }
        leaf_marks = kept;
        leaf_marks.push((word.clone(), u));
        let fragment = LeafMarkedTree::new(sub, carried)?;
        if let Some(steps) = trace.as_deref_mut() {
            steps.push(CutStep {
                rem: rem_before,
                index,
                edge: word.to_string(),
                fragment: fragment.to_json(),
                working: working_json(&working, &edges, &leaf_marks, input),
            });
        }
        slots[index] = Some(fragment);
    }
    let last = rem.pop().expect("smallest free position");
    debug_assert!(rem.is_empty());
    let marked = leaf_marks.into_iter().map(|(_, id)| id).collect();
    slots[last] = Some(LeafMarkedTree::new(working, marked)?);

    Ok(MarkedForest::new(
        slots.into_iter().map(|s| s.expect("every position filled")).collect(),
    )?)
}

fn working_json(
    working: &DaryTree,
    edges: &[(NodeWord, NodeId)],
    leaf_marks: &[(NodeWord, NodeId)],
    input: &EdgeMarkedTree,
) -> MarkedTreeJson {
    let mut marks: Vec<MarkJson> = input
        .marks()
        .iter()
        .filter_map(|m| match m {
            MarkTarget::Bud(i) => Some(MarkJson::Bud { bud: *i }),
            MarkTarget::Edge(_) => None,
        })
        .collect();
    marks.extend(edges.iter().map(|(w, _)| MarkJson::Edge { edge: w.to_string() }));
    let mut leaves: Vec<&NodeWord> = leaf_marks.iter().map(|(w, _)| w).collect();
    leaves.sort();
    MarkedTreeJson {
        d: working.arity(),
        code: working.to_preorder_code(),
        marks,
        leaves: leaves.into_iter().map(|w| w.to_string()).collect(),
    }
}

/// Reassembles an excursion-type forest into an edge-marked tree.
///
/// Root-marked singletons become marked buds. The other trees are taken in
/// increasing position order; each one after the first is grafted at the
/// lexicographically first marked leaf of the tree built so far, whose edge
/// becomes marked.
pub fn cut_inv(f: &MarkedForest, a: Letter) -> Result<(EdgeMarkedTree, Letter), BijectionError> {
    let violations = f.validate();
    if !violations.is_empty() {
        return Err(BijectionError::InvalidInput(violations));
    }
    let d = f.arity();
    a.check(d)?;
    let s = f.leaf_sequence()?;
    if !s.is_excursion() {
        return Err(BijectionError::NotExcursion(s.to_string()));
    }
    let trees = f.trees();
    let mut marks: Vec<MarkTarget> = Vec::new();
    let mut rem = Vec::new();
    for (i, t) in trees.iter().enumerate() {
        if t.is_marked_singleton() {
            marks.push(MarkTarget::Bud(i));
        } else {
            rem.push(i);
        }
    }
    let first = &trees[rem[0]];
    let mut built = first.tree().clone();
    let mut leaf_marks: Vec<(NodeWord, NodeId)> = first
        .marked()
        .iter()
        .map(|&u| Ok((built.node_word(u)?, u)))
        .collect::<Result<_, BijectionError>>()?;

    for &k in &rem[1..] {
        let pos = (0..leaf_marks.len())
            .min_by(|&i, &j| leaf_marks[i].0.cmp(&leaf_marks[j].0))
            .ok_or_else(|| {
                BijectionError::Corrupt(format!("no marked leaf left to plug tree {k}"))
            })?;
        let (word, u) = leaf_marks.remove(pos);
        let piece = &trees[k];
        built.graft(u, piece.tree())?;
        marks.push(MarkTarget::Edge(u));
        for &m in piece.marked() {
            let w = word.concat(&piece.tree().node_word(m)?);
            let id = built.node_at(&w)?;
            leaf_marks.push((w, id));
        }
    }
    if !leaf_marks.is_empty() {
        return Err(BijectionError::Corrupt(format!(
            "{} marked leaves left after reassembly",
            leaf_marks.len()
        )));
    }
    Ok((EdgeMarkedTree::new(built, marks)?, a))
}
