use std::collections::HashMap;

use itertools::Itertools;
use num_bigint::BigUint;

use crate::bijections::Letter;
use crate::marks::{EdgeMarkedTree, LeafMarkedTree, MarkTarget, MarkedForest};
use crate::tree::DaryTree;

use super::{binomial, count_trees, OracleError};

fn guard(objects: BigUint, limit: u64) -> Result<(), OracleError> {
    if objects > BigUint::from(limit) {
        return Err(OracleError::GuardExceeded {
            objects: objects.to_string(),
            limit,
        });
    }
    Ok(())
}

fn check_arity(d: usize) -> Result<(), OracleError> {
    if d < 2 {
        return Err(OracleError::InvalidParams(format!("arity {d} is below 2")));
    }
    Ok(())
}

/// All ways to write `total` as an ordered sum of `parts` non-negative terms.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn codes(d: usize, n: usize, memo: &mut HashMap<usize, Vec<Vec<usize>>>) -> Vec<Vec<usize>> {
    if let Some(c) = memo.get(&n) {
        return c.clone();
    }
    let out = if n == 0 {
        vec![vec![0]]
    } else {
        let mut out = Vec::new();
        for sizes in compositions(n - 1, d) {
            let parts: Vec<Vec<Vec<usize>>> = sizes.iter().map(|&k| codes(d, k, memo)).collect();
            for combo in parts.iter().map(|p| p.iter()).multi_cartesian_product() {
                let mut code = vec![d];
                for c in combo {
                    code.extend_from_slice(c);
                }
                out.push(code);
            }
        }
        out
    };
    memo.insert(n, out.clone());
    out
}

/// Every tree with `n` internal nodes, sorted by preorder code.
pub fn enumerate_trees(d: usize, n: usize, limit: u64) -> Result<Vec<DaryTree>, OracleError> {
    check_arity(d)?;
    guard(count_trees(d, n), limit)?;
    let mut all = codes(d, n, &mut HashMap::new());
    all.sort();
    Ok(all
        .iter()
        .map(|c| DaryTree::from_preorder_code(d, c).expect("generated codes are valid"))
        .collect())
}

/// `|EA_n^d × ⟦1,d⟧| = d · binom(dn+d−1, d−1) · a_n`.
pub fn count_inputs(d: usize, n: usize) -> BigUint {
    let d64 = d as u64;
    count_trees(d, n) * binomial(d64 * n as u64 + d64 - 1, d64 - 1) * d64
}

/// Every (edge-marked tree, letter) pair of size `n`. Trees come in
/// canonical order; mark sets are combinations of the edges (by preorder of
/// their child node) followed by the buds; letters run over `1..=d`.
pub fn enumerate_inputs(
    d: usize,
    n: usize,
    limit: u64,
) -> Result<Vec<(EdgeMarkedTree, Letter)>, OracleError> {
    check_arity(d)?;
    guard(count_inputs(d, n), limit)?;
    let mut out = Vec::new();
    for t in enumerate_trees(d, n, limit)? {
        let universe: Vec<MarkTarget> = t
            .preorder()
            .into_iter()
            .skip(1)
            .map(MarkTarget::Edge)
            .chain((0..d - 1).map(MarkTarget::Bud))
            .collect();
        for marks in universe.into_iter().combinations(d - 1) {
            let x = EdgeMarkedTree::new(t.clone(), marks)?;
            for a in 1..=d {
                out.push((x.clone(), Letter::new(a, d)?));
            }
        }
    }
    Ok(out)
}

/// Every tree of size `n` with `m` marked leaves.
pub fn enumerate_leaf_marked(
    d: usize,
    n: usize,
    m: usize,
    limit: u64,
) -> Result<Vec<LeafMarkedTree>, OracleError> {
    check_arity(d)?;
    let leaves = ((d - 1) * n + 1) as u64;
    guard(count_trees(d, n) * binomial(leaves, m as u64), limit)?;
    let mut out = Vec::new();
    for t in enumerate_trees(d, n, limit)? {
        for marked in t.leaves().into_iter().combinations(m) {
            out.push(LeafMarkedTree::new(t.clone(), marked)?);
        }
    }
    Ok(out)
}

/// Every ordered `d`-tuple of trees with `n` internal nodes in total and
/// `d − 1` marked leaves in total.
pub fn enumerate_forests(d: usize, n: usize, limit: u64) -> Result<Vec<MarkedForest>, OracleError> {
    check_arity(d)?;
    let leaves = ((d - 1) * n + d) as u64;
    guard(count_trees(d, n + 1) * binomial(leaves, d as u64 - 1), limit)?;
    let by_size: Vec<Vec<DaryTree>> = (0..=n)
        .map(|k| enumerate_trees(d, k, limit))
        .collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    for sizes in compositions(n, d) {
        let parts: Vec<&Vec<DaryTree>> = sizes.iter().map(|&k| &by_size[k]).collect();
        for combo in parts.iter().map(|p| p.iter()).multi_cartesian_product() {
            let slots: Vec<(usize, crate::tree::NodeId)> = combo
                .iter()
                .enumerate()
                .flat_map(|(i, t)| t.leaves().into_iter().map(move |l| (i, l)))
                .collect();
            for chosen in slots.into_iter().combinations(d - 1) {
                let trees = combo
                    .iter()
                    .enumerate()
                    .map(|(i, t)| {
                        let marked = chosen.iter().filter(|(j, _)| *j == i).map(|&(_, l)| l).collect();
                        LeafMarkedTree::new((*t).clone(), marked)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                out.push(MarkedForest::new(trees)?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::DEFAULT_LIMIT;

    #[test]
    fn fig_one_trees() {
        let ts = enumerate_trees(3, 2, DEFAULT_LIMIT).unwrap();
        let codes: Vec<Vec<usize>> = ts.iter().map(|t| t.to_preorder_code()).collect();
        assert_eq!(
            codes,
            vec![
                vec![3, 0, 0, 3, 0, 0, 0],
                vec![3, 0, 3, 0, 0, 0, 0],
                vec![3, 3, 0, 0, 0, 0, 0],
            ]
        );
    }

    #[test]
    fn lengths_match_counts() {
        for (d, n) in [(2, 3), (2, 6), (3, 4), (4, 3), (5, 2)] {
            let len = enumerate_trees(d, n, DEFAULT_LIMIT).unwrap().len();
            assert_eq!(BigUint::from(len), count_trees(d, n));
        }
    }

    #[test]
    fn input_counts() {
        assert_eq!(enumerate_inputs(3, 0, DEFAULT_LIMIT).unwrap().len(), 3);
        assert_eq!(enumerate_inputs(2, 1, DEFAULT_LIMIT).unwrap().len(), 6);
        assert_eq!(enumerate_inputs(3, 3, DEFAULT_LIMIT).unwrap().len(), 1980);
        assert_eq!(count_inputs(3, 3), BigUint::from(1980u32));
    }

    #[test]
    fn guard_refuses() {
        assert!(matches!(
            enumerate_trees(2, 30, DEFAULT_LIMIT),
            Err(OracleError::GuardExceeded { .. })
        ));
        assert!(matches!(
            enumerate_inputs(3, 3, 1000),
            Err(OracleError::GuardExceeded { .. })
        ));
    }

    #[test]
    fn leaf_marked_and_forests() {
        assert_eq!(enumerate_leaf_marked(3, 2, 2, DEFAULT_LIMIT).unwrap().len(), 3 * 10);
        // a_{n+1} · binom((d−1)n + d, d−1) at d=3, n=1: 3 · binom(5, 2)
        assert_eq!(enumerate_forests(3, 1, DEFAULT_LIMIT).unwrap().len(), 30);
    }
}
