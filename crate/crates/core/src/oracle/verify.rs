use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::bijections::{
    cut, enlarge, reduce, remy_enlarge, rotate, third_enlarge, BinaryLetter, Letter,
};
use crate::marks::{EdgeMarkedTree, LeafMarkedTree};
use crate::sampler::{enlarge_in_place, OpCounters, Scratch};
use crate::walks::enumerate_walks;

use super::{
    binomial, count_inputs, count_trees, enumerate_forests, enumerate_inputs,
    enumerate_leaf_marked, OracleError, Report,
};

fn witness(x: &EdgeMarkedTree, a: Letter, reason: impl Into<String>) -> Value {
    json!({"input": x.to_json(), "letter": a.value(), "reason": reason.into()})
}

/// Number of leaf markings each tree of size `n + 1` receives.
fn multiplicity(d: usize, n: usize) -> BigUint {
    let d = d as u64;
    binomial((d - 1) * (n as u64 + 1) + 1, d - 1)
}

/// Exhaustive check that `enlarge` is a bijection from size-`n` inputs onto
/// trees of size `n + 1` with `d − 1` marked leaves: distinct images, the
/// right image count, constant multiplicity per underlying tree, `reduce`
/// inverting it, and every cut producing an excursion-type forest.
pub fn verify_enlarge_bijection(d: usize, n: usize, limit: u64) -> Result<Report, OracleError> {
    let mut report = Report::new("enlarge_bijection", &[("d", json!(d)), ("n", json!(n))]);
    let inputs = enumerate_inputs(d, n, limit)?;
    let mut images = HashSet::with_capacity(inputs.len());
    let mut per_tree: HashMap<Vec<usize>, u64> = HashMap::new();
    let mut excursions = 0u64;
    let mut round_trips = 0u64;
    for (x, a) in &inputs {
        match cut(x, *a) {
            Ok((f, _)) if f.is_excursion_forest()? => excursions += 1,
            Ok(_) => report.fail(witness(x, *a, "cut output is not an excursion-type forest")),
            Err(e) => report.fail(witness(x, *a, format!("cut failed: {e}"))),
        }
        let y = match enlarge(x, *a) {
            Ok(y) => y,
            Err(e) => {
                report.fail(witness(x, *a, format!("enlarge failed: {e}")));
                continue;
            }
        };
        if !images.insert(y.key()) {
            report.fail(witness(x, *a, "image already produced by another input"));
        }
        *per_tree.entry(y.tree().to_preorder_code()).or_default() += 1;
        match reduce(&y) {
            Ok((bx, ba)) if bx == *x && ba == *a => round_trips += 1,
            Ok(_) => report.fail(witness(x, *a, "reduce(enlarge(x)) differs from x")),
            Err(e) => report.fail(witness(x, *a, format!("reduce failed: {e}"))),
        }
    }
    let mult = multiplicity(d, n);
    let trees = count_trees(d, n + 1);
    let expected_images = &mult * &trees;
    if BigUint::from(images.len()) != expected_images {
        report.fail(json!({"reason": "image count", "found": images.len(), "expected": expected_images.to_string()}));
    }
    if BigUint::from(per_tree.len()) != trees {
        report.fail(json!({"reason": "trees hit", "found": per_tree.len(), "expected": trees.to_string()}));
    }
    let mut codes: Vec<_> = per_tree.iter().collect();
    codes.sort();
    if let Some((code, hits)) = codes.into_iter().find(|(_, &h)| BigUint::from(h) != mult) {
        report.fail(json!({"reason": "multiplicity", "tree": code, "found": hits, "expected": mult.to_string()}));
    }
    report.count("inputs", inputs.len());
    report.count("images", images.len());
    report.count("expected_images", expected_images);
    report.count("trees", per_tree.len());
    report.count("multiplicity", mult);
    report.count("round_trips", round_trips);
    report.count("excursion_forests", excursions);
    Ok(report)
}

/// The one-step law of the sampler, computed exactly: runs the in-place
/// growth step on every (tree, mark set, letter) of size `k` and checks that
/// each tree of size `k + 1` is produced the same number of times.
pub fn verify_pushforward(d: usize, k: usize, limit: u64) -> Result<Report, OracleError> {
    let mut report = Report::new("one_step_pushforward", &[("d", json!(d)), ("k", json!(k))]);
    let inputs = enumerate_inputs(d, k, limit)?;
    let mut per_tree: HashMap<Vec<usize>, u64> = HashMap::new();
    let mut scratch = Scratch::default();
    let mut counters = OpCounters::default();
    for (x, a) in &inputs {
        let mut t = x.tree().clone();
        match enlarge_in_place(&mut t, x.marks(), *a, &mut counters, &mut scratch) {
            Ok(_) => *per_tree.entry(t.to_preorder_code()).or_default() += 1,
            Err(e) => report.fail(witness(x, *a, format!("growth step failed: {e}"))),
        }
    }
    let mult = multiplicity(d, k);
    let trees = count_trees(d, k + 1);
    if BigUint::from(per_tree.len()) != trees {
        report.fail(json!({"reason": "trees hit", "found": per_tree.len(), "expected": trees.to_string()}));
    }
    let mut codes: Vec<_> = per_tree.iter().collect();
    codes.sort();
    if let Some((code, hits)) = codes.into_iter().find(|(_, &h)| BigUint::from(h) != mult) {
        report.fail(json!({"reason": "mass", "tree": code, "found": hits, "expected": mult.to_string()}));
    }
    report.count("inputs", inputs.len());
    report.count("trees", per_tree.len());
    report.count("mass_per_tree", mult);
    Ok(report)
}

/// Cycle lemma over every walk of length `m` with increments in
/// `[-1, max_increment]`.
pub fn verify_rotation_lemma(m: usize, max_increment: i64) -> Result<Report, OracleError> {
    if m == 0 || max_increment < -1 {
        return Err(OracleError::InvalidParams(format!(
            "need m ≥ 1 and max increment ≥ -1, got m={m}, max={max_increment}"
        )));
    }
    let mut report = Report::new(
        "rotation_lemma",
        &[("m", json!(m)), ("max_increment", json!(max_increment))],
    );
    let walks = enumerate_walks(m, max_increment);
    let mut excursions = 0u64;
    for s in &walks {
        let rotations: Vec<_> = (0..m).map(|r| s.rot(r).expect("r < m")).collect();
        let distinct: HashSet<_> = rotations.iter().collect();
        if distinct.len() != m {
            report.fail(json!({"walk": s.to_string(), "reason": "rotations not distinct"}));
        }
        let hits = rotations.iter().filter(|w| w.is_excursion()).count();
        if hits != 1 {
            report.fail(json!({"walk": s.to_string(), "reason": format!("{hits} excursions in class")}));
        }
        if !rotations[s.excursion_shift()].is_excursion() {
            report.fail(json!({"walk": s.to_string(), "reason": "first argmin rotation is not an excursion"}));
        }
        if s.is_excursion() {
            excursions += 1;
            for (r, w) in rotations.iter().enumerate() {
                if w.excursion_shift() != (m - r) % m {
                    report.fail(json!({"walk": s.to_string(), "r": r, "reason": "shift of rotated excursion"}));
                }
            }
        }
    }
    if excursions * m as u64 != walks.len() as u64 {
        report.fail(json!({"reason": "classes do not partition the walks", "walks": walks.len(), "excursions": excursions}));
    }
    report.count("walks", walks.len());
    report.count("classes", excursions);
    Ok(report)
}

type BinaryMap = fn(&EdgeMarkedTree, BinaryLetter) -> Result<LeafMarkedTree, crate::bijections::BijectionError>;

/// Checks that Rémy's map and the third binary map are each a bijection from
/// the binary inputs of size `n` onto trees of size `n + 1` with one marked
/// leaf, and looks for an edge-marked tree, a letter for `enlarge` and a
/// side for the binary maps on which the three outputs differ pairwise. The
/// witness is required from `n = 1` on.
pub fn verify_binary_variants(n: usize, limit: u64) -> Result<Report, OracleError> {
    let mut report = Report::new("binary_variants", &[("n", json!(n))]);
    let inputs = enumerate_inputs(2, n, limit)?;
    // each edge-marked tree appears once per letter; keep one copy
    let marked: Vec<&EdgeMarkedTree> = inputs.iter().filter(|(_, a)| a.value() == 1).map(|(x, _)| x).collect();
    let targets: HashSet<_> = enumerate_leaf_marked(2, n + 1, 1, limit)?
        .iter()
        .map(|t| t.key())
        .collect();
    let maps: [(&str, BinaryMap); 2] = [("remy", remy_enlarge), ("third", third_enlarge)];
    for (name, map) in maps {
        let mut images = HashSet::with_capacity(inputs.len());
        for (x, b) in marked.iter().flat_map(|x| BinaryLetter::ALL.map(|b| (x, b))) {
            let fail = |why: String| json!({"input": x.to_json(), "binary_letter": format!("{b:?}"), "reason": why});
            match map(x, b) {
                Ok(y) => {
                    if !images.insert(y.key()) {
                        report.fail(fail(format!("{name} is not injective")));
                    }
                }
                Err(e) => report.fail(fail(format!("{name} failed: {e}"))),
            }
        }
        if images != targets {
            report.fail(json!({"reason": format!("{name} image differs from all one-leaf-marked trees"),
                "images": images.len(), "targets": targets.len()}));
        }
        report.count(&format!("{name}_images"), images.len());
    }
    let mut found = None;
    'search: for (x, a) in &inputs {
        let g = enlarge(x, *a)?;
        for b in BinaryLetter::ALL {
            let (r, t) = (remy_enlarge(x, b)?, third_enlarge(x, b)?);
            if g != r && g != t && r != t {
                found = Some(json!({"input": x.to_json(), "letter": a.value(),
                    "binary_letter": format!("{b:?}").to_lowercase(),
                    "enlarge": g.to_json(), "remy": r.to_json(), "third": t.to_json()}));
                break 'search;
            }
        }
    }
    match found {
        Some(w) => report.count("witness", w),
        None if n >= 1 => report.fail(json!({"reason": "no input separates the three maps"})),
        None => {}
    }
    report.count("inputs", inputs.len());
    report.count("targets", targets.len());
    Ok(report)
}

/// Cardinality chain at size `n`: inputs, all marked forests, excursion-type
/// forests times letters, and leaf-marked trees of size `n + 1` are equinumerous,
/// with Cut landing exactly on the excursion-type forests and Rotate covering
/// every forest.
pub fn verify_forest_counts(d: usize, n: usize, limit: u64) -> Result<Report, OracleError> {
    let mut report = Report::new("forest_counts", &[("d", json!(d)), ("n", json!(n))]);
    let forests = enumerate_forests(d, n, limit)?;
    let all: HashSet<_> = forests.iter().map(|f| f.key()).collect();
    let mut excursion = HashSet::new();
    for f in &forests {
        if f.is_excursion_forest()? {
            excursion.insert(f.key());
        }
    }
    let leaf_marked = enumerate_leaf_marked(d, n + 1, d - 1, limit)?.len();
    let inputs = count_inputs(d, n);
    if all.len() != d * excursion.len() {
        report.fail(json!({"reason": "|F| != d·|Fp|", "forests": all.len(), "excursion": excursion.len()}));
    }
    if inputs != BigUint::from(all.len()) || leaf_marked != all.len() {
        report.fail(json!({"reason": "cardinalities differ", "inputs": inputs.to_string(),
            "forests": all.len(), "leaf_marked": leaf_marked}));
    }
    let mut cut_images: HashMap<_, usize> = HashMap::new();
    let mut rotated = HashSet::new();
    for (x, a) in enumerate_inputs(d, n, limit)? {
        let (f, _) = cut(&x, a)?;
        *cut_images.entry(f.key()).or_default() += 1;
        rotated.insert(rotate(&f, a)?.key());
    }
    let cut_set: HashSet<_> = cut_images.keys().cloned().collect();
    if cut_set != excursion || cut_images.values().any(|&c| c != d) {
        report.fail(json!({"reason": "cut does not hit each excursion-type forest d times"}));
    }
    if rotated != all {
        report.fail(json!({"reason": "rotate does not cover every forest"}));
    }
    report.count("inputs", inputs);
    report.count("forests", all.len());
    report.count("excursion_forests", excursion.len());
    report.count("leaf_marked_trees", leaf_marked);
    Ok(report)
}
