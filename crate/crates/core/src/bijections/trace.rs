use serde::Serialize;

use crate::marks::{EdgeMarkedTree, LeafMarkedTree, MarkedTreeJson};

use super::cut::cut_forest;
use super::{add_root, rotate, BijectionError, Letter};

/// One round of the cut loop, recorded after the fragment was detached.
#[derive(Debug, Clone, Serialize)]
pub struct CutStep {
    /// Free positions before this round.
    pub rem: Vec<usize>,
    /// Position the fragment was assigned to.
    pub index: usize,
    /// Word of the child node of the edge that was cut.
    pub edge: String,
    pub fragment: MarkedTreeJson,
    /// Working tree with its remaining edge marks and its marked leaves.
    pub working: MarkedTreeJson,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "map", rename_all = "snake_case")]
pub enum Frame {
    Cut {
        input: MarkedTreeJson,
        letter: usize,
        steps: Vec<CutStep>,
        output: Vec<MarkedTreeJson>,
        leaf_sequence: String,
    },
    Rotate {
        letter: usize,
        output: Vec<MarkedTreeJson>,
        leaf_sequence: String,
    },
    AddRoot {
        output: MarkedTreeJson,
    },
}

/// Runs `enlarge` and records one frame per component map.
pub fn trace_enlarge(
    input: &EdgeMarkedTree,
    a: Letter,
) -> Result<(LeafMarkedTree, Vec<Frame>), BijectionError> {
    a.check(input.arity())?;
    let mut steps = Vec::new();
    let forest = cut_forest(input, Some(&mut steps))?;
    let mut frames = vec![Frame::Cut {
        input: input.to_json(),
        letter: a.value(),
        steps,
        output: forest.to_json(),
        leaf_sequence: forest.leaf_sequence()?.to_string(),
    }];
    let rotated = rotate(&forest, a)?;
    frames.push(Frame::Rotate {
        letter: a.value(),
        output: rotated.to_json(),
        leaf_sequence: rotated.leaf_sequence()?.to_string(),
    });
    let out = add_root(&rotated)?;
    frames.push(Frame::AddRoot { output: out.to_json() });
    Ok((out, frames))
}
