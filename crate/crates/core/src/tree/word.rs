use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::TreeError;

/// Address of a node as the sequence of child slots (each in `1..=d`) on the
/// path from the root. The empty word is the root.
///
/// The derived ordering is lexicographic: a strict prefix sorts before any
/// of its extensions, otherwise the first differing letter decides.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeWord(Vec<u32>);

impl NodeWord {
    pub fn root() -> Self {
        NodeWord(Vec::new())
    }

    pub fn from_letters(letters: Vec<u32>) -> Self {
        NodeWord(letters)
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_prefix_of(&self, other: &NodeWord) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn child(&self, slot: u32) -> NodeWord {
        let mut letters = self.0.clone();
        letters.push(slot);
        NodeWord(letters)
    }

    /// Concatenation `self · suffix`.
    pub fn concat(&self, suffix: &NodeWord) -> NodeWord {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&suffix.0);
        NodeWord(letters)
    }

    /// Checks every letter against the alphabet `1..=d`.
    pub fn check_alphabet(&self, d: usize) -> Result<(), TreeError> {
        match self.0.iter().find(|&&l| l == 0 || l as usize > d) {
            Some(&l) => Err(TreeError::MalformedWord(format!(
                "letter {l} outside 1..={d}"
            ))),
            None => Ok(()),
        }
    }
}

/// Total lexicographic order on words.
pub fn lex_compare(w1: &NodeWord, w2: &NodeWord) -> Ordering {
    w1.cmp(w2)
}

/// Root prints as `ε`; letters are concatenated when they are single digits
/// and dot-separated otherwise (arity 10 and above).
impl fmt::Display for NodeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let dotted = self.0.iter().any(|&l| l > 9);
        for l in &self.0 {
            if dotted {
                f.write_str(".")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for NodeWord {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "ε" || s == "e" {
            return Ok(NodeWord::root());
        }
        let bad = || TreeError::MalformedWord(s.to_string());
        let letters = if s.contains('.') {
            s.strip_prefix('.')
                .unwrap_or(s)
                .split('.')
                .map(|p| p.parse::<u32>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).ok_or_else(bad))
                .collect::<Result<Vec<_>, _>>()?
        };
        if letters.contains(&0) {
            return Err(bad());
        }
        Ok(NodeWord(letters))
    }
}
