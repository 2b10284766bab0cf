//! Text renderings of trees: preorder code, parenthesis form and Graphviz DOT.

use std::fmt::Write;

use crate::tree::{DaryTree, NodeId};

pub use crate::tree::format_code;

/// Internal node = `(` + its `d` children + `)`, leaf = `o`.
pub fn to_paren(t: &DaryTree) -> String {
    let mut out = String::with_capacity(t.node_count() + 2 * t.internal_count());
    let mut stack: Vec<Option<NodeId>> = vec![Some(t.root())];
    while let Some(item) = stack.pop() {
        match item {
            None => out.push(')'),
            Some(u) if t.is_leaf(u) => out.push('o'),
            Some(u) => {
                out.push('(');
                stack.push(None);
                stack.extend(t.children(u).iter().rev().map(|&c| Some(c)));
            }
        }
    }
    out
}

/// Parses the parenthesis form for arity `d`.
pub fn parse_paren(d: usize, s: &str) -> Option<DaryTree> {
    let mut code = Vec::new();
    // children still expected by each open node
    let mut pending: Vec<usize> = Vec::new();
    let mut done = false;
    for ch in s.trim_end_matches('\n').chars() {
        if done {
            return None;
        }
        match ch {
            'o' | '(' => {
                if let Some(top) = pending.last_mut() {
                    *top = top.checked_sub(1)?;
                }
                if ch == 'o' {
                    code.push(0);
                    done = pending.is_empty();
                } else {
                    code.push(d);
                    pending.push(d);
                }
            }
            ')' => {
                if pending.pop()? != 0 {
                    return None;
                }
                done = pending.is_empty();
            }
            _ => return None,
        }
    }
    if !done {
        return None;
    }
    DaryTree::from_preorder_code(d, &code).ok()
}

fn dot_name(word: &str) -> String {
    if word.is_empty() {
        "e".to_string()
    } else if word.chars().all(|c| c.is_ascii_digit()) {
        word.to_string()
    } else {
        format!("\"{word}\"")
    }
}

/// DOT digraph with edges parent → child in slot order and leaves drawn as
/// points. Nodes are named by their words; the root is `e`.
pub fn to_dot(t: &DaryTree) -> String {
    let mut out = String::from("digraph tree {\n");
    let order = t.preorder();
    let mut words: Vec<String> = vec![String::new(); t.arena_len()];
    for &u in &order {
        if let Some(p) = t.parent(u) {
            let slot = t.slot(u).expect("non-root has a slot");
            let mut w = words[p.index()].clone();
            if t.arity() > 9 {
                w.push('.');
            }
            w.push_str(&slot.to_string());
            words[u.index()] = w;
        }
    }
    for &u in &order {
        let name = dot_name(&words[u.index()]);
        let label = if words[u.index()].is_empty() { "ε" } else { &words[u.index()] };
        if t.is_leaf(u) {
            writeln!(out, "  {name} [shape=point, label=\"{label}\"];").unwrap();
        } else {
            writeln!(out, "  {name} [label=\"{label}\"];").unwrap();
        }
    }
    for &u in &order {
        for &c in t.children(u) {
            writeln!(
                out,
                "  {} -> {};",
                dot_name(&words[u.index()]),
                dot_name(&words[c.index()])
            )
            .unwrap();
        }
    }
    out.push_str("}\n");
    out
}
