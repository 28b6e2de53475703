use std::fmt::Write;

use crate::net::{Marking, Net, NodeId};

fn quote(s: &str) -> String {
    format!(
        "\"{}\"",
        s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n")
    )
}

/// Grid position in points: transitions on even coordinates, their output places
/// half a step to the right (forward) or up (backward).
fn position(node: &NodeId) -> Option<(i64, i64)> {
    const STEP: i64 = 80;
    match node {
        NodeId::T(p) => Some((p.xi * STEP, p.eta * STEP)),
        NodeId::Sf(p) => Some((p.xi * STEP + STEP / 2, p.eta * STEP)),
        NodeId::Sb(p) => Some((p.xi * STEP, p.eta * STEP + STEP / 2)),
        NodeId::SbClass(_) | NodeId::TStop(_) => None,
    }
}

/// Graphviz digraph. Transitions are boxes and places circles, both in canonical
/// order; marked places carry their token count as an external label.
pub fn to_dot(net: &Net, m: &Marking) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(&net.spec().to_string())).unwrap();
    writeln!(out, "  node [fontsize=10];").unwrap();
    let nodes = net.transitions().iter().chain(net.places());
    for node in nodes {
        let shape = if node.is_transition() { "box" } else { "circle" };
        let label = match net.label(node) {
            Some(rc) => format!("{node}\n{rc}"),
            None => node.to_string(),
        };
        write!(
            out,
            "  {} [shape={shape}, label={}",
            quote(&node.to_string()),
            quote(&label)
        )
        .unwrap();
        let tokens = m.get(node);
        if tokens > 0 {
            write!(out, ", xlabel=\"{tokens}\", style=bold").unwrap();
        }
        if let Some((x, y)) = position(node) {
            write!(out, ", pos=\"{x},{y}\"").unwrap();
        }
        out.push_str("];\n");
    }
    for (a, b) in net.flow() {
        writeln!(out, "  {} -> {};", quote(&a.to_string()), quote(&b.to_string())).unwrap();
    }
    out.push_str("}\n");
    out
}
