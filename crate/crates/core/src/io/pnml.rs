use std::fmt::Write;

use crate::net::{Marking, Net, NodeId};

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(ch),
        }
    }
    out
}

fn name(net: &Net, node: &NodeId) -> String {
    escape(&net.describe(node))
}

/// Place/transition net in the PNML core grammar, without graphics. Node ids are
/// the canonical node strings; arcs are numbered in canonical order.
pub fn to_pnml(net: &Net, m: &Marking) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<pnml xmlns=\"http://www.pnml.org/version-2009/grammar/pnml\">\n");
    let title = escape(&net.spec().to_string());
    writeln!(
        out,
        "  <net id=\"{title}\" type=\"http://www.pnml.org/version-2009/grammar/ptnet\">"
    )
    .unwrap();
    writeln!(out, "    <name><text>{title}</text></name>").unwrap();
    out.push_str("    <page id=\"page0\">\n");
    for place in net.places() {
        write!(
            out,
            "      <place id=\"{}\"><name><text>{}</text></name>",
            escape(&place.to_string()),
            name(net, place)
        )
        .unwrap();
        let tokens = m.get(place);
        if tokens > 0 {
            write!(out, "<initialMarking><text>{tokens}</text></initialMarking>").unwrap();
        }
        out.push_str("</place>\n");
    }
    for t in net.transitions() {
        writeln!(
            out,
            "      <transition id=\"{}\"><name><text>{}</text></name></transition>",
            escape(&t.to_string()),
            name(net, t)
        )
        .unwrap();
    }
    for (k, (a, b)) in net.flow().iter().enumerate() {
        writeln!(
            out,
            "      <arc id=\"arc{k}\" source=\"{}\" target=\"{}\"/>",
            escape(&a.to_string()),
            escape(&b.to_string())
        )
        .unwrap();
    }
    out.push_str("    </page>\n  </net>\n</pnml>\n");
    out
}
