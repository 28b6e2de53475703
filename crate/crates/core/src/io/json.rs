//! JSON schema:
//!
//! ```text
//! {
//!   "format": "cycloid-net", "version": 1,
//!   "spec": {"alpha": .., "beta": .., "gamma": .., "delta": ..},
//!   "nodes": [{"id": "t(0,0)", "kind": "transition"}, {"id": "sf(0,0)", "kind": "place"}, ..],
//!   "arcs": [["t(0,0)", "sf(0,0)"], ..],
//!   "marking": {"sf(-1,0)": 1, ..},
//!   "labels": {"t(0,0)": "t[0,0]", ..},
//!   "fold": null | {"back_indices": [0, 1], "classes": [{"index": 0, "members": ["sb(..)", ..]}, ..]}
//! }
//! ```
//!
//! Nodes and arcs are in canonical order; maps have sorted keys.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::algebra::{CycloidSpec, RegularCoordinate};
use crate::error::{Error, Result};
use crate::net::{FoldClass, FoldSpec, Folding, Marking, Net, NodeId, RegularLabels};

pub const JSON_FORMAT: &str = "cycloid-net";
pub const JSON_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Kind {
    Transition,
    Place,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeEntry {
    id: NodeId,
    kind: Kind,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FoldEntry {
    back_indices: BTreeSet<usize>,
    classes: Vec<FoldClass>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    format: String,
    version: u32,
    spec: CycloidSpec,
    nodes: Vec<NodeEntry>,
    arcs: Vec<(NodeId, NodeId)>,
    marking: Marking,
    #[serde(default)]
    labels: BTreeMap<NodeId, String>,
    #[serde(default)]
    fold: Option<FoldEntry>,
}

pub fn to_json(net: &Net, m: &Marking) -> String {
    let nodes = net
        .transitions()
        .iter()
        .map(|&id| NodeEntry {
            id,
            kind: Kind::Transition,
        })
        .chain(net.places().iter().map(|&id| NodeEntry { id, kind: Kind::Place }))
        .collect();
    let labels = net
        .labels()
        .map(|l| l.iter().map(|(n, rc)| (*n, rc.to_string())).collect())
        .unwrap_or_default();
    let fold = net.folding().map(|f| FoldEntry {
        back_indices: f.spec().back_indices().clone(),
        classes: f.classes().collect(),
    });
    let doc = Document {
        format: JSON_FORMAT.into(),
        version: JSON_VERSION,
        spec: *net.spec(),
        nodes,
        arcs: net.flow().iter().copied().collect(),
        marking: m.clone(),
        labels,
        fold,
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("document serializes");
    out.push('\n');
    out
}

fn at(path: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.into(),
        message: message.into(),
    }
}

pub fn from_json(payload: &[u8]) -> Result<(Net, Marking)> {
    let de = &mut serde_json::Deserializer::from_slice(payload);
    let doc: Document = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        at(&path, e.into_inner().to_string())
    })?;
    if doc.format != JSON_FORMAT {
        return Err(at("format", format!("expected {JSON_FORMAT:?}, got {:?}", doc.format)));
    }
    if doc.version != JSON_VERSION {
        return Err(at("version", format!("unsupported version {}", doc.version)));
    }
    let mut places = BTreeSet::new();
    let mut transitions = BTreeSet::new();
    for (idx, node) in doc.nodes.iter().enumerate() {
        if node.id.is_transition() != (node.kind == Kind::Transition) {
            return Err(at(
                &format!("nodes[{idx}].kind"),
                format!("kind does not match id {}", node.id),
            ));
        }
        let fresh = match node.kind {
            Kind::Transition => transitions.insert(node.id),
            Kind::Place => places.insert(node.id),
        };
        if !fresh {
            return Err(at(&format!("nodes[{idx}].id"), format!("duplicate node {}", node.id)));
        }
    }
    let mut flow = BTreeSet::new();
    for (idx, &(a, b)) in doc.arcs.iter().enumerate() {
        for end in [a, b] {
            if !places.contains(&end) && !transitions.contains(&end) {
                return Err(at(&format!("arcs[{idx}]"), format!("unknown node {end}")));
            }
        }
        if !flow.insert((a, b)) {
            return Err(at(&format!("arcs[{idx}]"), format!("duplicate arc {a} -> {b}")));
        }
    }
    for place in doc.marking.places() {
        if !places.contains(place) {
            return Err(at(&format!("marking.{place}"), "marking names an unknown place"));
        }
    }
    let labels = if doc.labels.is_empty() {
        None
    } else {
        let mut pairs = Vec::with_capacity(doc.labels.len());
        for (node, text) in &doc.labels {
            let path = format!("labels.{node}");
            let rc: RegularCoordinate = text
                .parse()
                .map_err(|_| at(&path, format!("malformed label {text:?}")))?;
            if !places.contains(node) && !transitions.contains(node) {
                return Err(at(&path, "label for an unknown node"));
            }
            pairs.push((*node, rc));
        }
        Some(RegularLabels::from_pairs(pairs).map_err(|e| at("labels", e.to_string()))?)
    };
    let fold = match doc.fold {
        None => None,
        Some(entry) => {
            let spec = FoldSpec::new(entry.back_indices).map_err(|e| at("fold.back_indices", e.to_string()))?;
            Some(Folding::from_classes(spec, entry.classes).map_err(|e| at("fold.classes", e.to_string()))?)
        }
    };
    let net =
        Net::from_parts(doc.spec, places, transitions, flow, labels, fold).map_err(|e| at("arcs", e.to_string()))?;
    Ok((net, doc.marking))
}
