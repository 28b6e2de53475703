use std::collections::BTreeSet;

use petgraph::graph::{DiGraph, NodeIndex};
use serde::{Deserialize, Serialize};

use super::{reachability, CompiledNet, FiringRule, ReachabilityGraph};
use crate::error::{Error, Result};
use crate::net::{Marking, Net, NodeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Safe,
    Live,
    Bisimilar,
    Isomorphic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    /// The state bound was hit before a violation was found.
    Inconclusive,
}

/// Evidence attached to a report: a replayable firing sequence from the initial
/// marking and whatever it leads to, or an isomorphism mapping.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sequence: Vec<NodeId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marking: Option<Marking>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transition: Option<NodeId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub place: Option<NodeId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mapping: Option<Vec<(NodeId, NodeId)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub states: usize,
    pub edges: usize,
    pub complete: bool,
}

impl Stats {
    fn of(rg: &ReachabilityGraph) -> Self {
        Stats {
            states: rg.state_count(),
            edges: rg.edge_count(),
            complete: rg.is_complete(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: Property,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub stats: Stats,
}

impl PropertyReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// Smallest-numbered (hence shortest-path) state satisfying `pred`.
pub fn find_state(rg: &ReachabilityGraph, mut pred: impl FnMut(&Marking) -> bool) -> Option<usize> {
    (0..rg.state_count()).find(|&s| pred(&rg.marking(s)))
}

/// Every reachable marking holds at most one token per place.
pub fn check_safety(rg: &ReachabilityGraph) -> PropertyReport {
    let offending =
        (0..rg.state_count()).find_map(|s| rg.tokens(s).iter().position(|&c| c > 1).map(|p| (s, rg.places()[p])));
    let (verdict, witness) = match offending {
        Some((s, place)) => (
            Verdict::Fails,
            Some(Witness {
                sequence: rg.path_to(s),
                marking: Some(rg.marking(s)),
                place: Some(place),
                ..Witness::default()
            }),
        ),
        None if rg.is_complete() => (Verdict::Holds, None),
        None => (Verdict::Inconclusive, None),
    };
    PropertyReport {
        property: Property::Safe,
        verdict,
        witness,
        stats: Stats::of(rg),
    }
}

/// Terminal strongly connected components, each as sorted state indices, ordered by
/// their smallest state.
fn terminal_components(rg: &ReachabilityGraph) -> Vec<Vec<usize>> {
    let mut graph: DiGraph<(), ()> = DiGraph::with_capacity(rg.state_count(), rg.edge_count());
    for _ in 0..rg.state_count() {
        graph.add_node(());
    }
    for &(from, _, to) in rg.raw_edges() {
        graph.add_edge(NodeIndex::new(from), NodeIndex::new(to), ());
    }
    let sccs = petgraph::algo::tarjan_scc(&graph);
    let mut component = vec![0usize; rg.state_count()];
    for (c, members) in sccs.iter().enumerate() {
        for n in members {
            component[n.index()] = c;
        }
    }
    let mut terminal = vec![true; sccs.len()];
    for &(from, _, to) in rg.raw_edges() {
        if component[from] != component[to] {
            terminal[component[from]] = false;
        }
    }
    let mut out: Vec<Vec<usize>> = sccs
        .into_iter()
        .enumerate()
        .filter(|(c, _)| terminal[*c])
        .map(|(_, members)| {
            let mut states: Vec<usize> = members.into_iter().map(|n| n.index()).collect();
            states.sort_unstable();
            states
        })
        .collect();
    out.sort();
    out
}

/// A transition is live iff every terminal SCC of the complete graph contains a state
/// enabling it. An empty request checks every transition of the net.
pub fn check_liveness(rg: &ReachabilityGraph, transitions: &[NodeId]) -> Result<PropertyReport> {
    let requested: Vec<usize> = if transitions.is_empty() {
        (0..rg.transitions().len()).collect()
    } else {
        transitions
            .iter()
            .map(|t| {
                rg.transitions()
                    .iter()
                    .position(|x| x == t)
                    .ok_or_else(|| Error::UnknownNode(t.to_string()))
            })
            .collect::<Result<_>>()?
    };
    let stats = Stats::of(rg);
    if !rg.is_complete() {
        return Ok(PropertyReport {
            property: Property::Live,
            verdict: Verdict::Inconclusive,
            witness: None,
            stats,
        });
    }
    let edges = rg.raw_edges();
    for states in terminal_components(rg) {
        let mut enabled = BTreeSet::new();
        for &s in &states {
            // edges are grouped by source state
            let lo = edges.partition_point(|e| e.0 < s);
            enabled.extend(edges[lo..].iter().take_while(|e| e.0 == s).map(|e| e.1));
        }
        if let Some(&dead) = requested.iter().find(|t| !enabled.contains(t)) {
            let s = states[0];
            return Ok(PropertyReport {
                property: Property::Live,
                verdict: Verdict::Fails,
                witness: Some(Witness {
                    sequence: rg.path_to(s),
                    marking: Some(rg.marking(s)),
                    transition: Some(rg.transitions()[dead]),
                    note: Some("transition cannot fire again from this marking".into()),
                    ..Witness::default()
                }),
                stats,
            });
        }
    }
    Ok(PropertyReport {
        property: Property::Live,
        verdict: Verdict::Holds,
        witness: None,
        stats,
    })
}

/// Checks `M →t→ M' ⇔ [M]_D →t→ [M']_D` over all markings reachable in the base net.
pub fn check_fold_bisimulation(
    base: &Net,
    m0: &Marking,
    folded: &Net,
    rule: FiringRule,
    max_states: usize,
) -> Result<PropertyReport> {
    let folding = folded
        .folding()
        .ok_or_else(|| Error::Domain("second net is not a backward folding".into()))?;
    if base.transitions() != folded.transitions() {
        return Err(Error::Domain("base and folded nets have different transitions".into()));
    }
    let base_c = CompiledNet::new(base);
    let fold_c = CompiledNet::new(folded);
    let mut place_map = Vec::with_capacity(base_c.places.len());
    for p in &base_c.places {
        let target = if folded.places().contains(p) {
            Some(*p)
        } else {
            folding.class_of(p)
        };
        let idx = target
            .and_then(|t| fold_c.place(&t))
            .ok_or_else(|| Error::Domain(format!("base place {p} has no image in the folded net")))?;
        place_map.push(idx);
    }
    let project = |state: &[u8]| -> Box<[u8]> {
        let mut out = vec![0u8; fold_c.places.len()];
        for (i, &c) in state.iter().enumerate() {
            out[place_map[i]] = out[place_map[i]].saturating_add(c);
        }
        out.into_boxed_slice()
    };

    let rg = reachability(base, m0, rule, max_states)?;
    let stats = Stats::of(&rg);
    let transitions = base_c.transitions.len();
    for s in 0..rg.state_count() {
        let state = rg.tokens(s);
        let image = project(state);
        for t in 0..transitions {
            let in_base = base_c.is_enabled(state, t, rule);
            let in_fold = fold_c.is_enabled(&image, t, rule);
            if in_base != in_fold {
                let side = if in_fold { "folded" } else { "base" };
                return Ok(PropertyReport {
                    property: Property::Bisimilar,
                    verdict: Verdict::Fails,
                    witness: Some(Witness {
                        sequence: rg.path_to(s),
                        marking: Some(rg.marking(s)),
                        transition: Some(base_c.transitions[t]),
                        note: Some(format!("transition enabled only in the {side} net")),
                        ..Witness::default()
                    }),
                    stats,
                });
            }
        }
        for (t, to) in rg.successors(s) {
            let ti = base_c.transition(&t)?;
            if fold_c.fire(&image, ti)? != project(rg.tokens(to)) {
                let mut sequence = rg.path_to(s);
                sequence.push(t);
                return Ok(PropertyReport {
                    property: Property::Bisimilar,
                    verdict: Verdict::Fails,
                    witness: Some(Witness {
                        sequence,
                        marking: Some(rg.marking(to)),
                        transition: Some(t),
                        note: Some("successor markings do not re-pair under the class map".into()),
                        ..Witness::default()
                    }),
                    stats,
                });
            }
        }
    }
    Ok(PropertyReport {
        property: Property::Bisimilar,
        verdict: if rg.is_complete() {
            Verdict::Holds
        } else {
            Verdict::Inconclusive
        },
        witness: None,
        stats,
    })
}
