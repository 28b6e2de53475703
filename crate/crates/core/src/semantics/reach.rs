use std::collections::HashMap;

use super::{CompiledNet, FiringRule, State};
use crate::error::Result;
use crate::net::{Marking, Net, NodeId};

pub const DEFAULT_MAX_STATES: usize = 1_000_000;

/// Explored state space. State `0` is the initial marking; states are numbered in
/// breadth-first discovery order with successors taken in canonical transition order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachabilityGraph {
    places: Vec<NodeId>,
    transitions: Vec<NodeId>,
    rule: FiringRule,
    states: Vec<State>,
    /// `(from, transition index, to)`, grouped by `from` in ascending order.
    edges: Vec<(usize, usize, usize)>,
    edge_start: Vec<usize>,
    parent: Vec<Option<(usize, usize)>>,
    complete: bool,
}

pub fn reachability(net: &Net, m0: &Marking, rule: FiringRule, max_states: usize) -> Result<ReachabilityGraph> {
    let compiled = CompiledNet::new(net);
    let initial = compiled.encode(m0)?;
    let mut index: HashMap<State, usize> = HashMap::new();
    let mut states = vec![initial.clone()];
    let mut parent = vec![None];
    index.insert(initial, 0);
    let mut edges = Vec::new();
    let mut edge_start = Vec::new();
    let mut complete = true;
    let max_states = max_states.max(1);

    let mut at = 0;
    while at < states.len() {
        edge_start.push(edges.len());
        for t in 0..compiled.transitions.len() {
            if !compiled.is_enabled(&states[at], t, rule) {
                continue;
            }
            let next = compiled.fire(&states[at], t)?;
            let to = match index.get(&next) {
                Some(&to) => to,
                None if states.len() >= max_states => {
                    complete = false;
                    continue;
                }
                None => {
                    let to = states.len();
                    states.push(next.clone());
                    parent.push(Some((at, t)));
                    index.insert(next, to);
                    to
                }
            };
            edges.push((at, t, to));
        }
        at += 1;
    }
    edge_start.push(edges.len());

    Ok(ReachabilityGraph {
        places: compiled.places,
        transitions: compiled.transitions,
        rule,
        states,
        edges,
        edge_start,
        parent,
        complete,
    })
}

impl ReachabilityGraph {
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `false` if the state bound cut the exploration short.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn rule(&self) -> FiringRule {
        self.rule
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn places(&self) -> &[NodeId] {
        &self.places
    }

    pub fn transitions(&self) -> &[NodeId] {
        &self.transitions
    }

    pub fn marking(&self, state: usize) -> Marking {
        let mut m = Marking::new();
        for (idx, &count) in self.states[state].iter().enumerate() {
            m.set(self.places[idx], count as u32);
        }
        m
    }

    pub(crate) fn tokens(&self, state: usize) -> &[u8] {
        &self.states[state]
    }

    /// Outgoing edges of `state` as `(transition, successor)`.
    pub fn successors(&self, state: usize) -> impl Iterator<Item = (NodeId, usize)> + '_ {
        self.edges[self.edge_start[state]..self.edge_start[state + 1]]
            .iter()
            .map(|&(_, t, to)| (self.transitions[t], to))
    }

    pub(crate) fn raw_edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }

    /// A shortest firing sequence from the initial marking to `state`.
    pub fn path_to(&self, state: usize) -> Vec<NodeId> {
        let mut seq = Vec::new();
        let mut at = state;
        while let Some((prev, t)) = self.parent[at] {
            seq.push(self.transitions[t]);
            at = prev;
        }
        seq.reverse();
        seq
    }

    /// Largest token count on any place over all states.
    pub fn max_tokens(&self) -> u8 {
        self.states.iter().flat_map(|s| s.iter().copied()).max().unwrap_or(0)
    }
}
