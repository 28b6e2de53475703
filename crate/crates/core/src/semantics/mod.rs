//! Token-game semantics and exhaustive behavioural checks.
//!
//! Markings are multisets. Under the default [`FiringRule::Plain`] a transition is
//! enabled when each input place holds a token; [`FiringRule::ContactFree`] also
//! requires every output place to be empty.

mod check;
mod iso;
mod reach;
mod scenario;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::net::{Marking, Net, NodeId};

pub use check::{
    check_fold_bisimulation, check_liveness, check_safety, find_state, Property, PropertyReport, Stats, Verdict,
    Witness,
};
pub use iso::{isomorphic, validate_isomorphism, MAX_ISO_NODES};
pub use reach::{reachability, ReachabilityGraph, DEFAULT_MAX_STATES};
pub use scenario::{stop_iteration, stop_scenario, IterationReport, ScenarioReport};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiringRule {
    #[default]
    Plain,
    ContactFree,
}

/// Dense token vector, indexed like [`CompiledNet::places`].
pub(crate) type State = Box<[u8]>;

/// Index-based view of a net for fast firing.
#[derive(Debug)]
pub(crate) struct CompiledNet {
    pub places: Vec<NodeId>,
    pub transitions: Vec<NodeId>,
    place_index: HashMap<NodeId, usize>,
    transition_index: HashMap<NodeId, usize>,
    pre: Vec<Vec<usize>>,
    post: Vec<Vec<usize>>,
}

impl CompiledNet {
    pub fn new(net: &Net) -> Self {
        let places: Vec<NodeId> = net.places().iter().copied().collect();
        let transitions: Vec<NodeId> = net.transitions().iter().copied().collect();
        let place_index: HashMap<_, _> = places.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let transition_index: HashMap<_, _> = transitions.iter().enumerate().map(|(i, t)| (*t, i)).collect();
        let pre = transitions
            .iter()
            .map(|t| net.preset(t).iter().map(|p| place_index[p]).collect())
            .collect();
        let post = transitions
            .iter()
            .map(|t| net.postset(t).iter().map(|p| place_index[p]).collect())
            .collect();
        CompiledNet {
            places,
            transitions,
            place_index,
            transition_index,
            pre,
            post,
        }
    }

    pub fn place(&self, id: &NodeId) -> Option<usize> {
        self.place_index.get(id).copied()
    }

    pub fn transition(&self, id: &NodeId) -> Result<usize> {
        self.transition_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownNode(id.to_string()))
    }

    pub fn encode(&self, m: &Marking) -> Result<State> {
        let mut state = vec![0u8; self.places.len()];
        for (place, count) in m.iter() {
            let idx = self.place(place).ok_or_else(|| Error::UnknownNode(place.to_string()))?;
            state[idx] = u8::try_from(count)
                .map_err(|_| Error::Resource(format!("token count {count} on {place} exceeds 255")))?;
        }
        Ok(state.into_boxed_slice())
    }

    pub fn decode(&self, state: &[u8]) -> Marking {
        let mut m = Marking::new();
        for (idx, &count) in state.iter().enumerate() {
            m.set(self.places[idx], count as u32);
        }
        m
    }

    /// `None` if enabled, otherwise the reason it is not.
    pub fn blocker(&self, state: &[u8], t: usize, rule: FiringRule) -> Option<String> {
        if let Some(&p) = self.pre[t].iter().find(|&&p| state[p] == 0) {
            return Some(format!("input place {} is empty", self.places[p]));
        }
        if rule == FiringRule::ContactFree {
            if let Some(&p) = self.post[t].iter().find(|&&p| state[p] > 0) {
                return Some(format!("output place {} is marked", self.places[p]));
            }
        }
        None
    }

    pub fn is_enabled(&self, state: &[u8], t: usize, rule: FiringRule) -> bool {
        self.blocker(state, t, rule).is_none()
    }

    /// Fires an enabled transition.
    pub fn fire(&self, state: &[u8], t: usize) -> Result<State> {
        let mut next: State = state.into();
        for &p in &self.pre[t] {
            next[p] -= 1;
        }
        for &p in &self.post[t] {
            next[p] = next[p]
                .checked_add(1)
                .ok_or_else(|| Error::Resource(format!("token count on {} exceeds 255", self.places[p])))?;
        }
        Ok(next)
    }
}

/// Transitions enabled in `m`, in canonical order.
pub fn enabled_set(net: &Net, m: &Marking, rule: FiringRule) -> Result<Vec<NodeId>> {
    let compiled = CompiledNet::new(net);
    let state = compiled.encode(m)?;
    Ok((0..compiled.transitions.len())
        .filter(|&t| compiled.is_enabled(&state, t, rule))
        .map(|t| compiled.transitions[t])
        .collect())
}

/// `M' = M − •t + t•`.
pub fn fire(net: &Net, m: &Marking, t: &NodeId, rule: FiringRule) -> Result<Marking> {
    let compiled = CompiledNet::new(net);
    let state = compiled.encode(m)?;
    let ti = compiled.transition(t)?;
    if let Some(reason) = compiled.blocker(&state, ti, rule) {
        return Err(Error::NotEnabled {
            transition: t.to_string(),
            reason,
        });
    }
    Ok(compiled.decode(&compiled.fire(&state, ti)?))
}

/// Fires a sequence of transitions, failing at the first disabled one.
pub fn replay(net: &Net, m0: &Marking, sequence: &[NodeId], rule: FiringRule) -> Result<Marking> {
    let compiled = CompiledNet::new(net);
    let mut state = compiled.encode(m0)?;
    for t in sequence {
        let ti = compiled.transition(t)?;
        if let Some(reason) = compiled.blocker(&state, ti, rule) {
            return Err(Error::NotEnabled {
                transition: t.to_string(),
                reason,
            });
        }
        state = compiled.fire(&state, ti)?;
    }
    Ok(compiled.decode(&state))
}
