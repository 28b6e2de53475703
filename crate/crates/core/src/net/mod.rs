//! Explicit place/transition nets for cycloids.
//!
//! Node identity is always the canonical (fundamental parallelogram) coordinate.
//! Regular coordinates `[t_i, a_j]` are attached on top as a separate bijection
//! because only regular cycloids have them.

mod fold;
mod stop;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{self, CycloidSpec, Point, RegularCoordinate, RegularKind, RegularTable};
use crate::error::{Error, Result};

pub use fold::{
    backward_fold, bf_path, delete_process, fold_classes, fold_marking, reduced_spec, BfPath, FoldClass, FoldSpec,
    Folding,
};
pub use stop::{add_stop_transitions, make_stop_resilient};

/// Value-based identity of a net node.
///
/// The derived order (transitions, forward places, backward places, fold classes,
/// stop transitions; then payload) is the canonical order used everywhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeId {
    T(Point),
    Sf(Point),
    Sb(Point),
    SbClass(usize),
    TStop(usize),
}

impl NodeId {
    pub fn is_transition(&self) -> bool {
        matches!(self, NodeId::T(_) | NodeId::TStop(_))
    }

    pub fn is_place(&self) -> bool {
        !self.is_transition()
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeId::T(p) => write!(f, "t{p}"),
            NodeId::Sf(p) => write!(f, "sf{p}"),
            NodeId::Sb(p) => write!(f, "sb{p}"),
            NodeId::SbClass(i) => write!(f, "SB{{{i}}}"),
            NodeId::TStop(j) => write!(f, "tstop[{j}]"),
        }
    }
}

impl FromStr for NodeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            path: String::new(),
            message: format!("malformed node id {s:?}"),
        };
        let point = |rest: &str| -> Result<Point> {
            let (xi, eta) = rest
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|r| r.split_once(','))
                .ok_or_else(bad)?;
            Ok(Point::new(
                xi.trim().parse().map_err(|_| bad())?,
                eta.trim().parse().map_err(|_| bad())?,
            ))
        };
        if let Some(rest) = s.strip_prefix("tstop[") {
            let j = rest.strip_suffix(']').ok_or_else(bad)?;
            return Ok(NodeId::TStop(j.parse().map_err(|_| bad())?));
        }
        if let Some(rest) = s.strip_prefix("SB{") {
            let i = rest.strip_suffix('}').ok_or_else(bad)?;
            return Ok(NodeId::SbClass(i.parse().map_err(|_| bad())?));
        }
        if let Some(rest) = s.strip_prefix("sf") {
            return Ok(NodeId::Sf(point(rest)?));
        }
        if let Some(rest) = s.strip_prefix("sb") {
            return Ok(NodeId::Sb(point(rest)?));
        }
        if let Some(rest) = s.strip_prefix('t') {
            return Ok(NodeId::T(point(rest)?));
        }
        Err(bad())
    }
}

impl Serialize for NodeId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NodeId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Multiset of tokens over places. Zero counts are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Marking(BTreeMap<NodeId, u32>);

impl Marking {
    pub fn new() -> Self {
        Marking::default()
    }

    pub fn get(&self, place: &NodeId) -> u32 {
        self.0.get(place).copied().unwrap_or(0)
    }

    pub fn add(&mut self, place: NodeId, count: u32) {
        if count > 0 {
            *self.0.entry(place).or_insert(0) += count;
        }
    }

    pub fn set(&mut self, place: NodeId, count: u32) {
        if count == 0 {
            self.0.remove(&place);
        } else {
            self.0.insert(place, count);
        }
    }

    pub fn total(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Marked places with their counts, in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&NodeId, u32)> + '_ {
        self.0.iter().map(|(k, v)| (k, *v))
    }

    pub fn places(&self) -> impl Iterator<Item = &NodeId> + '_ {
        self.0.keys()
    }
}

impl FromIterator<NodeId> for Marking {
    fn from_iter<I: IntoIterator<Item = NodeId>>(iter: I) -> Self {
        let mut m = Marking::new();
        for p in iter {
            m.add(p, 1);
        }
        m
    }
}

impl fmt::Display for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, (place, count)) in self.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            if count == 1 {
                write!(f, "{place}")?;
            } else {
                write!(f, "{place}:{count}")?;
            }
        }
        f.write_str("}")
    }
}

/// Bijection between (a subset of) net nodes and regular coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RegularLabels {
    by_node: BTreeMap<NodeId, RegularCoordinate>,
    by_coord: BTreeMap<RegularCoordinate, NodeId>,
}

impl RegularLabels {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (NodeId, RegularCoordinate)>) -> Result<Self> {
        let mut labels = RegularLabels::default();
        for (node, rc) in pairs {
            if labels.by_node.insert(node, rc).is_some() || labels.by_coord.insert(rc, node).is_some() {
                return Err(Error::Domain(format!(
                    "regular labels are not a bijection at {node} <-> {rc}"
                )));
            }
        }
        Ok(labels)
    }

    pub fn label(&self, node: &NodeId) -> Option<RegularCoordinate> {
        self.by_node.get(node).copied()
    }

    pub fn node(&self, rc: RegularCoordinate) -> Option<NodeId> {
        self.by_coord.get(&rc).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NodeId, &RegularCoordinate)> + '_ {
        self.by_node.iter()
    }

    pub fn len(&self) -> usize {
        self.by_node.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_node.is_empty()
    }

    fn retain(&mut self, keep: impl Fn(&NodeId) -> bool) {
        self.by_node.retain(|n, _| keep(n));
        self.by_coord.retain(|_, n| keep(n));
    }
}

/// A place/transition net `(S, T, F)` built from a cycloid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Net {
    spec: CycloidSpec,
    places: BTreeSet<NodeId>,
    transitions: BTreeSet<NodeId>,
    flow: BTreeSet<(NodeId, NodeId)>,
    labels: Option<RegularLabels>,
    fold: Option<Folding>,
    preset: BTreeMap<NodeId, Vec<NodeId>>,
    postset: BTreeMap<NodeId, Vec<NodeId>>,
}

impl Net {
    /// Assembles a net from its parts, checking that the flow is bipartite over known nodes.
    pub fn from_parts(
        spec: CycloidSpec,
        places: BTreeSet<NodeId>,
        transitions: BTreeSet<NodeId>,
        flow: BTreeSet<(NodeId, NodeId)>,
        labels: Option<RegularLabels>,
        fold: Option<Folding>,
    ) -> Result<Self> {
        for p in &places {
            if !p.is_place() {
                return Err(Error::Domain(format!("{p} is not a place id")));
            }
        }
        for t in &transitions {
            if !t.is_transition() {
                return Err(Error::Domain(format!("{t} is not a transition id")));
            }
        }
        let mut preset: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
        let mut postset: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
        for &(src, dst) in &flow {
            let ok = (places.contains(&src) && transitions.contains(&dst))
                || (transitions.contains(&src) && places.contains(&dst));
            if !ok {
                return Err(Error::Domain(format!(
                    "arc {src} -> {dst} must connect a place and a transition of the net"
                )));
            }
            postset.entry(src).or_default().push(dst);
            preset.entry(dst).or_default().push(src);
        }
        if let Some(labels) = &labels {
            for (node, _) in labels.iter() {
                if !places.contains(node) && !transitions.contains(node) {
                    return Err(Error::UnknownNode(node.to_string()));
                }
            }
        }
        Ok(Net {
            spec,
            places,
            transitions,
            flow,
            labels,
            fold,
            preset,
            postset,
        })
    }

    pub fn spec(&self) -> &CycloidSpec {
        &self.spec
    }

    pub fn places(&self) -> &BTreeSet<NodeId> {
        &self.places
    }

    pub fn transitions(&self) -> &BTreeSet<NodeId> {
        &self.transitions
    }

    pub fn flow(&self) -> &BTreeSet<(NodeId, NodeId)> {
        &self.flow
    }

    pub fn labels(&self) -> Option<&RegularLabels> {
        self.labels.as_ref()
    }

    pub fn folding(&self) -> Option<&Folding> {
        self.fold.as_ref()
    }

    pub fn contains(&self, node: &NodeId) -> bool {
        self.places.contains(node) || self.transitions.contains(node)
    }

    /// Input nodes `•x`, sorted.
    pub fn preset(&self, node: &NodeId) -> &[NodeId] {
        self.preset.get(node).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Output nodes `x•`, sorted.
    pub fn postset(&self, node: &NodeId) -> &[NodeId] {
        self.postset.get(node).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn node_count(&self) -> usize {
        self.places.len() + self.transitions.len()
    }

    pub fn label(&self, node: &NodeId) -> Option<RegularCoordinate> {
        self.labels.as_ref().and_then(|l| l.label(node))
    }

    /// Node carrying a regular coordinate, with indices reduced modulo `p` and `β`.
    pub fn regular(&self, kind: RegularKind, i: i64, j: i64) -> Option<NodeId> {
        let p = self.spec.process_len()?;
        let rc = RegularCoordinate {
            kind,
            i: i.rem_euclid(p) as usize,
            j: j.rem_euclid(self.spec.beta()) as usize,
        };
        self.labels.as_ref()?.node(rc)
    }

    /// `[t_i, a_j]` if labelled and still present.
    pub fn t(&self, i: i64, j: i64) -> Option<NodeId> {
        self.regular(RegularKind::Transition, i, j)
    }

    /// `[s_i, a_j]` if labelled and still present.
    pub fn s(&self, i: i64, j: i64) -> Option<NodeId> {
        self.regular(RegularKind::FwdPlace, i, j)
    }

    /// `[s'_i, a_j]`, resolved through the folding if the place was fused into a class.
    pub fn s_bwd(&self, i: i64, j: i64) -> Option<NodeId> {
        let p = self.spec.process_len()?;
        let table = RegularTable::new(&self.spec).ok()?;
        let original = NodeId::Sb(table.point(i.rem_euclid(p), j));
        if self.places.contains(&original) {
            return Some(original);
        }
        self.fold.as_ref()?.class_of(&original)
    }

    /// Renders a node with its regular alias when one exists, e.g. `t(1,1)=t[0,2]`.
    pub fn describe(&self, node: &NodeId) -> String {
        match self.label(node) {
            Some(rc) => format!("{node}={rc}"),
            None => node.to_string(),
        }
    }

    pub(crate) fn with_labels(mut self, labels: Option<RegularLabels>) -> Self {
        self.labels = labels;
        self
    }
}

/// Builds the cycloid net: one transition per fundamental-parallelogram point,
/// each with a forward and a backward output place.
pub fn synthesize(spec: &CycloidSpec) -> Net {
    let points = algebra::fundamental_points(spec);
    let mut places = BTreeSet::new();
    let mut transitions = BTreeSet::new();
    let mut flow = BTreeSet::new();
    for &pt in &points {
        let t = NodeId::T(pt);
        transitions.insert(t);
        places.insert(NodeId::Sf(pt));
        places.insert(NodeId::Sb(pt));
        flow.insert((t, NodeId::Sf(pt)));
        flow.insert((t, NodeId::Sb(pt)));
        let fwd_in = algebra::canonical(spec, pt - Point::new(1, 0));
        let bwd_in = algebra::canonical(spec, pt - Point::new(0, 1));
        flow.insert((NodeId::Sf(fwd_in), t));
        flow.insert((NodeId::Sb(bwd_in), t));
    }
    Net::from_parts(*spec, places, transitions, flow, None, None).expect("synthesized cycloid is well formed")
}

/// Regular labels for every node of the unfolded cycloid.
pub fn regular_labels(spec: &CycloidSpec) -> Result<RegularLabels> {
    let table = RegularTable::new(spec)?;
    let mut pairs = Vec::with_capacity(3 * spec.area() as usize);
    for j in 0..table.processes() {
        for i in 0..table.process_len() {
            let pt = table.point(i as i64, j as i64);
            pairs.push((NodeId::T(pt), RegularCoordinate::transition(i, j)));
            pairs.push((NodeId::Sf(pt), RegularCoordinate::fwd(i, j)));
            pairs.push((NodeId::Sb(pt), RegularCoordinate::bwd(i, j)));
        }
    }
    RegularLabels::from_pairs(pairs)
}

/// Attaches regular coordinates to an unfolded regular cycloid.
pub fn attach_regular_labels(net: &Net) -> Result<Net> {
    if net.fold.is_some() {
        return Err(Error::Domain("regular labels must be attached before folding".into()));
    }
    let labels = regular_labels(&net.spec)?;
    for (node, _) in labels.iter() {
        if !net.contains(node) {
            return Err(Error::Domain(format!("{node} is not a node of the net")));
        }
    }
    Ok(net.clone().with_labels(Some(labels)))
}

/// Synthesizes a regular cycloid with regular labels attached.
pub fn synthesize_regular(spec: &CycloidSpec) -> Result<Net> {
    attach_regular_labels(&synthesize(spec))
}

/// The standard initial marking.
///
/// `sf(ξ,η)` is marked iff some equivalent point satisfies `−β < βξ + αη ≤ 0`, and
/// `sb(ξ,η)` iff some equivalent point satisfies `−α < βξ + αη ≤ 0`. The value
/// `βξ + αη` is invariant under the generator `(α, −β)` and shifts by `A` under
/// `(γ, δ)`, so the test reduces to a residue modulo `A`.
pub fn standard_marking(spec: &CycloidSpec) -> Marking {
    let area = spec.area();
    let mut m = Marking::new();
    for pt in algebra::fundamental_points(spec) {
        let residue = (-(spec.beta() * pt.xi + spec.alpha() * pt.eta)).rem_euclid(area);
        if residue < spec.beta() {
            m.add(NodeId::Sf(pt), 1);
        }
        if residue < spec.alpha() {
            m.add(NodeId::Sb(pt), 1);
        }
    }
    m
}

/// The `k`-regular marking. `k = 0` is defined for every cycloid; `k > 0` needs a
/// regular cycloid and `k < p`.
pub fn regular_marking(spec: &CycloidSpec, k: usize) -> Result<Marking> {
    if k == 0 {
        let mut m = Marking::new();
        for eta in (1 - spec.beta())..=0 {
            m.add(NodeId::Sf(algebra::canonical(spec, Point::new(-1, eta))), 1);
        }
        for xi in 0..spec.alpha() {
            m.add(NodeId::Sb(algebra::canonical(spec, Point::new(xi, -spec.beta()))), 1);
        }
        return Ok(m);
    }
    let p = spec.require_regular()?;
    if k as i64 >= p {
        return Err(Error::Domain(format!("k-regular marking needs k < p = {p}, got {k}")));
    }
    let table = RegularTable::new(spec)?;
    let k = k as i64;
    let mut m = Marking::new();
    m.add(NodeId::Sf(table.point(p - 1 + k, 0)), 1);
    for i in 0..spec.beta() - 1 {
        m.add(NodeId::Sf(table.point(i + k, i + 1)), 1);
    }
    for i in (p - spec.alpha())..p {
        m.add(NodeId::Sb(table.point(i + k, 0)), 1);
    }
    Ok(m)
}

/// Token count of a marking restricted to forward (`true`) or backward places.
pub fn tokens_of_kind(m: &Marking, forward: bool) -> u32 {
    m.iter()
        .filter(|(p, _)| match p {
            NodeId::Sf(_) => forward,
            NodeId::Sb(_) | NodeId::SbClass(_) => !forward,
            _ => false,
        })
        .map(|(_, c)| c)
        .sum()
}

/// Splits the places of an unfolded cycloid into its forward (or backward) cycles,
/// each listed as the sequence of transitions visited, starting from the smallest.
pub fn place_cycles(net: &Net, forward: bool) -> Vec<Vec<NodeId>> {
    let mut seen = BTreeSet::new();
    let mut cycles = Vec::new();
    for &t in net.transitions() {
        if seen.contains(&t) {
            continue;
        }
        let mut cycle = Vec::new();
        let mut at = t;
        loop {
            seen.insert(at);
            cycle.push(at);
            let place = net
                .postset(&at)
                .iter()
                .copied()
                .find(|p| {
                    if forward {
                        matches!(p, NodeId::Sf(_))
                    } else {
                        matches!(p, NodeId::Sb(_))
                    }
                })
                .expect("every cycloid transition has one forward and one backward output");
            at = net.postset(&place)[0];
            if at == t {
                break;
            }
        }
        cycles.push(cycle);
    }
    cycles
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(a: i64, b: i64, g: i64, d: i64) -> CycloidSpec {
        CycloidSpec::new(a, b, g, d).unwrap()
    }

    #[test]
    fn node_id_text_round_trip() {
        for id in [
            NodeId::T(Point::new(2, -1)),
            NodeId::Sf(Point::new(-3, 0)),
            NodeId::Sb(Point::new(0, 4)),
            NodeId::SbClass(6),
            NodeId::TStop(2),
        ] {
            assert_eq!(id.to_string().parse::<NodeId>().unwrap(), id);
        }
        assert_eq!(NodeId::T(Point::new(2, -1)).to_string(), "t(2,-1)");
        assert_eq!(NodeId::SbClass(3).to_string(), "SB{3}");
        assert!("x(1,2)".parse::<NodeId>().is_err());
        assert!("t(1;2)".parse::<NodeId>().is_err());
    }

    #[test]
    fn synthesize_sizes() {
        for (spec, t, s) in [(c(4, 3, 3, 3), 21, 42), (c(1, 1, 1, 1), 2, 4), (c(3, 2, 1, 4), 14, 28)] {
            let net = synthesize(&spec);
            assert_eq!(net.transitions().len(), t, "{spec}");
            assert_eq!(net.places().len(), s, "{spec}");
            for p in net.places() {
                assert_eq!(net.preset(p).len(), 1);
                assert_eq!(net.postset(p).len(), 1);
            }
        }
    }

    #[test]
    fn from_parts_rejects_place_to_place_arcs() {
        let a = NodeId::Sf(Point::ORIGIN);
        let b = NodeId::Sb(Point::ORIGIN);
        let err = Net::from_parts(
            c(1, 1, 1, 1),
            [a, b].into(),
            BTreeSet::new(),
            [(a, b)].into(),
            None,
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn standard_marking_counts() {
        for (spec, f, b) in [(c(4, 3, 3, 3), 3, 4), (c(1, 1, 1, 1), 1, 1), (c(2, 4, 2, 4), 4, 2)] {
            let m = standard_marking(&spec);
            assert_eq!(tokens_of_kind(&m, true), f, "{spec}");
            assert_eq!(tokens_of_kind(&m, false), b, "{spec}");
        }
    }

    #[test]
    fn regular_marking_in_regular_coordinates() {
        let spec = c(4, 3, 3, 3);
        let net = synthesize_regular(&spec).unwrap();
        let expect: Marking = [
            net.s(6, 0),
            net.s(0, 1),
            net.s(1, 2),
            net.s_bwd(3, 0),
            net.s_bwd(4, 0),
            net.s_bwd(5, 0),
            net.s_bwd(6, 0),
        ]
        .into_iter()
        .map(Option::unwrap)
        .collect();
        assert_eq!(regular_marking(&spec, 0).unwrap(), expect);
        assert_eq!(tokens_of_kind(&expect, true), 3);
        assert_eq!(tokens_of_kind(&expect, false), 4);

        let k1: Marking = [
            net.s(0, 0),
            net.s(1, 1),
            net.s(2, 2),
            net.s_bwd(4, 0),
            net.s_bwd(5, 0),
            net.s_bwd(6, 0),
            net.s_bwd(0, 0),
        ]
        .into_iter()
        .map(Option::unwrap)
        .collect();
        assert_eq!(regular_marking(&spec, 1).unwrap(), k1);
    }

    #[test]
    fn regular_marking_domain_errors() {
        assert!(regular_marking(&c(4, 2, 2, 3), 1).is_err());
        assert!(regular_marking(&c(4, 2, 2, 3), 0).is_ok());
        assert!(regular_marking(&c(4, 3, 3, 3), 7).is_err());
    }

    #[test]
    fn regular_label_flow_examples() {
        let net = synthesize_regular(&c(4, 3, 3, 3)).unwrap();
        let t22 = net.t(2, 2).unwrap();
        let bwd_in: Vec<_> = net.preset(&t22).iter().filter(|p| matches!(p, NodeId::Sb(_))).collect();
        assert_eq!(bwd_in, vec![&net.s_bwd(3, 0).unwrap()]);
        assert_eq!(net.postset(&net.s(0, 0).unwrap()), &[net.t(1, 0).unwrap()]);

        let net = synthesize_regular(&c(3, 2, 1, 4)).unwrap();
        assert_eq!(net.postset(&net.s_bwd(6, 0).unwrap()), &[net.t(3, 1).unwrap()]);
    }

    #[test]
    fn labels_require_regular_spec() {
        assert!(synthesize_regular(&c(4, 2, 2, 3)).is_err());
    }

    #[test]
    fn cycles_of_non_regular_cycloid() {
        let net = synthesize(&c(4, 2, 2, 3));
        let fwd = place_cycles(&net, true);
        let bwd = place_cycles(&net, false);
        assert_eq!(fwd.iter().map(Vec::len).collect::<Vec<_>>(), vec![16]);
        assert_eq!(bwd.iter().map(Vec::len).collect::<Vec<_>>(), vec![8, 8]);
    }
}
