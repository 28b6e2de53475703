//! Backward foldings, bf-paths and process deletion on regular cycloids.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Marking, Net, NodeId};
use crate::algebra::{CycloidSpec, RegularKind, RegularTable};
use crate::error::{Error, Result};

/// The set `D` of back indices whose backward places are fused.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FoldSpec {
    back_indices: BTreeSet<usize>,
}

impl FoldSpec {
    pub fn new(back_indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let back_indices: BTreeSet<usize> = back_indices.into_iter().collect();
        if back_indices.len() < 2 {
            return Err(Error::Domain(format!(
                "a backward folding needs |D| > 1, got D = {back_indices:?}"
            )));
        }
        Ok(FoldSpec { back_indices })
    }

    /// `D = {0, …, β−1}`.
    pub fn total(beta: i64) -> Result<Self> {
        FoldSpec::new(0..beta.max(0) as usize)
    }

    pub fn back_indices(&self) -> &BTreeSet<usize> {
        &self.back_indices
    }

    pub fn contains(&self, j: usize) -> bool {
        self.back_indices.contains(&j)
    }

    pub fn is_total(&self, beta: i64) -> bool {
        self.back_indices.len() as i64 == beta && self.validate(beta).is_ok()
    }

    pub fn validate(&self, beta: i64) -> Result<()> {
        if beta <= 1 {
            return Err(Error::Domain(format!("a backward folding needs beta > 1, got {beta}")));
        }
        if self.back_indices.len() < 2 {
            return Err(Error::Domain("a backward folding needs |D| > 1".into()));
        }
        if let Some(&j) = self.back_indices.iter().find(|&&j| j as i64 >= beta) {
            return Err(Error::Domain(format!("back index {j} out of range [0, {beta})")));
        }
        Ok(())
    }
}

/// One fused class `S^D_i` of backward places, listed by their unfolded ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldClass {
    pub index: usize,
    pub members: Vec<NodeId>,
}

/// Record of a backward folding carried by the folded net.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Folding {
    spec: FoldSpec,
    classes: BTreeMap<usize, Vec<NodeId>>,
    class_of: BTreeMap<NodeId, usize>,
}

impl Folding {
    pub fn from_classes(spec: FoldSpec, classes: impl IntoIterator<Item = FoldClass>) -> Result<Self> {
        let mut by_index = BTreeMap::new();
        let mut class_of = BTreeMap::new();
        for class in classes {
            for &m in &class.members {
                if !matches!(m, NodeId::Sb(_)) {
                    return Err(Error::Domain(format!("fold class member {m} is not a backward place")));
                }
                if class_of.insert(m, class.index).is_some() {
                    return Err(Error::Domain(format!("{m} belongs to two fold classes")));
                }
            }
            if by_index.insert(class.index, class.members).is_some() {
                return Err(Error::Domain(format!("duplicate fold class {}", class.index)));
            }
        }
        Ok(Folding {
            spec,
            classes: by_index,
            class_of,
        })
    }

    pub fn spec(&self) -> &FoldSpec {
        &self.spec
    }

    pub fn classes(&self) -> impl Iterator<Item = FoldClass> + '_ {
        self.classes.iter().map(|(&index, members)| FoldClass {
            index,
            members: members.clone(),
        })
    }

    pub fn members(&self, index: usize) -> Option<&[NodeId]> {
        self.classes.get(&index).map(Vec::as_slice)
    }

    /// The class place an unfolded backward place was fused into.
    pub fn class_of(&self, place: &NodeId) -> Option<NodeId> {
        self.class_of.get(place).map(|&i| NodeId::SbClass(i))
    }
}

/// The classes of `≡_bf(D)` with more than one member, indexed `0..p`.
///
/// With `n = α + β`, class `i` is `{[s'_i, a_0]} ∪ {[s'_{i⊕n}, a_j] | j ∈ D∖{0}}` when
/// `0 ∈ D` and `{[s'_{i⊕n}, a_j] | j ∈ D}` otherwise.
pub fn fold_classes(spec: &CycloidSpec, d: &FoldSpec) -> Result<Vec<FoldClass>> {
    let p = spec.require_regular()?;
    d.validate(spec.beta())?;
    let table = RegularTable::new(spec)?;
    let n = spec.n();
    Ok((0..p)
        .map(|i| {
            let mut members = Vec::with_capacity(d.back_indices.len());
            for &j in &d.back_indices {
                let idx = if j == 0 { i } else { i + n };
                members.push(NodeId::Sb(table.point(idx, j as i64)));
            }
            FoldClass {
                index: i as usize,
                members,
            }
        })
        .collect())
}

/// Fuses the backward places of each fold class into one `SB{i}` place.
pub fn backward_fold(net: &Net, d: &FoldSpec) -> Result<Net> {
    if net.folding().is_some() {
        return Err(Error::Domain("net is already folded".into()));
    }
    let labels = net
        .labels()
        .ok_or_else(|| Error::Domain("backward folding needs a regularly labelled cycloid".into()))?;
    if net.transitions().iter().any(|t| matches!(t, NodeId::TStop(_))) {
        return Err(Error::Domain("backward folding applies to plain cycloids only".into()));
    }
    let classes = fold_classes(net.spec(), d)?;
    let folding = Folding::from_classes(d.clone(), classes)?;
    let map = |x: NodeId| folding.class_of(&x).unwrap_or(x);

    let mut places = BTreeSet::new();
    for &p in net.places() {
        places.insert(map(p));
    }
    let flow: BTreeSet<_> = net.flow().iter().map(|&(a, b)| (map(a), map(b))).collect();
    if flow.len() != net.flow().len() {
        return Err(Error::Domain("folding merged parallel arcs".into()));
    }
    let mut labels = labels.clone();
    labels.retain(|n| places.contains(n) || net.transitions().contains(n));
    let folded = Net::from_parts(
        *net.spec(),
        places,
        net.transitions().clone(),
        flow,
        Some(labels),
        Some(folding),
    )?;
    let k = d.back_indices.len();
    for class in folded.folding().into_iter().flat_map(Folding::classes) {
        let id = NodeId::SbClass(class.index);
        debug_assert_eq!(folded.preset(&id).len(), k);
        debug_assert_eq!(folded.postset(&id).len(), k);
    }
    Ok(folded)
}

/// Maps a marking of the unfolded net through the class map: `[M]_D`.
pub fn fold_marking(folded: &Net, m: &Marking) -> Result<Marking> {
    let mut out = Marking::new();
    for (place, count) in m.iter() {
        let target = if folded.places().contains(place) {
            *place
        } else {
            folded
                .folding()
                .and_then(|f| f.class_of(place))
                .ok_or_else(|| Error::UnknownNode(place.to_string()))?
        };
        out.add(target, count);
    }
    Ok(out)
}

/// The bf-path of class `i`: from `[s'_i, a_0]` through every other member to
/// `[t_{(i+n−1) mod p}, a_0]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BfPath {
    pub index: usize,
    pub nodes: Vec<NodeId>,
    /// Forward place shared with process `a_j`, for `1 ≤ j < β`.
    pub shared: Vec<(usize, NodeId)>,
}

pub fn bf_path(spec: &CycloidSpec, i: usize) -> Result<BfPath> {
    let p = spec.require_regular()?;
    if i as i64 >= p {
        return Err(Error::Domain(format!("bf-path index {i} out of range [0, {p})")));
    }
    let table = RegularTable::new(spec)?;
    let beta = spec.beta();
    let end = i as i64 + spec.n() - 1;
    let mut nodes = vec![
        NodeId::Sb(table.point(i as i64, 0)),
        NodeId::T(table.point(end, beta - 1)),
    ];
    let mut shared = Vec::new();
    for j in (1..beta).rev() {
        let place = NodeId::Sf(table.point(end, j));
        shared.push((j as usize, place));
        nodes.push(place);
        nodes.push(NodeId::T(table.point(end + 1, j)));
        nodes.push(NodeId::Sb(table.point(end + 1, j)));
        nodes.push(NodeId::T(table.point(end, j - 1)));
    }
    shared.reverse();
    Ok(BfPath {
        index: i,
        nodes,
        shared,
    })
}

/// `C(α+1, β−1, p−(α+1), β−1)`: one process fewer, same process length.
pub fn reduced_spec(spec: &CycloidSpec) -> Result<CycloidSpec> {
    let p = spec.require_regular()?;
    if spec.beta() <= 1 {
        return Err(Error::Domain("process elimination needs beta > 1".into()));
    }
    let gamma = p - (spec.alpha() + 1);
    if gamma < 1 {
        return Err(Error::Domain(format!(
            "process elimination needs p > alpha + 1, got p = {p}, alpha = {}",
            spec.alpha()
        )));
    }
    CycloidSpec::new(spec.alpha() + 1, spec.beta() - 1, gamma, spec.beta() - 1)
}

/// Removes all transitions and forward places of process `a_j`, plus every stop transition.
pub fn delete_process(net: &Net, j: usize) -> Result<Net> {
    if net.folding().is_none() {
        return Err(Error::Domain("process deletion applies to folded cycloids".into()));
    }
    let labels = net
        .labels()
        .ok_or_else(|| Error::Domain("process deletion needs regular labels".into()))?;
    let beta = net.spec().beta();
    if beta <= 1 {
        return Err(Error::Domain("process deletion needs beta > 1".into()));
    }
    if j as i64 >= beta {
        return Err(Error::Domain(format!("process index {j} out of range [0, {beta})")));
    }
    let doomed = |n: &NodeId| match n {
        NodeId::TStop(_) => true,
        _ => labels
            .label(n)
            .is_some_and(|rc| rc.j == j && matches!(rc.kind, RegularKind::Transition | RegularKind::FwdPlace)),
    };
    let places: BTreeSet<_> = net.places().iter().copied().filter(|n| !doomed(n)).collect();
    let transitions: BTreeSet<_> = net.transitions().iter().copied().filter(|n| !doomed(n)).collect();
    let flow = net
        .flow()
        .iter()
        .copied()
        .filter(|(a, b)| !doomed(a) && !doomed(b))
        .collect();
    let mut labels = labels.clone();
    labels.retain(|n| !doomed(n));
    Net::from_parts(
        *net.spec(),
        places,
        transitions,
        flow,
        Some(labels),
        net.folding().cloned(),
    )
}
