use serde::{Deserialize, Serialize};

use super::check::{check_liveness, check_safety, PropertyReport};
use super::{fire, isomorphic, reachability, FiringRule, DEFAULT_MAX_STATES};
use crate::algebra::CycloidSpec;
use crate::error::{Error, Result};
use crate::net::{
    backward_fold, delete_process, fold_marking, make_stop_resilient, regular_marking, synthesize_regular, FoldSpec,
    Marking, Net, NodeId,
};

/// One round of the stop scenario on `C^stop_bf(g, c)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationReport {
    pub g: i64,
    pub c: i64,
    pub stopped: usize,
    /// Stop transition followed by the cascade to the follower marking.
    pub sequence: Vec<NodeId>,
    /// The net the result is compared with.
    pub reference: String,
    /// `c − 1 = 1`: a single process remains and there is nothing left to fold.
    pub degenerate: bool,
    pub isomorphism: PropertyReport,
    pub safety: PropertyReport,
    pub liveness: PropertyReport,
}

impl IterationReport {
    pub fn holds(&self) -> bool {
        self.isomorphism.holds() && self.safety.holds() && self.liveness.holds()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub g: i64,
    pub c: i64,
    pub s: i64,
    pub holds: bool,
    pub iterations: Vec<IterationReport>,
}

/// The reference a stopped `C^stop_bf(g, c)` must match: `C_bf(g+1, c−1, c−1, c−1)`
/// at its 1-regular marking, or the unfolded `C(g+1, 1, 1, 1)` when one process is left.
fn reference(g: i64, c: i64) -> Result<(Net, Marking, String)> {
    let spec = CycloidSpec::new(g + 1, c - 1, c - 1, c - 1)?;
    let net = synthesize_regular(&spec)?;
    let m1 = regular_marking(&spec, 1)?;
    if c - 1 == 1 {
        return Ok((net, m1, format!("{spec} at its 1-regular marking")));
    }
    let folded = backward_fold(&net, &FoldSpec::total(c - 1)?)?;
    let m = fold_marking(&folded, &m1)?;
    Ok((folded, m, format!("total fold of {spec} at its 1-regular marking")))
}

fn restrict(m: &Marking, net: &Net) -> Marking {
    let mut out = Marking::new();
    for (p, c) in m.iter().filter(|(p, _)| net.places().contains(p)) {
        out.add(*p, c);
    }
    out
}

/// Stops the last process `a_{c−1}` of `C^stop_bf(g, c)` at its regular marking, fires
/// the cascade `[t_j, a_j]` for `j = c−2, …, 0`, deletes the stopped process and the
/// stop transitions, and compares the result with the reference net.
pub fn stop_iteration(g: i64, c: i64) -> Result<IterationReport> {
    let net = make_stop_resilient(g, c)?;
    let spec = *net.spec();
    let stopped = (c - 1) as usize;
    let mut m = fold_marking(&net, &regular_marking(&spec, 0)?)?;
    let mut sequence = vec![NodeId::TStop(stopped)];
    for j in (0..c - 1).rev() {
        sequence.push(net.t(j, j).expect("regular label present"));
    }
    for t in &sequence {
        m = fire(&net, &m, t, FiringRule::Plain)?;
    }
    let reduced = delete_process(&net, stopped)?;
    let m = restrict(&m, &reduced);
    let (target, target_m, description) = reference(g, c)?;
    let isomorphism = isomorphic(&reduced, &target, Some((&m, &target_m)))?;
    let rg = reachability(&reduced, &m, FiringRule::Plain, DEFAULT_MAX_STATES)?;
    let safety = check_safety(&rg);
    let liveness = check_liveness(&rg, &[])?;
    Ok(IterationReport {
        g,
        c,
        stopped,
        sequence,
        reference: description,
        degenerate: c - 1 == 1,
        isomorphism,
        safety,
        liveness,
    })
}

/// Repeats [`stop_iteration`] `s` times, each round on a freshly built
/// `C^stop_bf(g+i, c−i)` so that stop transitions are present again.
pub fn stop_scenario(g: i64, c: i64, s: i64) -> Result<ScenarioReport> {
    if c <= 1 {
        return Err(Error::Domain(format!("stop scenario needs c > 1, got {c}")));
    }
    if s <= 0 || s >= c {
        return Err(Error::Domain(format!(
            "stop scenario needs 0 < s < c, got s = {s}, c = {c}"
        )));
    }
    let mut iterations = Vec::new();
    for i in 0..s {
        iterations.push(stop_iteration(g + i, c - i)?);
    }
    Ok(ScenarioReport {
        g,
        c,
        s,
        holds: iterations.iter().all(IterationReport::holds),
        iterations,
    })
}
