//! Stop-resilient extensions of folded cycloids.

use std::collections::BTreeSet;

use super::fold::{backward_fold, FoldSpec};
use super::{synthesize_regular, Net, NodeId};
use crate::algebra::CycloidSpec;
use crate::error::{Error, Result};

/// Adds `[t_stop, a_j]` for each requested process of a folded regular cycloid.
///
/// The stop transition consumes the control place `[s_{j⊖1}, a_j]` and produces the
/// (folded) backward output place of `[t_j, a_j]`. Unless `force` is set the net
/// must be the total folding of some `C(g,c,c,c)`.
pub fn add_stop_transitions(net: &Net, processes: &BTreeSet<usize>, force: bool) -> Result<Net> {
    let spec = *net.spec();
    let folding = net
        .folding()
        .ok_or_else(|| Error::Domain("stop transitions are added to folded cycloids".into()))?;
    if net.labels().is_none() {
        return Err(Error::Domain("stop transitions need regular labels".into()));
    }
    let beta = spec.beta();
    if beta <= 1 {
        return Err(Error::Domain("stop-resilient cycloids need c > 1".into()));
    }
    if !force {
        let standard_shape = spec.gamma() == beta && spec.delta() == beta;
        if !standard_shape || !folding.spec().is_total(beta) {
            return Err(Error::Domain(format!(
                "stop-resilient cycloids are total foldings of C(g,c,c,c); {spec} needs force"
            )));
        }
    }
    let mut places = net.places().clone();
    let mut transitions = net.transitions().clone();
    let mut flow = net.flow().clone();
    for &j in processes {
        if j as i64 >= beta {
            return Err(Error::Domain(format!("process index {j} out of range [0, {beta})")));
        }
        let stop = NodeId::TStop(j);
        if !transitions.insert(stop) {
            return Err(Error::Domain(format!("{stop} already present")));
        }
        let missing = || Error::Domain(format!("process a_{j} has been deleted"));
        let control = net.s(j as i64 - 1, j as i64).ok_or_else(missing)?;
        let permit = net.s_bwd(j as i64, j as i64).ok_or_else(missing)?;
        places.insert(permit);
        flow.insert((control, stop));
        flow.insert((stop, permit));
    }
    Net::from_parts(
        spec,
        places,
        transitions,
        flow,
        net.labels().cloned(),
        net.folding().cloned(),
    )
}

/// `C^stop_bf(g, c)`: the total folding of `C(g,c,c,c)` with a stop transition per process.
pub fn make_stop_resilient(g: i64, c: i64) -> Result<Net> {
    if c <= 1 {
        return Err(Error::Domain(format!("stop-resilient cycloids need c > 1, got {c}")));
    }
    let spec = CycloidSpec::new(g, c, c, c)?;
    let folded = backward_fold(&synthesize_regular(&spec)?, &FoldSpec::total(c)?)?;
    add_stop_transitions(&folded, &(0..c as usize).collect(), false)
}
