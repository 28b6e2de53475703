//! Cycloid Petri nets.
//!
//! * [`algebra`]: parameters, coordinate normalization, regular coordinates, cycle lengths.
//! * [`net`]: explicit nets, markings, backward foldings, process deletion, stop transitions.
//! * [`semantics`]: token game, reachability, safety, liveness, bisimulation, isomorphism.
//! * [`io`]: JSON, DOT and PNML serialization.

pub mod algebra;
pub mod error;
pub mod io;
pub mod net;
pub mod semantics;

pub use algebra::{CycloidSpec, Point};
pub use error::{Error, Result};
pub use net::{Marking, Net, NodeId};
