//! Exact integer algebra on cycloid parameters and Petri-space coordinates.
//!
//! A cycloid `C(α,β,γ,δ)` is the quotient of the integer grid by the lattice
//! spanned by the columns of `A = ((α, γ), (−β, δ))`. Every point has exactly one
//! representative in the fundamental parallelogram; here that set is defined
//! operationally as the fixed points of [`normalize`].

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A coordinate `(ξ, η)` of the Petri space.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    pub xi: i64,
    pub eta: i64,
}

impl Point {
    pub const ORIGIN: Point = Point { xi: 0, eta: 0 };

    pub const fn new(xi: i64, eta: i64) -> Self {
        Point { xi, eta }
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.xi + rhs.xi, self.eta + rhs.eta)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.xi - rhs.xi, self.eta - rhs.eta)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.xi, self.eta)
    }
}

/// The four defining parameters of a cycloid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct CycloidSpec {
    alpha: i64,
    beta: i64,
    gamma: i64,
    delta: i64,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    alpha: i64,
    beta: i64,
    gamma: i64,
    delta: i64,
}

impl TryFrom<RawSpec> for CycloidSpec {
    type Error = Error;
    fn try_from(raw: RawSpec) -> Result<Self> {
        CycloidSpec::new(raw.alpha, raw.beta, raw.gamma, raw.delta)
    }
}

impl From<CycloidSpec> for RawSpec {
    fn from(spec: CycloidSpec) -> Self {
        RawSpec {
            alpha: spec.alpha,
            beta: spec.beta,
            gamma: spec.gamma,
            delta: spec.delta,
        }
    }
}

impl CycloidSpec {
    pub fn new(alpha: i64, beta: i64, gamma: i64, delta: i64) -> Result<Self> {
        for (name, value) in [("alpha", alpha), ("beta", beta), ("gamma", gamma), ("delta", delta)] {
            if value < 1 {
                return Err(Error::InvalidParameter(format!("{name} must be >= 1, got {value}")));
            }
        }
        Ok(CycloidSpec {
            alpha,
            beta,
            gamma,
            delta,
        })
    }

    pub fn alpha(&self) -> i64 {
        self.alpha
    }

    pub fn beta(&self) -> i64 {
        self.beta
    }

    pub fn gamma(&self) -> i64 {
        self.gamma
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    /// Number of gaps in the traffic-queue reading.
    pub fn gaps(&self) -> i64 {
        self.alpha
    }

    /// Number of cars (processes) in the traffic-queue reading.
    pub fn cars(&self) -> i64 {
        self.beta
    }

    /// `A = αδ + βγ`, the number of transitions.
    pub fn area(&self) -> i64 {
        self.alpha * self.delta + self.beta * self.gamma
    }

    /// `n = α + β`.
    pub fn n(&self) -> i64 {
        self.alpha + self.beta
    }

    pub fn is_regular(&self) -> bool {
        self.delta % self.beta == 0
    }

    pub fn is_coregular(&self) -> bool {
        self.gamma % self.alpha == 0
    }

    /// Process length `p = A/β`, defined for regular cycloids.
    pub fn process_len(&self) -> Option<i64> {
        self.is_regular().then(|| self.area() / self.beta)
    }

    pub fn coprocess_len(&self) -> Option<i64> {
        self.is_coregular().then(|| self.area() / self.alpha)
    }

    pub(crate) fn require_regular(&self) -> Result<i64> {
        self.process_len()
            .ok_or_else(|| Error::Domain(format!("{self} is not regular (beta does not divide delta)")))
    }
}

impl fmt::Display for CycloidSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C({},{},{},{})", self.alpha, self.beta, self.gamma, self.delta)
    }
}

/// Where a minimal cycle length came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleSource {
    /// `α ≤ β`: the process length.
    FormulaA,
    /// `α > β` and `α | p`: `(β/α)·p`.
    FormulaB,
    /// `α > β = γ = δ`: `2β`.
    FormulaC,
    /// Breadth-first search over the synthesized transition graph.
    Search,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalCycle {
    pub value: i64,
    pub source: CycleSource,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloidMetrics {
    pub area: i64,
    pub n: i64,
    pub fwd_cycle_len: i64,
    pub bwd_cycle_len: i64,
    pub fwd_cycle_count: i64,
    pub bwd_cycle_count: i64,
    pub fwd_tokens_per_cycle: i64,
    pub bwd_tokens_per_cycle: i64,
    pub is_regular: bool,
    pub is_coregular: bool,
    pub process_len: Option<i64>,
    pub coprocess_len: Option<i64>,
    pub min_cycle: MinimalCycle,
}

pub fn metrics(spec: &CycloidSpec) -> CycloidMetrics {
    let area = spec.area();
    let fwd = spec.beta.gcd(&spec.delta);
    let bwd = spec.alpha.gcd(&spec.gamma);
    CycloidMetrics {
        area,
        n: spec.n(),
        fwd_cycle_len: area / fwd,
        bwd_cycle_len: area / bwd,
        fwd_cycle_count: fwd,
        bwd_cycle_count: bwd,
        fwd_tokens_per_cycle: spec.beta / fwd,
        bwd_tokens_per_cycle: spec.alpha / bwd,
        is_regular: spec.is_regular(),
        is_coregular: spec.is_coregular(),
        process_len: spec.process_len(),
        coprocess_len: spec.coprocess_len(),
        min_cycle: minimal_cycle_length(spec),
    }
}

/// `π(v) = B·v / A` kept as a pair of numerators over the common denominator `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParameterVector {
    pub num1: i64,
    pub num2: i64,
    pub den: i64,
}

impl ParameterVector {
    pub fn is_integral(&self) -> bool {
        self.num1 % self.den == 0 && self.num2 % self.den == 0
    }
}

pub fn parameter_vector(spec: &CycloidSpec, v: Point) -> ParameterVector {
    ParameterVector {
        num1: spec.delta * v.xi - spec.gamma * v.eta,
        num2: spec.beta * v.xi + spec.alpha * v.eta,
        den: spec.area(),
    }
}

pub fn equivalent(spec: &CycloidSpec, a: Point, b: Point) -> bool {
    parameter_vector(spec, b - a).is_integral()
}

/// Result of mapping a point into the fundamental parallelogram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizationWitness {
    pub m: i64,
    pub n_steps: i64,
    pub representative: Point,
}

/// Maps `u` to its unique equivalent in the fundamental parallelogram.
///
/// `m = ⌊(ξδ − ηγ)/A⌋`, `n = ⌊(ηα + ξβ)/A⌋` and the representative is
/// `u − A·(m, n)`. Floors round toward negative infinity.
pub fn normalize(spec: &CycloidSpec, u: Point) -> NormalizationWitness {
    let pv = parameter_vector(spec, u);
    let m = num_integer::div_floor(pv.num1, pv.den);
    let n_steps = num_integer::div_floor(pv.num2, pv.den);
    let representative = Point::new(
        u.xi - (spec.alpha * m + spec.gamma * n_steps),
        u.eta - (-spec.beta * m + spec.delta * n_steps),
    );
    NormalizationWitness {
        m,
        n_steps,
        representative,
    }
}

pub fn canonical(spec: &CycloidSpec, u: Point) -> Point {
    normalize(spec, u).representative
}

/// Membership in the fundamental parallelogram: `normalize` is the identity.
pub fn in_fundamental_parallelogram(spec: &CycloidSpec, u: Point) -> bool {
    let w = normalize(spec, u);
    w.m == 0 && w.n_steps == 0
}

/// All transition coordinates of the fundamental parallelogram in `(ξ, η)` order.
///
/// The parallelogram is spanned by `(α, −β)` and `(γ, δ)` from the origin, so its
/// points lie in the box `[0, α+γ) × (−β, δ)`.
pub fn fundamental_points(spec: &CycloidSpec) -> Vec<Point> {
    let mut out = Vec::with_capacity(spec.area() as usize);
    for xi in 0..spec.alpha + spec.gamma {
        for eta in -spec.beta..spec.delta {
            let p = Point::new(xi, eta);
            if in_fundamental_parallelogram(spec, p) {
                out.push(p);
            }
        }
    }
    debug_assert_eq!(out.len() as i64, spec.area());
    out
}

pub fn dual(spec: &CycloidSpec) -> CycloidSpec {
    CycloidSpec {
        alpha: spec.beta,
        beta: spec.alpha,
        gamma: spec.delta,
        delta: spec.gamma,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShearDirection {
    /// `C(α, β, γ − qα, δ + qβ)`, needs `γ > qα`.
    ReduceGamma,
    /// `C(α, β, γ + qα, δ − qβ)`, needs `δ > qβ`.
    ReduceDelta,
}

pub fn shear(spec: &CycloidSpec, q: i64, direction: ShearDirection) -> Result<CycloidSpec> {
    if q < 1 {
        return Err(Error::InvalidParameter(format!("shear factor q must be >= 1, got {q}")));
    }
    let CycloidSpec {
        alpha,
        beta,
        gamma,
        delta,
    } = *spec;
    match direction {
        ShearDirection::ReduceGamma => {
            if gamma <= q * alpha {
                return Err(Error::Domain(format!(
                    "shear requires gamma > q*alpha, but {gamma} <= {}",
                    q * alpha
                )));
            }
            CycloidSpec::new(alpha, beta, gamma - q * alpha, delta + q * beta)
        }
        ShearDirection::ReduceDelta => {
            if delta <= q * beta {
                return Err(Error::Domain(format!(
                    "shear requires delta > q*beta, but {delta} <= {}",
                    q * beta
                )));
            }
            CycloidSpec::new(alpha, beta, gamma + q * alpha, delta - q * beta)
        }
    }
}

/// Closed forms for the minimal cycle length of regular cycloids, when one applies.
pub fn minimal_cycle_formula(spec: &CycloidSpec) -> Option<MinimalCycle> {
    let p = spec.process_len()?;
    let CycloidSpec {
        alpha,
        beta,
        gamma,
        delta,
    } = *spec;
    if alpha <= beta {
        Some(MinimalCycle {
            value: p,
            source: CycleSource::FormulaA,
        })
    } else if p % alpha == 0 {
        Some(MinimalCycle {
            value: beta * p / alpha,
            source: CycleSource::FormulaB,
        })
    } else if beta == gamma && gamma == delta {
        Some(MinimalCycle {
            value: 2 * beta,
            source: CycleSource::FormulaC,
        })
    } else {
        None
    }
}

/// Shortest directed cycle through the origin transition.
///
/// Every transition `t(ξ,η)` reaches `t(ξ+1,η)` through its forward output place
/// and `t(ξ,η+1)` through its backward output place, so a breadth-first search over
/// canonical transition coordinates finds the shortest return to the origin.
pub fn minimal_cycle_search(spec: &CycloidSpec) -> i64 {
    use std::collections::VecDeque;
    let mut dist: HashMap<Point, i64> = HashMap::new();
    let mut queue = VecDeque::new();
    dist.insert(Point::ORIGIN, 0);
    queue.push_back(Point::ORIGIN);
    while let Some(at) = queue.pop_front() {
        let d = dist[&at];
        for step in [Point::new(1, 0), Point::new(0, 1)] {
            let next = canonical(spec, at + step);
            if next == Point::ORIGIN {
                return d + 1;
            }
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(next) {
                e.insert(d + 1);
                queue.push_back(next);
            }
        }
    }
    unreachable!("every cycloid transition lies on a cycle")
}

pub fn minimal_cycle_length(spec: &CycloidSpec) -> MinimalCycle {
    minimal_cycle_formula(spec).unwrap_or_else(|| MinimalCycle {
        value: minimal_cycle_search(spec),
        source: CycleSource::Search,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegularKind {
    Transition,
    FwdPlace,
    BwdPlace,
}

/// Per-process naming `[t_i, a_j]`, `[s_i, a_j]`, `[s'_i, a_j]` of a regular cycloid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RegularCoordinate {
    pub kind: RegularKind,
    pub i: usize,
    pub j: usize,
}

impl RegularCoordinate {
    pub const fn transition(i: usize, j: usize) -> Self {
        RegularCoordinate {
            kind: RegularKind::Transition,
            i,
            j,
        }
    }

    pub const fn fwd(i: usize, j: usize) -> Self {
        RegularCoordinate {
            kind: RegularKind::FwdPlace,
            i,
            j,
        }
    }

    pub const fn bwd(i: usize, j: usize) -> Self {
        RegularCoordinate {
            kind: RegularKind::BwdPlace,
            i,
            j,
        }
    }
}

impl fmt::Display for RegularCoordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = match self.kind {
            RegularKind::Transition => "t",
            RegularKind::FwdPlace => "s",
            RegularKind::BwdPlace => "s'",
        };
        write!(f, "{head}[{},{}]", self.i, self.j)
    }
}

impl std::str::FromStr for RegularCoordinate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            path: String::new(),
            message: format!("malformed regular coordinate {s:?}"),
        };
        let (head, rest) = s.split_once('[').ok_or_else(bad)?;
        let kind = match head {
            "t" => RegularKind::Transition,
            "s" => RegularKind::FwdPlace,
            "s'" => RegularKind::BwdPlace,
            _ => return Err(bad()),
        };
        let (i, j) = rest.strip_suffix(']').and_then(|r| r.split_once(',')).ok_or_else(bad)?;
        Ok(RegularCoordinate {
            kind,
            i: i.trim().parse().map_err(|_| bad())?,
            j: j.trim().parse().map_err(|_| bad())?,
        })
    }
}

/// Standard coordinate of the regular transition `[t_i, a_j]`: the canonical form of `(i−j, −j)`.
pub fn stand(spec: &CycloidSpec, rc: RegularCoordinate) -> Result<Point> {
    let p = spec.require_regular()?;
    if rc.kind != RegularKind::Transition {
        return Err(Error::Domain(format!("stand is defined on transitions, got {rc}")));
    }
    if rc.i as i64 >= p || rc.j as i64 >= spec.beta {
        return Err(Error::Domain(format!(
            "{rc} out of range for p={p}, beta={}",
            spec.beta
        )));
    }
    let (i, j) = (rc.i as i64, rc.j as i64);
    Ok(canonical(spec, Point::new(i - j, -j)))
}

/// Bidirectional table between regular transition coordinates and canonical points.
#[derive(Clone, Debug)]
pub struct RegularTable {
    spec: CycloidSpec,
    process_len: usize,
    to_point: Vec<Point>,
    to_label: HashMap<Point, (usize, usize)>,
}

impl RegularTable {
    pub fn new(spec: &CycloidSpec) -> Result<Self> {
        let p = spec.require_regular()? as usize;
        let beta = spec.beta as usize;
        let mut to_point = Vec::with_capacity(p * beta);
        let mut to_label = HashMap::with_capacity(p * beta);
        for j in 0..beta {
            for i in 0..p {
                let pt = stand(spec, RegularCoordinate::transition(i, j))?;
                to_point.push(pt);
                to_label.insert(pt, (i, j));
            }
        }
        debug_assert_eq!(to_label.len(), p * beta, "stand must be injective");
        Ok(RegularTable {
            spec: *spec,
            process_len: p,
            to_point,
            to_label,
        })
    }

    pub fn spec(&self) -> &CycloidSpec {
        &self.spec
    }

    pub fn process_len(&self) -> usize {
        self.process_len
    }

    pub fn processes(&self) -> usize {
        self.spec.beta as usize
    }

    /// Canonical point of `[t_i, a_j]`; indices are reduced modulo `p` and `β`.
    pub fn point(&self, i: i64, j: i64) -> Point {
        let i = i.rem_euclid(self.process_len as i64) as usize;
        let j = j.rem_euclid(self.spec.beta) as usize;
        self.to_point[j * self.process_len + i]
    }

    /// `(i, j)` of the transition equivalent to `pt`.
    pub fn label(&self, pt: Point) -> (usize, usize) {
        self.to_label[&canonical(&self.spec, pt)]
    }
}

/// Inverse of [`stand`]: the regular coordinate of the transition equivalent to `pt`.
pub fn regular_label(spec: &CycloidSpec, pt: Point) -> Result<RegularCoordinate> {
    let (i, j) = RegularTable::new(spec)?.label(pt);
    Ok(RegularCoordinate::transition(i, j))
}
