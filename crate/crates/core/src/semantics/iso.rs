use std::collections::{BTreeMap, HashMap, VecDeque};

use super::check::{Property, PropertyReport, Stats, Verdict, Witness};
use crate::error::{Error, Result};
use crate::net::{Marking, Net, NodeId};

/// Largest net (places plus transitions) the isomorphism search accepts.
pub const MAX_ISO_NODES: usize = 512;

/// Backtracking steps before the search gives up with a resource error.
const MAX_SEARCH_STEPS: usize = 5_000_000;

struct Graph {
    nodes: Vec<NodeId>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
    tokens: Vec<u32>,
}

impl Graph {
    fn new(net: &Net, marking: Option<&Marking>) -> Self {
        let nodes: Vec<NodeId> = net.transitions().iter().chain(net.places()).copied().collect();
        let index: HashMap<NodeId, usize> = nodes.iter().enumerate().map(|(i, n)| (*n, i)).collect();
        let mut out = vec![Vec::new(); nodes.len()];
        let mut inc = vec![Vec::new(); nodes.len()];
        for (a, b) in net.flow() {
            out[index[a]].push(index[b]);
            inc[index[b]].push(index[a]);
        }
        let tokens = nodes.iter().map(|n| marking.map_or(0, |m| m.get(n))).collect();
        Graph {
            nodes,
            out,
            inc,
            tokens,
        }
    }

    fn has_arc(&self, a: usize, b: usize) -> bool {
        self.out[a].contains(&b)
    }

    /// Length of the shortest directed cycle through `v`, 0 if none.
    fn girth_at(&self, v: usize) -> usize {
        let mut dist = vec![usize::MAX; self.nodes.len()];
        let mut queue = VecDeque::new();
        dist[v] = 0;
        queue.push_back(v);
        while let Some(x) = queue.pop_front() {
            for &y in &self.out[x] {
                if y == v {
                    return dist[x] + 1;
                }
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        0
    }
}

/// Colour refinement run on both graphs with a shared palette, so equal colours
/// mean equal refined signatures across the two nets.
fn refine(a: &Graph, b: &Graph) -> (Vec<usize>, Vec<usize>) {
    let initial = |g: &Graph| -> Vec<(bool, usize, usize, u32, usize)> {
        (0..g.nodes.len())
            .map(|v| {
                (
                    g.nodes[v].is_place(),
                    g.inc[v].len(),
                    g.out[v].len(),
                    g.tokens[v],
                    g.girth_at(v),
                )
            })
            .collect()
    };
    let mut palette = BTreeMap::new();
    let sig_a = initial(a);
    let sig_b = initial(b);
    for s in sig_a.iter().chain(&sig_b) {
        let next = palette.len();
        palette.entry(*s).or_insert(next);
    }
    let mut ca: Vec<usize> = sig_a.iter().map(|s| palette[s]).collect();
    let mut cb: Vec<usize> = sig_b.iter().map(|s| palette[s]).collect();
    let mut classes = palette.len();
    loop {
        let step = |g: &Graph, col: &[usize]| -> Vec<(usize, Vec<usize>, Vec<usize>)> {
            (0..g.nodes.len())
                .map(|v| {
                    let mut o: Vec<usize> = g.out[v].iter().map(|&x| col[x]).collect();
                    let mut i: Vec<usize> = g.inc[v].iter().map(|&x| col[x]).collect();
                    o.sort_unstable();
                    i.sort_unstable();
                    (col[v], o, i)
                })
                .collect()
        };
        let sa = step(a, &ca);
        let sb = step(b, &cb);
        let mut palette = BTreeMap::new();
        for s in sa.iter().chain(&sb) {
            let next = palette.len();
            palette.entry(s.clone()).or_insert(next);
        }
        ca = sa.iter().map(|s| palette[s]).collect();
        cb = sb.iter().map(|s| palette[s]).collect();
        if palette.len() == classes {
            return (ca, cb);
        }
        classes = palette.len();
    }
}

fn histogram(colors: &[usize]) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for &c in colors {
        *h.entry(c).or_insert(0) += 1;
    }
    h
}

/// Visit order for the search: breadth-first over the undirected structure, each
/// component started from a node of its rarest colour.
fn search_order(g: &Graph, colors: &[usize]) -> Vec<usize> {
    let freq = histogram(colors);
    let mut starts: Vec<usize> = (0..g.nodes.len()).collect();
    starts.sort_by_key(|&v| (freq[&colors[v]], v));
    let mut seen = vec![false; g.nodes.len()];
    let mut order = Vec::with_capacity(g.nodes.len());
    for s in starts {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &y in g.out[x].iter().chain(&g.inc[x]) {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    order
}

struct Search<'a> {
    a: &'a Graph,
    b: &'a Graph,
    ca: &'a [usize],
    cb: &'a [usize],
    order: Vec<usize>,
    map: Vec<usize>,
    inv: Vec<usize>,
    steps: usize,
}

const UNMAPPED: usize = usize::MAX;

impl Search<'_> {
    fn consistent(&self, v: usize, w: usize) -> bool {
        let (a, b) = (self.a, self.b);
        let mut mapped_out = 0;
        for &x in &a.out[v] {
            let fx = if x == v { w } else { self.map[x] };
            if fx != UNMAPPED {
                if !b.has_arc(w, fx) {
                    return false;
                }
                mapped_out += 1;
            }
        }
        let mut mapped_in = 0;
        for &x in &a.inc[v] {
            let fx = if x == v { w } else { self.map[x] };
            if fx != UNMAPPED {
                if !b.has_arc(fx, w) {
                    return false;
                }
                mapped_in += 1;
            }
        }
        let image_out = b.out[w].iter().filter(|&&y| y == w || self.inv[y] != UNMAPPED).count();
        let image_in = b.inc[w].iter().filter(|&&y| y == w || self.inv[y] != UNMAPPED).count();
        image_out == mapped_out && image_in == mapped_in
    }

    fn extend(&mut self, depth: usize) -> Result<bool> {
        if depth == self.order.len() {
            return Ok(true);
        }
        self.steps += 1;
        if self.steps > MAX_SEARCH_STEPS {
            return Err(Error::Resource(format!(
                "isomorphism search exceeded {MAX_SEARCH_STEPS} steps"
            )));
        }
        let v = self.order[depth];
        // Prefer candidates adjacent to an already-mapped neighbour's image.
        let anchor = self.a.out[v]
            .iter()
            .map(|&x| (x, true))
            .chain(self.a.inc[v].iter().map(|&x| (x, false)))
            .find(|&(x, _)| self.map[x] != UNMAPPED);
        let candidates: Vec<usize> = match anchor {
            Some((x, v_to_x)) => {
                let fx = self.map[x];
                if v_to_x {
                    self.b.inc[fx].clone()
                } else {
                    self.b.out[fx].clone()
                }
            }
            None => (0..self.b.nodes.len()).collect(),
        };
        for w in candidates {
            if self.inv[w] != UNMAPPED || self.cb[w] != self.ca[v] || !self.consistent(v, w) {
                continue;
            }
            self.map[v] = w;
            self.inv[w] = v;
            if self.extend(depth + 1)? {
                return Ok(true);
            }
            self.map[v] = UNMAPPED;
            self.inv[w] = UNMAPPED;
        }
        Ok(false)
    }
}

fn failure(note: String, steps: usize) -> PropertyReport {
    PropertyReport {
        property: Property::Isomorphic,
        verdict: Verdict::Fails,
        witness: Some(Witness {
            note: Some(note),
            ..Witness::default()
        }),
        stats: Stats {
            states: steps,
            edges: 0,
            complete: true,
        },
    }
}

/// Searches for a bijection between the nodes of `a` and `b` that maps places to
/// places, transitions to transitions, and arcs onto arcs. With markings supplied
/// it must also preserve token counts. On success the witness holds the mapping.
pub fn isomorphic(a: &Net, b: &Net, markings: Option<(&Marking, &Marking)>) -> Result<PropertyReport> {
    for net in [a, b] {
        if net.node_count() > MAX_ISO_NODES {
            return Err(Error::Resource(format!(
                "isomorphism search is limited to {MAX_ISO_NODES} nodes, net has {}",
                net.node_count()
            )));
        }
    }
    if let Some((ma, mb)) = markings {
        for (net, m) in [(a, ma), (b, mb)] {
            if let Some(p) = m.places().find(|p| !net.places().contains(p)) {
                return Err(Error::UnknownNode(p.to_string()));
            }
        }
    }
    let counts = |n: &Net| (n.transitions().len(), n.places().len(), n.flow().len());
    let (ka, kb) = (counts(a), counts(b));
    if ka != kb {
        return Ok(failure(
            format!(
                "size mismatch: |T|,|S|,|F| = {},{},{} vs {},{},{}",
                ka.0, ka.1, ka.2, kb.0, kb.1, kb.2
            ),
            0,
        ));
    }
    let ga = Graph::new(a, markings.map(|m| m.0));
    let gb = Graph::new(b, markings.map(|m| m.1));
    let (ca, cb) = refine(&ga, &gb);
    if histogram(&ca) != histogram(&cb) {
        return Ok(failure("degree, token or cycle-length signatures differ".into(), 0));
    }
    let mut search = Search {
        order: search_order(&ga, &ca),
        a: &ga,
        b: &gb,
        ca: &ca,
        cb: &cb,
        map: vec![UNMAPPED; ga.nodes.len()],
        inv: vec![UNMAPPED; gb.nodes.len()],
        steps: 0,
    };
    if !search.extend(0)? {
        return Ok(failure("no structure-preserving bijection exists".into(), search.steps));
    }
    let mut mapping: Vec<(NodeId, NodeId)> = (0..ga.nodes.len())
        .map(|v| (ga.nodes[v], gb.nodes[search.map[v]]))
        .collect();
    mapping.sort();
    validate_isomorphism(a, b, &mapping, markings)?;
    Ok(PropertyReport {
        property: Property::Isomorphic,
        verdict: Verdict::Holds,
        witness: Some(Witness {
            mapping: Some(mapping),
            ..Witness::default()
        }),
        stats: Stats {
            states: search.steps,
            edges: 0,
            complete: true,
        },
    })
}

/// Independently re-checks a mapping arc by arc. Errors describe the first defect.
pub fn validate_isomorphism(
    a: &Net,
    b: &Net,
    mapping: &[(NodeId, NodeId)],
    markings: Option<(&Marking, &Marking)>,
) -> Result<()> {
    let bad = |msg: String| Err(Error::Domain(format!("invalid isomorphism: {msg}")));
    let forward: HashMap<NodeId, NodeId> = mapping.iter().copied().collect();
    let images: std::collections::HashSet<NodeId> = mapping.iter().map(|m| m.1).collect();
    if forward.len() != mapping.len() || images.len() != mapping.len() {
        return bad("mapping is not injective".into());
    }
    if mapping.len() != a.node_count() || mapping.len() != b.node_count() {
        return bad("mapping does not cover both nets".into());
    }
    for (x, y) in mapping {
        if !a.contains(x) || !b.contains(y) {
            return bad(format!("{x} -> {y} names an unknown node"));
        }
        if x.is_place() != y.is_place() {
            return bad(format!("{x} -> {y} changes node kind"));
        }
        if let Some((ma, mb)) = markings {
            if ma.get(x) != mb.get(y) {
                return bad(format!("{x} -> {y} changes the token count"));
            }
        }
    }
    if a.flow().len() != b.flow().len() {
        return bad("arc counts differ".into());
    }
    for (x, y) in a.flow() {
        if !b.flow().contains(&(forward[x], forward[y])) {
            return bad(format!("arc {x} -> {y} has no image"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{dual, shear, CycloidSpec, ShearDirection};
    use crate::net::synthesize;

    fn c(a: i64, b: i64, g: i64, d: i64) -> CycloidSpec {
        CycloidSpec::new(a, b, g, d).unwrap()
    }

    #[test]
    fn dual_is_isomorphic() {
        let spec = c(3, 2, 1, 4);
        let r = isomorphic(&synthesize(&spec), &synthesize(&dual(&spec)), None).unwrap();
        assert!(r.holds());
        let mapping = r.witness.unwrap().mapping.unwrap();
        validate_isomorphism(&synthesize(&spec), &synthesize(&dual(&spec)), &mapping, None).unwrap();
    }

    #[test]
    fn shear_is_isomorphic() {
        let spec = c(2, 3, 4, 6);
        for dir in [ShearDirection::ReduceGamma, ShearDirection::ReduceDelta] {
            let other = shear(&spec, 1, dir).unwrap();
            assert!(isomorphic(&synthesize(&spec), &synthesize(&other), None)
                .unwrap()
                .holds());
        }
    }

    #[test]
    fn different_sizes_are_not_isomorphic() {
        let r = isomorphic(&synthesize(&c(4, 3, 3, 3)), &synthesize(&c(3, 2, 1, 4)), None).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert!(r.witness.unwrap().note.unwrap().contains("21"));
    }

    #[test]
    fn same_area_different_structure() {
        // both have 6 transitions but different cycle structure
        let r = isomorphic(&synthesize(&c(1, 1, 2, 4)), &synthesize(&c(2, 2, 1, 2)), None).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
    }

    #[test]
    fn markings_must_be_respected() {
        let spec = c(3, 2, 1, 4);
        let net = synthesize(&spec);
        let m = crate::net::standard_marking(&spec);
        assert!(isomorphic(&net, &net, Some((&m, &m))).unwrap().holds());
        let mut heavier = m.clone();
        let first = *m.places().next().unwrap();
        heavier.add(first, 1);
        assert_eq!(
            isomorphic(&net, &net, Some((&m, &heavier))).unwrap().verdict,
            Verdict::Fails
        );
    }

    #[test]
    fn validation_catches_broken_mapping() {
        let net = synthesize(&c(1, 1, 1, 1));
        let mut mapping: Vec<_> = net.transitions().iter().chain(net.places()).map(|n| (*n, *n)).collect();
        validate_isomorphism(&net, &net, &mapping, None).unwrap();
        // t(0,0) <-> t(1,0) swapped: kinds agree but arcs no longer line up
        let (t0, t1) = (mapping[0].1, mapping[1].1);
        mapping[0].1 = t1;
        mapping[1].1 = t0;
        assert!(validate_isomorphism(&net, &net, &mapping, None).is_err());
        let last = mapping.len() - 1;
        mapping.swap(0, last);
        let (a, b) = (mapping[0].1, mapping[last].1);
        mapping[0].1 = b;
        mapping[last].1 = a;
        assert!(validate_isomorphism(&net, &net, &mapping, None).is_err());
    }
}
