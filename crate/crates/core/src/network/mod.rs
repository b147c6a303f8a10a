//! Planar networks: construction, concatenation, restriction and I/O.
//!
//! Nodes carry exact rational coordinates. Node ids are assigned in `(x, y)`
//! order, which is a topological order because every edge strictly increases
//! `x`. Edges are stored sorted by `(tail.x, tail.y, head.x, head.y)` and a
//! weighting is a vector indexed by that order.
//!
//! Matrix indices count from the top: source/sink index `i` (0-based) sits
//! on the line `y = n - i`. With this convention the correspondence matrix of
//! the staircase network [`build_gamma0`] is upper-triangular.

mod correspondence;
mod paths;
mod transfer;

pub use correspondence::{
    complex_lift, complex_lift_scaled, compound_log_singular, correspondence_matrix,
    correspondence_matrix_enumerated, Filtration, m_all, m_all_enumerated, m_k, minor, minor_enumerated,
    minor_table, tropical_gz, tropical_gz_enumerated, tropical_singular_values,
};
pub use paths::{enumerate_all_kpaths, enumerate_kpaths, single_paths, MultiPath};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{HornError, Result};
use crate::rational::{from_i64, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeTag {
    Horizontal,
    Diagonal,
    SinkHorizontal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: usize,
    #[serde(with = "crate::rational::serde_rational")]
    pub x: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub y: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub tag: EdgeTag,
}

/// Edge-indexed weights.
pub type Weighting<S> = Vec<S>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarNetwork {
    rank: usize,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    sources: Vec<usize>,
    sinks: Vec<usize>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
    source_index: Vec<Option<usize>>,
    sink_index: Vec<Option<usize>>,
}

#[derive(Serialize, Deserialize)]
struct NetworkJson {
    rank: usize,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
}

impl PlanarNetwork {
    /// Build from raw parts, renumbering nodes into `(x, y)` order and sorting
    /// edges. Validates orientation, boundary layout and planarity.
    pub fn from_parts(rank: usize, coords: Vec<(Rational, Rational)>, raw_edges: Vec<(usize, usize, EdgeTag)>) -> Result<Self> {
        if rank == 0 {
            return Err(HornError::ZeroRank);
        }
        let mut order: Vec<usize> = (0..coords.len()).collect();
        order.sort_by(|&a, &b| (&coords[a].0, &coords[a].1).cmp(&(&coords[b].0, &coords[b].1)));
        for w in order.windows(2) {
            if coords[w[0]] == coords[w[1]] {
                return Err(HornError::MalformedNetwork(format!("duplicate node at {:?}", coords[w[0]])));
            }
        }
        let mut new_id = vec![0; coords.len()];
        for (new, &old) in order.iter().enumerate() {
            new_id[old] = new;
        }
        let nodes: Vec<Node> = order
            .iter()
            .enumerate()
            .map(|(id, &old)| Node { id, x: coords[old].0.clone(), y: coords[old].1.clone() })
            .collect();
        let mut edges = Vec::with_capacity(raw_edges.len());
        for (t, h, tag) in raw_edges {
            if t >= coords.len() || h >= coords.len() {
                return Err(HornError::MalformedNetwork(format!("edge ({t},{h}) references a missing node")));
            }
            edges.push(Edge { tail: new_id[t], head: new_id[h], tag });
        }
        Self::assemble(rank, nodes, edges)
    }

    fn assemble(rank: usize, nodes: Vec<Node>, mut edges: Vec<Edge>) -> Result<Self> {
        edges.sort_by_key(|e| (e.tail, e.head, e.tag));
        for w in edges.windows(2) {
            if w[0].tail == w[1].tail && w[0].head == w[1].head {
                return Err(HornError::MalformedNetwork("parallel edges".into()));
            }
        }
        for e in &edges {
            if nodes[e.tail].x >= nodes[e.head].x {
                return Err(HornError::MalformedNetwork(format!(
                    "edge {} -> {} is not oriented left to right",
                    e.tail, e.head
                )));
            }
        }
        let n_nodes = nodes.len();
        let mut out_edges = vec![Vec::new(); n_nodes];
        let mut in_edges = vec![Vec::new(); n_nodes];
        for (k, e) in edges.iter().enumerate() {
            out_edges[e.tail].push(k);
            in_edges[e.head].push(k);
        }
        let min_x = nodes.iter().map(|v| &v.x).min().cloned().unwrap_or_else(Rational::zero);
        let max_x = nodes.iter().map(|v| &v.x).max().cloned().unwrap_or_else(Rational::zero);
        let mut sources = vec![usize::MAX; rank];
        let mut sinks = vec![usize::MAX; rank];
        for v in &nodes {
            let on_left = v.x == min_x;
            let on_right = v.x == max_x;
            if !on_left && !on_right {
                continue;
            }
            let slot = line_index(rank, &v.y).ok_or_else(|| {
                HornError::MalformedNetwork(format!("boundary node {} has height {} outside 1..{rank}", v.id, v.y))
            })?;
            let list = if on_left { &mut sources } else { &mut sinks };
            if list[slot] != usize::MAX {
                return Err(HornError::MalformedNetwork(format!("two boundary nodes at height {}", v.y)));
            }
            list[slot] = v.id;
        }
        if sources.contains(&usize::MAX) || sinks.contains(&usize::MAX) {
            return Err(HornError::MalformedNetwork(format!("need {rank} sources and {rank} sinks at heights 1..{rank}")));
        }
        for &s in &sources {
            if !in_edges[s].is_empty() {
                return Err(HornError::MalformedNetwork("source with incoming edge".into()));
            }
        }
        for &s in &sinks {
            if !out_edges[s].is_empty() {
                return Err(HornError::MalformedNetwork("sink with outgoing edge".into()));
            }
        }
        let mut source_index = vec![None; n_nodes];
        let mut sink_index = vec![None; n_nodes];
        for (i, &s) in sources.iter().enumerate() {
            source_index[s] = Some(i);
        }
        for (i, &s) in sinks.iter().enumerate() {
            sink_index[s] = Some(i);
        }
        let g = PlanarNetwork { rank, nodes, edges, sources, sinks, out_edges, in_edges, source_index, sink_index };
        g.check_planar()?;
        Ok(g)
    }

    fn check_planar(&self) -> Result<()> {
        let pt = |v: usize| (&self.nodes[v].x, &self.nodes[v].y);
        for (a, ea) in self.edges.iter().enumerate() {
            for eb in &self.edges[a + 1..] {
                let shared = [ea.tail, ea.head].iter().any(|v| *v == eb.tail || *v == eb.head);
                if shared {
                    continue;
                }
                if segments_meet(pt(ea.tail), pt(ea.head), pt(eb.tail), pt(eb.head)) {
                    return Err(HornError::MalformedNetwork(format!(
                        "edges {}->{} and {}->{} cross",
                        ea.tail, ea.head, eb.tail, eb.head
                    )));
                }
            }
        }
        for v in &self.nodes {
            for e in &self.edges {
                if e.tail == v.id || e.head == v.id {
                    continue;
                }
                if point_on_segment((&v.x, &v.y), pt(e.tail), pt(e.head)) {
                    return Err(HornError::MalformedNetwork(format!("node {} lies on an edge interior", v.id)));
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Source node ids by matrix index.
    pub fn sources(&self) -> &[usize] {
        &self.sources
    }

    pub fn sinks(&self) -> &[usize] {
        &self.sinks
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    pub fn source_index(&self, v: usize) -> Option<usize> {
        self.source_index[v]
    }

    pub fn sink_index(&self, v: usize) -> Option<usize> {
        self.sink_index[v]
    }

    pub fn count_tag(&self, tag: EdgeTag) -> usize {
        self.edges.iter().filter(|e| e.tag == tag).count()
    }

    /// Edge ids carrying `tag`, in storage order.
    pub fn edges_with_tag(&self, tag: EdgeTag) -> Vec<usize> {
        (0..self.edges.len()).filter(|&k| self.edges[k].tag == tag).collect()
    }

    pub fn check_weighting<S>(&self, w: &[S]) -> Result<()> {
        if w.len() != self.edges.len() {
            return Err(HornError::SizeMismatch { expected: self.edges.len(), found: w.len() });
        }
        Ok(())
    }

    fn min_x(&self) -> &Rational {
        &self.nodes[self.sources[0]].x
    }

    fn max_x(&self) -> &Rational {
        &self.nodes[self.sinks[0]].x
    }

    pub fn to_json(&self) -> Result<String> {
        let j = NetworkJson { rank: self.rank, nodes: self.nodes.clone(), edges: self.edges.clone() };
        Ok(serde_json::to_string_pretty(&j)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: NetworkJson = serde_json::from_str(s)?;
        let coords = j.nodes.iter().map(|v| (v.x.clone(), v.y.clone())).collect::<Vec<_>>();
        let mut pos = std::collections::HashMap::new();
        for (k, v) in j.nodes.iter().enumerate() {
            if pos.insert(v.id, k).is_some() {
                return Err(HornError::MalformedNetwork(format!("duplicate node id {}", v.id)));
            }
        }
        let lookup = |id: usize| pos.get(&id).copied().ok_or_else(|| HornError::MalformedNetwork(format!("unknown node id {id}")));
        let edges = j
            .edges
            .iter()
            .map(|e| Ok((lookup(e.tail)?, lookup(e.head)?, e.tag)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(j.rank, coords, edges)
    }

    /// Graphviz rendering with pinned coordinates.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph network {\n  rankdir=LR;\n  node [shape=point];\n");
        for v in &self.nodes {
            let label = match (self.source_index[v.id], self.sink_index[v.id]) {
                (Some(i), _) => format!(", xlabel=\"s{}\"", i + 1),
                (_, Some(j)) => format!(", xlabel=\"t{}\"", j + 1),
                _ => String::new(),
            };
            s.push_str(&format!(
                "  n{} [pos=\"{},{}!\"{}];\n",
                v.id,
                crate::rational::to_f64(&v.x),
                crate::rational::to_f64(&v.y),
                label
            ));
        }
        for (k, e) in self.edges.iter().enumerate() {
            let style = match e.tag {
                EdgeTag::Horizontal => "solid",
                EdgeTag::Diagonal => "dashed",
                EdgeTag::SinkHorizontal => "bold",
            };
            s.push_str(&format!("  n{} -> n{} [label=\"e{}\", style={}];\n", e.tail, e.head, k, style));
        }
        s.push_str("}\n");
        s
    }
}

/// Matrix index of the line at height `y` in a rank-`n` network.
fn line_index(n: usize, y: &Rational) -> Option<usize> {
    if !y.denom().is_one() {
        return None;
    }
    let yi: i64 = y.numer().try_into().ok()?;
    (1..=n as i64).contains(&yi).then(|| n - yi as usize)
}

fn orient(a: (&Rational, &Rational), b: (&Rational, &Rational), c: (&Rational, &Rational)) -> i32 {
    let v = (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

fn point_on_segment(p: (&Rational, &Rational), a: (&Rational, &Rational), b: (&Rational, &Rational)) -> bool {
    orient(a, b, p) == 0
        && p.0 >= a.0.min(b.0)
        && p.0 <= a.0.max(b.0)
        && p.1 >= a.1.min(b.1)
        && p.1 <= a.1.max(b.1)
}

fn segments_meet(a: (&Rational, &Rational), b: (&Rational, &Rational), c: (&Rational, &Rational), d: (&Rational, &Rational)) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && point_on_segment(c, a, b))
        || (o2 == 0 && point_on_segment(d, a, b))
        || (o3 == 0 && point_on_segment(a, c, d))
        || (o4 == 0 && point_on_segment(b, c, d))
}

/// The staircase network: `n` through-lines and `n(n-1)/2` diagonals, each
/// dropping one level. Staircase `j` starts on the top line and descends to
/// line `j`; every line ends in a sink-adjacent horizontal edge.
pub fn build_gamma0(n: usize) -> Result<PlanarNetwork> {
    if n == 0 {
        return Err(HornError::ZeroRank);
    }
    let n_i = n as i64;
    let sink_x = 3 * n_i;
    let mut coords: Vec<(i64, i64)> = Vec::new();
    let mut diagonals = Vec::new();
    for j in 1..n_i {
        for s in 0..(n_i - j) {
            let x0 = 1 + 3 * (j - 1) + 2 * s;
            let y0 = n_i - s;
            diagonals.push(((x0, y0), (x0 + 1, y0 - 1)));
        }
    }
    let mut per_line: Vec<Vec<i64>> = vec![Vec::new(); n + 1];
    for y in 1..=n_i {
        per_line[y as usize].push(0);
        per_line[y as usize].push(sink_x);
    }
    for &((x0, y0), (x1, y1)) in &diagonals {
        per_line[y0 as usize].push(x0);
        per_line[y1 as usize].push(x1);
    }
    let mut index = std::collections::BTreeMap::new();
    for (y, xs) in per_line.iter_mut().enumerate().skip(1) {
        xs.sort_unstable();
        xs.dedup();
        for &x in xs.iter() {
            index.insert((x, y as i64), coords.len());
            coords.push((x, y as i64));
        }
    }
    let mut edges = Vec::new();
    for (y, xs) in per_line.iter().enumerate().skip(1) {
        for w in xs.windows(2) {
            let tag = if w[1] == sink_x { EdgeTag::SinkHorizontal } else { EdgeTag::Horizontal };
            edges.push((index[&(w[0], y as i64)], index[&(w[1], y as i64)], tag));
        }
    }
    for &(a, b) in &diagonals {
        edges.push((index[&a], index[&b], EdgeTag::Diagonal));
    }
    let coords = coords.into_iter().map(|(x, y)| (from_i64(x), from_i64(y))).collect();
    PlanarNetwork::from_parts(n, coords, edges)
}

/// A rank-`n` network of `n` bare horizontal lines.
pub fn identity_network(n: usize) -> Result<PlanarNetwork> {
    if n == 0 {
        return Err(HornError::ZeroRank);
    }
    let mut coords = Vec::new();
    let mut edges = Vec::new();
    for y in 1..=n as i64 {
        coords.push((from_i64(0), from_i64(y)));
        coords.push((from_i64(1), from_i64(y)));
        edges.push((coords.len() - 2, coords.len() - 1, EdgeTag::SinkHorizontal));
    }
    PlanarNetwork::from_parts(n, coords, edges)
}

/// `g1 ∘ g2`: the sinks of `g1` are glued to the sources of `g2`. Edge ids of
/// `g1` come first, so the composed weighting is `w1` followed by `w2`.
pub fn concatenate(g1: &PlanarNetwork, g2: &PlanarNetwork) -> Result<PlanarNetwork> {
    if g1.rank != g2.rank {
        return Err(HornError::RankMismatch { left: g1.rank, right: g2.rank });
    }
    let shift = g1.max_x() - g2.min_x();
    let mut coords: Vec<(Rational, Rational)> = g1.nodes.iter().map(|v| (v.x.clone(), v.y.clone())).collect();
    let mut map2 = vec![usize::MAX; g2.nodes.len()];
    for v in &g2.nodes {
        map2[v.id] = match g2.source_index[v.id] {
            Some(i) => g1.sinks[i],
            None => {
                coords.push((&v.x + &shift, v.y.clone()));
                coords.len() - 1
            }
        };
    }
    let mut edges: Vec<(usize, usize, EdgeTag)> = g1
        .edges
        .iter()
        .map(|e| {
            let tag = if e.tag == EdgeTag::SinkHorizontal { EdgeTag::Horizontal } else { e.tag };
            (e.tail, e.head, tag)
        })
        .collect();
    edges.extend(g2.edges.iter().map(|e| (map2[e.tail], map2[e.head], e.tag)));
    let g = PlanarNetwork::from_parts(g1.rank, coords, edges)?;
    debug_assert_eq!(g.edges.len(), g1.edges.len() + g2.edges.len());
    Ok(g)
}

/// Concatenated weighting for [`concatenate`].
pub fn concat_weights<S: Clone>(w1: &[S], w2: &[S]) -> Weighting<S> {
    w1.iter().chain(w2.iter()).cloned().collect()
}

/// The rank-`k` network `Γ^(k)`: drop sources and sinks above `y = k`, then
/// keep only nodes lying on a surviving source-to-sink path. Returns the
/// network and, for each of its edges, the parent edge id.
pub fn subnetwork(g: &PlanarNetwork, k: usize) -> Result<(PlanarNetwork, Vec<usize>)> {
    if k == 0 || k > g.rank {
        return Err(HornError::InvalidArgument(format!("subnetwork level {k} outside 1..{}", g.rank)));
    }
    let n = g.rank;
    let removed: Vec<bool> = (0..g.nodes.len())
        .map(|v| matches!((g.source_index[v], g.sink_index[v]), (Some(i), _) | (_, Some(i)) if i < n - k))
        .collect();
    let mut fwd = vec![false; g.nodes.len()];
    for &s in &g.sources[n - k..] {
        fwd[s] = true;
    }
    for v in 0..g.nodes.len() {
        if !fwd[v] || removed[v] {
            continue;
        }
        for &e in &g.out_edges[v] {
            let h = g.edges[e].head;
            if !removed[h] {
                fwd[h] = true;
            }
        }
    }
    let mut bwd = vec![false; g.nodes.len()];
    for &s in &g.sinks[n - k..] {
        bwd[s] = true;
    }
    for v in (0..g.nodes.len()).rev() {
        if !bwd[v] || removed[v] {
            continue;
        }
        for &e in &g.in_edges[v] {
            let t = g.edges[e].tail;
            if !removed[t] {
                bwd[t] = true;
            }
        }
    }
    let keep: Vec<bool> = (0..g.nodes.len()).map(|v| fwd[v] && bwd[v] && !removed[v]).collect();
    let mut new_id = vec![usize::MAX; g.nodes.len()];
    let mut coords = Vec::new();
    for v in 0..g.nodes.len() {
        if keep[v] {
            new_id[v] = coords.len();
            coords.push((g.nodes[v].x.clone(), g.nodes[v].y.clone()));
        }
    }
    let mut kept_edges = Vec::new();
    let mut parent = Vec::new();
    for (idx, e) in g.edges.iter().enumerate() {
        if keep[e.tail] && keep[e.head] {
            kept_edges.push((new_id[e.tail], new_id[e.head], e.tag));
            parent.push(idx);
        }
    }
    // `from_parts` preserves relative order of kept nodes and edges, so the
    // parent map lines up with the child's sorted edge list.
    let sub = PlanarNetwork::from_parts(k, coords, kept_edges)?;
    Ok((sub, parent))
}

/// Restrict a parent weighting along a parent-edge map.
pub fn restrict_weights<S: Clone>(w: &[S], parent: &[usize]) -> Weighting<S> {
    parent.iter().map(|&e| w[e].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma0_shapes() {
        for n in 1..=6 {
            let g = build_gamma0(n).unwrap();
            assert_eq!(g.count_tag(EdgeTag::Diagonal), n * (n - 1) / 2);
            assert_eq!(g.count_tag(EdgeTag::SinkHorizontal), n);
            assert_eq!(g.sources().len(), n);
        }
        assert!(build_gamma0(0).is_err());
        let g1 = build_gamma0(1).unwrap();
        assert_eq!(g1.num_edges(), 1);
        assert_eq!(build_gamma0(2).unwrap().num_edges(), 5);
    }

    #[test]
    fn concatenation_counts() {
        let g = build_gamma0(2).unwrap();
        let gg = concatenate(&g, &g).unwrap();
        assert_eq!(gg.num_edges(), 10);
        assert_eq!(gg.count_tag(EdgeTag::Diagonal), 2);
        assert_eq!(gg.nodes().len(), 2 * g.nodes().len() - 2);
        assert!(concatenate(&g, &build_gamma0(3).unwrap()).is_err());
    }

    #[test]
    fn subnetwork_counts() {
        let g = build_gamma0(3).unwrap();
        let (s, parent) = subnetwork(&g, 2).unwrap();
        assert_eq!(s.count_tag(EdgeTag::Diagonal), 1);
        assert_eq!(s.rank(), 2);
        for (k, &p) in parent.iter().enumerate() {
            let (a, b) = (&s.edges()[k], &g.edges()[p]);
            assert_eq!(s.nodes()[a.tail].x, g.nodes()[b.tail].x);
            assert_eq!(s.nodes()[a.head].y, g.nodes()[b.head].y);
        }
        let (full, parent) = subnetwork(&g, 3).unwrap();
        assert_eq!(full, g);
        assert_eq!(parent, (0..g.num_edges()).collect::<Vec<_>>());
        let (line, _) = subnetwork(&build_gamma0(2).unwrap(), 1).unwrap();
        assert_eq!(line.num_edges(), 2);
        assert_eq!(line.count_tag(EdgeTag::Diagonal), 0);
    }

    #[test]
    fn json_round_trip() {
        let g = build_gamma0(4).unwrap();
        let back = PlanarNetwork::from_json(&g.to_json().unwrap()).unwrap();
        assert_eq!(back, g);
        assert!(g.to_dot().contains("digraph"));
    }

    #[test]
    fn rejects_crossing_edges() {
        let c = |x: i64, y: i64| (from_i64(x), from_i64(y));
        let coords = vec![c(0, 1), c(0, 2), c(2, 1), c(2, 2)];
        let edges = vec![(0, 3, EdgeTag::Diagonal), (1, 2, EdgeTag::Diagonal)];
        assert!(matches!(PlanarNetwork::from_parts(2, coords, edges), Err(HornError::MalformedNetwork(_))));
    }

    #[test]
    fn rejects_vertical_edges() {
        let c = |x: i64, y: i64| (from_i64(x), from_i64(y));
        let coords = vec![c(0, 1), c(1, 1), c(1, 2), c(0, 2), c(2, 1), c(2, 2)];
        let edges = vec![(0, 1, EdgeTag::Horizontal), (1, 2, EdgeTag::Diagonal)];
        assert!(PlanarNetwork::from_parts(2, coords, edges).is_err());
    }
}
