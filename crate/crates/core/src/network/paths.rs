//! Exhaustive path and multipath enumeration. This is the reference oracle
//! for the transfer-matrix evaluator and is only practical for small ranks.

use std::collections::BTreeSet;

use super::PlanarNetwork;
use crate::error::{HornError, Result};
use crate::semiring::Semiring;

/// `k` pairwise vertex-disjoint paths. `paths[a]` runs from source
/// `sources[a]` to sink `sinks[a]`; sources are increasing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiPath {
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
    pub paths: Vec<Vec<usize>>,
}

impl MultiPath {
    pub fn size(&self) -> usize {
        self.paths.len()
    }

    /// All edges used, sorted.
    pub fn edges(&self) -> Vec<usize> {
        let mut e: Vec<usize> = self.paths.iter().flatten().copied().collect();
        e.sort_unstable();
        e
    }

    /// `⊗`-product of the edge weights; the empty system has weight one.
    pub fn weight<S: Semiring>(&self, w: &[S]) -> S {
        self.paths.iter().flatten().fold(S::one(), |acc, &e| acc.mul(&w[e]))
    }

    /// Sorted sink index set.
    pub fn sink_set(&self) -> Vec<usize> {
        let mut s = self.sinks.clone();
        s.sort_unstable();
        s
    }
}

/// Every path from source `i` to any sink, as edge lists, in lexicographic
/// order of edge ids.
pub fn single_paths(g: &PlanarNetwork, i: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn dfs(g: &PlanarNetwork, v: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if g.sink_index(v).is_some() {
            out.push(cur.clone());
            return;
        }
        for &e in g.out_edges(v) {
            cur.push(e);
            dfs(g, g.edges()[e].head, cur, out);
            cur.pop();
        }
    }
    dfs(g, g.sources()[i], &mut cur, &mut out);
    out.sort();
    out
}

fn path_end(g: &PlanarNetwork, p: &[usize], src: usize) -> usize {
    let v = p.last().map_or(g.sources()[src], |&e| g.edges()[e].head);
    g.sink_index(v).expect("path ends at a sink")
}

fn path_vertices(g: &PlanarNetwork, p: &[usize], src: usize) -> Vec<usize> {
    let mut v = vec![g.sources()[src]];
    v.extend(p.iter().map(|&e| g.edges()[e].head));
    v
}

fn validate_index_set(g: &PlanarNetwork, s: &[usize], name: &str) -> Result<()> {
    for w in s.windows(2) {
        if w[0] >= w[1] {
            return Err(HornError::InvalidIndexSet(format!("{name} must be strictly increasing")));
        }
    }
    if s.iter().any(|&i| i >= g.rank()) {
        return Err(HornError::InvalidIndexSet(format!("{name} has an index outside 0..{}", g.rank())));
    }
    Ok(())
}

/// All vertex-disjoint path systems from the sources `I` onto the sinks `J`
/// (0-based, strictly increasing), duplicate-free and sorted.
pub fn enumerate_kpaths(g: &PlanarNetwork, sources: &[usize], sinks: &[usize]) -> Result<Vec<MultiPath>> {
    validate_index_set(g, sources, "I")?;
    validate_index_set(g, sinks, "J")?;
    if sources.len() != sinks.len() {
        return Err(HornError::InvalidIndexSet(format!("|I| = {} but |J| = {}", sources.len(), sinks.len())));
    }
    let target: BTreeSet<usize> = sinks.iter().copied().collect();
    let candidates: Vec<Vec<(Vec<usize>, usize, Vec<usize>)>> = sources
        .iter()
        .map(|&i| {
            single_paths(g, i)
                .into_iter()
                .filter_map(|p| {
                    let j = path_end(g, &p, i);
                    target.contains(&j).then(|| {
                        let verts = path_vertices(g, &p, i);
                        (p, j, verts)
                    })
                })
                .collect()
        })
        .collect();
    let mut found = BTreeSet::new();
    let mut chosen: Vec<usize> = Vec::new();
    fn rec(
        depth: usize,
        sources: &[usize],
        candidates: &[Vec<(Vec<usize>, usize, Vec<usize>)>],
        used: &mut BTreeSet<usize>,
        chosen: &mut Vec<usize>,
        found: &mut BTreeSet<MultiPath>,
    ) {
        if depth == sources.len() {
            let mp = MultiPath {
                sources: sources.to_vec(),
                sinks: chosen.iter().enumerate().map(|(a, &c)| candidates[a][c].1).collect(),
                paths: chosen.iter().enumerate().map(|(a, &c)| candidates[a][c].0.clone()).collect(),
            };
            found.insert(mp);
            return;
        }
        for (c, (_, _, verts)) in candidates[depth].iter().enumerate() {
            if verts.iter().any(|v| used.contains(v)) {
                continue;
            }
            used.extend(verts.iter().copied());
            chosen.push(c);
            rec(depth + 1, sources, candidates, used, chosen, found);
            chosen.pop();
            for v in verts {
                used.remove(v);
            }
        }
    }
    rec(0, sources, &candidates, &mut BTreeSet::new(), &mut chosen, &mut found);
    Ok(found.into_iter().collect())
}

/// The full set `P_k`: every `k`-path system over all `I`, `J`.
pub fn enumerate_all_kpaths(g: &PlanarNetwork, k: usize) -> Vec<MultiPath> {
    let n = g.rank();
    let mut out = Vec::new();
    for i_set in crate::matrix::subsets(n, k) {
        for j_set in crate::matrix::subsets(n, k) {
            out.extend(enumerate_kpaths(g, &i_set, &j_set).expect("valid index sets"));
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::build_gamma0;

    #[test]
    fn gamma0_two_systems() {
        let g = build_gamma0(2).unwrap();
        assert_eq!(enumerate_kpaths(&g, &[0, 1], &[0, 1]).unwrap().len(), 1);
        assert_eq!(enumerate_kpaths(&g, &[1], &[0]).unwrap().len(), 0);
        assert_eq!(enumerate_kpaths(&g, &[0], &[1]).unwrap().len(), 1);
        assert_eq!(enumerate_kpaths(&g, &[], &[]).unwrap().len(), 1);
        assert!(enumerate_kpaths(&g, &[0], &[0, 1]).is_err());
        assert!(enumerate_kpaths(&g, &[1, 0], &[0, 1]).is_err());
    }

    #[test]
    fn gamma0_three_full_system_unique() {
        let g = build_gamma0(3).unwrap();
        let all = enumerate_kpaths(&g, &[0, 1, 2], &[0, 1, 2]).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].edges().len(), g.num_edges() - g.count_tag(super::super::EdgeTag::Diagonal));
    }

    #[test]
    fn upper_triangular_reachability() {
        for n in 1..=4 {
            let g = build_gamma0(n).unwrap();
            for i in 0..n {
                for j in 0..n {
                    let reach = !enumerate_kpaths(&g, &[i], &[j]).unwrap().is_empty();
                    assert_eq!(reach, i <= j, "n={n} i={i} j={j}");
                }
            }
        }
    }
}
