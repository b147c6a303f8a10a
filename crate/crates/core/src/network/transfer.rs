//! Transfer-matrix evaluation of multipath sums.
//!
//! Nodes are swept in topological order while tracking which edges of the
//! current cut are occupied by a path. A node may receive at most one
//! occupied edge, which enforces vertex-disjointness; this is the same
//! constraint the enumerator checks, so both agree term by term.

use std::collections::BTreeMap;

use super::PlanarNetwork;
use crate::error::{HornError, Result};
use crate::semiring::Semiring;

#[derive(Clone, Copy, Debug)]
pub(crate) enum Mode {
    /// Track exact source and sink sets; key is `(source mask, sink mask)`.
    Masks,
    /// Track only the number of started paths; key is `(count, 0)`.
    Count { max: usize },
    /// Sources in the mask must start a path, sinks outside it may not end one.
    Fixed { sources: u32, sinks: u32 },
}

type Key = (u128, u32, u32);

pub(crate) fn run<S: Semiring>(g: &PlanarNetwork, w: &[S], mode: Mode) -> Result<BTreeMap<(u32, u32), S>> {
    g.check_weighting(w)?;
    if g.rank() > 32 {
        return Err(HornError::MalformedNetwork("rank above 32 is not supported".into()));
    }
    let mut frontier: Vec<usize> = Vec::new();
    let mut states: BTreeMap<Key, S> = BTreeMap::new();
    states.insert((0, 0, 0), S::one());
    let bit = |p: usize| 1u128 << p;

    for v in 0..g.nodes().len() {
        let mut inc_mask = 0u128;
        for &e in g.in_edges(v) {
            let p = frontier.iter().position(|&f| f == e).expect("incoming edge is on the cut");
            inc_mask |= bit(p);
        }
        let kept: Vec<usize> = (0..frontier.len()).filter(|&p| inc_mask & bit(p) == 0).collect();
        let mut next_frontier: Vec<usize> = kept.iter().map(|&p| frontier[p]).collect();
        let out_base = next_frontier.len();
        next_frontier.extend_from_slice(g.out_edges(v));
        if next_frontier.len() > 128 {
            return Err(HornError::MalformedNetwork("cut wider than 128 edges".into()));
        }
        let compress = |occ: u128| -> u128 {
            kept.iter().enumerate().fold(0, |acc, (new, &old)| if occ & bit(old) != 0 { acc | bit(new) } else { acc })
        };
        let src = g.source_index(v);
        let snk = g.sink_index(v);
        let outs = g.out_edges(v);

        let mut next: BTreeMap<Key, S> = BTreeMap::new();
        let mut push = |k: Key, val: S| {
            next.entry(k).and_modify(|cur: &mut S| *cur = cur.add(&val)).or_insert(val);
        };
        for ((occ, a, b), val) in states {
            let arrivals = (occ & inc_mask).count_ones();
            if arrivals > 1 {
                continue;
            }
            let base = compress(occ & !inc_mask);
            if arrivals == 1 {
                if let Some(j) = snk {
                    match mode {
                        Mode::Fixed { sinks, .. } if sinks & (1 << j) == 0 => {}
                        Mode::Count { .. } => push((base, a, b), val),
                        _ => push((base, a, b | (1 << j)), val),
                    }
                } else {
                    for (t, &e) in outs.iter().enumerate() {
                        push((base | bit(out_base + t), a, b), val.mul(&w[e]));
                    }
                }
                continue;
            }
            let (may_start, must_start, new_a) = match (src, mode) {
                (None, _) => (false, false, a),
                (Some(i), Mode::Masks) => (true, false, a | (1 << i)),
                (Some(_), Mode::Count { max }) => ((a as usize) < max, false, a + 1),
                (Some(i), Mode::Fixed { sources, .. }) => {
                    let inside = sources & (1 << i) != 0;
                    (inside, inside, a | (1 << i))
                }
            };
            if !must_start {
                push((base, a, b), val.clone());
            }
            if may_start {
                for (t, &e) in outs.iter().enumerate() {
                    push((base | bit(out_base + t), new_a, b), val.mul(&w[e]));
                }
            }
        }
        states = next;
        frontier = next_frontier;
    }
    let mut out: BTreeMap<(u32, u32), S> = BTreeMap::new();
    for ((occ, a, b), val) in states {
        debug_assert_eq!(occ, 0);
        out.entry((a, b)).and_modify(|cur| *cur = cur.add(&val)).or_insert(val);
    }
    Ok(out)
}

pub(crate) fn mask_of(set: &[usize]) -> u32 {
    set.iter().fold(0, |m, &i| m | (1 << i))
}

pub(crate) fn set_of(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}
