use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::StableGraph;
use crate::error::{Error, Result};

/// All graphs obtained from `g` by inserting one edge at vertex `v`
/// (a loop, or a split of `v` into two stable vertices).
pub(crate) fn vertex_splits(g: &StableGraph, v: usize) -> Vec<StableGraph> {
    let mut out = Vec::new();
    let gv = g.vertex_genus(v);
    if gv >= 1 {
        let mut h = g.clone();
        let (genera, _, edges) = h.parts_mut();
        genera[v] -= 1;
        edges.push([v, v]);
        out.push(h);
    }
    let flags = g.flags_at(v);
    let k = flags.len();
    let n = g.n();
    for mask in 0u64..(1u64 << k) {
        let moved = mask.count_ones() as i64;
        let kept = k as i64 - moved;
        for g2 in 0..=gv {
            let g1 = gv - g2;
            if 2 * g1 as i64 - 1 + kept <= 0 || 2 * g2 as i64 - 1 + moved <= 0 {
                continue;
            }
            let mut h = g.clone();
            let u = h.num_vertices();
            let (genera, legs, edges) = h.parts_mut();
            genera[v] = g1;
            genera.push(g2);
            for (bit, &f) in flags.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    if f < n {
                        legs[f] = u;
                    } else {
                        let hh = f - n;
                        edges[hh / 2][hh % 2] = u;
                    }
                }
            }
            edges.push([v, u]);
            out.push(h);
        }
    }
    out
}

/// One representative per isomorphism class of stable graphs of type
/// `(g, n)` with at most `max_edges` edges, sorted by (edges, key).
pub fn enumerate_stable_graphs(g: u32, n: usize, max_edges: Option<usize>) -> Result<Vec<StableGraph>> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::Unstable { g, n });
    }
    let dim = 3 * g as usize + n - 3;
    let max = max_edges.map_or(dim, |m| m.min(dim));
    let start = StableGraph::trivial(g, n)?;
    let mut out = Vec::new();
    let mut level: BTreeMap<Vec<u32>, StableGraph> = BTreeMap::new();
    let (c0, _) = start.canonical_form();
    level.insert(c0.canonical_key().0, c0);
    for e in 0..=max {
        out.extend(level.values().cloned());
        if e == max {
            break;
        }
        let mut next = BTreeMap::new();
        for gr in level.values() {
            for v in 0..gr.num_vertices() {
                for h in vertex_splits(gr, v) {
                    let c = h.canon();
                    if !next.contains_key(&c.code) {
                        let (hc, _) = h.relabel_by(&c);
                        next.insert(c.code, hc);
                    }
                }
            }
        }
        level = next;
    }
    Ok(out)
}

/// All one-edge stable graphs up to isomorphism.
pub fn one_edge_graphs(g: u32, n: usize) -> Result<Vec<StableGraph>> {
    Ok(enumerate_stable_graphs(g, n, Some(1))?.into_iter().filter(|x| x.num_edges() == 1).collect())
}
