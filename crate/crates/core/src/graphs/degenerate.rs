//! Generic intersections of two boundary strata: graphs Γ with contractions
//! to both A and B such that every edge of Γ comes from A or from B.
//!
//! Γ is grown from A by inserting the edges that B contributes, one vertex
//! split at a time; each candidate is then matched against B by contracting
//! the A-edges that B does not see.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::canon::{canonize, isomorphisms, Colored};
use super::enumerate::vertex_splits;
use super::{GraphMorphism, StableGraph};

#[derive(Clone, Debug)]
pub struct Degeneration {
    pub graph: StableGraph,
    pub to_a: GraphMorphism,
    pub to_b: GraphMorphism,
}

/// Necessary condition for a common degeneration: the leg splits of the
/// separating edges of both graphs are pairwise nested or disjoint.
pub fn splits_compatible(a: &StableGraph, b: &StableGraph) -> bool {
    let n = a.n();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let sa = a.separating_signatures();
    let sb = b.separating_signatures();
    sa.iter().all(|x| {
        sb.iter().all(|y| {
            let (l, m) = (x[0].0, y[0].0);
            l & m == l || l & m == m || l & m == 0 || (l | m) == full
        })
    })
}

struct Target {
    leg_class: Vec<usize>,
    sigs: Vec<(u64, u32)>,
    nonsep: usize,
    colored: Colored,
    canon: super::Canon,
    edges: usize,
}

struct State {
    graph: StableGraph,
    amap: GraphMorphism,
}

fn annotated(g: &StableGraph, a: &GraphMorphism, b: Option<&GraphMorphism>) -> Colored {
    let mut c = g.colored();
    for v in 0..g.num_vertices() {
        c.vcolor[v].insert(1, a.vertex_map[v] as u32);
        if let Some(b) = b {
            c.vcolor[v].insert(2, b.vertex_map[v] as u32);
        }
    }
    for (e, t) in c.edges.iter_mut().enumerate() {
        let mut col = [0u32; 2];
        for (s, cs) in col.iter_mut().enumerate() {
            let ah = a.half_map(2 * e + s).map_or(0, |h| h as u32 + 1);
            let bh = b.and_then(|b| b.half_map(2 * e + s)).map_or(0, |h| h as u32 + 1);
            *cs = (ah << 16) | bh;
        }
        t.2 = col[0];
        t.3 = col[1];
    }
    c
}

fn classes_excess(g: &StableGraph, leg_class: &[usize]) -> usize {
    let mut seen: Vec<Vec<usize>> = vec![Vec::new(); g.num_vertices()];
    for (i, &v) in g.legs().iter().enumerate() {
        if !seen[v].contains(&leg_class[i]) {
            seen[v].push(leg_class[i]);
        }
    }
    seen.iter().map(|s| s.len().saturating_sub(1)).sum()
}

/// All common degenerations of `a` and `b` up to isomorphism of triples.
pub fn common_degenerations(a: &StableGraph, b: &StableGraph) -> Vec<Degeneration> {
    assert_eq!((a.genus(), a.n()), (b.genus(), b.n()), "ambient mismatch");
    if a.num_edges() < b.num_edges() {
        return common_degenerations(b, a)
            .into_iter()
            .map(|d| Degeneration { graph: d.graph, to_a: d.to_b, to_b: d.to_a })
            .collect();
    }
    if !splits_compatible(a, b) {
        return Vec::new();
    }
    let colored = b.colored();
    let canon = canonize(&colored);
    let t = Target {
        leg_class: b.legs().to_vec(),
        sigs: b.separating_signatures().into_iter().flatten().collect(),
        nonsep: b.num_nonseparating(),
        colored,
        canon,
        edges: b.num_edges(),
    };
    let k_max = t.edges;
    let k_min = t.edges.saturating_sub(a.num_edges());
    let mut level = vec![State { graph: a.clone(), amap: GraphMorphism::identity(a) }];
    let mut found: BTreeMap<Vec<u32>, Degeneration> = BTreeMap::new();
    for k in 0..=k_max {
        if k >= k_min {
            for st in &level {
                match_target(st, &t, &mut found);
            }
        }
        if k == k_max {
            break;
        }
        let remaining = k_max - k - 1;
        let mut next: BTreeMap<Vec<u32>, State> = BTreeMap::new();
        for st in &level {
            for v in 0..st.graph.num_vertices() {
                for h in vertex_splits(&st.graph, v) {
                    let ne = h.num_edges() - 1;
                    let mut amap = st.amap.clone();
                    if h.num_vertices() > st.graph.num_vertices() {
                        amap.vertex_map.push(st.amap.vertex_map[v]);
                    }
                    amap.edge_map.push(None);
                    if classes_excess(&h, &t.leg_class) > remaining {
                        continue;
                    }
                    match h.bridge_side(ne) {
                        Some(sig) => {
                            if !t.sigs.contains(&sig) {
                                continue;
                            }
                            let dup = (0..ne).any(|e| amap.edge_map[e].is_none() && h.bridge_side(e) == Some(sig));
                            if dup {
                                continue;
                            }
                        }
                        None => {
                            let nonsep_new = (0..=ne)
                                .filter(|&e| amap.edge_map[e].is_none() && h.bridge_side(e).is_none())
                                .count();
                            if nonsep_new > t.nonsep {
                                continue;
                            }
                        }
                    }
                    let code = canonize(&annotated(&h, &amap, None)).code;
                    next.entry(code).or_insert(State { graph: h, amap });
                }
            }
        }
        level = next.into_values().collect();
    }
    found.into_values().collect()
}

fn match_target(st: &State, t: &Target, found: &mut BTreeMap<Vec<u32>, Degeneration>) {
    let g = &st.graph;
    if classes_excess(g, &t.leg_class) > 0 {
        return;
    }
    let old: Vec<usize> = (0..g.num_edges()).filter(|&e| st.amap.edge_map[e].is_some()).collect();
    let m = g.num_edges() - t.edges;
    if m > old.len() {
        return;
    }
    let mut pick: Vec<usize> = (0..m).collect();
    loop {
        let mut mask = vec![false; g.num_edges()];
        for &i in &pick {
            mask[old[i]] = true;
        }
        let c = g.contract(&mask);
        let cc = c.graph.colored();
        let ccanon = canonize(&cc);
        if ccanon.code == t.canon.code {
            for (vm, em) in isomorphisms(&cc, &ccanon, &t.colored, &t.canon) {
                let iso = GraphMorphism { vertex_map: vm, edge_map: em.into_iter().map(Some).collect() };
                let bmap = c.morphism.then(&iso);
                let code = canonize(&annotated(g, &st.amap, Some(&bmap))).code;
                found.entry(code).or_insert_with(|| Degeneration {
                    graph: g.clone(),
                    to_a: st.amap.clone(),
                    to_b: bmap,
                });
            }
        }
        // next combination
        let mut i = m;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if pick[i] < old.len() - m + i {
                pick[i] += 1;
                for j in i + 1..m {
                    pick[j] = pick[j - 1] + 1;
                }
                break;
            }
        }
    }
}
