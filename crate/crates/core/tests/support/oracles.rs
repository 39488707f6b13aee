//! Brute-force graph oracles shared by integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use strata_core::graphs::*;

/// Isomorphism test by brute force over vertex permutations.
pub fn brute_iso(a: &StableGraph, b: &StableGraph) -> bool {
    let nv = a.num_vertices();
    if nv != b.num_vertices() || a.num_edges() != b.num_edges() {
        return false;
    }
    let mut be: Vec<[usize; 2]> = b.edges().iter().map(|e| sorted(*e)).collect();
    be.sort();
    let mut perm: Vec<usize> = (0..nv).collect();
    loop {
        let ok = (0..nv).all(|v| a.vertex_genus(v) == b.vertex_genus(perm[v]))
            && (0..a.n()).all(|i| perm[a.leg_vertex(i)] == b.leg_vertex(i))
            && {
                let mut ae: Vec<[usize; 2]> =
                    a.edges().iter().map(|e| sorted([perm[e[0]], perm[e[1]]])).collect();
                ae.sort();
                ae == be
            };
        if ok {
            return true;
        }
        if !next_perm(&mut perm) {
            return false;
        }
    }
}

pub fn sorted(e: [usize; 2]) -> [usize; 2] {
    if e[0] <= e[1] {
        e
    } else {
        [e[1], e[0]]
    }
}

pub fn next_perm(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

pub fn multisets(pairs: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for p in start..pairs {
        cur.push(p);
        multisets(pairs, k, p, cur, out);
        cur.pop();
    }
}

pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = vec![];
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Naive enumerator: all labeled candidates, filtered by stability and
/// genus, bucketed by canonical key; buckets are cross-checked by brute-force
/// isomorphism.
pub fn naive_classes(g: u32, n: usize, max_edges: usize) -> Vec<StableGraph> {
    let mut buckets: BTreeMap<CanonicalKey, Vec<StableGraph>> = BTreeMap::new();
    for nv in 1..=max_edges + 1 {
        let pairs: Vec<[usize; 2]> = (0..nv).flat_map(|i| (i..nv).map(move |j| [i, j])).collect();
        for ne in nv - 1..=max_edges {
            let h1 = ne + 1 - nv;
            if h1 as u32 > g {
                continue;
            }
            let mut ms = vec![];
            multisets(pairs.len(), ne, 0, &mut vec![], &mut ms);
            for m in ms {
                let edges: Vec<[usize; 2]> = m.iter().map(|&p| pairs[p]).collect();
                for genera in compositions(g - h1 as u32, nv) {
                    let mut deficit = vec![0i64; nv];
                    for v in 0..nv {
                        let deg = edges.iter().map(|e| (e[0] == v) as i64 + (e[1] == v) as i64).sum::<i64>();
                        deficit[v] = (1 - (2 * genera[v] as i64 - 2 + deg)).max(0);
                    }
                    let mut legs = vec![0usize; n];
                    assign(0, &mut legs, &mut deficit, nv, &genera, &edges, &mut buckets);
                }
            }
        }
    }
    let mut reps = vec![];
    for (_, members) in buckets {
        for m in &members[1..] {
            assert!(brute_iso(&members[0], m), "equal keys for non-isomorphic graphs");
        }
        reps.push(members[0].clone());
    }
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            assert!(!brute_iso(&reps[i], &reps[j]), "distinct keys for isomorphic graphs");
        }
    }
    reps
}

pub fn assign(
    i: usize,
    legs: &mut Vec<usize>,
    deficit: &mut Vec<i64>,
    nv: usize,
    genera: &[u32],
    edges: &[[usize; 2]],
    buckets: &mut BTreeMap<CanonicalKey, Vec<StableGraph>>,
) {
    let need: i64 = deficit.iter().sum();
    if need > (legs.len() - i) as i64 {
        return;
    }
    if i == legs.len() {
        if let Ok(gr) = StableGraph::new(genera.to_vec(), legs.clone(), edges.to_vec()) {
            buckets.entry(gr.canonical_key()).or_default().push(gr);
        }
        return;
    }
    for v in 0..nv {
        legs[i] = v;
        let old = deficit[v];
        deficit[v] = (old - 1).max(0);
        assign(i + 1, legs, deficit, nv, genera, edges, buckets);
        deficit[v] = old;
    }
}

/// Counts flag-level automorphisms: vertex bijections with matching genus
/// and legs, together with half-edge bijections respecting incidence and
/// the edge pairing.
pub fn brute_aut(gr: &StableGraph) -> u64 {
    let nv = gr.num_vertices();
    let nh = 2 * gr.num_edges();
    let mut count = 0;
    let mut vp: Vec<usize> = (0..nv).collect();
    loop {
        let vok = (0..nv).all(|v| gr.vertex_genus(v) == gr.vertex_genus(vp[v]))
            && (0..gr.n()).all(|i| vp[gr.leg_vertex(i)] == gr.leg_vertex(i));
        if vok {
            let mut hp: Vec<usize> = (0..nh).collect();
            loop {
                let ok = (0..nh).all(|h| gr.half_vertex(hp[h]) == vp[gr.half_vertex(h)] && hp[h ^ 1] == hp[h] ^ 1);
                if ok {
                    count += 1;
                }
                if !next_perm(&mut hp) {
                    break;
                }
            }
        }
        if !next_perm(&mut vp) {
            break;
        }
    }
    count
}
