use std::collections::BTreeSet;

use proptest::prelude::*;
use strata_core::graphs::*;

#[path = "support/oracles.rs"]
mod oracles;
use oracles::*;

fn graph(genera: &[u32], legs: &[usize], edges: &[[usize; 2]]) -> StableGraph {
    StableGraph::new(genera.to_vec(), legs.to_vec(), edges.to_vec()).unwrap()
}

#[test]
fn enumeration_matches_naive_oracle() {
    for g in 0u32..=2 {
        for n in 0usize..=7 {
            let d = 3 * g as i64 - 3 + n as i64;
            if 2 * g as i64 - 2 + n as i64 <= 0 || d > 4 {
                continue;
            }
            let fast = enumerate_stable_graphs(g, n, None).unwrap();
            let slow = naive_classes(g, n, d as usize);
            assert_eq!(fast.len(), slow.len(), "(g, n) = ({g}, {n})");
            let fk: BTreeSet<_> = fast.iter().map(|x| x.canonical_key()).collect();
            let sk: BTreeSet<_> = slow.iter().map(|x| x.canonical_key()).collect();
            assert_eq!(fk, sk);
        }
    }
}

#[test]
fn enumeration_examples() {
    assert_eq!(enumerate_stable_graphs(0, 3, None).unwrap().len(), 1);
    assert_eq!(enumerate_stable_graphs(0, 4, None).unwrap().len(), 4);
    assert_eq!(enumerate_stable_graphs(1, 1, None).unwrap().len(), 2);
    assert_eq!(enumerate_stable_graphs(0, 5, None).unwrap().len(), 26);
    assert_eq!(enumerate_stable_graphs(2, 0, None).unwrap().len(), 7);
    assert!(enumerate_stable_graphs(0, 2, None).is_err());
    assert!(enumerate_stable_graphs(1, 0, None).is_err());
    let list = enumerate_stable_graphs(1, 3, None).unwrap();
    let keys: Vec<_> = list.iter().map(|x| (x.num_edges(), x.canonical_key())).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert_eq!(list, enumerate_stable_graphs(1, 3, None).unwrap());
}

#[test]
fn one_edge_examples() {
    assert_eq!(one_edge_graphs(0, 4).unwrap().len(), 3);
    assert_eq!(one_edge_graphs(1, 1).unwrap().len(), 1);
    assert_eq!(one_edge_graphs(2, 0).unwrap().len(), 2);
}

#[test]
fn key_examples() {
    let a = graph(&[0, 0], &[0, 0, 1, 1], &[[0, 1]]);
    let b = graph(&[0, 0], &[1, 1, 0, 0], &[[1, 0]]);
    assert_eq!(a.canonical_key(), b.canonical_key());
    let c = graph(&[0, 0], &[0, 1, 0, 1], &[[0, 1]]);
    let d = graph(&[0, 0], &[0, 1, 1, 0], &[[0, 1]]);
    let keys: BTreeSet<_> = [&a, &c, &d].iter().map(|x| x.canonical_key()).collect();
    assert_eq!(keys.len(), 3);
    let t = StableGraph::trivial(2, 0).unwrap();
    for x in one_edge_graphs(2, 0).unwrap() {
        assert_ne!(t.canonical_key(), x.canonical_key());
    }
}

#[test]
fn automorphism_orders_match_brute_force() {
    assert_eq!(StableGraph::trivial(2, 3).unwrap().automorphism_order(), 1);
    assert_eq!(graph(&[0], &[0], &[[0, 0]]).automorphism_order(), 2);
    assert_eq!(graph(&[1, 1], &[], &[[0, 1]]).automorphism_order(), 2);
    for (g, n) in [(0, 4), (0, 5), (1, 1), (1, 2), (2, 0), (2, 1), (1, 3)] {
        for gr in enumerate_stable_graphs(g, n, None).unwrap() {
            if gr.num_edges() <= 4 {
                assert_eq!(gr.automorphism_order(), brute_aut(&gr), "{gr:?}");
            }
        }
    }
    // banana graphs and a theta graph
    assert_eq!(graph(&[0, 0], &[], &[[0, 1], [0, 1], [0, 1]]).automorphism_order(), 12);
    assert_eq!(graph(&[0], &[], &[[0, 0], [0, 0]]).automorphism_order(), 8);
}

/// Orbit–stabilizer: distinct relabelings of vertices and half-edges times
/// |Aut| equals |S_V × S_{2E}|.
#[test]
fn orbit_stabilizer_small() {
    for (g, n) in [(0, 4), (1, 1), (1, 2), (2, 0), (0, 5), (1, 3)] {
        for gr in enumerate_stable_graphs(g, n, None).unwrap() {
            if gr.n() + 2 * gr.num_edges() > 6 {
                continue;
            }
            let nv = gr.num_vertices();
            let nh = 2 * gr.num_edges();
            let mut copies = BTreeSet::new();
            let mut vp: Vec<usize> = (0..nv).collect();
            loop {
                let mut hp: Vec<usize> = (0..nh).collect();
                loop {
                    let mut genera = vec![0; nv];
                    for v in 0..nv {
                        genera[vp[v]] = gr.vertex_genus(v);
                    }
                    let legs: Vec<usize> = gr.legs().iter().map(|&v| vp[v]).collect();
                    let mut at = vec![0usize; nh];
                    for h in 0..nh {
                        at[hp[h]] = vp[gr.half_vertex(h)];
                    }
                    let mut pairs: Vec<[usize; 2]> =
                        (0..gr.num_edges()).map(|e| sorted([hp[2 * e], hp[2 * e + 1]])).collect();
                    pairs.sort();
                    copies.insert((genera, legs, at, pairs));
                    if !next_perm(&mut hp) {
                        break;
                    }
                }
                if !next_perm(&mut vp) {
                    break;
                }
            }
            let total: u64 = (1..=nv as u64).product::<u64>() * (1..=nh as u64).product::<u64>();
            assert_eq!(copies.len() as u64 * gr.automorphism_order(), total, "{gr:?}");
        }
    }
}

#[test]
fn degeneration_examples() {
    let t = StableGraph::trivial(0, 5).unwrap();
    let d = common_degenerations(&t, &t);
    assert_eq!(d.len(), 1);
    let a = graph(&[0, 0], &[0, 0, 1, 1, 1], &[[0, 1]]);
    let b = graph(&[0, 0], &[0, 0, 0, 1, 1], &[[0, 1]]);
    let d = common_degenerations(&t, &b);
    assert_eq!(d.len(), 1);
    assert_eq!(d[0].graph.canonical_key(), b.canonical_key());
    let b34 = graph(&[0, 0], &[1, 1, 1, 0, 0], &[[0, 1]]);
    let d = common_degenerations(&a, &b34);
    assert_eq!(d.len(), 1);
    assert_eq!(d[0].graph.num_edges(), 2);
    // self-intersection: the graph itself
    let d = common_degenerations(&a, &a);
    assert_eq!(d.len(), 1);
    assert_eq!(d[0].graph.num_edges(), 1);
    // the irreducible divisor of M̄_{1,1} meets itself once per automorphism
    let irr = graph(&[0], &[0], &[[0, 0]]);
    let d = common_degenerations(&irr, &irr);
    let mut sizes: Vec<usize> = d.iter().map(|x| x.graph.num_edges()).collect();
    sizes.sort();
    assert_eq!(sizes, vec![1, 1]);
}

fn check_degenerations(a: &StableGraph, b: &StableGraph) -> usize {
    let d = common_degenerations(a, b);
    for x in &d {
        assert!(x.to_a.is_valid(&x.graph, a), "{a:?} {b:?} {x:?}");
        assert!(x.to_b.is_valid(&x.graph, b));
        for e in 0..x.graph.num_edges() {
            assert!(x.to_a.edge_map[e].is_some() || x.to_b.edge_map[e].is_some());
        }
    }
    d.len()
}

#[test]
fn degenerations_are_symmetric_and_valid() {
    for (g, n) in [(0, 5), (1, 2), (2, 0), (1, 3), (0, 6)] {
        let all = enumerate_stable_graphs(g, n, Some(2)).unwrap();
        for a in &all {
            for b in &all {
                assert_eq!(check_degenerations(a, b), check_degenerations(b, a));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn relabeling_legs_is_consistent(idx in 0usize..80, seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let all = enumerate_stable_graphs(1, 4, None).unwrap();
        let gr = &all[idx % all.len()];
        let mut perm: Vec<usize> = (0..gr.n()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let r = gr.relabel_legs(&perm);
        let (c, _) = gr.canonical_form();
        prop_assert_eq!(c.canonical_key(), gr.canonical_key());
        prop_assert_eq!(r.automorphism_order(), gr.automorphism_order());
        // relabeled copies of distinct graphs stay distinct
        for other in &all {
            let same = other.canonical_key() == gr.canonical_key();
            prop_assert_eq!(other.relabel_legs(&perm).canonical_key() == r.canonical_key(), same);
        }
    }
}

/// Independent count of generic triples: over every stable graph Γ, all
/// pairs of contractions onto A and B (edge sets disjoint), divided by the
/// freely acting automorphism group of Γ.
fn brute_degeneration_count(all: &[StableGraph], a: &StableGraph, b: &StableGraph) -> u64 {
    let mut total = 0u64;
    for gam in all {
        let ne = gam.num_edges();
        if ne > a.num_edges() + b.num_edges() || ne < a.num_edges().max(b.num_edges()) {
            continue;
        }
        let mut pairs = 0u64;
        for ma in 0u32..(1 << ne) {
            if ne - ma.count_ones() as usize != a.num_edges() {
                continue;
            }
            let mask_a: Vec<bool> = (0..ne).map(|e| ma >> e & 1 == 1).collect();
            let ca = gam.contract(&mask_a);
            let na = ca.graph.isomorphisms_to(a).len() as u64;
            if na == 0 {
                continue;
            }
            for mb in 0u32..(1 << ne) {
                if mb & ma != 0 || ne - mb.count_ones() as usize != b.num_edges() {
                    continue;
                }
                let mask_b: Vec<bool> = (0..ne).map(|e| mb >> e & 1 == 1).collect();
                let cb = gam.contract(&mask_b);
                pairs += na * cb.graph.isomorphisms_to(b).len() as u64;
            }
        }
        let aut = gam.automorphism_order();
        assert_eq!(pairs % aut, 0);
        total += pairs / aut;
    }
    total
}

#[test]
fn degenerations_match_brute_force_count() {
    for (g, n, e) in [(0, 5, 2), (1, 2, 2), (2, 0, 2), (1, 3, 2), (0, 6, 1), (2, 1, 1)] {
        let every = enumerate_stable_graphs(g, n, None).unwrap();
        let all = enumerate_stable_graphs(g, n, Some(e)).unwrap();
        for a in &all {
            for b in &all {
                let brute = brute_degeneration_count(&every, a, b);
                assert_eq!(common_degenerations(a, b).len() as u64, brute, "{a:?} {b:?}");
            }
        }
    }
}
