use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use num_traits::{One, Zero};

use super::{Decoration, DecoratedStratum, TautClass};
use crate::error::Result;
use crate::graphs::{common_degenerations, Degeneration, GraphMorphism, StableGraph};
use crate::integrals::kappa_psi_raw;
use crate::rational::Q;

/// Pulls the decoration of `s` back along `m: gamma -> s.graph()`: ψ follows
/// the flag map, and each κ factor at a vertex spreads over its preimages.
pub fn pullback_decorations(gamma: &StableGraph, m: &GraphMorphism, s: &DecoratedStratum) -> Vec<Decoration> {
    pull_raw(gamma, m, s.psi(), &s.kappa_vecs())
}

pub(crate) fn pull_raw(gamma: &StableGraph, m: &GraphMorphism, psi: &[u32], kappa: &[Vec<u32>]) -> Vec<Decoration> {
    let n = gamma.n();
    let gpsi: Vec<u32> = (0..gamma.num_flags()).map(|f| m.flag_map(f, n).map_or(0, |t| psi[t])).collect();
    let mut out: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new(); gamma.num_vertices()]];
    for (w, ks) in kappa.iter().enumerate() {
        if ks.is_empty() {
            continue;
        }
        let pre: Vec<usize> = (0..gamma.num_vertices()).filter(|&u| m.vertex_map[u] == w).collect();
        for &b in ks {
            let mut next = Vec::with_capacity(out.len() * pre.len());
            for k in &out {
                for &u in &pre {
                    let mut k2 = k.clone();
                    k2[u].push(b);
                    next.push(k2);
                }
            }
            out = next;
        }
    }
    out.into_iter().map(|k| (gpsi.clone(), k)).collect()
}

/// Expansion of ∏ (−ψ′ − ψ″) over edges of Γ seen by both morphisms:
/// (sign, extra ψ per flag).
pub(crate) fn excess_terms(gamma: &StableGraph, d: &Degeneration) -> Vec<(bool, Vec<u32>)> {
    let n = gamma.n();
    let common: Vec<usize> = (0..gamma.num_edges())
        .filter(|&e| d.to_a.edge_map[e].is_some() && d.to_b.edge_map[e].is_some())
        .collect();
    let negative = common.len() % 2 == 1;
    (0u64..(1u64 << common.len()))
        .map(|mask| {
            let mut extra = vec![0u32; gamma.num_flags()];
            for (i, &e) in common.iter().enumerate() {
                extra[n + 2 * e + (mask >> i & 1) as usize] += 1;
            }
            (negative, extra)
        })
        .collect()
}

pub(crate) fn vertex_integral(graph: &StableGraph, flags: &[usize], psi: &[u32], kappa: &[u32], v: usize) -> Q {
    let exps: Vec<u32> = flags.iter().map(|&f| psi[f]).collect();
    kappa_psi_raw(graph.vertex_genus(v), &exps, kappa)
}

fn integrate_decoration(graph: &StableGraph, psi: &[u32], kappa: &[Vec<u32>]) -> Q {
    let flags = graph.all_flags();
    let mut acc = Q::one();
    for v in 0..graph.num_vertices() {
        let x = vertex_integral(graph, &flags[v], psi, &kappa[v], v);
        if x.is_zero() {
            return x;
        }
        acc *= x;
    }
    acc
}

/// Intersection product via generic common degenerations.
pub fn product(x: &TautClass, y: &TautClass) -> Result<TautClass> {
    x.check_same(y)?;
    let degree = x.degree() + y.degree();
    let mut out = TautClass::zero(x.genus(), x.n(), degree);
    if degree > 2 * x.dim() {
        return Ok(out);
    }
    let mut cache: HashMap<(&StableGraph, &StableGraph), Vec<Degeneration>> = HashMap::new();
    for (s1, c1) in x.terms() {
        for (s2, c2) in y.terms() {
            let degs = cache
                .entry((s1.graph(), s2.graph()))
                .or_insert_with(|| common_degenerations(s1.graph(), s2.graph()));
            let f = c1 * c2 / Q::from_integer((s1.automorphism_order() * s2.automorphism_order()).into());
            for d in degs.iter() {
                for_each_term(d, s1, s2, |psi, kappa, neg| {
                    let c = if neg { -f.clone() } else { f.clone() };
                    out.add_xi(&d.graph, psi, kappa, c);
                });
            }
        }
    }
    Ok(out)
}

pub(crate) fn for_each_term(d: &Degeneration, s1: &DecoratedStratum, s2: &DecoratedStratum, mut f: impl FnMut(&[u32], &[Vec<u32>], bool)) {
    let pa = pullback_decorations(&d.graph, &d.to_a, s1);
    let pb = pullback_decorations(&d.graph, &d.to_b, s2);
    let ex = excess_terms(&d.graph, d);
    for (psa, ka) in &pa {
        for (psb, kb) in &pb {
            for (neg, extra) in &ex {
                let psi: Vec<u32> = (0..psa.len()).map(|i| psa[i] + psb[i] + extra[i]).collect();
                let kappa: Vec<Vec<u32>> = ka
                    .iter()
                    .zip(kb)
                    .map(|(a, b)| {
                        let mut k = a.clone();
                        k.extend_from_slice(b);
                        k
                    })
                    .collect();
                f(&psi, &kappa, *neg);
            }
        }
    }
}

/// ∫ x; zero unless x has top degree.
pub fn integrate(x: &TautClass) -> Q {
    let mut acc = Q::zero();
    if x.degree() != 2 * x.dim() {
        return acc;
    }
    for (s, c) in x.terms() {
        let v = integrate_decoration(s.graph(), s.psi(), &s.kappa_vecs());
        acc += c * v / Q::from_integer(s.automorphism_order().into());
    }
    acc
}

/// ∫ [s₁]·[s₂] evaluated directly on the common degenerations.
pub fn pair_strata(s1: &DecoratedStratum, s2: &DecoratedStratum) -> Q {
    let mut acc = Q::zero();
    if s1.graph().genus() != s2.graph().genus() || s1.graph().n() != s2.graph().n() {
        return acc;
    }
    if s1.codim() + s2.codim() != s1.graph().dim() {
        return acc;
    }
    for d in common_degenerations(s1.graph(), s2.graph()) {
        for_each_term(&d, s1, s2, |psi, kappa, neg| {
            let v = integrate_decoration(&d.graph, psi, kappa);
            if neg {
                acc -= v;
            } else {
                acc += v;
            }
        });
    }
    acc / Q::from_integer((s1.automorphism_order() * s2.automorphism_order()).into())
}
