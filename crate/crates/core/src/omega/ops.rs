use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::{omega_vertex_integral, OmegaClass, OmegaFlag, OmegaStratum, Polarization, DEFAULT_EPSILON};
use crate::error::{Error, Result};
use crate::graphs::{common_degenerations, GraphMorphism, StableGraph};
use crate::integrals::kappa_psi_raw;
use crate::rational::{qi, Q};
use crate::strata::{
    for_each_term, insert_perm, pullback_decorations, pullback_raw, pushforward_raw, to_end_perm, DecoratedStratum, Draft,
    TautClass,
};

/// Follows an ω-slot along a contraction `m: gamma -> target`. The slot
/// lives on a genus-1 vertex of the target; its preimage must be a tree
/// (a cycle means restriction to an irreducible boundary, where ω
/// vanishes) whose genus-1 vertex receives the slot. Slot flags sitting
/// in a rational branch move to the half-edge where that branch attaches;
/// two slot flags in one branch kill the class. Returns that vertex and
/// the images of the slot flags in order.
pub fn transport_slot(gamma: &StableGraph, m: &GraphMorphism, slot: &[usize]) -> Option<(usize, Vec<usize>)> {
    let n = gamma.n();
    let target_vertex_of = |f: usize| -> usize { m.vertex_map[gamma.flag_vertex(f)] };
    // preimage flag of each target flag
    let pre = |t: usize| -> usize {
        if t < n {
            return t;
        }
        let h = t - n;
        for (e, im) in m.edge_map.iter().enumerate() {
            if let Some((e2, sw)) = *im {
                if e2 == h / 2 {
                    return n + 2 * e + ((h % 2) ^ sw as usize);
                }
            }
        }
        unreachable!("target half-edge without preimage")
    };
    let flags: Vec<usize> = slot.iter().map(|&t| pre(t)).collect();
    let w = target_vertex_of(flags[0]);
    let verts: Vec<usize> = (0..gamma.num_vertices()).filter(|&u| m.vertex_map[u] == w).collect();
    let inner: Vec<usize> = (0..gamma.num_edges())
        .filter(|&e| m.edge_map[e].is_none() && m.vertex_map[gamma.edges()[e][0]] == w)
        .collect();
    if inner.len() + 1 != verts.len() {
        return None;
    }
    let root = *verts.iter().find(|&&u| gamma.vertex_genus(u) == 1)?;
    // for each vertex of the tree, the half-edge at `root` leading to it
    let mut via: Vec<Option<usize>> = vec![None; gamma.num_vertices()];
    let mut seen = vec![false; gamma.num_vertices()];
    seen[root] = true;
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        for &e in &inner {
            let [a, b] = gamma.edges()[e];
            for (s, (x, y)) in [(0usize, (a, b)), (1, (b, a))] {
                if x == u && !seen[y] {
                    seen[y] = true;
                    via[y] = Some(if u == root { n + 2 * e + s } else { via[u].unwrap() });
                    stack.push(y);
                }
            }
        }
    }
    let mut out = Vec::with_capacity(flags.len());
    for f in flags {
        let u = gamma.flag_vertex(f);
        let img = if u == root { f } else { via[u].unwrap() };
        if out.contains(&img) {
            return None;
        }
        out.push(img);
    }
    Some((root, out))
}

/// Integral of a decoration on Γ whose vertex `u0` carries both slots.
fn integrate_with_slots(gamma: &StableGraph, psi: &[u32], kappa: &[Vec<u32>], u0: usize, s: &[usize], t: &[usize]) -> Q {
    let flags = gamma.all_flags();
    let mut acc = Q::one();
    for v in 0..gamma.num_vertices() {
        let x = if v == u0 {
            let fl: Vec<OmegaFlag> = flags[v]
                .iter()
                .map(|&f| {
                    let sp = s.iter().position(|&x| x == f).map(|i| i as u8);
                    let tp = t.iter().position(|&x| x == f).map(|i| i as u8);
                    OmegaFlag::new(sp, tp, psi[f])
                })
                .collect();
            omega_vertex_integral(&fl, &kappa[v])
        } else {
            let exps: Vec<u32> = flags[v].iter().map(|&f| psi[f]).collect();
            kappa_psi_raw(gamma.vertex_genus(v), &exps, &kappa[v])
        };
        if x.is_zero() {
            return x;
        }
        acc *= x;
    }
    acc
}

/// `∫ [s₁]·[s₂]` for two ω-strata (zero unless the polarizations differ).
pub fn pair_omega_strata(s1: &OmegaStratum, s2: &OmegaStratum, epsilon: i32) -> Q {
    let mut acc = Q::zero();
    if s1.pol == s2.pol || s1.graph().genus() != s2.graph().genus() || s1.graph().n() != s2.graph().n() {
        return acc;
    }
    if s1.degree() + s2.degree() != 2 * s1.graph().dim() {
        return acc;
    }
    let (a, b, sign) = if s1.pol == Polarization::Hol { (s1, s2, 1) } else { (s2, s1, epsilon) };
    for d in common_degenerations(a.graph(), b.graph()) {
        let Some((ua, sa)) = transport_slot(&d.graph, &d.to_a, a.slot()) else { continue };
        let Some((ub, sb)) = transport_slot(&d.graph, &d.to_b, b.slot()) else { continue };
        if ua != ub {
            continue;
        }
        for_each_term(&d, a.base(), b.base(), |psi, kappa, neg| {
            let v = integrate_with_slots(&d.graph, psi, kappa, ua, &sa, &sb);
            if neg {
                acc -= v;
            } else {
                acc += v;
            }
        });
    }
    acc * qi(sign as i64) / Q::from_integer((a.base().automorphism_order() * b.base().automorphism_order()).into())
}

/// `∫ x·y` with ε = [`DEFAULT_EPSILON`].
pub fn omega_pair(x: &OmegaClass, y: &OmegaClass) -> Result<Q> {
    omega_pair_with(x, y, DEFAULT_EPSILON)
}

pub fn omega_pair_with(x: &OmegaClass, y: &OmegaClass, epsilon: i32) -> Result<Q> {
    if (x.genus(), x.n()) != (y.genus(), y.n()) {
        return Err(Error::AmbientMismatch(x.genus(), x.n(), y.genus(), y.n()));
    }
    if x.degree() + y.degree() != 2 * x.dim() {
        return Err(Error::Degree("pairing needs complementary degrees".into()));
    }
    let mut acc = Q::zero();
    for (s1, c1) in x.terms() {
        for (s2, c2) in y.terms() {
            let v = pair_omega_strata(s1, s2, epsilon);
            if !v.is_zero() {
                acc += c1 * c2 * v;
            }
        }
    }
    Ok(acc)
}

/// True iff `candidate` pairs to zero with every battery element.
pub fn verify_relation(candidate: &OmegaClass, battery: &[OmegaClass]) -> Result<bool> {
    for b in battery {
        if !omega_pair(candidate, b)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// π^* along forgetting the marking `label` (1-based) of the target space.
pub fn omega_pullback_forgetful(x: &OmegaClass, label: usize) -> Result<OmegaClass> {
    let (g, n) = (x.genus(), x.n() + 1);
    if label == 0 || label > n {
        return Err(Error::Invalid("inserted marking out of range".into()));
    }
    let mut out = OmegaClass::zero(g, n, x.degree());
    for (s, c) in x.terms() {
        let c = c / Q::from_integer(s.base().automorphism_order().into());
        let d = Draft::from_marked(s.graph(), s.base().psi(), &s.base().kappa_vecs(), &s.marks());
        for (d, c) in pullback_raw(&d, &c) {
            let (gr, psi, kappa, marks) = d.into_marked();
            out.add_xi(&gr, &psi, &kappa, &marks, s.polarization(), c);
        }
    }
    Ok(if label == n { out } else { out.relabel_legs(&insert_perm(n, label - 1)) })
}

/// π_* along forgetting the marking `label` (1-based). Terms whose ω-slot
/// contains the forgotten marking push forward to zero.
pub fn omega_pushforward_forgetful(x: &OmegaClass, label: usize) -> Result<OmegaClass> {
    let (g, n1) = (x.genus(), x.n());
    if label == 0 || label > n1 {
        return Err(Error::Invalid("forgotten marking out of range".into()));
    }
    let n = n1 - 1;
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::Unstable { g, n });
    }
    let x = if label == n1 { x.clone() } else { x.relabel_legs(&to_end_perm(n1, label - 1)) };
    let mut out = OmegaClass::zero(g, n, x.degree().saturating_sub(2));
    for (s, c) in x.terms() {
        let c = c / Q::from_integer(s.base().automorphism_order().into());
        let d = Draft::from_marked(s.graph(), s.base().psi(), &s.base().kappa_vecs(), &s.marks());
        for (d, c) in pushforward_raw(d, &c)? {
            let (gr, psi, kappa, marks) = d.into_marked();
            out.add_xi(&gr, &psi, &kappa, &marks, s.polarization(), c);
        }
    }
    Ok(out)
}

/// One factor of a Künneth component.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Factor {
    Taut(DecoratedStratum),
    Omega(OmegaStratum),
}

/// Pullback of a class to the normalization of a one-edge boundary
/// divisor, as Künneth components over its factors: for a separating
/// divisor the factor on the vertex at half-edge `j` has the divisor's
/// markings at that vertex (in increasing order) followed by the node;
/// for the irreducible divisor the single factor has the markings followed
/// by the two node branches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kunneth {
    pub factors: Vec<(u32, usize)>,
    pub terms: BTreeMap<Vec<Factor>, Q>,
}

impl Kunneth {
    fn add(&mut self, parts: Vec<Factor>, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(parts).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            let k: Vec<Vec<Factor>> = self.terms.iter().filter(|(_, v)| v.is_zero()).map(|(k, _)| k.clone()).collect();
            for k in k {
                self.terms.remove(&k);
            }
        }
    }

    /// For the irreducible divisor: the single factor as an ω-class.
    pub fn into_omega_class(self) -> Result<OmegaClass> {
        let (g, n) = self.factors[0];
        let mut out: Option<OmegaClass> = None;
        for (parts, c) in self.terms {
            match parts.as_slice() {
                [Factor::Omega(s)] => {
                    let o = out.get_or_insert_with(|| OmegaClass::zero(g, n, s.degree()));
                    o.add_term(s.clone(), c);
                }
                _ => return Err(Error::Invalid("not a single ω-factor pullback".into())),
            }
        }
        Ok(out.unwrap_or_else(|| OmegaClass::zero(g, n, 0)))
    }
}

/// Pullback of `x` to the one-edge divisor `delta` (same ambient space).
pub fn omega_pullback_to_divisor(x: &OmegaClass, delta: &StableGraph) -> Result<Kunneth> {
    if delta.num_edges() != 1 || (delta.genus(), delta.n()) != (x.genus(), x.n()) {
        return Err(Error::Invalid("expected a one-edge graph on the same space".into()));
    }
    let n = x.n();
    let [d0, d1] = delta.edges()[0];
    let irreducible = d0 == d1;
    let factor_legs: Vec<Vec<usize>> = if irreducible {
        vec![(0..n).collect()]
    } else {
        [d0, d1].iter().map(|&v| (0..n).filter(|&i| delta.leg_vertex(i) == v).collect()).collect()
    };
    let factors: Vec<(u32, usize)> = if irreducible {
        vec![(x.genus() - 1, n + 2)]
    } else {
        vec![(delta.vertex_genus(d0), factor_legs[0].len() + 1), (delta.vertex_genus(d1), factor_legs[1].len() + 1)]
    };
    let mut out = Kunneth { factors, terms: BTreeMap::new() };
    for (s, c) in x.terms() {
        let c = c / Q::from_integer(s.base().automorphism_order().into());
        for d in common_degenerations(delta, s.graph()) {
            let Some((_, slot)) = transport_slot(&d.graph, &d.to_b, s.slot()) else { continue };
            let gm = &d.graph;
            let e0 = (0..gm.num_edges()).find(|&e| d.to_a.edge_map[e].is_some()).unwrap();
            let sw = d.to_a.edge_map[e0].unwrap().1 as usize;
            let common = d.to_b.edge_map[e0].is_some();
            let mut marks = vec![0u8; gm.num_flags()];
            for (i, &f) in slot.iter().enumerate() {
                marks[f] = i as u8 + 1;
            }
            for (psi, kappa) in pullback_decorations(gm, &d.to_b, s.base()) {
                let excess: Vec<(Q, Option<usize>)> =
                    if common { vec![(-c.clone(), Some(0)), (-c.clone(), Some(1))] } else { vec![(c.clone(), None)] };
                for (coef, side) in excess {
                    let mut psi = psi.clone();
                    if let Some(sd) = side {
                        psi[n + 2 * e0 + sd] += 1;
                    }
                    let parts = cut(gm, &psi, &kappa, &marks, e0, sw, &d.to_a.vertex_map, delta, &factor_legs, s.polarization());
                    if let Some((parts, mult)) = parts {
                        out.add(parts, coef * mult);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Cuts `gm` at `e0` and splits it into the factors of the divisor.
/// Returns the canonical factors and the coefficient turning the ξ-term
/// into the product of factor classes.
#[allow(clippy::too_many_arguments)]
fn cut(
    gm: &StableGraph,
    psi: &[u32],
    kappa: &[Vec<u32>],
    marks: &[u8],
    e0: usize,
    sw: usize,
    vmap: &[usize],
    delta: &StableGraph,
    factor_legs: &[Vec<usize>],
    pol: Polarization,
) -> Option<(Vec<Factor>, Q)> {
    let n = gm.n();
    let d = Draft::from_marked(gm, psi, kappa, marks);
    // the node branch at divisor half j is gm half (j ^ sw) of e0
    let branch = |j: usize| d.edges[e0][j ^ sw];
    let [d0, d1] = delta.edges()[0];
    let mut drafts = Vec::new();
    if d0 == d1 {
        let mut dd = d.clone();
        dd.edges.remove(e0);
        dd.legs.push(branch(0));
        dd.legs.push(branch(1));
        drafts.push(dd);
    } else {
        for (j, &dv) in [d0, d1].iter().enumerate() {
            let keep: Vec<usize> = (0..gm.num_vertices()).filter(|&u| vmap[u] == dv).collect();
            let pos = |u: usize| keep.iter().position(|&k| k == u).unwrap();
            let mut dd = Draft::default();
            for &u in &keep {
                dd.genera.push(d.genera[u]);
                dd.kappa.push(d.kappa[u].clone());
            }
            for &i in &factor_legs[j] {
                let (u, p, m) = d.legs[i];
                dd.legs.push((pos(u), p, m));
            }
            let (u, p, m) = branch(j);
            dd.legs.push((pos(u), p, m));
            for (e, ends) in d.edges.iter().enumerate() {
                if e != e0 && vmap[ends[0].0] == dv {
                    dd.edges.push([(pos(ends[0].0), ends[0].1, ends[0].2), (pos(ends[1].0), ends[1].1, ends[1].2)]);
                }
            }
            drafts.push(dd);
        }
    }
    let _ = n;
    let mut parts = Vec::new();
    let mut mult = Q::one();
    for dd in drafts {
        let (g, p, k, m) = dd.into_marked();
        let aut = Q::from_integer(g.automorphism_order().into());
        if m.iter().any(|&x| x != 0) {
            let v = g.flag_vertex(m.iter().position(|&x| x != 0).unwrap());
            if super::exceeds(&g, &p, &k, Some(v)) {
                return None;
            }
            let (s, sign) = OmegaStratum::from_marked(&g, &p, &k, &m, pol)?;
            mult *= aut * qi(sign as i64);
            parts.push(Factor::Omega(s));
        } else {
            if crate::strata::exceeds_dimension(&g, &p, &k) {
                return None;
            }
            let s = DecoratedStratum::new(g, p, k).ok()?;
            mult *= aut;
            parts.push(Factor::Taut(s));
        }
    }
    Some((parts, mult))
}

/// `x · y` for an ω-class and a tautological class.
pub fn omega_product(x: &OmegaClass, y: &TautClass) -> Result<OmegaClass> {
    if (x.genus(), x.n()) != (y.genus(), y.n()) {
        return Err(Error::AmbientMismatch(x.genus(), x.n(), y.genus(), y.n()));
    }
    let mut out = OmegaClass::zero(x.genus(), x.n(), x.degree() + y.degree());
    if x.degree() + y.degree() > 2 * x.dim() {
        return Ok(out);
    }
    for (s1, c1) in x.terms() {
        for (s2, c2) in y.terms() {
            let f = c1 * c2 / Q::from_integer((s1.base().automorphism_order() * s2.automorphism_order()).into());
            for d in common_degenerations(s1.graph(), s2.graph()) {
                let Some((_, slot)) = transport_slot(&d.graph, &d.to_a, s1.slot()) else { continue };
                let mut marks = vec![0u8; d.graph.num_flags()];
                for (i, &fl) in slot.iter().enumerate() {
                    marks[fl] = i as u8 + 1;
                }
                for_each_term(&d, s1.base(), s2, |psi, kappa, neg| {
                    let c = if neg { -f.clone() } else { f.clone() };
                    out.add_xi(&d.graph, psi, kappa, &marks, s1.polarization(), c);
                });
            }
        }
    }
    Ok(out)
}
