use alloc::vec::Vec;

use super::{Draft, TautClass};
use crate::error::{Error, Result};
use crate::rational::{qi, Q};

/// Permutation sending the last marking to `pos` and shifting the markings
/// at or after `pos` up by one.
pub(crate) fn insert_perm(n: usize, pos: usize) -> Vec<usize> {
    (0..n).map(|i| if i == n - 1 { pos } else if i >= pos { i + 1 } else { i }).collect()
}

/// Permutation moving marking `pos` to the end.
pub(crate) fn to_end_perm(n: usize, pos: usize) -> Vec<usize> {
    (0..n).map(|i| if i == pos { n - 1 } else if i > pos { i - 1 } else { i }).collect()
}

/// π^* of `c · ξ_*(d)`, the new marking appended last, as ξ-terms.
pub(crate) fn pullback_raw(base: &Draft, c: &Q) -> Vec<(Draft, Q)> {
    let mut out = Vec::new();
    let n = base.legs.len() + 1;
    for v in 0..base.genera.len() {
        let mut d = base.clone();
        d.legs.push((v, 0, 0));
        // κ_b ↦ κ_b − ψ_p^b
        let ks = d.kappa[v].clone();
        for mask in 0u64..(1u64 << ks.len()) {
            let mut dd = d.clone();
            let mut left = Vec::new();
            let mut e = 0;
            for (t, &b) in ks.iter().enumerate() {
                if mask >> t & 1 == 1 {
                    e += b;
                } else {
                    left.push(b);
                }
            }
            dd.kappa[v] = left;
            dd.legs[n - 1].1 = e;
            let sign = if mask.count_ones() % 2 == 0 { c.clone() } else { -c.clone() };
            out.push((dd, sign));
        }
        // ψ_f^a ↦ ψ_f^a − D_{f,p} ψ_•^{a−1}
        let flags: Vec<(bool, usize, usize)> = (0..n - 1)
            .filter(|&i| d.legs[i].0 == v && d.legs[i].1 > 0)
            .map(|i| (true, i, 0))
            .chain((0..d.edges.len()).flat_map(|e| (0..2).map(move |s| (false, e, s))).filter(|&(_, e, s)| {
                d.edges[e][s].0 == v && d.edges[e][s].1 > 0
            }))
            .collect();
        for (is_leg, i, side) in flags {
            let mut dd = d.clone();
            let b = dd.add_vertex(0);
            let old = if is_leg { &mut dd.legs[i] } else { &mut dd.edges[i][side] };
            let (_, a, mark) = *old;
            *old = (b, 0, 0);
            dd.legs[n - 1] = (b, 0, 0);
            dd.edges.push([(v, a - 1, mark), (b, 0, 0)]);
            out.push((dd, -c.clone()));
        }
    }
    out
}

/// π_* of `c · ξ_*(d)` forgetting the last leg, as ξ-terms. A marked
/// forgotten leg contributes nothing.
pub(crate) fn pushforward_raw(mut d: Draft, c: &Q) -> Result<Vec<(Draft, Q)>> {
    let mut out = Vec::new();
    let (v, cp, mark) = d.legs.pop().unwrap();
    if mark != 0 {
        return Ok(out);
    }
    let valence = d.legs.iter().filter(|l| l.0 == v).count()
        + d.edges.iter().map(|e| (e[0].0 == v) as usize + (e[1].0 == v) as usize).sum::<usize>();
    let gv = d.genera[v];
    if 2 * gv as i64 - 2 + valence as i64 > 0 {
        let ks = d.kappa[v].clone();
        let kappa0 = qi(2 * gv as i64 - 2 + valence as i64);
        for mask in 0u64..(1u64 << ks.len()) {
            let mut e = cp;
            let mut left = Vec::new();
            for (t, &b) in ks.iter().enumerate() {
                if mask >> t & 1 == 1 {
                    e += b;
                } else {
                    left.push(b);
                }
            }
            if e >= 1 {
                let mut dd = d.clone();
                let mut coef = c.clone();
                if e == 1 {
                    coef *= &kappa0;
                } else {
                    left.push(e - 1);
                }
                dd.kappa[v] = left;
                out.push((dd, coef));
            }
        }
        if cp == 0 {
            for i in 0..d.legs.len() {
                if d.legs[i].0 == v && d.legs[i].1 > 0 {
                    let mut dd = d.clone();
                    dd.legs[i].1 -= 1;
                    out.push((dd, c.clone()));
                }
            }
            for e in 0..d.edges.len() {
                for sd in 0..2 {
                    if d.edges[e][sd].0 == v && d.edges[e][sd].1 > 0 {
                        let mut dd = d.clone();
                        dd.edges[e][sd].1 -= 1;
                        out.push((dd, c.clone()));
                    }
                }
            }
        }
    } else {
        // genus-0 vertex with p and two other flags: contracted away
        let legs_here: Vec<usize> = (0..d.legs.len()).filter(|&i| d.legs[i].0 == v).collect();
        let halves: Vec<(usize, usize)> = (0..d.edges.len())
            .flat_map(|e| (0..2).map(move |s| (e, s)))
            .filter(|&(e, s)| d.edges[e][s].0 == v)
            .collect();
        let decorated = cp > 0
            || !d.kappa[v].is_empty()
            || legs_here.iter().any(|&i| d.legs[i].1 > 0)
            || halves.iter().any(|&(e, s)| d.edges[e][s].1 > 0);
        if decorated {
            return Ok(out);
        }
        match (legs_here.as_slice(), halves.as_slice()) {
            ([i], [(e, s)]) => {
                // the leg takes the place (ψ and mark) of the partner half-edge
                d.legs[*i] = d.edges[*e][1 - s];
                d.edges.remove(*e);
            }
            ([], [(e1, s1), (e2, s2)]) if e1 != e2 => {
                let (p1, p2) = (d.edges[*e1][1 - s1], d.edges[*e2][1 - s2]);
                let (lo, hi) = if e1 < e2 { (*e1, *e2) } else { (*e2, *e1) };
                d.edges.remove(hi);
                d.edges.remove(lo);
                d.edges.push([p1, p2]);
            }
            _ => return Err(Error::Invalid("unexpected unstable configuration".into())),
        }
        d.remove_vertex(v);
        out.push((d, c.clone()));
    }
    Ok(out)
}

/// π^* along the map forgetting the marking `label` (1-based) of M̄_{g,n}.
pub fn pullback_forgetful(x: &TautClass, label: usize) -> Result<TautClass> {
    let (g, n) = (x.genus(), x.n() + 1);
    if label == 0 || label > n {
        return Err(Error::Invalid("inserted marking out of range".into()));
    }
    let mut out = TautClass::zero(g, n, x.degree());
    for (s, c) in x.terms() {
        let c = c / Q::from_integer(s.automorphism_order().into());
        for (d, c) in pullback_raw(&Draft::from_stratum(s), &c) {
            let (gr, psi, kappa) = d.into_parts();
            out.add_xi(&gr, &psi, &kappa, c);
        }
    }
    Ok(if label == n { out } else { out.relabel_legs(&insert_perm(n, label - 1)) })
}

/// π_* along the map forgetting the marking `label` (1-based).
pub fn pushforward_forgetful(x: &TautClass, label: usize) -> Result<TautClass> {
    let (g, n1) = (x.genus(), x.n());
    if label == 0 || label > n1 {
        return Err(Error::Invalid("forgotten marking out of range".into()));
    }
    let n = n1 - 1;
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::Unstable { g, n });
    }
    let x = if label == n1 { x.clone() } else { x.relabel_legs(&to_end_perm(n1, label - 1)) };
    let mut out = TautClass::zero(g, n, x.degree().saturating_sub(2));
    if x.degree() < 2 {
        return Ok(out);
    }
    for (s, c) in x.terms() {
        let c = c / Q::from_integer(s.automorphism_order().into());
        for (d, c) in pushforward_raw(Draft::from_stratum(s), &c)? {
            let (gr, psi, kappa) = d.into_parts();
            out.add_xi(&gr, &psi, &kappa, c);
        }
    }
    Ok(out)
}
