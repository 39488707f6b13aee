use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use super::{Draft, Slot, TautClass};
use crate::error::{Error, Result};
use crate::rational::Q;

/// How factor spaces are glued: each marking (1-based) of each factor is
/// either paired with another marking (becoming an edge) or becomes a
/// marking of the result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingDatum {
    /// glued pairs of (factor, marking)
    pub pairs: Vec<((usize, usize), (usize, usize))>,
    /// result marking `i + 1` is `legs[i]` = (factor, marking)
    pub legs: Vec<(usize, usize)>,
}

/// ξ_*(x₁ ⊠ ⋯ ⊠ x_k) for the gluing map described by `datum`.
pub fn pushforward_gluing(classes: &[TautClass], datum: &GluingDatum) -> Result<TautClass> {
    let k = classes.len();
    let mut used: Vec<Vec<bool>> = classes.iter().map(|c| vec![false; c.n()]).collect();
    let mut mark = |(f, m): (usize, usize)| -> Result<()> {
        if f >= k || m == 0 || m > classes[f].n() || used[f][m - 1] {
            return Err(Error::Invalid("gluing datum does not match the factors".into()));
        }
        used[f][m - 1] = true;
        Ok(())
    };
    for &(a, b) in &datum.pairs {
        mark(a)?;
        mark(b)?;
    }
    for &l in &datum.legs {
        mark(l)?;
    }
    if used.iter().flatten().any(|&u| !u) {
        return Err(Error::Invalid("every marking must be glued or kept".into()));
    }
    // connectivity of the factor graph
    let mut comp: Vec<usize> = (0..k).collect();
    fn root(c: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while c[r] != r {
            r = c[r];
        }
        r
    }
    for &((f1, _), (f2, _)) in &datum.pairs {
        let (a, b) = (root(&mut comp, f1), root(&mut comp, f2));
        comp[a] = b;
    }
    if k == 0 || (0..k).any(|f| root(&mut comp, f) != root(&mut comp, 0)) {
        return Err(Error::Invalid("glued curve is disconnected".into()));
    }
    let g = (classes.iter().map(|c| c.genus() as i64).sum::<i64>() + datum.pairs.len() as i64 - k as i64 + 1) as u32;
    let n = datum.legs.len();
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::Unstable { g, n });
    }
    let degree = classes.iter().map(|c| c.degree()).sum::<usize>() + 2 * datum.pairs.len();
    let mut out = TautClass::zero(g, n, degree);
    let lists: Vec<Vec<_>> = classes.iter().map(|c| c.terms().iter().collect()).collect();
    if lists.iter().any(|l| l.is_empty()) {
        return Ok(out);
    }
    let mut idx = vec![0usize; k];
    loop {
        let mut d = Draft::default();
        let mut coef = Q::one();
        let mut offsets = Vec::with_capacity(k);
        let mut leg_at: Vec<Vec<Slot>> = Vec::with_capacity(k);
        for f in 0..k {
            let (s, c) = lists[f][idx[f]];
            coef *= c / Q::from_integer(s.automorphism_order().into());
            let part = Draft::from_stratum(s);
            let off = d.genera.len();
            offsets.push(off);
            d.genera.extend_from_slice(&part.genera);
            d.kappa.extend(part.kappa.iter().cloned());
            for e in &part.edges {
                d.edges.push([(e[0].0 + off, e[0].1, e[0].2), (e[1].0 + off, e[1].1, e[1].2)]);
            }
            leg_at.push(part.legs.iter().map(|&(v, p, m)| (v + off, p, m)).collect());
        }
        for &((f1, m1), (f2, m2)) in &datum.pairs {
            d.edges.push([leg_at[f1][m1 - 1], leg_at[f2][m2 - 1]]);
        }
        for &(f, m) in &datum.legs {
            d.legs.push(leg_at[f][m - 1]);
        }
        let (gr, psi, kappa) = d.into_parts();
        out.add_xi(&gr, &psi, &kappa, coef);
        // next combination
        let mut f = 0;
        loop {
            if f == k {
                return Ok(out);
            }
            idx[f] += 1;
            if idx[f] < lists[f].len() {
                break;
            }
            idx[f] = 0;
            f += 1;
        }
    }
}
