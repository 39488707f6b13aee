use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::{pair_strata, DecoratedStratum};
use crate::error::{Error, Result};
use crate::graphs::{enumerate_stable_graphs, StableGraph};
use crate::linalg::{rank_dense, RankCertificate, DEFAULT_PRIMES};
use crate::rational::Q;

/// Partitions of `k` into positive parts, each nondecreasing.
pub(crate) fn partitions(k: u32) -> Vec<Vec<u32>> {
    fn rec(k: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        for p in min..=k {
            cur.push(p);
            rec(k - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, 1, &mut Vec::new(), &mut out);
    out
}

/// Nonnegative vectors of length `len` summing to `total`.
pub(crate) fn compositions(total: u32, len: usize) -> Vec<Vec<u32>> {
    if len == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, len - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Decorations of total degree `k` at one vertex: (ψ per flag, κ indices).
fn vertex_decorations(nflags: usize, k: u32) -> Vec<(Vec<u32>, Vec<u32>)> {
    let mut out = Vec::new();
    for j in 0..=k {
        for p in compositions(j, nflags) {
            for kp in partitions(k - j) {
                out.push((p.clone(), kp));
            }
        }
    }
    out
}

fn decorate_graph(gr: &StableGraph, rem: u32, set: &mut BTreeSet<(usize, DecoratedStratum)>) {
    let flags = gr.all_flags();
    let nv = gr.num_vertices();
    let dims: Vec<u32> = (0..nv).map(|v| gr.vertex_dim(v) as u32).collect();
    let mut psi = vec![0u32; gr.num_flags()];
    let mut kappa = vec![Vec::new(); nv];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        v: usize,
        rem: u32,
        gr: &StableGraph,
        flags: &[Vec<usize>],
        dims: &[u32],
        psi: &mut Vec<u32>,
        kappa: &mut Vec<Vec<u32>>,
        set: &mut BTreeSet<(usize, DecoratedStratum)>,
    ) {
        if v == dims.len() {
            if rem == 0 {
                let (s, _) = DecoratedStratum::canonical(gr, psi, kappa);
                set.insert((gr.num_edges(), s));
            }
            return;
        }
        let later: u32 = dims[v + 1..].iter().sum();
        for k in 0..=rem.min(dims[v]) {
            if rem - k > later {
                continue;
            }
            for (p, kp) in vertex_decorations(flags[v].len(), k) {
                for (i, &f) in flags[v].iter().enumerate() {
                    psi[f] = p[i];
                }
                kappa[v] = kp;
                rec(v + 1, rem - k, gr, flags, dims, psi, kappa, set);
            }
        }
        for &f in &flags[v] {
            psi[f] = 0;
        }
        kappa[v].clear();
    }
    rec(0, rem, gr, &flags, &dims, &mut psi, &mut kappa, set);
}

/// All canonical decorated strata of cohomological degree `d`, ordered by
/// edge count and then by the canonical data.
pub fn degree_generators(g: u32, n: usize, d: usize) -> Result<Vec<DecoratedStratum>> {
    let dim = (3 * g as i64 - 3 + n as i64).max(0) as usize;
    if d % 2 == 1 || d > 2 * dim {
        return Err(Error::Degree("degree must be even and at most 2(3g-3+n)".into()));
    }
    let r = d / 2;
    let mut set = BTreeSet::new();
    for gr in enumerate_stable_graphs(g, n, Some(r))? {
        decorate_graph(&gr, (r - gr.num_edges()) as u32, &mut set);
    }
    Ok(set.into_iter().map(|x| x.1).collect())
}

/// Exact pairing matrix between two generator lists.
pub fn pairing_matrix(rows: &[DecoratedStratum], cols: &[DecoratedStratum]) -> Vec<Vec<Q>> {
    rows.iter().map(|a| cols.iter().map(|b| pair_strata(a, b)).collect()).collect()
}

#[derive(Clone, Debug)]
pub struct PairingRank {
    pub rows: Vec<DecoratedStratum>,
    pub cols: Vec<DecoratedStratum>,
    pub matrix: Vec<Vec<Q>>,
    pub certificate: RankCertificate,
}

impl PairingRank {
    pub fn rank(&self) -> usize {
        self.certificate.rank
    }
}

/// Pairing of the degree-`d` generators against the complementary degree.
pub fn pairing_rank(g: u32, n: usize, d: usize) -> Result<PairingRank> {
    pairing_rank_with(g, n, d, &DEFAULT_PRIMES)
}

pub fn pairing_rank_with(g: u32, n: usize, d: usize, primes: &[u64]) -> Result<PairingRank> {
    let rows = degree_generators(g, n, d)?;
    let dim = 3 * g as usize + n - 3;
    let cols = degree_generators(g, n, 2 * dim - d)?;
    let matrix = pairing_matrix(&rows, &cols);
    let certificate = rank_dense(&matrix, primes);
    Ok(PairingRank { rows, cols, matrix, certificate })
}
