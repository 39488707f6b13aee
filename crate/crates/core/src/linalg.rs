//! Exact rank: multi-modular elimination (dense or sparse) certified by
//! agreement across primes, and fraction-free Bareiss elimination.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::rational::Q;

/// Default primes for modular rank: distinct, each in (2³⁰, 2³¹).
pub const DEFAULT_PRIMES: [u64; 3] = [2147483647, 2147483629, 2147483587];

/// Sparse row: (column, value), columns strictly increasing.
pub type SparseRow = Vec<(usize, Q)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    pub rank: usize,
    /// Rank modulo each prime; `None` when a denominator vanished mod p.
    pub per_prime: Vec<(u64, Option<usize>)>,
    /// All usable primes gave the same rank.
    pub agree: bool,
    /// Exact rank when the fraction-free path was run.
    pub exact: Option<usize>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

#[inline]
fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn big_mod(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().unwrap()
}

/// Reduction of a rational modulo `p`; `None` if the denominator vanishes.
pub fn q_mod(x: &Q, p: u64) -> Option<u64> {
    let d = big_mod(x.denom(), p);
    if d == 0 {
        return None;
    }
    Some(mul_mod(big_mod(x.numer(), p), inv_mod(d, p), p))
}

pub fn rank_mod_p_dense(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..nrows).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, piv);
        let inv = inv_mod(rows[rank][c], p);
        for x in rows[rank][c..].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let (top, bottom) = rows.split_at_mut(rank + 1);
        let prow = &top[rank];
        for r in bottom.iter_mut() {
            let f = r[c];
            if f != 0 {
                for (x, &y) in r[c..].iter_mut().zip(&prow[c..]) {
                    *x = (*x + p - mul_mod(f, y, p)) % p;
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// Sparse row echelon form mod p with columns relabeled sparsest-first.
struct Echelon {
    p: u64,
    relabel: Vec<usize>,
    pivots: HashMap<usize, Vec<(usize, u64)>>,
    scratch: Vec<(usize, u64)>,
}

impl Echelon {
    fn new(rows: &[Vec<(usize, u64)>], ncols: usize, p: u64) -> Self {
        let mut count = vec![0usize; ncols];
        for r in rows {
            for &(c, _) in r {
                count[c] += 1;
            }
        }
        let mut order: Vec<usize> = (0..ncols).collect();
        order.sort_by_key(|&c| (count[c], c));
        let mut relabel = vec![0usize; ncols];
        for (i, &c) in order.iter().enumerate() {
            relabel[c] = i;
        }
        Echelon { p, relabel, pivots: HashMap::new(), scratch: Vec::new() }
    }

    fn prepare(&self, r: &[(usize, u64)]) -> Vec<(usize, u64)> {
        let mut r: Vec<(usize, u64)> = r.iter().filter(|x| x.1 % self.p != 0).map(|&(c, v)| (self.relabel[c], v % self.p)).collect();
        r.sort_unstable();
        r
    }

    /// Reduces `r` against the pivots; keeps it (returning true) when independent.
    fn insert(&mut self, mut r: Vec<(usize, u64)>) -> bool {
        let p = self.p;
        loop {
            let Some(&(lead, val)) = r.first() else { return false };
            match self.pivots.get(&lead) {
                Some(pr) => {
                    // r -= val * pr, dropping the leading entry
                    let scratch = &mut self.scratch;
                    scratch.clear();
                    let (mut i, mut j) = (1, 1);
                    while i < r.len() || j < pr.len() {
                        let ci = r.get(i).map_or(usize::MAX, |x| x.0);
                        let cj = pr.get(j).map_or(usize::MAX, |x| x.0);
                        if ci < cj {
                            scratch.push(r[i]);
                            i += 1;
                        } else if cj < ci {
                            scratch.push((cj, (p - mul_mod(val, pr[j].1, p)) % p));
                            j += 1;
                        } else {
                            let v = (r[i].1 + p - mul_mod(val, pr[j].1, p)) % p;
                            if v != 0 {
                                scratch.push((ci, v));
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                    core::mem::swap(&mut r, scratch);
                }
                None => {
                    let inv = inv_mod(val, p);
                    for x in r.iter_mut() {
                        x.1 = mul_mod(x.1, inv, p);
                    }
                    self.pivots.insert(lead, r);
                    return true;
                }
            }
        }
    }
}

/// Sparse elimination mod p. Columns are processed sparsest-first and rows
/// shortest-first to limit fill-in.
pub fn rank_mod_p_sparse(rows: Vec<Vec<(usize, u64)>>, ncols: usize, p: u64) -> usize {
    let mut ech = Echelon::new(&rows, ncols, p);
    let mut rows: Vec<Vec<(usize, u64)>> = rows.iter().map(|r| ech.prepare(r)).collect();
    rows.sort_by_key(|r| r.len());
    for r in rows {
        ech.insert(r);
    }
    ech.pivots.len()
}

/// Indices of the rows, taken greedily in order, that are independent of
/// the earlier ones modulo `p`.
pub fn independent_rows_mod_p(rows: &[Vec<(usize, u64)>], ncols: usize, p: u64) -> Vec<usize> {
    let mut ech = Echelon::new(rows, ncols, p);
    let mut out = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let r = ech.prepare(r);
        if ech.insert(r) {
            out.push(i);
        }
    }
    out
}

/// Reduces a rational sparse matrix modulo `p`; `None` if a denominator vanishes.
pub fn sparse_mod_p(rows: &[SparseRow], p: u64) -> Option<Vec<Vec<(usize, u64)>>> {
    rows.iter().map(|r| r.iter().map(|(c, v)| q_mod(v, p).map(|x| (*c, x))).collect()).collect()
}

/// Rank over ℚ certified by agreement of modular ranks.
pub fn rank_multimodular(rows: &[SparseRow], ncols: usize, primes: &[u64]) -> RankCertificate {
    let dense = (rows.len() as u64) * (ncols as u64) <= 4_000_000
        && rows.iter().map(|r| r.len()).sum::<usize>() * 4 > rows.len() * ncols / 8;
    let per_prime: Vec<(u64, Option<usize>)> = primes
        .iter()
        .map(|&p| {
            let mut sparse = Vec::with_capacity(rows.len());
            for r in rows {
                let mut out = Vec::with_capacity(r.len());
                for (c, v) in r {
                    match q_mod(v, p) {
                        Some(x) => out.push((*c, x)),
                        None => return (p, None),
                    }
                }
                sparse.push(out);
            }
            let rank = if dense {
                let d = sparse
                    .into_iter()
                    .map(|r| {
                        let mut row = vec![0u64; ncols];
                        for (c, x) in r {
                            row[c] = x;
                        }
                        row
                    })
                    .collect();
                rank_mod_p_dense(d, p)
            } else {
                rank_mod_p_sparse(sparse, ncols, p)
            };
            (p, Some(rank))
        })
        .collect();
    let ranks: Vec<usize> = per_prime.iter().filter_map(|x| x.1).collect();
    let rank = ranks.iter().copied().max().unwrap_or(0);
    let agree = !ranks.is_empty() && ranks.iter().all(|&r| r == rank);
    RankCertificate { rank, per_prime, agree, exact: None }
}

/// Exact rank by fraction-free (Bareiss) elimination after scaling every
/// row to integers.
pub fn rank_bareiss(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let l = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            r.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..nrows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, piv);
        for r in rank + 1..nrows {
            for k in c + 1..ncols {
                let v = (&m[rank][c] * &m[r][k] - &m[r][c] * &m[rank][k]) / &prev;
                m[r][k] = v;
            }
            m[r][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// Rank of a dense rational matrix: modular certificate, plus the exact
/// path for matrices under 200×200.
pub fn rank_dense(rows: &[Vec<Q>], primes: &[u64]) -> RankCertificate {
    let ncols = rows.first().map_or(0, |r| r.len());
    let sparse: Vec<SparseRow> = rows
        .iter()
        .map(|r| r.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(c, x)| (c, x.clone())).collect())
        .collect();
    let mut cert = rank_multimodular(&sparse, ncols, primes);
    if rows.len() < 200 && ncols < 200 {
        let exact = rank_bareiss(rows);
        cert.exact = Some(exact);
        cert.rank = exact;
    }
    cert
}
