//! Representations of symmetric groups: Specht-module dimensions,
//! Littlewood–Richardson induction, branching, and characters.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::rational::{factorial, Q};

/// A partition, stored as weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        parts.retain(|&p| p > 0);
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Invalid("partition parts must be weakly decreasing".into()));
        }
        Ok(Partition(parts))
    }

    fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    /// The hook `(a, 1^b)`.
    pub fn hook(a: u32, b: u32) -> Self {
        let mut p = vec![a];
        p.extend(core::iter::repeat(1).take(b as usize));
        Partition::from_unsorted(p)
    }

    /// The one-row partition `(n)` (trivial representation).
    pub fn row(n: u32) -> Self {
        Partition::from_unsorted(vec![n])
    }

    /// The one-column partition `(1^n)` (sign representation).
    pub fn column(n: u32) -> Self {
        Partition(vec![1; n as usize])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }
    pub fn size(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let m = self.part(0);
        Partition((1..=m).map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32).collect())
    }

    fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && (0..other.len()).all(|i| self.0[i] >= other.0[i])
    }
}

impl core::fmt::Display for Partition {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// All partitions of `n`, in reverse lexicographic order.
pub fn partitions(n: u32) -> Vec<Partition> {
    fn go(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=n.min(max)).rev() {
            cur.push(p);
            go(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Dimension of the Specht module V_λ by the hook length formula.
pub fn dim_specht(l: &Partition) -> BigInt {
    let c = l.conjugate();
    let mut hooks = BigInt::from(1);
    for (i, &row) in l.0.iter().enumerate() {
        for j in 0..row as usize {
            let h = (row as usize - j - 1) + (c.0[j] as usize - i - 1) + 1;
            hooks *= BigInt::from(h);
        }
    }
    factorial(l.size() as u64) / hooks
}

/// A direct sum of irreducible S_n-representations with multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SnRepSum {
    n: usize,
    terms: BTreeMap<Partition, u64>,
}

impl SnRepSum {
    pub fn zero(n: usize) -> Self {
        SnRepSum { n, terms: BTreeMap::new() }
    }
    pub fn irreducible(l: Partition) -> Self {
        let mut s = SnRepSum::zero(l.size());
        s.add_irreducible(l, 1);
        s
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn terms(&self) -> &BTreeMap<Partition, u64> {
        &self.terms
    }
    pub fn multiplicity(&self, l: &Partition) -> u64 {
        self.terms.get(l).copied().unwrap_or(0)
    }
    pub fn add_irreducible(&mut self, l: Partition, m: u64) {
        debug_assert_eq!(l.size(), self.n);
        if m > 0 {
            *self.terms.entry(l).or_insert(0) += m;
        }
    }
    pub fn add(&self, other: &SnRepSum) -> Result<SnRepSum> {
        if self.n != other.n {
            return Err(Error::Invalid("representations of different symmetric groups".into()));
        }
        let mut out = self.clone();
        for (l, &m) in &other.terms {
            out.add_irreducible(l.clone(), m);
        }
        Ok(out)
    }
    pub fn dim(&self) -> BigInt {
        self.terms.iter().map(|(l, &m)| dim_specht(l) * BigInt::from(m)).sum()
    }
}

impl core::fmt::Display for SnRepSum {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (l, m)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if *m > 1 {
                write!(f, "{m}·")?;
            }
            write!(f, "V({l})")?;
        }
        Ok(())
    }
}

/// Partitions obtained from `l` by adding `k` boxes, no two in one column
/// (`vertical == false`) or no two in one row (`vertical == true`).
fn add_strip(l: &Partition, k: u32, vertical: bool) -> Vec<Partition> {
    let base = if vertical { l.conjugate() } else { l.clone() };
    let rows = base.len() + 1;
    let mut out = Vec::new();
    let mut add = vec![0u32; rows];
    // horizontal strip: row i may grow up to base[i-1] − base[i] (row 0 unbounded)
    fn go(base: &Partition, i: usize, left: u32, add: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if i == add.len() {
            if left == 0 {
                out.push(Partition::from_unsorted((0..add.len()).map(|r| base.part(r) + add[r]).collect()));
            }
            return;
        }
        let cap = if i == 0 { left } else { (base.part(i - 1) - base.part(i)).min(left) };
        for a in 0..=cap {
            add[i] = a;
            go(base, i + 1, left - a, add, out);
        }
        add[i] = 0;
    }
    go(&base, 0, k, &mut add, &mut out);
    if vertical {
        out.into_iter().map(|p| p.conjugate()).collect()
    } else {
        out
    }
}

/// Littlewood–Richardson coefficient c^ν_{λμ}: the number of semistandard
/// fillings of ν/λ with content μ whose reverse reading word is a lattice word.
pub fn lr_coefficient(l: &Partition, m: &Partition, nu: &Partition) -> u64 {
    if nu.size() != l.size() + m.size() || !nu.contains(l) || !nu.contains(m) {
        return 0;
    }
    let rows = nu.len();
    let mut fill: Vec<Vec<u32>> = (0..rows).map(|r| vec![0; nu.part(r) as usize]).collect();
    let mut count = vec![0u32; m.len() + 1];
    // cells in reading order: rows top to bottom, each right to left
    let cells: Vec<(usize, usize)> =
        (0..rows).flat_map(|r| (l.part(r) as usize..nu.part(r) as usize).rev().map(move |c| (r, c))).collect();
    fn go(
        idx: usize,
        cells: &[(usize, usize)],
        l: &Partition,
        m: &Partition,
        nu: &Partition,
        fill: &mut Vec<Vec<u32>>,
        count: &mut Vec<u32>,
    ) -> u64 {
        if idx == cells.len() {
            return 1;
        }
        let (r, c) = cells[idx];
        // row weakly increasing: value ≤ right neighbour (already filled)
        let hi = if c + 1 < nu.part(r) as usize { fill[r][c + 1] } else { m.len() as u32 };
        // column strict: value > the entry above when it is part of the skew shape
        let lo = if r > 0 && c >= l.part(r - 1) as usize { fill[r - 1][c] + 1 } else { 1 };
        let mut total = 0;
        for v in lo..=hi.min(r as u32 + 1) {
            let vi = v as usize;
            if count[vi] >= m.part(vi - 1) {
                continue;
            }
            if vi > 1 && count[vi] + 1 > count[vi - 1] {
                continue;
            }
            count[vi] += 1;
            fill[r][c] = v;
            total += go(idx + 1, cells, l, m, nu, fill, count);
            count[vi] -= 1;
        }
        fill[r][c] = 0;
        total
    }
    go(0, &cells, l, m, nu, &mut fill, &mut count)
}

/// `Ind_{S_a × S_b}^{S_{a+b}} (V_λ ⊠ V_μ)`; rows and columns use the Pieri rule.
pub fn induce(l: &Partition, m: &Partition) -> SnRepSum {
    let n = l.size() + m.size();
    let mut out = SnRepSum::zero(n);
    let (big, small) = if m.len() <= 1 || m.part(0) == 1 { (l, m) } else { (m, l) };
    if small.len() <= 1 {
        for p in add_strip(big, small.size() as u32, false) {
            out.add_irreducible(p, 1);
        }
        return out;
    }
    if small.part(0) == 1 {
        for p in add_strip(big, small.size() as u32, true) {
            out.add_irreducible(p, 1);
        }
        return out;
    }
    for nu in partitions(n as u32) {
        let c = lr_coefficient(l, m, &nu);
        out.add_irreducible(nu, c);
    }
    out
}

/// Restriction to S_{n−1}: remove one corner box in all ways.
pub fn restrict(l: &Partition) -> SnRepSum {
    let mut out = SnRepSum::zero(l.size().saturating_sub(1));
    for i in 0..l.len() {
        if l.part(i) > l.part(i + 1) {
            let mut p = l.0.clone();
            p[i] -= 1;
            out.add_irreducible(Partition::from_unsorted(p), 1);
        }
    }
    out
}

/// χ^λ at the class of cycle type `rho`, by the Murnaghan–Nakayama rule.
pub fn character(l: &Partition, rho: &[u32]) -> i64 {
    if rho.iter().map(|&r| r as usize).sum::<usize>() != l.size() {
        return 0;
    }
    let len = l.len();
    let beta: Vec<i64> = (0..len).map(|i| l.part(i) as i64 + (len - 1 - i) as i64).collect();
    mn(&beta, rho)
}

fn mn(beta: &[i64], rho: &[u32]) -> i64 {
    let Some((&r, rest)) = rho.split_first() else { return 1 };
    let r = r as i64;
    let mut total = 0;
    for (i, &b) in beta.iter().enumerate() {
        let nb = b - r;
        if nb < 0 || beta.contains(&nb) {
            continue;
        }
        let between = beta.iter().filter(|&&x| x > nb && x < b).count();
        let mut next = beta.to_vec();
        next[i] = nb;
        let v = mn(&next, rest);
        total += if between % 2 == 0 { v } else { -v };
    }
    total
}

/// Size of the centralizer of a permutation of cycle type `rho`.
pub fn centralizer_order(rho: &[u32]) -> BigInt {
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    for &r in rho {
        *counts.entry(r).or_insert(0) += 1;
    }
    counts.iter().fold(BigInt::from(1), |acc, (&r, &m)| acc * BigInt::from(r).pow(m as u32) * factorial(m))
}

/// Multiplicities of `V_λ ⊠ V_μ` in the restriction of V_ν to
/// S_a × S_{n−a}, computed directly from the character table.
pub fn restrict_to_young_by_characters(nu: &Partition, a: u32) -> BTreeMap<(Partition, Partition), u64> {
    let n = nu.size() as u32;
    let mut out = BTreeMap::new();
    if a > n {
        return out;
    }
    let (pa, pb) = (partitions(a), partitions(n - a));
    for l in &pa {
        for m in &pb {
            let mut acc = Q::from_integer(0.into());
            for alpha in &pa {
                for beta in &pb {
                    let mut cyc: Vec<u32> = alpha.0.iter().chain(&beta.0).copied().collect();
                    cyc.sort_unstable_by(|x, y| y.cmp(x));
                    let v = character(l, &alpha.0) * character(m, &beta.0) * character(nu, &cyc);
                    if v != 0 {
                        acc += Q::new(BigInt::from(v), centralizer_order(&alpha.0) * centralizer_order(&beta.0));
                    }
                }
            }
            let c = acc.to_integer().to_u64().unwrap_or(0);
            if c > 0 {
                out.insert((l.clone(), m.clone()), c);
            }
        }
    }
    out
}

/// Multiplicity of V_μ in the restriction of V_λ to S_{n−1}, from characters.
pub fn restrict_by_characters(l: &Partition) -> SnRepSum {
    let n = l.size();
    let mut out = SnRepSum::zero(n - 1);
    for (pair, c) in restrict_to_young_by_characters(l, n as u32 - 1) {
        out.add_irreducible(pair.0, c);
    }
    out
}
