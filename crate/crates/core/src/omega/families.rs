//! Generating families of ω-classes in low genus and their pairing ranks.

use alloc::vec;
use alloc::vec::Vec;

use super::tails::tails_pairing_rows;
use super::{omega_pair_with, omega_pullback_to_divisor, OmegaClass, OmegaStratum, Polarization, TailFlag, TailsClass, DEFAULT_EPSILON};
use crate::error::{Error, Result};
use crate::graphs::StableGraph;
use crate::linalg::{independent_rows_mod_p, rank_multimodular, sparse_mod_p, RankCertificate, SparseRow, DEFAULT_PRIMES};
use crate::rational::Q;

use num_traits::{One, Zero};

fn subsets_of(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(items: &[usize], k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in from..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    go(items, k, 0, &mut cur, &mut out);
    out
}

fn mask(xs: &[usize]) -> u64 {
    xs.iter().fold(0u64, |m, &i| m | 1 << i)
}

fn legs_outside(n: usize, covered: u64) -> Vec<usize> {
    (0..n).filter(|&i| covered >> i & 1 == 0).collect()
}

fn slot_with(first: TailFlag, legs: &[usize]) -> Vec<TailFlag> {
    let mut s = vec![first];
    s.extend(legs.iter().map(|&i| TailFlag::Leg(i as u8)));
    s
}

/// All classes `[δ_{0,P}, f_S^*ω]` on M̄_{1,n} whose slot S contains the
/// node of the tail P (any size) and 10 core legs; ordered by decreasing
/// |P|, then P, then S lexicographically.
pub fn one_tail_classes(n: usize, pol: Polarization) -> Result<Vec<TailsClass>> {
    if !(12..64).contains(&n) {
        return Err(Error::Invalid("one-tail ω-classes need 12 ≤ n < 64".into()));
    }
    let all: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    for size in (2..=n - 10).rev() {
        for p in subsets_of(&all, size) {
            let m = mask(&p);
            let core = legs_outside(n, m);
            for legs in subsets_of(&core, 10) {
                out.push(TailsClass::single(n, &[m], &slot_with(TailFlag::Node(m), &legs), pol, Q::one())?);
            }
        }
    }
    Ok(out)
}

/// The classes `[δ_{0,{1,j}}, ω]`, j = 2..12, on M̄_{1,12}.
pub fn m112_classes() -> Result<Vec<TailsClass>> {
    (1..12)
        .map(|j| {
            let m = mask(&[0, j]);
            TailsClass::single(12, &[m], &slot_with(TailFlag::Node(m), &legs_outside(12, m)), Polarization::Hol, Q::one())
        })
        .collect()
}

/// `f_T^*ω̌` on the interior for every 11-subset T of the markings
/// containing marking 1: C(n−1, 10) classes.
pub fn pulled_back_battery(n: usize, pol: Polarization) -> Result<Vec<TailsClass>> {
    let rest: Vec<usize> = (1..n).collect();
    subsets_of(&rest, 10)
        .into_iter()
        .map(|t| TailsClass::single(n, &[], &slot_with(TailFlag::Leg(0), &t), pol, Q::one()))
        .collect()
}

/// Two-tail classes on M̄_{1,n} (two disjoint tails, or a tail inside
/// another) with ω̌ on 11 core flags including the first node.
pub fn two_tail_battery(n: usize, pol: Polarization) -> Result<Vec<TailsClass>> {
    if !(13..64).contains(&n) {
        return Err(Error::Invalid("two-tail battery needs 13 ≤ n < 64".into()));
    }
    let all: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    let mut push = |tails: [u64; 2], node: u64| -> Result<()> {
        let covered = tails[0] | tails[1];
        let core_legs = legs_outside(n, covered);
        let others: Vec<TailFlag> = core_legs
            .iter()
            .map(|&i| TailFlag::Leg(i as u8))
            .chain(tails.iter().filter(|&&m| m != node && m & node != m && m | node != node).map(|&m| TailFlag::Node(m)))
            .collect();
        if others.len() < 10 {
            return Ok(());
        }
        let idx: Vec<usize> = (0..others.len()).collect();
        for pick in subsets_of(&idx, 10) {
            let mut slot = vec![TailFlag::Node(node)];
            slot.extend(pick.iter().map(|&i| others[i]));
            out.push(TailsClass::single(n, &tails, &slot, pol, Q::one())?);
        }
        Ok(())
    };
    // disjoint pairs {A, B}, A < B as masks
    for a_size in 2..n {
        for a in subsets_of(&all, a_size) {
            let ma = mask(&a);
            let rest = legs_outside(n, ma);
            for b_size in a_size..=rest.len() {
                if n + 2 < a_size + b_size + 11 {
                    break;
                }
                for b in subsets_of(&rest, b_size) {
                    let mb = mask(&b);
                    if b_size == a_size && mb < ma {
                        continue;
                    }
                    let first = ma.min(mb);
                    push([ma, mb], first)?;
                }
            }
        }
    }
    // nested A ⊂ B
    for b_size in 3..n {
        if n + 1 < b_size + 11 {
            break;
        }
        for b in subsets_of(&all, b_size) {
            let mb = mask(&b);
            for a_size in 2..b_size {
                for a in subsets_of(&b, a_size) {
                    push([mask(&a), mb], mb)?;
                }
            }
        }
    }
    Ok(out)
}

/// The one-edge ω-classes on M̄_{2,12}: two genus-1 vertices joined by an
/// edge, the first carrying a set L of at least 10 markings and ω on its
/// node and 10 markings of L.
pub fn m212_classes() -> Result<Vec<OmegaClass>> {
    let n = 12;
    let all: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    for size in (10..=n).rev() {
        for l in subsets_of(&all, size) {
            let legs: Vec<usize> = (0..n).map(|i| if l.contains(&i) { 0 } else { 1 }).collect();
            let graph = StableGraph::new(vec![1, 1], legs, vec![[0, 1]])?;
            for s in subsets_of(&l, 10) {
                let mut slot = vec![n];
                slot.extend(s);
                let nf = graph.num_flags();
                let (st, sign) = OmegaStratum::new(graph.clone(), vec![0; nf], vec![vec![], vec![]], &slot, Polarization::Hol)?
                    .ok_or_else(|| Error::Invalid("vanishing generator".into()))?;
                out.push(OmegaClass::from_stratum(st, Q::from_integer(sign.into())));
            }
        }
    }
    Ok(out)
}

/// Pullback along the gluing map M̄_{g−1,n+2} → M̄_{g,n} identifying the
/// last two markings.
pub fn omega_pullback_irreducible(x: &OmegaClass) -> Result<OmegaClass> {
    if x.genus() == 0 {
        return Err(Error::Invalid("no irreducible divisor in genus 0".into()));
    }
    let delta = StableGraph::new(vec![x.genus() - 1], vec![0; x.n()], vec![[0, 0]])?;
    omega_pullback_to_divisor(x, &delta)?.into_omega_class()
}

/// Pairing matrix rows, via the rational-tails fast path when every class
/// admits it.
pub fn omega_pairing_rows(classes: &[OmegaClass], battery: &[OmegaClass], epsilon: i32) -> Result<Vec<SparseRow>> {
    let fast: Option<(Vec<TailsClass>, Vec<TailsClass>)> = (|| {
        let a = classes.iter().map(TailsClass::from_omega_class).collect::<Option<Vec<_>>>()?;
        let b = battery.iter().map(TailsClass::from_omega_class).collect::<Option<Vec<_>>>()?;
        Some((a, b))
    })();
    if let Some((a, b)) = fast {
        return tails_pairing_rows(&a, &b, epsilon);
    }
    classes
        .iter()
        .map(|x| {
            let mut row = Vec::new();
            for (j, y) in battery.iter().enumerate() {
                let v = omega_pair_with(x, y, epsilon)?;
                if !v.is_zero() {
                    row.push((j, v));
                }
            }
            Ok(row)
        })
        .collect()
}

/// Rank of the pairing matrix `classes × battery`: a lower bound for the
/// dimension spanned by `classes`.
pub fn omega_rank(classes: &[OmegaClass], battery: &[OmegaClass]) -> Result<usize> {
    Ok(omega_rank_certified(classes, battery, &DEFAULT_PRIMES)?.rank)
}

pub fn omega_rank_certified(classes: &[OmegaClass], battery: &[OmegaClass], primes: &[u64]) -> Result<RankCertificate> {
    let rows = omega_pairing_rows(classes, battery, DEFAULT_EPSILON)?;
    Ok(rank_multimodular(&rows, battery.len(), primes))
}

/// Rank of the pairing matrix of rational-tails classes.
pub fn tails_rank(classes: &[TailsClass], battery: &[TailsClass], primes: &[u64]) -> Result<RankCertificate> {
    let rows = tails_pairing_rows(classes, battery, DEFAULT_EPSILON)?;
    Ok(rank_multimodular(&rows, battery.len(), primes))
}

/// Indices of a maximal subfamily of `rows` (taken greedily in order) whose
/// pairing rows are independent modulo the first prime.
pub fn greedy_basis(rows: &[SparseRow], ncols: usize) -> Result<Vec<usize>> {
    let p = DEFAULT_PRIMES[0];
    let m = sparse_mod_p(rows, p).ok_or_else(|| Error::Invalid("denominator divisible by the prime".into()))?;
    Ok(independent_rows_mod_p(&m, ncols, p))
}

/// Pullbacks of the one-edge M̄_{2,12} classes along the irreducible
/// gluing map to M̄_{1,14}, expressed as rational-tails classes.
pub fn m212_pullbacks() -> Result<Vec<TailsClass>> {
    m212_classes()?
        .iter()
        .map(|x| {
            let y = omega_pullback_irreducible(x)?;
            TailsClass::from_omega_class(&y).ok_or_else(|| Error::Invalid("pullback is not of rational-tails type".into()))
        })
        .collect()
}

/// Rank of the M̄_{2,12} one-edge classes after pullback to M̄_{1,14},
/// measured against the two-tail battery there.
pub fn omega_pullback_rank_m212() -> Result<usize> {
    let rows = m212_pullbacks()?;
    let battery = two_tail_battery(14, Polarization::Antihol)?;
    Ok(tails_rank(&rows, &battery, &DEFAULT_PRIMES)?.rank)
}
