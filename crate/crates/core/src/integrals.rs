//! ψ- and κ-intersection numbers on M̄_{g,n}.
//!
//! `psi_integral` is the production entry point (memoized, genus-0 closed
//! form, string/dilaton fast paths, DVV otherwise). Two deliberately
//! independent paths are also exposed for cross-checking: pure DVV
//! recursion and string/dilaton reduction to one-point invariants.

use alloc::vec::Vec;

use hashbrown::HashMap;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use spin::{Lazy, RwLock};

use crate::rational::{double_factorial_odd, factorial, q, qi, Q};

/// ψ-monomial ψ₁^{a₁}⋯ψ_n^{a_n} on M̄_{g,n}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PsiMonomial {
    pub g: u32,
    pub exponents: Vec<u32>,
}

impl PsiMonomial {
    pub fn new(g: u32, exponents: Vec<u32>) -> Self {
        PsiMonomial { g, exponents }
    }
    pub fn is_stable(&self) -> bool {
        stable(self.g, self.exponents.len())
    }
    pub fn is_top_degree(&self) -> bool {
        self.exponents.iter().map(|&a| a as i64).sum::<i64>() == 3 * self.g as i64 - 3 + self.exponents.len() as i64
    }
}

/// κ_{b₁}⋯κ_{b_m}, stored sorted; all indices ≥ 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct KappaMonomial(Vec<u32>);

impl KappaMonomial {
    /// Builds a monomial; κ₀ factors are returned separately as the scalar
    /// `(2g - 2 + n)^{#zeros}`.
    pub fn new(mut b: Vec<u32>, g: u32, n: usize) -> (Q, Self) {
        let zeros = b.iter().filter(|&&x| x == 0).count();
        b.retain(|&x| x > 0);
        b.sort_unstable();
        let k0 = 2 * g as i64 - 2 + n as i64;
        (qi(k0.pow(zeros as u32)), KappaMonomial(b))
    }
    pub fn from_sorted(b: Vec<u32>) -> Self {
        debug_assert!(b.windows(2).all(|w| w[0] <= w[1]) && b.iter().all(|&x| x > 0));
        KappaMonomial(b)
    }
    pub fn indices(&self) -> &[u32] {
        &self.0
    }
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

fn stable(g: u32, n: usize) -> bool {
    2 * g as i64 - 2 + n as i64 > 0
}

fn on_degree(g: u32, a: &[u32]) -> bool {
    a.iter().map(|&x| x as i64).sum::<i64>() == 3 * g as i64 - 3 + a.len() as i64
}

type Key = (u32, Vec<u32>);
static PSI: Lazy<RwLock<HashMap<Key, Q>>> = Lazy::new(|| RwLock::new(HashMap::new()));
static DVV: Lazy<RwLock<HashMap<Key, Q>>> = Lazy::new(|| RwLock::new(HashMap::new()));
static KAPPA: Lazy<RwLock<HashMap<(u32, Vec<u32>, Vec<u32>), Q>>> = Lazy::new(|| RwLock::new(HashMap::new()));

fn sorted_desc(a: &[u32]) -> Vec<u32> {
    let mut v = a.to_vec();
    v.sort_unstable_by(|x, y| y.cmp(x));
    v
}

/// ⟨τ_{a₁}⋯τ_{a_n}⟩_g; zero off degree or for unstable (g, n).
pub fn psi_integral(g: u32, a: &[u32]) -> Q {
    if !stable(g, a.len()) || !on_degree(g, a) {
        return Q::zero();
    }
    let key = sorted_desc(a);
    if g == 0 {
        return genus0_closed_form(&key);
    }
    if let Some(v) = PSI.read().get(&(g, key.clone())) {
        return v.clone();
    }
    let v = psi_eval(g, &key);
    PSI.write().entry((g, key)).or_insert(v).clone()
}

fn psi_eval(g: u32, a: &[u32]) -> Q {
    if g == 1 && a == [1] {
        return q(1, 24);
    }
    // a sorted descending: zeros and ones at the end
    let last = *a.last().unwrap();
    if last == 0 {
        return string_step(g, a, psi_integral);
    }
    if last == 1 {
        let rest = &a[..a.len() - 1];
        return qi(2 * g as i64 - 2 + rest.len() as i64) * psi_integral(g, rest);
    }
    dvv_step(g, a, psi_integral)
}

fn string_step(g: u32, a: &[u32], f: fn(u32, &[u32]) -> Q) -> Q {
    let rest = &a[..a.len() - 1];
    let mut acc = Q::zero();
    for j in 0..rest.len() {
        if rest[j] > 0 {
            let mut b = rest.to_vec();
            b[j] -= 1;
            acc += f(g, &b);
        }
    }
    acc
}

/// (n-3)!/∏ aᵢ! on M̄_{0,n}.
pub fn genus0_closed_form(a: &[u32]) -> Q {
    let n = a.len();
    if n < 3 || !on_degree(0, a) {
        return Q::zero();
    }
    let den = a.iter().fold(BigInt::one(), |acc, &x| acc * factorial(x as u64));
    Q::new(factorial(n as u64 - 3), den)
}

/// One DVV step removing the first exponent, evaluating sub-correlators
/// with `f`.
fn dvv_step(g: u32, a: &[u32], f: fn(u32, &[u32]) -> Q) -> Q {
    let k = a[0] as i64 - 1;
    let d = &a[1..];
    let n = d.len();
    let mut acc = Q::zero();
    for j in 0..n {
        let dj = d[j] as i64;
        let coef = Q::new(double_factorial_odd(k + dj + 1), double_factorial_odd(dj));
        let mut b = d.to_vec();
        b[j] = (dj + k) as u32;
        acc += coef * f(g, &b);
    }
    if k >= 1 {
        let half = q(1, 2);
        for r in 0..k {
            let s = k - 1 - r;
            let c = Q::from_integer(double_factorial_odd(r + 1) * double_factorial_odd(s + 1));
            if g >= 1 {
                let mut b = Vec::with_capacity(n + 2);
                b.push(r as u32);
                b.push(s as u32);
                b.extend_from_slice(d);
                acc += &half * &c * f(g - 1, &b);
            }
            for mask in 0u64..(1u64 << n) {
                let mut i_part = alloc::vec![r as u32];
                let mut j_part = alloc::vec![s as u32];
                for (t, &x) in d.iter().enumerate() {
                    if mask >> t & 1 == 1 {
                        i_part.push(x);
                    } else {
                        j_part.push(x);
                    }
                }
                for g1 in 0..=g {
                    let g2 = g - g1;
                    if !stable(g1, i_part.len()) || !stable(g2, j_part.len()) {
                        continue;
                    }
                    if !on_degree(g1, &i_part) || !on_degree(g2, &j_part) {
                        continue;
                    }
                    acc += &half * &c * f(g1, &i_part) * f(g2, &j_part);
                }
            }
        }
    }
    acc / Q::from_integer(double_factorial_odd(k + 2))
}

/// Pure DVV recursion (always on the largest exponent), with only the two
/// base values ⟨τ₀³⟩₀ = 1 and ⟨τ₁⟩₁ = 1/24.
pub fn psi_integral_dvv(g: u32, a: &[u32]) -> Q {
    if !stable(g, a.len()) || !on_degree(g, a) {
        return Q::zero();
    }
    let key = sorted_desc(a);
    if g == 0 && key == [0, 0, 0] {
        return Q::one();
    }
    if g == 1 && key == [1] {
        return q(1, 24);
    }
    if let Some(v) = DVV.read().get(&(g, key.clone())) {
        return v.clone();
    }
    let v = dvv_step(g, &key, psi_integral_dvv);
    DVV.write().entry((g, key)).or_insert(v).clone()
}

/// String/dilaton reduction to the one-point invariants
/// ⟨τ_{3g-2}⟩_g = 1/(24^g g!) and ⟨τ₀³⟩₀ = 1; `None` when every exponent
/// is at least 2 and more than one point remains.
pub fn psi_integral_reduction(g: u32, a: &[u32]) -> Option<Q> {
    if !stable(g, a.len()) || !on_degree(g, a) {
        return Some(Q::zero());
    }
    let key = sorted_desc(a);
    if g == 0 && key == [0, 0, 0] {
        return Some(Q::one());
    }
    if key.len() == 1 {
        let den = BigInt::from(24u32).pow(g) * factorial(g as u64);
        return Some(Q::new(BigInt::one(), den));
    }
    let last = *key.last().unwrap();
    let rest = &key[..key.len() - 1];
    if last == 0 {
        let mut acc = Q::zero();
        for j in 0..rest.len() {
            if rest[j] > 0 {
                let mut b = rest.to_vec();
                b[j] -= 1;
                acc += psi_integral_reduction(g, &b)?;
            }
        }
        return Some(acc);
    }
    if last == 1 {
        return Some(qi(2 * g as i64 - 2 + rest.len() as i64) * psi_integral_reduction(g, rest)?);
    }
    None
}

/// ∫_{M̄_{g,n}} ψ^a κ_{b₁}⋯κ_{b_m} with κ_b = π_*(ψ_{n+1}^{b+1}).
pub fn kappa_psi_integral(g: u32, psi: &[u32], kappa: &KappaMonomial) -> Q {
    kappa_psi_raw(g, psi, kappa.indices())
}

pub(crate) fn kappa_psi_raw(g: u32, psi: &[u32], kappa: &[u32]) -> Q {
    let n = psi.len();
    if !stable(g, n) {
        return Q::zero();
    }
    let deg: i64 = psi.iter().map(|&x| x as i64).sum::<i64>() + kappa.iter().map(|&x| x as i64).sum::<i64>();
    if deg != 3 * g as i64 - 3 + n as i64 {
        return Q::zero();
    }
    if kappa.is_empty() {
        return psi_integral(g, psi);
    }
    let mut kk = kappa.to_vec();
    kk.sort_unstable();
    let pk = sorted_desc(psi);
    let key = (g, pk, kk);
    if let Some(v) = KAPPA.read().get(&key) {
        return v.clone();
    }
    let (_, pk, kk) = &key;
    // κ_b κ_{B'} ψ^a = π_*(ψ_p^{b+1} ∏_{c∈B'} (κ_c − ψ_p^c) ψ^a)
    let b = kk[0];
    let rest = &kk[1..];
    let mut acc = Q::zero();
    for mask in 0u64..(1u64 << rest.len()) {
        let mut e = b + 1;
        let mut left = Vec::new();
        for (t, &c) in rest.iter().enumerate() {
            if mask >> t & 1 == 1 {
                e += c;
            } else {
                left.push(c);
            }
        }
        let mut p = pk.clone();
        p.push(e);
        let v = kappa_psi_raw(g, &p, &left);
        if mask.count_ones() % 2 == 0 {
            acc += v;
        } else {
            acc -= v;
        }
    }
    KAPPA.write().entry(key).or_insert(acc).clone()
}
