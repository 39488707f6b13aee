//! Bookkeeping for the inductive generation argument: filling-criterion
//! condition sets, base-case regions with their vanishing reasons, table
//! lookups, cusp-form dimensions and semisimple motive shapes.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rational::binomial_u64;

/// d_{g,n} = 3g − 3 + n, the dimension of M̄_{g,n}.
pub fn dim_mgn(g: u32, n: usize) -> i64 {
    3 * g as i64 - 3 + n as i64
}

fn stable(g: u32, n: usize) -> bool {
    2 * g as i64 - 2 + n as i64 > 0
}

/// A three-valued truth: statements resting on open problems stay `Unknown`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl Truth {
    pub fn as_str(self) -> &'static str {
        match self {
            Truth::True => "true",
            Truth::False => "false",
            Truth::Unknown => "unknown",
        }
    }
}

impl From<bool> for Truth {
    fn from(b: bool) -> Self {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }
}

/// A triple (g, n, k): degree k on M̄_{g,n} (or weight k on M_{g,n}).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub g: u32,
    pub n: usize,
    pub k: u32,
}

impl Triple {
    pub fn new(g: u32, n: usize, k: u32) -> Self {
        Triple { g, n, k }
    }
}

impl core::fmt::Display for Triple {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "({},{},{})", self.g, self.n, self.k)
    }
}

/// (g′, n′) ≺ (g, n): g′ ≤ g, 2g′ + n′ ≤ 2g + n, and the pairs differ.
pub fn precedes(a: (u32, usize), b: (u32, usize)) -> bool {
    a.0 <= b.0 && 2 * a.0 as usize + a.1 <= 2 * b.0 as usize + b.1 && a != b
}

/// The two named subspaces of W_kH^k(M_{g,n}): Φ (pullbacks along the
/// forgetful maps) and Ψ (ψ-classes times Φ in degree k − 2).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subspace {
    Phi,
    Psi,
}

impl Subspace {
    pub fn symbol(self, t: Triple) -> alloc::string::String {
        let s = match self {
            Subspace::Phi => "Φ",
            Subspace::Psi => "Ψ",
        };
        alloc::format!("{s}^{}_{{{},{}}}", t.k, t.g, t.n)
    }
}

/// W_kH^k(M_{g,n}) = Φ^k_{g,n} whenever n > 0 and n ≥ k.
pub fn phi_fills(t: Triple) -> bool {
    t.n > 0 && t.n >= t.k as usize
}

/// Ψ^k_{g,n} ⊂ Φ^k_{g,n} once n ≥ k (a ψ-factor forces a trivial Künneth slot).
pub fn psi_within_phi(t: Triple) -> bool {
    t.n >= t.k as usize
}

/// One condition of the filling criterion for an ambient triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FillingCondition {
    pub ambient: Triple,
    pub triple: Triple,
}

impl FillingCondition {
    pub fn is_head(&self) -> bool {
        self.ambient == self.triple
    }
    /// 2d − k of the condition triple.
    pub fn codegree(&self) -> i64 {
        2 * dim_mgn(self.triple.g, self.triple.n) - self.triple.k as i64
    }
}

/// The head triple followed by every (g′, n′, k′) with (g′, n′) ≺ (g, n)
/// stable, 2d_{g′,n′} − k′ ≤ 2d_{g,n} − k and 0 ≤ k′ ≤ k − 2.
pub fn filling_conditions(g: u32, n: usize, k: u32) -> Result<Vec<FillingCondition>> {
    if !stable(g, n) {
        return Err(Error::Unstable { g, n });
    }
    let ambient = Triple::new(g, n, k);
    let mut out = vec![FillingCondition { ambient, triple: ambient }];
    let bound = 2 * dim_mgn(g, n) - k as i64;
    let weight = 2 * g as usize + n;
    for gp in 0..=g {
        for np in 0..=weight - 2 * gp as usize {
            if !stable(gp, np) || !precedes((gp, np), (g, n)) {
                continue;
            }
            for kp in 0..=k.saturating_sub(2) {
                if k < 2 {
                    break;
                }
                if 2 * dim_mgn(gp, np) - kp as i64 <= bound {
                    out.push(FillingCondition { ambient, triple: Triple::new(gp, np, kp) });
                }
            }
        }
    }
    Ok(out)
}

/// Why W_{k′}H^{k′}(M_{g′,n′}) contributes nothing new to the criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VanishingReason {
    /// n′ > k′: everything is pulled back from fewer markings.
    PhiFills,
    /// k′ > 4g′ − 4 + n′: beyond the virtual cohomological dimension.
    Vcd,
    /// k′ ≤ (2g′ − 2)/3: the stable range, where cohomology is tautological.
    StableRange,
}

impl VanishingReason {
    pub fn as_str(self) -> &'static str {
        match self {
            VanishingReason::PhiFills => "phi-fills",
            VanishingReason::Vcd => "vcd",
            VanishingReason::StableRange => "stable-range",
        }
    }
    pub fn condition(self) -> &'static str {
        match self {
            VanishingReason::PhiFills => "n' > k'",
            VanishingReason::Vcd => "k' > 4g'-4+n'",
            VanishingReason::StableRange => "k' <= (2g'-2)/3",
        }
    }
}

/// Every vanishing reason that applies to the triple.
pub fn exclusion_reasons(t: Triple) -> Vec<VanishingReason> {
    let (g, n, k) = (t.g as i64, t.n as i64, t.k as i64);
    let mut out = Vec::new();
    if n > k {
        out.push(VanishingReason::PhiFills);
    }
    if k > 4 * g - 4 + n {
        out.push(VanishingReason::Vcd);
    }
    if 3 * k <= 2 * g - 2 {
        out.push(VanishingReason::StableRange);
    }
    out
}

/// Membership in the base-case region for degree k:
/// k′ ≤ k, g′ < 3k′/2 + 1, n′ ≤ k′, 4g′ − 4 + n′ ≥ k′.
pub fn in_basecase_region(k: u32, t: Triple) -> bool {
    let (g, n, kp) = (t.g as i64, t.n as i64, t.k as i64);
    t.k <= k && 2 * g < 3 * kp + 2 && n <= kp && 4 * g - 4 + n >= kp
}

/// The full (finite) base-case region for degree k.
pub fn basecase_region(k: u32) -> BTreeSet<Triple> {
    let mut out = BTreeSet::new();
    for kp in 0..=k {
        // 2g′ < 3k′ + 2
        for g in 0..=(3 * kp + 1) / 2 {
            for n in 0..=kp as usize {
                let t = Triple::new(g, n, kp);
                if in_basecase_region(k, t) {
                    out.insert(t);
                }
            }
        }
    }
    out
}

/// The (g′, n′) pairs of the region, forgetting k′.
pub fn region_pairs(k: u32) -> BTreeSet<(u32, usize)> {
    basecase_region(k).into_iter().map(|t| (t.g, t.n)).collect()
}

/// Vanishing of H_k(M_{g,n}) from the boundary-complex bounds:
/// k < 2g with n ≤ 1, or k < 2g − 2 + n with n ≥ 2.
pub fn bfp_vanishing(g: u32, n: usize, k: u32) -> Result<bool> {
    if g == 0 {
        return Err(Error::Invalid("genus 0 is covered separately: all cohomology is tautological".into()));
    }
    let (g, n, k) = (g as i64, n as i64, k as i64);
    Ok((n <= 1 && k < 2 * g) || (n >= 2 && k < 2 * g - 2 + n))
}

/// c(g): M_{g,n} has the CKgP and A* = R* for n ≤ c(g); `None` is unbounded.
pub const CKGP_BOUNDS: [Option<usize>; 8] = [None, Some(10), Some(10), Some(11), Some(11), Some(7), Some(5), Some(3)];

/// Table lookup; outside the table the status is `Unknown`, never false.
pub fn ckgp_known(g: u32, n: usize) -> Truth {
    match CKGP_BOUNDS.get(g as usize) {
        Some(None) => Truth::True,
        Some(Some(c)) if n <= *c => Truth::True,
        _ => Truth::Unknown,
    }
}

/// Dimension of weight-m cusp forms for SL₂(ℤ).
pub fn cuspform_dim(m: u32) -> u32 {
    if m % 2 == 1 || m < 12 {
        return 0;
    }
    m / 12 - u32::from(m % 12 == 2)
}

/// The same dimension by counting monomials E₄ᵃE₆ᵇ of weight m − 12
/// (cusp forms are Δ times modular forms of weight m − 12).
pub fn cuspform_dim_by_monomials(m: u32) -> u32 {
    if m < 12 || m % 2 == 1 {
        return 0;
    }
    let w = m - 12;
    (0..=w / 4).filter(|a| (w - 4 * a) % 6 == 0).count() as u32
}

/// Copies of S_{k+1} in W_kH^k(M_{1,n}).
pub fn genus1_pure_multiplicity(k: u32, n: usize) -> Result<u64> {
    if k == 0 {
        return Err(Error::Invalid("degree must be at least 1".into()));
    }
    if n < k as usize || cuspform_dim(k + 1) == 0 {
        return Ok(0);
    }
    Ok(binomial_u64(n as u64 - 1, k as u64 - 1))
}

/// For odd n the genus-2 quotient W_kH^k(M_{2,n})/(Φ + Ψ) vanishes (the
/// hyperelliptic involution kills odd-weight local systems); nothing is
/// claimed for even n.
pub fn genus2_quotient_vanishes(n: usize) -> Truth {
    if n % 2 == 1 {
        Truth::True
    } else {
        Truth::Unknown
    }
}

/// Irreducible motive symbols tracked up to Tate twist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MotiveSymbol {
    Unit,
    S12,
    S16,
}

impl MotiveSymbol {
    pub fn weight(self) -> u32 {
        match self {
            MotiveSymbol::Unit => 0,
            MotiveSymbol::S12 => 11,
            MotiveSymbol::S16 => 15,
        }
    }
    pub fn as_str(self) -> &'static str {
        match self {
            MotiveSymbol::Unit => "1",
            MotiveSymbol::S12 => "S12",
            MotiveSymbol::S16 => "S16",
        }
    }
}

/// A formal ℕ-combination of Lᵃ·X with X ∈ {1, S₁₂, S₁₆}.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MotivePoly {
    terms: BTreeMap<(u32, MotiveSymbol), u64>,
}

impl MotivePoly {
    pub fn zero() -> Self {
        Self::default()
    }
    pub fn monomial(twist: u32, symbol: MotiveSymbol, mult: u64) -> Self {
        let mut p = Self::zero();
        p.insert(twist, symbol, mult);
        p
    }
    pub fn insert(&mut self, twist: u32, symbol: MotiveSymbol, mult: u64) {
        if mult > 0 {
            *self.terms.entry((twist, symbol)).or_insert(0) += mult;
        }
    }
    pub fn terms(&self) -> &BTreeMap<(u32, MotiveSymbol), u64> {
        &self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn add(&self, other: &MotivePoly) -> MotivePoly {
        let mut out = self.clone();
        for (&(a, s), &m) in &other.terms {
            out.insert(a, s, m);
        }
        out
    }
    /// Tensor with Lᵉ.
    pub fn tensor_l(&self, e: u32) -> MotivePoly {
        MotivePoly { terms: self.terms.iter().map(|(&(a, s), &m)| ((a + e, s), m)).collect() }
    }
    /// Weights of all terms (2a + weight of the symbol).
    pub fn weights(&self) -> BTreeSet<u32> {
        self.terms.keys().map(|&(a, s)| 2 * a + s.weight()).collect()
    }
    pub fn fits(&self, shape: &MotiveShape) -> Truth {
        match shape {
            MotiveShape::Unknown => Truth::Unknown,
            MotiveShape::SpannedBy(allowed) => {
                Truth::from(self.terms.keys().all(|key| allowed.contains(key)))
            }
        }
    }
}

impl core::fmt::Display for MotivePoly {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (&(a, s), &m)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if m > 1 {
                write!(f, "{m}·")?;
            }
            match (a, s) {
                (0, MotiveSymbol::Unit) => f.write_str("1")?,
                (0, s) => f.write_str(s.as_str())?,
                (a, MotiveSymbol::Unit) => write!(f, "L^{a}")?,
                (a, s) => write!(f, "L^{a}·{}", s.as_str())?,
            }
        }
        Ok(())
    }
}

/// The symbols that may occur in H^k(M̄_{g,n})^ss; an empty span means zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MotiveShape {
    SpannedBy(BTreeSet<(u32, MotiveSymbol)>),
    Unknown,
}

impl MotiveShape {
    pub fn is_zero(&self) -> bool {
        matches!(self, MotiveShape::SpannedBy(s) if s.is_empty())
    }
}

fn span(items: &[(u32, MotiveSymbol)]) -> MotiveShape {
    MotiveShape::SpannedBy(items.iter().copied().collect())
}

// Shape of H^j for j ≤ 15 (None when not determined).
fn low_shape(g: u32, j: u32) -> Option<Vec<(u32, MotiveSymbol)>> {
    use MotiveSymbol::*;
    if j % 2 == 0 {
        return if g == 0 || j <= 14 { Some(vec![(j / 2, Unit)]) } else { None };
    }
    if g == 0 || j <= 9 {
        return Some(vec![]);
    }
    match j {
        11 => Some(vec![(0, S12)]),
        13 => Some(vec![(1, S12)]),
        15 if g >= 2 => Some(vec![(2, S12)]),
        15 => Some(vec![(2, S12), (0, S16)]),
        _ => None,
    }
}

/// The known semisimple shape of H^k(M̄_{g,n}) in low degree or low
/// codegree (the latter by Poincaré duality, H^{2d−j} ≅ H^j ⊗ L^{d−j}).
pub fn motive_shape(g: u32, n: usize, k: u32) -> Result<MotiveShape> {
    if !stable(g, n) {
        return Err(Error::Unstable { g, n });
    }
    let d = dim_mgn(g, n);
    if k as i64 > 2 * d {
        return Ok(span(&[]));
    }
    if let Some(s) = low_shape(g, k) {
        return Ok(span(&s));
    }
    let j = 2 * d - k as i64;
    if j <= 15 {
        if let Some(s) = low_shape(g, j as u32) {
            let shift = (d - j) as u32;
            return Ok(MotiveShape::SpannedBy(s.into_iter().map(|(a, x)| (a + shift, x)).collect()));
        }
    }
    Ok(MotiveShape::Unknown)
}
