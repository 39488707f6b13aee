//! Classes decorated by the weight-12 cusp form.
//!
//! An [`OmegaStratum`] is a decorated stratum one of whose genus-1 vertices
//! carries `f_S^*ω` for an ordered 11-element subset S of its flags:
//! the pullback of ω ∈ H^{11,0}(M̄_{1,11}) along the map forgetting the
//! other flags, with S listed in the order it is sent to 1..11. Reordering
//! S multiplies the class by the sign of the permutation. The polarization
//! picks ω or its conjugate ω̌; pairings are normalized by
//! `⟨ω, ω̌⟩ = 1` and `⟨ω̌, ω⟩ = ε` with ε = [`DEFAULT_EPSILON`] unless given.
//!
//! A class with `e` edges stands for a morphism `L^e S₁₂ → H^{11+2e+…}`.

mod families;
mod integral;
mod ops;
mod tails;

pub use families::*;
pub use integral::{omega_vertex_integral, OmegaFlag};
pub use ops::*;
pub use tails::{pair_tails, pair_tails_with, tails_pairing_rows, TailFlag, TailsClass, TailsTerm};

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graphs::{isomorphisms, StableGraph};
use crate::rational::{sort_sign, Q};
use crate::strata::DecoratedStratum;

/// Sign of `⟨ω̌, ω⟩` relative to `⟨ω, ω̌⟩ = 1`.
pub const DEFAULT_EPSILON: i32 = -1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarization {
    Hol,
    Antihol,
}

impl Polarization {
    pub fn dual(self) -> Self {
        match self {
            Polarization::Hol => Polarization::Antihol,
            Polarization::Antihol => Polarization::Hol,
        }
    }
}

/// A decorated stratum with one ω-slot, in canonical form: the slot flags
/// are stored in increasing order (the reordering sign lives in the
/// coefficient of the enclosing class).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OmegaStratum {
    base: DecoratedStratum,
    slot: Vec<usize>,
    pol: Polarization,
}

impl OmegaStratum {
    /// Canonical form of a decorated graph with `marks[f] = i + 1` for the
    /// flag f in position i of S (0 elsewhere). Returns `None` when an
    /// automorphism of the decorated graph reorders S oddly (the class
    /// vanishes), otherwise the stratum and the reordering sign.
    pub(crate) fn from_marked(
        graph: &StableGraph,
        psi: &[u32],
        kappa: &[Vec<u32>],
        marks: &[u8],
        pol: Polarization,
    ) -> Option<(Self, i32)> {
        let (base, nmarks, colored, canon) = DecoratedStratum::canonical_marked(graph, psi, kappa, marks);
        let mut slot: Vec<usize> = (0..nmarks.len()).filter(|&f| nmarks[f] != 0).collect();
        let order: Vec<u8> = slot.iter().map(|&f| nmarks[f]).collect();
        let sign = sort_sign(&order);
        slot.sort_unstable();
        let g = base.graph();
        let n = g.n();
        if canon.aut_order() > 1 {
            for (_, emap) in isomorphisms(&colored, &canon, &colored, &canon) {
                let image = |f: usize| -> usize {
                    if f < n {
                        f
                    } else {
                        let h = f - n;
                        let (e, sw) = emap[h / 2];
                        n + 2 * e + ((h % 2) ^ sw as usize)
                    }
                };
                let moved: Vec<usize> = slot.iter().map(|&f| slot.binary_search(&image(f)).unwrap()).collect();
                if sort_sign(&moved) < 0 {
                    return None;
                }
            }
        }
        Some((OmegaStratum { base, slot, pol }, sign))
    }

    /// Builds `f_S^*ω` (or ω̌) on `graph`; `slot` lists the flags of S in order.
    pub fn new(
        graph: StableGraph,
        psi: Vec<u32>,
        kappa: Vec<Vec<u32>>,
        slot: &[usize],
        pol: Polarization,
    ) -> Result<Option<(Self, i32)>> {
        if psi.len() != graph.num_flags() || kappa.len() != graph.num_vertices() {
            return Err(Error::Invalid("decoration shape does not match the graph".into()));
        }
        if slot.len() != 11 {
            return Err(Error::Invalid("an ω-slot has exactly 11 flags".into()));
        }
        let mut marks = vec![0u8; graph.num_flags()];
        for (i, &f) in slot.iter().enumerate() {
            if f >= marks.len() || marks[f] != 0 {
                return Err(Error::Invalid("ω-slot flags must be distinct flags of the graph".into()));
            }
            marks[f] = i as u8 + 1;
        }
        let v = graph.flag_vertex(slot[0]);
        if slot.iter().any(|&f| graph.flag_vertex(f) != v) || graph.vertex_genus(v) != 1 {
            return Err(Error::Invalid("ω-slot flags must lie on one genus-1 vertex".into()));
        }
        if kappa.iter().flatten().any(|&b| b == 0) {
            return Err(Error::Invalid("κ indices must be positive".into()));
        }
        if exceeds(&graph, &psi, &kappa, Some(v)) {
            return Err(Error::Degree("decoration exceeds a vertex dimension".into()));
        }
        Ok(Self::from_marked(&graph, &psi, &kappa, &marks, pol))
    }

    pub fn base(&self) -> &DecoratedStratum {
        &self.base
    }
    pub fn graph(&self) -> &StableGraph {
        self.base.graph()
    }
    /// Flags of S in order.
    pub fn slot(&self) -> &[usize] {
        &self.slot
    }
    pub fn polarization(&self) -> Polarization {
        self.pol
    }
    pub fn omega_vertex(&self) -> usize {
        self.graph().flag_vertex(self.slot[0])
    }
    /// Cohomological degree (odd).
    pub fn degree(&self) -> usize {
        self.base.degree() + 11
    }
    pub fn marks(&self) -> Vec<u8> {
        let mut m = vec![0u8; self.graph().num_flags()];
        for (i, &f) in self.slot.iter().enumerate() {
            m[f] = i as u8 + 1;
        }
        m
    }
}

/// Whether the ψ/κ decoration overflows a vertex; the ω-vertex loses 11
/// dimensions' worth of room to the odd class.
pub(crate) fn exceeds(graph: &StableGraph, psi: &[u32], kappa: &[Vec<u32>], omega_vertex: Option<usize>) -> bool {
    let flags = graph.all_flags();
    (0..graph.num_vertices()).any(|v| {
        let d = flags[v].iter().map(|&f| psi[f] as usize).sum::<usize>() + kappa[v].iter().map(|&b| b as usize).sum::<usize>();
        let room = graph.vertex_dim(v) as i64 - if Some(v) == omega_vertex { 11 } else { 0 };
        d as i64 > room
    })
}

/// A homogeneous ℚ-combination of ω-strata on M̄_{g,n}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaClass {
    g: u32,
    n: usize,
    degree: usize,
    terms: BTreeMap<OmegaStratum, Q>,
}

impl OmegaClass {
    pub fn zero(g: u32, n: usize, degree: usize) -> Self {
        OmegaClass { g, n, degree, terms: BTreeMap::new() }
    }

    pub fn from_stratum(s: OmegaStratum, c: Q) -> Self {
        let mut x = OmegaClass::zero(s.graph().genus(), s.graph().n(), s.degree());
        x.add_term(s, c);
        x
    }

    /// `f_S^*ω` on the open part of M̄_{g,n} (trivial graph); `slot` lists
    /// 0-based markings.
    pub fn pulled_back(g: u32, n: usize, slot: &[usize], pol: Polarization) -> Result<Self> {
        let gr = StableGraph::trivial(g, n)?;
        let (g, n) = (gr.genus(), gr.n());
        let mut x = OmegaClass::zero(g, n, 11);
        if let Some((s, sign)) = OmegaStratum::new(gr, vec![0; n], vec![vec![]], slot, pol)? {
            x.add_term(s, Q::from_integer(sign.into()));
        }
        Ok(x)
    }

    pub fn genus(&self) -> u32 {
        self.g
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn dim(&self) -> usize {
        (3 * self.g as i64 - 3 + self.n as i64) as usize
    }
    pub fn terms(&self) -> &BTreeMap<OmegaStratum, Q> {
        &self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, s: OmegaStratum, c: Q) {
        debug_assert_eq!(s.degree(), self.degree);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(s) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Adds `c · ξ_Γ*(α · f_S^*ω)` for a marked, not necessarily canonical graph.
    pub(crate) fn add_xi(&mut self, graph: &StableGraph, psi: &[u32], kappa: &[Vec<u32>], marks: &[u8], pol: Polarization, c: Q) {
        let v = match marks.iter().position(|&m| m != 0) {
            Some(f) => graph.flag_vertex(f),
            None => return,
        };
        if c.is_zero() || exceeds(graph, psi, kappa, Some(v)) {
            return;
        }
        if let Some((s, sign)) = OmegaStratum::from_marked(graph, psi, kappa, marks, pol) {
            let aut = graph.automorphism_order();
            self.add_term(s, c * Q::from_integer((sign as i64 * aut as i64).into()));
        }
    }

    pub fn add(&self, other: &OmegaClass) -> Result<OmegaClass> {
        if (self.g, self.n) != (other.g, other.n) {
            return Err(Error::AmbientMismatch(self.g, self.n, other.g, other.n));
        }
        if self.degree != other.degree {
            return Err(Error::Degree("sum of classes of different degrees".into()));
        }
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> OmegaClass {
        let mut out = OmegaClass::zero(self.g, self.n, self.degree);
        for (s, x) in &self.terms {
            out.add_term(s.clone(), x * c);
        }
        out
    }

    /// Class with marking `i` renamed to `perm[i]` (0-based).
    pub fn relabel_legs(&self, perm: &[usize]) -> OmegaClass {
        let mut out = OmegaClass::zero(self.g, self.n, self.degree);
        for (s, c) in &self.terms {
            let gr = s.graph().relabel_legs(perm);
            let (mut psi, mut marks) = (s.base.psi().to_vec(), s.marks());
            let old_marks = marks.clone();
            for i in 0..self.n {
                psi[perm[i]] = s.base.psi()[i];
                marks[perm[i]] = old_marks[i];
            }
            if let Some((t, sign)) = OmegaStratum::from_marked(&gr, &psi, &s.base.kappa_vecs(), &marks, s.pol) {
                out.add_term(t, c * Q::from_integer(sign.into()));
            }
        }
        out
    }

    /// The same class with the polarization of every term flipped.
    pub fn conjugate(&self) -> OmegaClass {
        let mut out = OmegaClass::zero(self.g, self.n, self.degree);
        for (s, c) in &self.terms {
            let mut t = s.clone();
            t.pol = t.pol.dual();
            out.add_term(t, c.clone());
        }
        out
    }
}
