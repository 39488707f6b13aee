//! The decorated-strata algebra.
//!
//! A class `[Γ, α]` stands for `ξ_Γ*(α) / |Aut Γ|` where `ξ_Γ` is the gluing
//! map of the stable graph Γ and α a monomial in ψ-classes at flags and
//! κ-classes at vertices. With this normalization
//! `∫ [Γ, α] = ∏_v ∫ α_v / |Aut Γ|`.

mod forgetful;
mod generators;
mod gluing;
mod product;

pub use forgetful::{pullback_forgetful, pushforward_forgetful};
pub(crate) use forgetful::{insert_perm, pullback_raw, pushforward_raw, to_end_perm};
pub use generators::{degree_generators, pairing_matrix, pairing_rank, pairing_rank_with, PairingRank};

pub use gluing::{pushforward_gluing, GluingDatum};
pub use product::{integrate, pair_strata, product, pullback_decorations};
pub(crate) use product::for_each_term;

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graphs::{canonize, Canon, Colored, StableGraph};
use crate::integrals::KappaMonomial;
use crate::rational::Q;

/// A stable graph decorated by ψ-powers at flags and κ-monomials at
/// vertices, always stored in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DecoratedStratum {
    graph: StableGraph,
    psi: Vec<u32>,
    kappa: Vec<KappaMonomial>,
}

/// Decorations on a fixed graph: ψ exponent per flag, κ indices per vertex.
pub type Decoration = (Vec<u32>, Vec<Vec<u32>>);

impl DecoratedStratum {
    /// Canonicalizes `(graph, psi, kappa)`; `psi` is indexed by flag
    /// (legs, then half-edges), `kappa` by vertex.
    pub fn new(graph: StableGraph, psi: Vec<u32>, kappa: Vec<Vec<u32>>) -> Result<Self> {
        if psi.len() != graph.num_flags() || kappa.len() != graph.num_vertices() {
            return Err(Error::Invalid("decoration shape does not match the graph".into()));
        }
        if kappa.iter().flatten().any(|&b| b == 0) {
            return Err(Error::Invalid("κ indices must be positive".into()));
        }
        let s = Self::canonical(&graph, &psi, &kappa).0;
        if s.exceeds_dimension() {
            return Err(Error::Degree("decoration exceeds a vertex dimension".into()));
        }
        Ok(s)
    }

    pub fn fundamental(g: u32, n: usize) -> Result<Self> {
        let gr = StableGraph::trivial(g, n)?;
        Ok(DecoratedStratum { psi: vec![0; n], kappa: vec![KappaMonomial::default()], graph: gr })
    }

    /// A bare boundary stratum.
    pub fn boundary(graph: StableGraph) -> Self {
        let nf = graph.num_flags();
        let nv = graph.num_vertices();
        Self::canonical(&graph, &vec![0; nf], &vec![Vec::new(); nv]).0
    }

    pub(crate) fn colored(graph: &StableGraph, psi: &[u32], kappa: &[Vec<u32>]) -> Colored {
        let mut c = graph.colored();
        let n = graph.n();
        for v in 0..graph.num_vertices() {
            let mut k = kappa[v].clone();
            k.sort_unstable();
            let mut col = vec![graph.vertex_genus(v), k.len() as u32];
            col.extend(k);
            for i in 0..n {
                if graph.leg_vertex(i) == v {
                    col.push(i as u32);
                    col.push(psi[i]);
                }
            }
            c.vcolor[v] = col;
        }
        for (e, t) in c.edges.iter_mut().enumerate() {
            t.2 = psi[n + 2 * e];
            t.3 = psi[n + 2 * e + 1];
        }
        c
    }

    pub(crate) fn canonical(graph: &StableGraph, psi: &[u32], kappa: &[Vec<u32>]) -> (Self, Canon) {
        let canon = canonize(&Self::colored(graph, psi, kappa));
        let (g, m) = graph.relabel_by(&canon);
        let n = graph.n();
        let mut npsi = vec![0u32; psi.len()];
        npsi[..n].copy_from_slice(&psi[..n]);
        for h in 0..2 * graph.num_edges() {
            npsi[n + m.half_map(h).unwrap()] = psi[n + h];
        }
        let nk = canon
            .vorder
            .iter()
            .map(|&v| {
                let mut k = kappa[v].clone();
                k.sort_unstable();
                KappaMonomial::from_sorted(k)
            })
            .collect();
        (DecoratedStratum { graph: g, psi: npsi, kappa: nk }, canon)
    }

    /// Like [`Self::canonical`], with flags carrying opaque marks that take
    /// part in the canonical labeling only through "marked or not". Returns
    /// the stratum, the relabeled marks and the colored canonical graph.
    pub(crate) fn canonical_marked(graph: &StableGraph, psi: &[u32], kappa: &[Vec<u32>], marks: &[u8]) -> (Self, Vec<u8>, Colored, Canon) {
        let colored = Self::colored_marked(graph, psi, kappa, marks);
        let canon = canonize(&colored);
        let (g, m) = graph.relabel_by(&canon);
        let n = graph.n();
        let mut npsi = vec![0u32; psi.len()];
        let mut nmarks = vec![0u8; psi.len()];
        npsi[..n].copy_from_slice(&psi[..n]);
        nmarks[..n].copy_from_slice(&marks[..n]);
        for h in 0..2 * graph.num_edges() {
            let t = n + m.half_map(h).unwrap();
            npsi[t] = psi[n + h];
            nmarks[t] = marks[n + h];
        }
        let nk: Vec<Vec<u32>> = canon.vorder.iter().map(|&v| kappa[v].clone()).collect();
        let colored = Self::colored_marked(&g, &npsi, &nk, &nmarks);
        let canon = canonize(&colored);
        let nk = nk
            .into_iter()
            .map(|mut k| {
                k.sort_unstable();
                KappaMonomial::from_sorted(k)
            })
            .collect();
        (DecoratedStratum { graph: g, psi: npsi, kappa: nk }, nmarks, colored, canon)
    }

    fn colored_marked(graph: &StableGraph, psi: &[u32], kappa: &[Vec<u32>], marks: &[u8]) -> Colored {
        let mut c = Self::colored(graph, psi, kappa);
        let n = graph.n();
        for v in 0..graph.num_vertices() {
            for i in 0..n {
                if graph.leg_vertex(i) == v {
                    c.vcolor[v].push(2 * i as u32 + (marks[i] != 0) as u32);
                }
            }
        }
        for (e, t) in c.edges.iter_mut().enumerate() {
            t.2 |= ((marks[n + 2 * e] != 0) as u32) << 24;
            t.3 |= ((marks[n + 2 * e + 1] != 0) as u32) << 24;
        }
        c
    }

    pub fn graph(&self) -> &StableGraph {
        &self.graph
    }
    pub fn psi(&self) -> &[u32] {
        &self.psi
    }
    pub fn kappa(&self) -> &[KappaMonomial] {
        &self.kappa
    }
    pub fn kappa_vecs(&self) -> Vec<Vec<u32>> {
        self.kappa.iter().map(|k| k.indices().to_vec()).collect()
    }
    /// Complex codimension: edges + ψ exponents + κ indices.
    pub fn codim(&self) -> usize {
        self.graph.num_edges()
            + self.psi.iter().map(|&x| x as usize).sum::<usize>()
            + self.kappa.iter().map(|k| k.degree() as usize).sum::<usize>()
    }
    /// Cohomological degree.
    pub fn degree(&self) -> usize {
        2 * self.codim()
    }
    fn exceeds_dimension(&self) -> bool {
        exceeds_dimension(&self.graph, &self.psi, &self.kappa_vecs())
    }
    pub fn automorphism_order(&self) -> u64 {
        self.graph.automorphism_order()
    }
}

pub(crate) fn exceeds_dimension(graph: &StableGraph, psi: &[u32], kappa: &[Vec<u32>]) -> bool {
    let flags = graph.all_flags();
    (0..graph.num_vertices()).any(|v| {
        let d: u32 = flags[v].iter().map(|&f| psi[f]).sum::<u32>() + kappa[v].iter().sum::<u32>();
        d as usize > graph.vertex_dim(v)
    })
}

/// A homogeneous ℚ-linear combination of decorated strata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TautClass {
    g: u32,
    n: usize,
    degree: usize,
    terms: BTreeMap<DecoratedStratum, Q>,
}

impl TautClass {
    pub fn zero(g: u32, n: usize, degree: usize) -> Self {
        TautClass { g, n, degree, terms: BTreeMap::new() }
    }

    pub fn fundamental(g: u32, n: usize) -> Result<Self> {
        Ok(Self::from_stratum(DecoratedStratum::fundamental(g, n)?, Q::from_integer(1.into())))
    }

    pub fn from_stratum(s: DecoratedStratum, c: Q) -> Self {
        let mut t = TautClass::zero(s.graph.genus(), s.graph.n(), s.degree());
        t.add_term(s, c);
        t
    }

    pub fn genus(&self) -> u32 {
        self.g
    }
    pub fn n(&self) -> usize {
        self.n
    }
    /// Cohomological degree tag.
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn terms(&self) -> &BTreeMap<DecoratedStratum, Q> {
        &self.terms
    }
    pub fn dim(&self) -> usize {
        (3 * self.g as i64 - 3 + self.n as i64) as usize
    }

    pub fn add_term(&mut self, s: DecoratedStratum, c: Q) {
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

    /// Adds `c · ξ_Γ*(α)` for a (not necessarily canonical) decorated graph.
    pub(crate) fn add_xi(&mut self, graph: &StableGraph, psi: &[u32], kappa: &[Vec<u32>], c: Q) {
        if c.is_zero() || exceeds_dimension(graph, psi, kappa) {
            return;
        }
        let (s, _) = DecoratedStratum::canonical(graph, psi, kappa);
        let aut = Q::from_integer(graph.canon().aut_order().into());
        self.add_term(s, c * aut);
    }

    pub fn add(&self, other: &TautClass) -> Result<TautClass> {
        self.check_same(other)?;
        if self.degree != other.degree {
            return Err(Error::Degree("sum of classes of different degrees".into()));
        }
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> TautClass {
        let mut out = TautClass::zero(self.g, self.n, self.degree);
        for (s, x) in &self.terms {
            out.add_term(s.clone(), x * c);
        }
        out
    }

    pub(crate) fn check_same(&self, other: &TautClass) -> Result<()> {
        if (self.g, self.n) != (other.g, other.n) {
            return Err(Error::AmbientMismatch(self.g, self.n, other.g, other.n));
        }
        Ok(())
    }

    /// Class with marking `i` renamed to `perm[i]` (0-based).
    pub fn relabel_legs(&self, perm: &[usize]) -> TautClass {
        let mut out = TautClass::zero(self.g, self.n, self.degree);
        for (s, c) in &self.terms {
            let gr = s.graph.relabel_legs(perm);
            let mut psi = s.psi.clone();
            for i in 0..self.n {
                psi[perm[i]] = s.psi[i];
            }
            let (t, _) = DecoratedStratum::canonical(&gr, &psi, &s.kappa_vecs());
            out.add_term(t, c.clone());
        }
        out
    }
}

/// A flag during surgery: (vertex, ψ exponent, mark). Marks are opaque
/// tags that follow the flag through the surgery (used for ω-slots).
pub(crate) type Slot = (usize, u32, u8);

/// Mutable decorated graph used for surgery (gluing, forgetting, cutting).
#[derive(Clone, Debug, Default)]
pub(crate) struct Draft {
    pub genera: Vec<u32>,
    pub kappa: Vec<Vec<u32>>,
    pub legs: Vec<Slot>,
    pub edges: Vec<[Slot; 2]>,
}

impl Draft {
    pub fn from_parts(graph: &StableGraph, psi: &[u32], kappa: &[Vec<u32>]) -> Self {
        Self::from_marked(graph, psi, kappa, &vec![0; psi.len()])
    }

    pub fn from_marked(graph: &StableGraph, psi: &[u32], kappa: &[Vec<u32>], marks: &[u8]) -> Self {
        let n = graph.n();
        Draft {
            genera: graph.genera().to_vec(),
            kappa: kappa.to_vec(),
            legs: (0..n).map(|i| (graph.leg_vertex(i), psi[i], marks[i])).collect(),
            edges: graph
                .edges()
                .iter()
                .enumerate()
                .map(|(e, ends)| {
                    let (a, b) = (n + 2 * e, n + 2 * e + 1);
                    [(ends[0], psi[a], marks[a]), (ends[1], psi[b], marks[b])]
                })
                .collect(),
        }
    }

    pub fn from_stratum(s: &DecoratedStratum) -> Self {
        Self::from_parts(s.graph(), s.psi(), &s.kappa_vecs())
    }

    pub fn add_vertex(&mut self, genus: u32) -> usize {
        self.genera.push(genus);
        self.kappa.push(Vec::new());
        self.genera.len() - 1
    }

    /// Removes vertex `v` (which must carry no flags) and renumbers.
    pub fn remove_vertex(&mut self, v: usize) {
        self.genera.remove(v);
        self.kappa.remove(v);
        let fix = |x: &mut usize| {
            debug_assert_ne!(*x, v);
            if *x > v {
                *x -= 1;
            }
        };
        for l in self.legs.iter_mut() {
            fix(&mut l.0);
        }
        for e in self.edges.iter_mut() {
            fix(&mut e[0].0);
            fix(&mut e[1].0);
        }
    }

    pub fn into_parts(self) -> (StableGraph, Vec<u32>, Vec<Vec<u32>>) {
        let (g, psi, kappa, _) = self.into_marked();
        (g, psi, kappa)
    }

    pub fn into_marked(self) -> (StableGraph, Vec<u32>, Vec<Vec<u32>>, Vec<u8>) {
        let flags = self.legs.iter().copied().chain(self.edges.iter().flat_map(|e| [e[0], e[1]]));
        let (psi, marks): (Vec<u32>, Vec<u8>) = flags.map(|f| (f.1, f.2)).unzip();
        let graph = StableGraph::from_parts(
            self.genera,
            self.legs.iter().map(|l| l.0).collect(),
            self.edges.iter().map(|e| [e[0].0, e[1].0]).collect(),
        );
        (graph, psi, self.kappa, marks)
    }
}
