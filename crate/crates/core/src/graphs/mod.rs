//! Stable graphs: dual graphs of stable curves.
//!
//! Markings are stored 0-based internally (marking `i + 1` is leg `i`).
//! Every edge owns two half-edges, `2e` (at `edges[e][0]`) and `2e + 1`
//! (at `edges[e][1]`), also for loops. Flags are numbered legs first
//! (`0..n`), then half-edges (`n + h`).

mod canon;
mod degenerate;
mod enumerate;
mod morphism;

pub(crate) use canon::{canonize, isomorphisms, Canon, Colored};
pub use degenerate::{common_degenerations, splits_compatible, Degeneration};
pub use enumerate::{enumerate_stable_graphs, one_edge_graphs};
pub use morphism::GraphMorphism;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// What a flag is: a leg (0-based marking) or a half-edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flag {
    Leg(usize),
    Half(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StableGraph {
    genera: Vec<u32>,
    legs: Vec<usize>,
    edges: Vec<[usize; 2]>,
}

/// Iso-invariant total-order key.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(pub Vec<u32>);

/// Result of contracting a set of edges.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub graph: StableGraph,
    pub morphism: GraphMorphism,
}

impl StableGraph {
    /// Builds and validates a graph (connected, stable at every vertex).
    pub fn new(genera: Vec<u32>, legs: Vec<usize>, edges: Vec<[usize; 2]>) -> Result<Self> {
        let g = StableGraph { genera, legs, edges };
        g.validate()?;
        Ok(g)
    }

    pub(crate) fn from_parts(genera: Vec<u32>, legs: Vec<usize>, edges: Vec<[usize; 2]>) -> Self {
        StableGraph { genera, legs, edges }
    }

    pub fn trivial(g: u32, n: usize) -> Result<Self> {
        if 2 * g as i64 - 2 + n as i64 <= 0 {
            return Err(Error::Unstable { g, n });
        }
        Ok(StableGraph { genera: vec![g], legs: vec![0; n], edges: Vec::new() })
    }

    fn validate(&self) -> Result<()> {
        let nv = self.genera.len();
        if nv == 0 {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        if self.legs.iter().any(|&v| v >= nv) || self.edges.iter().any(|e| e[0] >= nv || e[1] >= nv) {
            return Err(Error::InvalidGraph("vertex id out of range".into()));
        }
        if !self.is_connected() {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        for v in 0..nv {
            if 2 * self.genera[v] as i64 - 2 + self.valence(v) as i64 <= 0 {
                return Err(Error::InvalidGraph(format!("vertex {v} is unstable")));
            }
        }
        Ok(())
    }

    fn is_connected(&self) -> bool {
        let nv = self.genera.len();
        let mut uf: Vec<usize> = (0..nv).collect();
        fn find(uf: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while uf[r] != r {
                r = uf[r];
            }
            let mut y = x;
            while uf[y] != r {
                let nx = uf[y];
                uf[y] = r;
                y = nx;
            }
            r
        }
        for e in &self.edges {
            let (a, b) = (find(&mut uf, e[0]), find(&mut uf, e[1]));
            uf[a] = b;
        }
        let r = find(&mut uf, 0);
        (0..nv).all(|v| find(&mut uf, v) == r)
    }

    pub fn genus(&self) -> u32 {
        let s: u32 = self.genera.iter().sum();
        (s as i64 + self.edges.len() as i64 - self.genera.len() as i64 + 1) as u32
    }
    pub fn n(&self) -> usize {
        self.legs.len()
    }
    /// Complex dimension 3g - 3 + n.
    pub fn dim(&self) -> usize {
        (3 * self.genus() as i64 - 3 + self.n() as i64) as usize
    }
    pub fn num_vertices(&self) -> usize {
        self.genera.len()
    }
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }
    pub fn genera(&self) -> &[u32] {
        &self.genera
    }
    pub fn vertex_genus(&self, v: usize) -> u32 {
        self.genera[v]
    }
    pub fn legs(&self) -> &[usize] {
        &self.legs
    }
    pub fn leg_vertex(&self, i: usize) -> usize {
        self.legs[i]
    }
    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }
    pub fn half_vertex(&self, h: usize) -> usize {
        self.edges[h / 2][h % 2]
    }
    pub fn num_flags(&self) -> usize {
        self.legs.len() + 2 * self.edges.len()
    }
    pub fn flag(&self, f: usize) -> Flag {
        if f < self.legs.len() {
            Flag::Leg(f)
        } else {
            Flag::Half(f - self.legs.len())
        }
    }
    pub fn flag_vertex(&self, f: usize) -> usize {
        match self.flag(f) {
            Flag::Leg(i) => self.legs[i],
            Flag::Half(h) => self.half_vertex(h),
        }
    }
    /// Flags at `v` in increasing flag order.
    pub fn flags_at(&self, v: usize) -> Vec<usize> {
        let n = self.legs.len();
        let mut out: Vec<usize> = (0..n).filter(|&i| self.legs[i] == v).collect();
        for (e, ends) in self.edges.iter().enumerate() {
            for s in 0..2 {
                if ends[s] == v {
                    out.push(n + 2 * e + s);
                }
            }
        }
        out
    }
    /// Flags grouped per vertex, each in increasing order.
    pub fn all_flags(&self) -> Vec<Vec<usize>> {
        let n = self.legs.len();
        let mut out = vec![Vec::new(); self.genera.len()];
        for i in 0..n {
            out[self.legs[i]].push(i);
        }
        for (e, ends) in self.edges.iter().enumerate() {
            out[ends[0]].push(n + 2 * e);
            out[ends[1]].push(n + 2 * e + 1);
        }
        out
    }
    pub fn valence(&self, v: usize) -> usize {
        self.legs.iter().filter(|&&w| w == v).count()
            + self.edges.iter().map(|e| (e[0] == v) as usize + (e[1] == v) as usize).sum::<usize>()
    }
    /// Complex dimension of the vertex moduli space.
    pub fn vertex_dim(&self, v: usize) -> usize {
        (3 * self.genera[v] as i64 - 3 + self.valence(v) as i64) as usize
    }

    /// Vertices reachable from `start` avoiding edge `skip`.
    fn reach(&self, start: usize, skip: usize) -> Vec<bool> {
        let nv = self.genera.len();
        let mut seen = vec![false; nv];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for (e, ends) in self.edges.iter().enumerate() {
                if e == skip {
                    continue;
                }
                for s in 0..2 {
                    if ends[s] == x && !seen[ends[1 - s]] {
                        seen[ends[1 - s]] = true;
                        stack.push(ends[1 - s]);
                    }
                }
            }
        }
        seen
    }

    /// For a separating edge, the leg mask and genus of the side containing
    /// its first half; `None` for non-separating edges.
    pub fn bridge_side(&self, e: usize) -> Option<(u64, u32)> {
        let [a, b] = self.edges[e];
        if a == b {
            return None;
        }
        let seen = self.reach(a, e);
        if seen[b] {
            return None;
        }
        Some(self.side_signature(&seen, e))
    }

    fn side_signature(&self, side: &[bool], skip: usize) -> (u64, u32) {
        let mut mask = 0u64;
        for (i, &v) in self.legs.iter().enumerate() {
            if side[v] {
                mask |= 1 << i;
            }
        }
        let nv = side.iter().filter(|&&s| s).count() as i64;
        let gs: i64 = (0..self.genera.len()).filter(|&v| side[v]).map(|v| self.genera[v] as i64).sum();
        let ne = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, e)| i != skip && side[e[0]] && side[e[1]])
            .count() as i64;
        (mask, (gs + ne - nv + 1) as u32)
    }

    /// Leg-mask/genus signatures of both sides of every separating edge.
    pub fn separating_signatures(&self) -> Vec<[(u64, u32); 2]> {
        let full = if self.n() == 64 { u64::MAX } else { (1u64 << self.n()) - 1 };
        let g = self.genus();
        (0..self.edges.len())
            .filter_map(|e| self.bridge_side(e))
            .map(|(m, h)| [(m, h), (full & !m, g - h)])
            .collect()
    }

    pub fn num_nonseparating(&self) -> usize {
        (0..self.edges.len()).filter(|&e| self.bridge_side(e).is_none()).count()
    }

    /// Contracts the edges flagged in `contract`. Surviving edges keep their
    /// orientation; new vertices are numbered by smallest old vertex.
    pub fn contract(&self, contract: &[bool]) -> Contraction {
        let nv = self.genera.len();
        let mut uf: Vec<usize> = (0..nv).collect();
        fn find(uf: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while uf[r] != r {
                r = uf[r];
            }
            r
        }
        for (e, ends) in self.edges.iter().enumerate() {
            if contract[e] {
                let (a, b) = (find(&mut uf, ends[0]), find(&mut uf, ends[1]));
                if a != b {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    uf[hi] = lo;
                }
            }
        }
        let mut new_id = vec![usize::MAX; nv];
        let mut count = 0;
        let mut vmap = vec![0usize; nv];
        for v in 0..nv {
            let r = find(&mut uf, v);
            if new_id[r] == usize::MAX {
                new_id[r] = count;
                count += 1;
            }
            vmap[v] = new_id[r];
        }
        let mut gsum = vec![0i64; count];
        let mut vcount = vec![0i64; count];
        let mut ecount = vec![0i64; count];
        for v in 0..nv {
            gsum[vmap[v]] += self.genera[v] as i64;
            vcount[vmap[v]] += 1;
        }
        let mut edges = Vec::new();
        let mut emap = vec![None; self.edges.len()];
        for (e, ends) in self.edges.iter().enumerate() {
            if contract[e] {
                ecount[vmap[ends[0]]] += 1;
            } else {
                emap[e] = Some((edges.len(), false));
                edges.push([vmap[ends[0]], vmap[ends[1]]]);
            }
        }
        let genera = (0..count).map(|c| (gsum[c] + ecount[c] - vcount[c] + 1) as u32).collect();
        let legs = self.legs.iter().map(|&v| vmap[v]).collect();
        Contraction {
            graph: StableGraph { genera, legs, edges },
            morphism: GraphMorphism { vertex_map: vmap, edge_map: emap },
        }
    }

    pub(crate) fn colored(&self) -> Colored {
        let mut vcolor: Vec<Vec<u32>> = self.genera.iter().map(|&g| vec![g]).collect();
        for (i, &v) in self.legs.iter().enumerate() {
            vcolor[v].push(i as u32);
        }
        Colored { vcolor, edges: self.edges.iter().map(|e| (e[0], e[1], 0, 0)).collect() }
    }

    pub(crate) fn canon(&self) -> Canon {
        canonize(&self.colored())
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        CanonicalKey(self.canon().code)
    }

    /// Order of the automorphism group (legs fixed, half-edge swaps allowed).
    pub fn automorphism_order(&self) -> u64 {
        self.canon().aut_order()
    }

    /// The canonically relabeled copy of the graph and the relabeling used
    /// (old vertex -> new vertex, old edge -> (new edge, halves swapped)).
    pub fn canonical_form(&self) -> (StableGraph, GraphMorphism) {
        let c = self.canon();
        self.relabel_by(&c)
    }

    pub(crate) fn relabel_by(&self, c: &Canon) -> (StableGraph, GraphMorphism) {
        let genera = c.vorder.iter().map(|&v| self.genera[v]).collect();
        let legs = self.legs.iter().map(|&v| c.vpos[v]).collect();
        let mut emap = vec![None; self.edges.len()];
        let edges = c
            .eorder
            .iter()
            .enumerate()
            .map(|(ne, &(e, f))| {
                emap[e] = Some((ne, f));
                let [a, b] = self.edges[e];
                let (a, b) = if f { (b, a) } else { (a, b) };
                [c.vpos[a], c.vpos[b]]
            })
            .collect();
        (
            StableGraph { genera, legs, edges },
            GraphMorphism { vertex_map: c.vpos.clone(), edge_map: emap },
        )
    }

    /// All isomorphisms to `other` at the level of half-edges.
    pub fn isomorphisms_to(&self, other: &StableGraph) -> Vec<GraphMorphism> {
        let (a, b) = (self.colored(), other.colored());
        let (ca, cb) = (canonize(&a), canonize(&b));
        isomorphisms(&a, &ca, &b, &cb)
            .into_iter()
            .map(|(vm, em)| GraphMorphism { vertex_map: vm, edge_map: em.into_iter().map(Some).collect() })
            .collect()
    }

    /// Graph with marking `i` renamed to `perm[i]` (0-based).
    pub fn relabel_legs(&self, perm: &[usize]) -> StableGraph {
        let mut legs = vec![0; self.legs.len()];
        for (i, &v) in self.legs.iter().enumerate() {
            legs[perm[i]] = v;
        }
        StableGraph { genera: self.genera.clone(), legs, edges: self.edges.clone() }
    }

    /// Appends a new leg (the last marking) at vertex `v`.
    pub fn with_leg_at(&self, v: usize) -> StableGraph {
        let mut g = self.clone();
        g.legs.push(v);
        g
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut Vec<u32>, &mut Vec<usize>, &mut Vec<[usize; 2]>) {
        (&mut self.genera, &mut self.legs, &mut self.edges)
    }
}
