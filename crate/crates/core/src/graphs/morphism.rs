use alloc::vec::Vec;

use super::StableGraph;

/// A contraction morphism `source -> target`: legs map identically,
/// `vertex_map[v]` is the image of source vertex `v`, and `edge_map[e]` is
/// `None` for contracted edges or `Some((e', swapped))` when source half
/// `2e + s` maps to target half `2e' + (s ^ swapped)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GraphMorphism {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<Option<(usize, bool)>>,
}

impl GraphMorphism {
    pub fn identity(g: &StableGraph) -> Self {
        GraphMorphism {
            vertex_map: (0..g.num_vertices()).collect(),
            edge_map: (0..g.num_edges()).map(|e| Some((e, false))).collect(),
        }
    }

    pub fn half_map(&self, h: usize) -> Option<usize> {
        self.edge_map[h / 2].map(|(e, f)| 2 * e + ((h % 2) ^ f as usize))
    }

    /// Image of flag `f` given `n` legs (same on both sides).
    pub fn flag_map(&self, f: usize, n: usize) -> Option<usize> {
        if f < n {
            Some(f)
        } else {
            self.half_map(f - n).map(|h| n + h)
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GraphMorphism) -> GraphMorphism {
        GraphMorphism {
            vertex_map: self.vertex_map.iter().map(|&v| other.vertex_map[v]).collect(),
            edge_map: self
                .edge_map
                .iter()
                .map(|m| m.and_then(|(e, f)| other.edge_map[e].map(|(e2, f2)| (e2, f ^ f2))))
                .collect(),
        }
    }

    pub fn contracted(&self) -> Vec<usize> {
        (0..self.edge_map.len()).filter(|&e| self.edge_map[e].is_none()).collect()
    }

    /// Checks that contracting the indicated edges of `source` yields `target`
    /// compatibly with all maps.
    pub fn is_valid(&self, source: &StableGraph, target: &StableGraph) -> bool {
        if self.vertex_map.len() != source.num_vertices() || self.edge_map.len() != source.num_edges() {
            return false;
        }
        let mask: Vec<bool> = self.edge_map.iter().map(|m| m.is_none()).collect();
        let c = source.contract(&mask);
        // c.morphism followed by a relabeling must equal self
        let mut vrel = alloc::vec![usize::MAX; c.graph.num_vertices()];
        for v in 0..source.num_vertices() {
            let cv = c.morphism.vertex_map[v];
            if vrel[cv] == usize::MAX {
                vrel[cv] = self.vertex_map[v];
            } else if vrel[cv] != self.vertex_map[v] {
                return false;
            }
        }
        let mut erel = alloc::vec![None; c.graph.num_edges()];
        for e in 0..source.num_edges() {
            if let (Some((ce, cf)), Some((te, tf))) = (c.morphism.edge_map[e], self.edge_map[e]) {
                erel[ce] = Some((te, cf ^ tf));
            }
        }
        let rel = GraphMorphism { vertex_map: vrel, edge_map: erel };
        c.graph.num_vertices() == target.num_vertices()
            && c.graph.num_edges() == target.num_edges()
            && rel.is_isomorphism(&c.graph, target)
    }

    /// True if `self` is a bijective graph isomorphism `a -> b`.
    pub fn is_isomorphism(&self, a: &StableGraph, b: &StableGraph) -> bool {
        if a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges() || a.n() != b.n() {
            return false;
        }
        let mut seen = alloc::vec![false; b.num_vertices()];
        for v in 0..a.num_vertices() {
            let w = self.vertex_map[v];
            if w >= b.num_vertices() || seen[w] || a.vertex_genus(v) != b.vertex_genus(w) {
                return false;
            }
            seen[w] = true;
        }
        if (0..a.n()).any(|i| self.vertex_map[a.leg_vertex(i)] != b.leg_vertex(i)) {
            return false;
        }
        let mut eseen = alloc::vec![false; b.num_edges()];
        for e in 0..a.num_edges() {
            let Some((e2, _)) = self.edge_map[e] else { return false };
            if e2 >= b.num_edges() || eseen[e2] {
                return false;
            }
            eseen[e2] = true;
            for s in 0..2 {
                let h2 = self.half_map(2 * e + s).unwrap();
                if self.vertex_map[a.half_vertex(2 * e + s)] != b.half_vertex(h2) {
                    return false;
                }
            }
        }
        true
    }
}
