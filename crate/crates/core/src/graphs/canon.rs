//! Canonical labeling of vertex- and half-edge-colored multigraphs by
//! partition refinement with backtracking over residual ties.

use alloc::vec;
use alloc::vec::Vec;

/// A multigraph with colored vertices and colored half-edges. Edge
/// `(v, w, cv, cw)` has its first half at `v` (color `cv`) and its second
/// half at `w` (color `cw`); loops have `v == w`.
#[derive(Clone, Debug)]
pub(crate) struct Colored {
    pub vcolor: Vec<Vec<u32>>,
    pub edges: Vec<(usize, usize, u32, u32)>,
}

#[derive(Clone, Debug)]
pub(crate) struct Canon {
    /// canonical position -> vertex
    pub vorder: Vec<usize>,
    /// vertex -> canonical position
    pub vpos: Vec<usize>,
    /// canonical edge index -> (edge, halves swapped)
    pub eorder: Vec<(usize, bool)>,
    pub code: Vec<u32>,
    /// vertex permutations (v -> σ(v)) preserving all colors and edges
    pub vertex_auts: Vec<Vec<usize>>,
    /// number of half-edge-level lifts of each vertex automorphism
    pub edge_lifts: u64,
}

impl Canon {
    pub fn aut_order(&self) -> u64 {
        self.vertex_auts.len() as u64 * self.edge_lifts
    }
}

type Adj = Vec<Vec<(usize, u32, u32)>>;

fn adjacency(c: &Colored) -> Adj {
    let mut adj = vec![Vec::new(); c.vcolor.len()];
    for &(v, w, cv, cw) in &c.edges {
        adj[v].push((w, cv, cw));
        adj[w].push((v, cw, cv));
    }
    adj
}

fn refine(adj: &Adj, mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let nv = adj.len();
    let mut cell_of = vec![0usize; nv];
    loop {
        for (i, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_of[v] = i;
            }
        }
        let mut next: Vec<Vec<usize>> = Vec::with_capacity(cells.len());
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut sigs: Vec<(Vec<(usize, u32, u32)>, usize)> = cell
                .iter()
                .map(|&v| {
                    let mut s: Vec<(usize, u32, u32)> =
                        adj[v].iter().map(|&(w, a, b)| (cell_of[w], a, b)).collect();
                    s.sort_unstable();
                    (s, v)
                })
                .collect();
            sigs.sort();
            let mut start = 0;
            for i in 1..=sigs.len() {
                if i == sigs.len() || sigs[i].0 != sigs[start].0 {
                    next.push(sigs[start..i].iter().map(|x| x.1).collect());
                    start = i;
                }
            }
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

/// Normalized edge tuple under a vertex relabeling; the bool records
/// whether the halves were swapped.
#[inline]
fn normalize(pv: usize, pw: usize, cv: u32, cw: u32) -> ((usize, usize, u32, u32), bool) {
    if (pv, cv) <= (pw, cw) {
        ((pv, pw, cv, cw), false)
    } else {
        ((pw, pv, cw, cv), true)
    }
}

fn encode(c: &Colored, order: &[usize]) -> (Vec<u32>, Vec<((usize, usize, u32, u32), usize, bool)>) {
    let mut pos = vec![0usize; order.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut es: Vec<((usize, usize, u32, u32), usize, bool)> = c
        .edges
        .iter()
        .enumerate()
        .map(|(i, &(v, w, cv, cw))| {
            let (t, f) = normalize(pos[v], pos[w], cv, cw);
            (t, i, f)
        })
        .collect();
    es.sort();
    let mut code = Vec::with_capacity(2 + order.len() * 3 + es.len() * 4);
    code.push(order.len() as u32);
    for &v in order {
        code.push(c.vcolor[v].len() as u32);
        code.extend_from_slice(&c.vcolor[v]);
    }
    code.push(es.len() as u32);
    for (t, _, _) in &es {
        code.extend_from_slice(&[t.0 as u32, t.1 as u32, t.2, t.3]);
    }
    (code, es)
}

struct Search<'a> {
    c: &'a Colored,
    adj: Adj,
    best: Option<(Vec<u32>, Vec<usize>)>,
    ties: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn run(&mut self, cells: Vec<Vec<usize>>) {
        let cells = refine(&self.adj, cells);
        match cells.iter().position(|c| c.len() > 1) {
            None => {
                let order: Vec<usize> = cells.into_iter().map(|c| c[0]).collect();
                let (code, _) = encode(self.c, &order);
                match &self.best {
                    Some((b, _)) if *b < code => {}
                    Some((b, _)) if *b == code => self.ties.push(order),
                    _ => {
                        self.ties.clear();
                        self.ties.push(order.clone());
                        self.best = Some((code, order));
                    }
                }
            }
            Some(t) => {
                for &v in &cells[t] {
                    let mut next = Vec::with_capacity(cells.len() + 1);
                    next.extend_from_slice(&cells[..t]);
                    next.push(vec![v]);
                    next.push(cells[t].iter().copied().filter(|&w| w != v).collect());
                    next.extend_from_slice(&cells[t + 1..]);
                    self.run(next);
                }
            }
        }
    }
}

pub(crate) fn canonize(c: &Colored) -> Canon {
    let nv = c.vcolor.len();
    let mut idx: Vec<usize> = (0..nv).collect();
    idx.sort_by(|&a, &b| c.vcolor[a].cmp(&c.vcolor[b]));
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for &v in &idx {
        match cells.last_mut() {
            Some(cell) if c.vcolor[cell[0]] == c.vcolor[v] => cell.push(v),
            _ => cells.push(vec![v]),
        }
    }
    let mut s = Search { c, adj: adjacency(c), best: None, ties: Vec::new() };
    if nv > 0 {
        s.run(cells);
    }
    let (code, order) = s.best.take().unwrap_or_else(|| (vec![0, 0], Vec::new()));
    let (_, es) = encode(c, &order);
    let mut vpos = vec![0usize; nv];
    for (i, &v) in order.iter().enumerate() {
        vpos[v] = i;
    }
    let vertex_auts = s
        .ties
        .iter()
        .map(|leaf| {
            let mut sigma = vec![0usize; nv];
            for i in 0..nv {
                sigma[order[i]] = leaf[i];
            }
            sigma
        })
        .collect();
    let mut edge_lifts = 1u64;
    let mut i = 0;
    while i < es.len() {
        let mut j = i;
        while j < es.len() && es[j].0 == es[i].0 {
            j += 1;
        }
        let k = (j - i) as u64;
        edge_lifts *= (1..=k).product::<u64>();
        let t = es[i].0;
        if t.0 == t.1 && t.2 == t.3 {
            edge_lifts <<= k;
        }
        i = j;
    }
    Canon {
        vorder: order,
        vpos,
        eorder: es.iter().map(|&(_, e, f)| (e, f)).collect(),
        code,
        vertex_auts,
        edge_lifts,
    }
}

/// A half-edge-level isomorphism: vertex map and, per edge, the image edge
/// together with whether the halves are swapped.
pub(crate) type FlagIso = (Vec<usize>, Vec<(usize, bool)>);

/// All isomorphisms `g -> h` respecting colors.
pub(crate) fn isomorphisms(g: &Colored, cg: &Canon, h: &Colored, ch: &Canon) -> Vec<FlagIso> {
    let mut out = Vec::new();
    if cg.code != ch.code {
        return out;
    }
    let nv = g.vcolor.len();
    for sigma in &ch.vertex_auts {
        let phi: Vec<usize> = (0..nv).map(|v| sigma[ch.vorder[cg.vpos[v]]]).collect();
        edge_bijections(g, h, &phi, &mut out);
    }
    out
}

fn edge_bijections(g: &Colored, h: &Colored, phi: &[usize], out: &mut Vec<FlagIso>) {
    let mut gk: Vec<((usize, usize, u32, u32), usize, bool)> = g
        .edges
        .iter()
        .enumerate()
        .map(|(i, &(v, w, cv, cw))| {
            let (t, f) = normalize(phi[v], phi[w], cv, cw);
            (t, i, f)
        })
        .collect();
    let mut hk: Vec<((usize, usize, u32, u32), usize, bool)> = h
        .edges
        .iter()
        .enumerate()
        .map(|(i, &(v, w, cv, cw))| {
            let (t, f) = normalize(v, w, cv, cw);
            (t, i, f)
        })
        .collect();
    gk.sort();
    hk.sort();
    if gk.iter().map(|x| x.0).ne(hk.iter().map(|x| x.0)) {
        return;
    }
    // groups of identical tuples
    let mut groups: Vec<(usize, usize, bool)> = Vec::new();
    let mut i = 0;
    while i < gk.len() {
        let mut j = i;
        while j < gk.len() && gk[j].0 == gk[i].0 {
            j += 1;
        }
        let t = gk[i].0;
        groups.push((i, j, t.0 == t.1 && t.2 == t.3));
        i = j;
    }
    let mut emap = vec![(0usize, false); g.edges.len()];
    fn rec(
        gi: usize,
        groups: &[(usize, usize, bool)],
        gk: &[((usize, usize, u32, u32), usize, bool)],
        hk: &[((usize, usize, u32, u32), usize, bool)],
        phi: &[usize],
        emap: &mut Vec<(usize, bool)>,
        out: &mut Vec<FlagIso>,
    ) {
        if gi == groups.len() {
            out.push((phi.to_vec(), emap.clone()));
            return;
        }
        let (s, e, sym) = groups[gi];
        let k = e - s;
        let mut perm: Vec<usize> = (0..k).collect();
        loop {
            let flips = if sym { 1usize << k } else { 1 };
            for fm in 0..flips {
                for t in 0..k {
                    let (_, ge, gf) = gk[s + t];
                    let (_, he, hf) = hk[s + perm[t]];
                    let extra = (fm >> t) & 1 == 1;
                    emap[ge] = (he, gf ^ hf ^ extra);
                }
                rec(gi + 1, groups, gk, hk, phi, emap, out);
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }
    rec(0, &groups, &gk, &hk, phi, &mut emap, out);
}

pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
