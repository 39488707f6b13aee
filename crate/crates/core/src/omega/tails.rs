//! Fast arithmetic for ψ-free genus-1 rational-tails ω-classes.
//!
//! Such a stratum is determined by a laminar family of leg subsets (the
//! rational tails; the genus-1 core carries the remaining legs and one node
//! per maximal tail) and the ω-slot on core flags. Trees with distinct legs
//! have no automorphisms, so the class is just the pushforward.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use num_traits::{One, Zero};

use super::{omega_vertex_integral, OmegaClass, OmegaFlag, OmegaStratum, Polarization, DEFAULT_EPSILON};
use crate::error::{Error, Result};
use crate::graphs::StableGraph;
use crate::linalg::SparseRow;
use crate::rational::{factorial, qi, sort_sign, Q};

/// A flag of the genus-1 core: a leg (0-based) or the node of the maximal
/// tail with the given leg mask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TailFlag {
    Leg(u8),
    Node(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TailsTerm {
    /// Sorted tail masks.
    pub tails: Vec<u64>,
    /// Sorted ω-slot.
    pub slot: Vec<TailFlag>,
    pub pol: Polarization,
}

/// A ℚ-combination of rational-tails ω-strata on M̄_{1,n}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailsClass {
    n: usize,
    degree: usize,
    terms: BTreeMap<TailsTerm, Q>,
}

fn laminar(a: u64, b: u64) -> bool {
    let c = a & b;
    c == 0 || c == a || c == b
}

fn maximal(tails: &[u64]) -> impl Iterator<Item = u64> + '_ {
    tails.iter().copied().filter(move |&m| !tails.iter().any(|&o| o != m && o & m == m))
}

/// Core flags of a family: uncovered legs ascending, then maximal tails ascending.
fn core_flags(n: usize, tails: &[u64]) -> Vec<TailFlag> {
    let covered = tails.iter().fold(0u64, |a, &m| a | m);
    let mut out: Vec<TailFlag> = (0..n).filter(|&i| covered >> i & 1 == 0).map(|i| TailFlag::Leg(i as u8)).collect();
    let mut mx: Vec<u64> = maximal(tails).collect();
    mx.sort_unstable();
    out.extend(mx.into_iter().map(TailFlag::Node));
    out
}

impl TailsClass {
    pub fn zero(n: usize, degree: usize) -> Self {
        TailsClass { n, degree, terms: BTreeMap::new() }
    }

    /// `c · [Γ_F, f_S^*ω]` with `slot` listing S in order.
    pub fn single(n: usize, tails: &[u64], slot: &[TailFlag], pol: Polarization, c: Q) -> Result<Self> {
        if n >= 64 {
            return Err(Error::Invalid("too many markings".into()));
        }
        let mut t = tails.to_vec();
        t.sort_unstable();
        t.dedup();
        if t.len() != tails.len() {
            return Err(Error::Invalid("repeated tail".into()));
        }
        let all = (1u64 << n) - 1;
        for (i, &a) in t.iter().enumerate() {
            if a & !all != 0 || a.count_ones() < 2 || a == all {
                return Err(Error::Invalid("tail must hold at least two and not all markings".into()));
            }
            if t[..i].iter().any(|&b| !laminar(a, b)) {
                return Err(Error::Invalid("tails must be nested or disjoint".into()));
            }
        }
        let core = core_flags(n, &t);
        let mut s = slot.to_vec();
        if s.len() != 11 || s.iter().any(|f| !core.contains(f)) {
            return Err(Error::Invalid("ω-slot must be 11 core flags".into()));
        }
        let sign = sort_sign(&s);
        s.sort_unstable();
        if s.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid("ω-slot flags must be distinct".into()));
        }
        let mut x = TailsClass::zero(n, 2 * t.len() + 11);
        x.add_term(TailsTerm { tails: t, slot: s, pol }, c * qi(sign as i64));
        Ok(x)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn terms(&self) -> &BTreeMap<TailsTerm, Q> {
        &self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, t: TailsTerm, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(t.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&t);
        }
    }

    pub fn add(&self, other: &TailsClass) -> Result<TailsClass> {
        if self.n != other.n || self.degree != other.degree {
            return Err(Error::Degree("sum of classes of different type".into()));
        }
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> TailsClass {
        let mut out = TailsClass::zero(self.n, self.degree);
        for (t, x) in &self.terms {
            out.add_term(t.clone(), x * c);
        }
        out
    }

    /// The same class in the general strata representation.
    pub fn to_omega_class(&self) -> Result<OmegaClass> {
        let n = self.n;
        let mut out = OmegaClass::zero(1, n, self.degree);
        for (t, c) in &self.terms {
            let k = t.tails.len();
            // vertex 0 is the core, vertex 1 + i the tail t.tails[i]
            let parent = |m: u64| -> usize {
                t.tails
                    .iter()
                    .enumerate()
                    .filter(|&(_, &o)| o != m && o & m == m)
                    .min_by_key(|&(_, &o)| o.count_ones())
                    .map_or(0, |(i, _)| i + 1)
            };
            let legs: Vec<usize> = (0..n).map(|i| parent(1u64 << i)).collect();
            let edges: Vec<[usize; 2]> = t.tails.iter().enumerate().map(|(i, &m)| [parent(m), i + 1]).collect();
            let mut genera = vec![0u32; k + 1];
            genera[0] = 1;
            let graph = StableGraph::new(genera, legs, edges)?;
            let slot: Vec<usize> = t
                .slot
                .iter()
                .map(|f| match *f {
                    TailFlag::Leg(i) => i as usize,
                    TailFlag::Node(m) => n + 2 * t.tails.iter().position(|&o| o == m).unwrap(),
                })
                .collect();
            let nf = graph.num_flags();
            if let Some((s, sign)) = OmegaStratum::new(graph, vec![0; nf], vec![vec![]; k + 1], &slot, t.pol)? {
                out.add_term(s, c * qi(sign as i64));
            }
        }
        Ok(out)
    }

    /// Converts a class all of whose terms are ψ/κ-free genus-1 rational-tails strata.
    pub fn from_omega_class(x: &OmegaClass) -> Option<TailsClass> {
        if x.genus() != 1 || x.n() >= 64 {
            return None;
        }
        let n = x.n();
        let mut out = TailsClass::zero(n, x.degree());
        for (s, c) in x.terms() {
            let g = s.graph();
            if s.base().psi().iter().any(|&p| p != 0) || !s.base().kappa().is_empty() && s.base().kappa_vecs().iter().any(|k| !k.is_empty()) {
                return None;
            }
            let core = s.omega_vertex();
            if g.num_edges() + 1 != g.num_vertices() || g.edges().iter().any(|e| e[0] == e[1]) {
                return None;
            }
            // leg mask below each half-edge leaving `core` side
            let nv = g.num_vertices();
            let mut depth_parent: Vec<Option<(usize, usize)>> = vec![None; nv];
            let mut order = vec![core];
            let mut seen = vec![false; nv];
            seen[core] = true;
            let mut i = 0;
            while i < order.len() {
                let u = order[i];
                i += 1;
                for (e, &[a, b]) in g.edges().iter().enumerate() {
                    for (side, (p, q)) in [(0usize, (a, b)), (1, (b, a))] {
                        if p == u && !seen[q] {
                            seen[q] = true;
                            depth_parent[q] = Some((u, n + 2 * e + side));
                            order.push(q);
                        }
                    }
                }
            }
            let mut mask = vec![0u64; nv];
            for l in 0..n {
                mask[g.leg_vertex(l)] |= 1 << l;
            }
            for &u in order.iter().rev() {
                if let Some((p, _)) = depth_parent[u] {
                    mask[p] |= mask[u];
                }
            }
            let tails: Vec<u64> = order[1..].iter().map(|&u| mask[u]).collect();
            let slot: Vec<TailFlag> = s
                .slot()
                .iter()
                .map(|&f| {
                    if f < n {
                        TailFlag::Leg(f as u8)
                    } else {
                        let other = order[1..].iter().find(|&&u| depth_parent[u].map(|x| x.1) == Some(f)).copied();
                        TailFlag::Node(mask[other.expect("slot half on the core")])
                    }
                })
                .collect();
            let c = c / Q::from_integer(s.base().automorphism_order().into());
            let t = TailsClass::single(n, &tails, &slot, s.polarization(), c).ok()?;
            out = out.add(&t).ok()?;
        }
        Some(out)
    }
}

/// Shared geometry of a pair of tail families: the core of the common
/// degeneration, where each family's core flags go, and the excess terms
/// as (genus-0 factor with sign, ψ exponents on the core).
struct Geometry {
    map1: Vec<u8>,
    map2: Vec<u8>,
    terms: Vec<(Q, Vec<u32>)>,
}

fn multinomial_g0(exps: &[u32]) -> Q {
    let k = exps.len();
    let s: u32 = exps.iter().sum();
    if k < 3 || s as usize != k - 3 {
        return Q::zero();
    }
    let mut v = Q::from_integer(factorial((k - 3) as u64));
    for &a in exps {
        v /= Q::from_integer(factorial(a as u64));
    }
    v
}

fn geometry(n: usize, f1: &[u64], f2: &[u64]) -> Option<Geometry> {
    for &a in f1 {
        for &b in f2 {
            if !laminar(a, b) {
                return None;
            }
        }
    }
    let mut f: Vec<u64> = f1.iter().chain(f2).copied().collect();
    f.sort_unstable();
    f.dedup();
    let core = core_flags(n, &f);
    let index = |x: TailFlag| -> u8 {
        let target = match x {
            TailFlag::Leg(i) => f
                .iter()
                .copied()
                .filter(|&m| m >> i & 1 == 1)
                .max_by_key(|m| m.count_ones())
                .map_or(x, TailFlag::Node),
            TailFlag::Node(m) => TailFlag::Node(f.iter().copied().filter(|&o| o & m == m).max_by_key(|o| o.count_ones()).unwrap()),
        };
        core.iter().position(|&c| c == target).unwrap() as u8
    };
    let map1: Vec<u8> = core_flags(n, f1).into_iter().map(index).collect();
    let map2: Vec<u8> = core_flags(n, f2).into_iter().map(index).collect();
    // genus-0 vertices: each tail; its flags are the root half, child halves, legs
    let parent = |m: u64| -> Option<usize> {
        f.iter()
            .enumerate()
            .filter(|&(_, &o)| o != m && o & m == m)
            .min_by_key(|&(_, &o)| o.count_ones())
            .map(|(i, _)| i)
    };
    let parents: Vec<Option<usize>> = f.iter().map(|&m| parent(m)).collect();
    let valence: Vec<usize> = f
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let kids: Vec<u64> = (0..f.len()).filter(|&j| parents[j] == Some(i)).map(|j| f[j]).collect();
            let covered = kids.iter().fold(0u64, |a, &k| a | k);
            1 + kids.len() + (m & !covered).count_ones() as usize
        })
        .collect();
    let common: Vec<usize> = (0..f.len()).filter(|&i| f1.contains(&f[i]) && f2.contains(&f[i])).collect();
    let mut terms = Vec::new();
    for mask in 0u64..(1u64 << common.len()) {
        // extra ψ: on the child side (at vertex i) or the parent side
        let mut vpsi: Vec<Vec<u32>> = valence.iter().map(|&v| vec![0; v]).collect();
        let mut cpsi = vec![0u32; core.len()];
        // flag 0 of a genus-0 vertex is its root; child halves follow in `f` order
        let child_slot = |p: usize, c: usize| -> usize { 1 + (0..c).filter(|&j| parents[j] == Some(p)).count() };
        for (b, &i) in common.iter().enumerate() {
            if mask >> b & 1 == 1 {
                vpsi[i][0] += 1;
            } else {
                match parents[i] {
                    Some(p) => vpsi[p][child_slot(p, i)] += 1,
                    None => cpsi[core.iter().position(|&c| c == TailFlag::Node(f[i])).unwrap()] += 1,
                }
            }
        }
        let mut v = if common.len() % 2 == 1 { -Q::one() } else { Q::one() };
        for e in &vpsi {
            v *= multinomial_g0(e);
            if v.is_zero() {
                break;
            }
        }
        if !v.is_zero() && cpsi.iter().sum::<u32>() as usize + 11 == core.len() {
            terms.push((v, cpsi));
        }
    }
    if terms.is_empty() {
        return None;
    }
    Some(Geometry { map1, map2, terms })
}

/// Slot of a term as indices into its family's core flags.
fn slot_indices(n: usize, t: &TailsTerm) -> Vec<u8> {
    let core = core_flags(n, &t.tails);
    t.slot.iter().map(|f| core.iter().position(|c| c == f).unwrap() as u8).collect()
}

fn evaluate(g: &Geometry, s: &[u8], t: &[u8]) -> Q {
    let (mut sm, mut tm) = (0u64, 0u64);
    let k = g.terms[0].1.len();
    let mut sp = vec![None; k];
    let mut tp = vec![None; k];
    for (i, &x) in s.iter().enumerate() {
        let y = g.map1[x as usize];
        if sm >> y & 1 == 1 {
            return Q::zero();
        }
        sm |= 1 << y;
        sp[y as usize] = Some(i as u8);
    }
    for (i, &x) in t.iter().enumerate() {
        let y = g.map2[x as usize];
        if tm >> y & 1 == 1 {
            return Q::zero();
        }
        tm |= 1 << y;
        tp[y as usize] = Some(i as u8);
    }
    let mut acc = Q::zero();
    for (c, psi) in &g.terms {
        let flags: Vec<OmegaFlag> = (0..k).map(|j| OmegaFlag::new(sp[j], tp[j], psi[j])).collect();
        let v = omega_vertex_integral(&flags, &[]);
        if !v.is_zero() {
            acc += c * v;
        }
    }
    acc
}

fn pair_terms(n: usize, a: &TailsTerm, b: &TailsTerm, epsilon: i32) -> Q {
    if a.pol == b.pol {
        return Q::zero();
    }
    let (h, l, sign) = if a.pol == Polarization::Hol { (a, b, 1) } else { (b, a, epsilon) };
    match geometry(n, &h.tails, &l.tails) {
        Some(g) => evaluate(&g, &slot_indices(n, h), &slot_indices(n, l)) * qi(sign as i64),
        None => Q::zero(),
    }
}

/// `∫ x·y` with ε = [`DEFAULT_EPSILON`].
pub fn pair_tails(x: &TailsClass, y: &TailsClass) -> Result<Q> {
    pair_tails_with(x, y, DEFAULT_EPSILON)
}

pub fn pair_tails_with(x: &TailsClass, y: &TailsClass, epsilon: i32) -> Result<Q> {
    if x.n != y.n {
        return Err(Error::AmbientMismatch(1, x.n, 1, y.n));
    }
    if x.degree + y.degree != 2 * x.n {
        return Err(Error::Degree("pairing needs complementary degrees".into()));
    }
    let mut acc = Q::zero();
    for (a, c1) in &x.terms {
        for (b, c2) in &y.terms {
            let v = pair_terms(x.n, a, b, epsilon);
            if !v.is_zero() {
                acc += c1 * c2 * v;
            }
        }
    }
    Ok(acc)
}

/// The pairing matrix `(∫ rows[i]·cols[j])` as sparse rows. Terms are
/// grouped by tail family so the shared geometry is computed once per
/// pair of families.
pub fn tails_pairing_rows(rows: &[TailsClass], cols: &[TailsClass], epsilon: i32) -> Result<Vec<SparseRow>> {
    let Some(first) = rows.first().or(cols.first()) else { return Ok(Vec::new()) };
    let n = first.n;
    for x in rows.iter().chain(cols) {
        if x.n != n {
            return Err(Error::AmbientMismatch(1, n, 1, x.n));
        }
    }
    // family -> [(class index, slot, pol, coefficient)]
    type Group = Vec<(usize, Vec<u8>, Polarization, Q)>;
    let group = |xs: &[TailsClass]| -> Vec<(Vec<u64>, Group)> {
        let mut m: BTreeMap<Vec<u64>, Group> = BTreeMap::new();
        for (i, x) in xs.iter().enumerate() {
            for (t, c) in &x.terms {
                m.entry(t.tails.clone()).or_default().push((i, slot_indices(n, t), t.pol, c.clone()));
            }
        }
        m.into_iter().collect()
    };
    let (gr, gc) = (group(rows), group(cols));
    let mut out: Vec<HashMap<usize, Q>> = vec![HashMap::new(); rows.len()];
    for (f1, terms1) in &gr {
        for (f2, terms2) in &gc {
            let Some(g12) = geometry(n, f1, f2) else { continue };
            let mut g21 = None;
            for (i, s, p1, c1) in terms1 {
                for (j, t, p2, c2) in terms2 {
                    if p1 == p2 {
                        continue;
                    }
                    let v = if *p1 == Polarization::Hol {
                        evaluate(&g12, s, t)
                    } else {
                        let g = g21.get_or_insert_with(|| geometry(n, f2, f1).unwrap());
                        evaluate(g, t, s) * qi(epsilon as i64)
                    };
                    if !v.is_zero() {
                        *out[*i].entry(*j).or_insert_with(Q::zero) += c1 * c2 * v;
                    }
                }
            }
        }
    }
    Ok(out
        .into_iter()
        .map(|m| {
            let mut r: SparseRow = m.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            r.sort_unstable_by_key(|x| x.0);
            r
        })
        .collect())
}
