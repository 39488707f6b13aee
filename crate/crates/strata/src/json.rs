//! JSON interchange for stable graphs and tautological classes.
//!
//! Graph: `{"vertices":[{"genus":g}], "legs":{"1":v,...}, "edges":[[[v,slot],[v,slot]],...]}`
//! where `slot` numbers the half-edges at a vertex from 0 in flag order.
//! Class: `{"schema":"1","g":..,"n":..,"degree":..,"terms":[{"coeff":"p/q",
//! "graph":{..},"psi":{"1":a,"v0.1":b},"kappa":[[b,..],..]}]}`; a term
//! stands for `coeff · ξ_Γ*(α)/|Aut Γ|`.

use std::collections::BTreeMap;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};
use serde_json::Value;
use strata_core::graphs::StableGraph;
use strata_core::rational::{fmt_q, parse_q};
use strata_core::strata::{DecoratedStratum, TautClass};
use strata_core::Q;

pub const SCHEMA: &str = "1";

/// Local slot of every half-edge flag: flag → (vertex, slot).
pub fn half_edge_slots(g: &StableGraph) -> BTreeMap<usize, (usize, usize)> {
    let n = g.n();
    let mut out = BTreeMap::new();
    for (v, flags) in g.all_flags().iter().enumerate() {
        for (slot, &f) in flags.iter().filter(|&&f| f >= n).enumerate() {
            out.insert(f, (v, slot));
        }
    }
    out
}

/// Human-readable flag reference: `"3"` for marking 3, `"v0.1"` for a half-edge.
pub fn flag_ref(g: &StableGraph, slots: &BTreeMap<usize, (usize, usize)>, f: usize) -> String {
    if f < g.n() {
        (f + 1).to_string()
    } else {
        let (v, s) = slots[&f];
        format!("v{v}.{s}")
    }
}

pub struct GraphJson<'a>(pub &'a StableGraph);

struct Vertex(u32);

impl Serialize for Vertex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Vertex", 1)?;
        st.serialize_field("genus", &self.0)?;
        st.end()
    }
}

struct Legs<'a>(&'a StableGraph);

impl Serialize for Legs<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.n()))?;
        for i in 0..self.0.n() {
            m.serialize_entry(&(i + 1).to_string(), &self.0.leg_vertex(i))?;
        }
        m.end()
    }
}

impl Serialize for GraphJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let g = self.0;
        let slots = half_edge_slots(g);
        let n = g.n();
        let edges: Vec<[[usize; 2]; 2]> = (0..g.num_edges())
            .map(|e| {
                let a = slots[&(n + 2 * e)];
                let b = slots[&(n + 2 * e + 1)];
                [[a.0, a.1], [b.0, b.1]]
            })
            .collect();
        let mut st = s.serialize_struct("StableGraph", 3)?;
        st.serialize_field("vertices", &g.genera().iter().map(|&x| Vertex(x)).collect::<Vec<_>>())?;
        st.serialize_field("legs", &Legs(g))?;
        st.serialize_field("edges", &edges)?;
        st.end()
    }
}

struct Psi<'a>(&'a StableGraph, &'a [u32]);

impl Serialize for Psi<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let slots = half_edge_slots(self.0);
        let nz: Vec<usize> = (0..self.1.len()).filter(|&f| self.1[f] > 0).collect();
        let mut m = s.serialize_map(Some(nz.len()))?;
        for f in nz {
            m.serialize_entry(&flag_ref(self.0, &slots, f), &self.1[f])?;
        }
        m.end()
    }
}

struct Term<'a>(&'a DecoratedStratum, &'a Q);

impl Serialize for Term<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let g = self.0.graph();
        let mut st = s.serialize_struct("Term", 4)?;
        st.serialize_field("coeff", &fmt_q(self.1))?;
        st.serialize_field("graph", &GraphJson(g))?;
        st.serialize_field("psi", &Psi(g, self.0.psi()))?;
        st.serialize_field("kappa", &self.0.kappa_vecs())?;
        st.end()
    }
}

pub struct ClassJson<'a>(pub &'a TautClass);

impl Serialize for ClassJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let x = self.0;
        let terms: Vec<Term> = x.terms().iter().map(|(t, c)| Term(t, c)).collect();
        let mut st = s.serialize_struct("TautClass", 5)?;
        st.serialize_field("schema", SCHEMA)?;
        st.serialize_field("g", &x.genus())?;
        st.serialize_field("n", &x.n())?;
        st.serialize_field("degree", &x.degree())?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

/// Parse failure with a JSON-pointer-like location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "at {}: {}", self.path, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(path: &str, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { path: path.into(), message: message.into() })
}

fn as_uint(v: &Value, path: &str) -> Result<usize, ParseError> {
    v.as_u64().map(|x| x as usize).map_or_else(|| err(path, "expected a nonnegative integer"), Ok)
}

/// A parsed graph together with the (vertex, slot) → flag table.
pub struct ParsedGraph {
    pub graph: StableGraph,
    pub slot_flags: BTreeMap<(usize, usize), usize>,
}

impl ParsedGraph {
    /// Resolves `"3"` (marking) or `"v0.1"` (half-edge) to a flag index.
    pub fn resolve(&self, r: &str) -> Option<usize> {
        if let Some(rest) = r.strip_prefix('v') {
            let (v, s) = rest.split_once('.')?;
            self.slot_flags.get(&(v.parse().ok()?, s.parse().ok()?)).copied()
        } else {
            let i: usize = r.parse().ok()?;
            (1..=self.graph.n()).contains(&i).then(|| i - 1)
        }
    }
}

/// Builds a graph from vertex genera, 1-based leg placement and edges given
/// as `(vertex, slot)` pairs; slots at each vertex must be distinct.
pub fn build_graph(
    genera: Vec<u32>,
    legs: Vec<usize>,
    edges: &[[(usize, usize); 2]],
    path: &str,
) -> Result<ParsedGraph, ParseError> {
    let n = legs.len();
    let mut slot_flags = BTreeMap::new();
    for (e, ends) in edges.iter().enumerate() {
        for (side, &(v, s)) in ends.iter().enumerate() {
            if slot_flags.insert((v, s), n + 2 * e + side).is_some() {
                return err(&format!("{path}/edges/{e}"), format!("slot {s} of vertex {v} used twice"));
            }
        }
    }
    let graph = StableGraph::new(genera, legs, edges.iter().map(|e| [e[0].0, e[1].0]).collect())
        .or_else(|e| err(path, e.to_string()))?;
    Ok(ParsedGraph { graph, slot_flags })
}

pub fn parse_graph(v: &Value, path: &str) -> Result<ParsedGraph, ParseError> {
    let obj = v.as_object().map_or_else(|| err(path, "expected an object"), Ok)?;
    let verts = obj.get("vertices").and_then(Value::as_array).map_or_else(|| err(path, "missing \"vertices\" array"), Ok)?;
    let mut genera = Vec::new();
    for (i, x) in verts.iter().enumerate() {
        let p = format!("{path}/vertices/{i}");
        let g = x.get("genus").map_or_else(|| err(&p, "missing \"genus\""), Ok)?;
        genera.push(as_uint(g, &format!("{p}/genus"))? as u32);
    }
    let legs_obj = obj.get("legs").and_then(Value::as_object).map_or_else(|| err(path, "missing \"legs\" object"), Ok)?;
    let n = legs_obj.len();
    let mut legs = vec![usize::MAX; n];
    for (k, x) in legs_obj {
        let p = format!("{path}/legs/{k}");
        let i: usize = k.parse().ok().filter(|i| (1..=n).contains(i)).map_or_else(|| err(&p, format!("leg labels must be 1..{n}")), Ok)?;
        legs[i - 1] = as_uint(x, &p)?;
    }
    let mut edges = Vec::new();
    if let Some(es) = obj.get("edges") {
        let es = es.as_array().map_or_else(|| err(&format!("{path}/edges"), "expected an array"), Ok)?;
        for (e, x) in es.iter().enumerate() {
            let p = format!("{path}/edges/{e}");
            let ends = x.as_array().filter(|a| a.len() == 2).map_or_else(|| err(&p, "an edge is [[v,slot],[v,slot]]"), Ok)?;
            let mut pair = [(0, 0); 2];
            for s in 0..2 {
                let q = format!("{p}/{s}");
                let vs = ends[s].as_array().filter(|a| a.len() == 2).map_or_else(|| err(&q, "expected [vertex, slot]"), Ok)?;
                pair[s] = (as_uint(&vs[0], &q)?, as_uint(&vs[1], &q)?);
            }
            edges.push(pair);
        }
    }
    build_graph(genera, legs, &edges, path)
}

pub fn parse_class(v: &Value) -> Result<TautClass, ParseError> {
    if let Some(s) = v.get("schema") {
        if s.as_str() != Some(SCHEMA) {
            return err("/schema", format!("unsupported schema (expected \"{SCHEMA}\")"));
        }
    }
    let terms = v.get("terms").and_then(Value::as_array).map_or_else(|| err("", "missing \"terms\" array"), Ok)?;
    let mut out: Option<TautClass> = None;
    for (i, t) in terms.iter().enumerate() {
        let p = format!("/terms/{i}");
        let coeff = match t.get("coeff") {
            None => Q::from_integer(1.into()),
            Some(Value::String(s)) => parse_q(s).map_or_else(|| err(&format!("{p}/coeff"), "not a rational"), Ok)?,
            Some(Value::Number(x)) => {
                Q::from_integer(x.as_i64().map_or_else(|| err(&format!("{p}/coeff"), "not an integer"), Ok)?.into())
            }
            Some(_) => return err(&format!("{p}/coeff"), "expected \"p/q\""),
        };
        let pg = parse_graph(t.get("graph").map_or_else(|| err(&p, "missing \"graph\""), Ok)?, &format!("{p}/graph"))?;
        let mut psi = vec![0u32; pg.graph.num_flags()];
        if let Some(ps) = t.get("psi") {
            let ps = ps.as_object().map_or_else(|| err(&format!("{p}/psi"), "expected an object"), Ok)?;
            for (k, x) in ps {
                let q = format!("{p}/psi/{k}");
                let f = pg.resolve(k).map_or_else(|| err(&q, "unknown flag"), Ok)?;
                psi[f] = as_uint(x, &q)? as u32;
            }
        }
        let mut kappa = vec![Vec::new(); pg.graph.num_vertices()];
        if let Some(ks) = t.get("kappa") {
            let ks = ks.as_array().filter(|a| a.len() == kappa.len()).map_or_else(|| err(&format!("{p}/kappa"), "one list per vertex"), Ok)?;
            for (vtx, x) in ks.iter().enumerate() {
                let q = format!("{p}/kappa/{vtx}");
                let list = x.as_array().map_or_else(|| err(&q, "expected an array"), Ok)?;
                for y in list {
                    kappa[vtx].push(as_uint(y, &q)? as u32);
                }
            }
        }
        let s = DecoratedStratum::new(pg.graph, psi, kappa).or_else(|e| err(&p, e.to_string()))?;
        let x = TautClass::from_stratum(s, coeff);
        out = Some(match out {
            None => x,
            Some(acc) => acc.add(&x).or_else(|e| err(&p, e.to_string()))?,
        });
    }
    match out {
        Some(x) => Ok(x),
        // the zero class is identified by its header alone
        None => {
            let field = |k: &str| v.get(k).map_or_else(|| err("", format!("an empty class needs \"{k}\"")), |x| as_uint(x, &format!("/{k}")));
            Ok(TautClass::zero(field("g")? as u32, field("n")?, field("degree")?))
        }
    }
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}
