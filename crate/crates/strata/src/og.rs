//! The `.og` text format for ω-decorated classes.
//!
//! ```text
//! # comment
//! class [coeff]                 start a class (rows section)
//! term [coeff]                  start another term of the current class
//! v0 genus=1 omega=.0,2,3:hol   vertex; omega lists the 11 slot flags in order:
//!                               `k` is marking k, `.s` the half-edge in slot s here
//! v1 genus=0
//! leg 1 v1                      marking 1 sits on v1
//! edge v0.0 v1.0                edge between slot 0 of v0 and slot 0 of v1
//! psi 1 2                       ψ₁² (flags as in omega=, or `v1.0`)
//! kappa v1 1,1                  κ₁² at v1
//! battery                       following classes form the pairing battery
//! family one-tail n=13 pol=hol  append a built-in generated family
//! ```
//! A term is `coeff · [Γ, f_S^*ω]` with `[Γ, α] = ξ_Γ*(α)/|Aut Γ|`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use strata_core::graphs::StableGraph;
use strata_core::omega::{
    m112_classes, m212_classes, m212_pullbacks, one_tail_classes, pulled_back_battery, two_tail_battery, OmegaClass,
    OmegaStratum, Polarization, TailsClass,
};
use strata_core::rational::{fmt_q, parse_q};
use strata_core::Q;

use crate::json::{build_graph, flag_ref, half_edge_slots};

/// A class of the file, kept in rational-tails form when it came from a
/// generated family.
#[derive(Clone, Debug)]
pub enum Item {
    Omega(OmegaClass),
    Tails(TailsClass),
}

impl Item {
    pub fn to_omega(&self) -> Result<OmegaClass, String> {
        match self {
            Item::Omega(x) => Ok(x.clone()),
            Item::Tails(t) => t.to_omega_class().map_err(|e| e.to_string()),
        }
    }
    pub fn to_tails(&self) -> Option<TailsClass> {
        match self {
            Item::Omega(x) => TailsClass::from_omega_class(x),
            Item::Tails(t) => Some(t.clone()),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct OgFile {
    pub rows: Vec<Item>,
    pub battery: Vec<Item>,
    pub has_battery: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OgError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for OgError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for OgError {}

#[derive(Default)]
struct Vertex {
    genus: Option<u32>,
    omega: Option<(Vec<String>, Polarization)>,
    kappa: Vec<u32>,
}

#[derive(Default)]
struct TermDraft {
    line: usize,
    coeff: Option<Q>,
    vertices: BTreeMap<usize, Vertex>,
    legs: BTreeMap<usize, usize>,
    edges: Vec<[(usize, usize); 2]>,
    psi: Vec<(String, u32)>,
}

impl TermDraft {
    fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.legs.is_empty() && self.edges.is_empty()
    }
}

struct ClassDraft {
    coeff: Q,
    terms: Vec<TermDraft>,
}

fn vertex_id(s: &str) -> Option<usize> {
    s.strip_prefix('v')?.parse().ok()
}

fn polarization(s: &str) -> Option<Polarization> {
    match s {
        "hol" => Some(Polarization::Hol),
        "antihol" => Some(Polarization::Antihol),
        _ => None,
    }
}

fn keyvals<'a>(words: &[&'a str]) -> Result<BTreeMap<&'a str, &'a str>, String> {
    words
        .iter()
        .map(|w| w.split_once('=').ok_or_else(|| format!("expected key=value, found `{w}`")))
        .collect()
}

fn family(name: &str, kv: &BTreeMap<&str, &str>) -> Result<Vec<Item>, String> {
    let n = || -> Result<usize, String> {
        kv.get("n").ok_or("missing n=")?.parse().map_err(|_| "n must be an integer".to_string())
    };
    let pol = || -> Result<Polarization, String> {
        kv.get("pol").map_or(Ok(Polarization::Hol), |p| polarization(p).ok_or_else(|| "pol must be hol or antihol".into()))
    };
    let tails = |r: strata_core::Result<Vec<TailsClass>>| -> Result<Vec<Item>, String> {
        Ok(r.map_err(|e| e.to_string())?.into_iter().map(Item::Tails).collect())
    };
    match name {
        "one-tail" => tails(one_tail_classes(n()?, pol()?)),
        "pulled-back" => tails(pulled_back_battery(n()?, pol()?)),
        "two-tail" => tails(two_tail_battery(n()?, pol()?)),
        "m112" => tails(m112_classes()),
        "m212" => Ok(m212_classes().map_err(|e| e.to_string())?.into_iter().map(Item::Omega).collect()),
        "m212-pullbacks" => tails(m212_pullbacks()),
        "conjugates" => Err("`conjugates` is handled by the parser".into()),
        _ => Err(format!("unknown family `{name}`")),
    }
}

fn build_term(t: &TermDraft) -> Result<Option<(OmegaStratum, i32)>, String> {
    let nv = t.vertices.len();
    if t.vertices.keys().copied().ne(0..nv) {
        return Err("vertices must be numbered v0, v1, ... without gaps".into());
    }
    let n = t.legs.len();
    if t.legs.keys().copied().ne(1..=n) {
        return Err("legs must be labelled 1..n without gaps".into());
    }
    let genera: Vec<u32> = t.vertices.values().map(|v| v.genus.unwrap_or(0)).collect();
    let legs: Vec<usize> = t.legs.values().copied().collect();
    if legs.iter().chain(t.edges.iter().flat_map(|e| [&e[0].0, &e[1].0])).any(|&v| v >= nv) {
        return Err("reference to an undeclared vertex".into());
    }
    let pg = build_graph(genera, legs, &t.edges, "graph").map_err(|e| e.message)?;
    let omega: Vec<(usize, &(Vec<String>, Polarization))> =
        t.vertices.iter().filter_map(|(&v, x)| x.omega.as_ref().map(|o| (v, o))).collect();
    let [(ov, (refs, pol))] = omega.as_slice() else {
        return Err("exactly one vertex must carry omega=".into());
    };
    let mut slot = Vec::new();
    for r in refs {
        let full = if let Some(s) = r.strip_prefix('.') { format!("v{ov}.{s}") } else { r.clone() };
        let f = pg.resolve(&full).ok_or_else(|| format!("unknown flag `{r}` in omega="))?;
        slot.push(f);
    }
    let mut psi = vec![0u32; pg.graph.num_flags()];
    for (r, e) in &t.psi {
        let f = pg.resolve(r).ok_or_else(|| format!("unknown flag `{r}` in psi"))?;
        psi[f] += e;
    }
    let kappa: Vec<Vec<u32>> = t.vertices.values().map(|v| v.kappa.clone()).collect();
    OmegaStratum::new(pg.graph, psi, kappa, &slot, *pol).map_err(|e| e.to_string())
}

fn finish_class(c: ClassDraft) -> Result<Option<OmegaClass>, OgError> {
    let mut acc: Option<OmegaClass> = None;
    for t in c.terms.iter().filter(|t| !t.is_empty()) {
        let coeff = t.coeff.clone().unwrap_or_else(|| Q::from_integer(1.into())) * c.coeff.clone();
        let err = |message: String| OgError { line: t.line, message };
        let x = match build_term(t).map_err(err)? {
            Some((s, sign)) => OmegaClass::from_stratum(s, coeff * Q::from_integer(sign.into())),
            // an odd automorphism permutes the slot: the term is zero
            None => continue,
        };
        acc = Some(match acc {
            None => x,
            Some(a) => a.add(&x).map_err(|e| err(e.to_string()))?,
        });
    }
    Ok(acc)
}

/// Parses `.og` source text.
pub fn parse(src: &str) -> Result<OgFile, OgError> {
    let mut file = OgFile::default();
    let mut in_battery = false;
    let mut class: Option<ClassDraft> = None;
    let mut class_line = 0;
    let flush = |class: &mut Option<ClassDraft>, file: &mut OgFile, in_battery: bool, line: usize| -> Result<(), OgError> {
        if let Some(c) = class.take() {
            let x = finish_class(c)?.ok_or(OgError { line, message: "class is zero or empty".into() })?;
            if in_battery {
                file.battery.push(Item::Omega(x));
            } else {
                file.rows.push(Item::Omega(x));
            }
        }
        Ok(())
    };
    for (idx, raw) in src.lines().enumerate() {
        let line = idx + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let words: Vec<&str> = text.split_whitespace().collect();
        let e = |message: String| OgError { line, message };
        let coeff_arg = |w: Option<&&str>| -> Result<Q, OgError> {
            match w {
                None => Ok(Q::from_integer(1.into())),
                Some(s) => parse_q(s).ok_or_else(|| e(format!("`{s}` is not a rational number"))),
            }
        };
        match words[0] {
            "class" => {
                flush(&mut class, &mut file, in_battery, class_line)?;
                class = Some(ClassDraft { coeff: coeff_arg(words.get(1))?, terms: vec![TermDraft { line, ..Default::default() }] });
                class_line = line;
            }
            "term" => {
                let c = class.as_mut().ok_or_else(|| e("`term` outside a class".into()))?;
                let coeff = Some(coeff_arg(words.get(1))?);
                if c.terms.last().is_some_and(TermDraft::is_empty) {
                    let t = c.terms.last_mut().unwrap();
                    t.coeff = coeff;
                    t.line = line;
                } else {
                    c.terms.push(TermDraft { line, coeff, ..Default::default() });
                }
            }
            "battery" => {
                flush(&mut class, &mut file, in_battery, class_line)?;
                in_battery = true;
                file.has_battery = true;
            }
            "family" => {
                flush(&mut class, &mut file, in_battery, class_line)?;
                let name = words.get(1).ok_or_else(|| e("missing family name".into()))?;
                let kv = keyvals(&words[2..]).map_err(e)?;
                let items = if *name == "conjugates" {
                    file.rows
                        .iter()
                        .map(|x| match x {
                            Item::Omega(c) => Item::Omega(c.conjugate()),
                            Item::Tails(t) => Item::Tails(conjugate_tails(t)),
                        })
                        .collect()
                } else {
                    family(name, &kv).map_err(e)?
                };
                if in_battery {
                    file.battery.extend(items);
                } else {
                    file.rows.extend(items);
                }
            }
            w if w.starts_with('v') && vertex_id(w).is_some() => {
                let c = class.as_mut().ok_or_else(|| e("vertex outside a class".into()))?;
                let t = c.terms.last_mut().unwrap();
                let id = vertex_id(w).unwrap();
                if t.vertices.contains_key(&id) {
                    return Err(e(format!("vertex {w} declared twice")));
                }
                let mut v = Vertex::default();
                for (k, val) in keyvals(&words[1..]).map_err(e)? {
                    match k {
                        "genus" => v.genus = Some(val.parse().map_err(|_| e("genus must be an integer".into()))?),
                        "omega" => {
                            let (refs, pol) = val.rsplit_once(':').ok_or_else(|| e("omega=<flags>:<hol|antihol>".into()))?;
                            let pol = polarization(pol).ok_or_else(|| e("polarization must be hol or antihol".into()))?;
                            v.omega = Some((refs.split(',').map(str::to_string).collect(), pol));
                        }
                        _ => return Err(e(format!("unknown vertex attribute `{k}`"))),
                    }
                }
                if v.genus.is_none() {
                    return Err(e("vertex needs genus=".into()));
                }
                t.vertices.insert(id, v);
            }
            "leg" => {
                let c = class.as_mut().ok_or_else(|| e("leg outside a class".into()))?;
                let t = c.terms.last_mut().unwrap();
                let [_, label, v] = words.as_slice() else { return Err(e("leg <label> v<id>".into())) };
                let label: usize = label.parse().ok().filter(|&l| l > 0).ok_or_else(|| e("leg labels are positive integers".into()))?;
                let v = vertex_id(v).ok_or_else(|| e(format!("`{v}` is not a vertex")))?;
                if t.legs.insert(label, v).is_some() {
                    return Err(e(format!("leg {label} placed twice")));
                }
            }
            "edge" => {
                let c = class.as_mut().ok_or_else(|| e("edge outside a class".into()))?;
                let t = c.terms.last_mut().unwrap();
                let [_, a, b] = words.as_slice() else { return Err(e("edge v<id>.<slot> v<id>.<slot>".into())) };
                let end = |s: &str| -> Result<(usize, usize), OgError> {
                    let (v, slot) = s.split_once('.').ok_or_else(|| e(format!("`{s}` is not v<id>.<slot>")))?;
                    Ok((vertex_id(v).ok_or_else(|| e(format!("`{v}` is not a vertex")))?, slot.parse().map_err(|_| e("slot must be an integer".into()))?))
                };
                t.edges.push([end(a)?, end(b)?]);
            }
            "psi" => {
                let c = class.as_mut().ok_or_else(|| e("psi outside a class".into()))?;
                let [_, r, x] = words.as_slice() else { return Err(e("psi <flag> <exponent>".into())) };
                let x: u32 = x.parse().map_err(|_| e("exponent must be an integer".into()))?;
                c.terms.last_mut().unwrap().psi.push((r.to_string(), x));
            }
            "kappa" => {
                let c = class.as_mut().ok_or_else(|| e("kappa outside a class".into()))?;
                let t = c.terms.last_mut().unwrap();
                let [_, v, list] = words.as_slice() else { return Err(e("kappa v<id> b1,b2,...".into())) };
                let v = vertex_id(v).ok_or_else(|| e(format!("`{v}` is not a vertex")))?;
                let vx = t.vertices.get_mut(&v).ok_or_else(|| e("kappa on an undeclared vertex".into()))?;
                for b in list.split(',') {
                    vx.kappa.push(b.parse().map_err(|_| e("κ indices are integers".into()))?);
                }
            }
            w => return Err(e(format!("unknown directive `{w}`"))),
        }
    }
    flush(&mut class, &mut file, in_battery, class_line)?;
    Ok(file)
}

fn conjugate_tails(t: &TailsClass) -> TailsClass {
    let mut out = TailsClass::zero(t.n(), t.degree());
    for (term, c) in t.terms() {
        let x = TailsClass::single(t.n(), &term.tails, &term.slot, term.pol.dual(), c.clone())
            .expect("conjugation preserves validity");
        out = out.add(&x).expect("same ambient");
    }
    out
}

/// Writes an ω-class in `.og` form (one `class` block, one `term` per stratum).
pub fn write_class(out: &mut String, x: &OmegaClass) {
    out.push_str("class\n");
    for (s, c) in x.terms() {
        let _ = writeln!(out, "term {}", fmt_q(c));
        let g: &StableGraph = s.graph();
        let slots = half_edge_slots(g);
        let ov = s.omega_vertex();
        for v in 0..g.num_vertices() {
            let _ = write!(out, "v{v} genus={}", g.vertex_genus(v));
            if v == ov {
                let refs: Vec<String> = s
                    .slot()
                    .iter()
                    .map(|&f| if f < g.n() { (f + 1).to_string() } else { format!(".{}", slots[&f].1) })
                    .collect();
                let pol = match s.polarization() {
                    Polarization::Hol => "hol",
                    Polarization::Antihol => "antihol",
                };
                let _ = write!(out, " omega={}:{pol}", refs.join(","));
            }
            out.push('\n');
        }
        for i in 0..g.n() {
            let _ = writeln!(out, "leg {} v{}", i + 1, g.leg_vertex(i));
        }
        for e in 0..g.num_edges() {
            let a = slots[&(g.n() + 2 * e)];
            let b = slots[&(g.n() + 2 * e + 1)];
            let _ = writeln!(out, "edge v{}.{} v{}.{}", a.0, a.1, b.0, b.1);
        }
        for (f, &p) in s.base().psi().iter().enumerate() {
            if p > 0 {
                let _ = writeln!(out, "psi {} {p}", flag_ref(g, &slots, f));
            }
        }
        for (v, k) in s.base().kappa_vecs().iter().enumerate() {
            if !k.is_empty() {
                let list: Vec<String> = k.iter().map(u32::to_string).collect();
                let _ = writeln!(out, "kappa v{v} {}", list.join(","));
            }
        }
    }
}
