//! Cross-validation cases: ψ/κ integrals and products on small spaces,
//! written for a referee that recomputes them independently.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use strata_core::integrals::psi_integral;
use strata_core::rational::fmt_q;
use strata_core::strata::{degree_generators, integrate, product, TautClass};
use strata_core::Q;

use crate::json::{to_value, ClassJson, SCHEMA};

/// One replayable case.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckCase {
    pub id: String,
    pub op: &'static str,
    pub input: Value,
    pub expected: Value,
}

impl CheckCase {
    pub fn psi_integral(id: String, g: u32, a: &[u32], value: &Q) -> Self {
        CheckCase { id, op: "integrate_psi", input: json!({"g": g, "exponents": a}), expected: json!(fmt_q(value)) }
    }
    pub fn integral(id: String, x: &TautClass, value: &Q) -> Self {
        CheckCase { id, op: "integrate_class", input: json!({"class": to_value(&ClassJson(x))}), expected: json!(fmt_q(value)) }
    }
    pub fn product(id: String, a: &TautClass, b: &TautClass, ab: &TautClass) -> Self {
        let mut expected = json!({"class": to_value(&ClassJson(ab))});
        if ab.degree() == 2 * ab.dim() {
            expected["integral"] = json!(fmt_q(&integrate(ab)));
        }
        CheckCase {
            id,
            op: "product",
            input: json!({"a": to_value(&ClassJson(a)), "b": to_value(&ClassJson(b))}),
            expected,
        }
    }
    pub fn to_json(&self) -> Value {
        json!({"id": self.id, "op": self.op, "input": self.input, "expected": self.expected})
    }
}

pub fn cases_document(cases: &[CheckCase]) -> Value {
    json!({"schema": SCHEMA, "cases": cases.iter().map(CheckCase::to_json).collect::<Vec<_>>()})
}

/// Spaces with 1 ≤ 3g − 3 + n ≤ 5 and n ≥ 1.
fn small_spaces() -> Vec<(u32, usize)> {
    let mut out = Vec::new();
    for g in 0..=2u32 {
        for n in 1..=8usize {
            let d = 3 * g as i64 - 3 + n as i64;
            if (1..=5).contains(&d) {
                out.push((g, n));
            }
        }
    }
    out
}

fn random_exponents(rng: &mut ChaCha8Rng, n: usize, total: u32) -> Vec<u32> {
    let mut a = vec![0u32; n];
    for _ in 0..total {
        a[rng.gen_range(0..n)] += 1;
    }
    a
}

/// A deterministic sample of `count` cases: roughly a third ψ-integrals, the
/// rest products of generator strata (with their integrals when top degree).
pub fn sample_cases(count: usize, seed: u64) -> Result<Vec<CheckCase>, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spaces = small_spaces();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let &(g, n) = spaces.choose(&mut rng).unwrap();
        let dim = (3 * g as i64 - 3 + n as i64) as u32;
        let id = format!("case-{:03}", out.len() + 1);
        if out.len() % 3 == 0 {
            let a = random_exponents(&mut rng, n, dim);
            out.push(CheckCase::psi_integral(id, g, &a, &psi_integral(g, &a)));
            continue;
        }
        let d1 = rng.gen_range(1..=dim);
        let d2 = if rng.gen_bool(0.6) { dim - d1 } else { rng.gen_range(0..=dim - d1) };
        let pick = |rng: &mut ChaCha8Rng, d: u32| -> Result<TautClass, String> {
            let gens = degree_generators(g, n, 2 * d as usize).map_err(|e| e.to_string())?;
            let s = gens.choose(rng).ok_or("no generators")?.clone();
            Ok(TautClass::from_stratum(s, Q::from_integer(rng.gen_range(1..=3).into())))
        };
        let a = pick(&mut rng, d1)?;
        let b = pick(&mut rng, d2)?;
        let ab = product(&a, &b).map_err(|e| e.to_string())?;
        out.push(CheckCase::product(id, &a, &b, &ab));
    }
    Ok(out)
}
