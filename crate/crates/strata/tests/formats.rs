use proptest::prelude::*;
use serde_json::{json, Value};
use strata::json::{parse_class, parse_graph, to_value, ClassJson, GraphJson};
use strata::og::{self, Item};
use strata_core::graphs::enumerate_stable_graphs;
use strata_core::omega::{m212_classes, one_tail_classes, Polarization};
use strata_core::rational::{q, qi};
use strata_core::strata::{degree_generators, TautClass};

#[test]
fn graphs_round_trip() {
    for (g, n) in [(0, 5), (1, 2), (2, 0), (1, 3), (2, 1)] {
        for x in enumerate_stable_graphs(g, n, None).unwrap() {
            let v = to_value(&GraphJson(&x));
            let back = parse_graph(&v, "").unwrap().graph;
            assert_eq!(back.canonical_key(), x.canonical_key());
            assert_eq!(to_value(&GraphJson(&back)), v);
        }
    }
}

#[test]
fn classes_round_trip() {
    for (g, n, d) in [(0, 5, 2), (1, 2, 2), (1, 3, 4), (2, 1, 4), (1, 1, 2)] {
        let gens = degree_generators(g, n, d).unwrap();
        for (i, s) in gens.iter().enumerate() {
            let x = TautClass::from_stratum(s.clone(), q(2 * i as i64 - 3, 7));
            let v = to_value(&ClassJson(&x));
            assert_eq!(v["schema"], "1");
            assert_eq!(parse_class(&v).unwrap(), x);
        }
    }
}

#[test]
fn class_errors_carry_a_path() {
    let bad = json!({"terms": [{"coeff": "1/0", "graph": {"vertices": [{"genus": 0}], "legs": {"1": 0, "2": 0, "3": 0}}}]});
    assert_eq!(parse_class(&bad).unwrap_err().path, "/terms/0/coeff");
    let bad = json!({"terms": [{"graph": {"vertices": [{"genus": 0}], "legs": {"1": 0, "2": 0, "3": 0}}, "psi": {"9": 1}}]});
    assert_eq!(parse_class(&bad).unwrap_err().path, "/terms/0/psi/9");
    let bad = json!({"schema": "2", "terms": []});
    assert_eq!(parse_class(&bad).unwrap_err().path, "/schema");
    let unstable = json!({"terms": [{"graph": {"vertices": [{"genus": 0}], "legs": {"1": 0, "2": 0}}}]});
    assert!(parse_class(&unstable).is_err());
    assert!(parse_class(&json!({"terms": []})).is_err());
}

#[test]
fn zero_class_round_trips() {
    let z = TautClass::zero(1, 3, 4);
    assert_eq!(parse_class(&to_value(&ClassJson(&z))).unwrap(), z);
}

#[test]
fn omega_classes_round_trip_through_og() {
    let mut classes: Vec<_> = one_tail_classes(12, Polarization::Hol).unwrap().iter().take(20).map(|t| t.to_omega_class().unwrap()).collect();
    classes.extend(m212_classes().unwrap().into_iter().take(10));
    for x in classes {
        let mut src = String::new();
        og::write_class(&mut src, &x);
        let f = og::parse(&src).unwrap();
        assert_eq!(f.rows.len(), 1);
        assert_eq!(f.rows[0].to_omega().unwrap(), x, "{src}");
    }
}

#[test]
fn og_errors_name_the_line() {
    let e = og::parse("class\nterm 1\nv0 genus=1\nleg 1 v7\n").unwrap_err();
    // semantic errors point at the start of the offending term
    assert_eq!(e.line, 2);
    assert_eq!(og::parse("class\nterm 1\nv0 genus=x\n").unwrap_err().line, 3);
    assert!(og::parse("family nonsense\n").is_err());
    assert!(og::parse("family one-tail pol=hol\n").is_err());
    assert!(og::parse("family one-tail n=13 pol=sideways\n").is_err());
    let f = og::parse("# only a comment\n").unwrap();
    assert!(f.rows.is_empty() && !f.has_battery);
}

#[test]
fn families_keep_the_fast_form() {
    let f = og::parse("family one-tail n=12 pol=hol\nbattery\nfamily conjugates\n").unwrap();
    assert_eq!(f.rows.len(), f.battery.len());
    assert!(f.rows.iter().all(|x| matches!(x, Item::Tails(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rational_coefficients_survive_json(num in -50i64..50, den in 1i64..50, i in 0usize..64) {
        let gens = degree_generators(1, 3, 2).unwrap();
        let x = TautClass::from_stratum(gens[i % gens.len()].clone(), q(num, den));
        let v: Value = serde_json::from_str(&serde_json::to_string(&ClassJson(&x)).unwrap()).unwrap();
        prop_assert_eq!(parse_class(&v).unwrap(), x);
    }

    #[test]
    fn sums_survive_json(i in 0usize..64, j in 0usize..64, c in -5i64..5) {
        let gens = degree_generators(0, 6, 4).unwrap();
        let x = TautClass::from_stratum(gens[i % gens.len()].clone(), qi(1))
            .add(&TautClass::from_stratum(gens[j % gens.len()].clone(), qi(c)))
            .unwrap();
        prop_assert_eq!(parse_class(&to_value(&ClassJson(&x))).unwrap(), x);
    }
}
