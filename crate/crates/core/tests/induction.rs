use proptest::prelude::*;
use strata_core::induction::*;
use strata_core::rational::binomial_u64;

fn t(g: u32, n: usize, k: u32) -> Triple {
    Triple::new(g, n, k)
}

#[test]
fn filling_conditions_small() {
    let c = filling_conditions(0, 4, 2).unwrap();
    assert!(c[0].is_head());
    assert_eq!(c[0].triple, t(0, 4, 2));
    assert!(c[1..].iter().all(|x| x.triple.k == 0));
    assert!(c[1..].iter().any(|x| x.triple == t(0, 3, 0)));

    let c = filling_conditions(1, 1, 2).unwrap();
    assert!(c.iter().any(|x| x.triple == t(0, 3, 0)));
    assert!(filling_conditions(0, 2, 1).is_err());
}

#[test]
fn filling_conditions_satisfy_criterion() {
    for (g, n, k) in [(2, 3, 6), (1, 11, 13), (3, 0, 9), (0, 8, 4)] {
        let head = t(g, n, k);
        let c = filling_conditions(g, n, k).unwrap();
        assert_eq!(c.iter().filter(|x| x.is_head()).count(), 1);
        for x in &c[1..] {
            let p = x.triple;
            assert!(precedes((p.g, p.n), (g, n)));
            assert!(p.k + 2 <= k);
            assert!(x.codegree() <= 2 * dim_mgn(g, n) - k as i64);
            assert!(2 * p.g as i64 - 2 + p.n as i64 > 0);
        }
        assert!(!c[1..].iter().any(|x| x.triple == head));
    }
}

#[test]
fn precedence_is_strict() {
    assert!(!precedes((2, 3), (2, 3)));
    assert!(precedes((1, 5), (2, 3)));
    assert!(!precedes((1, 6), (2, 3)));
    assert!(!precedes((3, 0), (2, 5)));
}

#[test]
fn degree_four_region() {
    let r = basecase_region(4);
    assert!(!r.is_empty());
    for x in &r {
        assert!(x.g < 7 && x.n <= 4 && x.k <= 4);
    }
    // every (g′, n′) of the band with a valid degree is present
    for g in 0..7u32 {
        for n in 0..=4usize {
            let expected = (0..=4).any(|k| in_basecase_region(4, t(g, n, k)));
            assert_eq!(r.iter().any(|x| x.g == g && x.n == n), expected);
        }
    }
    assert!(r.iter().any(|x| x.g == 6));
}

#[test]
fn degree_zero_region_is_vacuous() {
    assert!(basecase_region(0).iter().all(|x| x.k == 0 && 4 * x.g as i64 - 4 + x.n as i64 >= 0));
}

#[test]
fn degree_seventeen_region() {
    let pairs = region_pairs(17);
    assert!(pairs.contains(&(1, 17)));
    assert!(pairs.contains(&(2, 14)));
    let outside = [
        t(1, 18, 17), t(2, 18, 17), t(0, 10, 5), t(27, 0, 17), t(30, 3, 17),
        t(1, 5, 3), t(2, 0, 5), t(3, 0, 9), t(5, 0, 17), t(4, 0, 13),
        t(20, 0, 12), t(27, 2, 17), t(1, 12, 11), t(0, 17, 17), t(2, 20, 17),
        t(13, 2, 7), t(10, 0, 5), t(3, 2, 11), t(1, 1, 2), t(2, 3, 9),
    ];
    for x in outside {
        assert!(!in_basecase_region(17, x), "{x}");
        assert!(!exclusion_reasons(x).is_empty(), "{x}");
    }
}

#[test]
fn region_has_no_unstable_points() {
    for k in 0..=20 {
        for x in basecase_region(k) {
            assert!(2 * x.g as i64 - 2 + x.n as i64 > 0);
            assert!(exclusion_reasons(x).is_empty());
        }
    }
}

#[test]
fn region_is_monotone() {
    for k in 0..20 {
        let a = basecase_region(k);
        let b = basecase_region(k + 1);
        assert!(a.is_subset(&b));
        assert!(b.iter().filter(|x| x.k <= k).all(|x| a.contains(x)));
    }
}

#[test]
fn reasons_cover_the_complement() {
    for k in 0..=20u32 {
        for g in 0..=30u32 {
            for n in 0..=30usize {
                for kp in 0..=k {
                    let x = t(g, n, kp);
                    assert_eq!(in_basecase_region(k, x), exclusion_reasons(x).is_empty(), "{x} k={k}");
                }
            }
        }
    }
}

#[test]
fn bfp_examples() {
    assert!(bfp_vanishing(3, 0, 5).unwrap());
    assert!(!bfp_vanishing(1, 11, 11).unwrap());
    assert!(bfp_vanishing(2, 5, 6).unwrap());
    assert!(!bfp_vanishing(2, 5, 7).unwrap());
    assert!(bfp_vanishing(0, 5, 1).is_err());
}

#[test]
fn ckgp_table() {
    assert_eq!(ckgp_known(7, 3), Truth::True);
    assert_eq!(ckgp_known(7, 4), Truth::Unknown);
    assert_eq!(ckgp_known(0, 100), Truth::True);
    assert_eq!(ckgp_known(5, 7), Truth::True);
    assert_eq!(ckgp_known(5, 8), Truth::Unknown);
    assert_eq!(ckgp_known(3, 11), Truth::True);
    assert_eq!(ckgp_known(8, 0), Truth::Unknown);
}

#[test]
fn cusp_dimensions() {
    assert_eq!(cuspform_dim(12), 1);
    assert_eq!(cuspform_dim(16), 1);
    assert_eq!(cuspform_dim(14), 0);
    assert_eq!(cuspform_dim(26), 1);
    assert_eq!(cuspform_dim(24), 2);
    assert_eq!(cuspform_dim(13), 0);
    for m in 0..=400 {
        assert_eq!(cuspform_dim(m), cuspform_dim_by_monomials(m), "m={m}");
    }
}

#[test]
fn genus1_multiplicities() {
    assert_eq!(genus1_pure_multiplicity(11, 11).unwrap(), 1);
    assert_eq!(genus1_pure_multiplicity(11, 12).unwrap(), 11);
    assert_eq!(genus1_pure_multiplicity(15, 15).unwrap(), 1);
    for n in 0..=20 {
        assert_eq!(genus1_pure_multiplicity(13, n).unwrap(), 0);
    }
    for k in 1..=15u32 {
        for n in 1..=20usize {
            let m = genus1_pure_multiplicity(k, n).unwrap();
            let zero = n < k as usize || cuspform_dim(k + 1) == 0;
            assert_eq!(m == 0, zero);
            if !zero {
                assert_eq!(m, binomial_u64(n as u64 - 1, k as u64 - 1));
            }
        }
    }
}

#[test]
fn genus2_parity() {
    assert_eq!(genus2_quotient_vanishes(13), Truth::True);
    assert_eq!(genus2_quotient_vanishes(14), Truth::Unknown);
}

#[test]
fn filling_subspaces() {
    assert!(phi_fills(t(3, 5, 5)));
    assert!(!phi_fills(t(3, 0, 0)));
    assert!(!phi_fills(t(3, 4, 5)));
    assert!(psi_within_phi(t(2, 6, 6)));
    assert_eq!(Subspace::Phi.symbol(t(2, 14, 17)), "Φ^17_{2,14}");
}

#[test]
fn motive_arithmetic() {
    let s = MotivePoly::monomial(0, MotiveSymbol::S12, 1);
    assert_eq!(s.tensor_l(1), MotivePoly::monomial(1, MotiveSymbol::S12, 1));
    let sum = s.add(&s);
    assert_eq!(sum.terms()[&(0, MotiveSymbol::S12)], 2);
    assert_eq!(sum.tensor_l(2).weights().into_iter().collect::<Vec<_>>(), vec![15]);
    assert_eq!(MotivePoly::zero().tensor_l(3), MotivePoly::zero());
}

#[test]
fn motive_shapes() {
    use MotiveSymbol::*;
    let ls12 = MotivePoly::monomial(1, S12, 5);
    for (g, n) in [(1, 13), (2, 11), (3, 4), (5, 0), (1, 20)] {
        assert_eq!(ls12.fits(&motive_shape(g, n, 13).unwrap()), Truth::True);
        assert_eq!(MotivePoly::monomial(0, S12, 1).fits(&motive_shape(g, n, 13).unwrap()), Truth::False);
    }
    for k in (0..=14).step_by(2) {
        assert_eq!(MotivePoly::monomial(k / 2, Unit, 3).fits(&motive_shape(4, 3, k).unwrap()), Truth::True);
    }
    assert!(motive_shape(0, 9, 13).unwrap().is_zero());
    assert_eq!(MotivePoly::monomial(2, S12, 1).fits(&motive_shape(2, 12, 15).unwrap()), Truth::True);
    assert_eq!(MotivePoly::monomial(0, S16, 1).fits(&motive_shape(2, 12, 15).unwrap()), Truth::False);
    assert_eq!(MotivePoly::monomial(0, S16, 1).fits(&motive_shape(1, 15, 15).unwrap()), Truth::True);

    // low codegree by duality
    for (g, n) in [(3, 10), (4, 6), (2, 20)] {
        let d = dim_mgn(g, n) as u32;
        let s = motive_shape(g, n, 2 * d - 13).unwrap();
        assert_eq!(MotivePoly::monomial(d - 12, S12, 2).fits(&s), Truth::True);
        let s = motive_shape(g, n, 2 * d - 14).unwrap();
        assert_eq!(MotivePoly::monomial(d - 7, Unit, 1).fits(&s), Truth::True);
        let s = motive_shape(g, n, 2 * d - 15).unwrap();
        let both = MotivePoly::monomial(d - 13, S12, 1);
        assert_eq!(both.fits(&s), Truth::True);
    }
    let d = dim_mgn(1, 30) as u32;
    let s = motive_shape(1, 30, 2 * d - 15).unwrap();
    let poly = MotivePoly::monomial(d - 13, S12, 4).add(&MotivePoly::monomial(d - 15, S16, 1));
    assert_eq!(poly.fits(&s), Truth::True);
    assert_eq!(motive_shape(6, 10, 21).unwrap(), MotiveShape::Unknown);
}

proptest! {
    #[test]
    fn tensor_l_composes(a in 0u32..10, b in 0u32..10, twist in 0u32..5, m in 1u64..4) {
        let p = MotivePoly::monomial(twist, MotiveSymbol::S12, m).add(&MotivePoly::monomial(twist + 1, MotiveSymbol::Unit, 1));
        prop_assert_eq!(p.tensor_l(a).tensor_l(b), p.tensor_l(a + b));
        prop_assert_eq!(p.add(&p).tensor_l(a), p.tensor_l(a).add(&p.tensor_l(a)));
    }

    #[test]
    fn complement_reasons(g in 0u32..=30, n in 0usize..=30, kp in 0u32..=20, extra in 0u32..=5) {
        let x = Triple::new(g, n, kp);
        prop_assert_eq!(in_basecase_region(kp + extra, x), exclusion_reasons(x).is_empty());
    }
}
