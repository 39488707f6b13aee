use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strata_core::integrals::*;
use strata_core::rational::{q, qi, Q};

#[test]
fn base_values_agree_on_both_paths() {
    for (g, a, v) in [(0, vec![0, 0, 0], qi(1)), (1, vec![1], q(1, 24)), (2, vec![4], q(1, 1152))] {
        assert_eq!(psi_integral(g, &a), v);
        assert_eq!(psi_integral_dvv(g, &a), v);
        assert_eq!(psi_integral_reduction(g, &a), Some(v));
    }
}

#[test]
fn genus2_from_two_points_by_reduction() {
    // ⟨τ₄τ₁⟩₂ = 3⟨τ₄⟩₂ and ⟨τ₀τ₅⟩₂ = ⟨τ₄⟩₂
    assert_eq!(psi_integral_reduction(2, &[4, 1]), Some(q(3, 1152)));
    assert_eq!(psi_integral_reduction(2, &[0, 5]), Some(q(1, 1152)));
    assert_eq!(psi_integral_dvv(2, &[4, 1]), q(3, 1152));
    assert_eq!(psi_integral_dvv(2, &[3, 2]), q(29, 5760));
}

#[test]
fn genus0_closed_form_matches_recursion() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let n = rng.gen_range(3..=9);
        let mut a = vec![0u32; n];
        for _ in 0..n - 3 {
            let i = rng.gen_range(0..n);
            a[i] += 1;
        }
        let closed = genus0_closed_form(&a);
        assert_eq!(psi_integral_dvv(0, &a), closed);
        assert_eq!(psi_integral_reduction(0, &a), Some(closed.clone()));
        assert_eq!(psi_integral(0, &a), closed);
    }
}

#[test]
fn off_degree_and_unstable_are_zero() {
    assert!(psi_integral(1, &[2]).is_zero());
    assert!(psi_integral(0, &[0, 0]).is_zero());
}

#[test]
fn kappa_examples() {
    let k1 = KappaMonomial::from_sorted(vec![1]);
    assert_eq!(kappa_psi_integral(1, &[0], &k1), q(1, 24));
    assert_eq!(kappa_psi_integral(0, &[0, 0, 0, 0], &k1), qi(1));
    assert_eq!(kappa_psi_integral(1, &[1], &KappaMonomial::default()), q(1, 24));
    // κ₀ is a scalar
    let (c, m) = KappaMonomial::new(vec![0, 2], 1, 3);
    assert_eq!((c, m.indices().to_vec()), (qi(3), vec![2]));
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut p: Vec<usize> = (0..m).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out
}

/// π_*(∏ ψ_{n+i}^{bᵢ+1}) = Σ_{σ ∈ S_m} ∏_{cycles c} κ_{Σ_{i∈c} bᵢ}.
fn kappa_by_permutations(g: u32, psi: &[u32], b: &[u32]) -> (Q, Q) {
    let mut ext = psi.to_vec();
    ext.extend(b.iter().map(|x| x + 1));
    let lhs = psi_integral(g, &ext);
    let mut rhs = Q::zero();
    for sigma in permutations(b.len()) {
        let mut seen = vec![false; b.len()];
        let mut ks = vec![];
        for s in 0..b.len() {
            if seen[s] {
                continue;
            }
            let mut c = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                c += b[x];
                x = sigma[x];
            }
            ks.push(c);
        }
        ks.sort();
        rhs += kappa_psi_integral(g, psi, &KappaMonomial::from_sorted(ks));
    }
    (lhs, rhs)
}

#[test]
fn kappa_dictionary_by_permutation_sum() {
    for (g, psi, b) in [
        (0, vec![0, 0, 0, 0, 0], vec![1, 1]),
        (0, vec![0, 0, 0, 0, 0, 0], vec![1, 1, 1]),
        (1, vec![0, 0], vec![1, 1]),
        (1, vec![1], vec![1]),
        (2, vec![], vec![1, 2]),
        (2, vec![1], vec![1, 1, 1]),
        (1, vec![0, 0, 0], vec![1, 2]),
    ] {
        let (l, r) = kappa_by_permutations(g, &psi, &b);
        assert_eq!(l, r, "g={g} psi={psi:?} b={b:?}");
    }
}

fn monomial_with(extra: usize) -> impl Strategy<Value = (u32, Vec<u32>)> {
    (0u32..=2, 1usize..=6).prop_flat_map(move |(g, n)| {
        let n = if g == 0 { n.max(3) } else { n };
        let d = 3 * g as usize + n - 3 + extra;
        proptest::collection::vec(0..n, d).prop_map(move |slots| {
            let mut a = vec![0u32; n];
            for s in slots {
                a[s] += 1;
            }
            (g, a)
        })
    })
}

fn monomial() -> impl Strategy<Value = (u32, Vec<u32>)> {
    monomial_with(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn string_equation((g, a) in monomial_with(1)) {
        let mut ext = a.clone();
        ext.push(0);
        let mut rhs = Q::zero();
        for j in 0..a.len() {
            if a[j] > 0 {
                let mut c = a.clone();
                c[j] -= 1;
                rhs += psi_integral(g, &c);
            }
        }
        prop_assert_eq!(psi_integral(g, &ext), rhs);
    }

    #[test]
    fn dilaton_equation((g, a) in monomial()) {
        let mut ext = a.clone();
        ext.push(1);
        let lhs = psi_integral(g, &ext);
        let rhs = qi(2 * g as i64 - 2 + a.len() as i64) * psi_integral(g, &a);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn symmetric_in_exponents((g, mut a) in monomial(), seed in 0u64..1000) {
        let v = psi_integral(g, &a);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..a.len()).rev() {
            let j = rng.gen_range(0..=i);
            a.swap(i, j);
        }
        prop_assert_eq!(psi_integral(g, &a), v.clone());
        prop_assert_eq!(psi_integral_dvv(g, &a), v);
    }
}
