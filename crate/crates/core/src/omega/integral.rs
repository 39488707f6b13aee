use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use num_traits::{One, Zero};
use spin::{Lazy, RwLock};

use crate::integrals::kappa_psi_raw;
use crate::rational::{sort_sign, Q};

/// A flag of a genus-1 vertex carrying both ω-slots: its position in the
/// ordered subset S of the holomorphic slot, in T of the antiholomorphic
/// slot, and its ψ exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OmegaFlag {
    pub s: Option<u8>,
    pub t: Option<u8>,
    pub psi: u32,
}

impl OmegaFlag {
    pub fn new(s: Option<u8>, t: Option<u8>, psi: u32) -> Self {
        OmegaFlag { s, t, psi }
    }
    fn kind(&self) -> u8 {
        match (self.s, self.t) {
            (Some(_), Some(_)) => 0,
            (Some(_), None) => 1,
            (None, Some(_)) => 2,
            (None, None) => 3,
        }
    }
}

type Key = (Vec<(u8, u32)>, Vec<u32>);

static MEMO: Lazy<RwLock<HashMap<Key, Q>>> = Lazy::new(|| RwLock::new(HashMap::new()));

/// `∫_{M̄_{1,m}} f_S^*ω · f_T^*ω̌ · ∏ψ_f^{a_f} · κ_B`, normalized so that
/// `∫_{M̄_{1,11}} ω · ω̌ = 1`.
///
/// Flags outside S and T are handled like any other: every ψ is rewritten
/// through the genus-1 relation ψ_i = λ + Σ_{i ∈ I} δ_{0,I}; λ and the
/// irreducible boundary kill ω, and on δ_{0,I} each ω-slot survives only
/// when the rational tail holds at most one of its flags (which the node
/// then replaces). κ-classes without ψ are traded for ψ at an extra flag.
pub fn omega_vertex_integral(flags: &[OmegaFlag], kappa: &[u32]) -> Q {
    let m = flags.len();
    let ns = flags.iter().filter(|f| f.s.is_some()).count();
    let nt = flags.iter().filter(|f| f.t.is_some()).count();
    let deg: u32 = flags.iter().map(|f| f.psi).sum::<u32>() + kappa.iter().sum::<u32>();
    if ns != 11 || nt != 11 || deg as usize + 11 != m {
        return Q::zero();
    }
    let mut idx: Vec<usize> = (0..m).collect();
    idx.sort_by_key(|&i| (flags[i].kind(), flags[i].psi));
    // exchanging two interchangeable flags of a single slot flips its sign
    for w in idx.windows(2) {
        let (a, b) = (&flags[w[0]], &flags[w[1]]);
        if a.kind() == b.kind() && a.psi == b.psi && (a.kind() == 1 || a.kind() == 2) {
            return Q::zero();
        }
    }
    let sseq: Vec<u8> = idx.iter().filter_map(|&i| flags[i].s).collect();
    let tseq: Vec<u8> = idx.iter().filter_map(|&i| flags[i].t).collect();
    let sign = sort_sign(&sseq) * sort_sign(&tseq);
    let mut k = kappa.to_vec();
    k.sort_unstable();
    let key: Key = (idx.iter().map(|&i| (flags[i].kind(), flags[i].psi)).collect(), k);
    if let Some(v) = MEMO.read().get(&key) {
        return if sign < 0 { -v.clone() } else { v.clone() };
    }
    let v = compute(&key);
    MEMO.write().insert(key, v.clone());
    if sign < 0 {
        -v
    } else {
        v
    }
}

fn compute((types, kappa): &Key) -> Q {
    let (mut si, mut ti) = (0u8, 0u8);
    let flags: Vec<OmegaFlag> = types
        .iter()
        .map(|&(kind, psi)| {
            let s = (kind <= 1).then(|| {
                si += 1;
                si - 1
            });
            let t = (kind == 0 || kind == 2).then(|| {
                ti += 1;
                ti - 1
            });
            OmegaFlag { s, t, psi }
        })
        .collect();
    let m = flags.len();
    let deg: u32 = flags.iter().map(|f| f.psi).sum::<u32>() + kappa.iter().sum::<u32>();
    if deg == 0 {
        return if m == 11 && flags.iter().all(|f| f.kind() == 0) { Q::one() } else { Q::zero() };
    }
    let Some(i) = flags.iter().position(|f| f.psi > 0) else {
        // κ_b κ_B = π_*(ψ_p^{b+1} ∏ (κ_c − ψ_p^c)) with p outside both slots
        let (b, rest) = (kappa[0], &kappa[1..]);
        let mut acc = Q::zero();
        for mask in 0u64..(1u64 << rest.len()) {
            let mut e = b + 1;
            let mut left = Vec::new();
            for (j, &c) in rest.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    e += c;
                } else {
                    left.push(c);
                }
            }
            let mut fl = flags.clone();
            fl.push(OmegaFlag::new(None, None, e));
            let v = omega_vertex_integral(&fl, &left);
            if mask.count_ones() % 2 == 0 {
                acc += v;
            } else {
                acc -= v;
            }
        }
        return acc;
    };
    let mut fl = flags.clone();
    fl[i].psi -= 1;
    let others: Vec<usize> = (0..m).filter(|&j| j != i).collect();
    let max_extra = (deg as usize).min(m - 1);
    let mut acc = Q::zero();
    let mut chosen = vec![i];
    subsets(&fl, &others, 0, max_extra, &mut chosen, &mut |tail: &[usize]| {
        let in_tail = |j: usize| tail.contains(&j);
        let s_here: Vec<u8> = tail.iter().filter_map(|&j| fl[j].s).collect();
        let t_here: Vec<u8> = tail.iter().filter_map(|&j| fl[j].t).collect();
        let mut exps0: Vec<u32> = tail.iter().map(|&j| fl[j].psi).collect();
        exps0.push(0);
        let mut side1: Vec<OmegaFlag> = (0..m).filter(|&j| !in_tail(j)).map(|j| fl[j]).collect();
        side1.push(OmegaFlag::new(s_here.first().copied(), t_here.first().copied(), 0));
        for mask in 0u64..(1u64 << kappa.len()) {
            let (mut k0, mut k1) = (Vec::new(), Vec::new());
            for (j, &c) in kappa.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    k0.push(c);
                } else {
                    k1.push(c);
                }
            }
            let v0 = kappa_psi_raw(0, &exps0, &k0);
            if v0.is_zero() {
                continue;
            }
            acc += v0 * omega_vertex_integral(&side1, &k1);
        }
    });
    acc
}

/// Rational tails through flag `chosen[0]`: extend by at most `room` more
/// flags, at most one from each slot.
fn subsets(fl: &[OmegaFlag], others: &[usize], from: usize, room: usize, chosen: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if chosen.len() >= 2 {
        f(chosen);
    }
    if room == 0 {
        return;
    }
    for k in from..others.len() {
        let j = others[k];
        let s_clash = fl[j].s.is_some() && chosen.iter().any(|&c| fl[c].s.is_some());
        let t_clash = fl[j].t.is_some() && chosen.iter().any(|&c| fl[c].t.is_some());
        if s_clash || t_clash {
            continue;
        }
        chosen.push(j);
        subsets(fl, others, k + 1, room - 1, chosen, f);
        chosen.pop();
    }
}
