//! Pairing-matrix assembly, parallel over row blocks; the result is
//! independent of the thread count.

use rayon::prelude::*;
use strata_core::linalg::{rank_multimodular, RankCertificate, SparseRow};
use strata_core::omega::{omega_pairing_rows, tails_pairing_rows, OmegaClass, TailsClass};

use crate::og::Item;

const BLOCK: usize = 64;

/// Rows of the pairing matrix `rows × cols` under the sign convention `epsilon`.
pub fn pairing_rows(rows: &[Item], cols: &[Item], epsilon: i32) -> Result<Vec<SparseRow>, String> {
    let tails = || -> Option<(Vec<TailsClass>, Vec<TailsClass>)> {
        Some((rows.iter().map(Item::to_tails).collect::<Option<_>>()?, cols.iter().map(Item::to_tails).collect::<Option<_>>()?))
    };
    let blocks: Vec<Result<Vec<SparseRow>, String>> = if let Some((r, c)) = tails() {
        r.par_chunks(BLOCK).map(|b| tails_pairing_rows(b, &c, epsilon).map_err(|e| e.to_string())).collect()
    } else {
        let r: Vec<OmegaClass> = rows.iter().map(Item::to_omega).collect::<Result<_, _>>()?;
        let c: Vec<OmegaClass> = cols.iter().map(Item::to_omega).collect::<Result<_, _>>()?;
        r.par_chunks(BLOCK).map(|b| omega_pairing_rows(b, &c, epsilon).map_err(|e| e.to_string())).collect()
    };
    let mut out = Vec::with_capacity(rows.len());
    for b in blocks {
        out.extend(b?);
    }
    Ok(out)
}

/// Certified rank of the pairing matrix.
pub fn pairing_rank(rows: &[Item], cols: &[Item], epsilon: i32, primes: &[u64]) -> Result<RankCertificate, String> {
    let m = pairing_rows(rows, cols, epsilon)?;
    Ok(rank_multimodular(&m, cols.len(), primes))
}
