use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{HspError, Result};

/// Largest number of injections a full enumeration will produce.
pub const ENUMERATION_CAP: u128 = 1_000_000;

/// An oracle function hiding the `k`-th family member, as the injection
/// `γ` from coset labels into `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleFunction {
    pub k: usize,
    pub gamma: Vec<usize>,
}

impl OracleFunction {
    pub fn new(k: usize, gamma: Vec<usize>, d: usize) -> Result<Self> {
        let mut seen = vec![false; d];
        for &x in &gamma {
            if x >= d {
                return Err(HspError::OutOfRange(format!("γ value {x} ≥ D = {d}")));
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(HspError::OutOfRange(format!("γ is not injective (repeats {x})")));
            }
        }
        Ok(OracleFunction { k, gamma })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    Full,
    Sample { count: usize, seed: u64 },
}

/// `D!/(D−N)!`, saturating.
pub fn injection_count(d: usize, n: usize) -> u128 {
    if n > d {
        return 0;
    }
    ((d - n + 1)..=d).fold(1u128, |acc, x| acc.saturating_mul(x as u128))
}

/// Injections `{0..n} → {0..d}` as index lists.
pub fn enumerate_oracles(d: usize, n: usize, mode: OracleMode) -> Result<Vec<Vec<usize>>> {
    if n > d {
        return Err(HspError::ResponseTooSmall { d, index: n });
    }
    match mode {
        OracleMode::Full => {
            let count = injection_count(d, n);
            if count > ENUMERATION_CAP {
                return Err(HspError::EnumerationCap {
                    count,
                    cap: ENUMERATION_CAP,
                });
            }
            let mut out = Vec::with_capacity(count as usize);
            let mut current = Vec::with_capacity(n);
            let mut used = vec![false; d];
            extend_lex(d, n, &mut current, &mut used, &mut out);
            Ok(out)
        }
        OracleMode::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut perm: Vec<usize> = (0..d).collect();
            Ok((0..count)
                .map(|_| {
                    for i in 0..n {
                        let j = rng.gen_range(i..d);
                        perm.swap(i, j);
                    }
                    perm[..n].to_vec()
                })
                .collect())
        }
    }
}

fn extend_lex(
    d: usize,
    n: usize,
    current: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    if current.len() == n {
        out.push(current.clone());
        return;
    }
    for x in 0..d {
        if !used[x] {
            used[x] = true;
            current.push(x);
            extend_lex(d, n, current, used, out);
            current.pop();
            used[x] = false;
        }
    }
}
