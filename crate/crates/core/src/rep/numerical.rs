//! Irreps by isotypic decomposition of the right regular representation.
//!
//! A random Hermitian matrix averaged over conjugation by all right
//! translations lands in the commutant of `R`, which is `L(C[G])`. Its
//! eigenspaces are `R`-invariant, and for a generic draw each eigenspace
//! carries exactly one irreducible copy. Restricting `R` to an orthonormal
//! basis of each eigenspace gives unitary irreps directly; one eigenspace per
//! character class is kept.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Irrep;
use crate::error::{HspError, Result};
use crate::group::GroupTable;
use crate::linalg::{hermitian_eigen, random_hermitian, CMat};

/// Eigenvalues closer than this (relative to the spectral scale) are one cluster.
const CLUSTER_GAP: f64 = 1e-7;
/// Largest tolerated leakage of `R(z)` out of an eigenspace.
const RESIDUAL_TOLERANCE: f64 = 1e-7;

pub fn decompose_regular(group: &GroupTable, seed: u64) -> Result<Vec<Irrep>> {
    let n = group.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_hermitian(n, &mut rng);

    // Ā_{x,y} = (1/n) Σ_z A_{xz, yz}
    let mut avg = CMat::zeros(n, n);
    for z in 0..n {
        for x in 0..n {
            let xz = group.mul(x, z);
            for y in 0..n {
                avg[(x, y)] += a[(xz, group.mul(y, z))];
            }
        }
    }
    avg /= Complex64::new(n as f64, 0.0);

    let eig = hermitian_eigen(&avg);
    let scale = eig
        .values
        .iter()
        .fold(1.0f64, |m, v| m.max(v.abs()));

    let mut clusters: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=n {
        if i == n || eig.values[i] - eig.values[i - 1] > CLUSTER_GAP * scale {
            clusters.push((start, i));
            start = i;
        }
    }

    struct Candidate {
        irrep: Irrep,
        character: Vec<Complex64>,
    }
    let mut classes: Vec<(Candidate, usize)> = Vec::new();
    for (lo, hi) in clusters {
        let d = hi - lo;
        if d * d > n {
            return Err(HspError::DecompositionFailure(format!(
                "eigenspace of dimension {d} cannot be irreducible for |G| = {n}"
            )));
        }
        let basis = eig.vectors.columns(lo, d).into_owned();
        let basis_dag = basis.adjoint();
        let mut mats = Vec::with_capacity(n);
        let mut residual: f64 = 0.0;
        for z in 0..n {
            // (R(z) V)_g = V_{g z}
            let moved = CMat::from_fn(n, d, |g, j| basis[(group.mul(g, z), j)]);
            let pi = &basis_dag * &moved;
            let leak = &moved - &basis * &pi;
            residual = residual.max(leak.iter().map(|x| x.norm()).fold(0.0, f64::max));
            mats.push(pi);
        }
        if residual > RESIDUAL_TOLERANCE {
            return Err(HspError::DecompositionFailure(format!(
                "off-block mass {residual:.3e} exceeds {RESIDUAL_TOLERANCE:.0e}"
            )));
        }
        let character: Vec<Complex64> = mats.iter().map(|m| m.trace()).collect();
        let norm: f64 = character.iter().map(|x| x.norm_sqr()).sum::<f64>() / n as f64;
        if (norm - 1.0).abs() > 1e-6 {
            return Err(HspError::DecompositionFailure(format!(
                "eigenspace of dimension {d} is reducible (⟨χ,χ⟩ = {norm:.6})"
            )));
        }
        match classes.iter_mut().find(|(cand, _)| {
            cand.irrep.dim == d
                && cand
                    .character
                    .iter()
                    .zip(&character)
                    .all(|(x, y)| (x - y).norm() < 1e-6)
        }) {
            Some((_, count)) => *count += 1,
            None => classes.push((
                Candidate {
                    irrep: Irrep { label: 0, dim: d, mats },
                    character,
                },
                1,
            )),
        }
    }

    let total: usize = classes.iter().map(|(c, _)| c.irrep.dim * c.irrep.dim).sum();
    if total != n || classes.iter().any(|(c, count)| *count != c.irrep.dim) {
        return Err(HspError::DecompositionFailure(format!(
            "isotypic multiplicities inconsistent (Σd² = {total}, |G| = {n})"
        )));
    }
    Ok(classes.into_iter().map(|(c, _)| c.irrep).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group;

    #[test]
    fn s5_decomposes() {
        let g = build_group(&"symmetric:5".parse().unwrap()).unwrap();
        let irreps = decompose_regular(&g, 0).unwrap();
        let mut dims: Vec<usize> = irreps.iter().map(|r| r.dim).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 1, 4, 4, 5, 5, 6]);
    }

    #[test]
    fn same_seed_same_output() {
        let g = build_group(&"symmetric:3".parse().unwrap()).unwrap();
        assert_eq!(decompose_regular(&g, 9).unwrap(), decompose_regular(&g, 9).unwrap());
    }
}
