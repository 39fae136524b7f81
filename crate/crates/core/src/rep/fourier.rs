use num_complex::Complex64;

use super::IrrepSet;
use crate::error::{HspError, Result};
use crate::group::GroupTable;
use crate::linalg::{c, CMat, ZERO};

/// One `d_λ × d_λ` block per irrep, aligned with [`IrrepSet::irreps`].
#[derive(Debug, Clone, PartialEq)]
pub struct FourierBlocks {
    pub blocks: Vec<CMat>,
}

impl FourierBlocks {
    pub fn max_abs_diff(&self, other: &FourierBlocks) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| crate::linalg::max_abs_diff(a, b))
            .fold(0.0, f64::max)
    }

    /// Blockwise product.
    pub fn mul(&self, other: &FourierBlocks) -> FourierBlocks {
        FourierBlocks {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a * b).collect(),
        }
    }
}

fn check_len(group: &GroupTable, phi: &[Complex64]) -> Result<()> {
    if phi.len() != group.order() {
        return Err(HspError::DimensionMismatch {
            expected: group.order(),
            found: phi.len(),
        });
    }
    Ok(())
}

/// `π^λ(φ) = Σ_g φ_g π^λ(g)` for every λ.
pub fn fourier_blocks(set: &IrrepSet, phi: &[Complex64]) -> Result<FourierBlocks> {
    check_len(set.group(), phi)?;
    let blocks = set
        .irreps()
        .iter()
        .map(|irrep| {
            let mut acc = CMat::zeros(irrep.dim, irrep.dim);
            for (g, &w) in phi.iter().enumerate() {
                if w != ZERO {
                    acc += irrep.mats[g].map(|x| x * w);
                }
            }
            acc
        })
        .collect();
    Ok(FourierBlocks { blocks })
}

/// `φ_g = Σ_λ (d_λ/|G|) tr(π^λ(g)† Φ^λ)`.
pub fn inverse_fourier(set: &IrrepSet, blocks: &FourierBlocks) -> Result<Vec<Complex64>> {
    if blocks.blocks.len() != set.len() {
        return Err(HspError::DimensionMismatch {
            expected: set.len(),
            found: blocks.blocks.len(),
        });
    }
    let n = set.group().order();
    let mut phi = vec![ZERO; n];
    for (irrep, block) in set.irreps().iter().zip(&blocks.blocks) {
        if block.shape() != (irrep.dim, irrep.dim) {
            return Err(HspError::DimensionMismatch {
                expected: irrep.dim,
                found: block.nrows(),
            });
        }
        let weight = irrep.dim as f64 / n as f64;
        for (g, slot) in phi.iter_mut().enumerate() {
            // tr(A† B) = Σ conj(A_ij) B_ij
            let t: Complex64 = irrep.mats[g]
                .iter()
                .zip(block.iter())
                .map(|(a, b)| a.conj() * b)
                .sum();
            *slot += t * weight;
        }
    }
    Ok(phi)
}

/// Matrix of the right regular action `R(φ) = Σ_z φ_z R(z)`, with
/// `R(z)|g⟩ = |g z⁻¹⟩`. Entry `(a, b)` equals `φ_{a⁻¹ b}`.
pub fn regular_rep(group: &GroupTable, phi: &[Complex64]) -> Result<CMat> {
    check_len(group, phi)?;
    let n = group.order();
    Ok(CMat::from_fn(n, n, |a, b| phi[group.mul(group.inv(a), b)]))
}

/// Matrix of the left regular action `L(φ) = Σ_z φ_z L(z)`, with
/// `L(z)|g⟩ = |z g⟩`. Entry `(a, b)` equals `φ_{a b⁻¹}`.
pub fn left_regular_rep(group: &GroupTable, phi: &[Complex64]) -> Result<CMat> {
    check_len(group, phi)?;
    let n = group.order();
    Ok(CMat::from_fn(n, n, |a, b| phi[group.mul(a, group.inv(b))]))
}

/// Group-algebra convolution `(φ ★ ψ)(g) = Σ_h φ_h ψ_{h⁻¹ g}`.
pub fn convolve(group: &GroupTable, phi: &[Complex64], psi: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(group, phi)?;
    check_len(group, psi)?;
    let n = group.order();
    let mut out = vec![ZERO; n];
    for h in 0..n {
        if phi[h] == ZERO {
            continue;
        }
        for k in 0..n {
            out[group.mul(h, k)] += phi[h] * psi[k];
        }
    }
    Ok(out)
}

/// Unitary change of basis `U` with `U† R(z) U = ⊕_λ I_{d_λ} ⊗ π^λ(z)`.
///
/// Columns are `√(d_λ/|G|) π^λ(·)_{ij}` ordered by λ, then row `i`
/// (the multiplicity index), then column `j`.
pub fn block_basis(set: &IrrepSet) -> CMat {
    let n = set.group().order();
    let mut u = CMat::zeros(n, n);
    let mut col = 0;
    for irrep in set.irreps() {
        let scale = c((irrep.dim as f64 / n as f64).sqrt(), 0.0);
        for i in 0..irrep.dim {
            for j in 0..irrep.dim {
                for g in 0..n {
                    u[(g, col)] = irrep.mats[g][(i, j)] * scale;
                }
                col += 1;
            }
        }
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, subgroup_closure};
    use crate::linalg::{block_diag, identity, max_abs_diff, random_complex_gaussian, ONE};
    use crate::rep::{h_invariant_projector, irrep_set};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn set(s: &str) -> IrrepSet {
        irrep_set(&build_group(&s.parse().unwrap()).unwrap()).unwrap()
    }

    fn random_vec(n: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| random_complex_gaussian(&mut rng)).collect()
    }

    fn delta(n: usize, g: usize) -> Vec<Complex64> {
        let mut v = vec![ZERO; n];
        v[g] = ONE;
        v
    }

    #[test]
    fn delta_identity_gives_identity_blocks() {
        let s = set("symmetric:3");
        let fb = fourier_blocks(&s, &delta(6, 0)).unwrap();
        for (b, irrep) in fb.blocks.iter().zip(s.irreps()) {
            assert!(max_abs_diff(b, &identity(irrep.dim)) < 1e-15);
        }
        assert!(max_abs_diff(&regular_rep(s.group(), &delta(6, 0)).unwrap(), &identity(6)) == 0.0);
    }

    #[test]
    fn uniform_vector_hits_only_the_trivial_block() {
        let s = set("dihedral:4");
        let phi = vec![c(1.0 / 8.0, 0.0); 8];
        let fb = fourier_blocks(&s, &phi).unwrap();
        assert!((fb.blocks[0][(0, 0)] - ONE).norm() < 1e-15);
        for b in &fb.blocks[1..] {
            assert!(b.iter().all(|x| x.norm() < 1e-15));
        }
    }

    #[test]
    fn subgroup_average_gives_invariant_projectors() {
        let s = set("symmetric:3");
        let g = s.group();
        let h = subgroup_closure(g, &g.parse_generators("(12)").unwrap()).unwrap();
        let mut phi = vec![ZERO; 6];
        for &x in h.elements() {
            phi[x] = c(0.5, 0.0);
        }
        let fb = fourier_blocks(&s, &phi).unwrap();
        for (b, irrep) in fb.blocks.iter().zip(s.irreps()) {
            assert!(max_abs_diff(b, &h_invariant_projector(irrep, &h)) < 1e-15);
        }
    }

    #[test]
    fn delta_z_is_the_right_translation_permutation() {
        let g = build_group(&"symmetric:3".parse().unwrap()).unwrap();
        for z in g.elements() {
            let r = regular_rep(&g, &delta(6, z)).unwrap();
            for x in g.elements() {
                // R(z)|x⟩ = |x z⁻¹⟩
                for y in g.elements() {
                    let expected = if y == g.mul(x, g.inv(z)) { 1.0 } else { 0.0 };
                    assert_eq!(r[(y, x)], c(expected, 0.0));
                }
            }
        }
    }

    #[test]
    fn block_basis_diagonalizes_the_regular_rep() {
        for spec in ["symmetric:3", "dihedral:4", "product:cyclic:2,symmetric:3"] {
            let s = set(spec);
            let n = s.group().order();
            let u = block_basis(&s);
            assert!(max_abs_diff(&(u.adjoint() * &u), &identity(n)) < 1e-12, "{spec}");
            let phi = random_vec(n, 17);
            let fb = fourier_blocks(&s, &phi).unwrap();
            let mut blocks = Vec::new();
            for (b, irrep) in fb.blocks.iter().zip(s.irreps()) {
                for _ in 0..irrep.dim {
                    blocks.push(b.clone());
                }
            }
            let diag = u.adjoint() * regular_rep(s.group(), &phi).unwrap() * &u;
            assert!(max_abs_diff(&diag, &block_diag(&blocks)) < 1e-12, "{spec}");
        }
    }

    #[test]
    fn round_trip_and_convolution() {
        let s = set("dihedral:5");
        let g = s.group();
        let phi = random_vec(10, 1);
        let psi = random_vec(10, 2);
        let back = inverse_fourier(&s, &fourier_blocks(&s, &phi).unwrap()).unwrap();
        assert!(phi.iter().zip(&back).all(|(a, b)| (a - b).norm() < 1e-12));
        let conv = convolve(g, &phi, &psi).unwrap();
        let lhs = fourier_blocks(&s, &conv).unwrap();
        let rhs = fourier_blocks(&s, &phi).unwrap().mul(&fourier_blocks(&s, &psi).unwrap());
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        let r = regular_rep(g, &phi).unwrap() * regular_rep(g, &psi).unwrap();
        assert!(max_abs_diff(&r, &regular_rep(g, &conv).unwrap()) < 1e-12);
    }

    #[test]
    fn right_and_left_actions_commute() {
        let g = build_group(&"symmetric:4".parse().unwrap()).unwrap();
        let r = regular_rep(&g, &random_vec(24, 4)).unwrap();
        for z in g.elements() {
            let l = left_regular_rep(&g, &delta(24, z)).unwrap();
            assert!(max_abs_diff(&(&l * &r), &(&r * &l)) < 1e-12);
        }
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let s = set("cyclic:3");
        assert!(fourier_blocks(&s, &[ONE; 2]).is_err());
        assert!(regular_rep(s.group(), &[ONE; 4]).is_err());
    }
}
