use serde::Serialize;

use super::IrrepSet;
use crate::linalg::{hermitian_eigen, max_abs_diff};

/// Defects of a candidate irrep set; all zero for an exact complete set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub max_unitarity_defect: f64,
    pub max_homomorphism_defect: f64,
    pub max_schur_defect: f64,
    pub dimension_sum: usize,
    pub group_order: usize,
    pub has_trivial_first: bool,
}

impl ValidationReport {
    pub fn dimension_sum_ok(&self) -> bool {
        self.dimension_sum == self.group_order
    }

    pub fn passes(&self, tolerance: f64) -> bool {
        self.dimension_sum_ok()
            && self.has_trivial_first
            && self.max_unitarity_defect <= tolerance
            && self.max_homomorphism_defect <= tolerance
            && self.max_schur_defect <= tolerance
    }
}

/// Exhaustive check of unitarity (largest singular-value deviation from 1), the homomorphism property, Schur
/// orthogonality of matrix coefficients and `Σ d_λ² = |G|`.
pub fn verify_irrep_set(set: &IrrepSet) -> ValidationReport {
    let group = set.group();
    let n = group.order();
    let mut unitarity: f64 = 0.0;
    let mut homomorphism: f64 = 0.0;
    for irrep in set.irreps() {
        for m in &irrep.mats {
            // largest |σ - 1| over singular values
            let gram = hermitian_eigen(&(m.adjoint() * m));
            for v in gram.values {
                unitarity = unitarity.max((v.max(0.0).sqrt() - 1.0).abs());
            }
        }
        for a in 0..n {
            for b in 0..n {
                let lhs = &irrep.mats[a] * &irrep.mats[b];
                homomorphism = homomorphism.max(max_abs_diff(&lhs, &irrep.mats[group.mul(a, b)]));
            }
        }
    }

    // Σ_g conj(π^λ_ij(g)) π^μ_kl(g) = (|G|/d_λ) δ_λμ δ_ik δ_jl
    let mut schur: f64 = 0.0;
    let irreps = set.irreps();
    for (li, lam) in irreps.iter().enumerate() {
        for (mi, mu) in irreps.iter().enumerate().skip(li) {
            for i in 0..lam.dim {
                for j in 0..lam.dim {
                    for k in 0..mu.dim {
                        for l in 0..mu.dim {
                            let s: num_complex::Complex64 = (0..n)
                                .map(|g| lam.mats[g][(i, j)].conj() * mu.mats[g][(k, l)])
                                .sum();
                            let expected = if li == mi && i == k && j == l {
                                n as f64 / lam.dim as f64
                            } else {
                                0.0
                            };
                            schur = schur.max((s - expected).norm() / n as f64);
                        }
                    }
                }
            }
        }
    }

    ValidationReport {
        max_unitarity_defect: unitarity,
        max_homomorphism_defect: homomorphism,
        max_schur_defect: schur,
        dimension_sum: irreps.iter().map(|r| r.dim * r.dim).sum(),
        group_order: n,
        has_trivial_first: irreps.first().is_some_and(|r| r.is_trivial()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group;
    use crate::linalg::c;
    use crate::rep::irrep_set;

    fn s3() -> IrrepSet {
        irrep_set(&build_group(&"symmetric:3".parse().unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn valid_set_has_tiny_defects() {
        let r = verify_irrep_set(&s3());
        assert!(r.passes(1e-9), "{r:?}");
    }

    #[test]
    fn scaled_matrix_is_a_unitarity_fault() {
        let mut s = s3();
        s.irreps_mut()[1].mats[3] *= c(2.0, 0.0);
        let r = verify_irrep_set(&s);
        assert!((r.max_unitarity_defect - 1.0).abs() < 1e-12);
        assert!(!r.passes(1e-9));
    }

    #[test]
    fn missing_irrep_fails_dimension_sum() {
        let mut s = s3();
        s.irreps_mut().pop();
        let r = verify_irrep_set(&s);
        assert_eq!(r.dimension_sum, 2);
        assert!(!r.dimension_sum_ok());
    }
}
