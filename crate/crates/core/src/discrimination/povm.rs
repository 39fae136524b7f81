use rand::Rng;

use crate::error::{HspError, Result};
use crate::group::GroupTable;
use crate::linalg::{
    c, block_diag, hermitian_defect, hermitian_part, identity, inv_sqrt_on_support, max_abs_diff,
    min_eigenvalue, random_psd, CMat,
};
use crate::rep::{block_basis, inverse_fourier, regular_rep, FourierBlocks, IrrepSet};

pub const POVM_TOLERANCE: f64 = 1e-9;

fn validate_elements(elements: &[CMat], dim: usize) -> Result<()> {
    if elements.is_empty() {
        return Err(HspError::InvalidPovm("no elements".into()));
    }
    let mut sum = CMat::zeros(dim, dim);
    for (k, e) in elements.iter().enumerate() {
        if e.shape() != (dim, dim) {
            return Err(HspError::DimensionMismatch {
                expected: dim,
                found: e.nrows(),
            });
        }
        let herm = hermitian_defect(e);
        if herm > POVM_TOLERANCE {
            return Err(HspError::InvalidPovm(format!("element {k} has Hermitian defect {herm:e}")));
        }
        let low = min_eigenvalue(e);
        if low < -POVM_TOLERANCE {
            return Err(HspError::InvalidPovm(format!("element {k} has eigenvalue {low:e}")));
        }
        sum += e;
    }
    let defect = max_abs_diff(&sum, &identity(dim));
    if defect > POVM_TOLERANCE {
        return Err(HspError::InvalidPovm(format!("elements sum to I only within {defect:e}")));
    }
    Ok(())
}

/// A measurement on `C[G]`; outcome `k` names the `k`-th family member.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    elements: Vec<CMat>,
}

impl Povm {
    pub fn new(elements: Vec<CMat>) -> Result<Self> {
        let dim = elements.first().map_or(0, |e| e.nrows());
        validate_elements(&elements, dim)?;
        Ok(Povm { elements })
    }

    pub fn elements(&self) -> &[CMat] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.elements[0].nrows()
    }

    /// `K`.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// `T_k = I/K`.
pub fn trivial_povm(dim: usize, k: usize) -> Result<Povm> {
    if k == 0 {
        return Err(HspError::InvalidPovm("K must be at least 1".into()));
    }
    let e = identity(dim) * c(1.0 / k as f64, 0.0);
    Povm::new(vec![e; k])
}

/// `S^{-1/2} A_k S^{-1/2}` for random PSD `A_k` with sum `S`.
pub fn random_povm<R: Rng + ?Sized>(dim: usize, k: usize, rng: &mut R) -> Result<Povm> {
    let parts: Vec<CMat> = (0..k).map(|_| random_psd(dim, rng)).collect();
    let sum = parts.iter().fold(CMat::zeros(dim, dim), |acc, a| acc + a);
    let (t, _) = inv_sqrt_on_support(&sum, 0.0);
    Povm::new(parts.iter().map(|a| hermitian_part(&(&t * a * &t))).collect())
}

/// `E_k ↦ (1/|G|) Σ_z L(z) E_k L(z)†`.
pub fn povm_twirl(group: &GroupTable, povm: &Povm) -> Result<Povm> {
    let n = group.order();
    if povm.dim() != n {
        return Err(HspError::DimensionMismatch {
            expected: n,
            found: povm.dim(),
        });
    }
    let scale = c(1.0 / n as f64, 0.0);
    let elements = povm
        .elements
        .iter()
        .map(|e| {
            let mut acc = CMat::zeros(n, n);
            for z in group.elements() {
                let zi = group.inv(z);
                // (L E L†)_{a,b} = E_{z⁻¹a, z⁻¹b}
                let moved = CMat::from_fn(n, n, |a, b| e[(group.mul(zi, a), group.mul(zi, b))]);
                acc += moved;
            }
            hermitian_part(&(acc * scale))
        })
        .collect();
    Povm::new(elements)
}

/// A measurement in Fourier form, `E_k ≅ ⊕_λ I ⊗ E^λ_k`; indexed `[k][λ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockPovm {
    elements: Vec<Vec<CMat>>,
}

impl BlockPovm {
    /// Validates each λ separately against the irrep dimensions.
    pub fn new(dims: &[usize], elements: Vec<Vec<CMat>>) -> Result<Self> {
        if elements.is_empty() {
            return Err(HspError::InvalidPovm("no elements".into()));
        }
        if let Some(bad) = elements.iter().find(|e| e.len() != dims.len()) {
            return Err(HspError::DimensionMismatch {
                expected: dims.len(),
                found: bad.len(),
            });
        }
        for (l, &d) in dims.iter().enumerate() {
            let column: Vec<CMat> = elements.iter().map(|e| e[l].clone()).collect();
            validate_elements(&column, d)?;
        }
        Ok(BlockPovm { elements })
    }

    /// `[k][λ]`.
    pub fn elements(&self) -> &[Vec<CMat>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `E_k = R(φ_k)` where `φ_k` has Fourier blocks `E^λ_k`.
    pub fn to_full(&self, set: &IrrepSet) -> Result<Povm> {
        let elements = self
            .elements
            .iter()
            .map(|blocks| {
                let phi = inverse_fourier(set, &FourierBlocks { blocks: blocks.clone() })?;
                regular_rep(set.group(), &phi).map(|m| hermitian_part(&m))
            })
            .collect::<Result<Vec<_>>>()?;
        Povm::new(elements)
    }

    /// `U (⊕_λ I ⊗ E^λ_k) U†` with the explicit block basis.
    pub fn to_full_via_basis(&self, set: &IrrepSet) -> Result<Povm> {
        let u = block_basis(set);
        let elements = self
            .elements
            .iter()
            .map(|blocks| {
                let expanded: Vec<CMat> = blocks
                    .iter()
                    .map(|b| identity(b.nrows()).kronecker(b))
                    .collect();
                hermitian_part(&(&u * block_diag(&expanded) * u.adjoint()))
            })
            .collect();
        Povm::new(elements)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group;
    use crate::rep::{fourier_blocks, irrep_set, left_regular_rep};
    use crate::linalg::ZERO;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn validation() {
        assert!(Povm::new(vec![identity(2)]).is_ok());
        assert!(Povm::new(vec![identity(2), identity(2)]).is_err());
        let mut neg = identity(2);
        neg[(0, 0)] = c(-0.5, 0.0);
        let mut rest = identity(2) * c(0.0, 0.0);
        rest[(0, 0)] = c(1.5, 0.0);
        assert!(matches!(Povm::new(vec![neg, rest]), Err(HspError::InvalidPovm(_))));
        assert!(Povm::new(vec![]).is_err());
        assert!(trivial_povm(3, 0).is_err());
        let t = trivial_povm(2, 2).unwrap();
        assert_eq!(t.elements()[0], identity(2) * c(0.5, 0.0));
        assert_eq!(trivial_povm(4, 1).unwrap().elements()[0], identity(4));
    }

    #[test]
    fn random_povms_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (dim, k) in [(2, 2), (6, 3), (8, 5)] {
            assert_eq!(random_povm(dim, k, &mut rng).unwrap().len(), k);
        }
    }

    #[test]
    fn twirl_commutes_with_left_translations_and_is_idempotent() {
        let g = build_group(&"dihedral:4".parse().unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let e = random_povm(8, 3, &mut rng).unwrap();
        let t = povm_twirl(&g, &e).unwrap();
        for z in g.elements() {
            let mut delta = vec![ZERO; 8];
            delta[z] = c(1.0, 0.0);
            let l = left_regular_rep(&g, &delta).unwrap();
            for m in t.elements() {
                assert!(max_abs_diff(&(&l * m), &(m * &l)) < 1e-12);
            }
        }
        let tt = povm_twirl(&g, &t).unwrap();
        for (a, b) in t.elements().iter().zip(tt.elements()) {
            assert!(max_abs_diff(a, b) < 1e-10);
        }
        let triv = trivial_povm(8, 3).unwrap();
        assert_eq!(povm_twirl(&g, &triv).unwrap(), triv);
    }

    #[test]
    fn block_to_full_routes_agree() {
        for spec in ["symmetric:3", "dihedral:4", "cyclic:5", "product:cyclic:2,symmetric:3"] {
            let g = build_group(&spec.parse().unwrap()).unwrap();
            let set = irrep_set(&g).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            let elements: Vec<Vec<CMat>> = {
                let per_lambda: Vec<Povm> = set
                    .dims()
                    .iter()
                    .map(|&d| random_povm(d, 3, &mut rng).unwrap())
                    .collect();
                (0..3)
                    .map(|k| per_lambda.iter().map(|p| p.elements()[k].clone()).collect())
                    .collect()
            };
            let bp = BlockPovm::new(&set.dims(), elements).unwrap();
            let a = bp.to_full(&set).unwrap();
            let b = bp.to_full_via_basis(&set).unwrap();
            for (x, y) in a.elements().iter().zip(b.elements()) {
                assert!(max_abs_diff(x, y) < 1e-10, "{spec}");
            }
            // and back: the Fourier blocks of each element's first row recover E^λ_k
            for (k, e) in a.elements().iter().enumerate() {
                let id = g.identity();
                let phi: Vec<_> = (0..g.order()).map(|z| e[(id, z)]).collect();
                let blocks = fourier_blocks(&set, &phi).unwrap();
                for (l, blk) in blocks.blocks.iter().enumerate() {
                    assert!(max_abs_diff(blk, &bp.elements()[k][l]) < 1e-10);
                }
            }
        }
    }

    #[test]
    fn block_povm_validation() {
        let dims = [1, 1, 2];
        let ok = vec![vec![
            identity(1),
            identity(1),
            identity(2),
        ]];
        assert!(BlockPovm::new(&dims, ok.clone()).is_ok());
        let mut short = ok.clone();
        short[0].pop();
        assert!(BlockPovm::new(&dims, short).is_err());
        let mut wrong = ok;
        wrong[0][2] = identity(2) * c(0.5, 0.0);
        assert!(BlockPovm::new(&dims, wrong).is_err());
    }
}
