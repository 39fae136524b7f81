use super::{Irrep, IrrepSet};
use crate::error::Result;
use crate::group::Subgroup;
use crate::linalg::{max_abs, CMat};

/// Entry magnitude below which an H-invariant projector counts as zero.
pub const ZERO_PROJECTOR_THRESHOLD: f64 = 1e-9;

/// `(1/|H|) Σ_{h∈H} π^λ(h)`, the projector onto the H-invariants of `V^λ`.
pub fn h_invariant_projector(irrep: &Irrep, subgroup: &Subgroup) -> CMat {
    let mut acc = CMat::zeros(irrep.dim, irrep.dim);
    for &h in subgroup.elements() {
        acc += &irrep.mats[h];
    }
    acc / num_complex::Complex64::new(subgroup.order() as f64, 0.0)
}

/// `Λ_H` and its Plancherel mass.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSupport {
    pub labels: Vec<usize>,
    pub plancherel_mass: f64,
}

impl LambdaSupport {
    pub fn contains(&self, label: usize) -> bool {
        self.labels.contains(&label)
    }
}

pub fn lambda_support(set: &IrrepSet, subgroup: &Subgroup) -> Result<LambdaSupport> {
    subgroup.check_parent(set.group())?;
    let labels: Vec<usize> = set
        .irreps()
        .iter()
        .filter(|irrep| max_abs(&h_invariant_projector(irrep, subgroup)) > ZERO_PROJECTOR_THRESHOLD)
        .map(|irrep| irrep.label)
        .collect();
    let plancherel_mass = labels.iter().map(|&l| set.plancherel(l)).sum();
    Ok(LambdaSupport {
        labels,
        plancherel_mass,
    })
}
