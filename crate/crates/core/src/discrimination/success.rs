use serde::Serialize;

use super::{BlockPovm, Povm};
use crate::error::{HspError, Result};
use crate::group::{conjugacy_family, GroupTable, Subgroup, SubgroupFamily};
use crate::linalg::trace_product;
use crate::model::DensityOperator;
use crate::rep::{lambda_support, FourierBlocks, IrrepSet};

/// Success probability of one (slate, measurement) pair with the full
/// conditional matrix `μ(k′|k)` (row `k`, column `k′`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuccessReport {
    pub success: f64,
    pub conditional: Vec<Vec<f64>>,
    pub measurement: String,
    pub slate: String,
    /// Set when the value may understate the optimum for this slate.
    pub is_lower_bound: bool,
}

impl SuccessReport {
    fn from_conditional(conditional: Vec<Vec<f64>>) -> Self {
        let k = conditional.len();
        let success = (0..k).map(|i| conditional[i][i]).sum::<f64>() / k as f64;
        SuccessReport {
            success,
            conditional,
            measurement: String::new(),
            slate: String::new(),
            is_lower_bound: true,
        }
    }

    pub fn tagged(mut self, measurement: impl Into<String>, slate: impl Into<String>) -> Self {
        self.measurement = measurement.into();
        self.slate = slate.into();
        self
    }

    pub fn with_lower_bound(mut self, flag: bool) -> Self {
        self.is_lower_bound = flag;
        self
    }

    /// Largest deviation of a conditional row sum from 1.
    pub fn row_sum_defect(&self) -> f64 {
        self.conditional
            .iter()
            .map(|row| (row.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn conditional_max_diff(&self, other: &SuccessReport) -> f64 {
        self.conditional
            .iter()
            .flatten()
            .zip(other.conditional.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `μ(k′|k) = tr(E_{k′} ρ_k)` and `S = (1/K) Σ_k μ(k|k)`.
pub fn success(states: &[DensityOperator], povm: &Povm) -> Result<SuccessReport> {
    if states.len() != povm.len() {
        return Err(HspError::DimensionMismatch {
            expected: povm.len(),
            found: states.len(),
        });
    }
    if let Some(bad) = states.iter().find(|s| s.dim() != povm.dim()) {
        return Err(HspError::DimensionMismatch {
            expected: povm.dim(),
            found: bad.dim(),
        });
    }
    let conditional = states
        .iter()
        .map(|rho| {
            povm.elements()
                .iter()
                .map(|e| trace_product(e, rho.matrix()).re)
                .collect()
        })
        .collect();
    Ok(SuccessReport::from_conditional(conditional))
}

/// Block form: `μ(k′|k) = Σ_λ d_λ tr(E^λ_{k′} φ̃^λ_k)`.
pub fn success_blocks(set: &IrrepSet, states: &[FourierBlocks], povm: &BlockPovm) -> Result<SuccessReport> {
    if states.len() != povm.len() {
        return Err(HspError::DimensionMismatch {
            expected: povm.len(),
            found: states.len(),
        });
    }
    let dims = set.dims();
    let conditional = states
        .iter()
        .map(|phi| {
            if phi.blocks.len() != dims.len() {
                return Err(HspError::DimensionMismatch {
                    expected: dims.len(),
                    found: phi.blocks.len(),
                });
            }
            Ok(povm
                .elements()
                .iter()
                .map(|e| {
                    e.iter()
                        .zip(&phi.blocks)
                        .zip(&dims)
                        .map(|((el, bl), &d)| d as f64 * trace_product(el, bl).re)
                        .sum()
                })
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuccessReport::from_conditional(conditional))
}

/// `S_v(𝓔) = |β₀|²/K + (1 − |β₀|²) S_{v_c}(𝓔)`.
pub fn success_from_character(beta0_sq: f64, s_vc: f64, k: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&beta0_sq) {
        return Err(HspError::OutOfRange(format!("|β₀|² = {beta0_sq}")));
    }
    if !(0.0..=1.0).contains(&s_vc) {
        return Err(HspError::OutOfRange(format!("S_vc = {s_vc}")));
    }
    if k == 0 {
        return Err(HspError::OutOfRange("K = 0".into()));
    }
    Ok(beta0_sq / k as f64 + (1.0 - beta0_sq) * s_vc)
}

/// Optimum success probability for the family of all conjugates of `H`.
pub fn conjugate_optimum(
    group: &GroupTable,
    subgroup: &Subgroup,
    d: usize,
    beta0_sq: f64,
    set: &IrrepSet,
) -> Result<f64> {
    let index = subgroup.index();
    if d < index {
        return Err(HspError::ResponseTooSmall { d, index });
    }
    if !(0.0..=1.0).contains(&beta0_sq) {
        return Err(HspError::OutOfRange(format!("|β₀|² = {beta0_sq}")));
    }
    let nc = conjugacy_family(group, subgroup)?.len() as f64;
    let mu = lambda_support(set, subgroup)?.plancherel_mass;
    let df = d as f64;
    let h = subgroup.order() as f64;
    Ok((beta0_sq - (1.0 - beta0_sq) / (df - 1.0)) / nc
        + (1.0 - beta0_sq) * df / (df - 1.0) * h / nc * mu)
}

/// Character-query success of a block measurement split per subgroup into
/// the trivial-irrep term and the sum over `h ∈ H_k` of the nontrivial ones.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuccessDecomposition {
    pub trivial_terms: Vec<f64>,
    pub nontrivial_terms: Vec<f64>,
    pub total: f64,
}

pub fn success_decomposition(
    set: &IrrepSet,
    family: &SubgroupFamily,
    d: usize,
    povm: &BlockPovm,
) -> Result<SuccessDecomposition> {
    let k = family.len();
    if povm.len() != k {
        return Err(HspError::DimensionMismatch {
            expected: k,
            found: povm.len(),
        });
    }
    let index = family.max_index();
    if d < index {
        return Err(HspError::ResponseTooSmall { d, index });
    }
    let df = d as f64;
    let n = set.group().order() as f64;
    let mut trivial_terms = Vec::with_capacity(k);
    let mut nontrivial_terms = Vec::with_capacity(k);
    for (h, blocks) in family.members().iter().zip(povm.elements()) {
        let nk = h.index() as f64;
        let mut trivial = 0.0;
        let mut rest = 0.0;
        for (irrep, e) in set.irreps().iter().zip(blocks) {
            if irrep.is_trivial() {
                trivial = e[(0, 0)].re * (df - nk) / ((df - 1.0) * nk);
            } else {
                let s: f64 = h
                    .elements()
                    .iter()
                    .map(|&g| trace_product(e, &irrep.mats[g]).re)
                    .sum();
                rest += irrep.dim as f64 * s;
            }
        }
        trivial_terms.push(trivial);
        nontrivial_terms.push(df / ((df - 1.0) * n) * rest);
    }
    let total = trivial_terms
        .iter()
        .zip(&nontrivial_terms)
        .map(|(a, b)| a + b)
        .sum::<f64>()
        / k as f64;
    Ok(SuccessDecomposition {
        trivial_terms,
        nontrivial_terms,
        total,
    })
}
