use super::{BlockPovm, Povm};
use crate::error::{HspError, Result};
use crate::group::SubgroupFamily;
use crate::linalg::{c, hermitian_eigen, hermitian_part, CMat};
use crate::model::{subgroup_state_blocks, DensityOperator};
use crate::rep::IrrepSet;

/// Eigenvalues below this fraction of the largest count as kernel.
pub const KERNEL_CUTOFF: f64 = 1e-12;
/// A block whose largest eigenvalue is below this is treated as zero.
const ZERO_BLOCK: f64 = 1e-13;

/// `(ρ̄^{-1/2} restricted to Im ρ̄, projector onto Ker ρ̄)`.
fn support_split(mean: &CMat) -> (CMat, CMat) {
    let eig = hermitian_eigen(mean);
    let top = eig.max();
    let cutoff = if top < ZERO_BLOCK { f64::INFINITY } else { KERNEL_CUTOFF * top };
    let inv = eig.apply(|v| if v > cutoff { 1.0 / v.sqrt() } else { 0.0 });
    let ker = eig.apply(|v| if v > cutoff { 0.0 } else { 1.0 });
    (inv, ker)
}

fn pgm_elements(states: &[CMat], priors: &[f64]) -> Vec<CMat> {
    let dim = states[0].nrows();
    let k = states.len();
    let mean = states
        .iter()
        .zip(priors)
        .fold(CMat::zeros(dim, dim), |acc, (s, &p)| acc + s * c(p, 0.0));
    let (inv, ker) = support_split(&mean);
    let completion = ker * c(1.0 / k as f64, 0.0);
    states
        .iter()
        .zip(priors)
        .map(|(s, &p)| hermitian_part(&(&inv * s * &inv * c(p, 0.0) + &completion)))
        .collect()
}

fn check_priors(priors: &[f64], k: usize) -> Result<()> {
    if priors.len() != k {
        return Err(HspError::InvalidPriors(format!("{} priors for {k} states", priors.len())));
    }
    if priors.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
        return Err(HspError::InvalidPriors("priors must be nonnegative".into()));
    }
    let total: f64 = priors.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(HspError::InvalidPriors(format!("priors sum to {total}")));
    }
    Ok(())
}

/// Pretty Good Measurement `M_k = p_k ρ̄^{-1/2} ρ_k ρ̄^{-1/2}`, completed on
/// `Ker ρ̄` by `P_ker / K`.
pub fn pgm(states: &[DensityOperator], priors: &[f64]) -> Result<Povm> {
    if states.is_empty() {
        return Err(HspError::InvalidPovm("no states".into()));
    }
    check_priors(priors, states.len())?;
    let dim = states[0].dim();
    if let Some(bad) = states.iter().find(|s| s.dim() != dim) {
        return Err(HspError::DimensionMismatch {
            expected: dim,
            found: bad.dim(),
        });
    }
    let mats: Vec<CMat> = states.iter().map(|s| s.matrix().clone()).collect();
    Povm::new(pgm_elements(&mats, priors))
}

/// Uniform priors `1/K`.
pub fn uniform_priors(k: usize) -> Vec<f64> {
    vec![1.0 / k as f64; k]
}

/// Blockwise PGM for the character-query subgroup states of a family.
pub fn pgm_blocks(set: &IrrepSet, family: &SubgroupFamily, d: usize) -> Result<BlockPovm> {
    let k = family.len();
    let per_subgroup = family
        .members()
        .iter()
        .map(|h| subgroup_state_blocks(set, h, d))
        .collect::<Result<Vec<_>>>()?;
    let priors = uniform_priors(k);
    let mut elements = vec![Vec::with_capacity(set.len()); k];
    for l in 0..set.len() {
        let blocks: Vec<CMat> = per_subgroup.iter().map(|b| b.blocks[l].clone()).collect();
        for (slot, m) in elements.iter_mut().zip(pgm_elements(&blocks, &priors)) {
            slot.push(m);
        }
    }
    BlockPovm::new(&set.dims(), elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, conjugacy_family, subgroup_closure, Subgroup};
    use crate::linalg::{identity, max_abs_diff};

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn proj(v: [f64; 2]) -> CMat {
        CMat::from_fn(2, 2, |a, b| c(v[a] * v[b], 0.0))
    }

    fn state(m: CMat) -> DensityOperator {
        DensityOperator::new(m).unwrap()
    }

    #[test]
    fn deutsch_standard_pgm() {
        let plus = proj([H, H]);
        let minus = proj([H, -H]);
        let states = [state(plus.clone()), state(identity(2) * c(0.5, 0.0))];
        let m = pgm(&states, &[0.5, 0.5]).unwrap();
        assert!(max_abs_diff(&m.elements()[0], &(&plus * c(2.0 / 3.0, 0.0))) < 1e-14);
        assert!(max_abs_diff(&m.elements()[1], &(&plus * c(1.0 / 3.0, 0.0) + &minus)) < 1e-14);
    }

    #[test]
    fn deutsch_character_pgm() {
        let plus = proj([H, H]);
        let minus = proj([H, -H]);
        let m = pgm(&[state(plus.clone()), state(minus.clone())], &[0.5, 0.5]).unwrap();
        assert!(max_abs_diff(&m.elements()[0], &plus) < 1e-14);
        assert!(max_abs_diff(&m.elements()[1], &minus) < 1e-14);
    }

    #[test]
    fn single_state_gives_identity() {
        let m = pgm(&[state(proj([H, H]))], &[1.0]).unwrap();
        assert!(max_abs_diff(&m.elements()[0], &identity(2)) < 1e-14);
    }

    #[test]
    fn prior_errors() {
        let s = state(proj([H, H]));
        assert!(matches!(pgm(&[s.clone(), s.clone()], &[0.7, 0.7]), Err(HspError::InvalidPriors(_))));
        assert!(matches!(pgm(&[s.clone(), s.clone()], &[1.5, -0.5]), Err(HspError::InvalidPriors(_))));
        assert!(pgm(std::slice::from_ref(&s), &[0.5, 0.5]).is_err());
        let big = state(identity(3) * c(1.0 / 3.0, 0.0));
        assert!(matches!(pgm(&[s, big], &[0.5, 0.5]), Err(HspError::DimensionMismatch { .. })));
    }

    #[test]
    fn deutsch_blocks() {
        let g = build_group(&"cyclic:2".parse().unwrap()).unwrap();
        let set = crate::rep::irrep_set(&g).unwrap();
        let family = SubgroupFamily::new(vec![Subgroup::whole(&g), Subgroup::trivial(&g)]).unwrap();
        let m = pgm_blocks(&set, &family, 2).unwrap();
        let entry = |k: usize, l: usize| m.elements()[k][l][(0, 0)].re;
        assert!((entry(0, 0) - 1.0).abs() < 1e-14 && entry(0, 1).abs() < 1e-14);
        assert!(entry(1, 0).abs() < 1e-14 && (entry(1, 1) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn single_subgroup_blocks_are_identity() {
        let g = build_group(&"symmetric:3".parse().unwrap()).unwrap();
        let set = crate::rep::irrep_set(&g).unwrap();
        let h = subgroup_closure(&g, &g.parse_generators("(123)").unwrap()).unwrap();
        let m = pgm_blocks(&set, &SubgroupFamily::new(vec![h]).unwrap(), 2).unwrap();
        for (l, b) in m.elements()[0].iter().enumerate() {
            assert!(max_abs_diff(b, &identity(set.dims()[l])) < 1e-14);
        }
    }

    #[test]
    fn conjugate_blocks_are_valid_and_need_large_enough_d() {
        let g = build_group(&"symmetric:3".parse().unwrap()).unwrap();
        let set = crate::rep::irrep_set(&g).unwrap();
        let h = subgroup_closure(&g, &g.parse_generators("(12)").unwrap()).unwrap();
        let family = conjugacy_family(&g, &h).unwrap();
        assert!(pgm_blocks(&set, &family, 3).is_ok());
        assert!(matches!(
            pgm_blocks(&set, &family, 2),
            Err(HspError::ResponseTooSmall { .. })
        ));
    }
}
