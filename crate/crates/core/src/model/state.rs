use num_complex::Complex64;

use super::oracle::{enumerate_oracles, OracleFunction, OracleMode};
use super::Slate;
use crate::error::{HspError, Result};
use crate::group::{CosetList, GroupTable, Subgroup};
use crate::linalg::{c, hermitian_defect, min_eigenvalue, trace, CMat};
use crate::rep::{h_invariant_projector, regular_rep, FourierBlocks, IrrepSet};

pub const STATE_TOLERANCE: f64 = 1e-10;

/// A density operator on `C[G]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    mat: CMat,
}

impl DensityOperator {
    /// Checks Hermiticity, positivity and unit trace (each within 1e-10).
    pub fn new(mat: CMat) -> Result<Self> {
        if !mat.is_square() {
            return Err(HspError::DimensionMismatch {
                expected: mat.nrows(),
                found: mat.ncols(),
            });
        }
        let herm = hermitian_defect(&mat);
        if herm > STATE_TOLERANCE {
            return Err(HspError::InvalidState(format!("Hermitian defect {herm:e}")));
        }
        let tr = trace(&mat);
        if (tr - c(1.0, 0.0)).norm() > STATE_TOLERANCE {
            return Err(HspError::InvalidState(format!("trace {tr}")));
        }
        let low = min_eigenvalue(&mat);
        if low < -STATE_TOLERANCE {
            return Err(HspError::InvalidState(format!("eigenvalue {low:e}")));
        }
        Ok(DensityOperator { mat })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }
}

fn check_response(d: usize, index: usize) -> Result<()> {
    if d < index {
        return Err(HspError::ResponseTooSmall { d, index });
    }
    Ok(())
}

/// Accepts `|β₀|²` with rounding slack of 1e-9 and clamps it into `[0, 1]`.
pub(crate) fn check_beta0_sq(beta0_sq: f64) -> Result<f64> {
    if !(-1e-9..=1.0 + 1e-9).contains(&beta0_sq) {
        return Err(HspError::OutOfRange(format!("|β₀|² = {beta0_sq}")));
    }
    Ok(beta0_sq.clamp(0.0, 1.0))
}

/// `ρ_{f,v}`: applies `O_f |g⟩|x⟩ = |g⟩|x + f(g)⟩` to the equal-superposition
/// query with slate `v`, then traces out the response register.
pub fn query_register_state(
    group: &GroupTable,
    cosets: &CosetList,
    f: &OracleFunction,
    slate: &Slate,
) -> Result<DensityOperator> {
    let space = slate.space();
    let d = space.size();
    if cosets.subgroup().parent_order() != group.order() {
        return Err(HspError::DimensionMismatch {
            expected: group.order(),
            found: cosets.subgroup().parent_order(),
        });
    }
    if f.gamma.len() != cosets.index() {
        return Err(HspError::DimensionMismatch {
            expected: cosets.index(),
            found: f.gamma.len(),
        });
    }
    let f = OracleFunction::new(f.k, f.gamma.clone(), d)?;
    let n = group.order();
    let norm = 1.0 / (n as f64).sqrt();
    let v = slate.amplitudes();
    // ψ[g][x] = amplitude of |g⟩|x⟩ after the oracle
    let psi: Vec<Vec<Complex64>> = (0..n)
        .map(|g| {
            let fg = f.gamma[cosets.coset_of(g)];
            (0..d).map(|x| v[space.sub(x, fg)] * norm).collect()
        })
        .collect();
    let mat = CMat::from_fn(n, n, |a, b| {
        psi[a].iter().zip(&psi[b]).map(|(p, q)| p * q.conj()).sum()
    });
    DensityOperator::new(mat)
}

/// `ρ_{k,v} = R(φ_{k,v})` from the closed form in `|β_{v,0}|²`.
pub fn subgroup_state_closed(
    group: &GroupTable,
    subgroup: &Subgroup,
    d: usize,
    beta0_sq: f64,
) -> Result<DensityOperator> {
    subgroup.check_parent(group)?;
    check_response(d, subgroup.index())?;
    let beta0_sq = check_beta0_sq(beta0_sq)?;
    regular_rep(group, &subgroup_phi(group, subgroup, d, beta0_sq))
        .and_then(DensityOperator::new)
}

/// `φ_{k,v} = |β₀|² φ₀ + (1 − |β₀|²) φ_{k,0̄}` as a vector in `C[G]`.
pub fn subgroup_phi(group: &GroupTable, subgroup: &Subgroup, d: usize, beta0_sq: f64) -> Vec<Complex64> {
    let n = group.order() as f64;
    let df = d as f64;
    let on_h = df / (df - 1.0) - 1.0 / (df - 1.0);
    let off_h = -1.0 / (df - 1.0);
    group
        .elements()
        .map(|g| {
            let char_part = if subgroup.contains(g) { on_h } else { off_h };
            c((beta0_sq + (1.0 - beta0_sq) * char_part) / n, 0.0)
        })
        .collect()
}

/// Fourier blocks of `φ_{k,0̄}`, the character-query subgroup state.
pub fn subgroup_state_blocks(set: &IrrepSet, subgroup: &Subgroup, d: usize) -> Result<FourierBlocks> {
    subgroup_state_blocks_for(set, subgroup, d, 0.0)
}

/// Fourier blocks of `φ_{k,v}` for a slate with the given `|β₀|²`.
pub fn subgroup_state_blocks_for(
    set: &IrrepSet,
    subgroup: &Subgroup,
    d: usize,
    beta0_sq: f64,
) -> Result<FourierBlocks> {
    subgroup.check_parent(set.group())?;
    let index = subgroup.index();
    check_response(d, index)?;
    let beta0_sq = check_beta0_sq(beta0_sq)?;
    let (df, nf) = (d as f64, index as f64);
    let char_weight = 1.0 - beta0_sq;
    let blocks = set
        .irreps()
        .iter()
        .map(|irrep| {
            if irrep.is_trivial() {
                let trivial = (df - nf) / ((df - 1.0) * nf);
                CMat::from_element(1, 1, c(beta0_sq + char_weight * trivial, 0.0))
            } else {
                let scale = char_weight * df / ((df - 1.0) * nf);
                h_invariant_projector(irrep, subgroup) * c(scale, 0.0)
            }
        })
        .collect();
    Ok(FourierBlocks { blocks })
}

/// `(1/|𝓕_k|) Σ_f ρ_{f,v}` over the enumerated (or sampled) oracle functions.
pub fn subgroup_state_average(
    group: &GroupTable,
    cosets: &CosetList,
    slate: &Slate,
    mode: OracleMode,
) -> Result<DensityOperator> {
    let d = slate.space().size();
    check_response(d, cosets.index())?;
    let gammas = enumerate_oracles(d, cosets.index(), mode)?;
    if gammas.is_empty() {
        return Err(HspError::OutOfRange("no oracle functions to average".into()));
    }
    let n = group.order();
    let mut acc = CMat::zeros(n, n);
    for gamma in &gammas {
        let f = OracleFunction { k: 0, gamma: gamma.clone() };
        acc += query_register_state(group, cosets, &f, slate)?.matrix();
    }
    acc /= c(gammas.len() as f64, 0.0);
    DensityOperator::new(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, left_cosets, GroupSpec};
    use crate::linalg::max_abs_diff;
    use crate::model::{make_slate, slate_betas, ResponseSpace, SlateKind};
    use crate::rep::{fourier_blocks, irrep_set, left_regular_rep};

    fn deutsch() -> (GroupTable, ResponseSpace) {
        (
            build_group(&GroupSpec::Cyclic(2)).unwrap(),
            ResponseSpace::with_size(2).unwrap(),
        )
    }

    fn proj(v: [f64; 2]) -> CMat {
        CMat::from_fn(2, 2, |a, b| c(v[a] * v[b], 0.0))
    }

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn deutsch_balanced_character() {
        let (g, x) = deutsch();
        let cosets = left_cosets(&g, &Subgroup::trivial(&g)).unwrap();
        let v = make_slate(&x, SlateKind::Character).unwrap();
        let f = OracleFunction { k: 1, gamma: vec![0, 1] };
        let rho = query_register_state(&g, &cosets, &f, &v).unwrap();
        assert!(max_abs_diff(rho.matrix(), &proj([H, -H])) < 1e-15);
    }

    #[test]
    fn deutsch_constant_standard() {
        let (g, x) = deutsch();
        let cosets = left_cosets(&g, &Subgroup::whole(&g)).unwrap();
        let v = make_slate(&x, SlateKind::Standard).unwrap();
        let f = OracleFunction { k: 0, gamma: vec![0] };
        let rho = query_register_state(&g, &cosets, &f, &v).unwrap();
        assert!(max_abs_diff(rho.matrix(), &proj([H, H])) < 1e-15);
    }

    #[test]
    fn deutsch_closed_forms() {
        let (g, _) = deutsch();
        let plus = proj([H, H]);
        let minus = proj([H, -H]);
        let whole = subgroup_state_closed(&g, &Subgroup::whole(&g), 2, 0.0).unwrap();
        assert!(max_abs_diff(whole.matrix(), &plus) < 1e-15);
        let triv = subgroup_state_closed(&g, &Subgroup::trivial(&g), 2, 0.0).unwrap();
        assert!(max_abs_diff(triv.matrix(), &minus) < 1e-15);
        let mixed = subgroup_state_closed(&g, &Subgroup::trivial(&g), 2, 0.5).unwrap();
        assert!(max_abs_diff(mixed.matrix(), &(crate::linalg::identity(2) * c(0.5, 0.0))) < 1e-15);
        assert!(subgroup_state_closed(&g, &Subgroup::trivial(&g), 1, 0.0).is_err());
    }

    #[test]
    fn deutsch_averages() {
        let (g, x) = deutsch();
        let std = make_slate(&x, SlateKind::Standard).unwrap();
        let cosets = left_cosets(&g, &Subgroup::trivial(&g)).unwrap();
        let avg = subgroup_state_average(&g, &cosets, &std, OracleMode::Full).unwrap();
        assert!(max_abs_diff(avg.matrix(), &(crate::linalg::identity(2) * c(0.5, 0.0))) < 1e-15);
        let ch = make_slate(&x, SlateKind::Character).unwrap();
        let cosets = left_cosets(&g, &Subgroup::whole(&g)).unwrap();
        let avg = subgroup_state_average(&g, &cosets, &ch, OracleMode::Full).unwrap();
        assert!(max_abs_diff(avg.matrix(), &proj([H, H])) < 1e-15);
    }

    #[test]
    fn average_matches_closed_form_and_commutes_with_left_translations() {
        let g = build_group(&GroupSpec::Symmetric(3)).unwrap();
        let h = crate::group::subgroup_closure(&g, &g.parse_generators("(12)").unwrap()).unwrap();
        let cosets = left_cosets(&g, &h).unwrap();
        for d in [3, 4] {
            let x = ResponseSpace::with_size(d).unwrap();
            for kind in [SlateKind::Standard, SlateKind::Character, SlateKind::Constant] {
                let v = make_slate(&x, kind).unwrap();
                let avg = subgroup_state_average(&g, &cosets, &v, OracleMode::Full).unwrap();
                let b0 = slate_betas(&v).beta0_sq;
                let closed = subgroup_state_closed(&g, &h, d, b0).unwrap();
                assert!(max_abs_diff(avg.matrix(), closed.matrix()) < 1e-12);
                for z in g.elements() {
                    let mut delta = vec![c(0.0, 0.0); g.order()];
                    delta[z] = c(1.0, 0.0);
                    let l = left_regular_rep(&g, &delta).unwrap();
                    let comm = &l * avg.matrix() - avg.matrix() * &l;
                    assert!(comm.iter().all(|e| e.norm() < 1e-12));
                }
            }
        }
    }

    #[test]
    fn coset_order_does_not_matter() {
        let g = build_group(&GroupSpec::Dihedral(4)).unwrap();
        let h = Subgroup::new(&g, [0, 2]).unwrap();
        let cosets = left_cosets(&g, &h).unwrap();
        let shuffled = cosets.permuted(&[2, 0, 3, 1]).unwrap();
        let x = ResponseSpace::with_size(4).unwrap();
        let v = make_slate(&x, SlateKind::Standard).unwrap();
        let a = subgroup_state_average(&g, &cosets, &v, OracleMode::Full).unwrap();
        let b = subgroup_state_average(&g, &shuffled, &v, OracleMode::Full).unwrap();
        assert!(max_abs_diff(a.matrix(), b.matrix()) < 1e-12);
    }

    #[test]
    fn blocks_match_fourier_of_phi() {
        let g = build_group(&GroupSpec::Symmetric(3)).unwrap();
        let set = irrep_set(&g).unwrap();
        let h = crate::group::subgroup_closure(&g, &g.parse_generators("(12)").unwrap()).unwrap();
        for d in [3, 4, 6] {
            let blocks = subgroup_state_blocks(&set, &h, d).unwrap();
            let direct = fourier_blocks(&set, &subgroup_phi(&g, &h, d, 0.0)).unwrap();
            assert!(blocks.max_abs_diff(&direct) < 1e-12);
            for b0 in [0.2, 1.0] {
                let blocks = subgroup_state_blocks_for(&set, &h, d, b0).unwrap();
                let direct = fourier_blocks(&set, &subgroup_phi(&g, &h, d, b0)).unwrap();
                assert!(blocks.max_abs_diff(&direct) < 1e-12);
            }
        }
        let trivial = |d| subgroup_state_blocks(&set, &h, d).unwrap().blocks[0][(0, 0)].re;
        assert!(trivial(3).abs() < 1e-15);
        assert!((trivial(6) - 0.2).abs() < 1e-15);
        let whole = subgroup_state_blocks(&set, &Subgroup::whole(&g), 5).unwrap();
        assert!((whole.blocks[0][(0, 0)].re - 1.0).abs() < 1e-15);
        assert!(whole.blocks[1..].iter().all(|b| b.iter().all(|e| e.norm() < 1e-15)));
        assert!(subgroup_state_blocks(&set, &h, 2).is_err());
    }

    #[test]
    fn sample_mode_converges() {
        let g = build_group(&GroupSpec::Dihedral(3)).unwrap();
        let h = Subgroup::trivial(&g);
        let cosets = left_cosets(&g, &h).unwrap();
        let x = ResponseSpace::with_size(7).unwrap();
        let v = make_slate(&x, SlateKind::Character).unwrap();
        let closed = subgroup_state_closed(&g, &h, 7, 0.0).unwrap();
        let err = |count| {
            (0..4)
                .map(|seed| {
                    let s = subgroup_state_average(&g, &cosets, &v, OracleMode::Sample { count, seed }).unwrap();
                    max_abs_diff(s.matrix(), closed.matrix())
                })
                .sum::<f64>()
        };
        let (coarse, fine) = (err(40), err(4000));
        assert!(fine < coarse, "{fine} vs {coarse}");
    }
}
