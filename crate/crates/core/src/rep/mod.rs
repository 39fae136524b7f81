//! Irreducible unitary representations and the Fourier decomposition of the
//! group algebra.
//!
//! Cyclic and abelian product groups use characters, dihedral groups use the
//! standard one- and two-dimensional closed forms, products combine factor
//! irreps by Kronecker product, and everything else (the symmetric groups)
//! goes through [`numerical::decompose_regular`].

mod fourier;
mod invariants;
pub mod numerical;
mod validate;

pub use fourier::{
    block_basis, convolve, fourier_blocks, inverse_fourier, left_regular_rep, regular_rep,
    FourierBlocks,
};
pub use invariants::{h_invariant_projector, lambda_support, LambdaSupport, ZERO_PROJECTOR_THRESHOLD};
pub use validate::{verify_irrep_set, ValidationReport};

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{HspError, Result};
use crate::group::{GroupSpec, GroupTable, MAX_ORDER};
use crate::linalg::{c, CMat, ONE, ZERO};

/// Unitarity / homomorphism tolerance for constructed irreps.
pub const UNITARY_TOLERANCE: f64 = 1e-9;

/// Seeds tried by [`irrep_set`] before giving up on the numerical path.
const NUMERICAL_SEEDS: u64 = 8;

/// One irreducible unitary representation `π^λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Irrep {
    pub label: usize,
    pub dim: usize,
    /// `mats[g]` is `π^λ(g)`.
    pub mats: Vec<CMat>,
}

impl Irrep {
    pub fn character(&self) -> Vec<Complex64> {
        self.mats.iter().map(|m| m.trace()).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.dim == 1 && self.mats.iter().all(|m| (m[(0, 0)] - ONE).norm() < UNITARY_TOLERANCE)
    }
}

/// A complete set of irreps of one group, trivial irrep first.
#[derive(Debug, Clone, PartialEq)]
pub struct IrrepSet {
    group: GroupTable,
    irreps: Vec<Irrep>,
}

impl IrrepSet {
    /// Wraps externally supplied irreps after relabelling them in order.
    /// No validation happens here; see [`verify_irrep_set`].
    pub fn from_parts(group: GroupTable, mut irreps: Vec<Irrep>) -> Self {
        for (i, irrep) in irreps.iter_mut().enumerate() {
            irrep.label = i;
        }
        IrrepSet { group, irreps }
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }

    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.irreps.iter().map(|r| r.dim).collect()
    }

    /// `μ_P(λ) = d_λ² / |G|`.
    pub fn plancherel(&self, label: usize) -> f64 {
        let d = self.irreps[label].dim as f64;
        d * d / self.group.order() as f64
    }

    #[cfg(test)]
    pub(crate) fn irreps_mut(&mut self) -> &mut Vec<Irrep> {
        &mut self.irreps
    }
}

/// Complete irrep set with the fixed ordering: trivial first, then ascending
/// dimension, ties broken by character lexicographic order.
pub fn irrep_set(group: &GroupTable) -> Result<IrrepSet> {
    if group.order() > MAX_ORDER {
        return Err(HspError::OutOfRange(format!(
            "group order {} > {MAX_ORDER}",
            group.order()
        )));
    }
    let irreps = match group.spec() {
        Some(spec) => from_spec(spec)?,
        None => numerical_with_retries(group)?,
    };
    Ok(finish(group.clone(), irreps))
}

/// Numerical decomposition with an explicit seed, bypassing closed forms.
pub fn irrep_set_numerical(group: &GroupTable, seed: u64) -> Result<IrrepSet> {
    let irreps = numerical::decompose_regular(group, seed)?;
    Ok(finish(group.clone(), irreps))
}

fn numerical_with_retries(group: &GroupTable) -> Result<Vec<Irrep>> {
    let mut last = None;
    for seed in 0..NUMERICAL_SEEDS {
        match numerical::decompose_regular(group, seed) {
            Ok(irreps) => return Ok(irreps),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

fn from_spec(spec: &GroupSpec) -> Result<Vec<Irrep>> {
    match spec {
        GroupSpec::Cyclic(n) => Ok(cyclic_irreps(*n)),
        GroupSpec::Dihedral(n) => Ok(dihedral_irreps(*n)),
        GroupSpec::Symmetric(_) => {
            let group = crate::group::build_group(spec)?;
            numerical_with_retries(&group)
        }
        GroupSpec::Product(a, b) => {
            let (ra, rb) = (from_spec(a)?, from_spec(b)?);
            let nb = rb[0].mats.len();
            let n = ra[0].mats.len() * nb;
            let mut out = Vec::with_capacity(ra.len() * rb.len());
            for x in &ra {
                for y in &rb {
                    let mats = (0..n)
                        .map(|g| x.mats[g / nb].kronecker(&y.mats[g % nb]))
                        .collect();
                    out.push(Irrep {
                        label: 0,
                        dim: x.dim * y.dim,
                        mats,
                    });
                }
            }
            Ok(out)
        }
    }
}

fn root_of_unity(k: usize, n: usize) -> Complex64 {
    let theta = 2.0 * PI * (k % n) as f64 / n as f64;
    c(theta.cos(), theta.sin())
}

fn cyclic_irreps(n: usize) -> Vec<Irrep> {
    (0..n)
        .map(|k| Irrep {
            label: k,
            dim: 1,
            mats: (0..n)
                .map(|x| CMat::from_element(1, 1, root_of_unity(k * x, n)))
                .collect(),
        })
        .collect()
}

fn dihedral_irreps(n: usize) -> Vec<Irrep> {
    // element index a + x n  is  r^a s^x
    let one_dim = |rot_sign: bool, refl_sign: bool| {
        let mats = (0..2 * n)
            .map(|g| {
                let (a, x) = (g % n, g / n);
                let mut v = 1.0;
                if rot_sign && a % 2 == 1 {
                    v = -v;
                }
                if refl_sign && x == 1 {
                    v = -v;
                }
                CMat::from_element(1, 1, c(v, 0.0))
            })
            .collect();
        Irrep {
            label: 0,
            dim: 1,
            mats,
        }
    };
    let mut out = vec![one_dim(false, false), one_dim(false, true)];
    if n.is_multiple_of(2) {
        out.push(one_dim(true, false));
        out.push(one_dim(true, true));
    }
    let swap = CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
    for j in 1..=(n - 1) / 2 {
        let mats = (0..2 * n)
            .map(|g| {
                let (a, x) = (g % n, g / n);
                let rot = CMat::from_row_slice(
                    2,
                    2,
                    &[root_of_unity(j * a, n), ZERO, ZERO, root_of_unity(n - (j * a) % n, n)],
                );
                if x == 0 {
                    rot
                } else {
                    rot * &swap
                }
            })
            .collect();
        out.push(Irrep {
            label: 0,
            dim: 2,
            mats,
        });
    }
    out
}

fn compare_characters(a: &[Complex64], b: &[Complex64]) -> Ordering {
    const EPS: f64 = 1e-6;
    for (x, y) in a.iter().zip(b) {
        if (x.re - y.re).abs() > EPS {
            return x.re.total_cmp(&y.re);
        }
        if (x.im - y.im).abs() > EPS {
            return x.im.total_cmp(&y.im);
        }
    }
    Ordering::Equal
}

fn finish(group: GroupTable, mut irreps: Vec<Irrep>) -> IrrepSet {
    let chars: Vec<Vec<Complex64>> = irreps.iter().map(Irrep::character).collect();
    let mut order: Vec<usize> = (0..irreps.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (&irreps[i], &irreps[j]);
        b.is_trivial()
            .cmp(&a.is_trivial())
            .then(a.dim.cmp(&b.dim))
            .then_with(|| compare_characters(&chars[i], &chars[j]))
    });
    let mut sorted: Vec<Irrep> = order
        .into_iter()
        .map(|i| std::mem::replace(&mut irreps[i], Irrep { label: 0, dim: 0, mats: vec![] }))
        .collect();
    if let Some(first) = sorted.first_mut() {
        if first.is_trivial() {
            // exact ones, not numerically-recovered ones
            for m in &mut first.mats {
                m[(0, 0)] = ONE;
            }
        }
    }
    IrrepSet::from_parts(group, sorted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group;

    fn set(s: &str) -> IrrepSet {
        irrep_set(&build_group(&s.parse().unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn z2_has_trivial_and_alternating() {
        let s = set("cyclic:2");
        assert_eq!(s.dims(), vec![1, 1]);
        assert_eq!(s.irreps()[0].character(), vec![ONE, ONE]);
        let alt = s.irreps()[1].character();
        assert!((alt[0] - ONE).norm() < 1e-15 && (alt[1] + ONE).norm() < 1e-15);
    }

    #[test]
    fn z4_characters_are_powers_of_i() {
        let s = set("cyclic:4");
        assert_eq!(s.len(), 4);
        // every character is x -> i^{kx} for some k, each k exactly once
        let mut found = [false; 4];
        for irrep in s.irreps() {
            let chi = irrep.character();
            let k = (0..4)
                .find(|&k| (0..4).all(|x| (chi[x] - root_of_unity(k * x, 4)).norm() < 1e-12))
                .expect("a power-of-i character");
            found[k] = true;
        }
        assert!(found.iter().all(|&f| f));
    }

    #[test]
    fn s3_dimensions() {
        let s = set("symmetric:3");
        assert_eq!(s.dims(), vec![1, 1, 2]);
        assert_eq!(s.dims().iter().map(|d| d * d).sum::<usize>(), 6);
        assert!(verify_irrep_set(&s).passes(UNITARY_TOLERANCE));
    }

    #[test]
    fn dimension_sums_match_orders() {
        for spec in [
            "cyclic:1",
            "cyclic:7",
            "dihedral:1",
            "dihedral:2",
            "dihedral:5",
            "dihedral:8",
            "symmetric:4",
            "product:cyclic:2,dihedral:3",
            "product:cyclic:3,cyclic:3",
        ] {
            let s = set(spec);
            let sum: usize = s.dims().iter().map(|d| d * d).sum();
            assert_eq!(sum, s.group().order(), "{spec}");
            assert!(s.irreps()[0].is_trivial(), "{spec}");
            assert!(s.dims().windows(2).skip(1).all(|w| w[0] <= w[1]), "{spec}");
            let report = verify_irrep_set(&s);
            assert!(report.passes(UNITARY_TOLERANCE), "{spec}: {report:?}");
        }
    }

    #[test]
    fn ordering_is_deterministic() {
        let g = build_group(&"symmetric:4".parse().unwrap()).unwrap();
        let a = irrep_set_numerical(&g, 1).unwrap();
        let b = irrep_set_numerical(&g, 5).unwrap();
        assert_eq!(a.dims(), vec![1, 1, 2, 3, 3]);
        for (x, y) in a.irreps().iter().zip(b.irreps()) {
            assert_eq!(
                compare_characters(&x.character(), &y.character()),
                Ordering::Equal
            );
        }
    }

    #[test]
    fn numerical_path_matches_dihedral_closed_form() {
        let g = build_group(&"dihedral:6".parse().unwrap()).unwrap();
        let closed = irrep_set(&g).unwrap();
        let numeric = irrep_set_numerical(&g, 3).unwrap();
        assert_eq!(closed.dims(), numeric.dims());
        for (x, y) in closed.irreps().iter().zip(numeric.irreps()) {
            let (cx, cy) = (x.character(), y.character());
            assert!(cx.iter().zip(&cy).all(|(a, b)| (a - b).norm() < 1e-9));
        }
    }

    #[test]
    fn plancherel_sums_to_one() {
        let s = set("symmetric:4");
        let total: f64 = (0..s.len()).map(|l| s.plancherel(l)).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }
}
