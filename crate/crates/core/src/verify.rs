//! Brute-force oracles and property suites for the closed forms.
//!
//! The oracles never reuse the code they check. Subgroup states come from
//! literal oracle application followed by a partial trace. Measurements come
//! from the full-matrix PGM. The closed forms live in the model and in the
//! block routines.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::discrimination::{
    conjugate_optimum, pgm, pgm_blocks, povm_twirl, random_povm, success, success_from_character,
    uniform_priors, Povm,
};
use crate::error::{HspError, Result};
use crate::group::{build_group, conjugacy_family, left_cosets, GroupSpec, GroupTable, Subgroup, SubgroupFamily};
use crate::linalg::{max_abs_diff, random_complex_gaussian};
use crate::model::{
    injection_count, make_slate, normalized_slate, random_slate, slate_betas,
    subgroup_state_average, subgroup_state_closed, DensityOperator, OracleMode, ResponseSpace, Slate,
    SlateKind, ENUMERATION_CAP,
};
use crate::rep::{convolve, fourier_blocks, inverse_fourier, irrep_set, lambda_support, verify_irrep_set};

pub const THEOREM_TOLERANCE: f64 = 1e-10;
pub const LINEARITY_TOLERANCE: f64 = 1e-10;
pub const ORDERING_TOLERANCE: f64 = 1e-10;
pub const CONJUGATE_TOLERANCE: f64 = 1e-9;
pub const LEMMA_TOLERANCE: f64 = 1e-12;
pub const TWIRL_TOLERANCE: f64 = 1e-9;
pub const IRREP_TOLERANCE: f64 = 1e-9;
pub const ROUND_TRIP_TOLERANCE: f64 = 1e-10;
pub const CONVOLUTION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationReport {
    pub case_id: String,
    pub max_abs_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub instances: usize,
    pub oracle_functions: u128,
}

impl DeviationReport {
    pub fn new(
        case_id: impl Into<String>,
        max_abs_deviation: f64,
        tolerance: f64,
        instances: usize,
        oracle_functions: u128,
    ) -> Self {
        DeviationReport {
            case_id: case_id.into(),
            max_abs_deviation,
            tolerance,
            pass: max_abs_deviation <= tolerance,
            instances,
            oracle_functions,
        }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.pass = self.max_abs_deviation <= tolerance;
        self
    }
}

fn oracle_count(space: &ResponseSpace, family: &SubgroupFamily, mode: OracleMode) -> u128 {
    family
        .members()
        .iter()
        .map(|h| match mode {
            OracleMode::Full => injection_count(space.size(), h.index()),
            OracleMode::Sample { count, .. } => count as u128,
        })
        .sum()
}

fn brute_states(
    group: &GroupTable,
    family: &SubgroupFamily,
    slate: &Slate,
    mode: OracleMode,
) -> Result<Vec<DensityOperator>> {
    family
        .members()
        .iter()
        .map(|h| subgroup_state_average(group, &left_cosets(group, h)?, slate, mode))
        .collect()
}

/// Closed-form subgroup states against the oracle average.
pub fn check_theorem_equivalence(
    group: &GroupTable,
    subgroup: &Subgroup,
    d: usize,
    slates: &[Slate],
    mode: OracleMode,
) -> Result<DeviationReport> {
    let cosets = left_cosets(group, subgroup)?;
    let index = cosets.index();
    if d < index {
        return Err(HspError::ResponseTooSmall { d, index });
    }
    if mode == OracleMode::Full && injection_count(d, index) > ENUMERATION_CAP {
        return Err(HspError::EnumerationCap {
            count: injection_count(d, index),
            cap: ENUMERATION_CAP,
        });
    }
    let mut worst: f64 = 0.0;
    for v in slates {
        if v.space().size() != d {
            return Err(HspError::DimensionMismatch {
                expected: d,
                found: v.space().size(),
            });
        }
        let closed = subgroup_state_closed(group, subgroup, d, slate_betas(v).beta0_sq)?;
        let average = subgroup_state_average(group, &cosets, v, mode)?;
        worst = worst.max(max_abs_diff(closed.matrix(), average.matrix()));
    }
    let per_slate = match mode {
        OracleMode::Full => injection_count(d, cosets.index()),
        OracleMode::Sample { count, .. } => count as u128,
    };
    Ok(DeviationReport::new(
        format!("theorem {} H={:?} D={d}", group.label(), subgroup.elements()),
        worst,
        THEOREM_TOLERANCE,
        slates.len(),
        per_slate * slates.len() as u128,
    ))
}

/// `n` seeded random slates on the canonical space of size `d`.
pub fn random_slates(d: usize, n: usize, seed: u64) -> Result<Vec<Slate>> {
    let space = ResponseSpace::with_size(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| random_slate(&space, &mut rng)).collect())
}

fn canonical_slates(space: &ResponseSpace) -> Result<Vec<Slate>> {
    [SlateKind::Standard, SlateKind::Character, SlateKind::Constant]
        .into_iter()
        .map(|k| make_slate(space, k))
        .collect()
}

/// `S_v(𝓔)` from brute-force states against `|β₀|²/K + (1 − |β₀|²) S_{v_c}(𝓔)`
/// on random slates and random measurements, plus the canonical slates.
pub fn check_linearity(
    group: &GroupTable,
    family: &SubgroupFamily,
    d: usize,
    n_slates: usize,
    n_povms: usize,
    seed: u64,
) -> Result<DeviationReport> {
    let space = ResponseSpace::with_size(d)?;
    let k = family.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut slates = canonical_slates(&space)?;
    slates.extend((0..n_slates).map(|_| random_slate(&space, &mut rng)));
    let character = make_slate(&space, SlateKind::Character)?;
    let char_states = brute_states(group, family, &character, OracleMode::Full)?;
    let slate_states = slates
        .iter()
        .map(|v| brute_states(group, family, v, OracleMode::Full))
        .collect::<Result<Vec<_>>>()?;
    let mut worst: f64 = 0.0;
    for _ in 0..n_povms {
        let e = random_povm(group.order(), k, &mut rng)?;
        let s_vc = success(&char_states, &e)?.success;
        for (v, states) in slates.iter().zip(&slate_states) {
            let b0 = slate_betas(v).beta0_sq.clamp(0.0, 1.0);
            let predicted = success_from_character(b0, s_vc.clamp(0.0, 1.0), k)?;
            worst = worst.max((success(states, &e)?.success - predicted).abs());
        }
    }
    Ok(DeviationReport::new(
        format!("linearity {} K={k} D={d}", group.label()),
        worst,
        LINEARITY_TOLERANCE,
        slates.len() * n_povms,
        oracle_count(&space, family, OracleMode::Full) * (slates.len() + 1) as u128,
    ))
}

/// Outcome of the ordering check for the character-query PGM.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderingReport {
    pub report: DeviationReport,
    pub s_character: f64,
    pub one_over_k: f64,
    /// Whether some pair of family members has different states.
    pub states_differ: bool,
    pub strict_improvement: bool,
    /// Slates where an equality held without the matching `β₀` condition, or
    /// the other way round.
    pub equality_mismatches: Vec<String>,
    pub rows: Vec<OrderingRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderingRow {
    pub slate: String,
    pub beta0_sq: f64,
    pub success: f64,
}

impl OrderingReport {
    pub fn pass(&self) -> bool {
        self.report.pass
            && self.equality_mismatches.is_empty()
            && (!self.states_differ || self.strict_improvement)
    }
}

/// `1/K ≤ S_v(𝓜) ≤ S_{v_c}(𝓜)` with the equality cases, where `𝓜` is the
/// block PGM for the character query. The deviation is the largest violation
/// of either inequality.
pub fn check_ordering(
    group: &GroupTable,
    family: &SubgroupFamily,
    d: usize,
    n_slates: usize,
    seed: u64,
) -> Result<OrderingReport> {
    let space = ResponseSpace::with_size(d)?;
    let set = irrep_set(group)?;
    let k = family.len();
    let one_over_k = 1.0 / k as f64;
    let m = pgm_blocks(&set, family, d)?.to_full(&set)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut named: Vec<(String, Slate)> = vec![
        ("character".into(), make_slate(&space, SlateKind::Character)?),
        ("standard".into(), make_slate(&space, SlateKind::Standard)?),
        ("constant".into(), make_slate(&space, SlateKind::Constant)?),
    ];
    // constant slate times a phase: |β₀| = 1
    let phase = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    let d_amp = 1.0 / (d as f64).sqrt();
    named.push(("constant-phase".into(), normalized_slate(&space, vec![phase * d_amp; d])?));
    // random slate with the constant component removed: β₀ = 0
    let mut w: Vec<Complex64> = (0..d).map(|_| random_complex_gaussian(&mut rng)).collect();
    let mean = w.iter().sum::<Complex64>() / d as f64;
    w.iter_mut().for_each(|x| *x -= mean);
    named.push(("mean-free".into(), normalized_slate(&space, w)?));
    for i in 0..n_slates {
        named.push((format!("random-{i}"), random_slate(&space, &mut rng)));
    }

    let char_states = brute_states(group, family, &named[0].1, OracleMode::Full)?;
    let s_vc = success(&char_states, &m)?.success;
    let mut worst: f64 = 0.0;
    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    for (name, v) in &named {
        let b0 = slate_betas(v).beta0_sq;
        let s = success(&brute_states(group, family, v, OracleMode::Full)?, &m)?.success;
        worst = worst.max(s - s_vc).max(one_over_k - s);
        let at_top = (s - s_vc).abs() <= ORDERING_TOLERANCE;
        let at_bottom = (s - one_over_k).abs() <= ORDERING_TOLERANCE;
        let beta_zero = b0 <= ORDERING_TOLERANCE;
        let beta_one = (1.0 - b0).abs() <= ORDERING_TOLERANCE;
        // with identical states every slate sits at both bounds
        if s_vc - one_over_k > ORDERING_TOLERANCE && (at_top != beta_zero || at_bottom != beta_one) {
            mismatches.push(name.clone());
        }
        rows.push(OrderingRow {
            slate: name.clone(),
            beta0_sq: b0,
            success: s,
        });
    }
    let states_differ = char_states
        .iter()
        .any(|a| char_states.iter().any(|b| max_abs_diff(a.matrix(), b.matrix()) > 1e-9));
    let report = DeviationReport::new(
        format!("ordering {} K={k} D={d}", group.label()),
        worst.max(0.0),
        ORDERING_TOLERANCE,
        named.len(),
        oracle_count(&space, family, OracleMode::Full) * named.len() as u128,
    );
    Ok(OrderingReport {
        report,
        s_character: s_vc,
        one_over_k,
        states_differ,
        strict_improvement: s_vc > one_over_k + 1e-6,
        equality_mismatches: mismatches,
        rows,
    })
}

/// `(1/n)‖Σ v_i‖² ≤ Σ ‖v_i‖²` with equality exactly for equal vectors.
pub fn check_lemma_inequality(n_vectors: usize, dim: usize, trials: usize, seed: u64) -> DeviationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let norm_sq = |v: &[Complex64]| v.iter().map(|x| x.norm_sqr()).sum::<f64>();
    let sides = |vs: &[Vec<Complex64>]| {
        let mut sum = vec![Complex64::new(0.0, 0.0); dim];
        for v in vs {
            sum.iter_mut().zip(v).for_each(|(s, x)| *s += x);
        }
        (norm_sq(&sum) / vs.len() as f64, vs.iter().map(|v| norm_sq(v)).sum::<f64>())
    };
    let unit = |rng: &mut ChaCha8Rng| {
        let v: Vec<Complex64> = (0..dim).map(|_| random_complex_gaussian(rng)).collect();
        let n = norm_sq(&v).sqrt();
        v.into_iter().map(|x| x / n).collect::<Vec<_>>()
    };
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let vs: Vec<Vec<Complex64>> = (0..n_vectors).map(|_| unit(&mut rng)).collect();
        let (lhs, rhs) = sides(&vs);
        // violation, or failure to be strict for distinct vectors
        worst = worst.max(lhs - rhs);
        if n_vectors > 1 && rhs - lhs <= LEMMA_TOLERANCE {
            worst = worst.max(1.0);
        }
        let same = vec![vs[0].clone(); n_vectors];
        let (lhs, rhs) = sides(&same);
        worst = worst.max((lhs - rhs).abs());
    }
    if n_vectors <= dim {
        let basis: Vec<Vec<Complex64>> = (0..n_vectors)
            .map(|i| {
                let mut e = vec![Complex64::new(0.0, 0.0); dim];
                e[i] = Complex64::new(1.0, 0.0);
                e
            })
            .collect();
        let (lhs, rhs) = sides(&basis);
        worst = worst.max((lhs - 1.0).abs()).max((rhs - n_vectors as f64).abs());
    }
    DeviationReport::new(
        format!("lemma n={n_vectors} dim={dim}"),
        worst,
        LEMMA_TOLERANCE,
        trials,
        0,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjugateRow {
    pub d: usize,
    pub formula: f64,
    pub oracle: f64,
    pub standard_limit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjugateCheck {
    pub report: DeviationReport,
    pub rows: Vec<ConjugateRow>,
    pub nonincreasing: bool,
    /// Gap to the standard-slate value at the largest D is below the gap at the smallest.
    pub approaches_standard: bool,
}

impl ConjugateCheck {
    pub fn pass(&self) -> bool {
        self.report.pass && self.nonincreasing && self.approaches_standard
    }
}

/// The conjugate-family formula for the character query against the
/// full-matrix PGM evaluated on brute-force states, for each `D`.
pub fn check_conjugate_formula(
    group: &GroupTable,
    subgroup: &Subgroup,
    d_range: std::ops::RangeInclusive<usize>,
) -> Result<ConjugateCheck> {
    let set = irrep_set(group)?;
    let family = conjugacy_family(group, subgroup)?;
    let nc = family.len() as f64;
    let standard_limit =
        subgroup.order() as f64 / nc * lambda_support(&set, subgroup)?.plancherel_mass;
    let mut worst: f64 = 0.0;
    let mut rows = Vec::new();
    let mut functions = 0u128;
    for d in d_range {
        let space = ResponseSpace::with_size(d)?;
        let v = make_slate(&space, SlateKind::Character)?;
        let states = brute_states(group, &family, &v, OracleMode::Full)?;
        functions += oracle_count(&space, &family, OracleMode::Full);
        let oracle = success(&states, &pgm(&states, &uniform_priors(family.len()))?)?.success;
        let formula = conjugate_optimum(group, subgroup, d, 0.0, &set)?;
        let constant = conjugate_optimum(group, subgroup, d, 1.0, &set)?;
        worst = worst.max((formula - oracle).abs()).max((constant - 1.0 / nc).abs());
        rows.push(ConjugateRow {
            d,
            formula,
            oracle,
            standard_limit,
        });
    }
    let nonincreasing = rows
        .windows(2)
        .all(|w| w[1].formula <= w[0].formula + CONJUGATE_TOLERANCE);
    let gap = |r: &ConjugateRow| (r.formula - r.standard_limit).abs();
    let approaches_standard = match (rows.first(), rows.last()) {
        (Some(a), Some(b)) if rows.len() > 1 => gap(b) < gap(a) || gap(a) <= CONJUGATE_TOLERANCE,
        _ => true,
    };
    let report = DeviationReport::new(
        format!("conjugate {} |H|={}", group.label(), subgroup.order()),
        worst,
        CONJUGATE_TOLERANCE,
        rows.len(),
        functions,
    );
    Ok(ConjugateCheck {
        report,
        rows,
        nonincreasing,
        approaches_standard,
    })
}

/// Conditional matrices before and after the twirl, for random POVMs and the
/// canonical slates plus one random slate.
pub fn check_twirl(
    group: &GroupTable,
    family: &SubgroupFamily,
    d: usize,
    n_povms: usize,
    seed: u64,
) -> Result<DeviationReport> {
    let space = ResponseSpace::with_size(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut slates = canonical_slates(&space)?;
    slates.push(random_slate(&space, &mut rng));
    let states = slates
        .iter()
        .map(|v| brute_states(group, family, v, OracleMode::Full))
        .collect::<Result<Vec<_>>>()?;
    let mut worst: f64 = 0.0;
    for _ in 0..n_povms {
        let e: Povm = random_povm(group.order(), family.len(), &mut rng)?;
        let t = povm_twirl(group, &e)?;
        for s in &states {
            worst = worst.max(success(s, &e)?.conditional_max_diff(&success(s, &t)?));
        }
    }
    Ok(DeviationReport::new(
        format!("twirl {} K={} D={d}", group.label(), family.len()),
        worst,
        TWIRL_TOLERANCE,
        n_povms * slates.len(),
        oracle_count(&space, family, OracleMode::Full) * slates.len() as u128,
    ))
}

/// Irrep defects, Fourier round trip and the convolution theorem for one group.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepresentationCheck {
    pub group: String,
    pub dimension_sum_ok: bool,
    pub irreps: DeviationReport,
    pub round_trip: DeviationReport,
    pub convolution: DeviationReport,
}

impl RepresentationCheck {
    pub fn pass(&self) -> bool {
        self.dimension_sum_ok && self.irreps.pass && self.round_trip.pass && self.convolution.pass
    }
}

pub fn check_representations(group: &GroupTable, seed: u64) -> Result<RepresentationCheck> {
    let set = irrep_set(group)?;
    let v = verify_irrep_set(&set);
    let n = group.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random = || (0..n).map(|_| random_complex_gaussian(&mut rng)).collect::<Vec<_>>();
    let (phi, psi) = (random(), random());
    let fphi = fourier_blocks(&set, &phi)?;
    let back = inverse_fourier(&set, &fphi)?;
    let round_trip = phi.iter().zip(&back).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let lhs = fourier_blocks(&set, &convolve(group, &phi, &psi)?)?;
    let rhs = fphi.mul(&fourier_blocks(&set, &psi)?);
    let label = group.label().to_string();
    let defect = v
        .max_unitarity_defect
        .max(v.max_homomorphism_defect)
        .max(v.max_schur_defect);
    Ok(RepresentationCheck {
        dimension_sum_ok: v.dimension_sum_ok() && v.has_trivial_first,
        irreps: DeviationReport::new(format!("irreps {label}"), defect, IRREP_TOLERANCE, set.len(), 0),
        round_trip: DeviationReport::new(format!("round-trip {label}"), round_trip, ROUND_TRIP_TOLERANCE, 1, 0),
        convolution: DeviationReport::new(
            format!("convolution {label}"),
            lhs.max_abs_diff(&rhs),
            CONVOLUTION_TOLERANCE,
            1,
            0,
        ),
        group: label,
    })
}

/// Every group the builder supports up to `max_order`, including products
/// of two non-trivial factors.
pub fn small_group_specs(max_order: usize) -> Vec<GroupSpec> {
    let mut base = Vec::new();
    for n in 1..=max_order {
        base.push(GroupSpec::Cyclic(n));
    }
    for n in 1..=max_order / 2 {
        base.push(GroupSpec::Dihedral(n));
    }
    for n in 1..=5 {
        if GroupSpec::Symmetric(n).order().is_some_and(|o| o <= max_order) {
            base.push(GroupSpec::Symmetric(n));
        }
    }
    let mut all = base.clone();
    for a in &base {
        for b in &base {
            let (oa, ob) = (a.order().unwrap_or(0), b.order().unwrap_or(0));
            if oa >= 2 && ob >= 2 && oa * ob <= max_order {
                all.push(GroupSpec::Product(Box::new(a.clone()), Box::new(b.clone())));
            }
        }
    }
    all
}

/// Builds a group from its spec text; convenience for the suites.
pub fn group(spec: &str) -> Result<GroupTable> {
    build_group(&spec.parse()?)
}
