use anyhow::{bail, Result};
use serde::Serialize;
use serde_json::json;

use hsp_core::discrimination::{
    conjugate_optimum, pgm, success, uniform_priors, Experiment, Measurement, Povm, SuccessReport,
};
use hsp_core::group::{build_group, conjugacy_family, subgroup_closure, GroupSpec, GroupTable, Subgroup, SubgroupFamily};
use hsp_core::linalg::{c, CMat};
use hsp_core::model::{make_slate, slate_betas, OracleMode, ResponseSpace, Slate, SlateKind};
use hsp_core::rep::irrep_set;
use hsp_core::verify::{
    check_conjugate_formula, check_lemma_inequality, check_linearity, check_ordering,
    check_representations, check_theorem_equivalence, check_twirl, random_slates, small_group_specs,
    DeviationReport, CONJUGATE_TOLERANCE,
};

use crate::output::{cell, num, Output, Table};
use crate::scenario::Scenario;

/// Settings shared by every subcommand.
pub struct Options {
    pub seed: u64,
    pub sample: Option<usize>,
    pub tolerance: Option<f64>,
}

impl Options {
    fn mode(&self) -> OracleMode {
        match self.sample {
            Some(count) => OracleMode::Sample { count, seed: self.seed },
            None => OracleMode::Full,
        }
    }
}

fn report_table(reports: &[SuccessReport], betas: &[f64]) -> (Table, Table) {
    let mut main = Table::new(&["slate", "measurement", "S", "is_lower_bound", "beta0_sq"]);
    let mut cond = Table::new(&["slate", "measurement", "k", "k_prime", "mu"]);
    for (r, b0) in reports.iter().zip(betas) {
        main.push(vec![
            r.slate.clone(),
            r.measurement.clone(),
            num(r.success),
            cell(r.is_lower_bound),
            num(*b0),
        ]);
        for (k, row) in r.conditional.iter().enumerate() {
            for (kp, mu) in row.iter().enumerate() {
                cond.push(vec![r.slate.clone(), r.measurement.clone(), cell(k), cell(kp), num(*mu)]);
            }
        }
    }
    (main, cond)
}

fn deviation_table(reports: &[DeviationReport]) -> Table {
    let mut t = Table::new(&["case_id", "max_abs_deviation", "tolerance", "pass", "instances", "oracle_functions"]);
    for r in reports {
        t.push(vec![
            r.case_id.clone(),
            num(r.max_abs_deviation),
            num(r.tolerance),
            cell(r.pass),
            cell(r.instances),
            cell(r.oracle_functions),
        ]);
    }
    t
}

/// A yes/no property recorded in the same shape as a deviation report.
fn flag(case_id: String, ok: bool) -> DeviationReport {
    DeviationReport::new(case_id, if ok { 0.0 } else { 1.0 }, 0.0, 1, 0)
}

fn override_tolerance(reports: Vec<DeviationReport>, opts: &Options) -> Vec<DeviationReport> {
    match opts.tolerance {
        // yes/no rows keep their zero tolerance
        Some(t) => reports
            .into_iter()
            .map(|r| if r.tolerance > 0.0 { r.with_tolerance(t) } else { r })
            .collect(),
        None => reports,
    }
}

fn evaluate_all(
    exp: &Experiment,
    slates: &[(String, Slate)],
    measurements: &[Measurement],
) -> Result<(Vec<SuccessReport>, Vec<f64>)> {
    let mut reports = Vec::new();
    let mut betas = Vec::new();
    for (name, slate) in slates {
        let b0 = slate_betas(slate).beta0_sq;
        for m in measurements {
            reports.push(exp.evaluate(slate, name, m)?);
            betas.push(b0);
        }
    }
    Ok((reports, betas))
}

#[derive(Serialize)]
struct RunJson<'a> {
    scenario: &'a str,
    group: String,
    family: Vec<Vec<usize>>,
    moduli: &'a [usize],
    d: usize,
    seed: u64,
    reports: &'a [SuccessReport],
    verification: &'a [DeviationReport],
}

pub fn run(scenario: &Scenario, opts: &Options) -> Result<Output> {
    let exp = &scenario.experiment;
    let (reports, betas) = evaluate_all(exp, &scenario.slates, &scenario.measurements)?;
    let verification = override_tolerance(run_verification(scenario, opts)?, opts);
    let (main, cond) = report_table(&reports, &betas);
    let json = serde_json::to_value(RunJson {
        scenario: &scenario.name,
        group: scenario.group_spec.to_string(),
        family: exp.family().members().iter().map(|h| h.elements().to_vec()).collect(),
        moduli: exp.space().moduli(),
        d: exp.space().size(),
        seed: opts.seed,
        reports: &reports,
        verification: &verification,
    })?;
    let mut sections = vec![("conditional", cond)];
    if !verification.is_empty() {
        sections.push(("verify", deviation_table(&verification)));
    }
    Ok(Output {
        main,
        sections,
        failed: verification.iter().any(|r| !r.pass),
        json,
    })
}

fn run_verification(scenario: &Scenario, opts: &Options) -> Result<Vec<DeviationReport>> {
    let exp = &scenario.experiment;
    let v = &scenario.verify;
    let g = exp.group();
    let family = exp.family();
    let d = exp.space().size();
    let mut out = Vec::new();
    if v.theorem {
        let mode = match (opts.sample, v.sample) {
            (Some(count), _) | (None, Some(count)) => OracleMode::Sample { count, seed: opts.seed },
            (None, None) => OracleMode::Full,
        };
        let slates: Vec<Slate> = scenario.slates.iter().map(|(_, s)| s.clone()).collect();
        for h in family.members() {
            out.push(check_theorem_equivalence(g, h, d, &slates, mode)?);
        }
    }
    if v.linearity {
        out.push(check_linearity(g, family, d, 20, 5, opts.seed)?);
    }
    if v.ordering {
        let r = check_ordering(g, family, d, 20, opts.seed)?;
        out.push(flag(format!("{} strict improvement", r.report.case_id), !r.states_differ || r.strict_improvement));
        out.push(flag(format!("{} equality cases", r.report.case_id), r.equality_mismatches.is_empty()));
        out.push(r.report);
    }
    if v.twirl {
        out.push(check_twirl(g, family, d, 5, opts.seed)?);
    }
    if v.conjugate {
        if !exp.is_conjugate_family() {
            bail!("`verify.conjugate` needs a family of conjugate subgroups");
        }
        out.extend(conjugate_reports(g, &family.members()[0], d..=d + 5)?);
    }
    Ok(out)
}

fn conjugate_reports(
    g: &GroupTable,
    h: &Subgroup,
    range: std::ops::RangeInclusive<usize>,
) -> Result<Vec<DeviationReport>> {
    let r = check_conjugate_formula(g, h, range)?;
    Ok(vec![
        flag(format!("{} nonincreasing in D", r.report.case_id), r.nonincreasing),
        flag(format!("{} approaches standard", r.report.case_id), r.approaches_standard),
        r.report,
    ])
}

pub fn deutsch(opts: &Options) -> Result<Output> {
    let g = build_group(&GroupSpec::Cyclic(2))?;
    let family = SubgroupFamily::new(vec![Subgroup::whole(&g), Subgroup::trivial(&g)])?;
    let space = ResponseSpace::with_size(2)?;
    let exp = Experiment::new(irrep_set(&g)?, family, space.clone())?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let proj = |v: [f64; 2]| CMat::from_fn(2, 2, |a, b| c(v[a] * v[b], 0.0));
    let measurements = [
        Measurement::Pgm,
        Measurement::Custom {
            name: "pm-basis".into(),
            povm: Povm::new(vec![proj([h, h]), proj([h, -h])])?,
        },
        Measurement::PgmCharacter,
        Measurement::Trivial,
    ];
    let slates: Vec<(String, Slate)> = [
        ("standard", SlateKind::Standard),
        ("character", SlateKind::Character),
        ("constant", SlateKind::Constant),
    ]
    .into_iter()
    .map(|(n, k)| Ok((n.to_string(), make_slate(&space, k)?)))
    .collect::<Result<_>>()?;
    let (reports, betas) = evaluate_all(&exp, &slates, &measurements)?;
    let (main, cond) = report_table(&reports, &betas);
    Ok(Output {
        main,
        sections: vec![("conditional", cond)],
        json: json!({ "scenario": "deutsch", "seed": opts.seed, "reports": reports }),
        failed: false,
    })
}

fn group_and_subgroup(group: &str, subgroup: &str) -> Result<(GroupTable, Subgroup)> {
    let g = build_group(&group.parse()?)?;
    let h = subgroup_closure(&g, &g.parse_generators(subgroup)?)?;
    Ok((g, h))
}

#[derive(Serialize)]
struct ConjugateRow {
    slate: String,
    d: usize,
    beta0_sq: f64,
    formula: f64,
    oracle: f64,
    abs_diff: f64,
    pass: bool,
}

/// Formula values next to the full-matrix PGM on brute-force states.
pub fn conjugate(group: &str, subgroup: &str, d: usize, opts: &Options) -> Result<Output> {
    let (g, h) = group_and_subgroup(group, subgroup)?;
    let set = irrep_set(&g)?;
    let family = conjugacy_family(&g, &h)?;
    let exp = Experiment::new(set.clone(), family, ResponseSpace::with_size(d)?)?;
    let tol = opts.tolerance.unwrap_or(CONJUGATE_TOLERANCE);
    let mut rows = Vec::new();
    for (name, kind) in [
        ("character", SlateKind::Character),
        ("standard", SlateKind::Standard),
        ("constant", SlateKind::Constant),
    ] {
        let slate = make_slate(exp.space(), kind)?;
        let b0 = slate_betas(&slate).beta0_sq.clamp(0.0, 1.0);
        let states = exp.brute_force_states(&slate, opts.mode())?;
        let oracle = success(&states, &pgm(&states, &uniform_priors(states.len()))?)?.success;
        let formula = conjugate_optimum(&g, &h, d, b0, &set)?;
        let abs_diff = (formula - oracle).abs();
        rows.push(ConjugateRow {
            slate: name.into(),
            d,
            beta0_sq: b0,
            formula,
            oracle,
            abs_diff,
            pass: abs_diff <= tol,
        });
    }
    let mut main = Table::new(&["slate", "d", "beta0_sq", "formula", "oracle", "abs_diff", "pass"]);
    for r in &rows {
        main.push(vec![
            r.slate.clone(),
            cell(r.d),
            num(r.beta0_sq),
            num(r.formula),
            num(r.oracle),
            num(r.abs_diff),
            cell(r.pass),
        ]);
    }
    Ok(Output {
        main,
        sections: Vec::new(),
        failed: rows.iter().any(|r| !r.pass),
        json: json!({
            "group": g.label(),
            "subgroup": h.elements(),
            "family_size": exp.family().len(),
            "tolerance": tol,
            "rows": rows,
        }),
    })
}

/// Optimum success of the character and standard queries as `D` grows.
pub fn sweep_d(group: &str, subgroup: &str, d_min: usize, d_max: usize) -> Result<Output> {
    let (g, h) = group_and_subgroup(group, subgroup)?;
    let set = irrep_set(&g)?;
    if d_min > d_max {
        bail!("--d-min {d_min} exceeds --d-max {d_max}");
    }
    let mut main = Table::new(&["d", "s_character", "s_standard"]);
    let mut rows = Vec::new();
    for d in d_min..=d_max {
        let sc = conjugate_optimum(&g, &h, d, 0.0, &set)?;
        let ss = conjugate_optimum(&g, &h, d, 1.0 / d as f64, &set)?;
        main.push(vec![cell(d), num(sc), num(ss)]);
        rows.push(json!({ "d": d, "s_character": sc, "s_standard": ss }));
    }
    Ok(Output {
        main,
        sections: Vec::new(),
        failed: false,
        json: json!({ "group": g.label(), "subgroup": h.elements(), "rows": rows }),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Theorem,
    Linearity,
    Ordering,
    Lemma,
    Conjugate,
    Irreps,
    Twirl,
    All,
}

struct Fixtures {
    z2: GroupTable,
    deutsch: SubgroupFamily,
    s3: GroupTable,
    transposition: Subgroup,
    conjugates: SubgroupFamily,
}

fn fixtures() -> Result<Fixtures> {
    let z2 = build_group(&GroupSpec::Cyclic(2))?;
    let deutsch = SubgroupFamily::new(vec![Subgroup::whole(&z2), Subgroup::trivial(&z2)])?;
    let s3 = build_group(&GroupSpec::Symmetric(3))?;
    let transposition = subgroup_closure(&s3, &s3.parse_generators("(12)")?)?;
    let conjugates = conjugacy_family(&s3, &transposition)?;
    Ok(Fixtures {
        z2,
        deutsch,
        s3,
        transposition,
        conjugates,
    })
}

fn suite_reports(suite: Suite, f: &Fixtures, opts: &Options) -> Result<Vec<DeviationReport>> {
    let seed = opts.seed;
    let mut out = Vec::new();
    match suite {
        Suite::Theorem => {
            let z4 = build_group(&GroupSpec::Cyclic(4))?;
            let d4 = build_group(&GroupSpec::Dihedral(4))?;
            let a3 = subgroup_closure(&f.s3, &f.s3.parse_generators("(123)")?)?;
            let cases = [
                (&z4, Subgroup::new(&z4, [0, 2])?, 4),
                (&f.s3, a3, 2),
                (&f.s3, f.transposition.clone(), 3),
                (&f.s3, f.transposition.clone(), 4),
                (&d4, Subgroup::new(&d4, [0, 2])?, 4),
            ];
            for (i, (g, h, d)) in cases.into_iter().enumerate() {
                let slates = random_slates(d, 5, seed.wrapping_add(i as u64))?;
                out.push(check_theorem_equivalence(g, &h, d, &slates, opts.mode())?);
            }
        }
        Suite::Linearity => {
            out.push(check_linearity(&f.z2, &f.deutsch, 2, 20, 5, seed)?);
            out.push(check_linearity(&f.s3, &f.conjugates, 3, 20, 5, seed)?);
        }
        Suite::Ordering => {
            for (g, fam, d) in [(&f.z2, &f.deutsch, 2), (&f.s3, &f.conjugates, 3)] {
                let r = check_ordering(g, fam, d, 20, seed)?;
                out.push(flag(format!("{} strict improvement", r.report.case_id), !r.states_differ || r.strict_improvement));
                out.push(flag(format!("{} equality cases", r.report.case_id), r.equality_mismatches.is_empty()));
                out.push(r.report);
            }
        }
        Suite::Lemma => {
            for (n, dim) in [(2, 2), (5, 4), (3, 9)] {
                out.push(check_lemma_inequality(n, dim, 1000, seed));
            }
        }
        Suite::Conjugate => {
            out.extend(conjugate_reports(&f.s3, &f.transposition, 3..=8)?);
            let a3 = subgroup_closure(&f.s3, &f.s3.parse_generators("(123)")?)?;
            out.extend(conjugate_reports(&f.s3, &a3, 2..=7)?);
        }
        Suite::Irreps => {
            for spec in small_group_specs(24) {
                let r = check_representations(&build_group(&spec)?, seed)?;
                out.push(flag(format!("dimensions {}", r.group), r.dimension_sum_ok));
                out.extend([r.irreps, r.round_trip, r.convolution]);
            }
        }
        Suite::Twirl => {
            out.push(check_twirl(&f.z2, &f.deutsch, 2, 5, seed)?);
            out.push(check_twirl(&f.s3, &f.conjugates, 3, 5, seed)?);
        }
        Suite::All => {
            for s in [
                Suite::Theorem,
                Suite::Linearity,
                Suite::Ordering,
                Suite::Lemma,
                Suite::Conjugate,
                Suite::Irreps,
                Suite::Twirl,
            ] {
                out.extend(suite_reports(s, f, opts)?);
            }
        }
    }
    Ok(out)
}

pub fn verify(suite: Suite, opts: &Options) -> Result<Output> {
    let reports = override_tolerance(suite_reports(suite, &fixtures()?, opts)?, opts);
    Ok(Output {
        main: deviation_table(&reports),
        sections: Vec::new(),
        failed: reports.iter().any(|r| !r.pass),
        json: json!({ "seed": opts.seed, "reports": reports }),
    })
}
