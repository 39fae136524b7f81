//! Scenario documents: parsing and resolution into library objects.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde::Deserialize;

use hsp_core::discrimination::{Experiment, Measurement};
use hsp_core::group::{build_group, conjugacy_family, subgroup_closure, GroupSpec, SubgroupFamily};
use hsp_core::io::import_povm;
use hsp_core::model::{make_slate, ResponseSpace, Slate, SlateKind};
use hsp_core::rep::irrep_set;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: Option<String>,
    pub group: String,
    pub family: FamilySpec,
    pub response: ResponseSpec,
    pub slates: Vec<SlateSpec>,
    pub measurements: Vec<MeasurementSpec>,
    #[serde(default)]
    pub verify: VerifySpec,
    pub seed: Option<u64>,
    pub format: Option<Format>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    /// Generator lists, one per subgroup.
    pub subgroups: Option<Vec<String>>,
    /// A single generator list; the family is all of its conjugates.
    pub conjugates_of: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResponseSpec {
    pub moduli: Option<Vec<usize>>,
    pub d: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlateSpec {
    pub kind: String,
    pub name: Option<String>,
    /// `[re, im]` pairs, only for `kind = "custom"`.
    pub amplitudes: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum MeasurementSpec {
    Named(String),
    File { file: PathBuf, name: Option<String> },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySpec {
    #[serde(default)]
    pub theorem: bool,
    #[serde(default)]
    pub linearity: bool,
    #[serde(default)]
    pub ordering: bool,
    #[serde(default)]
    pub twirl: bool,
    #[serde(default)]
    pub conjugate: bool,
    /// Oracle functions to sample per subgroup instead of full enumeration.
    pub sample: Option<usize>,
}

/// A scenario with every reference resolved.
pub struct Scenario {
    pub name: String,
    pub group_spec: GroupSpec,
    pub experiment: Experiment,
    pub slates: Vec<(String, Slate)>,
    pub measurements: Vec<Measurement>,
    pub verify: VerifySpec,
    pub seed: Option<u64>,
    pub format: Option<Format>,
}

pub fn load(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: ScenarioFile = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let default_name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".into());
    resolve(file, base, default_name)
}

pub fn resolve(file: ScenarioFile, base: &Path, default_name: String) -> Result<Scenario> {
    let group_spec: GroupSpec = file.group.parse()?;
    let group = build_group(&group_spec)?;

    let family = match (&file.family.subgroups, &file.family.conjugates_of) {
        (Some(list), None) => {
            let members = list
                .iter()
                .map(|gens| Ok(subgroup_closure(&group, &group.parse_generators(gens)?)?))
                .collect::<Result<Vec<_>>>()?;
            SubgroupFamily::new(members)?
        }
        (None, Some(gens)) => {
            let h = subgroup_closure(&group, &group.parse_generators(gens)?)?;
            conjugacy_family(&group, &h)?
        }
        _ => bail!("family needs exactly one of `subgroups` or `conjugates_of`"),
    };

    let space = match (&file.response.moduli, file.response.d) {
        (Some(m), None) => ResponseSpace::new(m.clone())?,
        (None, Some(d)) => ResponseSpace::with_size(d)?,
        _ => bail!("response needs exactly one of `moduli` or `d`"),
    };

    if file.slates.is_empty() {
        bail!("scenario lists no slates");
    }
    let slates = file
        .slates
        .iter()
        .map(|s| {
            let kind = match (s.kind.as_str(), &s.amplitudes) {
                ("standard", None) => SlateKind::Standard,
                ("character", None) => SlateKind::Character,
                ("constant", None) => SlateKind::Constant,
                ("custom", Some(a)) => SlateKind::Custom(a.iter().map(|p| Complex64::new(p[0], p[1])).collect()),
                ("custom", None) => bail!("custom slate needs `amplitudes`"),
                (k, _) => bail!("unknown slate kind `{k}` (or amplitudes given for a named kind)"),
            };
            let name = s.name.clone().unwrap_or_else(|| s.kind.clone());
            let slate = make_slate(&space, kind).with_context(|| format!("slate `{name}`"))?;
            if slate.was_renormalized() {
                eprintln!("warning: slate `{name}` renormalized to unit norm");
            }
            Ok((name, slate))
        })
        .collect::<Result<Vec<_>>>()?;

    if file.measurements.is_empty() {
        bail!("scenario lists no measurements");
    }
    let measurements = file
        .measurements
        .iter()
        .map(|m| match m {
            MeasurementSpec::Named(n) => match n.as_str() {
                "pgm" => Ok(Measurement::Pgm),
                "pgm-character" => Ok(Measurement::PgmCharacter),
                "trivial" => Ok(Measurement::Trivial),
                other => bail!("unknown measurement `{other}`"),
            },
            MeasurementSpec::File { file, name } => {
                let path = base.join(file);
                let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                let povm = import_povm(&text).with_context(|| format!("loading {}", path.display()))?;
                let name = name.clone().unwrap_or_else(|| {
                    file.file_stem().map_or("file".into(), |s| s.to_string_lossy().into_owned())
                });
                Ok(Measurement::Custom { name, povm })
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let experiment = Experiment::new(irrep_set(&group)?, family, space)?;
    for m in &measurements {
        if let Measurement::Custom { name, .. } = m {
            experiment
                .povm(m, &slates[0].1)
                .with_context(|| format!("measurement `{name}`"))?;
        }
    }

    Ok(Scenario {
        name: file.name.unwrap_or(default_name),
        group_spec,
        experiment,
        slates,
        measurements,
        verify: file.verify,
        seed: file.seed,
        format: file.format,
    })
}
