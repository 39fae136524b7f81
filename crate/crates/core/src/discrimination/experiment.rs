use super::{pgm, pgm_blocks, success, trivial_povm, uniform_priors, Povm, SuccessReport};
use crate::error::{HspError, Result};
use crate::group::{left_cosets, GroupTable, SubgroupFamily};
use crate::model::{
    slate_betas, subgroup_state_average, subgroup_state_closed, DensityOperator, OracleMode,
    ResponseSpace, Slate,
};
use crate::rep::IrrepSet;

/// Tolerance for treating a slate as the constant slate.
const CONSTANT_SLATE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Measurement {
    /// Full-matrix PGM for the states of the slate being evaluated.
    Pgm,
    /// Blockwise PGM for the character-query states, used for every slate.
    PgmCharacter,
    Trivial,
    Custom { name: String, povm: Povm },
}

impl Measurement {
    pub fn name(&self) -> &str {
        match self {
            Measurement::Pgm => "pgm",
            Measurement::PgmCharacter => "pgm-character",
            Measurement::Trivial => "trivial",
            Measurement::Custom { name, .. } => name,
        }
    }
}

/// A group, a subgroup family and a response space.
#[derive(Debug, Clone)]
pub struct Experiment {
    set: IrrepSet,
    family: SubgroupFamily,
    space: ResponseSpace,
    conjugate: bool,
}

impl Experiment {
    pub fn new(set: IrrepSet, family: SubgroupFamily, space: ResponseSpace) -> Result<Self> {
        for h in family.members() {
            h.check_parent(set.group())?;
        }
        let index = family.max_index();
        if space.size() < index {
            return Err(HspError::ResponseTooSmall {
                d: space.size(),
                index,
            });
        }
        let conjugate = family.is_conjugacy_class(set.group());
        Ok(Experiment {
            set,
            family,
            space,
            conjugate,
        })
    }

    pub fn group(&self) -> &GroupTable {
        self.set.group()
    }

    pub fn irreps(&self) -> &IrrepSet {
        &self.set
    }

    pub fn family(&self) -> &SubgroupFamily {
        &self.family
    }

    pub fn space(&self) -> &ResponseSpace {
        &self.space
    }

    pub fn is_conjugate_family(&self) -> bool {
        self.conjugate
    }

    fn check_slate(&self, slate: &Slate) -> Result<()> {
        if slate.space() != &self.space {
            return Err(HspError::DimensionMismatch {
                expected: self.space.size(),
                found: slate.space().size(),
            });
        }
        Ok(())
    }

    /// Subgroup states from the closed form.
    pub fn states(&self, slate: &Slate) -> Result<Vec<DensityOperator>> {
        self.check_slate(slate)?;
        let b0 = slate_betas(slate).beta0_sq;
        self.family
            .members()
            .iter()
            .map(|h| subgroup_state_closed(self.group(), h, self.space.size(), b0))
            .collect()
    }

    /// Subgroup states by averaging over oracle functions.
    pub fn brute_force_states(&self, slate: &Slate, mode: OracleMode) -> Result<Vec<DensityOperator>> {
        self.check_slate(slate)?;
        self.family
            .members()
            .iter()
            .map(|h| subgroup_state_average(self.group(), &left_cosets(self.group(), h)?, slate, mode))
            .collect()
    }

    /// The concrete POVM a measurement stands for when querying with `slate`.
    pub fn povm(&self, measurement: &Measurement, slate: &Slate) -> Result<Povm> {
        let k = self.family.len();
        match measurement {
            Measurement::Pgm => pgm(&self.states(slate)?, &uniform_priors(k)),
            Measurement::PgmCharacter => {
                pgm_blocks(&self.set, &self.family, self.space.size())?.to_full(&self.set)
            }
            Measurement::Trivial => trivial_povm(self.group().order(), k),
            Measurement::Custom { povm, .. } => {
                if povm.len() != k || povm.dim() != self.group().order() {
                    return Err(HspError::InvalidPovm(format!(
                        "measurement has {} elements of dimension {}, expected {k} of dimension {}",
                        povm.len(),
                        povm.dim(),
                        self.group().order()
                    )));
                }
                Ok(povm.clone())
            }
        }
    }

    /// Whether the success of `measurement` is known to be the optimum.
    pub fn is_exact(&self, measurement: &Measurement, beta0_sq: f64) -> bool {
        if (1.0 - beta0_sq).abs() <= CONSTANT_SLATE {
            return true;
        }
        match measurement {
            Measurement::Trivial => true,
            Measurement::Pgm | Measurement::PgmCharacter => self.conjugate,
            Measurement::Custom { .. } => false,
        }
    }

    pub fn evaluate(&self, slate: &Slate, slate_tag: &str, measurement: &Measurement) -> Result<SuccessReport> {
        let states = self.states(slate)?;
        let povm = self.povm(measurement, slate)?;
        let b0 = slate_betas(slate).beta0_sq;
        Ok(success(&states, &povm)?
            .tagged(measurement.name(), slate_tag)
            .with_lower_bound(!self.is_exact(measurement, b0)))
    }
}
