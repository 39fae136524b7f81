//! Measurements on the query register and their success probabilities.

mod experiment;
mod pgm;
mod povm;
mod success;

pub use experiment::{Experiment, Measurement};
pub use pgm::{pgm, pgm_blocks, uniform_priors, KERNEL_CUTOFF};
pub use povm::{povm_twirl, random_povm, trivial_povm, BlockPovm, Povm, POVM_TOLERANCE};
pub use success::{
    conjugate_optimum, success, success_blocks, success_decomposition, success_from_character,
    SuccessDecomposition, SuccessReport,
};
