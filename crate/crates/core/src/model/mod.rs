//! Response spaces, slates, oracle functions and subgroup states.

mod oracle;
mod response;
mod slate;
mod state;

pub use oracle::{enumerate_oracles, injection_count, OracleFunction, OracleMode, ENUMERATION_CAP};
pub use response::ResponseSpace;
pub use slate::{make_slate, normalized_slate, random_slate, slate_betas, Betas, Slate, SlateKind};
pub use state::{
    query_register_state, subgroup_phi, subgroup_state_average, subgroup_state_blocks,
    subgroup_state_blocks_for, subgroup_state_closed, DensityOperator, STATE_TOLERANCE,
};
