//! Executable counterparts of the lifting arguments: order-two block lifts,
//! splicing, the filtration drill, the descent, and structural audits.

mod blocks;
mod central_audit;
mod descent;
mod drill;
mod structure;
mod suites;
mod twisting;

pub use blocks::{
    block_lift, block_lift_hom, case_by_case_audit, splice_lifts, CaseByCaseAudit, PreimageOrder,
    SignPattern,
};
pub use central_audit::{central_step_audit, CentralStepAudit, StepAudit};
pub use descent::{demushkin_descent, strong_lift, Descent, DescentStep};
pub use drill::{drill_lift, easy_vanishing_drill, DrillReport};
pub use structure::{filtration_length, structure_audit, FiltrationLength, MAudit, StructureAudit};
pub use suites::{verify_suites, Scope, SuiteContext, VerifySuite};
pub use twisting::{pair_homs, twisting_audit, TwistingAudit, TwistingFailure};
