//! Embedding problems, central obstructions and constructive lifting.

mod central;
mod dwyer;
mod file;
mod problem;
mod unitri;

pub use central::{
    lift_policies, lift_through, obstruction_class, obstruction_cocycle, twist_values, CentralStep,
    LargestLift, LiftPolicy, PatternStep, RhoStep, SmallestLift,
};
pub use dwyer::{
    build_dwyer_problem, build_dwyer_problem_to, obstruction_vs_massey, rho_obstruction, twist,
    verify_twisting, DwyerProblem, DwyerTarget, ObstructionVsMassey, PairHom, TwistingCheck,
};
pub use file::ProblemFile;
pub use problem::{
    central_data, lift_solvers, BruteSolver, CentralProblemData, EmbeddingProblem, FiberSolver,
    LiftSolver,
};
pub use unitri::{
    dwyer_base, for_each_lift, unitri_solvers, LayeredSolver, UnitriFiberSolver, UnitriHom,
    UnitriProblem, UnitriSolver, FIBER_LIMIT,
};
