//! Unitriangular matrix groups `U_n(p)`, their pattern quotients, named
//! subgroups and the fiber-product form of `Q_{k,m}`.

mod fiber;
mod matrix;
mod quotient;
mod subgroups;

pub use fiber::{FiberPair, FiberQuotient};
pub use matrix::{is_supported_prime, packed_index, packed_len, UniTriMatrix, MAX_N};
pub use quotient::{positions_with_span, MaterializedQuotient, UnitriQuotient};
pub use subgroups::{
    central_series_ker_phi, filtration_positions, unitri_group, zeta_kappa_targets, CentralSeries,
    NamedSubgroup, SubgroupKind, UniTriGroup, ZetaKappa,
};
