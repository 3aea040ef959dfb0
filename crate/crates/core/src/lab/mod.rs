//! Exact computations with closed subgroups of ℝ^d × 𝕋^t × ℤ^z × F.
//!
//! Everything is rational. Subgroups are a rational subspace plus a lattice
//! of lifts, distances are computed by exhaustive closest-vector search, and
//! neighborhoods in the Chabauty space are tested with a margin of ε/4.

pub mod annihilator;
pub mod distance;
pub mod finite;
pub mod group;
pub mod limits;
pub mod matrix;
pub mod neighborhood;
pub mod probe;
pub mod sequence;
pub mod subgroup;

use thiserror::Error;

pub use annihilator::{annihilator, pairing};
pub use distance::{dist_point, norm, Distance, Prepared};
pub use finite::{
    abelian_groups_up_to, finite_duality_report, graph_adjoint_check, is_cyclic, subgroup_lattice_finite, FiniteDualityReport,
    FiniteHom,
};
pub use group::{ConcreteGroup, ConcretePoint};
pub use limits::{
    duality_limit_consistency, limit_threshold, trivial_limit_check, DualityReport, LimitReport,
    Threshold, TrivialLimitReport,
};
pub use matrix::Q;
pub use neighborhood::{in_u, CompactSet, Membership, NeighborhoodSpec};
pub use probe::{independence_obstruction, phi_r, probe_integral, ProbeResult, Radius};
pub use sequence::{Family, SubgroupSequence};
pub use subgroup::{canonicalize, member, ClosedSubgroupRep};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LabError {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("invalid neighborhood: {0}")]
    InvalidNeighborhood(String),
    #[error("borderline: point {point} at squared distance {distance_sq} is within the margin; perturb epsilon")]
    Borderline { point: String, distance_sq: String },
    #[error("no lattice point within distance {0}")]
    BoundTooSmall(Q),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("epsilon {0} must be below 1/2")]
    EpsilonTooLarge(Q),
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
}
