//! Integral and numeral approximability of locally compact abelian groups.
//!
//! The symbolic side ([`grammar`], [`duality`], [`structure`], [`classify`])
//! decides, for a group given by an expression, whether it lies in the
//! Chabauty closure of its subgroups isomorphic to ℤ or to ℝ. The concrete
//! side ([`lab`], [`nets`]) checks convergence statements exactly on closed
//! subgroups of ℝ^d × 𝕋^t × ℤ^z × F with rational data.

// index loops read better than zips in the matrix code
#![allow(clippy::needless_range_loop)]

pub mod acceptance;
pub mod classify;
pub mod duality;
pub mod grammar;
pub mod lab;
pub mod nets;
pub mod random;
pub mod structure;
pub mod textio;

pub use classify::{
    classify_compact_free, classify_integral, classify_numeral, witness_recipe, CertificatePlan,
    Citation, ClassifyError, TraceStep, Verdict,
};
pub use grammar::{normalize, parse, render, GroupExpr};
