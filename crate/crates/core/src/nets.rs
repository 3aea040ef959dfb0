//! Iterated limits in metric spaces: x_ij → r_i as j grows, r_i → r, and a
//! diagonal j(i) with x_{i,j(i)} → r.

use std::fmt;
use std::sync::Arc;

use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::lab::limits::{trivial_limit_check, TrivialLimitReport};
use crate::lab::matrix::{frac, q, Q};
use crate::lab::neighborhood::{passes_strictly, NeighborhoodSpec};
use crate::lab::sequence::SubgroupSequence;
use crate::lab::{ClosedSubgroupRep, ConcreteGroup, LabError, Prepared};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum NetsError {
    #[error("row {0} does not come within tolerance of its limit for j <= jMax")]
    RowDivergent(u64),
    #[error(transparent)]
    Lab(#[from] LabError),
}

/// A space in which "a lies within tol of b" can be decided.
pub trait Proximity: Sync {
    type Point: Clone + Send + Sync + fmt::Display;

    fn within(&self, a: &Self::Point, b: &Self::Point, tol: &Q) -> Result<bool, NetsError>;

    /// The distance, when the space has an exact one.
    fn distance(&self, _a: &Self::Point, _b: &Self::Point) -> Option<Q> {
        None
    }
}

/// ℚ ⊂ ℝ with |a − b|.
pub struct RationalLine;

impl Proximity for RationalLine {
    type Point = Q;

    fn within(&self, a: &Q, b: &Q, tol: &Q) -> Result<bool, NetsError> {
        Ok((a - b).abs() <= *tol)
    }

    fn distance(&self, a: &Q, b: &Q) -> Option<Q> {
        Some((a - b).abs())
    }
}

/// Closed subgroups of a concrete group, with L within tol of H meaning
/// L ∈ 𝒰(H; Ball(ρ), Ball(tol)). Answers inside the margin count as "not
/// within".
pub struct ChabautyScale {
    pub group: ConcreteGroup,
    pub rho: Q,
}

/// A subgroup with its display form, for traces.
#[derive(Clone, Debug)]
pub struct Subgroup(pub ClosedSubgroupRep);

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Proximity for ChabautyScale {
    type Point = Subgroup;

    fn within(&self, a: &Subgroup, b: &Subgroup, tol: &Q) -> Result<bool, NetsError> {
        let spec = NeighborhoodSpec::ball(self.rho.clone(), tol.clone())?;
        let pa = Prepared::new(&a.0, &self.group)?;
        let pb = Prepared::new(&b.0, &self.group)?;
        Ok(passes_strictly(&pa, &pb, &spec)?)
    }
}

pub type Eval<P> = Arc<dyn Fn(u64, u64) -> Result<P, NetsError> + Send + Sync>;
pub type RowLimit<P> = Arc<dyn Fn(u64) -> Result<P, NetsError> + Send + Sync>;

/// x_ij together with the row limits r_i and, optionally, their limit r.
pub struct DoubleSequence<P> {
    pub eval: Eval<P>,
    pub row_limits: RowLimit<P>,
    pub limit: Option<P>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DiagonalStep {
    pub i: u64,
    pub j: u64,
    pub tol: String,
    pub term: String,
    /// Distance from r_i to r, when exact.
    pub row_deviation: Option<String>,
    /// Distance from x_{i,j(i)} to r, when exact.
    pub distance_to_limit: Option<String>,
    /// Whether x_{i,j(i)} lies within the final tolerance of r.
    pub near_limit: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DiagonalReport {
    pub steps: Vec<DiagonalStep>,
    pub limit_tol: Option<String>,
    /// Least i from which every later diagonal term is near the limit.
    pub enters_and_stays_from: Option<u64>,
}

/// j(i) = least j ≤ j_max with x_ij within tol(i) of r_i, for i = 1..i_max.
/// When `ds.limit` and `limit_tol` are given, each diagonal term is also
/// compared with the limit.
pub fn diagonal_subsequence<S: Proximity>(
    space: &S,
    ds: &DoubleSequence<S::Point>,
    tol: &(dyn Fn(u64) -> Q + Sync),
    i_max: u64,
    j_max: u64,
    limit_tol: Option<&Q>,
) -> Result<DiagonalReport, NetsError> {
    let rows: Vec<u64> = (1..=i_max).collect();
    let steps: Vec<DiagonalStep> = rows
        .par_iter()
        .map(|&i| -> Result<DiagonalStep, NetsError> {
            let r_i = (ds.row_limits)(i)?;
            let t = tol(i);
            let mut found = None;
            for j in 1..=j_max {
                let x = (ds.eval)(i, j)?;
                if space.within(&x, &r_i, &t)? {
                    found = Some((j, x));
                    break;
                }
            }
            let (j, x) = found.ok_or(NetsError::RowDivergent(i))?;
            let (row_deviation, distance_to_limit, near_limit) = match &ds.limit {
                Some(r) => (
                    space.distance(&r_i, r).map(|d| d.to_string()),
                    space.distance(&x, r).map(|d| d.to_string()),
                    match limit_tol {
                        Some(lt) => Some(space.within(&x, r, lt)?),
                        None => None,
                    },
                ),
                None => (None, None, None),
            };
            Ok(DiagonalStep {
                i,
                j,
                tol: t.to_string(),
                term: x.to_string(),
                row_deviation,
                distance_to_limit,
                near_limit,
            })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<_, _>>()?;
    let enters_and_stays_from = if steps.iter().all(|s| s.near_limit.is_some()) && !steps.is_empty() {
        let stay = steps.iter().rev().take_while(|s| s.near_limit == Some(true)).count() as u64;
        (stay > 0).then(|| i_max - stay + 1)
    } else {
        None
    };
    Ok(DiagonalReport {
        steps,
        limit_tol: limit_tol.map(|t| t.to_string()),
        enters_and_stays_from,
    })
}

/// Condition (b) against condition (a) of the trivial-limit criterion at
/// several scales.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EquivalenceReport {
    pub sequence: String,
    /// H_n → {e} at every scale.
    pub condition_b: bool,
    /// No selection h_n ∈ H_n clusters at a point other than e.
    pub condition_a: bool,
    /// No such selection defined at every index.
    pub condition_a_prime: bool,
    pub agree: bool,
    pub per_scale: Vec<TrivialLimitReport>,
}

pub fn trivial_limit_equivalence(
    seq: &SubgroupSequence,
    scales: &[NeighborhoodSpec],
    n_max: u64,
) -> Result<EquivalenceReport, LabError> {
    let per_scale: Vec<TrivialLimitReport> = scales
        .iter()
        .map(|s| trivial_limit_check(seq, s, n_max))
        .collect::<Result<_, _>>()?;
    let condition_b = per_scale.iter().all(|r| r.stable);
    let condition_a = per_scale.iter().all(|r| r.condition_a);
    let condition_a_prime = per_scale.iter().all(|r| r.condition_a_prime);
    Ok(EquivalenceReport {
        sequence: seq.name(),
        condition_b,
        condition_a,
        condition_a_prime,
        agree: condition_a == condition_b,
        per_scale,
    })
}

/// x_ij = ℤ·(1/j, i/j) in ℝ × 𝕋, whose rows tend to the slope-i lines R_i,
/// which in turn tend to ℝ × 𝕋.
pub fn slope_line_double_sequence() -> DoubleSequence<Subgroup> {
    let g = ConcreteGroup::new(1, 1, 0, vec![]).expect("R x T");
    let whole = ClosedSubgroupRep::whole(&g);
    let eval: Eval<Subgroup> = Arc::new(move |i, j| {
        let (i, j) = (i as i64, j as i64);
        Ok(Subgroup(ClosedSubgroupRep::generated_by(&g, vec![vec![frac(1, j), frac(i, j)]])?))
    });
    let row_limits: RowLimit<Subgroup> = Arc::new(|i| Ok(Subgroup(SubgroupSequence::rn(1)?.term(i)?)));
    DoubleSequence {
        eval,
        row_limits,
        limit: Some(Subgroup(whole)),
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DemoReport {
    pub group: String,
    pub rho: String,
    pub epsilon: String,
    pub tolerance_schedule: String,
    pub diagonal: DiagonalReport,
    /// The diagonal as one sequence of cyclic subgroups, generator per index.
    pub cyclic_sequence: Vec<String>,
    pub success: bool,
}

/// Rows searched up to this j.
pub const DEMO_J_MAX: u64 = 2000;

/// Runs the diagonal over [`slope_line_double_sequence`] with tolerances
/// ε/(i+1) and checks the diagonal terms against ℝ × 𝕋 at (ρ, ε).
pub fn demo_corollary(rho: &Q, epsilon: &Q, i_max: u64) -> Result<DemoReport, NetsError> {
    let g = ConcreteGroup::new(1, 1, 0, vec![])?;
    NeighborhoodSpec::ball(rho.clone(), epsilon.clone())?;
    let space = ChabautyScale {
        group: g.clone(),
        rho: rho.clone(),
    };
    let ds = slope_line_double_sequence();
    let eps = epsilon.clone();
    let tol = move |i: u64| &eps / q(i as i64 + 1);
    let diagonal = diagonal_subsequence(&space, &ds, &tol, i_max, DEMO_J_MAX, Some(epsilon))?;
    let cyclic_sequence = diagonal
        .steps
        .iter()
        .map(|s| format!("Z·(1/{j}, {i}/{j})", i = s.i, j = s.j))
        .collect();
    let success = diagonal.enters_and_stays_from.is_some_and(|i| i < i_max);
    Ok(DemoReport {
        group: g.to_string(),
        rho: rho.to_string(),
        epsilon: epsilon.to_string(),
        tolerance_schedule: format!("{epsilon}/(i+1)"),
        diagonal,
        cyclic_sequence,
        success,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_double_sequence() {
        let ds = DoubleSequence {
            eval: Arc::new(|i, j| Ok(frac(1, i as i64) + frac(1, j as i64))),
            row_limits: Arc::new(|i| Ok(frac(1, i as i64))),
            limit: Some(q(0)),
        };
        let tol = |i: u64| frac(1, i as i64);
        let r = diagonal_subsequence(&RationalLine, &ds, &tol, 6, 100, None).unwrap();
        for s in &r.steps {
            assert_eq!(s.j, s.i);
            // distance to the limit is at most tol + row deviation
            assert_eq!(s.distance_to_limit, Some(frac(2, s.i as i64).to_string()));
        }
    }

    #[test]
    fn constant_double_sequence() {
        let ds = DoubleSequence {
            eval: Arc::new(|_, _| Ok(frac(1, 3))),
            row_limits: Arc::new(|_| Ok(frac(1, 3))),
            limit: Some(frac(1, 3)),
        };
        let tol = |_: u64| frac(1, 10);
        let r = diagonal_subsequence(&RationalLine, &ds, &tol, 4, 10, Some(&frac(1, 10))).unwrap();
        assert!(r.steps.iter().all(|s| s.j == 1));
        assert_eq!(r.enters_and_stays_from, Some(1));
    }

    #[test]
    fn divergent_row() {
        let ds = DoubleSequence {
            eval: Arc::new(|i, _| Ok(q(i as i64))),
            row_limits: Arc::new(|_| Ok(q(0))),
            limit: None,
        };
        let tol = |_: u64| frac(1, 2);
        let r = diagonal_subsequence(&RationalLine, &ds, &tol, 3, 5, None);
        assert_eq!(r.unwrap_err(), NetsError::RowDivergent(1));
    }
}
