//! Closed subgroups V + Λ of a concrete group, with V a rational subspace of
//! the ℝ and 𝕋 directions and Λ a lattice of lifted points.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::group::{ConcreteGroup, ConcretePoint};
use super::matrix::{self, axpy, common_denominator, rref, to_integer, to_rational, unit_vec, Q};
use super::LabError;

/// A closed subgroup of a concrete group.
///
/// The lattice part is stored on lifts: the implicit generators (unit
/// vectors of the torus block, `mᵢ` times the unit vectors of the finite
/// block) are part of it. After [`canonicalize`] the continuous basis is in
/// reduced row echelon form, the lattice generators are reduced modulo it
/// and form a Hermite normal form basis, so two canonical representations
/// describe the same subgroup exactly when they are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClosedSubgroupRep {
    pub continuous_basis: Vec<Vec<Q>>,
    pub discrete_gens: Vec<Vec<Q>>,
    pub canonical: bool,
}

impl ClosedSubgroupRep {
    pub fn new(continuous_basis: Vec<Vec<Q>>, discrete_gens: Vec<Vec<Q>>) -> Self {
        ClosedSubgroupRep {
            continuous_basis,
            discrete_gens,
            canonical: false,
        }
    }

    pub fn generated_by(g: &ConcreteGroup, gens: Vec<Vec<Q>>) -> Result<Self, LabError> {
        canonicalize(&ClosedSubgroupRep::new(vec![], gens), g)
    }

    pub fn trivial(g: &ConcreteGroup) -> Self {
        canonicalize(&ClosedSubgroupRep::new(vec![], vec![]), g).expect("trivial subgroup")
    }

    pub fn whole(g: &ConcreteGroup) -> Self {
        let n = g.dim();
        let v = g.r_range().chain(g.t_range()).map(|i| unit_vec(n, i)).collect();
        let l = g.z_range().chain(g.f_range()).map(|i| unit_vec(n, i)).collect();
        canonicalize(&ClosedSubgroupRep::new(v, l), g).expect("whole group")
    }

    pub fn is_discrete(&self) -> bool {
        self.continuous_basis.is_empty()
    }

    pub fn is_trivial(&self, g: &ConcreteGroup) -> bool {
        *self == ClosedSubgroupRep::trivial(g)
    }

    pub fn is_whole(&self, g: &ConcreteGroup) -> bool {
        *self == ClosedSubgroupRep::whole(g)
    }

    pub fn v_pivots(&self) -> Vec<usize> {
        self.continuous_basis
            .iter()
            .map(|r| r.iter().position(|x| !x.is_zero()).expect("nonzero basis row"))
            .collect()
    }

    /// Reduces a lifted vector modulo the continuous part.
    pub(crate) fn reduce_mod_v(&self, x: &mut [Q]) {
        for (row, p) in self.continuous_basis.iter().zip(self.v_pivots()) {
            let c = -x[p].clone();
            axpy(x, &c, row);
        }
    }

    /// Order of a subgroup of a finite group.
    pub fn finite_order(&self, g: &ConcreteGroup) -> Option<u64> {
        if !g.is_finite() {
            return None;
        }
        let det: Q = self
            .discrete_gens
            .iter()
            .enumerate()
            .map(|(i, r)| r[g.hnf_order()[i]].clone())
            .fold(Q::one(), |a, b| a * b);
        let ord = Q::from_integer(BigInt::from(g.finite_order())) / det;
        u64::try_from(ord.to_integer()).ok()
    }

    /// Inclusion of closed subgroups.
    pub fn is_subgroup_of(&self, other: &ClosedSubgroupRep, g: &ConcreteGroup) -> bool {
        self.continuous_basis.iter().all(|v| {
            let mut x = v.clone();
            other.reduce_mod_v(&mut x);
            x.iter().all(Zero::is_zero)
        }) && self
            .discrete_gens
            .iter()
            .all(|x| member_lifted(other, x, g))
    }
}

impl fmt::Display for ClosedSubgroupRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |r: &Vec<Q>| {
            r.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        let v: Vec<String> = self.continuous_basis.iter().map(|r| format!("({})", row(r))).collect();
        let l: Vec<String> = self.discrete_gens.iter().map(|r| format!("({})", row(r))).collect();
        write!(f, "span{{{}}} + Z{{{}}}", v.join(", "), l.join(", "))
    }
}

impl Serialize for ClosedSubgroupRep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let rows = |rs: &Vec<Vec<Q>>| -> Vec<Vec<String>> {
            rs.iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect())
                .collect()
        };
        let mut st = s.serialize_struct("ClosedSubgroupRep", 3)?;
        st.serialize_field("continuousBasis", &rows(&self.continuous_basis))?;
        st.serialize_field("discreteGens", &rows(&self.discrete_gens))?;
        st.serialize_field("canonical", &self.canonical)?;
        st.end()
    }
}

fn check_vector(g: &ConcreteGroup, v: &[Q], what: &str) -> Result<(), LabError> {
    if v.len() != g.dim() {
        return Err(LabError::InvalidPoint(format!(
            "{what} has {} coordinates, group has {}",
            v.len(),
            g.dim()
        )));
    }
    Ok(())
}

/// Canonical form: RREF continuous basis, lattice (with the implicit torus
/// and finite generators) reduced modulo it and put in Hermite normal form
/// with the coordinate order finite, ℤ, 𝕋, ℝ.
pub fn canonicalize(h: &ClosedSubgroupRep, g: &ConcreteGroup) -> Result<ClosedSubgroupRep, LabError> {
    let n = g.dim();
    for v in &h.continuous_basis {
        check_vector(g, v, "continuous direction")?;
        if v.iter().enumerate().any(|(i, x)| i >= g.d + g.t && !x.is_zero()) {
            return Err(LabError::InvalidPoint(
                "continuous directions must lie in the R and T blocks".into(),
            ));
        }
    }
    let (v, _) = rref(&h.continuous_basis);
    let partial = ClosedSubgroupRep {
        continuous_basis: v,
        discrete_gens: vec![],
        canonical: false,
    };
    let mut gens: Vec<Vec<Q>> = Vec::new();
    for x in &h.discrete_gens {
        check_vector(g, x, "generator")?;
        for i in g.z_range().chain(g.f_range()) {
            if !x[i].is_integer() {
                return Err(LabError::InvalidPoint(format!(
                    "generator coordinate {i} = {} must be an integer",
                    x[i]
                )));
            }
        }
        gens.push(x.clone());
    }
    gens.extend(g.t_range().map(|i| unit_vec(n, i)));
    for (j, &m) in g.moduli.iter().enumerate() {
        gens.push(matrix::scaled(&unit_vec(n, g.lifted_dim() + j), &matrix::q(m as i64)));
    }
    for x in gens.iter_mut() {
        partial.reduce_mod_v(x);
    }
    let lattice = if gens.is_empty() {
        vec![]
    } else {
        let order = g.hnf_order();
        let den = common_denominator(&gens);
        let ints = to_integer(&gens, &den);
        let permuted: Vec<Vec<BigInt>> = ints
            .iter()
            .map(|r| order.iter().map(|&c| r[c].clone()).collect())
            .collect();
        let h = matrix::hnf(&permuted);
        let mut unpermuted = vec![vec![BigInt::zero(); n]; h.len()];
        for (row, out) in h.iter().zip(unpermuted.iter_mut()) {
            for (k, &c) in order.iter().enumerate() {
                out[c] = row[k].clone();
            }
        }
        to_rational(&unpermuted, &den)
    };
    Ok(ClosedSubgroupRep {
        continuous_basis: partial.continuous_basis,
        discrete_gens: lattice,
        canonical: true,
    })
}

/// First nonzero coordinate in the Hermite order.
pub(crate) fn hnf_pivot(row: &[Q], order: &[usize]) -> usize {
    *order
        .iter()
        .find(|&&c| !row[c].is_zero())
        .expect("nonzero lattice row")
}

fn member_lifted(h: &ClosedSubgroupRep, x: &[Q], g: &ConcreteGroup) -> bool {
    let mut rem = x.to_vec();
    h.reduce_mod_v(&mut rem);
    let order = g.hnf_order();
    for row in &h.discrete_gens {
        let p = hnf_pivot(row, &order);
        let c = &rem[p] / &row[p];
        if !c.is_integer() {
            return false;
        }
        let neg = -c;
        axpy(&mut rem, &neg, row);
    }
    rem.iter().all(Zero::is_zero)
}

/// Exact membership of a point.
pub fn member(h: &ClosedSubgroupRep, x: &ConcretePoint, g: &ConcreteGroup) -> bool {
    if h.canonical {
        member_lifted(h, &x.coords, g)
    } else {
        canonicalize(h, g).is_ok_and(|c| member_lifted(&c, &x.coords, g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::matrix::{frac, q};

    #[test]
    fn rank_one_lattice_is_gcd() {
        let g = ConcreteGroup::reals();
        let h = ClosedSubgroupRep::generated_by(&g, vec![vec![frac(2, 3)], vec![frac(1, 3)]]).unwrap();
        assert_eq!(h.discrete_gens, vec![vec![frac(1, 3)]]);
    }

    #[test]
    fn standard_lattice() {
        let g = ConcreteGroup::new(2, 0, 0, vec![]).unwrap();
        let h = ClosedSubgroupRep::generated_by(&g, vec![vec![q(1), q(0)], vec![q(0), q(1)]]).unwrap();
        assert_eq!(h.discrete_gens, vec![vec![q(1), q(0)], vec![q(0), q(1)]]);
    }

    #[test]
    fn zn_truncation() {
        let g = ConcreteGroup::new(1, 0, 0, vec![3]).unwrap();
        let h = ClosedSubgroupRep::generated_by(&g, vec![vec![frac(1, 5), q(1)]]).unwrap();
        // finite column first in the Hermite order: pivots 1 and then 3/5
        assert_eq!(h.discrete_gens, vec![vec![frac(1, 5), q(1)], vec![frac(3, 5), q(0)]]);
        let x = g.point(vec![frac(7, 5), q(2)]).unwrap();
        // 7 * (1/5, 1) = (7/5, 7 = 1 mod 3), so (7/5, 2) is not a multiple
        assert!(!member(&h, &x, &g));
        let y = g.point(vec![frac(7, 5), q(1)]).unwrap();
        assert!(member(&h, &y, &g));
    }

    #[test]
    fn membership_basics() {
        let g = ConcreteGroup::reals();
        let z = ClosedSubgroupRep::generated_by(&g, vec![vec![q(1)]]).unwrap();
        assert!(member(&z, &g.zero(), &g));
        assert!(!member(&z, &g.point(vec![frac(1, 2)]).unwrap(), &g));
    }

    #[test]
    fn whole_and_trivial() {
        let g = ConcreteGroup::new(1, 1, 1, vec![2]).unwrap();
        let w = ClosedSubgroupRep::whole(&g);
        assert!(w.is_whole(&g));
        assert!(!w.is_trivial(&g));
        let t = ClosedSubgroupRep::trivial(&g);
        assert!(t.is_subgroup_of(&w, &g));
        assert!(!w.is_subgroup_of(&t, &g));
    }

    #[test]
    fn slope_graph_keeps_torus_lattice() {
        let g = ConcreteGroup::new(1, 1, 0, vec![]).unwrap();
        let r3 = canonicalize(
            &ClosedSubgroupRep::new(vec![vec![q(1), q(3)]], vec![]),
            &g,
        )
        .unwrap();
        assert_eq!(r3.continuous_basis, vec![vec![q(1), q(3)]]);
        assert_eq!(r3.discrete_gens, vec![vec![q(0), q(1)]]);
        let p = g.point(vec![frac(1, 2), frac(1, 2)]).unwrap();
        assert!(member(&r3, &p, &g));
    }

    #[test]
    fn finite_orders() {
        let g = ConcreteGroup::finite(vec![4]).unwrap();
        let h = ClosedSubgroupRep::generated_by(&g, vec![vec![q(2)]]).unwrap();
        assert_eq!(h.finite_order(&g), Some(2));
        assert_eq!(ClosedSubgroupRep::whole(&g).finite_order(&g), Some(4));
        assert_eq!(ClosedSubgroupRep::trivial(&g).finite_order(&g), Some(1));
    }
}
