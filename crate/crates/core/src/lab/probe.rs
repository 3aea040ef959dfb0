//! Searches and certificates around ℝ × F and ℝ².

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::finite::Elements;
use super::group::ConcreteGroup;
use super::matrix::{frac, q, unit_vec, Q};
use super::subgroup::ClosedSubgroupRep;
use super::LabError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeResult {
    /// ℤ·(a, f) is ε-dense in [−ρ, ρ] × F.
    Witness { a: Q, f: Vec<u64> },
    Exhausted,
}

impl Serialize for ProbeResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ProbeResult", 3)?;
        match self {
            ProbeResult::Witness { a, f } => {
                st.serialize_field("result", "witness")?;
                st.serialize_field("a", &a.to_string())?;
                st.serialize_field("f", f)?;
            }
            ProbeResult::Exhausted => {
                st.serialize_field("result", "exhausted")?;
                st.skip_field("a")?;
                st.skip_field("f")?;
            }
        }
        st.end()
    }
}

/// Does the cyclic subgroup generated by (a, f) in ℝ × F come within ε of
/// every point of [−ρ, ρ] × F?
///
/// The points of ℤ·(a, f) over a fixed f₀ form, when f₀ ∈ ⟨f⟩, a coset of
/// (ord(f)·a)ℤ, which is ε-dense in the line exactly when its step is at
/// most 2ε. Over f₀ ∉ ⟨f⟩ there are no points at all, and the finite metric
/// puts everything else at distance 1 > ε.
pub fn candidate_is_witness(moduli: &[u64], epsilon: &Q, a: &Q, f: &[u64]) -> bool {
    let el = Elements::new(moduli);
    let ord = el.element_order(f);
    ord as usize == el.order() && Q::from_integer(BigInt::from(ord)) * a <= q(2) * epsilon
}

/// Exhaustive search for an integral subgroup ℤ·(a, f) of ℝ × F lying in the
/// neighborhood 𝒰(ℝ × F; [−ρ, ρ] × F, Ball(ε)), over a = p/q with
/// 0 < p ≤ q ≤ D and every f. Candidates are ordered by q, then p, then f;
/// the first one that works is returned.
pub fn probe_integral(moduli: &[u64], rho: &Q, epsilon: &Q, denom_bound: u64) -> Result<ProbeResult, LabError> {
    ConcreteGroup::new(1, 0, 0, moduli.to_vec())?;
    if !rho.is_positive() || !epsilon.is_positive() {
        return Err(LabError::InvalidNeighborhood(format!("rho = {rho}, epsilon = {epsilon}")));
    }
    let el = Elements::new(moduli);
    let mut candidates = Vec::new();
    for qd in 1..=denom_bound {
        for p in 1..=qd {
            if p.gcd(&qd) == 1 {
                for i in 0..el.order() {
                    candidates.push((p, qd, i));
                }
            }
        }
    }
    let found = candidates.par_iter().find_first(|&&(p, qd, i)| {
        candidate_is_witness(moduli, epsilon, &frac(p as i64, qd as i64), &el.decode(i))
    });
    Ok(match found {
        Some(&(p, qd, i)) => ProbeResult::Witness {
            a: frac(p as i64, qd as i64),
            f: el.decode(i),
        },
        None => ProbeResult::Exhausted,
    })
}

/// The subgroup ℤ·(a, f) of ℝ × F.
pub fn probe_subgroup(moduli: &[u64], a: &Q, f: &[u64]) -> Result<(ConcreteGroup, ClosedSubgroupRep), LabError> {
    let g = ConcreteGroup::new(1, 0, 0, moduli.to_vec())?;
    let mut v = vec![a.clone()];
    v.extend(f.iter().map(|&c| q(c as i64)));
    let h = ClosedSubgroupRep::generated_by(&g, vec![v])?;
    Ok((g, h))
}

/// Lower bound 1 − 2ε for |det(s₁, s₂)| over all s₁, s₂ ∈ ℝ² with
/// |sᵢ − eᵢ| ≤ ε. When it is positive no cyclic subgroup of ℝ² contains
/// points near both e₁ and e₂.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceCertificate {
    pub epsilon: Q,
    pub determinant_bound: Q,
}

impl Serialize for IndependenceCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("IndependenceCertificate", 2)?;
        st.serialize_field("epsilon", &self.epsilon.to_string())?;
        st.serialize_field("determinantBound", &self.determinant_bound.to_string())?;
        st.end()
    }
}

pub fn independence_obstruction(epsilon: &Q) -> Result<IndependenceCertificate, LabError> {
    if !epsilon.is_positive() {
        return Err(LabError::InvalidNeighborhood(format!("epsilon = {epsilon} must be positive")));
    }
    if *epsilon >= frac(1, 2) {
        return Err(LabError::EpsilonTooLarge(epsilon.clone()));
    }
    let one = Q::one();
    let bound = (&one - epsilon) * (&one - epsilon) - epsilon * epsilon;
    Ok(IndependenceCertificate {
        epsilon: epsilon.clone(),
        determinant_bound: bound,
    })
}

/// Argument of φ_ℝ: a rational r ≥ 0 or ∞.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Radius {
    Finite(Q),
    Infinity,
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radius::Finite(r) => write!(f, "{r}"),
            Radius::Infinity => f.write_str("inf"),
        }
    }
}

/// 0 ↦ {0}, r ↦ (1/r)ℤ, ∞ ↦ ℝ.
pub fn phi_r(r: &Radius) -> Result<ClosedSubgroupRep, LabError> {
    let g = ConcreteGroup::reals();
    match r {
        Radius::Infinity => Ok(ClosedSubgroupRep::whole(&g)),
        Radius::Finite(r) if r.is_zero() => Ok(ClosedSubgroupRep::trivial(&g)),
        Radius::Finite(r) if r.is_negative() => Err(LabError::InvalidPoint(format!("phi_R({r}) needs r >= 0"))),
        Radius::Finite(r) => ClosedSubgroupRep::generated_by(&g, vec![unit_vec(1, 0).into_iter().map(|x| x / r).collect()]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Checks density on a 1/100 grid of [−ρ, ρ] for every f₀, by walking
    /// the multiples k·(a, f) directly.
    fn grid_oracle(moduli: &[u64], rho: i64, eps: &Q, a: &Q, f: &[u64]) -> bool {
        let el = Elements::new(moduli);
        let n = el.order() as i64;
        let kmax = (Q::from_integer(BigInt::from(rho + 1)) / a).ceil().to_integer();
        let kmax = i64::try_from(kmax).unwrap() * n + n;
        let points: Vec<(Q, usize)> = (-kmax..=kmax)
            .map(|k| {
                let x: Vec<u64> = f
                    .iter()
                    .zip(moduli)
                    .map(|(&c, &m)| (c as i64 * k).rem_euclid(m as i64) as u64)
                    .collect();
                (Q::from_integer(BigInt::from(k)) * a, el.encode(&x))
            })
            .collect();
        (0..el.order()).all(|f0| {
            (-100 * rho..=100 * rho).all(|t| {
                let x = frac(t, 100);
                points.iter().any(|(y, fy)| *fy == f0 && (y - &x).abs() <= *eps)
            })
        })
    }

    #[test]
    fn cyclic_three() {
        let r = probe_integral(&[3], &q(3), &frac(1, 4), 12).unwrap();
        assert_eq!(r, ProbeResult::Witness { a: frac(1, 6), f: vec![1] });
        assert!(grid_oracle(&[3], 3, &frac(1, 4), &frac(1, 6), &[1]));
        assert!(!grid_oracle(&[3], 3, &frac(1, 4), &frac(1, 5), &[1]));
    }

    #[test]
    fn klein_four_is_exhausted() {
        assert_eq!(probe_integral(&[2, 2], &q(3), &frac(1, 4), 24).unwrap(), ProbeResult::Exhausted);
        assert!(!grid_oracle(&[2, 2], 3, &frac(1, 4), &frac(1, 24), &[1, 1]));
    }

    #[test]
    fn trivial_finite_part() {
        // the first candidate in order is 1/2; 1/4 works as well
        let r = probe_integral(&[], &q(3), &frac(1, 4), 4).unwrap();
        assert_eq!(r, ProbeResult::Witness { a: frac(1, 2), f: vec![] });
        assert!(candidate_is_witness(&[], &frac(1, 4), &frac(1, 4), &[]));
        assert!(grid_oracle(&[], 3, &frac(1, 4), &frac(1, 4), &[]));
    }

    #[test]
    fn independence() {
        assert!(matches!(independence_obstruction(&frac(1, 2)), Err(LabError::EpsilonTooLarge(_))));
        assert_eq!(independence_obstruction(&frac(1, 4)).unwrap().determinant_bound, frac(1, 2));
        assert_eq!(independence_obstruction(&frac(2, 5)).unwrap().determinant_bound, frac(1, 5));
    }

    #[test]
    fn independence_bound_against_corner_enumeration() {
        // det is bilinear, so its minimum over the box sits at a corner
        for eps in [frac(1, 4), frac(2, 5)] {
            let corners = [-eps.clone(), eps.clone()];
            let mut min: Option<Q> = None;
            for a in &corners {
                for b in &corners {
                    for c in &corners {
                        for d in &corners {
                            let det = (q(1) + a) * (q(1) + d) - b * c;
                            min = Some(min.map_or(det.clone(), |m: Q| m.min(det)));
                        }
                    }
                }
            }
            assert_eq!(min.unwrap(), independence_obstruction(&eps).unwrap().determinant_bound);
        }
    }

    #[test]
    fn phi() {
        let g = ConcreteGroup::reals();
        assert!(phi_r(&Radius::Finite(q(0))).unwrap().is_trivial(&g));
        assert!(phi_r(&Radius::Infinity).unwrap().is_whole(&g));
        assert_eq!(phi_r(&Radius::Finite(q(2))).unwrap().discrete_gens, vec![vec![frac(1, 2)]]);
    }
}
