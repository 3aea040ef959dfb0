use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::matrix::{frac, Q};
use super::LabError;
use crate::grammar::{normalize, GroupExpr};

/// Largest number of coordinates a concrete group may have.
pub const MAX_COORDS: usize = 6;

/// ℝ^d × 𝕋^t × ℤ^z × ℤ(m₁) × ... × ℤ(m_k).
///
/// Points are stored as one rational vector in that coordinate order. The
/// metric is the Euclidean metric on the ℝ, 𝕋 and ℤ blocks (the torus block
/// measured through its closest lift) combined by `max` with the 0/1 metric
/// on the finite block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ConcreteGroup {
    pub d: usize,
    pub t: usize,
    pub z: usize,
    pub moduli: Vec<u64>,
}

impl ConcreteGroup {
    pub fn new(d: usize, t: usize, z: usize, moduli: Vec<u64>) -> Result<Self, LabError> {
        if let Some(&m) = moduli.iter().find(|&&m| m < 2) {
            return Err(LabError::InvalidGroup(format!("cyclic modulus {m} < 2")));
        }
        let g = ConcreteGroup { d, t, z, moduli };
        if g.dim() > MAX_COORDS {
            return Err(LabError::InvalidGroup(format!(
                "{} coordinates, at most {MAX_COORDS} supported",
                g.dim()
            )));
        }
        Ok(g)
    }

    pub fn reals() -> Self {
        ConcreteGroup::new(1, 0, 0, vec![]).unwrap()
    }

    pub fn finite(moduli: Vec<u64>) -> Result<Self, LabError> {
        ConcreteGroup::new(0, 0, 0, moduli)
    }

    pub fn dim(&self) -> usize {
        self.d + self.t + self.z + self.moduli.len()
    }

    /// Number of coordinates outside the finite block.
    pub fn lifted_dim(&self) -> usize {
        self.d + self.t + self.z
    }

    pub fn r_range(&self) -> std::ops::Range<usize> {
        0..self.d
    }

    pub fn t_range(&self) -> std::ops::Range<usize> {
        self.d..self.d + self.t
    }

    pub fn z_range(&self) -> std::ops::Range<usize> {
        self.d + self.t..self.lifted_dim()
    }

    pub fn f_range(&self) -> std::ops::Range<usize> {
        self.lifted_dim()..self.dim()
    }

    pub fn modulus_at(&self, coord: usize) -> Option<u64> {
        coord
            .checked_sub(self.lifted_dim())
            .and_then(|i| self.moduli.get(i).copied())
    }

    pub fn finite_order(&self) -> u64 {
        self.moduli.iter().product()
    }

    pub fn is_finite(&self) -> bool {
        self.lifted_dim() == 0
    }

    /// The character group, with coordinates ℝ^d × 𝕋^z × ℤ^t × F.
    pub fn dual(&self) -> ConcreteGroup {
        ConcreteGroup {
            d: self.d,
            t: self.z,
            z: self.t,
            moduli: self.moduli.clone(),
        }
    }

    /// Coordinate order used for Hermite normal forms: finite, ℤ, 𝕋, ℝ.
    pub(crate) fn hnf_order(&self) -> Vec<usize> {
        self.f_range()
            .chain(self.z_range())
            .chain(self.t_range())
            .chain(self.r_range())
            .collect()
    }

    pub fn from_expr(g: &GroupExpr) -> Result<Self, LabError> {
        let g = normalize(g);
        let (mut d, mut t, mut z) = (0, 0, 0);
        let mut moduli = Vec::new();
        for f in g.factors() {
            match f {
                GroupExpr::Reals => d += 1,
                GroupExpr::Circle => t += 1,
                GroupExpr::Integers => z += 1,
                GroupExpr::Cyclic(m) => moduli.push(*m),
                other => {
                    return Err(LabError::InvalidGroup(format!(
                        "{other} has no concrete model (allowed: R, T, Z, Z(n))"
                    )))
                }
            }
        }
        ConcreteGroup::new(d, t, z, moduli)
    }

    pub fn to_expr(&self) -> GroupExpr {
        let mut fs = vec![GroupExpr::Reals; self.d];
        fs.extend(std::iter::repeat_n(GroupExpr::Circle, self.t));
        fs.extend(std::iter::repeat_n(GroupExpr::Integers, self.z));
        fs.extend(self.moduli.iter().map(|&m| GroupExpr::Cyclic(m)));
        GroupExpr::Product(fs)
    }

    pub fn point(&self, coords: Vec<Q>) -> Result<ConcretePoint, LabError> {
        ConcretePoint::new(self, coords)
    }

    pub fn zero(&self) -> ConcretePoint {
        ConcretePoint {
            coords: vec![Q::zero(); self.dim()],
        }
    }

    /// Lifted Euclidean part and finite part of the norm, squared: the torus
    /// coordinates are measured from their nearest integer.
    pub fn norm_sq(&self, x: &[Q]) -> Q {
        let mut s = Q::zero();
        for (i, c) in x.iter().enumerate().take(self.lifted_dim()) {
            let c = if self.t_range().contains(&i) {
                centered(c)
            } else {
                c.clone()
            };
            s += &c * &c;
        }
        let finite_nonzero = self
            .f_range()
            .any(|i| !x[i].to_integer().mod_floor(&BigInt::from(self.moduli[i - self.lifted_dim()])).is_zero());
        if finite_nonzero && s < Q::one() {
            Q::one()
        } else {
            s
        }
    }
}

impl fmt::Display for ConcreteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim() == 0 {
            return f.write_str("0");
        }
        write!(f, "{}", self.to_expr())
    }
}

/// Representative of `x` modulo 1 in `[-1/2, 1/2)`.
pub fn centered(x: &Q) -> Q {
    let half = frac(1, 2);
    let shifted = x + &half;
    let fl = Q::from_integer(shifted.floor().to_integer());
    x - fl
}

/// Representative of `x` modulo 1 in `[0, 1)`.
pub fn fractional(x: &Q) -> Q {
    x - Q::from_integer(x.floor().to_integer())
}

/// A point of a [`ConcreteGroup`] in reduced form: torus coordinates in
/// `[0, 1)`, finite coordinates in `[0, m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConcretePoint {
    pub coords: Vec<Q>,
}

impl ConcretePoint {
    pub fn new(g: &ConcreteGroup, coords: Vec<Q>) -> Result<Self, LabError> {
        if coords.len() != g.dim() {
            return Err(LabError::InvalidPoint(format!(
                "{} coordinates for a group with {}",
                coords.len(),
                g.dim()
            )));
        }
        let mut out = coords;
        for i in g.t_range() {
            out[i] = fractional(&out[i]);
        }
        for i in g.z_range().chain(g.f_range()) {
            if !out[i].is_integer() {
                return Err(LabError::InvalidPoint(format!(
                    "coordinate {i} = {} must be an integer",
                    out[i]
                )));
            }
        }
        for i in g.f_range() {
            let m = BigInt::from(g.moduli[i - g.lifted_dim()]);
            out[i] = Q::from_integer(out[i].to_integer().mod_floor(&m));
        }
        Ok(ConcretePoint { coords: out })
    }

    pub fn from_ints(g: &ConcreteGroup, coords: &[(i64, i64)]) -> Result<Self, LabError> {
        ConcretePoint::new(g, coords.iter().map(|&(n, d)| frac(n, d)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for ConcretePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl Serialize for ConcretePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coords.iter().map(|c| c.to_string()))
    }
}

/// Rational square root when `x` is a perfect square of a rational.
pub fn rational_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Q::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse;
    use crate::lab::matrix::q;

    #[test]
    fn from_expr_counts_blocks() {
        let g = ConcreteGroup::from_expr(&parse("R x Z(6) x T").unwrap()).unwrap();
        assert_eq!((g.d, g.t, g.z), (1, 1, 0));
        assert_eq!(g.moduli, vec![2, 3]);
        assert!(ConcreteGroup::from_expr(&parse("R x Q").unwrap()).is_err());
        assert!(ConcreteGroup::from_expr(&parse("R^7").unwrap()).is_err());
    }

    #[test]
    fn points_are_reduced() {
        let g = ConcreteGroup::new(1, 1, 0, vec![3]).unwrap();
        let p = g.point(vec![frac(7, 5), frac(-1, 4), q(5)]).unwrap();
        assert_eq!(p.coords, vec![frac(7, 5), frac(3, 4), q(2)]);
        assert!(g.point(vec![q(0), q(0), frac(1, 2)]).is_err());
    }

    #[test]
    fn norm_uses_nearest_lift_and_discrete_finite_metric() {
        let g = ConcreteGroup::new(0, 1, 0, vec![2]).unwrap();
        assert_eq!(g.norm_sq(&[frac(3, 4), q(0)]), frac(1, 16));
        assert_eq!(g.norm_sq(&[q(0), q(1)]), q(1));
        assert_eq!(centered(&frac(1, 2)), frac(-1, 2));
    }

    #[test]
    fn dual_swaps_torus_and_integers() {
        let g = ConcreteGroup::new(1, 2, 1, vec![4]).unwrap();
        let h = g.dual();
        assert_eq!((h.d, h.t, h.z), (1, 1, 2));
        assert_eq!(h.dual(), g);
    }

    #[test]
    fn sqrt() {
        assert_eq!(rational_sqrt(&frac(9, 4)), Some(frac(3, 2)));
        assert_eq!(rational_sqrt(&frac(1, 2)), None);
    }
}
