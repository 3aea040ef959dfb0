//! Basic Chabauty neighborhoods U(H; K, W) = {L : L∩K ⊆ WH and H∩K ⊆ WL}
//! with a margin: answers are only given when they are stable under moving
//! the radius of W by δ = ε/4.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use super::distance::Prepared;
use super::group::{ConcreteGroup, ConcretePoint};
use super::matrix::Q;
use super::subgroup::{member, ClosedSubgroupRep};
use super::LabError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompactSet {
    /// Closed ball of the given radius around the identity.
    Ball(Q),
    Finite(Vec<ConcretePoint>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborhoodSpec {
    pub k: CompactSet,
    /// Radius ε of the identity neighborhood W.
    pub epsilon: Q,
}

impl NeighborhoodSpec {
    pub fn new(k: CompactSet, epsilon: Q) -> Result<Self, LabError> {
        if !epsilon.is_positive() || epsilon >= Q::from_integer(BigInt::from(1)) {
            return Err(LabError::InvalidNeighborhood(format!(
                "epsilon = {epsilon} must lie in (0, 1)"
            )));
        }
        if let CompactSet::Ball(r) = &k {
            if !r.is_positive() {
                return Err(LabError::InvalidNeighborhood(format!("radius {r} must be positive")));
            }
        }
        Ok(NeighborhoodSpec { k, epsilon })
    }

    pub fn ball(rho: Q, epsilon: Q) -> Result<Self, LabError> {
        NeighborhoodSpec::new(CompactSet::Ball(rho), epsilon)
    }

    pub fn delta(&self) -> Q {
        &self.epsilon / Q::from_integer(BigInt::from(4))
    }
}

impl Serialize for NeighborhoodSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("NeighborhoodSpec", 2)?;
        match &self.k {
            CompactSet::Ball(r) => st.serialize_field("K", &format!("Ball({r})"))?,
            CompactSet::Finite(ps) => st.serialize_field("K", ps)?,
        }
        st.serialize_field("epsilon", &self.epsilon.to_string())?;
        st.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Membership {
    Yes,
    No,
}

enum Inclusion {
    Holds,
    Fails,
    Borderline(ConcretePoint, Q),
}

/// Does every point of S∩K lie within ε of T? With `strict`, the first
/// point farther than ε − δ ends the search as a failure.
fn inclusion(s: &Prepared, t: &Prepared, spec: &NeighborhoodSpec, strict: bool) -> Result<Inclusion, LabError> {
    let g = s.group();
    if t.is_whole() {
        return Ok(Inclusion::Holds);
    }
    let delta = spec.delta();
    let lo = &spec.epsilon - &delta;
    let hi = &spec.epsilon + &delta;
    let lo_sq = &lo * &lo;
    let hi_sq = &hi * &hi;
    let mut borderline: Option<(ConcretePoint, Q)> = None;
    // Ok(true) when the point settles the inclusion as failed
    let mut check = |coords: &[Q], decisive: bool| -> Result<bool, LabError> {
        let d = t.distance_sq(coords, Some(&hi_sq));
        if strict {
            return Ok(!matches!(d, Some(d) if d <= lo_sq));
        }
        let shown = match d {
            Some(d) if d <= lo_sq => return Ok(false),
            Some(d) if d < hi_sq => d,
            // at least ε + δ away
            Some(d) => {
                if decisive {
                    return Ok(true);
                }
                d
            }
            None => {
                if decisive {
                    return Ok(true);
                }
                hi_sq.clone()
            }
        };
        if borderline.is_none() {
            borderline = Some((ConcretePoint::new(g, coords.to_vec())?, shown));
        }
        Ok(false)
    };
    match &spec.k {
        CompactSet::Finite(points) => {
            for p in points {
                if member(s.rep(), p, g) && check(&p.coords, true)? {
                    return Ok(Inclusion::Fails);
                }
            }
        }
        CompactSet::Ball(rho) => {
            if s.is_trivial() {
                return Ok(Inclusion::Holds);
            }
            let mut failed = Ok(false);
            if s.rep().is_discrete() {
                s.visit_points(rho, &mut |p, _| {
                    failed = check(&p.coords, true);
                    if matches!(failed, Ok(false)) {
                        ControlFlow::Continue(())
                    } else {
                        ControlFlow::Break(())
                    }
                })?;
                if failed? {
                    return Ok(Inclusion::Fails);
                }
            } else {
                let rho_sq = rho * rho;
                s.visit_net(rho, &delta, &mut |coords, n| {
                    failed = check(coords, *n <= rho_sq);
                    if matches!(failed, Ok(false)) {
                        ControlFlow::Continue(())
                    } else {
                        ControlFlow::Break(())
                    }
                })?;
                if failed? {
                    return Ok(Inclusion::Fails);
                }
            }
        }
    }
    Ok(match borderline {
        None => Inclusion::Holds,
        Some((p, d)) => Inclusion::Borderline(p, d),
    })
}

/// Is L in U(H; K, W)?
pub fn in_u(
    l: &ClosedSubgroupRep,
    h: &ClosedSubgroupRep,
    spec: &NeighborhoodSpec,
    g: &ConcreteGroup,
) -> Result<Membership, LabError> {
    let pl = Prepared::new(l, g)?;
    let ph = Prepared::new(h, g)?;
    in_u_prepared(&pl, &ph, spec)
}

pub fn in_u_prepared(
    l: &Prepared,
    h: &Prepared,
    spec: &NeighborhoodSpec,
) -> Result<Membership, LabError> {
    // H∩K ⊆ WL first: it is the inclusion approximants usually fail
    let a = inclusion(h, l, spec, false)?;
    if matches!(a, Inclusion::Fails) {
        return Ok(Membership::No);
    }
    let b = inclusion(l, h, spec, false)?;
    if matches!(b, Inclusion::Fails) {
        return Ok(Membership::No);
    }
    for inc in [a, b] {
        if let Inclusion::Borderline(p, d) = inc {
            return Err(LabError::Borderline {
                point: p.to_string(),
                distance_sq: d.to_string(),
            });
        }
    }
    Ok(Membership::Yes)
}

/// Whether [`in_u_prepared`] answers Yes, stopping at the first point that
/// rules it out. Borderline and No are not told apart.
pub fn passes_strictly(l: &Prepared, h: &Prepared, spec: &NeighborhoodSpec) -> Result<bool, LabError> {
    Ok(matches!(inclusion(h, l, spec, true)?, Inclusion::Holds)
        && matches!(inclusion(l, h, spec, true)?, Inclusion::Holds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::matrix::{frac, q};

    fn lattice(g: &ConcreteGroup, gens: Vec<Vec<Q>>) -> ClosedSubgroupRep {
        ClosedSubgroupRep::generated_by(g, gens).unwrap()
    }

    #[test]
    fn fine_lattice_is_near_the_line() {
        let g = ConcreteGroup::reals();
        let l = lattice(&g, vec![vec![frac(1, 20)]]);
        let spec = NeighborhoodSpec::ball(q(10), frac(1, 10)).unwrap();
        assert_eq!(in_u(&l, &ClosedSubgroupRep::whole(&g), &spec, &g).unwrap(), Membership::Yes);
    }

    #[test]
    fn sparse_lattice_is_near_trivial() {
        let g = ConcreteGroup::reals();
        let l = lattice(&g, vec![vec![q(5)]]);
        let spec = NeighborhoodSpec::ball(q(3), frac(1, 10)).unwrap();
        assert_eq!(in_u(&l, &ClosedSubgroupRep::trivial(&g), &spec, &g).unwrap(), Membership::Yes);
        let l = lattice(&g, vec![vec![q(2)]]);
        assert_eq!(in_u(&l, &ClosedSubgroupRep::trivial(&g), &spec, &g).unwrap(), Membership::No);
    }

    #[test]
    fn finite_compact_set() {
        let g = ConcreteGroup::new(1, 0, 0, vec![2]).unwrap();
        let l = lattice(&g, vec![vec![q(1), q(1)]]);
        let k = CompactSet::Finite(vec![g.point(vec![q(0), q(1)]).unwrap()]);
        let spec = NeighborhoodSpec::new(k, frac(1, 4)).unwrap();
        assert_eq!(in_u(&l, &ClosedSubgroupRep::whole(&g), &spec, &g).unwrap(), Membership::No);
    }

    #[test]
    fn reflexive() {
        let g = ConcreteGroup::new(1, 1, 0, vec![]).unwrap();
        let r2 = crate::lab::subgroup::canonicalize(
            &ClosedSubgroupRep::new(vec![vec![q(1), q(2)]], vec![]),
            &g,
        )
        .unwrap();
        let spec = NeighborhoodSpec::ball(q(2), frac(1, 4)).unwrap();
        assert_eq!(in_u(&r2, &r2, &spec, &g).unwrap(), Membership::Yes);
    }

    #[test]
    fn borderline_is_an_error() {
        let g = ConcreteGroup::reals();
        // gap 1/2 means worst distance 1/4 = ε exactly
        let l = lattice(&g, vec![vec![frac(1, 2)]]);
        let spec = NeighborhoodSpec::ball(q(2), frac(1, 4)).unwrap();
        let r = in_u(&l, &ClosedSubgroupRep::whole(&g), &spec, &g);
        assert!(matches!(r, Err(LabError::Borderline { .. })));
    }

    #[test]
    fn strict_pass_matches_yes() {
        let g = ConcreteGroup::reals();
        let whole = Prepared::new(&ClosedSubgroupRep::whole(&g), &g).unwrap();
        let spec = NeighborhoodSpec::ball(q(4), frac(1, 10)).unwrap();
        for n in 1..12 {
            let l = lattice(&g, vec![vec![frac(1, n)]]);
            let pl = Prepared::new(&l, &g).unwrap();
            let yes = matches!(in_u_prepared(&pl, &whole, &spec), Ok(Membership::Yes));
            assert_eq!(passes_strictly(&pl, &whole, &spec).unwrap(), yes, "n = {n}");
        }
    }

    #[test]
    fn bad_specs() {
        assert!(NeighborhoodSpec::ball(q(1), q(1)).is_err());
        assert!(NeighborhoodSpec::ball(q(0), frac(1, 2)).is_err());
    }
}
