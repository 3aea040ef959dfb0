//! Exact distances to closed subgroups and enumeration of their points in a
//! ball.
//!
//! A subgroup H = V + Λ is split by the value of the finite coordinates: the
//! rows of its Hermite basis with a finite pivot select a fiber, the others
//! span Λ₀ (the elements with zero finite part). Inside a fiber the distance
//! is a closest vector problem for the projection of Λ₀ onto V^⊥, solved by
//! Fincke–Pohst enumeration over an exact Gram–Schmidt basis.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::group::{centered, ConcreteGroup, ConcretePoint};
use super::matrix::{axpy, dot, norm_sq, orthogonal_basis, project_out, Q};
use super::subgroup::{canonicalize, hnf_pivot, ClosedSubgroupRep};
use super::LabError;

/// Gram–Schmidt data of a lattice basis.
#[derive(Clone, Debug)]
struct GramSchmidt {
    bstar: Vec<Vec<Q>>,
    bnorm: Vec<Q>,
    /// mu[j][i] = <b_j, b*_i> / |b*_i|², i < j
    mu: Vec<Vec<Q>>,
}

impl GramSchmidt {
    fn new(basis: &[Vec<Q>]) -> Self {
        let mut bstar: Vec<Vec<Q>> = Vec::new();
        let mut bnorm: Vec<Q> = Vec::new();
        let mut mu = Vec::new();
        for b in basis {
            let mut v = b.clone();
            let mut row = Vec::new();
            for (s, n) in bstar.iter().zip(&bnorm) {
                let m = dot(b, s) / n;
                let neg = -m.clone();
                axpy(&mut v, &neg, s);
                row.push(m);
            }
            bnorm.push(norm_sq(&v));
            bstar.push(v);
            mu.push(row);
        }
        GramSchmidt { bstar, bnorm, mu }
    }

    fn rank(&self) -> usize {
        self.bstar.len()
    }
}

/// Subgroup data prepared for distance queries and point enumeration.
#[derive(Clone, Debug)]
pub struct Prepared {
    group: ConcreteGroup,
    rep: ClosedSubgroupRep,
    whole: bool,
    trivial: bool,
    /// orthogonal basis of V restricted to the lifted coordinates
    v_ortho: Vec<Vec<Q>>,
    /// rows with a finite pivot: (row, pivot column, pivot value)
    fiber_rows: Vec<(Vec<Q>, usize, Q)>,
    /// Λ₀ basis (lifted coordinates) and its projection onto V^⊥
    lambda0: Vec<Vec<Q>>,
    projected: Vec<Vec<Q>>,
    gs: GramSchmidt,
}

/// One fiber: a representative lattice point with the given finite part.
#[derive(Clone, Debug)]
pub struct Fiber {
    pub representative: Vec<Q>,
}

impl Prepared {
    pub fn new(h: &ClosedSubgroupRep, g: &ConcreteGroup) -> Result<Self, LabError> {
        let rep = if h.canonical { h.clone() } else { canonicalize(h, g)? };
        let order = g.hnf_order();
        let lifted = g.lifted_dim();
        let mut fiber_rows = Vec::new();
        let mut lambda0 = Vec::new();
        for row in &rep.discrete_gens {
            let p = hnf_pivot(row, &order);
            if p >= lifted {
                fiber_rows.push((row.clone(), p, row[p].clone()));
            } else {
                lambda0.push(row[..lifted].to_vec());
            }
        }
        let v_ortho = orthogonal_basis(
            &rep.continuous_basis
                .iter()
                .map(|r| r[..lifted].to_vec())
                .collect::<Vec<_>>(),
        );
        let projected: Vec<Vec<Q>> = lambda0.iter().map(|l| project_out(l, &v_ortho)).collect();
        let gs = GramSchmidt::new(&projected);
        Ok(Prepared {
            whole: rep.is_whole(g),
            trivial: rep.is_trivial(g),
            group: g.clone(),
            rep,
            v_ortho,
            fiber_rows,
            lambda0,
            projected,
            gs,
        })
    }

    pub fn rep(&self) -> &ClosedSubgroupRep {
        &self.rep
    }

    pub fn group(&self) -> &ConcreteGroup {
        &self.group
    }

    pub fn is_whole(&self) -> bool {
        self.whole
    }

    pub fn is_trivial(&self) -> bool {
        self.trivial
    }

    /// `x − y` for a lattice point `y` with the same finite part as `x`, if any.
    fn fiber_residual(&self, x: &[Q]) -> Option<Vec<Q>> {
        let mut rem = x.to_vec();
        for (row, p, pv) in &self.fiber_rows {
            let c = &rem[*p] / pv;
            if !c.is_integer() {
                return None;
            }
            let neg = -c;
            axpy(&mut rem, &neg, row);
        }
        self.group
            .f_range()
            .all(|i| rem[i].is_zero())
            .then_some(rem)
    }

    /// All fibers of H: representatives of H modulo Λ₀ + V, one per value of
    /// the finite coordinates.
    pub fn fibers(&self) -> Vec<Fiber> {
        let g = &self.group;
        let mut reps = vec![vec![Q::zero(); g.dim()]];
        for (row, p, pv) in &self.fiber_rows {
            let m = Q::from_integer(BigInt::from(g.modulus_at(*p).expect("finite pivot")));
            let count = (m / pv).to_integer().to_u64().expect("small fiber count");
            let mut next = Vec::with_capacity(reps.len() * count as usize);
            for r in &reps {
                for k in 0..count {
                    let mut v = r.clone();
                    axpy(&mut v, &Q::from_integer(BigInt::from(k)), row);
                    next.push(v);
                }
            }
            reps = next;
        }
        reps.into_iter().map(|representative| Fiber { representative }).collect()
    }

    fn fiber_is_zero(&self, f: &Fiber) -> bool {
        self.group.f_range().all(|i| {
            let m = BigInt::from(self.group.modulus_at(i).unwrap());
            f.representative[i].to_integer().mod_floor(&m).is_zero()
        })
    }

    /// Fincke–Pohst enumeration of the coefficient vectors c with
    /// |t − Σ cᵢ bᵢ|² ≤ radius², where b is the projected Λ₀ basis and t is
    /// already projected. The visitor may shrink the radius.
    fn enumerate<F>(&self, target: &[Q], radius_sq: Q, visit: &mut F)
    where
        F: FnMut(&[BigInt], &Q) -> ControlFlow<(), Option<Q>>,
    {
        let r = self.gs.rank();
        let tau: Vec<Q> = (0..r)
            .map(|i| dot(target, &self.gs.bstar[i]) / &self.gs.bnorm[i])
            .collect();
        let perp = norm_sq(target)
            - tau
                .iter()
                .zip(&self.gs.bnorm)
                .fold(Q::zero(), |acc, (t, n)| acc + t * t * n);
        let mut coeffs = vec![BigInt::zero(); r];
        let mut radius = radius_sq;
        if perp > radius {
            return;
        }
        let _ = self.enum_level(r, &tau, &perp, &mut coeffs, &mut radius, visit);
    }

    fn enum_level<F>(
        &self,
        level: usize,
        tau: &[Q],
        partial: &Q,
        coeffs: &mut Vec<BigInt>,
        radius: &mut Q,
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[BigInt], &Q) -> ControlFlow<(), Option<Q>>,
    {
        if level == 0 {
            if let Some(new_radius) = visit(coeffs, partial)? {
                *radius = new_radius;
            }
            return ControlFlow::Continue(());
        }
        let i = level - 1;
        let mut center = tau[i].clone();
        for j in level..coeffs.len() {
            center -= Q::from_integer(coeffs[j].clone()) * &self.gs.mu[j][i];
        }
        let bn = &self.gs.bnorm[i];
        let cost = |k: &BigInt| {
            let diff = Q::from_integer(k.clone()) - &center;
            &diff * &diff * bn
        };
        let start = (&center + Q::new(BigInt::one(), BigInt::from(2))).floor().to_integer();
        // upward from the nearest integer, then downward
        let mut k = start.clone();
        loop {
            let total = partial + cost(&k);
            if total > *radius {
                break;
            }
            coeffs[i] = k.clone();
            self.enum_level(i, tau, &total, coeffs, radius, visit)?;
            k += 1;
        }
        let mut k = start - 1;
        loop {
            let total = partial + cost(&k);
            if total > *radius {
                break;
            }
            coeffs[i] = k.clone();
            self.enum_level(i, tau, &total, coeffs, radius, visit)?;
            k -= 1;
        }
        coeffs[i] = BigInt::zero();
        ControlFlow::Continue(())
    }

    /// Babai nearest-plane upper bound for the squared distance from `t`.
    fn babai_sq(&self, target: &[Q]) -> Q {
        let mut t = target.to_vec();
        for i in (0..self.gs.rank()).rev() {
            let c = (dot(&t, &self.gs.bstar[i]) / &self.gs.bnorm[i]).round();
            let neg = -c;
            axpy(&mut t, &neg, &self.projected[i]);
        }
        norm_sq(&t)
    }

    /// Squared Euclidean distance from the lifted vector `w` to the affine
    /// lattice Λ₀ + V, if at most `bound_sq` (unbounded when `None`).
    fn fiber_distance_sq(&self, w: &[Q], bound_sq: Option<&Q>) -> Option<Q> {
        let t = project_out(w, &self.v_ortho);
        let upper = self.babai_sq(&t);
        let radius = match bound_sq {
            Some(b) if *b < upper => b.clone(),
            _ => upper,
        };
        let mut best: Option<Q> = None;
        self.enumerate(&t, radius, &mut |_, d| {
            if best.as_ref().is_none_or(|b| d < b) {
                best = Some(d.clone());
            }
            ControlFlow::Continue(Some(d.clone()))
        });
        best
    }

    /// Exact squared distance from the lifted point `x` to H, when it is at
    /// most `bound_sq`.
    pub fn distance_sq(&self, x: &[Q], bound_sq: Option<&Q>) -> Option<Q> {
        let g = &self.group;
        if self.whole {
            return Some(Q::zero());
        }
        if self.trivial {
            let n = g.norm_sq(x);
            return bound_sq.is_none_or(|b| n <= *b).then_some(n);
        }
        let lifted = g.lifted_dim();
        let mut best: Option<Q> = None;
        if let Some(rem) = self.fiber_residual(x) {
            best = self.fiber_distance_sq(&rem[..lifted], bound_sq);
        }
        let one = Q::one();
        let need_others = bound_sq.is_none_or(|b| *b >= one) && !g.moduli.is_empty();
        if need_others && best.as_ref().is_none_or(|b| *b > one) {
            for f in self.fibers() {
                let mut diff = x.to_vec();
                for (a, b) in diff.iter_mut().zip(&f.representative) {
                    *a -= b;
                }
                if self.fiber_residual(&diff).is_some() {
                    continue; // same fiber as x
                }
                let bound = match (&best, bound_sq) {
                    (Some(b), _) => Some(b.clone()),
                    (None, b) => b.cloned(),
                };
                if let Some(d) = self.fiber_distance_sq(&diff[..lifted], bound.as_ref()) {
                    let d = if d < one { one.clone() } else { d };
                    if bound_sq.is_none_or(|b| d <= *b) && best.as_ref().is_none_or(|b| d < *b) {
                        best = Some(d);
                    }
                }
            }
        }
        best
    }

    /// Every point of H (as a reduced point with its squared norm) whose norm
    /// is at most `radius`. H must be discrete.
    pub fn points_in_ball(&self, radius: &Q) -> Result<Vec<(ConcretePoint, Q)>, LabError> {
        let mut out = Vec::new();
        self.visit_points(radius, &mut |p, n| {
            out.push((p, n.clone()));
            ControlFlow::Continue(())
        })?;
        out.sort();
        Ok(out)
    }

    /// The points of [`Prepared::points_in_ball`], unsorted, handed to
    /// `visit` until it breaks.
    pub fn visit_points(
        &self,
        radius: &Q,
        visit: &mut dyn FnMut(ConcretePoint, &Q) -> ControlFlow<()>,
    ) -> Result<(), LabError> {
        assert!(self.rep.is_discrete(), "points_in_ball on a subgroup with continuous part");
        let g = &self.group;
        let lifted = g.lifted_dim();
        let r2 = radius * radius;
        let half = Q::new(BigInt::one(), BigInt::from(2));
        let mut count = 0usize;
        let mut stopped = false;
        for f in self.fibers() {
            let zero_fiber = self.fiber_is_zero(&f);
            if !zero_fiber && *radius < Q::one() {
                continue;
            }
            let y = &f.representative[..lifted];
            let target: Vec<Q> = y.iter().map(|c| -c.clone()).collect();
            let mut err = None;
            self.enumerate(&target, r2.clone(), &mut |c, _| {
                let mut p = y.to_vec();
                for (ci, b) in c.iter().zip(&self.lambda0) {
                    axpy(&mut p, &Q::from_integer(ci.clone()), b);
                }
                if g.t_range().all(|i| p[i] >= -half.clone() && p[i] < half) {
                    let mut coords = p;
                    coords.extend(f.representative[lifted..].iter().cloned());
                    match ConcretePoint::new(g, coords) {
                        Ok(pt) => {
                            let n = g.norm_sq(&pt.coords);
                            if n <= r2 {
                                count += 1;
                                if visit(pt, &n).is_break() {
                                    stopped = true;
                                    return ControlFlow::Break(());
                                }
                            }
                        }
                        Err(e) => {
                            err = Some(e);
                            return ControlFlow::Break(());
                        }
                    }
                    if count > MAX_POINTS {
                        err = Some(LabError::TooLarge(format!(
                            "more than {MAX_POINTS} points in the ball"
                        )));
                        return ControlFlow::Break(());
                    }
                }
                ControlFlow::Continue(None)
            });
            if let Some(e) = err {
                return Err(e);
            }
            if stopped {
                break;
            }
        }
        Ok(())
    }

    /// Points of H on a grid fine enough that every point of H of norm at
    /// most `radius` is within `delta` of a sample. Each sample comes with
    /// its squared norm; samples of norm above `radius + delta` are dropped.
    pub fn net_in_ball(&self, radius: &Q, delta: &Q) -> Result<Vec<(Vec<Q>, Q)>, LabError> {
        let mut out = Vec::new();
        self.visit_net(radius, delta, &mut |x, n| {
            out.push((x.to_vec(), n.clone()));
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }

    /// The samples of [`Prepared::net_in_ball`], handed to `visit` one at a
    /// time until it breaks.
    pub fn visit_net(
        &self,
        radius: &Q,
        delta: &Q,
        visit: &mut dyn FnMut(&[Q], &Q) -> ControlFlow<()>,
    ) -> Result<(), LabError> {
        let g = &self.group;
        let lifted = g.lifted_dim();
        let outer = radius + delta;
        let outer_sq = &outer * &outer;
        let half = Q::new(BigInt::one(), BigInt::from(2));
        let v_rows = &self.rep.continuous_basis;
        let pivots = self.rep.v_pivots();
        let l1: Q = v_rows
            .iter()
            .map(|r| r.iter().fold(Q::zero(), |a, x| a + x.abs()))
            .fold(Q::zero(), |a, b| a + b);
        let step = if v_rows.is_empty() { Q::one() } else { (delta * Q::from_integer(BigInt::from(2))) / l1 };
        // coordinate bounds of any useful sample
        let coord_bound = |i: usize| -> Q {
            if g.t_range().contains(&i) {
                let r = if *radius < half { radius.clone() } else { half.clone() };
                r + delta
            } else {
                outer.clone()
            }
        };
        let mut count = 0usize;
        for f in self.fibers() {
            let zero_fiber = self.fiber_is_zero(&f);
            if !zero_fiber && *radius < Q::one() {
                continue;
            }
            let y = &f.representative[..lifted];
            let target: Vec<Q> = project_out(&y.iter().map(|c| -c.clone()).collect::<Vec<_>>(), &self.v_ortho);
            let mut bases = Vec::new();
            self.enumerate(&target, outer_sq.clone(), &mut |c, _| {
                let mut p = y.to_vec();
                for (ci, b) in c.iter().zip(&self.lambda0) {
                    axpy(&mut p, &Q::from_integer(ci.clone()), b);
                }
                bases.push(p);
                ControlFlow::Continue(None)
            });
            for base in bases {
                // parameter ranges: pivot coordinates are the parameters
                let mut ranges: Vec<(Q, Q)> = pivots
                    .iter()
                    .map(|&p| {
                        let b = coord_bound(p);
                        (-b.clone(), b)
                    })
                    .collect();
                // coordinates the continuous part cannot move
                if (0..lifted).any(|i| {
                    v_rows.iter().all(|r| r[i].is_zero()) && base[i].abs() > coord_bound(i)
                }) {
                    continue;
                }
                if v_rows.len() == 1 {
                    // narrow the single parameter with every coordinate constraint
                    let v = &v_rows[0];
                    for i in 0..lifted {
                        if v[i].is_zero() {
                            continue;
                        }
                        let b = coord_bound(i);
                        let a1 = (-b.clone() - &base[i]) / &v[i];
                        let a2 = (b - &base[i]) / &v[i];
                        let (lo, hi) = if a1 < a2 { (a1, a2) } else { (a2, a1) };
                        if lo > ranges[0].0 {
                            ranges[0].0 = lo;
                        }
                        if hi < ranges[0].1 {
                            ranges[0].1 = hi;
                        }
                    }
                }
                if ranges.iter().any(|(lo, hi)| lo > hi) {
                    continue;
                }
                let grids: Vec<(BigInt, BigInt)> = ranges
                    .iter()
                    .map(|(lo, hi)| ((lo / &step).floor().to_integer(), (hi / &step).ceil().to_integer()))
                    .collect();
                let total: BigInt = grids.iter().fold(BigInt::one(), |a, (l, h)| a * (h - l + 1));
                if total > BigInt::from(MAX_POINTS) || count > MAX_POINTS {
                    return Err(LabError::TooLarge(format!(
                        "net of more than {MAX_POINTS} samples"
                    )));
                }
                let mut idx: Vec<BigInt> = grids.iter().map(|(l, _)| l.clone()).collect();
                if grids.is_empty() {
                    // discrete subgroup: the base points are the samples
                    let mut coords = base.clone();
                    coords.extend(f.representative[lifted..].iter().cloned());
                    let n = g.norm_sq(&coords);
                    if n <= outer_sq && g.t_range().all(|i| coords[i] >= -half.clone() && coords[i] < half) {
                        count += 1;
                        if visit(&coords, &n).is_break() {
                            return Ok(());
                        }
                    }
                    continue;
                }
                'grid: loop {
                    let mut p = base.clone();
                    for (k, row) in idx.iter().zip(v_rows) {
                        let s = Q::from_integer(k.clone()) * &step;
                        axpy(&mut p, &s, &row[..lifted]);
                    }
                    if (0..lifted).all(|i| p[i].abs() <= coord_bound(i)) {
                        let mut coords = p;
                        coords.extend(f.representative[lifted..].iter().cloned());
                        let n = g.norm_sq(&coords);
                        if n <= outer_sq {
                            count += 1;
                            if visit(&coords, &n).is_break() {
                                return Ok(());
                            }
                        }
                    }
                    for j in 0..idx.len() {
                        if idx[j] < grids[j].1 {
                            idx[j] += 1;
                            continue 'grid;
                        }
                        idx[j] = grids[j].0.clone();
                    }
                    break;
                }
            }
        }
        Ok(())
    }
}

/// Upper limit on enumerated points and samples per call.
pub const MAX_POINTS: usize = 4_000_000;

/// Result of [`dist_point`]: the squared distance, exact, and the distance
/// itself when it is rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distance {
    pub squared: Q,
}

impl Distance {
    pub fn exact(&self) -> Option<Q> {
        super::group::rational_sqrt(&self.squared)
    }
}

/// Distance from `x` to `h`, exact when it is at most `bound`.
pub fn dist_point(
    x: &ConcretePoint,
    h: &ClosedSubgroupRep,
    g: &ConcreteGroup,
    bound: &Q,
) -> Result<Distance, LabError> {
    let p = Prepared::new(h, g)?;
    let b2 = bound * bound;
    p.distance_sq(&x.coords, Some(&b2))
        .map(|squared| Distance { squared })
        .ok_or(LabError::BoundTooSmall(bound.clone()))
}

/// The norm of `x` in `g`, i.e. its distance to the identity.
pub fn norm(x: &ConcretePoint, g: &ConcreteGroup) -> Distance {
    Distance {
        squared: g.norm_sq(&x.coords),
    }
}

/// Torus coordinates of a lifted vector moved into `[-1/2, 1/2)`.
pub fn centered_lift(x: &[Q], g: &ConcreteGroup) -> Vec<Q> {
    x.iter()
        .enumerate()
        .map(|(i, c)| if g.t_range().contains(&i) { centered(c) } else { c.clone() })
        .collect()
}
