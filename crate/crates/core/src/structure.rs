//! Structural invariants: identity component, the union of compact
//! subgroups, the vector splitting, and the monothetic deciders.
//!
//! Every operation normalizes its input first and then works factor by
//! factor through per-atom tables. The Bohr compactification of ℤ is never
//! opened up: its identity component is the opaque
//! [`GroupExpr::BohrIntegersIdentity`] and its component group is the
//! profinite integers [`GroupExpr::ProfiniteIntegers`].

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::classify::{step, Citation, Verdict};
use crate::grammar::{normalize, prime_power_base, GroupExpr};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("{0} is not compact")]
    NotCompact(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StructureFlags {
    pub compact: bool,
    pub discrete: bool,
    pub connected: bool,
    pub totally_disconnected: bool,
    pub periodic: bool,
    pub compact_free: bool,
    pub torsion_free_discrete: bool,
}

impl StructureFlags {
    const ALL_TRUE: StructureFlags = StructureFlags {
        compact: true,
        discrete: true,
        connected: true,
        totally_disconnected: true,
        periodic: true,
        compact_free: true,
        torsion_free_discrete: true,
    };

    fn and(self, o: StructureFlags) -> StructureFlags {
        StructureFlags {
            compact: self.compact && o.compact,
            discrete: self.discrete && o.discrete,
            connected: self.connected && o.connected,
            totally_disconnected: self.totally_disconnected && o.totally_disconnected,
            periodic: self.periodic && o.periodic,
            compact_free: self.compact_free && o.compact_free,
            torsion_free_discrete: self.torsion_free_discrete && o.torsion_free_discrete,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StructureReport {
    pub group: GroupExpr,
    pub vector_rank: usize,
    pub identity_component: GroupExpr,
    pub comp_part: GroupExpr,
    #[serde(rename = "quotientModG0")]
    pub quotient_mod_identity: GroupExpr,
    pub flags: StructureFlags,
}

fn atom_flags(a: &GroupExpr) -> StructureFlags {
    use GroupExpr::*;
    // (compact, discrete, connected, periodic, compact_free, torsion_free_discrete)
    let (compact, discrete, connected, periodic, compact_free, tfd) = match a {
        Trivial => (true, true, true, true, true, true),
        Reals => (false, false, true, false, true, false),
        Circle => (true, false, true, false, false, false),
        Integers | Rationals | RationalSubgroup(_) => (false, true, false, false, true, true),
        Cyclic(_) => (true, true, false, true, false, false),
        Prufer(_) => (false, true, false, true, false, false),
        PadicIntegers(_) | ProfiniteIntegers => (true, false, false, true, false, false),
        PadicNumbers(_) => (false, false, false, true, false, false),
        Solenoid(_) | BohrReals | BohrIntegersIdentity => (true, false, true, false, false, false),
        BohrIntegers => (true, false, false, false, false, false),
        Product(_) | LocalProduct(_) => unreachable!("atom_flags on a composite"),
    };
    StructureFlags {
        compact,
        discrete,
        connected,
        totally_disconnected: identity_atom(a) == GroupExpr::Trivial,
        periodic,
        compact_free,
        torsion_free_discrete: tfd,
    }
}

fn identity_atom(a: &GroupExpr) -> GroupExpr {
    use GroupExpr::*;
    match a {
        Reals | Circle | Solenoid(_) | BohrReals | BohrIntegersIdentity => a.clone(),
        BohrIntegers => BohrIntegersIdentity,
        _ => Trivial,
    }
}

fn comp_atom(a: &GroupExpr) -> GroupExpr {
    use GroupExpr::*;
    match a {
        Reals | Integers | Rationals | RationalSubgroup(_) | Trivial => Trivial,
        _ => a.clone(),
    }
}

fn quotient_atom(a: &GroupExpr) -> GroupExpr {
    use GroupExpr::*;
    match a {
        Reals | Circle | Solenoid(_) | BohrReals | BohrIntegersIdentity => Trivial,
        BohrIntegers => ProfiniteIntegers,
        _ => a.clone(),
    }
}

fn map_factors(g: &GroupExpr, f: impl Fn(&GroupExpr) -> GroupExpr) -> GroupExpr {
    let g = normalize(g);
    normalize(&GroupExpr::Product(g.factors().iter().map(f).collect()))
}

/// The identity component G₀.
pub fn identity_component(g: &GroupExpr) -> GroupExpr {
    map_factors(g, identity_atom)
}

/// comp(G), the union of all compact subgroups.
pub fn comp_part(g: &GroupExpr) -> GroupExpr {
    map_factors(g, comp_atom)
}

/// G/G₀.
pub fn quotient_mod_identity(g: &GroupExpr) -> GroupExpr {
    map_factors(g, quotient_atom)
}

/// Splits G = ℝⁿ ⊕ H: the number of ℝ factors and the product of the rest.
pub fn vector_split(g: &GroupExpr) -> (usize, GroupExpr) {
    let g = normalize(g);
    let (reals, rest): (Vec<_>, Vec<_>) = g
        .factors()
        .iter()
        .cloned()
        .partition(|f| *f == GroupExpr::Reals);
    (reals.len(), normalize(&GroupExpr::Product(rest)))
}

pub fn flags(g: &GroupExpr) -> StructureReport {
    let g = normalize(g);
    let fl = g
        .factors()
        .iter()
        .map(atom_flags)
        .fold(StructureFlags::ALL_TRUE, StructureFlags::and);
    StructureReport {
        vector_rank: vector_split(&g).0,
        identity_component: identity_component(&g),
        comp_part: comp_part(&g),
        quotient_mod_identity: quotient_mod_identity(&g),
        flags: fl,
        group: g,
    }
}

/// p-ranks of the torsion subgroup of the dual, per prime, plus the rank
/// contributed at every prime simultaneously (from bℤ and the profinite integers).
fn dual_torsion_ranks(g: &GroupExpr) -> (BTreeMap<u64, u32>, u32) {
    use GroupExpr::*;
    let mut ranks = BTreeMap::new();
    let mut everywhere = 0;
    for f in g.factors() {
        match f {
            Cyclic(n) => {
                if let Some((p, _)) = prime_power_base(*n) {
                    *ranks.entry(p).or_insert(0) += 1;
                }
            }
            PadicIntegers(p) | Prufer(p) => *ranks.entry(*p).or_insert(0) += 1,
            BohrIntegers | ProfiniteIntegers => everywhere += 1,
            _ => {}
        }
    }
    (ranks, everywhere)
}

/// Whether a compact group is topologically generated by one element.
///
/// The dual of a compact group in the grammar is always small enough in
/// torsion-free rank to embed into the discrete circle, so the only test is
/// that the dual torsion has p-rank at most 1 at every prime.
pub fn is_monothetic_compact(g: &GroupExpr) -> Result<bool, StructureError> {
    let g = normalize(g);
    if !flags(&g).flags.compact {
        return Err(StructureError::NotCompact(g.to_string()));
    }
    let (ranks, everywhere) = dual_torsion_ranks(&g);
    Ok(everywhere <= 1 && ranks.values().all(|&r| r + everywhere <= 1))
}

/// Which shape of inductively monothetic group matched.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InductiveClause {
    Trivial,
    /// 𝕋 or a solenoid.
    OneDimensionalCompactConnected,
    /// ℤ, ℚ or a rank-one subgroup of ℚ.
    SubgroupOfRationals,
    /// A local product with one p-primary component per prime.
    LocalProduct,
}

/// Matches the normalized group against the three shapes of inductively
/// monothetic groups. `Err` carries the reason no shape matched.
pub fn inductive_clause(g: &GroupExpr) -> Result<InductiveClause, String> {
    use GroupExpr::*;
    let g = normalize(g);
    match &g {
        Trivial => return Ok(InductiveClause::Trivial),
        Circle | Solenoid(_) => return Ok(InductiveClause::OneDimensionalCompactConnected),
        Integers | Rationals | RationalSubgroup(_) => {
            return Ok(InductiveClause::SubgroupOfRationals)
        }
        _ => {}
    }
    let mut seen: Vec<u64> = Vec::new();
    let mut all_primes = false;
    for f in g.factors() {
        match f {
            ProfiniteIntegers => {
                if all_primes || !seen.is_empty() {
                    return Err(format!(
                        "Zhat has a component at every prime, so {g} has two components at some prime"
                    ));
                }
                all_primes = true;
            }
            Cyclic(_) | Prufer(_) | PadicIntegers(_) | PadicNumbers(_) => {
                let p = f.primary_prime().ok_or_else(|| format!("{f} is not p-primary"))?;
                if all_primes || seen.contains(&p) {
                    return Err(format!("two {p}-primary components"));
                }
                seen.push(p);
            }
            other => {
                return Err(format!(
                    "factor {other} is not one of Z(p^k), Prufer(p), Zp(p), Qp(p)"
                ))
            }
        }
    }
    Ok(InductiveClause::LocalProduct)
}

pub fn is_inductively_monothetic(g: &GroupExpr) -> Verdict {
    let g = normalize(g);
    let cite = Citation::InductivelyMonotheticClassification;
    match inductive_clause(&g) {
        Ok(clause) => {
            let (name, detail) = match clause {
                InductiveClause::Trivial => ("trivial", "the singleton group"),
                InductiveClause::OneDimensionalCompactConnected => {
                    ("clause-1", "one-dimensional compact connected")
                }
                InductiveClause::SubgroupOfRationals => {
                    ("clause-2", "discrete and isomorphic to a subgroup of Q")
                }
                InductiveClause::LocalProduct => (
                    "clause-3",
                    "local product of Z(p^k), Prufer(p), Zp(p), Qp(p), one per prime",
                ),
            };
            Verdict::new(true, vec![step(name, cite, format!("{g}: {detail}"))])
        }
        Err(reason) => Verdict::new(false, vec![step("no-clause", cite, format!("{g}: {reason}"))]),
    }
}

/// Independent recognizer for periodic inductively monothetic groups: every
/// factor is p-primary (or the profinite integers) and no prime is used twice.
pub fn local_product_pattern(g: &GroupExpr) -> bool {
    let g = normalize(g);
    let mut count: BTreeMap<u64, usize> = BTreeMap::new();
    let mut everywhere = 0usize;
    for f in g.factors() {
        if *f == GroupExpr::ProfiniteIntegers {
            everywhere += 1;
            continue;
        }
        match f.primary_prime() {
            Some(p) => *count.entry(p).or_default() += 1,
            None => return false,
        }
    }
    everywhere <= 1 && count.values().all(|&c| c + everywhere <= 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{parse, DefaultHeight, GroupExpr as G, HeightType};

    fn p(s: &str) -> G {
        normalize(&parse(s).unwrap())
    }

    #[test]
    fn identity_component_examples() {
        assert_eq!(identity_component(&p("R x Z(4)")), G::Reals);
        assert_eq!(identity_component(&G::Circle), G::Circle);
        assert_eq!(identity_component(&G::PadicNumbers(7)), G::Trivial);
        assert_eq!(identity_component(&G::BohrIntegers), G::BohrIntegersIdentity);
        assert_eq!(identity_component(&p("LP[2:Zp(2)]")), G::Trivial);
    }

    #[test]
    fn comp_part_examples() {
        assert_eq!(comp_part(&G::PadicNumbers(5)), G::PadicNumbers(5));
        assert_eq!(comp_part(&p("R x T")), G::Circle);
        assert_eq!(comp_part(&G::Rationals), G::Trivial);
    }

    #[test]
    fn vector_split_examples() {
        assert_eq!(vector_split(&p("R x R x T")), (2, G::Circle));
        assert_eq!(vector_split(&G::Integers), (0, G::Integers));
        assert_eq!(
            vector_split(&p("R x Zp(2) x Z(3)")),
            (1, G::Product(vec![G::PadicIntegers(2), G::Cyclic(3)]))
        );
    }

    #[test]
    fn flags_examples() {
        let q = flags(&G::Rationals).flags;
        assert!(q.discrete && q.compact_free && !q.periodic);
        let rt = flags(&p("R x T"));
        assert!(rt.flags.connected);
        assert_eq!(rt.vector_rank, 1);
        assert_eq!(rt.comp_part, G::Circle);
        let lp = flags(&p("LP[2:Zp(2), 3:Prufer(3)]")).flags;
        assert!(lp.periodic && lp.totally_disconnected);
    }

    #[test]
    fn bohr_table() {
        let b = flags(&G::BohrIntegers);
        assert!(b.flags.compact && !b.flags.connected);
        assert_eq!(b.quotient_mod_identity, G::ProfiniteIntegers);
        let r = flags(&G::BohrReals);
        assert!(r.flags.compact && r.flags.connected);
        assert_eq!(r.quotient_mod_identity, G::Trivial);
    }

    #[test]
    fn monothetic_compact_examples() {
        assert_eq!(is_monothetic_compact(&p("T x Z(6)")), Ok(true));
        assert_eq!(is_monothetic_compact(&p("Z(2) x Z(2)")), Ok(false));
        assert_eq!(is_monothetic_compact(&G::BohrIntegers), Ok(true));
        assert_eq!(is_monothetic_compact(&G::BohrReals), Ok(true));
        assert_eq!(is_monothetic_compact(&p("T^2")), Ok(true));
        assert_eq!(is_monothetic_compact(&p("BohrZ x Z(3)")), Ok(false));
        assert!(matches!(
            is_monothetic_compact(&G::Reals),
            Err(StructureError::NotCompact(_))
        ));
    }

    #[test]
    fn inductively_monothetic_examples() {
        assert!(!is_inductively_monothetic(&p("T x T")).answer);
        let q = is_inductively_monothetic(&G::Rationals);
        assert!(q.answer);
        assert_eq!(q.trace[0].step, "clause-2");
        let lp = is_inductively_monothetic(&p("LP[2:Qp(2), 5:Z(25)]"));
        assert!(lp.answer);
        assert_eq!(lp.trace[0].step, "clause-3");
        let sol = G::Solenoid(HeightType::new(DefaultHeight::Infinite));
        assert_eq!(inductive_clause(&sol), Ok(InductiveClause::OneDimensionalCompactConnected));
        let bad = is_inductively_monothetic(&p("Z(2) x Zp(2)"));
        assert!(!bad.answer);
        assert!(bad.trace[0].detail.contains("two 2-primary"));
    }

    #[test]
    fn profinite_integers_occupy_every_prime() {
        assert_eq!(inductive_clause(&G::ProfiniteIntegers), Ok(InductiveClause::LocalProduct));
        assert!(inductive_clause(&p("Zhat x Z(5)")).is_err());
        assert!(!local_product_pattern(&p("Zhat x Z(5)")));
    }
}
