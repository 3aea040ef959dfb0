//! Sequences n ↦ H_n of closed subgroups.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use super::annihilator::annihilator;
use super::group::ConcreteGroup;
use super::matrix::{frac, q, Q};
use super::subgroup::{canonicalize, ClosedSubgroupRep};
use super::LabError;
use crate::classify::{CertificatePlan, DenominatorSchedule};
use crate::grammar::GroupExpr;

/// Generator lists for a user-supplied sequence: `(continuous basis, lattice generators)`.
pub type TermFn = Arc<dyn Fn(u64) -> (Vec<Vec<Q>>, Vec<Vec<Q>>) + Send + Sync>;

#[derive(Clone)]
pub enum Family {
    /// (1/n)ℤ in ℝ.
    InvLattice,
    /// nℤ in ℝ.
    Lattice,
    /// nℤ for even n, (1/n)ℤ for odd n.
    Alternating,
    /// ℤ·(1/n, 1) in ℝ × ℤ(m); plain (1/n)ℤ when there is no finite factor.
    Zn,
    /// The graph of r ↦ (n r, n² r, ..., nᵗ r) in ℝ × 𝕋ᵗ.
    Rn,
    /// ℤ·(1/k, n/k, ..., nᵗ/k) with k = 4nᵗ⁺¹, a cyclic subgroup close to
    /// the graph in [`Family::Rn`].
    RnCyclic,
    /// (1/d_n)ℤ in ℝ for a denominator schedule d_n.
    QsubChain(DenominatorSchedule),
    Custom { name: String, term: TermFn },
    /// n ↦ H_n^⊥ in the dual group.
    Annihilator(Box<SubgroupSequence>),
    /// n ↦ H_{stride·n + offset}.
    Subsequence {
        base: Box<SubgroupSequence>,
        stride: u64,
        offset: u64,
    },
}

#[derive(Clone)]
pub struct SubgroupSequence {
    family: Family,
    group: ConcreteGroup,
}

impl fmt::Debug for SubgroupSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubgroupSequence({} in {})", self.name(), self.group)
    }
}

/// Names accepted by [`SubgroupSequence::builtin`].
pub const BUILTIN_NAMES: [&str; 7] = ["inv-lattice", "lattice", "alternating", "zn", "rn", "rn-cyclic", "qsub-chain"];

impl SubgroupSequence {
    pub fn new(family: Family, group: ConcreteGroup) -> Result<Self, LabError> {
        let ok = match &family {
            Family::InvLattice | Family::Lattice | Family::Alternating | Family::QsubChain(_) => {
                group == ConcreteGroup::reals()
            }
            Family::Zn => group.d == 1 && group.t == 0 && group.z == 0 && group.moduli.len() <= 1,
            Family::Rn | Family::RnCyclic => {
                group.d == 1 && group.t >= 1 && group.z == 0 && group.moduli.is_empty()
            }
            Family::Custom { .. } => true,
            Family::Annihilator(base) => group == base.group.dual(),
            Family::Subsequence { base, stride, .. } => group == base.group && *stride >= 1,
        };
        if !ok {
            return Err(LabError::InvalidSequence(format!(
                "{} is not defined on {group}",
                family_name(&family)
            )));
        }
        Ok(SubgroupSequence { family, group })
    }

    pub fn inv_lattice() -> Self {
        SubgroupSequence::new(Family::InvLattice, ConcreteGroup::reals()).unwrap()
    }

    pub fn lattice() -> Self {
        SubgroupSequence::new(Family::Lattice, ConcreteGroup::reals()).unwrap()
    }

    pub fn alternating() -> Self {
        SubgroupSequence::new(Family::Alternating, ConcreteGroup::reals()).unwrap()
    }

    /// ℤ·(1/n, 1) in ℝ × ℤ(m).
    pub fn zn(m: u64) -> Result<Self, LabError> {
        let moduli = if m == 1 { vec![] } else { vec![m] };
        SubgroupSequence::new(Family::Zn, ConcreteGroup::new(1, 0, 0, moduli)?)
    }

    pub fn rn(torus_rank: usize) -> Result<Self, LabError> {
        SubgroupSequence::new(Family::Rn, ConcreteGroup::new(1, torus_rank, 0, vec![])?)
    }

    pub fn rn_cyclic(torus_rank: usize) -> Result<Self, LabError> {
        SubgroupSequence::new(Family::RnCyclic, ConcreteGroup::new(1, torus_rank, 0, vec![])?)
    }

    pub fn qsub_chain(schedule: DenominatorSchedule) -> Self {
        SubgroupSequence::new(Family::QsubChain(schedule), ConcreteGroup::reals()).unwrap()
    }

    pub fn custom(name: &str, group: ConcreteGroup, term: TermFn) -> Self {
        SubgroupSequence {
            family: Family::Custom {
                name: name.to_string(),
                term,
            },
            group,
        }
    }

    /// The sequence of annihilators, in the dual group.
    pub fn annihilators(&self) -> Self {
        SubgroupSequence {
            family: Family::Annihilator(Box::new(self.clone())),
            group: self.group.dual(),
        }
    }

    pub fn subsequence(&self, stride: u64, offset: u64) -> Self {
        SubgroupSequence {
            family: Family::Subsequence {
                base: Box::new(self.clone()),
                stride: stride.max(1),
                offset,
            },
            group: self.group.clone(),
        }
    }

    /// A built-in family by name, on the given group.
    pub fn builtin(name: &str, group: &ConcreteGroup) -> Result<Self, LabError> {
        let family = match name {
            "inv-lattice" => Family::InvLattice,
            "lattice" => Family::Lattice,
            "alternating" => Family::Alternating,
            "zn" => Family::Zn,
            "rn" => Family::Rn,
            "rn-cyclic" => Family::RnCyclic,
            "qsub-chain" => Family::QsubChain(DenominatorSchedule::Factorial),
            other => {
                return Err(LabError::InvalidSequence(format!(
                    "unknown sequence {other:?}; expected one of {}",
                    BUILTIN_NAMES.join(", ")
                )))
            }
        };
        SubgroupSequence::new(family, group.clone())
    }

    /// The lab sequence behind a witness recipe leaf.
    pub fn from_plan(plan: &CertificatePlan) -> Result<Self, LabError> {
        match plan {
            CertificatePlan::ZnRecipe { modulus } => SubgroupSequence::zn(*modulus),
            CertificatePlan::RnRecipe { torus_rank } if *torus_rank >= 1 => SubgroupSequence::rn_cyclic(*torus_rank),
            CertificatePlan::DirectedUnionOfCyclics {
                group: GroupExpr::Rationals | GroupExpr::RationalSubgroup(_) | GroupExpr::Integers,
                schedule,
            } => Ok(SubgroupSequence::qsub_chain(schedule.clone())),
            other => Err(LabError::InvalidSequence(format!(
                "no concrete sequence for the recipe {}",
                match other {
                    CertificatePlan::Apply { op, .. } => format!("{op:?}"),
                    CertificatePlan::KeyLemmaReference { cite, .. } => cite.key().to_string(),
                    _ => "leaf".to_string(),
                }
            ))),
        }
    }

    pub fn group(&self) -> &ConcreteGroup {
        &self.group
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn name(&self) -> String {
        family_name(&self.family)
    }

    /// The expected limit, when the family has one.
    pub fn expected_limit(&self) -> Option<ClosedSubgroupRep> {
        match &self.family {
            Family::InvLattice | Family::Zn | Family::Rn | Family::RnCyclic | Family::QsubChain(_) => {
                Some(ClosedSubgroupRep::whole(&self.group))
            }
            Family::Lattice => Some(ClosedSubgroupRep::trivial(&self.group)),
            Family::Annihilator(base) => {
                let l = base.expected_limit()?;
                annihilator(&l, &base.group).ok()
            }
            Family::Subsequence { base, .. } => base.expected_limit(),
            Family::Alternating | Family::Custom { .. } => None,
        }
    }

    /// H_n, canonical; indices start at 1.
    pub fn term(&self, n: u64) -> Result<ClosedSubgroupRep, LabError> {
        if n == 0 {
            return Err(LabError::InvalidSequence("indices start at 1".into()));
        }
        let g = &self.group;
        let ni = n as i64;
        match &self.family {
            Family::InvLattice => ClosedSubgroupRep::generated_by(g, vec![vec![frac(1, ni)]]),
            Family::Lattice => ClosedSubgroupRep::generated_by(g, vec![vec![q(ni)]]),
            Family::Alternating => {
                let x = if n.is_multiple_of(2) { q(ni) } else { frac(1, ni) };
                ClosedSubgroupRep::generated_by(g, vec![vec![x]])
            }
            Family::Zn => {
                let mut v = vec![frac(1, ni)];
                v.extend(g.moduli.iter().map(|_| q(1)));
                ClosedSubgroupRep::generated_by(g, vec![v])
            }
            Family::Rn => {
                let v = powers(n, g.t, &Q::from_integer(BigInt::from(1)));
                canonicalize(&ClosedSubgroupRep::new(vec![v], vec![]), g)
            }
            Family::RnCyclic => {
                let k = BigInt::from(4) * BigInt::from(n).pow(g.t as u32 + 1);
                let v = powers(n, g.t, &Q::new(BigInt::from(1), k));
                ClosedSubgroupRep::generated_by(g, vec![v])
            }
            Family::QsubChain(s) => {
                let d = BigInt::from(s.denominator(n as u32));
                ClosedSubgroupRep::generated_by(g, vec![vec![Q::new(BigInt::from(1), d)]])
            }
            Family::Custom { term, .. } => {
                let (v, l) = term(n);
                canonicalize(&ClosedSubgroupRep::new(v, l), g)
            }
            Family::Annihilator(base) => annihilator(&base.term(n)?, &base.group),
            Family::Subsequence { base, stride, offset } => base.term(stride * n + offset),
        }
    }
}

/// (c, n c, n² c, ..., nᵗ c).
fn powers(n: u64, t: usize, c: &Q) -> Vec<Q> {
    let mut out = Vec::with_capacity(t + 1);
    let mut x = c.clone();
    let n = Q::from_integer(BigInt::from(n));
    for _ in 0..=t {
        out.push(x.clone());
        x = &x * &n;
    }
    out
}

fn family_name(f: &Family) -> String {
    match f {
        Family::InvLattice => "inv-lattice".into(),
        Family::Lattice => "lattice".into(),
        Family::Alternating => "alternating".into(),
        Family::Zn => "zn".into(),
        Family::Rn => "rn".into(),
        Family::RnCyclic => "rn-cyclic".into(),
        Family::QsubChain(s) => format!("qsub-chain[{}]", s.describe()),
        Family::Custom { name, .. } => name.clone(),
        Family::Annihilator(base) => format!("annihilator({})", base.name()),
        Family::Subsequence { base, stride, offset } => format!("{}[{stride}n+{offset}]", base.name()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terms() {
        assert_eq!(SubgroupSequence::inv_lattice().term(4).unwrap().discrete_gens, vec![vec![frac(1, 4)]]);
        let alt = SubgroupSequence::alternating();
        assert_eq!(alt.term(2).unwrap().discrete_gens, vec![vec![q(2)]]);
        assert_eq!(alt.term(3).unwrap().discrete_gens, vec![vec![frac(1, 3)]]);
        let even = alt.subsequence(2, 0);
        assert_eq!(even.term(2).unwrap().discrete_gens, vec![vec![q(4)]]);
        let chain = SubgroupSequence::qsub_chain(DenominatorSchedule::Factorial);
        assert_eq!(chain.term(4).unwrap().discrete_gens, vec![vec![frac(1, 24)]]);
    }

    #[test]
    fn slope_graph_annihilators() {
        let r = SubgroupSequence::rn(1).unwrap();
        let a = r.annihilators();
        assert_eq!(a.group().z, 1);
        let expected = ClosedSubgroupRep::generated_by(a.group(), vec![vec![q(-3), q(1)]]).unwrap();
        assert_eq!(a.term(3).unwrap(), expected);
    }

    #[test]
    fn domain_checks() {
        let g = ConcreteGroup::new(1, 1, 0, vec![]).unwrap();
        assert!(SubgroupSequence::builtin("lattice", &g).is_err());
        assert!(SubgroupSequence::builtin("rn", &g).is_ok());
        assert!(SubgroupSequence::builtin("nope", &g).is_err());
        assert!(SubgroupSequence::inv_lattice().term(0).is_err());
    }

    #[test]
    fn recipes() {
        let s = SubgroupSequence::from_plan(&CertificatePlan::ZnRecipe { modulus: 3 }).unwrap();
        assert_eq!(s.group().moduli, vec![3]);
        assert_eq!(
            s.term(5).unwrap(),
            ClosedSubgroupRep::generated_by(s.group(), vec![vec![frac(1, 5), q(1)]]).unwrap()
        );
    }
}
