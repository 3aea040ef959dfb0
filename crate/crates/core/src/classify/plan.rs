use num_bigint::BigUint;
use num_traits::One;
use serde::ser::SerializeMap;
use serde::Serialize;

use super::Citation;
use crate::grammar::{nth_prime, GroupExpr, Height, HeightType};

/// The five closure operations under which integral approximability is stable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClosureOp {
    /// Open nonsingleton subgroup.
    OS,
    /// Quotient by a compact subgroup.
    QG,
    /// Torsion-free quotient by an open subgroup.
    QO,
    /// Directed union of closed subgroups.
    DU,
    /// Strict projective limit.
    PL,
}

/// How the cyclic chain (1/d₁)ℤ ⊆ (1/d₂)ℤ ⊆ ... of a rank-one group is built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DenominatorSchedule {
    /// dₙ = n!
    Factorial,
    /// dₙ = ∏ p^min(n, τ(p)) over the first n primes.
    Heights(HeightType),
}

impl DenominatorSchedule {
    pub fn denominator(&self, n: u32) -> BigUint {
        match self {
            DenominatorSchedule::Factorial => (1..=n).fold(BigUint::one(), |acc, k| acc * k),
            DenominatorSchedule::Heights(h) => {
                let mut d = BigUint::one();
                for i in 1..=n as usize {
                    let p = nth_prime(i);
                    let e = match h.height_at(p) {
                        Height::Finite(k) => k.min(n),
                        Height::Infinite => n,
                    };
                    d *= BigUint::from(p).pow(e);
                }
                d
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            DenominatorSchedule::Factorial => "n!".to_string(),
            DenominatorSchedule::Heights(h) => {
                format!("product of p^min(n, h(p)) over the first n primes, h = {h}")
            }
        }
    }
}

/// A recipe for an approximating sequence of integral subgroups.
///
/// Leaves describe sequences the lab can build directly; internal nodes
/// transport approximability along one of the closure operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificatePlan {
    DirectedUnionOfCyclics {
        group: GroupExpr,
        schedule: DenominatorSchedule,
    },
    /// ℤ·(1/n, 1 mod m) in ℝ × ℤ(m).
    ZnRecipe { modulus: u64 },
    /// ℤ·(1/k, n/k, n²/k, ..., nᵗ/k) in ℝ × 𝕋ᵗ, approximating the graph of
    /// r ↦ (n r, ..., nᵗ r), which in turn approaches the whole group.
    RnRecipe { torus_rank: usize },
    KeyLemmaReference { cite: Citation, group: GroupExpr },
    Apply {
        op: ClosureOp,
        group: GroupExpr,
        note: String,
        children: Vec<CertificatePlan>,
    },
}

impl CertificatePlan {
    pub fn leaves(&self) -> Vec<&CertificatePlan> {
        match self {
            CertificatePlan::Apply { children, .. } => {
                children.iter().flat_map(CertificatePlan::leaves).collect()
            }
            leaf => vec![leaf],
        }
    }

    pub fn ops(&self) -> Vec<ClosureOp> {
        match self {
            CertificatePlan::Apply { op, children, .. } => std::iter::once(*op)
                .chain(children.iter().flat_map(CertificatePlan::ops))
                .collect(),
            _ => Vec::new(),
        }
    }
}

impl Serialize for CertificatePlan {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        match self {
            CertificatePlan::DirectedUnionOfCyclics { group, schedule } => {
                m.serialize_entry("kind", "directed-union-of-cyclics")?;
                m.serialize_entry("group", group)?;
                m.serialize_entry("denominators", &schedule.describe())?;
                let first: Vec<String> =
                    (1..=6).map(|n| schedule.denominator(n).to_string()).collect();
                m.serialize_entry("first", &first)?;
            }
            CertificatePlan::ZnRecipe { modulus } => {
                m.serialize_entry("kind", "zn-recipe")?;
                m.serialize_entry("modulus", modulus)?;
            }
            CertificatePlan::RnRecipe { torus_rank } => {
                m.serialize_entry("kind", "rn-recipe")?;
                m.serialize_entry("torusRank", torus_rank)?;
            }
            CertificatePlan::KeyLemmaReference { cite, group } => {
                m.serialize_entry("kind", "key-lemma")?;
                m.serialize_entry("cite", cite.key())?;
                m.serialize_entry("group", group)?;
            }
            CertificatePlan::Apply {
                op,
                group,
                note,
                children,
            } => {
                m.serialize_entry("kind", "closure")?;
                m.serialize_entry("op", op)?;
                m.serialize_entry("group", group)?;
                m.serialize_entry("note", note)?;
                m.serialize_entry("children", children)?;
            }
        }
        m.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{DefaultHeight, HeightType};

    #[test]
    fn factorial_schedule() {
        let d: Vec<u64> = (1..=5)
            .map(|n| DenominatorSchedule::Factorial.denominator(n).try_into().unwrap())
            .collect();
        assert_eq!(d, vec![1, 2, 6, 24, 120]);
    }

    #[test]
    fn height_schedule_respects_caps() {
        // dyadic rationals: only powers of two ever appear
        let h = HeightType::new(DefaultHeight::Zero).with(2, Height::Infinite);
        let s = DenominatorSchedule::Heights(h);
        let d: Vec<u64> = (1..=4).map(|n| s.denominator(n).try_into().unwrap()).collect();
        assert_eq!(d, vec![2, 4, 8, 16]);
        let h = HeightType::new(DefaultHeight::Infinite).with(3, Height::Finite(1));
        let s = DenominatorSchedule::Heights(h);
        assert_eq!(u64::try_from(s.denominator(2)).unwrap(), 4 * 3);
        assert_eq!(u64::try_from(s.denominator(3)).unwrap(), 8 * 3 * 125);
    }
}
