use serde::Serialize;

use super::plan::CertificatePlan;

/// Fixed registry of the results a decision trace may rely on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Citation {
    IntegralApproximation,
    NumeralApproximation,
    LineApproximation,
    VectorRankObstruction,
    RationalChain,
    ElementaryAbelianObstruction,
    IntegerFactorObstruction,
    Nonsingleton,
    ClosureOperations,
    DiscreteCase,
    InductivelyMonotheticClassification,
    VectorSplitting,
    MonotheticCompact,
    BohrLineApproximation,
    SlopeGraphApproximation,
    CompactConnectedComplement,
    CompactFreeCharacterization,
    NumeralImpliesIntegral,
}

impl Citation {
    pub const ALL: [Citation; 18] = [
        Citation::IntegralApproximation,
        Citation::NumeralApproximation,
        Citation::LineApproximation,
        Citation::VectorRankObstruction,
        Citation::RationalChain,
        Citation::ElementaryAbelianObstruction,
        Citation::IntegerFactorObstruction,
        Citation::Nonsingleton,
        Citation::ClosureOperations,
        Citation::DiscreteCase,
        Citation::InductivelyMonotheticClassification,
        Citation::VectorSplitting,
        Citation::MonotheticCompact,
        Citation::BohrLineApproximation,
        Citation::SlopeGraphApproximation,
        Citation::CompactConnectedComplement,
        Citation::CompactFreeCharacterization,
        Citation::NumeralImpliesIntegral,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Citation::IntegralApproximation => "integral-approximation",
            Citation::NumeralApproximation => "numeral-approximation",
            Citation::LineApproximation => "line-approximation",
            Citation::VectorRankObstruction => "vector-rank-obstruction",
            Citation::RationalChain => "rational-chain",
            Citation::ElementaryAbelianObstruction => "elementary-abelian-obstruction",
            Citation::IntegerFactorObstruction => "integer-factor-obstruction",
            Citation::Nonsingleton => "nonsingleton",
            Citation::ClosureOperations => "closure-operations",
            Citation::DiscreteCase => "discrete-case",
            Citation::InductivelyMonotheticClassification => "inductively-monothetic-classification",
            Citation::VectorSplitting => "vector-splitting",
            Citation::MonotheticCompact => "monothetic-compact",
            Citation::BohrLineApproximation => "bohr-line-approximation",
            Citation::SlopeGraphApproximation => "slope-graph-approximation",
            Citation::CompactConnectedComplement => "compact-connected-complement",
            Citation::CompactFreeCharacterization => "compact-free-characterization",
            Citation::NumeralImpliesIntegral => "numeral-implies-integral",
        }
    }

    /// One-line statement of the cited result.
    pub fn statement(self) -> &'static str {
        match self {
            Citation::IntegralApproximation => "G is a limit of integral subgroups iff G is a nonsingleton discrete subgroup of Q, or G = R x comp(G) with G/G0 periodic inductively monothetic",
            Citation::NumeralApproximation => "G is a limit of real subgroups iff G = R x C with C compact connected",
            Citation::LineApproximation => "(1/n)Z converges to R",
            Citation::VectorRankObstruction => "no cyclic subgroup of R^n, n >= 2, approximates two independent unit vectors",
            Citation::RationalChain => "Q is the increasing union of the cyclic groups (1/n!)Z",
            Citation::ElementaryAbelianObstruction => "R x Z(p)^n with n >= 2 is not a limit of integral subgroups",
            Citation::IntegerFactorObstruction => "if A x Z is a limit of integral subgroups then A is trivial",
            Citation::Nonsingleton => "a group that is a limit of integral subgroups is not a singleton",
            Citation::ClosureOperations => "integral approximability passes to open subgroups, quotients by compact subgroups, torsion-free quotients by open subgroups, directed unions and strict projective limits",
            Citation::DiscreteCase => "if G0 is compact, G is a limit of integral subgroups iff G is discrete and a nonsingleton subgroup of Q",
            Citation::InductivelyMonotheticClassification => "inductively monothetic groups: one-dimensional compact connected, discrete subgroups of Q, local products of Z(p^n), Zp, Qp",
            Citation::VectorSplitting => "G = E + H with E = R^n and H having a compact open subgroup",
            Citation::MonotheticCompact => "a compact abelian group is monothetic iff its dual embeds in the discrete circle, i.e. every p-rank of the dual torsion is at most 1",
            Citation::BohrLineApproximation => "R x bZ is the limit of Z.(1/n, id)",
            Citation::SlopeGraphApproximation => "R x bR is the limit of the graphs of n.f",
            Citation::CompactConnectedComplement => "a limit of real subgroups has comp(G) compact and connected",
            Citation::CompactFreeCharacterization => "compact-free and a limit of integral subgroups iff R or a nonsingleton subgroup of discrete Q",
            Citation::NumeralImpliesIntegral => "a limit of real subgroups is a limit of integral subgroups",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub step: String,
    #[serde(serialize_with = "serialize_citation")]
    pub cite: Citation,
    pub detail: String,
}

fn serialize_citation<S: serde::Serializer>(c: &Citation, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(c.key())
}

/// A decision with the chain of facts that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub answer: bool,
    pub trace: Vec<TraceStep>,
    #[serde(rename = "witnessPlan", skip_serializing_if = "Option::is_none")]
    pub witness_plan: Option<CertificatePlan>,
}

impl Verdict {
    pub(crate) fn new(answer: bool, trace: Vec<TraceStep>) -> Verdict {
        debug_assert!(!trace.is_empty());
        Verdict {
            answer,
            trace,
            witness_plan: None,
        }
    }

    pub fn cites(&self, c: Citation) -> bool {
        self.trace.iter().any(|s| s.cite == c)
    }
}

pub(crate) fn step(step: &str, cite: Citation, detail: impl Into<String>) -> TraceStep {
    TraceStep {
        step: step.to_string(),
        cite,
        detail: detail.into(),
    }
}
