//! Deciders for integral and numeral approximability.
//!
//! Each decider returns a [`Verdict`] whose trace records which structural
//! facts were used, in order, ending at the first failed condition or at the
//! characterization that confirms the answer.

mod plan;
mod verdict;

use thiserror::Error;

pub use plan::{CertificatePlan, ClosureOp, DenominatorSchedule};
pub use verdict::{Citation, TraceStep, Verdict};
pub(crate) use verdict::step;

use crate::grammar::{normalize, GroupExpr};
use crate::structure::{self, inductive_clause, InductiveClause};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("{0} is neither integrally nor numerally approximable")]
    NotApproximable(String),
}

fn is_rank_one_discrete(g: &GroupExpr) -> bool {
    matches!(
        g,
        GroupExpr::Integers | GroupExpr::Rationals | GroupExpr::RationalSubgroup(_)
    )
}

/// Two cyclic factors at the same prime.
fn repeated_cyclic_prime(g: &GroupExpr) -> Option<u64> {
    let primes: Vec<u64> = g
        .factors()
        .iter()
        .filter(|f| matches!(f, GroupExpr::Cyclic(_)))
        .filter_map(GroupExpr::primary_prime)
        .collect();
    primes
        .iter()
        .enumerate()
        .find(|(i, p)| primes[i + 1..].contains(p))
        .map(|(_, p)| *p)
}

/// Is `g` a limit of subgroups isomorphic to ℤ?
pub fn classify_integral(g: &GroupExpr) -> Verdict {
    use Citation::*;
    let g = normalize(g);
    let report = structure::flags(&g);
    let mut trace = Vec::new();

    if g.is_trivial() {
        trace.push(step("singleton", Nonsingleton, "the trivial group has no integral subgroup"));
        return Verdict::new(false, trace);
    }
    if report.flags.discrete {
        if is_rank_one_discrete(&g) {
            trace.push(step("discrete", DiscreteCase, format!("{g} is discrete")));
            trace.push(step(
                "subgroup-of-q",
                IntegralApproximation,
                format!("{g} is a nonsingleton subgroup of Q"),
            ));
            return Verdict::new(true, trace);
        }
        let has_z = g.factors().contains(&GroupExpr::Integers);
        if has_z && g.factors().len() > 1 {
            trace.push(step(
                "integer-factor",
                IntegerFactorObstruction,
                format!("{g} = A x Z with A nontrivial"),
            ));
        } else {
            trace.push(step(
                "discrete",
                DiscreteCase,
                format!("{g} is discrete but not isomorphic to a subgroup of Q"),
            ));
        }
        return Verdict::new(false, trace);
    }

    let (n, h) = structure::vector_split(&g);
    trace.push(step(
        "vector-split",
        VectorSplitting,
        format!("vectorRank={n}, complement {h}"),
    ));
    if n == 0 {
        trace.push(step(
            "compact-identity-component",
            DiscreteCase,
            format!("identity component {} is compact but {g} is not discrete", report.identity_component),
        ));
        return Verdict::new(false, trace);
    }
    if n >= 2 {
        trace.push(step(
            "vector-rank",
            VectorRankObstruction,
            format!("vectorRank={n}: a cyclic subgroup cannot approximate {n} independent directions"),
        ));
        return Verdict::new(false, trace);
    }
    let comp = structure::comp_part(&h);
    if comp != h {
        if h.factors().contains(&GroupExpr::Integers) {
            trace.push(step(
                "integer-factor",
                IntegerFactorObstruction,
                format!("{g} = A x Z with A nontrivial"),
            ));
        } else {
            trace.push(step(
                "not-r-times-comp",
                IntegralApproximation,
                format!("comp({h}) = {comp}, so G is not R x comp(G)"),
            ));
        }
        return Verdict::new(false, trace);
    }
    let q = structure::quotient_mod_identity(&h);
    match inductive_clause(&q) {
        Ok(InductiveClause::Trivial) | Ok(InductiveClause::LocalProduct) => {
            trace.push(step(
                "quotient",
                InductivelyMonotheticClassification,
                format!("G/G0 = {q} is periodic inductively monothetic"),
            ));
            if g == GroupExpr::Reals {
                trace.push(step("line", LineApproximation, "(1/n)Z converges to R"));
            }
            if h.factors().contains(&GroupExpr::BohrIntegers) {
                trace.push(step(
                    "bohr-line",
                    BohrLineApproximation,
                    "R x bZ is approximated by Z.(1/n, id)",
                ));
            }
            trace.push(step(
                "integral",
                IntegralApproximation,
                format!("{g} = R x comp(G) with admissible G/G0"),
            ));
            Verdict::new(true, trace)
        }
        Ok(clause) => {
            trace.push(step(
                "quotient",
                IntegralApproximation,
                format!("G/G0 = {q} matches {clause:?}, which is not periodic"),
            ));
            Verdict::new(false, trace)
        }
        Err(reason) => {
            if let Some(p) = repeated_cyclic_prime(&q) {
                trace.push(step(
                    "elementary-abelian",
                    ElementaryAbelianObstruction,
                    format!("G/G0 = {q} contains Z({p}) x Z({p})"),
                ));
            } else {
                trace.push(step(
                    "quotient",
                    InductivelyMonotheticClassification,
                    format!("G/G0 = {q} is not inductively monothetic: {reason}"),
                ));
            }
            Verdict::new(false, trace)
        }
    }
}

/// Is `g` a limit of subgroups isomorphic to ℝ?
pub fn classify_numeral(g: &GroupExpr) -> Verdict {
    use Citation::*;
    let g = normalize(g);
    let (n, c) = structure::vector_split(&g);
    let mut trace = vec![step(
        "vector-split",
        VectorSplitting,
        format!("vectorRank={n}, complement {c}"),
    )];
    let cf = structure::flags(&c).flags;
    if n != 1 {
        trace.push(step(
            "vector-rank",
            CompactConnectedComplement,
            format!("vectorRank={n}, but a limit of real subgroups is R x C"),
        ));
        return Verdict::new(false, trace);
    }
    if !cf.compact || !cf.connected {
        let what = match (cf.compact, cf.connected) {
            (false, _) => "not compact",
            _ => "not connected",
        };
        trace.push(step(
            "complement",
            CompactConnectedComplement,
            format!("complement {c} is {what}"),
        ));
        return Verdict::new(false, trace);
    }
    if c.factors().contains(&GroupExpr::BohrReals) {
        trace.push(step(
            "slope-graphs",
            SlopeGraphApproximation,
            "R x bR is the limit of the graphs of n.f",
        ));
    }
    trace.push(step(
        "numeral",
        NumeralApproximation,
        format!("{g} = R x C with C = {c} compact connected"),
    ));
    Verdict::new(true, trace)
}

/// Compact-free and integrally approximable, computed twice: once through
/// the general decider and once through the direct characterization.
pub fn classify_compact_free(g: &GroupExpr) -> Result<Verdict, ClassifyError> {
    use Citation::*;
    let g = normalize(g);
    let cf = structure::flags(&g).flags.compact_free;
    let integral = classify_integral(&g);
    let general = cf && integral.answer;
    let direct = g == GroupExpr::Reals || is_rank_one_discrete(&g);
    if general != direct {
        return Err(ClassifyError::InternalInconsistency(format!(
            "{g}: compact-free and integral gives {general}, characterization gives {direct}"
        )));
    }
    let mut trace = vec![step(
        "compact-free",
        CompactFreeCharacterization,
        format!("compactFree={cf}"),
    )];
    trace.extend(integral.trace);
    trace.push(step(
        "characterization",
        CompactFreeCharacterization,
        if direct {
            format!("{g} is R or a nonsingleton subgroup of Q")
        } else {
            format!("{g} is neither R nor a nonsingleton subgroup of Q")
        },
    ));
    Ok(Verdict::new(direct, trace))
}

impl Verdict {
    pub fn with_plan(mut self, plan: CertificatePlan) -> Verdict {
        self.witness_plan = Some(plan);
        self
    }
}

fn apply(op: ClosureOp, group: &GroupExpr, note: &str, children: Vec<CertificatePlan>) -> CertificatePlan {
    CertificatePlan::Apply {
        op,
        group: group.clone(),
        note: note.to_string(),
        children,
    }
}

fn real_times(h: impl IntoIterator<Item = GroupExpr>) -> GroupExpr {
    normalize(&GroupExpr::Product(
        std::iter::once(GroupExpr::Reals).chain(h).collect(),
    ))
}

/// Stages m with ℝ × ℤ(m) cofinal among the finite quotients of ℝ × h.
fn profinite_stages(h: &GroupExpr) -> Vec<u64> {
    (1..=3u32)
        .map(|k| {
            h.factors().iter().fold(1u64, |acc, f| {
                acc * match f {
                    GroupExpr::Cyclic(n) => *n,
                    GroupExpr::PadicIntegers(p) => p.pow(k),
                    // k-th stage of ∏ ℤ_p: ℤ((k+1)!)
                    GroupExpr::ProfiniteIntegers | GroupExpr::BohrIntegers => {
                        (1..=(k as u64 + 1)).product()
                    }
                    _ => 1,
                }
            })
        })
        .collect()
}

fn bohr_line_plan() -> CertificatePlan {
    let group = real_times([GroupExpr::BohrIntegers]);
    apply(
        ClosureOp::PL,
        &group,
        "R x bZ against its quotients R x Z(m), approximated by Z.(1/n, 1 mod m)",
        profinite_stages(&GroupExpr::BohrIntegers)
            .into_iter()
            .map(|m| CertificatePlan::ZnRecipe { modulus: m })
            .collect(),
    )
}

/// A construction of an approximating sequence for an approximable group.
pub fn witness_recipe(g: &GroupExpr) -> Result<CertificatePlan, ClassifyError> {
    let g = normalize(g);
    if !classify_integral(&g).answer && !classify_numeral(&g).answer {
        return Err(ClassifyError::NotApproximable(g.to_string()));
    }
    match &g {
        GroupExpr::Rationals => {
            return Ok(CertificatePlan::DirectedUnionOfCyclics {
                group: g.clone(),
                schedule: DenominatorSchedule::Factorial,
            })
        }
        GroupExpr::Integers => {
            return Ok(CertificatePlan::DirectedUnionOfCyclics {
                group: g.clone(),
                schedule: DenominatorSchedule::Heights(crate::grammar::HeightType::new(
                    crate::grammar::DefaultHeight::Zero,
                )),
            })
        }
        GroupExpr::RationalSubgroup(h) => {
            return Ok(CertificatePlan::DirectedUnionOfCyclics {
                group: g.clone(),
                schedule: DenominatorSchedule::Heights(h.clone()),
            })
        }
        _ => {}
    }
    let (n, h) = structure::vector_split(&g);
    if n != 1 {
        return Err(ClassifyError::InternalInconsistency(format!(
            "{g} classified approximable with vectorRank={n}"
        )));
    }
    Ok(plan_for_real_times(&g, &h))
}

fn plan_for_real_times(g: &GroupExpr, h: &GroupExpr) -> CertificatePlan {
    use GroupExpr::*;
    let fs = h.factors();
    // non-compact periodic parts: union of the compact open stages
    if fs.iter().any(|f| matches!(f, PadicNumbers(_) | Prufer(_))) {
        let opened: Vec<GroupExpr> = fs
            .iter()
            .map(|f| match f {
                PadicNumbers(p) => PadicIntegers(*p),
                Prufer(p) => Cyclic(*p),
                other => other.clone(),
            })
            .collect();
        let child_group = real_times(opened.clone());
        let child_h = structure::vector_split(&child_group).1;
        return apply(
            ClosureOp::DU,
            g,
            "directed union of R x U with U compact open (p^-k Zp, Z(p^k)); first stage shown",
            vec![plan_for_real_times(&child_group, &child_h)],
        );
    }
    let hf = structure::flags(h).flags;
    if hf.connected {
        if fs.iter().all(|f| *f == Circle) {
            return if fs.is_empty() {
                CertificatePlan::ZnRecipe { modulus: 1 }
            } else {
                CertificatePlan::RnRecipe {
                    torus_rank: fs.len(),
                }
            };
        }
        let key = CertificatePlan::KeyLemmaReference {
            cite: Citation::SlopeGraphApproximation,
            group: real_times([BohrReals]),
        };
        if *h == BohrReals {
            return key;
        }
        return apply(
            ClosureOp::QG,
            g,
            "quotient of R x bR by a compact subgroup",
            vec![key],
        );
    }
    if hf.totally_disconnected {
        if fs.iter().all(|f| matches!(f, Cyclic(_))) {
            let m = fs
                .iter()
                .map(|f| match f {
                    Cyclic(n) => *n,
                    _ => 1,
                })
                .product();
            return CertificatePlan::ZnRecipe { modulus: m };
        }
        return apply(
            ClosureOp::PL,
            g,
            "strict projective limit of R x Z(m)",
            profinite_stages(h)
                .into_iter()
                .map(|m| CertificatePlan::ZnRecipe { modulus: m })
                .collect(),
        );
    }
    if *h == BohrIntegers {
        return bohr_line_plan();
    }
    apply(
        ClosureOp::QG,
        g,
        "compact monothetic complement, a quotient of bZ",
        vec![bohr_line_plan()],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse;

    fn integral(s: &str) -> bool {
        classify_integral(&parse(s).unwrap()).answer
    }

    fn numeral(s: &str) -> bool {
        classify_numeral(&parse(s).unwrap()).answer
    }

    #[test]
    fn integral_table() {
        assert!(integral("R"));
        assert!(!integral("R^2"));
        assert!(!integral("R x Z(2) x Z(2)"));
        assert!(integral("R x Qp(3)"));
        assert!(!integral("Z x Z(2)"));
        assert!(integral("R x BohrZ"));
        assert!(integral("R x T"));
        assert!(integral("Q"));
        assert!(!integral("0"));
        assert!(!integral("T"));
        assert!(!integral("Qp(2)"));
        assert!(integral("R x Z(6)"));
        assert!(!integral("R x Z"));
        assert!(!integral("R x Q"));
    }

    #[test]
    fn failure_traces_name_the_obstruction() {
        let v = classify_integral(&parse("R^2").unwrap());
        assert!(v.cites(Citation::VectorRankObstruction));
        let v = classify_integral(&parse("R x Z(3)^2").unwrap());
        assert!(v.cites(Citation::ElementaryAbelianObstruction));
        let v = classify_integral(&parse("Z^2").unwrap());
        assert!(v.cites(Citation::IntegerFactorObstruction));
    }

    #[test]
    fn numeral_table() {
        assert!(numeral("R x T"));
        assert!(!numeral("R x Z(2)"));
        assert!(numeral("R x BohrR"));
        assert!(numeral("R x Sol{default inf}"));
        assert!(numeral("R"));
        assert!(!numeral("T"));
        let v = classify_numeral(&parse("R x Z(2)").unwrap());
        assert!(v.cites(Citation::CompactConnectedComplement));
    }

    #[test]
    fn compact_free_paths_agree() {
        for s in ["R", "R x T", "QSub{2:inf; default 0}", "Z", "Q", "0", "R^2", "Z(2)"] {
            let v = classify_compact_free(&parse(s).unwrap()).unwrap();
            let expected = matches!(s, "R" | "QSub{2:inf; default 0}" | "Z" | "Q");
            assert_eq!(v.answer, expected, "{s}");
        }
    }

    #[test]
    fn recipes() {
        assert_eq!(
            witness_recipe(&GroupExpr::Rationals).unwrap(),
            CertificatePlan::DirectedUnionOfCyclics {
                group: GroupExpr::Rationals,
                schedule: DenominatorSchedule::Factorial
            }
        );
        assert_eq!(
            witness_recipe(&parse("R x Z(3)").unwrap()).unwrap(),
            CertificatePlan::ZnRecipe { modulus: 3 }
        );
        let bz = witness_recipe(&parse("R x BohrZ").unwrap()).unwrap();
        assert_eq!(bz.ops(), vec![ClosureOp::PL]);
        assert!(bz
            .leaves()
            .iter()
            .all(|l| matches!(l, CertificatePlan::ZnRecipe { .. })));
        assert_eq!(
            witness_recipe(&parse("R x T^2").unwrap()).unwrap(),
            CertificatePlan::RnRecipe { torus_rank: 2 }
        );
        assert!(matches!(
            witness_recipe(&parse("R^2").unwrap()),
            Err(ClassifyError::NotApproximable(_))
        ));
    }

    #[test]
    fn composite_recipes_use_closure_nodes() {
        let qp = witness_recipe(&parse("R x Qp(3)").unwrap()).unwrap();
        assert_eq!(qp.ops(), vec![ClosureOp::DU, ClosureOp::PL]);
        let sol = witness_recipe(&parse("R x Sol{default inf}").unwrap()).unwrap();
        assert_eq!(sol.ops(), vec![ClosureOp::QG]);
        let mixed = witness_recipe(&parse("R x T x Zp(2)").unwrap()).unwrap();
        assert_eq!(mixed.ops(), vec![ClosureOp::QG, ClosureOp::PL]);
    }
}
