//! Threshold searches for limits of subgroup sequences.

use rayon::prelude::*;
use serde::Serialize;

use super::annihilator::annihilator;
use super::distance::Prepared;
use super::group::ConcretePoint;
use super::neighborhood::{in_u_prepared, CompactSet, Membership, NeighborhoodSpec};
use super::sequence::SubgroupSequence;
use super::subgroup::ClosedSubgroupRep;
use super::LabError;

/// Indices evaluated together, from the top down.
const BLOCK: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", content = "n0", rename_all = "camelCase")]
pub enum Threshold {
    FoundAt(u64),
    NotFound,
}

impl Threshold {
    pub fn found(&self) -> bool {
        matches!(self, Threshold::FoundAt(_))
    }

    /// Found, with the passing run covering at least the upper half of
    /// [1, n_max]. A run of a few indices at the very end says little.
    pub fn stable(&self, n_max: u64) -> bool {
        matches!(self, Threshold::FoundAt(n0) if *n0 <= n_max.div_ceil(2))
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LimitReport {
    pub sequence: String,
    pub group: String,
    pub target: ClosedSubgroupRep,
    pub neighborhood: NeighborhoodSpec,
    pub n_max: u64,
    pub threshold: Threshold,
    /// Index just below the threshold whose answer fell inside the margin.
    pub borderline_at: Option<u64>,
    /// See [`Threshold::stable`].
    pub stable: bool,
}

fn evaluate(
    seq: &SubgroupSequence,
    target: &Prepared,
    nbhd: &NeighborhoodSpec,
    n: u64,
) -> Result<Membership, LabError> {
    let h = Prepared::new(&seq.term(n)?, seq.group())?;
    in_u_prepared(&h, target, nbhd)
}

/// Least n₀ ≤ n_max such that H_n ∈ 𝒰(target; K, W) for every n in
/// [n₀, n_max]. A borderline answer at n_max is an error; below it, it ends
/// the run of passing indices.
pub fn limit_threshold(
    seq: &SubgroupSequence,
    target: &ClosedSubgroupRep,
    nbhd: &NeighborhoodSpec,
    n_max: u64,
) -> Result<LimitReport, LabError> {
    let g = seq.group();
    let pt = Prepared::new(target, g)?;
    let mut report = LimitReport {
        sequence: seq.name(),
        group: g.to_string(),
        target: pt.rep().clone(),
        neighborhood: nbhd.clone(),
        n_max,
        threshold: Threshold::NotFound,
        borderline_at: None,
        stable: false,
    };
    let mut hi = n_max;
    while hi >= 1 {
        let lo = hi.saturating_sub(BLOCK - 1).max(1);
        let results: Vec<(u64, Result<Membership, LabError>)> = (lo..=hi)
            .rev()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|n| (n, evaluate(seq, &pt, nbhd, n)))
            .collect();
        for (n, r) in results {
            match r {
                Ok(Membership::Yes) => {}
                Ok(Membership::No) => {
                    if n < n_max {
                        report.threshold = Threshold::FoundAt(n + 1);
                    }
                    report.stable = report.threshold.stable(n_max);
                    return Ok(report);
                }
                Err(e @ LabError::Borderline { .. }) => {
                    if n == n_max {
                        return Err(e);
                    }
                    report.threshold = Threshold::FoundAt(n + 1);
                    report.borderline_at = Some(n);
                    report.stable = report.threshold.stable(n_max);
                    return Ok(report);
                }
                Err(e) => return Err(e),
            }
        }
        hi = lo - 1;
    }
    report.threshold = Threshold::FoundAt(1);
    report.stable = true;
    Ok(report)
}

/// A point of K outside W that stays near H_n along the tail of the
/// sequence, so that some selection h_n ∈ H_n clusters away from e.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClusterWitness {
    pub point: ConcretePoint,
    /// Within δ of H_n for every n in the tail, not just cofinally many.
    pub every_index: bool,
    pub close_indices: usize,
    pub tail: (u64, u64),
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SubsequenceLimit {
    pub name: String,
    pub limit: String,
    pub threshold: Threshold,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TrivialLimitReport {
    pub sequence: String,
    pub group: String,
    pub neighborhood: NeighborhoodSpec,
    pub n_max: u64,
    /// Condition (b): H_n → {e}, decided at this scale.
    pub converges: Threshold,
    pub stable: bool,
    /// Least n with H_m ∉ 𝒰({e}; K, W) for every m in [n, n_max].
    pub fails_from: Option<u64>,
    pub witnesses: Vec<ClusterWitness>,
    /// No witness at all: every convergent selection tends to e.
    pub condition_a: bool,
    /// No witness valid at every index of the tail.
    pub condition_a_prime: bool,
    pub subsequences: Vec<SubsequenceLimit>,
    pub verdict: String,
}

/// Largest number of candidate points tried per index.
const MAX_CANDIDATES: usize = 24;

fn cluster_witnesses(
    seq: &SubgroupSequence,
    nbhd: &NeighborhoodSpec,
    n_max: u64,
) -> Result<Vec<ClusterWitness>, LabError> {
    let g = seq.group();
    let rho = match &nbhd.k {
        CompactSet::Ball(r) => r.clone(),
        CompactSet::Finite(_) => return Ok(Vec::new()),
    };
    let eps_sq = &nbhd.epsilon * &nbhd.epsilon;
    let delta = nbhd.delta();
    let delta_sq = &delta * &delta;
    let tail = ((n_max / 2).max(1), n_max);
    let indices: Vec<u64> = (tail.0..=tail.1).collect();
    let terms: Vec<Prepared> = indices
        .par_iter()
        .map(|&n| Prepared::new(&seq.term(n)?, g))
        .collect::<Result<_, _>>()?;
    let mut candidates: Vec<ConcretePoint> = Vec::new();
    for p in terms.iter().rev().take(2) {
        if !p.rep().is_discrete() {
            continue;
        }
        let pts = p.points_in_ball(&rho)?;
        candidates.extend(
            pts.into_iter()
                .filter(|(_, n)| *n > eps_sq)
                .take(MAX_CANDIDATES)
                .map(|(x, _)| x),
        );
    }
    candidates.sort();
    candidates.dedup();
    // four consecutive blocks covering the tail
    let quarter = indices.len().div_ceil(4).max(1);
    let mut out: Vec<ClusterWitness> = candidates
        .par_iter()
        .filter_map(|x| {
            let close: Vec<bool> = terms
                .iter()
                .map(|p| p.distance_sq(&x.coords, Some(&delta_sq)).is_some_and(|d| d <= delta_sq))
                .collect();
            let every = close.iter().all(|&c| c);
            let cofinal = close.chunks(quarter).all(|c| c.iter().any(|&b| b));
            (every || cofinal).then(|| ClusterWitness {
                point: x.clone(),
                every_index: every,
                close_indices: close.iter().filter(|&&c| c).count(),
                tail,
            })
        })
        .collect();
    out.sort_by(|a, b| b.every_index.cmp(&a.every_index).then_with(|| a.point.cmp(&b.point)));
    Ok(out)
}

/// Runs the trivial-limit test and hunts for points witnessing that some
/// selection of elements h_n ∈ H_n has a limit other than e.
pub fn trivial_limit_check(
    seq: &SubgroupSequence,
    nbhd: &NeighborhoodSpec,
    n_max: u64,
) -> Result<TrivialLimitReport, LabError> {
    let g = seq.group();
    let trivial = ClosedSubgroupRep::trivial(g);
    let whole = ClosedSubgroupRep::whole(g);
    let pt = Prepared::new(&trivial, g)?;
    let answers: Vec<Membership> = (1..=n_max)
        .into_par_iter()
        .map(|n| evaluate(seq, &pt, nbhd, n))
        .collect::<Result<_, _>>()?;
    let passing_run = answers.iter().rev().take_while(|&&m| m == Membership::Yes).count() as u64;
    let converges = if passing_run == 0 {
        Threshold::NotFound
    } else {
        Threshold::FoundAt(n_max - passing_run + 1)
    };
    let failing_run = answers.iter().rev().take_while(|&&m| m == Membership::No).count() as u64;
    let fails_from = (failing_run > 0).then(|| n_max - failing_run + 1);

    let witnesses = cluster_witnesses(seq, nbhd, n_max)?;
    let condition_a = witnesses.is_empty();
    let condition_a_prime = !witnesses.iter().any(|w| w.every_index);

    let mut subsequences = Vec::new();
    if n_max >= 8 {
        for (label, offset) in [("even", 0), ("odd", 1)] {
            // n ↦ H_{2n} and n ↦ H_{2n+1}
            let sub = seq.subsequence(2, offset);
            let half = (n_max - offset) / 2;
            let mut limit = "undetermined".to_string();
            let mut threshold = Threshold::NotFound;
            for (name, t) in [("trivial", &trivial), ("whole group", &whole)] {
                let r = limit_threshold(&sub, t, nbhd, half)?;
                if r.stable {
                    limit = name.to_string();
                    threshold = r.threshold;
                    break;
                }
            }
            subsequences.push(SubsequenceLimit {
                name: label.to_string(),
                limit,
                threshold,
            });
        }
    }

    let scale = scale_text(nbhd);
    let stable = converges.stable(n_max);
    let verdict = if stable {
        "converges to trivial".to_string()
    } else if subsequences.len() == 2
        && subsequences[0].limit != subsequences[1].limit
        && subsequences.iter().all(|s| s.limit != "undetermined")
    {
        format!(
            "divergent: even subsequence → {}, odd subsequence → {}",
            subsequences[0].limit, subsequences[1].limit
        )
    } else {
        match fails_from {
            Some(n) => format!("diverges from {{0}}: in_U fails at {scale} for all n ≥ {n}"),
            None => format!("diverges from {{0}}: in_U fails at {scale} for infinitely many n"),
        }
    };
    Ok(TrivialLimitReport {
        sequence: seq.name(),
        group: g.to_string(),
        neighborhood: nbhd.clone(),
        n_max,
        converges,
        stable,
        fails_from,
        witnesses,
        condition_a,
        condition_a_prime,
        subsequences,
        verdict,
    })
}

fn scale_text(nbhd: &NeighborhoodSpec) -> String {
    match &nbhd.k {
        CompactSet::Ball(r) => format!("K=Ball({r}), W=Ball({})", nbhd.epsilon),
        CompactSet::Finite(ps) => format!("K=<{} points>, W=Ball({})", ps.len(), nbhd.epsilon),
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DualityReport {
    pub primal: LimitReport,
    pub dual: LimitReport,
    /// Both searches succeed (stably) or both fail.
    pub consistent: bool,
}

/// Compares H_n → H with H_n^⊥ → H^⊥ at the given scales.
pub fn duality_limit_consistency(
    seq: &SubgroupSequence,
    target: &ClosedSubgroupRep,
    nbhd: &NeighborhoodSpec,
    dual_nbhd: &NeighborhoodSpec,
    n_max: u64,
) -> Result<DualityReport, LabError> {
    let primal = limit_threshold(seq, target, nbhd, n_max)?;
    let dual_seq = seq.annihilators();
    let dual_target = annihilator(target, seq.group())?;
    let dual = limit_threshold(&dual_seq, &dual_target, dual_nbhd, n_max)?;
    let consistent = primal.stable == dual.stable;
    Ok(DualityReport { primal, dual, consistent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::matrix::{frac, q};

    #[test]
    fn lattices_leave_every_ball() {
        let seq = SubgroupSequence::lattice();
        let nb = NeighborhoodSpec::ball(q(3), frac(1, 10)).unwrap();
        let r = limit_threshold(&seq, &ClosedSubgroupRep::trivial(seq.group()), &nb, 20).unwrap();
        assert_eq!(r.threshold, Threshold::FoundAt(4));
    }

    #[test]
    fn inverse_lattices_fill_the_line() {
        let seq = SubgroupSequence::inv_lattice();
        let nb = NeighborhoodSpec::ball(q(10), frac(1, 10)).unwrap();
        let r = limit_threshold(&seq, &ClosedSubgroupRep::whole(seq.group()), &nb, 30).unwrap();
        // 1/(2n) ≤ ε − δ = 3/40 first holds at n = 7; n = 6 is inside the margin
        assert_eq!(r.threshold, Threshold::FoundAt(7));
        assert_eq!(r.borderline_at, Some(6));
    }

    #[test]
    fn not_found_when_the_last_index_fails() {
        let seq = SubgroupSequence::inv_lattice();
        let nb = NeighborhoodSpec::ball(q(3), frac(1, 10)).unwrap();
        let r = limit_threshold(&seq, &ClosedSubgroupRep::trivial(seq.group()), &nb, 10).unwrap();
        assert_eq!(r.threshold, Threshold::NotFound);
    }

    #[test]
    fn trivial_limit_reports() {
        let nb = NeighborhoodSpec::ball(q(3), frac(1, 10)).unwrap();
        let r = trivial_limit_check(&SubgroupSequence::lattice(), &nb, 24).unwrap();
        assert_eq!(r.verdict, "converges to trivial");
        assert!(r.condition_a && r.witnesses.is_empty());

        let r = trivial_limit_check(&SubgroupSequence::alternating(), &nb, 40).unwrap();
        assert_eq!(r.verdict, "divergent: even subsequence → trivial, odd subsequence → whole group");
        assert!(!r.condition_a && r.condition_a_prime);

        let nb1 = NeighborhoodSpec::ball(q(1), frac(1, 10)).unwrap();
        let r = trivial_limit_check(&SubgroupSequence::inv_lattice(), &nb1, 24).unwrap();
        assert_eq!(r.fails_from, Some(1));
        assert!(r.verdict.starts_with("diverges from {0}"));
        assert!(!r.condition_a_prime);
    }
}
