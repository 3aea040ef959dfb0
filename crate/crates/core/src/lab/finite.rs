//! Finite groups ℤ(m₁) × ... × ℤ(m_k): subgroup lattices and graphs of
//! homomorphisms.

use std::collections::{HashSet, VecDeque};

use num_integer::Integer;
use serde::Serialize;

use super::annihilator::annihilator;
use super::group::ConcreteGroup;
use super::matrix::{q, Q};
use super::subgroup::ClosedSubgroupRep;
use super::LabError;

/// Largest group handled by [`subgroup_lattice_finite`].
pub const MAX_FINITE_ORDER: u64 = 1024;

/// Elements of a finite group, indexed in mixed radix with the first
/// coordinate most significant.
pub(crate) struct Elements {
    moduli: Vec<u64>,
    order: usize,
}

impl Elements {
    pub(crate) fn new(moduli: &[u64]) -> Self {
        Elements {
            moduli: moduli.to_vec(),
            order: moduli.iter().product::<u64>() as usize,
        }
    }

    pub(crate) fn order(&self) -> usize {
        self.order
    }

    pub(crate) fn decode(&self, mut i: usize) -> Vec<u64> {
        let mut out = vec![0; self.moduli.len()];
        for (k, &m) in self.moduli.iter().enumerate().rev() {
            out[k] = i as u64 % m;
            i /= m as usize;
        }
        out
    }

    pub(crate) fn encode(&self, x: &[u64]) -> usize {
        x.iter()
            .zip(&self.moduli)
            .fold(0, |acc, (&c, &m)| acc * m as usize + (c % m) as usize)
    }

    fn add(&self, a: usize, b: usize) -> usize {
        let (a, b) = (self.decode(a), self.decode(b));
        let s: Vec<u64> = a.iter().zip(&b).zip(&self.moduli).map(|((x, y), m)| (x + y) % m).collect();
        self.encode(&s)
    }

    /// Order of an element.
    pub(crate) fn element_order(&self, x: &[u64]) -> u64 {
        x.iter()
            .zip(&self.moduli)
            .fold(1, |acc, (&c, &m)| acc.lcm(&(m / c.gcd(&m))))
    }
}

fn as_vector(x: &[u64]) -> Vec<Q> {
    x.iter().map(|&c| q(c as i64)).collect()
}

/// All subgroups of a finite group, canonical and sorted by order.
pub fn subgroup_lattice_finite(g: &ConcreteGroup) -> Result<Vec<ClosedSubgroupRep>, LabError> {
    if !g.is_finite() {
        return Err(LabError::InvalidGroup(format!("{g} is not finite")));
    }
    if g.finite_order() > MAX_FINITE_ORDER {
        return Err(LabError::TooLarge(format!(
            "|F| = {} exceeds {MAX_FINITE_ORDER}",
            g.finite_order()
        )));
    }
    let el = Elements::new(&g.moduli);
    let n = el.order();
    let add: Vec<Vec<u16>> = (0..n)
        .map(|a| (0..n).map(|b| el.add(a, b) as u16).collect())
        .collect();
    // distinct cyclic subgroups, each with one generator
    let mut cyclic: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut cyclic_seen: HashSet<Vec<usize>> = HashSet::new();
    for x in 1..n {
        let mut c = vec![0];
        let mut m = x;
        while m != 0 {
            c.push(m);
            m = add[m][x] as usize;
        }
        c.sort_unstable();
        if cyclic_seen.insert(c.clone()) {
            cyclic.push((x, c));
        }
    }
    // a subgroup is a membership bitmap; each is reached from a smaller one
    // by adjoining a cyclic subgroup
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    let mut queue: VecDeque<(Vec<bool>, Vec<usize>)> = VecDeque::new();
    let mut trivial = vec![false; n];
    trivial[0] = true;
    seen.insert(trivial.clone());
    queue.push_back((trivial, vec![]));
    let mut found = Vec::new();
    while let Some((members, gens)) = queue.pop_front() {
        let inside: Vec<usize> = (0..n).filter(|&h| members[h]).collect();
        for (x, c) in &cyclic {
            if members[*x] {
                continue;
            }
            let mut next = members.clone();
            for &h in &inside {
                for &m in c {
                    next[add[h][m] as usize] = true;
                }
            }
            if seen.insert(next.clone()) {
                let mut gs = gens.clone();
                gs.push(*x);
                queue.push_back((next, gs));
            }
        }
        found.push((inside.len(), gens));
    }
    let mut out: Vec<(usize, ClosedSubgroupRep)> = found
        .into_iter()
        .map(|(size, gens)| {
            let vs = gens.iter().map(|&i| as_vector(&el.decode(i))).collect();
            ClosedSubgroupRep::generated_by(g, vs).map(|h| (size, h))
        })
        .collect::<Result<_, _>>()?;
    out.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.discrete_gens.cmp(&b.1.discrete_gens)));
    Ok(out.into_iter().map(|(_, h)| h).collect())
}

/// Partitions of `n` into nonincreasing parts.
fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// One representative of every finite abelian group of order at most
/// `max_order`, as prime-power moduli sorted by prime, then exponent. The
/// trivial group is the empty list.
pub fn abelian_groups_up_to(max_order: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for n in 1..=max_order {
        let mut groups: Vec<Vec<u64>> = vec![vec![]];
        for (p, e) in crate::grammar::factorize(n) {
            let mut next = Vec::new();
            for g in &groups {
                for part in partitions(e, e) {
                    let mut h = g.clone();
                    h.extend(part.iter().rev().map(|&k| p.pow(k)));
                    next.push(h);
                }
            }
            groups = next;
        }
        out.extend(groups);
    }
    out
}

/// Whether ℤ(m₁) × ... × ℤ(m_k) is cyclic.
pub fn is_cyclic(moduli: &[u64]) -> bool {
    let mut acc = 1u64;
    for &m in moduli {
        if acc.gcd(&m) != 1 {
            return false;
        }
        acc *= m;
    }
    true
}

/// A homomorphism ℤ(a₁)×...×ℤ(a_r) → ℤ(b₁)×...×ℤ(b_s); `matrix[j][i]` is the
/// `j`-th coordinate of the image of the `i`-th generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteHom {
    pub source: Vec<u64>,
    pub target: Vec<u64>,
    pub matrix: Vec<Vec<u64>>,
}

impl FiniteHom {
    pub fn new(source: Vec<u64>, target: Vec<u64>, matrix: Vec<Vec<u64>>) -> Result<Self, LabError> {
        if matrix.len() != target.len() || matrix.iter().any(|r| r.len() != source.len()) {
            return Err(LabError::NotAHomomorphism(format!(
                "matrix shape does not match {} -> {} coordinates",
                source.len(),
                target.len()
            )));
        }
        for (j, row) in matrix.iter().enumerate() {
            for (i, &f) in row.iter().enumerate() {
                if !(source[i] * f).is_multiple_of(target[j]) {
                    return Err(LabError::NotAHomomorphism(format!(
                        "generator of order {} sent to an element of coordinate order {} in Z({})",
                        source[i],
                        target[j] / f.gcd(&target[j]),
                        target[j]
                    )));
                }
            }
        }
        Ok(FiniteHom { source, target, matrix })
    }

    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        self.matrix
            .iter()
            .zip(&self.target)
            .map(|(row, &b)| row.iter().zip(x).map(|(&f, &c)| f * c).sum::<u64>() % b)
            .collect()
    }

    /// The adjoint f̂ : B̂ → Â, in the same coordinate form. A character β of
    /// B is the vector of its values β_j/b_j on the generators.
    pub fn adjoint(&self) -> FiniteHom {
        let matrix = (0..self.source.len())
            .map(|i| {
                let a = self.source[i];
                (0..self.target.len())
                    .map(|j| (a * self.matrix[j][i] / self.target[j]) % a)
                    .collect()
            })
            .collect();
        FiniteHom {
            source: self.target.clone(),
            target: self.source.clone(),
            matrix,
        }
    }

    /// Every homomorphism between the two groups.
    pub fn all(source: &[u64], target: &[u64]) -> Vec<FiniteHom> {
        // allowed images of each generator, coordinatewise multiples of b/gcd(a, b)
        let choices: Vec<Vec<u64>> = target
            .iter()
            .flat_map(|&b| {
                source.iter().map(move |&a| {
                    let step = b / a.gcd(&b);
                    (0..b).step_by(step as usize).collect()
                })
            })
            .collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; choices.len()];
        loop {
            let matrix = (0..target.len())
                .map(|j| (0..source.len()).map(|i| choices[j * source.len() + i][idx[j * source.len() + i]]).collect())
                .collect();
            out.push(FiniteHom {
                source: source.to_vec(),
                target: target.to_vec(),
                matrix,
            });
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return out;
                }
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
}

/// Is the annihilator of the graph of `f` in A × B the graph of the adjoint,
/// {(f̂(β), −β)} ⊂ Â × B̂?
pub fn graph_adjoint_check(f: &FiniteHom) -> Result<bool, LabError> {
    let f = FiniteHom::new(f.source.clone(), f.target.clone(), f.matrix.clone())?;
    let moduli: Vec<u64> = f.source.iter().chain(&f.target).copied().collect();
    let g = ConcreteGroup::finite(moduli)?;
    let r = f.source.len();
    let graph_gens = (0..r)
        .map(|i| {
            let mut e = vec![0; r];
            e[i] = 1;
            let mut v = e.clone();
            v.extend(f.apply(&e));
            as_vector(&v)
        })
        .collect();
    let graph = ClosedSubgroupRep::generated_by(&g, graph_gens)?;
    let perp = annihilator(&graph, &g)?;
    let adj = f.adjoint();
    let s = f.target.len();
    let adj_gens = (0..s)
        .map(|j| {
            let mut e = vec![0; s];
            e[j] = 1;
            let mut v = adj.apply(&e);
            v.extend(e.iter().zip(&f.target).map(|(&c, &b)| (b - c) % b));
            as_vector(&v)
        })
        .collect();
    let adj_graph = ClosedSubgroupRep::generated_by(&g.dual(), adj_gens)?;
    Ok(perp == adj_graph)
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SubgroupDuality {
    pub subgroup: ClosedSubgroupRep,
    pub order: u64,
    pub annihilator: ClosedSubgroupRep,
    pub annihilator_order: u64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FiniteDualityReport {
    pub group: String,
    pub order: u64,
    pub subgroups: Vec<SubgroupDuality>,
    /// (H^⊥)^⊥ = H for every H.
    pub involution: bool,
    /// |H|·|H^⊥| = |F| for every H.
    pub order_product: bool,
    /// H ≤ K iff K^⊥ ≤ H^⊥ for every pair.
    pub inclusion_reversing: bool,
    pub failures: Vec<String>,
}

impl FiniteDualityReport {
    pub fn passed(&self) -> bool {
        self.involution && self.order_product && self.inclusion_reversing
    }
}

/// Annihilators of every subgroup of a finite group, with the three
/// duality checks.
pub fn finite_duality_report(g: &ConcreteGroup) -> Result<FiniteDualityReport, LabError> {
    if !g.is_finite() {
        return Err(LabError::InvalidGroup(format!("{g} is not finite")));
    }
    let order = g.finite_order();
    let d = g.dual();
    let subs = subgroup_lattice_finite(g)?;
    let mut failures = Vec::new();
    let (mut involution, mut order_product, mut inclusion_reversing) = (true, true, true);
    let mut rows = Vec::with_capacity(subs.len());
    for h in &subs {
        let a = annihilator(h, g)?;
        if annihilator(&a, &d)? != *h {
            involution = false;
            failures.push(format!("(H^⊥)^⊥ ≠ H for H = {h}"));
        }
        let oh = h.finite_order(g).unwrap_or(0);
        let oa = a.finite_order(&d).unwrap_or(0);
        if oh * oa != order {
            order_product = false;
            failures.push(format!("|H|·|H^⊥| = {oh}·{oa} for H = {h}"));
        }
        rows.push(SubgroupDuality {
            subgroup: h.clone(),
            order: oh,
            annihilator: a,
            annihilator_order: oa,
        });
    }
    for x in &rows {
        for y in &rows {
            if x.subgroup.is_subgroup_of(&y.subgroup, g) != y.annihilator.is_subgroup_of(&x.annihilator, &d) {
                inclusion_reversing = false;
                failures.push(format!("inclusion not reversed for {} and {}", x.subgroup, y.subgroup));
            }
        }
    }
    Ok(FiniteDualityReport {
        group: g.to_string(),
        order,
        subgroups: rows,
        involution,
        order_product,
        inclusion_reversing,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(m: Vec<u64>) -> usize {
        subgroup_lattice_finite(&ConcreteGroup::finite(m).unwrap()).unwrap().len()
    }

    #[test]
    fn duality_report_klein() {
        let r = finite_duality_report(&ConcreteGroup::finite(vec![2, 2]).unwrap()).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.subgroups.len(), 5);
        assert_eq!(r.subgroups[0].annihilator_order, 4);
        assert!(finite_duality_report(&ConcreteGroup::reals()).is_err());
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(count(vec![4]), 3);
        assert_eq!(count(vec![2, 2]), 5);
        assert_eq!(count(vec![2, 3]), 4);
        assert_eq!(count(vec![]), 1);
        // Z(2)^3 has 1 + 7 + 7 + 1 subgroups
        assert_eq!(count(vec![2, 2, 2]), 16);
    }

    #[test]
    fn abelian_group_counts() {
        let gs = abelian_groups_up_to(16);
        let count = |n: u64| gs.iter().filter(|g| g.iter().product::<u64>() == n).count();
        // number of abelian groups of order n
        assert_eq!((count(1), count(8), count(12), count(16)), (1, 3, 2, 5));
        assert_eq!(gs.len(), 1 + 1 + 1 + 2 + 1 + 1 + 1 + 3 + 2 + 1 + 1 + 2 + 1 + 1 + 1 + 5);
        assert!(gs.contains(&vec![2, 4]));
        assert!(is_cyclic(&[4, 3]) && !is_cyclic(&[2, 4]) && is_cyclic(&[]));
    }

    #[test]
    fn too_large() {
        let g = ConcreteGroup::finite(vec![1031]).unwrap();
        assert!(matches!(subgroup_lattice_finite(&g), Err(LabError::TooLarge(_))));
    }

    #[test]
    fn adjoint_examples() {
        let f = FiniteHom::new(vec![2], vec![4], vec![vec![2]]).unwrap();
        assert!(graph_adjoint_check(&f).unwrap());
        let zero = FiniteHom::new(vec![2, 2], vec![4], vec![vec![0, 0]]).unwrap();
        assert!(graph_adjoint_check(&zero).unwrap());
        let id = FiniteHom::new(vec![3], vec![3], vec![vec![1]]).unwrap();
        assert!(graph_adjoint_check(&id).unwrap());
    }

    #[test]
    fn rejects_non_homomorphisms() {
        assert!(matches!(
            FiniteHom::new(vec![2], vec![4], vec![vec![1]]),
            Err(LabError::NotAHomomorphism(_))
        ));
    }

    #[test]
    fn hom_counts() {
        // |Hom(Z(a), Z(b))| = gcd(a, b)
        assert_eq!(FiniteHom::all(&[4], &[6]).len(), 2);
        assert_eq!(FiniteHom::all(&[2, 2], &[2, 2]).len(), 16);
        assert_eq!(FiniteHom::all(&[], &[3]).len(), 1);
    }
}
