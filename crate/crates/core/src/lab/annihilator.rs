//! Annihilators under the pairing
//! ⟨x, χ⟩ = Σ x_ℝ·χ_ℝ + Σ x_𝕋·χ_ℤ + Σ x_ℤ·χ_𝕋 + Σ x_F·χ_F/m  (mod 1).

use num_bigint::BigInt;
use num_traits::Zero;

use super::group::ConcreteGroup;
use super::matrix::{common_denominator, dot, kernel, snf, to_integer, zero_vec, Q};
use super::subgroup::{canonicalize, ClosedSubgroupRep};
use super::LabError;

/// The linear form χ ↦ ⟨x, χ⟩ (before reduction mod 1) as a vector in the
/// coordinates of the dual group.
pub fn pairing_row(x: &[Q], g: &ConcreteGroup) -> Vec<Q> {
    let dual = g.dual();
    let mut row = zero_vec(g.dim());
    for i in g.r_range() {
        row[i] = x[i].clone();
    }
    // characters of the ℤ block live on the dual torus block and vice versa
    for (k, i) in g.z_range().enumerate() {
        row[dual.t_range().start + k] = x[i].clone();
    }
    for (k, i) in g.t_range().enumerate() {
        row[dual.z_range().start + k] = x[i].clone();
    }
    for (k, i) in g.f_range().enumerate() {
        row[i] = &x[i] / Q::from_integer(BigInt::from(g.moduli[k]));
    }
    row
}

/// ⟨x, χ⟩ reduced to `[0, 1)`.
pub fn pairing(x: &[Q], chi: &[Q], g: &ConcreteGroup) -> Q {
    super::group::fractional(&dot(&pairing_row(x, g), chi))
}

/// H^⊥ as a closed subgroup of the dual group.
pub fn annihilator(h: &ClosedSubgroupRep, g: &ConcreteGroup) -> Result<ClosedSubgroupRep, LabError> {
    let h = if h.canonical { h.clone() } else { canonicalize(h, g)? };
    let dual = g.dual();
    let n = g.dim();
    // characters must vanish identically on V
    let m: Vec<Vec<Q>> = h.continuous_basis.iter().map(|v| pairing_row(v, g)).collect();
    let k = kernel(&m, n);
    let s = k.len();
    // and take integer values on the lattice: y ↦ A Kᵀ y ∈ ℤ^r
    let c: Vec<Vec<Q>> = h
        .discrete_gens
        .iter()
        .map(|l| {
            let row = pairing_row(l, g);
            k.iter().map(|kv| dot(&row, kv)).collect()
        })
        .collect();
    let den = common_denominator(&c);
    let c_int = to_integer(&c, &den);
    let f = snf(&c_int, s);
    let rank = f.rank();
    let column = |j: usize| -> Vec<Q> {
        // Kᵀ W e_j
        let mut out = zero_vec(n);
        for (i, kv) in k.iter().enumerate() {
            let w = Q::from_integer(f.w[i][j].clone());
            if w.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(kv) {
                *o += &w * x;
            }
        }
        out
    };
    let mut gens = Vec::new();
    for j in 0..rank {
        let scale = Q::new(den.clone(), f.diag[j].clone());
        gens.push(column(j).into_iter().map(|x| x * &scale).collect());
    }
    let continuous: Vec<Vec<Q>> = (rank..s).map(column).collect();
    canonicalize(&ClosedSubgroupRep::new(continuous, gens), &dual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::matrix::{frac, q};

    #[test]
    fn slope_graph_annihilator() {
        let g = ConcreteGroup::new(1, 1, 0, vec![]).unwrap();
        for n in 1..5 {
            let r = canonicalize(&ClosedSubgroupRep::new(vec![vec![q(1), q(n)]], vec![]), &g).unwrap();
            let a = annihilator(&r, &g).unwrap();
            let expected = ClosedSubgroupRep::generated_by(&g.dual(), vec![vec![q(-n), q(1)]]).unwrap();
            assert_eq!(a, expected);
        }
    }

    #[test]
    fn whole_and_trivial() {
        let g = ConcreteGroup::new(1, 1, 1, vec![4]).unwrap();
        let d = g.dual();
        assert!(annihilator(&ClosedSubgroupRep::whole(&g), &g).unwrap().is_trivial(&d));
        assert!(annihilator(&ClosedSubgroupRep::trivial(&g), &g).unwrap().is_whole(&d));
    }

    #[test]
    fn zn_annihilator_pairs_to_zero() {
        let g = ConcreteGroup::new(1, 0, 0, vec![3]).unwrap();
        let h = ClosedSubgroupRep::generated_by(&g, vec![vec![frac(1, 5), q(1)]]).unwrap();
        let a = annihilator(&h, &g).unwrap();
        for chi in &a.discrete_gens {
            for x in &h.discrete_gens {
                assert_eq!(pairing(x, chi, &g), q(0));
            }
        }
        // (r, c) with r/5 + c/3 integral: (5, 0) and (-5/3, 1)
        let expected =
            ClosedSubgroupRep::generated_by(&g.dual(), vec![vec![q(5), q(0)], vec![frac(-5, 3), q(1)]]).unwrap();
        assert_eq!(a, expected);
    }

    #[test]
    fn lattice_in_the_line_is_self_dual_up_to_scaling() {
        let g = ConcreteGroup::reals();
        let h = ClosedSubgroupRep::generated_by(&g, vec![vec![q(3)]]).unwrap();
        let a = annihilator(&h, &g).unwrap();
        assert_eq!(a.discrete_gens, vec![vec![frac(1, 3)]]);
    }
}
