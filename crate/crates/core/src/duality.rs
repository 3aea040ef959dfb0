//! Symbolic Pontryagin duality on grammar expressions.

use thiserror::Error;

use crate::grammar::GroupExpr;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DualityError {
    #[error("the dual of {0} is not expressible in the grammar")]
    DualUnrepresentable(String),
}

/// Character group of `g`, atom by atom.
///
/// Products dualize factorwise and local products entrywise (the dual
/// component keeps the prime). The Bohr compactifications, the identity
/// component of bℤ and the profinite integers have duals (𝕋_d, ℝ_d, a
/// torsion-free divisible group, ℚ/ℤ) outside the grammar.
pub fn dual(g: &GroupExpr) -> Result<GroupExpr, DualityError> {
    use GroupExpr::*;
    Ok(match g {
        Trivial => Trivial,
        Reals => Reals,
        Circle => Integers,
        Integers => Circle,
        Rationals => Solenoid(crate::grammar::HeightType::new(
            crate::grammar::DefaultHeight::Infinite,
        )),
        Cyclic(n) => Cyclic(*n),
        Prufer(p) => PadicIntegers(*p),
        PadicIntegers(p) => Prufer(*p),
        PadicNumbers(p) => PadicNumbers(*p),
        RationalSubgroup(h) => Solenoid(h.clone()),
        Solenoid(h) => RationalSubgroup(h.clone()),
        BohrIntegers | BohrReals | BohrIntegersIdentity | ProfiniteIntegers => {
            return Err(DualityError::DualUnrepresentable(g.to_string()))
        }
        Product(fs) => Product(fs.iter().map(dual).collect::<Result<_, _>>()?),
        LocalProduct(es) => LocalProduct(
            es.iter()
                .map(|(p, c)| dual(c).map(|d| (*p, d)))
                .collect::<Result<_, _>>()?,
        ),
    })
}

pub fn dual_defined(g: &GroupExpr) -> bool {
    use GroupExpr::*;
    match g {
        BohrIntegers | BohrReals | BohrIntegersIdentity | ProfiniteIntegers => false,
        Product(fs) => fs.iter().all(dual_defined),
        LocalProduct(es) => es.iter().all(|(_, c)| dual_defined(c)),
        _ => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{normalize, parse, DefaultHeight, GroupExpr as G, HeightType};

    #[test]
    fn circle_and_integers_swap() {
        assert_eq!(dual(&G::Circle).unwrap(), G::Integers);
        assert_eq!(dual(&G::Integers).unwrap(), G::Circle);
    }

    #[test]
    fn self_dual_product() {
        let g = G::Product(vec![G::Reals, G::PadicNumbers(5)]);
        assert_eq!(dual(&g).unwrap(), g);
    }

    #[test]
    fn prufer_to_padic() {
        assert_eq!(dual(&G::Prufer(3)).unwrap(), G::PadicIntegers(3));
    }

    #[test]
    fn rationals_to_full_solenoid() {
        assert_eq!(
            dual(&G::Rationals).unwrap(),
            G::Solenoid(HeightType::new(DefaultHeight::Infinite))
        );
    }

    #[test]
    fn bohr_atoms_poison() {
        assert!(!dual_defined(&G::BohrIntegers));
        assert!(dual_defined(&G::Rationals));
        assert!(!dual_defined(&G::Product(vec![G::BohrReals, G::Circle])));
        assert_eq!(
            dual(&G::BohrIntegers),
            Err(DualityError::DualUnrepresentable("BohrZ".into()))
        );
    }

    #[test]
    fn local_product_entrywise() {
        let g = parse("LP[2:Qp(2), 3:Prufer(3), 5:Z(25)]").unwrap();
        let d = dual(&g).unwrap();
        assert_eq!(
            d,
            G::LocalProduct(vec![
                (2, G::PadicNumbers(2)),
                (3, G::PadicIntegers(3)),
                (5, G::Cyclic(25))
            ])
        );
        assert_eq!(normalize(&dual(&d).unwrap()), normalize(&g));
    }
}
