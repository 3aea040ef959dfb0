use super::{factorize, GroupExpr};

/// Canonical form.
///
/// Products (and finite local products, which are direct products) are
/// flattened, cyclic groups are split into prime-power parts, rank-one
/// subgroups of ℚ and solenoids with trivial or full heights collapse to
/// ℤ/ℚ and 𝕋/full solenoid, trivial factors disappear, and factors are
/// sorted by a fixed order. A one-factor product is its factor; an empty
/// one is [`GroupExpr::Trivial`].
pub fn normalize(g: &GroupExpr) -> GroupExpr {
    let mut atoms = Vec::new();
    collect(g, &mut atoms);
    atoms.sort_by(|a, b| sort_key(a).cmp(&sort_key(b)).then_with(|| a.cmp(b)));
    match atoms.len() {
        0 => GroupExpr::Trivial,
        1 => atoms.pop().unwrap(),
        _ => GroupExpr::Product(atoms),
    }
}

fn collect(g: &GroupExpr, out: &mut Vec<GroupExpr>) {
    match g {
        GroupExpr::Trivial => {}
        GroupExpr::Product(fs) => fs.iter().for_each(|f| collect(f, out)),
        GroupExpr::LocalProduct(es) => es.iter().for_each(|(_, c)| collect(c, out)),
        GroupExpr::Cyclic(0) => out.push(GroupExpr::Integers),
        GroupExpr::Cyclic(n) => {
            for (p, k) in factorize(*n) {
                out.push(GroupExpr::Cyclic(p.pow(k)));
            }
        }
        GroupExpr::RationalSubgroup(h) => {
            let h = h.minimized();
            out.push(if h.is_all_zero() {
                GroupExpr::Integers
            } else if h.is_all_infinite() {
                GroupExpr::Rationals
            } else {
                GroupExpr::RationalSubgroup(h)
            });
        }
        GroupExpr::Solenoid(h) => {
            let h = h.minimized();
            out.push(if h.is_all_zero() {
                GroupExpr::Circle
            } else {
                GroupExpr::Solenoid(h)
            });
        }
        atom => out.push(atom.clone()),
    }
}

/// (atom tag, prime, exponent).
fn sort_key(g: &GroupExpr) -> (u8, u64, u32) {
    use GroupExpr::*;
    match g {
        Reals => (0, 0, 0),
        Circle => (1, 0, 0),
        Solenoid(_) => (2, 0, 0),
        BohrReals => (3, 0, 0),
        BohrIntegersIdentity => (4, 0, 0),
        BohrIntegers => (5, 0, 0),
        Integers => (6, 0, 0),
        Rationals => (7, 0, 0),
        RationalSubgroup(_) => (8, 0, 0),
        ProfiniteIntegers => (9, 0, 0),
        PadicIntegers(p) => (10, *p, 0),
        PadicNumbers(p) => (11, *p, 0),
        Prufer(p) => (12, *p, 0),
        Cyclic(n) => match factorize(*n).as_slice() {
            [(p, k)] => (13, *p, *k),
            _ => (13, *n, 0),
        },
        LocalProduct(_) => (14, 0, 0),
        Product(_) => (15, 0, 0),
        Trivial => (16, 0, 0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{DefaultHeight, GroupExpr as G, HeightType};

    #[test]
    fn crt_split() {
        assert_eq!(
            normalize(&G::Product(vec![G::Cyclic(6)])),
            G::Product(vec![G::Cyclic(2), G::Cyclic(3)])
        );
        assert_eq!(
            normalize(&G::Cyclic(12)),
            G::Product(vec![G::Cyclic(4), G::Cyclic(3)])
        );
    }

    #[test]
    fn flatten_and_sort() {
        let g = G::Product(vec![G::Reals, G::Product(vec![G::Circle, G::Reals])]);
        assert_eq!(
            normalize(&g),
            G::Product(vec![G::Reals, G::Reals, G::Circle])
        );
    }

    #[test]
    fn height_collapse() {
        let q = G::RationalSubgroup(HeightType::new(DefaultHeight::Infinite));
        assert_eq!(normalize(&q), G::Rationals);
        let z = G::RationalSubgroup(HeightType::new(DefaultHeight::Zero));
        assert_eq!(normalize(&z), G::Integers);
        let t = G::Solenoid(HeightType::new(DefaultHeight::Zero));
        assert_eq!(normalize(&t), G::Circle);
    }

    #[test]
    fn singletons_vanish() {
        assert_eq!(normalize(&G::Product(vec![G::Trivial, G::Reals])), G::Reals);
        assert_eq!(normalize(&G::LocalProduct(vec![])), G::Trivial);
        assert_eq!(
            normalize(&G::LocalProduct(vec![(3, G::Prufer(3)), (2, G::PadicIntegers(2))])),
            G::Product(vec![G::PadicIntegers(2), G::Prufer(3)])
        );
    }

    #[test]
    fn idempotent_on_samples() {
        for text in ["R x Z(12) x T x R", "LP[2:Qp(2), 5:Z(25)] x Q", "Sol{3:2} x BohrZ"] {
            let g = normalize(&crate::grammar::parse(text).unwrap());
            assert_eq!(normalize(&g), g, "{text}");
        }
    }
}
