//! Symbolic language of locally compact abelian groups.
//!
//! Expressions are built from a fixed set of atoms (ℝ, 𝕋, ℤ, ℚ, finite
//! cyclic groups, p-adic and Prüfer groups, rank-one subgroups of ℚ and
//! their dual solenoids, and the two Bohr compactifications), finite
//! products and local products. [`normalize`] computes a canonical form in
//! which two expressions denote isomorphic groups exactly when they are equal.

mod height;
mod normalize;
mod parse;

use std::fmt;

pub use height::{DefaultHeight, Height, HeightType};
pub use normalize::normalize;
pub use parse::{parse, ParseError, MAX_EXPONENT, MAX_PARAMETER};

/// A symbolically described locally compact abelian group.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupExpr {
    /// The singleton group.
    Trivial,
    Reals,
    Circle,
    Integers,
    Rationals,
    /// ℤ(n), n ≥ 2.
    Cyclic(u64),
    /// The discrete Prüfer group ℤ(p^∞).
    Prufer(u64),
    PadicIntegers(u64),
    PadicNumbers(u64),
    /// Discrete subgroup of ℚ containing ℤ with the given p-heights.
    RationalSubgroup(HeightType),
    /// Compact connected dual of `RationalSubgroup` with the same heights.
    Solenoid(HeightType),
    BohrIntegers,
    BohrReals,
    /// Opaque identity component of the Bohr compactification of ℤ.
    BohrIntegersIdentity,
    /// The profinite completion ∏ ℤ_p over all primes.
    ProfiniteIntegers,
    Product(Vec<GroupExpr>),
    /// Restricted product over distinct primes; components are p-primary.
    LocalProduct(Vec<(u64, GroupExpr)>),
}

impl GroupExpr {
    pub fn product(factors: impl IntoIterator<Item = GroupExpr>) -> GroupExpr {
        GroupExpr::Product(factors.into_iter().collect())
    }

    pub fn pow(atom: GroupExpr, n: usize) -> GroupExpr {
        GroupExpr::Product(vec![atom; n])
    }

    /// Factors of a product, a single-element slice otherwise, empty for the trivial group.
    pub fn factors(&self) -> &[GroupExpr] {
        match self {
            GroupExpr::Product(fs) => fs,
            GroupExpr::Trivial => &[],
            other => std::slice::from_ref(other),
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            GroupExpr::Trivial => true,
            GroupExpr::Product(fs) => fs.iter().all(GroupExpr::is_trivial),
            GroupExpr::LocalProduct(es) => es.iter().all(|(_, c)| c.is_trivial()),
            GroupExpr::Cyclic(n) => *n == 1,
            _ => false,
        }
    }

    pub fn is_atom(&self) -> bool {
        !matches!(self, GroupExpr::Product(_) | GroupExpr::LocalProduct(_))
    }

    /// The prime of a p-primary atom that may appear as a local-product component.
    pub fn primary_prime(&self) -> Option<u64> {
        match self {
            GroupExpr::Cyclic(n) => prime_power_base(*n).map(|(p, _)| p),
            GroupExpr::Prufer(p) | GroupExpr::PadicIntegers(p) | GroupExpr::PadicNumbers(p) => {
                Some(*p)
            }
            _ => None,
        }
    }

    /// Whether the expression mentions either Bohr compactification.
    pub fn contains_bohr(&self) -> bool {
        match self {
            GroupExpr::BohrIntegers | GroupExpr::BohrReals | GroupExpr::BohrIntegersIdentity => true,
            GroupExpr::Product(fs) => fs.iter().any(GroupExpr::contains_bohr),
            GroupExpr::LocalProduct(es) => es.iter().any(|(_, c)| c.contains_bohr()),
            _ => false,
        }
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupExpr::Trivial => f.write_str("0"),
            GroupExpr::Reals => f.write_str("R"),
            GroupExpr::Circle => f.write_str("T"),
            GroupExpr::Integers => f.write_str("Z"),
            GroupExpr::Rationals => f.write_str("Q"),
            GroupExpr::Cyclic(n) => write!(f, "Z({n})"),
            GroupExpr::Prufer(p) => write!(f, "Prufer({p})"),
            GroupExpr::PadicIntegers(p) => write!(f, "Zp({p})"),
            GroupExpr::PadicNumbers(p) => write!(f, "Qp({p})"),
            GroupExpr::RationalSubgroup(h) => write!(f, "QSub{{{h}}}"),
            GroupExpr::Solenoid(h) => write!(f, "Sol{{{h}}}"),
            GroupExpr::BohrIntegers => f.write_str("BohrZ"),
            GroupExpr::BohrReals => f.write_str("BohrR"),
            GroupExpr::BohrIntegersIdentity => f.write_str("BohrZ0"),
            GroupExpr::ProfiniteIntegers => f.write_str("Zhat"),
            GroupExpr::Product(fs) => {
                let mut flat = Vec::new();
                flatten_for_display(fs, &mut flat);
                if flat.is_empty() {
                    return f.write_str("0");
                }
                let mut i = 0;
                let mut first = true;
                while i < flat.len() {
                    let mut run = 1;
                    // runs longer than the parser's exponent cap are split
                    while i + run < flat.len() && flat[i + run] == flat[i] && (run as u64) < parse::MAX_EXPONENT {
                        run += 1;
                    }
                    if !first {
                        f.write_str(" x ")?;
                    }
                    first = false;
                    if run > 1 {
                        write!(f, "{}^{run}", flat[i])?;
                    } else {
                        write!(f, "{}", flat[i])?;
                    }
                    i += run;
                }
                Ok(())
            }
            GroupExpr::LocalProduct(es) => {
                f.write_str("LP[")?;
                for (i, (p, c)) in es.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{p}:{c}")?;
                }
                f.write_str("]")
            }
        }
    }
}

fn flatten_for_display<'a>(fs: &'a [GroupExpr], out: &mut Vec<&'a GroupExpr>) {
    for g in fs {
        match g {
            GroupExpr::Product(inner) => flatten_for_display(inner, out),
            other => out.push(other),
        }
    }
}

impl serde::Serialize for GroupExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Renders an expression in the surface grammar accepted by [`parse`].
pub fn render(g: &GroupExpr) -> String {
    g.to_string()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut k = 0;
            while n.is_multiple_of(d) {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `Some((p, k))` when `n = p^k` with `k ≥ 1`.
pub fn prime_power_base(n: u64) -> Option<(u64, u32)> {
    match factorize(n).as_slice() {
        [(p, k)] => Some((*p, *k)),
        _ => None,
    }
}

/// The n-th prime, 1-based.
pub fn nth_prime(n: usize) -> u64 {
    let mut count = 0;
    let mut candidate = 1u64;
    while count < n {
        candidate += 1;
        if is_prime(candidate) {
            count += 1;
        }
    }
    candidate
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_examples() {
        let g = GroupExpr::product([GroupExpr::Reals, GroupExpr::Cyclic(4)]);
        assert_eq!(render(&g), "R x Z(4)");
        assert_eq!(render(&GroupExpr::Rationals), "Q");
        assert_eq!(
            render(&GroupExpr::Solenoid(HeightType::new(DefaultHeight::Infinite))),
            "Sol{default inf}"
        );
    }

    #[test]
    fn render_compresses_runs() {
        let g = GroupExpr::product([GroupExpr::Reals, GroupExpr::Reals, GroupExpr::Circle]);
        assert_eq!(render(&g), "R^2 x T");
        let long = GroupExpr::pow(GroupExpr::Circle, 65);
        assert_eq!(render(&long), "T^64 x T");
        assert_eq!(normalize(&parse(&render(&long)).unwrap()), normalize(&long));
    }

    #[test]
    fn number_theory_helpers() {
        assert!(is_prime(2) && is_prime(97) && !is_prime(1) && !is_prime(91));
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(prime_power_base(49), Some((7, 2)));
        assert_eq!(prime_power_base(12), None);
        assert_eq!(nth_prime(1), 2);
        assert_eq!(nth_prime(5), 11);
    }
}
