use std::collections::BTreeMap;
use std::fmt;

/// p-height of a rank-one torsion-free group at a single prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Height {
    Finite(u32),
    Infinite,
}

/// Height of every prime not listed explicitly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DefaultHeight {
    Zero,
    Infinite,
}

impl DefaultHeight {
    pub fn as_height(self) -> Height {
        match self {
            DefaultHeight::Zero => Height::Finite(0),
            DefaultHeight::Infinite => Height::Infinite,
        }
    }
}

/// A height function on the primes, stored as finitely many exceptions over
/// a default. `QSub(τ)` is the subgroup of ℚ generated by all `1/p^k` with
/// `k ≤ τ(p)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HeightType {
    exceptions: BTreeMap<u64, Height>,
    default: DefaultHeight,
}

impl HeightType {
    pub fn new(default: DefaultHeight) -> Self {
        HeightType {
            exceptions: BTreeMap::new(),
            default,
        }
    }

    pub fn with(mut self, prime: u64, height: Height) -> Self {
        self.set(prime, height);
        self
    }

    /// Sets the height at `prime`, dropping the entry when it equals the default.
    pub fn set(&mut self, prime: u64, height: Height) {
        if height == self.default.as_height() {
            self.exceptions.remove(&prime);
        } else {
            self.exceptions.insert(prime, height);
        }
    }

    pub fn default_height(&self) -> DefaultHeight {
        self.default
    }

    pub fn height_at(&self, prime: u64) -> Height {
        self.exceptions
            .get(&prime)
            .copied()
            .unwrap_or_else(|| self.default.as_height())
    }

    pub fn exceptions(&self) -> impl Iterator<Item = (u64, Height)> + '_ {
        self.exceptions.iter().map(|(&p, &h)| (p, h))
    }

    pub fn is_all_zero(&self) -> bool {
        self.default == DefaultHeight::Zero && self.exceptions.is_empty()
    }

    pub fn is_all_infinite(&self) -> bool {
        self.default == DefaultHeight::Infinite && self.exceptions.is_empty()
    }

    /// Minimal representation: no exception equal to the default.
    pub fn minimized(&self) -> HeightType {
        let d = self.default.as_height();
        HeightType {
            exceptions: self
                .exceptions
                .iter()
                .filter(|(_, &h)| h != d)
                .map(|(&p, &h)| (p, h))
                .collect(),
            default: self.default,
        }
    }
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Height::Finite(k) => write!(f, "{k}"),
            Height::Infinite => f.write_str("inf"),
        }
    }
}

impl fmt::Display for DefaultHeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DefaultHeight::Zero => f.write_str("0"),
            DefaultHeight::Infinite => f.write_str("inf"),
        }
    }
}

impl fmt::Display for HeightType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exceptions.is_empty() {
            return write!(f, "default {}", self.default);
        }
        for (i, (p, h)) in self.exceptions.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}:{h}")?;
        }
        write!(f, "; default {}", self.default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_to_default_removes_entry() {
        let mut h = HeightType::new(DefaultHeight::Zero).with(2, Height::Infinite);
        h.set(2, Height::Finite(0));
        assert!(h.is_all_zero());
    }

    #[test]
    fn display_forms() {
        let h = HeightType::new(DefaultHeight::Zero).with(2, Height::Infinite);
        assert_eq!(h.to_string(), "2:inf; default 0");
        assert_eq!(
            HeightType::new(DefaultHeight::Infinite).to_string(),
            "default inf"
        );
    }
}
