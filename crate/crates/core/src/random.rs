//! Expression corpora: an exhaustive one over a fixed atom list and seeded
//! random ASTs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grammar::{normalize, DefaultHeight, GroupExpr, Height, HeightType};

pub const DEFAULT_SEED: u64 = 0x5eed_c4ab;

const SMALL_PRIMES: [u64; 5] = [2, 3, 5, 7, 11];

/// R, T, Z, Q, Z(2), Z(3), Z(4), Prufer(2), Zp(2), Qp(2), Sol{default inf},
/// BohrZ, BohrR.
pub fn corpus_atoms() -> Vec<GroupExpr> {
    use GroupExpr::*;
    vec![
        Reals,
        Circle,
        Integers,
        Rationals,
        Cyclic(2),
        Cyclic(3),
        Cyclic(4),
        Prufer(2),
        PadicIntegers(2),
        PadicNumbers(2),
        Solenoid(HeightType::new(DefaultHeight::Infinite)),
        BohrIntegers,
        BohrReals,
    ]
}

/// Every product of 1 to `max_factors` atoms (with repetition), normalized
/// and deduplicated.
pub fn exhaustive_corpus(max_factors: usize) -> Vec<GroupExpr> {
    let atoms = corpus_atoms();
    let mut out = Vec::new();
    // multisets as nondecreasing index sequences
    let mut stack: Vec<Vec<usize>> = (0..atoms.len()).map(|i| vec![i]).collect();
    while let Some(ix) = stack.pop() {
        out.push(normalize(&GroupExpr::Product(ix.iter().map(|&i| atoms[i].clone()).collect())));
        if ix.len() < max_factors {
            let last = *ix.last().expect("nonempty");
            for j in last..atoms.len() {
                let mut next = ix.clone();
                next.push(j);
                stack.push(next);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn random_height(rng: &mut ChaCha8Rng) -> HeightType {
    let default = if rng.gen_bool(0.5) {
        DefaultHeight::Zero
    } else {
        DefaultHeight::Infinite
    };
    let mut h = HeightType::new(default);
    for _ in 0..rng.gen_range(0..3) {
        let p = *SMALL_PRIMES.choose(rng).expect("primes");
        let v = if rng.gen_bool(0.3) {
            Height::Infinite
        } else {
            Height::Finite(rng.gen_range(0..4))
        };
        h.set(p, v);
    }
    h
}

fn random_local_component(rng: &mut ChaCha8Rng, p: u64) -> GroupExpr {
    match rng.gen_range(0..4) {
        0 => GroupExpr::Cyclic(p.pow(rng.gen_range(1..4))),
        1 => GroupExpr::Prufer(p),
        2 => GroupExpr::PadicIntegers(p),
        _ => GroupExpr::PadicNumbers(p),
    }
}

fn random_atom(rng: &mut ChaCha8Rng) -> GroupExpr {
    use GroupExpr::*;
    let p = *SMALL_PRIMES.choose(rng).expect("primes");
    match rng.gen_range(0..15) {
        0 => Reals,
        1 => Circle,
        2 => Integers,
        3 => Rationals,
        4 => Cyclic(rng.gen_range(2..61)),
        5 => Prufer(p),
        6 => PadicIntegers(p),
        7 => PadicNumbers(p),
        8 => RationalSubgroup(random_height(rng)),
        9 => Solenoid(random_height(rng)),
        10 => BohrIntegers,
        11 => BohrReals,
        12 => {
            let mut primes = SMALL_PRIMES.to_vec();
            primes.shuffle(rng);
            let k = rng.gen_range(1..4);
            let mut entries: Vec<(u64, GroupExpr)> = primes[..k]
                .iter()
                .map(|&q| (q, random_local_component(rng, q)))
                .collect();
            entries.sort_by_key(|e| e.0);
            LocalProduct(entries)
        }
        13 => Cyclic(p),
        _ => Reals,
    }
}

/// A random expression, possibly with nested products.
pub fn random_expr(rng: &mut ChaCha8Rng, depth: u32) -> GroupExpr {
    if depth == 0 || rng.gen_bool(0.4) {
        return random_atom(rng);
    }
    let k = rng.gen_range(1..4);
    GroupExpr::Product((0..k).map(|_| random_expr(rng, depth - 1)).collect())
}

/// `count` random expressions from `seed`.
pub fn random_corpus(seed: u64, count: usize) -> Vec<GroupExpr> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_expr(&mut rng, 2)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_size() {
        // 13 + C(14, 2) + C(15, 3) multisets, all distinct after normalizing
        assert_eq!(exhaustive_corpus(3).len(), 13 + 91 + 455);
        assert_eq!(exhaustive_corpus(1).len(), 13);
    }

    #[test]
    fn seeded() {
        assert_eq!(random_corpus(7, 50), random_corpus(7, 50));
        assert_ne!(random_corpus(7, 50), random_corpus(8, 50));
    }
}
