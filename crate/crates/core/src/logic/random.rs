//! Seeded random formulas for property and stress tests.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::formula::Formula;

/// `count` formulas of depth at most `depth` over atoms `p1..p{atoms}`.
/// Constants appear only when `atoms == 0`. The output depends only on the
/// arguments.
pub fn random_formulas(seed: u64, count: usize, depth: usize, atoms: usize) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_formula(&mut rng, depth, atoms)).collect()
}

pub fn random_formula<R: Rng>(rng: &mut R, depth: usize, atoms: usize) -> Formula {
    let leaf = |rng: &mut R| {
        if atoms == 0 {
            if rng.gen_bool(0.5) {
                Formula::Top
            } else {
                Formula::Bot
            }
        } else {
            Formula::Atom(rng.gen_range(0..atoms))
        }
    };
    if depth == 0 || rng.gen_range(0..4) == 0 {
        return leaf(rng);
    }
    match rng.gen_range(0..4) {
        0 => Formula::not(random_formula(rng, depth - 1, atoms)),
        k => {
            let a = random_formula(rng, depth - 1, atoms);
            let b = random_formula(rng, depth - 1, atoms);
            match k {
                1 => Formula::and(a, b),
                2 => Formula::or(a, b),
                _ => Formula::imp(a, b),
            }
        }
    }
}
