//! Seeded random networks for property suites.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::network::{BooleanNetwork, LocalFunction};

/// The generator used by every randomized check, so a seed pins a run.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_function<R: Rng>(rng: &mut R, mut support: Vec<usize>) -> LocalFunction {
    support.sort_unstable();
    let rows: Vec<bool> = (0..1usize << support.len()).map(|_| rng.gen()).collect();
    LocalFunction::from_table(support, &rows).expect("arity within table limits")
}

/// A network whose interaction graph is acyclic: automata are placed in a
/// random order and each reads at most `max_in` automata earlier in it.
pub fn random_acyclic_network<R: Rng>(rng: &mut R, n: usize, max_in: usize) -> BooleanNetwork {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut locals: Vec<Option<LocalFunction>> = (0..n).map(|_| None).collect();
    for (pos, &i) in order.iter().enumerate() {
        let k = rng.gen_range(0..=max_in.min(pos));
        let support = order[..pos].choose_multiple(rng, k).copied().collect();
        locals[i] = Some(random_function(rng, support));
    }
    BooleanNetwork::new(
        locals
            .into_iter()
            .map(|f| f.expect("every automaton placed"))
            .collect(),
    )
    .expect("supports are in range")
}

/// A network in which each automaton reads up to `max_in` arbitrary automata,
/// itself included.
pub fn random_network<R: Rng>(rng: &mut R, n: usize, max_in: usize) -> BooleanNetwork {
    let all: Vec<usize> = (0..n).collect();
    let locals = (0..n)
        .map(|_| {
            let k = rng.gen_range(0..=max_in.min(n));
            let support = all.choose_multiple(rng, k).copied().collect();
            random_function(rng, support)
        })
        .collect();
    BooleanNetwork::new(locals).expect("supports are in range")
}
