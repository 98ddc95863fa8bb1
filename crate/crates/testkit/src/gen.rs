//! Seeded random data generators for property tests.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use nilscope_core::scalar::Rat;

/// A random rational with numerator in `-max_num..=max_num` and denominator
/// in `1..=max_den`.
pub fn random_rat(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rat {
    Rat::from_pair(rng.gen_range(-max_num..=max_num), rng.gen_range(1..=max_den))
        .expect("positive denominator")
}

/// A random rational matrix where each entry is nonzero with probability
/// `density_percent`/100.
pub fn random_rat_matrix(
    rng: &mut ChaCha8Rng,
    rows: usize,
    cols: usize,
    density_percent: u32,
    max_num: i64,
) -> Vec<Vec<Rat>> {
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    if rng.gen_range(0..100) < density_percent {
                        random_rat(rng, max_num, 6)
                    } else {
                        Rat::zero()
                    }
                })
                .collect()
        })
        .collect()
}
