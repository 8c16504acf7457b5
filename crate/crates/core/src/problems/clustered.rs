use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{check_width, TargetSpace};

/// What to do when a random walk lands on a state that is already a target.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dedupe {
    /// Walk again from the same seed until a new state is found; `|T|` is exact.
    #[default]
    Retry,
    /// Discard the walk; `|T|` may fall short of `num_seeds * (per_seed + 1)`.
    Drop,
}

/// Upper bound on walks per requested state before giving up.
const MAX_WALKS_PER_STATE: usize = 1_000_000;

/// Walks from `start`, flipping one uniformly chosen bit per step and
/// continuing with probability 1/2 after each step. Returns the end state and
/// the number of flips, which is geometric with mean 1.
pub fn random_walk<R: Rng + ?Sized>(start: u32, n: u32, rng: &mut R) -> (u32, u32) {
    let mut state = start;
    let mut flips = 0;
    while rng.random_bool(0.5) {
        state ^= 1 << rng.random_range(0..n);
        flips += 1;
    }
    (state, flips)
}

/// Samples `num_seeds` uniform cluster seeds and grows `per_seed` new states
/// around each by random walks. All states are globally distinct.
pub fn sample_clustered<R: Rng + ?Sized>(
    n: u32,
    num_seeds: usize,
    per_seed: usize,
    dedupe: Dedupe,
    rng: &mut R,
) -> Result<(TargetSpace, Vec<u32>)> {
    check_width(n)?;
    let wanted = num_seeds
        .checked_mul(per_seed + 1)
        .ok_or_else(|| Error::usage("cluster size overflow"))?;
    if num_seeds == 0 || wanted as u64 > 1u64 << n {
        return Err(Error::usage(format!(
            "{num_seeds} seeds x {} states do not fit into 2^{n} states",
            per_seed + 1
        )));
    }
    let seeds: Vec<u32> = rand::seq::index::sample(rng, (1u64 << n) as usize, num_seeds)
        .into_iter()
        .map(|i| i as u32)
        .collect();
    let mut states: BTreeSet<u32> = seeds.iter().copied().collect();
    for &seed in &seeds {
        for _ in 0..per_seed {
            let mut walks = 0;
            loop {
                let (end, _) = random_walk(seed, n, rng);
                if states.insert(end) {
                    break;
                }
                if dedupe == Dedupe::Drop {
                    break;
                }
                walks += 1;
                if walks >= MAX_WALKS_PER_STATE {
                    return Err(Error::computation(format!(
                        "no new state reachable from seed {seed} after {walks} walks"
                    )));
                }
            }
        }
    }
    let target = TargetSpace::new(n, states.into_iter().collect())?;
    Ok((target, seeds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::rng::stream;

    #[test]
    fn paper_sized_clusters() {
        let (t, seeds) = sample_clustered(8, 3, 30, Dedupe::Retry, &mut stream(3, 0)).unwrap();
        assert_eq!(t.len(), 93);
        assert_eq!(seeds.len(), 3);
        assert!(seeds.iter().all(|&s| t.contains(s)));
    }

    #[test]
    fn singleton_cluster() {
        let (t, _) = sample_clustered(8, 1, 0, Dedupe::Retry, &mut stream(3, 1)).unwrap();
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn capacity_is_checked() {
        assert!(sample_clustered(3, 2, 4, Dedupe::Retry, &mut stream(0, 0)).is_err());
        // exactly full is allowed
        let (t, _) = sample_clustered(3, 2, 3, Dedupe::Retry, &mut stream(0, 0)).unwrap();
        assert_eq!(t.len(), 8);
    }

    #[test]
    fn drop_mode_never_exceeds_request() {
        let (t, _) = sample_clustered(8, 3, 30, Dedupe::Drop, &mut stream(3, 0)).unwrap();
        assert!(t.len() <= 93 && t.len() >= 3);
    }

    #[test]
    fn walk_length_is_geometric_with_mean_one() {
        let mut rng = stream(99, 0);
        let walks = 100_000;
        let total: u64 = (0..walks)
            .map(|_| random_walk(0, 8, &mut rng).1 as u64)
            .sum();
        let mean = total as f64 / walks as f64;
        // variance of the flip count is 2, so the standard error is sqrt(2 / walks)
        let se = (2.0 / walks as f64).sqrt();
        assert!((mean - 1.0).abs() < 4.0 * se, "mean walk length {mean}");
    }

    #[test]
    fn walk_parity_matches_flip_count() {
        let mut rng = stream(5, 5);
        for _ in 0..1000 {
            let (end, flips) = random_walk(0b1010, 6, &mut rng);
            assert_eq!((end ^ 0b1010).count_ones() % 2, flips % 2);
        }
    }
}
