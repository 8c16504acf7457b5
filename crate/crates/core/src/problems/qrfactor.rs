//! Target spaces of qr-factoring: both orderings of a prime pair.

use rand::Rng;

use crate::error::{Error, Result};
use crate::space::TargetSpace;

/// Primes strictly below `bound` (sieve of Eratosthenes).
pub fn primes_below(bound: u32) -> Vec<u32> {
    if bound < 3 {
        return Vec::new();
    }
    let mut composite = vec![false; bound as usize];
    let mut primes = Vec::new();
    for i in 2..bound as usize {
        if composite[i] {
            continue;
        }
        primes.push(i as u32);
        let mut j = i * i;
        while j < bound as usize {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// A sampled factoring instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QrPair {
    pub q: u32,
    pub r: u32,
}

impl QrPair {
    pub fn product(&self) -> u64 {
        self.q as u64 * self.r as u64
    }
}

/// Concatenates `q` and `r`, each zero-padded to `n / 2` bits, with `q` in the
/// high half.
pub fn encode_pair(q: u32, r: u32, n: u32) -> u32 {
    (q << (n / 2)) | r
}

/// `{pad(q) . pad(r), pad(r) . pad(q)}` for a validated pair.
pub fn qr_target(pair: QrPair, n: u32) -> Result<TargetSpace> {
    check_dimension(n)?;
    let half = 1u32 << (n / 2);
    if pair.q >= half || pair.r >= half {
        return Err(Error::usage(format!("factors must be below 2^{}", n / 2)));
    }
    if pair.q == pair.r {
        return Err(Error::usage("factors must differ so that |T| = 2"));
    }
    TargetSpace::from_unsorted(
        n,
        vec![
            encode_pair(pair.q, pair.r, n),
            encode_pair(pair.r, pair.q, n),
        ],
    )
}

fn check_dimension(n: u32) -> Result<()> {
    if n % 2 == 1 || !(6..=32).contains(&n) {
        return Err(Error::usage(format!(
            "qr-factoring needs an even n in 6..=32, got {n}"
        )));
    }
    Ok(())
}

/// Draws `q != r` uniformly from the primes below `2^(n/2)`.
pub fn sample_qr<R: Rng + ?Sized>(
    n: u32,
    pool: &[u32],
    rng: &mut R,
) -> Result<(TargetSpace, QrPair)> {
    check_dimension(n)?;
    if pool.len() < 2 {
        return Err(Error::usage("prime pool needs at least two primes"));
    }
    let (q, r) = loop {
        let q = pool[rng.random_range(0..pool.len())];
        let r = pool[rng.random_range(0..pool.len())];
        if q != r {
            break (q, r);
        }
    };
    let pair = QrPair { q, r };
    Ok((qr_target(pair, n)?, pair))
}

/// Prime pool for dimension `n`.
pub fn prime_pool(n: u32) -> Result<Vec<u32>> {
    check_dimension(n)?;
    Ok(primes_below(1u32 << (n / 2)))
}
