//! Bitstrings, target spaces and Hamming-distance profiles.
//!
//! Bit `i` of a state's integer value is qubit `i`, so the integer value is
//! also the computational-basis index.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported state-space dimension.
pub const MAX_QUBITS: u32 = 32;

/// A bitstring of fixed width.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    value: u64,
    width: u32,
}

impl BitString {
    pub fn new(value: u64, width: u32) -> Result<Self> {
        check_width(width)?;
        if value >= 1u64 << width {
            return Err(Error::usage(format!(
                "value {value} does not fit into {width} bits"
            )));
        }
        Ok(Self { value, width })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn width(&self) -> u32 {
        self.width
    }
}

pub(crate) fn check_width(n: u32) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::usage(format!(
            "dimension {n} outside 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

/// Number of positions in which `a` and `b` differ.
pub fn hamming_distance(a: BitString, b: BitString) -> Result<u32> {
    if a.width != b.width {
        return Err(Error::usage(format!(
            "width mismatch: {} vs {}",
            a.width, b.width
        )));
    }
    Ok((a.value ^ b.value).count_ones())
}

/// Exact binomial coefficient `C(n, d)`; zero when `d > n`.
pub fn binomial(n: u32, d: u32) -> Result<u64> {
    if n > 64 {
        return Err(Error::computation(format!(
            "binomial({n}, {d}) exceeds the supported range n <= 64"
        )));
    }
    if d > n {
        return Ok(0);
    }
    let d = d.min(n - d) as u128;
    let mut c: u128 = 1;
    for i in 0..d {
        c = c * (n as u128 - i) / (i + 1);
    }
    u64::try_from(c).map_err(|_| Error::computation(format!("binomial({n}, {d}) overflows u64")))
}

/// The row `C(n, 0..=n)` as doubles. Exact for `n <= 32`.
pub fn binomial_row(n: u32) -> Vec<f64> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c: u64 = 1;
    for d in 0..=n as u64 {
        row.push(c as f64);
        // C(n, d+1) = C(n, d) * (n - d) / (d + 1), exact in u64 for n <= 32
        c = c * (n as u64 - d) / (d + 1);
    }
    row
}

/// The set of solution states of one instance.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TargetSpace {
    n: u32,
    states: Vec<u32>,
}

impl TargetSpace {
    /// Builds a target space from strictly ascending states.
    pub fn new(n: u32, states: Vec<u32>) -> Result<Self> {
        check_width(n)?;
        if states.is_empty() {
            return Err(Error::usage("target space must not be empty"));
        }
        let bound = 1u64 << n;
        for w in states.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::usage(format!(
                    "target states must be strictly ascending ({} then {})",
                    w[0], w[1]
                )));
            }
        }
        if let Some(&last) = states.last() {
            if last as u64 >= bound {
                return Err(Error::usage(format!(
                    "state {last} does not fit into {n} bits"
                )));
            }
        }
        Ok(Self { n, states })
    }

    /// Sorts and deduplicates before validating.
    pub fn from_unsorted(n: u32, mut states: Vec<u32>) -> Result<Self> {
        states.sort_unstable();
        states.dedup();
        Self::new(n, states)
    }

    /// All `2^n` states.
    pub fn full(n: u32) -> Result<Self> {
        check_width(n)?;
        if n > 24 {
            return Err(Error::usage(format!(
                "full space of dimension {n} is too large"
            )));
        }
        Ok(Self {
            n,
            states: (0..1u32 << n).collect(),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn states(&self) -> &[u32] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    /// Always false for a constructed space; provided for API completeness.
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn contains(&self, state: u32) -> bool {
        self.states.binary_search(&state).is_ok()
    }

    /// `2^n` as a double.
    pub fn space_size(&self) -> f64 {
        (1u64 << self.n) as f64
    }

    pub fn bitstrings(&self) -> impl Iterator<Item = BitString> + '_ {
        self.states.iter().map(move |&s| BitString {
            value: s as u64,
            width: self.n,
        })
    }
}

/// Counts of targets at each Hamming distance `0..=n` from a reference state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceProfile {
    counts: Vec<u64>,
}

impl DistanceProfile {
    pub fn from_counts(counts: Vec<u64>) -> Result<Self> {
        if counts.len() < 2 || counts.len() > MAX_QUBITS as usize + 1 {
            return Err(Error::usage(format!(
                "profile length {} does not correspond to a dimension in 1..={MAX_QUBITS}",
                counts.len()
            )));
        }
        Ok(Self { counts })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn n(&self) -> u32 {
        self.counts.len() as u32 - 1
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Distance profile of `k` with respect to `target`.
///
/// `k` need not be a member of `target`; in that case `counts[0] == 0`.
pub fn distance_profile(target: &TargetSpace, k: BitString) -> Result<DistanceProfile> {
    if k.width != target.n {
        return Err(Error::usage(format!(
            "reference width {} does not match target dimension {}",
            k.width, target.n
        )));
    }
    Ok(DistanceProfile {
        counts: profile_counts(target, k.value as u32),
    })
}

pub(crate) fn profile_counts(target: &TargetSpace, k: u32) -> Vec<u64> {
    let mut counts = vec![0u64; target.n as usize + 1];
    for &z in &target.states {
        counts[(z ^ k).count_ones() as usize] += 1;
    }
    counts
}

/// A pair of QAOA angles in radians.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Angles {
    pub beta: f64,
    pub gamma: f64,
}

impl Angles {
    pub fn new(beta: f64, gamma: f64) -> Self {
        Self { beta, gamma }
    }

    /// Reduces into `beta in [0, pi)`, `gamma in [0, 2pi)`.
    ///
    /// Depth-1 landscapes of two-level Hamiltonians are `pi`-periodic in beta
    /// and `2pi`-periodic in gamma, so the reduction preserves their value.
    pub fn canonical(self) -> Self {
        let mut beta = self.beta.rem_euclid(PI);
        let mut gamma = self.gamma.rem_euclid(2.0 * PI);
        // rem_euclid may round up to the modulus itself
        if beta >= PI {
            beta = 0.0;
        }
        if gamma >= 2.0 * PI {
            gamma = 0.0;
        }
        Self { beta, gamma }
    }
}

/// A rectangular lattice of angle pairs, inclusive of both ends.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AngleGrid {
    pub beta_min: f64,
    pub beta_max: f64,
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub beta_steps: usize,
    pub gamma_steps: usize,
}

impl AngleGrid {
    pub fn new(
        beta: (f64, f64),
        gamma: (f64, f64),
        beta_steps: usize,
        gamma_steps: usize,
    ) -> Result<Self> {
        let grid = Self {
            beta_min: beta.0,
            beta_max: beta.1,
            gamma_min: gamma.0,
            gamma_max: gamma.1,
            beta_steps,
            gamma_steps,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// `beta in [0, pi]`, `gamma in [0, 2pi]`, both ends included.
    pub fn landscape(beta_steps: usize, gamma_steps: usize) -> Result<Self> {
        Self::new((0.0, PI), (0.0, 2.0 * PI), beta_steps, gamma_steps)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.beta_min, self.beta_max, self.gamma_min, self.gamma_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::usage("grid bounds must be finite"));
        }
        if self.beta_max < self.beta_min || self.gamma_max < self.gamma_min {
            return Err(Error::usage("grid maximum below minimum"));
        }
        if self.beta_steps == 0 || self.gamma_steps == 0 {
            return Err(Error::usage("grid needs at least one step per axis"));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.beta_steps * self.gamma_steps
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn beta_at(&self, i: usize) -> f64 {
        lattice(self.beta_min, self.beta_max, self.beta_steps, i)
    }

    pub fn gamma_at(&self, j: usize) -> f64 {
        lattice(self.gamma_min, self.gamma_max, self.gamma_steps, j)
    }

    /// Angles at row-major index `idx` (beta outer, gamma inner).
    pub fn point(&self, idx: usize) -> Angles {
        Angles::new(
            self.beta_at(idx / self.gamma_steps),
            self.gamma_at(idx % self.gamma_steps),
        )
    }

    pub fn betas(&self) -> Vec<f64> {
        (0..self.beta_steps).map(|i| self.beta_at(i)).collect()
    }
}

fn lattice(min: f64, max: f64, steps: usize, i: usize) -> f64 {
    if steps == 1 {
        min
    } else if i + 1 == steps {
        max
    } else {
        min + (max - min) * i as f64 / (steps - 1) as f64
    }
}
