//! Hamming-distance statistics of target spaces and their ensemble averages.
//!
//! For one instance the relevant quantities are the profile and the
//! profile-product averaged over every target `k`:
//!
//! ```text
//! mean_profile[d]      = 1/|T| sum_k #_d(k)
//! mean_pair[d1][d2]    = 1/|T| sum_k #_d1(k) #_d2(k)
//! ```
//!
//! An ensemble summary averages those across instances (population
//! normalisation throughout) and adds the mean and variance of `|T|`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::UniformMode;
use crate::error::{Error, Result};
use crate::problems::Ensemble;
use crate::space::{profile_counts, TargetSpace};

/// Distance statistics of a single target space.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceStats {
    pub n: u32,
    pub t_size: usize,
    pub mean_profile: Vec<f64>,
    pub mean_pair: Vec<Vec<f64>>,
}

/// Ensemble-level inputs of the landscape approximation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructuralSummary {
    pub n: u32,
    pub count: usize,
    pub e_tsize: f64,
    pub var_tsize: f64,
    pub e_profile: Vec<f64>,
    pub e_pair: Vec<Vec<f64>>,
    /// Set when the summary comes from the uniform-sampling model rather than
    /// from sampled instances.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<UniformMode>,
}

/// Exact statistics of `target`; `O(|T|^2 + |T| n^2)`.
pub fn instance_stats(target: &TargetSpace) -> InstanceStats {
    let dim = target.n() as usize + 1;
    let mut profile_sum = vec![0u128; dim];
    let mut pair_sum = vec![vec![0u128; dim]; dim];
    for &k in target.states() {
        let counts = profile_counts(target, k);
        for (d1, &c1) in counts.iter().enumerate() {
            if c1 == 0 {
                continue;
            }
            profile_sum[d1] += c1 as u128;
            for (d2, &c2) in counts.iter().enumerate() {
                pair_sum[d1][d2] += c1 as u128 * c2 as u128;
            }
        }
    }
    let size = target.len() as f64;
    InstanceStats {
        n: target.n(),
        t_size: target.len(),
        mean_profile: profile_sum.iter().map(|&s| s as f64 / size).collect(),
        mean_pair: pair_sum
            .iter()
            .map(|row| row.iter().map(|&s| s as f64 / size).collect())
            .collect(),
    }
}

/// Averages per-instance statistics; `var_tsize` uses divisor `count`.
pub fn aggregate(stats: &[InstanceStats]) -> Result<StructuralSummary> {
    let first = stats
        .first()
        .ok_or_else(|| Error::usage("cannot aggregate an empty list of instances"))?;
    let n = first.n;
    if let Some(bad) = stats.iter().find(|s| s.n != n) {
        return Err(Error::usage(format!(
            "mixed dimensions in aggregation: {n} and {}",
            bad.n
        )));
    }
    let dim = n as usize + 1;
    let count = stats.len() as f64;
    let e_tsize = stats.iter().map(|s| s.t_size as f64).sum::<f64>() / count;
    let var_tsize = stats
        .iter()
        .map(|s| (s.t_size as f64 - e_tsize).powi(2))
        .sum::<f64>()
        / count;
    let mut e_profile = vec![0.0; dim];
    let mut e_pair = vec![vec![0.0; dim]; dim];
    for s in stats {
        for d1 in 0..dim {
            e_profile[d1] += s.mean_profile[d1];
            for d2 in 0..dim {
                e_pair[d1][d2] += s.mean_pair[d1][d2];
            }
        }
    }
    e_profile.iter_mut().for_each(|v| *v /= count);
    e_pair.iter_mut().flatten().for_each(|v| *v /= count);
    Ok(StructuralSummary {
        n,
        count: stats.len(),
        e_tsize,
        var_tsize,
        e_profile,
        e_pair,
        mode: None,
    })
}

/// Per-instance statistics of a whole ensemble, in instance order.
pub fn ensemble_stats(ensemble: &Ensemble) -> Vec<InstanceStats> {
    ensemble
        .instances
        .par_iter()
        .map(|i| instance_stats(&i.target))
        .collect()
}

/// Empirical summary of an ensemble.
pub fn summarize(ensemble: &Ensemble) -> Result<StructuralSummary> {
    aggregate(&ensemble_stats(ensemble))
}

impl StructuralSummary {
    /// Rejects summaries that cannot drive the approximation.
    pub fn validate(&self) -> Result<()> {
        let dim = self.n as usize + 1;
        if self.n == 0 || self.n > crate::space::MAX_QUBITS {
            return Err(Error::usage(format!(
                "summary dimension {} unsupported",
                self.n
            )));
        }
        if self.e_profile.len() != dim
            || self.e_pair.len() != dim
            || self.e_pair.iter().any(|r| r.len() != dim)
        {
            return Err(Error::usage(format!(
                "summary arrays do not match dimension {}",
                self.n
            )));
        }
        let all_finite = self.e_tsize.is_finite()
            && self.var_tsize.is_finite()
            && self
                .e_profile
                .iter()
                .chain(self.e_pair.iter().flatten())
                .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::usage("summary contains non-finite values"));
        }
        if self.e_tsize < 1.0 {
            return Err(Error::usage(format!(
                "summary expects |T| = {}, need at least one target",
                self.e_tsize
            )));
        }
        if self.var_tsize < 0.0 {
            return Err(Error::usage("negative |T| variance"));
        }
        if (self.e_profile[0] - 1.0).abs() > 1e-9 {
            return Err(Error::usage(format!(
                "e_profile[0] = {}, expected 1 (every target is at distance 0 from itself)",
                self.e_profile[0]
            )));
        }
        Ok(())
    }
}
