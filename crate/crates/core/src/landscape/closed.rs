use num_complex::Complex64;

use super::{mixer_factors, phase_shift, ComplexValue};
use crate::error::{Error, Result};
use crate::space::{binomial_row, profile_counts, DistanceProfile, TargetSpace};

/// Amplitude factor of a target with the given distance profile:
/// `c_k = sum_d (#_d(k) (e^{-i gamma} - 1) + C(n, d)) f_n(beta, d)`.
pub fn c_k(beta: f64, gamma: f64, profile: &DistanceProfile, n: u32) -> Result<ComplexValue> {
    if profile.counts().len() != n as usize + 1 {
        return Err(Error::usage(format!(
            "profile of length {} used with dimension {n}",
            profile.counts().len()
        )));
    }
    let f = mixer_factors(beta, n);
    let binom = binomial_row(n);
    let shift = phase_shift(gamma);
    Ok(profile
        .counts()
        .iter()
        .zip(binom.iter())
        .zip(f.iter())
        .map(|((&count, &c), &fd)| (shift * count as f64 + c) * fd)
        .sum())
}

/// Exact landscape of one instance with its distance profiles cached.
///
/// Construction costs `O(|T|^2)`; each evaluation afterwards `O(|T| n)`.
#[derive(Clone, Debug)]
pub struct InstanceLandscape {
    n: u32,
    t_size: usize,
    space_size: f64,
    // row-major |T| x (n + 1)
    profiles: Vec<f64>,
    binom: Vec<f64>,
}

impl InstanceLandscape {
    pub fn new(target: &TargetSpace) -> Self {
        let profiles = target
            .states()
            .iter()
            .flat_map(|&k| profile_counts(target, k))
            .map(|c| c as f64)
            .collect();
        Self {
            n: target.n(),
            t_size: target.len(),
            space_size: target.space_size(),
            profiles,
            binom: binomial_row(target.n()),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn t_size(&self) -> usize {
        self.t_size
    }

    fn sum_ck_sq(&self, beta: f64, gamma: f64) -> f64 {
        let f = mixer_factors(beta, self.n);
        let shift = phase_shift(gamma);
        // c_k = sum_d C(n,d) f_d + shift * sum_d #_d(k) f_d
        let base: Complex64 = self.binom.iter().zip(&f).map(|(&c, &fd)| fd * c).sum();
        self.profiles
            .chunks_exact(self.n as usize + 1)
            .map(|counts| {
                let weighted: Complex64 = counts.iter().zip(&f).map(|(&x, &fd)| fd * x).sum();
                (base + shift * weighted).norm_sqr()
            })
            .sum()
    }

    /// `F1(beta, gamma) = 2^-n sum_k |c_k|^2`.
    pub fn f1(&self, beta: f64, gamma: f64) -> f64 {
        self.sum_ck_sq(beta, gamma) / self.space_size
    }

    /// Mean of `|c_k|^2` over the targets of this instance.
    pub fn mean_ck_sq(&self, beta: f64, gamma: f64) -> f64 {
        self.sum_ck_sq(beta, gamma) / self.t_size as f64
    }

    /// `|T| / 2^n`, the factor that turns the mean of `|c_k|^2` into `F1`.
    pub fn size_fraction(&self) -> f64 {
        self.t_size as f64 / self.space_size
    }
}

/// `F1(beta, gamma)` of a single instance.
pub fn f1_closed(target: &TargetSpace, beta: f64, gamma: f64) -> f64 {
    InstanceLandscape::new(target).f1(beta, gamma)
}
