use num_complex::Complex64;

use super::{mixer_factors, phase_shift, ComplexValue};
use crate::error::{Error, Result};
use crate::space::binomial_row;
use crate::structure::StructuralSummary;

/// Largest tolerated imaginary part of the weighted double sum, relative to
/// `1 + |real part|`. Anything above signals a broken summary or formula.
pub const IMAG_RESIDUE_TOL: f64 = 1e-9;

/// Structural approximation of the expected landscape of a problem.
///
/// ```text
/// E~(F1) = E(|T|) / 2^n * sum_{d1,d2} w_{d1,d2}(gamma) f_n(beta,d1) f_n(beta,d2)*
/// ```
#[derive(Clone, Debug)]
pub struct ApproxLandscape {
    n: u32,
    size_fraction: f64,
    e_profile: Vec<f64>,
    e_pair: Vec<Vec<f64>>,
    binom: Vec<f64>,
}

impl ApproxLandscape {
    pub fn new(summary: &StructuralSummary) -> Result<Self> {
        summary.validate()?;
        Ok(Self {
            n: summary.n,
            size_fraction: summary.e_tsize / (1u64 << summary.n) as f64,
            e_profile: summary.e_profile.clone(),
            e_pair: summary.e_pair.clone(),
            binom: binomial_row(summary.n),
        })
    }

    /// The weight matrix `w_{d1,d2}(gamma)`.
    pub fn weights(&self, gamma: f64) -> Vec<Vec<ComplexValue>> {
        let shift = phase_shift(gamma); // e^{-i gamma} - 1
        let shift_conj = shift.conj(); // e^{i gamma} - 1
        let both = (shift * shift_conj).re; // 2 - 2 cos(gamma)
        let dim = self.n as usize + 1;
        (0..dim)
            .map(|d1| {
                (0..dim)
                    .map(|d2| {
                        Complex64::new(self.e_pair[d1][d2] * both, 0.0)
                            + shift * (self.e_profile[d1] * self.binom[d2])
                            + shift_conj * (self.e_profile[d2] * self.binom[d1])
                            + self.binom[d1] * self.binom[d2]
                    })
                    .collect()
            })
            .collect()
    }

    /// Expected mean of `|c_k|^2` over the targets of a random instance.
    pub fn mean_ck_sq(&self, beta: f64, gamma: f64) -> Result<f64> {
        let f = mixer_factors(beta, self.n);
        let w = self.weights(gamma);
        let mut total = Complex64::new(0.0, 0.0);
        for (d1, row) in w.iter().enumerate() {
            let mut inner = Complex64::new(0.0, 0.0);
            for (d2, &wd) in row.iter().enumerate() {
                inner += wd * f[d2].conj();
            }
            total += inner * f[d1];
        }
        if total.im.abs() > IMAG_RESIDUE_TOL * (1.0 + total.re.abs()) {
            return Err(Error::computation(format!(
                "imaginary residue {:e} exceeds tolerance (real part {})",
                total.im, total.re
            )));
        }
        Ok(total.re)
    }

    /// `E~(F1(beta, gamma))`.
    pub fn expected_f1(&self, beta: f64, gamma: f64) -> Result<f64> {
        Ok(self.size_fraction * self.mean_ck_sq(beta, gamma)?)
    }
}

/// `w_{d1,d2}(gamma)` for a summary.
pub fn w_matrix(gamma: f64, summary: &StructuralSummary) -> Result<Vec<Vec<ComplexValue>>> {
    Ok(ApproxLandscape::new(summary)?.weights(gamma))
}

/// One-shot evaluation of the approximate expected landscape.
pub fn approx_expected_f1(summary: &StructuralSummary, beta: f64, gamma: f64) -> Result<f64> {
    ApproxLandscape::new(summary)?.expected_f1(beta, gamma)
}

fn population_variance(values: &[f64]) -> f64 {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / values.len() as f64
}

/// `sqrt(Var(S) Var(M))` with population variances, where `S_i = |T_i| / 2^n`
/// and `M_i` is the per-instance mean of `|c_k|^2`.
///
/// By Cauchy-Schwarz this bounds `|mean(S M) - mean(S) mean(M)|`, the gap
/// between the sampled mean landscape and its structural approximation.
pub fn error_bound(s_values: &[f64], m_values: &[f64]) -> Result<f64> {
    if s_values.is_empty() || s_values.len() != m_values.len() {
        return Err(Error::usage(format!(
            "error bound needs equal non-empty samples, got {} and {}",
            s_values.len(),
            m_values.len()
        )));
    }
    Ok((population_variance(s_values) * population_variance(m_values)).sqrt())
}
