//! Depth-1 QAOA landscapes for two-level constraint Hamiltonians.
//!
//! The circuit is `e^{-i beta X} e^{-i gamma C} |+>^n` with `C` the projector
//! onto the target space. The mixer moves amplitude between two basis states
//! at Hamming distance `d` with the factor
//!
//! ```text
//! f_n(beta, d) = cos(beta)^(n-d) * (-i sin(beta))^d
//! ```
//!
//! so the amplitude on a target `k` only depends on its distance profile.

mod approx;
mod closed;
mod grid;
mod statevector;

pub use approx::{approx_expected_f1, error_bound, w_matrix, ApproxLandscape, IMAG_RESIDUE_TOL};
pub use closed::{c_k, f1_closed, InstanceLandscape};
pub use grid::{eval_grid, LandscapeGrid};
pub use statevector::{f1_statevector, qaoa_state, MAX_STATEVECTOR_QUBITS};

use num_complex::Complex64;

/// Complex amplitude.
pub type ComplexValue = Complex64;

/// `(-i)^d`, exact.
fn minus_i_pow(d: usize) -> Complex64 {
    match d % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// `f_n(beta, d)` for every `d` in `0..=n`.
///
/// Powers are built by repeated multiplication so that every caller sees the
/// same rounding.
pub(crate) fn mixer_factors(beta: f64, n: u32) -> Vec<Complex64> {
    let n = n as usize;
    let (s, c) = beta.sin_cos();
    let mut cos_pow = vec![1.0; n + 1];
    let mut sin_pow = vec![1.0; n + 1];
    for j in 1..=n {
        cos_pow[j] = cos_pow[j - 1] * c;
        sin_pow[j] = sin_pow[j - 1] * s;
    }
    (0..=n)
        .map(|d| minus_i_pow(d) * (cos_pow[n - d] * sin_pow[d]))
        .collect()
}

/// `f_n(beta, d)`; zero for `d > n`.
pub fn f_n(beta: f64, d: u32, n: u32) -> ComplexValue {
    if d > n {
        return Complex64::new(0.0, 0.0);
    }
    mixer_factors(beta, n)[d as usize]
}

/// `e^{-i gamma} - 1`, the phase the separator adds on target states.
pub(crate) fn phase_shift(gamma: f64) -> Complex64 {
    let (s, c) = gamma.sin_cos();
    Complex64::new(c - 1.0, -s)
}
