use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::space::TargetSpace;

/// Memory cap for explicit statevectors.
pub const MAX_STATEVECTOR_QUBITS: u32 = 24;

/// The depth-1 QAOA state as `2^n` amplitudes.
///
/// Starts from the uniform superposition, multiplies target amplitudes by
/// `e^{-i gamma}`, then applies `e^{-i beta X_q}` to each qubit in turn.
pub fn qaoa_state(target: &TargetSpace, beta: f64, gamma: f64) -> Result<Vec<Complex64>> {
    let n = target.n();
    if n > MAX_STATEVECTOR_QUBITS {
        return Err(Error::usage(format!(
            "statevector simulation limited to {MAX_STATEVECTOR_QUBITS} qubits, got {n}"
        )));
    }
    let size = 1usize << n;
    let mut amps = vec![Complex64::new(1.0 / (size as f64).sqrt(), 0.0); size];
    let phase = Complex64::new(0.0, -gamma).exp();
    for &k in target.states() {
        amps[k as usize] *= phase;
    }
    let (s, c) = beta.sin_cos();
    let minus_i_sin = Complex64::new(0.0, -s);
    for q in 0..n {
        let stride = 1usize << q;
        for block in (0..size).step_by(2 * stride) {
            for i in block..block + stride {
                let a = amps[i];
                let b = amps[i + stride];
                amps[i] = a * c + b * minus_i_sin;
                amps[i + stride] = b * c + a * minus_i_sin;
            }
        }
    }
    Ok(amps)
}

/// Probability of measuring a target state, by explicit simulation.
pub fn f1_statevector(target: &TargetSpace, beta: f64, gamma: f64) -> Result<f64> {
    let amps = qaoa_state(target, beta, gamma)?;
    Ok(target
        .states()
        .iter()
        .map(|&k| amps[k as usize].norm_sqr())
        .sum())
}
