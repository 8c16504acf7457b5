//! Structural summary of the uniform-sampling problem in closed form.
//!
//! Fix a reference target `k`; the other `|T| - 1` targets are a draw without
//! replacement from the remaining `2^n - 1` states, of which `C(n,d)` sit at
//! distance `d`. Distance counts are therefore (multivariate) hypergeometric.
//!
//! Two moment conventions exist. [`UniformMode::Paper`] uses the mean
//! `|T| C(n,d) / 2^n` and the matching covariance formula; it is the default
//! because published figures were produced with it. [`UniformMode::ExactHypergeometric`]
//! uses the moments that actually follow from the urn model,
//! `(|T|-1) C(n,d) / (2^n-1)` for the mean. The two differ by `O(2^-n)`.

use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_binomial;

use crate::error::{Error, Result};
use crate::space::{binomial_row, MAX_QUBITS};
use crate::structure::StructuralSummary;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UniformMode {
    #[default]
    Paper,
    ExactHypergeometric,
}

impl std::fmt::Display for UniformMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            UniformMode::Paper => "paper",
            UniformMode::ExactHypergeometric => "exact_hypergeometric",
        })
    }
}

impl std::str::FromStr for UniformMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(UniformMode::Paper),
            "exact_hypergeometric" | "exact" => Ok(UniformMode::ExactHypergeometric),
            other => Err(Error::usage(format!(
                "unknown mode `{other}` (expected paper or exact_hypergeometric)"
            ))),
        }
    }
}

/// `|T|` states drawn uniformly without replacement from `{0,1}^n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UniformModel {
    n: u32,
    t_size: u64,
    mode: UniformMode,
    binom: [f64; MAX_QUBITS as usize + 1],
}

impl UniformModel {
    pub fn new(n: u32, t_size: u64, mode: UniformMode) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::usage(format!("n = {n} outside 1..={MAX_QUBITS}")));
        }
        if t_size == 0 || t_size > 1u64 << n {
            return Err(Error::usage(format!("|T| = {t_size} outside 1..=2^{n}")));
        }
        let mut binom = [0.0; MAX_QUBITS as usize + 1];
        binom[..=n as usize].copy_from_slice(&binomial_row(n));
        Ok(Self {
            n,
            t_size,
            mode,
            binom,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn t_size(&self) -> u64 {
        self.t_size
    }

    pub fn mode(&self) -> UniformMode {
        self.mode
    }

    fn population(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    fn draws(&self) -> u64 {
        self.t_size - 1
    }

    fn class_size(&self, d: u32) -> u64 {
        self.binom[d as usize] as u64
    }
}

fn ln_choose(n: u64, k: u64) -> f64 {
    if k > n {
        f64::NEG_INFINITY
    } else {
        ln_binomial(n, k)
    }
}

/// `P(#_d(k) = x)`. Zero outside the support, including `d > n`.
pub fn pmf_single(model: &UniformModel, d: u32, x: u64) -> f64 {
    if d > model.n {
        return 0.0;
    }
    if d == 0 {
        return if x == 1 { 1.0 } else { 0.0 };
    }
    let (pop, draws, hits) = (model.population(), model.draws(), model.class_size(d));
    if x > hits || x > draws || draws - x > pop - hits {
        return 0.0;
    }
    (ln_choose(hits, x) + ln_choose(pop - hits, draws - x) - ln_choose(pop, draws)).exp()
}

/// `P(#_d1(k) = x1, #_d2(k) = x2)`.
pub fn pmf_joint(model: &UniformModel, d1: u32, d2: u32, x1: u64, x2: u64) -> f64 {
    if d1 > model.n || d2 > model.n {
        return 0.0;
    }
    if d1 == 0 || d2 == 0 {
        return pmf_single(model, d1, x1) * pmf_single(model, d2, x2);
    }
    if d1 == d2 {
        return if x1 == x2 {
            pmf_single(model, d1, x1)
        } else {
            0.0
        };
    }
    let (pop, draws) = (model.population(), model.draws());
    let (h1, h2) = (model.class_size(d1), model.class_size(d2));
    let rest = pop - h1 - h2;
    if x1 > h1 || x2 > h2 || x1 + x2 > draws || draws - x1 - x2 > rest {
        return 0.0;
    }
    (ln_choose(h1, x1) + ln_choose(h2, x2) + ln_choose(rest, draws - x1 - x2)
        - ln_choose(pop, draws))
    .exp()
}

/// `E(#_d(k))` for `d = 0..=n`.
pub fn expected_profile(model: &UniformModel) -> Vec<f64> {
    let space = (1u64 << model.n) as f64;
    (0..=model.n)
        .map(|d| {
            if d == 0 {
                return 1.0;
            }
            let c = model.binom[d as usize];
            match model.mode {
                UniformMode::Paper => model.t_size as f64 * c / space,
                UniformMode::ExactHypergeometric => {
                    model.draws() as f64 * c / model.population() as f64
                }
            }
        })
        .collect()
}

/// `Cov(#_d1(k), #_d2(k))`.
pub fn covariance(model: &UniformModel, d1: u32, d2: u32) -> f64 {
    if d1 == 0 || d2 == 0 || d1 > model.n || d2 > model.n {
        return 0.0;
    }
    let (c1, c2) = (model.binom[d1 as usize], model.binom[d2 as usize]);
    match model.mode {
        UniformMode::Paper => {
            let space = (1u64 << model.n) as f64;
            let t = model.t_size as f64;
            let factor = t * (space - t) / (space - 1.0);
            if d1 == d2 {
                factor * (c1 / space) * (1.0 - c1 / space)
            } else {
                -factor * c1 * c2 / (space * space)
            }
        }
        UniformMode::ExactHypergeometric => {
            let pop = model.population() as f64;
            let m = model.draws() as f64;
            if pop <= 1.0 {
                // a single remaining state: the draw is deterministic
                return 0.0;
            }
            let finite = (pop - m) / (pop - 1.0);
            if d1 == d2 {
                m * (c1 / pop) * (1.0 - c1 / pop) * finite
            } else {
                -m * c1 * c2 / (pop * pop) * finite
            }
        }
    }
}

/// The summary implied by the model, tagged with its mode.
pub fn summary_analytic(model: &UniformModel) -> StructuralSummary {
    let e_profile = expected_profile(model);
    let dims = 0..=model.n;
    let e_pair = dims
        .clone()
        .map(|d1| {
            dims.clone()
                .map(|d2| {
                    e_profile[d1 as usize] * e_profile[d2 as usize] + covariance(model, d1, d2)
                })
                .collect()
        })
        .collect();
    StructuralSummary {
        n: model.n,
        count: 0,
        e_tsize: model.t_size as f64,
        var_tsize: 0.0,
        e_profile,
        e_pair,
        mode: Some(model.mode),
    }
}
