//! Seeded generators for the five problem families and reproducible
//! ensembles built from them.
//!
//! Every instance draws from its own random stream keyed by `(seed, id)`, so
//! an ensemble is identical no matter how many threads generate it. Draws
//! that are rejected (unsatisfiable formulas, clique-free graphs) keep
//! consuming the same stream and never advance the instance id.

pub mod clustered;
pub mod kclique;
pub mod qrfactor;
pub mod rng;
pub mod sat;
pub mod uniform;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{check_width, TargetSpace};

pub use clustered::{sample_clustered, Dedupe};
pub use kclique::{enumerate_kcliques, gen_graph, Graph};
pub use qrfactor::{sample_qr, QrPair};
pub use sat::{enumerate_sat, gen_sat, Cnf, Literal};
pub use uniform::sample_uniform;

/// Rejected draws allowed per instance before generation fails.
const MAX_ATTEMPTS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Uniform,
    Clustered,
    Sat,
    KClique,
    QrFactor,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Uniform,
        Family::Clustered,
        Family::Sat,
        Family::KClique,
        Family::QrFactor,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Uniform => "uniform",
            Family::Clustered => "clustered",
            Family::Sat => "sat",
            Family::KClique => "kclique",
            Family::QrFactor => "qrfactor",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::usage(format!("unknown family `{s}`")))
    }
}

/// Family-specific generation parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilyParams {
    Uniform {
        t_size: usize,
    },
    Clustered {
        num_seeds: usize,
        per_seed: usize,
        dedupe: Dedupe,
    },
    Sat {
        num_clauses: usize,
    },
    KClique {
        k: u32,
        edge_prob: f64,
    },
    QrFactor,
}

impl FamilyParams {
    pub fn family(&self) -> Family {
        match self {
            FamilyParams::Uniform { .. } => Family::Uniform,
            FamilyParams::Clustered { .. } => Family::Clustered,
            FamilyParams::Sat { .. } => Family::Sat,
            FamilyParams::KClique { .. } => Family::KClique,
            FamilyParams::QrFactor => Family::QrFactor,
        }
    }

    /// Defaults used throughout the experiments: half the space for uniform
    /// sampling, three clusters of 30 walks, `4n` clauses, triangles in
    /// `G(n, 1/2)`.
    pub fn default_for(family: Family, n: u32) -> Self {
        match family {
            Family::Uniform => FamilyParams::Uniform {
                t_size: 1usize << n.saturating_sub(1).min(31),
            },
            Family::Clustered => FamilyParams::Clustered {
                num_seeds: 3,
                per_seed: 30,
                dedupe: Dedupe::Retry,
            },
            Family::Sat => FamilyParams::Sat {
                num_clauses: 4 * n as usize,
            },
            Family::KClique => FamilyParams::KClique {
                k: 3,
                edge_prob: 0.5,
            },
            Family::QrFactor => FamilyParams::QrFactor,
        }
    }

    fn validate(&self, n: u32) -> Result<()> {
        check_width(n)?;
        match *self {
            FamilyParams::Uniform { t_size } => {
                if t_size == 0 || t_size as u64 > 1u64 << n {
                    return Err(Error::usage(format!("t_size {t_size} outside 1..=2^{n}")));
                }
            }
            FamilyParams::Clustered {
                num_seeds,
                per_seed,
                ..
            } => {
                let wanted = num_seeds as u128 * (per_seed as u128 + 1);
                if num_seeds == 0 || wanted > 1u128 << n {
                    return Err(Error::usage("clusters do not fit into the state space"));
                }
            }
            FamilyParams::Sat { .. } => {
                if !(3..=sat::MAX_ENUMERATION_VARS).contains(&n) {
                    return Err(Error::usage(format!(
                        "SAT ensembles need 3 <= n <= 24, got {n}"
                    )));
                }
            }
            FamilyParams::KClique { k, edge_prob } => {
                if n > kclique::MAX_VERTICES || k < 2 || k > n {
                    return Err(Error::usage(format!(
                        "k-clique needs 2 <= k <= n <= 24 (k={k}, n={n})"
                    )));
                }
                if !(0.0..=1.0).contains(&edge_prob) || edge_prob == 0.0 {
                    return Err(Error::usage(format!(
                        "edge probability {edge_prob} outside (0, 1]"
                    )));
                }
            }
            FamilyParams::QrFactor => {
                qrfactor::prime_pool(n)?;
            }
        }
        Ok(())
    }
}

/// Family-specific record attached to each instance.
#[derive(Clone, Debug, PartialEq)]
pub enum InstanceMeta {
    Uniform,
    Clustered { seeds: Vec<u32> },
    Sat { cnf: Cnf },
    KClique { graph: Graph, k: u32 },
    QrFactor { q: u32, r: u32, x: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub id: usize,
    pub target: TargetSpace,
    pub meta: InstanceMeta,
}

/// A reproducible collection of instances of one family and dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    pub n: u32,
    pub seed: u64,
    pub params: FamilyParams,
    pub instances: Vec<Instance>,
}

impl Ensemble {
    pub fn family(&self) -> Family {
        self.params.family()
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn targets(&self) -> impl Iterator<Item = &TargetSpace> {
        self.instances.iter().map(|i| &i.target)
    }

    /// Checks the structural invariants: shared dimension and ids `0..len`.
    pub fn validate(&self) -> Result<()> {
        self.params.validate(self.n)?;
        for (pos, inst) in self.instances.iter().enumerate() {
            if inst.id != pos {
                return Err(Error::usage(format!(
                    "instance at position {pos} has id {}",
                    inst.id
                )));
            }
            if inst.target.n() != self.n {
                return Err(Error::usage(format!(
                    "instance {pos} has dimension {}, ensemble has {}",
                    inst.target.n(),
                    self.n
                )));
            }
        }
        Ok(())
    }
}

/// Generates `count` accepted instances.
pub fn build_ensemble(params: &FamilyParams, n: u32, count: usize, seed: u64) -> Result<Ensemble> {
    if count == 0 {
        return Err(Error::usage("ensemble needs at least one instance"));
    }
    params.validate(n)?;
    let pool = match params {
        FamilyParams::QrFactor => qrfactor::prime_pool(n)?,
        _ => Vec::new(),
    };
    let instances = (0..count)
        .into_par_iter()
        .map(|id| generate_instance(params, n, id, seed, &pool))
        .collect::<Result<Vec<_>>>()?;
    Ok(Ensemble {
        n,
        seed,
        params: params.clone(),
        instances,
    })
}

fn generate_instance(
    params: &FamilyParams,
    n: u32,
    id: usize,
    seed: u64,
    pool: &[u32],
) -> Result<Instance> {
    let mut rng = rng::stream(seed, id as u64);
    let (target, meta) = match *params {
        FamilyParams::Uniform { t_size } => {
            (sample_uniform(n, t_size, &mut rng)?, InstanceMeta::Uniform)
        }
        FamilyParams::Clustered {
            num_seeds,
            per_seed,
            dedupe,
        } => {
            let (target, seeds) = sample_clustered(n, num_seeds, per_seed, dedupe, &mut rng)?;
            (target, InstanceMeta::Clustered { seeds })
        }
        FamilyParams::Sat { num_clauses } => retry(id, || {
            let cnf = gen_sat(n, num_clauses, &mut rng)?;
            Ok(enumerate_sat(&cnf)?.map(|t| (t, InstanceMeta::Sat { cnf })))
        })?,
        FamilyParams::KClique { k, edge_prob } => retry(id, || {
            let graph = gen_graph(n, edge_prob, &mut rng)?;
            Ok(enumerate_kcliques(&graph, k)?.map(|t| (t, InstanceMeta::KClique { graph, k })))
        })?,
        FamilyParams::QrFactor => {
            let (target, pair) = sample_qr(n, pool, &mut rng)?;
            (
                target,
                InstanceMeta::QrFactor {
                    q: pair.q,
                    r: pair.r,
                    x: pair.product(),
                },
            )
        }
    };
    Ok(Instance { id, target, meta })
}

fn retry<T>(id: usize, mut draw: impl FnMut() -> Result<Option<T>>) -> Result<T> {
    for _ in 0..MAX_ATTEMPTS {
        if let Some(found) = draw()? {
            return Ok(found);
        }
    }
    Err(Error::computation(format!(
        "instance {id}: no solvable draw in {MAX_ATTEMPTS} attempts"
    )))
}
