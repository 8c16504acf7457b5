//! End-to-end experiments: the exact-vs-approximate landscape comparison and
//! the success-probability duel between standard and non-iterative QAOA.
//!
//! Success probability is reported exactly (it *is* `F1` at the chosen
//! angles) and by finite shot sampling, which mirrors how the method would
//! be run on hardware.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landscape::{
    error_bound, qaoa_state, ApproxLandscape, InstanceLandscape, LandscapeGrid,
};
use crate::optimize::{optimize_instance, optimize_problem, OptConfig, OptResult};
use crate::problems::rng::{mix, stream};
use crate::problems::{build_ensemble, Ensemble, Family, FamilyParams};
use crate::space::{AngleGrid, Angles, TargetSpace};
use crate::structure::{summarize, StructuralSummary};

/// Shots per instance used by default: 100 for qr-factoring, 50 otherwise.
pub fn default_shots(family: Family) -> u64 {
    match family {
        Family::QrFactor => 100,
        _ => 50,
    }
}

/// Measures `|beta, gamma>` `shots` times and counts outcomes inside `T`.
pub fn sample_shots<R: Rng + ?Sized>(
    target: &TargetSpace,
    angles: Angles,
    shots: u64,
    rng: &mut R,
) -> Result<u64> {
    if shots == 0 {
        return Err(Error::usage("need at least one shot"));
    }
    let state = qaoa_state(target, angles.beta, angles.gamma)?;
    let mut cdf = Vec::with_capacity(state.len());
    let mut acc = 0.0;
    for amp in &state {
        acc += amp.norm_sqr();
        cdf.push(acc);
    }
    let total = acc;
    let mut hits = 0;
    for _ in 0..shots {
        let u = rng.random::<f64>() * total;
        let outcome = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
        if target.contains(outcome as u32) {
            hits += 1;
        }
    }
    Ok(hits)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArmOutcome {
    #[serde(flatten)]
    pub angles: Angles,
    pub success_prob: f64,
    pub shots_hit: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceComparison {
    pub id: usize,
    pub t_size: usize,
    pub standard: ArmOutcome,
    pub noniterative: ArmOutcome,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArmAggregate {
    pub mean_success: f64,
    pub stddev_success: f64,
    pub mean_hit_fraction: f64,
}

impl ArmAggregate {
    fn from_outcomes<'a>(
        outcomes: impl Iterator<Item = &'a ArmOutcome> + Clone,
        shots: u64,
    ) -> Self {
        let probs: Vec<f64> = outcomes.clone().map(|o| o.success_prob).collect();
        let count = probs.len() as f64;
        let mean = probs.iter().sum::<f64>() / count;
        let var = probs.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / count;
        let hits: u64 = outcomes.map(|o| o.shots_hit).sum();
        Self {
            mean_success: mean,
            stddev_success: var.sqrt(),
            mean_hit_fraction: hits as f64 / (count * shots as f64),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub family: Family,
    pub n: u32,
    pub shots: u64,
    /// The one set of angles the non-iterative arm applies to every instance.
    pub shared: OptResult,
    pub instances: Vec<InstanceComparison>,
    pub standard: ArmAggregate,
    pub noniterative: ArmAggregate,
}

const STANDARD_STREAM: u64 = 0;
const NONITERATIVE_STREAM: u64 = 1;

/// Standard QAOA (optimise each instance) against non-iterative QAOA
/// (optimise the approximate landscape once, reuse the angles everywhere).
pub fn run_success_comparison(
    ensemble: &Ensemble,
    config: &OptConfig,
    shots: u64,
    seed: u64,
) -> Result<ComparisonReport> {
    if ensemble.is_empty() {
        return Err(Error::usage("comparison needs a non-empty ensemble"));
    }
    if shots == 0 {
        return Err(Error::usage("need at least one shot"));
    }
    let summary = summarize(ensemble)?;
    let shared = optimize_problem(&summary, config)?;
    let instances = ensemble
        .instances
        .par_iter()
        .map(|inst| {
            let own = optimize_instance(&inst.target, config)?;
            let id = inst.id as u64;
            let arm = |angles: Angles, key: u64| -> Result<ArmOutcome> {
                let mut rng = stream(mix(seed, key), id);
                Ok(ArmOutcome {
                    angles,
                    success_prob: InstanceLandscape::new(&inst.target)
                        .f1(angles.beta, angles.gamma),
                    shots_hit: sample_shots(&inst.target, angles, shots, &mut rng)?,
                })
            };
            Ok(InstanceComparison {
                id: inst.id,
                t_size: inst.target.len(),
                standard: arm(own.angles, STANDARD_STREAM)?,
                noniterative: arm(shared.angles, NONITERATIVE_STREAM)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ComparisonReport {
        family: ensemble.family(),
        n: ensemble.n,
        shots,
        standard: ArmAggregate::from_outcomes(instances.iter().map(|i| &i.standard), shots),
        noniterative: ArmAggregate::from_outcomes(instances.iter().map(|i| &i.noniterative), shots),
        shared,
        instances,
    })
}

/// Mean landscape, its structural approximation and their discrepancy along
/// `gamma = gamma_c`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossSection {
    pub gamma_c: f64,
    pub betas: Vec<f64>,
    pub mean: Vec<f64>,
    pub stddev: Vec<f64>,
    pub approx: Vec<f64>,
    pub error: Vec<f64>,
    pub bound: Vec<f64>,
    /// Per-instance values, `instance_values[i][j]` at `betas[j]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance_values: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LandscapeComparison {
    pub summary: StructuralSummary,
    /// Ensemble mean of `F1` with the population stddev attached.
    pub mean: LandscapeGrid,
    pub approx: LandscapeGrid,
    /// `|mean - approx|`.
    pub error: LandscapeGrid,
    /// Sample Cauchy–Schwarz bound on `error`.
    pub bound: LandscapeGrid,
    pub cross_section: CrossSection,
}

struct PointStats {
    mean: f64,
    stddev: f64,
    approx: f64,
    bound: f64,
}

fn point_stats(
    landscapes: &[InstanceLandscape],
    approx: &ApproxLandscape,
    a: Angles,
) -> Result<PointStats> {
    let count = landscapes.len() as f64;
    let s: Vec<f64> = landscapes.iter().map(|l| l.size_fraction()).collect();
    let m: Vec<f64> = landscapes
        .iter()
        .map(|l| l.mean_ck_sq(a.beta, a.gamma))
        .collect();
    let f: Vec<f64> = s.iter().zip(&m).map(|(s, m)| s * m).collect();
    let mean = f.iter().sum::<f64>() / count;
    let var = f.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / count;
    Ok(PointStats {
        mean,
        stddev: var.sqrt(),
        approx: approx
            .expected_f1(a.beta, a.gamma)
            .map_err(|e| e.at_point(a.beta, a.gamma))?,
        bound: error_bound(&s, &m)?,
    })
}

/// Compares the ensemble's exact mean landscape with its approximation built
/// from the ensemble's own summary.
pub fn run_landscape_comparison(
    ensemble: &Ensemble,
    grid: &AngleGrid,
    gamma_c: f64,
) -> Result<LandscapeComparison> {
    if ensemble.is_empty() {
        return Err(Error::usage("comparison needs a non-empty ensemble"));
    }
    grid.validate()?;
    if !gamma_c.is_finite() {
        return Err(Error::usage("cross-section angle must be finite"));
    }
    let summary = summarize(ensemble)?;
    let approx = ApproxLandscape::new(&summary)?;
    let landscapes: Vec<InstanceLandscape> = ensemble
        .instances
        .par_iter()
        .map(|i| InstanceLandscape::new(&i.target))
        .collect();

    let points = (0..grid.len())
        .into_par_iter()
        .map(|idx| point_stats(&landscapes, &approx, grid.point(idx)))
        .collect::<Result<Vec<_>>>()?;
    let column = |f: fn(&PointStats) -> f64| points.iter().map(f).collect::<Vec<f64>>();
    let mean = LandscapeGrid::new(*grid, column(|p| p.mean), Some(column(|p| p.stddev)))?;
    let approx_grid = LandscapeGrid::new(*grid, column(|p| p.approx), None)?;
    let error = LandscapeGrid::new(*grid, column(|p| (p.mean - p.approx).abs()), None)?;
    let bound = LandscapeGrid::new(*grid, column(|p| p.bound), None)?;

    let betas = grid.betas();
    let section = betas
        .par_iter()
        .map(|&b| point_stats(&landscapes, &approx, Angles::new(b, gamma_c)))
        .collect::<Result<Vec<_>>>()?;
    let instance_values = landscapes
        .iter()
        .map(|l| betas.iter().map(|&b| l.f1(b, gamma_c)).collect())
        .collect();
    let cross_section = CrossSection {
        gamma_c,
        betas,
        mean: section.iter().map(|p| p.mean).collect(),
        stddev: section.iter().map(|p| p.stddev).collect(),
        approx: section.iter().map(|p| p.approx).collect(),
        error: section.iter().map(|p| (p.mean - p.approx).abs()).collect(),
        bound: section.iter().map(|p| p.bound).collect(),
        instance_values: Some(instance_values),
    };
    Ok(LandscapeComparison {
        summary,
        mean,
        approx: approx_grid,
        error,
        bound,
        cross_section,
    })
}

/// One clause density of the SAT phase-transition study.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaReport {
    pub alpha: f64,
    pub num_clauses: usize,
    pub mean_tsize: f64,
    pub report: ComparisonReport,
}

/// Runs the success comparison on random 3-SAT with `floor(alpha * n)`
/// clauses for every `alpha`.
pub fn run_sat_alpha(
    n: u32,
    alphas: &[f64],
    instances_per_alpha: usize,
    seed: u64,
    config: &OptConfig,
    shots: u64,
) -> Result<Vec<AlphaReport>> {
    if alphas.is_empty() {
        return Err(Error::usage("no alpha values given"));
    }
    alphas
        .iter()
        .enumerate()
        .map(|(idx, &alpha)| {
            if !(alpha.is_finite() && alpha > 0.0) {
                return Err(Error::usage(format!("alpha must be positive, got {alpha}")));
            }
            let num_clauses = (alpha * n as f64).floor() as usize;
            let bucket_seed = mix(seed, idx as u64);
            let ensemble = build_ensemble(
                &FamilyParams::Sat { num_clauses },
                n,
                instances_per_alpha,
                bucket_seed,
            )?;
            let mean_tsize =
                ensemble.targets().map(|t| t.len() as f64).sum::<f64>() / ensemble.len() as f64;
            let report = run_success_comparison(&ensemble, config, shots, bucket_seed)?;
            Ok(AlphaReport {
                alpha,
                num_clauses,
                mean_tsize,
                report,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscape::f1_closed;
    use crate::problems::{Instance, InstanceMeta};
    use std::f64::consts::PI;

    fn ensemble_of(targets: Vec<TargetSpace>) -> Ensemble {
        let n = targets[0].n();
        Ensemble {
            n,
            seed: 0,
            params: FamilyParams::Uniform {
                t_size: targets[0].len(),
            },
            instances: targets
                .into_iter()
                .enumerate()
                .map(|(id, target)| Instance {
                    id,
                    target,
                    meta: InstanceMeta::Uniform,
                })
                .collect(),
        }
    }

    #[test]
    fn shots_at_the_origin_are_uniform() {
        let t = TargetSpace::new(5, vec![1, 4, 9, 16, 25, 31]).unwrap();
        let shots = 10_000;
        let hits = sample_shots(&t, Angles::new(0.0, 0.0), shots, &mut stream(5, 0)).unwrap();
        let p = 6.0 / 32.0;
        let frac = hits as f64 / shots as f64;
        assert!((frac - p).abs() < 4.0 * (p * (1.0 - p) / shots as f64).sqrt());
    }

    #[test]
    fn perfect_state_always_hits() {
        let t = TargetSpace::new(1, vec![1]).unwrap();
        let hits =
            sample_shots(&t, Angles::new(PI / 4.0, PI / 2.0), 1000, &mut stream(1, 1)).unwrap();
        assert_eq!(hits, 1000);
    }

    #[test]
    fn shots_are_reproducible_and_converge() {
        let t = TargetSpace::new(6, vec![2, 3, 50]).unwrap();
        let a = Angles::new(0.4, 1.1);
        let x = sample_shots(&t, a, 10_000, &mut stream(9, 3)).unwrap();
        let y = sample_shots(&t, a, 10_000, &mut stream(9, 3)).unwrap();
        assert_eq!(x, y);
        let p = f1_closed(&t, a.beta, a.gamma);
        let frac = x as f64 / 10_000.0;
        assert!((frac - p).abs() < 4.0 * (p * (1.0 - p) / 10_000.0).sqrt());
        assert!(sample_shots(&t, a, 0, &mut stream(9, 3)).is_err());
    }

    #[test]
    fn identical_instances_give_identical_arms() {
        let t = TargetSpace::new(5, vec![0, 5, 6, 22]).unwrap();
        let e = ensemble_of(vec![t.clone(), t.clone(), t]);
        let r = run_success_comparison(&e, &OptConfig::default(), 50, 3).unwrap();
        for i in &r.instances {
            assert!((i.standard.success_prob - i.noniterative.success_prob).abs() < 1e-9);
        }
    }

    #[test]
    fn report_invariants() {
        let e = build_ensemble(&FamilyParams::Uniform { t_size: 10 }, 6, 6, 11).unwrap();
        let r = run_success_comparison(&e, &OptConfig::default(), 50, 4).unwrap();
        assert_eq!(r.instances.len(), 6);
        for (inst, cmp) in e.instances.iter().zip(&r.instances) {
            for arm in [&cmp.standard, &cmp.noniterative] {
                assert!((0.0..=1.0).contains(&arm.success_prob));
                assert!(arm.shots_hit <= 50);
                let exact = f1_closed(&inst.target, arm.angles.beta, arm.angles.gamma);
                assert!((arm.success_prob - exact).abs() < 1e-12);
            }
            assert_eq!(cmp.noniterative.angles, r.shared.angles);
        }
        let again = run_success_comparison(&e, &OptConfig::default(), 50, 4).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn single_instance_landscape_comparison_is_exact() {
        let t = TargetSpace::new(5, vec![1, 2, 19, 30]).unwrap();
        let e = ensemble_of(vec![t.clone()]);
        let grid = AngleGrid::landscape(7, 9).unwrap();
        let c = run_landscape_comparison(&e, &grid, 1.2).unwrap();
        for idx in 0..grid.len() {
            let p = grid.point(idx);
            assert!((c.mean.values[idx] - f1_closed(&t, p.beta, p.gamma)).abs() < 1e-12);
            assert_eq!(c.mean.stddev.as_ref().unwrap()[idx], 0.0);
            assert!(c.error.values[idx] < 1e-12);
        }
        assert_eq!(c.cross_section.betas.len(), 7);
    }

    #[test]
    fn error_never_exceeds_the_sample_bound() {
        let e = build_ensemble(&FamilyParams::Uniform { t_size: 9 }, 6, 20, 2).unwrap();
        // uniform ensembles have constant |T|, so perturb sizes by mixing in others
        let mut targets: Vec<TargetSpace> = e.targets().cloned().collect();
        targets.extend(
            build_ensemble(&FamilyParams::Uniform { t_size: 20 }, 6, 10, 3)
                .unwrap()
                .targets()
                .cloned(),
        );
        let e = ensemble_of(targets);
        let grid = AngleGrid::landscape(12, 12).unwrap();
        let c = run_landscape_comparison(&e, &grid, 1.2).unwrap();
        for idx in 0..grid.len() {
            assert!(c.error.values[idx] <= c.bound.values[idx] + 1e-12);
        }
        assert!(c.bound.values.iter().any(|&b| b > 1e-6));
    }

    #[test]
    fn sat_alpha_ordering() {
        let config = OptConfig {
            coarse_grid: AngleGrid::new((0.0, PI), (0.0, 2.0 * PI * 15.0 / 16.0), 16, 16).unwrap(),
            ..OptConfig::default()
        };
        let reports = run_sat_alpha(6, &[2.0, 6.0], 8, 1, &config, 20).unwrap();
        assert_eq!(reports[0].num_clauses, 12);
        assert_eq!(reports[1].num_clauses, 36);
        assert!(reports[0].mean_tsize > reports[1].mean_tsize);
        assert!(run_sat_alpha(6, &[0.0], 8, 1, &config, 20).is_err());
    }
}
