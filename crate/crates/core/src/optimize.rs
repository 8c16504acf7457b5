//! Deterministic angle optimisation: a coarse grid scan picks the best cells,
//! each is refined by a Nelder–Mead simplex, and the best refinement wins.
//!
//! Ties are resolved by position, never by timing: equal grid values keep
//! row-major order, equal refinements keep seed order. Runs are therefore
//! reproducible under any thread count.

use std::cell::{Cell, RefCell};
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landscape::{eval_grid, ApproxLandscape, InstanceLandscape};
use crate::space::{AngleGrid, Angles, TargetSpace};
use crate::structure::StructuralSummary;

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Values this close (relative to the landscape scale) count as ties, so
/// that rounding noise cannot override the positional tie-break.
const TIE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptConfig {
    pub coarse_grid: AngleGrid,
    /// Number of best grid cells refined by the simplex.
    pub refine_starts: usize,
    /// Stop once the simplex values span at most this much...
    pub ftol: f64,
    /// ...and its vertices lie within this distance of the best one.
    pub xtol: f64,
    /// Evaluation budget of each simplex run.
    pub max_evaluations: usize,
    pub record_trace: bool,
}

impl Default for OptConfig {
    fn default() -> Self {
        Self {
            // gamma is periodic, so 2pi itself would duplicate the first column
            coarse_grid: AngleGrid {
                beta_min: 0.0,
                beta_max: PI,
                gamma_min: 0.0,
                gamma_max: 2.0 * PI * 31.0 / 32.0,
                beta_steps: 32,
                gamma_steps: 32,
            },
            refine_starts: 4,
            ftol: 1e-8,
            xtol: 1e-10,
            max_evaluations: 10_000,
            record_trace: false,
        }
    }
}

impl OptConfig {
    pub fn validate(&self) -> Result<()> {
        self.coarse_grid.validate()?;
        if self.refine_starts == 0 || self.max_evaluations == 0 {
            return Err(Error::usage(
                "refine_starts and max_evaluations must be positive",
            ));
        }
        if !(self.ftol > 0.0 && self.xtol > 0.0) {
            return Err(Error::usage("tolerances must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    #[serde(flatten)]
    pub angles: Angles,
    pub value: f64,
    /// Objective calls, grid scan and final re-evaluation included.
    pub evaluations: usize,
    #[serde(skip)]
    pub trace: Option<Vec<(Angles, f64)>>,
}

fn checked<F>(objective: &F, at: Angles) -> Result<f64>
where
    F: Fn(Angles) -> Result<f64>,
{
    let value = objective(at).map_err(|e| e.at_point(at.beta, at.gamma))?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::computation(format!("objective returned {value}")).at_point(at.beta, at.gamma))
    }
}

struct Refinement {
    best: ([f64; 2], f64),
    evaluations: usize,
    trace: Vec<(Angles, f64)>,
}

fn nelder_mead<F>(
    objective: &F,
    start: ([f64; 2], f64),
    step: [f64; 2],
    config: &OptConfig,
) -> Result<Refinement>
where
    F: Fn(Angles) -> Result<f64>,
{
    let evaluations = Cell::new(0usize);
    let trace = RefCell::new(Vec::new());
    let eval = |p: [f64; 2]| -> Result<f64> {
        let at = Angles::new(p[0], p[1]);
        let v = checked(objective, at)?;
        evaluations.set(evaluations.get() + 1);
        if config.record_trace {
            trace.borrow_mut().push((at, v));
        }
        Ok(v)
    };
    let along = |from: [f64; 2], to: [f64; 2], t: f64| {
        [
            from[0] + t * (to[0] - from[0]),
            from[1] + t * (to[1] - from[1]),
        ]
    };

    let (x0, _) = start;
    let x1 = [x0[0] + step[0], x0[1]];
    let x2 = [x0[0], x0[1] + step[1]];
    let mut simplex = [start, (x1, eval(x1)?), (x2, eval(x2)?)];
    loop {
        // descending, stable: equal values keep their order
        simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
        let (best, worst) = (simplex[0], simplex[2]);
        let spread = best.1 - worst.1;
        let size = simplex[1..]
            .iter()
            .map(|v| (v.0[0] - best.0[0]).hypot(v.0[1] - best.0[1]))
            .fold(0.0, f64::max);
        if (spread <= config.ftol && size <= config.xtol)
            || evaluations.get() >= config.max_evaluations
        {
            break;
        }
        let centroid = along(simplex[0].0, simplex[1].0, 0.5);
        let reflected = along(centroid, worst.0, -REFLECT);
        let fr = eval(reflected)?;
        if fr > best.1 {
            let expanded = along(centroid, worst.0, -EXPAND);
            let fe = eval(expanded)?;
            simplex[2] = if fe > fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
            continue;
        }
        if fr > simplex[1].1 {
            simplex[2] = (reflected, fr);
            continue;
        }
        let (contracted, accept_above) = if fr > worst.1 {
            (along(centroid, reflected, CONTRACT), fr)
        } else {
            (along(centroid, worst.0, CONTRACT), worst.1)
        };
        let fc = eval(contracted)?;
        if fc > accept_above || (fr > worst.1 && fc == fr) {
            simplex[2] = (contracted, fc);
            continue;
        }
        for vertex in &mut simplex[1..] {
            let p = along(best.0, vertex.0, SHRINK);
            *vertex = (p, eval(p)?);
        }
    }
    Ok(Refinement {
        best: simplex[0],
        evaluations: evaluations.get(),
        trace: trace.into_inner(),
    })
}

fn spacing(min: f64, max: f64, steps: usize) -> f64 {
    if steps > 1 && max > min {
        (max - min) / (steps - 1) as f64
    } else {
        0.1
    }
}

/// Maximises `objective` over the angle plane.
///
/// The returned value is never below the best coarse-grid value, and the
/// angles are reduced with [`Angles::canonical`], which assumes the usual
/// `pi` / `2pi` periodicity of depth-1 landscapes.
pub fn maximize<F>(objective: F, config: &OptConfig) -> Result<OptResult>
where
    F: Fn(Angles) -> Result<f64> + Sync,
{
    config.validate()?;
    let grid = &config.coarse_grid;
    let coarse = eval_grid(|a| checked(&objective, a), grid)?;
    let scale = coarse.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let tie_key = |v: f64| (v / (scale * TIE_TOL)).round();
    let mut order: Vec<usize> = (0..coarse.values.len()).collect();
    order.sort_by(|&a, &b| tie_key(coarse.values[b]).total_cmp(&tie_key(coarse.values[a])));
    let seeds = &order[..config.refine_starts.min(order.len())];

    let step = [
        spacing(grid.beta_min, grid.beta_max, grid.beta_steps),
        spacing(grid.gamma_min, grid.gamma_max, grid.gamma_steps),
    ];
    let runs = seeds
        .par_iter()
        .map(|&idx| {
            let p = grid.point(idx);
            nelder_mead(
                &objective,
                ([p.beta, p.gamma], coarse.values[idx]),
                step,
                config,
            )
        })
        .collect::<Result<Vec<_>>>()?;

    let best_idx = (0..coarse.values.len()).fold(0, |b, i| {
        if coarse.values[i] > coarse.values[b] {
            i
        } else {
            b
        }
    });
    let coarse_best = (grid.point(best_idx), coarse.values[best_idx]);
    let top = runs.iter().map(|r| r.best.1).fold(f64::MIN, f64::max);
    let floor = (top - TIE_TOL * scale).max(coarse_best.1);
    // earliest seed within the tie tolerance of the best refinement; when the
    // best grid cell was crowded out of the seeds, fall back to it
    let candidate = match runs.iter().position(|r| r.best.1 >= floor) {
        Some(i) => Angles::new(runs[i].best.0[0], runs[i].best.0[1]),
        None => coarse_best.0,
    };
    let refined = candidate.canonical();
    let refined_value = checked(&objective, refined)?;
    let (angles, value) = if refined_value >= coarse_best.1 {
        (refined, refined_value)
    } else {
        coarse_best
    };

    let evaluations = grid.len() + runs.iter().map(|r| r.evaluations).sum::<usize>() + 1;
    let trace = config.record_trace.then(|| {
        let mut t: Vec<(Angles, f64)> = (0..grid.len())
            .map(|i| (grid.point(i), coarse.values[i]))
            .collect();
        for run in &runs {
            t.extend_from_slice(&run.trace);
        }
        t.push((refined, refined_value));
        t
    });
    Ok(OptResult {
        angles,
        value,
        evaluations,
        trace,
    })
}

/// Standard QAOA: optimise the exact landscape of one instance.
pub fn optimize_instance(target: &TargetSpace, config: &OptConfig) -> Result<OptResult> {
    let landscape = InstanceLandscape::new(target);
    maximize(|a| Ok(landscape.f1(a.beta, a.gamma)), config)
}

/// Non-iterative QAOA: optimise the approximate expected landscape once.
pub fn optimize_problem(summary: &StructuralSummary, config: &OptConfig) -> Result<OptResult> {
    let approx = ApproxLandscape::new(summary)?;
    maximize(|a| approx.expected_f1(a.beta, a.gamma), config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscape::f1_closed;
    use crate::structure::{aggregate, instance_stats};

    fn n1(a: Angles) -> Result<f64> {
        Ok((1.0 + (2.0 * a.beta).sin() * a.gamma.sin()) / 2.0)
    }

    #[test]
    fn constant_objective_returns_first_grid_point() {
        let r = maximize(|_| Ok(0.25), &OptConfig::default()).unwrap();
        assert_eq!(r.angles, Angles::new(0.0, 0.0));
        assert_eq!(r.value, 0.25);
    }

    #[test]
    fn single_qubit_optimum() {
        let r = maximize(n1, &OptConfig::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!((r.angles.beta - PI / 4.0).abs() < 1e-6, "{:?}", r.angles);
        assert!((r.angles.gamma - PI / 2.0).abs() < 1e-6, "{:?}", r.angles);
        let fresh = n1(r.angles).unwrap();
        assert!((fresh - r.value).abs() < 1e-12);
    }

    #[test]
    fn symmetric_maxima_follow_the_first_seed() {
        // equal peaks at beta = pi/4 and 3pi/4; the first seed sits nearer pi/4
        let two_peaks = |a: Angles| Ok((2.0 * a.beta).sin().powi(2) * (1.0 + a.gamma.cos()) / 2.0);
        let r = maximize(two_peaks, &OptConfig::default()).unwrap();
        assert!((r.angles.beta - PI / 4.0).abs() < 1e-4, "{:?}", r.angles);
        assert!(r.angles.gamma.abs() < 1e-4 || (r.angles.gamma - 2.0 * PI).abs() < 1e-4);
    }

    #[test]
    fn non_finite_objective_is_reported_with_its_point() {
        let err = maximize(
            |a| Ok(if a.beta > 1.0 { f64::NAN } else { 0.0 }),
            &OptConfig::default(),
        )
        .unwrap_err();
        assert!(
            matches!(err, Error::Computation(ref m) if m.contains("beta=")),
            "{err}"
        );
    }

    #[test]
    fn deterministic_including_trace() {
        let config = OptConfig {
            record_trace: true,
            ..OptConfig::default()
        };
        let a = maximize(n1, &config).unwrap();
        let b = maximize(n1, &config).unwrap();
        assert_eq!(a, b);
        let trace = a.trace.unwrap();
        assert_eq!(trace.len(), a.evaluations);
    }

    #[test]
    fn scaling_does_not_move_the_argmax() {
        let t = TargetSpace::new(6, vec![3, 17, 18, 40, 63]).unwrap();
        let config = OptConfig::default();
        let plain = optimize_instance(&t, &config).unwrap();
        let scaled = maximize(|a| Ok(7.5 * f1_closed(&t, a.beta, a.gamma)), &config).unwrap();
        assert!((plain.angles.beta - scaled.angles.beta).abs() < 1e-6);
        assert!((plain.angles.gamma - scaled.angles.gamma).abs() < 1e-6);
    }

    #[test]
    fn refinement_never_loses_to_the_grid() {
        let t = TargetSpace::new(5, vec![0, 7, 9, 30]).unwrap();
        let config = OptConfig::default();
        let r = optimize_instance(&t, &config).unwrap();
        let grid = config.coarse_grid;
        let coarse_best = (0..grid.len())
            .map(|i| {
                let p = grid.point(i);
                f1_closed(&t, p.beta, p.gamma)
            })
            .fold(f64::MIN, f64::max);
        assert!(r.value >= coarse_best);
        assert!(r.angles.beta >= 0.0 && r.angles.beta < PI);
        assert!(r.angles.gamma >= 0.0 && r.angles.gamma < 2.0 * PI);
    }

    #[test]
    fn full_space_is_flat() {
        let r = optimize_instance(&TargetSpace::full(4).unwrap(), &OptConfig::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn problem_optimum_of_a_single_instance_matches_the_instance() {
        let t = TargetSpace::new(1, vec![1]).unwrap();
        let s = aggregate(&[instance_stats(&t)]).unwrap();
        let r = optimize_problem(&s, &OptConfig::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_summary_is_rejected() {
        let t = TargetSpace::new(3, vec![1]).unwrap();
        let mut s = aggregate(&[instance_stats(&t)]).unwrap();
        s.e_tsize = 0.0;
        assert!(matches!(
            optimize_problem(&s, &OptConfig::default()),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn json_shape() {
        let r = maximize(n1, &OptConfig::default()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        let mut keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(keys, ["beta", "evaluations", "gamma", "value"]);
    }
}
