use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::space::{AngleGrid, Angles};

/// Landscape values sampled on an [`AngleGrid`], row-major with beta outer.
#[derive(Clone, Debug, PartialEq)]
pub struct LandscapeGrid {
    pub grid: AngleGrid,
    pub values: Vec<f64>,
    /// Across-instance standard deviation per point, when the values are means.
    pub stddev: Option<Vec<f64>>,
}

impl LandscapeGrid {
    pub fn new(grid: AngleGrid, values: Vec<f64>, stddev: Option<Vec<f64>>) -> Result<Self> {
        grid.validate()?;
        if values.len() != grid.len() || stddev.as_ref().is_some_and(|s| s.len() != grid.len()) {
            return Err(Error::usage(format!(
                "grid has {} points but {} values were supplied",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self {
            grid,
            values,
            stddev,
        })
    }

    pub fn value_at(&self, beta_idx: usize, gamma_idx: usize) -> f64 {
        self.values[beta_idx * self.grid.gamma_steps + gamma_idx]
    }

    /// Index and angles of the largest value; ties go to the lowest index.
    pub fn argmax(&self) -> (usize, Angles) {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = i;
            }
        }
        (best, self.grid.point(best))
    }
}

/// Applies `evaluator` at every lattice point; rows run in parallel.
pub fn eval_grid<F>(evaluator: F, grid: &AngleGrid) -> Result<LandscapeGrid>
where
    F: Fn(Angles) -> Result<f64> + Sync,
{
    grid.validate()?;
    let rows = (0..grid.beta_steps)
        .into_par_iter()
        .map(|i| {
            let beta = grid.beta_at(i);
            (0..grid.gamma_steps)
                .map(|j| {
                    let gamma = grid.gamma_at(j);
                    evaluator(Angles::new(beta, gamma)).map_err(|e| e.at_point(beta, gamma))
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    LandscapeGrid::new(*grid, rows.concat(), None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscape::InstanceLandscape;
    use crate::space::TargetSpace;

    #[test]
    fn single_point_grid() {
        let g = AngleGrid::new((0.5, 1.0), (2.0, 3.0), 1, 1).unwrap();
        let out = eval_grid(|a| Ok(a.beta * 10.0 + a.gamma), &g).unwrap();
        assert_eq!(out.values, vec![7.0]);
    }

    #[test]
    fn row_major_order() {
        let g = AngleGrid::new((0.0, 1.0), (0.0, 2.0), 2, 3).unwrap();
        let out = eval_grid(|a| Ok(a.beta * 10.0 + a.gamma), &g).unwrap();
        assert_eq!(out.values, vec![0.0, 1.0, 2.0, 10.0, 11.0, 12.0]);
        assert_eq!(out.value_at(1, 2), 12.0);
        assert_eq!(out.argmax().0, 5);
    }

    #[test]
    fn first_row_is_flat() {
        let t = TargetSpace::new(6, vec![3, 9, 27, 44]).unwrap();
        let l = InstanceLandscape::new(&t);
        let g = AngleGrid::landscape(10, 17).unwrap();
        let out = eval_grid(|a| Ok(l.f1(a.beta, a.gamma)), &g).unwrap();
        for j in 0..17 {
            assert!((out.value_at(0, j) - 4.0 / 64.0).abs() < 1e-12);
        }
    }

    #[test]
    fn errors_carry_coordinates() {
        let g = AngleGrid::new((0.0, 1.0), (0.0, 1.0), 2, 2).unwrap();
        let err = eval_grid(
            |a| {
                if a.beta > 0.5 && a.gamma > 0.5 {
                    Err(Error::Computation("boom".into()))
                } else {
                    Ok(0.0)
                }
            },
            &g,
        )
        .unwrap_err();
        assert!(
            matches!(err, Error::Computation(ref m) if m.contains("beta=1") && m.contains("boom"))
        );
    }
}
