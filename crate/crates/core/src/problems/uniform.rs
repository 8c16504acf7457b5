use rand::Rng;

use crate::error::{Error, Result};
use crate::space::{check_width, TargetSpace};

/// Draws `t_size` distinct states uniformly without replacement.
pub fn sample_uniform<R: Rng + ?Sized>(n: u32, t_size: usize, rng: &mut R) -> Result<TargetSpace> {
    check_width(n)?;
    let space = 1u64 << n;
    if t_size == 0 || t_size as u64 > space {
        return Err(Error::usage(format!(
            "t_size {t_size} outside 1..={space} for n = {n}"
        )));
    }
    if n > 24 && t_size as u64 > space / 2 {
        return Err(Error::usage("dense uniform sampling requires n <= 24"));
    }
    let states = rand::seq::index::sample(rng, space as usize, t_size)
        .into_iter()
        .map(|i| i as u32)
        .collect();
    TargetSpace::from_unsorted(n, states)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::rng::stream;
    use std::collections::HashMap;

    #[test]
    fn full_draw_is_the_whole_space() {
        let t = sample_uniform(3, 8, &mut stream(11, 0)).unwrap();
        assert_eq!(t.states(), &[0, 1, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn sizes_and_determinism() {
        let t = sample_uniform(8, 128, &mut stream(1, 0)).unwrap();
        assert_eq!(t.len(), 128);
        let a = sample_uniform(3, 2, &mut stream(5, 9)).unwrap();
        let b = sample_uniform(3, 2, &mut stream(5, 9)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(sample_uniform(3, 0, &mut stream(1, 0)).is_err());
        assert!(sample_uniform(3, 9, &mut stream(1, 0)).is_err());
    }

    #[test]
    fn subsets_are_uniform() {
        // 120 two-element subsets of 16 states; each should appear ~ N/120 times.
        let draws = 100_000;
        let mut rng = stream(2024, 0);
        let mut freq: HashMap<Vec<u32>, u64> = HashMap::new();
        for _ in 0..draws {
            let t = sample_uniform(4, 2, &mut rng).unwrap();
            *freq.entry(t.states().to_vec()).or_default() += 1;
        }
        assert_eq!(freq.len(), 120);
        let p = 1.0 / 120.0;
        let mean = draws as f64 * p;
        let sd = (draws as f64 * p * (1.0 - p)).sqrt();
        for (subset, &count) in &freq {
            assert!(
                (count as f64 - mean).abs() <= 4.0 * sd,
                "subset {subset:?} drawn {count} times, expected {mean:.1} +- {:.1}",
                4.0 * sd
            );
        }
    }
}
