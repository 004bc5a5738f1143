//! Deterministic sample points on the r-torus for sup-norm and determinant checks.
//!
//! Rank 1 uses the uniform grid `2*pi*(i + seed)/n`. Higher ranks use the
//! additive recurrence with the generalized golden ratio (Roberts sequence),
//! started at index `seed`; index 0 is the origin.

use std::f64::consts::TAU;

/// Unique positive root of `x^(d+1) = x + 1`.
fn generalized_golden(d: usize) -> f64 {
    let mut x: f64 = 2.0;
    for _ in 0..64 {
        x = (1.0 + x).powf(1.0 / (d as f64 + 1.0));
    }
    x
}

/// `n` points of `[0, 2pi)^r`. Rank 0 yields a single empty point.
pub fn torus_grid(r: usize, n: usize, seed: u64) -> Vec<Vec<f64>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    if r == 1 {
        return (0..n)
            .map(|i| {
                let k = (i as u64 + seed) % n as u64;
                vec![TAU * k as f64 / n as f64]
            })
            .collect();
    }
    let g = generalized_golden(r);
    let alpha: Vec<f64> = (1..=r).map(|j| g.powi(-(j as i32))).collect();
    (0..n as u64)
        .map(|i| {
            let idx = (i + seed) as f64;
            alpha.iter().map(|a| TAU * (idx * a).fract()).collect()
        })
        .collect()
}

/// `n` equally spaced points on the unit circle, starting at 1.
pub fn circle_points(n: usize) -> Vec<num_complex::Complex64> {
    (0..n)
        .map(|i| num_complex::Complex64::from_polar(1.0, TAU * i as f64 / n as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_ratio_rank_one() {
        assert!((generalized_golden(1) - 1.618_033_988_749_895).abs() < 1e-12);
    }

    #[test]
    fn grid_is_deterministic_and_in_range() {
        let a = torus_grid(3, 100, 7);
        assert_eq!(a, torus_grid(3, 100, 7));
        assert!(a.iter().flatten().all(|t| (0.0..TAU).contains(t)));
        assert_eq!(torus_grid(2, 5, 0)[0], vec![0.0, 0.0]);
        assert_eq!(torus_grid(0, 5, 0).len(), 1);
    }
}
