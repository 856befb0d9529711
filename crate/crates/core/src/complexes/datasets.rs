//! Seeded synthetic inputs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` evenly spaced points on the unit circle.
pub fn circle(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            vec![t.cos(), t.sin()]
        })
        .collect()
}

/// `n` points drawn uniformly from the unit cube `[0, 1)^dim`.
pub fn uniform(n: usize, dim: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect())
        .collect()
}

/// Points in the unit square, meant to be paired with the torus metric.
pub fn torus(n: usize, seed: u64) -> Vec<Vec<f64>> {
    uniform(n, 2, seed)
}

/// Random dissimilarity: zero diagonal and independent uniform off-diagonal
/// entries, so every edge order is equally likely.
pub fn er(n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen::<f64>();
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    d
}

/// Smoothed white noise on a `side × side` grid, row-major.
pub fn grf2d(side: usize, seed: u64) -> Vec<f64> {
    smoothed_noise(&[side, side], seed)
}

/// Smoothed white noise on a `side³` grid, row-major.
pub fn grf3d(side: usize, seed: u64) -> Vec<f64> {
    smoothed_noise(&[side, side, side], seed)
}

/// White noise passed through a separable moving average of radius 2 with
/// periodic wrap along each axis.
fn smoothed_noise(dims: &[usize], seed: u64) -> Vec<f64> {
    const RADIUS: isize = 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total: usize = dims.iter().product();
    let mut field: Vec<f64> = (0..total).map(|_| rng.gen::<f64>() - 0.5).collect();
    for a in 0..dims.len() {
        let stride: usize = dims[a + 1..].iter().product();
        let len = dims[a] as isize;
        let mut out = vec![0.0; total];
        for (lin, slot) in out.iter_mut().enumerate() {
            let x = ((lin / stride) % dims[a]) as isize;
            let base = lin - x as usize * stride;
            *slot = (-RADIUS..=RADIUS)
                .map(|o| field[base + ((x + o).rem_euclid(len)) as usize * stride])
                .sum::<f64>()
                / (2 * RADIUS + 1) as f64;
        }
        field = out;
    }
    field
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        assert_eq!(uniform(5, 3, 9), uniform(5, 3, 9));
        assert_ne!(uniform(5, 3, 9), uniform(5, 3, 10));
        assert_eq!(grf3d(4, 1), grf3d(4, 1));
        assert_eq!(grf2d(6, 2).len(), 36);
        let d = er(6, 3);
        assert!((0..6).all(|i| d[i][i] == 0.0 && (0..6).all(|j| d[i][j] == d[j][i])));
    }
}
