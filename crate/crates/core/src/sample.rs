//! Sampling from the copula U. All its mass lives on the two curves g_L and
//! g_U: conditionally on X = x the ordinate is g_L(x) with probability equal
//! to the right slope of f1 at x, and g_U(x) otherwise. The conditional law
//! is read off the partial derivative of U in x, which is 0 below g_L, the
//! f1 slope between the curves and 1 above g_U.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{DiagonalData, Evaluator};
use crate::diagonal::DiagonalSection;
use crate::geometry::g_curves;
use crate::rational::Rational;

const X_GRID_BITS: u32 = 30;

/// Seeded, reproducible sample of `count` pairs from U.
pub fn sample_u_delta(d: &DiagonalSection, count: usize, seed: u64) -> Vec<(f64, f64)> {
    let data = DiagonalData::new(d.clone());
    let (g_u, g_l) = g_curves(&data.fsplit);
    let f1 = data.fsplit.f1();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let denom: i128 = 1 << X_GRID_BITS;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let x = Rational::new(rng.gen_range(0..denom as u64) as i128, denom);
        let p = f1.right_slope(x).to_f64();
        let y = if rng.gen::<f64>() < p {
            g_l.eval(x)
        } else {
            g_u.eval(x)
        };
        out.push((x.to_f64(), y.to_f64()));
    }
    out
}

/// Sup distance between the empirical copula of the samples and an exact
/// evaluator on the uniform m-grid.
pub fn empirical_copula_sup_diff(samples: &[(f64, f64)], q: &Evaluator, m: usize) -> f64 {
    // 2D cumulative counts over the m x m cell grid
    let mut counts = vec![0u64; (m + 1) * (m + 1)];
    for &(x, y) in samples {
        let i = ((x * m as f64).ceil() as usize).min(m);
        let j = ((y * m as f64).ceil() as usize).min(m);
        counts[i * (m + 1) + j] += 1;
    }
    for i in 0..=m {
        for j in 1..=m {
            counts[i * (m + 1) + j] += counts[i * (m + 1) + j - 1];
        }
    }
    for j in 0..=m {
        for i in 1..=m {
            counts[i * (m + 1) + j] += counts[(i - 1) * (m + 1) + j];
        }
    }
    let n = samples.len() as f64;
    let mut worst = 0.0f64;
    for i in 0..=m as i128 {
        for j in 0..=m as i128 {
            let emp = counts[i as usize * (m + 1) + j as usize] as f64 / n;
            let exact = q
                .eval(
                    Rational::new(i, m as i128),
                    Rational::new(j, m as i128),
                )
                .to_f64();
            worst = worst.max((emp - exact).abs());
        }
    }
    worst
}

/// CSV export of samples, `x,y` per line, fixed 17-digit formatting so the
/// bytes are reproducible.
pub fn samples_csv(samples: &[(f64, f64)]) -> String {
    let mut out = String::from("x,y\n");
    for &(x, y) in samples {
        out.push_str(&format!("{x:.17},{y:.17}\n"));
    }
    out
}
