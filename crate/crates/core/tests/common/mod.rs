//! Seeded random diagonal generator shared by the integration suites.
//! Breakpoints live on the 1/240 grid and values on the 1/3840 grid, so
//! every generated section is exactly representable and feasibility is a
//! closed-interval pick per step.

use copula_diag::{DiagonalSection, PiecewiseLinear, Rational};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const XDEN: i128 = 240;
const VDEN: i128 = 3840; // 16 * XDEN, keeps slope-2 endpoints on-grid

pub fn random_diagonal(seed: u64) -> DiagonalSection {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(1..=18usize);
    let mut xs: Vec<i128> = sample(&mut rng, (XDEN - 1) as usize, k)
        .into_iter()
        .map(|i| i as i128 + 1)
        .collect();
    xs.sort_unstable();
    xs.push(XDEN);

    // value numerators over VDEN; keep delta <= x, slopes in [0,2] and
    // (1,1) reachable: v in [max(prev, 2x-1), min(x, prev + 2*dx)]
    let mut pts = vec![(Rational::ZERO, Rational::ZERO)];
    let mut prev_x = 0i128;
    let mut prev_v = 0i128;
    for &x in &xs {
        let xv = x * (VDEN / XDEN);
        let v = if x == XDEN {
            VDEN
        } else {
            let lo = prev_v.max(2 * xv - VDEN).max(0);
            let hi = xv.min(prev_v + 2 * (xv - prev_x));
            rng.gen_range(lo..=hi)
        };
        pts.push((Rational::new(xv, VDEN), Rational::new(v, VDEN)));
        prev_x = xv;
        prev_v = v;
    }
    let pl = PiecewiseLinear::new(pts).expect("generator keeps points sorted");
    DiagonalSection::validate(pl).expect("generator respects the diagonal constraints")
}
