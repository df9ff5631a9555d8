//! Brute-force oracles: copula axioms on grids, grid asymmetry, the order
//! chain, the two equality characterizations and a float lower bound on the
//! maximal asymmetry. Everything here is deliberately independent of the
//! analytic curve machinery.

use crate::bounds::{BoundFamily, DiagonalData, Evaluator};
use crate::diagonal::DiagonalSection;
use crate::rational::Rational;

/// Uniform n-grid refined with the diagonal's breakpoints, so that no
/// piecewise-linear kink is straddled by a cell.
pub fn refined_grid(d: &DiagonalSection, n: usize) -> Vec<Rational> {
    let mut xs: Vec<Rational> = (0..=n as i128)
        .map(|i| Rational::new(i, n as i128))
        .collect();
    xs.extend(d.pl().xs());
    xs.sort();
    xs.dedup();
    xs
}

#[derive(Clone, Debug)]
pub struct GridReport {
    pub n: usize,
    pub grounded_ok: bool,
    pub marginals_ok: bool,
    pub lipschitz_ok: bool,
    pub min_volume: f64,
    pub min_volume_exact: Rational,
    pub worst_rectangle: ((Rational, Rational), (Rational, Rational)),
    pub is_copula_on_grid: bool,
}

impl GridReport {
    pub fn to_text(&self) -> String {
        format!(
            "n = {}\ngrounded = {}\nmarginals = {}\nlipschitz = {}\nmin_volume = {} ({:.3e})\nworst_rectangle = [{}, {}] x [{}, {}]\nis_copula_on_grid = {}\n",
            self.n,
            self.grounded_ok,
            self.marginals_ok,
            self.lipschitz_ok,
            self.min_volume_exact,
            self.min_volume,
            self.worst_rectangle.0 .0,
            self.worst_rectangle.1 .0,
            self.worst_rectangle.0 .1,
            self.worst_rectangle.1 .1,
            self.is_copula_on_grid
        )
    }
}

const FLOAT_TOL: f64 = 1e-12;

/// Grounded, uniform marginals, 1-Lipschitz in each variable and
/// 2-increasing on adjacent cells (additivity makes adjacent cells
/// sufficient). Exact mode demands min_volume >= 0; float mode allows
/// the rounding tolerance.
pub fn check_copula_grid(q: &Evaluator, n: usize, exact: bool) -> GridReport {
    assert!(n >= 2);
    let xs = refined_grid(q.diagonal(), n);
    let m = q.grid_matrix(&xs);
    let k = xs.len();

    let mut grounded_ok = true;
    let mut marginals_ok = true;
    for i in 0..k {
        grounded_ok &= m.at(0, i).is_zero() && m.at(i, 0).is_zero();
        marginals_ok &= m.at(i, k - 1) == xs[i] && m.at(k - 1, i) == xs[i];
    }

    let mut lipschitz_ok = true;
    for i in 0..k - 1 {
        let dx = xs[i + 1] - xs[i];
        for j in 0..k {
            let dh = m.at(i + 1, j) - m.at(i, j);
            let dv = m.at(j, i + 1) - m.at(j, i);
            lipschitz_ok &= Rational::ZERO <= dh && dh <= dx;
            lipschitz_ok &= Rational::ZERO <= dv && dv <= dx;
        }
    }

    let mut min_volume = Rational::ZERO;
    let mut worst = ((xs[0], xs[0]), (xs[1], xs[1]));
    for i in 0..k - 1 {
        for j in 0..k - 1 {
            let v = m.at(i + 1, j + 1) + m.at(i, j) - m.at(i + 1, j) - m.at(i, j + 1);
            if v < min_volume {
                min_volume = v;
                worst = ((xs[i], xs[j]), (xs[i + 1], xs[j + 1]));
            }
        }
    }

    let vol_ok = if exact {
        min_volume >= Rational::ZERO
    } else {
        min_volume.to_f64() >= -FLOAT_TOL
    };
    GridReport {
        n,
        grounded_ok,
        marginals_ok,
        lipschitz_ok,
        min_volume: min_volume.to_f64(),
        min_volume_exact: min_volume,
        worst_rectangle: worst,
        is_copula_on_grid: grounded_ok && marginals_ok && lipschitz_ok && vol_ok,
    }
}

/// Exact max of |q(x,y) - q(y,x)| over the uniform n-grid, with the
/// lexicographically smallest argmax.
pub fn asymmetry_grid(q: &Evaluator, n: usize) -> (Rational, (Rational, Rational)) {
    let xs: Vec<Rational> = (0..=n as i128)
        .map(|i| Rational::new(i, n as i128))
        .collect();
    let m = q.grid_matrix(&xs);
    let mut best = Rational::ZERO;
    let mut arg = (Rational::ZERO, Rational::ZERO);
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let v = (m.at(i, j) - m.at(j, i)).abs();
            if v > best {
                best = v;
                arg = (xs[i], xs[j]);
            }
        }
    }
    (best, arg)
}

/// B <= K <= exact upper bound <= A <= min, and >= the lower Frechet bound,
/// at every point of the refined grid.
pub fn order_chain_check(family: &BoundFamily, n: usize) -> bool {
    let xs = refined_grid(family.cbar.diagonal(), n);
    let (mb, mk) = (family.bertino.grid_matrix(&xs), family.k.grid_matrix(&xs));
    let (mc, ma) = (family.cbar.grid_matrix(&xs), family.a.grid_matrix(&xs));
    for i in 0..xs.len() {
        for j in 0..xs.len() {
            let upper = xs[i].min(xs[j]);
            let lower = (xs[i] + xs[j] - Rational::ONE).max(Rational::ZERO);
            let chain = lower <= mb.at(i, j)
                && mb.at(i, j) <= mk.at(i, j)
                && mk.at(i, j) <= mc.at(i, j)
                && mc.at(i, j) <= ma.at(i, j)
                && ma.at(i, j) <= upper;
            if !chain {
                return false;
            }
        }
    }
    true
}

/// Exact predicate for "the upper bound is the copula K": every segment
/// meeting the open set {delta < id} must have slope 0 or 2.
pub fn cbar_equals_k(d: &DiagonalSection) -> bool {
    let pts = d.pl().points();
    let two = Rational::from_int(2);
    for i in 0..d.pl().num_segments() {
        let touches_lambda = pts[i].1 < pts[i].0 || pts[i + 1].1 < pts[i + 1].0;
        if touches_lambda {
            let s = d.pl().slope(i);
            if s != Rational::ZERO && s != two {
                return false;
            }
        }
    }
    true
}

/// Exact predicate for "the upper bound is the quasi-copula A": for every
/// descending hat segment left of an ascending one, the gap condition
/// y - x >= max{hat(x), hat(y)} must hold; concavity reduces each segment
/// pair to its four corners.
pub fn cbar_equals_a(d: &DiagonalSection) -> bool {
    let data = DiagonalData::new(d.clone());
    let hat = data.hat.pl();
    let pts = hat.points();
    let descending: Vec<usize> = (0..hat.num_segments())
        .filter(|&i| hat.slope(i) < Rational::ZERO)
        .collect();
    let ascending: Vec<usize> = (0..hat.num_segments())
        .filter(|&i| hat.slope(i) > Rational::ZERO)
        .collect();
    for &i in &descending {
        for &j in ascending.iter().filter(|&&j| j > i) {
            for &(x, hx) in &pts[i..=i + 1] {
                for &(y, hy) in &pts[j..=j + 1] {
                    if y - x < hx.max(hy) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Exact sup of |q1 - q2| over the uniform n-grid refined with both
/// diagonals' breakpoints.
pub fn sup_diff_on_grid(q1: &Evaluator, q2: &Evaluator, n: usize) -> Rational {
    let mut xs = refined_grid(q1.diagonal(), n);
    xs.extend(q2.diagonal().pl().xs());
    xs.sort();
    xs.dedup();
    let (m1, m2) = (q1.grid_matrix(&xs), q2.grid_matrix(&xs));
    let mut best = Rational::ZERO;
    for i in 0..xs.len() {
        for j in 0..xs.len() {
            best = best.max((m1.at(i, j) - m2.at(i, j)).abs());
        }
    }
    best
}

/// Float lower bound on the maximal asymmetry: max over grid pairs x <= y
/// of (upper bound - Bertino). Within 2/n of the true value since both
/// functions are 1-Lipschitz in each variable.
pub fn mu_bruteforce(data: &DiagonalData, n: usize) -> f64 {
    let xs_r: Vec<Rational> = (0..=n as i128)
        .map(|i| Rational::new(i, n as i128))
        .collect();
    let xs: Vec<f64> = xs_r.iter().map(|x| x.to_f64()).collect();
    let f1: Vec<f64> = xs_r
        .iter()
        .map(|&x| data.fsplit.f1().eval(x).to_f64())
        .collect();
    let f2: Vec<f64> = xs_r
        .iter()
        .map(|&x| data.fsplit.f2().eval(x).to_f64())
        .collect();
    let hat_pts: Vec<(f64, f64)> = data
        .hat
        .pl()
        .points()
        .iter()
        .map(|&(x, v)| (x.to_f64(), v.to_f64()))
        .collect();
    let hat_grid: Vec<f64> = xs_r.iter().map(|&x| data.hat.eval(x).to_f64()).collect();

    let mut best = 0.0f64;
    for i in 0..=n {
        let mut run_min = hat_grid[i];
        let mut k = hat_pts.partition_point(|p| p.0 <= xs[i]);
        for j in i..=n {
            while k < hat_pts.len() && hat_pts[k].0 < xs[j] {
                run_min = run_min.min(hat_pts[k].1);
                k += 1;
            }
            run_min = run_min.min(hat_grid[j]);
            let cbar = xs[i].min(f1[i] + f2[j]);
            let b = xs[i] - run_min;
            best = best.max(cbar - b);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{a_quasi, bertino, cbar, k_copula, splice, transpose, u_delta};
    use crate::curated;
    use crate::rational::rat;

    #[test]
    fn u_delta_is_copula_on_grid() {
        for d in [
            curated::m_diagonal(),
            curated::w_diagonal(),
            curated::plateau(),
            curated::ex_kca(),
            curated::ex412(),
            curated::x_squared_chords(32),
        ] {
            let data = DiagonalData::new(d);
            for q in [
                u_delta(&data),
                bertino(&data),
                k_copula(&data),
                splice(cbar(&data), bertino(&data)).unwrap(),
            ] {
                let r = check_copula_grid(&q, 64, true);
                assert!(r.is_copula_on_grid, "{} failed:\n{}", q.label(), r.to_text());
                assert!(r.min_volume_exact.is_zero());
            }
        }
    }

    #[test]
    fn a_quasi_fails_two_increasing_for_kca() {
        let data = DiagonalData::new(curated::ex_kca());
        let r = check_copula_grid(&a_quasi(&data), 64, true);
        assert!(r.grounded_ok && r.marginals_ok && r.lipschitz_ok);
        assert!(r.min_volume_exact < Rational::ZERO);
        assert!(!r.is_copula_on_grid);
    }

    #[test]
    fn asymmetry_grid_values() {
        let data = DiagonalData::new(curated::ex412());
        let q = splice(cbar(&data), bertino(&data)).unwrap();
        let (v, arg) = asymmetry_grid(&q, 80);
        assert_eq!(v, rat(13, 80));
        assert_eq!(arg, (rat(13, 80), rat(11, 20)));

        let (v, _) = asymmetry_grid(&cbar(&data), 40);
        assert!(v.is_zero());

        let (v, _) = asymmetry_grid(&transpose(u_delta(&data)), 80);
        assert!(v <= rat(1, 3));
    }

    #[test]
    fn order_chain_on_curated() {
        for d in [
            curated::m_diagonal(),
            curated::w_diagonal(),
            curated::plateau(),
            curated::ex_kca(),
            curated::ex412(),
            curated::x_squared_chords(32),
        ] {
            let family = BoundFamily::new(&DiagonalData::new(d));
            assert!(order_chain_check(&family, 64));
        }
    }

    #[test]
    fn equals_k_predicate() {
        assert!(cbar_equals_k(&curated::m_diagonal()));
        assert!(cbar_equals_k(&curated::plateau()));
        assert!(cbar_equals_k(&curated::w_diagonal()));
        assert!(!cbar_equals_k(&curated::x_squared_chords(16)));
        assert!(!cbar_equals_k(&curated::ex_kca()));
        // slopes of this one are 0 or 2 throughout, so equality holds
        assert!(cbar_equals_k(&curated::ex412()));
        let dn = curated::dhat_n_base().zigzag_perturb(10).unwrap();
        assert!(cbar_equals_k(&dn));
    }

    #[test]
    fn equals_a_predicate() {
        assert!(cbar_equals_a(&curated::m_diagonal()));
        assert!(cbar_equals_a(&curated::w_diagonal()));
        assert!(cbar_equals_a(&curated::x_squared_chords(16)));
        assert!(!cbar_equals_a(&curated::ex_kca()));
        assert!(!cbar_equals_a(&curated::ex412()));
        // lying rectangle: the flat hat section is wider than tall
        let d = DiagonalSection::from_diag_str(
            "0 0\n1/8 0\n5/8 1/2\n3/4 1/2\n1 1\n",
            "lying",
        )
        .unwrap();
        assert!(cbar_equals_a(&d));
        // upright rectangle: taller than wide
        let d = DiagonalSection::from_diag_str(
            "0 0\n3/8 0\n1/2 1/4\n5/8 1/4\n1 1\n",
            "upright",
        )
        .unwrap();
        assert!(!cbar_equals_a(&d));
    }

    #[test]
    fn predicates_match_grid_sup() {
        for d in [
            curated::m_diagonal(),
            curated::w_diagonal(),
            curated::plateau(),
            curated::ex_kca(),
            curated::ex412(),
            curated::x_squared_chords(16),
            curated::dhat_n_base().zigzag_perturb(5).unwrap(),
        ] {
            let data = DiagonalData::new(d.clone());
            let sup_k = sup_diff_on_grid(&cbar(&data), &k_copula(&data), 64);
            assert_eq!(cbar_equals_k(&d), sup_k.is_zero(), "{}", d.provenance());
            let sup_a = sup_diff_on_grid(&cbar(&data), &a_quasi(&data), 64);
            assert_eq!(cbar_equals_a(&d), sup_a.is_zero(), "{}", d.provenance());
        }
    }

    #[test]
    fn bruteforce_examples() {
        let data = DiagonalData::new(curated::ex412());
        let v = mu_bruteforce(&data, 800);
        assert!((v - 0.1625).abs() < 1e-12);

        let data = DiagonalData::new(curated::m_diagonal());
        assert_eq!(mu_bruteforce(&data, 128), 0.0);

        let data = DiagonalData::new(curated::x_squared_chords(1024));
        let v = mu_bruteforce(&data, 1024);
        let exact = 15.0 / 64.0;
        assert!(v <= exact + 1e-12 && v >= exact - 2.0 / 1024.0);
    }
}
