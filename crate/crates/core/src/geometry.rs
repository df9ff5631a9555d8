//! Plane geometry behind the bounds: the curve h and its vertical closure H,
//! the region boundary curves g_U and g_L, and point classification into
//! the regions of the unit square.

use crate::bounds::FSplit;
use crate::diagonal::DeltaHat;
use crate::error::{Error, Result};
use crate::pl::PiecewiseLinear;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Continuity {
    RightContinuous,
    LeftContinuous,
    UpperSemicontinuous,
}

/// A piecewise-affine curve over [0,1] that may jump at its cut points.
/// Values at cuts are stored explicitly; open intervals between cuts carry
/// affine pieces `x -> a + b x`.
#[derive(Clone, Debug)]
pub struct StepCurve {
    cuts: Vec<Rational>,
    at: Vec<Rational>,
    pieces: Vec<(Rational, Rational)>,
    continuity: Continuity,
}

impl StepCurve {
    /// Build from a pointwise oracle that is affine between consecutive cuts.
    /// The cut list must make that true; a midpoint probe asserts it in
    /// debug builds.
    pub fn from_pointwise(
        mut cuts: Vec<Rational>,
        continuity: Continuity,
        f: impl Fn(Rational) -> Rational,
    ) -> StepCurve {
        cuts.retain(|c| c.in_unit_interval());
        cuts.push(Rational::ZERO);
        cuts.push(Rational::ONE);
        cuts.sort();
        cuts.dedup();
        let at: Vec<Rational> = cuts.iter().map(|&c| f(c)).collect();
        let third = Rational::new(1, 3);
        let mut pieces = Vec::with_capacity(cuts.len() - 1);
        for w in cuts.windows(2) {
            let step = (w[1] - w[0]) * third;
            let p = w[0] + step;
            let q = w[1] - step;
            let (fp, fq) = (f(p), f(q));
            let b = (fq - fp) / (q - p);
            let a = fp - b * p;
            debug_assert_eq!(
                f(w[0] + step + step.half()),
                a + b * (w[0] + step + step.half()),
                "curve is not affine on ({}, {})",
                w[0],
                w[1]
            );
            pieces.push((a, b));
        }
        StepCurve {
            cuts,
            at,
            pieces,
            continuity,
        }
    }

    pub fn cuts(&self) -> &[Rational] {
        &self.cuts
    }

    pub fn value_at_cut(&self, i: usize) -> Rational {
        self.at[i]
    }

    pub fn num_pieces(&self) -> usize {
        self.pieces.len()
    }

    /// Affine coefficients (a, b) on the open interval (cuts[i], cuts[i+1]).
    pub fn piece(&self, i: usize) -> (Rational, Rational) {
        self.pieces[i]
    }

    pub fn continuity(&self) -> Continuity {
        self.continuity
    }

    pub fn eval(&self, x: Rational) -> Rational {
        debug_assert!(x.in_unit_interval());
        let i = self.cuts.partition_point(|&c| c <= x);
        if i > 0 && self.cuts[i - 1] == x {
            return self.at[i - 1];
        }
        let (a, b) = self.pieces[i - 1];
        a + b * x
    }

    /// Limit from the left at cut index `i >= 1`.
    pub fn left_limit(&self, i: usize) -> Rational {
        let (a, b) = self.pieces[i - 1];
        a + b * self.cuts[i]
    }

    /// Limit from the right at cut index `i < cuts.len() - 1`.
    pub fn right_limit(&self, i: usize) -> Rational {
        let (a, b) = self.pieces[i];
        a + b * self.cuts[i]
    }

    /// Interior cuts where the one-sided limits differ: (x, left, right).
    pub fn jumps(&self) -> Vec<(Rational, Rational, Rational)> {
        let mut out = Vec::new();
        for i in 1..self.cuts.len() - 1 {
            let l = self.left_limit(i);
            let r = self.right_limit(i);
            if l != r {
                out.push((self.cuts[i], l, r));
            }
        }
        out
    }
}

/// Pointwise h: the largest y >= x with the hat staying at or above
/// hat(x) on the whole of [x, y]. Affine per segment, so the first strict
/// dip below the level is an exact crossing.
pub fn h_point(dh: &DeltaHat, x: Rational) -> Rational {
    let c = dh.eval(x);
    let pts = dh.pl().points();
    let mut i = dh.pl().segment_index(x);
    while i + 1 < pts.len() {
        let (x0, v0) = pts[i];
        let (x1, v1) = pts[i + 1];
        if x1 > x && v1 < c {
            // the segment line hits level c at a unique point right of x
            let s = (v1 - v0) / (x1 - x0);
            return x0 + (c - v0) / s;
        }
        i += 1;
    }
    Rational::ONE
}

/// Preimages of the given values on strictly increasing segments of `f`.
fn ascending_preimages(f: &PiecewiseLinear, values: &[Rational]) -> Vec<Rational> {
    let pts = f.points();
    let mut out = Vec::new();
    for i in 0..f.num_segments() {
        let (x0, v0) = pts[i];
        let (x1, v1) = pts[i + 1];
        if v1 <= v0 {
            continue;
        }
        let s = (v1 - v0) / (x1 - x0);
        for &v in values {
            if v0 < v && v < v1 {
                out.push(x0 + (v - v0) / s);
            }
        }
    }
    out
}

pub fn h_curve(dh: &DeltaHat) -> StepCurve {
    let values: Vec<Rational> = dh.pl().points().iter().map(|p| p.1).collect();
    let mut cuts: Vec<Rational> = dh.pl().xs().collect();
    cuts.extend(ascending_preimages(dh.pl(), &values));
    StepCurve::from_pointwise(cuts, Continuity::UpperSemicontinuous, |x| h_point(dh, x))
}

/// Verticals closing the graph of h at its jumps: (x, y_low, y_high) with
/// the range spanned by the two one-sided limits.
pub fn h_jumps(curve: &StepCurve) -> Vec<(Rational, Rational, Rational)> {
    curve
        .jumps()
        .into_iter()
        .map(|(x, l, r)| (x, l.min(r), l.max(r)))
        .collect()
}

/// The graph of h together with the vertical sections at its jumps.
#[derive(Clone, Debug)]
pub struct HSet {
    pub curve: StepCurve,
    pub verticals: Vec<(Rational, Rational, Rational)>,
}

impl HSet {
    pub fn new(dh: &DeltaHat) -> HSet {
        let curve = h_curve(dh);
        let verticals = h_jumps(&curve);
        HSet { curve, verticals }
    }

    pub fn contains(&self, x: Rational, y: Rational) -> bool {
        if self.curve.eval(x) == y {
            return true;
        }
        self.verticals
            .iter()
            .any(|&(vx, lo, hi)| vx == x && lo <= y && y <= hi)
    }
}

fn complement(f: &PiecewiseLinear) -> PiecewiseLinear {
    PiecewiseLinear::new(f.points().iter().map(|&(x, v)| (x, x - v)).collect())
        .expect("same grid")
}

/// Pointwise g_U with explicit f-split companions; see `g_curves` for the
/// closure logic. `psi1 = id - f1`.
fn g_upper_with(psi1: &PiecewiseLinear, f2: &PiecewiseLinear, x: Rational) -> Rational {
    let c = psi1.eval(x);
    let y_star = f2.last_at_or_below(c);
    if y_star <= x {
        return x;
    }
    // (x, y) with f2(y) = c belongs to the closure of the strict region iff
    // there are strict points arbitrarily close: either f2 rises into y from
    // the left, or psi1 rises out of x to the right.
    let closure_ok = f2.eval(y_star) < c
        || f2.left_slope(y_star) > Rational::ZERO
        || psi1.right_slope(x) > Rational::ZERO;
    if closure_ok {
        y_star
    } else {
        x.max(f2.first_at_or_above(c))
    }
}

fn g_lower_with(f1: &PiecewiseLinear, psi2: &PiecewiseLinear, x: Rational) -> Rational {
    let c = f1.eval(x);
    let y0 = psi2.first_at_or_above(c);
    if y0 >= x {
        return x;
    }
    let closure_ok = psi2.eval(y0) > c
        || f1.left_slope(x) > Rational::ZERO
        || psi2.right_slope(y0) > Rational::ZERO;
    if closure_ok {
        y0
    } else {
        x.min(psi2.last_at_or_below(c))
    }
}

pub fn g_upper_point(fs: &FSplit, x: Rational) -> Rational {
    g_upper_with(&complement(fs.f1()), fs.f2(), x)
}

pub fn g_lower_point(fs: &FSplit, x: Rational) -> Rational {
    g_lower_with(fs.f1(), &complement(fs.f2()), x)
}

/// The exact boundary curves of the region D_f: for each x the largest and
/// smallest y with (x, y) in D_f. g_U is increasing and right-continuous,
/// g_L increasing and left-continuous.
pub fn g_curves(fs: &FSplit) -> (StepCurve, StepCurve) {
    let psi1 = complement(fs.f1());
    let psi2 = complement(fs.f2());

    let f2_values: Vec<Rational> = fs.f2().points().iter().map(|p| p.1).collect();
    let mut ucuts: Vec<Rational> = psi1.xs().collect();
    ucuts.extend(ascending_preimages(&psi1, &f2_values));
    let g_u = StepCurve::from_pointwise(ucuts, Continuity::RightContinuous, |x| {
        g_upper_with(&psi1, fs.f2(), x)
    });

    let psi2_values: Vec<Rational> = psi2.points().iter().map(|p| p.1).collect();
    let mut lcuts: Vec<Rational> = fs.f1().xs().collect();
    lcuts.extend(ascending_preimages(fs.f1(), &psi2_values));
    let g_l = StepCurve::from_pointwise(lcuts, Continuity::LeftContinuous, |x| {
        g_lower_with(fs.f1(), &psi2, x)
    });

    (g_u, g_l)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionLabel {
    InteriorDf,
    Dx,
    Dy,
    BoundaryUpper,
    BoundaryLower,
    Diagonal,
}

pub fn classify_point(
    g_u: &StepCurve,
    g_l: &StepCurve,
    x: Rational,
    y: Rational,
) -> Result<RegionLabel> {
    for t in [x, y] {
        if !t.in_unit_interval() {
            return Err(Error::OutOfDomain(t));
        }
    }
    Ok(if x == y {
        RegionLabel::Diagonal
    } else if y > x {
        let gu = g_u.eval(x);
        if y < gu {
            RegionLabel::InteriorDf
        } else if y == gu {
            RegionLabel::BoundaryUpper
        } else {
            RegionLabel::Dx
        }
    } else {
        let gl = g_l.eval(x);
        if y > gl {
            RegionLabel::InteriorDf
        } else if y == gl {
            RegionLabel::BoundaryLower
        } else {
            RegionLabel::Dy
        }
    })
}

/// CSV export of the three curves: one row per piece endpoint plus one row
/// per vertical, `kind,x,y_low,y_high`.
pub fn curves_csv(g_u: &StepCurve, g_l: &StepCurve, h: &HSet) -> String {
    let mut out = String::from("kind,x,y_low,y_high\n");
    let mut dump = |kind: &str, c: &StepCurve| {
        for i in 0..c.num_pieces() {
            let y0 = c.right_limit(i);
            let y1 = c.left_limit(i + 1);
            out.push_str(&format!("{kind},{},{y0},{y0}\n", c.cuts()[i]));
            out.push_str(&format!("{kind},{},{y1},{y1}\n", c.cuts()[i + 1]));
        }
    };
    dump("gU", g_u);
    dump("gL", g_l);
    dump("h", &h.curve);
    for &(x, lo, hi) in &h.verticals {
        out.push_str(&format!("vertical,{x},{lo},{hi}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::DiagonalData;
    use crate::curated;
    use crate::rational::rat;

    fn hat(d: crate::diagonal::DiagonalSection) -> DeltaHat {
        DeltaHat::new(&d)
    }

    #[test]
    fn h_identity_diagonal_is_one() {
        let dh = hat(curated::m_diagonal());
        let c = h_curve(&dh);
        for i in 0..=16i128 {
            assert_eq!(c.eval(rat(i, 16)), Rational::ONE);
        }
        assert!(h_jumps(&c).is_empty());
    }

    #[test]
    fn h_ex412_matches_table() {
        let dh = hat(curated::ex412());
        let c = h_curve(&dh);
        assert_eq!(h_point(&dh, rat(13, 80)), rat(67, 80));
        assert_eq!(c.eval(rat(13, 80)), rat(67, 80));
        assert_eq!(c.eval(rat(1, 10)), rat(9, 10)); // 1 - x branch
        assert_eq!(c.eval(rat(1, 5)), rat(11, 20) - rat(1, 5)); // 11/20 - x
        assert_eq!(c.eval(rat(7, 20)), rat(7, 20)); // identity branch
        assert_eq!(c.eval(rat(9, 20)), rat(11, 20)); // 1 - x again
        assert_eq!(c.eval(rat(13, 20)), rat(29, 20) - rat(13, 20)); // 29/20 - x
        assert_eq!(c.eval(rat(9, 10)), rat(9, 10));

        let js = h_jumps(&c);
        assert_eq!(
            js,
            vec![
                (rat(13, 80), rat(31, 80), rat(67, 80)),
                (rat(31, 80), rat(31, 80), rat(49, 80)),
                (rat(49, 80), rat(49, 80), rat(67, 80)),
            ]
        );
    }

    #[test]
    fn h_x_squared_is_reflection() {
        let dh = hat(curated::x_squared_chords(64));
        let c = h_curve(&dh);
        for i in 0..=32i128 {
            let x = rat(i, 64);
            assert_eq!(c.eval(x), Rational::ONE - x);
        }
        for i in 33..=64i128 {
            let x = rat(i, 64);
            assert_eq!(c.eval(x), x);
        }
    }

    #[test]
    fn h_fixed_point_and_level_identities() {
        for d in [
            curated::w_diagonal(),
            curated::plateau(),
            curated::ex_kca(),
            curated::ex412(),
        ] {
            let dh = hat(d);
            let c = h_curve(&dh);
            for i in 0..=200i128 {
                let x = rat(i, 200);
                let hx = c.eval(x);
                assert!(hx >= x);
                assert_eq!(dh.eval(hx), dh.eval(x), "level identity at {x}");
                assert_eq!(h_point(&dh, hx), hx, "idempotence at {x}");
            }
            // upper semicontinuity: value at a jump dominates both limits
            for (x, lo, hi) in h_jumps(&c) {
                assert!(lo <= hi);
                assert!(c.eval(x) >= hi);
            }
        }
    }

    #[test]
    fn g_curves_curated_values() {
        let dd = DiagonalData::new(curated::ex412());
        let (gu, _gl) = g_curves(&dd.fsplit);
        assert_eq!(gu.eval(rat(13, 80)), rat(11, 20));
        // full table from the worked example
        let table: &[(i128, i128, i128, i128)] = &[
            (1, 16, 1, 16),   // x + 11/40 on [0, 9/80): 1/16 -> 1/16 + 11/40
            (31, 80, 62, 80), // constant/x+31/80 boundary: g(31/80) = 62/80
            (9, 20, 9, 20),
            (1, 2, 71, 80),
            (13, 20, 13, 20),
            (15, 16, 15, 16),
        ];
        // spot checks per branch
        assert_eq!(gu.eval(rat(1, 16)), rat(1, 16) + rat(11, 40));
        assert_eq!(gu.eval(rat(3, 16)), rat(3, 16) + rat(31, 80));
        assert_eq!(gu.eval(rat(1, 4)), rat(1, 4) + rat(1, 2));
        assert_eq!(gu.eval(rat(3, 10)), rat(31, 40));
        assert_eq!(gu.eval(rat(31, 80)), rat(62, 80));
        assert_eq!(gu.eval(rat(9, 20)), rat(9, 20) + rat(31, 80));
        assert_eq!(gu.eval(rat(1, 2)), rat(71, 80));
        assert_eq!(gu.eval(rat(13, 20)), rat(13, 20) + rat(11, 40));
        assert_eq!(gu.eval(rat(15, 16)), Rational::ONE);
        let _ = table;
    }

    #[test]
    fn g_curves_x_squared() {
        let dd = DiagonalData::new(curated::x_squared_chords(64));
        let (gu, gl) = g_curves(&dd.fsplit);
        assert_eq!(gu.eval(rat(3, 8)), rat(5, 8));
        assert_eq!(gl.eval(rat(3, 8)), Rational::ZERO);
        // closed forms: sqrt on the left half, x + 1/4 in the middle band
        assert_eq!(gu.eval(rat(9, 64)), rat(3, 8)); // g_U = sqrt(x) at a grid square
        assert_eq!(gu.eval(rat(1, 2)), rat(3, 4)); // x + 1/4 branch
    }

    #[test]
    fn g_curves_w_diagonal() {
        let dd = DiagonalData::new(curated::w_diagonal());
        let (gu, gl) = g_curves(&dd.fsplit);
        for i in 0..8i128 {
            let x = rat(i, 16);
            assert_eq!(gu.eval(x), x + rat(1, 2));
            assert_eq!(gl.eval(x), Rational::ZERO);
        }
        assert_eq!(gu.eval(rat(3, 4)), Rational::ONE);
        assert_eq!(gl.eval(rat(3, 4)), rat(1, 4));
    }

    #[test]
    fn plateau_counterexample_region() {
        let dd = DiagonalData::new(curated::plateau());
        let (gu, gl) = g_curves(&dd.fsplit);
        assert_eq!(gu.eval(rat(1, 4)), rat(1, 2));
        assert_eq!(
            classify_point(&gu, &gl, rat(1, 4), rat(3, 4)).unwrap(),
            RegionLabel::Dx
        );
        // no D_f point in the open rectangle [0,1/2) x (1/2,1]
        for i in 0..16i128 {
            let x = rat(i, 32);
            assert!(gu.eval(x) <= rat(1, 2));
        }
    }

    #[test]
    fn classification_examples() {
        let dd = DiagonalData::new(curated::x_squared_chords(64));
        let (gu, gl) = g_curves(&dd.fsplit);
        assert_eq!(
            classify_point(&gu, &gl, rat(1, 4), rat(1, 4)).unwrap(),
            RegionLabel::Diagonal
        );
        assert_eq!(
            classify_point(&gu, &gl, rat(1, 4), rat(3, 4)).unwrap(),
            RegionLabel::Dx
        );
        assert_eq!(
            classify_point(&gu, &gl, rat(3, 8), rat(5, 8)).unwrap(),
            RegionLabel::BoundaryUpper
        );
        assert_eq!(
            classify_point(&gu, &gl, rat(3, 8), rat(1, 2)).unwrap(),
            RegionLabel::InteriorDf
        );
        assert_eq!(
            classify_point(&gu, &gl, rat(3, 4), rat(1, 16)).unwrap(),
            RegionLabel::Dy
        );
        assert!(classify_point(&gu, &gl, rat(3, 2), rat(1, 2)).is_err());
    }

    #[test]
    fn g_monotone_and_one_sided_continuity() {
        for d in [
            curated::w_diagonal(),
            curated::plateau(),
            curated::ex_kca(),
            curated::ex412(),
            curated::x_squared_chords(32),
        ] {
            let dd = DiagonalData::new(d);
            let (gu, gl) = g_curves(&dd.fsplit);
            let mut prev_u = gu.eval(Rational::ZERO);
            let mut prev_l = gl.eval(Rational::ZERO);
            for i in 1..=240i128 {
                let x = rat(i, 240);
                let (u, l) = (gu.eval(x), gl.eval(x));
                assert!(l <= x && x <= u);
                assert!(u >= prev_u, "g_U not increasing at {x}");
                assert!(l >= prev_l, "g_L not increasing at {x}");
                prev_u = u;
                prev_l = l;
            }
            for i in 1..gu.cuts().len() - 1 {
                assert_eq!(gu.value_at_cut(i), gu.right_limit(i), "g_U right-cont");
            }
            for i in 1..gl.cuts().len() - 1 {
                assert_eq!(gl.value_at_cut(i), gl.left_limit(i), "g_L left-cont");
            }
        }
    }

    #[test]
    fn hset_membership() {
        let dh = hat(curated::ex412());
        let h = HSet::new(&dh);
        assert!(h.contains(rat(13, 80), rat(67, 80))); // on the curve
        assert!(h.contains(rat(13, 80), rat(11, 20))); // on the vertical
        assert!(!h.contains(rat(13, 80), rat(1, 4)));
        assert!(h.contains(rat(31, 80), rat(49, 80)));
        assert!(!h.contains(rat(31, 80), rat(62, 80)));
    }

    #[test]
    fn csv_export_has_all_layers() {
        let dd = DiagonalData::new(curated::ex412());
        let (gu, gl) = g_curves(&dd.fsplit);
        let h = HSet::new(&dd.hat);
        let csv = curves_csv(&gu, &gl, &h);
        assert!(csv.starts_with("kind,x,y_low,y_high\n"));
        assert_eq!(csv.matches("\nvertical,").count(), 3);
        assert!(csv.contains("\ngU,"));
        assert!(csv.contains("\ngL,"));
        assert!(csv.contains("\nh,"));
    }
}
