//! Diagonal sections and the 1-Lipschitz hat companion.
//!
//! A diagonal section is a piecewise-linear function with `delta(0) = 0`,
//! `delta(1) = 1`, `delta(x) <= x` and every segment slope in [0, 2].
//! Its hat companion `hat(x) = x - delta(x)` drives every bound formula,
//! together with the precomputed total-variation prefix of the hat.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pl::PiecewiseLinear;
use crate::rational::{rat, Rational};

/// A validated diagonal section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalSection {
    pl: PiecewiseLinear,
    provenance: String,
}

impl DiagonalSection {
    /// Validate the three diagonal conditions exactly, at breakpoints and
    /// segment slopes only (linearity makes this equivalent to the pointwise
    /// conditions).
    pub fn validate(pl: PiecewiseLinear) -> Result<Self> {
        Self::validate_labeled(pl, "unnamed")
    }

    pub fn validate_labeled(pl: PiecewiseLinear, provenance: &str) -> Result<Self> {
        let pts = pl.points();
        if pts[0].1 != Rational::ZERO || pts[pts.len() - 1].1 != Rational::ONE {
            return Err(Error::EndpointMismatch);
        }
        for &(x, v) in pts {
            if v > x {
                return Err(Error::ViolatesBound { x, value: v });
            }
        }
        for i in 0..pl.num_segments() {
            let s = pl.slope(i);
            if s < Rational::ZERO || s > Rational::from_int(2) {
                return Err(Error::SlopeOutOfRange {
                    x0: pts[i].0,
                    x1: pts[i + 1].0,
                    slope: s,
                });
            }
        }
        Ok(DiagonalSection {
            pl,
            provenance: provenance.to_string(),
        })
    }

    /// The identity diagonal (the diagonal of the upper Frechet bound).
    pub fn identity() -> Self {
        DiagonalSection {
            pl: PiecewiseLinear::identity(),
            provenance: "identity".to_string(),
        }
    }

    pub fn pl(&self) -> &PiecewiseLinear {
        &self.pl
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn eval(&self, x: Rational) -> Rational {
        self.pl.eval(x)
    }

    pub fn is_identity(&self) -> bool {
        self.pl
            .points()
            .iter()
            .all(|&(x, v)| v == x)
    }

    /// Parse a `.diag` file: '#' comment lines, one `x value` pair per line,
    /// tokens either `p/q` fractions or decimal literals, sorted by x.
    pub fn from_diag_str(text: &str, provenance: &str) -> Result<Self> {
        let mut points = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let (Some(xs), Some(vs), None) = (it.next(), it.next(), it.next()) else {
                return Err(Error::MalformedPiecewise(format!(
                    "expected \"x value\" per line, got {line:?}"
                )));
            };
            points.push((Rational::from_str(xs)?, Rational::from_str(vs)?));
        }
        Self::validate_labeled(PiecewiseLinear::new(points)?, provenance)
    }

    pub fn from_diag_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "file".to_string());
        Self::from_diag_str(&text, &label)
    }

    pub fn to_diag_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# diagonal: {}\n", self.provenance));
        for &(x, v) in self.pl.points() {
            out.push_str(&format!("{x} {v}\n"));
        }
        out
    }

    /// Chordal discretization of a smooth diagonal: sample `f` on a uniform
    /// `n`-point grid and connect by chords. The caller's `f` must itself
    /// satisfy the diagonal conditions for the chords to validate.
    pub fn from_chords(n: usize, f: impl Fn(Rational) -> Rational, provenance: &str) -> Result<Self> {
        let points = (0..=n)
            .map(|i| {
                let x = rat(i as i128, n as i128);
                (x, f(x))
            })
            .collect();
        Self::validate_labeled(PiecewiseLinear::new(points)?, provenance)
    }

    /// Replace a slope-1 run of the diagonal with a sawtooth whose slopes are
    /// all 0 or 2, staying within `(b - a) / n` of the original in sup norm.
    /// The first maximal slope-1 run is perturbed.
    pub fn zigzag_perturb(&self, n: u32) -> Result<DiagonalSection> {
        assert!(n >= 1);
        let one = Rational::ONE;
        let mut run: Option<(usize, usize)> = None; // [start_seg, end_seg)
        for i in 0..self.pl.num_segments() {
            if self.pl.slope(i) == one {
                match &mut run {
                    Some((_, end)) if *end == i => *end = i + 1,
                    Some(_) => break,
                    None => run = Some((i, i + 1)),
                }
            } else if run.is_some() {
                break;
            }
        }
        let Some((s0, s1)) = run else {
            return Err(Error::NoSlopeOneSegment);
        };
        let a = self.pl.points()[s0].0;
        let b = self.pl.points()[s1].0;

        // n teeth of width (b-a)/n; each goes down with slope 1 (delta slope 0)
        // for the first half and back up with slope -1 (delta slope 2).
        let width = (b - a) / Rational::from_int(n as i128);
        let mut points: Vec<(Rational, Rational)> = Vec::new();
        for &(x, v) in self.pl.points() {
            if x <= a || x >= b {
                points.push((x, v));
            }
        }
        let base_at = |x: Rational| self.pl.eval(x);
        let mut extra = Vec::new();
        for k in 0..n {
            let left = a + width * Rational::from_int(k as i128);
            let mid = left + width.half();
            extra.push((mid, base_at(mid) - width.half()));
            if k > 0 {
                extra.push((left, base_at(left)));
            }
        }
        points.extend(extra);
        points.sort_by(|p, q| p.0.cmp(&q.0));
        points.dedup_by(|p, q| p.0 == q.0);
        let label = format!("{}-zigzag-{}", self.provenance, n);
        DiagonalSection::validate_labeled(PiecewiseLinear::new(points)?, &label)
    }
}

impl fmt::Display for DiagonalSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "DiagonalSection({}, {} breakpoints)",
            self.provenance,
            self.pl.points().len()
        )
    }
}

/// The hat companion `hat(x) = x - delta(x)` with its total-variation prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaHat {
    pl: PiecewiseLinear,
    tv_prefix: PiecewiseLinear,
}

impl DeltaHat {
    pub fn new(d: &DiagonalSection) -> Self {
        let pl = d
            .pl()
            .points()
            .iter()
            .map(|&(x, v)| (x, x - v))
            .collect::<Vec<_>>();
        let pl = PiecewiseLinear::new(pl).expect("same grid as a valid diagonal");
        let tv_prefix = pl.cumulative_abs_delta();
        DeltaHat { pl, tv_prefix }
    }

    pub fn pl(&self) -> &PiecewiseLinear {
        &self.pl
    }

    pub fn tv_prefix(&self) -> &PiecewiseLinear {
        &self.tv_prefix
    }

    pub fn eval(&self, x: Rational) -> Rational {
        self.pl.eval(x)
    }

    /// Signed total variation of the hat over `[x, y]`; negative when `y < x`.
    pub fn total_variation(&self, x: Rational, y: Rational) -> Result<Rational> {
        for t in [x, y] {
            if !t.in_unit_interval() {
                return Err(Error::OutOfDomain(t));
            }
        }
        Ok(self.tv_prefix.eval(y) - self.tv_prefix.eval(x))
    }

    /// Exact extremum of the hat over `[x, y]` (requires `x <= y`), with the
    /// smallest attaining point.
    pub fn extremum_on_interval(
        &self,
        x: Rational,
        y: Rational,
        which: Extremum,
    ) -> Result<(Rational, Rational)> {
        for t in [x, y] {
            if !t.in_unit_interval() {
                return Err(Error::OutOfDomain(t));
            }
        }
        assert!(x <= y, "caller must normalize the interval");
        Ok(match which {
            Extremum::Min => self.pl.min_on(x, y),
            Extremum::Max => self.pl.max_on(x, y),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.pl.points().iter().all(|&(_, v)| v.is_zero())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extremum {
    Min,
    Max,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curated;
    use crate::rational::rat;

    #[test]
    fn identity_diagonal_validates() {
        let d = DiagonalSection::validate(PiecewiseLinear::identity()).unwrap();
        assert!(d.is_identity());
        let hat = DeltaHat::new(&d);
        assert!(hat.is_zero());
        assert!(hat.tv_prefix().points().iter().all(|&(_, v)| v.is_zero()));
    }

    #[test]
    fn w_diagonal_validates_with_slope_two() {
        // max(2x - 1, 0): slope 0 then slope 2, endpoints fine
        let d = curated::w_diagonal();
        assert_eq!(d.eval(rat(1, 2)), Rational::ZERO);
        assert_eq!(d.eval(rat(3, 4)), rat(1, 2));
        let hat = DeltaHat::new(&d);
        // hat = min(x, 1-x); tv_prefix(1) = 1
        assert_eq!(hat.eval(rat(1, 4)), rat(1, 4));
        assert_eq!(hat.eval(rat(3, 4)), rat(1, 4));
        assert_eq!(hat.tv_prefix().eval(Rational::ONE), Rational::ONE);
    }

    #[test]
    fn bound_violation_detected() {
        let pl = PiecewiseLinear::new(vec![
            (Rational::ZERO, Rational::ZERO),
            (rat(1, 2), rat(1, 2) + rat(1, 100)),
            (Rational::ONE, Rational::ONE),
        ])
        .unwrap();
        assert!(matches!(
            DiagonalSection::validate(pl),
            Err(Error::ViolatesBound { .. })
        ));
    }

    #[test]
    fn slope_out_of_range_detected() {
        let pl = PiecewiseLinear::new(vec![
            (Rational::ZERO, Rational::ZERO),
            (rat(1, 2), rat(1, 4)),
            (rat(3, 4), rat(1, 4) - rat(1, 8)),
            (Rational::ONE, Rational::ONE),
        ])
        .unwrap();
        assert!(matches!(
            DiagonalSection::validate(pl),
            Err(Error::SlopeOutOfRange { .. })
        ));
    }

    #[test]
    fn endpoint_mismatch_detected() {
        let pl = PiecewiseLinear::new(vec![
            (Rational::ZERO, Rational::ZERO),
            (Rational::ONE, rat(1, 2)),
        ])
        .unwrap();
        assert!(matches!(
            DiagonalSection::validate(pl),
            Err(Error::EndpointMismatch)
        ));
    }

    #[test]
    fn x_squared_chords_validate() {
        // chord slopes of x^2 are x_i + x_{i+1}, always within [0, 2]
        let d = curated::x_squared_chords(64);
        assert_eq!(d.eval(rat(1, 2)), rat(1, 4));
    }

    #[test]
    fn ex412_hat_value() {
        let d = curated::ex412();
        let hat = DeltaHat::new(&d);
        assert_eq!(hat.eval(rat(13, 80)), rat(13, 80));
    }

    #[test]
    fn plateau_tv_over_quarter_interval() {
        let d = curated::plateau();
        let hat = DeltaHat::new(&d);
        assert_eq!(
            hat.total_variation(rat(1, 4), rat(3, 4)).unwrap(),
            rat(1, 2)
        );
        // signed extension
        assert_eq!(
            hat.total_variation(rat(3, 4), rat(1, 4)).unwrap(),
            -rat(1, 2)
        );
        assert_eq!(
            hat.total_variation(rat(1, 3), rat(1, 3)).unwrap(),
            Rational::ZERO
        );
    }

    #[test]
    fn w_hat_tv() {
        let hat = DeltaHat::new(&curated::w_diagonal());
        assert_eq!(
            hat.total_variation(rat(1, 4), rat(3, 4)).unwrap(),
            rat(1, 2)
        );
    }

    #[test]
    fn extremum_examples() {
        let id_hat = DeltaHat::new(&DiagonalSection::identity());
        assert_eq!(
            id_hat
                .extremum_on_interval(rat(1, 8), rat(7, 8), Extremum::Min)
                .unwrap(),
            (Rational::ZERO, rat(1, 8))
        );

        // hat of x^2 chords is concave, so min over [1/4, 3/4] is at an endpoint
        let hat = DeltaHat::new(&curated::x_squared_chords(64));
        let (v, arg) = hat
            .extremum_on_interval(rat(1, 4), rat(3, 4), Extremum::Min)
            .unwrap();
        assert_eq!(v, rat(3, 16));
        assert_eq!(arg, rat(1, 4));

        let hat412 = DeltaHat::new(&curated::ex412());
        let (v, _) = hat412
            .extremum_on_interval(rat(13, 80), rat(11, 20), Extremum::Min)
            .unwrap();
        assert_eq!(v, rat(13, 80));
    }

    #[test]
    fn diag_roundtrip_and_decimal_parse() {
        let d = curated::ex412();
        let text = d.to_diag_string();
        let back = DiagonalSection::from_diag_str(&text, "back").unwrap();
        assert_eq!(d.pl(), back.pl());

        let text = "# comment\n0 0\n0.5 0\n1 1\n";
        let d = DiagonalSection::from_diag_str(text, "w").unwrap();
        assert_eq!(d.eval(rat(3, 4)), rat(1, 2));
    }

    #[test]
    fn zigzag_perturbation_bounds() {
        let base = curated::dhat_n_base();
        for n in [1u32, 10] {
            let dn = base.zigzag_perturb(n).unwrap();
            let dist = base.pl().sup_norm_diff(dn.pl());
            assert!(dist <= rat(1, 3 * n as i128));
            // slopes on the perturbed zone are exactly 0 or 2
            for i in 0..dn.pl().num_segments() {
                let (x0, _) = dn.pl().points()[i];
                let (x1, _) = dn.pl().points()[i + 1];
                if x0 >= rat(1, 3) && x1 <= rat(2, 3) {
                    let s = dn.pl().slope(i);
                    assert!(s == Rational::ZERO || s == Rational::from_int(2));
                }
            }
        }
        assert!(matches!(
            curated::w_diagonal().zigzag_perturb(1),
            Err(Error::NoSlopeOneSegment)
        ));
    }
}
