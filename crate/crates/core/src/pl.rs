//! Exact piecewise-linear functions on [0, 1].
//!
//! This is the carrier type for every univariate function in the crate:
//! diagonals, their hat companions, total-variation prefixes and the two
//! summands of the auxiliary split. Breakpoints are exact rationals and all
//! queries are exact.

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A continuous piecewise-linear function given by breakpoints
/// `(x_0, v_0), ..., (x_n, v_n)` with `x_0 = 0`, `x_n = 1` and `x`
/// strictly increasing. Values between breakpoints interpolate linearly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseLinear {
    points: Vec<(Rational, Rational)>,
}

impl PiecewiseLinear {
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::MalformedPiecewise(
                "need at least two breakpoints".into(),
            ));
        }
        if points[0].0 != Rational::ZERO {
            return Err(Error::MalformedPiecewise(
                "first breakpoint must have x = 0".into(),
            ));
        }
        if points[points.len() - 1].0 != Rational::ONE {
            return Err(Error::MalformedPiecewise(
                "last breakpoint must have x = 1".into(),
            ));
        }
        for w in points.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::MalformedPiecewise(format!(
                    "breakpoint x-values must be strictly increasing ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        Ok(PiecewiseLinear { points })
    }

    /// The identity function x -> x.
    pub fn identity() -> Self {
        PiecewiseLinear {
            points: vec![
                (Rational::ZERO, Rational::ZERO),
                (Rational::ONE, Rational::ONE),
            ],
        }
    }

    /// The constant function x -> c.
    pub fn constant(c: Rational) -> Self {
        PiecewiseLinear {
            points: vec![(Rational::ZERO, c), (Rational::ONE, c)],
        }
    }

    pub fn points(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    pub fn xs(&self) -> impl Iterator<Item = Rational> + '_ {
        self.points.iter().map(|p| p.0)
    }

    pub fn num_segments(&self) -> usize {
        self.points.len() - 1
    }

    /// Index of the segment containing `x`: the largest `i` with `x_i <= x`,
    /// clamped so that `x = 1` maps to the last segment.
    pub fn segment_index(&self, x: Rational) -> usize {
        debug_assert!(x.in_unit_interval());
        let mut lo = 0usize;
        let mut hi = self.points.len() - 1;
        while lo + 1 < hi {
            let mid = (lo + hi) / 2;
            if self.points[mid].0 <= x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    pub fn slope(&self, seg: usize) -> Rational {
        let (x0, v0) = self.points[seg];
        let (x1, v1) = self.points[seg + 1];
        (v1 - v0) / (x1 - x0)
    }

    pub fn eval(&self, x: Rational) -> Rational {
        let i = self.segment_index(x);
        let (x0, v0) = self.points[i];
        if x == x0 {
            return v0;
        }
        v0 + self.slope(i) * (x - x0)
    }

    pub fn try_eval(&self, x: Rational) -> Result<Rational> {
        if !x.in_unit_interval() {
            return Err(Error::OutOfDomain(x));
        }
        Ok(self.eval(x))
    }

    /// Slope of the segment immediately to the right of `x` (the last
    /// segment's slope at `x = 1`).
    pub fn right_slope(&self, x: Rational) -> Rational {
        let mut i = self.segment_index(x);
        if x == Rational::ONE {
            i = self.num_segments() - 1;
        }
        self.slope(i)
    }

    /// Slope of the segment immediately to the left of `x` (the first
    /// segment's slope at `x = 0`).
    pub fn left_slope(&self, x: Rational) -> Rational {
        let i = self.segment_index(x);
        if i > 0 && self.points[i].0 == x {
            self.slope(i - 1)
        } else if x == Rational::ZERO {
            self.slope(0)
        } else {
            self.slope(i)
        }
    }

    /// Merge the breakpoint x-grids of `self` and `other`.
    pub fn union_grid(&self, other: &PiecewiseLinear) -> Vec<Rational> {
        let mut grid: Vec<Rational> = self.xs().chain(other.xs()).collect();
        grid.sort();
        grid.dedup();
        grid
    }

    /// Re-express on a finer grid (must contain every current breakpoint
    /// for the result to be exactly equal as a function; values are sampled
    /// so a coarser grid silently resamples).
    pub fn on_grid(&self, grid: &[Rational]) -> PiecewiseLinear {
        let points = grid.iter().map(|&x| (x, self.eval(x))).collect();
        PiecewiseLinear { points }
    }

    /// Pointwise combination on the union grid.
    pub fn zip_with(
        &self,
        other: &PiecewiseLinear,
        f: impl Fn(Rational, Rational) -> Rational,
    ) -> PiecewiseLinear {
        let grid = self.union_grid(other);
        let points = grid
            .into_iter()
            .map(|x| (x, f(self.eval(x), other.eval(x))))
            .collect();
        PiecewiseLinear { points }
    }

    pub fn map_values(&self, f: impl Fn(Rational) -> Rational) -> PiecewiseLinear {
        let points = self.points.iter().map(|&(x, v)| (x, f(v))).collect();
        PiecewiseLinear { points }
    }

    /// Cumulative sum of |value deltas|: the total-variation prefix of a
    /// piecewise-linear function (|slope| * length telescopes to |delta v|).
    pub fn cumulative_abs_delta(&self) -> PiecewiseLinear {
        let mut acc = Rational::ZERO;
        let mut points = Vec::with_capacity(self.points.len());
        points.push((Rational::ZERO, Rational::ZERO));
        for w in self.points.windows(2) {
            acc += (w[1].1 - w[0].1).abs();
            points.push((w[1].0, acc));
        }
        PiecewiseLinear { points }
    }

    /// Exact minimum over `[a, b]` together with the smallest attaining point.
    /// Requires `a <= b`.
    pub fn min_on(&self, a: Rational, b: Rational) -> (Rational, Rational) {
        self.extremum_on(a, b, false)
    }

    /// Exact maximum over `[a, b]` together with the smallest attaining point.
    pub fn max_on(&self, a: Rational, b: Rational) -> (Rational, Rational) {
        self.extremum_on(a, b, true)
    }

    fn extremum_on(&self, a: Rational, b: Rational, want_max: bool) -> (Rational, Rational) {
        debug_assert!(a <= b);
        let better = |v: Rational, best: Rational| if want_max { v > best } else { v < best };
        let mut best = self.eval(a);
        let mut arg = a;
        if a == b {
            return (best, arg);
        }
        let first = self.segment_index(a) + 1;
        for i in first..self.points.len() {
            let (x, v) = self.points[i];
            if x >= b {
                break;
            }
            if x > a && better(v, best) {
                best = v;
                arg = x;
            }
        }
        let vb = self.eval(b);
        if better(vb, best) {
            best = vb;
            arg = b;
        }
        (best, arg)
    }

    /// For an increasing function: the smallest `y` with `f(y) >= v`.
    /// Returns 0 when `v <= f(0)` and 1 when `v > f(1)` never holds
    /// (caller must ensure `v <= f(1)`).
    pub fn first_at_or_above(&self, v: Rational) -> Rational {
        debug_assert!(v <= self.points[self.points.len() - 1].1);
        if self.points[0].1 >= v {
            return Rational::ZERO;
        }
        // first breakpoint with value >= v
        let mut lo = 0usize; // value < v here
        let mut hi = self.points.len() - 1;
        while lo + 1 < hi {
            let mid = (lo + hi) / 2;
            if self.points[mid].1 < v {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (x0, v0) = self.points[lo];
        let (x1, v1) = self.points[hi];
        debug_assert!(v0 < v && v <= v1);
        x0 + (v - v0) * (x1 - x0) / (v1 - v0)
    }

    /// For an increasing function: the largest `y` with `f(y) <= v`.
    /// Returns 1 when `f(1) <= v` (caller must ensure `v >= f(0)`).
    pub fn last_at_or_below(&self, v: Rational) -> Rational {
        let n = self.points.len();
        debug_assert!(v >= self.points[0].1);
        if self.points[n - 1].1 <= v {
            return Rational::ONE;
        }
        // last breakpoint with value <= v
        let mut lo = 0usize; // value <= v here
        let mut hi = n - 1; // value > v here
        while lo + 1 < hi {
            let mid = (lo + hi) / 2;
            if self.points[mid].1 <= v {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (x0, v0) = self.points[lo];
        let (x1, v1) = self.points[hi];
        debug_assert!(v0 <= v && v < v1);
        x0 + (v - v0) * (x1 - x0) / (v1 - v0)
    }

    pub fn sup_norm_diff(&self, other: &PiecewiseLinear) -> Rational {
        let grid = self.union_grid(other);
        grid.into_iter()
            .map(|x| (self.eval(x) - other.eval(x)).abs())
            .max()
            .unwrap()
    }
}
