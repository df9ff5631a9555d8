//! Maximal asymmetry of the copulas with a given diagonal, computed by
//! three independent routes that must agree exactly: the max-min formula,
//! the intersection of g_U with the set H, and a brute-force grid oracle.

use std::sync::Arc;

use crate::bounds::{bertino, cbar, splice, DiagonalData, Evaluator};
use crate::diagonal::{DeltaHat, DiagonalSection};
use crate::error::{Error, Result};
use crate::geometry::{g_curves, HSet, StepCurve};
use crate::rational::Rational;
use crate::verify;

/// tau(x): the asymmetry available at column x, equal to the minimum of the
/// hat over [x, g_U(x)].
pub fn tau(dh: &DeltaHat, g_u: &StepCurve, x: Rational) -> Result<Rational> {
    if !x.in_unit_interval() {
        return Err(Error::OutOfDomain(x));
    }
    Ok(dh.pl().min_on(x, g_u.eval(x)).0)
}

fn affine_from_samples(
    f: &impl Fn(Rational) -> Rational,
    p: Rational,
    q: Rational,
) -> (Rational, Rational) {
    let (fp, fq) = (f(p), f(q));
    let b = (fq - fp) / (q - p);
    (fp - b * p, b)
}

fn crossing(a1: (Rational, Rational), a2: (Rational, Rational)) -> Option<Rational> {
    if a1.1 == a2.1 {
        return None;
    }
    Some((a2.0 - a1.0) / (a1.1 - a2.1))
}

/// Exact maximum of tau with the smallest maximizer. tau is piecewise
/// affine once the cut grid separates hat breakpoints, g_U cuts and the
/// g_U-preimages of hat breakpoints, so candidates are cut points plus the
/// kinks of the min of three affine functions per piece.
pub fn mu_maxmin(dh: &DeltaHat, g_u: &StepCurve) -> (Rational, Rational) {
    let mut cuts: Vec<Rational> = dh.pl().xs().collect();
    cuts.extend_from_slice(g_u.cuts());
    for i in 0..g_u.num_pieces() {
        let (a, b) = g_u.piece(i);
        if b.is_zero() {
            continue;
        }
        let (lo, hi) = (g_u.cuts()[i], g_u.cuts()[i + 1]);
        for &(t, _) in dh.pl().points() {
            let x = (t - a) / b;
            if lo < x && x < hi {
                cuts.push(x);
            }
        }
    }
    cuts.sort();
    cuts.dedup();

    let mut candidates = cuts.clone();
    let third = Rational::new(1, 3);
    for w in cuts.windows(2) {
        let step = (w[1] - w[0]) * third;
        let (p, q) = (w[0] + step, w[1] - step);
        let alpha = affine_from_samples(&|x| dh.eval(x), p, q);
        let beta = affine_from_samples(&|x| dh.eval(g_u.eval(x)), p, q);
        // interior breakpoint minimum is constant on the piece
        let mid = p + step.half();
        let g_mid = g_u.eval(mid);
        let m = dh
            .pl()
            .points()
            .iter()
            .filter(|&&(t, _)| mid < t && t < g_mid)
            .map(|&(_, v)| v)
            .min();
        let mut push = |x: Option<Rational>| {
            if let Some(x) = x {
                if w[0] < x && x < w[1] {
                    candidates.push(x);
                }
            }
        };
        push(crossing(alpha, beta));
        if let Some(m) = m {
            push(crossing(alpha, (m, Rational::ZERO)));
            push(crossing(beta, (m, Rational::ZERO)));
        }
    }
    candidates.sort();
    candidates.dedup();

    let mut best = Rational::ZERO;
    let mut arg = Rational::ZERO;
    for x in candidates {
        let t = dh.pl().min_on(x, g_u.eval(x)).0;
        if t > best {
            best = t;
            arg = x;
        }
    }
    (best, arg)
}

/// Maximal connected components of { x : (x, g_U(x)) in H, g_U(x) > x },
/// as closed x-intervals (degenerate intervals are single points).
#[derive(Clone, Debug, Default)]
pub struct OmegaSet {
    pub components: Vec<(Rational, Rational)>,
}

impl OmegaSet {
    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    /// Witness points (x, g_U(x)): one per point component, the two
    /// endpoints per interval component.
    pub fn points(&self, g_u: &StepCurve) -> Vec<(Rational, Rational)> {
        let mut out = Vec::new();
        for &(lo, hi) in &self.components {
            out.push((lo, g_u.eval(lo)));
            if hi > lo {
                out.push((hi, g_u.eval(hi)));
            }
        }
        out
    }
}

pub fn omega_set(g_u: &StepCurve, h: &HSet) -> OmegaSet {
    let mut cuts: Vec<Rational> = g_u.cuts().to_vec();
    cuts.extend_from_slice(h.curve.cuts());
    cuts.sort();
    cuts.dedup();

    // raw parts: (lo, hi) closed intervals, points as lo == hi
    let mut parts: Vec<(Rational, Rational)> = Vec::new();
    for &x in &cuts {
        let y = g_u.eval(x);
        if y > x && h.contains(x, y) {
            parts.push((x, x));
        }
    }
    let third = Rational::new(1, 3);
    for w in cuts.windows(2) {
        let step = (w[1] - w[0]) * third;
        let (p, q) = (w[0] + step, w[1] - step);
        let g_aff = affine_from_samples(&|x| g_u.eval(x), p, q);
        let h_aff = affine_from_samples(&|x| h.curve.eval(x), p, q);
        if g_aff == h_aff {
            // curves coincide on the whole open piece; keep the part of it
            // strictly above the diagonal
            let mut lo = w[0];
            let mut hi = w[1];
            if let Some(x) = crossing(g_aff, (Rational::ZERO, Rational::ONE)) {
                // g(x) - x changes sign at most once; sample to orient
                if g_u.eval(p) > p {
                    hi = hi.min(x.max(lo));
                } else {
                    lo = lo.max(x.min(hi));
                }
            }
            if g_u.eval((lo + hi).half()) > (lo + hi).half() && lo < hi {
                parts.push((lo, hi));
            }
        } else if let Some(x) = crossing(g_aff, h_aff) {
            if w[0] < x && x < w[1] {
                let y = g_aff.0 + g_aff.1 * x;
                if y > x {
                    parts.push((x, x));
                }
            }
        }
    }

    parts.sort();
    let mut components: Vec<(Rational, Rational)> = Vec::new();
    for (lo, hi) in parts {
        match components.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => components.push((lo, hi)),
        }
    }
    OmegaSet { components }
}

/// mu as the maximum of the hat over the omega x-coordinates, with the
/// smallest attaining x.
pub fn mu_via_h(dh: &DeltaHat, omega: &OmegaSet) -> Result<(Rational, Rational)> {
    if omega.is_empty() {
        return Err(Error::EmptyOmega);
    }
    let mut best: Option<(Rational, Rational)> = None;
    for &(lo, hi) in &omega.components {
        let (v, arg) = dh.pl().max_on(lo, hi);
        match best {
            Some((bv, _)) if bv >= v => {}
            _ => best = Some((v, arg)),
        }
    }
    Ok(best.expect("nonempty omega"))
}

/// A diagonal is simple when its hat has no strict interior local minimum:
/// no negative-slope segment is followed by a positive-slope one.
pub fn is_simple(dh: &DeltaHat) -> bool {
    let mut seen_negative = false;
    for i in 0..dh.pl().num_segments() {
        let s = dh.pl().slope(i);
        if s < Rational::ZERO {
            seen_negative = true;
        } else if s > Rational::ZERO && seen_negative {
            return false;
        }
    }
    true
}

/// For a simple diagonal: the unique x0 on the increasing run of the hat
/// with (x0, g_U(x0)) in H; mu equals hat(x0) = hat(g_U(x0)) there.
pub fn mu_simple(
    dh: &DeltaHat,
    g_u: &StepCurve,
    h: &HSet,
) -> Result<(Rational, (Rational, Rational))> {
    if !is_simple(dh) {
        return Err(Error::NotSimple);
    }
    let omega = omega_set(g_u, h);
    if omega.is_empty() {
        return Ok((Rational::ZERO, (Rational::ZERO, Rational::ONE)));
    }
    let x0 = omega.components[0].0;
    let y0 = g_u.eval(x0);
    if dh.eval(y0) != dh.eval(x0) {
        return Err(Error::RouteMismatch(format!(
            "simple-route identity hat(g_U(x0)) = hat(x0) fails at x0 = {x0}"
        )));
    }
    Ok((dh.eval(x0), (x0, y0)))
}

/// The copula attaining the maximal asymmetry: the splice of the exact
/// upper bound above the diagonal with the Bertino copula below it.
pub fn max_asym_copula(data: &Arc<DiagonalData>) -> Evaluator {
    splice(cbar(data), bertino(data)).expect("operands share the diagonal")
}

#[derive(Clone, Debug)]
pub struct RouteValues {
    pub maxmin: Rational,
    pub via_h: Rational,
    pub simple: Option<Rational>,
    pub grid_oracle: f64,
}

#[derive(Clone, Debug)]
pub struct AsymmetryReport {
    pub mu: Rational,
    pub witness: (Rational, Rational),
    pub omega: Vec<(Rational, Rational)>,
    pub route_values: RouteValues,
    pub attained_by: String,
}

impl AsymmetryReport {
    /// key: value lines for the CLI.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "mu = {} ({})\n",
            self.mu,
            trim_decimal(self.mu.to_decimal_string(6))
        ));
        out.push_str(&format!("witness = ({}, {})\n", self.witness.0, self.witness.1));
        out.push_str(&format!("omega_size = {}\n", self.omega.len()));
        for (x, y) in &self.omega {
            out.push_str(&format!("omega_point = ({x}, {y})\n"));
        }
        out.push_str(&format!("route_maxmin = {}\n", self.route_values.maxmin));
        out.push_str(&format!("route_via_H = {}\n", self.route_values.via_h));
        if let Some(s) = self.route_values.simple {
            out.push_str(&format!("route_simple = {s}\n"));
        }
        out.push_str(&format!(
            "route_grid_oracle = {:.6}\n",
            self.route_values.grid_oracle
        ));
        out.push_str(&format!("attained_by = {}\n", self.attained_by));
        out
    }
}

fn trim_decimal(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

const ORACLE_N: usize = 512;

/// Full asymmetry pipeline: compute g_U, h and H, intersect, take the
/// maximum of the hat over the intersection, and cross-check against the
/// max-min route, the simple-diagonal shortcut and the grid oracle. Any
/// disagreement between exact routes is a hard error.
pub fn run_mu_algorithm(d: &DiagonalSection) -> Result<AsymmetryReport> {
    let data = DiagonalData::new(d.clone());
    let (g_u, _) = g_curves(&data.fsplit);
    let h = HSet::new(&data.hat);
    let omega = omega_set(&g_u, &h);

    let (via_h, witness_x) = match mu_via_h(&data.hat, &omega) {
        Ok(v) => v,
        Err(Error::EmptyOmega) => (Rational::ZERO, Rational::ZERO),
        Err(e) => return Err(e),
    };
    let (maxmin, _) = mu_maxmin(&data.hat, &g_u);
    if maxmin != via_h {
        return Err(Error::RouteMismatch(format!(
            "maxmin route gives {maxmin}, H route gives {via_h}"
        )));
    }
    let simple = if is_simple(&data.hat) {
        let (v, _) = mu_simple(&data.hat, &g_u, &h)?;
        if v != via_h {
            return Err(Error::RouteMismatch(format!(
                "simple route gives {v}, H route gives {via_h}"
            )));
        }
        Some(v)
    } else {
        None
    };

    let grid_oracle = verify::mu_bruteforce(&data, ORACLE_N);
    let mu_f = via_h.to_f64();
    let tol = 2.0 / ORACLE_N as f64 + 1e-12;
    if grid_oracle > mu_f + 1e-12 || grid_oracle < mu_f - tol {
        return Err(Error::RouteMismatch(format!(
            "grid oracle {grid_oracle} outside [{} - 2/{ORACLE_N}, {}]",
            mu_f, mu_f
        )));
    }

    if omega.is_empty() != d.is_identity() {
        return Err(Error::RouteMismatch(
            "omega emptiness disagrees with delta = id".into(),
        ));
    }

    let attained = max_asym_copula(&data);
    let witness = (witness_x, g_u.eval(witness_x));
    // the value gap of the splice at the witness must equal mu exactly
    let gap = attained.eval(witness.0, witness.1) - attained.eval(witness.1, witness.0);
    if !d.is_identity() && gap != via_h {
        return Err(Error::RouteMismatch(format!(
            "splice gap at witness is {gap}, expected {via_h}"
        )));
    }

    Ok(AsymmetryReport {
        mu: via_h,
        witness,
        omega: omega.points(&g_u),
        route_values: RouteValues {
            maxmin,
            via_h,
            simple,
            grid_oracle,
        },
        attained_by: attained.label(),
    })
}
