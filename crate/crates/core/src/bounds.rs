//! Evaluators for every named construction: the auxiliary split f = f1 + f2,
//! the new copula U, the exact upper bound, the Bertino lower bound, the
//! quasi-copula upper bound A, the symmetric-copula bound K, transposes and
//! the diagonal splice.

use std::fmt;
use std::sync::Arc;

use crate::diagonal::{DeltaHat, DiagonalSection};
use crate::error::{Error, Result};
use crate::pl::PiecewiseLinear;
use crate::rational::Rational;

/// The additive split of the auxiliary function:
/// `f(x, y) = f1(x) + f2(y)` with
/// `f1 = (tv_prefix - hat) / 2` and `f2 = id - (hat + tv_prefix) / 2`.
/// Both summands are increasing and 1-Lipschitz, which is what makes all
/// f-volumes vanish.
#[derive(Clone, Debug)]
pub struct FSplit {
    f1: PiecewiseLinear,
    f2: PiecewiseLinear,
}

impl FSplit {
    pub fn new(hat: &DeltaHat) -> Self {
        let f1 = hat
            .tv_prefix()
            .zip_with(hat.pl(), |tv, h| (tv - h).half());
        let grid: Vec<Rational> = hat.pl().xs().collect();
        let f2 = PiecewiseLinear::new(
            grid.into_iter()
                .map(|x| (x, x - (hat.eval(x) + hat.tv_prefix().eval(x)).half()))
                .collect(),
        )
        .expect("same grid as hat");
        FSplit { f1, f2 }
    }

    pub fn f1(&self) -> &PiecewiseLinear {
        &self.f1
    }

    pub fn f2(&self) -> &PiecewiseLinear {
        &self.f2
    }

    /// The auxiliary function itself, defined on the whole square.
    pub fn f_delta(&self, x: Rational, y: Rational) -> Result<Rational> {
        for t in [x, y] {
            if !t.in_unit_interval() {
                return Err(Error::OutOfDomain(t));
            }
        }
        Ok(self.f1.eval(x) + self.f2.eval(y))
    }
}

/// Everything derived once from a diagonal and shared by its evaluators.
#[derive(Debug)]
pub struct DiagonalData {
    pub diagonal: DiagonalSection,
    pub hat: DeltaHat,
    pub fsplit: FSplit,
}

impl DiagonalData {
    pub fn new(diagonal: DiagonalSection) -> Arc<Self> {
        let hat = DeltaHat::new(&diagonal);
        let fsplit = FSplit::new(&hat);
        Arc::new(DiagonalData {
            diagonal,
            hat,
            fsplit,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum BaseKind {
    U,
    CBar,
    Bertino,
    AQuasi,
    K,
}

#[derive(Clone, Debug)]
enum Node {
    Base(BaseKind, Arc<DiagonalData>),
    Splice(Box<Evaluator>, Box<Evaluator>),
    Transpose(Box<Evaluator>),
}

/// A (quasi-)copula evaluator: a pure map `(x, y) -> [0, 1]` tagged with the
/// construction it came from. Whether a given evaluator is actually a copula
/// is decided by the verify module, never assumed here.
#[derive(Clone, Debug)]
pub struct Evaluator {
    node: Node,
}

pub fn u_delta(data: &Arc<DiagonalData>) -> Evaluator {
    Evaluator::base(BaseKind::U, data)
}

pub fn cbar(data: &Arc<DiagonalData>) -> Evaluator {
    Evaluator::base(BaseKind::CBar, data)
}

pub fn bertino(data: &Arc<DiagonalData>) -> Evaluator {
    Evaluator::base(BaseKind::Bertino, data)
}

pub fn a_quasi(data: &Arc<DiagonalData>) -> Evaluator {
    Evaluator::base(BaseKind::AQuasi, data)
}

pub fn k_copula(data: &Arc<DiagonalData>) -> Evaluator {
    Evaluator::base(BaseKind::K, data)
}

/// Diagonal splice: `q1` above the main diagonal, `q2` below. Requires the
/// two operands to share their diagonal section.
pub fn splice(q1: Evaluator, q2: Evaluator) -> Result<Evaluator> {
    let grid = q1
        .data()
        .diagonal
        .pl()
        .union_grid(q2.data().diagonal.pl());
    for x in grid {
        if q1.eval(x, x) != q2.eval(x, x) {
            return Err(Error::DiagonalMismatch(x));
        }
    }
    Ok(Evaluator {
        node: Node::Splice(Box::new(q1), Box::new(q2)),
    })
}

pub fn transpose(q: Evaluator) -> Evaluator {
    Evaluator {
        node: Node::Transpose(Box::new(q)),
    }
}

impl Evaluator {
    fn base(kind: BaseKind, data: &Arc<DiagonalData>) -> Evaluator {
        Evaluator {
            node: Node::Base(kind, Arc::clone(data)),
        }
    }

    pub fn data(&self) -> &Arc<DiagonalData> {
        match &self.node {
            Node::Base(_, d) => d,
            Node::Splice(q1, _) => q1.data(),
            Node::Transpose(q) => q.data(),
        }
    }

    pub fn diagonal(&self) -> &DiagonalSection {
        &self.data().diagonal
    }

    pub fn label(&self) -> String {
        match &self.node {
            Node::Base(BaseKind::U, _) => "U".to_string(),
            Node::Base(BaseKind::CBar, _) => "CBar".to_string(),
            Node::Base(BaseKind::Bertino, _) => "B".to_string(),
            Node::Base(BaseKind::AQuasi, _) => "A".to_string(),
            Node::Base(BaseKind::K, _) => "K".to_string(),
            Node::Splice(q1, q2) => format!("Splice({},{})", q1.label(), q2.label()),
            Node::Transpose(q) => format!("Transpose({})", q.label()),
        }
    }

    pub fn eval(&self, x: Rational, y: Rational) -> Rational {
        match &self.node {
            Node::Base(kind, data) => base_eval(*kind, data, x, y),
            Node::Splice(q1, q2) => {
                if x <= y {
                    q1.eval(x, y)
                } else {
                    q2.eval(x, y)
                }
            }
            Node::Transpose(q) => q.eval(y, x),
        }
    }

    pub fn try_eval(&self, x: Rational, y: Rational) -> Result<Rational> {
        for t in [x, y] {
            if !t.in_unit_interval() {
                return Err(Error::OutOfDomain(t));
            }
        }
        Ok(self.eval(x, y))
    }

    /// Values on the `xs` x `xs` grid, row-major (`row = x`, `col = y`).
    /// Exact, and organized per construction so that a full matrix costs
    /// O(n^2) rational operations rather than O(n^2 log n) evaluations.
    pub fn grid_matrix(&self, xs: &[Rational]) -> GridMatrix {
        let n = xs.len();
        let mut m = GridMatrix {
            n,
            data: vec![Rational::ZERO; n * n],
        };
        match &self.node {
            Node::Base(kind, data) => fill_base(*kind, data, xs, &mut m),
            Node::Splice(q1, q2) => {
                let m1 = q1.grid_matrix(xs);
                let m2 = q2.grid_matrix(xs);
                for i in 0..n {
                    for j in 0..n {
                        *m.at_mut(i, j) = if xs[i] <= xs[j] {
                            m1.at(i, j)
                        } else {
                            m2.at(i, j)
                        };
                    }
                }
            }
            Node::Transpose(q) => {
                let inner = q.grid_matrix(xs);
                for i in 0..n {
                    for j in 0..n {
                        *m.at_mut(i, j) = inner.at(j, i);
                    }
                }
            }
        }
        m
    }
}

impl fmt::Display for Evaluator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

fn base_eval(kind: BaseKind, data: &DiagonalData, x: Rational, y: Rational) -> Rational {
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    match kind {
        BaseKind::U => {
            let f = data.fsplit.f1().eval(x) + data.fsplit.f2().eval(y);
            x.min(y).min(f)
        }
        BaseKind::CBar => {
            // equal to the splice of U and its transpose
            let f = data.fsplit.f1().eval(lo) + data.fsplit.f2().eval(hi);
            lo.min(f)
        }
        BaseKind::Bertino => {
            let (min_hat, _) = data.hat.pl().min_on(lo, hi);
            lo - min_hat
        }
        BaseKind::AQuasi => {
            let (max_hat, _) = data.hat.pl().max_on(lo, hi);
            lo.min(hi - max_hat)
        }
        BaseKind::K => {
            let k = (data.diagonal.eval(x) + data.diagonal.eval(y)).half();
            lo.min(k)
        }
    }
}

/// The direct total-variation form of the exact upper bound,
/// `min { x, y, max{x,y} - (hat(x) + hat(y) + TV) / 2 }`. Used as a
/// cross-check against the f1 + f2 route.
pub fn cbar_tv_form(data: &DiagonalData, x: Rational, y: Rational) -> Rational {
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    let tv = data
        .hat
        .total_variation(lo, hi)
        .expect("points in domain");
    let v = hi - (data.hat.eval(lo) + data.hat.eval(hi) + tv).half();
    lo.min(v)
}

/// Dense exact value matrix over a grid.
#[derive(Clone, Debug)]
pub struct GridMatrix {
    n: usize,
    data: Vec<Rational>,
}

impl GridMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> Rational {
        self.data[i * self.n + j]
    }

    fn at_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.data[i * self.n + j]
    }
}

fn fill_base(kind: BaseKind, data: &DiagonalData, xs: &[Rational], m: &mut GridMatrix) {
    let n = xs.len();
    match kind {
        BaseKind::U | BaseKind::CBar | BaseKind::K => {
            let f1: Vec<Rational> = xs.iter().map(|&x| data.fsplit.f1().eval(x)).collect();
            let f2: Vec<Rational> = xs.iter().map(|&x| data.fsplit.f2().eval(x)).collect();
            let dv: Vec<Rational> = xs.iter().map(|&x| data.diagonal.eval(x)).collect();
            for i in 0..n {
                for j in 0..n {
                    let lo = xs[i].min(xs[j]);
                    let v = match kind {
                        BaseKind::U => xs[i].min(xs[j]).min(f1[i] + f2[j]),
                        BaseKind::CBar => {
                            let (a, b) = if i <= j { (i, j) } else { (j, i) };
                            lo.min(f1[a] + f2[b])
                        }
                        BaseKind::K => lo.min((dv[i] + dv[j]).half()),
                        _ => unreachable!(),
                    };
                    *m.at_mut(i, j) = v;
                }
            }
        }
        BaseKind::Bertino | BaseKind::AQuasi => {
            let want_max = kind == BaseKind::AQuasi;
            // range extremum of the hat over real intervals [xs[i], xs[j]],
            // accounting for hat breakpoints between grid points
            let bps = data.hat.pl().points();
            for i in 0..n {
                let mut ext = data.hat.eval(xs[i]);
                let mut k = bps.partition_point(|p| p.0 <= xs[i]);
                *m.at_mut(i, i) = diag_value(kind, xs[i], ext);
                for j in (i + 1)..n {
                    while k < bps.len() && bps[k].0 < xs[j] {
                        ext = combine(ext, bps[k].1, want_max);
                        k += 1;
                    }
                    ext = combine(ext, data.hat.eval(xs[j]), want_max);
                    let v = if want_max {
                        xs[i].min(xs[j] - ext)
                    } else {
                        xs[i] - ext
                    };
                    *m.at_mut(i, j) = v;
                    *m.at_mut(j, i) = v; // both constructions are symmetric
                }
            }
        }
    }
}

fn combine(a: Rational, b: Rational, want_max: bool) -> Rational {
    if want_max {
        a.max(b)
    } else {
        a.min(b)
    }
}

fn diag_value(kind: BaseKind, x: Rational, hat_x: Rational) -> Rational {
    match kind {
        BaseKind::Bertino => x - hat_x,
        BaseKind::AQuasi => x.min(x - hat_x),
        _ => unreachable!(),
    }
}

/// The five bound constructions for one diagonal.
pub struct BoundFamily {
    pub u: Evaluator,
    pub cbar: Evaluator,
    pub bertino: Evaluator,
    pub a: Evaluator,
    pub k: Evaluator,
}

impl BoundFamily {
    pub fn new(data: &Arc<DiagonalData>) -> Self {
        BoundFamily {
            u: u_delta(data),
            cbar: cbar(data),
            bertino: bertino(data),
            a: a_quasi(data),
            k: k_copula(data),
        }
    }
}

/// CSV export of an evaluator over the uniform n x n grid, row-major,
/// header `x,y,value`. `precision = None` emits exact `p/q` tokens.
pub fn grid_csv(q: &Evaluator, n: usize, precision: Option<usize>) -> String {
    let xs: Vec<Rational> = (0..=n as i128)
        .map(|i| Rational::new(i, n as i128))
        .collect();
    let m = q.grid_matrix(&xs);
    let mut out = String::from("x,y,value\n");
    let fmt = |v: Rational| match precision {
        Some(p) => v.to_decimal_string(p),
        None => v.to_string(),
    };
    for i in 0..xs.len() {
        for j in 0..xs.len() {
            out.push_str(&format!("{},{},{}\n", fmt(xs[i]), fmt(xs[j]), fmt(m.at(i, j))));
        }
    }
    out
}
