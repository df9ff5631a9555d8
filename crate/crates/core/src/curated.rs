//! The named diagonals used throughout the test corpus and the bundled
//! example files.

use crate::diagonal::DiagonalSection;
use crate::pl::PiecewiseLinear;
use crate::rational::{rat, Rational};

fn build(points: Vec<(Rational, Rational)>, label: &str) -> DiagonalSection {
    DiagonalSection::validate_labeled(PiecewiseLinear::new(points).expect("curated"), label)
        .expect("curated diagonal must validate")
}

/// The identity diagonal.
pub fn m_diagonal() -> DiagonalSection {
    DiagonalSection::identity()
}

/// The diagonal of the lower Frechet bound: `max(2x - 1, 0)`.
pub fn w_diagonal() -> DiagonalSection {
    build(
        vec![
            (Rational::ZERO, Rational::ZERO),
            (rat(1, 2), Rational::ZERO),
            (Rational::ONE, Rational::ONE),
        ],
        "w",
    )
}

/// Plateau diagonal 0 / 2x-1/2 / 1/2 / 2x-1; its strict region leaves the
/// rectangle [0,1/2) x (1/2,1] untouched even though f = min there at one
/// point.
pub fn plateau() -> DiagonalSection {
    build(
        vec![
            (Rational::ZERO, Rational::ZERO),
            (rat(1, 4), Rational::ZERO),
            (rat(1, 2), rat(1, 2)),
            (rat(3, 4), rat(1, 2)),
            (Rational::ONE, Rational::ONE),
        ],
        "plateau",
    )
}

/// The five-piece diagonal separating K, the exact upper bound, and A.
pub fn ex_kca() -> DiagonalSection {
    build(
        vec![
            (Rational::ZERO, Rational::ZERO),
            (rat(3, 10), Rational::ZERO),
            (rat(9, 20), rat(3, 10)),
            (rat(11, 20), rat(2, 5)),
            (rat(7, 10), rat(2, 5)),
            (Rational::ONE, Rational::ONE),
        ],
        "exKCA",
    )
}

/// The bimodal diagonal whose maximal asymmetry is 13/80, witnessed through
/// a vertical section rather than a curve crossing.
pub fn ex412() -> DiagonalSection {
    build(
        vec![
            (Rational::ZERO, Rational::ZERO),
            (rat(11, 40), Rational::ZERO),
            (rat(31, 80), rat(9, 40)),
            (rat(1, 2), rat(9, 40)),
            (rat(49, 80), rat(9, 20)),
            (rat(29, 40), rat(9, 20)),
            (Rational::ONE, Rational::ONE),
        ],
        "ex412",
    )
}

/// Chordal discretization of `x^2` on an `n`-point uniform grid.
pub fn x_squared_chords(n: usize) -> DiagonalSection {
    DiagonalSection::from_chords(n, |x| x * x, &format!("x^2-chords-{n}"))
        .expect("x^2 chords validate")
}

/// Base diagonal of the non-continuity example: 0 / x-1/3 / 2x-1.
pub fn dhat_n_base() -> DiagonalSection {
    build(
        vec![
            (Rational::ZERO, Rational::ZERO),
            (rat(1, 3), Rational::ZERO),
            (rat(2, 3), rat(1, 3)),
            (Rational::ONE, Rational::ONE),
        ],
        "dhat-n-base",
    )
}
