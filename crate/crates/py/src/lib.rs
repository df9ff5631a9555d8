//! Python bindings: a diagonal section class, bound evaluators and the
//! asymmetry report. Exact values cross the FFI boundary as "p/q" strings,
//! floats only on request.

use std::str::FromStr;
use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use copula_diag::asymmetry::run_mu_algorithm;
use copula_diag::bounds::{a_quasi, bertino, cbar, k_copula, splice, u_delta, DiagonalData};
use copula_diag::geometry::{g_curves, g_upper_point, h_point, HSet};
use copula_diag::verify::{check_copula_grid, mu_bruteforce};
use copula_diag::{DiagonalSection, Rational};

fn err(e: copula_diag::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_rat(s: &str) -> PyResult<Rational> {
    Rational::from_str(s).map_err(err)
}

#[pyclass(frozen)]
struct Diagonal {
    data: Arc<DiagonalData>,
}

#[pymethods]
impl Diagonal {
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        let d = DiagonalSection::from_diag_str(text, "python").map_err(err)?;
        Ok(Diagonal {
            data: DiagonalData::new(d),
        })
    }

    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        let d = DiagonalSection::from_diag_file(path.as_ref()).map_err(err)?;
        Ok(Diagonal {
            data: DiagonalData::new(d),
        })
    }

    fn to_text(&self) -> String {
        self.data.diagonal.to_diag_string()
    }

    fn breakpoints(&self) -> Vec<(String, String)> {
        self.data
            .diagonal
            .pl()
            .points()
            .iter()
            .map(|(x, v)| (x.to_string(), v.to_string()))
            .collect()
    }

    fn eval(&self, x: &str) -> PyResult<String> {
        Ok(self.data.diagonal.eval(parse_rat(x)?).to_string())
    }

    fn hat(&self, x: &str) -> PyResult<String> {
        Ok(self.data.hat.eval(parse_rat(x)?).to_string())
    }

    fn g_upper(&self, x: &str) -> PyResult<String> {
        Ok(g_upper_point(&self.data.fsplit, parse_rat(x)?).to_string())
    }

    fn h(&self, x: &str) -> PyResult<String> {
        Ok(h_point(&self.data.hat, parse_rat(x)?).to_string())
    }

    /// Vertical segments of the filled graph H as (x, y_low, y_high).
    fn h_verticals(&self) -> Vec<(String, String, String)> {
        HSet::new(&self.data.hat)
            .verticals
            .iter()
            .map(|(x, lo, hi)| (x.to_string(), lo.to_string(), hi.to_string()))
            .collect()
    }

    fn evaluator(&self, kind: &str) -> PyResult<BoundEvaluator> {
        let d = &self.data;
        let inner = match kind.to_ascii_uppercase().as_str() {
            "U" => u_delta(d),
            "CBAR" => cbar(d),
            "B" => bertino(d),
            "A" => a_quasi(d),
            "K" => k_copula(d),
            "SPLICE" => splice(cbar(d), bertino(d)).map_err(err)?,
            other => return Err(PyValueError::new_err(format!("unknown kind {other:?}"))),
        };
        Ok(BoundEvaluator { inner })
    }

    /// Maximal asymmetry over copulas with this diagonal, with the witness
    /// point and per-route values.
    fn asymmetry<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
        let report = run_mu_algorithm(&self.data.diagonal).map_err(err)?;
        let out = pyo3::types::PyDict::new_bound(py);
        out.set_item("mu", report.mu.to_string())?;
        out.set_item("mu_float", report.mu.to_f64())?;
        out.set_item(
            "witness",
            (report.witness.0.to_string(), report.witness.1.to_string()),
        )?;
        out.set_item(
            "omega",
            report
                .omega
                .iter()
                .map(|(x, y)| (x.to_string(), y.to_string()))
                .collect::<Vec<_>>(),
        )?;
        out.set_item("attained_by", report.attained_by.clone())?;
        out.set_item("report", report.to_text())?;
        Ok(out)
    }

    fn mu_bruteforce(&self, n: usize) -> f64 {
        mu_bruteforce(&self.data, n)
    }

    /// Mass curves of the copula U as breakpoint lists.
    fn support_curves(&self) -> (Vec<(String, String)>, Vec<(String, String)>) {
        let (g_u, g_l) = g_curves(&self.data.fsplit);
        let dump = |c: &copula_diag::geometry::StepCurve| {
            c.cuts()
                .iter()
                .map(|&x| (x.to_string(), c.eval(x).to_string()))
                .collect()
        };
        (dump(&g_u), dump(&g_l))
    }
}

#[pyclass(frozen)]
struct BoundEvaluator {
    inner: copula_diag::Evaluator,
}

#[pymethods]
impl BoundEvaluator {
    fn label(&self) -> String {
        self.inner.label()
    }

    fn eval(&self, x: &str, y: &str) -> PyResult<String> {
        Ok(self
            .inner
            .try_eval(parse_rat(x)?, parse_rat(y)?)
            .map_err(err)?
            .to_string())
    }

    fn eval_float(&self, x: f64, y: f64) -> PyResult<f64> {
        const DEN: i128 = 1 << 40;
        let to_rat = |t: f64| -> PyResult<Rational> {
            if !(0.0..=1.0).contains(&t) {
                return Err(PyValueError::new_err(format!("{t} outside [0,1]")));
            }
            Ok(Rational::new((t * DEN as f64).round() as i128, DEN))
        };
        Ok(self.inner.eval(to_rat(x)?, to_rat(y)?).to_f64())
    }

    /// Exact copula check on the breakpoint-refined n-grid.
    fn is_copula(&self, n: usize) -> bool {
        check_copula_grid(&self.inner, n, true).is_copula_on_grid
    }
}

#[pymodule]
fn copula_diag_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Diagonal>()?;
    m.add_class::<BoundEvaluator>()?;
    Ok(())
}
