use modtrace::braid::twist;
use modtrace::cli::eval_text;
use modtrace::cyclo::{fmt_rational, parse_rational, CycNumber};
use modtrace::moncat::decompose_semisimple;
use modtrace::mtrace::modified_dim_closed;
use modtrace::uqsl2::{simple_nilpotent, tensor_module, Params};
use modtrace::verify::{run_verify, VerifyConfig};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: modtrace::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn params(ell: u64) -> PyResult<Params> {
    let p = Params::new(ell).map_err(err)?;
    if !p.is_nondegenerate() {
        return Err(err(modtrace::Error::DegenerateRoot(ell)));
    }
    Ok(p)
}

fn cyc_dict<'py>(py: Python<'py>, x: &CycNumber) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    let (re, im) = x.to_float();
    d.set_item("text", x.to_string())?;
    d.set_item("json", x.to_json().to_string())?;
    d.set_item("float", (re, im))?;
    Ok(d)
}

/// Modified dimension of V_alpha at q = exp(2 pi i / ell).
#[pyfunction]
fn modified_dimension<'py>(py: Python<'py>, ell: u64, alpha: &str) -> PyResult<Bound<'py, PyDict>> {
    let p = params(ell)?;
    let a = parse_rational(alpha).map_err(err)?;
    cyc_dict(py, &modified_dim_closed(&p, &a).map_err(err)?)
}

/// Twist scalar on V_alpha, computed as the right partial trace of the braiding.
#[pyfunction]
fn twist_scalar<'py>(py: Python<'py>, ell: u64, alpha: &str) -> PyResult<Bound<'py, PyDict>> {
    let p = params(ell)?;
    let a = parse_rational(alpha).map_err(err)?;
    let t = twist(&simple_nilpotent(&p, &a)).map_err(err)?;
    let s = t.scalar().ok_or_else(|| err(modtrace::Error::NotScalar))?;
    cyc_dict(py, &s)
}

/// Highest-weight parameters gamma of the simple summands of V_alpha ⊗ V_beta.
#[pyfunction]
fn decompose(ell: u64, alpha: &str, beta: &str) -> PyResult<Vec<String>> {
    let p = params(ell)?;
    let a = simple_nilpotent(&p, &parse_rational(alpha).map_err(err)?);
    let b = simple_nilpotent(&p, &parse_rational(beta).map_err(err)?);
    let t = tensor_module(&a, &b).map_err(err)?;
    let parts = decompose_semisimple(&t).map_err(err)?;
    Ok(parts.iter().map(|s| fmt_rational(&s.gamma)).collect())
}

/// Evaluate a tangle program; returns the same JSON text as `modtrace eval`.
#[pyfunction]
fn evaluate_tangle(text: &str) -> PyResult<String> {
    Ok(eval_text(text).map_err(err)?.to_string())
}

/// Run verification suites; returns (all_passed, report JSON).
#[pyfunction]
#[pyo3(signature = (ell, samples = 5, seed = 0, suites = None))]
fn verify(ell: u64, samples: usize, seed: u64, suites: Option<Vec<String>>) -> PyResult<(bool, String)> {
    let mut cfg = VerifyConfig::new(ell, samples, seed);
    if let Some(s) = suites {
        cfg.suites = s;
    }
    let r = run_verify(&cfg).map_err(err)?;
    Ok((r.passed(), r.to_json().to_string()))
}

#[pymodule]
#[pyo3(name = "modtrace")]
fn modtrace_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(modified_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(twist_scalar, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_tangle, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_ell_is_rejected() {
        assert!(params(2).is_err());
        assert!(params(1).is_err());
        assert_eq!(params(6).unwrap().r, 3);
    }
}
