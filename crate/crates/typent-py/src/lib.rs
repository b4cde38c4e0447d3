//! Python bindings for the main closed forms, expansions and samplers.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use typent_core::asymptotics as asym;
use typent_core::closedform as cf;
use typent_core::ensembles as ens;
use typent_core::entropy::{
    rdm_spectrum_full, rdm_spectrum_sector, vn_entropy, PartitionSpec, RdmSpectrum,
};

fn value_err(e: typent_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Average entanglement entropy of Haar-random states at dimensions (d_a, d_b).
#[pyfunction]
fn page_average(d_a: u64, d_b: u64) -> PyResult<f64> {
    if d_a < 1 || d_b < 1 {
        return Err(PyValueError::new_err("dimensions must be >= 1"));
    }
    Ok(cf::page_average(d_a, d_b))
}

/// Variance of the entanglement entropy of Haar-random states.
#[pyfunction]
fn page_variance(d_a: u64, d_b: u64) -> PyResult<f64> {
    if d_a < 1 || d_b < 1 {
        return Err(PyValueError::new_err("dimensions must be >= 1"));
    }
    Ok(cf::page_variance(d_a, d_b))
}

/// Fixed-N average for general pure states.
#[pyfunction]
fn fixed_n_average(v: u32, v_a: u32, n: u32) -> PyResult<f64> {
    Ok(cf::fixed_n_average(&cf::FixedNSpec::new(v, v_a, n).map_err(value_err)?))
}

/// Fixed-N variance for general pure states.
#[pyfunction]
fn fixed_n_variance(v: u32, v_a: u32, n: u32) -> PyResult<f64> {
    Ok(cf::fixed_n_variance(&cf::FixedNSpec::new(v, v_a, n).map_err(value_err)?))
}

/// Weighted-ensemble average; `gaussian` selects the Gaussian fixed-N inputs.
#[pyfunction]
#[pyo3(signature = (v, v_a, w, gaussian=false))]
fn weighted_average(v: u32, v_a: u32, w: f64, gaussian: bool) -> PyResult<f64> {
    Ok(cf::weighted_average(&cf::WeightedSpec::new(v, v_a, w).map_err(value_err)?, gaussian))
}

/// Weighted-ensemble variance.
#[pyfunction]
#[pyo3(signature = (v, v_a, w, gaussian=false))]
fn weighted_variance(v: u32, v_a: u32, w: f64, gaussian: bool) -> PyResult<f64> {
    Ok(cf::weighted_variance(&cf::WeightedSpec::new(v, v_a, w).map_err(value_err)?, gaussian))
}

/// Average entanglement entropy over all pure fermionic Gaussian states.
#[pyfunction]
fn gaussian_average(v: u32, v_a: u32) -> PyResult<f64> {
    Ok(cf::gaussian_average(&PartitionSpec::new(v, v_a).map_err(value_err)?))
}

/// Variance over all Gaussian states; mode "exact" (truncated double sum)
/// or "asymptotic".
#[pyfunction]
#[pyo3(signature = (v, v_a, mode="exact"))]
fn gaussian_variance(v: u32, v_a: u32, mode: &str) -> PyResult<f64> {
    let part = PartitionSpec::new(v, v_a).map_err(value_err)?;
    let mode = match mode {
        "exact" => cf::GaussianVarianceMode::ExactSum,
        "asymptotic" => cf::GaussianVarianceMode::Asymptotic,
        other => return Err(PyValueError::new_err(format!("unknown mode {other:?}"))),
    };
    Ok(cf::gaussian_variance(&part, mode))
}

/// Fixed-N Gaussian average.
#[pyfunction]
fn gaussian_fixed_n_average(v: u32, v_a: u32, n: u32) -> PyResult<f64> {
    Ok(cf::gaussian_fixed_n_average(&cf::FixedNSpec::new(v, v_a, n).map_err(value_err)?))
}

/// Leading-order fixed-N Gaussian variance at (f, n).
#[pyfunction]
fn gaussian_fixed_n_variance_asymptotic(f: f64, n: f64) -> PyResult<f64> {
    cf::gaussian_fixed_n_variance_asymptotic(f, n).map_err(value_err)
}

/// Large-V mean of the fixed-N general-state ensemble.
#[pyfunction]
fn fixed_n_thermo(v: u32, f: f64, n: f64) -> f64 {
    asym::fixed_n_thermo(v, f, n)
}

/// Large-V mean of the weighted Gaussian ensemble.
#[pyfunction]
fn gaussian_weighted_thermo(v: u32, f: f64, nbar: f64) -> f64 {
    asym::gaussian_weighted_thermo(v, f, nbar)
}

/// Exact fixed-N bosonic average.
#[pyfunction]
fn bosonic_fixed_n_exact(v: u32, v_a: u32, n: u32) -> f64 {
    asym::bosonic_fixed_n_exact(v, v_a, n)
}

/// Von Neumann entropy of an RDM spectrum.
#[pyfunction]
fn spectrum_entropy(eigenvalues: Vec<f64>) -> PyResult<f64> {
    let spec = RdmSpectrum::new(eigenvalues, None).map_err(value_err)?;
    Ok(vn_entropy(&spec))
}

fn mc_report(py: Python<'_>, est: ens::EntropyEstimate, closed: f64) -> PyResult<Py<pyo3::types::PyDict>> {
    let dict = pyo3::types::PyDict::new(py);
    dict.set_item("mean", est.mean)?;
    dict.set_item("stderr", est.stderr)?;
    dict.set_item("sample_variance", est.sample_variance)?;
    dict.set_item("n_samples", est.n_samples)?;
    dict.set_item("seed", est.master_seed)?;
    dict.set_item("closed_form", closed)?;
    dict.set_item("z_score", (est.mean - closed) / est.stderr)?;
    Ok(dict.unbind())
}

/// Monte Carlo estimate for one of the state ensembles
/// ("page", "sector", "gaussian", "gaussian-fixed-n"); returns a dict with
/// mean, stderr, closed_form and z_score.
#[pyfunction]
#[pyo3(signature = (ensemble, v, v_a, n_samples, seed, n=None, workers=0))]
fn mc_entropy(
    py: Python<'_>,
    ensemble: &str,
    v: u32,
    v_a: u32,
    n_samples: u64,
    seed: u64,
    n: Option<u32>,
    workers: usize,
) -> PyResult<Py<pyo3::types::PyDict>> {
    let part = PartitionSpec::new(v, v_a).map_err(value_err)?;
    let (est, closed) = match ensemble {
        "page" => {
            if v > 26 {
                return Err(PyValueError::new_err("page sampling limited to V <= 26"));
            }
            let est = ens::mc_estimate(
                |rng| ens::sample_haar_state(v, rng),
                |s| vn_entropy(&rdm_spectrum_full(s, &part).unwrap()),
                n_samples,
                seed,
                workers,
            );
            (est, cf::page_average(1 << v_a, 1 << (v - v_a)))
        }
        "sector" => {
            let n = n.ok_or_else(|| PyValueError::new_err("sector ensemble needs n"))?;
            let est = ens::mc_estimate(
                |rng| ens::sample_sector_state(v, n, rng),
                |s| vn_entropy(&rdm_spectrum_sector(s, &part).unwrap()),
                n_samples,
                seed,
                workers,
            );
            let closed = cf::fixed_n_average(&cf::FixedNSpec::new(v, v_a, n).map_err(value_err)?);
            (est, closed)
        }
        "gaussian" => {
            let est = ens::mc_estimate(
                |rng| ens::sample_gaussian_state(v, rng),
                |rep| rep.entanglement_entropy(v_a).unwrap(),
                n_samples,
                seed,
                workers,
            );
            (est, cf::gaussian_average(&part))
        }
        "gaussian-fixed-n" => {
            let n = n.ok_or_else(|| PyValueError::new_err("gaussian-fixed-n needs n"))?;
            let est = ens::mc_estimate(
                |rng| ens::sample_gaussian_fixed_n(v, n, rng),
                |rep| rep.entanglement_entropy(v_a).unwrap(),
                n_samples,
                seed,
                workers,
            );
            let closed =
                cf::gaussian_fixed_n_average(&cf::FixedNSpec::new(v, v_a, n).map_err(value_err)?);
            (est, closed)
        }
        other => return Err(PyValueError::new_err(format!("unknown ensemble {other:?}"))),
    };
    mc_report(py, est, closed)
}

/// Run one acceptance criterion (1..=13); returns (passed, summary_line).
#[pyfunction]
#[pyo3(signature = (id, quick=true, seed=20260810))]
fn run_criterion(id: u32, quick: bool, seed: u64) -> PyResult<(bool, String)> {
    if !(1..=13).contains(&id) {
        return Err(PyValueError::new_err("criterion id must be in 1..=13"));
    }
    let suite = if quick {
        typent_core::validate::Suite::Quick
    } else {
        typent_core::validate::Suite::Full
    };
    let report = std::panic::catch_unwind(|| typent_core::validate::run_criterion(id, suite, seed))
        .map_err(|_| PyRuntimeError::new_err("criterion panicked"))?;
    Ok((report.passed, report.summary_line()))
}

#[pymodule]
fn typent(m: &Bound<'_, PyModule>) -> PyResult<()> {
    typent_core::set_blas_threads(1);
    m.add_function(wrap_pyfunction!(page_average, m)?)?;
    m.add_function(wrap_pyfunction!(page_variance, m)?)?;
    m.add_function(wrap_pyfunction!(fixed_n_average, m)?)?;
    m.add_function(wrap_pyfunction!(fixed_n_variance, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_average, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_variance, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_average, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_variance, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_fixed_n_average, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_fixed_n_variance_asymptotic, m)?)?;
    m.add_function(wrap_pyfunction!(fixed_n_thermo, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_weighted_thermo, m)?)?;
    m.add_function(wrap_pyfunction!(bosonic_fixed_n_exact, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(mc_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(run_criterion, m)?)?;
    Ok(())
}
