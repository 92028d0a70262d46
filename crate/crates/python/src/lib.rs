//! Python bindings: `import ambc_pls`.

use std::collections::HashMap;

use ambc_pls_core::model::{PlacementMode, Scenario as CoreScenario, Triple};
use ambc_pls_core::montecarlo::{EstimateWithCI, SimConfig};
use ambc_pls_core::sweep::{self as core_sweep, parse_values, Axis, ResultRow, ScenarioDocument, SweepSpec};
use ambc_pls_core::{intercept as ip, outage as op, Error};
use pyo3::exceptions::{PyRuntimeError, PyTypeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Validation(_) | Error::Parse(_) | Error::Json(_) => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn triple(t: Triple<f64>) -> HashMap<&'static str, f64> {
    HashMap::from([("far", t.far), ("near", t.near), ("bd", t.bd)])
}

fn json_value(v: &Bound<'_, PyAny>) -> PyResult<serde_json::Value> {
    if let Ok(b) = v.extract::<bool>() {
        return Err(PyTypeError::new_err(format!("unexpected boolean {b}")));
    }
    if let Ok(n) = v.extract::<u64>() {
        return Ok(n.into());
    }
    if let Ok(x) = v.extract::<f64>() {
        return serde_json::Number::from_f64(x)
            .map(serde_json::Value::Number)
            .ok_or_else(|| PyValueError::new_err(format!("{x} is not a finite number")));
    }
    if let Ok(s) = v.extract::<String>() {
        return Ok(s.into());
    }
    Err(PyTypeError::new_err("scenario values must be numbers or strings"))
}

/// A validated scenario. Keyword arguments use the scenario-file keys;
/// anything not given takes its baseline value.
#[pyclass(frozen, from_py_object)]
#[derive(Clone, Copy)]
struct Scenario {
    inner: CoreScenario,
}

#[pymethods]
impl Scenario {
    #[new]
    #[pyo3(signature = (**kwargs))]
    fn new(kwargs: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let mut map = serde_json::Map::new();
        if let Some(kwargs) = kwargs {
            for (k, v) in kwargs.iter() {
                map.insert(k.extract::<String>()?, json_value(&v)?);
            }
        }
        let text = serde_json::Value::Object(map).to_string();
        let inner = core_sweep::parse_scenario(&text).map_err(to_py)?;
        Ok(Scenario { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        core_sweep::parse_scenario(text)
            .map(|inner| Scenario { inner })
            .map_err(to_py)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        core_sweep::load_scenario(path)
            .map(|inner| Scenario { inner })
            .map_err(to_py)
    }

    #[allow(clippy::wrong_self_convention)]
    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&ScenarioDocument::from_scenario(&self.inner))
            .map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    fn with_gamma_db(&self, db: f64) -> PyResult<Self> {
        let inner = self.inner.with_gamma_db(db).validate().map_err(|e| to_py(e.into()))?;
        Ok(Scenario { inner })
    }

    #[getter]
    fn gamma_db(&self) -> f64 {
        self.inner.gamma_db()
    }

    fn warnings(&self) -> Vec<String> {
        self.inner.warnings()
    }

    fn __repr__(&self) -> String {
        format!(
            "Scenario(gamma_db={:.4}, lambda_e={})",
            self.inner.gamma_db(),
            self.inner.eves.lambda_e
        )
    }
}

#[pyfunction]
fn outage(s: &Scenario) -> PyResult<HashMap<&'static str, f64>> {
    op::op_all(&s.inner).map(triple).map_err(to_py)
}

#[pyfunction]
fn outage_asymptotic(s: &Scenario) -> PyResult<HashMap<&'static str, f64>> {
    op::op_all_asy(&s.inner).map(triple).map_err(to_py)
}

#[pyfunction]
fn outage_floors(s: &Scenario) -> PyResult<HashMap<&'static str, f64>> {
    op::op_floors(&s.inner).map(triple).map_err(to_py)
}

#[pyfunction]
fn intercept(s: &Scenario) -> PyResult<HashMap<&'static str, f64>> {
    ip::ip_all(&s.inner).map(triple).map_err(to_py)
}

#[pyfunction]
fn intercept_asymptotic(s: &Scenario) -> PyResult<HashMap<&'static str, f64>> {
    ip::ip_all_asy(&s.inner).map(triple).map_err(to_py)
}

fn sim_config(s: &CoreScenario, trials: u64, seed: u64, mode: Option<&str>) -> PyResult<SimConfig> {
    let placement = match mode {
        Some(m) => m.parse::<PlacementMode>().map_err(to_py)?,
        None => s.eves.placement,
    };
    let sim = SimConfig::new(trials, seed).with_placement(placement);
    sim.validate().map_err(|e| to_py(e.into()))?;
    Ok(sim)
}

fn estimate_dict<'py>(py: Python<'py>, e: &EstimateWithCI) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("p", e.p_hat)?;
    d.set_item("ci_lo", e.ci_lo)?;
    d.set_item("ci_hi", e.ci_hi)?;
    d.set_item("trials", e.trials)?;
    Ok(d)
}

/// Monte Carlo outage and intercept frequencies, keyed `op_f` … `ip_c`.
#[pyfunction]
#[pyo3(signature = (s, trials = 100_000, seed = 1, mode = None))]
fn simulate<'py>(
    py: Python<'py>,
    s: &Scenario,
    trials: u64,
    seed: u64,
    mode: Option<&str>,
) -> PyResult<Bound<'py, PyDict>> {
    let sim = sim_config(&s.inner, trials, seed, mode)?;
    let inner = s.inner;
    let (op, ip) = py
        .detach(|| {
            Ok::<_, Error>((
                ambc_pls_core::montecarlo::estimate_op(&inner, &sim)?,
                ambc_pls_core::montecarlo::estimate_ip(&inner, &sim)?,
            ))
        })
        .map_err(to_py)?;
    let out = PyDict::new(py);
    let names = ["op_f", "op_n", "op_c", "ip_f", "ip_n", "ip_c"];
    for (name, e) in names.iter().zip(op.into_array().iter().chain(ip.into_array().iter())) {
        out.set_item(name, estimate_dict(py, e)?)?;
    }
    Ok(out)
}

fn row_dict<'py>(py: Python<'py>, r: &ResultRow) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("scenario_id", &r.scenario_id)?;
    d.set_item("axis", &r.axis)?;
    d.set_item("axis_value", r.axis_value)?;
    d.set_item("axis2", &r.axis2)?;
    d.set_item("axis2_value", r.axis2_value)?;
    d.set_item("metric", &r.metric)?;
    d.set_item("analytic", r.analytic)?;
    d.set_item("asymptotic", r.asymptotic)?;
    d.set_item("mc", r.mc)?;
    d.set_item("ci_lo", r.ci_lo)?;
    d.set_item("ci_hi", r.ci_hi)?;
    d.set_item("trials", r.trials)?;
    if let Some(e) = &r.error {
        d.set_item("error", e)?;
    }
    Ok(d)
}

/// Rows over `axis`, optionally nested with `axis2`. `values` accepts a
/// list or a `start:stop:step` string.
#[pyfunction]
#[pyo3(signature = (s, axis, values, metrics = "all", axis2 = None, values2 = None, trials = 100_000, seed = 1))]
#[allow(clippy::too_many_arguments)]
fn sweep<'py>(
    py: Python<'py>,
    s: &Scenario,
    axis: &str,
    values: &Bound<'py, PyAny>,
    metrics: &str,
    axis2: Option<&str>,
    values2: Option<&Bound<'py, PyAny>>,
    trials: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyList>> {
    let grid = |v: &Bound<'py, PyAny>| -> PyResult<Vec<f64>> {
        match v.extract::<String>() {
            Ok(text) => parse_values(&text).map_err(to_py),
            Err(_) => v.extract::<Vec<f64>>(),
        }
    };
    let secondary = match (axis2, values2) {
        (Some(a), Some(v)) => Some((a.parse::<Axis>().map_err(to_py)?, grid(v)?)),
        (None, None) => None,
        _ => return Err(PyValueError::new_err("axis2 and values2 go together")),
    };
    let spec = SweepSpec {
        axis: axis.parse().map_err(to_py)?,
        values: grid(values)?,
        secondary,
        selection: metrics.parse().map_err(to_py)?,
    };
    let sim = sim_config(&s.inner, trials, seed, None)?;
    let inner = s.inner;
    let rows = py
        .detach(|| core_sweep::run_sweep(&inner, &spec, Some(&sim)))
        .map_err(to_py)?;
    let list = PyList::empty(py);
    for r in &rows {
        list.append(row_dict(py, r)?)?;
    }
    Ok(list)
}

/// Compares every closed form with a fresh simulation.
#[pyfunction]
#[pyo3(signature = (s, trials = 100_000, seed = 1))]
fn validate<'py>(py: Python<'py>, s: &Scenario, trials: u64, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let sim = sim_config(&s.inner, trials, seed, None)?;
    let inner = s.inner;
    let report = py
        .detach(|| core_sweep::validate_run(&inner, &sim, &Default::default()))
        .map_err(to_py)?;
    let verdicts = PyDict::new(py);
    for v in &report.verdicts {
        let d = estimate_dict(py, &v.mc)?;
        d.set_item("analytic", v.analytic)?;
        d.set_item("deviation", v.deviation)?;
        d.set_item("pass", v.pass)?;
        verdicts.set_item(v.metric.name(), d)?;
    }
    let out = PyDict::new(py);
    out.set_item("passed", report.passed)?;
    out.set_item("worst", report.worst)?;
    out.set_item("verdicts", verdicts)?;
    Ok(out)
}

#[pymodule]
pub fn ambc_pls(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Scenario>()?;
    m.add_function(wrap_pyfunction!(outage, m)?)?;
    m.add_function(wrap_pyfunction!(outage_asymptotic, m)?)?;
    m.add_function(wrap_pyfunction!(outage_floors, m)?)?;
    m.add_function(wrap_pyfunction!(intercept, m)?)?;
    m.add_function(wrap_pyfunction!(intercept_asymptotic, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add("CSV_HEADER", core_sweep::CSV_HEADER.join(","))?;
    Ok(())
}
