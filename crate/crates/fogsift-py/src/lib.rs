//! Python bindings: the main fogsift types and operations, thinly wrapped.
//! Library errors surface as ValueError with the library's message text.

use std::collections::BTreeMap;
use std::path::PathBuf;

use pyo3::exceptions::PyValueError;
use pyo3::conversion::IntoPyObjectExt;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use fogsift::{
    BreakpointMode, Interpolant, PipelineConfig, Sample, SynthProfile,
};

fn err(e: fogsift::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_to_py(py: Python<'_>, value: &serde_json::Value) -> Py<PyAny> {
    match value {
        serde_json::Value::Null => py.None(),
        serde_json::Value::Bool(b) => b.into_py_any(py).unwrap(),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_py_any(py).unwrap()
            } else {
                n.as_f64().unwrap_or(f64::NAN).into_py_any(py).unwrap()
            }
        }
        serde_json::Value::String(s) => s.into_py_any(py).unwrap(),
        serde_json::Value::Array(items) => {
            let list = PyList::new(py, items.iter().map(|v| json_to_py(py, v))).unwrap();
            list.into_any().unbind()
        }
        serde_json::Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, v) in map {
                dict.set_item(k, json_to_py(py, v)).unwrap();
            }
            dict.into_any().unbind()
        }
    }
}

#[pyclass(name = "TimeSeries", from_py_object)]
#[derive(Clone)]
struct PyTimeSeries {
    inner: fogsift::TimeSeries,
}

#[pymethods]
impl PyTimeSeries {
    /// Builds a validated series from parallel timestamp and value lists.
    #[new]
    #[pyo3(signature = (variable, timestamps, values, unit = ""))]
    fn new(
        variable: &str,
        timestamps: Vec<i64>,
        values: Vec<f64>,
        unit: &str,
    ) -> PyResult<Self> {
        if timestamps.len() != values.len() {
            return Err(PyValueError::new_err(
                "timestamps and values must have equal length",
            ));
        }
        let samples = timestamps
            .into_iter()
            .zip(values)
            .map(|(t, v)| Sample::new(t, v))
            .collect();
        let inner = fogsift::validate_series(fogsift::TimeSeries::new(variable, unit, samples))
            .map_err(err)?;
        Ok(PyTimeSeries { inner })
    }

    #[getter]
    fn variable(&self) -> &str {
        &self.inner.variable
    }

    #[getter]
    fn unit(&self) -> &str {
        &self.inner.unit
    }

    #[getter]
    fn timestamps(&self) -> Vec<i64> {
        self.inner.timestamps()
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.inner.values()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "TimeSeries(variable='{}', n={})",
            self.inner.variable,
            self.inner.len()
        )
    }
}

#[pyclass(name = "Batch", frozen, from_py_object)]
#[derive(Clone)]
struct PyBatch {
    inner: fogsift::Batch,
}

#[pymethods]
impl PyBatch {
    #[getter]
    fn window_start(&self) -> i64 {
        self.inner.window_start
    }

    #[getter]
    fn window_end(&self) -> i64 {
        self.inner.window_end
    }

    #[getter]
    fn min(&self) -> f64 {
        self.inner.min
    }

    #[getter]
    fn max(&self) -> f64 {
        self.inner.max
    }

    #[getter]
    fn mean(&self) -> f64 {
        self.inner.mean
    }

    #[getter]
    fn count(&self) -> usize {
        self.inner.count
    }

    fn __repr__(&self) -> String {
        format!(
            "Batch(start={}, min={}, max={}, mean={}, count={})",
            self.inner.window_start, self.inner.min, self.inner.max, self.inner.mean,
            self.inner.count
        )
    }
}

#[pyclass(name = "Event", frozen, from_py_object)]
#[derive(Clone)]
struct PyEvent {
    inner: fogsift::Event,
}

#[pymethods]
impl PyEvent {
    #[getter]
    fn variable(&self) -> &str {
        &self.inner.variable
    }

    #[getter]
    fn timestamp(&self) -> i64 {
        self.inner.timestamp
    }

    #[getter]
    fn observed(&self) -> f64 {
        self.inner.observed
    }

    #[getter]
    fn band_low(&self) -> f64 {
        self.inner.band_low
    }

    #[getter]
    fn band_high(&self) -> f64 {
        self.inner.band_high
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.as_str()
    }

    fn __repr__(&self) -> String {
        format!(
            "Event(variable='{}', t={}, kind='{}', observed={})",
            self.inner.variable,
            self.inner.timestamp,
            self.inner.kind.as_str(),
            self.inner.observed
        )
    }
}

#[pyclass(name = "ReducedSeries", frozen, from_py_object)]
#[derive(Clone)]
struct PyReducedSeries {
    inner: fogsift::ReducedSeries,
}

#[pymethods]
impl PyReducedSeries {
    #[getter]
    fn variable(&self) -> &str {
        &self.inner.variable
    }

    #[getter]
    fn method(&self) -> &'static str {
        self.inner.method.as_str()
    }

    #[getter]
    fn timestamps(&self) -> Vec<i64> {
        self.inner.points.iter().map(|p| p.timestamp).collect()
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.inner.points.iter().map(|p| p.value).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "ReducedSeries(variable='{}', method='{}', n={})",
            self.inner.variable,
            self.inner.method.as_str(),
            self.inner.len()
        )
    }
}

#[pyclass(name = "SaxWord", frozen, from_py_object)]
#[derive(Clone)]
struct PySaxWord {
    inner: fogsift::SaxWord,
}

#[pymethods]
impl PySaxWord {
    #[getter]
    fn symbols(&self) -> Vec<usize> {
        self.inner.symbols.clone()
    }

    #[getter]
    fn alphabet_size(&self) -> usize {
        self.inner.alphabet_size
    }

    #[getter]
    fn breakpoints(&self) -> Vec<f64> {
        self.inner.breakpoints.clone()
    }

    fn letters(&self) -> String {
        self.inner.to_letters()
    }

    fn __repr__(&self) -> String {
        format!("SaxWord('{}')", self.inner.to_letters())
    }
}

#[pyclass(name = "GofReport", frozen, from_py_object)]
#[derive(Clone)]
struct PyGofReport {
    inner: fogsift::GofReport,
}

#[pymethods]
impl PyGofReport {
    #[getter]
    fn variable(&self) -> &str {
        &self.inner.variable
    }

    #[getter]
    fn method(&self) -> &str {
        &self.inner.method
    }

    #[getter]
    fn sse(&self) -> f64 {
        self.inner.sse
    }

    #[getter]
    fn sst(&self) -> f64 {
        self.inner.sst
    }

    #[getter]
    fn r_square(&self) -> f64 {
        self.inner.r_square
    }

    #[getter]
    fn rmse(&self) -> f64 {
        self.inner.rmse
    }

    #[getter]
    fn raw_count(&self) -> usize {
        self.inner.raw_count
    }

    #[getter]
    fn reduced_count(&self) -> usize {
        self.inner.reduced_count
    }

    #[getter]
    fn reduction_ratio(&self) -> f64 {
        self.inner.reduction_ratio
    }

    fn __repr__(&self) -> String {
        format!(
            "GofReport(variable='{}', method='{}', rmse={}, r_square={}, ratio={})",
            self.inner.variable,
            self.inner.method,
            self.inner.rmse,
            self.inner.r_square,
            self.inner.reduction_ratio
        )
    }
}

#[pyclass(name = "PipelineConfig", from_py_object)]
#[derive(Clone)]
struct PyPipelineConfig {
    inner: PipelineConfig,
}

impl PyPipelineConfig {
    fn to_core(&self) -> PipelineConfig {
        self.inner.clone()
    }
}

#[pymethods]
impl PyPipelineConfig {
    #[new]
    #[pyo3(signature = (**kwargs))]
    fn new(kwargs: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let mut inner = PipelineConfig::default();
        if let Some(kwargs) = kwargs {
            for (key, value) in kwargs {
                let key: String = key.extract()?;
                let value: String = value.str()?.extract()?;
                inner.set(&key, &value).map_err(err)?;
            }
        }
        inner.validate().map_err(err)?;
        Ok(PyPipelineConfig { inner })
    }

    fn set(&mut self, key: &str, value: &str) -> PyResult<()> {
        self.inner.set(key, value).map_err(err)?;
        self.inner.validate().map_err(err)
    }

    fn as_dict(&self, py: Python<'_>) -> Py<PyAny> {
        json_to_py(py, &serde_json::to_value(&self.inner).unwrap())
    }

    fn __repr__(&self) -> String {
        format!(
            "PipelineConfig(batch_minutes={}, extraction_method='{}', interpolant='{}')",
            self.inner.batch_minutes,
            self.inner.extraction_method.as_str(),
            self.inner.interpolant.as_str()
        )
    }
}

// --- fog-node primitives ---

#[pyfunction]
fn aggregate_batches(series: &PyTimeSeries, batch_minutes: u32) -> Vec<PyBatch> {
    fogsift::aggregate_batches(&series.inner, batch_minutes)
        .into_iter()
        .map(|inner| PyBatch { inner })
        .collect()
}

#[pyfunction]
fn check_outliers(batch: &PyBatch, variable: &str, weight: f64) -> Vec<PyEvent> {
    fogsift::check_outliers(&batch.inner, variable, weight)
        .into_iter()
        .map(|inner| PyEvent { inner })
        .collect()
}

#[pyfunction]
#[pyo3(signature = (batches, variable, day_boundary = 0))]
fn extract_daily_extrema(
    batches: Vec<PyBatch>,
    variable: &str,
    day_boundary: u32,
) -> PyReducedSeries {
    let inner: Vec<fogsift::Batch> = batches.into_iter().map(|b| b.inner).collect();
    PyReducedSeries {
        inner: fogsift::extract_daily_extrema(&inner, variable, day_boundary),
    }
}

#[pyfunction]
fn detect_trend_changes(series: &PyTimeSeries, delta: f64) -> PyResult<PyReducedSeries> {
    Ok(PyReducedSeries {
        inner: fogsift::detect_trend_changes(&series.inner, delta).map_err(err)?,
    })
}

// --- PAA / SAX ---

#[pyfunction]
fn z_normalize(values: Vec<f64>) -> PyResult<Vec<f64>> {
    fogsift::z_normalize(&values).map_err(err)
}

#[pyfunction]
fn paa_transform(values: Vec<f64>, frames: usize) -> PyResult<Vec<f64>> {
    Ok(fogsift::paa_transform(&values, frames).map_err(err)?.values)
}

#[pyfunction]
fn paa_distance(
    x: Vec<f64>,
    y: Vec<f64>,
    source_length: usize,
) -> PyResult<f64> {
    let frames = x.len();
    let px = fogsift::PaaVector {
        values: x,
        source_length,
        frame_count: frames,
    };
    let py_ = fogsift::PaaVector {
        values: y,
        source_length,
        frame_count: frames,
    };
    fogsift::paa_distance(&px, &py_).map_err(err)
}

#[pyfunction]
fn euclidean_distance(x: Vec<f64>, y: Vec<f64>) -> PyResult<f64> {
    fogsift::euclidean_distance(&x, &y).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (alphabet_size, mode = "gaussian", data = None))]
fn sax_breakpoints(
    alphabet_size: usize,
    mode: &str,
    data: Option<Vec<f64>>,
) -> PyResult<Vec<f64>> {
    let mode: BreakpointMode = mode.parse().map_err(err)?;
    fogsift::sax_breakpoints(alphabet_size, mode, data.as_deref()).map_err(err)
}

#[pyfunction]
fn sax_symbolize(
    paa_values: Vec<f64>,
    breakpoints: Vec<f64>,
    alphabet_size: usize,
) -> PyResult<PySaxWord> {
    let frames = paa_values.len();
    let paa = fogsift::PaaVector {
        values: paa_values,
        source_length: frames,
        frame_count: frames,
    };
    Ok(PySaxWord {
        inner: fogsift::sax_symbolize(&paa, &breakpoints, alphabet_size).map_err(err)?,
    })
}

#[pyfunction]
fn symbol_deviation_event(
    expected: &PySaxWord,
    observed: &PySaxWord,
    at: i64,
    variable: &str,
) -> PyResult<Option<PyEvent>> {
    Ok(
        fogsift::symbol_deviation_event(&expected.inner, &observed.inner, at, variable)
            .map_err(err)?
            .map(|inner| PyEvent { inner }),
    )
}

// --- interpolants and metrics ---

fn knots_from(xs: Vec<f64>, ys: Vec<f64>) -> PyResult<fogsift::Knots> {
    fogsift::Knots::new(xs, ys).map_err(err)
}

#[pyfunction]
fn linear_interpolate(xs: Vec<f64>, ys: Vec<f64>, queries: Vec<f64>) -> PyResult<Vec<f64>> {
    fogsift::linear_interpolate(&knots_from(xs, ys)?, &queries).map_err(err)
}

#[pyfunction]
fn cubic_spline(xs: Vec<f64>, ys: Vec<f64>, queries: Vec<f64>) -> PyResult<Vec<f64>> {
    fogsift::cubic_spline(&knots_from(xs, ys)?, &queries).map_err(err)
}

#[pyfunction]
fn pchip(xs: Vec<f64>, ys: Vec<f64>, queries: Vec<f64>) -> PyResult<Vec<f64>> {
    fogsift::pchip(&knots_from(xs, ys)?, &queries).map_err(err)
}

#[pyfunction]
fn lagrange_fit(xs: Vec<f64>, ys: Vec<f64>) -> PyResult<Vec<f64>> {
    Ok(fogsift::lagrange_fit(&knots_from(xs, ys)?)
        .map_err(err)?
        .coeffs)
}

#[pyfunction]
fn polynomial_eval(coeffs: Vec<f64>, x: f64) -> PyResult<f64> {
    fogsift::polynomial_eval(&fogsift::PolynomialCoefficients { coeffs }, x).map_err(err)
}

#[pyfunction]
fn reconstruct(
    reduced: &PyReducedSeries,
    grid_step_seconds: i64,
    method: &str,
) -> PyResult<PyTimeSeries> {
    let method: Interpolant = method.parse().map_err(err)?;
    Ok(PyTimeSeries {
        inner: fogsift::reconstruct(&reduced.inner, grid_step_seconds, method).map_err(err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (observed, fitted, weights = None))]
fn sse(observed: Vec<f64>, fitted: Vec<f64>, weights: Option<Vec<f64>>) -> PyResult<f64> {
    fogsift::sse(&observed, &fitted, weights.as_deref()).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (observed, weights = None))]
fn sst(observed: Vec<f64>, weights: Option<Vec<f64>>) -> PyResult<f64> {
    fogsift::sst(&observed, weights.as_deref()).map_err(err)
}

#[pyfunction]
fn r_square(sse: f64, sst: f64) -> PyResult<f64> {
    fogsift::r_square(sse, sst).map_err(err)
}

#[pyfunction]
fn rmse(sse: f64, n: usize) -> PyResult<f64> {
    fogsift::rmse(sse, n).map_err(err)
}

#[pyfunction]
fn evaluate(
    raw: &PyTimeSeries,
    reconstructed: &PyTimeSeries,
    reduced_count: usize,
    method: &str,
) -> PyResult<PyGofReport> {
    Ok(PyGofReport {
        inner: fogsift::evaluate(&raw.inner, &reconstructed.inner, reduced_count, method)
            .map_err(err)?,
    })
}

// --- pipeline ---

#[pyfunction]
#[pyo3(signature = (days, cadence_minutes, profile, seed = 42))]
fn generate_synthetic(
    days: u32,
    cadence_minutes: u32,
    profile: &str,
    seed: u64,
) -> PyResult<PyTimeSeries> {
    let profile: SynthProfile = profile.parse().map_err(err)?;
    Ok(PyTimeSeries {
        inner: fogsift::generate_synthetic(days, cadence_minutes, profile, seed).map_err(err)?,
    })
}

#[pyfunction]
fn preprocess(series: &PyTimeSeries, config: &PyPipelineConfig) -> PyTimeSeries {
    PyTimeSeries {
        inner: fogsift::preprocess(&series.inner, &config.to_core()),
    }
}

#[pyfunction]
fn run_fog_node(
    py: Python<'_>,
    series: &PyTimeSeries,
    config: &PyPipelineConfig,
) -> PyResult<(PyReducedSeries, Vec<PyEvent>, Py<PyAny>)> {
    let (reduced, events, messages) =
        fogsift::run_fog_node(&series.inner, &config.to_core()).map_err(err)?;
    let messages = json_to_py(py, &serde_json::to_value(&messages).unwrap());
    Ok((
        PyReducedSeries { inner: reduced },
        events.into_iter().map(|inner| PyEvent { inner }).collect(),
        messages,
    ))
}

#[pyfunction]
fn run_cloud(
    reduced: &PyReducedSeries,
    raw_for_scoring: &PyTimeSeries,
    config: &PyPipelineConfig,
) -> PyResult<(PyTimeSeries, PyGofReport)> {
    let (recon, gof) =
        fogsift::run_cloud(&reduced.inner, &raw_for_scoring.inner, &config.to_core())
            .map_err(err)?;
    Ok((PyTimeSeries { inner: recon }, PyGofReport { inner: gof }))
}

/// Full run over an input CSV; writes the report files and returns the run
/// report as a dict.
#[pyfunction]
fn run_pipeline_file(
    py: Python<'_>,
    input_csv: PathBuf,
    out_dir: PathBuf,
    config: &PyPipelineConfig,
) -> PyResult<Py<PyAny>> {
    let series_map = fogsift::ingest_csv(&input_csv).map_err(err)?;
    let run = fogsift::run_pipeline(&series_map, &config.to_core()).map_err(err)?;
    fogsift::emit_report(&run, &out_dir).map_err(err)?;
    Ok(json_to_py(py, &serde_json::to_value(&run.report).unwrap()))
}

/// In-memory full run over a list of series; returns per-variable reports.
#[pyfunction]
fn run_pipeline(
    series_list: Vec<PyTimeSeries>,
    config: &PyPipelineConfig,
) -> PyResult<Vec<PyGofReport>> {
    let mut map = BTreeMap::new();
    for s in series_list {
        map.insert(s.inner.variable.clone(), s.inner);
    }
    let run = fogsift::run_pipeline(&map, &config.to_core()).map_err(err)?;
    Ok(run
        .report
        .per_variable
        .into_iter()
        .map(|inner| PyGofReport { inner })
        .collect())
}

#[pymodule]
fn fogsift_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTimeSeries>()?;
    m.add_class::<PyBatch>()?;
    m.add_class::<PyEvent>()?;
    m.add_class::<PyReducedSeries>()?;
    m.add_class::<PySaxWord>()?;
    m.add_class::<PyGofReport>()?;
    m.add_class::<PyPipelineConfig>()?;

    m.add_function(wrap_pyfunction!(aggregate_batches, m)?)?;
    m.add_function(wrap_pyfunction!(check_outliers, m)?)?;
    m.add_function(wrap_pyfunction!(extract_daily_extrema, m)?)?;
    m.add_function(wrap_pyfunction!(detect_trend_changes, m)?)?;
    m.add_function(wrap_pyfunction!(z_normalize, m)?)?;
    m.add_function(wrap_pyfunction!(paa_transform, m)?)?;
    m.add_function(wrap_pyfunction!(paa_distance, m)?)?;
    m.add_function(wrap_pyfunction!(euclidean_distance, m)?)?;
    m.add_function(wrap_pyfunction!(sax_breakpoints, m)?)?;
    m.add_function(wrap_pyfunction!(sax_symbolize, m)?)?;
    m.add_function(wrap_pyfunction!(symbol_deviation_event, m)?)?;
    m.add_function(wrap_pyfunction!(linear_interpolate, m)?)?;
    m.add_function(wrap_pyfunction!(cubic_spline, m)?)?;
    m.add_function(wrap_pyfunction!(pchip, m)?)?;
    m.add_function(wrap_pyfunction!(lagrange_fit, m)?)?;
    m.add_function(wrap_pyfunction!(polynomial_eval, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(sse, m)?)?;
    m.add_function(wrap_pyfunction!(sst, m)?)?;
    m.add_function(wrap_pyfunction!(r_square, m)?)?;
    m.add_function(wrap_pyfunction!(rmse, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(generate_synthetic, m)?)?;
    m.add_function(wrap_pyfunction!(preprocess, m)?)?;
    m.add_function(wrap_pyfunction!(run_fog_node, m)?)?;
    m.add_function(wrap_pyfunction!(run_cloud, m)?)?;
    m.add_function(wrap_pyfunction!(run_pipeline, m)?)?;
    m.add_function(wrap_pyfunction!(run_pipeline_file, m)?)?;
    Ok(())
}
