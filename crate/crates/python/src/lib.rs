//! Python bindings: seeds, holographic codes, decoding, distances and
//! failure-curve simulation.

use std::path::PathBuf;
use std::str::FromStr;
use std::time::Duration;

use holocode::builder::{build_code, default_seed, HolographicCode};
use holocode::decoder::{Backend, DecodeMode, Decoder, DecoderOptions, LogicalEffect, Objective};
use holocode::distance::{qubit_distances, sector_distances, DistanceOptions, DistanceResult, Sector};
use holocode::sim::{self, FailureCurve, SimConfig, Target, Weights};
use holocode::tiling::{build_tiling, Family, RateVariant};
use holocode::{seed, BitVec, Error, PauliVector, SeedCode};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Invariant(_) | Error::NotIsometry(_) | Error::SolverLimit(_) | Error::Io(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse<T: FromStr<Err = Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(to_py)
}

fn seconds(timeout: Option<f64>) -> Option<Duration> {
    timeout.filter(|t| *t > 0.0).map(Duration::from_secs_f64)
}

#[pyclass(name = "Seed", module = "holocode", frozen)]
struct PySeed(SeedCode);

#[pymethods]
impl PySeed {
    /// Catalog seed by name: `steane`, `scf` or `five-qubit`.
    #[new]
    fn new(name: &str) -> PyResult<Self> {
        seed::by_name(name).map(PySeed).map_err(to_py)
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name.clone()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k()
    }

    fn is_perfect(&self) -> bool {
        self.0.is_perfect()
    }

    fn is_block_perfect(&self) -> bool {
        self.0.is_block_perfect()
    }

    /// The extended tableau in the text format.
    fn tableau(&self) -> PyResult<String> {
        let mut out = Vec::new();
        self.0.write_to(&mut out).map_err(to_py)?;
        Ok(String::from_utf8_lossy(&out).into_owned())
    }

    fn __repr__(&self) -> String {
        format!("Seed('{}', n={}, k={})", self.0.name, self.0.n(), self.0.k())
    }
}

#[pyclass(name = "Code", module = "holocode", frozen)]
struct PyCode(HolographicCode);

fn distance_dict<'py>(py: Python<'py>, d: &DistanceResult) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    out.set_item("qubit", d.qubit)?;
    out.set_item("layer", d.layer)?;
    out.set_item("sector", format!("{:?}", d.sector).to_lowercase())?;
    out.set_item("bit_distance", d.bit_distance.value)?;
    out.set_item("word_distance", d.word_distance.value)?;
    out.set_item("certified", d.bit_distance.certified && d.word_distance.certified)?;
    Ok(out)
}

#[pymethods]
impl PyCode {
    #[staticmethod]
    #[pyo3(signature = (family, radius, variant = "max", seed_code = None))]
    fn build(py: Python<'_>, family: &str, radius: usize, variant: &str, seed_code: Option<&str>) -> PyResult<Self> {
        let family: Family = parse(family)?;
        let variant: RateVariant = parse(variant)?;
        let seed = match seed_code {
            Some(name) => seed::by_name(name).map_err(to_py)?,
            None => default_seed(family, variant),
        };
        py.detach(|| build_code(family, radius, variant, &seed)).map(PyCode).map_err(to_py)
    }

    /// Loads `<stem>.tableau` and `<stem>.json`.
    #[staticmethod]
    fn load(stem: PathBuf) -> PyResult<Self> {
        HolographicCode::load(&stem).map(PyCode).map_err(to_py)
    }

    fn save(&self, stem: PathBuf) -> PyResult<()> {
        self.0.save(&stem).map_err(to_py)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k()
    }

    #[getter]
    fn css(&self) -> bool {
        self.0.css
    }

    #[getter]
    fn rate(&self) -> f64 {
        self.0.rate()
    }

    #[getter]
    fn central_qubit(&self) -> Option<usize> {
        self.0.central_qubit()
    }

    fn stabilizers(&self) -> Vec<String> {
        self.0.stabilizers.iter().map(|s| s.to_string()).collect()
    }

    /// `(layer, x_rep, z_rep)` for every logical qubit.
    fn logicals(&self) -> Vec<(usize, String, String)> {
        self.0
            .logicals
            .iter()
            .map(|l| (l.layer, l.x_rep.to_string(), l.z_rep.to_string()))
            .collect()
    }

    /// Bit and word distance of one logical qubit, the central one by default.
    #[pyo3(signature = (qubit = None, sector = None, backend = "auto", timeout = None))]
    fn distance<'py>(
        &self,
        py: Python<'py>,
        qubit: Option<usize>,
        sector: Option<&str>,
        backend: &str,
        timeout: Option<f64>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let qubit = match qubit {
            Some(q) => q,
            None => Target::Central.resolve(&self.0).map_err(to_py)?,
        };
        let sector: Option<Sector> = sector.map(parse).transpose()?;
        let options = DistanceOptions {
            backend: parse(backend)?,
            timeout: seconds(timeout),
            ..DistanceOptions::default()
        };
        let result = py
            .detach(|| match sector {
                Some(s) => sector_distances(&self.0, qubit, s, &options),
                None => qubit_distances(&self.0, qubit, &options),
            })
            .map_err(to_py)?;
        distance_dict(py, &result)
    }

    fn __repr__(&self) -> String {
        format!("Code(n={}, k={}, css={})", self.0.n, self.0.k(), self.0.css)
    }
}

#[pyclass(name = "Decoder", module = "holocode", frozen)]
struct PyDecoder(Decoder);

#[pymethods]
impl PyDecoder {
    #[new]
    #[pyo3(signature = (code, mode = None, objective = "hamming", backend = "auto", timeout = Some(60.0)))]
    fn new(code: &PyCode, mode: Option<&str>, objective: &str, backend: &str, timeout: Option<f64>) -> PyResult<Self> {
        let options = DecoderOptions {
            mode: mode.map(parse::<DecodeMode>).transpose()?,
            objective: parse::<Objective>(objective)?,
            backend: parse::<Backend>(backend)?,
            timeout: seconds(timeout),
            ..DecoderOptions::default()
        };
        Decoder::new(&code.0, options).map(PyDecoder).map_err(to_py)
    }

    /// Syndrome bits of a Pauli string such as `"IXZY"`.
    fn syndrome(&self, error: &str) -> PyResult<String> {
        let e: PauliVector = parse(error)?;
        Ok(self.0.syndrome(&e).map_err(to_py)?.bits().to_binary_string())
    }

    /// Minimum-weight correction for a binary syndrome string, and whether
    /// it was certified optimal.
    fn decode(&self, py: Python<'_>, syndrome: &str) -> PyResult<(String, bool)> {
        let bits = BitVec::parse_binary(syndrome).map_err(to_py)?;
        let syndrome = self.0.syndrome_from_bits(&bits).map_err(to_py)?;
        let decoded = py.detach(|| self.0.decode(&syndrome)).map_err(to_py)?;
        Ok((decoded.correction.to_string(), decoded.certified))
    }

    /// Logical action of an undetectable operator, one Pauli letter per
    /// logical qubit; `None` if a stabilizer detects it.
    fn logical_effect(&self, op: &str) -> PyResult<Option<String>> {
        let v: PauliVector = parse(op)?;
        Ok(match self.0.net_logical_effect(&v).map_err(to_py)? {
            LogicalEffect::Detectable => None,
            LogicalEffect::Logical(ps) => Some(ps.iter().map(|p| p.to_char()).collect()),
        })
    }
}

#[pyclass(name = "FailureCurve", module = "holocode", frozen)]
struct PyCurve(FailureCurve);

#[pymethods]
impl PyCurve {
    #[getter]
    fn radius(&self) -> usize {
        self.0.radius
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n
    }

    #[getter]
    fn target(&self) -> usize {
        self.0.target
    }

    /// `(a, m, f, P, sigma, timeouts)` per sampled weight.
    fn records(&self) -> Vec<(usize, u64, u64, f64, f64, u64)> {
        self.0
            .records
            .iter()
            .map(|r| (r.a, r.m, r.f, r.p, r.sigma, r.timeouts))
            .collect()
    }

    /// Failure probability and its uncertainty at physical error rate `p`.
    fn mixed(&self, p: f64) -> PyResult<(f64, f64)> {
        self.0.mixed(p).map_err(to_py)
    }

    fn to_csv(&self) -> PyResult<String> {
        let mut out = Vec::new();
        FailureCurve::write_csv(std::slice::from_ref(&self.0), &mut out).map_err(to_py)?;
        Ok(String::from_utf8_lossy(&out).into_owned())
    }
}

#[pyfunction]
#[pyo3(signature = (family, radius, variant = "max"))]
fn tiling_counts(family: &str, radius: usize, variant: &str) -> PyResult<(usize, usize)> {
    let counts = build_tiling(parse(family)?, radius, parse(variant)?).map_err(to_py)?.counts();
    Ok((counts.n, counts.k))
}

#[pyfunction]
#[pyo3(signature = (code, trials = 1000, weights = "auto", seed = 0, target = "central"))]
fn simulate(py: Python<'_>, code: &PyCode, trials: u64, weights: &str, seed: u64, target: &str) -> PyResult<PyCurve> {
    let target = parse::<Target>(target)?.resolve(&code.0).map_err(to_py)?;
    let config = SimConfig {
        weights: parse::<Weights>(weights)?,
        trials,
        seed,
        ..SimConfig::default()
    };
    py.detach(|| {
        let decoder = Decoder::new(&code.0, DecoderOptions::default())?;
        FailureCurve::simulate(&code.0, &decoder, target, &config)
    })
    .map(PyCurve)
    .map_err(to_py)
}

/// Crossing estimate over curves at two or more radii.
#[pyfunction]
fn threshold<'py>(py: Python<'py>, curves: Vec<PyRef<'py, PyCurve>>) -> PyResult<Bound<'py, PyDict>> {
    let curves: Vec<FailureCurve> = curves.iter().map(|c| c.0.clone()).collect();
    let t = sim::estimate_threshold(&curves).map_err(to_py)?;
    let out = PyDict::new(py);
    out.set_item("p_th", t.p_th)?;
    out.set_item("bracket", t.bracket)?;
    let pairs: Vec<((usize, usize), f64)> = t.pairs.iter().map(|p| (p.radii, p.p)).collect();
    out.set_item("pairs", pairs)?;
    Ok(out)
}

#[pyfunction]
fn binomial_mix(table: Vec<(f64, f64)>, p: f64) -> PyResult<(f64, f64)> {
    sim::binomial_mix(&table, p).map_err(to_py)
}

#[pymodule(name = "holocode")]
fn holocode_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySeed>()?;
    m.add_class::<PyCode>()?;
    m.add_class::<PyDecoder>()?;
    m.add_class::<PyCurve>()?;
    m.add_function(wrap_pyfunction!(tiling_counts, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(threshold, m)?)?;
    m.add_function(wrap_pyfunction!(binomial_mix, m)?)?;
    Ok(())
}
