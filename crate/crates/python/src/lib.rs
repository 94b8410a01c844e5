use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;
use qecft::codes;
use qecft::gadgets::{check_transversal_clifford, shor_ec_round, steane_ec_circuit, TransversalGate};
use qecft::montecarlo::{self, MonteCarloReport, Protocol, Sweep};
use qecft::{Distance, PauliOperator, StabilizerCode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn err(e: qecft::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_pauli(text: &str) -> PyResult<PauliOperator> {
    text.parse().map_err(err)
}

#[pyclass(name = "Pauli", frozen, from_py_object)]
#[derive(Clone)]
struct PyPauli(PauliOperator);

#[pymethods]
impl PyPauli {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_pauli(text).map(PyPauli)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn weight(&self) -> usize {
        self.0.weight()
    }

    /// Exponent `e` of the global factor `i^e`.
    #[getter]
    fn phase(&self) -> u8 {
        self.0.phase_exponent()
    }

    fn commutes_with(&self, other: &PyPauli) -> PyResult<bool> {
        self.0.commutes(&other.0).map_err(err)
    }

    fn __mul__(&self, other: &PyPauli) -> PyResult<PyPauli> {
        self.0.multiply(&other.0).map(PyPauli).map_err(err)
    }

    fn __eq__(&self, other: &PyPauli) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Pauli('{}')", self.0)
    }
}

#[pyclass(name = "StabilizerCode", frozen)]
struct PyCode(StabilizerCode);

#[pymethods]
impl PyCode {
    #[new]
    fn new(generators: Vec<String>) -> PyResult<Self> {
        let gens = generators
            .iter()
            .map(|g| parse_pauli(g))
            .collect::<PyResult<Vec<_>>>()?;
        StabilizerCode::validate(gens).map(PyCode).map_err(err)
    }

    #[staticmethod]
    fn five_qubit() -> Self {
        PyCode(codes::five_qubit_code())
    }

    #[staticmethod]
    fn steane() -> Self {
        PyCode(codes::steane_code())
    }

    #[staticmethod]
    fn from_stab(text: &str) -> PyResult<Self> {
        qecft::io::read_stab(text).map(PyCode).map_err(err)
    }

    fn to_stab(&self) -> String {
        qecft::io::write_stab(&self.0)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k()
    }

    #[getter]
    fn is_css(&self) -> bool {
        self.0.is_css()
    }

    #[getter]
    fn generators(&self) -> Vec<PyPauli> {
        self.0.generators().iter().cloned().map(PyPauli).collect()
    }

    #[getter]
    fn logical_x(&self) -> Vec<PyPauli> {
        self.0.logical_x().iter().cloned().map(PyPauli).collect()
    }

    #[getter]
    fn logical_z(&self) -> Vec<PyPauli> {
        self.0.logical_z().iter().cloned().map(PyPauli).collect()
    }

    /// Syndrome as a bit string, one character per generator.
    fn syndrome(&self, error: &PyPauli) -> PyResult<String> {
        self.0.syndrome(&error.0).map(|s| s.to_string()).map_err(err)
    }

    fn in_stabilizer(&self, p: &PyPauli) -> PyResult<bool> {
        self.0.in_stabilizer(&p.0).map_err(err)
    }

    /// Exact distance, or None when no logical operator has weight <= cap.
    #[pyo3(signature = (cap=None))]
    fn distance(&self, cap: Option<usize>) -> PyResult<Option<usize>> {
        match self.0.distance(cap.unwrap_or(self.0.n())).map_err(err)? {
            Distance::Exact(d) => Ok(Some(d)),
            Distance::ExceedsCap(_) => Ok(None),
        }
    }

    /// Logical action of a transversal `h`, `s`, `cnot` or Pauli, as text.
    fn transversal(&self, gate: &str) -> PyResult<String> {
        let g = match gate {
            "h" => TransversalGate::H,
            "s" => TransversalGate::S,
            "cnot" => TransversalGate::Cnot,
            "t" => TransversalGate::T,
            p => TransversalGate::Pauli(parse_pauli(p)?),
        };
        check_transversal_clifford(&self.0, &g)
            .map(|a| a.to_string())
            .map_err(err)
    }

    /// Circuit text for one error-correction round: `shor` or `steane`.
    #[pyo3(signature = (kind="shor", repetitions=3))]
    fn ec_circuit(&self, kind: &str, repetitions: usize) -> PyResult<String> {
        let c = match kind {
            "shor" => shor_ec_round(&self.0, repetitions),
            "steane" => steane_ec_circuit(&self.0),
            _ => return Err(PyValueError::new_err(format!("unknown kind `{kind}`"))),
        };
        c.map(|c| c.to_text()).map_err(err)
    }

    /// Number of single faults and of violations in one Shor round.
    #[pyo3(signature = (repetitions=3))]
    fn check_single_faults(&self, repetitions: usize) -> PyResult<(usize, usize)> {
        let c = shor_ec_round(&self.0, repetitions).map_err(err)?;
        let r = qecft::faults::check_single_faults(&c, &self.0).map_err(err)?;
        Ok((r.faults, r.violations.len()))
    }

    fn __repr__(&self) -> String {
        format!("StabilizerCode([[{},{}]])", self.0.n(), self.0.k())
    }
}

#[pyclass(name = "Tableau")]
struct PyTableau {
    inner: qecft::tableau::Tableau,
    rng: ChaCha8Rng,
}

#[pymethods]
impl PyTableau {
    #[new]
    #[pyo3(signature = (n, seed=0))]
    fn new(n: usize, seed: u64) -> Self {
        PyTableau {
            inner: qecft::tableau::Tableau::new(n),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn h(&mut self, q: usize) -> PyResult<()> {
        self.inner.apply_h(q).map_err(err)
    }

    fn s(&mut self, q: usize) -> PyResult<()> {
        self.inner.apply_s(q).map_err(err)
    }

    fn cnot(&mut self, control: usize, target: usize) -> PyResult<()> {
        self.inner.apply_cnot(control, target).map_err(err)
    }

    fn apply_pauli(&mut self, p: &PyPauli) -> PyResult<()> {
        self.inner.apply_pauli(&p.0).map_err(err)
    }

    /// Outcome bit (True for eigenvalue -1) if determined, else None.
    fn peek(&self, p: &PyPauli) -> PyResult<Option<bool>> {
        self.inner.peek(&p.0).map_err(err)
    }

    fn measure(&mut self, p: &PyPauli) -> PyResult<bool> {
        self.inner
            .measure_pauli(&p.0, &mut self.rng)
            .map(|m| m.bit)
            .map_err(err)
    }

    #[getter]
    fn stabilizers(&self) -> Vec<String> {
        self.inner.stabilizers().iter().map(|s| s.to_string()).collect()
    }
}

#[pyclass(name = "Report", frozen)]
struct PyReport(MonteCarloReport);

#[pymethods]
impl PyReport {
    #[getter]
    fn seed(&self) -> u64 {
        self.0.seed
    }

    /// `(p, shots, failures, p_L, ci_low, ci_high)` per point.
    #[getter]
    fn points(&self) -> Vec<(f64, u64, u64, f64, f64, f64)> {
        self.0
            .points
            .iter()
            .map(|p| (p.p, p.shots, p.failures, p.p_l, p.ci_low, p.ci_high))
            .collect()
    }

    #[getter]
    fn fit_exponent(&self) -> Option<f64> {
        self.0.fit_exponent
    }

    #[getter]
    fn fit_c(&self) -> Option<f64> {
        self.0.fit_c
    }

    #[getter]
    fn pseudothreshold(&self) -> Option<f64> {
        self.0.pseudothreshold
    }

    fn to_csv(&self) -> String {
        self.0.to_csv()
    }

    fn to_ron(&self) -> PyResult<String> {
        self.0.to_ron().map_err(err)
    }
}

#[pyfunction]
#[pyo3(signature = (code, ps, shots, seed, mode="code-capacity", workers=0))]
fn sweep(code: &PyCode, ps: Vec<f64>, shots: u64, seed: u64, mode: &str, workers: usize) -> PyResult<PyReport> {
    let protocol: Protocol = mode.parse().map_err(err)?;
    montecarlo::estimate_logical_rate(
        &code.0,
        &Sweep {
            protocol,
            ps,
            shots,
            seed,
            workers,
        },
    )
    .map(PyReport)
    .map_err(err)
}

#[pyfunction]
fn concatenated_rate(p: f64, p_t: f64, levels: u32) -> PyResult<f64> {
    montecarlo::concatenated_rate(p, p_t, levels).map_err(err)
}

#[pyfunction]
fn levels_needed(p: f64, p_t: f64, epsilon: f64) -> PyResult<u32> {
    montecarlo::levels_needed(p, p_t, epsilon).map_err(err)
}

/// `(singleton_ok, hamming_rate_bound, gv_rate_bound, notes)`.
#[pyfunction]
fn bounds(n: usize, k: usize, d: usize) -> PyResult<(bool, f64, f64, String)> {
    let r = qecft::bounds::bound_report(n, k, d).map_err(err)?;
    Ok((r.singleton_ok, r.hamming_rate_bound, r.gv_rate_bound, r.notes))
}

#[pyfunction]
fn css_code(h1: Vec<Vec<u8>>, h2: Vec<Vec<u8>>) -> PyResult<PyCode> {
    let matrix = |rows: Vec<Vec<u8>>| -> PyResult<codes::ClassicalLinearCode> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut bits = Vec::with_capacity(rows.len());
        for r in rows {
            if r.len() != cols {
                return Err(PyIndexError::new_err("ragged parity check matrix"));
            }
            bits.push(qecft::BitVec::from_bools(
                &r.iter().map(|&b| b != 0).collect::<Vec<_>>(),
            ));
        }
        Ok(codes::ClassicalLinearCode::new(qecft::BitMatrix::from_rows(bits, cols)))
    };
    codes::css_code(&matrix(h1)?, &matrix(h2)?).map(PyCode).map_err(err)
}

#[pymodule]
pub fn qecft_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPauli>()?;
    m.add_class::<PyCode>()?;
    m.add_class::<PyTableau>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(concatenated_rate, m)?)?;
    m.add_function(wrap_pyfunction!(levels_needed, m)?)?;
    m.add_function(wrap_pyfunction!(bounds, m)?)?;
    m.add_function(wrap_pyfunction!(css_code, m)?)?;
    m.add(
        "THRESHOLD_RIGOROUS_LOWER_BOUND",
        montecarlo::THRESHOLD_RIGOROUS_LOWER_BOUND,
    )?;
    m.add("THRESHOLD_OPTIMIZED_ESTIMATE", montecarlo::THRESHOLD_OPTIMIZED_ESTIMATE)?;
    Ok(())
}
