use pyo3::ffi::c_str;
use pyo3::prelude::*;

#[test]
fn module_runs_in_embedded_interpreter() {
    Python::attach(|py| {
        let m = PyModule::new(py, "qecft_py").unwrap();
        qecft_py::qecft_py(&m).unwrap();
        py.import("sys")
            .unwrap()
            .getattr("modules")
            .unwrap()
            .set_item("qecft_py", m)
            .unwrap();
        py.run(
            c_str!(
                r#"
import qecft_py as q
code = q.StabilizerCode.five_qubit()
assert code.distance() == 3
assert code.distance(2) is None
assert str(q.Pauli("X") * q.Pauli("Y")) == "+iZ"
try:
    q.Pauli("XQ")
    raise AssertionError("parsed")
except ValueError:
    pass
r = q.sweep(q.StabilizerCode.steane(), [0.0], shots=100, seed=3)
assert r.points[0][2] == 0
"#
            ),
            None,
            None,
        )
        .unwrap();
    });
}
