//! Drives the module through an embedded interpreter.

use pyo3::ffi::c_str;
use pyo3::prelude::*;
use pytailfit::pytailfit;

#[test]
fn module_round_trip() {
    pyo3::append_to_inittab!(pytailfit);
    Python::initialize();
    Python::attach(|py| {
        let code = c_str!(
            r#"
import math, pytailfit
assert abs(pytailfit.hurwitz_zeta(2.0, 1) - math.pi ** 2 / 6) < 1e-14
m = pytailfit.PowerLaw(2.5, 1)
xs = m.sample(4000, 3)
fit = pytailfit.fit_at(xs, 1)
assert abs(fit["model"]["alpha"] - 2.5) < 0.1, fit
rows = pytailfit.compare_all(xs, fit["model"]["alpha"], 1)
assert len(rows) == 6
try:
    pytailfit.PowerLaw(0.5, 1)
except pytailfit.TailfitError as e:
    assert str(e).startswith("invalid_model"), e
else:
    raise AssertionError("alpha <= 1 must be rejected")
"#
        );
        py.run(code, None, None).unwrap();
    });
}
