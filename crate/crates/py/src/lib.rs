use pyo3::prelude::*;

#[pymodule]
fn zinc_bridge_py(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
