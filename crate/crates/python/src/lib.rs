//! Python bindings. Documents go in and out as the same JSON text the CLI uses;
//! reports come back as Python dicts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;
use serde_json::json;

use lyat_core::cohomology::{h1_basis, h23};
use lyat_core::extension::central_extension as central;
use lyat_core::inducibility::Inducibility;
use lyat_core::io::{self, to_pretty};
use lyat_core::nilpotent::{crosscheck as run_crosscheck, generate_relations};
use lyat_core::representation::Representation;
use lyat_core::{FieldSpec, LyAlgebra};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn field(p: Option<u32>) -> PyResult<FieldSpec> {
    match p {
        None => Ok(FieldSpec::Rational),
        Some(p) => FieldSpec::prime(p).map_err(err),
    }
}

/// Serialize through JSON into a Python object.
fn to_py(py: Python<'_>, v: &impl Serialize) -> PyResult<PyObject> {
    let text = serde_json::to_string(v).map_err(err)?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn rep_or_adjoint(text: &str) -> PyResult<Representation> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(err)?;
    if v.get("rho").is_some() {
        io::parse_representation(text, None).map_err(err)
    } else {
        Ok(Representation::adjoint(&io::parse_algebra(text).map_err(err)?))
    }
}

/// Algebra JSON for the Heisenberg algebra `h_n`; rational unless `p` is given.
#[pyfunction]
#[pyo3(signature = (n, p=None))]
fn heisenberg(n: usize, p: Option<u32>) -> PyResult<String> {
    let l = LyAlgebra::heisenberg(field(p)?, n).map_err(err)?;
    Ok(to_pretty(&io::algebra_to_json(&l)))
}

#[pyfunction]
#[pyo3(signature = (n, p=None))]
fn generalized_heisenberg(n: usize, p: Option<u32>) -> PyResult<String> {
    let l = LyAlgebra::generalized_heisenberg(field(p)?, n).map_err(err)?;
    Ok(to_pretty(&io::algebra_to_json(&l)))
}

/// Extension JSON for `0 -> Z(L) -> L -> L/Z(L) -> 0`.
#[pyfunction]
fn central_extension(algebra: &str) -> PyResult<String> {
    let l = io::parse_algebra(algebra).map_err(err)?;
    Ok(to_pretty(&io::extension_to_json(&central(&l).map_err(err)?)))
}

/// Axiom report of an algebra, with a top-level `passes` flag.
#[pyfunction]
fn check_algebra(py: Python<'_>, algebra: &str) -> PyResult<PyObject> {
    let l = io::parse_algebra(algebra).map_err(err)?;
    let r = l.check_axioms();
    to_py(py, &json!({ "passes": r.passes(), "axioms": r }))
}

#[pyfunction]
fn check_representation(py: Python<'_>, rep: &str) -> PyResult<PyObject> {
    let r = io::parse_representation(rep, None).map_err(err)?.check();
    to_py(py, &json!({ "passes": r.passes(), "axioms": r }))
}

/// Dimensions of `H^1` and `H^(2,3)`; an algebra stands for its adjoint representation.
#[pyfunction]
fn cohomology_dims(py: Python<'_>, doc: &str) -> PyResult<PyObject> {
    let r = rep_or_adjoint(doc)?;
    let g = h23(&r).map_err(err)?;
    to_py(
        py,
        &json!({ "h1": h1_basis(&r).dim(), "z23": g.z_dim, "b23": g.b_dim, "h23": g.h_dim }),
    )
}

/// Decides inducibility: `{"inducible": true, "gamma", "lambda"}` or `{"inducible": false, "reason"}`.
#[pyfunction]
fn induce(py: Python<'_>, extension: &str, pair: &str) -> PyResult<PyObject> {
    let e = io::parse_extension(extension, None).map_err(err)?;
    let pr = io::parse_pair(pair, &e).map_err(err)?;
    pr.validate(&e).map_err(err)?;
    let ind = Inducibility::new(&e);
    let out = match ind.decide(&pr).map_err(err)? {
        Ok(cert) => {
            ind.verify(&pr, &cert).map_err(err)?;
            let c = io::certificate_to_json(&cert);
            json!({ "inducible": true, "gamma": c.gamma, "lambda": c.lambda })
        }
        Err(reason) => json!({ "inducible": false, "reason": reason }),
    };
    to_py(py, &out)
}

/// Relation polynomials as text, one per entry.
#[pyfunction]
fn relations(algebra: &str) -> PyResult<Vec<String>> {
    let l = io::parse_algebra(algebra).map_err(err)?;
    let rs = generate_relations(&l).map_err(err)?;
    Ok(rs.relations().iter().map(|r| r.poly.to_text()).collect())
}

#[pyfunction]
#[pyo3(signature = (n=1, samples=100, seed=2024, p=None))]
fn crosscheck(py: Python<'_>, n: usize, samples: usize, seed: u64, p: Option<u32>) -> PyResult<PyObject> {
    let r = run_crosscheck(field(p)?, n, samples, seed).map_err(err)?;
    let passes = r.passes();
    let mut v = serde_json::to_value(&r).map_err(err)?;
    v["passes"] = json!(passes);
    to_py(py, &v)
}

#[pymodule]
fn lyat(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", lyat_core::VERSION)?;
    m.add_function(wrap_pyfunction!(heisenberg, m)?)?;
    m.add_function(wrap_pyfunction!(generalized_heisenberg, m)?)?;
    m.add_function(wrap_pyfunction!(central_extension, m)?)?;
    m.add_function(wrap_pyfunction!(check_algebra, m)?)?;
    m.add_function(wrap_pyfunction!(check_representation, m)?)?;
    m.add_function(wrap_pyfunction!(cohomology_dims, m)?)?;
    m.add_function(wrap_pyfunction!(induce, m)?)?;
    m.add_function(wrap_pyfunction!(relations, m)?)?;
    m.add_function(wrap_pyfunction!(crosscheck, m)?)?;
    Ok(())
}
