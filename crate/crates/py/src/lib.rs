//! Python bindings. Certificates and reports cross the boundary as JSON text.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use coarsedim_core::coarse::{entourage_membership, EntourageSample, GapSet};
use coarsedim_core::construct::{brick_cover_zn, interval_cover_z, tree_cover_free, BrickParams};
use coarsedim_core::cover::{certificate_from_json, certificate_to_json, verify_certificate, Certificate};
use coarsedim_core::group::descriptor::parse_group;
use coarsedim_core::rational::{fmt_rat, parse_rat};
use coarsedim_core::{GroupModel, Limits};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn model_of(desc: &str) -> PyResult<GroupModel> {
    parse_group(desc).map_err(value_err)
}

fn dump(model: &GroupModel, cert: &Certificate) -> PyResult<String> {
    let v = certificate_to_json(model, cert).map_err(value_err)?;
    serde_json::to_string(&v).map_err(value_err)
}

/// Size and largest norm of the closed ball of radius `r`.
#[pyfunction]
fn ball(desc: &str, r: &str) -> PyResult<(usize, String)> {
    let model = model_of(desc)?;
    let w = model.ball(parse_rat(r).map_err(value_err)?).map_err(value_err)?;
    Ok((w.len(), fmt_rat(&w.max_norm())))
}

#[pyfunction]
fn norm(desc: &str, element: &str) -> PyResult<String> {
    let model = model_of(desc)?;
    let g = model.parse(element).map_err(value_err)?;
    Ok(fmt_rat(&model.norm(&g).map_err(value_err)?))
}

/// Whether every pair lies in the smallest invariant entourage containing A×A.
#[pyfunction]
fn in_entourage(desc: &str, pairs: Vec<(String, String)>, members: Vec<String>) -> PyResult<bool> {
    let model = model_of(desc)?;
    let refs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let e = EntourageSample::parse(&model, &refs).map_err(value_err)?;
    let items: Vec<&str> = members.iter().map(String::as_str).collect();
    let a = GapSet::parse(&model, &items).map_err(value_err)?;
    entourage_membership(&model, &e, &a).map_err(value_err)
}

#[pyfunction]
fn interval_cover(scale: i64, window: i64) -> PyResult<String> {
    let cert = interval_cover_z(scale, window).map_err(value_err)?;
    dump(&GroupModel::integers(), &cert)
}

#[pyfunction]
#[pyo3(signature = (rank, scale, colors=None))]
fn brick_cover(rank: usize, scale: i64, colors: Option<usize>) -> PyResult<String> {
    let params = BrickParams { colors, ..BrickParams::new(rank, scale) };
    let cert = brick_cover_zn(&params).map_err(value_err)?;
    dump(&GroupModel::free_abelian(rank), &cert)
}

#[pyfunction]
fn tree_cover(rank: usize, scale: i64, window: i64) -> PyResult<String> {
    let cert = tree_cover_free(rank, scale, window, Limits::default()).map_err(value_err)?;
    dump(&GroupModel::free(rank), &cert)
}

/// Re-verifies a certificate from scratch and returns the report as JSON.
#[pyfunction]
#[pyo3(signature = (certificate, group=None))]
fn verify(certificate: &str, group: Option<&str>) -> PyResult<String> {
    let fallback = group.map(model_of).transpose()?;
    let v: serde_json::Value = serde_json::from_str(certificate).map_err(value_err)?;
    let (model, cert) = certificate_from_json(&v, fallback.as_ref()).map_err(value_err)?;
    let report = verify_certificate(&model, &cert).map_err(value_err)?;
    Ok(report.to_json().to_string())
}

#[pymodule]
fn coarsedim(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(ball, m)?)?;
    m.add_function(wrap_pyfunction!(norm, m)?)?;
    m.add_function(wrap_pyfunction!(in_entourage, m)?)?;
    m.add_function(wrap_pyfunction!(interval_cover, m)?)?;
    m.add_function(wrap_pyfunction!(brick_cover, m)?)?;
    m.add_function(wrap_pyfunction!(tree_cover, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
