//! JSON form of covers and certificates.
//!
//! ```json
//! {"window_r":"60","cells":[{"color":0,"members":["(0,0)","(1,0)"]}]}
//! ```
//!
//! A cover whose window is not a full ball also lists `"window"` explicitly.
//! Certificates wrap a cover with `"scale"`, `"colors"`, `"uniform_bound"`,
//! an optional `"group"` description and an optional `"report"`.

use serde::{Deserialize, Serialize};

use super::{Cell, Certificate, Cover, CoverError};
use crate::coarse::GapSet;
use crate::group::descriptor::GroupDescriptor;
use crate::group::{GroupModel, Window};
use crate::rational::{fmt_rat, parse_rat};

#[derive(Serialize, Deserialize)]
struct CellJson {
    color: usize,
    members: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct CoverJson {
    window_r: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    window: Option<Vec<String>>,
    cells: Vec<CellJson>,
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    group: Option<GroupDescriptor>,
    scale: Vec<String>,
    colors: usize,
    uniform_bound: String,
    cover: CoverJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    report: Option<serde_json::Value>,
}

fn json_err(e: impl std::fmt::Display) -> CoverError {
    CoverError::Json(e.to_string())
}

fn encode_cover(cover: &Cover) -> Result<CoverJson, CoverError> {
    let w = cover.window();
    let window = (!w.is_full_ball()).then(|| w.elements().map(ToString::to_string).collect());
    Ok(CoverJson {
        window_r: fmt_rat(&w.radius()),
        window,
        cells: cover
            .cells()
            .iter()
            .map(|c| CellJson { color: c.color, members: c.members.to_strings() })
            .collect(),
    })
}

fn decode_cover(model: &GroupModel, raw: CoverJson) -> Result<Cover, CoverError> {
    let radius = parse_rat(&raw.window_r).map_err(json_err)?;
    let window = match raw.window {
        None => model.ball(radius)?,
        Some(items) => {
            let entries = items
                .iter()
                .map(|s| {
                    let g = model.parse(s)?;
                    let n = model.norm(&g)?;
                    Ok((g, n))
                })
                .collect::<Result<Vec<_>, CoverError>>()?;
            Window::from_entries(radius, entries)
        }
    };
    let cells = raw
        .cells
        .into_iter()
        .map(|c| {
            let members = c.members.iter().map(|s| model.parse(s)).collect::<Result<GapSet, _>>()?;
            Ok(Cell { color: c.color, members })
        })
        .collect::<Result<Vec<_>, CoverError>>()?;
    Cover::new(window, cells)
}

pub fn cover_to_json(cover: &Cover) -> Result<serde_json::Value, CoverError> {
    serde_json::to_value(encode_cover(cover)?).map_err(json_err)
}

pub fn cover_from_json(model: &GroupModel, v: &serde_json::Value) -> Result<Cover, CoverError> {
    let raw: CoverJson = serde_json::from_value(v.clone()).map_err(json_err)?;
    decode_cover(model, raw)
}

/// Serializes a certificate, embedding the group description.
pub fn certificate_to_json(model: &GroupModel, cert: &Certificate) -> Result<serde_json::Value, CoverError> {
    let raw = CertificateJson {
        group: Some(GroupDescriptor::from_model(model)?),
        scale: cert.scale.to_strings(),
        colors: cert.colors,
        uniform_bound: fmt_rat(&cert.uniform_bound_radius),
        cover: encode_cover(&cert.cover)?,
        report: cert.report.as_ref().map(|r| r.to_json()),
    };
    serde_json::to_value(raw).map_err(json_err)
}

/// Reads a certificate. The embedded group wins over `fallback`; one of
/// them must be present. A stored report is ignored (verify again).
pub fn certificate_from_json(
    v: &serde_json::Value,
    fallback: Option<&GroupModel>,
) -> Result<(GroupModel, Certificate), CoverError> {
    let raw: CertificateJson = serde_json::from_value(v.clone()).map_err(json_err)?;
    let model = match (&raw.group, fallback) {
        (Some(d), _) => d.build()?,
        (None, Some(m)) => m.clone(),
        (None, None) => return Err(CoverError::Json("certificate names no group".into())),
    };
    let scale = raw.scale.iter().map(|s| model.parse(s)).collect::<Result<GapSet, _>>()?;
    let uniform_bound_radius = parse_rat(&raw.uniform_bound).map_err(json_err)?;
    let cover = decode_cover(&model, raw.cover)?;
    let cert = Certificate { scale, colors: raw.colors, cover, uniform_bound_radius, report: None };
    Ok((model, cert))
}
