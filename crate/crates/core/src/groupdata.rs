//! User-supplied groups and irreps in TOML (grammar in `docs/group-data.md`).

use std::sync::Arc;

use serde::Deserialize;
use thiserror::Error;

use crate::builtin::{BuiltinError, ReflectionGroup};
use crate::expr::{parse_scalar, ExprError};
use crate::group::GroupAction;
use crate::irrep::Irrep;
use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupDataError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: {source}")]
    Entry { field: String, source: ExprError },
    #[error("{field}: {message}")]
    Shape { field: String, message: String },
    #[error(transparent)]
    Invalid(#[from] BuiltinError),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Int(i64),
    Text(String),
}

type RawMatrix = Vec<Vec<Entry>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIrrep {
    label: String,
    images: Vec<RawMatrix>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    name: Option<String>,
    conductor: Option<u32>,
    generators: Vec<RawMatrix>,
    #[serde(default)]
    irrep: Vec<RawIrrep>,
}

/// 1-based (line, column) of a byte offset.
pub fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.chars().count(), |p| before[p + 1..].chars().count()) + 1;
    (line, column)
}

fn matrix(raw: &RawMatrix, conductor: u32, field: &str) -> Result<Matrix, GroupDataError> {
    let rows = raw.len();
    if rows == 0 || raw.iter().any(|r| r.len() != rows) {
        return Err(GroupDataError::Shape {
            field: field.to_string(),
            message: "matrix must be square and nonempty".into(),
        });
    }
    let mut out = Vec::with_capacity(rows);
    for (i, row) in raw.iter().enumerate() {
        let mut r = Vec::with_capacity(rows);
        for (j, e) in row.iter().enumerate() {
            r.push(match e {
                Entry::Int(n) => Scalar::from_int(*n),
                Entry::Text(s) => parse_scalar(s, conductor).map_err(|source| GroupDataError::Entry {
                    field: format!("{field}[{i}][{j}]"),
                    source,
                })?,
            });
        }
        out.push(r);
    }
    Ok(Matrix::from_rows(out))
}

/// Parses and validates a group data file.
pub fn parse_group_data(text: &str) -> Result<Arc<ReflectionGroup>, GroupDataError> {
    let raw: RawGroup = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| line_column(text, s.start));
        GroupDataError::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    let conductor = raw.conductor.unwrap_or(1);
    let gens = raw
        .generators
        .iter()
        .enumerate()
        .map(|(k, m)| matrix(m, conductor, &format!("generators[{k}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let group = GroupAction::enumerate(&gens).map_err(BuiltinError::from)?;
    let mut irreps = Vec::with_capacity(raw.irrep.len());
    for (k, w) in raw.irrep.iter().enumerate() {
        let images = w
            .images
            .iter()
            .enumerate()
            .map(|(g, m)| matrix(m, conductor, &format!("irrep[{k}].images[{g}]")))
            .collect::<Result<Vec<_>, _>>()?;
        irreps.push(Irrep::from_generator_images(w.label.clone(), &group, &images).map_err(BuiltinError::from)?);
    }
    let name = raw.name.unwrap_or_else(|| "custom".to_string());
    Ok(Arc::new(ReflectionGroup::new(name, group, irreps)?))
}
