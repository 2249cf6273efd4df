use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] sparsemetric::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Csv { path: PathBuf, message: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => 2,
            _ => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        use sparsemetric::Error as E;
        match self {
            Self::Usage(_) => "usage",
            Self::Io { .. } => "io",
            Self::Csv { .. } => "malformed-csv",
            Self::Core(e) => match e {
                E::InvalidPower(_) | E::InvalidOrder(_) | E::InvalidGaugeExponent(_) => "invalid-exponent",
                E::InvalidTolerance(_) | E::InvalidParameter(_) => "invalid-parameter",
                E::EmptyVector | E::NonFiniteCoordinate { .. } => "invalid-vector",
                E::DimensionMismatch { .. } => "dimension-mismatch",
                E::IndexOutOfRange { .. } => "index-out-of-range",
                E::EmptyPointSet => "empty-point-set",
                E::UnsupportedGeometry(_) => "unsupported-geometry",
                E::NoInclusionRegime { .. } => "no-inclusion-regime",
                E::BoundaryNotResolved { .. } => "boundary-not-resolved",
                E::OracleContract(_) => "oracle-contract",
                E::EnumerationTooLarge { .. } => "enumeration-too-large",
                E::Infeasible { .. } => "infeasible",
                E::InconsistentSystem { .. } => "inconsistent-system",
            },
        }
    }

    /// Single-line JSON error record.
    pub fn record(&self) -> String {
        json!({ "error": { "kind": self.kind(), "message": self.to_string() } }).to_string()
    }
}

/// Numeric CSV rows, no header. Rows may differ in length; callers validate shape.
pub fn read_rows(path: &Path) -> Result<Vec<Vec<f64>>, CliError> {
    let csv_err = |message: String| CliError::Csv {
        path: path.to_path_buf(),
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(source) => CliError::Io {
                path: path.to_path_buf(),
                source,
            },
            other => csv_err(format!("{other:?}")),
        })?;
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_err(e.to_string()))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(col, field)| {
                field.parse::<f64>().map_err(|_| {
                    csv_err(format!(
                        "row {}, column {}: `{field}` is not a number",
                        line + 1,
                        col + 1
                    ))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(csv_err("no data rows".into()));
    }
    Ok(rows)
}

/// A vector stored as a single row or a single column.
pub fn read_vector(path: &Path) -> Result<Vec<f64>, CliError> {
    let rows = read_rows(path)?;
    if rows.len() == 1 || rows.iter().all(|r| r.len() == 1) {
        Ok(rows.into_iter().flatten().collect())
    } else {
        Err(CliError::Csv {
            path: path.to_path_buf(),
            message: "expected a single row or a single column".into(),
        })
    }
}

pub fn write_output(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}
