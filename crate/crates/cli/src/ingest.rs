//! Dataset and facet ingestion: CSV with `in:`/`out:` column prefixes and
//! the JSON facet list consumed by `--fixed-facets` (the same shape the
//! `facets` subcommand exports).

use std::fs::File;
use std::path::Path;

use serde::{Deserialize, Serialize};

use dea_core::{Dataset64, ExtendedTechnology64, Facet64, Hyperplane64};

use crate::CliError;

/// A dataset plus the column labels it was loaded with; the labels name
/// projection coordinates in rendered output.
pub struct LabeledDataset {
    pub dataset: Dataset64,
    pub input_names: Vec<String>,
    pub output_names: Vec<String>,
}

/// One facet as serialized to and from JSON. `members` are DMU ids.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FacetRecord {
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    pub psi: f64,
    #[serde(default)]
    pub members: Vec<String>,
}

/// Parse a CSV dataset: first column is the DMU id, every other column must
/// be prefixed `in:` or `out:`. Errors name the offending row and column.
pub fn parse_dataset(path: &Path) -> Result<LabeledDataset, CliError> {
    let located = |msg: String| CliError::Data(format!("{}: {msg}", path.display()));
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| located(e.to_string()))?;
    let headers = reader.headers().map_err(|e| located(e.to_string()))?.clone();
    if headers.is_empty() {
        return Err(located("empty header row".into()));
    }

    let mut input_cols = Vec::new();
    let mut output_cols = Vec::new();
    for (idx, name) in headers.iter().enumerate().skip(1) {
        if let Some(rest) = name.strip_prefix("in:") {
            input_cols.push((idx, rest.to_string()));
        } else if let Some(rest) = name.strip_prefix("out:") {
            output_cols.push((idx, rest.to_string()));
        } else {
            return Err(located(format!(
                "column {name:?} must be prefixed with in: or out:"
            )));
        }
    }
    if input_cols.is_empty() || output_cols.is_empty() {
        return Err(located(
            "header needs an id column plus at least one in: and one out: column".into(),
        ));
    }

    let mut ids = Vec::new();
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| located(e.to_string()))?;
        let line = row_idx + 2; // 1-based, counting the header
        let cell = |col: usize, name: &str| -> Result<f64, CliError> {
            let raw = record.get(col).ok_or_else(|| {
                located(format!("row {line}: missing column {name:?}"))
            })?;
            let value: f64 = raw.parse().map_err(|_| {
                located(format!("non-numeric cell {raw:?} at row {line}, column {name:?}"))
            })?;
            if !(value > 0.0) || !value.is_finite() {
                return Err(located(format!(
                    "non-positive value {raw:?} at row {line}, column {name:?}"
                )));
            }
            Ok(value)
        };
        ids.push(record.get(0).unwrap_or("").to_string());
        inputs.push(
            input_cols
                .iter()
                .map(|(col, name)| cell(*col, name))
                .collect::<Result<Vec<_>, _>>()?,
        );
        outputs.push(
            output_cols
                .iter()
                .map(|(col, name)| cell(*col, name))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }

    let dataset = Dataset64::new(ids, inputs, outputs)
        .map_err(|e| located(e.to_string()))?;
    Ok(LabeledDataset {
        dataset,
        input_names: input_cols.into_iter().map(|(_, n)| n).collect(),
        output_names: output_cols.into_iter().map(|(_, n)| n).collect(),
    })
}

/// Load a JSON facet array and validate shape and coefficient positivity.
pub fn load_facet_records(path: &Path) -> Result<Vec<FacetRecord>, CliError> {
    let located = |msg: String| CliError::Data(format!("{}: {msg}", path.display()));
    let file = File::open(path).map_err(|e| located(e.to_string()))?;
    let records: Vec<FacetRecord> =
        serde_json::from_reader(file).map_err(|e| located(e.to_string()))?;
    if records.is_empty() {
        return Err(located("facet list is empty".into()));
    }
    for (k, record) in records.iter().enumerate() {
        if record.v.is_empty() || record.u.is_empty() {
            return Err(located(format!("facet {k}: needs input and output coefficients")));
        }
        if !record.psi.is_finite()
            || record.v.iter().chain(&record.u).any(|c| !c.is_finite() || *c <= 0.0)
        {
            return Err(located(format!(
                "facet {k}: coefficients must be finite and strictly positive"
            )));
        }
    }
    Ok(records)
}

pub fn to_hyperplanes(records: &[FacetRecord]) -> Vec<Hyperplane64> {
    records
        .iter()
        .map(|r| {
            Hyperplane64 { v: r.v.clone(), u: r.u.clone(), psi: r.psi }.normalized()
        })
        .collect()
}

/// Resolve member ids against the dataset and assemble the extended
/// technology from the loaded facets.
pub fn fixed_technology(
    records: &[FacetRecord],
    dataset: &Dataset64,
    tol: dea_core::Tolerances64,
) -> Result<ExtendedTechnology64, CliError> {
    let facets = records
        .iter()
        .map(|record| {
            let members = record
                .members
                .iter()
                .map(|id| {
                    dataset.index_of(id).ok_or_else(|| {
                        CliError::Data(format!("facet member {id:?} is not a dataset DMU"))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Facet64 {
                hyperplane: Hyperplane64 {
                    v: record.v.clone(),
                    u: record.u.clone(),
                    psi: record.psi,
                },
                members,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    ExtendedTechnology64::from_parts(dataset.clone(), facets, tol).map_err(CliError::from)
}

/// Export the facets of an extended technology with members as DMU ids.
pub fn export_records(exfa: &ExtendedTechnology64) -> Vec<FacetRecord> {
    exfa.facets()
        .iter()
        .map(|f| FacetRecord {
            v: f.hyperplane.v.clone(),
            u: f.hyperplane.u.clone(),
            psi: f.hyperplane.psi,
            members: f.members.iter().map(|&j| exfa.dataset().id(j).to_string()).collect(),
        })
        .collect()
}
