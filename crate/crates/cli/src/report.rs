//! Rendering: aligned text tables, the single JSON document, and CSV rows.
//! All three are deterministic — identical inputs produce identical bytes.

use serde::Serialize;

use dea_core::measures::{CoordKind, ImprovementItem};
use dea_core::{
    FreeLunchReport64, ImprovementHistogram, MeasureResult64, Model, MonotonicityFinding, Verdict,
};

use crate::ingest::FacetRecord;
use crate::CliError;

/// Everything a subcommand produced, ready to render.
pub struct Report {
    pub facet_records: Vec<FacetRecord>,
    pub free_lunch: FreeLunchReport64,
    pub sections: Vec<ModelSection>,
    pub audit: Option<AuditReport>,
    pub ids: Vec<String>,
    pub input_names: Vec<String>,
    pub output_names: Vec<String>,
}

pub struct ModelSection {
    pub model: Model,
    pub results: Vec<MeasureResult64>,
}

pub struct AuditReport {
    pub histograms: Vec<ImprovementHistogram>,
    pub findings: Vec<MonotonicityFinding<f64>>,
}

fn fmt4(v: f64) -> String {
    format!("{v:.4}")
}

/// Four decimals with trailing zeros trimmed: coordinate-style numbers.
fn trim4(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn round4(v: f64) -> f64 {
    (v * 10_000.0).round() / 10_000.0
}

fn tuple(coords: &[f64]) -> String {
    let parts: Vec<String> = coords.iter().map(|&c| trim4(c)).collect();
    format!("({})", parts.join(", "))
}

/// Left-aligned columns separated by two spaces; first row is the header.
fn aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut widths = vec![0usize; cols];
    for row in rows {
        for (c, cell) in row.iter().enumerate() {
            widths[c] = widths[c].max(cell.len());
        }
    }
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c > 0 {
                line.push_str("  ");
            }
            line.push_str(cell);
            let pad = widths[c].saturating_sub(cell.len());
            if c + 1 < row.len() {
                line.extend(std::iter::repeat_n(' ', pad));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// Tables
// ---------------------------------------------------------------------------

fn facet_equation(record: &FacetRecord, input_names: &[String], output_names: &[String]) -> String {
    let name = |names: &[String], prefix: &str, idx: usize| {
        names.get(idx).cloned().unwrap_or_else(|| format!("{prefix}{}", idx + 1))
    };
    let mut eq = String::new();
    for (i, c) in record.v.iter().enumerate() {
        if eq.is_empty() {
            eq.push('-');
        } else {
            eq.push_str(" - ");
        }
        eq.push_str(&format!("{}*{}", trim4(*c), name(input_names, "x", i)));
    }
    for (r, c) in record.u.iter().enumerate() {
        eq.push_str(&format!(" + {}*{}", trim4(*c), name(output_names, "y", r)));
    }
    eq.push_str(&format!(" = {}", trim4(record.psi)));
    eq
}

pub fn facets_table(report: &Report) -> String {
    let mut rows = vec![vec![
        "#".to_string(),
        "members".to_string(),
        "supporting hyperplane".to_string(),
    ]];
    for (k, record) in report.facet_records.iter().enumerate() {
        let members = if record.members.is_empty() {
            "-".to_string()
        } else {
            record.members.join(", ")
        };
        rows.push(vec![
            (k + 1).to_string(),
            members,
            facet_equation(record, &report.input_names, &report.output_names),
        ]);
    }
    format!("Facets\n{}", aligned(&rows))
}

pub fn free_lunch_line(fl: &FreeLunchReport64) -> String {
    match &fl.witness {
        Some(w) => {
            let coords: Vec<f64> = w.x.iter().chain(&w.y).copied().collect();
            format!("Free lunch: allowed; witness {}\n", tuple(&coords))
        }
        None => "Free lunch: not allowed\n".to_string(),
    }
}

fn scores_table(section: &ModelSection, ids: &[String]) -> String {
    let mut rows = vec![vec![
        "DMU".to_string(),
        "score".to_string(),
        "projection".to_string(),
        "items".to_string(),
        "facet".to_string(),
    ]];
    for (id, res) in ids.iter().zip(&section.results) {
        let coords: Vec<f64> =
            res.projection.x.iter().chain(&res.projection.y).copied().collect();
        rows.push(vec![
            id.clone(),
            fmt4(res.score),
            tuple(&coords),
            res.improvement_items.len().to_string(),
            res.active_facet.map(|k| (k + 1).to_string()).unwrap_or_else(|| "-".into()),
        ]);
    }
    format!("{}\n{}", section.model.label(), aligned(&rows))
}

fn histogram_table(histograms: &[ImprovementHistogram]) -> String {
    let max_items = histograms
        .iter()
        .flat_map(|h| h.counts.keys().copied())
        .max()
        .unwrap_or(0);
    let mut header = vec!["Model".to_string()];
    for k in 0..=max_items {
        header.push(if k == 1 { "1 item".to_string() } else { format!("{k} items") });
    }
    let mut rows = vec![header];
    for histogram in histograms {
        let label = histogram.model.map(|m| m.label().to_string()).unwrap_or_else(|| "-".into());
        let mut row = vec![label];
        for k in 0..=max_items {
            row.push(
                histogram
                    .counts
                    .get(&k)
                    .map(|c| c.to_string())
                    .unwrap_or_else(|| "-".into()),
            );
        }
        rows.push(row);
    }
    format!("Number of DMUs by number of improvement items\n{}", aligned(&rows))
}

fn dominance_table(findings: &[MonotonicityFinding<f64>]) -> String {
    if findings.is_empty() {
        return "Dominance audit\nno dominance pairs in the dataset\n".to_string();
    }
    let mut rows = vec![vec![
        "Model".to_string(),
        "dominating".to_string(),
        "dominated".to_string(),
        "scores".to_string(),
        "verdict".to_string(),
    ]];
    for f in findings {
        rows.push(vec![
            f.model.label().to_string(),
            f.dominating.clone(),
            f.dominated.clone(),
            format!("{} vs {}", fmt4(f.dominating_score), fmt4(f.dominated_score)),
            match f.verdict {
                Verdict::Consistent => "consistent".to_string(),
                Verdict::Violation => "violation".to_string(),
            },
        ]);
    }
    format!("Dominance audit\n{}", aligned(&rows))
}

/// Full table rendering: score tables, then audit sections, then the
/// free-lunch verdict. Sections the report does not carry are skipped.
pub fn render_table(report: &Report, show_facets: bool, show_free_lunch: bool) -> String {
    let mut blocks = Vec::new();
    if show_facets {
        blocks.push(facets_table(report));
    }
    for section in &report.sections {
        blocks.push(scores_table(section, &report.ids));
    }
    if let Some(audit) = &report.audit {
        if !audit.histograms.is_empty() {
            blocks.push(histogram_table(&audit.histograms));
        }
        if !audit.histograms.is_empty() || !audit.findings.is_empty() {
            blocks.push(dominance_table(&audit.findings));
        }
    }
    if show_free_lunch {
        blocks.push(free_lunch_line(&report.free_lunch));
    }
    blocks.join("\n")
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ItemJson {
    kind: &'static str,
    index: usize,
    from: f64,
    to: f64,
}

#[derive(Serialize)]
struct ResultRow {
    model: &'static str,
    dmu: String,
    score: f64,
    score_full: f64,
    theta: Vec<f64>,
    phi: Vec<f64>,
    projection: Vec<f64>,
    improvement_items: Vec<ItemJson>,
    active_facet: Option<usize>,
}

#[derive(Serialize)]
struct WitnessJson {
    x: Vec<f64>,
    y: Vec<f64>,
}

#[derive(Serialize)]
struct FreeLunchJson {
    allows_free_lunch: bool,
    intercepts: Vec<f64>,
    witness: Option<WitnessJson>,
}

#[derive(Serialize)]
struct HistogramBucket {
    items: usize,
    dmus: usize,
}

#[derive(Serialize)]
struct HistogramJson {
    model: Option<&'static str>,
    buckets: Vec<HistogramBucket>,
}

#[derive(Serialize)]
struct FindingJson {
    model: &'static str,
    dominating: String,
    dominated: String,
    dominating_score: f64,
    dominated_score: f64,
    verdict: &'static str,
}

#[derive(Serialize)]
struct AuditJson {
    histograms: Vec<HistogramJson>,
    dominance: Vec<FindingJson>,
}

#[derive(Serialize)]
struct Document<'a> {
    facets: &'a [FacetRecord],
    free_lunch: FreeLunchJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    results: Option<Vec<ResultRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    audit: Option<AuditJson>,
}

fn item_json(item: &ImprovementItem<f64>) -> ItemJson {
    ItemJson {
        kind: match item.kind {
            CoordKind::Input => "input",
            CoordKind::Output => "output",
        },
        index: item.index,
        from: item.from,
        to: item.to,
    }
}

fn result_rows(report: &Report) -> Vec<ResultRow> {
    let mut rows = Vec::new();
    for section in &report.sections {
        for (id, res) in report.ids.iter().zip(&section.results) {
            rows.push(ResultRow {
                model: section.model.flag(),
                dmu: id.clone(),
                score: round4(res.score),
                score_full: res.score,
                theta: res.theta.clone(),
                phi: res.phi.clone(),
                projection: res.projection.x.iter().chain(&res.projection.y).copied().collect(),
                improvement_items: res.improvement_items.iter().map(item_json).collect(),
                active_facet: res.active_facet,
            });
        }
    }
    rows
}

fn audit_json(audit: &AuditReport) -> AuditJson {
    AuditJson {
        histograms: audit
            .histograms
            .iter()
            .map(|h| HistogramJson {
                model: h.model.map(Model::flag),
                buckets: h
                    .counts
                    .iter()
                    .map(|(&items, &dmus)| HistogramBucket { items, dmus })
                    .collect(),
            })
            .collect(),
        dominance: audit
            .findings
            .iter()
            .map(|f| FindingJson {
                model: f.model.flag(),
                dominating: f.dominating.clone(),
                dominated: f.dominated.clone(),
                dominating_score: f.dominating_score,
                dominated_score: f.dominated_score,
                verdict: match f.verdict {
                    Verdict::Consistent => "consistent",
                    Verdict::Violation => "violation",
                },
            })
            .collect(),
    }
}

/// The single JSON document `{facets, free_lunch, results, audit}`.
pub fn render_json(report: &Report, include_results: bool) -> String {
    let fl = &report.free_lunch;
    let doc = Document {
        facets: &report.facet_records,
        free_lunch: FreeLunchJson {
            allows_free_lunch: fl.allows_free_lunch,
            intercepts: fl.intercepts.clone(),
            witness: fl
                .witness
                .as_ref()
                .map(|w| WitnessJson { x: w.x.clone(), y: w.y.clone() }),
        },
        results: include_results.then(|| result_rows(report)),
        audit: report.audit.as_ref().map(audit_json),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("document serializes");
    out.push('\n');
    out
}

/// The bare facet array, exactly the shape `--fixed-facets` ingests.
pub fn render_facets_json(records: &[FacetRecord]) -> String {
    let mut out = serde_json::to_string_pretty(records).expect("facets serialize");
    out.push('\n');
    out
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

fn csv_string(write: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> Result<String, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    write(&mut writer).map_err(|e| CliError::Failure(e.to_string()))?;
    let bytes = writer.into_inner().map_err(|e| CliError::Failure(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Failure(e.to_string()))
}

pub fn render_scores_csv(report: &Report) -> Result<String, CliError> {
    csv_string(|w| {
        let mut header = vec![
            "model".to_string(),
            "dmu".to_string(),
            "score".to_string(),
            "score_full".to_string(),
            "items".to_string(),
            "active_facet".to_string(),
        ];
        for name in &report.input_names {
            header.push(format!("proj:in:{name}"));
        }
        for name in &report.output_names {
            header.push(format!("proj:out:{name}"));
        }
        w.write_record(&header)?;
        for section in &report.sections {
            for (id, res) in report.ids.iter().zip(&section.results) {
                let mut row = vec![
                    section.model.flag().to_string(),
                    id.clone(),
                    fmt4(res.score),
                    format!("{}", res.score),
                    res.improvement_items.len().to_string(),
                    res.active_facet.map(|k| k.to_string()).unwrap_or_default(),
                ];
                for c in res.projection.x.iter().chain(&res.projection.y) {
                    row.push(format!("{c}"));
                }
                w.write_record(&row)?;
            }
        }
        Ok(())
    })
}

pub fn render_facets_csv(report: &Report) -> Result<String, CliError> {
    csv_string(|w| {
        let m = report.facet_records.iter().map(|r| r.v.len()).max().unwrap_or(0);
        let s = report.facet_records.iter().map(|r| r.u.len()).max().unwrap_or(0);
        let name = |names: &[String], prefix: &str, idx: usize| {
            names.get(idx).cloned().unwrap_or_else(|| format!("{prefix}{}", idx + 1))
        };
        let mut header = vec!["facet".to_string(), "psi".to_string(), "members".to_string()];
        for i in 0..m {
            header.push(format!("v:{}", name(&report.input_names, "x", i)));
        }
        for r in 0..s {
            header.push(format!("u:{}", name(&report.output_names, "y", r)));
        }
        w.write_record(&header)?;
        for (k, record) in report.facet_records.iter().enumerate() {
            let mut row = vec![
                k.to_string(),
                format!("{}", record.psi),
                record.members.join(";"),
            ];
            for c in &record.v {
                row.push(format!("{c}"));
            }
            for c in &record.u {
                row.push(format!("{c}"));
            }
            w.write_record(&row)?;
        }
        Ok(())
    })
}

pub fn render_findings_csv(report: &Report) -> Result<String, CliError> {
    let findings = report.audit.as_ref().map(|a| a.findings.as_slice()).unwrap_or(&[]);
    csv_string(|w| {
        w.write_record([
            "model",
            "dominating",
            "dominated",
            "dominating_score",
            "dominated_score",
            "verdict",
        ])?;
        for f in findings {
            w.write_record(&[
                f.model.flag().to_string(),
                f.dominating.clone(),
                f.dominated.clone(),
                format!("{}", f.dominating_score),
                format!("{}", f.dominated_score),
                match f.verdict {
                    Verdict::Consistent => "consistent".to_string(),
                    Verdict::Violation => "violation".to_string(),
                },
            ])?;
        }
        Ok(())
    })
}
