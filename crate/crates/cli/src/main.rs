//! `dea` — closest-target efficiency analysis over facet-extended DEA
//! technologies.
//!
//! Subcommands: `score` evaluates the selected measures for every DMU,
//! `facets` enumerates (or echoes) the full-dimensional efficient facets,
//! `audit` reports improvement-item histograms, the dominance audit and the
//! free-lunch verdict.
//!
//! Exit codes: 0 success, 2 data/usage error, 3 no full-dimensional
//! efficient facet exists, 1 any other failure.

mod ingest;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use dea_core::{
    build_exfa, detect_free_lunch_hyperplanes, dominance_audit, improvement_histogram, max_rm,
    max_rm_nonextended, max_sbm, rm_exfa, rm_vrs, sbm_exfa, Dataset64, ExtendedTechnology64,
    FacetError, FreeLunchReport64, Model, Real, Tolerances64, VrsTechnology64,
};

use ingest::{export_records, fixed_technology, load_facet_records, parse_dataset, to_hyperplanes};
use report::{AuditReport, ModelSection, Report};

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or invalid input (exit 2).
    #[error("{0}")]
    Data(String),
    /// The dataset admits no full-dimensional efficient facet (exit 3).
    #[error("{0}")]
    NoFacets(String),
    /// Anything else (exit 1).
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Data(_) => 2,
            CliError::NoFacets(_) => 3,
            CliError::Failure(_) => 1,
        }
    }
}

impl From<FacetError> for CliError {
    fn from(e: FacetError) -> Self {
        match e {
            FacetError::NoFdefExists => CliError::NoFacets(e.to_string()),
            FacetError::Malformed(_) => CliError::Data(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "dea",
    version,
    about = "Closest-target efficiency analysis over facet-extended DEA technologies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score every DMU under the selected efficiency measures
    Score(ScoreArgs),
    /// Enumerate the full-dimensional efficient facets (or echo fixed ones)
    Facets(FacetsArgs),
    /// Improvement-item histograms, dominance audit and free-lunch verdict
    Audit(AuditArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelFlag {
    /// Russell graph measure over the observed (VRS) technology
    Rm,
    /// Russell graph measure over the facet-extended technology
    RmExfa,
    /// Slacks-based ratio measure over the facet-extended technology
    SbmExfa,
    /// Maximal ratio measure (closest target)
    MaxSbm,
    /// Maximal Russell measure (closest target)
    MaxRm,
    /// Maximal Russell measure over the plain VRS frontier
    MNonextended,
}

impl From<ModelFlag> for Model {
    fn from(flag: ModelFlag) -> Model {
        match flag {
            ModelFlag::Rm => Model::RmVrs,
            ModelFlag::RmExfa => Model::RmExfa,
            ModelFlag::SbmExfa => Model::SbmExfa,
            ModelFlag::MaxSbm => Model::MaxSbm,
            ModelFlag::MaxRm => Model::MaxRm,
            ModelFlag::MNonextended => Model::MNonExtended,
        }
    }
}

#[derive(Args)]
struct CommonArgs {
    /// Facet JSON that replaces enumeration (same shape `facets` exports)
    #[arg(long, value_name = "JSON")]
    fixed_facets: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Override the feasibility tolerance
    #[arg(long, value_name = "EPS")]
    tol_feas: Option<f64>,
}

#[derive(Args)]
struct ScoreArgs {
    /// CSV dataset: id column first, then in:/out: prefixed columns
    #[arg(long)]
    data: PathBuf,
    /// Comma-separated measures to run (default: all)
    #[arg(long, value_delimiter = ',')]
    models: Vec<ModelFlag>,
    /// Append histograms, the dominance audit and the free-lunch verdict
    #[arg(long)]
    audit: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct FacetsArgs {
    /// CSV dataset to enumerate facets from
    #[arg(long)]
    data: Option<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct AuditArgs {
    /// CSV dataset to score and audit
    #[arg(long)]
    data: Option<PathBuf>,
    /// Comma-separated measures to audit (default: all)
    #[arg(long, value_delimiter = ',')]
    models: Vec<ModelFlag>,
    #[command(flatten)]
    common: CommonArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn dispatch(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Score(args) => run_score(args),
        Command::Facets(args) => run_facets(args),
        Command::Audit(args) => run_audit(args),
    }
}

fn tolerances(overridden: Option<f64>) -> Result<Tolerances64, CliError> {
    let mut tol = f64::tolerances();
    if let Some(eps) = overridden {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(CliError::Data(format!(
                "--tol-feas must be strictly positive, got {eps}"
            )));
        }
        tol.feas = eps;
    }
    Ok(tol)
}

/// Loaded inputs shared by all subcommands. Without `--data` only the facet
/// records and the free-lunch verdict are available.
struct Prepared {
    labeled: Option<ingest::LabeledDataset>,
    tech: Option<VrsTechnology64>,
    exfa: Option<ExtendedTechnology64>,
    records: Vec<ingest::FacetRecord>,
    free_lunch: FreeLunchReport64,
}

fn prepare(
    data: Option<&Path>,
    fixed: Option<&Path>,
    tol: Tolerances64,
) -> Result<Prepared, CliError> {
    match (data, fixed) {
        (None, None) => {
            Err(CliError::Data("either --data or --fixed-facets is required".into()))
        }
        (None, Some(facet_path)) => {
            let loaded = load_facet_records(facet_path)?;
            let hyperplanes = to_hyperplanes(&loaded);
            let records = loaded
                .iter()
                .zip(&hyperplanes)
                .map(|(r, h)| ingest::FacetRecord {
                    v: h.v.clone(),
                    u: h.u.clone(),
                    psi: h.psi,
                    members: r.members.clone(),
                })
                .collect();
            let free_lunch = detect_free_lunch_hyperplanes(&hyperplanes, &tol);
            Ok(Prepared { labeled: None, tech: None, exfa: None, records, free_lunch })
        }
        (Some(data_path), fixed) => {
            let labeled = parse_dataset(data_path)?;
            let tech = VrsTechnology64::new(labeled.dataset.clone(), tol);
            let exfa = match fixed {
                Some(facet_path) => {
                    let records = load_facet_records(facet_path)?;
                    fixed_technology(&records, &labeled.dataset, tol)?
                }
                None => build_exfa(&tech)?,
            };
            let records = export_records(&exfa);
            let free_lunch = exfa.detect_free_lunch();
            Ok(Prepared {
                labeled: Some(labeled),
                tech: Some(tech),
                exfa: Some(exfa),
                records,
                free_lunch,
            })
        }
    }
}

fn base_report(prep: &Prepared) -> Report {
    let (ids, input_names, output_names) = match &prep.labeled {
        Some(l) => (l.dataset.ids().to_vec(), l.input_names.clone(), l.output_names.clone()),
        None => (Vec::new(), Vec::new(), Vec::new()),
    };
    Report {
        facet_records: prep.records.clone(),
        free_lunch: prep.free_lunch.clone(),
        sections: Vec::new(),
        audit: None,
        ids,
        input_names,
        output_names,
    }
}

fn selected_models(flags: &[ModelFlag]) -> Vec<Model> {
    let mut models: Vec<Model> = if flags.is_empty() {
        Model::ALL.to_vec()
    } else {
        flags.iter().map(|&f| f.into()).collect()
    };
    let mut seen = Vec::new();
    models.retain(|m| {
        if seen.contains(m) {
            false
        } else {
            seen.push(*m);
            true
        }
    });
    models
}

fn score_sections(
    models: &[Model],
    tech: &VrsTechnology64,
    exfa: &ExtendedTechnology64,
) -> Result<Vec<ModelSection>, CliError> {
    let ds = tech.dataset();
    models
        .iter()
        .map(|&model| {
            let results = (0..ds.len())
                .map(|j| {
                    let dmu = ds.point(j);
                    match model {
                        Model::RmVrs => rm_vrs(tech, &dmu),
                        Model::RmExfa => rm_exfa(exfa, &dmu),
                        Model::SbmExfa => sbm_exfa(exfa, &dmu),
                        Model::MaxSbm => max_sbm(exfa, &dmu),
                        Model::MaxRm => max_rm(exfa, &dmu).map(|r| r.result),
                        Model::MNonExtended => max_rm_nonextended(tech, &dmu),
                    }
                    .map_err(|e| {
                        CliError::Failure(format!(
                            "{} failed for DMU {:?}: {e}",
                            model.label(),
                            ds.id(j)
                        ))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(ModelSection { model, results })
        })
        .collect()
}

fn audit_report(dataset: &Dataset64, sections: &[ModelSection]) -> AuditReport {
    let histograms = sections.iter().map(|s| improvement_histogram(&s.results)).collect();
    let scores: Vec<(Model, Vec<f64>)> = sections
        .iter()
        .map(|s| (s.model, s.results.iter().map(|r| r.score).collect()))
        .collect();
    let findings = dominance_audit(dataset, &scores);
    AuditReport { histograms, findings }
}

fn run_score(args: ScoreArgs) -> Result<String, CliError> {
    let tol = tolerances(args.common.tol_feas)?;
    let prep = prepare(Some(&args.data), args.common.fixed_facets.as_deref(), tol)?;
    let tech = prep.tech.as_ref().expect("score always has a dataset");
    let exfa = prep.exfa.as_ref().expect("score always has a technology");

    let models = selected_models(&args.models);
    let sections = score_sections(&models, tech, exfa)?;
    let mut report = base_report(&prep);
    if args.audit {
        report.audit = Some(audit_report(tech.dataset(), &sections));
    }
    report.sections = sections;

    Ok(match args.common.format {
        Format::Table => report::render_table(&report, false, args.audit),
        Format::Json => report::render_json(&report, true),
        Format::Csv => report::render_scores_csv(&report)?,
    })
}

fn run_facets(args: FacetsArgs) -> Result<String, CliError> {
    let tol = tolerances(args.common.tol_feas)?;
    let prep = prepare(args.data.as_deref(), args.common.fixed_facets.as_deref(), tol)?;
    let report = base_report(&prep);
    Ok(match args.common.format {
        Format::Table => report::render_table(&report, true, true),
        Format::Json => report::render_facets_json(&report.facet_records),
        Format::Csv => report::render_facets_csv(&report)?,
    })
}

fn run_audit(args: AuditArgs) -> Result<String, CliError> {
    let tol = tolerances(args.common.tol_feas)?;
    let prep = prepare(args.data.as_deref(), args.common.fixed_facets.as_deref(), tol)?;
    let mut report = base_report(&prep);
    report.audit = Some(match (&prep.tech, &prep.exfa) {
        (Some(tech), Some(exfa)) => {
            let models = selected_models(&args.models);
            let sections = score_sections(&models, tech, exfa)?;
            audit_report(tech.dataset(), &sections)
        }
        // facet fixture without observations: only the free-lunch verdict
        _ => AuditReport { histograms: Vec::new(), findings: Vec::new() },
    });
    Ok(match args.common.format {
        Format::Table => report::render_table(&report, false, true),
        Format::Json => report::render_json(&report, false),
        Format::Csv => report::render_findings_csv(&report)?,
    })
}
