//! Report envelopes: every analysis result travels with a manifest naming
//! the command, resolved configuration, and input digests that produced it,
//! so identical runs are provably identical and differing outputs point at
//! the differing input.
//!
//! Three renderings share one envelope: markdown (aligned tables), csv
//! (flat rows under `#` comment headers), and json (lossless, validated by
//! the schema shipped in schemas/report.schema.json). Undefined metric
//! cells render as "NA" in markdown, an empty cell in csv, and null in
//! json.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::agreement::{AgreementReport, ConsensusReport};
use crate::diagnostics::{ConfusionMatrix, ProbabilityProfile, SevereErrorTable};
use crate::error::{Error, Result};
use crate::losses::LossKind;
use crate::stats::{AspectCorrelationMatrix, EvalReport};
use crate::trainer::TrainHistory;

/// A content address for one input file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Provenance embedded in every report: what ran, over which bytes, with
/// which knobs. Identical manifests imply identical report bytes. No
/// timestamps; reruns must be byte-identical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub seed: Option<u64>,
    /// Resolved configuration snapshot of whatever config type the command
    /// used.
    pub config: Value,
    pub inputs: Vec<InputDigest>,
}

impl RunManifest {
    pub fn new(command: String, config: Value, seed: Option<u64>) -> Self {
        RunManifest {
            command,
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            config,
            inputs: Vec::new(),
        }
    }

    /// Hashes the file's bytes and records it as an input.
    pub fn add_input(&mut self, path: &Path) -> Result<()> {
        let bytes = std::fs::read(path).map_err(|e| {
            Error::Io(std::io::Error::new(
                e.kind(),
                format!("{}: {e}", path.display()),
            ))
        })?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex_sha256(&bytes),
        });
        Ok(())
    }
}

pub fn hex_sha256(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        let _ = write!(out, "{b:02x}");
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Md,
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "md" => Ok(OutputFormat::Md),
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Format(format!("unknown output format {other:?}"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            OutputFormat::Md => "md",
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// Gradient check summary attached to a loss evaluation on request.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradCheckReport {
    /// Central-difference step.
    pub h: f64,
    /// Worst relative error between analytic and numeric gradient norms.
    pub max_rel_err: f64,
}

/// One loss evaluated over one batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossReport {
    pub loss: LossKind,
    pub margin: f64,
    pub lambda: f64,
    pub n: usize,
    pub dim: usize,
    pub value: f64,
    pub grad_u_norm: f64,
    pub grad_v_norm: f64,
    pub grad_check: Option<GradCheckReport>,
}

/// Everything the toolkit can report, under one serialization envelope.
#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Evaluation(EvalReport),
    Agreement(Vec<AgreementReport>),
    Consensus(ConsensusReport),
    AspectCorrelation(AspectCorrelationMatrix),
    Training(TrainHistory),
    Loss(LossReport),
    SevereErrors(SevereErrorTable),
    Bottleneck(ProbabilityProfile),
    Confusion(ConfusionMatrix),
}

impl Report {
    pub fn kind(&self) -> &'static str {
        match self {
            Report::Evaluation(_) => "evaluation",
            Report::Agreement(_) => "agreement",
            Report::Consensus(_) => "consensus",
            Report::AspectCorrelation(_) => "aspect-correlation",
            Report::Training(_) => "training",
            Report::Loss(_) => "loss",
            Report::SevereErrors(_) => "severe-errors",
            Report::Bottleneck(_) => "bottleneck",
            Report::Confusion(_) => "confusion",
        }
    }

    fn to_value(&self) -> Result<Value> {
        let v = match self {
            Report::Evaluation(r) => serde_json::to_value(r),
            Report::Agreement(r) => serde_json::to_value(r),
            Report::Consensus(r) => serde_json::to_value(r),
            Report::AspectCorrelation(r) => serde_json::to_value(r),
            Report::Training(r) => serde_json::to_value(r),
            Report::Loss(r) => serde_json::to_value(r),
            Report::SevereErrors(r) => serde_json::to_value(r),
            Report::Bottleneck(r) => serde_json::to_value(r),
            Report::Confusion(r) => serde_json::to_value(r),
        };
        v.map_err(|e| Error::Format(format!("report serialization: {e}")))
    }

    fn from_kind_value(kind: &str, v: Value) -> Result<Report> {
        fn de<T: serde::de::DeserializeOwned>(v: Value) -> Result<T> {
            serde_json::from_value(v).map_err(|e| Error::Format(format!("report body: {e}")))
        }
        Ok(match kind {
            "evaluation" => Report::Evaluation(de(v)?),
            "agreement" => Report::Agreement(de(v)?),
            "consensus" => Report::Consensus(de(v)?),
            "aspect-correlation" => Report::AspectCorrelation(de(v)?),
            "training" => Report::Training(de(v)?),
            "loss" => Report::Loss(de(v)?),
            "severe-errors" => Report::SevereErrors(de(v)?),
            "bottleneck" => Report::Bottleneck(de(v)?),
            "confusion" => Report::Confusion(de(v)?),
            other => return Err(Error::Format(format!("unknown report kind {other:?}"))),
        })
    }

    fn warnings(&self) -> &[String] {
        match self {
            Report::Evaluation(r) => &r.warnings,
            Report::SevereErrors(r) => &r.warnings,
            Report::Bottleneck(r) => &r.warnings,
            Report::Confusion(r) => &r.warnings,
            _ => &[],
        }
    }
}

/// Renders a report with its manifest in the requested format.
pub fn render(report: &Report, manifest: &RunManifest, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => render_json(report, manifest),
        OutputFormat::Md => Ok(render_md(report, manifest)),
        OutputFormat::Csv => render_csv(report, manifest),
    }
}

fn render_json(report: &Report, manifest: &RunManifest) -> Result<String> {
    #[derive(Serialize)]
    struct Envelope<'a> {
        kind: &'a str,
        manifest: &'a RunManifest,
        report: Value,
    }
    let env = Envelope {
        kind: report.kind(),
        manifest,
        report: report.to_value()?,
    };
    let mut s = serde_json::to_string_pretty(&env)
        .map_err(|e| Error::Format(format!("report serialization: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Parses a json rendering back into its manifest and report.
pub fn parse_json_report(s: &str) -> Result<(RunManifest, Report)> {
    #[derive(Deserialize)]
    struct Envelope {
        kind: String,
        manifest: RunManifest,
        report: Value,
    }
    let env: Envelope =
        serde_json::from_str(s).map_err(|e| Error::Format(format!("report envelope: {e}")))?;
    let report = Report::from_kind_value(&env.kind, env.report)?;
    Ok((env.manifest, report))
}

fn fmt_f(v: f64) -> String {
    format!("{v:.4}")
}

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(x) => fmt_f(x),
        None => "NA".to_string(),
    }
}

/// Full-precision float for csv cells; Display is shortest-roundtrip.
fn raw_f(v: f64) -> String {
    format!("{v}")
}

fn raw_opt(v: Option<f64>) -> String {
    v.map(raw_f).unwrap_or_default()
}

/// Pads every column to its widest cell so the source text reads as a
/// table too.
fn md_table(header: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let emit = |out: &mut String, cells: &[String]| {
        out.push('|');
        for (i, width) in widths.iter().enumerate() {
            let cell = cells.get(i).map(String::as_str).unwrap_or("");
            let pad = width - cell.chars().count();
            out.push(' ');
            out.push_str(cell);
            out.extend(std::iter::repeat_n(' ', pad + 1));
            out.push('|');
        }
        out.push('\n');
    };
    emit(&mut out, header);
    out.push('|');
    for w in &widths {
        out.push_str(&"-".repeat(w + 2));
        out.push('|');
    }
    out.push('\n');
    for row in rows {
        emit(&mut out, row);
    }
    out
}

fn strs(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn md_manifest(manifest: &RunManifest) -> String {
    let mut out = String::from("## Run\n\n");
    let _ = writeln!(out, "- command: `{}`", manifest.command);
    let _ = writeln!(out, "- version: {}", manifest.version);
    match manifest.seed {
        Some(s) => {
            let _ = writeln!(out, "- seed: {s}");
        }
        None => out.push_str("- seed: none\n"),
    }
    let _ = writeln!(out, "- config: `{}`", manifest.config);
    for input in &manifest.inputs {
        let _ = writeln!(out, "- input: `{}` sha256 {}", input.path, input.sha256);
    }
    out
}

fn md_warnings(warnings: &[String]) -> String {
    if warnings.is_empty() {
        return String::new();
    }
    let mut out = String::from("\n## Warnings\n\n");
    for w in warnings {
        let _ = writeln!(out, "- {w}");
    }
    out
}

fn render_md(report: &Report, manifest: &RunManifest) -> String {
    let mut out = String::new();
    match report {
        Report::Evaluation(r) => {
            out.push_str("# Similarity evaluation\n\n");
            let header = strs(&[
                "aspect", "n", "r", "ρ", "MSE", "Acc", "Prec", "Recall", "F1-macro",
                "F1-weighted",
            ]);
            let row = vec![
                r.aspect.to_string(),
                r.n.to_string(),
                fmt_opt(r.r),
                fmt_opt(r.rho),
                fmt_f(r.mse),
                fmt_f(r.accuracy),
                fmt_f(r.precision),
                fmt_f(r.recall),
                fmt_f(r.f1_macro),
                fmt_f(r.f1_weighted),
            ];
            out.push_str(&md_table(&header, &[row]));
            let _ = writeln!(out, "\nBinary threshold: score > {}.", r.threshold);
        }
        Report::Agreement(rows) => {
            out.push_str("# Annotator agreement\n\n");
            let header = strs(&[
                "group", "aspect", "setting", "annotators", "items", "pairs", "mean r",
                "mean ρ", "mean κ", "α", "α level",
            ]);
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.group.clone(),
                        r.aspect.to_string(),
                        r.setting.as_str().to_string(),
                        r.n_annotators.to_string(),
                        r.n_items.to_string(),
                        r.n_pairs.to_string(),
                        fmt_opt(r.mean_pearson),
                        fmt_opt(r.mean_spearman),
                        fmt_opt(r.mean_kappa),
                        fmt_opt(r.alpha),
                        r.alpha_level.as_str().to_string(),
                    ]
                })
                .collect();
            out.push_str(&md_table(&header, &body));
        }
        Report::Consensus(r) => {
            out.push_str("# Consensus vs reference\n\n");
            let header = strs(&["aspect", "setting", "items", "r", "ρ", "κ", "α"]);
            let row = vec![
                r.aspect.to_string(),
                r.setting.as_str().to_string(),
                r.n_items.to_string(),
                fmt_opt(r.r),
                fmt_opt(r.rho),
                fmt_opt(r.kappa),
                fmt_opt(r.alpha),
            ];
            out.push_str(&md_table(&header, &[row]));
        }
        Report::AspectCorrelation(r) => {
            out.push_str("# Gold aspect correlations\n\n");
            let names: Vec<String> = r.aspects.iter().map(|a| a.to_string()).collect();
            let mut header = vec!["aspect".to_string()];
            header.extend(names.iter().cloned());
            for (title, cells) in [("Pearson r", &r.pearson), ("Spearman ρ", &r.spearman)] {
                let _ = writeln!(out, "## {title}\n");
                let body: Vec<Vec<String>> = names
                    .iter()
                    .enumerate()
                    .map(|(i, name)| {
                        let mut row = vec![name.clone()];
                        row.extend(cells[i].iter().map(|c| fmt_opt(*c)));
                        row
                    })
                    .collect();
                out.push_str(&md_table(&header, &body));
                out.push('\n');
            }
            out.push_str("## Complete pairs\n\n");
            let body: Vec<Vec<String>> = names
                .iter()
                .enumerate()
                .map(|(i, name)| {
                    let mut row = vec![name.clone()];
                    row.extend(r.n[i].iter().map(|n| n.to_string()));
                    row
                })
                .collect();
            out.push_str(&md_table(&header, &body));
        }
        Report::Training(r) => {
            out.push_str("# Projection head training\n\n");
            let _ = writeln!(
                out,
                "- loss: {}\n- seed: {}\n- dims: {} -> {}\n- epochs run: {}\n- best epoch: {}",
                r.loss.as_str(),
                r.seed,
                r.in_dim,
                r.out_dim,
                r.epochs_run,
                r.best_epoch,
            );
            out.push('\n');
            let header = strs(&["epoch", "train loss", "dev r", "dev ρ"]);
            let mut body = vec![vec![
                "0".to_string(),
                "NA".to_string(),
                fmt_opt(r.epoch0_dev_pearson),
                fmt_opt(r.epoch0_dev_spearman),
            ]];
            for e in 0..r.epochs_run {
                body.push(vec![
                    (e + 1).to_string(),
                    fmt_f(r.train_loss[e]),
                    fmt_opt(r.dev_pearson[e]),
                    fmt_opt(r.dev_spearman[e]),
                ]);
            }
            out.push_str(&md_table(&header, &body));
        }
        Report::Loss(r) => {
            out.push_str("# Loss evaluation\n\n");
            let header = strs(&[
                "loss", "n", "dim", "value", "‖grad u‖", "‖grad v‖", "margin", "lambda",
            ]);
            let row = vec![
                r.loss.as_str().to_string(),
                r.n.to_string(),
                r.dim.to_string(),
                fmt_f(r.value),
                fmt_f(r.grad_u_norm),
                fmt_f(r.grad_v_norm),
                fmt_f(r.margin),
                fmt_f(r.lambda),
            ];
            out.push_str(&md_table(&header, &[row]));
            if let Some(check) = &r.grad_check {
                let _ = writeln!(
                    out,
                    "\nGradient check: max relative error {:.3e} at step {:.1e}.",
                    check.max_rel_err, check.h
                );
            }
        }
        Report::SevereErrors(r) => {
            out.push_str("# Severe errors by gold bucket\n\n");
            let header = strs(&["gold", "n", "severe", "rate"]);
            let body: Vec<Vec<String>> = r
                .rows
                .iter()
                .map(|row| {
                    vec![
                        format!("{:.1}", row.bucket),
                        row.total.to_string(),
                        row.errors.to_string(),
                        if row.total > 0 {
                            fmt_f(row.errors as f64 / row.total as f64)
                        } else {
                            "NA".to_string()
                        },
                    ]
                })
                .collect();
            out.push_str(&md_table(&header, &body));
            let _ = writeln!(
                out,
                "\nSevere means absolute error above {}; {} predictions.",
                r.delta, r.n
            );
        }
        Report::Bottleneck(r) => {
            out.push_str("# Predicted probability profiles\n\n");
            let header = strs(&[
                "group", "n", "P(1)", "P(2)", "P(3)", "P(4)", "max abs", "TV", "KL",
            ]);
            let mut body = vec![vec![
                "empirical".to_string(),
                r.n_used.to_string(),
                fmt_f(r.empirical[0]),
                fmt_f(r.empirical[1]),
                fmt_f(r.empirical[2]),
                fmt_f(r.empirical[3]),
                "NA".to_string(),
                "NA".to_string(),
                "NA".to_string(),
            ]];
            for g in &r.groups {
                body.push(vec![
                    format!("gold {}", g.gold_class),
                    g.n.to_string(),
                    fmt_f(g.profile[0]),
                    fmt_f(g.profile[1]),
                    fmt_f(g.profile[2]),
                    fmt_f(g.profile[3]),
                    fmt_f(g.max_abs),
                    fmt_f(g.total_variation),
                    fmt_f(g.kl),
                ]);
            }
            out.push_str(&md_table(&header, &body));
            let _ = writeln!(out, "\nRounding: {}.", r.rounding.as_str());
        }
        Report::Confusion(r) => {
            out.push_str("# Confusion matrix\n\n");
            let header = strs(&["gold \\ pred", "1", "2", "3", "4"]);
            let body: Vec<Vec<String>> = (0..4)
                .map(|g| {
                    let mut row = vec![(g + 1).to_string()];
                    row.extend(r.counts[g].iter().map(|c| c.to_string()));
                    row
                })
                .collect();
            out.push_str(&md_table(&header, &body));
            let _ = writeln!(
                out,
                "\nMode: {}; rounding: {}; {} predictions.",
                r.mode.as_str(),
                r.rounding.as_str(),
                r.n
            );
        }
    }
    out.push_str(&md_warnings(report.warnings()));
    out.push('\n');
    out.push_str(&md_manifest(manifest));
    out
}

fn csv_from_rows(header: &[String], rows: &[Vec<String>]) -> Result<String> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(header)
        .and_then(|_| rows.iter().try_for_each(|r| wtr.write_record(r)))
        .map_err(|e| Error::Format(format!("csv: {e}")))?;
    let bytes = wtr
        .into_inner()
        .map_err(|e| Error::Format(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Format(format!("csv: {e}")))
}

fn render_csv(report: &Report, manifest: &RunManifest) -> Result<String> {
    let mut out = String::new();
    let _ = writeln!(out, "# kind: {}", report.kind());
    let _ = writeln!(out, "# command: {}", manifest.command);
    let _ = writeln!(out, "# version: {}", manifest.version);
    match manifest.seed {
        Some(s) => {
            let _ = writeln!(out, "# seed: {s}");
        }
        None => out.push_str("# seed:\n"),
    }
    let _ = writeln!(out, "# config: {}", manifest.config);
    for input in &manifest.inputs {
        let _ = writeln!(out, "# input: {} sha256={}", input.path, input.sha256);
    }
    for w in report.warnings() {
        let _ = writeln!(out, "# warning: {w}");
    }

    let (header, rows) = match report {
        Report::Evaluation(r) => (
            strs(&[
                "aspect",
                "n",
                "r",
                "rho",
                "mse",
                "accuracy",
                "precision",
                "recall",
                "f1_macro",
                "f1_weighted",
                "threshold",
            ]),
            vec![vec![
                r.aspect.to_string(),
                r.n.to_string(),
                raw_opt(r.r),
                raw_opt(r.rho),
                raw_f(r.mse),
                raw_f(r.accuracy),
                raw_f(r.precision),
                raw_f(r.recall),
                raw_f(r.f1_macro),
                raw_f(r.f1_weighted),
                raw_f(r.threshold),
            ]],
        ),
        Report::Agreement(rows) => (
            strs(&[
                "group",
                "aspect",
                "setting",
                "annotators",
                "items",
                "pairs",
                "mean_pearson",
                "mean_spearman",
                "mean_kappa",
                "alpha",
                "alpha_level",
            ]),
            rows.iter()
                .map(|r| {
                    vec![
                        r.group.clone(),
                        r.aspect.to_string(),
                        r.setting.as_str().to_string(),
                        r.n_annotators.to_string(),
                        r.n_items.to_string(),
                        r.n_pairs.to_string(),
                        raw_opt(r.mean_pearson),
                        raw_opt(r.mean_spearman),
                        raw_opt(r.mean_kappa),
                        raw_opt(r.alpha),
                        r.alpha_level.as_str().to_string(),
                    ]
                })
                .collect(),
        ),
        Report::Consensus(r) => (
            strs(&["aspect", "setting", "items", "r", "rho", "kappa", "alpha"]),
            vec![vec![
                r.aspect.to_string(),
                r.setting.as_str().to_string(),
                r.n_items.to_string(),
                raw_opt(r.r),
                raw_opt(r.rho),
                raw_opt(r.kappa),
                raw_opt(r.alpha),
            ]],
        ),
        Report::AspectCorrelation(r) => (
            strs(&["aspect_a", "aspect_b", "n", "pearson", "spearman"]),
            {
                let mut rows = Vec::new();
                for i in 0..r.aspects.len() {
                    for j in 0..r.aspects.len() {
                        rows.push(vec![
                            r.aspects[i].to_string(),
                            r.aspects[j].to_string(),
                            r.n[i][j].to_string(),
                            raw_opt(r.pearson[i][j]),
                            raw_opt(r.spearman[i][j]),
                        ]);
                    }
                }
                rows
            },
        ),
        Report::Training(r) => (
            strs(&["epoch", "train_loss", "dev_pearson", "dev_spearman"]),
            {
                let mut rows = vec![vec![
                    "0".to_string(),
                    String::new(),
                    raw_opt(r.epoch0_dev_pearson),
                    raw_opt(r.epoch0_dev_spearman),
                ]];
                for e in 0..r.epochs_run {
                    rows.push(vec![
                        (e + 1).to_string(),
                        raw_f(r.train_loss[e]),
                        raw_opt(r.dev_pearson[e]),
                        raw_opt(r.dev_spearman[e]),
                    ]);
                }
                rows
            },
        ),
        Report::Loss(r) => (
            strs(&[
                "loss",
                "n",
                "dim",
                "value",
                "grad_u_norm",
                "grad_v_norm",
                "margin",
                "lambda",
                "grad_check_max_rel_err",
            ]),
            vec![vec![
                r.loss.as_str().to_string(),
                r.n.to_string(),
                r.dim.to_string(),
                raw_f(r.value),
                raw_f(r.grad_u_norm),
                raw_f(r.grad_v_norm),
                raw_f(r.margin),
                raw_f(r.lambda),
                r.grad_check
                    .map(|c| raw_f(c.max_rel_err))
                    .unwrap_or_default(),
            ]],
        ),
        Report::SevereErrors(r) => (
            strs(&["gold_bucket", "n", "severe"]),
            r.rows
                .iter()
                .map(|row| {
                    vec![
                        raw_f(row.bucket),
                        row.total.to_string(),
                        row.errors.to_string(),
                    ]
                })
                .collect(),
        ),
        Report::Bottleneck(r) => (
            strs(&[
                "group", "n", "p1", "p2", "p3", "p4", "max_abs", "total_variation", "kl",
            ]),
            {
                let mut rows = vec![vec![
                    "empirical".to_string(),
                    r.n_used.to_string(),
                    raw_f(r.empirical[0]),
                    raw_f(r.empirical[1]),
                    raw_f(r.empirical[2]),
                    raw_f(r.empirical[3]),
                    String::new(),
                    String::new(),
                    String::new(),
                ]];
                for g in &r.groups {
                    rows.push(vec![
                        g.gold_class.to_string(),
                        g.n.to_string(),
                        raw_f(g.profile[0]),
                        raw_f(g.profile[1]),
                        raw_f(g.profile[2]),
                        raw_f(g.profile[3]),
                        raw_f(g.max_abs),
                        raw_f(g.total_variation),
                        raw_f(g.kl),
                    ]);
                }
                rows
            },
        ),
        Report::Confusion(r) => (
            strs(&["gold", "pred_1", "pred_2", "pred_3", "pred_4"]),
            (0..4)
                .map(|g| {
                    let mut row = vec![(g + 1).to_string()];
                    row.extend(r.counts[g].iter().map(|c| c.to_string()));
                    row
                })
                .collect(),
        ),
    };
    out.push_str(&csv_from_rows(&header, &rows)?);
    Ok(out)
}
