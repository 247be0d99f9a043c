//! Command-line front end. Each subcommand maps one analysis onto files:
//! parse, compute, render, write. All report output is buffered and written
//! once, so a failing run never leaves a complete-looking artifact behind.
//!
//! Exit statuses: 0 success, 1 validation or computation failure, 2
//! insufficient data, 64 usage.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::agreement::{consensus_vs_reference, group_report, Discretizer};
use crate::data::{
    parse_annotations, parse_embeddings_auto, parse_groups, parse_pairs, parse_predictions,
    parse_reference, AnnotationSet, Aspect, EmbeddingSet, FileFormat, PairSet, Parsed,
    PredictionSet, Rounding, Setting,
};
use crate::diagnostics::{
    confusion_matrix, probability_profile, severe_error_table, ConfusionMode,
};
use crate::error::{Error, Result};
use crate::losses::{LossConfig, LossKind, PairBatch};
use crate::report::{
    render, GradCheckReport, LossReport, OutputFormat, Report, RunManifest,
};
use crate::scoring::{cosine_score_pairs, swap_aggregate, SwapMode};
use crate::stats::{aspect_correlation, evaluate, EvalConfig};
use crate::trainer::{make_pair_triples, train_projection, ProjectionHead, TrainConfig, TrainHistory};

#[derive(Parser)]
#[command(
    name = "empath-eval",
    version,
    about = "Evaluation toolkit for story-pair similarity scoring"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format: md, csv or json.
    #[arg(long, global = true, default_value = "md")]
    format: String,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Suppress warnings on standard error.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Correlation and classification metrics for predictions against gold.
    Evaluate(EvaluateArgs),
    /// Score pairs by embedding cosine; emits a predictions JSONL file.
    Score(ScoreArgs),
    /// Train a linear projection head on embedding pairs.
    TrainHead(TrainHeadArgs),
    /// Evaluate one loss (and optionally check its gradients) on a batch.
    LossEval(LossEvalArgs),
    /// Inter-annotator agreement tables.
    Agreement(AgreementArgs),
    /// Correlations between gold aspect columns.
    AspectCorr(AspectCorrArgs),
    /// Error and bottleneck analyses.
    #[command(subcommand)]
    Diagnose(DiagnoseCmd),
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    pairs: PathBuf,
    #[arg(long)]
    preds: PathBuf,
    #[arg(long)]
    aspect: String,
    /// Binary label threshold; a score strictly above it is the similar class.
    #[arg(long, default_value_t = 2.5)]
    threshold: f64,
    /// Swap handling: standard, reverse or mean.
    #[arg(long)]
    swap: Option<String>,
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long)]
    pairs: PathBuf,
    #[arg(long)]
    embeddings: PathBuf,
    /// Projection head file: a training report, history or bare head JSON.
    #[arg(long)]
    head: Option<PathBuf>,
    #[arg(long, default_value_t = 4.0)]
    scale: f64,
    /// Aspect tag stamped on the emitted predictions.
    #[arg(long, default_value = "empathy")]
    aspect: String,
    /// Clamp scaled scores into [1, 4].
    #[arg(long)]
    clamp: bool,
}

#[derive(Args)]
struct TrainHeadArgs {
    #[arg(long)]
    pairs: PathBuf,
    #[arg(long)]
    embeddings: PathBuf,
    /// Aspect whose gold scores drive the loss on the train split.
    #[arg(long)]
    train_aspect: String,
    /// Aspect evaluated on the dev split each epoch.
    #[arg(long, default_value = "empathy")]
    eval_aspect: String,
    /// cosine_mse, contrastive, cosent or angle.
    #[arg(long)]
    loss: String,
    #[arg(long, default_value_t = 0.01)]
    lr: f64,
    #[arg(long, default_value_t = 20)]
    epochs: usize,
    #[arg(long, default_value_t = 32)]
    batch: usize,
    /// Defaults to EMPATH_EVAL_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 32)]
    out_dim: usize,
    /// Stop after this many epochs without a dev improvement and keep the
    /// best head.
    #[arg(long)]
    early_stop: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    margin: f64,
    #[arg(long, default_value_t = 20.0)]
    lambda: f64,
}

#[derive(Args)]
struct LossEvalArgs {
    /// JSONL rows {"u": [...], "v": [...], "label": s} with optional
    /// "binary".
    #[arg(long)]
    batch: PathBuf,
    #[arg(long)]
    loss: String,
    #[arg(long, default_value_t = 0.5)]
    margin: f64,
    #[arg(long, default_value_t = 20.0)]
    lambda: f64,
    /// Compare analytic gradients against central differences.
    #[arg(long)]
    grad_check: bool,
}

#[derive(Args)]
struct AgreementArgs {
    #[arg(long)]
    annotations: PathBuf,
    /// JSON object mapping group name to annotator ids; default one group
    /// of everyone.
    #[arg(long)]
    groups: Option<PathBuf>,
    /// One aspect tag, or "all".
    #[arg(long, default_value = "all")]
    aspect: String,
    /// summary, full, combined, discrete, or "all".
    #[arg(long, default_value = "all")]
    setting: String,
    /// Per-pair reference scores; switches to consensus-vs-reference mode.
    #[arg(long)]
    reference: Option<PathBuf>,
}

#[derive(Args)]
struct AspectCorrArgs {
    #[arg(long)]
    pairs: PathBuf,
}

#[derive(Subcommand)]
enum DiagnoseCmd {
    /// Severe prediction errors per gold bucket.
    Errors(DiagnoseArgs),
    /// Predicted probability profiles against the empirical distribution.
    Bottleneck(DiagnoseArgs),
    /// Gold class against predicted class.
    Confusion(DiagnoseArgs),
}

#[derive(Args)]
struct DiagnoseArgs {
    #[arg(long)]
    pairs: PathBuf,
    #[arg(long)]
    preds: PathBuf,
    #[arg(long)]
    aspect: String,
    /// Absolute error strictly above this counts as severe.
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    /// half-down, half-up or nearest-even.
    #[arg(long, default_value = "half-down")]
    rounding: String,
    /// Swap handling applied before analysis: standard, reverse or mean.
    #[arg(long)]
    swap: Option<String>,
    /// Confusion only: argmax-probs or rounded-score. Defaults to
    /// argmax-probs when every prediction carries a distribution.
    #[arg(long)]
    mode: Option<String>,
}

/// Parses argv, runs the command, and maps failures to exit statuses.
pub fn run<I>(argv: I) -> i32
where
    I: IntoIterator<Item = OsString>,
{
    let argv: Vec<OsString> = argv.into_iter().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    64
                }
            };
        }
    };
    let command_line: Vec<String> = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    match execute(cli, command_line.join(" ")) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_status()
        }
    }
}

/// Flag values with a fixed vocabulary fail as usage errors.
fn usage(e: Error) -> Error {
    Error::Usage(e.to_string())
}

fn execute(cli: Cli, command_line: String) -> Result<()> {
    let format = OutputFormat::parse(&cli.format).map_err(usage)?;
    let quiet = cli.quiet;
    let out = cli.out.clone();
    let text = match cli.command {
        Command::Evaluate(args) => cmd_evaluate(args, command_line, format, quiet)?,
        Command::Score(args) => cmd_score(args, quiet)?,
        Command::TrainHead(args) => cmd_train_head(args, command_line, format)?,
        Command::LossEval(args) => cmd_loss_eval(args, command_line, format)?,
        Command::Agreement(args) => cmd_agreement(args, command_line, format)?,
        Command::AspectCorr(args) => cmd_aspect_corr(args, command_line, format)?,
        Command::Diagnose(cmd) => cmd_diagnose(cmd, command_line, format, quiet)?,
    };
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_warnings(warnings: &[String], quiet: bool) {
    if !quiet {
        for w in warnings {
            eprintln!("warning: {w}");
        }
    }
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

/// A row that failed to parse is a hard error: dropping it would silently
/// bias every downstream number.
fn strict<T>(parsed: Parsed<T>, path: &Path) -> Result<T> {
    if parsed.ok() {
        return Ok(parsed.value);
    }
    let mut msg = format!(
        "{}: {} of {} rows invalid",
        path.display(),
        parsed.row_errors.len(),
        parsed.rows_seen
    );
    for e in parsed.row_errors.iter().take(5) {
        msg.push_str("\n  ");
        msg.push_str(&e.to_string());
    }
    if parsed.row_errors.len() > 5 {
        msg.push_str("\n  ...");
    }
    Err(Error::Format(msg))
}

fn load_pairs(path: &Path) -> Result<PairSet> {
    let text = read_to_string(path)?;
    strict(
        parse_pairs(text.as_bytes(), FileFormat::from_path(path))?,
        path,
    )
}

fn load_predictions(path: &Path) -> Result<PredictionSet> {
    let text = read_to_string(path)?;
    strict(
        parse_predictions(text.as_bytes(), FileFormat::from_path(path))?,
        path,
    )
}

fn load_annotations(path: &Path) -> Result<AnnotationSet> {
    let text = read_to_string(path)?;
    strict(
        parse_annotations(text.as_bytes(), FileFormat::from_path(path))?,
        path,
    )
}

fn load_embeddings(path: &Path) -> Result<EmbeddingSet> {
    let bytes = fs::read(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })?;
    strict(parse_embeddings_auto(&bytes)?, path)
}

/// Accepts a bare head, a training history, or a full training report.
fn load_head(path: &Path) -> Result<ProjectionHead> {
    let text = read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    let body = match value.get("kind") {
        Some(kind) if kind == "training" => value
            .get("report")
            .cloned()
            .ok_or_else(|| Error::Format(format!("{}: report body missing", path.display())))?,
        _ => value,
    };
    if body.get("train_loss").is_some() {
        let history: TrainHistory = serde_json::from_value(body)
            .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        ProjectionHead::new(history.in_dim, history.out_dim, history.weights)
    } else {
        let head: ProjectionHead = serde_json::from_value(body)
            .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        ProjectionHead::new(head.in_dim, head.out_dim, head.weights)
    }
}

/// Applies the optional --swap flag; without it predictions pass through
/// and duplicates surface downstream.
fn apply_swap(
    preds: PredictionSet,
    swap: &Option<String>,
    quiet: bool,
) -> Result<(PredictionSet, Option<SwapMode>)> {
    match swap {
        None => Ok((preds, None)),
        Some(s) => {
            let mode = SwapMode::parse(s).map_err(usage)?;
            let agg = swap_aggregate(&preds, mode)?;
            emit_warnings(&agg.warnings, quiet);
            Ok((agg.preds, Some(mode)))
        }
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("EMPATH_EVAL_SEED") {
        Ok(raw) => raw
            .parse::<u64>()
            .map_err(|_| Error::Format(format!("EMPATH_EVAL_SEED {raw:?} is not a u64"))),
        Err(_) => Ok(0),
    }
}

fn cmd_evaluate(
    args: EvaluateArgs,
    command_line: String,
    format: OutputFormat,
    quiet: bool,
) -> Result<String> {
    let pairs = load_pairs(&args.pairs)?;
    let preds = load_predictions(&args.preds)?;
    let (preds, swap) = apply_swap(preds, &args.swap, quiet)?;
    let aspect = Aspect::new(args.aspect.as_str());
    let config = EvalConfig {
        bin_threshold: args.threshold,
        ..EvalConfig::default()
    };
    let report = evaluate(&preds, &pairs, &aspect, &config)?;
    emit_warnings(&report.warnings, quiet);
    let mut manifest = RunManifest::new(
        command_line,
        json!({
            "aspect": aspect,
            "eval": config,
            "swap": swap.map(SwapMode::as_str),
        }),
        None,
    );
    manifest.add_input(&args.pairs)?;
    manifest.add_input(&args.preds)?;
    render(&Report::Evaluation(report), &manifest, format)
}

fn cmd_score(args: ScoreArgs, _quiet: bool) -> Result<String> {
    let pairs = load_pairs(&args.pairs)?;
    let embeddings = load_embeddings(&args.embeddings)?;
    let head = match &args.head {
        Some(path) => Some(load_head(path)?),
        None => None,
    };
    let config = EvalConfig {
        scale_factor: args.scale,
        clamp_scores: args.clamp,
        ..EvalConfig::default()
    };
    let aspect = Aspect::new(args.aspect.as_str());
    let preds = cosine_score_pairs(&embeddings, &pairs, &aspect, head.as_ref(), &config)?;
    let mut bytes = Vec::new();
    crate::data::write_predictions_jsonl(&preds, &mut bytes)?;
    String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
}

fn cmd_train_head(
    args: TrainHeadArgs,
    command_line: String,
    format: OutputFormat,
) -> Result<String> {
    let pairs = load_pairs(&args.pairs)?;
    let embeddings = load_embeddings(&args.embeddings)?;
    let train_aspect = Aspect::new(args.train_aspect.as_str());
    let eval_aspect = Aspect::new(args.eval_aspect.as_str());
    let seed = resolve_seed(args.seed)?;
    let config = TrainConfig {
        loss: LossKind::parse(&args.loss).map_err(usage)?,
        loss_config: LossConfig {
            margin: args.margin,
            lambda: args.lambda,
        },
        lr: args.lr,
        epochs: args.epochs,
        batch_size: args.batch,
        seed,
        out_dim: args.out_dim,
        early_stop: args.early_stop,
    };
    let train = make_pair_triples(&pairs, &embeddings, &train_aspect, Some("train"));
    let dev = make_pair_triples(&pairs, &embeddings, &eval_aspect, Some("dev"));
    let (_head, history) = train_projection(&train, &dev, &config)?;
    let mut manifest = RunManifest::new(
        command_line,
        json!({
            "train_aspect": train_aspect,
            "eval_aspect": eval_aspect,
            "train": config,
        }),
        Some(seed),
    );
    manifest.add_input(&args.pairs)?;
    manifest.add_input(&args.embeddings)?;
    render(&Report::Training(history), &manifest, format)
}

#[derive(serde::Deserialize)]
struct BatchRow {
    u: Vec<f64>,
    v: Vec<f64>,
    label: f64,
    #[serde(default)]
    binary: Option<u8>,
}

fn load_batch(path: &Path) -> Result<PairBatch> {
    let text = read_to_string(path)?;
    let mut u = Vec::new();
    let mut v = Vec::new();
    let mut labels = Vec::new();
    let mut binary = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: BatchRow = serde_json::from_str(line)
            .map_err(|e| Error::Row {
                row: i + 1,
                msg: e.to_string(),
            })?;
        u.push(row.u);
        v.push(row.v);
        labels.push(row.label);
        binary.push(row.binary);
    }
    if binary.iter().any(Option::is_some) {
        let explicit: Option<Vec<u8>> = binary.into_iter().collect();
        match explicit {
            Some(b) => PairBatch::with_binary(u, v, labels, b),
            None => Err(Error::Format(
                "binary labels must be on every row or none".into(),
            )),
        }
    } else {
        PairBatch::new(u, v, labels)
    }
}

fn side_norm(grads: &[Vec<f64>]) -> f64 {
    grads
        .iter()
        .flat_map(|g| g.iter())
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
}

fn cmd_loss_eval(
    args: LossEvalArgs,
    command_line: String,
    format: OutputFormat,
) -> Result<String> {
    let kind = LossKind::parse(&args.loss).map_err(usage)?;
    let loss_config = LossConfig {
        margin: args.margin,
        lambda: args.lambda,
    };
    let batch = load_batch(&args.batch)?;
    let result = kind.evaluate(&batch, &loss_config)?;
    let grad_check = if args.grad_check {
        let h = 1e-6;
        let (num_u, num_v) = crate::losses::finite_diff_grad(kind, &batch, &loss_config, h)?;
        let mut diff = 0.0;
        let mut norm = 0.0;
        for (a, b) in result
            .grad_u
            .iter()
            .chain(result.grad_v.iter())
            .zip(num_u.iter().chain(num_v.iter()))
        {
            for (x, y) in a.iter().zip(b.iter()) {
                diff += (x - y) * (x - y);
                norm += y * y;
            }
        }
        Some(GradCheckReport {
            h,
            max_rel_err: diff.sqrt() / norm.sqrt().max(1e-12),
        })
    } else {
        None
    };
    let report = LossReport {
        loss: kind,
        margin: loss_config.margin,
        lambda: loss_config.lambda,
        n: batch.len(),
        dim: batch.dim(),
        value: result.value,
        grad_u_norm: side_norm(&result.grad_u),
        grad_v_norm: side_norm(&result.grad_v),
        grad_check,
    };
    let mut manifest = RunManifest::new(
        command_line,
        json!({
            "loss": kind,
            "loss_config": loss_config,
            "grad_check": args.grad_check,
        }),
        None,
    );
    manifest.add_input(&args.batch)?;
    render(&Report::Loss(report), &manifest, format)
}

fn cmd_agreement(
    args: AgreementArgs,
    command_line: String,
    format: OutputFormat,
) -> Result<String> {
    let annotations = load_annotations(&args.annotations)?;
    let mut manifest_config = json!({
        "aspect": args.aspect,
        "setting": args.setting,
    });
    let report = if let Some(ref_path) = &args.reference {
        if args.aspect == "all" || args.setting == "all" {
            return Err(Error::Usage(
                "consensus mode needs one --aspect and one --setting".into(),
            ));
        }
        let aspect = Aspect::new(args.aspect.as_str());
        let setting = Setting::parse(&args.setting).map_err(usage)?;
        let text = read_to_string(ref_path)?;
        let reference = strict(
            parse_reference(text.as_bytes(), FileFormat::from_path(ref_path))?,
            ref_path,
        )?;
        manifest_config["mode"] = json!("consensus");
        Report::Consensus(consensus_vs_reference(
            &annotations,
            &aspect,
            setting,
            &reference,
            Discretizer::default_for(setting),
        )?)
    } else {
        let groups = match &args.groups {
            Some(path) => {
                let text = read_to_string(path)?;
                parse_groups(text.as_bytes())?
            }
            None => {
                let mut all = std::collections::BTreeMap::new();
                all.insert(
                    "all".to_string(),
                    annotations.roster().into_iter().collect::<Vec<_>>(),
                );
                all
            }
        };
        let aspects: Vec<Aspect> = if args.aspect == "all" {
            let mut seen: std::collections::BTreeSet<Aspect> = Default::default();
            for rec in annotations.iter() {
                seen.insert(rec.aspect.clone());
            }
            seen.into_iter().collect()
        } else {
            vec![Aspect::new(args.aspect.as_str())]
        };
        let settings: Vec<Setting> = if args.setting == "all" {
            Setting::ALL.to_vec()
        } else {
            vec![Setting::parse(&args.setting).map_err(usage)?]
        };
        manifest_config["mode"] = json!("group");
        manifest_config["groups"] = json!(groups.keys().collect::<Vec<_>>());
        Report::Agreement(group_report(&annotations, &groups, &aspects, &settings)?)
    };
    let mut manifest = RunManifest::new(command_line, manifest_config, None);
    manifest.add_input(&args.annotations)?;
    if let Some(path) = &args.groups {
        manifest.add_input(path)?;
    }
    if let Some(path) = &args.reference {
        manifest.add_input(path)?;
    }
    render(&report, &manifest, format)
}

fn cmd_aspect_corr(
    args: AspectCorrArgs,
    command_line: String,
    format: OutputFormat,
) -> Result<String> {
    let pairs = load_pairs(&args.pairs)?;
    let report = aspect_correlation(&pairs)?;
    let mut manifest = RunManifest::new(command_line, json!({}), None);
    manifest.add_input(&args.pairs)?;
    render(&Report::AspectCorrelation(report), &manifest, format)
}

fn cmd_diagnose(
    cmd: DiagnoseCmd,
    command_line: String,
    format: OutputFormat,
    quiet: bool,
) -> Result<String> {
    let (name, args) = match &cmd {
        DiagnoseCmd::Errors(a) => ("errors", a),
        DiagnoseCmd::Bottleneck(a) => ("bottleneck", a),
        DiagnoseCmd::Confusion(a) => ("confusion", a),
    };
    let pairs = load_pairs(&args.pairs)?;
    let preds = load_predictions(&args.preds)?;
    let (preds, swap) = apply_swap(preds, &args.swap, quiet)?;
    let aspect = Aspect::new(args.aspect.as_str());
    let rounding = Rounding::parse(&args.rounding).map_err(usage)?;
    if args.mode.is_some() && name != "confusion" {
        return Err(Error::Usage(format!(
            "--mode applies to diagnose confusion, not diagnose {name}"
        )));
    }

    let (report, config) = match name {
        "errors" => {
            let config = EvalConfig {
                severe_delta: args.delta,
                ..EvalConfig::default()
            };
            let table = severe_error_table(&preds, &pairs, &aspect, &config)?;
            (
                Report::SevereErrors(table),
                json!({
                    "aspect": aspect,
                    "delta": args.delta,
                    "swap": swap.map(SwapMode::as_str),
                }),
            )
        }
        "bottleneck" => {
            let profile = probability_profile(&preds, &pairs, &aspect, rounding)?;
            (
                Report::Bottleneck(profile),
                json!({
                    "aspect": aspect,
                    "rounding": rounding,
                    "swap": swap.map(SwapMode::as_str),
                }),
            )
        }
        _ => {
            let mode = match &args.mode {
                Some(m) => ConfusionMode::parse(m).map_err(usage)?,
                None => {
                    let mut for_aspect = preds.for_aspect(&aspect).peekable();
                    let any = for_aspect.peek().is_some();
                    if any && preds.for_aspect(&aspect).all(|r| r.probs.is_some()) {
                        ConfusionMode::ArgmaxProbs
                    } else {
                        ConfusionMode::RoundedScore
                    }
                }
            };
            let matrix = confusion_matrix(&preds, &pairs, &aspect, rounding, mode)?;
            (
                Report::Confusion(matrix),
                json!({
                    "aspect": aspect,
                    "rounding": rounding,
                    "mode": mode,
                    "swap": swap.map(SwapMode::as_str),
                }),
            )
        }
    };
    if let Report::SevereErrors(t) = &report {
        emit_warnings(&t.warnings, quiet);
    }
    if let Report::Bottleneck(p) = &report {
        emit_warnings(&p.warnings, quiet);
    }
    if let Report::Confusion(m) = &report {
        emit_warnings(&m.warnings, quiet);
    }
    let mut manifest = RunManifest::new(command_line, config, None);
    manifest.add_input(&args.pairs)?;
    manifest.add_input(&args.preds)?;
    render(&report, &manifest, format)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(list: &[&str]) -> Vec<OsString> {
        list.iter().map(OsString::from).collect()
    }

    #[test]
    fn unknown_flag_is_usage() {
        assert_eq!(run(args(&["empath-eval", "evaluate", "--bogus"])), 64);
    }

    #[test]
    fn missing_subcommand_is_usage() {
        assert_eq!(run(args(&["empath-eval"])), 64);
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(run(args(&["empath-eval", "--help"])), 0);
    }

    #[test]
    fn bad_format_value_is_usage() {
        assert_eq!(
            run(args(&[
                "empath-eval",
                "aspect-corr",
                "--pairs",
                "nonexistent.jsonl",
                "--format",
                "xml",
            ])),
            64
        );
    }

    #[test]
    fn seed_flag_wins() {
        assert_eq!(resolve_seed(Some(9)).unwrap(), 9);
    }
}
