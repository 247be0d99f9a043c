//! Ingestion of pairs, annotations, predictions and reference scores.
//!
//! Parsers collect row-scoped problems instead of aborting: every input row
//! either lands in the parsed collection or produces one entry in
//! `row_errors`, so rows are never silently dropped. File-level problems
//! (unreadable input, missing header columns, bad magic) fail the whole call.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use serde::Deserialize;

use crate::data::types::{
    AnnotationRecord, AnnotationSet, AnnotationValue, Aspect, AspectScores, DiscreteClass,
    PairSet, PredictionRecord, PredictionSet, Setting, StoryPair, Variant,
};
use crate::error::{Error, Result, RowError};

/// Tolerated deviation of a probability vector's sum from 1.
pub const PROB_SUM_TOLERANCE: f64 = 1e-6;

/// Input serialization for tabular records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    Jsonl,
    Csv,
}

impl FileFormat {
    /// Picks a format from a file extension; anything but `.csv` reads as JSONL.
    pub fn from_path(path: &Path) -> FileFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => FileFormat::Csv,
            _ => FileFormat::Jsonl,
        }
    }
}

/// Parse outcome: the validated collection plus per-row problems.
#[derive(Debug)]
pub struct Parsed<T> {
    pub value: T,
    pub row_errors: Vec<RowError>,
    /// Data rows seen (blank lines and the CSV header do not count).
    pub rows_seen: usize,
}

impl<T> Parsed<T> {
    pub fn ok(&self) -> bool {
        self.row_errors.is_empty()
    }
}

fn push_err(errors: &mut Vec<RowError>, row: usize, message: impl Into<String>) {
    errors.push(RowError {
        row,
        message: message.into(),
    });
}

fn check_gold(scores: &AspectScores) -> std::result::Result<(), String> {
    for a in Aspect::canonical() {
        if let Some(v) = scores.get(&a) {
            if !v.is_finite() || !(1.0..=4.0).contains(&v) {
                return Err(format!("gold {a} score {v} outside [1, 4]"));
            }
        }
    }
    Ok(())
}

/// Validates a probability vector and renormalizes it to sum exactly to 1.
/// Entries must be finite and non-negative; the raw sum must already be
/// within `PROB_SUM_TOLERANCE` of 1, otherwise the vector is rejected.
pub fn validate_probs(raw: &[f64]) -> std::result::Result<[f64; 4], String> {
    if raw.len() != 4 {
        return Err(format!("probs has {} entries, expected 4", raw.len()));
    }
    let mut out = [0.0; 4];
    let mut sum = 0.0;
    for (i, &p) in raw.iter().enumerate() {
        if !p.is_finite() || p < 0.0 {
            return Err(format!("probs[{i}] = {p} is not a probability"));
        }
        out[i] = p;
        sum += p;
    }
    if (sum - 1.0).abs() > PROB_SUM_TOLERANCE {
        return Err(format!("probs sum to {sum}, outside 1 +/- {PROB_SUM_TOLERANCE}"));
    }
    for p in &mut out {
        *p /= sum;
    }
    Ok(out)
}

#[derive(Deserialize)]
struct PairRow {
    pair_id: String,
    story_a_id: String,
    story_b_id: String,
    #[serde(default)]
    full_a: Option<String>,
    #[serde(default)]
    full_b: Option<String>,
    #[serde(default)]
    summary_a: Option<String>,
    #[serde(default)]
    summary_b: Option<String>,
    #[serde(default)]
    gold: AspectScores,
    #[serde(default)]
    split: Option<String>,
    #[serde(default)]
    language: Option<String>,
    #[serde(default)]
    theme: Option<String>,
    #[serde(default)]
    reason: Option<String>,
}

impl From<PairRow> for StoryPair {
    fn from(r: PairRow) -> StoryPair {
        StoryPair {
            pair_id: r.pair_id,
            story_a_id: r.story_a_id,
            story_b_id: r.story_b_id,
            full_a: r.full_a,
            full_b: r.full_b,
            summary_a: r.summary_a,
            summary_b: r.summary_b,
            gold: r.gold,
            split: r.split,
            language: r.language,
            theme: r.theme,
            reason: r.reason,
        }
    }
}

/// Reads story pairs from JSONL (canonical) or flat CSV.
pub fn parse_pairs<R: Read>(reader: R, format: FileFormat) -> Result<Parsed<PairSet>> {
    let mut rows: Vec<StoryPair> = Vec::new();
    let mut errors: Vec<RowError> = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut rows_seen = 0usize;

    let mut accept = |pair: StoryPair, row: usize, errors: &mut Vec<RowError>| {
        if let Err(msg) = check_gold(&pair.gold) {
            push_err(errors, row, msg);
            return;
        }
        if !seen.insert(pair.pair_id.clone()) {
            push_err(errors, row, format!("duplicate pair_id {}", pair.pair_id));
            return;
        }
        rows.push(pair);
    };

    match format {
        FileFormat::Jsonl => {
            for (line_no, line) in BufReader::new(reader).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let row = line_no + 1;
                rows_seen += 1;
                match serde_json::from_str::<PairRow>(&line) {
                    Ok(r) => accept(r.into(), row, &mut errors),
                    Err(e) => push_err(&mut errors, row, e.to_string()),
                }
            }
        }
        FileFormat::Csv => {
            let mut rdr = csv::Reader::from_reader(reader);
            let headers = rdr.headers()?.clone();
            let col = |name: &str| headers.iter().position(|h| h == name);
            let required = |name: &str| {
                col(name).ok_or_else(|| Error::Format(format!("csv is missing column {name:?}")))
            };
            let c_pair = required("pair_id")?;
            let c_a = required("story_a_id")?;
            let c_b = required("story_b_id")?;
            let text_cols = [
                col("full_a"),
                col("full_b"),
                col("summary_a"),
                col("summary_b"),
            ];
            let gold_cols = [col("event"), col("emotion"), col("moral"), col("empathy")];
            let meta_cols = [col("split"), col("language"), col("theme"), col("reason")];

            for (i, rec) in rdr.records().enumerate() {
                let row = i + 2;
                rows_seen += 1;
                let rec = match rec {
                    Ok(r) => r,
                    Err(e) => {
                        push_err(&mut errors, row, e.to_string());
                        continue;
                    }
                };
                let cell = |idx: Option<usize>| -> Option<String> {
                    idx.and_then(|i| rec.get(i))
                        .filter(|s| !s.is_empty())
                        .map(|s| s.to_string())
                };
                let mut gold = AspectScores::default();
                let mut bad = None;
                let slots: [&mut Option<f64>; 4] = [
                    &mut gold.event,
                    &mut gold.emotion,
                    &mut gold.moral,
                    &mut gold.empathy,
                ];
                for (slot, idx) in slots.into_iter().zip(gold_cols) {
                    if let Some(text) = cell(idx) {
                        match text.parse::<f64>() {
                            Ok(v) => *slot = Some(v),
                            Err(_) => {
                                bad = Some(format!("gold value {text:?} is not a number"));
                                break;
                            }
                        }
                    }
                }
                if let Some(msg) = bad {
                    push_err(&mut errors, row, msg);
                    continue;
                }
                let pair = StoryPair {
                    pair_id: rec.get(c_pair).unwrap_or_default().to_string(),
                    story_a_id: rec.get(c_a).unwrap_or_default().to_string(),
                    story_b_id: rec.get(c_b).unwrap_or_default().to_string(),
                    full_a: cell(text_cols[0]),
                    full_b: cell(text_cols[1]),
                    summary_a: cell(text_cols[2]),
                    summary_b: cell(text_cols[3]),
                    gold,
                    split: cell(meta_cols[0]),
                    language: cell(meta_cols[1]),
                    theme: cell(meta_cols[2]),
                    reason: cell(meta_cols[3]),
                };
                if pair.pair_id.is_empty() {
                    push_err(&mut errors, row, "empty pair_id");
                    continue;
                }
                accept(pair, row, &mut errors);
            }
        }
    }

    Ok(Parsed {
        value: PairSet::new(rows)?,
        row_errors: errors,
        rows_seen,
    })
}

fn annotation_value(
    raw_score: std::result::Result<f64, String>,
    setting: Setting,
) -> std::result::Result<AnnotationValue, String> {
    match (setting, raw_score) {
        (Setting::Discrete, Err(text)) => DiscreteClass::parse(&text)
            .map(AnnotationValue::Class)
            .map_err(|_| format!("value {text:?} is not one of V, M, N")),
        (Setting::Discrete, Ok(v)) => {
            Err(format!("setting discrete requires a class label, got {v}"))
        }
        (_, Ok(v)) => {
            if v.is_finite() && (1.0..=4.0).contains(&v) {
                Ok(AnnotationValue::Score(v))
            } else {
                Err(format!("score {v} outside [1, 4]"))
            }
        }
        (_, Err(text)) => Err(format!("value {text:?} is not a number")),
    }
}

#[derive(Deserialize)]
struct AnnotationRow {
    annotator_id: String,
    pair_id: String,
    aspect: String,
    setting: String,
    value: serde_json::Value,
}

/// Reads annotations from CSV (canonical) or JSONL.
pub fn parse_annotations<R: Read>(reader: R, format: FileFormat) -> Result<Parsed<AnnotationSet>> {
    let mut rows: Vec<AnnotationRecord> = Vec::new();
    let mut errors: Vec<RowError> = Vec::new();
    let mut seen: BTreeSet<(String, String, String, Setting)> = BTreeSet::new();
    let mut rows_seen = 0usize;

    let mut accept = |annotator_id: String,
                      pair_id: String,
                      aspect: String,
                      setting_raw: &str,
                      raw_score: std::result::Result<f64, String>,
                      row: usize,
                      errors: &mut Vec<RowError>| {
        let setting = match Setting::parse(setting_raw) {
            Ok(s) => s,
            Err(e) => {
                push_err(errors, row, e.to_string());
                return;
            }
        };
        let value = match annotation_value(raw_score, setting) {
            Ok(v) => v,
            Err(msg) => {
                push_err(errors, row, msg);
                return;
            }
        };
        let key = (
            annotator_id.clone(),
            pair_id.clone(),
            aspect.clone(),
            setting,
        );
        if !seen.insert(key) {
            push_err(
                errors,
                row,
                format!("duplicate annotation ({annotator_id}, {pair_id}, {aspect}, {setting})"),
            );
            return;
        }
        rows.push(AnnotationRecord {
            annotator_id,
            pair_id,
            aspect: Aspect::new(aspect),
            setting,
            value,
        });
    };

    match format {
        FileFormat::Jsonl => {
            for (line_no, line) in BufReader::new(reader).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let row = line_no + 1;
                rows_seen += 1;
                match serde_json::from_str::<AnnotationRow>(&line) {
                    Ok(r) => {
                        let raw = match &r.value {
                            serde_json::Value::Number(n) => {
                                Ok(n.as_f64().unwrap_or(f64::INFINITY))
                            }
                            serde_json::Value::String(s) => Err(s.clone()),
                            other => Err(other.to_string()),
                        };
                        accept(
                            r.annotator_id,
                            r.pair_id,
                            r.aspect,
                            &r.setting,
                            raw,
                            row,
                            &mut errors,
                        );
                    }
                    Err(e) => push_err(&mut errors, row, e.to_string()),
                }
            }
        }
        FileFormat::Csv => {
            let mut rdr = csv::Reader::from_reader(reader);
            let headers = rdr.headers()?.clone();
            let idx = |name: &str| {
                headers
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| Error::Format(format!("csv is missing column {name:?}")))
            };
            let (c_ann, c_pair, c_asp, c_set, c_val) = (
                idx("annotator_id")?,
                idx("pair_id")?,
                idx("aspect")?,
                idx("setting")?,
                idx("value")?,
            );
            for (i, rec) in rdr.records().enumerate() {
                let row = i + 2;
                rows_seen += 1;
                let rec = match rec {
                    Ok(r) => r,
                    Err(e) => {
                        push_err(&mut errors, row, e.to_string());
                        continue;
                    }
                };
                let get = |c: usize| rec.get(c).unwrap_or_default().to_string();
                let text = get(c_val);
                let raw = text.parse::<f64>().map_err(|_| text);
                accept(get(c_ann), get(c_pair), get(c_asp), &get(c_set), raw, row, &mut errors);
            }
        }
    }

    Ok(Parsed {
        value: AnnotationSet::new(rows)?,
        row_errors: errors,
        rows_seen,
    })
}

fn standard_variant() -> String {
    "standard".to_string()
}

#[derive(Deserialize)]
struct PredictionRow {
    pair_id: String,
    aspect: String,
    #[serde(default = "standard_variant")]
    variant: String,
    score: f64,
    #[serde(default)]
    probs: Option<Vec<f64>>,
    #[serde(default)]
    source: Option<String>,
}

/// Reads predictions from JSONL (canonical) or flat CSV. In CSV the class
/// distribution, when present, occupies columns `p1..p4` (all four or none).
pub fn parse_predictions<R: Read>(reader: R, format: FileFormat) -> Result<Parsed<PredictionSet>> {
    let mut rows: Vec<PredictionRecord> = Vec::new();
    let mut errors: Vec<RowError> = Vec::new();
    let mut seen: BTreeSet<(String, String, Variant, Option<String>)> = BTreeSet::new();
    let mut rows_seen = 0usize;

    let mut accept = |r: PredictionRow, row: usize, errors: &mut Vec<RowError>| {
        let variant = match Variant::parse(&r.variant) {
            Ok(v) => v,
            Err(e) => {
                push_err(errors, row, e.to_string());
                return;
            }
        };
        if !r.score.is_finite() {
            push_err(errors, row, format!("score {} is not finite", r.score));
            return;
        }
        let probs = match r.probs {
            None => None,
            Some(p) => match validate_probs(&p) {
                Ok(p) => Some(p),
                Err(msg) => {
                    push_err(errors, row, msg);
                    return;
                }
            },
        };
        let key = (r.pair_id.clone(), r.aspect.clone(), variant, r.source.clone());
        if !seen.insert(key) {
            push_err(
                errors,
                row,
                format!(
                    "duplicate prediction ({}, {}, {})",
                    r.pair_id, r.aspect, variant
                ),
            );
            return;
        }
        rows.push(PredictionRecord {
            pair_id: r.pair_id,
            aspect: Aspect::new(r.aspect),
            variant,
            score: r.score,
            probs,
            source: r.source,
        });
    };

    match format {
        FileFormat::Jsonl => {
            for (line_no, line) in BufReader::new(reader).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let row = line_no + 1;
                rows_seen += 1;
                match serde_json::from_str::<PredictionRow>(&line) {
                    Ok(r) => accept(r, row, &mut errors),
                    Err(e) => push_err(&mut errors, row, e.to_string()),
                }
            }
        }
        FileFormat::Csv => {
            let mut rdr = csv::Reader::from_reader(reader);
            let headers = rdr.headers()?.clone();
            let col = |name: &str| headers.iter().position(|h| h == name);
            let required = |name: &str| {
                col(name).ok_or_else(|| Error::Format(format!("csv is missing column {name:?}")))
            };
            let c_pair = required("pair_id")?;
            let c_asp = required("aspect")?;
            let c_var = col("variant");
            let c_score = required("score")?;
            let c_source = col("source");
            let prob_cols = [col("p1"), col("p2"), col("p3"), col("p4")];

            for (i, rec) in rdr.records().enumerate() {
                let row = i + 2;
                rows_seen += 1;
                let rec = match rec {
                    Ok(r) => r,
                    Err(e) => {
                        push_err(&mut errors, row, e.to_string());
                        continue;
                    }
                };
                let cell = |idx: Option<usize>| {
                    idx.and_then(|i| rec.get(i)).filter(|s| !s.is_empty())
                };
                let score = match rec.get(c_score).unwrap_or_default().parse::<f64>() {
                    Ok(s) => s,
                    Err(_) => {
                        push_err(&mut errors, row, "score is not a number");
                        continue;
                    }
                };
                let filled: Vec<&str> = prob_cols.iter().filter_map(|c| cell(*c)).collect();
                let probs = match filled.len() {
                    0 => None,
                    4 => {
                        let mut vals = Vec::with_capacity(4);
                        let mut ok = true;
                        for text in &filled {
                            match text.parse::<f64>() {
                                Ok(v) => vals.push(v),
                                Err(_) => {
                                    ok = false;
                                    break;
                                }
                            }
                        }
                        if !ok {
                            push_err(&mut errors, row, "probs cell is not a number");
                            continue;
                        }
                        Some(vals)
                    }
                    k => {
                        push_err(&mut errors, row, format!("{k} of 4 probs cells filled"));
                        continue;
                    }
                };
                accept(
                    PredictionRow {
                        pair_id: rec.get(c_pair).unwrap_or_default().to_string(),
                        aspect: rec.get(c_asp).unwrap_or_default().to_string(),
                        variant: cell(c_var).unwrap_or("standard").to_string(),
                        score,
                        probs,
                        source: cell(c_source).map(|s| s.to_string()),
                    },
                    row,
                    &mut errors,
                );
            }
        }
    }

    Ok(Parsed {
        value: PredictionSet::new(rows)?,
        row_errors: errors,
        rows_seen,
    })
}

#[derive(Deserialize)]
struct ReferenceRow {
    pair_id: String,
    score: f64,
}

/// Reads per-pair reference scores (`pair_id`, `score`) from JSONL or CSV.
pub fn parse_reference<R: Read>(
    reader: R,
    format: FileFormat,
) -> Result<Parsed<BTreeMap<String, f64>>> {
    let mut out: BTreeMap<String, f64> = BTreeMap::new();
    let mut errors: Vec<RowError> = Vec::new();
    let mut rows_seen = 0usize;

    let mut accept = |r: ReferenceRow, row: usize, errors: &mut Vec<RowError>| {
        if !r.score.is_finite() {
            push_err(errors, row, format!("score {} is not finite", r.score));
            return;
        }
        if out.contains_key(&r.pair_id) {
            push_err(errors, row, format!("duplicate pair_id {}", r.pair_id));
            return;
        }
        out.insert(r.pair_id, r.score);
    };

    match format {
        FileFormat::Jsonl => {
            for (line_no, line) in BufReader::new(reader).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let row = line_no + 1;
                rows_seen += 1;
                match serde_json::from_str::<ReferenceRow>(&line) {
                    Ok(r) => accept(r, row, &mut errors),
                    Err(e) => push_err(&mut errors, row, e.to_string()),
                }
            }
        }
        FileFormat::Csv => {
            let mut rdr = csv::Reader::from_reader(reader);
            let headers = rdr.headers()?.clone();
            let idx = |name: &str| {
                headers
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| Error::Format(format!("csv is missing column {name:?}")))
            };
            let (c_pair, c_score) = (idx("pair_id")?, idx("score")?);
            for (i, rec) in rdr.records().enumerate() {
                let row = i + 2;
                rows_seen += 1;
                let rec = match rec {
                    Ok(r) => r,
                    Err(e) => {
                        push_err(&mut errors, row, e.to_string());
                        continue;
                    }
                };
                match rec.get(c_score).unwrap_or_default().parse::<f64>() {
                    Ok(score) => accept(
                        ReferenceRow {
                            pair_id: rec.get(c_pair).unwrap_or_default().to_string(),
                            score,
                        },
                        row,
                        &mut errors,
                    ),
                    Err(_) => push_err(&mut errors, row, "score is not a number"),
                }
            }
        }
    }

    Ok(Parsed {
        value: out,
        row_errors: errors,
        rows_seen,
    })
}

/// Reads a group roster file: a JSON object mapping group name to annotator ids.
pub fn parse_groups<R: Read>(reader: R) -> Result<BTreeMap<String, Vec<String>>> {
    let groups: BTreeMap<String, Vec<String>> = serde_json::from_reader(reader)?;
    for (name, members) in &groups {
        if members.is_empty() {
            return Err(Error::Format(format!("group {name:?} has no members")));
        }
    }
    Ok(groups)
}

/// Writes predictions in the canonical JSONL interchange shape.
pub fn write_predictions_jsonl<W: std::io::Write>(
    preds: &PredictionSet,
    mut writer: W,
) -> Result<()> {
    for rec in preds.iter() {
        serde_json::to_writer(&mut writer, rec)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_jsonl_roundtrip_counts() {
        let input = concat!(
            r#"{"pair_id":"p2","story_a_id":"a","story_b_id":"b","gold":{"empathy":3.5},"split":"train"}"#,
            "\n",
            r#"{"pair_id":"p1","story_a_id":"c","story_b_id":"d","gold":{"empathy":1.0,"event":2.0}}"#,
            "\n",
            "\n",
            r#"{"pair_id":"p3","story_a_id":"e","story_b_id":"f","gold":{"empathy":4.5}}"#,
            "\n",
            r#"not json"#,
            "\n",
        );
        let parsed = parse_pairs(input.as_bytes(), FileFormat::Jsonl).unwrap();
        assert_eq!(parsed.rows_seen, 4);
        assert_eq!(parsed.value.len(), 2);
        assert_eq!(parsed.row_errors.len(), 2);
        assert_eq!(parsed.value.len() + parsed.row_errors.len(), parsed.rows_seen);
        // out-of-range gold names the offending row
        assert!(parsed.row_errors[0].to_string().contains("row 4"));
        // sorted by pair_id
        let ids: Vec<&str> = parsed.value.iter().map(|p| p.pair_id.as_str()).collect();
        assert_eq!(ids, ["p1", "p2"]);
    }

    #[test]
    fn duplicate_pair_id_is_a_row_error() {
        let input = concat!(
            r#"{"pair_id":"p1","story_a_id":"a","story_b_id":"b"}"#,
            "\n",
            r#"{"pair_id":"p1","story_a_id":"c","story_b_id":"d"}"#,
            "\n",
        );
        let parsed = parse_pairs(input.as_bytes(), FileFormat::Jsonl).unwrap();
        assert_eq!(parsed.value.len(), 1);
        assert_eq!(parsed.row_errors.len(), 1);
        assert!(parsed.row_errors[0].message.contains("duplicate"));
    }

    #[test]
    fn pairs_csv_parses_flat_gold() {
        let input = "pair_id,story_a_id,story_b_id,empathy,split\np1,a,b,2.5,dev\np2,c,d,,test\n";
        let parsed = parse_pairs(input.as_bytes(), FileFormat::Csv).unwrap();
        assert_eq!(parsed.value.len(), 2);
        assert!(parsed.ok());
        assert_eq!(parsed.value.get("p1").unwrap().gold.empathy, Some(2.5));
        assert_eq!(parsed.value.get("p2").unwrap().gold.empathy, None);
    }

    #[test]
    fn annotations_enforce_setting_value_agreement() {
        let input = "annotator_id,pair_id,aspect,setting,value\n\
                     u1,p1,empathy,summary,3.5\n\
                     u1,p1,empathy,discrete,V\n\
                     u2,p1,empathy,summary,V\n\
                     u2,p1,empathy,discrete,2.0\n";
        let parsed = parse_annotations(input.as_bytes(), FileFormat::Csv).unwrap();
        assert_eq!(parsed.value.len(), 2);
        assert_eq!(parsed.row_errors.len(), 2);
    }

    #[test]
    fn prediction_probs_renormalize_only_within_tolerance() {
        let near = [0.1, 0.2, 0.3, 0.4000004];
        let out = validate_probs(&near).unwrap();
        let sum: f64 = out.iter().sum();
        assert!((sum - 1.0).abs() < 1e-15);

        let far = [0.1, 0.2, 0.3, 0.5];
        assert!(validate_probs(&far).is_err());
        assert!(validate_probs(&[0.5, 0.5, 0.1, -0.1]).is_err());
    }

    #[test]
    fn predictions_jsonl_roundtrip_through_writer() {
        let input = concat!(
            r#"{"pair_id":"p1","aspect":"empathy","variant":"standard","score":2.75,"probs":[0.1,0.2,0.3,0.4]}"#,
            "\n",
            r#"{"pair_id":"p1","aspect":"empathy","variant":"reverse","score":-1.5,"source":"m"}"#,
            "\n",
        );
        let parsed = parse_predictions(input.as_bytes(), FileFormat::Jsonl).unwrap();
        assert!(parsed.ok());
        let mut buf = Vec::new();
        write_predictions_jsonl(&parsed.value, &mut buf).unwrap();
        let again = parse_predictions(buf.as_slice(), FileFormat::Jsonl).unwrap();
        assert!(again.ok());
        assert_eq!(again.value.len(), 2);
        let scores: Vec<f64> = again.value.iter().map(|r| r.score).collect();
        assert_eq!(scores, [2.75, -1.5]);
    }
}
