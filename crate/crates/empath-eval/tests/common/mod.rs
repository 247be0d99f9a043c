//! Fixture builders and binary-spawning helpers shared by integration tests.
// each test target compiles this module on its own, so not every helper
// is used from every target
#![allow(dead_code)]

use std::fmt::Write as _;
use std::path::Path;
use std::process::{Command, Output};

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_empath-eval")
}

pub fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary spawns")
}

pub fn run_with_env(dir: &Path, args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(bin());
    cmd.current_dir(dir).args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary spawns")
}

pub fn stdout_str(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

pub fn stderr_str(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Train-split gold label counts over the 0.5 grid from 1.0 to 4.0.
pub const TRAIN_COUNTS: [(f64, usize); 7] = [
    (1.0, 85),
    (1.5, 125),
    (2.0, 310),
    (2.5, 288),
    (3.0, 344),
    (3.5, 262),
    (4.0, 86),
];

/// The class distribution those counts produce under half-down rounding.
pub const TRAIN_CLASS_SHARES: [f64; 4] = [0.140, 0.399, 0.404, 0.057];

/// A 1500-pair JSONL pairs file realizing [`TRAIN_COUNTS`] on the empathy
/// aspect, split "train".
pub fn canonical_pairs_jsonl() -> String {
    let mut out = String::new();
    let mut i = 0usize;
    for (score, n) in TRAIN_COUNTS {
        for _ in 0..n {
            let _ = writeln!(
                out,
                r#"{{"pair_id":"p{i:04}","story_a_id":"a{i:04}","story_b_id":"b{i:04}","gold":{{"empathy":{score}}},"split":"train"}}"#,
            );
            i += 1;
        }
    }
    out
}

/// Predictions for every canonical pair whose class distribution is exactly
/// the empirical one; the score is that distribution's mean class value.
pub fn constant_probs_preds_jsonl() -> String {
    let mut out = String::new();
    let total: usize = TRAIN_COUNTS.iter().map(|(_, n)| n).sum();
    for i in 0..total {
        let _ = writeln!(
            out,
            r#"{{"pair_id":"p{i:04}","aspect":"empathy","score":2.378,"probs":[0.140,0.399,0.404,0.057]}}"#,
        );
    }
    out
}

/// Writes a file under `dir`, creating nothing else.
pub fn write_file(dir: &Path, name: &str, content: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).expect("fixture write");
    path
}

/// Small deterministic annotation CSV: three raters, two aspects, two
/// settings, eight pairs.
pub fn annotations_csv() -> String {
    let mut out = String::from("annotator_id,pair_id,aspect,setting,value\n");
    let raters = ["r1", "r2", "r3"];
    // fixed rating tables, one row per (rater, pair): summary then full
    let summary = [
        [3.0, 2.5, 3.5],
        [1.0, 1.5, 1.0],
        [4.0, 3.5, 4.0],
        [2.0, 2.0, 2.5],
        [3.5, 3.0, 3.0],
        [1.5, 2.0, 1.5],
        [2.5, 3.0, 2.0],
        [4.0, 4.0, 3.5],
    ];
    let full = [
        [2.5, 2.0, 3.0],
        [1.5, 1.0, 1.5],
        [3.5, 4.0, 3.5],
        [2.5, 2.0, 2.0],
        [3.0, 3.5, 3.5],
        [1.0, 1.5, 2.0],
        [3.0, 2.5, 2.5],
        [3.5, 4.0, 4.0],
    ];
    for (setting, table) in [("summary", &summary), ("full", &full)] {
        for (p, row) in table.iter().enumerate() {
            for (r, value) in row.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{},q{p},empathy,{setting},{value}",
                    raters[r]
                );
            }
        }
    }
    // one extra aspect so aspect filtering has something to filter
    for (p, row) in summary.iter().enumerate() {
        for (r, value) in row.iter().enumerate() {
            let _ = writeln!(out, "{},q{p},event,summary,{value}", raters[r]);
        }
    }
    out
}

/// Deterministic embeddings JSONL for the story ids of `small_pairs_jsonl`,
/// plus pairs covering train and dev splits for head training.
pub fn embeddings_jsonl(ids: &[String], dim: usize, seed: u64) -> String {
    let mut out = String::new();
    let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
    let mut next = move || {
        // xorshift64*, plenty for fixture data
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        let bits = state.wrapping_mul(0x2545f4914f6cdd1d);
        (bits >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    for id in ids {
        let values: Vec<String> = (0..dim).map(|_| format!("{:.6}", next())).collect();
        let _ = writeln!(
            out,
            r#"{{"story_id":"{id}","values":[{}]}}"#,
            values.join(",")
        );
    }
    out
}

/// Twenty pairs over ten train / six dev / four test with empathy gold.
pub fn small_pairs_jsonl() -> (String, Vec<String>) {
    let mut out = String::new();
    let mut story_ids = Vec::new();
    for i in 0..20 {
        let split = if i < 10 {
            "train"
        } else if i < 16 {
            "dev"
        } else {
            "test"
        };
        let gold = 1.0 + (i % 7) as f64 * 0.5;
        let (a, b) = (format!("s{i:02}a", i = i), format!("s{i:02}b", i = i));
        let _ = writeln!(
            out,
            r#"{{"pair_id":"w{i:02}","story_a_id":"{a}","story_b_id":"{b}","gold":{{"empathy":{gold},"event":{ev}}},"split":"{split}"}}"#,
            ev = 1.0 + ((i + 2) % 7) as f64 * 0.5,
        );
        story_ids.push(a);
        story_ids.push(b);
    }
    (out, story_ids)
}

/// Predictions for the small pair fixture, optionally with distributions.
pub fn small_preds_jsonl(with_probs: bool) -> String {
    let mut out = String::new();
    for i in 0..20 {
        let gold = 1.0 + (i % 7) as f64 * 0.5;
        let score = (gold + if i % 2 == 0 { 0.2 } else { -0.3 }).clamp(1.0, 4.0);
        if with_probs {
            let class = ((gold - 0.5).ceil() as usize).clamp(1, 4);
            let mut probs = [0.1, 0.1, 0.1, 0.1];
            probs[class - 1] = 0.7;
            let _ = writeln!(
                out,
                r#"{{"pair_id":"w{i:02}","aspect":"empathy","score":{score},"probs":[{},{},{},{}]}}"#,
                probs[0], probs[1], probs[2], probs[3],
            );
        } else {
            let _ = writeln!(
                out,
                r#"{{"pair_id":"w{i:02}","aspect":"empathy","score":{score}}}"#,
            );
        }
    }
    out
}

/// Three labeled vector pairs for loss evaluation.
pub fn batch_jsonl() -> String {
    concat!(
        r#"{"u":[1.0,0.2,-0.3,0.5],"v":[0.8,0.1,-0.2,0.6],"label":3.5}"#,
        "\n",
        r#"{"u":[0.1,-0.9,0.4,0.2],"v":[-0.2,0.8,-0.5,0.1],"label":1.0}"#,
        "\n",
        r#"{"u":[0.5,0.5,0.5,0.5],"v":[0.5,-0.5,0.5,-0.5],"label":2.5}"#,
        "\n",
    )
    .to_string()
}

/// Standard+reverse prediction pairs for the first six small pairs.
pub fn swap_preds_jsonl() -> String {
    let mut out = String::new();
    for i in 0..6 {
        let s = 1.5 + i as f64 * 0.4;
        let r = s + 0.2;
        let _ = writeln!(
            out,
            r#"{{"pair_id":"w{i:02}","aspect":"empathy","variant":"standard","score":{s}}}"#,
        );
        let _ = writeln!(
            out,
            r#"{{"pair_id":"w{i:02}","aspect":"empathy","variant":"reverse","score":{r}}}"#,
        );
    }
    out
}

/// Per-pair reference scores for the annotation fixture's items.
pub fn reference_csv() -> String {
    let mut out = String::from("pair_id,score\n");
    for p in 0..8 {
        let _ = writeln!(out, "q{p},{}", 1.5 + (p % 6) as f64 * 0.5);
    }
    out
}
