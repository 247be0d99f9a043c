//! Core records: story pairs, annotations, predictions, embeddings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Similarity aspect tag. The four canonical aspects are `event`, `emotion`,
/// `moral` and `empathy`; other tags are carried through untouched.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Aspect(String);

impl Aspect {
    pub fn new(tag: impl Into<String>) -> Self {
        Aspect(tag.into())
    }

    pub fn event() -> Self {
        Aspect("event".into())
    }

    pub fn emotion() -> Self {
        Aspect("emotion".into())
    }

    pub fn moral() -> Self {
        Aspect("moral".into())
    }

    pub fn empathy() -> Self {
        Aspect("empathy".into())
    }

    /// The four canonical aspects in fixed report order.
    pub fn canonical() -> [Aspect; 4] {
        [
            Aspect::event(),
            Aspect::emotion(),
            Aspect::moral(),
            Aspect::empathy(),
        ]
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Aspect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Aspect {
    fn from(s: &str) -> Self {
        Aspect::new(s)
    }
}

/// Gold similarity scores for one pair. Each value lies in [1, 4] when present.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AspectScores {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub event: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub emotion: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moral: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empathy: Option<f64>,
}

impl AspectScores {
    /// Gold value for a canonical aspect tag; `None` for other tags.
    pub fn get(&self, aspect: &Aspect) -> Option<f64> {
        match aspect.as_str() {
            "event" => self.event,
            "emotion" => self.emotion,
            "moral" => self.moral,
            "empathy" => self.empathy,
            _ => None,
        }
    }

    /// Canonical aspects present on this record, in report order.
    pub fn present(&self) -> Vec<Aspect> {
        Aspect::canonical()
            .into_iter()
            .filter(|a| self.get(a).is_some())
            .collect()
    }
}

/// One story pair with optional texts, gold scores and dataset metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StoryPair {
    pub pair_id: String,
    pub story_a_id: String,
    pub story_b_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub full_a: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub full_b: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary_a: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary_b: Option<String>,
    #[serde(default)]
    pub gold: AspectScores,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theme: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Immutable collection of pairs, held sorted by `pair_id`; ids are unique.
#[derive(Debug, Clone, Default)]
pub struct PairSet {
    pairs: Vec<StoryPair>,
}

impl PairSet {
    /// Builds a set from records, sorting by id and rejecting duplicates.
    pub fn new(mut pairs: Vec<StoryPair>) -> Result<Self> {
        pairs.sort_by(|a, b| a.pair_id.cmp(&b.pair_id));
        for w in pairs.windows(2) {
            if w[0].pair_id == w[1].pair_id {
                return Err(Error::Duplicate(format!("pair_id {}", w[0].pair_id)));
            }
        }
        Ok(PairSet { pairs })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn get(&self, pair_id: &str) -> Option<&StoryPair> {
        self.pairs
            .binary_search_by(|p| p.pair_id.as_str().cmp(pair_id))
            .ok()
            .map(|i| &self.pairs[i])
    }

    /// Pairs in ascending `pair_id` order.
    pub fn iter(&self) -> impl Iterator<Item = &StoryPair> {
        self.pairs.iter()
    }

    /// Pairs restricted to one split tag; `None` keeps everything.
    pub fn in_split<'a>(&'a self, split: Option<&'a str>) -> impl Iterator<Item = &'a StoryPair> {
        self.pairs
            .iter()
            .filter(move |p| split.is_none() || p.split.as_deref() == split)
    }

    /// Canonical aspects carried by at least one pair, in report order.
    pub fn aspects_present(&self) -> Vec<Aspect> {
        Aspect::canonical()
            .into_iter()
            .filter(|a| self.pairs.iter().any(|p| p.gold.get(a).is_some()))
            .collect()
    }
}

/// Annotation setting: what the rater saw, or that labels are discrete classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Setting {
    Summary,
    Full,
    Combined,
    Discrete,
}

impl Setting {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "summary" => Ok(Setting::Summary),
            "full" => Ok(Setting::Full),
            "combined" => Ok(Setting::Combined),
            "discrete" => Ok(Setting::Discrete),
            other => Err(Error::Format(format!("unknown setting {other:?}"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Setting::Summary => "summary",
            Setting::Full => "full",
            Setting::Combined => "combined",
            Setting::Discrete => "discrete",
        }
    }

    pub const ALL: [Setting; 4] = [
        Setting::Summary,
        Setting::Full,
        Setting::Combined,
        Setting::Discrete,
    ];
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Three-class discrete similarity verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DiscreteClass {
    V,
    M,
    N,
}

impl DiscreteClass {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "V" => Ok(DiscreteClass::V),
            "M" => Ok(DiscreteClass::M),
            "N" => Ok(DiscreteClass::N),
            other => Err(Error::Format(format!("unknown class {other:?}"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DiscreteClass::V => "V",
            DiscreteClass::M => "M",
            DiscreteClass::N => "N",
        }
    }

    /// Ordinal numeric stand-in: N=1, M=2, V=3 (more similar is larger).
    pub fn as_numeric(self) -> f64 {
        match self {
            DiscreteClass::N => 1.0,
            DiscreteClass::M => 2.0,
            DiscreteClass::V => 3.0,
        }
    }
}

impl fmt::Display for DiscreteClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One rating: a continuous score in [1, 4] or a discrete class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnnotationValue {
    Score(f64),
    Class(DiscreteClass),
}

impl AnnotationValue {
    /// Numeric view; discrete classes map through their ordinal stand-in.
    pub fn as_numeric(self) -> f64 {
        match self {
            AnnotationValue::Score(s) => s,
            AnnotationValue::Class(c) => c.as_numeric(),
        }
    }

    pub fn is_class(self) -> bool {
        matches!(self, AnnotationValue::Class(_))
    }
}

/// One rating event by one annotator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnnotationRecord {
    pub annotator_id: String,
    pub pair_id: String,
    pub aspect: Aspect,
    pub setting: Setting,
    pub value: AnnotationValue,
}

/// Collection of annotations; (annotator, pair, aspect, setting) is unique.
#[derive(Debug, Clone, Default)]
pub struct AnnotationSet {
    records: Vec<AnnotationRecord>,
}

impl AnnotationSet {
    pub fn new(mut records: Vec<AnnotationRecord>) -> Result<Self> {
        for r in &records {
            let discrete = r.setting == Setting::Discrete;
            if discrete != r.value.is_class() {
                return Err(Error::Domain(format!(
                    "annotation ({}, {}, {}, {}): setting {} a class label",
                    r.annotator_id,
                    r.pair_id,
                    r.aspect,
                    r.setting,
                    if discrete { "requires" } else { "forbids" }
                )));
            }
        }
        records.sort_by(|a, b| {
            (&a.annotator_id, &a.pair_id, &a.aspect, a.setting).cmp(&(
                &b.annotator_id,
                &b.pair_id,
                &b.aspect,
                b.setting,
            ))
        });
        for w in records.windows(2) {
            let same = w[0].annotator_id == w[1].annotator_id
                && w[0].pair_id == w[1].pair_id
                && w[0].aspect == w[1].aspect
                && w[0].setting == w[1].setting;
            if same {
                return Err(Error::Duplicate(format!(
                    "annotation ({}, {}, {}, {})",
                    w[0].annotator_id, w[0].pair_id, w[0].aspect, w[0].setting
                )));
            }
        }
        Ok(AnnotationSet { records })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &AnnotationRecord> {
        self.records.iter()
    }

    /// All annotator ids, sorted.
    pub fn roster(&self) -> BTreeSet<String> {
        self.records
            .iter()
            .map(|r| r.annotator_id.clone())
            .collect()
    }

    /// Aspects present in the set, canonical ones first, any others after.
    pub fn aspects_present(&self) -> Vec<Aspect> {
        let mut seen: BTreeSet<&Aspect> = self.records.iter().map(|r| &r.aspect).collect();
        let mut out = Vec::new();
        for a in Aspect::canonical() {
            if seen.remove(&a) {
                out.push(a);
            }
        }
        out.extend(seen.into_iter().cloned());
        out
    }

    pub fn settings_present(&self) -> Vec<Setting> {
        let seen: BTreeSet<Setting> = self.records.iter().map(|r| r.setting).collect();
        Setting::ALL.into_iter().filter(|s| seen.contains(s)).collect()
    }

    /// Item-major view for one (aspect, setting): item key -> annotator -> value.
    /// The `combined` setting concatenates summary items and full items, keyed
    /// by `(setting, pair_id)` so the same pair contributes two items.
    pub fn table(
        &self,
        aspect: &Aspect,
        setting: Setting,
    ) -> BTreeMap<(Setting, String), BTreeMap<String, AnnotationValue>> {
        let wanted: Vec<Setting> = match setting {
            Setting::Combined => vec![Setting::Summary, Setting::Full],
            s => vec![s],
        };
        let mut out: BTreeMap<(Setting, String), BTreeMap<String, AnnotationValue>> =
            BTreeMap::new();
        for r in &self.records {
            if &r.aspect == aspect && wanted.contains(&r.setting) {
                out.entry((r.setting, r.pair_id.clone()))
                    .or_default()
                    .insert(r.annotator_id.clone(), r.value);
            }
        }
        out
    }
}

/// Prediction provenance: story order as given, swapped, or a swap average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Standard,
    Reverse,
    Mean,
}

impl Variant {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Variant::Standard),
            "reverse" => Ok(Variant::Reverse),
            "mean" => Ok(Variant::Mean),
            other => Err(Error::Format(format!("unknown variant {other:?}"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Standard => "standard",
            Variant::Reverse => "reverse",
            Variant::Mean => "mean",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One model score for (pair, aspect, variant), optionally with a class
/// distribution over {1, 2, 3, 4}. Scores are not range-restricted.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub pair_id: String,
    pub aspect: Aspect,
    pub variant: Variant,
    pub score: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probs: Option<[f64; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

/// Collection of predictions; (pair, aspect, variant, source) is unique.
#[derive(Debug, Clone, Default)]
pub struct PredictionSet {
    records: Vec<PredictionRecord>,
}

impl PredictionSet {
    pub fn new(mut records: Vec<PredictionRecord>) -> Result<Self> {
        records.sort_by(|a, b| {
            (&a.pair_id, &a.aspect, a.variant, &a.source).cmp(&(
                &b.pair_id,
                &b.aspect,
                b.variant,
                &b.source,
            ))
        });
        for w in records.windows(2) {
            let same = w[0].pair_id == w[1].pair_id
                && w[0].aspect == w[1].aspect
                && w[0].variant == w[1].variant
                && w[0].source == w[1].source;
            if same {
                return Err(Error::Duplicate(format!(
                    "prediction ({}, {}, {})",
                    w[0].pair_id, w[0].aspect, w[0].variant
                )));
            }
        }
        Ok(PredictionSet { records })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &PredictionRecord> {
        self.records.iter()
    }

    /// Records for one aspect, in set order.
    pub fn for_aspect<'a>(&'a self, aspect: &'a Aspect) -> impl Iterator<Item = &'a PredictionRecord> {
        self.records.iter().filter(move |r| &r.aspect == aspect)
    }
}

/// Fixed-dimension story embeddings keyed by story id.
#[derive(Debug, Clone)]
pub struct EmbeddingSet {
    dim: usize,
    by_id: BTreeMap<String, Vec<f64>>,
}

impl EmbeddingSet {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Shape("embedding dimension must be positive".into()));
        }
        Ok(EmbeddingSet {
            dim,
            by_id: BTreeMap::new(),
        })
    }

    pub fn insert(&mut self, story_id: String, values: Vec<f64>) -> Result<()> {
        if values.len() != self.dim {
            return Err(Error::Shape(format!(
                "embedding for {story_id:?} has dim {}, set has dim {}",
                values.len(),
                self.dim
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain(format!(
                "embedding for {story_id:?} has a non-finite value"
            )));
        }
        if self.by_id.contains_key(&story_id) {
            return Err(Error::Duplicate(format!("story_id {story_id}")));
        }
        self.by_id.insert(story_id, values);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.by_id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_id.is_empty()
    }

    pub fn get(&self, story_id: &str) -> Option<&[f64]> {
        self.by_id.get(story_id).map(|v| v.as_slice())
    }

    /// Entries in ascending story id order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.by_id.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }
}
