//! Cosine scoring of story pairs from embeddings and swap-variant
//! aggregation of prediction sets.

use std::collections::BTreeMap;

use crate::data::{Aspect, EmbeddingSet, PairSet, PredictionRecord, PredictionSet, Variant};
use crate::error::{Error, Result};
use crate::losses::cosine_sim;
use crate::stats::EvalConfig;
use crate::trainer::ProjectionHead;

/// Scores every pair as scale_factor times the cosine of the two story
/// embeddings, optionally projected through a head first. No clamping by
/// default, so negative cosines yield negative scores and the nominal 1-4
/// scale is not enforced; `clamp_scores` opts into clamping.
pub fn cosine_score_pairs(
    embeddings: &EmbeddingSet,
    pairs: &PairSet,
    aspect: &Aspect,
    head: Option<&ProjectionHead>,
    config: &EvalConfig,
) -> Result<PredictionSet> {
    let source = if head.is_some() {
        "cosine+head"
    } else {
        "cosine"
    };
    let mut records = Vec::new();
    for pair in pairs.iter() {
        let lookup = |id: &str| {
            embeddings
                .get(id)
                .ok_or_else(|| Error::Lookup(format!("no embedding for story {id:?}")))
        };
        let a = lookup(&pair.story_a_id)?;
        let b = lookup(&pair.story_b_id)?;
        let (u, v) = match head {
            Some(h) => (h.apply(a)?, h.apply(b)?),
            None => (a.to_vec(), b.to_vec()),
        };
        let cos = cosine_sim(&u, &v).map_err(|e| match e {
            Error::Domain(msg) => Error::Domain(format!("pair {:?}: {msg}", pair.pair_id)),
            other => other,
        })?;
        let mut score = config.scale_factor * cos;
        if config.clamp_scores {
            score = score.clamp(1.0, 4.0);
        }
        records.push(PredictionRecord {
            pair_id: pair.pair_id.clone(),
            aspect: aspect.clone(),
            variant: Variant::Standard,
            score,
            probs: None,
            source: Some(source.to_string()),
        });
    }
    PredictionSet::new(records)
}

/// Swap-aggregation mode over standard/reverse prediction variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwapMode {
    Standard,
    Reverse,
    Mean,
}

impl SwapMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(SwapMode::Standard),
            "reverse" => Ok(SwapMode::Reverse),
            "mean" => Ok(SwapMode::Mean),
            other => Err(Error::Format(format!("unknown swap mode {other:?}"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SwapMode::Standard => "standard",
            SwapMode::Reverse => "reverse",
            SwapMode::Mean => "mean",
        }
    }
}

/// Aggregated predictions plus notes about rows that could not be used.
#[derive(Debug, Clone)]
pub struct Aggregated {
    pub preds: PredictionSet,
    pub warnings: Vec<String>,
}

/// Filters to one swap variant, or averages the two scores per
/// (pair, aspect). Mean mode drops the class distributions (only scores
/// are averaged) and reports pairs missing one of the two variants.
pub fn swap_aggregate(preds: &PredictionSet, mode: SwapMode) -> Result<Aggregated> {
    let mut warnings = Vec::new();
    match mode {
        SwapMode::Standard | SwapMode::Reverse => {
            let want = if mode == SwapMode::Standard {
                Variant::Standard
            } else {
                Variant::Reverse
            };
            let kept: Vec<PredictionRecord> = preds
                .iter()
                .filter(|r| r.variant == want)
                .cloned()
                .collect();
            if kept.is_empty() {
                return Err(Error::Insufficient(format!(
                    "no {} predictions",
                    mode.as_str()
                )));
            }
            Ok(Aggregated {
                preds: PredictionSet::new(kept)?,
                warnings,
            })
        }
        SwapMode::Mean => {
            struct Slot {
                standard: Vec<(f64, Option<String>)>,
                reverse: Vec<(f64, Option<String>)>,
            }
            let mut slots: BTreeMap<(String, Aspect), Slot> = BTreeMap::new();
            for r in preds.iter() {
                let slot = slots
                    .entry((r.pair_id.clone(), r.aspect.clone()))
                    .or_insert_with(|| Slot {
                        standard: Vec::new(),
                        reverse: Vec::new(),
                    });
                match r.variant {
                    Variant::Standard => slot.standard.push((r.score, r.source.clone())),
                    Variant::Reverse => slot.reverse.push((r.score, r.source.clone())),
                    Variant::Mean => warnings.push(format!(
                        "pair {:?} aspect {}: already-averaged record ignored",
                        r.pair_id, r.aspect
                    )),
                }
            }
            let mut out = Vec::new();
            for ((pair_id, aspect), slot) in slots {
                match (slot.standard.len(), slot.reverse.len()) {
                    (1, 1) => {
                        let (s, src_s) = &slot.standard[0];
                        let (r, src_r) = &slot.reverse[0];
                        let mut sources: Vec<&str> = [src_s, src_r]
                            .iter()
                            .filter_map(|x| x.as_deref())
                            .collect();
                        sources.sort_unstable();
                        sources.dedup();
                        out.push(PredictionRecord {
                            pair_id,
                            aspect,
                            variant: Variant::Mean,
                            score: (s + r) / 2.0,
                            probs: None,
                            source: if sources.is_empty() {
                                None
                            } else {
                                Some(sources.join("+"))
                            },
                        });
                    }
                    (0, 0) => {}
                    (ns, nr) if ns > 1 || nr > 1 => {
                        return Err(Error::Duplicate(format!(
                            "pair {pair_id:?} aspect {aspect}: {ns} standard and {nr} reverse \
                             records; one of each is required for mean aggregation"
                        )));
                    }
                    (ns, _) => {
                        let missing = if ns == 0 { "standard" } else { "reverse" };
                        warnings.push(format!(
                            "pair {pair_id:?} aspect {aspect}: missing {missing} variant, dropped"
                        ));
                    }
                }
            }
            if out.is_empty() {
                return Err(Error::Insufficient(
                    "no pairs with both swap variants".into(),
                ));
            }
            Ok(Aggregated {
                preds: PredictionSet::new(out)?,
                warnings,
            })
        }
    }
}
