//! Data model and ingestion: pairs, annotations, predictions, embeddings,
//! score binning and label histograms.

mod binning;
mod embeddings;
mod parse;
mod types;

pub use binning::{bin_label, label_histogram, round_half_down, LabelHistogram, Rounding};
pub use embeddings::{
    parse_embeddings_auto, parse_embeddings_binary, parse_embeddings_jsonl,
    write_embeddings_binary, EMBEDDING_MAGIC,
};
pub use parse::{
    parse_annotations, parse_groups, parse_pairs, parse_predictions, parse_reference,
    validate_probs, write_predictions_jsonl, FileFormat, Parsed, PROB_SUM_TOLERANCE,
};
pub use types::{
    AnnotationRecord, AnnotationSet, AnnotationValue, Aspect, AspectScores, DiscreteClass,
    EmbeddingSet, PairSet, PredictionRecord, PredictionSet, Setting, StoryPair, Variant,
};
