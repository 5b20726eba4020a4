//! Person-mention recognition and character linking for long literary texts.
//!
//! The pipeline: a [`TagList`] of character full names, a recognizer
//! producing [`EntityMention`]s, the [`Matcher`] choosing a tag for each
//! mention, and the [`annotate`] step writing inline or standoff output.
//! [`eval`] scores output against gold annotations.

pub mod annotate;
pub mod augment;
pub mod error;
pub mod eval;
pub mod lexicon;
pub mod matcher;
pub mod recognizer;
pub mod similarity;
pub mod tags;
pub mod text;
pub mod wiki;

pub use annotate::{annotate, annotate_spans, annotate_text, AnnotatedDocument, Annotation};
pub use lexicon::{Gender, Lexicons};
pub use matcher::{MatchKind, MatchResult, Matcher, MatcherConfig};
pub use recognizer::EntityMention;
pub use similarity::{partial_similarity, regular_similarity, SimilarityScore};
pub use tags::{CharacterTag, TagList};
pub use text::{Document, Span, Token};
