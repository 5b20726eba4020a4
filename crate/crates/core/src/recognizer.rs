//! Person-mention recognition.
//!
//! Two sources feed the matcher: a recall-oriented gazetteer built from the
//! tag list and name lexicons, and standoff spans produced by any external
//! NER system.

use std::cell::RefCell;
use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::StandoffError;
use crate::matcher::Matcher;
use crate::text::{Document, Span, Token};

pub const PERSON: &str = "person";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MentionSource {
    Gazetteer,
    External,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityMention {
    pub span: Span,
    pub surface: String,
    /// Surface of the token right before the mention in its sentence.
    pub prefix: Option<String>,
    pub source: MentionSource,
}

impl EntityMention {
    pub fn new(doc: &Document, span: Span, source: MentionSource) -> Self {
        EntityMention {
            span,
            surface: doc.slice(span).to_string(),
            prefix: doc.preceding_token(span).map(|t| t.surface.clone()),
            source,
        }
    }
}

/// Lowercase hex SHA-256 of the UTF-8 text.
pub fn text_checksum(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawSpan {
    pub start: usize,
    pub end: usize,
    pub label: String,
}

/// Spans from an external recognizer: `{"sha256": hex, "spans": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandoffInput {
    pub sha256: String,
    pub spans: Vec<RawSpan>,
}

impl StandoffInput {
    pub fn for_text(text: &str, spans: Vec<RawSpan>) -> Self {
        StandoffInput {
            sha256: text_checksum(text),
            spans,
        }
    }

    pub fn from_json(src: &str) -> Result<Self, StandoffError> {
        Ok(serde_json::from_str(src)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("standoff input serializes")
    }
}

/// Turns external spans into mentions, keeping only `person` labels
/// (compared case-insensitively).
pub fn ingest_spans(doc: &Document, input: &StandoffInput) -> Result<Vec<EntityMention>, StandoffError> {
    let expected = text_checksum(doc.text());
    if !input.sha256.eq_ignore_ascii_case(&expected) {
        return Err(StandoffError::ChecksumMismatch {
            expected,
            found: input.sha256.clone(),
        });
    }
    let len = doc.char_len();
    let mut persons: Vec<(usize, Span)> = Vec::new();
    for (index, raw) in input.spans.iter().enumerate() {
        if raw.start >= raw.end || raw.end > len {
            return Err(StandoffError::OutOfRange {
                index,
                start: raw.start,
                end: raw.end,
                len,
            });
        }
        if raw.label.eq_ignore_ascii_case(PERSON) {
            persons.push((index, Span::new(raw.start, raw.end)));
        }
    }
    persons.sort_by_key(|(_, s)| (s.start, s.end));
    for w in persons.windows(2) {
        if w[0].1.overlaps(&w[1].1) {
            return Err(StandoffError::Overlap {
                index: w[1].0,
                other: w[0].0,
            });
        }
    }
    Ok(persons
        .into_iter()
        .map(|(_, span)| EntityMention::new(doc, span, MentionSource::External))
        .collect())
}

const PARTICLES: &[&str] = &["de", "van", "von", "der", "du", "da", "di", "la", "le"];
const MAX_NAME_WORDS: usize = 4;

/// Capitalized function words that are never names, for texts too short
/// for the lowercase-vocabulary check to see them.
const FUNCTION_WORDS: &[&str] = &[
    "a", "about", "after", "again", "all", "also", "although", "an", "and", "any", "as", "at", "because",
    "before", "but", "by", "can", "could", "did", "do", "does", "each", "even", "every", "for", "from",
    "had", "has", "have", "he", "her", "here", "hers", "him", "his", "how", "i", "if", "in", "into", "is",
    "it", "its", "just", "let", "many", "me", "more", "most", "much", "must", "my", "no", "nor", "not",
    "now", "of", "oh", "on", "once", "one", "only", "or", "our", "perhaps", "shall", "she", "should",
    "since", "so", "some", "such", "than", "that", "the", "their", "them", "then", "there", "these",
    "they", "this", "those", "though", "thus", "till", "to", "too", "under", "until", "upon", "very",
    "was", "we", "well", "were", "what", "when", "where", "whether", "which", "while", "who", "whom",
    "whose", "why", "with", "without", "would", "yes", "yet", "you", "your",
];

fn possessive_len(surface: &str) -> usize {
    for suffix in ["'s", "\u{2019}s"] {
        if surface.len() > suffix.len() && surface.ends_with(suffix) {
            return 2;
        }
    }
    0
}

fn is_opener(t: &Token) -> bool {
    matches!(t.surface.as_str(), "\"" | "'" | "\u{201c}" | "\u{2018}" | "(")
}

/// Dictionary-and-similarity recognizer.
///
/// A mention is a run of capitalized words that either starts with a
/// gendered title, or contains a word (or word pair) similar enough to some
/// tag, or starts with a known first name or diminutive. Runs grow over
/// following capitalized words and name particles (`de`, `van`, ...), are
/// taken leftmost-longest and never overlap. A trailing possessive `'s` is
/// left out of the span.
///
/// A capitalized word opening a sentence or a quotation only counts when
/// the document never uses it in lowercase, which keeps `Will` and `May`
/// out while `Lizzy` stays in.
pub struct GazetteerRecognizer<'m> {
    matcher: &'m Matcher<'m>,
    similar_cache: RefCell<HashMap<String, bool>>,
}

impl<'m> GazetteerRecognizer<'m> {
    pub fn new(matcher: &'m Matcher<'m>) -> Self {
        GazetteerRecognizer {
            matcher,
            similar_cache: RefCell::new(HashMap::new()),
        }
    }

    fn similar_to_tag(&self, s: &str) -> bool {
        if s.chars().count() < 3 {
            return false;
        }
        if let Some(&hit) = self.similar_cache.borrow().get(s) {
            return hit;
        }
        let hit = !self.matcher.collect_candidates(s).is_empty();
        self.similar_cache.borrow_mut().insert(s.to_string(), hit);
        hit
    }

    pub fn recognize(&self, doc: &Document) -> Vec<EntityMention> {
        let tokens = doc.tokens();
        let ctx = Context::new(doc);
        let mut mentions = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            match self.run_at(doc, &ctx, i) {
                Some((last, span)) => {
                    mentions.push(EntityMention::new(doc, span, MentionSource::Gazetteer));
                    i = last + 1;
                }
                None => i += 1,
            }
        }
        mentions
    }

    /// The longest mention starting at token `i`: index of its last token
    /// and its span.
    fn run_at(&self, doc: &Document, ctx: &Context, i: usize) -> Option<(usize, Span)> {
        let tokens = doc.tokens();
        let lex = self.matcher.lexicons();
        let tok = &tokens[i];
        let after_title = if tok.is_title && lex.titles.title_gender(&tok.surface).is_known() {
            ctx.adjacent_name(i + 1)
        } else {
            None
        };
        let first = after_title.unwrap_or(i);
        if after_title.is_none() {
            if !ctx.name_like(i) {
                return None;
            }
            let core = ctx.core(i);
            let pair_similar = ctx.possessive[i] == 0
                && ctx
                    .adjacent_name(i + 1)
                    .is_some_and(|j| self.similar_to_tag(doc.slice(Span::new(tok.span.start, ctx.core_span(j).end))));
            let qualifies = pair_similar || self.similar_to_tag(core) || lex.is_first_name(core);
            if !qualifies {
                return None;
            }
        }
        // extend over further capitalized words
        let mut last = first;
        let mut words = 1;
        while words < MAX_NAME_WORDS && ctx.possessive[last] == 0 {
            match ctx.adjacent_name(last + 1) {
                Some(next) => {
                    words += next - last;
                    last = next;
                }
                None => break,
            }
        }
        Some((last, Span::new(tok.span.start, ctx.core_span(last).end)))
    }
}

/// Per-document facts the recognizer consults for every token.
struct Context<'d> {
    doc: &'d Document,
    lowercase_vocab: HashSet<String>,
    initial: Vec<bool>,
    possessive: Vec<usize>,
    sentence_of: Vec<Option<usize>>,
}

impl<'d> Context<'d> {
    fn new(doc: &'d Document) -> Self {
        let tokens = doc.tokens();
        let lowercase_vocab = tokens
            .iter()
            .filter(|t| t.surface.chars().next().is_some_and(char::is_lowercase))
            .map(|t| t.surface.to_lowercase())
            .collect();
        let sentence_of: Vec<Option<usize>> = tokens
            .iter()
            .map(|t| doc.sentence_index_at(t.span.start))
            .collect();
        // first word of its sentence, or right after an opening quote
        let mut initial = Vec::with_capacity(tokens.len());
        let mut seen_word = false;
        for (i, t) in tokens.iter().enumerate() {
            if i == 0 || sentence_of[i] != sentence_of[i - 1] {
                seen_word = false;
            }
            initial.push(!seen_word || is_opener(&tokens[i - 1]));
            seen_word |= t.is_word();
        }
        let possessive = tokens.iter().map(|t| possessive_len(&t.surface)).collect();
        Context {
            doc,
            lowercase_vocab,
            initial,
            possessive,
            sentence_of,
        }
    }

    fn core_span(&self, i: usize) -> Span {
        let s = self.doc.tokens()[i].span;
        Span::new(s.start, s.end - self.possessive[i])
    }

    fn core(&self, i: usize) -> &str {
        self.doc.slice(self.core_span(i))
    }

    /// Capitalized word that may be part of a name.
    fn name_like(&self, i: usize) -> bool {
        let Some(t) = self.doc.tokens().get(i) else {
            return false;
        };
        if !t.is_word() || !t.starts_uppercase() || t.is_title {
            return false;
        }
        let core = self.core(i);
        if core.chars().count() < 2 {
            return false;
        }
        let lower = core.to_lowercase();
        if self.initial[i] && self.lowercase_vocab.contains(&lower) {
            return false;
        }
        if FUNCTION_WORDS.binary_search(&lower.as_str()).is_ok() {
            return false;
        }
        true
    }

    /// The name-like token continuing a run at `i`, directly after `i - 1`
    /// with only spaces between, possibly across one name particle. Returns
    /// the index of the name-like token.
    fn adjacent_name(&self, i: usize) -> Option<usize> {
        let tokens = self.doc.tokens();
        let prev = tokens.get(i.checked_sub(1)?)?;
        let t = tokens.get(i)?;
        if self.sentence_of[i] != self.sentence_of[i - 1] || !self.spaced(prev, t) {
            return None;
        }
        if self.name_like(i) {
            return Some(i);
        }
        if PARTICLES.contains(&t.surface.as_str()) {
            let next = tokens.get(i + 1)?;
            if self.spaced(t, next) && self.name_like(i + 1) && self.sentence_of[i + 1] == self.sentence_of[i] {
                return Some(i + 1);
            }
        }
        None
    }

    fn spaced(&self, a: &Token, b: &Token) -> bool {
        let gap = self.doc.slice(Span::new(a.span.end, b.span.start));
        !gap.is_empty() && gap.chars().all(|c| c == ' ' || c == '\t' || c == '\n') && gap.matches('\n').count() < 2
    }
}

/// Runs the gazetteer recognizer with the matcher's tags, lexicons and
/// threshold.
pub fn recognize_gazetteer(doc: &Document, matcher: &Matcher) -> Vec<EntityMention> {
    GazetteerRecognizer::new(matcher).recognize(doc)
}
