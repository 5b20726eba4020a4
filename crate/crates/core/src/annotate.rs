//! Annotated documents: linking mentions, inline rendering and standoff JSON.
//!
//! Inline output appends `<<label>>` to every mention, e.g.
//! `Jane<<Jane Bennet>> smiled.` When the mention is not a single word
//! (`Mr. Collins`) its start is marked too: `[[Mr. Collins]]<<Mr. William
//! Collins>>`. Texts containing `<<`, `>>`, `[[` or `]]` cannot be rendered
//! unambiguously.

use serde::{Deserialize, Serialize};

use crate::error::{MatchError, StandoffError};
use crate::matcher::{MatchKind, MatchResult, Matcher};
use crate::recognizer::{ingest_spans, recognize_gazetteer, EntityMention, StandoffInput};
use crate::text::{CharOffsets, Document, Span};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigSnapshot {
    pub partial_similarity_precision: u8,
    /// `gazetteer` or `external`.
    pub recognizer: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    #[serde(flatten)]
    pub span: Span,
    pub surface: String,
    pub label: String,
    pub kind: MatchKind,
    pub score: Option<u8>,
    pub via_diminutive: bool,
}

impl Annotation {
    pub fn from_match(span: Span, surface: impl Into<String>, result: &MatchResult) -> Self {
        Annotation {
            span,
            surface: surface.into(),
            label: result.label().to_string(),
            kind: result.kind(),
            score: result.score().map(|s| s.value()),
            via_diminutive: result.via_diminutive(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedDocument {
    pub tag_list: String,
    pub config: ConfigSnapshot,
    pub text: String,
    pub annotations: Vec<Annotation>,
}

impl AnnotatedDocument {
    /// Checks spans, surfaces and the kind/score invariants.
    pub fn validate(&self) -> Result<(), StandoffError> {
        let offsets = CharOffsets::new(&self.text);
        let len = offsets.char_len();
        for (index, a) in self.annotations.iter().enumerate() {
            if !offsets.in_bounds(a.span) {
                return Err(StandoffError::OutOfRange {
                    index,
                    start: a.span.start,
                    end: a.span.end,
                    len,
                });
            }
            if index > 0 && self.annotations[index - 1].span.end > a.span.start {
                return Err(StandoffError::Overlap {
                    index,
                    other: index - 1,
                });
            }
            let expected = offsets.slice(&self.text, a.span);
            if expected != a.surface {
                return Err(StandoffError::SurfaceMismatch {
                    index,
                    expected: expected.to_string(),
                    found: a.surface.clone(),
                });
            }
            let invalid = |message: &str| StandoffError::Invalid {
                index,
                message: message.to_string(),
            };
            // hand-made gold files carry no scores
            if a.score.is_some() && (a.kind != MatchKind::Tag || a.via_diminutive) {
                return Err(invalid("only similarity-linked tags carry a score"));
            }
            if a.via_diminutive && a.kind != MatchKind::Tag {
                return Err(invalid("only tag annotations can come from a diminutive"));
            }
            if a.score.is_some_and(|s| s > 100) {
                return Err(invalid("score above 100"));
            }
        }
        Ok(())
    }

    pub fn to_standoff(&self) -> String {
        let mut json = serde_json::to_string_pretty(self).expect("annotated document serializes");
        json.push('\n');
        json
    }

    pub fn from_standoff(src: &str) -> Result<Self, StandoffError> {
        let doc: AnnotatedDocument = serde_json::from_str(src)?;
        doc.validate()?;
        Ok(doc)
    }

    /// `(span, label)` pairs in document order.
    pub fn labelled_spans(&self) -> Vec<(Span, String)> {
        self.annotations
            .iter()
            .map(|a| (a.span, a.label.clone()))
            .collect()
    }
}

/// Links every mention and collects the annotations, sorted by start.
pub fn annotate(
    text: &str,
    matcher: &Matcher,
    mentions: &[EntityMention],
    recognizer: &str,
) -> Result<AnnotatedDocument, MatchError> {
    let mut annotations = mentions
        .iter()
        .map(|m| {
            let result = matcher.link(&m.surface, m.prefix.as_deref())?;
            Ok(Annotation::from_match(m.span, m.surface.clone(), &result))
        })
        .collect::<Result<Vec<_>, MatchError>>()?;
    annotations.sort_by_key(|a| (a.span.start, a.span.end));
    Ok(AnnotatedDocument {
        tag_list: matcher.tags().novel_id.clone(),
        config: ConfigSnapshot {
            partial_similarity_precision: matcher.config().threshold(),
            recognizer: recognizer.to_string(),
        },
        text: text.to_string(),
        annotations,
    })
}

/// Recognizes mentions with the gazetteer and links them.
pub fn annotate_text(text: &str, matcher: &Matcher) -> Result<AnnotatedDocument, MatchError> {
    let doc = Document::with_titles(text, &matcher.lexicons().titles);
    let mentions = recognize_gazetteer(&doc, matcher);
    annotate(text, matcher, &mentions, "gazetteer")
}

/// Links the person spans of an external recognizer.
pub fn annotate_spans(
    text: &str,
    matcher: &Matcher,
    spans: &StandoffInput,
) -> Result<AnnotatedDocument, StandoffError> {
    let doc = Document::with_titles(text, &matcher.lexicons().titles);
    let mentions = ingest_spans(&doc, spans)?;
    Ok(annotate(text, matcher, &mentions, "external")?)
}

pub fn write_standoff(ad: &AnnotatedDocument) -> String {
    ad.to_standoff()
}

pub fn read_standoff(src: &str) -> Result<AnnotatedDocument, StandoffError> {
    AnnotatedDocument::from_standoff(src)
}

const OPEN: &str = "[[";
const CLOSE: &str = "]]";
const LABEL_OPEN: &str = "<<";
const LABEL_CLOSE: &str = ">>";

fn wordish(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '\'' | '\u{2019}' | '-' | '\u{2010}')
}

/// Start of the word run ending at `end`, not reaching below `floor`.
fn word_start(chars: &[char], end: usize, floor: usize) -> usize {
    let mut k = end;
    while k > floor && wordish(chars[k - 1]) {
        k -= 1;
    }
    k
}

/// Renders the text with inline label markers.
pub fn render_inline(ad: &AnnotatedDocument) -> String {
    let chars: Vec<char> = ad.text.chars().collect();
    let mut out = String::with_capacity(ad.text.len() + 24 * ad.annotations.len());
    let mut pos = 0;
    for a in &ad.annotations {
        let Span { start, end } = a.span;
        out.extend(&chars[pos..start]);
        let bare = chars[start].is_alphanumeric() && word_start(&chars, end, pos) == start;
        if !bare {
            out.push_str(OPEN);
        }
        out.extend(&chars[start..end]);
        if !bare {
            out.push_str(CLOSE);
        }
        out.push_str(LABEL_OPEN);
        out.push_str(&a.label);
        out.push_str(LABEL_CLOSE);
        pos = end;
    }
    out.extend(&chars[pos..]);
    out
}

/// Recovers the plain text and the `(span, label)` pairs from inline output.
pub fn parse_inline(inline: &str) -> Result<(String, Vec<(Span, String)>), StandoffError> {
    let src: Vec<char> = inline.chars().collect();
    let at = |i: usize, pat: &str| pat.chars().enumerate().all(|(k, c)| src.get(i + k) == Some(&c));
    let read_label = |i: usize| -> Result<(String, usize), StandoffError> {
        let mut j = i;
        while j < src.len() {
            if at(j, LABEL_CLOSE) {
                return Ok((src[i..j].iter().collect(), j + LABEL_CLOSE.len()));
            }
            j += 1;
        }
        Err(StandoffError::MalformedInline(i))
    };

    let mut clean: Vec<char> = Vec::with_capacity(src.len());
    let mut spans = Vec::new();
    let mut floor = 0;
    let mut open: Option<(usize, usize)> = None;
    let mut i = 0;
    while i < src.len() {
        if open.is_none() && at(i, OPEN) {
            open = Some((clean.len(), i));
            i += OPEN.len();
        } else if open.is_some() && at(i, CLOSE) {
            let (start, _) = open.take().expect("checked above");
            if !at(i + CLOSE.len(), LABEL_OPEN) || start == clean.len() {
                return Err(StandoffError::MalformedInline(i));
            }
            let (label, next) = read_label(i + CLOSE.len() + LABEL_OPEN.len())?;
            spans.push((Span::new(start, clean.len()), label));
            floor = clean.len();
            i = next;
        } else if open.is_none() && at(i, LABEL_OPEN) {
            let start = word_start(&clean, clean.len(), floor);
            if start == clean.len() {
                return Err(StandoffError::MalformedInline(i));
            }
            let (label, next) = read_label(i + LABEL_OPEN.len())?;
            spans.push((Span::new(start, clean.len()), label));
            floor = clean.len();
            i = next;
        } else {
            clean.push(src[i]);
            i += 1;
        }
    }
    if let Some((_, pos)) = open {
        return Err(StandoffError::MalformedInline(pos));
    }
    Ok((clean.into_iter().collect(), spans))
}

/// Removes every marker, giving back the original text.
pub fn strip_inline(inline: &str) -> Result<String, StandoffError> {
    parse_inline(inline).map(|(text, _)| text)
}
