//! Text container, tokenization and sentence segmentation.
//!
//! Every offset in this crate counts Unicode scalar values, not bytes, so
//! standoff files stay portable across implementations.

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::lexicon::TitleLexicon;

/// Half-open range of character offsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end, "span start {start} after end {end}");
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start >= self.end
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn shift(&self, delta: isize) -> Span {
        let mv = |x: usize| (x as isize + delta) as usize;
        Span::new(mv(self.start), mv(self.end))
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

impl From<Range<usize>> for Span {
    fn from(r: Range<usize>) -> Self {
        Span::new(r.start, r.end)
    }
}

/// Maps character offsets of a string to byte offsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharOffsets {
    bytes: Vec<usize>,
}

impl CharOffsets {
    pub fn new(text: &str) -> Self {
        let mut bytes: Vec<usize> = text.char_indices().map(|(b, _)| b).collect();
        bytes.push(text.len());
        CharOffsets { bytes }
    }

    /// Length of the text in characters.
    pub fn char_len(&self) -> usize {
        self.bytes.len() - 1
    }

    pub fn byte(&self, char_offset: usize) -> usize {
        self.bytes[char_offset]
    }

    pub fn slice<'t>(&self, text: &'t str, span: Span) -> &'t str {
        &text[self.bytes[span.start]..self.bytes[span.end]]
    }

    pub fn in_bounds(&self, span: Span) -> bool {
        span.start < span.end && span.end <= self.char_len()
    }
}

/// Slices `text` by character offsets.
pub fn char_slice(text: &str, span: Span) -> &str {
    CharOffsets::new(text).slice(text, span)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub span: Span,
    /// The token is a personal title from the title lexicon.
    pub is_title: bool,
}

impl Token {
    pub fn starts_uppercase(&self) -> bool {
        self.surface.chars().next().is_some_and(char::is_uppercase)
    }

    pub fn is_word(&self) -> bool {
        self.surface.chars().next().is_some_and(char::is_alphanumeric)
    }
}

fn is_joiner(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}' | '-' | '\u{2010}')
}

/// Splits `text` into tokens using the bundled title lexicon.
pub fn tokenize(text: &str) -> Vec<Token> {
    tokenize_with(text, &TitleLexicon::bundled())
}

/// Splits `text` into tokens.
///
/// Runs of letters and digits form words; an apostrophe or hyphen between
/// two alphanumerics stays inside the word (`Lizzy's`, `Anne-Marie`). A title
/// from `titles` followed directly by a period keeps the period. Every other
/// non-whitespace character is a token of its own.
pub fn tokenize_with(text: &str, titles: &TitleLexicon) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let offsets = CharOffsets::new(text);
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let mut is_title = false;
        if c.is_alphanumeric() {
            i += 1;
            while i < chars.len() {
                if chars[i].is_alphanumeric() {
                    i += 1;
                } else if is_joiner(chars[i])
                    && i + 1 < chars.len()
                    && chars[i + 1].is_alphanumeric()
                {
                    i += 2;
                } else {
                    break;
                }
            }
            let word = offsets.slice(text, Span::new(start, i));
            if titles.is_title(word) {
                is_title = true;
                if i < chars.len() && chars[i] == '.' {
                    i += 1;
                }
            }
        } else {
            i += 1;
        }
        let span = Span::new(start, i);
        tokens.push(Token {
            surface: offsets.slice(text, span).to_string(),
            span,
            is_title,
        });
    }
    tokens
}

fn is_terminator(t: &Token) -> bool {
    matches!(t.surface.as_str(), "." | "!" | "?" | "\u{2026}")
}

fn is_closer(t: &Token) -> bool {
    matches!(
        t.surface.as_str(),
        "\"" | "'" | "\u{201d}" | "\u{2019}" | ")" | "]"
    )
}

fn is_opener(t: &Token) -> bool {
    matches!(t.surface.as_str(), "\"" | "'" | "\u{201c}" | "\u{2018}" | "(" | "[")
}

/// Sentence boundaries over an already tokenized text.
///
/// A sentence ends after `.`, `!`, `?` or `…` (plus any closing quotes or
/// brackets glued to it) when whitespace and a capitalized word follow,
/// optionally behind an opening quote. A blank line always ends a sentence.
/// Title periods never end a sentence because they belong to the title token.
pub fn segment_sentences(text: &str, tokens: &[Token]) -> Vec<Span> {
    let offsets = CharOffsets::new(text);
    let mut sentences = Vec::new();
    let Some(first) = tokens.first() else {
        return sentences;
    };
    let mut sent_start = first.span.start;
    let mut i = 0;
    while i < tokens.len() {
        let mut last = i;
        let mut boundary = false;
        if is_terminator(&tokens[i]) {
            while last + 1 < tokens.len()
                && tokens[last + 1].span.start == tokens[last].span.end
                && (is_terminator(&tokens[last + 1]) || is_closer(&tokens[last + 1]))
            {
                last += 1;
            }
            if let Some(next) = tokens.get(last + 1) {
                let spaced = next.span.start > tokens[last].span.end;
                let capital = next.starts_uppercase()
                    || (is_opener(next)
                        && tokens.get(last + 2).is_some_and(Token::starts_uppercase));
                boundary = spaced && capital;
            }
        }
        if !boundary {
            if let Some(next) = tokens.get(last + 1) {
                let gap = offsets.slice(text, Span::new(tokens[last].span.end, next.span.start));
                boundary = gap.matches('\n').count() >= 2;
            }
        }
        if boundary || last + 1 == tokens.len() {
            sentences.push(Span::new(sent_start, tokens[last].span.end));
            if let Some(next) = tokens.get(last + 1) {
                sent_start = next.span.start;
            }
        }
        i = last + 1;
    }
    sentences
}

/// Sentence spans of `text`, using the bundled title lexicon.
pub fn split_sentences(text: &str) -> Vec<Span> {
    segment_sentences(text, &tokenize(text))
}

/// Immutable text with its tokens and sentences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    text: String,
    offsets: CharOffsets,
    tokens: Vec<Token>,
    sentences: Vec<Span>,
}

impl Document {
    pub fn new(text: impl Into<String>) -> Self {
        Self::with_titles(text, &TitleLexicon::bundled())
    }

    pub fn with_titles(text: impl Into<String>, titles: &TitleLexicon) -> Self {
        let text = text.into();
        let tokens = tokenize_with(&text, titles);
        let sentences = segment_sentences(&text, &tokens);
        let offsets = CharOffsets::new(&text);
        Document {
            text,
            offsets,
            tokens,
            sentences,
        }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn sentences(&self) -> &[Span] {
        &self.sentences
    }

    /// Length in characters.
    pub fn char_len(&self) -> usize {
        self.offsets.char_len()
    }

    pub fn offsets(&self) -> &CharOffsets {
        &self.offsets
    }

    pub fn slice(&self, span: Span) -> &str {
        self.offsets.slice(&self.text, span)
    }

    /// Index of the sentence holding character `offset`, or the last sentence
    /// starting before it.
    pub fn sentence_index_at(&self, offset: usize) -> Option<usize> {
        let n = self.sentences.partition_point(|s| s.start <= offset);
        n.checked_sub(1)
    }

    /// Indices of the tokens lying inside `span`.
    pub fn token_range(&self, span: Span) -> Range<usize> {
        let lo = self.tokens.partition_point(|t| t.span.end <= span.start);
        let hi = self.tokens.partition_point(|t| t.span.start < span.end);
        lo..hi.max(lo)
    }

    /// Index of the token starting exactly at `offset`.
    pub fn token_starting_at(&self, offset: usize) -> Option<usize> {
        self.tokens
            .binary_search_by_key(&offset, |t| t.span.start)
            .ok()
    }

    /// The last token of the same sentence that ends at or before `span.start`.
    pub fn preceding_token(&self, span: Span) -> Option<&Token> {
        let sentence = self.sentences[self.sentence_index_at(span.start)?];
        let idx = self.tokens.partition_point(|t| t.span.end <= span.start);
        let tok = self.tokens.get(idx.checked_sub(1)?)?;
        (tok.span.start >= sentence.start).then_some(tok)
    }
}
