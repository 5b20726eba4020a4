//! Training-data generation for external NER fine-tuning.
//!
//! Two generators: sentences containing known entity names, annotated with
//! `person` spans, and name injection, which swaps character names for
//! common first names while keeping the annotations aligned.
//!
//! Records are JSON lines: `{"text": ..., "spans": [{"start", "end", "label"}]}`.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::AugmentError;
use crate::lexicon::{CommonNamesList, Gender, GenderLexicon};
use crate::recognizer::{RawSpan, PERSON};
use crate::text::{tokenize, CharOffsets, Document, Span};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingRecord {
    pub text: String,
    pub spans: Vec<RawSpan>,
}

impl TrainingRecord {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("training record serializes")
    }
}

pub fn read_jsonl(src: &str) -> Result<Vec<TrainingRecord>, AugmentError> {
    src.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(AugmentError::from))
        .collect()
}

pub fn write_jsonl(records: &[TrainingRecord]) -> String {
    records
        .iter()
        .map(|r| format!("{}\n", r.to_json_line()))
        .collect()
}

fn check_spans(len: usize, spans: &[Span]) -> Result<Vec<usize>, AugmentError> {
    for (index, s) in spans.iter().enumerate() {
        if s.start >= s.end || s.end > len {
            return Err(AugmentError::OutOfRange {
                index,
                start: s.start,
                end: s.end,
            });
        }
    }
    let mut order: Vec<usize> = (0..spans.len()).collect();
    order.sort_by_key(|&i| (spans[i].start, spans[i].end));
    for w in order.windows(2) {
        if spans[w[0]].overlaps(&spans[w[1]]) {
            return Err(AugmentError::Overlap(w[0], w[1]));
        }
    }
    Ok(order)
}

/// Replaces the text under each span whose surface has an entry in
/// `mapping`. Spans come back in input order with their new offsets and
/// surfaces; all other characters are untouched.
pub fn inject_with_mapping(
    sentence: &str,
    spans: &[Span],
    mapping: &HashMap<String, String>,
) -> Result<(String, Vec<(Span, String)>), AugmentError> {
    let offsets = CharOffsets::new(sentence);
    let order = check_spans(offsets.char_len(), spans)?;
    let mut out = String::with_capacity(sentence.len());
    let mut adjusted = vec![(Span::new(0, 0), String::new()); spans.len()];
    let mut pos = 0;
    let mut out_chars = 0;
    for i in order {
        let span = spans[i];
        let between = offsets.slice(sentence, Span::new(pos, span.start));
        out.push_str(between);
        out_chars += between.chars().count();
        let original = offsets.slice(sentence, span);
        let name = mapping.get(original).map_or(original, String::as_str);
        out.push_str(name);
        let n = name.chars().count();
        adjusted[i] = (Span::new(out_chars, out_chars + n), name.to_string());
        out_chars += n;
        pos = span.end;
    }
    out.push_str(offsets.slice(sentence, Span::new(pos, offsets.char_len())));
    Ok((out, adjusted))
}

/// Draws replacement names from a [`CommonNamesList`].
///
/// Names are drawn without repetition until a pool runs out, after which it
/// is reshuffled. With `gender_consistent` a name of known gender is replaced
/// from the same gender's partition.
pub struct NameInjector<'a> {
    pool: &'a CommonNamesList,
    genders: Option<&'a GenderLexicon>,
    rng: ChaCha8Rng,
    queues: HashMap<Gender, Vec<&'a String>>,
}

impl<'a> NameInjector<'a> {
    pub fn new(pool: &'a CommonNamesList, seed: u64) -> Result<Self, AugmentError> {
        if pool.is_empty() {
            return Err(AugmentError::EmptyPool);
        }
        Ok(NameInjector {
            pool,
            genders: None,
            rng: ChaCha8Rng::seed_from_u64(seed),
            queues: HashMap::new(),
        })
    }

    pub fn gender_consistent(mut self, genders: &'a GenderLexicon) -> Self {
        self.genders = Some(genders);
        self
    }

    fn partition_for(&self, original: &str) -> Gender {
        let Some(genders) = self.genders else {
            return Gender::Unknown;
        };
        let first = original.split_whitespace().next().unwrap_or(original);
        let g = genders.gender_of_first_name(first);
        if self.pool.partition(g).is_empty() {
            Gender::Unknown
        } else {
            g
        }
    }

    fn draw(&mut self, original: &str) -> String {
        let part = self.partition_for(original);
        for _ in 0..2 {
            let queue = self.queues.entry(part).or_default();
            if queue.is_empty() {
                let mut fresh = self.pool.partition(part);
                fresh.shuffle(&mut self.rng);
                // pop() takes from the back
                fresh.reverse();
                *queue = fresh;
            }
            let name = queue.pop().expect("pool is not empty");
            if !name.eq_ignore_ascii_case(original) || self.pool.partition(part).len() == 1 {
                return name.clone();
            }
        }
        self.queues
            .get_mut(&part)
            .and_then(Vec::pop)
            .cloned()
            .unwrap_or_else(|| original.to_string())
    }

    /// Picks one replacement per distinct name, in order of first appearance.
    pub fn mapping_for<'s>(&mut self, names: impl IntoIterator<Item = &'s str>) -> HashMap<String, String> {
        let mut mapping = HashMap::new();
        for name in names {
            if !mapping.contains_key(name) {
                let replacement = self.draw(name);
                mapping.insert(name.to_string(), replacement);
            }
        }
        mapping
    }

    /// Replaces every annotated name, the same name always by the same
    /// replacement within the sentence.
    pub fn inject(
        &mut self,
        sentence: &str,
        spans: &[Span],
    ) -> Result<(String, Vec<(Span, String)>), AugmentError> {
        let offsets = CharOffsets::new(sentence);
        let order = check_spans(offsets.char_len(), spans)?;
        let names: Vec<&str> = order.iter().map(|&i| offsets.slice(sentence, spans[i])).collect();
        let mapping = self.mapping_for(names);
        inject_with_mapping(sentence, spans, &mapping)
    }

    /// Injects names into the `person` spans of a record; other spans only
    /// move.
    pub fn inject_record(&mut self, record: &TrainingRecord) -> Result<TrainingRecord, AugmentError> {
        let offsets = CharOffsets::new(&record.text);
        let spans: Vec<Span> = record.spans.iter().map(|s| Span::new(s.start, s.end)).collect();
        let order = check_spans(offsets.char_len(), &spans)?;
        let names: Vec<&str> = order
            .iter()
            .filter(|&&i| record.spans[i].label.eq_ignore_ascii_case(PERSON))
            .map(|&i| offsets.slice(&record.text, spans[i]))
            .collect();
        let mapping = self.mapping_for(names);
        let (text, adjusted) = inject_with_mapping(&record.text, &spans, &mapping)?;
        Ok(TrainingRecord {
            text,
            spans: adjusted
                .into_iter()
                .zip(&record.spans)
                .map(|((span, _), raw)| RawSpan {
                    start: span.start,
                    end: span.end,
                    label: raw.label.clone(),
                })
                .collect(),
        })
    }
}

/// One-shot injection with a fresh injector seeded by `seed`.
pub fn inject_names(
    sentence: &str,
    spans: &[Span],
    pool: &CommonNamesList,
    seed: u64,
) -> Result<(String, Vec<(Span, String)>), AugmentError> {
    NameInjector::new(pool, seed)?.inject(sentence, spans)
}

/// Every sentence with a whole-token occurrence of one of `entities`, each
/// occurrence annotated as `person`. A possessive `'s` on the last token is
/// accepted and left out of the span.
pub fn build_entity_sentences<S: AsRef<str>>(text: &str, entities: &[S]) -> Vec<TrainingRecord> {
    let doc = Document::new(text);
    let mut patterns: Vec<Vec<String>> = entities
        .iter()
        .map(|e| tokenize(e.as_ref()).into_iter().map(|t| t.surface).collect::<Vec<_>>())
        .filter(|p| !p.is_empty())
        .collect();
    // longest first so `Jane Bennet` beats `Jane`
    patterns.sort_by_key(|p| std::cmp::Reverse(p.len()));

    let tokens = doc.tokens();
    let mut records = Vec::new();
    for &sentence in doc.sentences() {
        let range = doc.token_range(sentence);
        let sent_tokens = &tokens[range];
        let mut spans = Vec::new();
        let mut i = 0;
        while i < sent_tokens.len() {
            let hit = patterns.iter().find_map(|p| {
                let window = sent_tokens.get(i..i + p.len())?;
                let (last_tok, last_pat) = (&window[p.len() - 1], &p[p.len() - 1]);
                let heads_match = window[..p.len() - 1]
                    .iter()
                    .zip(p)
                    .all(|(t, w)| &t.surface == w);
                let trim = if &last_tok.surface == last_pat {
                    0
                } else if ["'s", "\u{2019}s"]
                    .iter()
                    .any(|s| last_tok.surface == format!("{last_pat}{s}"))
                {
                    2
                } else {
                    return None;
                };
                heads_match.then(|| (p.len(), Span::new(window[0].span.start, last_tok.span.end - trim)))
            });
            match hit {
                Some((n, span)) => {
                    spans.push(RawSpan {
                        start: span.start - sentence.start,
                        end: span.end - sentence.start,
                        label: PERSON.to_string(),
                    });
                    i += n;
                }
                None => i += 1,
            }
        }
        if !spans.is_empty() {
            records.push(TrainingRecord {
                text: doc.slice(sentence).to_string(),
                spans,
            });
        }
    }
    records
}
