//! Scoring predicted annotations against a gold standard, plus mention
//! statistics.
//!
//! A prediction is a hit only when its span equals a gold span exactly and
//! the labels agree. Overall scores are micro-averaged.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::annotate::{AnnotatedDocument, Annotation};
use crate::matcher::{MatchKind, PERSON_LABEL};
use crate::tags::CharacterTag;
use crate::text::{Document, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalMode {
    /// Only spans are compared; every mention counts as `person`.
    PersonOnly,
    /// Labels must agree (case-insensitive).
    FullNames,
}

impl FromStr for EvalMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "person_only" | "person" => Ok(EvalMode::PersonOnly),
            "full_names" | "full" => Ok(EvalMode::FullNames),
            other => Err(format!("unknown evaluation mode `{other}` (expected person_only or full_names)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    pub mode: EvalMode,
    /// In full-names mode, score family annotations (`the Bennet`) as plain
    /// `person` mentions.
    pub family_as_person: bool,
}

impl EvalOptions {
    pub fn new(mode: EvalMode) -> Self {
        EvalOptions {
            mode,
            family_as_person: false,
        }
    }
}

/// Raw hit counts for one label or for the whole report.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
}

impl Counts {
    pub fn support(&self) -> usize {
        self.true_positives + self.false_negatives
    }

    pub fn predicted(&self) -> usize {
        self.true_positives + self.false_positives
    }

    fn add(&mut self, other: &Counts) {
        self.true_positives += other.true_positives;
        self.false_positives += other.false_positives;
        self.false_negatives += other.false_negatives;
    }

    pub fn metrics(&self) -> Metrics {
        let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let precision = ratio(self.true_positives, self.predicted());
        let recall = ratio(self.true_positives, self.support());
        let f_measure = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        Metrics {
            precision,
            recall,
            f_measure,
            support: self.support(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    pub support: usize,
}

/// Per-label and overall scores. Labels are keyed by their lowercase form
/// and displayed as first seen in the gold data.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MetricsReport {
    labels: BTreeMap<String, (String, Counts)>,
    overall: Counts,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    per_label: BTreeMap<&'a str, LabelJson>,
    overall: LabelJson,
}

#[derive(Serialize)]
struct LabelJson {
    #[serde(flatten)]
    metrics: Metrics,
    #[serde(flatten)]
    counts: Counts,
}

impl MetricsReport {
    pub fn overall(&self) -> Metrics {
        self.overall.metrics()
    }

    pub fn overall_counts(&self) -> Counts {
        self.overall
    }

    /// Labels in alphabetical order with their scores.
    pub fn per_label(&self) -> impl Iterator<Item = (&str, Metrics)> {
        self.labels.values().map(|(name, c)| (name.as_str(), c.metrics()))
    }

    pub fn label(&self, label: &str) -> Option<Metrics> {
        self.labels.get(&label.to_lowercase()).map(|(_, c)| c.metrics())
    }

    pub fn label_counts(&self, label: &str) -> Option<Counts> {
        self.labels.get(&label.to_lowercase()).map(|(_, c)| *c)
    }

    fn entry(&mut self, label: &str) -> &mut Counts {
        &mut self
            .labels
            .entry(label.to_lowercase())
            .or_insert_with(|| (label.to_string(), Counts::default()))
            .1
    }

    /// Adds another document's counts, for corpus-level scores.
    pub fn merge(&mut self, other: &MetricsReport) {
        for (name, counts) in other.labels.values() {
            self.entry(name).add(counts);
        }
        self.overall.add(&other.overall);
    }

    pub fn to_json(&self) -> String {
        let json = ReportJson {
            per_label: self
                .labels
                .values()
                .map(|(name, c)| {
                    (
                        name.as_str(),
                        LabelJson {
                            metrics: c.metrics(),
                            counts: *c,
                        },
                    )
                })
                .collect(),
            overall: LabelJson {
                metrics: self.overall(),
                counts: self.overall,
            },
        };
        serde_json::to_string_pretty(&json).expect("report serializes") + "\n"
    }

    /// Plain-text table: one row per label, then the micro-averaged total.
    pub fn to_table(&self) -> String {
        const OVERALL: &str = "overall";
        let width = self
            .labels
            .values()
            .map(|(n, _)| n.chars().count())
            .chain([OVERALL.len(), 5])
            .max()
            .unwrap_or(0);
        let mut out = format!(
            "{:<width$}  {:>9}  {:>9}  {:>9}  {:>7}\n",
            "Label", "Precision", "Recall", "F-measure", "Support"
        );
        let row = |out: &mut String, name: &str, m: Metrics| {
            let pad = width - name.chars().count();
            out.push_str(&format!(
                "{name}{:pad$}  {:>9.2}  {:>9.2}  {:>9.2}  {:>7}\n",
                "", m.precision, m.recall, m.f_measure, m.support
            ));
        };
        for (name, c) in self.labels.values() {
            row(&mut out, name, c.metrics());
        }
        row(&mut out, OVERALL, self.overall());
        out
    }
}

impl fmt::Display for MetricsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_table())
    }
}

fn scored_label<'a>(a: &'a Annotation, options: EvalOptions) -> &'a str {
    match options.mode {
        EvalMode::PersonOnly => PERSON_LABEL,
        EvalMode::FullNames if options.family_as_person && a.kind == MatchKind::Family => PERSON_LABEL,
        EvalMode::FullNames => &a.label,
    }
}

/// Compares `pred` against `gold`; both must annotate the same text.
pub fn evaluate(
    gold: &AnnotatedDocument,
    pred: &AnnotatedDocument,
    options: EvalOptions,
) -> Result<MetricsReport, crate::error::EvalError> {
    if gold.text != pred.text {
        return Err(crate::error::EvalError::TextMismatch);
    }
    let mut report = MetricsReport::default();
    let mut gold_by_span: HashMap<Span, &str> = HashMap::new();
    for a in &gold.annotations {
        let label = scored_label(a, options);
        gold_by_span.insert(a.span, label);
        report.entry(label);
    }
    let mut matched: HashMap<Span, bool> = HashMap::new();
    for a in &pred.annotations {
        let label = scored_label(a, options);
        let hit = gold_by_span
            .get(&a.span)
            .is_some_and(|g| g.to_lowercase() == label.to_lowercase());
        if hit {
            matched.insert(a.span, true);
            report.entry(label).true_positives += 1;
        } else {
            report.entry(label).false_positives += 1;
        }
    }
    for a in &gold.annotations {
        if !matched.contains_key(&a.span) {
            report.entry(scored_label(a, options)).false_negatives += 1;
        }
    }
    for (_, c) in report.labels.values() {
        report.overall.add(c);
    }
    Ok(report)
}

/// How often each surface form was linked to `tag`.
pub fn mention_form_counts(ad: &AnnotatedDocument, tag: &CharacterTag) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for a in &ad.annotations {
        if a.kind == MatchKind::Tag && a.label == tag.full_name {
            *counts.entry(a.surface.clone()).or_insert(0) += 1;
        }
    }
    counts
}

/// Key used by [`title_prefix_counts`] for occurrences without a title.
pub const BARE: &str = "bare";

/// Occurrences of `surname` (possessive included), keyed by the gendered
/// title right before it as written, or [`BARE`].
pub fn title_prefix_counts(doc: &Document, surname: &str) -> BTreeMap<String, usize> {
    let titles = crate::lexicon::TitleLexicon::bundled();
    let possessives = [format!("{surname}'s"), format!("{surname}\u{2019}s")];
    let tokens = doc.tokens();
    let mut counts = BTreeMap::new();
    for (i, t) in tokens.iter().enumerate() {
        if t.surface != surname && !possessives.contains(&t.surface) {
            continue;
        }
        let key = match i.checked_sub(1).map(|p| &tokens[p]) {
            Some(prev) if prev.is_title && titles.title_gender(&prev.surface).is_known() => prev.surface.clone(),
            _ => BARE.to_string(),
        };
        *counts.entry(key).or_insert(0) += 1;
    }
    counts
}
