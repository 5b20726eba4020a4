//! Links a recognized person mention to one of the predefined tags.
//!
//! The decision procedure:
//!
//! 1. An entity identical to a tag's full name returns that tag.
//! 2. Otherwise every tag whose partial similarity to the entity reaches the
//!    threshold becomes a candidate, best score first (ties keep tag-list
//!    order). With at least one candidate:
//!    - prefix `the` yields the family label `the <entity>`;
//!    - a gendered title prefix yields the first candidate of that gender;
//!    - anything else (or no candidate of the title's gender) yields the top
//!      candidate.
//! 3. With no candidate the entity is looked up as a diminutive; the first
//!    tag containing one of its canonical names wins. Failing that the
//!    mention gets the generic `person` label.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::MatchError;
use crate::lexicon::{Gender, Lexicons, TitleLexicon};
use crate::similarity::{partial_chars, SimilarityScore};
use crate::tags::{CharacterTag, TagList};

pub const PERSON_LABEL: &str = "person";
pub const DEFAULT_THRESHOLD: u8 = 70;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatcherConfig {
    partial_similarity_precision: u8,
}

impl MatcherConfig {
    pub fn new(partial_similarity_precision: u8) -> Result<Self, MatchError> {
        if partial_similarity_precision == 0 || partial_similarity_precision > 100 {
            return Err(MatchError::InvalidThreshold(partial_similarity_precision));
        }
        Ok(MatcherConfig {
            partial_similarity_precision,
        })
    }

    pub fn threshold(&self) -> u8 {
        self.partial_similarity_precision
    }
}

impl Default for MatcherConfig {
    fn default() -> Self {
        MatcherConfig {
            partial_similarity_precision: DEFAULT_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchKind {
    Tag,
    Family,
    Person,
}

impl MatchKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MatchKind::Tag => "tag",
            MatchKind::Family => "family",
            MatchKind::Person => "person",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchResult {
    /// Linked by string similarity.
    Tag {
        tag: CharacterTag,
        score: SimilarityScore,
    },
    /// Linked through the diminutive lexicon; carries no similarity score.
    Diminutive { tag: CharacterTag },
    /// A whole family, labelled `the <Surname>`.
    Family { label: String },
    /// A person outside the tag list.
    Person,
}

impl MatchResult {
    pub fn kind(&self) -> MatchKind {
        match self {
            MatchResult::Tag { .. } | MatchResult::Diminutive { .. } => MatchKind::Tag,
            MatchResult::Family { .. } => MatchKind::Family,
            MatchResult::Person => MatchKind::Person,
        }
    }

    pub fn tag(&self) -> Option<&CharacterTag> {
        match self {
            MatchResult::Tag { tag, .. } | MatchResult::Diminutive { tag } => Some(tag),
            _ => None,
        }
    }

    pub fn score(&self) -> Option<SimilarityScore> {
        match self {
            MatchResult::Tag { score, .. } => Some(*score),
            _ => None,
        }
    }

    pub fn via_diminutive(&self) -> bool {
        matches!(self, MatchResult::Diminutive { .. })
    }

    /// The annotation label: full name, family label or `person`.
    pub fn label(&self) -> &str {
        match self {
            MatchResult::Tag { tag, .. } | MatchResult::Diminutive { tag } => &tag.full_name,
            MatchResult::Family { label } => label,
            MatchResult::Person => PERSON_LABEL,
        }
    }
}

impl fmt::Display for MatchResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchResult::Tag { tag, score } => write!(f, "{} ({score})", tag.full_name),
            MatchResult::Diminutive { tag } => write!(f, "{} (via diminutive)", tag.full_name),
            MatchResult::Family { label } => write!(f, "{label} (family)"),
            MatchResult::Person => f.write_str(PERSON_LABEL),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Candidate<'a> {
    pub tag: &'a CharacterTag,
    /// Position in the tag list.
    pub index: usize,
    pub score: SimilarityScore,
}

/// Splits a leading personal title off an entity: `Miss Bennet` becomes
/// `(Some("Miss"), "Bennet")`. An entity that is only a title is left whole.
pub fn strip_leading_title<'e>(entity: &'e str, titles: &TitleLexicon) -> (Option<&'e str>, &'e str) {
    let trimmed = entity.trim();
    if let Some((first, rest)) = trimmed.split_once(char::is_whitespace) {
        let rest = rest.trim_start();
        if titles.is_title(first) && !rest.is_empty() {
            return (Some(first), rest);
        }
    }
    (None, trimmed)
}

pub struct Matcher<'a> {
    tags: &'a TagList,
    lexicons: &'a Lexicons,
    config: MatcherConfig,
    tag_chars: Vec<Vec<char>>,
}

impl<'a> Matcher<'a> {
    pub fn new(tags: &'a TagList, lexicons: &'a Lexicons, config: MatcherConfig) -> Self {
        let tag_chars = tags
            .tags()
            .iter()
            .map(|t| t.full_name.chars().collect())
            .collect();
        Matcher {
            tags,
            lexicons,
            config,
            tag_chars,
        }
    }

    pub fn config(&self) -> MatcherConfig {
        self.config
    }

    pub fn tags(&self) -> &'a TagList {
        self.tags
    }

    pub fn lexicons(&self) -> &'a Lexicons {
        self.lexicons
    }

    /// Tags whose partial similarity to `entity` reaches the threshold, best
    /// first; equal scores keep tag-list order.
    pub fn collect_candidates(&self, entity: &str) -> Vec<Candidate<'a>> {
        let entity: Vec<char> = entity.chars().collect();
        if entity.is_empty() {
            return Vec::new();
        }
        let threshold = self.config.threshold();
        let mut candidates: Vec<Candidate<'a>> = self
            .tags
            .tags()
            .iter()
            .zip(&self.tag_chars)
            .enumerate()
            .filter(|(_, (_, chars))| !chars.is_empty())
            .filter_map(|(index, (tag, chars))| {
                let score = partial_chars(&entity, chars).ok()?;
                (score.value() >= threshold).then_some(Candidate { tag, index, score })
            })
            .collect();
        // stable sort keeps list order among ties
        candidates.sort_by(|a, b| b.score.cmp(&a.score));
        candidates
    }

    pub fn find_match(&self, entity: &str, prefix: Option<&str>) -> Result<MatchResult, MatchError> {
        let entity = entity.trim();
        if entity.is_empty() {
            return Err(MatchError::EmptyEntity);
        }
        if let Some(result) = self.exact_match(entity) {
            return Ok(result);
        }

        let candidates = self.collect_candidates(entity);
        if let Some(top) = candidates.first() {
            let prefix = prefix.map(str::trim).filter(|p| !p.is_empty());
            if let Some(prefix) = prefix {
                if prefix.eq_ignore_ascii_case("the") {
                    return Ok(MatchResult::Family {
                        label: format!("the {entity}"),
                    });
                }
                let gender = self.lexicons.titles.title_gender(prefix);
                if gender != Gender::Unknown {
                    if let Some(c) = candidates.iter().find(|c| c.tag.gender == gender) {
                        return Ok(MatchResult::Tag {
                            tag: c.tag.clone(),
                            score: c.score,
                        });
                    }
                }
            }
            return Ok(MatchResult::Tag {
                tag: top.tag.clone(),
                score: top.score,
            });
        }

        Ok(self
            .diminutive_match(entity)
            .map_or(MatchResult::Person, |tag| MatchResult::Diminutive { tag: tag.clone() }))
    }

    /// Matches a mention surface as produced by a recognizer.
    ///
    /// The full surface gets the exact-name check first, so `Mrs. Bennet`
    /// links to a tag spelled that way. Then a leading title is split off and
    /// used as the prefix, since it is the token right before the bare name.
    pub fn link(&self, surface: &str, prefix: Option<&str>) -> Result<MatchResult, MatchError> {
        let surface = surface.trim();
        if surface.is_empty() {
            return Err(MatchError::EmptyEntity);
        }
        if let Some(result) = self.exact_match(surface) {
            return Ok(result);
        }
        match strip_leading_title(surface, &self.lexicons.titles) {
            (Some(title), rest) => self.find_match(rest, Some(title)),
            (None, rest) => self.find_match(rest, prefix),
        }
    }

    fn exact_match(&self, entity: &str) -> Option<MatchResult> {
        // regular similarity is 100 exactly when the strings are equal
        self.tags
            .tags()
            .iter()
            .find(|t| t.full_name == entity)
            .map(|tag| MatchResult::Tag {
                tag: tag.clone(),
                score: SimilarityScore::MAX,
            })
    }

    fn diminutive_match(&self, entity: &str) -> Option<&'a CharacterTag> {
        let mut forms = vec![entity];
        if let Some((first, _)) = entity.split_once(char::is_whitespace) {
            forms.push(first);
        }
        forms
            .into_iter()
            .flat_map(|form| self.lexicons.diminutives.canonical_names_for(form))
            .find_map(|canonical| self.tag_containing(canonical))
    }

    /// First tag whose given names or full-name words include `name`.
    fn tag_containing(&self, name: &str) -> Option<&'a CharacterTag> {
        self.tags.tags().iter().find(|t| {
            t.given_names
                .iter()
                .map(String::as_str)
                .chain(t.full_name.split_whitespace())
                .any(|w| w.eq_ignore_ascii_case(name))
        })
    }
}
