//! Character tags: the predefined full names a novel's mentions link to.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::TagError;
use crate::lexicon::{Gender, Lexicons};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterTag {
    pub full_name: String,
    pub title: Option<String>,
    pub given_names: Vec<String>,
    pub surname: Option<String>,
    pub gender: Gender,
}

impl CharacterTag {
    /// Decomposes a full name.
    ///
    /// A leading title from the title lexicon is split off (only the first
    /// one); of the remaining words the last is the surname when at least two
    /// remain, the rest are given names. Gender comes from a gendered title,
    /// otherwise from the first given name.
    pub fn parse(raw: &str, lexicons: &Lexicons) -> Result<Self, TagError> {
        let mut words: Vec<&str> = raw.split_whitespace().collect();
        if words.is_empty() {
            return Err(TagError::Empty);
        }
        let title = if words.len() > 1 && lexicons.titles.is_title(words[0]) {
            Some(words.remove(0).to_string())
        } else {
            None
        };
        let surname = if words.len() >= 2 {
            words.pop().map(str::to_string)
        } else {
            None
        };
        let given_names: Vec<String> = words.into_iter().map(str::to_string).collect();

        let title_gender = title
            .as_deref()
            .map_or(Gender::Unknown, |t| lexicons.titles.title_gender(t));
        let gender = if title_gender.is_known() {
            title_gender
        } else {
            given_names
                .first()
                .map_or(Gender::Unknown, |g| lexicons.genders.gender_of_first_name(g))
        };

        let full_name = title
            .iter()
            .chain(given_names.iter())
            .chain(surname.iter())
            .map(String::as_str)
            .collect::<Vec<_>>()
            .join(" ");
        Ok(CharacterTag {
            full_name,
            title,
            given_names,
            surname,
            gender,
        })
    }

    /// Given names and surname, titles excluded.
    pub fn name_parts(&self) -> impl Iterator<Item = &str> {
        self.given_names
            .iter()
            .chain(self.surname.iter())
            .map(String::as_str)
    }

    pub fn render(&self) -> &str {
        &self.full_name
    }
}

/// The ordered tag list for one novel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TagList {
    pub novel_id: String,
    tags: Vec<CharacterTag>,
}

impl TagList {
    pub fn new(novel_id: impl Into<String>, tags: Vec<CharacterTag>) -> Result<Self, TagError> {
        let mut seen = HashSet::new();
        for t in &tags {
            if !seen.insert(t.full_name.as_str()) {
                return Err(TagError::Duplicate(t.full_name.clone()));
            }
        }
        Ok(TagList {
            novel_id: novel_id.into(),
            tags,
        })
    }

    pub fn from_names<S: AsRef<str>>(
        novel_id: impl Into<String>,
        names: &[S],
        lexicons: &Lexicons,
    ) -> Result<Self, TagError> {
        let tags = names
            .iter()
            .map(|n| CharacterTag::parse(n.as_ref(), lexicons))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(novel_id, tags)
    }

    /// One full name per line; blank lines and `#` comments are skipped.
    pub fn parse(novel_id: impl Into<String>, src: &str, lexicons: &Lexicons) -> Result<Self, TagError> {
        let names: Vec<&str> = src
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect();
        Self::from_names(novel_id, &names, lexicons)
    }

    /// Reads `<dir>/<novel_id>.txt`-style files; the id is the file stem.
    pub fn load(path: &Path, lexicons: &Lexicons) -> Result<Self, TagError> {
        let src = fs::read_to_string(path).map_err(|e| TagError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Self::parse(id, &src, lexicons)
    }

    pub fn tags(&self) -> &[CharacterTag] {
        &self.tags
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn get(&self, full_name: &str) -> Option<&CharacterTag> {
        self.tags.iter().find(|t| t.full_name == full_name)
    }

    pub fn to_text(&self) -> String {
        self.tags.iter().map(|t| format!("{}\n", t.full_name)).collect()
    }
}

/// How many tags share a given name or surname with another tag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharedPartStats {
    pub novel_id: String,
    pub tag_count: usize,
    pub sharing_count: usize,
    pub sharing_percent: u32,
}

/// Counts tags whose given names or surname (case-insensitive, titles
/// excluded) also occur in some other tag.
pub fn shared_part_stats(tags: &TagList) -> SharedPartStats {
    let parts: Vec<HashSet<String>> = tags
        .tags
        .iter()
        .map(|t| t.name_parts().map(str::to_lowercase).collect())
        .collect();
    // part -> number of distinct tags using it
    let mut owners: HashMap<&str, usize> = HashMap::new();
    for set in &parts {
        for p in set {
            *owners.entry(p.as_str()).or_default() += 1;
        }
    }
    let sharing_count = parts
        .iter()
        .filter(|set| set.iter().any(|p| owners[p.as_str()] > 1))
        .count();
    let n = tags.len();
    let sharing_percent = if n == 0 {
        0
    } else {
        ((200 * sharing_count + n) / (2 * n)) as u32
    };
    SharedPartStats {
        novel_id: tags.novel_id.clone(),
        tag_count: n,
        sharing_count,
        sharing_percent,
    }
}
