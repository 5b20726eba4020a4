//! Name lexicons: diminutives, first-name genders, personal titles and the
//! pool of common first names used for augmentation.
//!
//! All files are UTF-8; blank lines and lines starting with `#` are ignored.
//! Lookups are case-insensitive.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::LexiconError;

const BUNDLED_DIMINUTIVES: &str = include_str!("../data/diminutives.csv");
const BUNDLED_GENDERS: &str = include_str!("../data/genders.tsv");
const BUNDLED_TITLES: &str = include_str!("../data/titles.tsv");
const BUNDLED_COMMON_NAMES: &str = include_str!("../data/common_names.tsv");

pub const DIMINUTIVES_FILE: &str = "diminutives.csv";
pub const GENDERS_FILE: &str = "genders.tsv";
pub const TITLES_FILE: &str = "titles.tsv";
pub const COMMON_NAMES_FILE: &str = "common_names.tsv";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gender {
    Female,
    Male,
    Unknown,
}

impl Gender {
    pub fn is_known(self) -> bool {
        self != Gender::Unknown
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Gender::Female => "female",
            Gender::Male => "male",
            Gender::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Gender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Gender {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "female" | "f" => Ok(Gender::Female),
            "male" | "m" => Ok(Gender::Male),
            "unknown" | "" => Ok(Gender::Unknown),
            other => Err(format!("unknown gender `{other}`")),
        }
    }
}

/// Yields `(line_number, line)` for every meaningful line.
fn data_lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
}

fn parse_gender(file: &str, line: usize, raw: &str) -> Result<Gender, LexiconError> {
    raw.parse().map_err(|message| LexiconError::Parse {
        file: file.to_string(),
        line,
        message,
    })
}

fn read_file(path: &Path) -> Result<String, LexiconError> {
    fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Nickname -> canonical first names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiminutiveLexicon {
    entries: HashMap<String, Vec<String>>,
}

impl DiminutiveLexicon {
    /// Parses `nickname,canonical1,canonical2,...` lines.
    pub fn parse(src: &str) -> Result<Self, LexiconError> {
        let mut entries: HashMap<String, Vec<String>> = HashMap::new();
        for (line, text) in data_lines(src) {
            let mut fields = text.split(',').map(str::trim);
            let nick = fields.next().unwrap_or_default().to_lowercase();
            if nick.is_empty() {
                return Err(LexiconError::Parse {
                    file: DIMINUTIVES_FILE.into(),
                    line,
                    message: "empty nickname".into(),
                });
            }
            let canon = entries.entry(nick).or_default();
            for name in fields.filter(|f| !f.is_empty()) {
                if !canon.iter().any(|c| c == name) {
                    canon.push(name.to_string());
                }
            }
        }
        Ok(DiminutiveLexicon { entries })
    }

    pub fn load(path: &Path) -> Result<Self, LexiconError> {
        Self::parse(&read_file(path)?)
    }

    pub fn bundled() -> Self {
        Self::parse(BUNDLED_DIMINUTIVES).expect("bundled diminutives are well-formed")
    }

    /// Canonical names for a nickname, in file order. Empty on a miss.
    pub fn canonical_names_for(&self, nick: &str) -> &[String] {
        self.entries
            .get(&nick.trim().to_lowercase())
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn contains(&self, nick: &str) -> bool {
        !self.canonical_names_for(nick).is_empty()
    }

    /// Number of distinct name forms (nicknames and canonical names).
    pub fn distinct_forms(&self) -> usize {
        let mut forms: std::collections::HashSet<String> = self.entries.keys().cloned().collect();
        for canon in self.entries.values() {
            forms.extend(canon.iter().map(|c| c.to_lowercase()));
        }
        forms.len()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut keys: Vec<&String> = self.entries.keys().collect();
        keys.sort();
        let mut out = String::new();
        for k in keys {
            out.push_str(k);
            for c in &self.entries[k] {
                out.push(',');
                out.push_str(c);
            }
            out.push('\n');
        }
        out
    }
}

/// First name -> gender.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GenderLexicon {
    entries: HashMap<String, Gender>,
}

impl GenderLexicon {
    pub fn parse(src: &str) -> Result<Self, LexiconError> {
        let mut entries = HashMap::new();
        for (line, text) in data_lines(src) {
            let (name, gender) = text.split_once('\t').ok_or_else(|| LexiconError::Parse {
                file: GENDERS_FILE.into(),
                line,
                message: "expected `name<TAB>gender`".into(),
            })?;
            let name = name.trim().to_lowercase();
            if name.is_empty() {
                continue;
            }
            entries.insert(name, parse_gender(GENDERS_FILE, line, gender)?);
        }
        Ok(GenderLexicon { entries })
    }

    pub fn load(path: &Path) -> Result<Self, LexiconError> {
        Self::parse(&read_file(path)?)
    }

    pub fn bundled() -> Self {
        Self::parse(BUNDLED_GENDERS).expect("bundled genders are well-formed")
    }

    pub fn gender_of_first_name(&self, name: &str) -> Gender {
        self.entries
            .get(&name.trim().to_lowercase())
            .copied()
            .unwrap_or(Gender::Unknown)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(&name.trim().to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_tsv(&self) -> String {
        let mut rows: Vec<(&String, &Gender)> = self.entries.iter().collect();
        rows.sort();
        rows.into_iter()
            .map(|(n, g)| format!("{n}\t{g}\n"))
            .collect()
    }
}

fn title_key(title: &str) -> String {
    title.trim().trim_end_matches('.').to_lowercase()
}

/// Personal titles and the gender each one implies.
///
/// Matching ignores case and an optional trailing period, so `Mr` and `Mr.`
/// are the same title.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TitleLexicon {
    // (display form as written in the file, gender), keyed by normalized form
    entries: HashMap<String, (String, Gender)>,
}

impl TitleLexicon {
    pub fn parse(src: &str) -> Result<Self, LexiconError> {
        let mut entries = HashMap::new();
        for (line, text) in data_lines(src) {
            let (title, gender) = match text.split_once('\t') {
                Some((t, g)) => (t.trim(), parse_gender(TITLES_FILE, line, g)?),
                None => (text.trim(), Gender::Unknown),
            };
            let key = title_key(title);
            if key.is_empty() {
                return Err(LexiconError::Parse {
                    file: TITLES_FILE.into(),
                    line,
                    message: "empty title".into(),
                });
            }
            entries.insert(key, (title.to_string(), gender));
        }
        Ok(TitleLexicon { entries })
    }

    pub fn load(path: &Path) -> Result<Self, LexiconError> {
        Self::parse(&read_file(path)?)
    }

    pub fn bundled() -> Self {
        Self::parse(BUNDLED_TITLES).expect("bundled titles are well-formed")
    }

    pub fn is_title(&self, word: &str) -> bool {
        self.entries.contains_key(&title_key(word))
    }

    pub fn title_gender(&self, title: &str) -> Gender {
        self.entries
            .get(&title_key(title))
            .map(|(_, g)| *g)
            .unwrap_or(Gender::Unknown)
    }

    pub fn to_tsv(&self) -> String {
        let mut rows: Vec<&(String, Gender)> = self.entries.values().collect();
        rows.sort();
        rows.into_iter()
            .map(|(t, g)| format!("{t}\t{g}\n"))
            .collect()
    }
}

impl Default for TitleLexicon {
    fn default() -> Self {
        Self::bundled()
    }
}

/// Gender-partitioned pool of common first names in their base forms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CommonNamesList {
    female: Vec<String>,
    male: Vec<String>,
}

impl CommonNamesList {
    pub fn new(female: Vec<String>, male: Vec<String>) -> Result<Self, LexiconError> {
        for (part, names) in [("female", &female), ("male", &male)] {
            let mut seen = std::collections::HashSet::new();
            for n in names {
                if !seen.insert(n.to_lowercase()) {
                    return Err(LexiconError::Duplicate {
                        file: COMMON_NAMES_FILE.into(),
                        name: format!("{n} ({part})"),
                    });
                }
            }
        }
        Ok(CommonNamesList { female, male })
    }

    pub fn parse(src: &str) -> Result<Self, LexiconError> {
        let mut female = Vec::new();
        let mut male = Vec::new();
        for (line, text) in data_lines(src) {
            let (name, gender) = text.split_once('\t').ok_or_else(|| LexiconError::Parse {
                file: COMMON_NAMES_FILE.into(),
                line,
                message: "expected `name<TAB>gender`".into(),
            })?;
            let name = name.trim().to_string();
            match parse_gender(COMMON_NAMES_FILE, line, gender)? {
                Gender::Female => female.push(name),
                Gender::Male => male.push(name),
                Gender::Unknown => {
                    return Err(LexiconError::Parse {
                        file: COMMON_NAMES_FILE.into(),
                        line,
                        message: "common names must be female or male".into(),
                    })
                }
            }
        }
        Self::new(female, male)
    }

    pub fn load(path: &Path) -> Result<Self, LexiconError> {
        Self::parse(&read_file(path)?)
    }

    pub fn bundled() -> Self {
        Self::parse(BUNDLED_COMMON_NAMES).expect("bundled common names are well-formed")
    }

    pub fn female(&self) -> &[String] {
        &self.female
    }

    pub fn male(&self) -> &[String] {
        &self.male
    }

    pub fn partition(&self, gender: Gender) -> Vec<&String> {
        match gender {
            Gender::Female => self.female.iter().collect(),
            Gender::Male => self.male.iter().collect(),
            Gender::Unknown => self.all().collect(),
        }
    }

    /// Female names first, then male names.
    pub fn all(&self) -> impl Iterator<Item = &String> {
        self.female.iter().chain(self.male.iter())
    }

    pub fn contains(&self, name: &str) -> bool {
        let name = name.trim();
        self.all().any(|n| n.eq_ignore_ascii_case(name))
    }

    pub fn len(&self) -> usize {
        self.female.len() + self.male.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_tsv(&self) -> String {
        let f = self.female.iter().map(|n| format!("{n}\tfemale\n"));
        let m = self.male.iter().map(|n| format!("{n}\tmale\n"));
        f.chain(m).collect()
    }
}

/// The four lexicons the matcher, recognizer and augmenter consult.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicons {
    pub diminutives: DiminutiveLexicon,
    pub genders: GenderLexicon,
    pub titles: TitleLexicon,
    pub common_names: CommonNamesList,
}

impl Lexicons {
    pub fn bundled() -> Self {
        Lexicons {
            diminutives: DiminutiveLexicon::bundled(),
            genders: GenderLexicon::bundled(),
            titles: TitleLexicon::bundled(),
            common_names: CommonNamesList::bundled(),
        }
    }

    /// Loads each lexicon file present in `dir`; missing files fall back to
    /// the bundled data.
    pub fn from_dir(dir: &Path) -> Result<Self, LexiconError> {
        let mut lex = Self::bundled();
        let path = dir.join(DIMINUTIVES_FILE);
        if path.exists() {
            lex.diminutives = DiminutiveLexicon::load(&path)?;
        }
        let path = dir.join(GENDERS_FILE);
        if path.exists() {
            lex.genders = GenderLexicon::load(&path)?;
        }
        let path = dir.join(TITLES_FILE);
        if path.exists() {
            lex.titles = TitleLexicon::load(&path)?;
        }
        let path = dir.join(COMMON_NAMES_FILE);
        if path.exists() {
            lex.common_names = CommonNamesList::load(&path)?;
        }
        Ok(lex)
    }

    pub fn is_first_name(&self, word: &str) -> bool {
        self.diminutives.contains(word) || self.common_names.contains(word)
    }
}

impl Default for Lexicons {
    fn default() -> Self {
        Self::bundled()
    }
}
