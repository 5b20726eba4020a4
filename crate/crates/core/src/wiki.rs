//! Character lists from encyclopedia articles.
//!
//! [`extract_characters`] reads either MediaWiki wikitext or rendered HTML,
//! finds the first section headed "Characters", "Main characters" or "Cast
//! of characters" and returns the leading name of each top-level list item.
//! [`fetch_article`] downloads the wikitext of an English Wikipedia article.

use std::path::Path;
use std::sync::{Mutex, OnceLock};
use std::time::{Duration, Instant};

use regex::Regex;

use crate::error::WikiError;

const SECTION_HEADINGS: &[&str] = &["characters", "main characters", "cast of characters"];

pub const USER_AGENT: &str = concat!(
    "castlink/",
    env!("CARGO_PKG_VERSION"),
    " (character list extraction; https://github.com/castlink/castlink)"
);

const ENDPOINT: &str = "https://en.wikipedia.org/w/index.php";
const MIN_INTERVAL: Duration = Duration::from_secs(1);

fn is_character_heading(heading: &str) -> bool {
    let h = heading.trim().trim_end_matches(':').trim();
    SECTION_HEADINGS.iter().any(|w| h.eq_ignore_ascii_case(w))
}

/// Names listed in the article's character section, in document order and
/// without duplicates.
pub fn extract_characters(source: &str) -> Result<Vec<String>, WikiError> {
    let (heading, items) = if looks_like_html(source) {
        html_section(source)?
    } else {
        wikitext_section(source)?
    };
    let mut names: Vec<String> = Vec::new();
    for item in items {
        let name = leading_name(&item);
        if !name.is_empty() && !names.contains(&name) {
            names.push(name);
        }
    }
    if names.is_empty() {
        return Err(WikiError::EmptySection(heading));
    }
    Ok(names)
}

fn looks_like_html(source: &str) -> bool {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?i)<h[1-6][\s>]").unwrap()).is_match(source)
}

/// Text before the first colon, comma, parenthesis or dash. A plain hyphen
/// only counts with a space on either side so `Jean-Luc` survives.
fn leading_name(item: &str) -> String {
    let mut end = item.len();
    for (i, c) in item.char_indices() {
        let cut = match c {
            ':' | ',' | '(' | ';' | '\u{2013}' | '\u{2014}' | '\u{2212}' => true,
            '-' => {
                let before = item[..i].chars().next_back();
                let after = item[i + 1..].chars().next();
                before.is_some_and(char::is_whitespace) || after.is_some_and(char::is_whitespace)
            }
            _ => false,
        };
        if cut {
            end = i;
            break;
        }
    }
    item[..end].split_whitespace().collect::<Vec<_>>().join(" ")
}

fn wikitext_section(source: &str) -> Result<(String, Vec<String>), WikiError> {
    static HEADING: OnceLock<Regex> = OnceLock::new();
    let heading_re = HEADING.get_or_init(|| Regex::new(r"^(={1,6})\s*(.*?)\s*(={1,6})\s*$").unwrap());
    let mut section: Option<(usize, String)> = None;
    let mut items = Vec::new();
    for line in source.lines() {
        if let Some(caps) = heading_re.captures(line) {
            let level = caps[1].len().min(caps[3].len());
            let title = strip_wikitext(&caps[2]);
            match &section {
                Some((open, _)) if level <= *open => break,
                Some(_) => continue,
                None if is_character_heading(&title) => section = Some((level, title)),
                None => {}
            }
            continue;
        }
        if section.is_none() {
            continue;
        }
        let line = line.trim_start();
        let mut markers = line.chars().take_while(|c| matches!(c, '*' | '#' | ';' | ':'));
        let Some(first) = markers.next() else { continue };
        // top-level bullets and definition terms only
        if markers.next().is_some() || first == ':' {
            continue;
        }
        let body = strip_wikitext(&line[1..]);
        items.push(body);
    }
    match section {
        Some((_, title)) => Ok((title, items)),
        None => Err(WikiError::NoCharacterSection),
    }
}

fn strip_wikitext(s: &str) -> String {
    static PATTERNS: OnceLock<[(Regex, &str); 6]> = OnceLock::new();
    let patterns = PATTERNS.get_or_init(|| {
        [
            (Regex::new(r"(?s)<ref[^>]*/>|<ref[^>]*>.*?</ref>").unwrap(), ""),
            (Regex::new(r"\{\{[^{}]*\}\}").unwrap(), ""),
            (Regex::new(r"\[\[(?:[^\]|]*\|)?([^\]]*)\]\]").unwrap(), "$1"),
            (Regex::new(r"\[https?://\S+\s*([^\]]*)\]").unwrap(), "$1"),
            (Regex::new(r"'{2,}").unwrap(), ""),
            (Regex::new(r"<[^>]+>").unwrap(), ""),
        ]
    });
    let mut out = s.to_string();
    for (re, rep) in patterns {
        out = re.replace_all(&out, *rep).into_owned();
    }
    decode_entities(&out)
}

fn decode_entities(s: &str) -> String {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = RE.get_or_init(|| Regex::new(r"&(#[0-9]+|#[xX][0-9a-fA-F]+|[a-zA-Z]+);").unwrap());
    re.replace_all(s, |caps: &regex::Captures| {
        let body = &caps[1];
        let decoded = if let Some(hex) = body.strip_prefix("#x").or_else(|| body.strip_prefix("#X")) {
            u32::from_str_radix(hex, 16).ok().and_then(char::from_u32)
        } else if let Some(dec) = body.strip_prefix('#') {
            dec.parse().ok().and_then(char::from_u32)
        } else {
            match body {
                "amp" => Some('&'),
                "lt" => Some('<'),
                "gt" => Some('>'),
                "quot" => Some('"'),
                "apos" => Some('\''),
                "nbsp" => Some(' '),
                "ndash" => Some('\u{2013}'),
                "mdash" => Some('\u{2014}'),
                _ => None,
            }
        };
        decoded.map_or_else(|| caps[0].to_string(), String::from)
    })
    .into_owned()
}

fn html_section(source: &str) -> Result<(String, Vec<String>), WikiError> {
    static TAG: OnceLock<Regex> = OnceLock::new();
    let tag_re = TAG.get_or_init(|| Regex::new(r"(?s)<(/?)([a-zA-Z][a-zA-Z0-9]*)\b[^>]*?(/?)>").unwrap());

    let mut section: Option<(usize, String)> = None;
    let mut heading: Option<(usize, usize)> = None; // (level, text start)
    let mut list_depth = 0usize;
    // byte where the current top-level item's own text starts, or ends
    let mut item: Option<(usize, Option<usize>)> = None;
    let mut items = Vec::new();

    for caps in tag_re.captures_iter(source) {
        let m = caps.get(0).unwrap();
        let closing = &caps[1] == "/";
        let name = caps[2].to_ascii_lowercase();
        let level = match name.as_bytes() {
            [b'h', d @ b'1'..=b'6'] => Some((d - b'0') as usize),
            _ => None,
        };
        if let Some(level) = level {
            if !closing {
                if let Some((open, _)) = &section {
                    if level <= *open {
                        break;
                    }
                }
                heading = Some((level, m.end()));
            } else if let Some((level, start)) = heading.take() {
                let text = html_text(&source[start..m.start()]);
                if section.is_none() && is_character_heading(&text) {
                    section = Some((level, text));
                }
            }
            continue;
        }
        if section.is_none() {
            continue;
        }
        match (name.as_str(), closing) {
            ("ul" | "ol" | "dl", false) => {
                // a nested list ends the parent item's own text
                if let Some((_, end @ None)) = &mut item {
                    *end = Some(m.start());
                }
                list_depth += 1;
            }
            ("ul" | "ol" | "dl", true) => list_depth = list_depth.saturating_sub(1),
            ("li" | "dt", false) if list_depth == 1 => item = Some((m.end(), None)),
            ("li" | "dt", true) if list_depth == 1 => {
                if let Some((start, end)) = item.take() {
                    items.push(html_text(&source[start..end.unwrap_or(m.start())]));
                }
            }
            _ => {}
        }
    }
    match section {
        Some((_, title)) => Ok((title, items)),
        None => Err(WikiError::NoCharacterSection),
    }
}

fn html_text(fragment: &str) -> String {
    static RE: OnceLock<[Regex; 2]> = OnceLock::new();
    let [edit, tags] = RE.get_or_init(|| {
        [
            Regex::new(r#"(?s)<span class="mw-editsection".*?</span>\s*</span>|<sup[^>]*>.*?</sup>"#).unwrap(),
            Regex::new(r"<[^>]+>").unwrap(),
        ]
    });
    let without_refs = edit.replace_all(fragment, "");
    let plain = tags.replace_all(&without_refs, "");
    decode_entities(&plain).split_whitespace().collect::<Vec<_>>().join(" ")
}

fn throttle() {
    static LAST: Mutex<Option<Instant>> = Mutex::new(None);
    let mut last = LAST.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(prev) = *last {
        let elapsed = prev.elapsed();
        if elapsed < MIN_INTERVAL {
            std::thread::sleep(MIN_INTERVAL - elapsed);
        }
    }
    *last = Some(Instant::now());
}

/// Raw wikitext of an English Wikipedia article. Requests from one process
/// are spaced at least a second apart.
pub fn fetch_article(title: &str) -> Result<String, WikiError> {
    let title = title.trim();
    if title.is_empty() {
        return Err(WikiError::EmptyTitle);
    }
    throttle();
    let result = ureq::get(ENDPOINT)
        .query("title", title.replace(' ', "_"))
        .query("action", "raw")
        .header("User-Agent", USER_AGENT)
        .call();
    let mut response = match result {
        Ok(r) => r,
        Err(ureq::Error::StatusCode(404)) => {
            return Err(WikiError::NotFound {
                title: title.to_string(),
                status: 404,
            })
        }
        Err(ureq::Error::StatusCode(status)) => {
            return Err(WikiError::Http {
                title: title.to_string(),
                status,
            })
        }
        Err(e) => {
            return Err(WikiError::Transport {
                title: title.to_string(),
                message: e.to_string(),
            })
        }
    };
    response
        .body_mut()
        .read_to_string()
        .map_err(|e| WikiError::Transport {
            title: title.to_string(),
            message: e.to_string(),
        })
}

/// Article source saved to disk, for offline runs.
pub fn read_article(path: &Path) -> Result<String, WikiError> {
    std::fs::read_to_string(path).map_err(|source| WikiError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const WIKITEXT: &str = "\
'''Emma''' is a novel.<ref>{{cite book|title=x}}</ref>

== Plot ==
Emma meddles.

== Main characters ==
{{Main|List of characters}}
* '''[[Emma Woodhouse]]''' – handsome, clever and rich
** a nested remark: not a name
* [[George Knightley|Mr. George Knightley]]: a neighbour
* Harriet Smith, a parlour boarder
;Frank Churchill
: son of Mr. Weston
* Jane Fairfax (a niece) – accomplished
* Emma Woodhouse – listed twice
=== Minor ===
* Mrs. Bates - a widow
== Reception ==
* Not a character
";

    #[test]
    fn wikitext_items_in_order() {
        let names = extract_characters(WIKITEXT).unwrap();
        assert_eq!(
            names,
            [
                "Emma Woodhouse",
                "Mr. George Knightley",
                "Harriet Smith",
                "Frank Churchill",
                "Jane Fairfax",
                "Mrs. Bates"
            ]
        );
    }

    #[test]
    fn leading_phrase() {
        assert_eq!(leading_name("Elizabeth Bennet \u{2013} the protagonist"), "Elizabeth Bennet");
        assert_eq!(leading_name("Jean-Luc Picard - captain"), "Jean-Luc Picard");
        assert_eq!(leading_name("  Mr.  Darcy, a gentleman"), "Mr. Darcy");
    }

    #[test]
    fn missing_and_empty_sections() {
        assert!(matches!(
            extract_characters("== Plot ==\n* Elizabeth Bennet\n"),
            Err(WikiError::NoCharacterSection)
        ));
        assert!(matches!(
            extract_characters("== Characters ==\nNone are listed.\n== Plot ==\n"),
            Err(WikiError::EmptySection(_))
        ));
        assert_eq!(WikiError::NoCharacterSection.to_string(), "no character section found");
    }

    #[test]
    fn html_section() {
        let html = r#"<html><body>
<div class="mw-heading mw-heading2"><h2 id="Plot">Plot</h2></div><p>Text.</p>
<ul><li>Not in section</li></ul>
<div class="mw-heading mw-heading2"><h2 id="Cast_of_characters">Cast of characters</h2><span class="mw-editsection"><span>[</span>edit<span>]</span></span></div>
<ul>
<li><a href="/wiki/X"><b>Elizabeth Bennet</b></a> &#8211; the second daughter<sup class="reference">[1]</sup></li>
<li>Fitzwilliam Darcy &amp; co: a gentleman
<ul><li>Should not appear</li></ul></li>
<li>Jane Bennet, the eldest</li>
</ul>
<h3>Family</h3>
<ul><li>Mr. Bennet &ndash; father</li></ul>
<h2>Reception</h2>
<ul><li>Critic</li></ul>
</body></html>"#;
        assert_eq!(
            extract_characters(html).unwrap(),
            ["Elizabeth Bennet", "Fitzwilliam Darcy & co", "Jane Bennet", "Mr. Bennet"]
        );
    }

    #[test]
    fn offline_file() {
        let dir = std::env::temp_dir().join(format!("castlink-wiki-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("emma.wiki");
        std::fs::write(&path, WIKITEXT).unwrap();
        assert_eq!(read_article(&path).unwrap(), WIKITEXT);
        std::fs::remove_dir_all(&dir).unwrap();
        assert!(matches!(read_article(&dir.join("missing")), Err(WikiError::Io { .. })));
    }

    #[test]
    fn empty_title() {
        assert!(matches!(fetch_article("  "), Err(WikiError::EmptyTitle)));
    }

    #[test]
    fn live_fetch() {
        if std::env::var_os("CASTLINK_NETWORK_TESTS").is_none() {
            eprintln!("skipping live fetch: CASTLINK_NETWORK_TESTS not set");
            return;
        }
        let src = fetch_article("Pride and Prejudice").unwrap();
        assert!(!src.is_empty());
        assert!(matches!(
            fetch_article("Castlink nonexistent article 8d1f"),
            Err(WikiError::NotFound { status: 404, .. })
        ));
    }
}
