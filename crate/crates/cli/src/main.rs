mod config;

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use castlink::annotate::{annotate_spans, annotate_text, render_inline};
use castlink::augment::{build_entity_sentences, read_jsonl, write_jsonl, NameInjector};
use castlink::eval::{evaluate, mention_form_counts, title_prefix_counts, EvalMode, EvalOptions, MetricsReport};
use castlink::matcher::strip_leading_title;
use castlink::recognizer::StandoffInput;
use castlink::tags::shared_part_stats;
use castlink::wiki::{extract_characters, fetch_article, read_article};
use castlink::{AnnotatedDocument, CharacterTag, Document, Lexicons, Matcher, MatcherConfig, TagList};

#[derive(Parser)]
#[command(name = "castlink", version, about = "Link person mentions in novels to character names")]
struct Cli {
    /// Directory with lexicon files replacing the bundled ones
    /// (diminutives.csv, genders.tsv, titles.tsv, common_names.tsv)
    #[arg(long, global = true, value_name = "DIR")]
    lexicons: Option<PathBuf>,

    /// `key = value` file with default flag values; flags given on the
    /// command line win
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract the character list from an encyclopedia article
    Characters(CharactersArgs),
    /// Recognize and link person mentions in a text or a directory of texts
    Annotate(AnnotateArgs),
    /// Show how a single entity is matched
    Match(MatchArgs),
    /// Replace annotated names with common first names
    Augment(AugmentArgs),
    /// Collect sentences mentioning the tagged characters as training records
    ExtractTraining(ExtractArgs),
    /// Score predicted annotations against a gold standard
    Evaluate(EvaluateArgs),
    /// Corpus statistics
    #[command(subcommand)]
    Stats(StatsCommand),
}

#[derive(Args)]
struct CharactersArgs {
    /// Article title
    #[arg(long, required_unless_present = "offline")]
    title: Option<String>,
    /// Read the article source from a file instead of the network
    #[arg(long, value_name = "FILE")]
    offline: Option<PathBuf>,
    #[arg(short = 'o', long = "output", value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Inline,
    Standoff,
}

#[derive(Args)]
struct AnnotateArgs {
    /// Text file, or a directory of `.txt` files
    #[arg(long, value_name = "PATH")]
    text: PathBuf,
    /// Tag list, or a directory holding `<name>.txt` for each text
    #[arg(long, value_name = "PATH")]
    tags: PathBuf,
    /// External person spans (standoff JSON), or a directory of
    /// `<name>.json`; without it the built-in recognizer is used
    #[arg(long, value_name = "PATH")]
    spans: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Standoff)]
    format: Format,
    /// Minimum partial similarity (percent) for a candidate tag
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=100))]
    threshold: Option<u8>,
    /// Files processed in parallel
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,
    /// Output file, or output directory when annotating a directory
    #[arg(short = 'o', long = "output", value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MatchArgs {
    #[arg(long)]
    entity: String,
    #[arg(long, value_name = "FILE")]
    tags: PathBuf,
    /// Token before the entity (`Mr.`, `the`, ...)
    #[arg(long)]
    prefix: Option<String>,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=100))]
    threshold: Option<u8>,
}

#[derive(Args)]
struct AugmentArgs {
    /// Training records (JSON lines)
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Replace names by common names of the same gender when it is known
    #[arg(long)]
    gender_consistent: bool,
    #[arg(short = 'o', long = "output", value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ExtractArgs {
    #[arg(long, value_name = "FILE")]
    text: PathBuf,
    /// Tag list; full names, titled surnames (with and without a period
    /// after the title) and first names are searched
    #[arg(long, value_name = "FILE")]
    tags: PathBuf,
    #[arg(short = 'o', long = "output", value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    PersonOnly,
    FullNames,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Table,
    Json,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Gold standoff file, or a directory of them
    #[arg(long, value_name = "PATH")]
    gold: PathBuf,
    /// Predicted standoff file, or a directory with a `<name>.json` per
    /// gold file (`<name>.<flavor>.json` gold names are accepted)
    #[arg(long, value_name = "PATH")]
    pred: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::FullNames)]
    mode: ModeArg,
    /// Score family mentions (`the Bennets`) as plain persons
    #[arg(long)]
    family_as_person: bool,
    #[arg(long, value_enum, default_value_t = ReportFormat::Table)]
    report: ReportFormat,
    #[arg(short = 'o', long = "output", value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum StatsCommand {
    /// Tags sharing a name part with another tag
    Shared {
        /// Tag list files or directories of them
        #[arg(long, required = true, num_args = 1..)]
        tags: Vec<PathBuf>,
    },
    /// Surface forms linked to one character
    Forms {
        /// Annotated document (standoff JSON)
        #[arg(long, value_name = "FILE")]
        annotated: PathBuf,
        /// Full name of the character
        #[arg(long)]
        tag: String,
    },
    /// Occurrences of a surname by preceding title
    Titles {
        #[arg(long, value_name = "FILE")]
        text: PathBuf,
        #[arg(long)]
        surname: String,
    },
}

/// Bad invocation discovered after argument parsing.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(message: impl Into<String>) -> anyhow::Error {
    UsageError(message.into()).into()
}

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;

fn main() -> ExitCode {
    let cli = match parse_cli(std::env::args_os().collect()) {
        Ok(cli) => cli,
        Err(code) => return code,
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::from(EXIT_DATA)
            }
        }
    }
}

fn parse_cli(mut args: Vec<OsString>) -> Result<Cli, ExitCode> {
    let clap_exit = |e: clap::Error| {
        let _ = e.print();
        if e.use_stderr() {
            ExitCode::from(EXIT_USAGE)
        } else {
            ExitCode::SUCCESS
        }
    };
    let root = Cli::command();
    let matches = root.clone().try_get_matches_from(&args).map_err(clap_exit)?;
    if let Some(path) = matches.get_one::<PathBuf>("config") {
        let entries = config::load(path).map_err(|e| {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_DATA)
        })?;
        let extra = config::extra_args(&root, &matches, &entries).map_err(|e| {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        })?;
        args.extend(extra);
    }
    let matches = root.try_get_matches_from(&args).map_err(clap_exit)?;
    Cli::from_arg_matches(&matches).map_err(clap_exit)
}

fn run(cli: Cli) -> Result<()> {
    let lexicons = match &cli.lexicons {
        Some(dir) => Lexicons::from_dir(dir).with_context(|| format!("loading lexicons from {}", dir.display()))?,
        None => Lexicons::bundled(),
    };
    match cli.command {
        Command::Characters(a) => characters(a),
        Command::Annotate(a) => annotate_cmd(a, &lexicons),
        Command::Match(a) => match_cmd(a, &lexicons),
        Command::Augment(a) => augment(a, &lexicons),
        Command::ExtractTraining(a) => extract_training(a, &lexicons),
        Command::Evaluate(a) => evaluate_cmd(a),
        Command::Stats(s) => stats(s, &lexicons),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Writes through a temporary file in the same directory, so readers never
/// see a partial file.
fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| anyhow!("{} is not a file path", path.display()))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = fs::write(&tmp, content).and_then(|()| fs::rename(&tmp, path));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.with_context(|| format!("cannot write {}", path.display()))
}

fn emit(output: Option<&Path>, content: &str) -> Result<()> {
    match output {
        Some(path) => write_atomic(path, content),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn matcher_config(threshold: Option<u8>) -> Result<MatcherConfig> {
    match threshold {
        Some(t) => MatcherConfig::new(t).map_err(|e| usage(e.to_string())),
        None => Ok(MatcherConfig::default()),
    }
}

fn characters(a: CharactersArgs) -> Result<()> {
    let source = match (&a.offline, &a.title) {
        (Some(path), _) => read_article(path)?,
        (None, Some(title)) => fetch_article(title)?,
        (None, None) => return Err(usage("either --title or --offline is required")),
    };
    let names = extract_characters(&source)?;
    let mut out = String::new();
    for n in names {
        out.push_str(&n);
        out.push('\n');
    }
    emit(a.output.as_deref(), &out)
}

fn annotate_one(
    text_path: &Path,
    tags_path: &Path,
    spans_path: Option<&Path>,
    format: Format,
    config: MatcherConfig,
    lexicons: &Lexicons,
) -> Result<String> {
    let tags = TagList::load(tags_path, lexicons)?;
    let text = read(text_path)?;
    let matcher = Matcher::new(&tags, lexicons, config);
    let ad = match spans_path {
        Some(p) => {
            let input = StandoffInput::from_json(&read(p)?).with_context(|| format!("in {}", p.display()))?;
            annotate_spans(&text, &matcher, &input).with_context(|| format!("spans {}", p.display()))?
        }
        None => annotate_text(&text, &matcher)?,
    };
    Ok(match format {
        Format::Standoff => ad.to_standoff(),
        Format::Inline => render_inline(&ad),
    })
}

fn text_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("cannot list {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "txt"))
        .collect();
    files.sort();
    Ok(files)
}

fn annotate_cmd(a: AnnotateArgs, lexicons: &Lexicons) -> Result<()> {
    let config = matcher_config(a.threshold)?;
    if !a.text.is_dir() {
        if a.tags.is_dir() || a.spans.as_deref().is_some_and(Path::is_dir) {
            return Err(usage("--tags and --spans must be files when --text is a file"));
        }
        let out = annotate_one(&a.text, &a.tags, a.spans.as_deref(), a.format, config, lexicons)?;
        return emit(a.output.as_deref(), &out);
    }

    let out_dir = a
        .output
        .as_deref()
        .ok_or_else(|| usage("annotating a directory needs -o <output directory>"))?;
    fs::create_dir_all(out_dir).with_context(|| format!("cannot create {}", out_dir.display()))?;
    let files = text_files(&a.text)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs.map_or(0, usize::from))
        .build()?;
    let failures: Vec<String> = pool.install(|| {
        files
            .par_iter()
            .filter_map(|file| {
                let stem = file.file_stem().unwrap_or_default().to_string_lossy().into_owned();
                let tags = if a.tags.is_dir() {
                    a.tags.join(format!("{stem}.txt"))
                } else {
                    a.tags.clone()
                };
                let spans = a.spans.as_ref().map(|s| {
                    if s.is_dir() {
                        s.join(format!("{stem}.json"))
                    } else {
                        s.clone()
                    }
                });
                let ext = match a.format {
                    Format::Standoff => "json",
                    Format::Inline => "txt",
                };
                let result = annotate_one(file, &tags, spans.as_deref(), a.format, config, lexicons)
                    .and_then(|out| write_atomic(&out_dir.join(format!("{stem}.{ext}")), &out));
                result.err().map(|e| format!("{}: {e:#}", file.display()))
            })
            .collect()
    });
    for f in &failures {
        eprintln!("error: {f}");
    }
    if !failures.is_empty() {
        bail!("{} of {} files failed", failures.len(), files.len());
    }
    Ok(())
}

fn match_cmd(a: MatchArgs, lexicons: &Lexicons) -> Result<()> {
    let tags = TagList::load(&a.tags, lexicons)?;
    let config = matcher_config(a.threshold)?;
    let matcher = Matcher::new(&tags, lexicons, config);
    let entity = a.entity.trim();
    if entity.is_empty() {
        return Err(usage("--entity must not be empty"));
    }
    let (title, bare) = strip_leading_title(entity, &lexicons.titles);
    let mut out = String::new();
    if let Some(t) = title {
        out.push_str(&format!("title: {t}\n"));
    }
    let candidates = matcher.collect_candidates(bare);
    if candidates.is_empty() {
        out.push_str(&format!("no candidates at {}% or above\n", config.threshold()));
    } else {
        out.push_str(&format!("candidates at {}% or above:\n", config.threshold()));
        for c in &candidates {
            out.push_str(&format!("  {:>4}  {}\n", c.score.to_string(), c.tag.full_name));
        }
    }
    let result = matcher.link(entity, a.prefix.as_deref())?;
    out.push_str(&format!("{result}\n"));
    emit(None, &out)
}

fn augment(a: AugmentArgs, lexicons: &Lexicons) -> Result<()> {
    let records = read_jsonl(&read(&a.input)?).with_context(|| format!("in {}", a.input.display()))?;
    let mut injector = NameInjector::new(&lexicons.common_names, a.seed)?;
    if a.gender_consistent {
        injector = injector.gender_consistent(&lexicons.genders);
    }
    let out = records
        .iter()
        .enumerate()
        .map(|(i, r)| injector.inject_record(r).with_context(|| format!("record {}", i + 1)))
        .collect::<Result<Vec<_>>>()?;
    emit(a.output.as_deref(), &write_jsonl(&out))
}

fn entity_names(tags: &TagList) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    let mut add = |n: String| {
        if !n.is_empty() && !names.contains(&n) {
            names.push(n);
        }
    };
    for t in tags.tags() {
        add(t.full_name.clone());
        add(t.name_parts().collect::<Vec<_>>().join(" "));
        if let (Some(title), Some(surname)) = (&t.title, &t.surname) {
            // both `Mr` and `Mr.`
            let bare = title.trim_end_matches('.');
            add(format!("{bare} {surname}"));
            add(format!("{bare}. {surname}"));
        }
        if let Some(first) = t.given_names.first() {
            add(first.clone());
        }
    }
    names
}

fn extract_training(a: ExtractArgs, lexicons: &Lexicons) -> Result<()> {
    let tags = TagList::load(&a.tags, lexicons)?;
    let text = read(&a.text)?;
    let records = build_entity_sentences(&text, &entity_names(&tags));
    emit(a.output.as_deref(), &write_jsonl(&records))
}

fn load_annotated(path: &Path) -> Result<AnnotatedDocument> {
    AnnotatedDocument::from_standoff(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn evaluate_cmd(a: EvaluateArgs) -> Result<()> {
    let options = EvalOptions {
        mode: match a.mode {
            ModeArg::PersonOnly => EvalMode::PersonOnly,
            ModeArg::FullNames => EvalMode::FullNames,
        },
        family_as_person: a.family_as_person,
    };
    let pairs: Vec<(PathBuf, PathBuf)> = if a.gold.is_dir() {
        if !a.pred.is_dir() {
            return Err(usage("--pred must be a directory when --gold is one"));
        }
        let mut gold: Vec<PathBuf> = fs::read_dir(&a.gold)
            .with_context(|| format!("cannot list {}", a.gold.display()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
            .collect();
        gold.sort();
        gold.into_iter()
            .map(|g| {
                let name = g.file_name().unwrap_or_default().to_string_lossy().into_owned();
                let stem = name.split('.').next().unwrap_or_default().to_string();
                (g, a.pred.join(format!("{stem}.json")))
            })
            .collect()
    } else {
        vec![(a.gold.clone(), a.pred.clone())]
    };
    let reports = pairs
        .par_iter()
        .map(|(g, p)| {
            let gold = load_annotated(g)?;
            let pred = load_annotated(p)?;
            evaluate(&gold, &pred, options).with_context(|| format!("{} vs {}", g.display(), p.display()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = MetricsReport::default();
    for r in &reports {
        total.merge(r);
    }
    let out = match a.report {
        ReportFormat::Table => total.to_table(),
        ReportFormat::Json => total.to_json(),
    };
    emit(a.output.as_deref(), &out)
}

fn stats(cmd: StatsCommand, lexicons: &Lexicons) -> Result<()> {
    let mut out = String::new();
    match cmd {
        StatsCommand::Shared { tags } => {
            let mut files = Vec::new();
            for p in tags {
                if p.is_dir() {
                    files.extend(text_files(&p)?);
                } else {
                    files.push(p);
                }
            }
            let rows = files
                .iter()
                .map(|f| TagList::load(f, lexicons).map(|t| shared_part_stats(&t)))
                .collect::<Result<Vec<_>, _>>()?;
            let width = rows.iter().map(|r| r.novel_id.chars().count()).chain([5]).max().unwrap_or(5);
            out.push_str(&format!("{:<width$}  {:>5}  {:>7}  {:>7}\n", "Novel", "Tags", "Sharing", "Percent"));
            for r in rows {
                let pad = width - r.novel_id.chars().count();
                out.push_str(&format!(
                    "{}{:pad$}  {:>5}  {:>7}  {:>6}%\n",
                    r.novel_id, "", r.tag_count, r.sharing_count, r.sharing_percent
                ));
            }
        }
        StatsCommand::Forms { annotated, tag } => {
            let ad = load_annotated(&annotated)?;
            let tag = CharacterTag::parse(&tag, lexicons)?;
            let mut counts: Vec<(String, usize)> = mention_form_counts(&ad, &tag).into_iter().collect();
            counts.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            for (surface, n) in counts {
                out.push_str(&format!("{n}\t{surface}\n"));
            }
        }
        StatsCommand::Titles { text, surname } => {
            let doc = Document::with_titles(read(&text)?, &lexicons.titles);
            let counts = title_prefix_counts(&doc, &surname);
            let total: usize = counts.values().sum();
            for (key, n) in &counts {
                out.push_str(&format!("{key}\t{n}\n"));
            }
            out.push_str(&format!("total\t{total}\n"));
        }
    }
    emit(None, &out)
}
