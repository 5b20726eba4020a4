//! `key = value` configuration files.
//!
//! Keys are flag names without the leading dashes (`threshold = 80`,
//! `family-as-person = true`). Blank lines and `#` comments are ignored.
//! Values from the file only fill flags that were not given on the command
//! line.

use std::ffi::OsString;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::parser::ValueSource;
use clap::{ArgAction, ArgMatches, Command};

pub fn parse(src: &str) -> Result<Vec<(String, String)>> {
    let mut entries = Vec::new();
    for (n, line) in src.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("line {}: expected `key = value`", n + 1);
        };
        let key = key.trim().trim_start_matches('-').replace('_', "-");
        if key.is_empty() {
            bail!("line {}: empty key", n + 1);
        }
        entries.push((key, value.trim().to_string()));
    }
    Ok(entries)
}

pub fn load(path: &Path) -> Result<Vec<(String, String)>> {
    let src = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
    parse(&src).with_context(|| format!("in config {}", path.display()))
}

/// Extra arguments that apply config entries to the chosen subcommand.
/// Keys the subcommand does not know are skipped, so one file can serve
/// every command.
pub fn extra_args(root: &Command, matches: &ArgMatches, entries: &[(String, String)]) -> Result<Vec<OsString>> {
    let mut cmd = root;
    let mut m = matches;
    let mut scopes = vec![(cmd, m)];
    while let Some((name, sub)) = m.subcommand() {
        cmd = cmd.find_subcommand(name).expect("parsed subcommand exists");
        m = sub;
        scopes.push((cmd, m));
    }
    let mut extra = Vec::new();
    for (key, value) in entries {
        if key == "config" {
            continue;
        }
        let found = scopes.iter().rev().find_map(|(c, m)| {
            c.get_arguments()
                .find(|a| a.get_long() == Some(key.as_str()))
                .map(|a| (a, *m))
        });
        let Some((arg, m)) = found else {
            if !known_anywhere(root, key) {
                bail!("unknown config key `{key}`");
            }
            continue;
        };
        let id = arg.get_id().as_str();
        if !matches!(m.value_source(id), None | Some(ValueSource::DefaultValue)) {
            continue;
        }
        match arg.get_action() {
            ArgAction::SetTrue => {
                if parse_bool(value).with_context(|| format!("config key `{key}`"))? {
                    extra.push(format!("--{key}").into());
                }
            }
            _ => {
                extra.push(format!("--{key}").into());
                extra.push(value.into());
            }
        }
    }
    Ok(extra)
}

fn known_anywhere(cmd: &Command, key: &str) -> bool {
    cmd.get_arguments().any(|a| a.get_long() == Some(key)) || cmd.get_subcommands().any(|s| known_anywhere(s, key))
}

fn parse_bool(value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        other => bail!("expected a boolean, found `{other}`"),
    }
}
