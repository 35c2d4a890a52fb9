//! `key=value` config files and the config echo written into reports.

use std::collections::BTreeSet;
use std::fs;

use anyhow::{bail, Context, Result};
use clap::{ArgMatches, Command};

/// Flags that never reach the echo: they change where or how fast a run
/// happens, not what it computes. The seed gets its own stanza line.
const NOT_ECHOED: [&str; 4] = ["out", "config", "threads", "seed"];

fn config_path(argv: &[String]) -> Option<String> {
    let mut iter = argv.iter();
    while let Some(arg) = iter.next() {
        if arg == "--config" {
            return iter.next().cloned();
        }
        if let Some(path) = arg.strip_prefix("--config=") {
            return Some(path.to_string());
        }
    }
    None
}

/// Appends `--key value` for every config entry whose flag is absent from
/// `argv`, so flags on the command line win.
pub fn merge_config_file(argv: &[String]) -> Result<Vec<String>> {
    let Some(path) = config_path(argv) else {
        return Ok(argv.to_vec());
    };
    let text = fs::read_to_string(&path).with_context(|| format!("cannot read config file {path}"))?;
    let given: BTreeSet<&str> = argv
        .iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split_once('=').map_or(a, |(k, _)| k))
        .collect();
    let mut merged = argv.to_vec();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("{path}:{}: expected key=value", lineno + 1);
        };
        let key = key.trim().replace('_', "-");
        if key == "config" {
            bail!("{path}:{}: config files cannot include other config files", lineno + 1);
        }
        if !given.contains(key.as_str()) {
            merged.push(format!("--{key}"));
            merged.push(value.trim().to_string());
        }
    }
    Ok(merged)
}

/// The subcommand path, e.g. `brudno run`.
pub fn command_path(matches: &ArgMatches) -> String {
    let mut names = Vec::new();
    let mut m = matches;
    while let Some((name, sub)) = m.subcommand() {
        names.push(name.to_string());
        m = sub;
    }
    names.join(" ")
}

/// Effective flag values of the innermost subcommand, defaults included,
/// sorted by flag name.
pub fn echo(command: &Command, matches: &ArgMatches) -> Vec<(String, String)> {
    let mut cmd = command;
    let mut m = matches;
    while let Some((name, sub)) = m.subcommand() {
        cmd = cmd.find_subcommand(name).expect("matched subcommands exist");
        m = sub;
    }
    let mut out = Vec::new();
    for arg in cmd.get_arguments() {
        let id = arg.get_id().as_str();
        if NOT_ECHOED.contains(&id) || m.value_source(id).is_none() {
            continue;
        }
        let Ok(Some(raw)) = m.try_get_raw(id) else { continue };
        let values: Vec<String> = raw.map(|v| v.to_string_lossy().into_owned()).collect();
        out.push((id.replace('_', "-"), values.join(",")));
    }
    out.sort();
    out
}
