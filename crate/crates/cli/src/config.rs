//! Flat `key = value` run files. Each key is the long name of a flag of the
//! chosen subcommand; the values are spliced in ahead of the real arguments,
//! so flags given on the command line win.

use std::ffi::OsString;
use std::path::Path;

use clap::Command;

use crate::CliError;

/// Entries in file order. `#` starts a comment; blank lines are skipped.
pub fn parse(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::invalid(format!("config line {}: expected `key = value`", i + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn config_path(args: &[OsString]) -> Option<OsString> {
    args.iter().enumerate().find_map(|(i, a)| {
        let s = a.to_str()?;
        if s == "--config" {
            args.get(i + 1).cloned()
        } else {
            s.strip_prefix("--config=").map(OsString::from)
        }
    })
}

/// Returns the argument vector with the config file's entries inserted right
/// after the subcommand.
pub fn merge(cmd: &Command, args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| CliError::invalid(format!("cannot read config {}: {e}", path.to_string_lossy())))?;
    let entries = parse(&text)?;

    let mut args = args;
    let has_sub = args.get(1).and_then(|a| a.to_str()).is_some_and(|s| !s.starts_with('-'));
    if !has_sub {
        let name = entries
            .iter()
            .find(|(k, _)| k == "command")
            .map(|(_, v)| v.clone())
            .ok_or_else(|| CliError::invalid("no subcommand given and the config has no `command` key"))?;
        args.insert(1.min(args.len()), OsString::from(name));
    }
    let sub_name = args[1].to_string_lossy().to_string();
    let sub = cmd
        .find_subcommand(&sub_name)
        .ok_or_else(|| CliError::invalid(format!("unknown subcommand `{sub_name}`")))?;

    let mut spliced = Vec::new();
    for (key, value) in entries {
        if key == "command" || key == "config" {
            continue;
        }
        let arg = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()))
            .ok_or_else(|| CliError::invalid(format!("config key `{key}` is not a flag of `{sub_name}`")))?;
        if arg.get_action().takes_values() {
            spliced.push(OsString::from(format!("--{key}")));
            spliced.push(OsString::from(value));
        } else {
            match value.as_str() {
                "true" | "yes" | "1" => spliced.push(OsString::from(format!("--{key}"))),
                "false" | "no" | "0" => {}
                _ => return Err(CliError::invalid(format!("config key `{key}` expects true or false"))),
            }
        }
    }
    let rest = args.split_off(2);
    args.extend(spliced);
    args.extend(rest);
    Ok(args)
}
