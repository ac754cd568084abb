//! Config files: `key = value` lines, optionally grouped in `[command]`
//! sections. Top-level keys apply to every command. Values are TOML
//! scalars or arrays; arrays become comma lists.

use std::path::Path;

use clap::Command;

use crate::args::COMMANDS;
use crate::error::{CliError, Result};

/// Options that stay on the command line only.
const LOCAL_ONLY: [&str; 2] = ["config", "output"];

/// Turns the config entries for `command` into `--key value` arguments.
pub fn config_args(path: &Path, root: &Command, command: &str) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    let table: toml::Table = text
        .parse()
        .map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))?;
    let sub = root
        .find_subcommand(command)
        .ok_or_else(|| CliError::Config(format!("unknown command {command}")))?;
    let mut args = Vec::new();
    let mut push = |section: &str, key: &str, value: &toml::Value| -> Result<()> {
        let long = key.replace('_', "-");
        let arg = root
            .get_arguments()
            .chain(sub.get_arguments())
            .find(|a| a.get_long() == Some(long.as_str()) && !LOCAL_ONLY.contains(&long.as_str()))
            .ok_or_else(|| {
                CliError::Config(format!("unknown config key '{key}' in {section} for {command}"))
            })?;
        let flag = !arg.get_action().takes_values();
        let text = scalar_text(value)
            .ok_or_else(|| CliError::Config(format!("config key '{key}' has an unsupported value")))?;
        if flag {
            match text.as_str() {
                "true" => args.push(format!("--{long}")),
                "false" => {}
                _ => return Err(CliError::Config(format!("config key '{key}' must be true or false"))),
            }
        } else {
            args.push(format!("--{long}"));
            args.push(text);
        }
        Ok(())
    };
    for (key, value) in &table {
        if let toml::Value::Table(_) = value {
            continue;
        }
        push("the top level", key, value)?;
    }
    for (key, value) in &table {
        let toml::Value::Table(section) = value else {
            continue;
        };
        if !COMMANDS.contains(&key.as_str()) {
            return Err(CliError::Config(format!("unknown config section [{key}]")));
        }
        if key == command {
            for (k, v) in section {
                push(&format!("section [{key}]"), k, v)?;
            }
        }
    }
    Ok(args)
}

fn scalar_text(value: &toml::Value) -> Option<String> {
    Some(match value {
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        toml::Value::Float(x) => x.to_string(),
        toml::Value::Boolean(b) => b.to_string(),
        toml::Value::Array(items) => items
            .iter()
            .map(|v| match v {
                toml::Value::Array(_) | toml::Value::Table(_) => None,
                other => scalar_text(other),
            })
            .collect::<Option<Vec<_>>>()?
            .join(","),
        toml::Value::Table(_) | toml::Value::Datetime(_) => return None,
    })
}
