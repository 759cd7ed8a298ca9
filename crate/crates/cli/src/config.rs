//! `--config <json>`: flag defaults read from a file.
//!
//! Each key of the JSON object becomes a long flag inserted directly after the
//! subcommand, so anything given on the real command line comes later and wins.

use std::ffi::OsString;
use std::path::PathBuf;

use serde_json::Value;

/// Path given to `--config`, if any.
fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut iter = args.iter().skip(1);
    while let Some(arg) = iter.next() {
        let s = arg.to_string_lossy();
        if s == "--config" {
            return iter.next().map(PathBuf::from);
        }
        if let Some(path) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(path));
        }
    }
    None
}

/// Index of the subcommand token.
fn subcommand_index(args: &[OsString]) -> Option<usize> {
    let mut i = 1;
    while i < args.len() {
        let s = args[i].to_string_lossy();
        if s == "--config" {
            i += 2;
            continue;
        }
        if !s.starts_with('-') {
            return Some(i);
        }
        i += 1;
    }
    None
}

fn flags_from_json(text: &str) -> Result<Vec<OsString>, String> {
    let value: Value = serde_json::from_str(text).map_err(|e| format!("config: {e}"))?;
    let Value::Object(map) = value else {
        return Err("config: expected a JSON object of flag values".into());
    };
    let mut out = Vec::new();
    for (key, value) in map {
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            Value::Bool(true) => out.push(flag.into()),
            Value::Bool(false) | Value::Null => {}
            Value::Number(n) => {
                out.push(flag.into());
                out.push(n.to_string().into());
            }
            Value::String(s) => {
                out.push(flag.into());
                out.push(s.into());
            }
            Value::Array(_) | Value::Object(_) => {
                return Err(format!("config: value of '{key}' must be a scalar"));
            }
        }
    }
    Ok(out)
}

/// Splices config-file flags into `args`.
pub fn expand(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("config {}: {e}", path.display()))?;
    let flags = flags_from_json(&text)?;
    let Some(at) = subcommand_index(&args) else {
        return Ok(args);
    };
    let mut out = args[..=at].to_vec();
    out.extend(flags);
    out.extend_from_slice(&args[at + 1..]);
    Ok(out)
}
