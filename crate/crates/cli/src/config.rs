//! Flat JSON configuration files merged with command-line flags.
//!
//! Every option struct derives both `clap::Args` and serde with all fields
//! optional. A config file supplies a base; flags given on the command line
//! win. The merged struct, with defaults filled in, is written back as
//! `resolved-config.json` and can be passed to `--config` verbatim.

use std::collections::BTreeSet;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

/// Key naming the subcommand inside a config file; optional on input.
pub const COMMAND_KEY: &str = "command";

fn object(v: Value, what: &str) -> Result<Map<String, Value>> {
    match v {
        Value::Object(m) => Ok(m),
        _ => bail!("{what} must be a flat JSON object"),
    }
}

/// Merges `file` (if any) under the flags in `cli`, rejecting unknown keys
/// and nested objects.
pub fn merge<T>(cli: &T, file: Option<&Path>, command: &str) -> Result<T>
where
    T: Serialize + DeserializeOwned + Default,
{
    let allowed: BTreeSet<String> = object(serde_json::to_value(T::default())?, "options")?
        .keys()
        .cloned()
        .collect();
    let mut merged = match file {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?;
            object(v, "config file")?
        }
        None => Map::new(),
    };
    if let Some(c) = merged.remove(COMMAND_KEY) {
        if c.as_str() != Some(command) {
            bail!("config file is for command {c}, not \"{command}\"");
        }
    }
    let unknown: Vec<&String> = merged.keys().filter(|k| !allowed.contains(*k)).collect();
    if !unknown.is_empty() {
        bail!("unknown config keys: {unknown:?}");
    }
    if let Some((k, _)) = merged.iter().find(|(_, v)| v.is_object()) {
        bail!("config key '{k}' is nested; config files are flat");
    }
    for (k, v) in object(serde_json::to_value(cli)?, "options")? {
        if !v.is_null() {
            merged.insert(k, v);
        }
    }
    serde_json::from_value(Value::Object(merged)).context("invalid config value")
}

/// The resolved options as written to `resolved-config.json`.
pub fn resolved<T: Serialize>(opts: &T, command: &str) -> Result<Value> {
    let mut m = object(serde_json::to_value(opts)?, "options")?;
    m.insert(COMMAND_KEY.into(), Value::String(command.into()));
    Ok(Value::Object(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;
    use std::io::Write;

    #[derive(Debug, Default, PartialEq, Serialize, Deserialize)]
    #[serde(default)]
    struct Inner {
        a: Option<u32>,
    }

    #[derive(Debug, Default, PartialEq, Serialize, Deserialize)]
    #[serde(default)]
    struct Opts {
        #[serde(flatten)]
        inner: Inner,
        b: Option<String>,
    }

    fn file(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    #[test]
    fn flags_override_file() {
        let f = file(r#"{"a": 3, "b": "x", "command": "t"}"#);
        let cli = Opts {
            inner: Inner { a: None },
            b: Some("y".into()),
        };
        let m = merge(&cli, Some(f.path()), "t").unwrap();
        assert_eq!(m.inner.a, Some(3));
        assert_eq!(m.b.as_deref(), Some("y"));
        let r = resolved(&m, "t").unwrap();
        assert_eq!(r["command"], "t");
        assert_eq!(r["a"], 3);
    }

    #[test]
    fn rejects_unknown_nested_and_foreign() {
        let cli = Opts::default();
        assert!(merge(&cli, Some(file(r#"{"zz": 1}"#).path()), "t").is_err());
        assert!(merge(&cli, Some(file(r#"{"b": {"c": 1}}"#).path()), "t").is_err());
        assert!(merge(&cli, Some(file(r#"{"command": "other"}"#).path()), "t").is_err());
        assert!(merge(&cli, Some(file(r#"{"a": "x"}"#).path()), "t").is_err());
        assert!(merge(&cli, Some(file("[1]").path()), "t").is_err());
    }
}
