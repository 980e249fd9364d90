//! Flat `key = value` config files with `[section]` headers.
//!
//! Keys before any header, or under `[common]`, apply to the subcommand being
//! run. A `[name]` section applies only when running subcommand `name`; keys
//! in other sections are still checked so typos never go unnoticed.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{invalid, CliError, Result};
use crate::params::{ParamSpec, Value};

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    section: Option<String>,
    key: String,
    value: String,
    line: usize,
}

fn tokenize(text: &str, origin: &str) -> Result<Vec<Entry>> {
    let mut out = Vec::new();
    let mut section = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split(['#', ';']).next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| {
                    invalid(format!(
                        "{origin}:{line}: malformed section header `{body}`"
                    ))
                })?
                .trim();
            if name.is_empty() {
                return Err(invalid(format!("{origin}:{line}: empty section name")));
            }
            section = Some(name.to_string());
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| {
            invalid(format!(
                "{origin}:{line}: expected `key = value`, got `{body}`"
            ))
        })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(invalid(format!("{origin}:{line}: missing key")));
        }
        out.push(Entry {
            section: section.clone(),
            key: key.to_string(),
            value: value.trim().trim_matches('"').to_string(),
            line,
        });
    }
    Ok(out)
}

/// Values that apply to `subcommand`. `schemas` lists every subcommand with
/// its accepted parameters (common ones included).
pub fn parse_config(
    text: &str,
    origin: &str,
    subcommand: &str,
    schemas: &[(&str, Vec<&'static ParamSpec>)],
) -> Result<BTreeMap<&'static str, Value>> {
    let mut out = BTreeMap::new();
    for e in tokenize(text, origin)? {
        let target = match e.section.as_deref() {
            None | Some("common") => subcommand,
            Some(s) => s,
        };
        let schema = schemas
            .iter()
            .find(|(name, _)| *name == target)
            .map(|(_, s)| s)
            .ok_or_else(|| invalid(format!("{origin}:{}: unknown section `[{target}]`", e.line)))?;
        let spec = schema.iter().find(|s| s.name == e.key).ok_or_else(|| {
            invalid(format!(
                "{origin}:{}: unknown key `{}` for `{target}`",
                e.line, e.key
            ))
        })?;
        let value = Value::parse(spec, &e.value)
            .map_err(|m| invalid(format!("{origin}:{}: {m}", e.line)))?;
        if target == subcommand {
            out.insert(spec.name, value);
        }
    }
    Ok(out)
}

pub fn load_config(
    path: &Path,
    subcommand: &str,
    schemas: &[(&str, Vec<&'static ParamSpec>)],
) -> Result<BTreeMap<&'static str, Value>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text, &path.display().to_string(), subcommand, schemas)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{float, int};

    static LAMBDA: ParamSpec = float("lambda", "1", "");
    static PATHS: ParamSpec = int("paths", "10", "");
    static MASS: ParamSpec = float("m", "1", "");

    fn schemas() -> Vec<(&'static str, Vec<&'static ParamSpec>)> {
        vec![("kac-sim", vec![&LAMBDA, &PATHS]), ("dirac1d", vec![&MASS])]
    }

    #[test]
    fn empty_file_gives_nothing() {
        assert!(parse_config("", "f", "kac-sim", &schemas())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn sections_and_comments() {
        let text = "# top\nlambda = 2 ; inline\n[dirac1d]\nm = 0.5\n[kac-sim]\npaths = 1e3\n";
        let got = parse_config(text, "f", "kac-sim", &schemas()).unwrap();
        assert_eq!(got["lambda"], Value::Float(2.0));
        assert_eq!(got["paths"], Value::Int(1000));
        assert!(!got.contains_key("m"));
    }

    #[test]
    fn unknown_key_names_the_line() {
        let err = parse_config("\nlamda = 2\n", "cfg.ini", "kac-sim", &schemas()).unwrap_err();
        assert!(err.to_string().contains("cfg.ini:2"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn typos_in_other_sections_are_caught() {
        let err = parse_config("[dirac1d]\nmass = 1\n", "f", "kac-sim", &schemas()).unwrap_err();
        assert!(err.to_string().contains("f:2"));
    }

    #[test]
    fn type_mismatch_names_the_line() {
        let err =
            parse_config("lambda = 1\npaths = many\n", "f", "kac-sim", &schemas()).unwrap_err();
        assert!(err.to_string().contains("f:2"));
    }

    #[test]
    fn unknown_section_is_rejected() {
        assert!(parse_config("[nope]\nx = 1\n", "f", "kac-sim", &schemas()).is_err());
    }
}
