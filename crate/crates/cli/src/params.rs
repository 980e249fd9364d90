//! Typed parameter schema shared by flags and config files.

use std::collections::BTreeMap;

use serde_json::{json, Value as Json};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    Float,
    Int,
    Bool,
    Choice(&'static [&'static str]),
    Text,
}

#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: Kind,
    pub default: &'static str,
    pub help: &'static str,
}

pub const fn float(name: &'static str, default: &'static str, help: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        kind: Kind::Float,
        default,
        help,
    }
}

pub const fn int(name: &'static str, default: &'static str, help: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        kind: Kind::Int,
        default,
        help,
    }
}

pub const fn flag(name: &'static str, help: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        kind: Kind::Bool,
        default: "false",
        help,
    }
}

pub const fn choice(
    name: &'static str,
    options: &'static [&'static str],
    default: &'static str,
    help: &'static str,
) -> ParamSpec {
    ParamSpec {
        name,
        kind: Kind::Choice(options),
        default,
        help,
    }
}

pub const fn text(name: &'static str, default: &'static str, help: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        kind: Kind::Text,
        default,
        help,
    }
}

/// Parameters every subcommand accepts.
pub const COMMON: &[ParamSpec] = &[
    int("seed", "42", "base RNG seed"),
    text("outdir", "persistq-out", "output directory"),
    choice(
        "format",
        &["both", "csv", "json"],
        "both",
        "which files to write",
    ),
];

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl Value {
    pub fn parse(spec: &ParamSpec, raw: &str) -> std::result::Result<Self, String> {
        let raw = raw.trim();
        match spec.kind {
            Kind::Float => raw
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .map(Value::Float)
                .ok_or_else(|| format!("`{}` expects a finite number, got `{raw}`", spec.name)),
            Kind::Int => parse_int(raw)
                .map(Value::Int)
                .ok_or_else(|| format!("`{}` expects an integer, got `{raw}`", spec.name)),
            Kind::Bool => match raw {
                "true" | "1" | "yes" => Ok(Value::Bool(true)),
                "false" | "0" | "no" => Ok(Value::Bool(false)),
                _ => Err(format!(
                    "`{}` expects true or false, got `{raw}`",
                    spec.name
                )),
            },
            Kind::Choice(opts) => {
                if opts.contains(&raw) {
                    Ok(Value::Text(raw.to_string()))
                } else {
                    Err(format!(
                        "`{}` must be one of {}, got `{raw}`",
                        spec.name,
                        opts.join("|")
                    ))
                }
            }
            Kind::Text => Ok(Value::Text(raw.to_string())),
        }
    }

    pub fn to_json(&self) -> Json {
        match self {
            Value::Float(v) => json!(v),
            Value::Int(v) => json!(v),
            Value::Bool(v) => json!(v),
            Value::Text(v) => json!(v),
        }
    }
}

/// Integers may be written as `1000000`, `1_000_000` or `1e6`.
fn parse_int(raw: &str) -> Option<i64> {
    let clean: String = raw.chars().filter(|c| *c != '_').collect();
    if let Ok(v) = clean.parse::<i64>() {
        return Some(v);
    }
    let f = clean.parse::<f64>().ok()?;
    (f.is_finite() && f.fract() == 0.0 && f.abs() < 9.0e15).then_some(f as i64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Default,
    File,
    Flag,
}

impl Source {
    fn name(self) -> &'static str {
        match self {
            Source::Default => "default",
            Source::File => "file",
            Source::Flag => "flag",
        }
    }
}

/// Fully resolved parameters with their provenance.
#[derive(Debug, Clone, Default)]
pub struct Resolved {
    values: BTreeMap<&'static str, (Value, Source)>,
    file: BTreeMap<&'static str, Value>,
    flags: BTreeMap<&'static str, Value>,
    config_path: Option<String>,
}

impl Resolved {
    pub fn new(
        specs: &[&ParamSpec],
        file: BTreeMap<&'static str, Value>,
        flags: BTreeMap<&'static str, Value>,
        config_path: Option<String>,
    ) -> Self {
        let mut values = BTreeMap::new();
        for spec in specs {
            let v = if let Some(v) = flags.get(spec.name) {
                (v.clone(), Source::Flag)
            } else if let Some(v) = file.get(spec.name) {
                (v.clone(), Source::File)
            } else {
                let d = Value::parse(spec, spec.default).expect("defaults parse");
                (d, Source::Default)
            };
            values.insert(spec.name, v);
        }
        Self {
            values,
            file,
            flags,
            config_path,
        }
    }

    fn get(&self, name: &str) -> &Value {
        &self
            .values
            .get(name)
            .unwrap_or_else(|| panic!("parameter `{name}` is not declared"))
            .0
    }

    pub fn f64(&self, name: &str) -> f64 {
        match self.get(name) {
            Value::Float(v) => *v,
            Value::Int(v) => *v as f64,
            other => panic!("parameter `{name}` is not numeric: {other:?}"),
        }
    }

    pub fn i64(&self, name: &str) -> i64 {
        match self.get(name) {
            Value::Int(v) => *v,
            other => panic!("parameter `{name}` is not an integer: {other:?}"),
        }
    }

    pub fn bool(&self, name: &str) -> bool {
        matches!(self.get(name), Value::Bool(true))
    }

    pub fn text(&self, name: &str) -> &str {
        match self.get(name) {
            Value::Text(v) => v,
            other => panic!("parameter `{name}` is not text: {other:?}"),
        }
    }

    pub fn seed(&self) -> u64 {
        self.i64("seed") as u64
    }

    /// Integer that must be at least `min`.
    pub fn count(&self, name: &str, min: i64) -> Result<usize> {
        let v = self.i64(name);
        if v < min {
            return Err(invalid(format!("`{name}` must be >= {min}, got {v}")));
        }
        Ok(v as usize)
    }

    pub fn positive(&self, name: &str) -> Result<f64> {
        let v = self.f64(name);
        if v > 0.0 {
            Ok(v)
        } else {
            Err(invalid(format!("`{name}` must be > 0, got {v}")))
        }
    }

    pub fn non_negative(&self, name: &str) -> Result<f64> {
        let v = self.f64(name);
        if v >= 0.0 {
            Ok(v)
        } else {
            Err(invalid(format!("`{name}` must be >= 0, got {v}")))
        }
    }

    pub fn to_json(&self) -> Json {
        let section = |m: &BTreeMap<&'static str, Value>| {
            Json::Object(
                m.iter()
                    .map(|(k, v)| (k.to_string(), v.to_json()))
                    .collect(),
            )
        };
        let effective = self
            .values
            .iter()
            .map(|(k, (v, s))| {
                (
                    k.to_string(),
                    json!({ "value": v.to_json(), "source": s.name() }),
                )
            })
            .collect();
        json!({
            "config_file": self.config_path,
            "file": section(&self.file),
            "flags": section(&self.flags),
            "effective": Json::Object(effective),
        })
    }
}
