use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
}

impl ParamValue {
    /// Parses a command-line value: integer, then float, then boolean, else string.
    pub fn parse(raw: &str) -> Self {
        if let Ok(i) = raw.parse::<i64>() {
            ParamValue::Int(i)
        } else if let Ok(f) = raw.parse::<f64>() {
            ParamValue::Float(f)
        } else if let Ok(b) = raw.parse::<bool>() {
            ParamValue::Bool(b)
        } else {
            ParamValue::Str(raw.to_owned())
        }
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Bool(b) => write!(f, "{b}"),
            ParamValue::Int(i) => write!(f, "{i}"),
            ParamValue::Float(x) => write!(f, "{x}"),
            ParamValue::Str(s) => f.write_str(s),
        }
    }
}

impl From<i64> for ParamValue {
    fn from(v: i64) -> Self {
        ParamValue::Int(v)
    }
}

impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        ParamValue::Float(v)
    }
}

impl From<bool> for ParamValue {
    fn from(v: bool) -> Self {
        ParamValue::Bool(v)
    }
}

impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        ParamValue::Str(v.to_owned())
    }
}

pub type Params = BTreeMap<String, ParamValue>;

/// Builds a [`Params`] map from `(key, value)` pairs.
pub fn params<K: Into<String>, V: Into<ParamValue>>(pairs: impl IntoIterator<Item = (K, V)>) -> Params {
    pairs.into_iter().map(|(k, v)| (k.into(), v.into())).collect()
}

fn missing(key: &str) -> Error {
    Error::Param(format!("missing parameter `{key}`"))
}

fn wrong_type(key: &str, want: &str, got: &ParamValue) -> Error {
    Error::Param(format!("parameter `{key}` must be {want}, got `{got}`"))
}

pub(crate) fn get_usize(p: &Params, key: &str) -> Result<usize> {
    match p.get(key).ok_or_else(|| missing(key))? {
        ParamValue::Int(i) if *i >= 0 => Ok(*i as usize),
        other => Err(wrong_type(key, "a non-negative integer", other)),
    }
}

pub(crate) fn get_f64(p: &Params, key: &str) -> Result<f64> {
    match p.get(key).ok_or_else(|| missing(key))? {
        ParamValue::Int(i) => Ok(*i as f64),
        ParamValue::Float(f) if f.is_finite() => Ok(*f),
        other => Err(wrong_type(key, "a finite number", other)),
    }
}

pub(crate) fn get_str<'a>(p: &'a Params, key: &str) -> Result<&'a str> {
    match p.get(key).ok_or_else(|| missing(key))? {
        ParamValue::Str(s) => Ok(s),
        other => Err(wrong_type(key, "a string", other)),
    }
}

pub(crate) fn get_bool(p: &Params, key: &str) -> Result<bool> {
    match p.get(key).ok_or_else(|| missing(key))? {
        ParamValue::Bool(b) => Ok(*b),
        other => Err(wrong_type(key, "true or false", other)),
    }
}
