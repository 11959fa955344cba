//! Job configuration files.
//!
//! ```text
//! # comment
//! job = omega
//! k0 = Z x Z_2
//! chi = [
//!   1
//! ]
//! multiply = 1 0 + , 1 1 -
//! ```
//!
//! Each line is `key = value`. A value of `[` opens a matrix block that runs
//! to a line holding only `]`, one whitespace-separated integer row per line.
//! Keys listed in [`REPEATABLE`] may appear several times; their order is kept.

use std::collections::BTreeMap;

use num_bigint::BigInt;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ConfigError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ConfigError { line, col, message: message.into() }
    }
}

pub const REPEATABLE: &[&str] = &["witness", "multiply", "inverse", "power"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Scalar(String),
    Matrix(Vec<Vec<BigInt>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: Value,
    pub line: usize,
    /// Column where the value starts.
    pub col: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Config {
    pub entries: Vec<Entry>,
}

impl Config {
    pub fn parse(src: &str) -> Result<Self, ConfigError> {
        let lines: Vec<&str> = src.lines().collect();
        let mut entries: Vec<Entry> = Vec::new();
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        let mut i = 0;
        while i < lines.len() {
            let lineno = i + 1;
            let raw = strip_comment(lines[i]);
            i += 1;
            if raw.trim().is_empty() {
                continue;
            }
            let Some(eq) = raw.find('=') else {
                let col = raw.len() - raw.trim_start().len() + 1;
                return Err(ConfigError::new(lineno, col, "expected `key = value`"));
            };
            let key = raw[..eq].trim();
            let key_col = raw.len() - raw.trim_start().len() + 1;
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
                return Err(ConfigError::new(lineno, key_col, format!("invalid key {key:?}")));
            }
            if let Some(prev) = seen.get(key) {
                if !REPEATABLE.contains(&key) {
                    return Err(ConfigError::new(lineno, key_col, format!("duplicate key {key:?} (first on line {prev})")));
                }
            }
            seen.entry(key.to_string()).or_insert(lineno);
            let rest = &raw[eq + 1..];
            let col = eq + 2 + (rest.len() - rest.trim_start().len());
            let text = rest.trim();
            let value = if text == "[" {
                let (rows, next) = matrix_block(&lines, i)?;
                i = next;
                Value::Matrix(rows)
            } else if text == "[]" {
                Value::Matrix(Vec::new())
            } else {
                Value::Scalar(text.to_string())
            };
            entries.push(Entry { key: key.to_string(), value, line: lineno, col });
        }
        Ok(Config { entries })
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    pub fn all<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a Entry> {
        self.entries.iter().filter(move |e| e.key == key)
    }

    /// Position to blame for a missing key: just past the last line.
    pub fn end(&self) -> (usize, usize) {
        (self.entries.last().map_or(1, |e| e.line + 1), 1)
    }

    pub fn require(&self, key: &str) -> Result<&Entry, ConfigError> {
        self.get(key).ok_or_else(|| {
            let (l, c) = self.end();
            ConfigError::new(l, c, format!("missing key {key:?}"))
        })
    }

    pub fn scalar(&self, key: &str) -> Result<(&str, &Entry), ConfigError> {
        let e = self.require(key)?;
        e.scalar().map(|s| (s, e))
    }

    pub fn optional_scalar(&self, key: &str) -> Result<Option<(&str, &Entry)>, ConfigError> {
        self.get(key).map(|e| e.scalar().map(|s| (s, e))).transpose()
    }

    pub fn matrix(&self, key: &str) -> Result<(&[Vec<BigInt>], &Entry), ConfigError> {
        let e = self.require(key)?;
        match &e.value {
            Value::Matrix(rows) => Ok((rows, e)),
            Value::Scalar(_) => Err(e.error(format!("{key} must be a matrix block"))),
        }
    }

    pub fn flag(&self, key: &str) -> Result<bool, ConfigError> {
        match self.optional_scalar(key)? {
            None => Ok(false),
            Some(("true", _)) => Ok(true),
            Some(("false", _)) => Ok(false),
            Some((_, e)) => Err(e.error(format!("{key} must be true or false"))),
        }
    }

    /// Rejects keys outside `allowed`.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<(), ConfigError> {
        match self.entries.iter().find(|e| !allowed.contains(&e.key.as_str())) {
            Some(e) => Err(ConfigError::new(e.line, 1, format!("unknown key {:?} for this job", e.key))),
            None => Ok(()),
        }
    }
}

impl Entry {
    pub fn scalar(&self) -> Result<&str, ConfigError> {
        match &self.value {
            Value::Scalar(s) => Ok(s),
            Value::Matrix(_) => Err(self.error(format!("{} must be a single-line value", self.key))),
        }
    }

    pub fn error(&self, message: impl Into<String>) -> ConfigError {
        ConfigError::new(self.line, self.col, message)
    }

    /// An error at an offset (in characters) into the value.
    pub fn error_at(&self, offset: usize, message: impl Into<String>) -> ConfigError {
        ConfigError::new(self.line, self.col + offset, message)
    }
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

fn matrix_block(lines: &[&str], mut i: usize) -> Result<(Vec<Vec<BigInt>>, usize), ConfigError> {
    let open = i;
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    while i < lines.len() {
        let lineno = i + 1;
        let raw = strip_comment(lines[i]);
        i += 1;
        if raw.trim() == "]" {
            return Ok((rows, i));
        }
        if raw.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        let mut col = 0;
        for tok in raw.split_inclusive(char::is_whitespace) {
            let word = tok.trim_end();
            if !word.is_empty() {
                let v: BigInt = word
                    .parse()
                    .map_err(|_| ConfigError::new(lineno, col + 1, format!("expected an integer, found {word:?}")))?;
                row.push(v);
            }
            col += tok.chars().count();
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(ConfigError::new(
                    lineno,
                    1,
                    format!("row has {} entries, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    Err(ConfigError::new(open, 1, "matrix block is not closed with `]`"))
}
