//! Line-oriented `key<TAB>value...` config files.
//!
//! Blank lines and lines starting with `#` are ignored. Fields are trimmed.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Line<'a> {
    pub number: usize,
    pub fields: Vec<&'a str>,
}

pub(crate) fn lines(content: &str) -> impl Iterator<Item = Line<'_>> {
    content.lines().enumerate().filter_map(|(i, raw)| {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            return None;
        }
        Some(Line {
            number: i + 1,
            fields: raw.split('\t').map(str::trim).collect(),
        })
    })
}

impl<'a> Line<'a> {
    /// Requires between `min` and `max` fields.
    pub fn expect(&self, file: &str, min: usize, max: usize) -> Result<()> {
        let n = self.fields.len();
        if n < min || n > max {
            let want = if min == max {
                format!("{min}")
            } else {
                format!("{min} to {max}")
            };
            return Err(Error::config(file, self.number, format!("expected {want} tab-separated fields, found {n}")));
        }
        if self.fields[..min].iter().any(|f| f.is_empty()) {
            return Err(Error::config(file, self.number, "empty field"));
        }
        Ok(())
    }

    pub fn get(&self, i: usize) -> Option<&'a str> {
        self.fields.get(i).copied().filter(|f| !f.is_empty())
    }

    pub fn parse_bool(&self, file: &str, i: usize) -> Result<bool> {
        match self.get(i) {
            Some("true") | Some("yes") | Some("1") => Ok(true),
            Some("false") | Some("no") | Some("0") => Ok(false),
            other => Err(Error::config(file, self.number, format!("expected a boolean, found {other:?}"))),
        }
    }

    pub fn parse_f64(&self, file: &str, i: usize) -> Result<f64> {
        self.get(i)
            .and_then(|f| f.parse::<f64>().ok())
            .filter(|x| x.is_finite())
            .ok_or_else(|| Error::config(file, self.number, format!("expected a number in field {}", i + 1)))
    }
}
