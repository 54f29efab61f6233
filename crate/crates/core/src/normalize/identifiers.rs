use std::collections::BTreeMap;

use once_cell::sync::Lazy;
use regex::Regex;

use crate::error::{Error, Result};
use crate::model::{CanonicalProperty, RawDatasetRecord};
use crate::tsv;

pub const PREFIXES_FILE: &str = "prefixes.tsv";

/// Compact-identifier prefixes known to identifiers.org.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrefixRegistry {
    prefixes: BTreeMap<String, String>,
}

static PREFIX_SYNTAX: Lazy<Regex> = Lazy::new(|| Regex::new(r"^[a-z0-9._]+$").unwrap());

impl PrefixRegistry {
    pub fn parse(content: &str) -> Result<Self> {
        let mut prefixes = BTreeMap::new();
        for line in tsv::lines(content) {
            line.expect(PREFIXES_FILE, 2, 2)?;
            let prefix = line.fields[0];
            if !PREFIX_SYNTAX.is_match(prefix) {
                return Err(Error::config(PREFIXES_FILE, line.number, format!("invalid prefix {prefix:?}")));
            }
            if prefixes.insert(prefix.to_string(), line.fields[1].to_string()).is_some() {
                return Err(Error::config(PREFIXES_FILE, line.number, format!("duplicate prefix {prefix:?}")));
            }
        }
        Ok(PrefixRegistry { prefixes })
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        PrefixRegistry {
            prefixes: pairs.into_iter().map(|(p, n)| (p.to_string(), n.to_string())).collect(),
        }
    }

    pub fn contains(&self, prefix: &str) -> bool {
        self.prefixes.contains_key(prefix)
    }

    pub fn namespace(&self, prefix: &str) -> Option<&str> {
        self.prefixes.get(prefix).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.prefixes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefixes.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Identifiers {
    pub dois: Vec<String>,
    pub compact_ids: Vec<String>,
}

pub const DOI_PATTERN: &str = r"^10\.[0-9]{4,9}/[-._;()/:A-Za-z0-9]+$";

static DOI: Lazy<Regex> = Lazy::new(|| Regex::new(r"\b10\.[0-9]{4,9}/[-._;()/:A-Za-z0-9]+").unwrap());
pub(crate) static DOI_ANCHORED: Lazy<Regex> = Lazy::new(|| Regex::new(DOI_PATTERN).unwrap());
static IDENTIFIERS_ORG: Lazy<Regex> = Lazy::new(|| {
    Regex::new(r"(?i)\bhttps?://(?:www\.)?identifiers\.org/([a-z0-9._]+)[:/]([A-Za-z0-9][^\s?#]*)").unwrap()
});
static COMPACT: Lazy<Regex> =
    Lazy::new(|| Regex::new(r"(?:^|[\s,;(\[])([A-Za-z0-9._]+):([A-Za-z0-9][-A-Za-z0-9._/:]*)").unwrap());

const RESERVED_PREFIXES: &[&str] = &["doi", "http", "https", "urn", "mailto", "ftp"];

/// Removes trailing punctuation and unbalanced closing parentheses.
fn trim_tail(s: &str) -> &str {
    let mut s = s;
    loop {
        let before = s.len();
        s = s.trim_end_matches(['.', ',', ';', ':', '/']);
        if s.ends_with(')') && s.matches('(').count() < s.matches(')').count() {
            s = &s[..s.len() - 1];
        }
        if s.len() == before {
            return s;
        }
    }
}

fn push_unique(list: &mut Vec<String>, item: String) {
    if !list.iter().any(|x| x.eq_ignore_ascii_case(&item)) {
        list.push(item);
    }
}

/// Finds DOIs and compact identifiers in one text value.
pub fn scan_text(text: &str, registry: &PrefixRegistry, out: &mut Identifiers) {
    for m in DOI.find_iter(text) {
        let doi = trim_tail(m.as_str());
        if DOI_ANCHORED.is_match(doi) {
            push_unique(&mut out.dois, doi.to_string());
        }
    }
    for caps in IDENTIFIERS_ORG.captures_iter(text) {
        let prefix = caps[1].to_ascii_lowercase();
        let accession = trim_tail(&caps[2]);
        if prefix == "doi" || accession.is_empty() {
            continue;
        }
        push_unique(&mut out.compact_ids, format!("{prefix}:{accession}"));
    }
    for caps in COMPACT.captures_iter(text) {
        let prefix = caps[1].to_ascii_lowercase();
        if RESERVED_PREFIXES.contains(&prefix.as_str()) || !registry.contains(&prefix) {
            continue;
        }
        let accession = trim_tail(&caps[2]);
        if accession.is_empty() {
            continue;
        }
        push_unique(&mut out.compact_ids, format!("{prefix}:{accession}"));
    }
}

/// Scans identifier, URL, sameAs and alternateName values.
pub fn extract_identifiers(raw: &RawDatasetRecord, registry: &PrefixRegistry) -> Identifiers {
    let mut out = Identifiers::default();
    for property in [
        CanonicalProperty::Identifier,
        CanonicalProperty::Url,
        CanonicalProperty::SameAs,
        CanonicalProperty::AlternateName,
    ] {
        for value in raw.raw_values(property) {
            for text in value.all_texts() {
                scan_text(text, registry, &mut out);
            }
        }
    }
    out
}
