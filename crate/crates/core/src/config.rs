//! Loading of the line-oriented config directory.
//!
//! A directory may hold any subset of the config files; absent files fall
//! back to the bundled defaults. When the directory has a `SHA256SUMS`
//! file (in `sha256sum` format) every listed file must match it.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::{MappingTable, MAPPING_FILE};
use crate::normalize::{
    DateOrder, FormatBuckets, GovernmentPatterns, LicenseTable, PrefixRegistry, SemanticWebFormats, FORMATS_FILE,
    GOVERNMENT_FILE, LICENSES_FILE, PREFIXES_FILE, SEMWEB_FILE,
};
use crate::topics::{FieldWeights, TopicLexicon, TOPICS_FILE};
use crate::tsv;

pub const BUNDLED_MAPPING: &str = include_str!("../config/mapping.tsv");
pub const BUNDLED_LICENSES: &str = include_str!("../config/licenses.tsv");
pub const BUNDLED_PREFIXES: &str = include_str!("../config/prefixes.tsv");
pub const BUNDLED_FORMATS: &str = include_str!("../config/formats.tsv");
pub const BUNDLED_GOVERNMENT: &str = include_str!("../config/government.tsv");
pub const BUNDLED_SEMWEB: &str = include_str!("../config/semweb.tsv");
pub const BUNDLED_TOPICS: &str = include_str!("../config/topics.tsv");
pub const BUNDLED_SETTINGS: &str = include_str!("../config/settings.tsv");

pub const SETTINGS_FILE: &str = "settings.tsv";
pub const CHECKSUM_FILE: &str = "SHA256SUMS";

/// Every config file with its bundled content.
pub const BUNDLED_FILES: [(&str, &str); 8] = [
    (MAPPING_FILE, BUNDLED_MAPPING),
    (LICENSES_FILE, BUNDLED_LICENSES),
    (PREFIXES_FILE, BUNDLED_PREFIXES),
    (FORMATS_FILE, BUNDLED_FORMATS),
    (GOVERNMENT_FILE, BUNDLED_GOVERNMENT),
    (SEMWEB_FILE, BUNDLED_SEMWEB),
    (TOPICS_FILE, BUNDLED_TOPICS),
    (SETTINGS_FILE, BUNDLED_SETTINGS),
];

/// Scalar knobs of the pipeline and the report.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub topic_threshold: f64,
    pub field_weights: FieldWeights,
    pub date_order: DateOrder,
    pub powerlaw_quantile: f64,
    pub top_k_domains: usize,
    pub top_k_providers: usize,
    /// Providers with fewer datasets than this are "small".
    pub small_provider_limit: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            topic_threshold: 0.05,
            field_weights: FieldWeights::default(),
            date_order: DateOrder::MonthFirst,
            powerlaw_quantile: 0.5,
            top_k_domains: 10,
            top_k_providers: 20,
            small_provider_limit: 10,
        }
    }
}

impl Settings {
    /// Parses `key<TAB>value` overrides on top of the defaults.
    pub fn parse(content: &str) -> Result<Self> {
        let mut s = Settings::default();
        for line in tsv::lines(content) {
            line.expect(SETTINGS_FILE, 2, 2)?;
            let number = || line.parse_f64(SETTINGS_FILE, 1);
            let count = || -> Result<usize> {
                line.fields[1]
                    .parse::<usize>()
                    .ok()
                    .filter(|&n| n > 0)
                    .ok_or_else(|| Error::config(SETTINGS_FILE, line.number, "expected a positive integer"))
            };
            let weight = || -> Result<f64> {
                let w = number()?;
                if w < 0.0 {
                    return Err(Error::config(SETTINGS_FILE, line.number, "weights must not be negative"));
                }
                Ok(w)
            };
            match line.fields[0] {
                "topic_threshold" => s.topic_threshold = number()?,
                "weight_title" => s.field_weights.title = weight()?,
                "weight_description" => s.field_weights.description = weight()?,
                "weight_keywords" => s.field_weights.keywords = weight()?,
                "weight_page_text" => s.field_weights.page_text = weight()?,
                "date_order" => {
                    s.date_order = line.fields[1]
                        .parse()
                        .map_err(|e: String| Error::config(SETTINGS_FILE, line.number, e))?
                }
                "powerlaw_quantile" => {
                    let q = number()?;
                    if !(0.0..1.0).contains(&q) {
                        return Err(Error::config(SETTINGS_FILE, line.number, "quantile must lie in [0, 1)"));
                    }
                    s.powerlaw_quantile = q;
                }
                "top_k_domains" => s.top_k_domains = count()?,
                "top_k_providers" => s.top_k_providers = count()?,
                "small_provider_limit" => s.small_provider_limit = count()?,
                other => return Err(Error::config(SETTINGS_FILE, line.number, format!("unknown setting {other:?}"))),
            }
        }
        if !(0.0..=1.0).contains(&s.topic_threshold) {
            return Err(Error::config(SETTINGS_FILE, 0, "topic_threshold must lie in [0, 1]"));
        }
        Ok(s)
    }
}

/// All tables the pipeline reads, loaded once and then shared read-only.
#[derive(Debug, Clone)]
pub struct NormalizationConfig {
    pub mapping: MappingTable,
    pub licenses: LicenseTable,
    pub prefixes: PrefixRegistry,
    pub formats: FormatBuckets,
    pub government: GovernmentPatterns,
    pub semantic_web: SemanticWebFormats,
    pub lexicon: TopicLexicon,
    pub settings: Settings,
    /// SHA-256 of each effective config file, keyed by file name.
    pub checksums: BTreeMap<String, String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl NormalizationConfig {
    pub fn bundled() -> Result<Self> {
        Self::from_files(|name| {
            Ok(BUNDLED_FILES
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, c)| c.to_string())
                .unwrap_or_default())
        })
    }

    pub fn load_dir(dir: &Path) -> Result<Self> {
        if !dir.is_dir() {
            return Err(Error::config(dir.display().to_string(), 0, "config directory not found"));
        }
        verify_checksums(dir)?;
        Self::from_files(|name| {
            let path = dir.join(name);
            if path.exists() {
                fs::read_to_string(&path).map_err(|e| Error::io(&path, e))
            } else {
                Ok(BUNDLED_FILES.iter().find(|(n, _)| *n == name).map(|(_, c)| c.to_string()).unwrap_or_default())
            }
        })
    }

    fn from_files(read: impl Fn(&str) -> Result<String>) -> Result<Self> {
        let mut contents = BTreeMap::new();
        for (name, _) in BUNDLED_FILES {
            contents.insert(name, read(name)?);
        }
        let c = |name: &str| contents[name].as_str();
        Ok(NormalizationConfig {
            mapping: MappingTable::parse(c(MAPPING_FILE))?,
            licenses: LicenseTable::parse(c(LICENSES_FILE))?,
            prefixes: PrefixRegistry::parse(c(PREFIXES_FILE))?,
            formats: FormatBuckets::parse(c(FORMATS_FILE))?,
            government: GovernmentPatterns::parse(c(GOVERNMENT_FILE))?,
            semantic_web: SemanticWebFormats::parse(c(SEMWEB_FILE))?,
            lexicon: TopicLexicon::parse(c(TOPICS_FILE))?,
            settings: Settings::parse(c(SETTINGS_FILE))?,
            checksums: contents
                .iter()
                .map(|(name, content)| (name.to_string(), sha256_hex(content.as_bytes())))
                .collect(),
        })
    }
}

fn verify_checksums(dir: &Path) -> Result<()> {
    let sums_path = dir.join(CHECKSUM_FILE);
    if !sums_path.exists() {
        return Ok(());
    }
    let sums = fs::read_to_string(&sums_path).map_err(|e| Error::io(&sums_path, e))?;
    for (i, raw) in sums.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (expected, name) = line
            .split_once(char::is_whitespace)
            .map(|(h, n)| (h.to_ascii_lowercase(), n.trim().trim_start_matches('*')))
            .ok_or_else(|| Error::config(CHECKSUM_FILE, i + 1, "expected `<sha256>  <file>`"))?;
        if name.contains('/') || name.contains('\\') {
            return Err(Error::config(CHECKSUM_FILE, i + 1, format!("file name {name:?} must not contain a path")));
        }
        let path = dir.join(name);
        let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
        let actual = sha256_hex(&bytes);
        if actual != expected {
            return Err(Error::ConfigChecksum {
                file: name.to_string(),
                expected,
                actual,
            });
        }
    }
    Ok(())
}

/// Writes the bundled config files and a matching `SHA256SUMS` into `dir`.
pub fn write_bundled(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut sums = String::new();
    for (name, content) in BUNDLED_FILES {
        let path = dir.join(name);
        fs::write(&path, content).map_err(|e| Error::io(&path, e))?;
        sums.push_str(&format!("{}  {name}\n", sha256_hex(content.as_bytes())));
    }
    let path = dir.join(CHECKSUM_FILE);
    fs::write(&path, sums).map_err(|e| Error::io(&path, e))
}
