use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use url::Url;

use crate::error::{Error, Result};
use crate::model::{CanonicalProperty, RawDatasetRecord, RawEntity, RawValue};
use crate::tsv;

/// Broad content type of a data download.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ContentCategory {
    Tables,
    Structured,
    Documents,
    Images,
    Archives,
    Text,
    Geospatial,
    ComputationalBiology,
    Audio,
    Video,
    Presentations,
    MedicalImaging,
    Other,
}

impl ContentCategory {
    pub const ALL: [ContentCategory; 13] = [
        ContentCategory::Tables,
        ContentCategory::Structured,
        ContentCategory::Documents,
        ContentCategory::Images,
        ContentCategory::Archives,
        ContentCategory::Text,
        ContentCategory::Geospatial,
        ContentCategory::ComputationalBiology,
        ContentCategory::Audio,
        ContentCategory::Video,
        ContentCategory::Presentations,
        ContentCategory::MedicalImaging,
        ContentCategory::Other,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ContentCategory::Tables => "Tables",
            ContentCategory::Structured => "Structured",
            ContentCategory::Documents => "Documents",
            ContentCategory::Images => "Images",
            ContentCategory::Archives => "Archives",
            ContentCategory::Text => "Text",
            ContentCategory::Geospatial => "Geospatial",
            ContentCategory::ComputationalBiology => "ComputationalBiology",
            ContentCategory::Audio => "Audio",
            ContentCategory::Video => "Video",
            ContentCategory::Presentations => "Presentations",
            ContentCategory::MedicalImaging => "MedicalImaging",
            ContentCategory::Other => "Other",
        }
    }
}

impl fmt::Display for ContentCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ContentCategory {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        ContentCategory::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown content category {s:?}"))
    }
}

pub const FORMATS_FILE: &str = "formats.tsv";
pub const SEMWEB_FILE: &str = "semweb.tsv";

/// Format key (extension or MIME type) to category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatBuckets {
    map: HashMap<String, ContentCategory>,
}

impl FormatBuckets {
    pub fn parse(content: &str) -> Result<Self> {
        let mut map = HashMap::new();
        for line in tsv::lines(content) {
            line.expect(FORMATS_FILE, 2, 2)?;
            let key = line.fields[0].to_lowercase();
            let category = line.fields[1]
                .parse()
                .map_err(|e: String| Error::config(FORMATS_FILE, line.number, e))?;
            if map.insert(key.clone(), category).is_some() {
                return Err(Error::config(FORMATS_FILE, line.number, format!("duplicate format key {key:?}")));
            }
        }
        Ok(FormatBuckets { map })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Maps a raw format to its category; unmatched formats are `Other`.
    pub fn bucket(&self, raw_format: &str) -> ContentCategory {
        lookup_keys(raw_format)
            .into_iter()
            .find_map(|k| self.map.get(&k).copied())
            .unwrap_or(ContentCategory::Other)
    }
}

/// Candidate lookup keys for a raw format: the full value, then the MIME
/// subtype, then the subtype's structured-syntax suffix.
fn lookup_keys(raw_format: &str) -> Vec<String> {
    let f = raw_format.trim().trim_start_matches('.').to_lowercase();
    let mut keys = vec![f.clone()];
    if let Some((_, subtype)) = f.split_once('/') {
        keys.push(subtype.to_string());
        let sub = subtype.strip_prefix("x-").unwrap_or(subtype);
        keys.push(sub.to_string());
        if let Some((_, suffix)) = sub.rsplit_once('+') {
            keys.push(suffix.to_string());
        }
    }
    keys
}

/// The configured family of graph-data formats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemanticWebFormats {
    set: BTreeSet<String>,
}

impl SemanticWebFormats {
    pub fn parse(content: &str) -> Result<Self> {
        let mut set = BTreeSet::new();
        for line in tsv::lines(content) {
            line.expect(SEMWEB_FILE, 1, 2)?;
            set.insert(line.fields[0].to_lowercase());
        }
        Ok(SemanticWebFormats { set })
    }

    /// True when the format, or its MIME subtype, is in the configured set.
    pub fn contains(&self, raw_format: &str) -> bool {
        let keys = lookup_keys(raw_format);
        // The structured-syntax suffix alone ("xml" of "rdf+xml") must not count.
        let n = if raw_format.contains('/') { keys.len().min(3) } else { 1 };
        keys[..n].iter().any(|k| self.set.contains(k))
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.set.iter().map(String::as_str)
    }
}

/// A download location with its unbucketed format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDownload {
    pub download_url: String,
    pub raw_format: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DownloadExtraction {
    pub downloads: Vec<RawDownload>,
    pub diagnostics: Vec<String>,
}

const URL_PREDICATES: &[&str] = &[
    "http://schema.org/contentUrl",
    "http://schema.org/downloadUrl",
    "http://www.w3.org/ns/dcat#downloadURL",
    "http://schema.org/url",
    "http://www.w3.org/ns/dcat#accessURL",
];
const FILE_FORMAT: &[&str] = &["http://schema.org/fileFormat"];
const ENCODING: &[&str] = &["http://schema.org/encodingFormat", "http://schema.org/encodingType"];
const DCAT_FORMAT: &[&str] = &["http://www.w3.org/ns/dcat#mediaType", "http://purl.org/dc/terms/format"];

/// One entry per distribution: explicit `fileFormat`, else the encoding
/// format, else the DCAT media type, else the URL's file extension.
pub fn normalize_downloads(raw: &RawDatasetRecord) -> DownloadExtraction {
    let mut out = DownloadExtraction::default();
    for value in raw.raw_values(CanonicalProperty::DataDownload) {
        let (url, format) = match value {
            RawValue::Entity(e) => (e.first_text(URL_PREDICATES).or_else(|| e.id.clone()), entity_format(e)),
            RawValue::Iri(iri) => (Some(iri.clone()), None),
            RawValue::Text { value, .. } => (Some(value.trim().to_string()).filter(|v| !v.is_empty()), None),
        };
        let url = url.unwrap_or_default();
        let raw_format = match format {
            Some(f) => clean_format(&f),
            None => file_extension(&url).unwrap_or_default(),
        };
        if url.is_empty() && raw_format.is_empty() {
            out.diagnostics
                .push("distribution without download URL or format dropped".to_string());
            continue;
        }
        out.downloads.push(RawDownload {
            download_url: url,
            raw_format,
        });
    }
    out
}

fn entity_format(e: &RawEntity) -> Option<String> {
    [FILE_FORMAT, ENCODING, DCAT_FORMAT].iter().find_map(|preds| {
        preds
            .iter()
            .flat_map(|p| e.get(p))
            .filter_map(RawValue::display_text)
            .find(|t| !t.is_empty())
    })
}

const IANA_MEDIA_TYPES: &str = "iana.org/assignments/media-types/";

/// Lower-cases and strips MIME parameters. Format IRIs reduce to their
/// media type or last path segment.
pub fn clean_format(raw: &str) -> String {
    let mut f = raw.trim().to_lowercase();
    if let Some(i) = f.find(IANA_MEDIA_TYPES) {
        f = f[i + IANA_MEDIA_TYPES.len()..].to_string();
    } else if f.starts_with("http://") || f.starts_with("https://") {
        if let Ok(u) = Url::parse(&f) {
            if let Some(seg) = u.path_segments().and_then(|mut s| s.rfind(|seg| !seg.is_empty())) {
                f = seg.to_string();
            }
        }
    }
    let f = f.split(';').next().unwrap_or("").trim();
    f.trim_start_matches('.').to_string()
}

/// File extension of a download URL's last path segment, lower-cased.
pub fn file_extension(url: &str) -> Option<String> {
    let path = match Url::parse(url) {
        Ok(u) => u.path().to_string(),
        Err(_) => url.split(['?', '#']).next().unwrap_or("").to_string(),
    };
    let segment = path.rsplit('/').next()?;
    let (stem, ext) = segment.rsplit_once('.')?;
    if stem.is_empty() || ext.is_empty() || ext.len() > 10 || !ext.chars().all(|c| c.is_ascii_alphanumeric()) {
        return None;
    }
    Some(ext.to_ascii_lowercase())
}
