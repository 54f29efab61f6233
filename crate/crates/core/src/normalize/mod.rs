//! Cleaning and derivation of record values.

mod dates;
mod domain;
mod formats;
mod identifiers;
mod language;
mod license;
mod provider;

pub use dates::{parse_date, parse_date_with, resolve_last_updated, DateOrder};
pub use domain::{classify_domain, DomainInfo, GovernmentPattern, GovernmentPatterns, GOVERNMENT_FILE};
pub use formats::{
    clean_format, file_extension, normalize_downloads, ContentCategory, DownloadExtraction, FormatBuckets,
    RawDownload, SemanticWebFormats, FORMATS_FILE, SEMWEB_FILE,
};
pub use identifiers::{extract_identifiers, scan_text, Identifiers, PrefixRegistry, DOI_PATTERN, PREFIXES_FILE};
pub use language::{detect_language, primary_subtag, LanguageSignals};
pub use license::{
    compute_openness, LicenseClass, LicensePattern, LicenseTable, PatternKind, LICENSES_FILE, UNKNOWN_LICENSE,
};
pub use provider::{canonical_provider_name, resolve_provider, ResolvedProviders};

use chrono::NaiveDate;

use crate::config::NormalizationConfig;
use crate::error::Result;
use crate::model::{CanonicalProperty, DatasetRecord, Download, LicenseInfo, RawDatasetRecord, RawValue, RecordDates};

/// Maps a raw format through the configured bucket map.
pub fn bucket_format(raw_format: &str, config: &NormalizationConfig) -> ContentCategory {
    config.formats.bucket(raw_format)
}

pub fn is_semantic_web_format(raw_format: &str, config: &NormalizationConfig) -> bool {
    config.semantic_web.contains(raw_format)
}

pub fn classify_license(raw: &str, config: &NormalizationConfig) -> LicenseClass {
    config.licenses.classify(raw)
}

/// Page-level facts needed to normalize the records found on it.
#[derive(Debug, Clone, Copy, Default)]
pub struct PageContext<'a> {
    pub page_url: &'a str,
    pub html_lang: Option<&'a str>,
    pub content_language: Option<&'a str>,
    pub page_modified: Option<NaiveDate>,
    pub page_dataset_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedRecord {
    pub record: DatasetRecord,
    pub diagnostics: Vec<String>,
}

fn collapse(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn first_text(raw: &RawDatasetRecord, property: CanonicalProperty) -> Option<String> {
    raw.texts(property).iter().map(|t| collapse(t)).find(|t| !t.is_empty())
}

fn all_texts(raw: &RawDatasetRecord, property: CanonicalProperty) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for t in raw.texts(property) {
        let t = collapse(&t);
        if !t.is_empty() && !out.contains(&t) {
            out.push(t);
        }
    }
    out
}

/// Comma-separated keyword lists are split; duplicates are dropped
/// case-insensitively, keeping the first spelling.
fn keywords(raw: &RawDatasetRecord) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for t in raw.texts(CanonicalProperty::Keywords) {
        for k in t.split(',') {
            let k = collapse(k);
            if !k.is_empty() && !out.iter().any(|x| x.to_lowercase() == k.to_lowercase()) {
                out.push(k);
            }
        }
    }
    out
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "http://schema.org/true" => Some(true),
        "false" | "no" | "0" | "http://schema.org/false" => Some(false),
        _ => None,
    }
}

fn latest_date(
    raw: &RawDatasetRecord,
    property: CanonicalProperty,
    order: DateOrder,
    diagnostics: &mut Vec<String>,
) -> Option<NaiveDate> {
    let mut best = None;
    for t in raw.texts(property) {
        match parse_date_with(&t, order) {
            Some(d) => best = best.max(Some(d)),
            None => diagnostics.push(format!("unparseable {property} value {t:?}")),
        }
    }
    best
}

/// Normalizes one mapped record. The id is left empty and topics are not
/// scored; deduplication and topic assignment fill those in.
pub fn normalize_record(
    raw: &RawDatasetRecord,
    page: &PageContext<'_>,
    config: &NormalizationConfig,
) -> Result<NormalizedRecord> {
    let mut diagnostics = Vec::new();
    let domain = classify_domain(page.page_url, &config.government)?;

    let mut provider_values: Vec<&RawValue> = raw.raw_values(CanonicalProperty::Provider).collect();
    if provider_values.is_empty() {
        provider_values = raw
            .get(CanonicalProperty::Authors)
            .iter()
            .filter(|v| v.source == "http://schema.org/creator")
            .map(|v| &v.value)
            .collect();
    }
    let providers = resolve_provider(provider_values);
    diagnostics.extend(providers.diagnostics);

    let extraction = normalize_downloads(raw);
    diagnostics.extend(extraction.diagnostics);
    let downloads = extraction
        .downloads
        .into_iter()
        .map(|d| Download {
            category: config.formats.bucket(&d.raw_format),
            download_url: d.download_url,
            raw_format: d.raw_format,
        })
        .collect();

    let mut licenses: Vec<LicenseInfo> = Vec::new();
    for value in raw.raw_values(CanonicalProperty::License) {
        let Some(display) = value.display_text() else { continue };
        let display = collapse(&display);
        if licenses.iter().any(|l| l.raw == display) {
            continue;
        }
        let class = config.licenses.classify(&value.all_texts().join(" "));
        licenses.push(LicenseInfo {
            raw: display,
            class: class.class_id,
            allows_redistribution: class.allows_redistribution,
            allows_commercial: class.allows_commercial,
        });
    }

    let is_accessible_for_free = raw
        .texts(CanonicalProperty::IsAccessibleForFree)
        .iter()
        .find_map(|t| parse_bool(t));
    let classes: Vec<LicenseClass> = licenses
        .iter()
        .map(|l| LicenseClass {
            class_id: l.class.clone(),
            allows_redistribution: l.allows_redistribution,
            allows_commercial: l.allows_commercial,
        })
        .collect();
    let is_open = compute_openness(&classes, is_accessible_for_free);

    let ids = extract_identifiers(raw, &config.prefixes);
    let order = config.settings.date_order;
    let dates = RecordDates {
        created: latest_date(raw, CanonicalProperty::DateCreated, order, &mut diagnostics),
        published: latest_date(raw, CanonicalProperty::DatePublished, order, &mut diagnostics),
        modified: latest_date(raw, CanonicalProperty::DateModified, order, &mut diagnostics),
        page_modified: page.page_modified,
    };
    let language = detect_language(LanguageSignals {
        html_lang: page.html_lang,
        content_language: page.content_language,
        literal_languages: &raw.literal_languages,
    });

    let record = DatasetRecord {
        id: String::new(),
        page_url: page.page_url.to_string(),
        entity_index: raw.entity_index,
        page_dataset_count: page.page_dataset_count,
        domain: domain.domain,
        tld: domain.tld,
        is_government: domain.is_government,
        language,
        title: first_text(raw, CanonicalProperty::Title).unwrap_or_default(),
        description: first_text(raw, CanonicalProperty::Description).unwrap_or_default(),
        providers: providers.names,
        keywords: keywords(raw),
        url: first_text(raw, CanonicalProperty::Url),
        temporal_coverage: first_text(raw, CanonicalProperty::TemporalCoverage),
        spatial_coverage: first_text(raw, CanonicalProperty::SpatialCoverage),
        downloads,
        licenses,
        is_accessible_for_free,
        is_open,
        dois: ids.dois,
        compact_ids: ids.compact_ids,
        last_updated: resolve_last_updated(&dates),
        dates,
        catalog: first_text(raw, CanonicalProperty::Catalog),
        variables: all_texts(raw, CanonicalProperty::Variable),
        authors: all_texts(raw, CanonicalProperty::Authors),
        same_as: all_texts(raw, CanonicalProperty::SameAs),
        alternate_names: all_texts(raw, CanonicalProperty::AlternateName),
        identifiers: all_texts(raw, CanonicalProperty::Identifier),
        topics: Vec::new(),
        source_vocabulary: raw.source_vocabulary,
    };
    Ok(NormalizedRecord { record, diagnostics })
}
