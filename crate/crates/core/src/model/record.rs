use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::{CanonicalProperty, SourceVocabulary};
use crate::normalize::ContentCategory;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Download {
    pub download_url: String,
    pub raw_format: String,
    pub category: ContentCategory,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LicenseInfo {
    pub raw: String,
    pub class: String,
    pub allows_redistribution: bool,
    pub allows_commercial: bool,
}

impl LicenseInfo {
    pub fn is_recognized(&self) -> bool {
        self.class != crate::normalize::UNKNOWN_LICENSE
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordDates {
    pub created: Option<NaiveDate>,
    pub published: Option<NaiveDate>,
    pub modified: Option<NaiveDate>,
    pub page_modified: Option<NaiveDate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicScore {
    pub topic: String,
    pub score: f64,
}

/// Canonical, normalized description of one dataset.
///
/// Field order is the serialized key order of snapshot lines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub id: String,
    pub page_url: String,
    pub entity_index: usize,
    /// Number of dataset entities found on the page.
    pub page_dataset_count: usize,
    pub domain: String,
    pub tld: String,
    pub is_government: bool,
    pub language: Option<String>,
    pub title: String,
    pub description: String,
    pub providers: Vec<String>,
    pub keywords: Vec<String>,
    pub url: Option<String>,
    pub temporal_coverage: Option<String>,
    pub spatial_coverage: Option<String>,
    pub downloads: Vec<Download>,
    pub licenses: Vec<LicenseInfo>,
    pub is_accessible_for_free: Option<bool>,
    pub is_open: bool,
    pub dois: Vec<String>,
    pub compact_ids: Vec<String>,
    pub dates: RecordDates,
    pub last_updated: Option<NaiveDate>,
    pub catalog: Option<String>,
    pub variables: Vec<String>,
    pub authors: Vec<String>,
    pub same_as: Vec<String>,
    pub alternate_names: Vec<String>,
    pub identifiers: Vec<String>,
    pub topics: Vec<TopicScore>,
    pub source_vocabulary: SourceVocabulary,
}

impl DatasetRecord {
    /// Whether the record populates a canonical property, as counted by the
    /// coverage statistics.
    pub fn has(&self, property: CanonicalProperty) -> bool {
        match property {
            CanonicalProperty::Description => !self.description.is_empty(),
            CanonicalProperty::Title => !self.title.is_empty(),
            CanonicalProperty::Provider => !self.providers.is_empty(),
            CanonicalProperty::Keywords => !self.keywords.is_empty(),
            CanonicalProperty::Url => self.url.is_some(),
            CanonicalProperty::TemporalCoverage => self.temporal_coverage.is_some(),
            CanonicalProperty::DataDownload => !self.downloads.is_empty(),
            CanonicalProperty::SpatialCoverage => self.spatial_coverage.is_some(),
            CanonicalProperty::DateModified => self.dates.modified.is_some(),
            CanonicalProperty::License => !self.licenses.is_empty(),
            CanonicalProperty::DatePublished => self.dates.published.is_some(),
            CanonicalProperty::Catalog => self.catalog.is_some(),
            CanonicalProperty::Variable => !self.variables.is_empty(),
            CanonicalProperty::Authors => !self.authors.is_empty(),
            CanonicalProperty::SameAs => !self.same_as.is_empty(),
            CanonicalProperty::DateCreated => self.dates.created.is_some(),
            CanonicalProperty::AlternateName => !self.alternate_names.is_empty(),
            CanonicalProperty::IsAccessibleForFree => self.is_accessible_for_free.is_some(),
            CanonicalProperty::Identifier => !self.identifiers.is_empty(),
        }
    }

    /// Sort key of records inside a snapshot.
    pub fn sort_key(&self) -> (&str, &str, usize) {
        (&self.domain, &self.page_url, self.entity_index)
    }
}
