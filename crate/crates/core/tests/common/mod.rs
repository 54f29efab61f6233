#![allow(dead_code)]

use chrono::NaiveDate;
use dsmeta::model::{Download, LicenseInfo, RecordDates, SourceVocabulary};
use dsmeta::normalize::ContentCategory;
use dsmeta::DatasetRecord;
use rand::seq::IndexedRandom;
use rand::Rng;

pub fn blank_record() -> DatasetRecord {
    DatasetRecord {
        id: String::new(),
        page_url: "https://x.org/".into(),
        entity_index: 0,
        page_dataset_count: 1,
        domain: "x.org".into(),
        tld: "org".into(),
        is_government: false,
        language: None,
        title: String::new(),
        description: String::new(),
        providers: vec![],
        keywords: vec![],
        url: None,
        temporal_coverage: None,
        spatial_coverage: None,
        downloads: vec![],
        licenses: vec![],
        is_accessible_for_free: None,
        is_open: false,
        dois: vec![],
        compact_ids: vec![],
        dates: RecordDates::default(),
        last_updated: None,
        catalog: None,
        variables: vec![],
        authors: vec![],
        same_as: vec![],
        alternate_names: vec![],
        identifiers: vec![],
        topics: vec![],
        source_vocabulary: SourceVocabulary::SchemaOrg,
    }
}

pub fn date(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).unwrap()
}

fn maybe<R: Rng>(rng: &mut R, p: f64, s: &str) -> Option<String> {
    rng.random_bool(p).then(|| s.to_string())
}

/// A record drawn from small pools so that domains, titles and download
/// sets repeat often.
pub fn random_record<R: Rng>(rng: &mut R, reference: NaiveDate) -> DatasetRecord {
    let domains = ["a.org", "b.org", "c.gov", "d.de"];
    let titles = ["Rain", "Rain ", "rain", "Soil", "Births", "Wind speed", ""];
    let providers = ["Met Office", "met office", "Survey Ltd", "Bureau"];
    let domain = *domains.choose(rng).unwrap();
    let page_count = rng.random_range(1..4);
    let mut r = blank_record();
    r.domain = domain.into();
    r.page_url = format!("https://www.{domain}/p{}", rng.random_range(0..6));
    r.entity_index = rng.random_range(0..page_count);
    r.page_dataset_count = page_count;
    r.title = titles.choose(rng).unwrap().to_string();
    r.description = if rng.random_bool(0.9) { "desc".into() } else { String::new() };
    if rng.random_bool(0.8) {
        r.providers = vec![providers.choose(rng).unwrap().to_string()];
    }
    for _ in 0..rng.random_range(0..3) {
        r.downloads.push(Download {
            download_url: format!("https://{domain}/f{}.csv", rng.random_range(0..3)),
            raw_format: "csv".into(),
            category: ContentCategory::Tables,
        });
    }
    if rng.random_bool(0.5) {
        r.keywords = vec!["k".into()];
    }
    r.url = maybe(rng, 0.3, "https://x.org/u");
    r.temporal_coverage = maybe(rng, 0.3, "2010/2020");
    r.spatial_coverage = maybe(rng, 0.3, "Europe");
    r.catalog = maybe(rng, 0.1, "c");
    if rng.random_bool(0.4) {
        r.licenses = vec![LicenseInfo {
            raw: "CC0".into(),
            class: "cc0".into(),
            allows_redistribution: true,
            allows_commercial: true,
        }];
    }
    if rng.random_bool(0.2) {
        r.is_accessible_for_free = Some(rng.random_bool(0.5));
    }
    if rng.random_bool(0.2) {
        r.variables = vec!["v".into()];
    }
    if rng.random_bool(0.2) {
        r.authors = vec!["a".into()];
    }
    if rng.random_bool(0.1) {
        r.same_as = vec!["s".into()];
    }
    if rng.random_bool(0.1) {
        r.alternate_names = vec!["n".into()];
    }
    if rng.random_bool(0.2) {
        r.identifiers = vec!["i".into()];
    }
    let some_date = |p: f64, rng: &mut R| {
        rng.random_bool(p)
            .then(|| reference - chrono::Days::new(rng.random_range(0..2400)) + chrono::Days::new(20))
    };
    r.dates.modified = some_date(0.4, rng);
    r.dates.published = some_date(0.3, rng);
    r.dates.created = some_date(0.2, rng);
    r.dates.page_modified = some_date(0.2, rng);
    r.last_updated = dsmeta::normalize::resolve_last_updated(&r.dates);
    r
}
