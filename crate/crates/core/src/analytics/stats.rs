use std::collections::{BTreeMap, BTreeSet};

use chrono::{Months, NaiveDate};

use crate::error::{Error, Result};
use crate::model::{CanonicalProperty, DatasetRecord, SourceVocabulary};
use crate::normalize::{ContentCategory, SemanticWebFormats};
use crate::num::{ratio, Scalar};

use super::powerlaw::{fit_power_law, PowerLawFit};

/// A labelled count with its share of the table's stated population.
#[derive(Debug, Clone, PartialEq)]
pub struct CountRow<F> {
    pub key: String,
    pub count: usize,
    pub share: F,
}

/// Rows sorted by count descending, then key.
fn count_rows<F: Scalar>(counts: BTreeMap<String, usize>, population: usize) -> Vec<CountRow<F>> {
    let mut rows: Vec<CountRow<F>> = counts
        .into_iter()
        .map(|(key, count)| CountRow {
            key,
            count,
            share: ratio(count, population),
        })
        .collect();
    rows.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.key.cmp(&b.key)));
    rows
}

fn tally<'a>(keys: impl IntoIterator<Item = &'a str>) -> BTreeMap<String, usize> {
    let mut m = BTreeMap::new();
    for k in keys {
        *m.entry(k.to_string()).or_default() += 1;
    }
    m
}

fn non_empty(records: &[DatasetRecord]) -> Result<()> {
    if records.is_empty() {
        Err(Error::EmptySnapshot)
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainDistribution<F> {
    pub total: usize,
    /// Every domain, largest first; shares over all records.
    pub counts: Vec<CountRow<F>>,
    pub top_k: usize,
    pub top_k_share: F,
    pub power_law: Option<PowerLawFit<F>>,
    /// Why no fit is available, when it is not.
    pub power_law_error: Option<String>,
}

pub fn domain_size_distribution<F: Scalar>(
    records: &[DatasetRecord],
    top_k: usize,
    quantile: f64,
) -> Result<DomainDistribution<F>> {
    non_empty(records)?;
    let counts = count_rows::<F>(tally(records.iter().map(|r| r.domain.as_str())), records.len());
    let top: usize = counts.iter().take(top_k).map(|r| r.count).sum();
    let sizes: Vec<F> = counts.iter().map(|r| F::from_usize_lossy(r.count)).collect();
    let (power_law, power_law_error) = match fit_power_law(&sizes, quantile) {
        Ok(fit) => (Some(fit), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(DomainDistribution {
        total: records.len(),
        counts,
        top_k,
        top_k_share: ratio(top, records.len()),
        power_law,
        power_law_error,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PageCardinality<F> {
    pub total: usize,
    pub single_page_records: usize,
    pub single_page_fraction: F,
    /// Records from pages that hold more than ten datasets.
    pub gt10_count: usize,
}

pub fn page_cardinality_stats<F: Scalar>(records: &[DatasetRecord]) -> PageCardinality<F> {
    let single = records.iter().filter(|r| r.page_dataset_count == 1).count();
    PageCardinality {
        total: records.len(),
        single_page_records: single,
        single_page_fraction: ratio(single, records.len()),
        gt10_count: records.iter().filter(|r| r.page_dataset_count > 10).count(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TldStats<F> {
    pub rows: Vec<CountRow<F>>,
    pub government_count: usize,
    pub government_share: F,
}

pub fn tld_and_government<F: Scalar>(records: &[DatasetRecord]) -> TldStats<F> {
    let government = records.iter().filter(|r| r.is_government).count();
    TldStats {
        rows: count_rows(tally(records.iter().map(|r| r.tld.as_str())), records.len()),
        government_count: government,
        government_share: ratio(government, records.len()),
    }
}

pub const UNKNOWN_LANGUAGE: &str = "unknown";

#[derive(Debug, Clone, PartialEq)]
pub struct LanguageRow<F> {
    pub language: String,
    pub count: usize,
    pub share: F,
    pub previous: Option<usize>,
    /// `(count - previous) / previous`; absent without a comparison or
    /// when the language was absent before.
    pub change: Option<F>,
}

pub fn language_breakdown<F: Scalar>(records: &[DatasetRecord], older: Option<&[DatasetRecord]>) -> Vec<LanguageRow<F>> {
    let lang = |r: &DatasetRecord| r.language.clone().unwrap_or_else(|| UNKNOWN_LANGUAGE.to_string());
    let current = count_rows::<F>(tally(records.iter().map(lang).collect::<Vec<_>>().iter().map(String::as_str)), records.len());
    let old: Option<BTreeMap<String, usize>> =
        older.map(|o| tally(o.iter().map(lang).collect::<Vec<_>>().iter().map(String::as_str)));
    current
        .into_iter()
        .map(|row| {
            let previous = old.as_ref().map(|o| o.get(&row.key).copied().unwrap_or(0));
            let change = previous.filter(|&p| p > 0).map(|p| {
                (F::from_usize_lossy(row.count) - F::from_usize_lossy(p)) / F::from_usize_lossy(p)
            });
            LanguageRow {
                language: row.key,
                count: row.count,
                share: row.share,
                previous,
                change,
            }
        })
        .collect()
}

pub fn vocabulary_share<F: Scalar>(records: &[DatasetRecord]) -> Vec<CountRow<F>> {
    let mut counts: BTreeMap<String, usize> = [SourceVocabulary::SchemaOrg, SourceVocabulary::Dcat, SourceVocabulary::Mixed]
        .iter()
        .map(|v| (v.to_string(), 0))
        .collect();
    for r in records {
        *counts.get_mut(&r.source_vocabulary.to_string()).expect("all vocabularies listed") += 1;
    }
    count_rows(counts, records.len())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageRow<F> {
    pub property: CanonicalProperty,
    pub count: usize,
    pub share: F,
}

/// Share of records populating each canonical property, in table order.
pub fn property_coverage<F: Scalar>(records: &[DatasetRecord]) -> Vec<CoverageRow<F>> {
    CanonicalProperty::ALL
        .iter()
        .map(|&property| {
            let count = records.iter().filter(|r| r.has(property)).count();
            CoverageRow {
                property,
                count,
                share: ratio(count, records.len()),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormatRow<F> {
    pub category: ContentCategory,
    /// Download-bearing records with at least one download in the category.
    pub datasets: usize,
    pub dataset_share: F,
    /// Individual downloads in the category; this column partitions all downloads.
    pub downloads: usize,
    pub download_share: F,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormatStats<F> {
    pub download_bearing: usize,
    pub total_downloads: usize,
    pub rows: Vec<FormatRow<F>>,
    pub semantic_web_count: usize,
    /// Over download-bearing records.
    pub semantic_web_share: F,
}

pub fn format_stats<F: Scalar>(records: &[DatasetRecord], semantic_web: &SemanticWebFormats) -> FormatStats<F> {
    let bearing: Vec<&DatasetRecord> = records.iter().filter(|r| !r.downloads.is_empty()).collect();
    let total_downloads: usize = bearing.iter().map(|r| r.downloads.len()).sum();
    let mut rows: Vec<FormatRow<F>> = ContentCategory::ALL
        .iter()
        .map(|&category| {
            let datasets = bearing
                .iter()
                .filter(|r| r.downloads.iter().any(|d| d.category == category))
                .count();
            let downloads = bearing
                .iter()
                .flat_map(|r| &r.downloads)
                .filter(|d| d.category == category)
                .count();
            FormatRow {
                category,
                datasets,
                dataset_share: ratio(datasets, bearing.len()),
                downloads,
                download_share: ratio(downloads, total_downloads),
            }
        })
        .collect();
    rows.sort_by(|a, b| b.datasets.cmp(&a.datasets).then_with(|| a.category.cmp(&b.category)));
    let semantic = bearing
        .iter()
        .filter(|r| r.downloads.iter().any(|d| semantic_web.contains(&d.raw_format)))
        .count();
    FormatStats {
        download_bearing: bearing.len(),
        total_downloads,
        rows,
        semantic_web_count: semantic,
        semantic_web_share: ratio(semantic, bearing.len()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentifierStats<F> {
    pub doi_count: usize,
    /// Over all records.
    pub doi_share: F,
    /// Records with a DOI per domain; shares over `doi_count`.
    pub doi_by_domain: Vec<CountRow<F>>,
    pub compact_id_count: usize,
    pub compact_id_share: F,
    pub compact_id_by_domain: Vec<CountRow<F>>,
    /// Records per compact-identifier prefix; shares over `compact_id_count`.
    pub compact_id_by_prefix: Vec<CountRow<F>>,
}

pub fn identifier_stats<F: Scalar>(records: &[DatasetRecord]) -> IdentifierStats<F> {
    let with_doi: Vec<&DatasetRecord> = records.iter().filter(|r| !r.dois.is_empty()).collect();
    let with_cid: Vec<&DatasetRecord> = records.iter().filter(|r| !r.compact_ids.is_empty()).collect();
    let prefixes = tally(with_cid.iter().flat_map(|r| {
        r.compact_ids
            .iter()
            .filter_map(|c| c.split_once(':').map(|(p, _)| p))
            .collect::<BTreeSet<_>>()
    }));
    IdentifierStats {
        doi_count: with_doi.len(),
        doi_share: ratio(with_doi.len(), records.len()),
        doi_by_domain: count_rows(tally(with_doi.iter().map(|r| r.domain.as_str())), with_doi.len()),
        compact_id_count: with_cid.len(),
        compact_id_share: ratio(with_cid.len(), records.len()),
        compact_id_by_domain: count_rows(tally(with_cid.iter().map(|r| r.domain.as_str())), with_cid.len()),
        compact_id_by_prefix: count_rows(prefixes, with_cid.len()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProviderStats<F> {
    pub total: usize,
    pub records_with_provider: usize,
    pub provider_count: usize,
    pub top_k: usize,
    /// Largest providers; shares over all records.
    pub top_providers: Vec<CountRow<F>>,
    pub top_k_share: F,
    pub small_provider_limit: usize,
    pub small_provider_count: usize,
    /// Over `provider_count`.
    pub small_provider_fraction: F,
}

/// Records are attributed to their first provider.
pub fn provider_stats<F: Scalar>(records: &[DatasetRecord], top_k: usize, small_limit: usize) -> ProviderStats<F> {
    let rows = count_rows::<F>(
        tally(records.iter().filter_map(|r| r.providers.first().map(String::as_str))),
        records.len(),
    );
    let with_provider: usize = rows.iter().map(|r| r.count).sum();
    let top: Vec<CountRow<F>> = rows.iter().take(top_k).cloned().collect();
    let small = rows.iter().filter(|r| r.count < small_limit).count();
    ProviderStats {
        total: records.len(),
        records_with_provider: with_provider,
        provider_count: rows.len(),
        top_k,
        top_k_share: ratio(top.iter().map(|r| r.count).sum(), records.len()),
        top_providers: top,
        small_provider_limit: small_limit,
        small_provider_count: small,
        small_provider_fraction: ratio(small, rows.len()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpennessStats<F> {
    pub total: usize,
    pub with_license: usize,
    /// `with_license / total`.
    pub license_coverage: F,
    /// Records with at least one recognized license.
    pub recognized: usize,
    /// `recognized / with_license`.
    pub recognized_share: F,
    pub recognized_open: usize,
    /// `recognized_open / recognized`.
    pub open_share: F,
    pub recognized_open_commercial: usize,
    /// `recognized_open_commercial / recognized_open`.
    pub commercial_share: F,
    pub free_flag: usize,
    /// `free_flag / total`.
    pub free_flag_share: F,
    pub open: usize,
    /// `open / total`.
    pub open_overall_share: F,
}

pub fn openness_stats<F: Scalar>(records: &[DatasetRecord]) -> OpennessStats<F> {
    let with_license = records.iter().filter(|r| !r.licenses.is_empty()).count();
    let recognized: Vec<&DatasetRecord> = records
        .iter()
        .filter(|r| r.licenses.iter().any(|l| l.is_recognized()))
        .collect();
    let open: Vec<&&DatasetRecord> = recognized.iter().filter(|r| r.is_open).collect();
    let commercial = open
        .iter()
        .filter(|r| r.licenses.iter().any(|l| l.is_recognized() && l.allows_commercial))
        .count();
    let free = records.iter().filter(|r| r.is_accessible_for_free == Some(true)).count();
    let open_all = records.iter().filter(|r| r.is_open).count();
    OpennessStats {
        total: records.len(),
        with_license,
        license_coverage: ratio(with_license, records.len()),
        recognized: recognized.len(),
        recognized_share: ratio(recognized.len(), with_license),
        recognized_open: open.len(),
        open_share: ratio(open.len(), recognized.len()),
        recognized_open_commercial: commercial,
        commercial_share: ratio(commercial, open.len()),
        free_flag: free,
        free_flag_share: ratio(free, records.len()),
        open: open_all,
        open_overall_share: ratio(open_all, records.len()),
    }
}

pub const MONTH_BINS: usize = 12;
pub const YEAR_BINS: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct RecencyStats<F> {
    pub reference_date: NaiveDate,
    pub total: usize,
    pub dated: usize,
    /// `dated / total`.
    pub known_date_share: F,
    /// Bin `i` holds dates in `(ref - (i+1) months, ref - i months]`.
    pub monthly: [usize; MONTH_BINS],
    /// Bin `j` holds dates in `(ref - (j+1) years, ref - j years]`.
    pub yearly: [usize; YEAR_BINS],
    pub future: usize,
    pub older: usize,
    /// `yearly[0] / dated`.
    pub past_year_share: F,
}

fn months_back(reference: NaiveDate, months: u32) -> NaiveDate {
    reference.checked_sub_months(Months::new(months)).unwrap_or(NaiveDate::MIN)
}

/// Histograms of `last_updated` relative to `reference`.
pub fn recency_histograms<F: Scalar>(records: &[DatasetRecord], reference: NaiveDate) -> RecencyStats<F> {
    let mut monthly = [0; MONTH_BINS];
    let mut yearly = [0; YEAR_BINS];
    let (mut future, mut older, mut dated) = (0, 0, 0);
    for d in records.iter().filter_map(|r| r.last_updated) {
        dated += 1;
        if d > reference {
            future += 1;
            continue;
        }
        if let Some(i) = (0..MONTH_BINS as u32).find(|&i| d > months_back(reference, i + 1)) {
            monthly[i as usize] += 1;
        }
        match (0..YEAR_BINS as u32).find(|&j| d > months_back(reference, 12 * (j + 1))) {
            Some(j) => yearly[j as usize] += 1,
            None => older += 1,
        }
    }
    RecencyStats {
        reference_date: reference,
        total: records.len(),
        dated,
        known_date_share: ratio(dated, records.len()),
        monthly,
        yearly,
        future,
        older,
        past_year_share: ratio(yearly[0], dated),
    }
}

pub const NO_TOPIC: &str = "none";

/// Records by their highest-scoring topic; shares over all records.
pub fn topic_distribution<F: Scalar>(records: &[DatasetRecord]) -> Vec<CountRow<F>> {
    count_rows(
        tally(records.iter().map(|r| r.topics.first().map(|t| t.topic.as_str()).unwrap_or(NO_TOPIC))),
        records.len(),
    )
}
