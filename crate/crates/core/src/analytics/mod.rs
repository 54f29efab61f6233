//! Corpus statistics over snapshots.

mod churn;
mod powerlaw;
mod render;
mod stats;
mod usage;

pub use churn::{compute_churn, ChurnReport};
pub use powerlaw::{empirical_quantile, fit_power_law, fit_power_law_with_xmin, loglog_slope, PowerLawFit, MIN_TAIL_POINTS};
pub use render::{render_csv, render_markdown, write_report, ReportFormat};
pub use stats::{
    domain_size_distribution, format_stats, identifier_stats, language_breakdown, openness_stats,
    page_cardinality_stats, property_coverage, provider_stats, recency_histograms, tld_and_government,
    topic_distribution, vocabulary_share, CountRow, CoverageRow, DomainDistribution, FormatRow, FormatStats,
    IdentifierStats, LanguageRow, OpennessStats, PageCardinality, ProviderStats, RecencyStats, TldStats, MONTH_BINS,
    NO_TOPIC, UNKNOWN_LANGUAGE, YEAR_BINS,
};
pub use usage::{parse_result_log, usage_topic_distribution, UsageReport};

use chrono::NaiveDate;

use crate::config::NormalizationConfig;
use crate::error::Result;
use crate::num::Scalar;
use crate::store::CorpusSnapshot;

/// Every statistic of one snapshot, optionally compared with an older one.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticsReport<F> {
    pub snapshot_date: NaiveDate,
    pub comparison_date: Option<NaiveDate>,
    pub record_count: usize,
    pub domain_distribution: DomainDistribution<F>,
    pub page_cardinality: PageCardinality<F>,
    pub tlds: TldStats<F>,
    pub languages: Vec<LanguageRow<F>>,
    pub vocabulary: Vec<CountRow<F>>,
    pub coverage: Vec<CoverageRow<F>>,
    pub formats: FormatStats<F>,
    pub identifiers: IdentifierStats<F>,
    pub providers: ProviderStats<F>,
    pub openness: OpennessStats<F>,
    pub recency: RecencyStats<F>,
    pub topics: Vec<CountRow<F>>,
    pub churn: Option<ChurnReport<F>>,
}

/// Computes the full report. Recency is measured from the snapshot date.
pub fn compute_report<F: Scalar>(
    snapshot: &CorpusSnapshot,
    older: Option<&CorpusSnapshot>,
    config: &NormalizationConfig,
) -> Result<AnalyticsReport<F>> {
    let records = &snapshot.records;
    let s = &config.settings;
    Ok(AnalyticsReport {
        snapshot_date: snapshot.date(),
        comparison_date: older.map(CorpusSnapshot::date),
        record_count: records.len(),
        domain_distribution: domain_size_distribution(records, s.top_k_domains, s.powerlaw_quantile)?,
        page_cardinality: page_cardinality_stats(records),
        tlds: tld_and_government(records),
        languages: language_breakdown(records, older.map(|o| o.records.as_slice())),
        vocabulary: vocabulary_share(records),
        coverage: property_coverage(records),
        formats: format_stats(records, &config.semantic_web),
        identifiers: identifier_stats(records),
        providers: provider_stats(records, s.top_k_providers, s.small_provider_limit),
        openness: openness_stats(records),
        recency: recency_histograms(records, snapshot.date()),
        topics: topic_distribution(records),
        churn: older.map(|o| compute_churn(&o.records, records)),
    })
}
