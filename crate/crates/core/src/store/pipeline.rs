use chrono::NaiveDate;
use rayon::prelude::*;

use crate::config::NormalizationConfig;
use crate::dedup::{dedup_within_site, filter_invalid};
use crate::error::Result;
use crate::extract::{extract_page_bytes, select_dataset_entities};
use crate::model::{map_entity_to_record, DatasetRecord};
use crate::normalize::{classify_domain, normalize_record, parse_date_with, PageContext};
use crate::topics::assign_topics;

use super::ingest::FetchedPage;
use super::snapshot::{CorpusSnapshot, StageCounters};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    pub snapshot_date: NaiveDate,
    /// Process pages on the rayon thread pool. Output is identical.
    pub parallel: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuildOutput {
    pub snapshot: CorpusSnapshot,
    /// Per-page diagnostics, prefixed with the page URL.
    pub diagnostics: Vec<String>,
}

/// Records of one page before corpus-level cleanup.
#[derive(Debug, Clone, PartialEq)]
pub struct PageResult {
    pub records: Vec<DatasetRecord>,
    pub entities: usize,
    pub skipped: bool,
    pub diagnostics: Vec<String>,
}

/// Extract, map, normalize and score topics for one page.
pub fn process_page(page: &FetchedPage, config: &NormalizationConfig) -> PageResult {
    let url = page.page_url.as_str();
    let mut diagnostics = Vec::new();
    if let Err(e) = classify_domain(url, &config.government) {
        return PageResult {
            records: Vec::new(),
            entities: 0,
            skipped: true,
            diagnostics: vec![format!("{url}: {e}")],
        };
    }
    let extracted = extract_page_bytes(&page.html, url);
    diagnostics.extend(extracted.graph.diagnostics.iter().map(|d| format!("{url}: {d}")));
    let entities = select_dataset_entities(&extracted.graph);
    let order = config.settings.date_order;
    let page_modified = page
        .last_modified
        .as_deref()
        .or(extracted.meta.last_modified.as_deref())
        .and_then(|raw| parse_date_with(raw, order));
    let context = PageContext {
        page_url: url,
        html_lang: extracted.meta.html_lang.as_deref(),
        content_language: page.content_language.as_deref().or(extracted.meta.content_language.as_deref()),
        page_modified,
        page_dataset_count: entities.len(),
    };
    let mut records = Vec::with_capacity(entities.len());
    for (i, entity) in entities.iter().enumerate() {
        let raw = map_entity_to_record(entity, url, i, &config.mapping);
        match normalize_record(&raw, &context, config) {
            Ok(n) => {
                diagnostics.extend(n.diagnostics.into_iter().map(|d| format!("{url}#{i}: {d}")));
                let mut record = n.record;
                record.topics = assign_topics(
                    &record,
                    Some(&extracted.meta.text),
                    &config.lexicon,
                    config.settings.field_weights,
                    config.settings.topic_threshold,
                );
                records.push(record);
            }
            Err(e) => diagnostics.push(format!("{url}#{i}: {e}")),
        }
    }
    PageResult {
        entities: entities.len(),
        records,
        skipped: false,
        diagnostics,
    }
}

/// extract → map → normalize → topics → filter_invalid → dedup.
pub fn build_snapshot(pages: &[FetchedPage], config: &NormalizationConfig, options: BuildOptions) -> Result<BuildOutput> {
    let results: Vec<PageResult> = if options.parallel {
        pages.par_iter().map(|p| process_page(p, config)).collect()
    } else {
        pages.iter().map(|p| process_page(p, config)).collect()
    };
    let mut counters = StageCounters {
        pages_seen: pages.len(),
        ..Default::default()
    };
    let mut diagnostics = Vec::new();
    let mut records = Vec::new();
    for r in results {
        counters.pages_skipped += r.skipped as usize;
        // Entities that failed normalization count as invalid.
        counters.entities += r.entities;
        counters.invalid_dropped += r.entities - r.records.len();
        diagnostics.extend(r.diagnostics);
        records.extend(r.records);
    }
    let (valid, filter) = filter_invalid(records);
    counters.invalid_dropped += filter.dropped;
    let (deduped, collapsed) = dedup_within_site(valid);
    counters.duplicates_collapsed = collapsed;
    counters.records = deduped.len();
    debug_assert!(counters.is_conserved());
    let snapshot = CorpusSnapshot::new(options.snapshot_date, deduped, config.checksums.clone(), counters)?;
    Ok(BuildOutput { snapshot, diagnostics })
}
