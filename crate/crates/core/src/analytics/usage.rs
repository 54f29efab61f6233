use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::model::DatasetRecord;
use crate::num::{ratio, Scalar};

use super::stats::{CountRow, NO_TOPIC};

#[derive(Debug, Clone, PartialEq)]
pub struct UsageReport<F> {
    pub log_entries: usize,
    pub distinct_ids: usize,
    pub matched: usize,
    pub unknown_count: usize,
    /// Matched datasets by highest-scoring topic; shares over `matched`.
    pub topics: Vec<CountRow<F>>,
}

/// Parses a result log: one dataset id per line, blank lines ignored.
pub fn parse_result_log(text: &str) -> Vec<String> {
    text.lines().map(str::trim).filter(|l| !l.is_empty()).map(str::to_string).collect()
}

/// Joins distinct logged ids with record topics.
pub fn usage_topic_distribution<F: Scalar>(log: &[String], records: &[DatasetRecord]) -> Result<UsageReport<F>> {
    if log.is_empty() {
        return Err(Error::EmptyLog);
    }
    let by_id: BTreeMap<&str, &DatasetRecord> = records.iter().map(|r| (r.id.as_str(), r)).collect();
    let distinct: BTreeSet<&str> = log.iter().map(String::as_str).collect();
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut matched = 0;
    for id in &distinct {
        if let Some(r) = by_id.get(id) {
            matched += 1;
            let topic = r.topics.first().map(|t| t.topic.as_str()).unwrap_or(NO_TOPIC);
            *counts.entry(topic.to_string()).or_default() += 1;
        }
    }
    let mut topics: Vec<CountRow<F>> = counts
        .into_iter()
        .map(|(key, count)| CountRow {
            key,
            count,
            share: ratio(count, matched),
        })
        .collect();
    topics.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.key.cmp(&b.key)));
    Ok(UsageReport {
        log_entries: log.len(),
        distinct_ids: distinct.len(),
        matched,
        unknown_count: distinct.len() - matched,
        topics,
    })
}
