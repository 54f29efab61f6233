use std::collections::BTreeSet;

use crate::model::DatasetRecord;
use crate::num::{ratio, Scalar};

/// Turnover of distinct page URLs between two snapshots.
#[derive(Debug, Clone, PartialEq)]
pub struct ChurnReport<F> {
    pub old_urls: usize,
    pub new_urls: usize,
    pub retained: usize,
    pub disappeared: usize,
    pub new: usize,
    /// `retained / old_urls`.
    pub retention_share: F,
}

pub fn compute_churn<F: Scalar>(old: &[DatasetRecord], new: &[DatasetRecord]) -> ChurnReport<F> {
    let a: BTreeSet<&str> = old.iter().map(|r| r.page_url.as_str()).collect();
    let b: BTreeSet<&str> = new.iter().map(|r| r.page_url.as_str()).collect();
    let retained = a.intersection(&b).count();
    ChurnReport {
        old_urls: a.len(),
        new_urls: b.len(),
        retained,
        disappeared: a.len() - retained,
        new: b.len() - retained,
        retention_share: ratio(retained, a.len()),
    }
}
