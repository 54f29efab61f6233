//! Corpus cleanup: invalid-record filtering and per-site deduplication.

use std::collections::{BTreeMap, BTreeSet};

use sha2::{Digest, Sha256};

use crate::model::DatasetRecord;

/// Fingerprint of a record's key properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DatasetKey([u8; 32]);

impl DatasetKey {
    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }
}

fn normalize_title(title: &str) -> String {
    title
        .to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

/// The canonical text hashed into a [`DatasetKey`]: normalized title, first
/// provider and the sorted distinct download URLs.
pub fn key_text(record: &DatasetRecord) -> String {
    let urls: BTreeSet<&str> = record
        .downloads
        .iter()
        .map(|d| d.download_url.as_str())
        .filter(|u| !u.is_empty())
        .collect();
    format!(
        "{}\x1f{}\x1f{}",
        normalize_title(&record.title),
        record.providers.first().map(String::as_str).unwrap_or(""),
        urls.into_iter().collect::<Vec<_>>().join("\x1e")
    )
}

pub fn dataset_key(record: &DatasetRecord) -> DatasetKey {
    DatasetKey(Sha256::digest(key_text(record).as_bytes()).into())
}

/// Hex digest of key and domain, 32 characters.
pub fn record_id(key: &DatasetKey, domain: &str) -> String {
    let mut h = Sha256::new();
    h.update(key.0);
    h.update([0x1f]);
    h.update(domain.as_bytes());
    hex::encode(h.finalize())[..32].to_string()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FilterReport {
    pub kept: usize,
    pub dropped: usize,
    pub missing_title: usize,
    pub missing_description: usize,
}

/// Drops records without a non-empty title or description.
pub fn filter_invalid(records: Vec<DatasetRecord>) -> (Vec<DatasetRecord>, FilterReport) {
    let mut report = FilterReport::default();
    let kept: Vec<DatasetRecord> = records
        .into_iter()
        .filter(|r| {
            let no_title = r.title.trim().is_empty();
            let no_description = r.description.trim().is_empty();
            report.missing_title += no_title as usize;
            report.missing_description += no_description as usize;
            let ok = !no_title && !no_description;
            report.dropped += !ok as usize;
            ok
        })
        .collect();
    report.kept = kept.len();
    (kept, report)
}

fn preference(r: &DatasetRecord) -> (bool, &str, usize) {
    (r.page_dataset_count != 1, &r.page_url, r.entity_index)
}

/// Collapses records that share a domain and a key. The survivor comes from
/// a single-dataset page when there is one, then from the smallest page URL.
/// Output is sorted by (domain, page_url, entity_index) and carries ids.
pub fn dedup_within_site(records: Vec<DatasetRecord>) -> (Vec<DatasetRecord>, usize) {
    let total = records.len();
    let mut best: BTreeMap<(String, DatasetKey), DatasetRecord> = BTreeMap::new();
    for r in records {
        let key = dataset_key(&r);
        match best.entry((r.domain.clone(), key)) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(r);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                if preference(&r) < preference(o.get()) {
                    o.insert(r);
                }
            }
        }
    }
    let mut out: Vec<DatasetRecord> = best
        .into_iter()
        .map(|((domain, key), mut r)| {
            r.id = record_id(&key, &domain);
            r
        })
        .collect();
    out.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    let collapsed = total - out.len();
    (out, collapsed)
}

/// A key shared by records on more than one domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyCollision {
    pub key: String,
    pub title: String,
    pub domains: Vec<String>,
}

/// Cross-site duplicates, reported but never merged.
pub fn cross_site_collisions(records: &[DatasetRecord]) -> Vec<KeyCollision> {
    let mut by_key: BTreeMap<DatasetKey, (String, BTreeSet<String>)> = BTreeMap::new();
    for r in records {
        by_key
            .entry(dataset_key(r))
            .or_insert_with(|| (r.title.clone(), BTreeSet::new()))
            .1
            .insert(r.domain.clone());
    }
    by_key
        .into_iter()
        .filter(|(_, (_, d))| d.len() > 1)
        .map(|(k, (title, domains))| KeyCollision {
            key: k.to_hex(),
            title,
            domains: domains.into_iter().collect(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Download;
    use crate::normalize::ContentCategory;
    use crate::topics::tests::blank_record;
    use proptest::prelude::*;

    fn rec(domain: &str, page: &str, count: usize, title: &str) -> DatasetRecord {
        DatasetRecord {
            domain: domain.into(),
            page_url: format!("https://{domain}{page}"),
            page_dataset_count: count,
            title: title.into(),
            description: "d".into(),
            providers: vec!["p".into()],
            ..blank_record()
        }
    }

    #[test]
    fn filter() {
        let mut v = vec![rec("a.org", "/1", 1, "t"), rec("a.org", "/2", 1, "")];
        v[0].description.clear();
        v.push(rec("a.org", "/3", 1, "t"));
        let (kept, report) = filter_invalid(v);
        assert_eq!(kept.len(), 1);
        assert_eq!(report.dropped, 2);
    }

    #[test]
    fn ten_records_three_without_description() {
        let v: Vec<_> = (0..10)
            .map(|i| {
                let mut r = rec("a.org", &format!("/{i}"), 1, "t");
                if i % 3 == 0 && i > 0 {
                    r.description = "  ".into();
                }
                r
            })
            .collect();
        let (kept, report) = filter_invalid(v);
        assert_eq!((kept.len(), report.dropped, report.missing_description), (7, 3, 3));
    }

    #[test]
    fn landing_page_wins() {
        let (out, collapsed) = dedup_within_site(vec![rec("z.org", "/list", 8, "Rain"), rec("z.org", "/rain", 1, "Rain")]);
        assert_eq!(collapsed, 1);
        assert_eq!(out[0].page_url, "https://z.org/rain");
    }

    #[test]
    fn smallest_url_breaks_ties() {
        let (out, _) = dedup_within_site(vec![rec("z.org", "/b", 1, "Rain"), rec("z.org", "/a", 1, "rain!")]);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].page_url, "https://z.org/a");
    }

    #[test]
    fn unique_keys_pass_through() {
        let input = vec![rec("a.org", "/1", 1, "x"), rec("a.org", "/2", 1, "y"), rec("b.org", "/1", 1, "x")];
        let (out, collapsed) = dedup_within_site(input.clone());
        assert_eq!(collapsed, 0);
        let strip = |v: Vec<DatasetRecord>| -> Vec<DatasetRecord> {
            v.into_iter().map(|r| DatasetRecord { id: String::new(), ..r }).collect()
        };
        assert_eq!(strip(out.clone()), input);
        assert_eq!(cross_site_collisions(&out).len(), 1);
        assert_ne!(out[0].id, out[2].id);
    }

    #[test]
    fn downloads_separate_keys() {
        let mut a = rec("a.org", "/1", 1, "x");
        let mut b = rec("a.org", "/2", 1, "x");
        a.downloads.push(Download {
            download_url: "https://a.org/1.csv".into(),
            raw_format: "csv".into(),
            category: ContentCategory::Tables,
        });
        b.downloads.push(Download {
            download_url: "https://a.org/2.csv".into(),
            ..a.downloads[0].clone()
        });
        assert_ne!(dataset_key(&a), dataset_key(&b));
        assert_eq!(dedup_within_site(vec![a, b]).1, 0);
    }

    fn corpus() -> impl Strategy<Value = Vec<DatasetRecord>> {
        proptest::collection::vec((0usize..3, 0usize..5, 1usize..4, 0usize..4), 0..30).prop_map(|rows| {
            rows.into_iter()
                .enumerate()
                .map(|(i, (d, p, count, t))| {
                    let mut r = rec(&format!("d{d}.org"), &format!("/p{p}"), count, &format!("title {t}"));
                    r.entity_index = i;
                    r
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn idempotent_and_shrinking(records in corpus()) {
            let n = records.len();
            let keys: BTreeSet<(String, DatasetKey)> = records.iter().map(|r| (r.domain.clone(), dataset_key(r))).collect();
            let (once, _) = dedup_within_site(records);
            let (twice, collapsed) = dedup_within_site(once.clone());
            prop_assert_eq!(&once, &twice);
            prop_assert_eq!(collapsed, 0);
            prop_assert!(once.len() <= n);
            prop_assert_eq!(once.len(), keys.len());
            let domains_in: BTreeSet<_> = keys.iter().map(|k| k.0.clone()).collect();
            let domains_out: BTreeSet<_> = once.iter().map(|r| r.domain.clone()).collect();
            prop_assert_eq!(domains_in, domains_out);
        }
    }
}
