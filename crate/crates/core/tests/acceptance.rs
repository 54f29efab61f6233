//! Acceptance criteria. Runs without the libtest harness and prints one
//! PASS/FAIL line per criterion; exits non-zero if any criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use chrono::{Datelike, NaiveDate};
use dsmeta::analytics::{self, compute_churn, property_coverage, recency_histograms};
use dsmeta::dedup::{dedup_within_site, filter_invalid};
use dsmeta::model::{CanonicalProperty, RecordDates};
use dsmeta::normalize::{
    bucket_format, classify_license, compute_openness, resolve_last_updated, scan_text, ContentCategory, Identifiers,
};
use dsmeta::store::{self, BuildOptions, FetchedPage, IngestSource};
use dsmeta::{AnalyticsReport, ChurnReport, DatasetRecord, NormalizationConfig, PowerLawFit};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{blank_record, date, random_record};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    if ok {
        Ok(detail.into())
    } else {
        Err(detail.into())
    }
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/golden")
}

fn config() -> NormalizationConfig {
    NormalizationConfig::bundled().unwrap()
}

fn build(pages: &[FetchedPage], day: NaiveDate, parallel: bool) -> dsmeta::CorpusSnapshot {
    store::build_snapshot(pages, &config(), BuildOptions { snapshot_date: day, parallel })
        .unwrap()
        .snapshot
}

fn golden_end_to_end() -> Outcome {
    let start = Instant::now();
    let dir = golden_dir();
    let design: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("design.json")).unwrap()).unwrap();
    let day: NaiveDate = design["snapshot_date"].as_str().unwrap().parse().unwrap();
    let (pages, _) = store::ingest(&IngestSource::Directory {
        path: dir.join("pages"),
        url_map: None,
    })
    .unwrap();
    let snapshot = build(&pages, day, false);
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("snapshot");
    store::write_snapshot(&snapshot, &out).unwrap();
    for file in [store::RECORDS_FILE, store::MANIFEST_FILE] {
        if fs::read(out.join(file)).unwrap() != fs::read(dir.join("expected/snapshot").join(file)).unwrap() {
            return Err(format!("{file} differs from the expected snapshot"));
        }
    }
    let old = store::read_snapshot(&dir.join("old")).unwrap();
    let report: AnalyticsReport = analytics::compute_report(&snapshot, Some(&old), &config()).unwrap();
    let markdown = analytics::render_markdown(&report);
    if markdown != fs::read_to_string(dir.join("expected/report/report.md")).unwrap() {
        return Err("report.md differs from the expected report".into());
    }

    // Ratios recomputed from the design and from the raw records.
    let n = design["records"].as_u64().unwrap() as usize;
    let top10_design = design["top10_records"].as_u64().unwrap() as f64 / n as f64;
    let mut per_domain: BTreeMap<&str, usize> = BTreeMap::new();
    for r in &snapshot.records {
        *per_domain.entry(&r.domain).or_default() += 1;
    }
    let mut sizes: Vec<usize> = per_domain.values().copied().collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let top10_records = sizes.iter().take(10).sum::<usize>() as f64 / snapshot.records.len() as f64;
    let coverage = |p: CanonicalProperty| report.coverage.iter().find(|c| c.property == p).unwrap().share;
    let churn = report.churn.as_ref().unwrap();
    let retention = design["retained_urls"].as_f64().unwrap() / design["old_urls"].as_f64().unwrap();
    let known = design["dated_records"].as_f64().unwrap() / n as f64;
    let elapsed = start.elapsed();
    let ok = snapshot.records.len() == n
        && report.domain_distribution.top_k_share == 0.65
        && top10_design == 0.65
        && top10_records == 0.65
        && coverage(CanonicalProperty::Title) == 1.0
        && coverage(CanonicalProperty::Description) == 1.0
        && churn.retention_share == 0.63
        && retention == 0.63
        && report.recency.known_date_share == known
        && markdown.contains("Top 10 domains hold 65.00% of all records.")
        && elapsed < Duration::from_secs(10);
    check(
        ok,
        format!(
            "byte-identical snapshot and report; top-10 share {:.2}%, title {:.0}%, description {:.0}%, \
             retention {:.0}%, known dates {:.0}%, {:.2?}",
            report.domain_distribution.top_k_share * 100.0,
            coverage(CanonicalProperty::Title) * 100.0,
            coverage(CanonicalProperty::Description) * 100.0,
            churn.retention_share * 100.0,
            report.recency.known_date_share * 100.0,
            elapsed
        ),
    )
}

fn power_law_recovery() -> Outcome {
    const ALPHA: f64 = 2.08;
    let mut within = 0;
    let mut slowest = Duration::ZERO;
    for seed in 0..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xs: Vec<f64> = (0..3700)
            .map(|_| (1.0 - rng.random::<f64>()).powf(-1.0 / (ALPHA - 1.0)))
            .collect();
        let t = Instant::now();
        let fit: PowerLawFit = analytics::fit_power_law(&xs, 0.5).unwrap();
        slowest = slowest.max(t.elapsed());
        if (fit.exponent - ALPHA).abs() <= 0.15 {
            within += 1;
        }
    }
    check(
        within >= 95 && slowest < Duration::from_secs(1),
        format!("{within}/100 seeds within 0.15 of 2.08, slowest fit {slowest:.2?}"),
    )
}

fn format_bucketing() -> Outcome {
    use ContentCategory::*;
    let cases: [(&str, ContentCategory); 60] = [
        ("csv", Tables),
        ("CSV", Tables),
        ("xls", Tables),
        ("xlsx", Tables),
        ("tsv", Tables),
        ("ods", Tables),
        ("text/csv", Tables),
        ("application/vnd.ms-excel", Tables),
        ("json", Structured),
        ("xml", Structured),
        ("owl", Structured),
        ("rdf", Structured),
        ("application/json", Structured),
        ("application/rdf+xml", Structured),
        ("ttl", Structured),
        ("jsonld", Structured),
        ("application/ld+json", Structured),
        ("xml+rdf", Structured),
        ("sparql", Structured),
        ("pdf", Documents),
        ("doc", Documents),
        ("docx", Documents),
        ("html", Documents),
        ("text/html", Documents),
        ("application/pdf", Documents),
        ("rtf", Documents),
        ("jpeg", Images),
        ("jpg", Images),
        ("png", Images),
        ("tiff", Images),
        ("image/png", Images),
        ("zip", Archives),
        ("tar", Archives),
        ("rar", Archives),
        ("gz", Archives),
        ("application/zip", Archives),
        ("txt", Text),
        ("ascii", Text),
        ("text/plain", Text),
        ("shp", Geospatial),
        ("geojson", Geospatial),
        ("kml", Geospatial),
        ("application/vnd.google-earth.kml+xml", Geospatial),
        ("sbml", ComputationalBiology),
        ("biopax2", ComputationalBiology),
        ("sbgn", ComputationalBiology),
        ("wav", Audio),
        ("mp3", Audio),
        ("ogg", Audio),
        ("audio/mpeg", Audio),
        ("avi", Video),
        ("mpg", Video),
        ("mp4", Video),
        ("video/mp4", Video),
        ("pptx", Presentations),
        ("ppt", Presentations),
        ("nii", MedicalImaging),
        ("dcm", MedicalImaging),
        ("qzx", Other),
        ("application/x-made-up", Other),
    ];
    let config = config();
    let wrong: Vec<String> = cases
        .iter()
        .filter_map(|&(raw, want)| {
            let got = bucket_format(raw, &config);
            (got != want).then(|| format!("{raw}: {got} != {want}"))
        })
        .collect();
    check(wrong.is_empty(), format!("{}/60 formats agree {wrong:?}", 60 - wrong.len()))
}

fn openness_logic() -> Outcome {
    // Raw value and whether its license permits redistribution.
    let pool: [(&str, bool); 14] = [
        ("https://creativecommons.org/licenses/by/4.0/", true),
        ("http://creativecommons.org/licenses/by-nc-nd/3.0/", true),
        ("https://creativecommons.org/publicdomain/zero/1.0/", true),
        ("CC-BY-SA 4.0", true),
        ("Open Database License (ODbL)", true),
        ("https://www.etalab.gouv.fr/licence-ouverte-open-licence", true),
        ("Open Government Licence v3.0", true),
        ("Public domain", true),
        ("Proprietary license", false),
        ("Not for redistribution", false),
        ("All rights reserved", false),
        ("See terms of use", false),
        ("Custom licence agreement", false),
        ("https://example.org/license.html", false),
    ];
    let config = config();
    for (raw, redistributable) in pool {
        if classify_license(raw, &config).allows_redistribution != redistributable {
            return Err(format!("{raw:?} classified against its known terms"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut agree = 0;
    let mut open = 0;
    for _ in 0..1000 {
        let chosen: Vec<(&str, bool)> = (0..rng.random_range(0..4)).map(|_| *pool.choose(&mut rng).unwrap()).collect();
        let free = [None, Some(true), Some(false)][rng.random_range(0..3)];
        let classes: Vec<_> = chosen.iter().map(|(raw, _)| classify_license(raw, &config)).collect();
        let oracle = free == Some(true) || chosen.iter().any(|&(_, redistributable)| redistributable);
        if compute_openness(&classes, free) == oracle {
            agree += 1;
        }
        open += oracle as usize;
    }
    check(agree == 1000, format!("{agree}/1000 records agree ({open} open)"))
}

fn churn_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let corpus = |rng: &mut ChaCha8Rng| -> Vec<DatasetRecord> {
        (0..rng.random_range(0..80))
            .map(|_| {
                let mut r = blank_record();
                r.page_url = format!("https://x.org/{}", rng.random_range(0..60));
                r
            })
            .collect()
    };
    for _ in 0..100 {
        let (a, b) = (corpus(&mut rng), corpus(&mut rng));
        let c: ChurnReport = compute_churn(&a, &b);
        let sa: HashSet<&str> = a.iter().map(|r| r.page_url.as_str()).collect();
        let sb: HashSet<&str> = b.iter().map(|r| r.page_url.as_str()).collect();
        let retained = sa.intersection(&sb).count();
        let oracle_share = if sa.is_empty() { 0.0 } else { retained as f64 / sa.len() as f64 };
        let ok = c.retained + c.disappeared == sa.len()
            && c.retained + c.new == sb.len()
            && c.retained == retained
            && c.disappeared == sa.difference(&sb).count()
            && c.new == sb.difference(&sa).count()
            && c.retention_share == oracle_share;
        if !ok {
            return Err(format!("identity broken: {c:?}"));
        }
    }
    Ok("100/100 snapshot pairs match set operations".into())
}

fn repository_page(datasets: &[(String, String)]) -> Vec<u8> {
    let nodes: Vec<String> = datasets
        .iter()
        .map(|(name, file)| {
            format!(
                r#"{{"@type":"Dataset","name":"{name}","description":"Measurements for {name}",
"publisher":{{"@type":"Organization","name":"Repository"}},
"distribution":{{"@type":"DataDownload","contentUrl":"{file}"}}}}"#
            )
        })
        .collect();
    format!(
        r#"<html lang="en"><body><script type="application/ld+json">{{"@context":"https://schema.org","@graph":[{}]}}</script></body></html>"#,
        nodes.join(",")
    )
    .into_bytes()
}

fn dedup_behaviour() -> Outcome {
    let mut pages = Vec::new();
    let mut landing = BTreeSet::new();
    for site in ["repo-one.org", "repo-two.net", "archive.example.edu"] {
        let datasets: Vec<(String, String)> = (0..6)
            .map(|i| (format!("Series {i} of {site}"), format!("https://{site}/files/{i}.csv")))
            .collect();
        for (i, d) in datasets.iter().enumerate() {
            let url = format!("https://{site}/dataset/{i}");
            landing.insert(url.clone());
            pages.push(FetchedPage {
                page_url: url,
                html: repository_page(std::slice::from_ref(d)),
                fetch_date: None,
                last_modified: None,
                content_language: None,
            });
        }
        for (p, chunk) in datasets.chunks(3).enumerate() {
            pages.push(FetchedPage {
                page_url: format!("https://{site}/search?page={p}"),
                html: repository_page(chunk),
                fetch_date: None,
                last_modified: None,
                content_language: None,
            });
        }
        pages.push(FetchedPage {
            page_url: format!("https://{site}/browse"),
            html: repository_page(&datasets),
            fetch_date: None,
            last_modified: None,
            content_language: None,
        });
    }
    let snapshot = build(&pages, date(2026, 1, 1), false);
    let kept: BTreeSet<String> = snapshot.records.iter().map(|r| r.page_url.clone()).collect();
    if kept != landing || snapshot.records.len() != landing.len() {
        return Err(format!("kept {} records from {} pages", snapshot.records.len(), kept.len()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let records: Vec<DatasetRecord> =
            (0..rng.random_range(0..60)).map(|_| random_record(&mut rng, date(2026, 1, 1))).collect();
        let (valid, _) = filter_invalid(records);
        let (once, _) = dedup_within_site(valid);
        let (twice, collapsed) = dedup_within_site(once.clone());
        if twice != once || collapsed != 0 {
            return Err("dedup is not idempotent".into());
        }
    }
    check(
        true,
        format!("{} landing records kept, listing copies dropped; idempotent on 100 corpora", landing.len()),
    )
}

fn identifier_extraction() -> Outcome {
    let cases: [(&str, &[&str], &[&str]); 50] = [
        ("https://doi.org/10.5061/dryad.2bs69", &["10.5061/dryad.2bs69"], &[]),
        ("http://dx.doi.org/10.1594/PANGAEA.867207", &["10.1594/PANGAEA.867207"], &[]),
        ("doi:10.5281/zenodo.1234567", &["10.5281/zenodo.1234567"], &[]),
        ("10.6084/m9.figshare.5999", &["10.6084/m9.figshare.5999"], &[]),
        ("DOI 10.1000/xyz123.", &["10.1000/xyz123"], &[]),
        ("(10.1000/abc)", &["10.1000/abc"], &[]),
        ("10.1000/a(b)c", &["10.1000/a(b)c"], &[]),
        ("10.123/abc", &[], &[]),
        ("10.1234567890/abc", &[], &[]),
        ("11.1234/abc", &[], &[]),
        ("10.1234/", &[], &[]),
        ("https://doi.org/10.1234/ABC and https://doi.org/10.1234/abc", &["10.1234/ABC"], &[]),
        ("x10.1234/abc", &[], &[]),
        ("urn:nbn:de:1234", &[], &[]),
        ("pdb:2gc4", &[], &["pdb:2gc4"]),
        ("PDB:2GC4", &[], &["pdb:2GC4"]),
        ("taxonomy:9606", &[], &["taxonomy:9606"]),
        ("https://identifiers.org/taxonomy:9606", &[], &["taxonomy:9606"]),
        ("http://identifiers.org/pdb/2gc4", &[], &["pdb:2gc4"]),
        ("https://identifiers.org/doi:10.1234/x", &["10.1234/x"], &[]),
        ("uniprot:P12345", &[], &["uniprot:P12345"]),
        ("GO:0008150", &[], &["go:0008150"]),
        ("CHEBI:15377", &[], &["chebi:15377"]),
        ("unknownprefix:123", &[], &[]),
        ("http://example.org/a:b", &[], &[]),
        ("mailto:someone@example.org", &[], &[]),
        ("ftp:files", &[], &[]),
        ("https://doi.org/10.5061/dryad.abc, pdb:1abc", &["10.5061/dryad.abc"], &["pdb:1abc"]),
        ("orcid:0000-0002-1825-0097", &[], &["orcid:0000-0002-1825-0097"]),
        ("arxiv:2101.00001", &[], &["arxiv:2101.00001"]),
        ("pubmed:12345678.", &[], &["pubmed:12345678"]),
        ("see (taxonomy:10090)", &[], &["taxonomy:10090"]),
        ("ncbigene:7157;uniprot:P04637", &[], &["ncbigene:7157", "uniprot:P04637"]),
        ("neurovault.collection:3304", &[], &["neurovault.collection:3304"]),
        ("pdb:", &[], &[]),
        ("pdb: 2gc4", &[], &[]),
        ("10.5555/12345678", &["10.5555/12345678"], &[]),
        ("https://doi.org/10.1093/nar/gkaa1100", &["10.1093/nar/gkaa1100"], &[]),
        (
            "10.1002/(SICI)1097-4571(199806)49:8<693::AID-ASI3>3.0.CO;2-O",
            &["10.1002/(SICI)1097-4571(199806)49:8"],
            &[],
        ),
        ("Identifier: 10.1234/abc", &["10.1234/abc"], &[]),
        ("ISBN 978-3-16-148410-0", &[], &[]),
        ("version 10.2.3", &[], &[]),
        ("10.1234/abc;", &["10.1234/abc"], &[]),
        ("https://doi.org/10.1234/abc).", &["10.1234/abc"], &[]),
        ("rrid:AB_2298772", &[], &["rrid:AB_2298772"]),
        ("wikidata:Q42", &[], &["wikidata:Q42"]),
        ("HTTP://IDENTIFIERS.ORG/UNIPROT/P0DTC2", &[], &["uniprot:P0DTC2"]),
        ("https://www.identifiers.org/ena.embl:BN000065", &[], &["ena.embl:BN000065"]),
        ("ensembl:ENSG00000139618 ensembl:ENSG00000139618", &[], &["ensembl:ENSG00000139618"]),
        ("doi:10.1234", &[], &[]),
    ];
    let config = config();
    let mut wrong = Vec::new();
    for (text, dois, compact) in cases {
        let mut got = Identifiers::default();
        scan_text(text, &config.prefixes, &mut got);
        if got.dois != dois || got.compact_ids != compact {
            wrong.push(format!("{text:?} -> {got:?}"));
        }
    }
    check(wrong.is_empty(), format!("{}/50 cases match {wrong:?}", 50 - wrong.len()))
}

fn date_resolution() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let pick = |rng: &mut ChaCha8Rng| {
        rng.random_bool(0.5)
            .then(|| date(1990, 1, 1) + chrono::Days::new(rng.random_range(0..14000)))
    };
    let mut fallbacks = 0;
    for _ in 0..1000 {
        let dates = RecordDates {
            created: pick(&mut rng),
            published: pick(&mut rng),
            modified: pick(&mut rng),
            page_modified: pick(&mut rng),
        };
        let metadata = [dates.created, dates.published, dates.modified];
        let oracle = metadata.iter().flatten().max().copied().or(dates.page_modified);
        let got = resolve_last_updated(&dates);
        if got != oracle {
            return Err(format!("{dates:?} resolved to {got:?}"));
        }
        let fell_back = metadata.iter().all(Option::is_none) && dates.page_modified.is_some();
        if fell_back {
            fallbacks += 1;
        }
        if fell_back != (got.is_some() && got == dates.page_modified && metadata.iter().all(Option::is_none)) {
            return Err(format!("page-date fallback misfired on {dates:?}"));
        }
    }
    Ok(format!("1000/1000 tuples equal the max of dates; {fallbacks} page-date fallbacks"))
}

fn has_oracle(r: &DatasetRecord, p: CanonicalProperty) -> bool {
    use CanonicalProperty as P;
    match p {
        P::Description => !r.description.is_empty(),
        P::Title => !r.title.is_empty(),
        P::Provider => !r.providers.is_empty(),
        P::Keywords => !r.keywords.is_empty(),
        P::Url => r.url.is_some(),
        P::TemporalCoverage => r.temporal_coverage.is_some(),
        P::DataDownload => !r.downloads.is_empty(),
        P::SpatialCoverage => r.spatial_coverage.is_some(),
        P::DateModified => r.dates.modified.is_some(),
        P::License => !r.licenses.is_empty(),
        P::DatePublished => r.dates.published.is_some(),
        P::Catalog => r.catalog.is_some(),
        P::Variable => !r.variables.is_empty(),
        P::Authors => !r.authors.is_empty(),
        P::SameAs => !r.same_as.is_empty(),
        P::DateCreated => r.dates.created.is_some(),
        P::AlternateName => !r.alternate_names.is_empty(),
        P::IsAccessibleForFree => r.is_accessible_for_free.is_some(),
        P::Identifier => !r.identifiers.is_empty(),
    }
}

/// `d` moved back by `months` calendar months, clamping the day.
fn months_before(d: NaiveDate, months: i32) -> NaiveDate {
    let total = d.year() * 12 + d.month0() as i32 - months;
    let (y, m) = (total.div_euclid(12), total.rem_euclid(12) as u32 + 1);
    let last = (28..=31).rev().find(|&day| NaiveDate::from_ymd_opt(y, m, day).is_some()).unwrap();
    date(y, m, d.day().min(last))
}

fn coverage_and_histograms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for round in 0..100 {
        let reference = date(2020, 1, 1) + chrono::Days::new(rng.random_range(0..2000));
        let records: Vec<DatasetRecord> =
            (0..rng.random_range(0..150)).map(|_| random_record(&mut rng, reference)).collect();
        for row in property_coverage::<f64>(&records) {
            let count = records.iter().filter(|r| has_oracle(r, row.property)).count();
            let share = if records.is_empty() { 0.0 } else { count as f64 / records.len() as f64 };
            if row.count != count || row.share != share {
                return Err(format!("round {round}: coverage of {} is {} not {count}", row.property, row.count));
            }
        }
        let stats = recency_histograms::<f64>(&records, reference);
        let mut monthly = [0usize; 12];
        let mut yearly = [0usize; 5];
        let (mut future, mut older, mut dated) = (0, 0, 0);
        for d in records.iter().filter_map(|r| r.last_updated) {
            dated += 1;
            if d > reference {
                future += 1;
                continue;
            }
            for (i, bin) in monthly.iter_mut().enumerate() {
                if d <= months_before(reference, i as i32) && d > months_before(reference, i as i32 + 1) {
                    *bin += 1;
                }
            }
            let mut placed = false;
            for (j, bin) in yearly.iter_mut().enumerate() {
                if d <= months_before(reference, 12 * j as i32) && d > months_before(reference, 12 * (j as i32 + 1)) {
                    *bin += 1;
                    placed = true;
                }
            }
            older += !placed as usize;
        }
        if (stats.monthly, stats.yearly, stats.future, stats.older, stats.dated) != (monthly, yearly, future, older, dated) {
            return Err(format!("round {round}: histogram mismatch at reference {reference}"));
        }
    }
    let reference = date(2026, 6, 30);
    let fixture: Vec<DatasetRecord> = (0..100)
        .map(|i| {
            let mut r = blank_record();
            if i < 85 {
                r.last_updated = Some(reference - chrono::Days::new(i * 7));
            }
            r
        })
        .collect();
    let share = recency_histograms::<f64>(&fixture, reference).known_date_share;
    check(
        share == 0.85,
        format!("100/100 corpora match brute force; known-date share {:.0}%", share * 100.0),
    )
}

fn synthetic_page(i: usize) -> FetchedPage {
    let site = format!("site{}.example.org", i % 97);
    let title = format!("Synthetic series {i}");
    let html = match i % 3 {
        0 => format!(
            r#"<html lang="en"><body><h2>Catalogue</h2><p>Survey data about rainfall.</p>
<script type="application/ld+json">{{"@context":"https://schema.org","@type":"Dataset","name":"{title}",
"description":"Hourly rainfall and climate observations, station {i}.","keywords":"climate, weather",
"publisher":{{"@type":"Organization","name":"Agency {}"}},"license":"https://creativecommons.org/licenses/by/4.0/",
"dateModified":"2021-0{}-1{}","identifier":"https://doi.org/10.5061/dryad.{i}",
"distribution":[{{"@type":"DataDownload","contentUrl":"https://{site}/f/{i}.csv","encodingFormat":"text/csv"}}]}}</script>
</body></html>"#,
            i % 50,
            1 + i % 9,
            i % 10
        ),
        1 => format!(
            r#"<html lang="de"><body><div itemscope itemtype="https://schema.org/Dataset">
<h1 itemprop="name">{title}</h1><p itemprop="description">Census household income table {i}.</p>
<div itemprop="publisher" itemscope itemtype="https://schema.org/Organization"><span itemprop="name">Amt {}</span></div>
<div itemprop="distribution" itemscope itemtype="https://schema.org/DataDownload"><a itemprop="contentUrl" href="/d/{i}.xlsx">x</a></div>
<meta itemprop="datePublished" content="2019-05-0{}"><span itemprop="identifier">pdb:{i}abc</span></div></body></html>"#,
            i % 30,
            1 + i % 9
        ),
        _ => format!(
            r#"<html lang="fr"><body vocab="http://schema.org/"><div typeof="Dataset" resource="\#d">
<h1 property="name">{title}</h1><p property="description">Gene expression atlas samples {i}.</p>
<div property="publisher" typeof="Organization"><span property="name">Institut {}</span></div>
<a property="license" href="https://www.etalab.gouv.fr/licence-ouverte-open-licence">l</a>
<div property="distribution" typeof="DataDownload"><a property="contentUrl" href="/d/{i}.json">j</a></div>
</div></body></html>"#,
            i % 20
        ),
    };
    FetchedPage {
        page_url: format!("https://{site}/dataset/{i}"),
        html: html.into_bytes(),
        fetch_date: None,
        last_modified: None,
        content_language: None,
    }
}

fn throughput() -> Outcome {
    let pages: Vec<FetchedPage> = (0..10_000).map(synthetic_page).collect();
    let day = date(2026, 6, 30);
    let t = Instant::now();
    let serial = build(&pages, day, false);
    let elapsed = t.elapsed();
    let parallel = build(&pages, day, true);
    check(
        serial.records.len() == 10_000 && elapsed <= Duration::from_secs(60) && serial == parallel,
        format!(
            "{} pages to {} records in {elapsed:.2?} single-threaded; parallel snapshot {}",
            pages.len(),
            serial.records.len(),
            if serial == parallel { "identical" } else { "differs" }
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("golden end-to-end", golden_end_to_end),
        ("power-law recovery", power_law_recovery),
        ("format bucketing", format_bucketing),
        ("openness logic", openness_logic),
        ("churn identities", churn_identities),
        ("dedup", dedup_behaviour),
        ("identifier extraction", identifier_extraction),
        ("date resolution", date_resolution),
        ("coverage and histograms", coverage_and_histograms),
        ("throughput", throughput),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {status} {name}: {detail}", i + 1);
    }
    let _ = panic::take_hook();
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
