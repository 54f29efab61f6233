use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use chrono::{Months, NaiveDate};

use crate::error::{Error, Result};
use crate::num::Scalar;

use super::stats::{CountRow, MONTH_BINS, YEAR_BINS};
use super::AnalyticsReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Markdown,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "md" | "markdown" => Ok(ReportFormat::Markdown),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(format!("report format must be md or csv, got {other:?}")),
        }
    }
}

pub const MARKDOWN_FILE: &str = "report.md";

fn pct<F: Scalar>(x: F) -> String {
    format!("{:.2}%", x.to_f64_lossy() * 100.0)
}

fn frac<F: Scalar>(x: F) -> String {
    format!("{:.6}", x.to_f64_lossy())
}

fn num<F: Scalar>(x: F) -> String {
    format!("{:.4}", x.to_f64_lossy())
}

fn opt_num<F: Scalar>(x: Option<F>) -> String {
    x.map(num).unwrap_or_default()
}

fn month_window(reference: NaiveDate, start: u32, end: u32) -> (NaiveDate, NaiveDate) {
    let back = |m: u32| reference.checked_sub_months(Months::new(m)).unwrap_or(NaiveDate::MIN);
    (back(end), back(start))
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    fn markdown(&self, out: &mut String) {
        let _ = writeln!(out, "| {} |", self.header.join(" | "));
        let _ = writeln!(out, "|{}", "---|".repeat(self.header.len()));
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|c| c.replace('|', "\\|")).collect();
            let _ = writeln!(out, "| {} |", cells.join(" | "));
        }
        out.push('\n');
    }

    fn csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let fail = |e: csv::Error| Error::InvalidArgument(format!("csv encoding: {e}"));
        w.write_record(&self.header).map_err(fail)?;
        for r in &self.rows {
            w.write_record(r).map_err(fail)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(format!("csv encoding: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv of UTF-8 input"))
    }
}

fn count_table<F: Scalar>(key: &'static str, rows: &[CountRow<F>], limit: Option<usize>) -> Table {
    let mut t = Table::new(&[key, "count", "share"]);
    for r in rows.iter().take(limit.unwrap_or(usize::MAX)) {
        t.row(vec![r.key.clone(), r.count.to_string(), frac(r.share)]);
    }
    t
}

/// Named tables in report order.
fn tables<F: Scalar>(r: &AnalyticsReport<F>) -> Vec<(&'static str, &'static str, Table)> {
    let mut out = Vec::new();

    let mut s = Table::new(&["metric", "value", "population"]);
    let mut add = |m: &str, v: String, p: String| s.row(vec![m.to_string(), v, p]);
    let all = format!("all records ({})", r.record_count);
    let d = &r.domain_distribution;
    add("records", r.record_count.to_string(), String::new());
    add("domains", d.counts.len().to_string(), String::new());
    add(&format!("top_{}_domain_share", d.top_k), frac(d.top_k_share), all.clone());
    match &d.power_law {
        Some(fit) => {
            add("power_law_exponent", num(fit.exponent), format!("domains with at least {} records", num(fit.xmin)));
            add("power_law_stderr", num(fit.stderr), String::new());
            add("power_law_xmin", num(fit.xmin), String::new());
            add("power_law_tail_points", fit.tail_points.to_string(), String::new());
            add("power_law_loglog_exponent", opt_num(fit.loglog_exponent), String::new());
        }
        None => add("power_law_exponent", String::new(), d.power_law_error.clone().unwrap_or_default()),
    }
    let pc = &r.page_cardinality;
    add("single_dataset_page_share", frac(pc.single_page_fraction), all.clone());
    add("records_on_pages_with_more_than_10", pc.gt10_count.to_string(), String::new());
    add("government_records", r.tlds.government_count.to_string(), String::new());
    add("government_share", frac(r.tlds.government_share), all.clone());
    let f = &r.formats;
    let bearing = format!("records with downloads ({})", f.download_bearing);
    add("records_with_downloads", f.download_bearing.to_string(), String::new());
    add("semantic_web_share", frac(f.semantic_web_share), bearing);
    let i = &r.identifiers;
    add("doi_records", i.doi_count.to_string(), String::new());
    add("doi_share", frac(i.doi_share), all.clone());
    add("compact_id_records", i.compact_id_count.to_string(), String::new());
    add("compact_id_share", frac(i.compact_id_share), all.clone());
    let p = &r.providers;
    add("providers", p.provider_count.to_string(), String::new());
    add(&format!("top_{}_provider_share", p.top_k), frac(p.top_k_share), all.clone());
    add(
        "small_provider_fraction",
        frac(p.small_provider_fraction),
        format!("providers ({}), small = fewer than {} records", p.provider_count, p.small_provider_limit),
    );
    let o = &r.openness;
    add("license_coverage", frac(o.license_coverage), all.clone());
    add("recognized_license_share", frac(o.recognized_share), format!("records with a license ({})", o.with_license));
    add("open_share", frac(o.open_share), format!("records with a recognized license ({})", o.recognized));
    add(
        "commercial_share",
        frac(o.commercial_share),
        format!("open records with a recognized license ({})", o.recognized_open),
    );
    add("free_flag_share", frac(o.free_flag_share), all.clone());
    add("open_overall_share", frac(o.open_overall_share), all.clone());
    let rc = &r.recency;
    add("known_date_share", frac(rc.known_date_share), all.clone());
    add("updated_within_year_share", frac(rc.past_year_share), format!("dated records ({})", rc.dated));
    if let Some(c) = &r.churn {
        add("old_urls", c.old_urls.to_string(), String::new());
        add("new_urls", c.new_urls.to_string(), String::new());
        add("retained_urls", c.retained.to_string(), String::new());
        add("disappeared_urls", c.disappeared.to_string(), String::new());
        add("added_urls", c.new.to_string(), String::new());
        add("retention_share", frac(c.retention_share), format!("old page URLs ({})", c.old_urls));
    }
    out.push(("summary", "Summary", s));

    out.push(("domains", "Datasets per domain", count_table("domain", &d.counts, None)));
    out.push(("tlds", "Top-level domains", count_table("tld", &r.tlds.rows, None)));

    let mut t = Table::new(&["language", "count", "share", "previous", "change"]);
    for l in &r.languages {
        t.row(vec![
            l.language.clone(),
            l.count.to_string(),
            frac(l.share),
            l.previous.map(|p| p.to_string()).unwrap_or_default(),
            l.change.map(frac).unwrap_or_default(),
        ]);
    }
    out.push(("languages", "Languages", t));

    out.push(("vocabulary", "Source vocabulary", count_table("vocabulary", &r.vocabulary, None)));

    let mut t = Table::new(&["property", "count", "share"]);
    for c in &r.coverage {
        t.row(vec![c.property.to_string(), c.count.to_string(), frac(c.share)]);
    }
    out.push(("coverage", "Property coverage", t));

    let mut t = Table::new(&["category", "datasets", "dataset_share", "downloads", "download_share"]);
    for row in &f.rows {
        t.row(vec![
            row.category.to_string(),
            row.datasets.to_string(),
            frac(row.dataset_share),
            row.downloads.to_string(),
            frac(row.download_share),
        ]);
    }
    out.push(("formats", "Download content types", t));

    out.push(("doi_domains", "Domains of records with DOIs", count_table("domain", &i.doi_by_domain, None)));
    out.push((
        "compact_id_domains",
        "Domains of records with compact identifiers",
        count_table("domain", &i.compact_id_by_domain, None),
    ));
    out.push((
        "compact_id_prefixes",
        "Compact identifier prefixes",
        count_table("prefix", &i.compact_id_by_prefix, None),
    ));
    out.push(("providers", "Top providers", count_table("provider", &p.top_providers, None)));

    let mut t = Table::new(&["bin", "from_exclusive", "to_inclusive", "count"]);
    for (b, &n) in rc.monthly.iter().enumerate().take(MONTH_BINS) {
        let (from, to) = month_window(rc.reference_date, b as u32, b as u32 + 1);
        t.row(vec![b.to_string(), from.to_string(), to.to_string(), n.to_string()]);
    }
    out.push(("recency_monthly", "Last updated, by month", t));
    let mut t = Table::new(&["bin", "from_exclusive", "to_inclusive", "count"]);
    for (b, &n) in rc.yearly.iter().enumerate().take(YEAR_BINS) {
        let (from, to) = month_window(rc.reference_date, 12 * b as u32, 12 * (b as u32 + 1));
        t.row(vec![b.to_string(), from.to_string(), to.to_string(), n.to_string()]);
    }
    t.row(vec!["older".into(), String::new(), String::new(), rc.older.to_string()]);
    t.row(vec!["future".into(), String::new(), String::new(), rc.future.to_string()]);
    out.push(("recency_yearly", "Last updated, by year", t));

    out.push(("topics", "Topics", count_table("topic", &r.topics, None)));
    out
}

pub fn render_markdown<F: Scalar>(report: &AnalyticsReport<F>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Dataset corpus report\n");
    let _ = writeln!(out, "Snapshot date: {}", report.snapshot_date);
    if let Some(c) = report.comparison_date {
        let _ = writeln!(out, "Compared with: {c}");
    }
    let _ = writeln!(out, "Records: {}\n", report.record_count);
    let _ = writeln!(
        out,
        "Top {} domains hold {} of all records.\n",
        report.domain_distribution.top_k,
        pct(report.domain_distribution.top_k_share)
    );
    for (_, title, table) in tables(report) {
        let _ = writeln!(out, "## {title}\n");
        table.markdown(&mut out);
    }
    out
}

/// One CSV document per table, keyed by file name.
pub fn render_csv<F: Scalar>(report: &AnalyticsReport<F>) -> Result<BTreeMap<String, String>> {
    tables(report)
        .into_iter()
        .map(|(name, _, t)| Ok((format!("{name}.csv"), t.csv()?)))
        .collect()
}

/// Writes `report.md` or the CSV tables into `dir`.
pub fn write_report<F: Scalar>(report: &AnalyticsReport<F>, dir: &Path, format: ReportFormat) -> Result<Vec<String>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let files: BTreeMap<String, String> = match format {
        ReportFormat::Markdown => [(MARKDOWN_FILE.to_string(), render_markdown(report))].into(),
        ReportFormat::Csv => render_csv(report)?,
    };
    for (name, content) in &files {
        let path = dir.join(name);
        fs::write(&path, content).map_err(|e| Error::io(&path, e))?;
    }
    Ok(files.into_keys().collect())
}
