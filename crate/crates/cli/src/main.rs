use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use chrono::NaiveDate;
use clap::{ArgAction, Parser, Subcommand};

use dsmeta::analytics::{self, ReportFormat};
use dsmeta::config::{self, NormalizationConfig};
use dsmeta::dedup::cross_site_collisions;
use dsmeta::extract::{extract_page_bytes, select_dataset_entities, Origin};
use dsmeta::store::{self, BuildOptions, FetchedPage, IngestSource, Politeness};
use dsmeta::{AnalyticsReport, ChurnReport, UsageReport};

const EXIT_INPUT: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(name = "dsmeta", version, about = "Build and analyze corpora of dataset metadata found in web pages")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct ConfigArg {
    /// Config directory; files it lacks fall back to the bundled defaults.
    #[arg(long, env = "DSMETA_CONFIG")]
    config: Option<PathBuf>,
}

impl ConfigArg {
    fn load(&self) -> Result<NormalizationConfig> {
        Ok(match &self.config {
            Some(dir) => NormalizationConfig::load_dir(dir)?,
            None => NormalizationConfig::bundled()?,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a snapshot from a page directory or a URL list.
    Build {
        /// Directory of saved pages, or a file listing URLs to fetch.
        #[arg(long)]
        source: PathBuf,
        #[command(flatten)]
        config: ConfigArg,
        /// Snapshot directory to create.
        #[arg(long)]
        out: PathBuf,
        /// Snapshot date (YYYY-MM-DD); defaults to today.
        #[arg(long)]
        date: Option<NaiveDate>,
        /// Process pages in parallel.
        #[arg(long)]
        parallel: bool,
        /// url-map for a page directory; defaults to <source>/urls.tsv.
        #[arg(long)]
        url_map: Option<PathBuf>,
        /// Pause between HTTP requests.
        #[arg(long, default_value_t = 1000)]
        delay_ms: u64,
        /// Stop after this many fetched pages.
        #[arg(long)]
        max_pages: Option<usize>,
        /// Honour robots.txt exclusions when fetching.
        #[arg(long, default_value_t = true, action = ArgAction::Set)]
        respect_robots: bool,
        /// Also write cross-site duplicate keys to this TSV file.
        #[arg(long)]
        collisions: Option<PathBuf>,
    },
    /// Compute corpus statistics and write a report.
    Analyze {
        #[arg(long)]
        snapshot: PathBuf,
        /// Older snapshot for language changes and URL churn.
        #[arg(long)]
        compare: Option<PathBuf>,
        /// Report directory.
        #[arg(long)]
        report: PathBuf,
        #[arg(long, default_value = "md")]
        format: ReportFormat,
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Compare the page URLs of two snapshots.
    Churn {
        #[arg(long)]
        old: PathBuf,
        #[arg(long)]
        new: PathBuf,
    },
    /// Topic distribution of datasets named in a result log.
    Usage {
        #[arg(long)]
        snapshot: PathBuf,
        /// One dataset id per line.
        #[arg(long)]
        log: PathBuf,
    },
    /// Show what the pipeline makes of a single saved page.
    ValidatePage {
        file: PathBuf,
        #[arg(long)]
        url: String,
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Write the bundled config files and checksums into a directory.
    InitConfig { dir: PathBuf },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            let config_error = err
                .chain()
                .filter_map(|e| e.downcast_ref::<dsmeta::Error>())
                .any(dsmeta::Error::is_config_error);
            ExitCode::from(if config_error { EXIT_CONFIG } else { EXIT_INPUT })
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Build {
            source,
            config,
            out,
            date,
            parallel,
            url_map,
            delay_ms,
            max_pages,
            respect_robots,
            collisions,
        } => {
            let config = config.load()?;
            let source = if source.is_dir() {
                IngestSource::Directory { path: source, url_map }
            } else if source.is_file() {
                IngestSource::UrlList {
                    path: source,
                    politeness: Politeness {
                        delay_ms,
                        max_pages,
                        respect_robots,
                        ..Politeness::default()
                    },
                }
            } else {
                bail!("source {} does not exist", source.display());
            };
            let (pages, ingest_report) = store::ingest(&source)?;
            let options = BuildOptions {
                snapshot_date: date.unwrap_or_else(|| chrono::Local::now().date_naive()),
                parallel,
            };
            let output = store::build_snapshot(&pages, &config, options)?;
            for d in &output.diagnostics {
                log::warn!("{d}");
            }
            store::write_snapshot(&output.snapshot, &out)
                .with_context(|| format!("writing snapshot to {}", out.display()))?;
            if let Some(path) = collisions {
                let mut text = String::from("key\ttitle\tdomains\n");
                for c in cross_site_collisions(&output.snapshot.records) {
                    text.push_str(&format!("{}\t{}\t{}\n", c.key, c.title.replace('\t', " "), c.domains.join(",")));
                }
                fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            }
            let c = output.snapshot.manifest.counters;
            println!("pages_seen\t{}", c.pages_seen);
            println!("pages_skipped\t{}", c.pages_skipped + ingest_report.skipped);
            println!("robots_excluded\t{}", ingest_report.robots_excluded);
            println!("entities\t{}", c.entities);
            println!("invalid_dropped\t{}", c.invalid_dropped);
            println!("duplicates_collapsed\t{}", c.duplicates_collapsed);
            println!("records\t{}", c.records);
            println!("diagnostics\t{}", output.diagnostics.len() + ingest_report.diagnostics.len());
            Ok(ExitCode::SUCCESS)
        }
        Command::Analyze {
            snapshot,
            compare,
            report,
            format,
            config,
        } => {
            let config = config.load()?;
            let current = store::read_snapshot(&snapshot)?;
            let older = compare.as_deref().map(store::read_snapshot).transpose()?;
            let r: AnalyticsReport = analytics::compute_report(&current, older.as_ref(), &config)?;
            for name in analytics::write_report(&r, &report, format)? {
                println!("{}", report.join(name).display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Churn { old, new } => {
            let a = store::read_snapshot(&old)?;
            let b = store::read_snapshot(&new)?;
            let c: ChurnReport = analytics::compute_churn(&a.records, &b.records);
            println!("old_urls\t{}", c.old_urls);
            println!("new_urls\t{}", c.new_urls);
            println!("retained\t{}", c.retained);
            println!("disappeared\t{}", c.disappeared);
            println!("new\t{}", c.new);
            println!("retention_share\t{:.6}", c.retention_share);
            Ok(ExitCode::SUCCESS)
        }
        Command::Usage { snapshot, log } => {
            let s = store::read_snapshot(&snapshot)?;
            let text = fs::read_to_string(&log).with_context(|| format!("reading {}", log.display()))?;
            let u: UsageReport = analytics::usage_topic_distribution(&analytics::parse_result_log(&text), &s.records)?;
            println!("log_entries\t{}", u.log_entries);
            println!("distinct_ids\t{}", u.distinct_ids);
            println!("matched\t{}", u.matched);
            println!("unknown\t{}", u.unknown_count);
            println!("topic\tdatasets\tshare");
            for t in &u.topics {
                println!("{}\t{}\t{:.6}", t.key, t.count, t.share);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ValidatePage { file, url, config } => validate_page(&file, &url, &config.load()?),
        Command::InitConfig { dir } => {
            config::write_bundled(&dir)?;
            println!("{}", dir.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn validate_page(file: &Path, url: &str, config: &NormalizationConfig) -> Result<ExitCode> {
    let html = fs::read(file).with_context(|| format!("reading {}", file.display()))?;
    let graph = extract_page_bytes(&html, url).graph;
    for origin in [Origin::Jsonld, Origin::Microdata, Origin::Rdfa] {
        let n = graph.triples.iter().filter(|t| t.origin == origin).count();
        println!("triples\t{origin}\t{n}");
    }
    println!("datasets\t{}", select_dataset_entities(&graph).len());
    let page = FetchedPage {
        page_url: url.to_string(),
        html,
        fetch_date: None,
        last_modified: None,
        content_language: None,
    };
    let result = store::process_page(&page, config);
    let mut valid = 0;
    for r in &result.records {
        let ok = !r.title.trim().is_empty() && !r.description.trim().is_empty();
        valid += ok as usize;
        println!(
            "record\t{}\t{}\t{:?}\tproviders={}\tdownloads={}\tlicenses={}",
            r.entity_index,
            if ok { "valid" } else { "invalid" },
            r.title,
            r.providers.len(),
            r.downloads.len(),
            r.licenses.len()
        );
        if r.title.trim().is_empty() {
            println!("problem\t{}\tmissing title", r.entity_index);
        }
        if r.description.trim().is_empty() {
            println!("problem\t{}\tmissing description", r.entity_index);
        }
    }
    for d in &result.diagnostics {
        println!("diagnostic\t{d}");
    }
    Ok(if valid > 0 { ExitCode::SUCCESS } else { ExitCode::from(EXIT_INPUT) })
}
