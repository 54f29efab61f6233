use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::thread;
use std::time::Duration;

use chrono::NaiveDate;
use url::Url;

use crate::error::{Error, Result};
use crate::tsv;

/// Default url-map file name inside a page directory.
pub const URL_MAP_FILE: &str = "urls.tsv";
pub const USER_AGENT: &str = concat!("dsmeta/", env!("CARGO_PKG_VERSION"));
const MAX_PAGE_BYTES: u64 = 16 * 1024 * 1024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Politeness {
    pub delay_ms: u64,
    pub max_pages: Option<usize>,
    pub respect_robots: bool,
    pub timeout_ms: u64,
}

impl Default for Politeness {
    fn default() -> Self {
        Politeness {
            delay_ms: 1000,
            max_pages: None,
            respect_robots: true,
            timeout_ms: 30_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IngestSource {
    /// Saved pages plus a url-map of `path<TAB>url[<TAB>last-modified[<TAB>content-language]]`
    /// lines with paths relative to the directory. The map defaults to
    /// `urls.tsv` inside the directory.
    Directory { path: PathBuf, url_map: Option<PathBuf> },
    /// A file of URLs, one per line, fetched over HTTP.
    UrlList { path: PathBuf, politeness: Politeness },
}

/// One page as handed to the pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FetchedPage {
    pub page_url: String,
    pub html: Vec<u8>,
    pub fetch_date: Option<NaiveDate>,
    /// Raw Last-Modified value from the url-map or HTTP response.
    pub last_modified: Option<String>,
    pub content_language: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub pages: usize,
    pub skipped: usize,
    pub robots_excluded: usize,
    pub diagnostics: Vec<String>,
}

impl IngestReport {
    fn skip(&mut self, message: String) {
        log::warn!("{message}");
        self.skipped += 1;
        self.diagnostics.push(message);
    }
}

pub fn ingest(source: &IngestSource) -> Result<(Vec<FetchedPage>, IngestReport)> {
    match source {
        IngestSource::Directory { path, url_map } => {
            let map = url_map.clone().unwrap_or_else(|| path.join(URL_MAP_FILE));
            ingest_directory(path, &map)
        }
        IngestSource::UrlList { path, politeness } => {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            let urls: Vec<String> = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_string)
                .collect();
            Ok(fetch_urls(&urls, politeness, today()))
        }
    }
}

fn today() -> NaiveDate {
    chrono::Utc::now().date_naive()
}

struct MapEntry {
    url: String,
    last_modified: Option<String>,
    content_language: Option<String>,
}

fn read_url_map(path: &Path) -> Result<BTreeMap<String, MapEntry>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let name = path.display().to_string();
    let mut map = BTreeMap::new();
    for line in tsv::lines(&text) {
        line.expect(&name, 2, 4).map_err(|e| Error::Ingest(e.to_string()))?;
        let bad = |m: String| Error::Ingest(format!("{name}:{}: {m}", line.number));
        let rel = line.fields[0].replace('\\', "/");
        let url = line.fields[1];
        Url::parse(url).map_err(|e| bad(format!("invalid URL {url:?}: {e}")))?;
        let entry = MapEntry {
            url: url.to_string(),
            last_modified: line.get(2).map(str::to_string),
            content_language: line.get(3).map(str::to_string),
        };
        if map.insert(rel.clone(), entry).is_some() {
            return Err(bad(format!("path {rel:?} listed twice")));
        }
    }
    Ok(map)
}

fn collect_files(root: &Path, dir: &Path, out: &mut Vec<String>) -> Result<()> {
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        if path.is_dir() {
            collect_files(root, &path, out)?;
        } else if matches!(
            path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref(),
            Some("html" | "htm" | "xhtml")
        ) {
            let rel = path.strip_prefix(root).expect("under root");
            out.push(rel.to_string_lossy().replace('\\', "/"));
        }
    }
    Ok(())
}

/// Pages in sorted relative-path order. Files missing from the map and map
/// entries without a file are skipped with a diagnostic.
pub fn ingest_directory(dir: &Path, url_map: &Path) -> Result<(Vec<FetchedPage>, IngestReport)> {
    if !dir.is_dir() {
        return Err(Error::Ingest(format!("{} is not a directory", dir.display())));
    }
    let mut map = read_url_map(url_map)?;
    let mut files = Vec::new();
    collect_files(dir, dir, &mut files)?;
    files.sort();
    let mut report = IngestReport::default();
    let mut pages = Vec::new();
    for rel in files {
        let Some(entry) = map.remove(&rel) else {
            report.skip(format!("{rel}: not listed in the url-map"));
            continue;
        };
        let path = dir.join(&rel);
        let html = fs::read(&path).map_err(|e| Error::io(&path, e))?;
        pages.push(FetchedPage {
            page_url: entry.url,
            html,
            fetch_date: None,
            last_modified: entry.last_modified,
            content_language: entry.content_language,
        });
    }
    for rel in map.into_keys() {
        report.skip(format!("{rel}: listed in the url-map but not found"));
    }
    report.pages = pages.len();
    Ok((pages, report))
}

/// `Disallow`/`Allow` rules of one robots.txt for our user agent.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RobotsRules {
    rules: Vec<(bool, String)>,
}

impl RobotsRules {
    /// Uses groups addressed to `*` or to our product token.
    pub fn parse(text: &str) -> Self {
        let token = USER_AGENT.split('/').next().unwrap_or_default().to_ascii_lowercase();
        let mut rules = Vec::new();
        let mut group_applies = false;
        let mut in_agents = false;
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or_default().trim();
            let Some((key, value)) = line.split_once(':') else { continue };
            let (key, value) = (key.trim().to_ascii_lowercase(), value.trim());
            match key.as_str() {
                "user-agent" => {
                    if !in_agents {
                        group_applies = false;
                    }
                    in_agents = true;
                    let agent = value.to_ascii_lowercase();
                    group_applies |= agent == "*" || agent == token;
                }
                "allow" | "disallow" => {
                    in_agents = false;
                    if group_applies && !value.is_empty() {
                        rules.push((key == "allow", value.to_string()));
                    }
                }
                _ => in_agents = false,
            }
        }
        RobotsRules { rules }
    }

    /// Longest matching prefix decides; ties favour allow.
    pub fn allows(&self, path_and_query: &str) -> bool {
        let mut best: Option<(usize, bool)> = None;
        for (allow, prefix) in &self.rules {
            if path_and_query.starts_with(prefix.as_str()) {
                let candidate = (prefix.len(), *allow);
                if best.is_none_or(|b| candidate > b) {
                    best = Some(candidate);
                }
            }
        }
        best.is_none_or(|(_, allow)| allow)
    }
}

fn agent(politeness: &Politeness) -> ureq::Agent {
    ureq::Agent::config_builder()
        .timeout_global(Some(Duration::from_millis(politeness.timeout_ms)))
        .http_status_as_error(false)
        .user_agent(USER_AGENT)
        .build()
        .into()
}

fn header(resp: &ureq::http::Response<ureq::Body>, name: &str) -> Option<String> {
    resp.headers().get(name).and_then(|v| v.to_str().ok()).map(str::to_string)
}

/// Sequential fetch in list order. Failures and non-success statuses are
/// skipped with a diagnostic.
pub fn fetch_urls(urls: &[String], politeness: &Politeness, fetch_date: NaiveDate) -> (Vec<FetchedPage>, IngestReport) {
    let agent = agent(politeness);
    let mut robots: HashMap<String, RobotsRules> = HashMap::new();
    let mut report = IngestReport::default();
    let mut pages = Vec::new();
    let mut first_request = true;
    let pause = |first: &mut bool| {
        if !*first && politeness.delay_ms > 0 {
            thread::sleep(Duration::from_millis(politeness.delay_ms));
        }
        *first = false;
    };
    for raw in urls {
        if politeness.max_pages.is_some_and(|m| pages.len() >= m) {
            break;
        }
        let url = match Url::parse(raw) {
            Ok(u) if matches!(u.scheme(), "http" | "https") => u,
            _ => {
                report.skip(format!("{raw}: not an http(s) URL"));
                continue;
            }
        };
        if politeness.respect_robots {
            let origin = url.origin().ascii_serialization();
            if !robots.contains_key(&origin) {
                pause(&mut first_request);
                let rules = match agent.get(format!("{origin}/robots.txt")).call() {
                    Ok(mut resp) if resp.status().is_success() => resp
                        .body_mut()
                        .with_config()
                        .limit(MAX_PAGE_BYTES)
                        .read_to_string()
                        .map(|t| RobotsRules::parse(&t))
                        .unwrap_or_default(),
                    _ => RobotsRules::default(),
                };
                robots.insert(origin.clone(), rules);
            }
            let mut path = url.path().to_string();
            if let Some(q) = url.query() {
                path.push('?');
                path.push_str(q);
            }
            if !robots[&origin].allows(&path) {
                report.robots_excluded += 1;
                report.skip(format!("{raw}: excluded by robots.txt"));
                continue;
            }
        }
        pause(&mut first_request);
        match agent.get(url.as_str()).call() {
            Ok(mut resp) if resp.status().is_success() => {
                let last_modified = header(&resp, "last-modified");
                let content_language = header(&resp, "content-language");
                match resp.body_mut().with_config().limit(MAX_PAGE_BYTES).read_to_vec() {
                    Ok(html) => pages.push(FetchedPage {
                        page_url: url.to_string(),
                        html,
                        fetch_date: Some(fetch_date),
                        last_modified,
                        content_language,
                    }),
                    Err(e) => report.skip(format!("{raw}: {e}")),
                }
            }
            Ok(resp) => report.skip(format!("{raw}: HTTP {}", resp.status().as_u16())),
            Err(e) => report.skip(format!("{raw}: {e}")),
        }
    }
    report.pages = pages.len();
    (pages, report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn robots_rules() {
        let r = RobotsRules::parse(
            "User-agent: googlebot\nDisallow: /\n\nUser-agent: *\nDisallow: /private\nAllow: /private/open\n# x\n",
        );
        assert!(r.allows("/public"));
        assert!(!r.allows("/private/x"));
        assert!(r.allows("/private/open/y"));
        let ours = RobotsRules::parse("User-agent: other\nUser-agent: dsmeta\nDisallow: /a\n");
        assert!(!ours.allows("/a/b"));
        assert!(RobotsRules::parse("User-agent: *\nDisallow:\n").allows("/anything"));
    }

    #[test]
    fn directory_in_sorted_order() {
        let dir = tempfile::tempdir().unwrap();
        fs::create_dir(dir.path().join("sub")).unwrap();
        for name in ["b.html", "a.html", "sub/c.htm", "notes.txt", "stray.html"] {
            fs::write(dir.path().join(name), name).unwrap();
        }
        fs::write(
            dir.path().join(URL_MAP_FILE),
            "sub/c.htm\thttps://x.org/c\nb.html\thttps://x.org/b\t2019-01-01\tde\na.html\thttps://x.org/a\ngone.html\thttps://x.org/g\n",
        )
        .unwrap();
        let source = IngestSource::Directory {
            path: dir.path().into(),
            url_map: None,
        };
        let (pages, report) = ingest(&source).unwrap();
        let urls: Vec<_> = pages.iter().map(|p| p.page_url.as_str()).collect();
        assert_eq!(urls, vec!["https://x.org/a", "https://x.org/b", "https://x.org/c"]);
        assert_eq!(pages[1].last_modified.as_deref(), Some("2019-01-01"));
        assert_eq!(pages[1].content_language.as_deref(), Some("de"));
        assert_eq!(report.skipped, 2);
    }

    #[test]
    fn missing_inputs_are_fatal() {
        let missing = IngestSource::Directory {
            path: "/nonexistent/pages".into(),
            url_map: None,
        };
        assert!(ingest(&missing).is_err());
        let list = IngestSource::UrlList {
            path: "/nonexistent/list.txt".into(),
            politeness: Politeness::default(),
        };
        assert!(ingest(&list).is_err());
    }
}
