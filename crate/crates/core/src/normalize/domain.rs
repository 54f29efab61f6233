use std::net::IpAddr;

use serde::{Deserialize, Serialize};
use url::{Host, Url};

use crate::error::{Error, Result};
use crate::tsv;

pub const GOVERNMENT_FILE: &str = "government.tsv";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainInfo {
    pub domain: String,
    pub tld: String,
    pub is_government: bool,
}

/// One government host pattern.
///
/// `.gov` matches a final label `gov`. `.gov.*` matches a `gov` label
/// followed by one or two labels, the last of which is a two-letter
/// country code (`gov.uk`, `gov.co.uk` shapes).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GovernmentPattern {
    pub label: String,
    pub country_wildcard: bool,
    /// Added beyond the commonly cited set.
    pub extension: bool,
}

impl GovernmentPattern {
    pub fn matches(&self, labels: &[&str]) -> bool {
        if !self.country_wildcard {
            return labels.last() == Some(&self.label.as_str());
        }
        let n = labels.len();
        let is_cc = |l: &str| l.len() == 2 && l.bytes().all(|b| b.is_ascii_lowercase());
        if n < 2 || !is_cc(labels[n - 1]) {
            return false;
        }
        labels[n - 2] == self.label || (n >= 3 && labels[n - 3] == self.label)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GovernmentPatterns {
    patterns: Vec<GovernmentPattern>,
}

impl GovernmentPatterns {
    pub fn parse(content: &str) -> Result<Self> {
        let mut patterns = Vec::new();
        for line in tsv::lines(content) {
            line.expect(GOVERNMENT_FILE, 2, 2)?;
            let raw = line.fields[0].to_ascii_lowercase();
            let body = raw
                .strip_prefix('.')
                .ok_or_else(|| Error::config(GOVERNMENT_FILE, line.number, format!("pattern must start with '.', got {raw:?}")))?;
            let (label, country_wildcard) = match body.strip_suffix(".*") {
                Some(l) => (l, true),
                None => (body, false),
            };
            if label.is_empty() || !label.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'-') {
                return Err(Error::config(GOVERNMENT_FILE, line.number, format!("invalid pattern {raw:?}")));
            }
            let extension = match line.fields[1] {
                "standard" => false,
                "extension" => true,
                other => {
                    return Err(Error::config(
                        GOVERNMENT_FILE,
                        line.number,
                        format!("origin must be standard or extension, got {other:?}"),
                    ))
                }
            };
            patterns.push(GovernmentPattern {
                label: label.to_string(),
                country_wildcard,
                extension,
            });
        }
        Ok(GovernmentPatterns { patterns })
    }

    pub fn patterns(&self) -> &[GovernmentPattern] {
        &self.patterns
    }

    pub fn is_government_host(&self, host: &str) -> bool {
        let labels: Vec<&str> = host.split('.').collect();
        self.patterns.iter().any(|p| p.matches(&labels))
    }
}

/// Registrable domain, final label and government flag of a page URL.
pub fn classify_domain(page_url: &str, government: &GovernmentPatterns) -> Result<DomainInfo> {
    let url = Url::parse(page_url).map_err(|e| Error::InvalidUrl(format!("{page_url}: {e}")))?;
    let host = match url.host() {
        Some(Host::Domain(d)) => d.trim_end_matches('.').to_ascii_lowercase(),
        Some(Host::Ipv4(ip)) => return Ok(ip_info(IpAddr::V4(ip))),
        Some(Host::Ipv6(ip)) => return Ok(ip_info(IpAddr::V6(ip))),
        None => return Err(Error::InvalidUrl(format!("{page_url}: no host"))),
    };
    if host.is_empty() {
        return Err(Error::InvalidUrl(format!("{page_url}: empty host")));
    }
    let domain = psl::domain_str(&host).unwrap_or(&host).to_string();
    let tld = host.rsplit('.').next().unwrap_or_default().to_string();
    Ok(DomainInfo {
        is_government: government.is_government_host(&host),
        domain,
        tld,
    })
}

fn ip_info(ip: IpAddr) -> DomainInfo {
    DomainInfo {
        domain: ip.to_string(),
        tld: String::new(),
        is_government: false,
    }
}
