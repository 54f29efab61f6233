use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tsv;

pub const LICENSES_FILE: &str = "licenses.tsv";
pub const UNKNOWN_LICENSE: &str = "unknown";

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LicenseClass {
    pub class_id: String,
    pub allows_redistribution: bool,
    pub allows_commercial: bool,
}

impl LicenseClass {
    pub fn unknown() -> Self {
        LicenseClass {
            class_id: UNKNOWN_LICENSE.to_string(),
            allows_redistribution: false,
            allows_commercial: false,
        }
    }

    pub fn is_unknown(&self) -> bool {
        self.class_id == UNKNOWN_LICENSE
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternKind {
    /// Substring of the URL with scheme and `www.` removed.
    Url,
    /// Whole-word phrase of the alphanumeric token stream.
    Name,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LicensePattern {
    pub class: LicenseClass,
    pub kind: PatternKind,
    pub pattern: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LicenseTable {
    patterns: Vec<LicensePattern>,
}

fn parse_flag(line: &tsv::Line, i: usize) -> Result<bool> {
    line.parse_bool(LICENSES_FILE, i)
}

impl LicenseTable {
    pub fn parse(content: &str) -> Result<Self> {
        let mut patterns = Vec::new();
        let mut seen: BTreeSet<(String, String)> = BTreeSet::new();
        let mut flags: Vec<(String, bool, bool)> = Vec::new();
        for line in tsv::lines(content) {
            line.expect(LICENSES_FILE, 5, 5)?;
            let class_id = line.fields[0].to_string();
            if class_id == UNKNOWN_LICENSE {
                return Err(Error::config(LICENSES_FILE, line.number, "the unknown class is implicit"));
            }
            let redistribution = parse_flag(&line, 1)?;
            let commercial = parse_flag(&line, 2)?;
            match flags.iter().find(|(c, _, _)| *c == class_id) {
                Some((_, r, c)) if (*r, *c) != (redistribution, commercial) => {
                    return Err(Error::config(
                        LICENSES_FILE,
                        line.number,
                        format!("conflicting flags for class {class_id:?}"),
                    ))
                }
                Some(_) => {}
                None => flags.push((class_id.clone(), redistribution, commercial)),
            }
            let (kind, pattern) = match line.fields[3] {
                "url" => (PatternKind::Url, normalize_url(line.fields[4])),
                "name" => (PatternKind::Name, normalize_name(line.fields[4])),
                other => {
                    return Err(Error::config(
                        LICENSES_FILE,
                        line.number,
                        format!("pattern kind must be url or name, got {other:?}"),
                    ))
                }
            };
            if pattern.trim().is_empty() {
                return Err(Error::config(LICENSES_FILE, line.number, "empty pattern"));
            }
            if !seen.insert((line.fields[3].to_string(), pattern.clone())) {
                return Err(Error::config(LICENSES_FILE, line.number, format!("duplicate pattern {pattern:?}")));
            }
            patterns.push(LicensePattern {
                class: LicenseClass {
                    class_id,
                    allows_redistribution: redistribution,
                    allows_commercial: commercial,
                },
                kind,
                pattern,
            });
        }
        Ok(LicenseTable { patterns })
    }

    pub fn patterns(&self) -> &[LicensePattern] {
        &self.patterns
    }

    /// Distinct classes in table order.
    pub fn classes(&self) -> Vec<&LicenseClass> {
        let mut out: Vec<&LicenseClass> = Vec::new();
        for p in &self.patterns {
            if !out.iter().any(|c| c.class_id == p.class.class_id) {
                out.push(&p.class);
            }
        }
        out
    }

    /// Longest matching pattern wins; ties go to the earlier table row.
    pub fn classify(&self, raw: &str) -> LicenseClass {
        let url = normalize_url(raw);
        let name = format!(" {} ", normalize_name(raw));
        let mut best: Option<&LicensePattern> = None;
        for p in &self.patterns {
            let hit = match p.kind {
                PatternKind::Url => url.contains(&p.pattern),
                PatternKind::Name => name.contains(&format!(" {} ", p.pattern)),
            };
            if hit && best.is_none_or(|b| p.pattern.len() > b.pattern.len()) {
                best = Some(p);
            }
        }
        best.map(|p| p.class.clone()).unwrap_or_else(LicenseClass::unknown)
    }
}

/// Lower-cases and removes every `scheme://` and `www.` occurrence.
fn normalize_url(raw: &str) -> String {
    raw.trim()
        .to_lowercase()
        .replace("https://", "")
        .replace("http://", "")
        .replace("www.", "")
}

/// Lower-cased alphanumeric tokens joined by single spaces.
fn normalize_name(raw: &str) -> String {
    raw.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Open when marked free of charge or when any license allows redistribution.
pub fn compute_openness(licenses: &[LicenseClass], is_accessible_for_free: Option<bool>) -> bool {
    is_accessible_for_free == Some(true) || licenses.iter().any(|l| l.allows_redistribution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::BUNDLED_LICENSES;
    use proptest::prelude::*;

    fn table() -> LicenseTable {
        LicenseTable::parse(BUNDLED_LICENSES).unwrap()
    }

    fn class(raw: &str) -> (String, bool, bool) {
        let c = table().classify(raw);
        (c.class_id, c.allows_redistribution, c.allows_commercial)
    }

    #[test]
    fn creative_commons_urls() {
        assert_eq!(class("https://creativecommons.org/licenses/by/4.0/"), ("cc-by".into(), true, true));
        assert_eq!(class("https://creativecommons.org/licenses/by-nc/4.0/"), ("cc-by-nc".into(), true, false));
        assert_eq!(class("http://creativecommons.org/licenses/by-sa/3.0/legalcode").0, "cc-by-sa");
        assert_eq!(class("https://creativecommons.org/publicdomain/zero/1.0/").0, "cc0");
    }

    #[test]
    fn names() {
        assert_eq!(class("CC BY 4.0").0, "cc-by");
        assert_eq!(class("Creative Commons Attribution-NonCommercial 4.0 International").0, "cc-by-nc");
        assert_eq!(class("Open Government Licence - Canada").0, "ogl-ca");
        assert_eq!(class("Public Domain").0, "public-domain");
        assert_eq!(class("ODbL").0, "odbl");
    }

    #[test]
    fn unmatched() {
        assert_eq!(class("all rights reserved, contact us"), ("unknown".into(), false, false));
        assert_eq!(class(""), ("unknown".into(), false, false));
        // "by" as a plain English word must not trigger a CC match.
        assert_eq!(class("licensed by the agency").0, "unknown");
    }

    #[test]
    fn bad_tables() {
        assert!(LicenseTable::parse("x\tyes\tmaybe\turl\tx.org\n").is_err());
        assert!(LicenseTable::parse("x\ttrue\ttrue\tregex\tx\n").is_err());
        assert!(LicenseTable::parse("x\ttrue\ttrue\turl\tx.org\nx\tfalse\ttrue\turl\ty.org\n").is_err());
    }

    #[test]
    fn openness() {
        let cc_by = table().classify("CC-BY");
        assert!(compute_openness(&[], Some(true)));
        assert!(compute_openness(&[cc_by], None));
        assert!(!compute_openness(&[LicenseClass::unknown()], Some(false)));
        assert!(!compute_openness(&[], None));
    }

    proptest! {
        #[test]
        fn case_insensitive(raw in "[ -~]{0,40}", pick in 0usize..8) {
            let samples = [
                "https://creativecommons.org/licenses/by/4.0/",
                "cc by-nc-sa",
                "Open Data Commons Open Database License",
                "https://www.nationalarchives.gov.uk/doc/open-government-licence/version/3/",
                "CC0 1.0",
                "https://opendatacommons.org/licenses/pddl/",
                "public domain",
                "",
            ];
            let x = format!("{raw} {}", samples[pick]);
            let t = table();
            prop_assert_eq!(t.classify(&x), t.classify(&x.to_uppercase()));
            prop_assert_eq!(t.classify(&x), t.classify(&x.to_lowercase()));
        }

        #[test]
        fn openness_monotone(free in proptest::option::of(any::<bool>()), n in 0usize..4) {
            let t = table();
            let mut licenses: Vec<_> = ["nope", "CC BY-NC", "unknown thing", "CC-BY-ND"].iter().take(n).map(|r| t.classify(r)).collect();
            let before = compute_openness(&licenses, free);
            licenses.push(t.classify("CC0"));
            let after = compute_openness(&licenses, free);
            prop_assert!(after);
            prop_assert!(!before || after);
        }
    }
}
