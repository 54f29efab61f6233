use once_cell::sync::Lazy;
use regex::Regex;

use crate::model::RawValue;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResolvedProviders {
    pub names: Vec<String>,
    pub diagnostics: Vec<String>,
}

static LEGAL_SUFFIX: Lazy<Regex> =
    Lazy::new(|| Regex::new(r"^(.*?)[\s,]+(?:inc\.?|ltd\.?|gmbh|llc|l\.l\.c\.)$").unwrap());

const NAME_PREDICATES: &[&str] = &[
    "http://schema.org/name",
    "http://schema.org/legalName",
    "http://xmlns.com/foaf/0.1/name",
    "http://www.w3.org/2000/01/rdf-schema#label",
    "http://purl.org/dc/terms/title",
];

/// Lower-cases, collapses whitespace and strips a trailing legal suffix.
pub fn canonical_provider_name(name: &str) -> String {
    let folded = name.to_lowercase();
    let collapsed = folded.split_whitespace().collect::<Vec<_>>().join(" ");
    match LEGAL_SUFFIX.captures(&collapsed) {
        Some(c) if !c[1].trim().is_empty() => c[1].trim_end_matches([',', ' ']).to_string(),
        _ => collapsed,
    }
}

/// Canonical organization names, de-duplicated in first-seen order.
pub fn resolve_provider<'a>(values: impl IntoIterator<Item = &'a RawValue>) -> ResolvedProviders {
    let mut out = ResolvedProviders::default();
    for value in values {
        let name = match value {
            RawValue::Entity(e) => match e.first_text(NAME_PREDICATES) {
                Some(n) => n,
                None => {
                    out.diagnostics.push(match &e.id {
                        Some(id) => format!("provider entity {id} has no name"),
                        None => "provider entity has no name".to_string(),
                    });
                    continue;
                }
            },
            other => other.as_text().unwrap_or_default().to_string(),
        };
        let canonical = canonical_provider_name(&name);
        if !canonical.is_empty() && !out.names.contains(&canonical) {
            out.names.push(canonical);
        }
    }
    out
}
