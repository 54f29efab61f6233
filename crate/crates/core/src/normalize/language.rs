use std::collections::BTreeMap;

/// Language signals available for one page.
#[derive(Debug, Clone, Copy, Default)]
pub struct LanguageSignals<'a> {
    pub html_lang: Option<&'a str>,
    pub content_language: Option<&'a str>,
    pub literal_languages: &'a [String],
}

/// Lower-cased primary subtag of a BCP 47 tag; `None` for unusable tags.
pub fn primary_subtag(tag: &str) -> Option<String> {
    let primary = tag.trim().split(['-', '_']).next()?.to_ascii_lowercase();
    let usable = (2..=3).contains(&primary.len())
        && primary.bytes().all(|b| b.is_ascii_lowercase())
        && !matches!(primary.as_str(), "und" | "mul" | "zxx" | "mis");
    usable.then_some(primary)
}

/// html `lang`, then Content-Language, then the majority literal tag.
/// Majority ties go to the alphabetically smallest code.
pub fn detect_language(signals: LanguageSignals<'_>) -> Option<String> {
    if let Some(lang) = signals.html_lang.and_then(primary_subtag) {
        return Some(lang);
    }
    if let Some(lang) = signals
        .content_language
        .and_then(|h| h.split(',').find_map(primary_subtag))
    {
        return Some(lang);
    }
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for tag in signals.literal_languages {
        if let Some(lang) = primary_subtag(tag) {
            *counts.entry(lang).or_default() += 1;
        }
    }
    let best = counts.values().copied().max()?;
    counts.into_iter().find(|(_, n)| *n == best).map(|(l, _)| l)
}
