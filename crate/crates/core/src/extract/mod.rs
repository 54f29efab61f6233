//! Structured-data extraction from HTML pages.
//!
//! All three syntaxes (JSON-LD, Microdata, RDFa Lite) are reduced to one
//! [`TripleGraph`]. JSON-LD blocks are processed first, then Microdata, then
//! RDFa, each in document order; blank nodes are numbered `_:b0, _:b1, ...`
//! in that processing order.

mod graph;
mod jsonld;
mod microdata;
mod rdfa;

pub use graph::{
    select_dataset_entities, Diagnostic, EntitySubgraph, Literal, NodeId, Object, Origin, Triple,
    TripleGraph,
};

use graph::GraphBuilder;
use once_cell::sync::Lazy;
use scraper::{ElementRef, Html, Selector};
use url::Url;

const PAGE_TEXT_LIMIT: usize = 20_000;

/// Page-level signals used by normalization.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PageMeta {
    pub html_lang: Option<String>,
    pub content_language: Option<String>,
    pub last_modified: Option<String>,
    /// Visible text of the body, whitespace-collapsed and truncated.
    pub text: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExtractedPage {
    pub graph: TripleGraph,
    pub meta: PageMeta,
}

static SCRIPT_LD: Lazy<Selector> = Lazy::new(|| Selector::parse("script").unwrap());
static BASE: Lazy<Selector> = Lazy::new(|| Selector::parse("base[href]").unwrap());
static META: Lazy<Selector> = Lazy::new(|| Selector::parse("meta").unwrap());
static BODY: Lazy<Selector> = Lazy::new(|| Selector::parse("body").unwrap());

/// Extracts every triple embedded in `html`.
pub fn extract_structured_data(html: &str, page_url: &str) -> TripleGraph {
    extract_page(html, page_url).graph
}

/// Like [`extract_page`], for raw bytes that may not be valid UTF-8.
pub fn extract_page_bytes(bytes: &[u8], page_url: &str) -> ExtractedPage {
    match std::str::from_utf8(bytes) {
        Ok(html) => extract_page(html, page_url),
        Err(err) => unparseable(page_url, format!("document is not valid UTF-8: {err}")),
    }
}

fn unparseable(page_url: &str, message: String) -> ExtractedPage {
    let mut builder = GraphBuilder::new(page_url);
    builder.diagnose(None, format!("unparseable document: {message}"));
    ExtractedPage {
        graph: builder.finish(),
        meta: PageMeta::default(),
    }
}

/// Extracts the triple graph and page-level signals in one parse.
pub fn extract_page(html: &str, page_url: &str) -> ExtractedPage {
    let page = match Url::parse(page_url) {
        Ok(u) => u,
        Err(err) => return unparseable(page_url, format!("page URL {page_url:?} is not absolute: {err}")),
    };
    if html.contains('\0') {
        return unparseable(page_url, "document contains NUL bytes".to_string());
    }
    let doc = Html::parse_document(html);
    let base = doc
        .select(&BASE)
        .next()
        .and_then(|b| b.value().attr("href"))
        .and_then(|href| page.join(href.trim()).ok())
        .unwrap_or_else(|| page.clone());

    let mut builder = GraphBuilder::new(page_url);
    for script in doc.select(&SCRIPT_LD) {
        let is_ld = script
            .value()
            .attr("type")
            .map(|t| t.split(';').next().unwrap_or("").trim().eq_ignore_ascii_case("application/ld+json"))
            .unwrap_or(false);
        if is_ld {
            let text: String = script.text().collect();
            jsonld::extract_block(&text, &base, &mut builder);
        }
    }
    microdata::extract(&doc, &base, &mut builder);
    rdfa::extract(&doc, &base, &mut builder);

    ExtractedPage {
        graph: builder.finish(),
        meta: page_meta(&doc),
    }
}

fn page_meta(doc: &Html) -> PageMeta {
    let root = doc.root_element();
    let html_lang = root
        .value()
        .attr("lang")
        .or_else(|| root.value().attr("xml:lang"))
        .map(|l| l.trim().to_string())
        .filter(|l| !l.is_empty());

    let mut content_language = None;
    let mut last_modified = None;
    for meta in doc.select(&META) {
        let attrs = meta.value();
        let key = attrs
            .attr("http-equiv")
            .or_else(|| attrs.attr("name"))
            .map(str::to_ascii_lowercase);
        let Some(content) = attrs.attr("content").map(str::trim).filter(|c| !c.is_empty()) else {
            continue;
        };
        match key.as_deref() {
            Some("content-language") if content_language.is_none() => {
                content_language = Some(content.to_string())
            }
            Some("last-modified") if last_modified.is_none() => last_modified = Some(content.to_string()),
            _ => {}
        }
    }

    let mut text = String::new();
    if let Some(body) = doc.select(&BODY).next() {
        collect_visible_text(body, &mut text);
    }
    let mut text = collapse_whitespace(&text);
    if text.len() > PAGE_TEXT_LIMIT {
        let mut cut = PAGE_TEXT_LIMIT;
        while !text.is_char_boundary(cut) {
            cut -= 1;
        }
        text.truncate(cut);
    }

    PageMeta {
        html_lang,
        content_language,
        last_modified,
        text,
    }
}

fn collect_visible_text(body: ElementRef<'_>, out: &mut String) {
    let hidden = |node: ego_tree::NodeRef<'_, scraper::Node>| {
        node.value()
            .as_element()
            .is_some_and(|e| matches!(e.name(), "script" | "style" | "noscript" | "template"))
    };
    for node in body.descendants() {
        if let Some(text) = node.value().as_text() {
            if !node.ancestors().any(hidden) {
                out.push_str(text);
                out.push(' ');
            }
        }
    }
}

pub(crate) fn resolve_iri(base: &Url, reference: &str) -> String {
    base.join(reference.trim())
        .map(|u| u.to_string())
        .unwrap_or_else(|_| reference.trim().to_string())
}

pub(crate) fn collapse_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Language of the nearest ancestor-or-self with a `lang` attribute.
pub(crate) fn element_language(el: ElementRef<'_>) -> Option<String> {
    std::iter::once(*el)
        .chain(el.ancestors())
        .filter_map(ElementRef::wrap)
        .find_map(|e| e.value().attr("lang").or_else(|| e.value().attr("xml:lang")))
        .map(|l| l.trim().to_ascii_lowercase())
        .filter(|l| !l.is_empty())
}
