//! JSON-LD to triples for the subset used by dataset markup.
//!
//! Remote contexts are never fetched. The schema.org and DCAT contexts are
//! built in; any other remote context is reported and ignored. Inline term
//! maps, `@vocab`, `@base`, `@language`, keyword aliases, `@graph`, `@reverse`,
//! value objects and `@list`/`@set` containers are handled. List order is not
//! modelled: list members become repeated values of the property.

use std::collections::HashMap;

use serde_json::{Map, Value};
use url::Url;

use super::graph::{GraphBuilder, Literal, NodeId, Object, Origin, Triple};
use super::resolve_iri;
use crate::vocab;

const MAX_DEPTH: usize = 64;

#[derive(Debug, Clone, Default)]
struct TermDef {
    id: String,
    iri_valued: bool,
    vocab_valued: bool,
    datatype: Option<String>,
    language: Option<Option<String>>,
}

#[derive(Debug, Clone)]
struct Context {
    base: Url,
    vocab: Option<String>,
    language: Option<String>,
    terms: HashMap<String, TermDef>,
}

impl Context {
    fn new(base: Url) -> Self {
        Context {
            base,
            vocab: None,
            language: None,
            terms: HashMap::new(),
        }
    }
}

/// Schema.org properties whose string values are IRIs in the published context.
const SCHEMA_IRI_TERMS: &[&str] = &[
    "url",
    "sameAs",
    "contentUrl",
    "downloadUrl",
    "embedUrl",
    "license",
    "image",
    "logo",
    "thumbnailUrl",
    "additionalType",
    "mainEntityOfPage",
    "isBasedOn",
    "citation",
    "conditionsOfAccess",
];

const DCAT_TERMS: &[(&str, &str, bool)] = &[
    ("Dataset", "dcat:Dataset", false),
    ("Catalog", "dcat:Catalog", false),
    ("Distribution", "dcat:Distribution", false),
    ("title", "dct:title", false),
    ("description", "dct:description", false),
    ("keyword", "dcat:keyword", false),
    ("theme", "dcat:theme", true),
    ("distribution", "dcat:distribution", false),
    ("dataset", "dcat:dataset", false),
    ("downloadURL", "dcat:downloadURL", true),
    ("accessURL", "dcat:accessURL", true),
    ("landingPage", "dcat:landingPage", true),
    ("mediaType", "dcat:mediaType", false),
    ("format", "dct:format", false),
    ("publisher", "dct:publisher", false),
    ("creator", "dct:creator", false),
    ("issued", "dct:issued", false),
    ("modified", "dct:modified", false),
    ("license", "dct:license", true),
    ("rights", "dct:rights", false),
    ("spatial", "dct:spatial", false),
    ("temporal", "dct:temporal", false),
    ("identifier", "dct:identifier", false),
    ("language", "dct:language", false),
    ("name", "foaf:name", false),
    ("homepage", "foaf:homepage", true),
    ("label", "rdfs:label", false),
];

fn normalize_context_url(url: &str) -> String {
    let lower = url.trim().to_ascii_lowercase();
    let no_scheme = lower
        .strip_prefix("https://")
        .or_else(|| lower.strip_prefix("http://"))
        .unwrap_or(&lower);
    let no_www = no_scheme.strip_prefix("www.").unwrap_or(no_scheme);
    no_www.trim_end_matches('/').trim_end_matches('#').to_string()
}

/// Applies a built-in remote context. Returns false when it is unknown.
fn apply_known_context(ctx: &mut Context, url: &str) -> bool {
    match normalize_context_url(url).as_str() {
        "schema.org" | "schema.org/docs/jsonldcontext.json" | "schema.org/docs/jsonldcontext.jsonld" => {
            ctx.vocab = Some(vocab::SCHEMA_HTTP.to_string());
            ctx.terms.insert(
                "schema".into(),
                TermDef {
                    id: vocab::SCHEMA_HTTP.into(),
                    ..Default::default()
                },
            );
            for alias in ["id", "type"] {
                ctx.terms.insert(
                    alias.into(),
                    TermDef {
                        id: format!("@{alias}"),
                        ..Default::default()
                    },
                );
            }
            for term in SCHEMA_IRI_TERMS {
                ctx.terms.insert(
                    (*term).into(),
                    TermDef {
                        id: vocab::schema(term),
                        iri_valued: true,
                        ..Default::default()
                    },
                );
            }
            true
        }
        "w3.org/ns/dcat" | "w3.org/ns/dcat.jsonld" | "w3.org/ns/dcat2.jsonld" | "w3.org/ns/dcat3.jsonld" => {
            for (prefix, iri) in [
                ("dcat", vocab::DCAT),
                ("dct", vocab::DCTERMS),
                ("dcterms", vocab::DCTERMS),
                ("foaf", vocab::FOAF),
                ("rdfs", vocab::RDFS),
                ("xsd", vocab::XSD),
                ("owl", vocab::OWL),
            ] {
                ctx.terms.insert(
                    prefix.into(),
                    TermDef {
                        id: iri.into(),
                        ..Default::default()
                    },
                );
            }
            for (term, id, iri_valued) in DCAT_TERMS {
                ctx.terms.insert(
                    (*term).into(),
                    TermDef {
                        id: (*id).into(),
                        iri_valued: *iri_valued,
                        ..Default::default()
                    },
                );
            }
            true
        }
        _ => false,
    }
}

struct Expander<'a> {
    out: &'a mut GraphBuilder,
    /// Blank node labels are scoped to one JSON-LD document (script block).
    labels: HashMap<String, NodeId>,
}

/// Converts one `<script type="application/ld+json">` block.
pub(crate) fn extract_block(text: &str, base: &Url, out: &mut GraphBuilder) {
    let value: Value = match serde_json::from_str(text.trim()) {
        Ok(v) => v,
        Err(err) => {
            out.diagnose(Some(Origin::Jsonld), format!("skipped malformed JSON-LD block: {err}"));
            return;
        }
    };
    let ctx = Context::new(base.clone());
    let mut expander = Expander {
        out,
        labels: HashMap::new(),
    };
    expander.top_level(&value, &ctx);
}

impl Expander<'_> {
    fn diagnose(&mut self, message: impl Into<String>) {
        self.out.diagnose(Some(Origin::Jsonld), message);
    }

    fn top_level(&mut self, value: &Value, ctx: &Context) {
        match value {
            Value::Array(items) => {
                for item in items {
                    self.top_level(item, ctx);
                }
            }
            Value::Object(_) => {
                self.node(value, ctx, 0);
            }
            _ => self.diagnose("top-level JSON-LD value is not an object"),
        }
    }

    fn update_context(&mut self, ctx: &Context, local: &Value, depth: usize) -> Context {
        let mut next = ctx.clone();
        self.apply_context(&mut next, local, depth);
        next
    }

    fn apply_context(&mut self, ctx: &mut Context, local: &Value, depth: usize) {
        if depth > MAX_DEPTH {
            return;
        }
        match local {
            Value::Null => *ctx = Context::new(ctx.base.clone()),
            Value::String(url) => {
                if !apply_known_context(ctx, url) {
                    self.diagnose(format!("remote context {url:?} not fetched; terms left undefined"));
                }
            }
            Value::Array(items) => {
                for item in items {
                    self.apply_context(ctx, item, depth + 1);
                }
            }
            Value::Object(map) => {
                if let Some(base) = map.get("@base") {
                    match base {
                        Value::String(b) => {
                            if let Ok(u) = ctx.base.join(b) {
                                ctx.base = u;
                            }
                        }
                        _ => self.diagnose("ignored non-string @base"),
                    }
                }
                match map.get("@vocab") {
                    Some(Value::String(v)) => {
                        let expanded = self.expand_iri_with(ctx, v, true);
                        ctx.vocab = Some(expanded);
                    }
                    Some(Value::Null) => ctx.vocab = None,
                    _ => {}
                }
                match map.get("@language") {
                    Some(Value::String(l)) => ctx.language = Some(l.to_ascii_lowercase()),
                    Some(Value::Null) => ctx.language = None,
                    _ => {}
                }
                for (term, def) in map {
                    if term.starts_with('@') {
                        continue;
                    }
                    match def {
                        Value::Null => {
                            ctx.terms.remove(term);
                        }
                        Value::String(id) => {
                            ctx.terms.insert(
                                term.clone(),
                                TermDef {
                                    id: id.clone(),
                                    ..Default::default()
                                },
                            );
                        }
                        Value::Object(def) => {
                            let id = match def.get("@id") {
                                Some(Value::String(id)) => id.clone(),
                                _ => term.clone(),
                            };
                            let mut td = TermDef {
                                id,
                                ..Default::default()
                            };
                            if let Some(Value::String(ty)) = def.get("@type") {
                                match ty.as_str() {
                                    "@id" => td.iri_valued = true,
                                    "@vocab" => td.vocab_valued = true,
                                    other => td.datatype = Some(other.to_string()),
                                }
                            }
                            match def.get("@language") {
                                Some(Value::String(l)) => td.language = Some(Some(l.to_ascii_lowercase())),
                                Some(Value::Null) => td.language = Some(None),
                                _ => {}
                            }
                            ctx.terms.insert(term.clone(), td);
                        }
                        _ => self.diagnose(format!("ignored malformed term definition for {term:?}")),
                    }
                }
            }
            _ => self.diagnose("ignored malformed @context"),
        }
    }

    /// Expands a term, compact IRI or absolute IRI. `vocab_relative` selects
    /// vocabulary-relative resolution (properties, types) versus document
    /// relative resolution (node identifiers).
    fn expand_iri_with(&self, ctx: &Context, value: &str, vocab_relative: bool) -> String {
        self.expand_iri_depth(ctx, value, vocab_relative, 0)
    }

    fn expand_iri_depth(&self, ctx: &Context, value: &str, vocab_relative: bool, depth: usize) -> String {
        if value.starts_with('@') || depth > 8 {
            return value.to_string();
        }
        if vocab_relative {
            if let Some(def) = ctx.terms.get(value) {
                if def.id == value {
                    if let Some(v) = &ctx.vocab {
                        return format!("{v}{value}");
                    }
                    return value.to_string();
                }
                return self.expand_iri_depth(ctx, &def.id, vocab_relative, depth + 1);
            }
        }
        if let Some((prefix, suffix)) = value.split_once(':') {
            if prefix == "_" {
                return value.to_string();
            }
            if !suffix.starts_with("//") {
                if let Some(def) = ctx.terms.get(prefix) {
                    let ns = self.expand_iri_depth(ctx, &def.id, true, depth + 1);
                    return format!("{ns}{suffix}");
                }
            }
            if is_absolute_iri(value) {
                return value.to_string();
            }
        }
        if vocab_relative {
            if let Some(v) = &ctx.vocab {
                return format!("{v}{value}");
            }
        }
        resolve_iri(&ctx.base, value)
    }

    /// Expands an object key; `None` for terms that have no mapping.
    fn expand_key(&self, ctx: &Context, key: &str) -> Option<String> {
        if key.starts_with('@') {
            return Some(key.to_string());
        }
        if !key.contains(':') && !ctx.terms.contains_key(key) && ctx.vocab.is_none() {
            return None;
        }
        let expanded = self.expand_iri_with(ctx, key, true);
        if expanded.starts_with('@') || is_absolute_iri(&expanded) {
            Some(expanded)
        } else {
            None
        }
    }

    fn node_id_for(&mut self, ctx: &Context, id: &str) -> NodeId {
        if let Some(label) = id.strip_prefix("_:") {
            if let Some(existing) = self.labels.get(label) {
                return existing.clone();
            }
            let fresh = self.out.fresh_blank();
            self.labels.insert(label.to_string(), fresh.clone());
            return fresh;
        }
        NodeId::Iri(self.expand_iri_with(ctx, id, false))
    }

    fn node(&mut self, value: &Value, ctx: &Context, depth: usize) -> Option<NodeId> {
        if depth > MAX_DEPTH {
            self.diagnose("JSON-LD nesting too deep; truncated");
            return None;
        }
        let map = value.as_object()?;
        let ctx = match map.get("@context") {
            Some(local) => self.update_context(ctx, local, depth),
            None => ctx.clone(),
        };

        // Resolve keyword aliases once.
        let mut entries: Vec<(String, &str, &Value)> = Vec::with_capacity(map.len());
        for (key, v) in map {
            if key == "@context" {
                continue;
            }
            if let Some(expanded) = self.expand_key(&ctx, key) {
                entries.push((expanded, key.as_str(), v));
            }
        }

        let graph = entries.iter().find(|(k, _, _)| k == "@graph").map(|(_, _, v)| *v);
        let has_properties = entries
            .iter()
            .any(|(k, _, _)| !k.starts_with('@') || k == "@type" || k == "@reverse");
        if let Some(graph) = graph {
            if !has_properties {
                self.graph_items(graph, &ctx, depth);
                return None;
            }
        }

        let subject = match entries.iter().find(|(k, _, _)| k == "@id").map(|(_, _, v)| *v) {
            Some(Value::String(id)) => self.node_id_for(&ctx, id),
            _ => self.out.fresh_blank(),
        };

        for (key, original, v) in &entries {
            match key.as_str() {
                "@type" => {
                    for ty in as_items(v) {
                        if let Value::String(ty) = ty {
                            let iri = self.expand_iri_with(&ctx, ty, true);
                            self.emit(subject.clone(), vocab::RDF_TYPE.to_string(), Object::Node(NodeId::Iri(iri)));
                        }
                    }
                }
                "@reverse" => {
                    if let Value::Object(rev) = v {
                        for (rkey, rv) in rev {
                            let Some(pred) = self.expand_key(&ctx, rkey).filter(|p| !p.starts_with('@')) else {
                                continue;
                            };
                            for item in as_items(rv) {
                                if let Some(other) = self.node(item, &ctx, depth + 1) {
                                    self.emit(other, pred.clone(), Object::Node(subject.clone()));
                                }
                            }
                        }
                    }
                }
                "@graph" => self.graph_items(v, &ctx, depth),
                k if k.starts_with('@') => {}
                _ => {
                    let term = ctx.terms.get(*original).cloned();
                    self.property_values(&subject, key, v, term.as_ref(), &ctx, depth);
                }
            }
        }
        Some(subject)
    }

    fn graph_items(&mut self, graph: &Value, ctx: &Context, depth: usize) {
        for item in as_items(graph) {
            self.node(item, ctx, depth + 1);
        }
    }

    fn property_values(
        &mut self,
        subject: &NodeId,
        predicate: &str,
        value: &Value,
        term: Option<&TermDef>,
        ctx: &Context,
        depth: usize,
    ) {
        match value {
            Value::Null => {}
            Value::Array(items) => {
                for item in items {
                    self.property_values(subject, predicate, item, term, ctx, depth);
                }
            }
            Value::String(s) => {
                let object = if term.is_some_and(|t| t.iri_valued) {
                    Object::Node(self.node_id_for(ctx, s))
                } else if term.is_some_and(|t| t.vocab_valued) {
                    Object::Node(NodeId::Iri(self.expand_iri_with(ctx, s, true)))
                } else {
                    let language = match term.and_then(|t| t.language.clone()) {
                        Some(lang) => lang,
                        None => ctx.language.clone(),
                    };
                    let datatype = term
                        .and_then(|t| t.datatype.as_deref())
                        .map(|dt| self.expand_iri_with(ctx, dt, true));
                    Object::Literal(Literal {
                        value: s.clone(),
                        language: if datatype.is_some() { None } else { language },
                        datatype,
                    })
                };
                self.emit(subject.clone(), predicate.to_string(), object);
            }
            Value::Number(n) => {
                let datatype = if n.is_i64() || n.is_u64() { "integer" } else { "double" };
                self.emit(
                    subject.clone(),
                    predicate.to_string(),
                    Object::Literal(Literal {
                        value: n.to_string(),
                        language: None,
                        datatype: Some(format!("{}{datatype}", vocab::XSD)),
                    }),
                );
            }
            Value::Bool(b) => {
                self.emit(
                    subject.clone(),
                    predicate.to_string(),
                    Object::Literal(Literal {
                        value: b.to_string(),
                        language: None,
                        datatype: Some(format!("{}boolean", vocab::XSD)),
                    }),
                );
            }
            Value::Object(map) => {
                if let Some(v) = self.keyword(map, ctx, "@value") {
                    if let Some(lit) = self.value_object(map, v, ctx) {
                        self.emit(subject.clone(), predicate.to_string(), Object::Literal(lit));
                    }
                } else if let Some(list) = self.keyword(map, ctx, "@list").or_else(|| self.keyword(map, ctx, "@set")) {
                    self.property_values(subject, predicate, list, term, ctx, depth);
                } else if let Some(object) = self.node(value, ctx, depth + 1) {
                    self.emit(subject.clone(), predicate.to_string(), Object::Node(object));
                }
            }
        }
    }

    fn keyword<'v>(&self, map: &'v Map<String, Value>, ctx: &Context, keyword: &str) -> Option<&'v Value> {
        map.iter()
            .find(|(k, _)| k.as_str() == keyword || self.expand_key(ctx, k).as_deref() == Some(keyword))
            .map(|(_, v)| v)
    }

    fn value_object(&mut self, map: &Map<String, Value>, v: &Value, ctx: &Context) -> Option<Literal> {
        let text = match v {
            Value::String(s) => s.clone(),
            Value::Number(n) => n.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Null => return None,
            _ => {
                self.diagnose("ignored non-scalar @value");
                return None;
            }
        };
        let language = match self.keyword(map, ctx, "@language") {
            Some(Value::String(l)) => Some(l.to_ascii_lowercase()),
            _ => None,
        };
        let datatype = match self.keyword(map, ctx, "@type") {
            Some(Value::String(t)) => Some(self.expand_iri_with(ctx, t, true)),
            _ => None,
        };
        Some(Literal {
            value: text,
            language: if datatype.is_some() { None } else { language },
            datatype,
        })
    }

    fn emit(&mut self, subject: NodeId, predicate: String, object: Object) {
        self.out.push(Triple {
            subject,
            predicate,
            object,
            origin: Origin::Jsonld,
        });
    }
}

fn as_items(v: &Value) -> Vec<&Value> {
    match v {
        Value::Array(items) => items.iter().collect(),
        other => vec![other],
    }
}

pub(crate) fn is_absolute_iri(s: &str) -> bool {
    match s.split_once(':') {
        Some((scheme, rest)) => {
            !scheme.is_empty()
                && !rest.is_empty()
                && scheme.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && scheme
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
        }
        None => false,
    }
}
