//! RDFa Lite: `vocab`, `prefix`, `typeof`, `property` and `resource`.

use std::collections::HashMap;
use std::rc::Rc;

use scraper::{ElementRef, Html};
use url::Url;

use super::graph::{GraphBuilder, Literal, NodeId, Object, Origin, Triple};
use super::{collapse_whitespace, element_language, resolve_iri};
use crate::extract::jsonld::is_absolute_iri;
use crate::vocab;

/// Prefixes predefined by the RDFa initial context that matter for datasets.
const INITIAL_PREFIXES: &[(&str, &str)] = &[
    ("schema", vocab::SCHEMA_HTTP),
    ("dcat", vocab::DCAT),
    ("dc", vocab::DCTERMS),
    ("dcterms", vocab::DCTERMS),
    ("dct", vocab::DCTERMS),
    ("foaf", vocab::FOAF),
    ("rdf", vocab::RDF),
    ("rdfs", vocab::RDFS),
    ("owl", vocab::OWL),
    ("xsd", vocab::XSD),
    ("og", "http://ogp.me/ns#"),
];

#[derive(Clone)]
struct EvalContext {
    vocab: Option<String>,
    prefixes: Rc<HashMap<String, String>>,
    subject: NodeId,
}

pub(crate) fn extract(doc: &Html, base: &Url, out: &mut GraphBuilder) {
    let ctx = EvalContext {
        vocab: None,
        prefixes: Rc::new(
            INITIAL_PREFIXES
                .iter()
                .map(|(p, iri)| (p.to_string(), iri.to_string()))
                .collect(),
        ),
        subject: NodeId::Iri(base.to_string()),
    };
    // Pre-order traversal with an explicit stack; children are pushed in
    // reverse so they pop in document order.
    let mut stack = vec![(doc.root_element(), Rc::new(ctx))];
    while let Some((el, parent)) = stack.pop() {
        let ctx = Rc::new(visit(el, &parent, base, out));
        let children: Vec<_> = el.children().filter_map(ElementRef::wrap).collect();
        for child in children.into_iter().rev() {
            stack.push((child, Rc::clone(&ctx)));
        }
    }
}

fn expand_term(term: &str, ctx: &EvalContext) -> Option<String> {
    if let Some((prefix, local)) = term.split_once(':') {
        if let Some(ns) = ctx.prefixes.get(&prefix.to_ascii_lowercase()) {
            return Some(format!("{ns}{local}"));
        }
        if is_absolute_iri(term) {
            return Some(term.to_string());
        }
        return None;
    }
    ctx.vocab.as_ref().map(|v| format!("{v}{term}"))
}

/// Emits the element's triples and returns the context for its children.
fn visit(el: ElementRef<'_>, parent: &EvalContext, base: &Url, out: &mut GraphBuilder) -> EvalContext {
    let attrs = el.value();
    let mut ctx = parent.clone();

    if let Some(v) = attrs.attr("vocab") {
        let v = v.trim();
        ctx.vocab = if v.is_empty() { None } else { Some(resolve_iri(base, v)) };
    }
    if let Some(prefix) = attrs.attr("prefix") {
        let tokens: Vec<&str> = prefix.split_ascii_whitespace().collect();
        let prefixes = Rc::make_mut(&mut ctx.prefixes);
        for pair in tokens.chunks(2) {
            if let [name, iri] = pair {
                if let Some(name) = name.strip_suffix(':') {
                    prefixes.insert(name.to_ascii_lowercase(), iri.to_string());
                }
            }
        }
    }

    let properties: Vec<String> = attrs
        .attr("property")
        .unwrap_or("")
        .split_ascii_whitespace()
        .filter_map(|p| expand_term(p, &ctx))
        .collect();
    let types: Option<Vec<String>> = attrs.attr("typeof").map(|t| {
        t.split_ascii_whitespace()
            .filter_map(|t| expand_term(t, &ctx))
            .collect()
    });
    let resource = attrs.attr("resource").map(|r| resolve_iri(base, r.trim()));

    let mut child_subject = parent.subject.clone();
    if let Some(types) = types {
        let target = resource
            .clone()
            .or_else(|| attrs.attr("href").map(|h| resolve_iri(base, h.trim())))
            .or_else(|| attrs.attr("src").map(|s| resolve_iri(base, s.trim())))
            .map(NodeId::Iri)
            .unwrap_or_else(|| out.fresh_blank());
        for ty in types {
            emit(out, target.clone(), vocab::RDF_TYPE.to_string(), Object::Node(NodeId::Iri(ty)));
        }
        for p in &properties {
            emit(out, parent.subject.clone(), p.clone(), Object::Node(target.clone()));
        }
        child_subject = target;
    } else if !properties.is_empty() {
        let value = if let Some(r) = &resource {
            Object::Node(NodeId::Iri(r.clone()))
        } else if let Some(href) = attrs.attr("href").or_else(|| attrs.attr("src")) {
            Object::Node(NodeId::Iri(resolve_iri(base, href.trim())))
        } else {
            let text = attrs
                .attr("content")
                .map(str::to_string)
                .or_else(|| attrs.attr("datetime").map(|d| d.trim().to_string()))
                .unwrap_or_else(|| collapse_whitespace(&el.text().collect::<String>()));
            Object::Literal(Literal {
                value: text,
                language: element_language(el),
                datatype: None,
            })
        };
        for p in &properties {
            emit(out, parent.subject.clone(), p.clone(), value.clone());
        }
    } else if let Some(r) = resource {
        child_subject = NodeId::Iri(r);
    }

    ctx.subject = child_subject;
    ctx
}

fn emit(out: &mut GraphBuilder, subject: NodeId, predicate: String, object: Object) {
    out.push(Triple {
        subject,
        predicate,
        object,
        origin: Origin::Rdfa,
    });
}
