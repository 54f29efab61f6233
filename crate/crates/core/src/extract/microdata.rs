//! Microdata to triples, following the W3C Microdata-to-RDF mapping.

use std::collections::{HashMap, HashSet, VecDeque};

use ego_tree::NodeId as DomId;
use scraper::{ElementRef, Html};
use url::Url;

use super::graph::{GraphBuilder, Literal, NodeId, Object, Origin, Triple};
use super::{collapse_whitespace, element_language, resolve_iri};
use crate::extract::jsonld::is_absolute_iri;
use crate::vocab;

struct Walker<'a> {
    base: &'a Url,
    by_id: HashMap<String, ElementRef<'a>>,
    order: HashMap<DomId, usize>,
    items: HashMap<DomId, NodeId>,
    out: &'a mut GraphBuilder,
}

pub(crate) fn extract(doc: &Html, base: &Url, out: &mut GraphBuilder) {
    let mut by_id = HashMap::new();
    let mut order = HashMap::new();
    let mut top_level = Vec::new();
    for (i, el) in doc.root_element().descendants().filter_map(ElementRef::wrap).enumerate() {
        order.insert(el.id(), i);
        let attrs = el.value();
        if let Some(id) = attrs.attr("id") {
            by_id.entry(id.to_string()).or_insert(el);
        }
        if attrs.attr("itemscope").is_some() && attrs.attr("itemprop").is_none() {
            top_level.push(el);
        }
    }
    let mut walker = Walker {
        base,
        by_id,
        order,
        items: HashMap::new(),
        out,
    };
    for el in top_level {
        walker.item(el, None);
    }
}

/// Vocabulary namespace derived from an item type IRI.
fn vocabulary_of(type_iri: &str) -> String {
    match type_iri.find('#') {
        Some(i) => type_iri[..=i].to_string(),
        None => match type_iri.rfind('/') {
            Some(i) => type_iri[..=i].to_string(),
            None => type_iri.to_string(),
        },
    }
}

impl<'a> Walker<'a> {
    fn item(&mut self, el: ElementRef<'a>, inherited_vocab: Option<&str>) -> NodeId {
        if let Some(existing) = self.items.get(&el.id()) {
            return existing.clone();
        }
        let subject = match el.value().attr("itemid").map(str::trim).filter(|s| !s.is_empty()) {
            Some(id) => NodeId::Iri(resolve_iri(self.base, id)),
            None => self.out.fresh_blank(),
        };
        self.items.insert(el.id(), subject.clone());

        let types: Vec<String> = el
            .value()
            .attr("itemtype")
            .unwrap_or("")
            .split_ascii_whitespace()
            .filter(|t| is_absolute_iri(t))
            .map(str::to_string)
            .collect();
        for ty in &types {
            self.emit(subject.clone(), vocab::RDF_TYPE.to_string(), Object::Node(NodeId::Iri(ty.clone())));
        }
        let vocabulary = match types.first() {
            Some(first) => Some(vocabulary_of(first)),
            None => inherited_vocab.map(str::to_string),
        };

        for prop_el in self.property_elements(el) {
            let names: Vec<&str> = prop_el
                .value()
                .attr("itemprop")
                .unwrap_or("")
                .split_ascii_whitespace()
                .collect();
            let mut predicates = Vec::new();
            for name in names {
                if is_absolute_iri(name) {
                    predicates.push(name.to_string());
                } else if let Some(v) = &vocabulary {
                    predicates.push(format!("{v}{name}"));
                } else {
                    self.out.diagnose(
                        Some(Origin::Microdata),
                        format!("itemprop {name:?} has no vocabulary; skipped"),
                    );
                }
            }
            if predicates.is_empty() {
                continue;
            }
            let value = if prop_el.value().attr("itemscope").is_some() {
                Object::Node(self.item(prop_el, vocabulary.as_deref()))
            } else {
                self.property_value(prop_el)
            };
            for predicate in predicates {
                self.emit(subject.clone(), predicate, value.clone());
            }
        }
        subject
    }

    /// Elements carrying properties of the item rooted at `root`, in tree order.
    fn property_elements(&mut self, root: ElementRef<'a>) -> Vec<ElementRef<'a>> {
        let mut results = Vec::new();
        let mut memory: HashSet<DomId> = HashSet::from([root.id()]);
        let mut pending: VecDeque<ElementRef<'a>> = root.children().filter_map(ElementRef::wrap).collect();
        for reference in root.value().attr("itemref").unwrap_or("").split_ascii_whitespace() {
            match self.by_id.get(reference) {
                Some(el) => pending.push_back(*el),
                None => self.out.diagnose(
                    Some(Origin::Microdata),
                    format!("itemref {reference:?} does not match any element id"),
                ),
            }
        }
        while let Some(current) = pending.pop_front() {
            if !memory.insert(current.id()) {
                continue;
            }
            if current.value().attr("itemscope").is_none() {
                pending.extend(current.children().filter_map(ElementRef::wrap));
            }
            if current.value().attr("itemprop").is_some() {
                results.push(current);
            }
        }
        results.sort_by_key(|el| self.order.get(&el.id()).copied().unwrap_or(usize::MAX));
        results
    }

    fn property_value(&self, el: ElementRef<'a>) -> Object {
        let attrs = el.value();
        let url_attr = match attrs.name() {
            "a" | "area" | "link" => Some("href"),
            "audio" | "embed" | "iframe" | "img" | "source" | "track" | "video" => Some("src"),
            "object" => Some("data"),
            _ => None,
        };
        if let Some(attr) = url_attr {
            let raw = attrs.attr(attr).unwrap_or("");
            return Object::Node(NodeId::Iri(resolve_iri(self.base, raw)));
        }
        let (text, datatype) = match attrs.name() {
            "meta" => (attrs.attr("content").unwrap_or("").to_string(), None),
            "data" | "meter" => (attrs.attr("value").unwrap_or("").to_string(), None),
            "time" => match attrs.attr("datetime") {
                Some(dt) => (dt.trim().to_string(), None),
                None => (collapse_whitespace(&el.text().collect::<String>()), None),
            },
            _ => (collapse_whitespace(&el.text().collect::<String>()), None),
        };
        Object::Literal(Literal {
            value: text,
            language: if datatype.is_none() { element_language(el) } else { None },
            datatype,
        })
    }

    fn emit(&mut self, subject: NodeId, predicate: String, object: Object) {
        self.out.push(Triple {
            subject,
            predicate,
            object,
            origin: Origin::Microdata,
        });
    }
}
