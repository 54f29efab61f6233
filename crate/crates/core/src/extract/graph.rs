use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::vocab;

/// Syntax a triple was extracted from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Jsonld,
    Microdata,
    Rdfa,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Origin::Jsonld => "jsonld",
            Origin::Microdata => "microdata",
            Origin::Rdfa => "rdfa",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeId {
    Iri(String),
    /// Blank node label without the `_:` prefix.
    Blank(String),
}

impl NodeId {
    pub fn as_iri(&self) -> Option<&str> {
        match self {
            NodeId::Iri(iri) => Some(iri),
            NodeId::Blank(_) => None,
        }
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeId::Iri(iri) => write!(f, "<{iri}>"),
            NodeId::Blank(label) => write!(f, "_:{label}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub value: String,
    pub language: Option<String>,
    pub datatype: Option<String>,
}

impl Literal {
    pub fn plain(value: impl Into<String>) -> Self {
        Literal {
            value: value.into(),
            language: None,
            datatype: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Object {
    Node(NodeId),
    Literal(Literal),
}

impl Object {
    pub fn as_node(&self) -> Option<&NodeId> {
        match self {
            Object::Node(n) => Some(n),
            Object::Literal(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triple {
    pub subject: NodeId,
    pub predicate: String,
    pub object: Object,
    pub origin: Origin,
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <{}> ", self.subject, self.predicate)?;
        match &self.object {
            Object::Node(n) => write!(f, "{n}")?,
            Object::Literal(lit) => {
                write!(f, "{:?}", lit.value)?;
                if let Some(lang) = &lit.language {
                    write!(f, "@{lang}")?;
                } else if let Some(dt) = &lit.datatype {
                    write!(f, "^^<{dt}>")?;
                }
            }
        }
        write!(f, " [{}]", self.origin)
    }
}

/// A problem found while extracting, reported instead of failing the page.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub origin: Option<Origin>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.origin {
            Some(origin) => write!(f, "[{origin}] {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

/// All statements extracted from one page.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TripleGraph {
    pub page_url: String,
    pub triples: Vec<Triple>,
    pub blank_count: usize,
    pub diagnostics: Vec<Diagnostic>,
}

impl TripleGraph {
    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Triples with the given subject, in graph order.
    pub fn outgoing<'a>(&'a self, subject: &'a NodeId) -> impl Iterator<Item = &'a Triple> + 'a {
        self.triples.iter().filter(move |t| &t.subject == subject)
    }

    pub fn types_of<'a>(&'a self, subject: &'a NodeId) -> Vec<&'a str> {
        self.outgoing(subject)
            .filter(|t| t.predicate == vocab::RDF_TYPE)
            .filter_map(|t| t.object.as_node().and_then(NodeId::as_iri))
            .collect()
    }
}

/// Accumulates triples, allocating blank nodes in call order.
#[derive(Debug)]
pub(crate) struct GraphBuilder {
    graph: TripleGraph,
    seen: HashSet<Triple>,
}

impl GraphBuilder {
    pub fn new(page_url: &str) -> Self {
        GraphBuilder {
            graph: TripleGraph {
                page_url: page_url.to_string(),
                ..Default::default()
            },
            seen: HashSet::new(),
        }
    }

    pub fn fresh_blank(&mut self) -> NodeId {
        let id = NodeId::Blank(format!("b{}", self.graph.blank_count));
        self.graph.blank_count += 1;
        id
    }

    /// Adds a triple unless an identical one with the same origin exists.
    pub fn push(&mut self, triple: Triple) {
        if self.seen.insert(triple.clone()) {
            self.graph.triples.push(triple);
        }
    }

    pub fn diagnose(&mut self, origin: Option<Origin>, message: impl Into<String>) {
        self.graph.diagnostics.push(Diagnostic {
            origin,
            message: message.into(),
        });
    }

    pub fn finish(self) -> TripleGraph {
        self.graph
    }
}

/// A dataset node and every triple reachable from it.
#[derive(Debug, Clone, PartialEq)]
pub struct EntitySubgraph {
    pub root: NodeId,
    pub triples: Vec<Triple>,
}

impl EntitySubgraph {
    pub fn outgoing<'a>(&'a self, subject: &'a NodeId) -> impl Iterator<Item = &'a Triple> + 'a {
        self.triples.iter().filter(move |t| &t.subject == subject)
    }

    pub fn root_types(&self) -> Vec<&str> {
        self.outgoing(&self.root)
            .filter(|t| t.predicate == vocab::RDF_TYPE)
            .filter_map(|t| t.object.as_node().and_then(NodeId::as_iri))
            .collect()
    }
}

/// One subgraph per node typed `schema:Dataset` or `dcat:Dataset`, in the
/// order their type statements first appear.
pub fn select_dataset_entities(graph: &TripleGraph) -> Vec<EntitySubgraph> {
    let mut roots: Vec<&NodeId> = Vec::new();
    let mut seen_roots = HashSet::new();
    for t in &graph.triples {
        if t.predicate != vocab::RDF_TYPE {
            continue;
        }
        let is_dataset = t
            .object
            .as_node()
            .and_then(NodeId::as_iri)
            .is_some_and(vocab::is_dataset_class);
        if is_dataset && seen_roots.insert(&t.subject) {
            roots.push(&t.subject);
        }
    }

    roots
        .into_iter()
        .map(|root| EntitySubgraph {
            root: root.clone(),
            triples: reachable_triples(graph, root),
        })
        .collect()
}

fn reachable_triples(graph: &TripleGraph, root: &NodeId) -> Vec<Triple> {
    let mut reached: HashSet<&NodeId> = HashSet::from([root]);
    let mut queue = VecDeque::from([root]);
    while let Some(node) = queue.pop_front() {
        for t in graph.outgoing(node) {
            if let Object::Node(next) = &t.object {
                if reached.insert(next) {
                    queue.push_back(next);
                }
            }
        }
    }
    graph
        .triples
        .iter()
        .filter(|t| reached.contains(&t.subject))
        .cloned()
        .collect()
}
