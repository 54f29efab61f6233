//! Canonical dataset records and the predicate mapping that populates them.

mod record;

pub use record::{DatasetRecord, Download, LicenseInfo, RecordDates, TopicScore};

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extract::{EntitySubgraph, NodeId, Object};
use crate::tsv;
use crate::vocab;

/// Canonical properties of a dataset record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CanonicalProperty {
    Description,
    Title,
    Provider,
    Keywords,
    Url,
    TemporalCoverage,
    DataDownload,
    SpatialCoverage,
    DateModified,
    License,
    DatePublished,
    Catalog,
    Variable,
    Authors,
    SameAs,
    DateCreated,
    AlternateName,
    IsAccessibleForFree,
    Identifier,
}

impl CanonicalProperty {
    pub const ALL: [CanonicalProperty; 19] = [
        CanonicalProperty::Description,
        CanonicalProperty::Title,
        CanonicalProperty::Provider,
        CanonicalProperty::Keywords,
        CanonicalProperty::Url,
        CanonicalProperty::TemporalCoverage,
        CanonicalProperty::DataDownload,
        CanonicalProperty::SpatialCoverage,
        CanonicalProperty::DateModified,
        CanonicalProperty::License,
        CanonicalProperty::DatePublished,
        CanonicalProperty::Catalog,
        CanonicalProperty::Variable,
        CanonicalProperty::Authors,
        CanonicalProperty::SameAs,
        CanonicalProperty::DateCreated,
        CanonicalProperty::AlternateName,
        CanonicalProperty::IsAccessibleForFree,
        CanonicalProperty::Identifier,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CanonicalProperty::Description => "description",
            CanonicalProperty::Title => "title",
            CanonicalProperty::Provider => "provider",
            CanonicalProperty::Keywords => "keywords",
            CanonicalProperty::Url => "url",
            CanonicalProperty::TemporalCoverage => "temporal_coverage",
            CanonicalProperty::DataDownload => "data_download",
            CanonicalProperty::SpatialCoverage => "spatial_coverage",
            CanonicalProperty::DateModified => "date_modified",
            CanonicalProperty::License => "license",
            CanonicalProperty::DatePublished => "date_published",
            CanonicalProperty::Catalog => "catalog",
            CanonicalProperty::Variable => "variable",
            CanonicalProperty::Authors => "authors",
            CanonicalProperty::SameAs => "same_as",
            CanonicalProperty::DateCreated => "date_created",
            CanonicalProperty::AlternateName => "alternate_name",
            CanonicalProperty::IsAccessibleForFree => "is_accessible_for_free",
            CanonicalProperty::Identifier => "identifier",
        }
    }
}

impl fmt::Display for CanonicalProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CanonicalProperty {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        CanonicalProperty::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown canonical property {s:?}"))
    }
}

/// A source predicate, or a two-step path `outer>inner` through a nested entity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SourcePath {
    Direct(String),
    Nested(String, String),
}

impl SourcePath {
    fn parse(s: &str) -> Option<Self> {
        match s.split_once('>') {
            Some((outer, inner)) if !outer.is_empty() && !inner.is_empty() => Some(SourcePath::Nested(
                vocab::canonical_iri(outer.trim()).into_owned(),
                vocab::canonical_iri(inner.trim()).into_owned(),
            )),
            Some(_) => None,
            None if !s.is_empty() => Some(SourcePath::Direct(vocab::canonical_iri(s).into_owned())),
            None => None,
        }
    }

    /// The predicate on the dataset node this path starts from.
    pub fn head(&self) -> &str {
        match self {
            SourcePath::Direct(p) | SourcePath::Nested(p, _) => p,
        }
    }
}

impl fmt::Display for SourcePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourcePath::Direct(p) => f.write_str(p),
            SourcePath::Nested(a, b) => write!(f, "{a}>{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyMapping {
    pub property: CanonicalProperty,
    pub sources: Vec<SourcePath>,
}

/// Ordered table of canonical properties and their source predicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingTable {
    mappings: Vec<PropertyMapping>,
}

pub const MAPPING_FILE: &str = "mapping.tsv";

impl MappingTable {
    /// Parses `property<TAB>iri,iri,...` lines.
    pub fn parse(content: &str) -> Result<Self> {
        let mut mappings: Vec<PropertyMapping> = Vec::new();
        let mut seen_sources: HashMap<SourcePath, CanonicalProperty> = HashMap::new();
        for line in tsv::lines(content) {
            line.expect(MAPPING_FILE, 2, 2)?;
            let property: CanonicalProperty = line.fields[0]
                .parse()
                .map_err(|e: String| Error::config(MAPPING_FILE, line.number, e))?;
            if mappings.iter().any(|m| m.property == property) {
                return Err(Error::config(
                    MAPPING_FILE,
                    line.number,
                    format!("property {property} listed twice"),
                ));
            }
            let mut sources = Vec::new();
            for raw in line.fields[1].split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let source = SourcePath::parse(raw)
                    .ok_or_else(|| Error::config(MAPPING_FILE, line.number, format!("bad source {raw:?}")))?;
                if let Some(other) = seen_sources.insert(source.clone(), property) {
                    return Err(Error::config(
                        MAPPING_FILE,
                        line.number,
                        format!("source {source} already mapped to {other}"),
                    ));
                }
                sources.push(source);
            }
            if sources.is_empty() {
                return Err(Error::config(MAPPING_FILE, line.number, "no source predicates"));
            }
            mappings.push(PropertyMapping { property, sources });
        }
        for required in [CanonicalProperty::Title, CanonicalProperty::Description] {
            if !mappings.iter().any(|m| m.property == required) {
                return Err(Error::config(MAPPING_FILE, 0, format!("missing mapping for {required}")));
            }
        }
        Ok(MappingTable { mappings })
    }

    pub fn mappings(&self) -> &[PropertyMapping] {
        &self.mappings
    }

    pub fn sources(&self, property: CanonicalProperty) -> &[SourcePath] {
        self.mappings
            .iter()
            .find(|m| m.property == property)
            .map(|m| m.sources.as_slice())
            .unwrap_or(&[])
    }

    fn is_mapped_head(&self, predicate: &str) -> bool {
        self.mappings
            .iter()
            .flat_map(|m| &m.sources)
            .any(|s| s.head() == predicate)
    }
}

/// An extracted value before normalization.
#[derive(Debug, Clone, PartialEq)]
pub enum RawValue {
    Text { value: String, language: Option<String> },
    Iri(String),
    Entity(RawEntity),
}

/// A nested node (Organization, DataDownload, ...) with its own properties.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawEntity {
    pub id: Option<String>,
    pub types: Vec<String>,
    /// Properties in first-appearance order, keyed by canonical predicate IRI.
    pub properties: Vec<(String, Vec<RawValue>)>,
}

impl RawEntity {
    pub fn get(&self, predicate: &str) -> &[RawValue] {
        self.properties
            .iter()
            .find(|(p, _)| p == predicate)
            .map(|(_, v)| v.as_slice())
            .unwrap_or(&[])
    }

    /// First plain text found under any of `predicates`, in that order.
    pub fn first_text(&self, predicates: &[&str]) -> Option<String> {
        predicates
            .iter()
            .flat_map(|p| self.get(p))
            .filter_map(RawValue::as_text)
            .map(str::trim)
            .find(|t| !t.is_empty())
            .map(str::to_string)
    }
}

impl RawValue {
    /// Literal text or IRI; `None` for nested entities.
    pub fn as_text(&self) -> Option<&str> {
        match self {
            RawValue::Text { value, .. } => Some(value),
            RawValue::Iri(iri) => Some(iri),
            RawValue::Entity(_) => None,
        }
    }

    /// A display string for any value: entities reduce to a name, URL,
    /// value or identifier.
    pub fn display_text(&self) -> Option<String> {
        match self {
            RawValue::Entity(e) => e
                .first_text(&[
                    "http://schema.org/name",
                    "http://xmlns.com/foaf/0.1/name",
                    "http://purl.org/dc/terms/title",
                    "http://www.w3.org/2000/01/rdf-schema#label",
                    "http://schema.org/value",
                    "http://schema.org/url",
                ])
                .or_else(|| e.id.clone()),
            other => other.as_text().map(|t| t.trim().to_string()).filter(|t| !t.is_empty()),
        }
    }

    /// Every text or IRI contained in the value, recursively.
    pub fn all_texts(&self) -> Vec<&str> {
        match self {
            RawValue::Entity(e) => {
                let mut out: Vec<&str> = e.id.as_deref().into_iter().collect();
                for (_, values) in &e.properties {
                    for v in values {
                        out.extend(v.all_texts());
                    }
                }
                out
            }
            other => other.as_text().into_iter().collect(),
        }
    }
}

/// A raw value together with the source it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct SourcedValue {
    pub source: String,
    pub value: RawValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SourceVocabulary {
    #[serde(rename = "schema.org")]
    SchemaOrg,
    #[serde(rename = "dcat")]
    Dcat,
    #[serde(rename = "mixed")]
    Mixed,
}

impl fmt::Display for SourceVocabulary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SourceVocabulary::SchemaOrg => "schema.org",
            SourceVocabulary::Dcat => "dcat",
            SourceVocabulary::Mixed => "mixed",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawDatasetRecord {
    pub page_url: String,
    pub entity_index: usize,
    pub source_vocabulary: SourceVocabulary,
    pub values: BTreeMap<CanonicalProperty, Vec<SourcedValue>>,
    /// Predicates on the dataset node that no mapping covers, with counts.
    pub unmapped: BTreeMap<String, usize>,
    /// Language tags of every literal in the entity, in extraction order.
    pub literal_languages: Vec<String>,
}

impl RawDatasetRecord {
    pub fn get(&self, property: CanonicalProperty) -> &[SourcedValue] {
        self.values.get(&property).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn raw_values(&self, property: CanonicalProperty) -> impl Iterator<Item = &RawValue> {
        self.get(property).iter().map(|s| &s.value)
    }

    /// Display texts of a property, empty values dropped.
    pub fn texts(&self, property: CanonicalProperty) -> Vec<String> {
        self.raw_values(property).filter_map(RawValue::display_text).collect()
    }
}

const MAX_NESTING: usize = 16;

struct EntityView<'a> {
    entity: &'a EntitySubgraph,
}

impl EntityView<'_> {
    fn has_outgoing(&self, node: &NodeId) -> bool {
        self.entity.outgoing(node).next().is_some()
    }

    fn to_raw(&self, object: &Object, path: &mut Vec<NodeId>) -> RawValue {
        match object {
            Object::Literal(lit) => RawValue::Text {
                value: lit.value.clone(),
                language: lit.language.clone(),
            },
            Object::Node(node) => {
                if !self.has_outgoing(node) || path.contains(node) || path.len() >= MAX_NESTING {
                    match node {
                        NodeId::Iri(iri) => RawValue::Iri(iri.clone()),
                        NodeId::Blank(_) => RawValue::Entity(RawEntity::default()),
                    }
                } else {
                    path.push(node.clone());
                    let entity = self.node_entity(node, path);
                    path.pop();
                    RawValue::Entity(entity)
                }
            }
        }
    }

    fn node_entity(&self, node: &NodeId, path: &mut Vec<NodeId>) -> RawEntity {
        let mut entity = RawEntity {
            id: node.as_iri().map(str::to_string),
            ..Default::default()
        };
        for t in self.entity.outgoing(node) {
            let predicate = vocab::canonical_iri(&t.predicate).into_owned();
            if predicate == vocab::RDF_TYPE {
                if let Some(iri) = t.object.as_node().and_then(NodeId::as_iri) {
                    entity.types.push(vocab::canonical_iri(iri).into_owned());
                }
                continue;
            }
            let value = self.to_raw(&t.object, path);
            match entity.properties.iter_mut().find(|(p, _)| *p == predicate) {
                Some((_, values)) => values.push(value),
                None => entity.properties.push((predicate, vec![value])),
            }
        }
        entity
    }
}

/// Maps a dataset subgraph onto canonical properties using `table`.
pub fn map_entity_to_record(
    entity: &EntitySubgraph,
    page_url: &str,
    entity_index: usize,
    table: &MappingTable,
) -> RawDatasetRecord {
    let view = EntityView { entity };
    let mut path = vec![entity.root.clone()];
    let root = view.node_entity(&entity.root, &mut path);

    let mut values: BTreeMap<CanonicalProperty, Vec<SourcedValue>> = BTreeMap::new();
    let mut vocab_seen = HashSet::new();
    for iri in &root.types {
        vocab_seen.insert(vocabulary_family(iri));
    }

    for mapping in table.mappings() {
        let mut collected = Vec::new();
        for source in &mapping.sources {
            match source {
                SourcePath::Direct(p) => {
                    for v in root.get(p) {
                        collected.push(SourcedValue {
                            source: p.clone(),
                            value: v.clone(),
                        });
                    }
                }
                SourcePath::Nested(outer, inner) => {
                    for v in root.get(outer) {
                        if let RawValue::Entity(nested) = v {
                            for inner_value in nested.get(inner) {
                                collected.push(SourcedValue {
                                    source: source.to_string(),
                                    value: inner_value.clone(),
                                });
                            }
                        }
                    }
                }
            }
        }
        if !collected.is_empty() {
            for s in &collected {
                let head = s.source.split('>').next().unwrap_or(&s.source);
                vocab_seen.insert(vocabulary_family(head));
            }
            values.insert(mapping.property, collected);
        }
    }

    let mut unmapped = BTreeMap::new();
    for (predicate, vals) in &root.properties {
        if !table.is_mapped_head(predicate) {
            *unmapped.entry(predicate.clone()).or_insert(0) += vals.len();
        }
    }

    let literal_languages = entity
        .triples
        .iter()
        .filter_map(|t| match &t.object {
            Object::Literal(lit) => lit.language.clone(),
            Object::Node(_) => None,
        })
        .collect();

    let schema = vocab_seen.contains(&Family::Schema);
    let dcat = vocab_seen.contains(&Family::Dcat);
    let source_vocabulary = match (schema, dcat) {
        (true, true) => SourceVocabulary::Mixed,
        (false, true) => SourceVocabulary::Dcat,
        _ => SourceVocabulary::SchemaOrg,
    };

    RawDatasetRecord {
        page_url: page_url.to_string(),
        entity_index,
        source_vocabulary,
        values,
        unmapped,
        literal_languages,
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
enum Family {
    Schema,
    Dcat,
    Neutral,
}

fn vocabulary_family(iri: &str) -> Family {
    if vocab::is_schema_org(iri) {
        Family::Schema
    } else if vocab::is_dcat_family(iri) {
        Family::Dcat
    } else {
        Family::Neutral
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::{extract_structured_data, select_dataset_entities};

    const URL: &str = "https://example.org/p";

    fn table() -> MappingTable {
        MappingTable::parse(crate::config::BUNDLED_MAPPING).unwrap()
    }

    fn map_first(html: &str) -> RawDatasetRecord {
        let g = extract_structured_data(html, URL);
        let entities = select_dataset_entities(&g);
        map_entity_to_record(&entities[0], URL, 0, &table())
    }

    fn text(v: &str) -> RawValue {
        RawValue::Text {
            value: v.into(),
            language: None,
        }
    }

    #[test]
    fn bundled_table_is_valid() {
        let t = table();
        assert!(t.mappings().len() >= 18);
        for m in t.mappings() {
            assert!(!m.sources.is_empty());
        }
    }

    #[test]
    fn duplicate_source_is_rejected() {
        let content = "title\thttp://schema.org/name\ndescription\thttp://schema.org/name\n";
        let err = MappingTable::parse(content).unwrap_err();
        assert!(err.is_config_error());
        assert!(err.to_string().contains("already mapped"));
    }

    #[test]
    fn unknown_property_is_rejected() {
        let err = MappingTable::parse("colour\thttp://schema.org/color\n").unwrap_err();
        assert!(err.to_string().contains("unknown canonical property"));
    }

    #[test]
    fn title_values_follow_table_order() {
        let raw = map_first(
            r#"<script type="application/ld+json">{"@context":{"@vocab":"http://schema.org/","dct":"http://purl.org/dc/terms/"},
               "@type":"Dataset","dct:title":"Y","name":"X"}</script>"#,
        );
        let titles: Vec<_> = raw.raw_values(CanonicalProperty::Title).cloned().collect();
        assert_eq!(titles, vec![text("X"), text("Y")]);
        assert_eq!(raw.source_vocabulary, SourceVocabulary::Mixed);
    }

    #[test]
    fn dcat_only_entity() {
        let raw = map_first(
            r#"<script type="application/ld+json">{"@context":{"dcat":"http://www.w3.org/ns/dcat#","purl":"http://purl.org/dc/terms/"},
               "@type":"dcat:Dataset","purl:description":"d"}</script>"#,
        );
        assert_eq!(raw.source_vocabulary, SourceVocabulary::Dcat);
        assert_eq!(raw.texts(CanonicalProperty::Description), vec!["d"]);
    }

    #[test]
    fn nested_publisher_is_structured() {
        let raw = map_first(
            r#"<script type="application/ld+json">{"@context":"https://schema.org","@type":"Dataset",
               "publisher":{"@type":"Organization","name":"USGS"}}</script>"#,
        );
        let providers: Vec<_> = raw.raw_values(CanonicalProperty::Provider).cloned().collect();
        assert_eq!(
            providers,
            vec![RawValue::Entity(RawEntity {
                id: None,
                types: vec!["http://schema.org/Organization".into()],
                properties: vec![("http://schema.org/name".into(), vec![text("USGS")])],
            })]
        );
        assert_eq!(raw.texts(CanonicalProperty::Provider), vec!["USGS"]);
    }

    #[test]
    fn distribution_license_path_and_unmapped_bag() {
        let raw = map_first(
            r#"<script type="application/ld+json">{"@context":"https://schema.org","@type":"Dataset","name":"n",
               "license":"https://creativecommons.org/publicdomain/zero/1.0/",
               "distribution":{"@type":"DataDownload","contentUrl":"https://x.org/a.csv",
                               "license":"https://creativecommons.org/licenses/by/4.0/"},
               "funder":"ACME","measurementTechnique":["a","b"]}</script>"#,
        );
        assert_eq!(
            raw.texts(CanonicalProperty::License),
            vec![
                "https://creativecommons.org/publicdomain/zero/1.0/",
                "https://creativecommons.org/licenses/by/4.0/"
            ]
        );
        assert_eq!(raw.unmapped.get("http://schema.org/funder"), Some(&1));
        assert_eq!(raw.unmapped.get("http://schema.org/measurementTechnique"), Some(&2));
        assert_eq!(raw.get(CanonicalProperty::DataDownload).len(), 1);
    }

    #[test]
    fn mapping_is_order_stable() {
        let html = r#"<div itemscope itemtype="https://schema.org/Dataset"><span itemprop="name">a</span>
            <span itemprop="keywords">k1</span><span itemprop="keywords">k2</span></div>"#;
        assert_eq!(map_first(html), map_first(html));
        assert_eq!(map_first(html).texts(CanonicalProperty::Keywords), vec!["k1", "k2"]);
    }

    #[test]
    fn cyclic_entities_terminate() {
        let raw = map_first(
            r#"<script type="application/ld+json">{"@context":"https://schema.org","@id":"https://x.org/d","@type":"Dataset",
               "name":"n","isPartOf":{"@id":"https://x.org/c","hasPart":{"@id":"https://x.org/d"}}}</script>"#,
        );
        assert_eq!(raw.texts(CanonicalProperty::Title), vec!["n"]);
    }
}
