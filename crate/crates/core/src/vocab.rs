//! Namespace IRIs used throughout extraction and mapping.

pub const SCHEMA_HTTP: &str = "http://schema.org/";
pub const SCHEMA_HTTPS: &str = "https://schema.org/";
pub const DCAT: &str = "http://www.w3.org/ns/dcat#";
pub const DCTERMS: &str = "http://purl.org/dc/terms/";
pub const DC_ELEMENTS: &str = "http://purl.org/dc/elements/1.1/";
pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const OWL: &str = "http://www.w3.org/2002/07/owl#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
pub const FOAF: &str = "http://xmlns.com/foaf/0.1/";

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const DCAT_DATASET: &str = "http://www.w3.org/ns/dcat#Dataset";

/// Rewrites `https://schema.org/...` to the canonical `http://schema.org/...`.
pub fn canonical_iri(iri: &str) -> std::borrow::Cow<'_, str> {
    match iri.strip_prefix(SCHEMA_HTTPS) {
        Some(rest) => format!("{SCHEMA_HTTP}{rest}").into(),
        None => iri.into(),
    }
}

pub fn schema(local: &str) -> String {
    format!("{SCHEMA_HTTP}{local}")
}

pub fn is_schema_org(iri: &str) -> bool {
    iri.starts_with(SCHEMA_HTTP) || iri.starts_with(SCHEMA_HTTPS)
}

/// True for DCAT and Dublin Core predicates.
pub fn is_dcat_family(iri: &str) -> bool {
    iri.starts_with(DCAT) || iri.starts_with(DCTERMS) || iri.starts_with(DC_ELEMENTS)
}

/// Is this IRI one of the dataset classes we keep?
pub fn is_dataset_class(iri: &str) -> bool {
    canonical_iri(iri) == "http://schema.org/Dataset" || iri == DCAT_DATASET
}
