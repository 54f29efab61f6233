//! Snapshot persistence, page ingestion and the build pipeline.

mod ingest;
mod pipeline;
mod snapshot;

pub use ingest::{
    fetch_urls, ingest, ingest_directory, FetchedPage, IngestReport, IngestSource, Politeness, RobotsRules, URL_MAP_FILE,
    USER_AGENT,
};
pub use pipeline::{build_snapshot, process_page, BuildOptions, BuildOutput, PageResult};
pub use snapshot::{
    encode_records, read_manifest, read_snapshot, write_snapshot, CorpusSnapshot, Manifest, StageCounters,
    MANIFEST_FILE, PIPELINE_VERSION, RECORDS_FILE,
};
