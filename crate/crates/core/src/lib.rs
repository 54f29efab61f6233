//! Extraction, normalization and corpus analytics for dataset metadata
//! embedded in web pages.
//!
//! Statistics are generic over [`num::Scalar`] (`f32` or `f64`); the
//! aliases below fix them to `f64`.

pub mod analytics;
pub mod config;
pub mod dedup;
pub mod error;
pub mod extract;
pub mod model;
pub mod normalize;
pub mod num;
pub mod store;
pub mod topics;
mod tsv;
pub mod vocab;

pub use config::NormalizationConfig;
pub use error::{Error, Result};
pub use model::{CanonicalProperty, DatasetRecord, RawDatasetRecord};
pub use num::Scalar;
pub use store::CorpusSnapshot;

pub type AnalyticsReport = analytics::AnalyticsReport<f64>;
pub type PowerLawFit = analytics::PowerLawFit<f64>;
pub type ChurnReport = analytics::ChurnReport<f64>;
pub type UsageReport = analytics::UsageReport<f64>;
pub type DomainDistribution = analytics::DomainDistribution<f64>;
pub type OpennessStats = analytics::OpennessStats<f64>;
pub type RecencyStats = analytics::RecencyStats<f64>;
