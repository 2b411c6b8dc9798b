//! Library surface of the star-sampling CLI: edge-list ingestion, output
//! row schemas, and the command implementations behind the binary.

pub mod app;
pub mod edge_list;
pub mod report;
