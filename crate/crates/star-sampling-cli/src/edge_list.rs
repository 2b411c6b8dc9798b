//! SNAP-style edge-list ingestion.
//!
//! Whitespace-separated vertex-id pairs, one edge per line; lines starting
//! with `#` are comments. Ids may be arbitrary strings and are remapped to
//! `0..n-1` in first-appearance order. Directed inputs are symmetrized and
//! the result is simplified (self-loops dropped, duplicates collapsed).

use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::Path;

use std::collections::HashMap;

use star_sampling::graph::{Graph, VertexId};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("{path}:{line}: expected two whitespace-separated vertex ids, got {found:?}")]
    Malformed {
        path: String,
        line: usize,
        found: String,
    },
    #[error("{path}: no edges found")]
    Empty { path: String },
    #[error(transparent)]
    Graph(#[from] star_sampling::Error),
}

/// A graph together with its id-remapping table: `labels[v]` is the
/// original id of vertex `v`.
#[derive(Debug)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub labels: Vec<String>,
}

impl LoadedGraph {
    /// Writes the `original_id,vertex_id` remap table.
    pub fn dump_remap<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "original_id,vertex_id")?;
        for (v, label) in self.labels.iter().enumerate() {
            writeln!(out, "{label},{v}")?;
        }
        Ok(())
    }
}

/// Loads an edge-list file; see the module docs for the accepted format.
pub fn load_edge_list(path: &Path) -> Result<LoadedGraph, LoadError> {
    let display = path.display().to_string();
    let file = File::open(path).map_err(|source| LoadError::Io {
        path: display.clone(),
        source,
    })?;
    parse_edge_list(BufReader::new(file), &display)
}

/// Parses edge-list text from any reader; `name` labels errors.
pub fn parse_edge_list<R: Read>(reader: R, name: &str) -> Result<LoadedGraph, LoadError> {
    let mut ids: HashMap<String, VertexId> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut pairs: Vec<(VertexId, VertexId)> = Vec::new();
    let mut intern = |token: &str, labels: &mut Vec<String>| -> VertexId {
        *ids.entry(token.to_owned()).or_insert_with(|| {
            labels.push(token.to_owned());
            (labels.len() - 1) as VertexId
        })
    };

    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line = line.map_err(|source| LoadError::Io {
            path: name.to_owned(),
            source,
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (u, v) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(u), Some(v), None) => (u, v),
            _ => {
                return Err(LoadError::Malformed {
                    path: name.to_owned(),
                    line: idx + 1,
                    found: trimmed.to_owned(),
                })
            }
        };
        let u = intern(u, &mut labels);
        let v = intern(v, &mut labels);
        pairs.push((u, v));
    }
    if pairs.is_empty() {
        return Err(LoadError::Empty {
            path: name.to_owned(),
        });
    }
    let graph = Graph::from_edges(labels.len(), pairs)?;
    Ok(LoadedGraph { graph, labels })
}

/// Writes `g` as a plain edge list under its numeric vertex ids.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> io::Result<()> {
    writeln!(out, "# {} vertices, {} edges", g.n(), g.m())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u}\t{v}")?;
    }
    Ok(())
}
