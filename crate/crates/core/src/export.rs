//! DOT, edge-list CSV and JSON serialisation of a [`CleanGraph`].

use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BuildOptions, CleanGraph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Dot,
    EdgeCsv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dot" => Ok(Format::Dot),
            "csv" | "edge-csv" => Ok(Format::EdgeCsv),
            "json" => Ok(Format::Json),
            other => Err(format!(
                "unknown format {other:?} (expected dot, csv or json)"
            )),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphDocument {
    n: u64,
    include_zero_block: bool,
    vertices: Vec<(u64, u64)>,
    edges: Vec<(usize, usize)>,
    blocks: Vec<(usize, usize)>,
}

pub fn export<W: Write>(g: &CleanGraph, format: Format, mut out: W) -> Result<()> {
    match format {
        Format::Dot => write_dot(g, &mut out)?,
        Format::EdgeCsv => write_edge_csv(g, &mut out)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &document(g))?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn write_dot<W: Write>(g: &CleanGraph, out: &mut W) -> std::io::Result<()> {
    writeln!(out, "graph cl2_z{} {{", g.n())?;
    for (i, v) in g.vertices().iter().enumerate() {
        writeln!(out, "  {i} [label=\"{v}\"];")?;
    }
    for (i, j) in g.edges() {
        writeln!(out, "  {i} -- {j};")?;
    }
    writeln!(out, "}}")
}

fn write_edge_csv<W: Write>(g: &CleanGraph, out: &mut W) -> std::io::Result<()> {
    writeln!(out, "e1,u1,e2,u2")?;
    let vs = g.vertices();
    for (i, j) in g.edges() {
        writeln!(out, "{},{},{},{}", vs[i].e, vs[i].u, vs[j].e, vs[j].u)?;
    }
    Ok(())
}

fn document(g: &CleanGraph) -> GraphDocument {
    GraphDocument {
        n: g.n(),
        include_zero_block: g.includes_zero_block(),
        vertices: g.vertices().iter().map(|v| (v.e, v.u)).collect(),
        edges: g.edges().collect(),
        blocks: g.blocks().iter().map(|b| (b.start, b.end)).collect(),
    }
}

/// Read a JSON export back. The graph is rebuilt from `n` and checked
/// against the document's vertices, edges and blocks.
pub fn import_json<R: Read>(reader: R, vertex_cap: usize) -> Result<CleanGraph> {
    let doc: GraphDocument = serde_json::from_reader(reader)?;
    let opts = BuildOptions {
        include_zero_block: doc.include_zero_block,
        vertex_cap,
    };
    let g = crate::graph::build_cl2(doc.n, opts)?;
    let expected = document(&g);
    if doc.vertices != expected.vertices {
        return Err(Error::GraphMismatch("vertex list differs".into()));
    }
    if doc.blocks != expected.blocks {
        return Err(Error::GraphMismatch("block ranges differ".into()));
    }
    if doc.edges != expected.edges {
        return Err(Error::GraphMismatch("edge list differs".into()));
    }
    Ok(g)
}

/// Write a list of vertex pairs as `e1,u1,e2,u2` rows.
pub fn write_pairs_csv<W: Write>(pairs: &[(Vertex, Vertex)], mut out: W) -> Result<()> {
    writeln!(out, "e1,u1,e2,u2")?;
    for (a, b) in pairs {
        writeln!(out, "{},{},{},{}", a.e, a.u, b.e, b.u)?;
    }
    out.flush()?;
    Ok(())
}
