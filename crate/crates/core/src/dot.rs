//! Graphviz export of a spanning tree.
//!
//! The output is an undirected graph meant for `neato`: edge `len` is the
//! fused distance. Nodes and edges are written in index order so identical
//! trees produce identical bytes.

use std::io::Write;

use crate::error::Result;
use crate::mst::SpanningTree;

fn escape(label: &str) -> String {
    let mut out = String::with_capacity(label.len());
    for c in label.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' | '\r' => out.push(' '),
            c => out.push(c),
        }
    }
    out
}

/// `titles`, when given, adds a second label line under each id.
pub fn write_dot(
    mut out: impl Write,
    tree: &SpanningTree,
    ids: &[String],
    titles: Option<&[String]>,
) -> Result<()> {
    writeln!(out, "graph mst {{")?;
    writeln!(out, "\tnode [shape=ellipse];")?;
    for (v, id) in ids.iter().enumerate() {
        match titles {
            Some(t) => writeln!(
                out,
                "\tn{v} [label=\"{}\\n{}\"];",
                escape(id),
                escape(&t[v])
            )?,
            None => writeln!(out, "\tn{v} [label=\"{}\"];", escape(id))?,
        }
    }
    for e in tree.edges() {
        writeln!(out, "\tn{} -- n{} [len={}, weight={}];", e.u, e.v, e.w, e.w)?;
    }
    writeln!(out, "}}")?;
    Ok(())
}
