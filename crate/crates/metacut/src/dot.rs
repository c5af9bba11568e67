//! Graphviz text for a network, optionally split by a cut.

use std::fmt::Write as _;

use metacut_core::cutspace::CutSetVector;
use metacut_core::WeightedGraph;

const PALETTE: [&str; 8] = [
    "#8dd3c7", "#fdb462", "#bebada", "#fb8072", "#80b1d3", "#b3de69", "#fccde5", "#d9d9d9",
];

/// Undirected DOT graph. Edge labels are weights; edges in `cut` are dashed
/// and nodes are filled by component index (components ordered by their
/// smallest node). Without a cut, components of `g` itself are used.
///
/// # Panics
/// If `cut` does not have one bit per edge.
pub fn emit_dot(g: &WeightedGraph, cut: Option<&CutSetVector>) -> String {
    if let Some(c) = cut {
        assert_eq!(
            c.len(),
            g.edge_count(),
            "cut-set vector length must equal the edge count"
        );
    }
    let is_cut = |id: usize| cut.is_some_and(|c| c.get(id));
    let (labels, _) = g.component_labels_without(is_cut);
    let mut out = String::from("graph metacut {\n  node [shape=circle, style=filled];\n");
    for (node, &label) in labels.iter().enumerate() {
        writeln!(out, "  {node} [fillcolor=\"{}\"];", PALETTE[label % PALETTE.len()]).unwrap();
    }
    for (id, e) in g.edges().iter().enumerate() {
        let style = if is_cut(id) { ", style=dashed" } else { "" };
        writeln!(
            out,
            "  {} -- {} [id=\"e{}\", label=\"{}\"{style}];",
            e.u,
            e.v,
            id + 1,
            e.w
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}
