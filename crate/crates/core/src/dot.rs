//! Graphviz DOT emission.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::graph::{Edge, Graph};

/// Renders `g` as an undirected DOT graph. Edges listed in `dashed` are drawn
/// with `style=dashed`.
pub fn to_dot(g: &Graph, dashed: &BTreeSet<Edge>) -> String {
    let mut out = String::from("graph G {\n");
    for v in g.vertices() {
        writeln!(out, "  {v};").unwrap();
    }
    for (u, v) in g.edges() {
        if dashed.contains(&(u, v)) {
            writeln!(out, "  {u} -- {v} [style=dashed];").unwrap();
        } else {
            writeln!(out, "  {u} -- {v};").unwrap();
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_and_dashed() {
        let g = Graph::from_edges([(1, 2), (0, 1)]);
        assert_eq!(
            to_dot(&g, &BTreeSet::new()),
            "graph G {\n  0;\n  1;\n  2;\n  0 -- 1;\n  1 -- 2;\n}\n"
        );
        let dashed = [(1, 2)].into_iter().collect();
        assert!(to_dot(&g, &dashed).contains("1 -- 2 [style=dashed];"));
    }
}
