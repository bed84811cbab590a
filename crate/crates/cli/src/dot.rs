//! Graphviz rendering of a correspondence: two Hasse diagrams joined by
//! dashed edges along the bijection.

use std::fmt::Write;

use galmon::galois::Correspondence;

/// Covering pairs `(lo, hi)` of a partial order on `0..n`.
fn hasse(n: usize, leq: impl Fn(usize, usize) -> bool) -> Vec<(usize, usize)> {
    let lt = |a: usize, b: usize| a != b && leq(a, b);
    let mut edges = Vec::new();
    for lo in 0..n {
        for hi in 0..n {
            if lt(lo, hi) && !(0..n).any(|mid| lt(lo, mid) && lt(mid, hi)) {
                edges.push((lo, hi));
            }
        }
    }
    edges
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn correspondence(c: &Correspondence) -> String {
    let mut out = String::new();
    out.push_str("digraph correspondence {\n  rankdir=BT;\n  node [shape=box, fontname=\"monospace\"];\n");

    out.push_str("  subgraph cluster_submonoids {\n    label=\"submonoids\";\n");
    for (i, e) in c.submonoids.iter().enumerate() {
        let style = if e.closed { "solid" } else { "dotted" };
        let label = format!("{{{}}}", e.sub.labels().join(","));
        writeln!(out, "    m{i} [label={}, style={style}];", quote(&label)).unwrap();
    }
    for (lo, hi) in hasse(c.submonoids.len(), |a, b| c.submonoids[a].sub.is_subset_of(&c.submonoids[b].sub)) {
        writeln!(out, "    m{lo} -> m{hi};").unwrap();
    }
    out.push_str("  }\n");

    out.push_str("  subgraph cluster_subfunctors {\n    label=\"subfunctors\";\n");
    let site = &c.site;
    for (j, e) in c.subfunctors.iter().enumerate() {
        let style = if e.closed { "solid" } else { "dotted" };
        let parts: Vec<String> =
            (0..site.len()).map(|k| format!("{}: {{{}}}", site.name(k), e.sub.labels(k).join(","))).collect();
        writeln!(out, "    f{j} [label={}, style={style}];", quote(&parts.join("\\n"))).unwrap();
    }
    for (lo, hi) in hasse(c.subfunctors.len(), |a, b| c.subfunctors[a].sub.is_subset_of(&c.subfunctors[b].sub)) {
        writeln!(out, "    f{lo} -> f{hi};").unwrap();
    }
    out.push_str("  }\n");

    for &(i, j) in &c.bijection {
        writeln!(out, "  m{i} -> f{j} [style=dashed, dir=both, constraint=false];").unwrap();
    }
    out.push_str("}\n");
    out
}
