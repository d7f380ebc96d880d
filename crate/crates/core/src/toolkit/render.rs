use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use super::Poset;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Dot,
    Json,
    Text,
}

fn node_label(p: &Poset, i: usize) -> String {
    let basis = p.nodes[i].subspace.render_basis();
    format!("Q({})", basis.join(", "))
}

/// Deterministic rendering of a poset.
pub fn render(p: &Poset, format: Format) -> String {
    match format {
        Format::Dot => {
            let mut s = String::from("digraph poset {\n  rankdir=TB;\n  node [shape=box];\n");
            for (i, n) in p.nodes.iter().enumerate() {
                let label = format!("{}\\n{}", node_label(p, i), n.witnesses.join(", "));
                writeln!(s, "  n{i} [label=\"{label}\"];").unwrap();
            }
            for (a, b) in &p.edges {
                writeln!(s, "  n{a} -> n{b};").unwrap();
            }
            s.push_str("}\n");
            s
        }
        Format::Json => {
            let nodes: Vec<Value> = p
                .nodes
                .iter()
                .enumerate()
                .map(|(i, n)| {
                    json!({
                        "id": i,
                        "dim": n.subspace.dim(),
                        "basis": n.subspace.render_basis(),
                        "witnesses": n.witnesses,
                    })
                })
                .collect();
            let edges: Vec<Value> = p.edges.iter().map(|(a, b)| json!([a, b])).collect();
            let doc = json!({ "nodes": nodes, "edges": edges, "depth": p.depth() });
            serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
        }
        Format::Text => {
            let mut s = String::new();
            for (i, n) in p.nodes.iter().enumerate() {
                writeln!(
                    s,
                    "[{i}] dim {} {}  <- {}",
                    n.subspace.dim(),
                    node_label(p, i),
                    n.witnesses.join(", ")
                )
                .unwrap();
            }
            for (a, b) in &p.edges {
                writeln!(s, "[{a}] > [{b}]").unwrap();
            }
            writeln!(s, "depth {}", p.depth()).unwrap();
            s
        }
    }
}

/// One degree of a per-degree report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeEntry {
    pub dim: usize,
    pub basis: Vec<String>,
}

/// `{"model", "degrees": {"<n>": {"dim", "basis"}}, "bound", "window"}`,
/// degrees in increasing numeric order.
pub fn degree_report(
    model: &str,
    degrees: &BTreeMap<u32, DegreeEntry>,
    bound: Option<u32>,
    window: Option<u32>,
) -> Value {
    let mut map = Map::new();
    for (n, e) in degrees {
        map.insert(n.to_string(), json!({ "dim": e.dim, "basis": e.basis }));
    }
    json!({
        "model": model,
        "degrees": Value::Object(map),
        "bound": bound,
        "window": window,
    })
}

/// Plain-text table of a per-degree report.
pub fn degree_table(title: &str, degrees: &BTreeMap<u32, DegreeEntry>) -> String {
    let mut s = format!("{title}\n");
    writeln!(s, "{:>4}  {:>4}  basis", "n", "dim").unwrap();
    for (n, e) in degrees {
        writeln!(s, "{n:>4}  {:>4}  {}", e.dim, e.basis.join(", ")).unwrap();
    }
    s
}
