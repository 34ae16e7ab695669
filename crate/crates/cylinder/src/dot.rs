use std::fmt::{Display, Write};

use crate::{Label, LabeledDigraph};

/// Renders a label as `{(1,1),(2,2)}`.
pub fn label_string(label: &Label) -> String {
    let parts: Vec<String> = label.iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

/// Graphviz rendering with edge labels. Output order follows vertex order.
pub fn to_dot<V: Ord + Clone + Display>(name: &str, g: &LabeledDigraph<V>) -> String {
    let mut s = String::new();
    writeln!(s, "digraph \"{name}\" {{").unwrap();
    for v in g.vertices() {
        writeln!(s, "  \"{v}\";").unwrap();
    }
    for (u, v, l) in g.edges() {
        writeln!(s, "  \"{u}\" -> \"{v}\" [label=\"{}\"];", label_string(l)).unwrap();
    }
    s.push_str("}\n");
    s
}
