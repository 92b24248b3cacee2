//! Graphviz rendering: wrappings become clusters, relations are dashed.

use std::fmt::Write;

use crate::model::{Entity, Model, NodeId, WrapId};

fn node_name(n: NodeId) -> String {
    format!("n{}", n.0)
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"").replace('<', "&lt;").replace('>', "&gt;")
}

/// The node a wrapping is anchored on for edges (Graphviz cannot target clusters directly).
fn anchor(m: &Model, w: &WrapId) -> Option<NodeId> {
    m.wrapping(w).and_then(|d| d.members.iter().next().copied())
}

fn endpoint(m: &Model, e: &Entity) -> (String, Option<String>) {
    match e {
        Entity::Node(n) => (node_name(*n), None),
        Entity::Wrap(w) => match anchor(m, w) {
            Some(a) => (node_name(a), Some(format!("cluster_{}", w.0))),
            None => (format!("empty_{}", w.0), None),
        },
    }
}

fn html_label(labels: &[String], types: &[String]) -> String {
    let mut s = escape(&labels.join(","));
    if !types.is_empty() {
        if !s.is_empty() {
            s.push_str("<BR/>");
        }
        s.push_str(&format!("<I>{}</I>", escape(&types.join(","))));
    }
    if s.is_empty() {
        "\" \"".to_string()
    } else {
        format!("<{s}>")
    }
}

pub fn to_dot(m: &Model) -> String {
    let mut out = String::new();
    out.push_str("digraph fsw {\n  compound=true;\n  node [shape=circle];\n");
    let node_line = |out: &mut String, n: NodeId, indent: &str| {
        let d = m.node(n).expect("node exists");
        let labels: Vec<String> = d.labels.iter().map(|l| l.name.clone()).collect();
        let types: Vec<String> = d.types.iter().cloned().collect();
        let _ = writeln!(out, "{indent}{} [label={}];", node_name(n), html_label(&labels, &types));
    };
    for (w, d) in m.wrappings() {
        let labels: Vec<String> = d.labels.iter().map(|l| l.name.clone()).collect();
        let types: Vec<String> = d.types.iter().cloned().collect();
        let _ = writeln!(out, "  subgraph cluster_{} {{", w.0);
        let _ = writeln!(out, "    label={};", html_label(&labels, &types));
        out.push_str("    style=rounded;\n");
        if d.members.is_empty() {
            let _ = writeln!(out, "    empty_{} [shape=point];", w.0);
        }
        for n in &d.members {
            node_line(&mut out, *n, "    ");
        }
        out.push_str("  }\n");
    }
    for (n, _) in m.nodes() {
        if m.container(n).is_none() {
            node_line(&mut out, n, "  ");
        }
    }
    for (from, attr, to) in m.attrs() {
        let (t, lhead) = endpoint(m, to);
        let extra = lhead.map(|c| format!(", lhead={c}")).unwrap_or_default();
        let _ = writeln!(out, "  {} -> {t} [label=\"{}\"{extra}];", node_name(from), escape(attr));
    }
    for (name, args) in m.rels() {
        for pair in args.windows(2) {
            let (s, ltail) = endpoint(m, &pair[0]);
            let (t, lhead) = endpoint(m, &pair[1]);
            let mut extra = String::new();
            if let Some(c) = ltail {
                extra.push_str(&format!(", ltail={c}"));
            }
            if let Some(c) = lhead {
                extra.push_str(&format!(", lhead={c}"));
            }
            let _ = writeln!(out, "  {s} -> {t} [label=\"{}\", style=dashed{extra}];", escape(name));
        }
    }
    out.push_str("}\n");
    out
}
