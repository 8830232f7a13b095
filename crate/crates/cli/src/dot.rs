//! Graphviz export of a plan: A dashed, B dotted, XOR solid. Edges the
//! plan leaves unused are drawn in gray.

use std::fmt::Write;

use rfd_core::{CodingNetwork, Label, RecoveryPlan, Role};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn style(label: Label) -> &'static str {
    match label {
        Label::A => "dashed",
        Label::B => "dotted",
        Label::Xor => "solid",
    }
}

pub fn render(cn: &CodingNetwork, plan: &RecoveryPlan) -> String {
    let mut out = String::from("digraph plan {\n    rankdir=LR;\n    node [shape=circle];\n");
    for v in cn.graph.nodes() {
        let mut attrs = Vec::new();
        if v == cn.source || v == cn.target {
            attrs.push("shape=doublecircle".to_string());
        }
        let roles: Vec<String> = plan
            .roles
            .iter()
            .filter(|r| r.node == v)
            .map(|r| {
                let role = match r.role {
                    Role::Splitter => "split",
                    Role::Merger => "merge",
                };
                format!("{role} {}", r.label)
            })
            .collect();
        if !roles.is_empty() {
            attrs.push(format!("xlabel={}", quote(&roles.join("\\n"))));
        }
        let _ = write!(out, "    {}", quote(cn.node_name(v)));
        if !attrs.is_empty() {
            let _ = write!(out, " [{}]", attrs.join(", "));
        }
        out.push_str(";\n");
    }
    let mut used = vec![false; cn.graph.edge_count()];
    for label in Label::ALL {
        for a in plan.subflow(label) {
            if a.edge.index() >= used.len() {
                continue;
            }
            used[a.edge.index()] = true;
            let (u, v) = cn.graph.endpoints(a.edge);
            let _ = writeln!(
                out,
                "    {} -> {} [label={}, style={}];",
                quote(cn.node_name(u)),
                quote(cn.node_name(v)),
                quote(&format!("{}#{} {label}", cn.edge_name(a.edge), a.copy)),
                style(label),
            );
        }
    }
    for e in cn.graph.edges().filter(|e| !used[e.index()]) {
        let (u, v) = cn.graph.endpoints(e);
        let _ = writeln!(
            out,
            "    {} -> {} [label={}, color=gray];",
            quote(cn.node_name(u)),
            quote(cn.node_name(v)),
            quote(cn.edge_name(e)),
        );
    }
    out.push_str("}\n");
    out
}
