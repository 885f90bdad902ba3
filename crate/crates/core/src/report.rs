//! Report tree with a human-readable and a structured rendering.
//!
//! Structured grammar, one entry per line, in insertion order:
//!
//! ```text
//! line   := path " = " value
//! path   := key ("." key)*          keys are [A-Za-z0-9_]+
//! value  := '"' text '"'            scalars as "p/q", booleans, words
//!         | "{}"                    empty node
//!         | "[" terms "]"           Laurent polynomial in mu
//! terms  := (exp ": " rational (", " exp ": " rational)*)?
//! ```

use std::fmt::Write as _;

use crate::checks::{Check, Status};
use crate::exactnum::{fmt_scalar, Laurent, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Leaf(String),
    Laurent(Vec<(i32, Scalar)>),
    Map(Vec<(String, Node)>),
}

/// Keeps ASCII alphanumerics and collapses every other run into `_`.
pub fn key(s: &str) -> String {
    let mut out = String::new();
    for ch in s.chars() {
        if ch.is_ascii_alphanumeric() {
            out.push(ch);
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    out.trim_matches('_').to_string()
}

/// A map node under construction that also tracks check statuses.
#[derive(Clone, Debug, Default)]
pub struct Section {
    entries: Vec<(String, Node)>,
    statuses: Vec<Status>,
}

impl Section {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn text(&mut self, k: &str, v: impl Into<String>) -> &mut Self {
        self.entries.push((key(k), Node::Leaf(v.into())));
        self
    }

    pub fn scalar(&mut self, k: &str, v: &Scalar) -> &mut Self {
        self.text(k, fmt_scalar(v))
    }

    pub fn flag(&mut self, k: &str, v: bool) -> &mut Self {
        self.text(k, v.to_string())
    }

    pub fn laurent(&mut self, k: &str, v: &Laurent) -> &mut Self {
        let terms = v.terms().map(|(e, c)| (e, c.clone())).collect();
        self.entries.push((key(k), Node::Laurent(terms)));
        self
    }

    pub fn status(&mut self, s: Status) -> &mut Self {
        self.statuses.push(s);
        self
    }

    pub fn child(&mut self, k: &str, s: Section) -> &mut Self {
        self.statuses.extend(s.statuses);
        self.entries.push((key(k), Node::Map(s.entries)));
        self
    }

    pub fn check(&mut self, c: &Check, labels: &[String]) -> &mut Self {
        let mut s = Section::new();
        s.text("status", c.status.as_str()).text("residual", c.residual.describe(labels));
        if let Some(n) = &c.note {
            s.text("note", n.clone());
        }
        s.status(c.status);
        self.child(&c.name, s)
    }

    pub fn into_node(self) -> Node {
        Node::Map(self.entries)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub title: String,
    sections: Vec<(String, Section)>,
    unmet: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), sections: Vec::new(), unmet: Vec::new() }
    }

    /// Records that a hypothesis required by the command itself failed.
    pub fn require_unmet(&mut self, why: impl Into<String>) {
        self.unmet.push(why.into());
    }

    pub fn unmet_requirements(&self) -> &[String] {
        &self.unmet
    }

    pub fn section(&mut self, name: &str, s: Section) {
        self.sections.push((key(name), s));
    }

    pub fn statuses(&self) -> Vec<Status> {
        self.sections.iter().flat_map(|(_, s)| s.statuses.iter().copied()).collect()
    }

    /// Value at a dotted path, if it is a leaf.
    pub fn get(&self, path: &str) -> Option<&str> {
        let mut parts = path.split('.');
        let first = parts.next()?;
        let mut node_entries = &self.sections.iter().find(|(k, _)| k == first)?.1.entries;
        let mut rest: Vec<&str> = parts.collect();
        let last = rest.pop()?;
        for p in rest {
            match &node_entries.iter().find(|(k, _)| k == p)?.1 {
                Node::Map(m) => node_entries = m,
                _ => return None,
            }
        }
        match &node_entries.iter().find(|(k, _)| k == last)?.1 {
            Node::Leaf(s) => Some(s),
            _ => None,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::Structured => self.render_structured(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = format!("== {} ==\n", self.title);
        for (name, s) in &self.sections {
            if s.is_empty() {
                continue;
            }
            let _ = writeln!(out, "[{name}]");
            text_entries(&mut out, &s.entries, 1);
        }
        out
    }

    fn render_structured(&self) -> String {
        let mut out = String::new();
        for (name, s) in &self.sections {
            structured_node(&mut out, name, &Node::Map(s.entries.clone()));
        }
        out
    }
}

fn laurent_text(terms: &[(i32, Scalar)]) -> String {
    let body: Vec<String> = terms.iter().map(|(e, c)| format!("{e}: {}", fmt_scalar(c))).collect();
    format!("[{}]", body.join(", "))
}

fn text_entries(out: &mut String, entries: &[(String, Node)], depth: usize) {
    let pad = "  ".repeat(depth);
    for (k, node) in entries {
        match node {
            Node::Leaf(v) if v.contains('\n') => {
                let _ = writeln!(out, "{pad}{k}: |");
                for line in v.lines() {
                    let _ = writeln!(out, "{pad}  {line}");
                }
            }
            Node::Leaf(v) => {
                let _ = writeln!(out, "{pad}{k}: {v}");
            }
            Node::Laurent(t) => {
                let _ = writeln!(out, "{pad}{k}: {} (mu exponent: coefficient)", laurent_text(t));
            }
            Node::Map(m) if m.is_empty() => {
                let _ = writeln!(out, "{pad}{k}: (none)");
            }
            Node::Map(m) => {
                let _ = writeln!(out, "{pad}{k}:");
                text_entries(out, m, depth + 1);
            }
        }
    }
}

fn structured_node(out: &mut String, path: &str, node: &Node) {
    match node {
        Node::Leaf(v) => {
            let escaped = v.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n");
            let _ = writeln!(out, "{path} = \"{escaped}\"");
        }
        Node::Laurent(t) => {
            let _ = writeln!(out, "{path} = {}", laurent_text(t));
        }
        Node::Map(m) if m.is_empty() => {
            let _ = writeln!(out, "{path} = {{}}");
        }
        Node::Map(m) => {
            for (k, child) in m {
                structured_node(out, &format!("{path}.{k}"), child);
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Structured,
}
