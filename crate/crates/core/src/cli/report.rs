//! Report documents and their two renderings.
//!
//! A report is a tree of strings, lists and ordered maps. Integers are always
//! stored as decimal strings, so the structured (JSON) form never truncates
//! and re-parses to an equal tree.

use serde_json::{Map, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Str(String),
    List(Vec<Node>),
    Map(Vec<(String, Node)>),
}

impl Node {
    pub fn str(s: impl ToString) -> Node {
        Node::Str(s.to_string())
    }

    pub fn list<T: ToString>(items: impl IntoIterator<Item = T>) -> Node {
        Node::List(items.into_iter().map(|x| Node::str(x)).collect())
    }

    pub fn matrix<T: ToString>(rows: impl IntoIterator<Item = impl IntoIterator<Item = T>>) -> Node {
        Node::List(rows.into_iter().map(|r| Node::list(r)).collect())
    }

    fn is_scalar(&self) -> bool {
        matches!(self, Node::Str(_))
    }

    fn is_empty(&self) -> bool {
        match self {
            Node::Str(_) => false,
            Node::List(v) => v.is_empty(),
            Node::Map(v) => v.is_empty(),
        }
    }

    pub fn get(&self, key: &str) -> Option<&Node> {
        match self {
            Node::Map(v) => v.iter().find(|(k, _)| k == key).map(|(_, n)| n),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Node::Str(s) => Some(s),
            _ => None,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Node::Str(s) => Value::String(s.clone()),
            Node::List(v) => Value::Array(v.iter().map(Node::to_json).collect()),
            Node::Map(v) => Value::Object(v.iter().map(|(k, n)| (k.clone(), n.to_json())).collect::<Map<_, _>>()),
        }
    }

    fn from_json(v: &Value) -> Result<Node, String> {
        match v {
            Value::String(s) => Ok(Node::Str(s.clone())),
            Value::Array(a) => a.iter().map(Node::from_json).collect::<Result<_, _>>().map(Node::List),
            Value::Object(m) => m
                .iter()
                .map(|(k, v)| Node::from_json(v).map(|n| (k.clone(), n)))
                .collect::<Result<_, _>>()
                .map(Node::Map),
            other => Err(format!("unexpected JSON value {other}; reports hold only strings")),
        }
    }
}

/// Builder for ordered maps.
#[derive(Default)]
pub struct MapBuilder(Vec<(String, Node)>);

impl MapBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn put(mut self, key: &str, node: Node) -> Self {
        self.0.push((key.to_string(), node));
        self
    }

    pub fn s(self, key: &str, value: impl ToString) -> Self {
        self.put(key, Node::str(value))
    }

    pub fn build(self) -> Node {
        Node::Map(self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub job: String,
    /// Inputs echoed back and derived quantities; structured output only.
    pub context: Node,
    pub result: Node,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

impl Format {
    pub fn parse(s: &str) -> Option<Format> {
        match s {
            "text" => Some(Format::Text),
            "structured" => Some(Format::Structured),
            _ => None,
        }
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let doc = Node::Map(vec![
            ("job".into(), Node::str(&self.job)),
            ("context".into(), self.context.clone()),
            ("result".into(), self.result.clone()),
        ]);
        let mut s = serde_json::to_string_pretty(&doc.to_json()).expect("string tree serializes");
        s.push('\n');
        s
    }

    pub fn from_json(src: &str) -> Result<Report, String> {
        let v: Value = serde_json::from_str(src).map_err(|e| e.to_string())?;
        let doc = Node::from_json(&v)?;
        let job = doc.get("job").and_then(Node::as_str).ok_or("missing job")?.to_string();
        let context = doc.get("context").ok_or("missing context")?.clone();
        let result = doc.get("result").ok_or("missing result")?.clone();
        Ok(Report { job, context, result })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        render(&self.result, 0, &mut out);
        out
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Structured => self.to_json(),
        }
    }
}

fn pad(depth: usize) -> String {
    "  ".repeat(depth)
}

fn render_matrix(rows: &[Node], depth: usize, out: &mut String) {
    let cells: Vec<Vec<&str>> = rows
        .iter()
        .map(|r| match r {
            Node::List(v) => v.iter().filter_map(Node::as_str).collect(),
            _ => Vec::new(),
        })
        .collect();
    let width = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(0);
    for row in cells {
        let body: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        out.push_str(&format!("{}[{}]\n", pad(depth), body.join(" ")));
    }
}

fn render(node: &Node, depth: usize, out: &mut String) {
    let Node::Map(entries) = node else {
        render_value(node, depth, out);
        return;
    };
    for (k, v) in entries {
        if v.is_empty() {
            continue;
        }
        match v {
            Node::Str(s) => out.push_str(&format!("{}{k}: {s}\n", pad(depth))),
            Node::List(items) if items.iter().all(Node::is_scalar) => {
                let parts: Vec<&str> = items.iter().filter_map(Node::as_str).collect();
                out.push_str(&format!("{}{k}: [{}]\n", pad(depth), parts.join(", ")));
            }
            _ => {
                out.push_str(&format!("{}{k}:\n", pad(depth)));
                render_value(v, depth + 1, out);
            }
        }
    }
}

fn render_value(node: &Node, depth: usize, out: &mut String) {
    match node {
        Node::Str(s) => out.push_str(&format!("{}{s}\n", pad(depth))),
        Node::Map(_) => render(node, depth, out),
        Node::List(items) => {
            let is_matrix = items.iter().all(|r| matches!(r, Node::List(v) if v.iter().all(Node::is_scalar)));
            if is_matrix {
                render_matrix(items, depth, out);
                return;
            }
            for item in items {
                match item {
                    Node::Map(_) => {
                        let mut sub = String::new();
                        render(item, depth + 1, &mut sub);
                        // First line of each map item carries the bullet.
                        let body = sub.strip_prefix(&pad(depth + 1)).unwrap_or(&sub);
                        out.push_str(&format!("{}- {body}", pad(depth)));
                    }
                    _ => {
                        out.push_str(&format!("{}-\n", pad(depth)));
                        render_value(item, depth + 1, out);
                    }
                }
            }
        }
    }
}
