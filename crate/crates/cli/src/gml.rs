//! Just enough GML to read the benchmark networks: nodes with `id`,
//! optional `label` and `value`, edges with `source`, `target` and optional
//! `value` used as weight.

use anyhow::{anyhow, bail, Context, Result};

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Scalar(String),
    List(Vec<(String, Value)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GmlNode {
    pub id: i64,
    pub label: Option<String>,
    pub value: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GmlGraph {
    pub directed: bool,
    pub nodes: Vec<GmlNode>,
    pub edges: Vec<(i64, i64, f64)>,
}

fn tokenize(text: &str) -> Result<Vec<String>> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '#' {
            for c in chars.by_ref() {
                if c == '\n' {
                    break;
                }
            }
        } else if c == '"' {
            chars.next();
            let mut s = String::new();
            loop {
                match chars.next() {
                    Some('"') => break,
                    Some(c) => s.push(c),
                    None => bail!("unterminated string in GML"),
                }
            }
            // Keep the quote so strings never collide with brackets.
            tokens.push(format!("\"{s}"));
        } else if c == '[' || c == ']' {
            chars.next();
            tokens.push(c.to_string());
        } else {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() || c == '[' || c == ']' {
                    break;
                }
                s.push(c);
                chars.next();
            }
            tokens.push(s);
        }
    }
    Ok(tokens)
}

fn parse_list(tokens: &[String], pos: &mut usize, nested: bool) -> Result<Vec<(String, Value)>> {
    let mut out = Vec::new();
    while *pos < tokens.len() {
        let key = &tokens[*pos];
        if key == "]" {
            if !nested {
                bail!("unbalanced ] in GML");
            }
            *pos += 1;
            return Ok(out);
        }
        *pos += 1;
        let tok = tokens.get(*pos).ok_or_else(|| anyhow!("GML key {key} has no value"))?;
        *pos += 1;
        let value = if tok == "[" {
            Value::List(parse_list(tokens, pos, true)?)
        } else {
            Value::Scalar(tok.trim_start_matches('"').to_string())
        };
        out.push((key.clone(), value));
    }
    if nested {
        bail!("unterminated [ in GML");
    }
    Ok(out)
}

fn scalar<'a>(items: &'a [(String, Value)], key: &str) -> Option<&'a str> {
    items.iter().find_map(|(k, v)| match v {
        Value::Scalar(s) if k == key => Some(s.as_str()),
        _ => None,
    })
}

fn int(items: &[(String, Value)], key: &str, what: &str) -> Result<i64> {
    let s = scalar(items, key).ok_or_else(|| anyhow!("{what} without {key}"))?;
    // Some files write integer ids as `12.0`.
    let v: f64 = s.parse().with_context(|| format!("{what} {key} {s:?} is not a number"))?;
    if v.fract() != 0.0 {
        bail!("{what} {key} {s:?} is not an integer");
    }
    Ok(v as i64)
}

pub fn parse_gml(text: &str) -> Result<GmlGraph> {
    let tokens = tokenize(text)?;
    let mut pos = 0;
    let top = parse_list(&tokens, &mut pos, false)?;
    let graph = top
        .iter()
        .find_map(|(k, v)| match v {
            Value::List(items) if k == "graph" => Some(items),
            _ => None,
        })
        .ok_or_else(|| anyhow!("no graph [ ... ] block in GML"))?;
    let directed = scalar(graph, "directed").is_some_and(|s| s.trim() == "1");
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for (key, value) in graph {
        let Value::List(items) = value else { continue };
        match key.as_str() {
            "node" => nodes.push(GmlNode {
                id: int(items, "id", "node")?,
                label: scalar(items, "label").map(str::to_string),
                value: scalar(items, "value").map(str::to_string),
            }),
            "edge" => {
                let w = match scalar(items, "value").or_else(|| scalar(items, "weight")) {
                    Some(s) => s.parse().with_context(|| format!("edge weight {s:?} is not a number"))?,
                    None => 1.0,
                };
                edges.push((int(items, "source", "edge")?, int(items, "target", "edge")?, w));
            }
            _ => {}
        }
    }
    if nodes.is_empty() {
        bail!("GML graph has no nodes");
    }
    Ok(GmlGraph { directed, nodes, edges })
}
