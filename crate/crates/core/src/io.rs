//! PACE `.gr` graphs, PACE `.td` decompositions, and labeling JSON.
//! Files use 1-based vertices; everything in memory is 0-based.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::labeling::{Label, Labeling};
use crate::treedecomp::TreeDecomposition;

/// Non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.first() {
            None | Some(&"c") => None,
            Some(_) => Some((i + 1, fields)),
        }
    })
}

fn number(line: usize, field: &str, what: &str) -> Result<usize> {
    field
        .parse()
        .map_err(|_| Error::parse(line, format!("{what} must be a nonnegative integer, found {field:?}")))
}

/// A 1-based vertex within `1..=n`, returned 0-based.
fn vertex(line: usize, field: &str, n: usize) -> Result<usize> {
    let v = number(line, field, "vertex")?;
    if v == 0 || v > n {
        return Err(Error::parse(line, format!("vertex {v} is outside 1..={n}")));
    }
    Ok(v - 1)
}

pub fn parse_gr(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (hl, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing header line `p tw <n> <m>`"))?;
    if header.len() != 4 || header[0] != "p" || header[1] != "tw" {
        return Err(Error::parse(hl, "header must be `p tw <n> <m>`"));
    }
    let n = number(hl, header[2], "vertex count")?;
    let m = number(hl, header[3], "edge count")?;
    let mut edges = Vec::with_capacity(m);
    let mut last_line = hl;
    for (line, fields) in lines {
        if fields.len() != 2 {
            return Err(Error::parse(line, "edge line must be `<u> <v>`"));
        }
        let (u, v) = (vertex(line, fields[0], n)?, vertex(line, fields[1], n)?);
        if u == v {
            return Err(Error::parse(line, format!("self-loop on vertex {}", u + 1)));
        }
        edges.push((u, v));
        last_line = line;
    }
    if edges.len() != m {
        return Err(Error::parse(
            last_line,
            format!("header declares {m} edges but {} were given", edges.len()),
        ));
    }
    Graph::new(n, edges)
}

pub fn write_gr(g: &Graph) -> String {
    let mut out = format!("p tw {} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{} {}\n", u + 1, v + 1));
    }
    out
}

/// Parses a decomposition of a graph on `n` vertices.
pub fn parse_td(text: &str, n: usize) -> Result<TreeDecomposition> {
    let mut lines = content_lines(text);
    let (hl, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing header line `s td <bags> <max bag> <n>`"))?;
    if header.len() != 5 || header[0] != "s" || header[1] != "td" {
        return Err(Error::parse(hl, "header must be `s td <bags> <max bag> <n>`"));
    }
    let nb = number(hl, header[2], "bag count")?;
    let max_bag = number(hl, header[3], "maximum bag size")?;
    let declared_n = number(hl, header[4], "vertex count")?;
    if declared_n != n {
        return Err(Error::parse(hl, format!("decomposition is for {declared_n} vertices, graph has {n}")));
    }
    let mut bags: Vec<Option<Vec<usize>>> = vec![None; nb];
    let mut tree_edges = Vec::new();
    for (line, fields) in lines {
        if fields[0] == "b" {
            let id = fields
                .get(1)
                .ok_or_else(|| Error::parse(line, "bag line must be `b <id> <v...>`"))?;
            let id = vertex(line, id, nb).map_err(|_| Error::parse(line, format!("bag id {id} is outside 1..={nb}")))?;
            if bags[id].is_some() {
                return Err(Error::parse(line, format!("bag {} defined twice", id + 1)));
            }
            let bag = fields[2..].iter().map(|f| vertex(line, f, n)).collect::<Result<Vec<_>>>()?;
            if bag.len() > max_bag {
                return Err(Error::parse(line, format!("bag has {} vertices, header allows {max_bag}", bag.len())));
            }
            bags[id] = Some(bag);
        } else {
            if fields.len() != 2 {
                return Err(Error::parse(line, "tree edge line must be `<i> <j>`"));
            }
            tree_edges.push((vertex(line, fields[0], nb)?, vertex(line, fields[1], nb)?));
        }
    }
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| Error::parse(hl, format!("bag {} is never defined", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    Ok(TreeDecomposition::new(bags, tree_edges))
}

pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let max_bag = td.bags().iter().map(Vec::len).max().unwrap_or(0);
    let mut out = format!("s td {} {max_bag} {n}\n", td.num_bags());
    for (i, bag) in td.bags().iter().enumerate() {
        out.push_str(&format!("b {}", i + 1));
        for v in bag {
            out.push_str(&format!(" {}", v + 1));
        }
        out.push('\n');
    }
    for &(a, b) in td.tree_edges() {
        out.push_str(&format!("{} {}\n", a + 1, b + 1));
    }
    out
}

/// The labeling output object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelingRecord {
    pub p: u32,
    pub q: u32,
    pub lambda: Label,
    pub labeling: Labeling,
    pub algo: String,
    pub valid: bool,
}

impl LabelingRecord {
    pub fn to_json(&self) -> String {
        let labels: Map<String, Value> = self
            .labeling
            .as_slice()
            .iter()
            .enumerate()
            .map(|(v, &l)| ((v + 1).to_string(), json!(l)))
            .collect();
        let obj = json!({
            "p": self.p,
            "q": self.q,
            "lambda": self.lambda,
            "labels": labels,
            "algo": self.algo,
            "valid": self.valid,
        });
        format!("{}\n", serde_json::to_string_pretty(&obj).expect("JSON values always serialize"))
    }
}

/// Reads the `labels` object of a labeling file for a graph on `n` vertices.
/// Every vertex must be present.
pub fn parse_labeling_json(text: &str, n: usize) -> Result<Labeling> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
    let labels = value
        .get("labels")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::parse(1, "missing object field \"labels\""))?;
    let mut out = vec![None; n];
    for (key, l) in labels {
        let v = vertex(1, key, n)?;
        let l = l
            .as_u64()
            .and_then(|l| Label::try_from(l).ok())
            .ok_or_else(|| Error::parse(1, format!("label of vertex {key} must be a nonnegative integer")))?;
        out[v] = Some(l);
    }
    Labeling::from_partial(&out)
}
