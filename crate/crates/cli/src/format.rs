//! Line-oriented `clusterforge/1` files.
//!
//! ```text
//! clusterforge/1
//! # comments and blank lines are ignored
//! vertices: 2
//! arrows: [[1,2]]
//! ```
//!
//! Representation files list `generators: [g_1, …, g_n]`, optional
//! `relations <v>: [[…]]` (one column per relation) and
//! `action <a>: [[…]]` (a `g_t × g_s` matrix). Indices are 1-based;
//! missing actions are zero.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use clusterforge::rep::VertexGroup;
use clusterforge::zlinalg::Matrix;
use clusterforge::{IntMatrix, Quiver, ZRep};
use num_bigint::BigInt;

pub const HEADER: &str = "clusterforge/1";

#[derive(Debug)]
pub struct ParseError {
    pub file: String,
    pub line: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(l) => write!(f, "{}:{l}: {}", self.file, self.message),
            None => write!(f, "{}: {}", self.file, self.message),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Value {
    Int(BigInt),
    List(Vec<Value>),
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn value(&mut self) -> Result<Value, String> {
        self.skip_ws();
        match self.s.get(self.pos) {
            Some(b'[') => {
                self.pos += 1;
                let mut items = Vec::new();
                self.skip_ws();
                if self.s.get(self.pos) == Some(&b']') {
                    self.pos += 1;
                    return Ok(Value::List(items));
                }
                loop {
                    items.push(self.value()?);
                    self.skip_ws();
                    match self.s.get(self.pos) {
                        Some(b',') => self.pos += 1,
                        Some(b']') => {
                            self.pos += 1;
                            return Ok(Value::List(items));
                        }
                        _ => return Err("expected ',' or ']'".into()),
                    }
                }
            }
            Some(_) => {
                let start = self.pos;
                if matches!(self.s[self.pos], b'-' | b'+') {
                    self.pos += 1;
                }
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
                BigInt::from_str(text).map(Value::Int).map_err(|_| format!("expected an integer near '{text}'"))
            }
            None => Err("unexpected end of value".into()),
        }
    }
}

fn parse_value(text: &str) -> Result<Value, String> {
    let mut c = Cursor { s: text.as_bytes(), pos: 0 };
    let v = c.value()?;
    c.skip_ws();
    if c.pos != text.len() {
        return Err(format!("trailing text '{}'", &text[c.pos..]));
    }
    Ok(v)
}

fn int_list(v: &Value) -> Result<Vec<BigInt>, String> {
    match v {
        Value::List(items) => items
            .iter()
            .map(|x| match x {
                Value::Int(n) => Ok(n.clone()),
                Value::List(_) => Err("expected a list of integers".to_string()),
            })
            .collect(),
        Value::Int(_) => Err("expected a list".into()),
    }
}

fn small(n: &BigInt, what: &str) -> Result<usize, String> {
    usize::try_from(n).map_err(|_| format!("{what} must be a nonnegative integer, got {n}"))
}

fn matrix(v: &Value, rows: usize, cols: usize) -> Result<IntMatrix, String> {
    let Value::List(rs) = v else { return Err("expected a matrix [[..], ..]".into()) };
    if rs.is_empty() {
        if rows == 0 || cols == 0 {
            return Ok(Matrix::zeros(rows, cols));
        }
        return Err(format!("expected a {rows}x{cols} matrix, got []"));
    }
    let data: Vec<Vec<BigInt>> = rs.iter().map(int_list).collect::<Result<_, _>>()?;
    if data.len() != rows || data.iter().any(|r| r.len() != cols) {
        let got_cols = data.first().map_or(0, Vec::len);
        return Err(format!("expected a {rows}x{cols} matrix, got {}x{got_cols}", data.len()));
    }
    Ok(Matrix::from_vec(rows, cols, data.into_iter().flatten().collect()))
}

/// `key: value` lines after the header, with their line numbers.
struct Document {
    file: String,
    fields: Vec<(usize, String, String)>,
}

impl Document {
    fn parse(file: &str, text: &str) -> Result<Document, ParseError> {
        let err = |line, message: String| ParseError { file: file.to_string(), line: Some(line), message };
        let mut fields = Vec::new();
        let mut saw_header = false;
        for (i, raw) in text.lines().enumerate() {
            let n = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if !saw_header {
                if line != HEADER {
                    return Err(err(n, format!("expected header '{HEADER}', found '{line}'")));
                }
                saw_header = true;
                continue;
            }
            let Some((k, v)) = line.split_once(':') else {
                return Err(err(n, format!("expected 'key: value', found '{line}'")));
            };
            fields.push((n, k.trim().to_string(), v.trim().to_string()));
        }
        if !saw_header {
            return Err(ParseError { file: file.into(), line: None, message: format!("missing header '{HEADER}'") });
        }
        Ok(Document { file: file.to_string(), fields })
    }

    fn err(&self, line: Option<usize>, message: impl Into<String>) -> ParseError {
        ParseError { file: self.file.clone(), line, message: message.into() }
    }

    fn unique(&self, key: &str) -> Result<Option<(usize, &str)>, ParseError> {
        let mut found = None;
        for (n, k, v) in &self.fields {
            if k == key {
                if found.is_some() {
                    return Err(self.err(Some(*n), format!("duplicate key '{key}'")));
                }
                found = Some((*n, v.as_str()));
            }
        }
        Ok(found)
    }

    fn require(&self, key: &str) -> Result<(usize, &str), ParseError> {
        self.unique(key)?.ok_or_else(|| self.err(None, format!("missing key '{key}'")))
    }
}

fn read(path: &Path) -> Result<(String, String), ParseError> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path)
        .map_err(|e| ParseError { file: name.clone(), line: None, message: e.to_string() })?;
    Ok((name, text))
}

/// Parsed quiver data before validation: `(vertex count, 0-based arrows)`.
pub fn parse_quiver_text(file: &str, text: &str) -> Result<(usize, Vec<(usize, usize)>), ParseError> {
    let doc = Document::parse(file, text)?;
    for (n, k, _) in &doc.fields {
        if k != "vertices" && k != "arrows" {
            return Err(doc.err(Some(*n), format!("unknown key '{k}'")));
        }
    }
    let (vn, vtext) = doc.require("vertices")?;
    let n: usize = vtext.parse().map_err(|_| doc.err(Some(vn), format!("bad vertex count '{vtext}'")))?;
    let mut arrows = Vec::new();
    if let Some((an, atext)) = doc.unique("arrows")? {
        let bad = |m: String| doc.err(Some(an), m);
        let Value::List(items) = parse_value(atext).map_err(bad)? else {
            return Err(bad("arrows must be a list of [source, target] pairs".into()));
        };
        for item in &items {
            let pair = int_list(item).map_err(bad)?;
            if pair.len() != 2 {
                return Err(bad("each arrow is a pair [source, target]".into()));
            }
            let s = small(&pair[0], "arrow endpoint").map_err(bad)?;
            let t = small(&pair[1], "arrow endpoint").map_err(bad)?;
            if s == 0 || t == 0 {
                return Err(bad("vertices are numbered from 1".into()));
            }
            arrows.push((s - 1, t - 1));
        }
    }
    Ok((n, arrows))
}

pub fn read_quiver_spec(path: &Path) -> Result<(usize, Vec<(usize, usize)>), ParseError> {
    let (name, text) = read(path)?;
    parse_quiver_text(&name, &text)
}

pub fn parse_rep_text(file: &str, text: &str, quiver: &Arc<Quiver>) -> Result<ZRep, ParseError> {
    let doc = Document::parse(file, text)?;
    let n = quiver.vertex_count();
    let (gn, gtext) = doc.require("generators")?;
    let gens: Vec<usize> = parse_value(gtext)
        .and_then(|v| int_list(&v))
        .and_then(|l| l.iter().map(|x| small(x, "generator count")).collect())
        .map_err(|m| doc.err(Some(gn), m))?;
    if gens.len() != n {
        return Err(doc.err(Some(gn), format!("expected {n} generator counts, got {}", gens.len())));
    }
    let mut relations: BTreeMap<usize, IntMatrix> = BTreeMap::new();
    let mut actions: BTreeMap<usize, IntMatrix> = BTreeMap::new();
    for (ln, k, v) in &doc.fields {
        let bad = |m: String| doc.err(Some(*ln), m);
        let mut words = k.split_whitespace();
        let (kind, idx) = (words.next().unwrap_or(""), words.next());
        if kind == "generators" && idx.is_none() {
            continue;
        }
        let index = |limit: usize, what: &str| -> Result<usize, ParseError> {
            let i: usize = idx
                .and_then(|s| s.parse().ok())
                .filter(|&i| (1..=limit).contains(&i))
                .ok_or_else(|| bad(format!("expected '{what} <1..={limit}>'")))?;
            if words.clone().next().is_some() {
                return Err(bad(format!("unexpected text in key '{k}'")));
            }
            Ok(i - 1)
        };
        match kind {
            "relations" => {
                let vtx = index(n, "relations")?;
                let value = parse_value(v).map_err(bad)?;
                let cols = match &value {
                    Value::List(rows) => rows.first().map_or(Ok(0), |r| int_list(r).map(|r| r.len())).map_err(bad)?,
                    Value::Int(_) => return Err(bad("expected a matrix".into())),
                };
                let m = matrix(&value, gens[vtx], cols).map_err(bad)?;
                if relations.insert(vtx, m).is_some() {
                    return Err(bad(format!("duplicate relations for vertex {}", vtx + 1)));
                }
            }
            "action" => {
                let a = index(quiver.arrows().len(), "action")?;
                let arr = quiver.arrow(a);
                let m = parse_value(v).and_then(|val| matrix(&val, gens[arr.target], gens[arr.source])).map_err(bad)?;
                if actions.insert(a, m).is_some() {
                    return Err(bad(format!("duplicate action for arrow {}", a + 1)));
                }
            }
            _ => return Err(bad(format!("unknown key '{k}'"))),
        }
    }
    let vertices: Vec<VertexGroup> = (0..n)
        .map(|v| VertexGroup {
            generators: gens[v],
            relations: relations.remove(&v).unwrap_or_else(|| Matrix::zeros(gens[v], 0)),
        })
        .collect();
    let acts: Vec<IntMatrix> = (0..quiver.arrows().len())
        .map(|a| {
            let arr = quiver.arrow(a);
            actions.remove(&a).unwrap_or_else(|| Matrix::zeros(gens[arr.target], gens[arr.source]))
        })
        .collect();
    ZRep::new(quiver.clone(), vertices, acts).map_err(|e| doc.err(None, e.to_string()))
}

pub fn read_rep(path: &Path, quiver: &Arc<Quiver>) -> Result<ZRep, ParseError> {
    let (name, text) = read(path)?;
    parse_rep_text(&name, &text, quiver)
}

fn write_matrix(m: &IntMatrix) -> String {
    if m.rows() == 0 || m.cols() == 0 {
        return "[]".into();
    }
    let rows: Vec<String> = (0..m.rows())
        .map(|i| format!("[{}]", m.row(i).iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", rows.join(","))
}

pub fn write_rep(m: &ZRep) -> String {
    let mut out = format!("{HEADER}\n");
    let gens: Vec<String> = m.generator_counts().iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "generators: [{}]", gens.join(","));
    for (v, g) in m.vertices().iter().enumerate() {
        if g.relations.cols() > 0 {
            let _ = writeln!(out, "relations {}: {}", v + 1, write_matrix(&g.relations));
        }
    }
    for (a, act) in m.actions().iter().enumerate() {
        let _ = writeln!(out, "action {}: {}", a + 1, write_matrix(act));
    }
    out
}
