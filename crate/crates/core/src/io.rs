//! Polytope files: cdd-style `.ext` (V) and `.ine` (H) text and a JSON form.
//!
//! H rows follow the cdd convention `b a1 … ad`, meaning `b + a·x ≥ 0`;
//! rows listed on a `linearity` line are equations `b + a·x = 0`. Internally
//! halfspaces are `normal·x ≥ offset`, so `a = normal` and `b = −offset`.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlinalg::{QVector, Rational};
use crate::polytope::{hull_from_vertices, vertices_from_halfspaces, ExactPolytope, Halfspace, PolytopeError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    CddExt,
    CddIne,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ext" | "cdd-ext" => Ok(Format::CddExt),
            "ine" | "cdd-ine" => Ok(Format::CddIne),
            "json" | "structured-json" => Ok(Format::Json),
            _ => Err(format!("unknown format '{s}' (expected ext, ine or json)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

fn perr(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// Integers, `p/q` fractions and finite decimals such as `-0.25`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    if let Some((int, dec)) = s.split_once('.') {
        if dec.is_empty() || !dec.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let neg = int.starts_with('-');
        let whole: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            w if w.bytes().all(|b| b.is_ascii_digit()) => w.parse().ok()?,
            _ => return None,
        };
        let den = BigInt::from(10u32).pow(dec.len() as u32);
        let num = whole * &den + dec.parse::<BigInt>().ok()?;
        let r = Rational::new(num, den);
        return Some(if neg { -r } else { r });
    }
    Rational::from_str(s).ok()
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_row(line: usize, text: &str, width: usize) -> Result<Vec<Rational>, ParseError> {
    let row: Vec<Rational> = text
        .split_whitespace()
        .map(|t| parse_rational(t).ok_or_else(|| perr(line, format!("invalid rational '{t}'"))))
        .collect::<Result<_, _>>()?;
    if row.len() != width {
        return Err(perr(line, format!("expected {width} entries, found {}", row.len())));
    }
    Ok(row)
}

/// Parses any supported format, detected from the content: JSON when the
/// first non-blank character is `{`, otherwise cdd text (H unless a
/// `V-representation` line is present, as in cdd itself).
pub fn parse_polytope_file(text: &str) -> Result<ExactPolytope, IoError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_cdd(text)
    }
}

fn parse_cdd(text: &str) -> Result<ExactPolytope, IoError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('*'));
    let mut is_v = false;
    let mut linearity: Vec<usize> = Vec::new();
    loop {
        let Some((n, l)) = lines.next() else {
            return Err(perr(text.lines().count(), "missing 'begin'").into());
        };
        match l {
            "V-representation" => is_v = true,
            "H-representation" => is_v = false,
            "begin" => break,
            _ if l.starts_with("linearity") => {
                let nums: Vec<usize> = l
                    .split_whitespace()
                    .skip(1)
                    .map(|t| t.parse().map_err(|_| perr(n, format!("invalid index '{t}'"))))
                    .collect::<Result<_, _>>()?;
                match nums.split_first() {
                    Some((&count, idx)) if count == idx.len() && idx.iter().all(|&i| i >= 1) => {
                        linearity = idx.to_vec()
                    }
                    _ => return Err(perr(n, "malformed linearity line").into()),
                }
            }
            // cdd allows a free-form name line before the data
            _ => {}
        }
    }
    let (n, header) = lines.next().ok_or_else(|| perr(0, "missing size line"))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    let (rows, cols) = match parts.as_slice() {
        [r, c, kind] if ["rational", "integer", "real"].contains(kind) => (
            r.parse::<usize>().map_err(|_| perr(n, "invalid row count"))?,
            c.parse::<usize>().map_err(|_| perr(n, "invalid column count"))?,
        ),
        _ => return Err(perr(n, "expected 'rows columns rational'").into()),
    };
    if cols < 2 {
        return Err(perr(n, "need at least one coordinate column").into());
    }
    let mut data = Vec::with_capacity(rows);
    for _ in 0..rows {
        let (n, l) = lines.next().ok_or_else(|| perr(n, "fewer rows than declared"))?;
        if l == "end" {
            return Err(perr(n, "fewer rows than declared").into());
        }
        data.push((n, parse_row(n, l, cols)?));
    }
    match lines.next() {
        Some((_, "end")) => {}
        Some((n, _)) => return Err(perr(n, "expected 'end'").into()),
        None => return Err(perr(text.lines().count(), "missing 'end'").into()),
    }
    if let Some(&bad) = linearity.iter().find(|&&i| i > rows) {
        return Err(perr(0, format!("linearity index {bad} out of range")).into());
    }
    if is_v {
        if !linearity.is_empty() {
            return Err(perr(0, "lines are not supported in V-representations").into());
        }
        let mut pts = Vec::with_capacity(rows);
        for (n, row) in data {
            if !row[0].is_one() {
                return Err(perr(n, "only points (leading 1) are supported, not rays").into());
            }
            pts.push(QVector::new(row[1..].to_vec()));
        }
        if pts.is_empty() {
            return Err(PolytopeError::EmptyPolytope.into());
        }
        Ok(hull_from_vertices(&pts)?)
    } else {
        let mut hs = Vec::with_capacity(rows);
        for (i, (n, row)) in data.into_iter().enumerate() {
            let normal = QVector::new(row[1..].to_vec());
            let h = Halfspace::new(normal, -row[0].clone()).map_err(|_| {
                // a zero row is either trivial or infeasible
                perr(n, "row has a zero normal")
            })?;
            if linearity.contains(&(i + 1)) {
                hs.push(h.flipped());
            }
            hs.push(h);
        }
        Ok(vertices_from_halfspaces(&hs)?)
    }
}

/// Structured JSON form. Numbers are strings, `"p/q"` or integers.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct JsonPolytope {
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<Vec<String>>>,
    /// Rows `b a1 … ad` with `b + a·x ≥ 0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inequalities: Option<Vec<Vec<String>>>,
    /// Rows `b a1 … ad` with `b + a·x = 0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    equations: Option<Vec<Vec<String>>>,
}

fn parse_json(text: &str) -> Result<ExactPolytope, IoError> {
    let j: JsonPolytope = serde_json::from_str(text).map_err(|e| perr(e.line(), e.to_string()))?;
    let rows = |rs: &[Vec<String>], width: usize| -> Result<Vec<Vec<Rational>>, ParseError> {
        rs.iter().map(|r| parse_row(0, &r.join(" "), width)).collect()
    };
    if let Some(vs) = &j.vertices {
        let pts: Vec<QVector> = rows(vs, j.dim)?.into_iter().map(QVector::new).collect();
        if pts.is_empty() {
            return Err(PolytopeError::EmptyPolytope.into());
        }
        return Ok(hull_from_vertices(&pts)?);
    }
    let mut hs = Vec::new();
    let ineq = rows(j.inequalities.as_deref().unwrap_or(&[]), j.dim + 1)?;
    let eqs = rows(j.equations.as_deref().unwrap_or(&[]), j.dim + 1)?;
    for (row, is_eq) in ineq.into_iter().map(|r| (r, false)).chain(eqs.into_iter().map(|r| (r, true))) {
        let h = Halfspace::new(QVector::new(row[1..].to_vec()), -row[0].clone())
            .map_err(|_| perr(0, "row has a zero normal"))?;
        if is_eq {
            hs.push(h.flipped());
        }
        hs.push(h);
    }
    if hs.is_empty() {
        return Err(perr(0, "JSON needs 'vertices' or 'inequalities'").into());
    }
    Ok(vertices_from_halfspaces(&hs)?)
}

fn cdd_row(b: &Rational, a: &QVector) -> Vec<String> {
    std::iter::once(b)
        .chain(a.iter())
        .map(fmt_rational)
        .collect()
}

fn vertex_rows(p: &ExactPolytope) -> Vec<Vec<String>> {
    p.vertices().iter().map(|v| v.iter().map(fmt_rational).collect()).collect()
}

fn facet_rows(p: &ExactPolytope) -> Vec<Vec<String>> {
    p.facets().iter().map(|h| cdd_row(&-h.offset.clone(), &h.normal)).collect()
}

fn equation_rows(p: &ExactPolytope) -> Vec<Vec<String>> {
    p.equations().iter().map(|e| cdd_row(&-e.offset.clone(), &e.normal)).collect()
}

/// Canonical text: the polytope's own sorted vertices and facets, so equal
/// polytopes produce byte-identical output.
pub fn emit_polytope_file(p: &ExactPolytope, format: Format) -> String {
    let d = p.ambient_dim();
    let mut out = String::new();
    match format {
        Format::CddExt => {
            out.push_str("V-representation\nbegin\n");
            writeln!(out, " {} {} rational", p.f0(), d + 1).unwrap();
            for v in vertex_rows(p) {
                writeln!(out, " 1 {}", v.join(" ")).unwrap();
            }
            out.push_str("end\n");
        }
        Format::CddIne => {
            let eqs = equation_rows(p);
            let facets = facet_rows(p);
            out.push_str("H-representation\n");
            if !eqs.is_empty() {
                let idx: Vec<String> = (1..=eqs.len()).map(|i| i.to_string()).collect();
                writeln!(out, "linearity {} {}", eqs.len(), idx.join(" ")).unwrap();
            }
            out.push_str("begin\n");
            writeln!(out, " {} {} rational", eqs.len() + facets.len(), d + 1).unwrap();
            for r in eqs.iter().chain(&facets) {
                writeln!(out, " {}", r.join(" ")).unwrap();
            }
            out.push_str("end\n");
        }
        Format::Json => {
            let j = JsonPolytope {
                dim: d,
                vertices: Some(vertex_rows(p)),
                inequalities: Some(facet_rows(p)),
                equations: Some(equation_rows(p)),
            };
            out = serde_json::to_string_pretty(&j).expect("serializable");
            out.push('\n');
        }
    }
    out
}
