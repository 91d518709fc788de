//! Line-oriented text format for presentations and twists.
//!
//! Grammar (one statement per line, `#` starts a comment):
//!
//! ```text
//! generator <name> degree=<int> [truncation=<int>]
//! d <name> = <poly>
//! twist = <poly>
//! ```
//!
//! where `<poly>` is a signed sum of terms `<rat>*<gen>(*<gen>)*` with
//! rational coefficients written as `p/q` or integers (the coefficient may
//! be omitted when it is 1, and repeated factors may be written `g^k`).
//! Generators are ordered by declaration; every error carries a line number.

use crate::cdga::{CdgaError, Element, GeneratorSpec, Presentation, DEFAULT_DIM_CAP};
use crate::exactlin::Scalar;
use num::One;
use std::fmt::Write as _;

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown generator `{name}`")]
    UnknownGenerator { line: usize, name: String },
    #[error("line {line}: {source}")]
    Cdga { line: usize, source: CdgaError },
}

#[derive(Debug, Clone)]
pub struct CdgaFile {
    pub presentation: Presentation,
    pub twist: Option<Element>,
}

fn syntax(line: usize, message: impl Into<String>) -> FileError {
    FileError::Syntax {
        line,
        message: message.into(),
    }
}

/// Strip comments and return (1-based line number, statement) pairs.
fn statements(text: &str) -> Vec<(usize, String)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let stmt = raw.split('#').next().unwrap_or("").trim();
            if stmt.is_empty() {
                None
            } else {
                Some((i + 1, stmt.to_string()))
            }
        })
        .collect()
}

fn parse_generator(line: usize, rest: &str) -> Result<GeneratorSpec, FileError> {
    let mut parts = rest.split_whitespace();
    let name = parts
        .next()
        .ok_or_else(|| syntax(line, "expected `generator <name> degree=<int>`"))?;
    if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'') {
        return Err(syntax(line, format!("invalid generator name `{name}`")));
    }
    let mut degree: Option<u32> = None;
    let mut truncation: Option<u32> = None;
    for kv in parts {
        let (key, value) = kv
            .split_once('=')
            .ok_or_else(|| syntax(line, format!("expected key=value, found `{kv}`")))?;
        let value: u32 = value
            .parse()
            .map_err(|_| syntax(line, format!("`{key}` needs a nonnegative integer")))?;
        match key {
            "degree" => degree = Some(value),
            "truncation" => truncation = Some(value),
            other => return Err(syntax(line, format!("unknown attribute `{other}`"))),
        }
    }
    let degree = degree.ok_or_else(|| syntax(line, "missing degree=<int>"))?;
    Ok(GeneratorSpec {
        name: name.to_string(),
        degree,
        truncation,
    })
}

/// Parse a polynomial against an already-built presentation. Products are
/// evaluated left to right through the algebra, so reordered or repeated
/// factors pick up the correct Koszul signs and truncations.
fn parse_poly(pres: &Presentation, line: usize, text: &str) -> Result<Element, FileError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(syntax(line, "empty polynomial"));
    }
    if compact == "0" {
        return Ok(Element::zero());
    }
    let mut out = Element::zero();
    let mut chars = compact.chars().peekable();
    loop {
        let negative = match chars.peek() {
            Some('+') => {
                chars.next();
                false
            }
            Some('-') => {
                chars.next();
                true
            }
            Some(_) => false,
            None => break,
        };
        let mut term = String::new();
        while let Some(&c) = chars.peek() {
            if c == '+' || c == '-' {
                break;
            }
            term.push(c);
            chars.next();
        }
        if term.is_empty() {
            return Err(syntax(line, "dangling sign"));
        }
        let mut coeff = Scalar::one();
        let mut element = pres.one();
        for factor in term.split('*') {
            if factor.is_empty() {
                return Err(syntax(line, "empty factor"));
            }
            if factor.chars().next().unwrap().is_ascii_digit() {
                let r: Scalar = factor
                    .parse()
                    .map_err(|_| syntax(line, format!("bad rational `{factor}`")))?;
                coeff *= r;
            } else {
                let (name, power) = match factor.split_once('^') {
                    Some((n, p)) => (
                        n,
                        p.parse::<u32>()
                            .map_err(|_| syntax(line, format!("bad exponent in `{factor}`")))?,
                    ),
                    None => (factor, 1),
                };
                let idx = pres.generator_index(name).ok_or_else(|| {
                    FileError::UnknownGenerator {
                        line,
                        name: name.to_string(),
                    }
                })?;
                let g = pres.generator_element(idx);
                for _ in 0..power {
                    element = pres.mul(&element, &g);
                }
            }
        }
        if negative {
            coeff = -coeff;
        }
        out = out.add(&element.scale(&coeff));
    }
    Ok(out)
}

/// Parse a standalone polynomial (same grammar as the right-hand sides)
/// against an existing presentation.
pub fn parse_element(pres: &Presentation, text: &str) -> Result<Element, FileError> {
    parse_poly(pres, 0, text)
}

pub fn parse_file(text: &str) -> Result<CdgaFile, FileError> {
    parse_file_with_cap(text, DEFAULT_DIM_CAP)
}

pub fn parse_file_with_cap(text: &str, cap: u128) -> Result<CdgaFile, FileError> {
    let stmts = statements(text);
    // pass 1: generators (declaration order)
    let mut gens: Vec<GeneratorSpec> = Vec::new();
    let mut gen_lines: Vec<usize> = Vec::new();
    for (line, stmt) in &stmts {
        if let Some(rest) = stmt.strip_prefix("generator ") {
            gens.push(parse_generator(*line, rest)?);
            gen_lines.push(*line);
        }
    }
    if gens.is_empty() {
        return Err(syntax(
            stmts.first().map(|(l, _)| *l).unwrap_or(1),
            "no generators declared",
        ));
    }
    let line_of_gen = |gens: &[GeneratorSpec], name: &str| -> usize {
        gens.iter()
            .position(|g| g.name == name)
            .map(|i| gen_lines[i])
            .unwrap_or(gen_lines[0])
    };
    let scaffold =
        Presentation::raw(gens.clone(), vec![Element::zero(); gens.len()], cap).map_err(|e| {
            let line = match &e {
                CdgaError::Truncation { generator, .. } | CdgaError::DuplicateGenerator(generator) => {
                    line_of_gen(&gens, generator)
                }
                _ => *gen_lines.last().unwrap(),
            };
            FileError::Cdga { line, source: e }
        })?;
    // pass 2: differentials and twist
    let mut diffs = vec![Element::zero(); gens.len()];
    let mut diff_lines = vec![gen_lines[0]; gens.len()];
    let mut twist: Option<Element> = None;
    for (line, stmt) in &stmts {
        if stmt.starts_with("generator ") {
            continue;
        }
        if let Some(rest) = stmt.strip_prefix("d ") {
            let (name, poly) = rest
                .split_once('=')
                .ok_or_else(|| syntax(*line, "expected `d <name> = <poly>`"))?;
            let name = name.trim();
            let idx = scaffold
                .generator_index(name)
                .ok_or_else(|| FileError::UnknownGenerator {
                    line: *line,
                    name: name.to_string(),
                })?;
            diffs[idx] = parse_poly(&scaffold, *line, poly)?;
            diff_lines[idx] = *line;
        } else if let Some(poly) = stmt.strip_prefix("twist") {
            let poly = poly
                .trim()
                .strip_prefix('=')
                .ok_or_else(|| syntax(*line, "expected `twist = <poly>`"))?;
            twist = Some(parse_poly(&scaffold, *line, poly)?);
        } else {
            return Err(syntax(*line, format!("unrecognized statement `{stmt}`")));
        }
    }
    let presentation = Presentation::raw(gens, diffs, cap)
        .and_then(Presentation::validate)
        .map_err(|e| {
            let line = match &e {
                CdgaError::Degree { generator, .. } | CdgaError::Leibniz { generator, .. } => {
                    scaffold
                        .generator_index(generator)
                        .map(|i| diff_lines[i])
                        .unwrap_or(gen_lines[0])
                }
                CdgaError::Truncation { generator, .. } => {
                    line_of_gen(&scaffold.generators, generator)
                }
                _ => gen_lines[0],
            };
            FileError::Cdga { line, source: e }
        })?;
    Ok(CdgaFile {
        presentation,
        twist,
    })
}

/// Render a file back to canonical text; `parse_file(emit(f))` reproduces
/// `f` up to normalization.
pub fn emit(file: &CdgaFile) -> String {
    let pres = &file.presentation;
    let mut out = String::new();
    for g in &pres.generators {
        match g.truncation {
            Some(t) => {
                writeln!(out, "generator {} degree={} truncation={}", g.name, g.degree, t).unwrap()
            }
            None => writeln!(out, "generator {} degree={}", g.name, g.degree).unwrap(),
        }
    }
    for (g, dg) in pres.generators.iter().zip(&pres.differentials) {
        if !dg.is_zero() {
            writeln!(out, "d {} = {}", g.name, pres.format_element(dg)).unwrap();
        }
    }
    if let Some(eta) = &file.twist {
        if !eta.is_zero() {
            writeln!(out, "twist = {}", pres.format_element(eta)).unwrap();
        }
    }
    out
}

/// Built-in example file texts shipped with the CLI.
pub fn example_text(name: &str) -> Option<String> {
    let (model, twist) = match name {
        "heisenberg" => ("heisenberg", Some("x*y*z")),
        "tower2" => ("tower2", Some("x")),
        "tower3" => ("tower3", Some("x")),
        "cp2" => ("cp2", None),
        "cp3" => ("cp3", None),
        "m-heisenberg-cp2" => ("m-heisenberg-cp2", Some("x*t")),
        "tower3-cp3" => ("tower3-cp3", Some("x*t")),
        _ => return None,
    };
    let presentation = crate::cdga::builtin(model).expect("builtin model");
    let twist = twist.map(|t| parse_poly(&presentation, 0, t).expect("builtin twist"));
    Some(emit(&CdgaFile {
        presentation,
        twist,
    }))
}

pub const EXAMPLE_NAMES: [&str; 7] = [
    "heisenberg",
    "tower2",
    "tower3",
    "cp2",
    "cp3",
    "m-heisenberg-cp2",
    "tower3-cp3",
];
