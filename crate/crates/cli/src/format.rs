//! The sectioned algebra description format.
//!
//! ```text
//! [field]
//! p = 101
//!
//! [quiver]
//! vertices = 1 2 3
//! arrow a : 1 -> 2
//!
//! [relations]
//! b*a - 2 c*d        # one relation per line, composition right to left
//!
//! [idempotents]
//! E = 2 3
//!
//! [modules]
//! module M
//! dim 1 1            # vertex, dimension; unlisted vertices are zero
//! map a 1            # rows separated by `;`, entries by whitespace
//! end
//!
//! [options]
//! length_cap = 12
//! bound = 20
//! seed = 0
//! ```
//!
//! `#` starts a comment. Matrices for an arrow `u -> v` have `dim v` rows
//! and `dim u` columns; unlisted arrows act by zero.

use std::collections::BTreeMap;
use std::fmt;

use gdefect_core::quivalg::{Path, Quiver, Relation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FileOptions {
    pub length_cap: Option<usize>,
    pub bound: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleSpec {
    pub dims: Vec<usize>,
    /// One matrix per arrow, in arrow order; `None` for the zero map.
    pub maps: Vec<Option<Vec<Vec<i64>>>>,
}

#[derive(Clone, Debug)]
pub struct AlgebraFile {
    pub p: Option<u32>,
    pub quiver: Quiver,
    pub relations: Vec<Relation>,
    pub idempotents: BTreeMap<String, Vec<usize>>,
    pub modules: BTreeMap<String, ModuleSpec>,
    pub options: FileOptions,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Field,
    Quiver,
    Relations,
    Idempotents,
    Modules,
    Options,
}

struct Line<'a> {
    number: usize,
    /// Byte offset of `text` in the raw line.
    offset: usize,
    text: &'a str,
}

impl Line<'_> {
    fn err(&self, at: &str, message: impl Into<String>) -> ParseError {
        // `at` is a subslice of `text` when possible
        let rel = (at.as_ptr() as usize).wrapping_sub(self.text.as_ptr() as usize);
        let rel = if rel <= self.text.len() { rel } else { 0 };
        ParseError {
            line: self.number,
            column: self.offset + rel + 1,
            message: message.into(),
        }
    }
}

fn key_value<'a>(line: &Line<'a>) -> Result<(&'a str, &'a str), ParseError> {
    let (k, v) = line
        .text
        .split_once('=')
        .ok_or_else(|| line.err(line.text, "expected `key = value`"))?;
    Ok((k.trim(), v.trim()))
}

fn number<T: std::str::FromStr>(line: &Line, token: &str, what: &str) -> Result<T, ParseError> {
    token
        .parse()
        .map_err(|_| line.err(token, format!("expected {what}, found `{token}`")))
}

fn vertex(line: &Line, q: &Quiver, token: &str) -> Result<usize, ParseError> {
    q.vertex(token).map_err(|e| line.err(token, e.to_string()))
}

/// `c1 p1 + c2 p2 - p3 ...`, coefficients optional and joined to the path
/// by whitespace or `*`.
fn relation(line: &Line, q: &Quiver) -> Result<Relation, ParseError> {
    let text = line.text;
    let mut terms = Vec::new();
    let mut start = 0;
    let mut sign = 1i64;
    let bytes = text.as_bytes();
    let mut pieces: Vec<(i64, &str)> = Vec::new();
    for (i, &c) in bytes.iter().enumerate() {
        if c == b'+' || c == b'-' {
            pieces.push((sign, &text[start..i]));
            sign = if c == b'-' { -1 } else { 1 };
            start = i + 1;
        }
    }
    pieces.push((sign, &text[start..]));
    for (k, (sign, piece)) in pieces.into_iter().enumerate() {
        let trimmed = piece.trim();
        if trimmed.is_empty() {
            if k == 0 && sign == 1 {
                // leading sign
                continue;
            }
            return Err(line.err(piece, "empty term"));
        }
        let digits = trimmed.bytes().take_while(u8::is_ascii_digit).count();
        let (coeff, rest) = if digits > 0 {
            let c: i64 = number(line, &trimmed[..digits], "a coefficient")?;
            let rest = trimmed[digits..].trim_start();
            (c, rest.strip_prefix('*').unwrap_or(rest).trim())
        } else {
            (1, trimmed)
        };
        if rest.is_empty() {
            return Err(line.err(trimmed, "term has no path"));
        }
        let path: Path = q.parse_path(rest).map_err(|e| line.err(rest, e.to_string()))?;
        terms.push((sign * coeff, path));
    }
    Relation::new(q, terms).map_err(|e| line.err(text, e.to_string()))
}

fn matrix(line: &Line, text: &str) -> Result<Vec<Vec<i64>>, ParseError> {
    text.split(';')
        .map(|row| {
            row.split_whitespace()
                .map(|t| number(line, t, "an integer entry"))
                .collect::<Result<Vec<i64>, _>>()
        })
        .collect()
}

struct ModuleBuilder {
    name: String,
    dims: Vec<usize>,
    maps: Vec<Option<(Vec<Vec<i64>>, usize, usize)>>,
    seen_dims: Vec<bool>,
}

impl ModuleBuilder {
    fn finish(self, q: &Quiver) -> Result<(String, ModuleSpec), ParseError> {
        let mut maps = Vec::with_capacity(self.maps.len());
        for (a, entry) in self.maps.into_iter().enumerate() {
            let arrow = &q.arrows()[a];
            maps.push(match entry {
                None => None,
                Some((m, line, column)) => {
                    let (rows, cols) = (self.dims[arrow.target], self.dims[arrow.source]);
                    let ok = if rows == 0 || cols == 0 {
                        m.iter().all(Vec::is_empty)
                    } else {
                        m.len() == rows && m.iter().all(|r| r.len() == cols)
                    };
                    if !ok {
                        return Err(ParseError {
                            line,
                            column,
                            message: format!(
                                "matrix for `{}` in module `{}` must be {rows}x{cols}",
                                arrow.label, self.name
                            ),
                        });
                    }
                    Some(m)
                }
            });
        }
        Ok((self.name, ModuleSpec { dims: self.dims, maps }))
    }
}

pub fn parse(text: &str) -> Result<AlgebraFile, ParseError> {
    let mut section = Section::None;
    let mut seen_sections = Vec::new();
    let mut p = None;
    let mut quiver: Option<Quiver> = None;
    let mut relations = Vec::new();
    let mut idempotents = BTreeMap::new();
    let mut modules = BTreeMap::new();
    let mut options = FileOptions::default();
    let mut current: Option<(ModuleBuilder, usize)> = None;

    let need_quiver = |q: &Option<Quiver>, line: &Line| -> Result<(), ParseError> {
        match q {
            Some(_) => Ok(()),
            None => Err(line.err(line.text, "the [quiver] section must come first")),
        }
    };

    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let line = Line {
            number: i + 1,
            offset: content.len() - content.trim_start().len(),
            text: trimmed,
        };
        if let Some(name) = trimmed.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            if let Some((m, _)) = &current {
                return Err(line.err(trimmed, format!("module `{}` is missing `end`", m.name)));
            }
            section = match name.trim() {
                "field" => Section::Field,
                "quiver" => Section::Quiver,
                "relations" => Section::Relations,
                "idempotents" => Section::Idempotents,
                "modules" => Section::Modules,
                "options" => Section::Options,
                other => return Err(line.err(trimmed, format!("unknown section `{other}`"))),
            };
            if seen_sections.contains(&name.trim().to_string()) {
                return Err(line.err(trimmed, format!("duplicate section `{}`", name.trim())));
            }
            seen_sections.push(name.trim().to_string());
            continue;
        }
        match section {
            Section::None => return Err(line.err(trimmed, "content outside any section")),
            Section::Field => {
                let (k, v) = key_value(&line)?;
                match k {
                    "p" => p = Some(number(&line, v, "a prime")?),
                    _ => return Err(line.err(trimmed, format!("unknown key `{k}`"))),
                }
            }
            Section::Options => {
                let (k, v) = key_value(&line)?;
                match k {
                    "length_cap" => options.length_cap = Some(number(&line, v, "an integer")?),
                    "bound" => options.bound = Some(number(&line, v, "an integer")?),
                    "seed" => options.seed = Some(number(&line, v, "an integer")?),
                    _ => return Err(line.err(trimmed, format!("unknown key `{k}`"))),
                }
            }
            Section::Quiver => {
                if let Some(rest) = trimmed.strip_prefix("arrow ") {
                    let q = quiver
                        .as_mut()
                        .ok_or_else(|| line.err(trimmed, "`vertices` must precede arrows"))?;
                    let (name, ends) = rest
                        .split_once(':')
                        .ok_or_else(|| line.err(rest, "expected `arrow NAME : U -> V`"))?;
                    let (u, v) = ends
                        .split_once("->")
                        .ok_or_else(|| line.err(ends, "expected `U -> V`"))?;
                    let (name, u, v) = (name.trim(), u.trim(), v.trim());
                    vertex(&line, q, u)?;
                    vertex(&line, q, v)?;
                    if name.is_empty() || name.contains(['*', '+', '-', ' ']) {
                        return Err(line.err(name, format!("invalid arrow name `{name}`")));
                    }
                    q.add_arrow(name, u, v).map_err(|e| line.err(name, e.to_string()))?;
                } else {
                    let (k, v) = key_value(&line)?;
                    if k != "vertices" {
                        return Err(line.err(trimmed, format!("unknown key `{k}`")));
                    }
                    if quiver.is_some() {
                        return Err(line.err(trimmed, "duplicate `vertices`"));
                    }
                    let labels: Vec<&str> = v.split([' ', ',', '\t']).filter(|s| !s.is_empty()).collect();
                    if labels.is_empty() {
                        return Err(line.err(v, "no vertices"));
                    }
                    quiver = Some(Quiver::new(labels).map_err(|e| line.err(v, e.to_string()))?);
                }
            }
            Section::Relations => {
                need_quiver(&quiver, &line)?;
                relations.push(relation(&line, quiver.as_ref().unwrap())?);
            }
            Section::Idempotents => {
                need_quiver(&quiver, &line)?;
                let q = quiver.as_ref().unwrap();
                let (k, v) = key_value(&line)?;
                let mut verts = Vec::new();
                for t in v.split([' ', ',', '\t']).filter(|s| !s.is_empty()) {
                    verts.push(vertex(&line, q, t)?);
                }
                verts.sort_unstable();
                verts.dedup();
                if verts.is_empty() {
                    return Err(line.err(v, "empty idempotent"));
                }
                if idempotents.insert(k.to_string(), verts).is_some() {
                    return Err(line.err(k, format!("duplicate idempotent `{k}`")));
                }
            }
            Section::Modules => {
                need_quiver(&quiver, &line)?;
                let q = quiver.as_ref().unwrap();
                let mut words = trimmed.split_whitespace();
                let head = words.next().unwrap_or("");
                match (head, current.as_mut()) {
                    ("module", None) => {
                        let name: Vec<&str> = words.collect();
                        if name.len() != 1 {
                            return Err(line.err(trimmed, "expected `module NAME`"));
                        }
                        if modules.contains_key(name[0]) {
                            return Err(line.err(name[0], format!("duplicate module `{}`", name[0])));
                        }
                        let nv = q.vertices().len();
                        current = Some((
                            ModuleBuilder {
                                name: name[0].to_string(),
                                dims: vec![0; nv],
                                maps: vec![None; q.arrows().len()],
                                seen_dims: vec![false; nv],
                            },
                            line.number,
                        ));
                    }
                    ("module", Some(_)) => return Err(line.err(trimmed, "nested `module`; missing `end`?")),
                    ("dim", Some((m, _))) => {
                        let args: Vec<&str> = words.collect();
                        if args.len() != 2 {
                            return Err(line.err(trimmed, "expected `dim VERTEX N`"));
                        }
                        let v = vertex(&line, q, args[0])?;
                        if m.seen_dims[v] {
                            return Err(line.err(args[0], format!("duplicate dimension for vertex `{}`", args[0])));
                        }
                        m.seen_dims[v] = true;
                        m.dims[v] = number(&line, args[1], "a dimension")?;
                    }
                    ("map", Some((m, _))) => {
                        let rest = trimmed["map".len()..].trim_start();
                        let (name, mat) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                        let a = q.arrow(name).map_err(|e| line.err(name, e.to_string()))?;
                        if m.maps[a].is_some() {
                            return Err(line.err(name, format!("duplicate map for `{name}`")));
                        }
                        m.maps[a] = Some((matrix(&line, mat)?, line.number, line.offset + 1));
                    }
                    ("end", Some(_)) => {
                        let (m, _) = current.take().unwrap();
                        let (name, spec) = m.finish(q)?;
                        modules.insert(name, spec);
                    }
                    (_, None) => return Err(line.err(trimmed, "expected `module NAME`")),
                    (other, Some(_)) => {
                        return Err(line.err(trimmed, format!("unknown module directive `{other}`")))
                    }
                }
            }
        }
    }
    if let Some((m, start)) = current {
        return Err(ParseError {
            line: start,
            column: 1,
            message: format!("module `{}` is missing `end`", m.name),
        });
    }
    let quiver = quiver.ok_or(ParseError {
        line: 1,
        column: 1,
        message: "missing [quiver] section".into(),
    })?;
    Ok(AlgebraFile {
        p,
        quiver,
        relations,
        idempotents,
        modules,
        options,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "[field]\np = 7\n[quiver]\nvertices = 1 2 3\narrow a : 1 -> 2\narrow b : 2 -> 3\n\
        arrow c : 1 -> 3\n[relations]\nb*a - 2 c\n";

    #[test]
    fn parses_sections() {
        let text = "[quiver]\nvertices = 1 2\narrow a : 1 -> 2  # comment\n[idempotents]\nE = 2\n\
            [modules]\nmodule M\ndim 1 1\ndim 2 1\nmap a 3\nend\n[options]\nbound = 5\n";
        let f = parse(text).unwrap();
        assert_eq!(f.quiver.arrows().len(), 1);
        assert_eq!(f.idempotents["E"], vec![1]);
        assert_eq!(f.modules["M"].dims, vec![1, 1]);
        assert_eq!(f.modules["M"].maps[0], Some(vec![vec![3]]));
        assert_eq!(f.options.bound, Some(5));
        assert_eq!(f.p, None);
    }

    #[test]
    fn relations_type_check() {
        // c has length one, so the relation is not admissible
        let e = parse(SMALL).unwrap_err();
        assert_eq!(e.line, 9);
        let ok = SMALL.replace("b*a - 2 c", "b*a");
        assert_eq!(parse(&ok).unwrap().relations.len(), 1);
        let bad = SMALL.replace("b*a - 2 c", "a*b");
        let e = parse(&bad).unwrap_err();
        assert!(e.message.contains("not composable"), "{e}");
    }

    #[test]
    fn linear_combinations() {
        let text = "[quiver]\nvertices = 1 2 3 4\narrow a : 1 -> 2\narrow b : 2 -> 4\narrow c : 1 -> 3\n\
            arrow d : 3 -> 4\n[relations]\n-b*a + 3*d*c\n";
        let f = parse(text).unwrap();
        let coeffs: Vec<i64> = f.relations[0].terms.iter().map(|t| t.0).collect();
        assert_eq!(coeffs, vec![-1, 3]);
    }

    #[test]
    fn rejects_unknown_keys_and_sections() {
        assert!(parse("[quiver]\nvertices = 1\n[options]\ncolour = 3\n").unwrap_err().message.contains("unknown key"));
        assert!(parse("[stuff]\n").unwrap_err().message.contains("unknown section"));
        let e = parse("[quiver]\nvertices = 1\narrow x : 1 -> 9\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 16));
    }

    #[test]
    fn module_shapes_are_checked() {
        let text = "[quiver]\nvertices = 1 2\narrow a : 1 -> 2\n[modules]\nmodule M\ndim 1 2\ndim 2 1\n\
            map a 1\nend\n";
        let e = parse(text).unwrap_err();
        assert_eq!(e.line, 8);
        assert!(e.message.contains("1x2"));
        let missing = "[quiver]\nvertices = 1\n[modules]\nmodule M\ndim 1 1\n";
        assert!(parse(missing).unwrap_err().message.contains("missing `end`"));
    }
}
