//! Plain-text problem files.
//!
//! All formats are line based, whitespace separated and 0-indexed; `#` starts a
//! comment. Numbers are written with Rust's shortest round-trip formatting, so
//! every writer/reader pair is lossless.
//!
//! ```text
//! p <n> <m>          edge list: then m lines "u v [w]", w defaults to 1
//! ising <n>          then "i j J" couplings, "i h" fields, optional "offset c"
//! qubo <n>           then "i j q" pair terms, "i q" linear terms, optional "offset c"
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use cim_core::apps::Site;
use cim_core::{Graph, IsingModel, QuboModel};

use crate::error::{CliError, CliResult};

/// Shortest round-trip form of a real: integers without a decimal point,
/// scientific notation for very small or large magnitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl std::fmt::Display for Real {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let v = self.0;
        if v.fract() == 0.0 && v.abs() < 1e15 {
            write!(f, "{v}")
        } else {
            write!(f, "{v:?}")
        }
    }
}

pub fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write_file(path: &Path, contents: &[u8]) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Content lines as `(1-based line number, tokens)`, comments and blanks removed.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(k, line)| {
        let body = line.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((k + 1, tokens))
    })
}

struct Ctx<'a> {
    source: &'a str,
    line: usize,
}

impl Ctx<'_> {
    fn err(&self, message: impl Into<String>) -> CliError {
        CliError::Parse { path: self.source.to_string(), line: self.line, message: message.into() }
    }

    fn index(&self, token: &str, n: usize) -> CliResult<usize> {
        let i: usize = token.parse().map_err(|_| self.err(format!("expected an index, got {token:?}")))?;
        if i >= n {
            return Err(self.err(format!("index {i} out of range for size {n}")));
        }
        Ok(i)
    }

    fn count(&self, token: &str) -> CliResult<usize> {
        token.parse().map_err(|_| self.err(format!("expected a count, got {token:?}")))
    }

    fn real(&self, token: &str) -> CliResult<f64> {
        let v: f64 = token.parse().map_err(|_| self.err(format!("expected a number, got {token:?}")))?;
        if !v.is_finite() {
            return Err(self.err(format!("non-finite value {token}")));
        }
        Ok(v)
    }
}

/// What a problem file holds, told apart by its header keyword.
#[derive(Debug, Clone, PartialEq)]
pub enum Problem {
    MaxCut(Graph),
    Ising(IsingModel),
    Qubo(QuboModel),
}

impl Problem {
    pub fn kind(&self) -> &'static str {
        match self {
            Problem::MaxCut(_) => "maxcut",
            Problem::Ising(_) => "ising",
            Problem::Qubo(_) => "qubo",
        }
    }
}

pub fn parse_problem(text: &str, source: &str) -> CliResult<Problem> {
    let first = content_lines(text).next();
    match first.as_ref().map(|(_, t)| t[0]) {
        Some("p") => parse_edge_list(text, source).map(Problem::MaxCut),
        Some("ising") => parse_ising(text, source).map(Problem::Ising),
        Some("qubo") => parse_qubo(text, source).map(Problem::Qubo),
        _ => Err(CliError::Parse {
            path: source.into(),
            line: first.map_or(1, |(l, _)| l),
            message: "unrecognized header; expected \"p\", \"ising\" or \"qubo\"".into(),
        }),
    }
}

pub fn parse_edge_list(text: &str, source: &str) -> CliResult<Graph> {
    let mut lines = content_lines(text);
    let (line, header) = lines.next().ok_or_else(|| CliError::Parse {
        path: source.into(),
        line: 1,
        message: "empty edge list".into(),
    })?;
    let ctx = Ctx { source, line };
    if header.len() != 3 || header[0] != "p" {
        return Err(ctx.err("header must read \"p <vertices> <edges>\""));
    }
    let n = ctx.count(header[1])?;
    let m = ctx.count(header[2])?;
    let mut edges = Vec::with_capacity(m);
    let mut seen = BTreeSet::new();
    let mut last = line;
    for (line, t) in lines {
        let ctx = Ctx { source, line };
        last = line;
        if !(2..=3).contains(&t.len()) {
            return Err(ctx.err("edge lines read \"u v [w]\""));
        }
        let (u, v) = (ctx.index(t[0], n)?, ctx.index(t[1], n)?);
        if u == v {
            return Err(ctx.err(format!("self-loop on vertex {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(ctx.err(format!("duplicate edge ({u}, {v})")));
        }
        let w = if t.len() == 3 { ctx.real(t[2])? } else { 1.0 };
        edges.push((u, v, w));
    }
    if edges.len() != m {
        let ctx = Ctx { source, line: last };
        return Err(ctx.err(format!("header announces {m} edges, found {}", edges.len())));
    }
    Ok(Graph::new(n, edges)?)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("p {} {}\n", g.n(), g.num_edges());
    for e in g.edges() {
        if e.w == 1.0 {
            let _ = writeln!(out, "{} {}", e.u, e.v);
        } else {
            let _ = writeln!(out, "{} {} {}", e.u, e.v, Real(e.w));
        }
    }
    out
}

/// Shared body of the Ising and QUBO readers: header size, pair terms, single
/// terms and the offset, with duplicates rejected.
struct Terms {
    n: usize,
    pairs: Vec<(usize, usize, f64)>,
    singles: Vec<(usize, f64)>,
    offset: f64,
}

fn parse_terms(text: &str, source: &str, keyword: &str) -> CliResult<Terms> {
    let mut lines = content_lines(text);
    let (line, header) = lines.next().ok_or_else(|| CliError::Parse {
        path: source.into(),
        line: 1,
        message: format!("empty {keyword} file"),
    })?;
    let ctx = Ctx { source, line };
    if header.len() != 2 || header[0] != keyword {
        return Err(ctx.err(format!("header must read \"{keyword} <n>\"")));
    }
    let n = ctx.count(header[1])?;
    let mut terms = Terms { n, pairs: Vec::new(), singles: Vec::new(), offset: 0.0 };
    let (mut seen_pairs, mut seen_singles, mut seen_offset) = (BTreeSet::new(), BTreeSet::new(), false);
    for (line, t) in lines {
        let ctx = Ctx { source, line };
        match t.as_slice() {
            ["offset", c] => {
                if std::mem::replace(&mut seen_offset, true) {
                    return Err(ctx.err("duplicate offset line"));
                }
                terms.offset = ctx.real(c)?;
            }
            [i, v] => {
                let i = ctx.index(i, n)?;
                if !seen_singles.insert(i) {
                    return Err(ctx.err(format!("duplicate single-variable term for {i}")));
                }
                terms.singles.push((i, ctx.real(v)?));
            }
            [i, j, v] => {
                let (i, j) = (ctx.index(i, n)?, ctx.index(j, n)?);
                if i == j {
                    return Err(ctx.err(format!("diagonal pair term on {i}")));
                }
                if !seen_pairs.insert((i.min(j), i.max(j))) {
                    return Err(ctx.err(format!("duplicate pair ({i}, {j})")));
                }
                terms.pairs.push((i, j, ctx.real(v)?));
            }
            _ => return Err(ctx.err("expected \"i j value\", \"i value\" or \"offset c\"")),
        }
    }
    Ok(terms)
}

pub fn parse_ising(text: &str, source: &str) -> CliResult<IsingModel> {
    let t = parse_terms(text, source, "ising")?;
    let mut model = IsingModel::from_couplings(t.n, t.pairs)?.with_offset(t.offset);
    if !t.singles.is_empty() {
        let mut h = vec![0.0; t.n];
        for (i, v) in t.singles {
            h[i] = v;
        }
        model = model.with_field(h)?;
    }
    Ok(model)
}

pub fn write_ising(m: &IsingModel) -> String {
    let mut out = format!("ising {}\n", m.n());
    if m.offset() != 0.0 {
        let _ = writeln!(out, "offset {}", Real(m.offset()));
    }
    for (i, j, v) in m.couplings() {
        let _ = writeln!(out, "{i} {j} {}", Real(v));
    }
    if let Some(h) = m.field() {
        for (i, v) in h.iter().enumerate() {
            let _ = writeln!(out, "{i} {}", Real(*v));
        }
    }
    out
}

pub fn parse_qubo(text: &str, source: &str) -> CliResult<QuboModel> {
    let t = parse_terms(text, source, "qubo")?;
    let mut q = QuboModel::new(t.n).with_offset(t.offset);
    for (i, v) in t.singles {
        q.add_linear(i, v)?;
    }
    for (i, j, v) in t.pairs {
        q.add_quadratic(i, j, v)?;
    }
    Ok(q)
}

/// Linear terms are written only when nonzero.
pub fn write_qubo(q: &QuboModel) -> String {
    let mut out = format!("qubo {}\n", q.n());
    if q.offset() != 0.0 {
        let _ = writeln!(out, "offset {}", Real(q.offset()));
    }
    for (i, v) in q.linear().iter().enumerate() {
        if *v != 0.0 {
            let _ = writeln!(out, "{i} {}", Real(*v));
        }
    }
    for (i, j, v) in q.quadratic() {
        let _ = writeln!(out, "{i} {j} {}", Real(v));
    }
    out
}

/// Point list: one `x y z [label]` line per point, coordinates in Å.
pub fn parse_points(text: &str, source: &str) -> CliResult<Vec<Site>> {
    content_lines(text)
        .map(|(line, t)| {
            let ctx = Ctx { source, line };
            if !(3..=4).contains(&t.len()) {
                return Err(ctx.err("point lines read \"x y z [label]\""));
            }
            let pos = [ctx.real(t[0])?, ctx.real(t[1])?, ctx.real(t[2])?];
            Ok(Site::new(pos, t.get(3).copied().unwrap_or("")))
        })
        .collect()
}

pub fn write_points(points: &[Site]) -> String {
    let mut out = String::new();
    for s in points {
        let [x, y, z] = s.pos.map(Real);
        if s.label.is_empty() {
            let _ = writeln!(out, "{x} {y} {z}");
        } else {
            let _ = writeln!(out, "{x} {y} {z} {}", s.label);
        }
    }
    out
}

/// Whitespace-separated rows of equal length.
pub fn parse_matrix(text: &str, source: &str) -> CliResult<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, t) in content_lines(text) {
        let ctx = Ctx { source, line };
        let row = t.iter().map(|v| ctx.real(v)).collect::<CliResult<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(ctx.err(format!("row has {} entries, expected {}", row.len(), first.len())));
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

/// One number per content line.
/// Whitespace-separated numbers, any number per line.
pub fn parse_numbers(text: &str, source: &str) -> CliResult<Vec<f64>> {
    let mut out = Vec::new();
    for (line, t) in content_lines(text) {
        let ctx = Ctx { source, line };
        for v in t {
            out.push(ctx.real(v)?);
        }
    }
    Ok(out)
}

/// Numeric CSV table with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    /// Column-major values.
    pub columns: Vec<Vec<f64>>,
}

impl Table {
    pub fn column_index(&self, name: &str) -> CliResult<usize> {
        self.headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::input(format!("no column named {name:?}; have {:?}", self.headers)))
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }
}

pub fn parse_table(text: &str, source: &str) -> CliResult<Table> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_reader(text.as_bytes());
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::Parse { path: source.into(), line: 1, message: e.to_string() })?
        .iter()
        .map(str::to_string)
        .collect();
    let mut columns = vec![Vec::new(); headers.len()];
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Parse {
            path: source.into(),
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let ctx = Ctx { source, line };
        for (col, field) in columns.iter_mut().zip(record.iter()) {
            col.push(ctx.real(field)?);
        }
    }
    Ok(Table { headers, columns })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_defaults_and_errors() {
        let g = parse_edge_list("# triangle\np 3 3\n0 1\n1 2 2.5\n0 2 # unit\n", "t").unwrap();
        assert_eq!(g.total_weight(), 4.5);
        assert!(parse_edge_list("p 3 2\n0 1\n1 0\n", "t").is_err());
        assert!(parse_edge_list("p 3 2\n0 1\n", "t").is_err());
        assert!(parse_edge_list("p 3 1\n0 3\n", "t").is_err());
        assert!(parse_edge_list("p 3 1\n0 1 nan\n", "t").is_err());
        assert!(parse_edge_list("", "t").is_err());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_edge_list("p 2 1\n\n0 0\n", "g.txt") {
            Err(CliError::Parse { path, line, .. }) => assert_eq!((path.as_str(), line), ("g.txt", 3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ising_round_trip_with_offset() {
        let text = "ising 3\noffset -1.25\n0 1 0.5\n1 2 -2\n0 0.1\n1 0\n2 -0.3\n";
        let m = parse_ising(text, "m").unwrap();
        assert_eq!(m.offset(), -1.25);
        assert_eq!(write_ising(&m), text);
        assert!(parse_ising("ising 2\n0 1 1\n1 0 2\n", "m").is_err());
        assert!(parse_ising("ising 2\n0 1\n0 2\n", "m").is_err());
    }

    #[test]
    fn problem_detection() {
        assert_eq!(parse_problem("p 2 1\n0 1\n", "x").unwrap().kind(), "maxcut");
        assert_eq!(parse_problem("# c\nising 1\n", "x").unwrap().kind(), "ising");
        assert_eq!(parse_problem("qubo 2\n0 1 3\n", "x").unwrap().kind(), "qubo");
        assert!(parse_problem("graph 2\n", "x").is_err());
    }

    #[test]
    fn points_and_tables() {
        let pts = parse_points("0 0 0 C\n1.5 0 0\n", "a").unwrap();
        assert_eq!(pts[0].label, "C");
        assert_eq!(pts[1].label, "");
        assert_eq!(parse_points(&write_points(&pts), "a").unwrap(), pts);
        assert!(parse_points("0 0\n", "a").is_err());

        let t = parse_table("a,b,y\n1,2,0\n3,4,1\n", "d").unwrap();
        assert_eq!(t.columns[1], vec![2.0, 4.0]);
        assert_eq!(t.column_index("y").unwrap(), 2);
        assert!(t.column_index("z").is_err());
        assert!(parse_table("a,b\n1,x\n", "d").is_err());
    }
}
