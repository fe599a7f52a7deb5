//! The `mf-format: 1` factorisation document: a line-oriented text form with
//! section headers and a one-to-one JSON mirror.
//!
//! ```text
//! mf-format: 1
//!
//! [ring]
//! variables: x, y
//! order: degrevlex
//! characteristic: 0
//!
//! [potential]
//! x*y
//!
//! [factorisation K]
//! ranks: 1, 1
//! d0: [[x]]
//! d1: [[y]]
//!
//! [map alpha]
//! source: K
//! target: K
//! parity: even
//! matrix: [[1, 0], [0, 1]]
//! ```

use std::collections::BTreeMap;

use mfpush::mf::{MFMap, MF};
use mfpush::pmat::PMat;
use mfpush::{MonomialOrder, Poly, Ring, RingRef};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingData {
    pub variables: Vec<String>,
    pub order: String,
    pub characteristic: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorisationData {
    pub name: String,
    pub ranks: [usize; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inputs: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outputs: Option<Vec<String>>,
    pub d0: Vec<Vec<String>>,
    pub d1: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapData {
    pub name: String,
    pub source: String,
    pub target: String,
    pub parity: String,
    pub matrix: Vec<Vec<String>>,
}

/// The unvalidated document, field for field what the text and JSON forms hold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentData {
    #[serde(rename = "mf-format")]
    pub format: u32,
    pub ring: RingData,
    pub potential: String,
    #[serde(default)]
    pub factorisations: Vec<FactorisationData>,
    #[serde(default)]
    pub maps: Vec<MapData>,
}

/// Source lines of sections and fields, for error messages.
#[derive(Clone, Debug, Default)]
pub struct Locations {
    lines: BTreeMap<String, usize>,
}

impl Locations {
    fn record(&mut self, key: String, line: usize) {
        self.lines.insert(key, line);
    }

    /// `"what (line n)"` when the line is known.
    pub fn describe(&self, key: &str, what: &str) -> String {
        match self.lines.get(key) {
            Some(l) => format!("{what} (line {l})"),
            None => what.to_string(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct NamedFactorisation {
    pub name: String,
    pub mf: MF,
    pub inputs: Option<Vec<String>>,
    pub outputs: Option<Vec<String>>,
}

#[derive(Clone, Debug)]
pub struct NamedMap {
    pub name: String,
    pub source: String,
    pub target: String,
    pub map: MFMap,
}

/// A validated document.
#[derive(Clone, Debug)]
pub struct MFDocument {
    pub ring: RingRef,
    pub potential: Poly,
    pub factorisations: Vec<NamedFactorisation>,
    pub maps: Vec<NamedMap>,
}

/// Ring options that override the document's own.
#[derive(Clone, Copy, Debug, Default)]
pub struct RingOverrides {
    pub order: Option<MonomialOrder>,
    pub characteristic: Option<u64>,
}

// ---------------------------------------------------------------- arrays

#[derive(Debug)]
enum Arr {
    Leaf(String),
    List(Vec<Arr>),
}

fn parse_array(s: &str) -> Result<Arr, String> {
    let chars: Vec<char> = s.chars().collect();
    let mut pos = 0;
    let a = parse_arr_at(&chars, &mut pos)?;
    skip_ws(&chars, &mut pos);
    if pos != chars.len() {
        return Err(format!("trailing text after array at column {}", pos + 1));
    }
    Ok(a)
}

fn skip_ws(c: &[char], pos: &mut usize) {
    while *pos < c.len() && c[*pos].is_whitespace() {
        *pos += 1;
    }
}

fn parse_arr_at(c: &[char], pos: &mut usize) -> Result<Arr, String> {
    skip_ws(c, pos);
    if *pos >= c.len() || c[*pos] != '[' {
        return Err(format!("expected `[` at column {}", *pos + 1));
    }
    *pos += 1;
    let mut items = Vec::new();
    skip_ws(c, pos);
    if *pos < c.len() && c[*pos] == ']' {
        *pos += 1;
        return Ok(Arr::List(items));
    }
    loop {
        skip_ws(c, pos);
        if *pos < c.len() && c[*pos] == '[' {
            items.push(parse_arr_at(c, pos)?);
        } else {
            let start = *pos;
            let mut depth = 0i32;
            while *pos < c.len() {
                match c[*pos] {
                    '(' => depth += 1,
                    ')' => depth -= 1,
                    ',' | ']' if depth == 0 => break,
                    '[' => return Err(format!("unexpected `[` at column {}", *pos + 1)),
                    _ => {}
                }
                *pos += 1;
            }
            let leaf: String = c[start..*pos].iter().collect::<String>().trim().to_string();
            if leaf.is_empty() {
                return Err(format!("empty entry at column {}", start + 1));
            }
            items.push(Arr::Leaf(leaf));
        }
        skip_ws(c, pos);
        match c.get(*pos) {
            Some(',') => *pos += 1,
            Some(']') => {
                *pos += 1;
                return Ok(Arr::List(items));
            }
            _ => return Err(format!("expected `,` or `]` at column {}", *pos + 1)),
        }
    }
}

fn parse_matrix_text(s: &str) -> Result<Vec<Vec<String>>, String> {
    match parse_array(s)? {
        Arr::Leaf(_) => Err("expected a matrix".into()),
        Arr::List(rows) => rows
            .into_iter()
            .map(|r| match r {
                Arr::List(es) => es
                    .into_iter()
                    .map(|e| match e {
                        Arr::Leaf(t) => Ok(t),
                        Arr::List(_) => Err("matrix entries must be polynomials".to_string()),
                    })
                    .collect(),
                Arr::Leaf(_) => Err("matrix rows must be bracketed".to_string()),
            })
            .collect(),
    }
}

fn print_matrix(m: &[Vec<String>]) -> String {
    let rows: Vec<String> = m.iter().map(|r| format!("[{}]", r.join(", "))).collect();
    format!("[{}]", rows.join(", "))
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect()
}

fn bracket_balance(s: &str) -> i32 {
    s.chars().map(|c| match c {
        '[' => 1,
        ']' => -1,
        _ => 0,
    }).sum()
}

// ---------------------------------------------------------------- text form

enum Section {
    Top,
    Ring,
    Potential,
    Factorisation(usize),
    Map(usize),
}

fn perr(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Parse(format!("line {line}: {msg}"))
}

/// Parse the text form into unvalidated data plus source locations.
pub fn parse_text(text: &str) -> CliResult<(DocumentData, Locations)> {
    let mut loc = Locations::default();
    let mut format = None;
    let mut ring: Option<RingData> = None;
    let mut potential: Option<String> = None;
    let mut facts: Vec<FactorisationData> = Vec::new();
    let mut maps: Vec<MapData> = Vec::new();
    let mut section = Section::Top;

    let lines: Vec<&str> = text.lines().collect();
    let mut i = 0;
    while i < lines.len() {
        let lineno = i + 1;
        let raw = lines[i];
        i += 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(h) = line.strip_prefix('[').and_then(|r| r.strip_suffix(']')).filter(|h| !h.starts_with('[')) {
            let mut parts = h.split_whitespace();
            let kind = parts.next().unwrap_or("");
            let name = parts.next();
            if parts.next().is_some() {
                return Err(perr(lineno, format!("malformed section header `{line}`")));
            }
            section = match (kind, name) {
                ("ring", None) => {
                    if ring.is_some() {
                        return Err(perr(lineno, "duplicate [ring] section"));
                    }
                    ring = Some(RingData { variables: vec![], order: "degrevlex".into(), characteristic: 0 });
                    loc.record("ring".into(), lineno);
                    Section::Ring
                }
                ("potential", None) => Section::Potential,
                ("factorisation", Some(n)) => {
                    if facts.iter().any(|f| f.name == n) {
                        return Err(perr(lineno, format!("duplicate factorisation `{n}`")));
                    }
                    loc.record(format!("factorisation {n}"), lineno);
                    facts.push(FactorisationData {
                        name: n.into(),
                        ranks: [usize::MAX, usize::MAX],
                        potential: None,
                        inputs: None,
                        outputs: None,
                        d0: vec![],
                        d1: vec![],
                    });
                    Section::Factorisation(facts.len() - 1)
                }
                ("map", Some(n)) => {
                    if maps.iter().any(|m| m.name == n) {
                        return Err(perr(lineno, format!("duplicate map `{n}`")));
                    }
                    loc.record(format!("map {n}"), lineno);
                    maps.push(MapData {
                        name: n.into(),
                        source: String::new(),
                        target: String::new(),
                        parity: "even".into(),
                        matrix: vec![],
                    });
                    Section::Map(maps.len() - 1)
                }
                _ => return Err(perr(lineno, format!("unknown section `{line}`"))),
            };
            continue;
        }
        if let Section::Potential = section {
            if potential.is_some() {
                return Err(perr(lineno, "the potential section holds a single polynomial"));
            }
            loc.record("potential".into(), lineno);
            potential = Some(line.to_string());
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .map(|(k, v)| (k.trim(), v.trim().to_string()))
            .ok_or_else(|| perr(lineno, format!("expected `key: value`, found `{line}`")))?;
        // bracketed values may continue over several lines
        let mut value = value;
        if value.starts_with('[') {
            while bracket_balance(&value) > 0 && i < lines.len() {
                value.push(' ');
                value.push_str(lines[i].trim());
                i += 1;
            }
        }
        match &mut section {
            Section::Top => match key {
                "mf-format" => {
                    let v: u32 = value.parse().map_err(|_| perr(lineno, format!("bad format version `{value}`")))?;
                    if v != FORMAT_VERSION {
                        return Err(perr(lineno, format!("unsupported mf-format {v}")));
                    }
                    format = Some(v);
                }
                _ => return Err(perr(lineno, format!("unexpected `{key}` outside a section"))),
            },
            Section::Ring => {
                let r = ring.as_mut().expect("ring section");
                match key {
                    "variables" => r.variables = split_list(&value),
                    "order" => r.order = value,
                    "characteristic" => {
                        r.characteristic =
                            value.parse().map_err(|_| perr(lineno, format!("bad characteristic `{value}`")))?
                    }
                    _ => return Err(perr(lineno, format!("unknown ring field `{key}`"))),
                }
            }
            Section::Potential => unreachable!(),
            Section::Factorisation(k) => {
                let f = &mut facts[*k];
                loc.record(format!("factorisation {}.{key}", f.name), lineno);
                match key {
                    "ranks" => {
                        let rs = split_list(&value);
                        let parsed: Vec<usize> = rs
                            .iter()
                            .map(|s| s.parse().map_err(|_| perr(lineno, format!("bad rank `{s}`"))))
                            .collect::<CliResult<_>>()?;
                        if parsed.len() != 2 {
                            return Err(perr(lineno, "ranks needs two entries: even, odd"));
                        }
                        f.ranks = [parsed[0], parsed[1]];
                    }
                    "potential" => f.potential = Some(value),
                    "inputs" => f.inputs = Some(split_list(&value)),
                    "outputs" => f.outputs = Some(split_list(&value)),
                    "d0" => f.d0 = parse_matrix_text(&value).map_err(|m| perr(lineno, m))?,
                    "d1" => f.d1 = parse_matrix_text(&value).map_err(|m| perr(lineno, m))?,
                    _ => return Err(perr(lineno, format!("unknown factorisation field `{key}`"))),
                }
            }
            Section::Map(k) => {
                let m = &mut maps[*k];
                loc.record(format!("map {}.{key}", m.name), lineno);
                match key {
                    "source" => m.source = value,
                    "target" => m.target = value,
                    "parity" => m.parity = value,
                    "matrix" => m.matrix = parse_matrix_text(&value).map_err(|e| perr(lineno, e))?,
                    _ => return Err(perr(lineno, format!("unknown map field `{key}`"))),
                }
            }
        }
    }
    let format = format.ok_or_else(|| CliError::Parse("missing `mf-format: 1` header".into()))?;
    let ring = ring.ok_or_else(|| CliError::Parse("missing [ring] section".into()))?;
    let potential = potential.ok_or_else(|| CliError::Parse("missing [potential] section".into()))?;
    for f in &facts {
        if f.ranks[0] == usize::MAX {
            return Err(CliError::Parse(format!("factorisation `{}` has no ranks", f.name)));
        }
    }
    Ok((DocumentData { format, ring, potential, factorisations: facts, maps }, loc))
}

/// Canonical text form.
pub fn print_text(d: &DocumentData) -> String {
    let mut s = String::new();
    s.push_str(&format!("mf-format: {}\n\n[ring]\n", d.format));
    s.push_str(&format!("variables: {}\n", d.ring.variables.join(", ")));
    s.push_str(&format!("order: {}\n", d.ring.order));
    s.push_str(&format!("characteristic: {}\n", d.ring.characteristic));
    s.push_str(&format!("\n[potential]\n{}\n", d.potential));
    for f in &d.factorisations {
        s.push_str(&format!("\n[factorisation {}]\n", f.name));
        s.push_str(&format!("ranks: {}, {}\n", f.ranks[0], f.ranks[1]));
        if let Some(p) = &f.potential {
            s.push_str(&format!("potential: {p}\n"));
        }
        if let Some(v) = &f.inputs {
            s.push_str(&format!("inputs: {}\n", v.join(", ")));
        }
        if let Some(v) = &f.outputs {
            s.push_str(&format!("outputs: {}\n", v.join(", ")));
        }
        s.push_str(&format!("d0: {}\n", print_matrix(&f.d0)));
        s.push_str(&format!("d1: {}\n", print_matrix(&f.d1)));
    }
    for m in &d.maps {
        s.push_str(&format!("\n[map {}]\n", m.name));
        s.push_str(&format!("source: {}\ntarget: {}\nparity: {}\n", m.source, m.target, m.parity));
        s.push_str(&format!("matrix: {}\n", print_matrix(&m.matrix)));
    }
    s
}

/// Parse either form: JSON when the first non-blank character is `{`.
pub fn parse_any(text: &str) -> CliResult<(DocumentData, Locations)> {
    if text.trim_start().starts_with('{') {
        let d: DocumentData =
            serde_json::from_str(text).map_err(|e| CliError::Parse(format!("JSON document: {e}")))?;
        if d.format != FORMAT_VERSION {
            return Err(CliError::Parse(format!("unsupported mf-format {}", d.format)));
        }
        Ok((d, Locations::default()))
    } else {
        parse_text(text)
    }
}

pub fn print_json(d: &DocumentData) -> String {
    let mut s = serde_json::to_string_pretty(d).expect("document serialises");
    s.push('\n');
    s
}

// ---------------------------------------------------------------- validation

fn parse_poly(s: &str, ring: &RingRef, what: &str) -> CliResult<Poly> {
    Poly::parse(s, ring).map_err(|e| CliError::from(e).context(what))
}

fn parse_pmat(m: &[Vec<String>], rows: usize, cols: usize, ring: &RingRef, what: &str) -> CliResult<PMat> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        let got_cols = m.first().map_or(0, |r| r.len());
        return Err(CliError::Parse(format!(
            "{what}: expected a {rows}x{cols} matrix, found {}x{got_cols}",
            m.len()
        )));
    }
    let mut rows_p = Vec::with_capacity(rows);
    for (i, r) in m.iter().enumerate() {
        let mut row = Vec::with_capacity(cols);
        for (j, e) in r.iter().enumerate() {
            row.push(parse_poly(e, ring, &format!("{what}[{i}][{j}]"))?);
        }
        rows_p.push(row);
    }
    if rows == 0 || cols == 0 {
        return Ok(PMat::zeros(ring, rows, cols));
    }
    Ok(PMat::from_rows(ring, rows_p))
}

fn matrix_strings(m: &PMat) -> Vec<Vec<String>> {
    m.to_strings()
}

impl MFDocument {
    /// Validate parsed data: polynomials parse, shapes agree, `d² = W·1`.
    pub fn from_data(d: &DocumentData, loc: &Locations, ov: RingOverrides) -> CliResult<MFDocument> {
        let order = match ov.order {
            Some(o) => o,
            None => MonomialOrder::parse(&d.ring.order).ok_or_else(|| {
                CliError::Parse(format!("{}: unknown monomial order `{}`", loc.describe("ring", "ring"), d.ring.order))
            })?,
        };
        let ch = ov.characteristic.unwrap_or(d.ring.characteristic);
        let ring = Ring::with_options(&d.ring.variables, order, ch)
            .map_err(|e| CliError::from(e).context(&loc.describe("ring", "ring")))?;
        let potential = parse_poly(&d.potential, &ring, &loc.describe("potential", "potential"))?;
        let mut factorisations = Vec::new();
        for f in &d.factorisations {
            let key = format!("factorisation {}", f.name);
            let what = loc.describe(&key, &format!("factorisation `{}`", f.name));
            let w = match &f.potential {
                Some(p) => parse_poly(p, &ring, &format!("{what}: potential"))?,
                None => potential.clone(),
            };
            let [r0, r1] = f.ranks;
            let d0 = parse_pmat(&f.d0, r1, r0, &ring, &format!("{what}: d0"))?;
            let d1 = parse_pmat(&f.d1, r0, r1, &ring, &format!("{what}: d1"))?;
            let mf = MF::new(&w, &d0, &d1).map_err(|e| CliError::from(e).context(&what))?;
            for v in f.inputs.iter().chain(&f.outputs).flatten() {
                if ring.var_index(v).is_none() {
                    return Err(CliError::Parse(format!("{what}: unknown variable `{v}`")));
                }
            }
            factorisations.push(NamedFactorisation {
                name: f.name.clone(),
                mf,
                inputs: f.inputs.clone(),
                outputs: f.outputs.clone(),
            });
        }
        let mut doc = MFDocument { ring, potential, factorisations, maps: vec![] };
        for m in &d.maps {
            let key = format!("map {}", m.name);
            let what = loc.describe(&key, &format!("map `{}`", m.name));
            let src = doc.factorisation(&m.source).map_err(|e| e.context(&what))?.clone();
            let tgt = doc.factorisation(&m.target).map_err(|e| e.context(&what))?.clone();
            let odd = match m.parity.as_str() {
                "even" => false,
                "odd" => true,
                p => return Err(CliError::Parse(format!("{what}: parity must be even or odd, found `{p}`"))),
            };
            let pm = parse_pmat(&m.matrix, tgt.rank(), src.rank(), &doc.ring, &format!("{what}: matrix"))?;
            let map = MFMap::new(&src, &tgt, odd, pm).map_err(|e| CliError::from(e).context(&what))?;
            doc.maps.push(NamedMap { name: m.name.clone(), source: m.source.clone(), target: m.target.clone(), map });
        }
        Ok(doc)
    }

    pub fn parse(text: &str, ov: RingOverrides) -> CliResult<MFDocument> {
        let (d, loc) = parse_any(text)?;
        MFDocument::from_data(&d, &loc, ov)
    }

    /// Canonical data: every polynomial in canonical print form.
    pub fn to_data(&self) -> DocumentData {
        DocumentData {
            format: FORMAT_VERSION,
            ring: RingData {
                variables: self.ring.vars().to_vec(),
                order: self.ring.order().name().to_string(),
                characteristic: self.ring.characteristic(),
            },
            potential: self.potential.to_string(),
            factorisations: self
                .factorisations
                .iter()
                .map(|f| FactorisationData {
                    name: f.name.clone(),
                    ranks: [f.mf.r0(), f.mf.r1()],
                    potential: (*f.mf.potential() != self.potential).then(|| f.mf.potential().to_string()),
                    inputs: f.inputs.clone(),
                    outputs: f.outputs.clone(),
                    d0: matrix_strings(&f.mf.d0()),
                    d1: matrix_strings(&f.mf.d1()),
                })
                .collect(),
            maps: self
                .maps
                .iter()
                .map(|m| MapData {
                    name: m.name.clone(),
                    source: m.source.clone(),
                    target: m.target.clone(),
                    parity: if m.map.odd { "odd" } else { "even" }.into(),
                    matrix: matrix_strings(&m.map.m),
                })
                .collect(),
        }
    }

    /// A one-factorisation document.
    pub fn single(name: &str, mf: &MF) -> MFDocument {
        MFDocument {
            ring: mf.ring().clone(),
            potential: mf.potential().clone(),
            factorisations: vec![NamedFactorisation { name: name.into(), mf: mf.clone(), inputs: None, outputs: None }],
            maps: vec![],
        }
    }

    pub fn to_text(&self) -> String {
        print_text(&self.to_data())
    }

    pub fn to_json(&self) -> String {
        print_json(&self.to_data())
    }

    pub fn named(&self, name: &str) -> CliResult<&NamedFactorisation> {
        self.factorisations
            .iter()
            .find(|f| f.name == name)
            .ok_or_else(|| CliError::Usage(format!("no factorisation named `{name}`")))
    }

    pub fn factorisation(&self, name: &str) -> CliResult<&MF> {
        self.named(name).map(|f| &f.mf)
    }

    pub fn map(&self, name: &str) -> CliResult<&MFMap> {
        self.maps
            .iter()
            .find(|m| m.name == name)
            .map(|m| &m.map)
            .ok_or_else(|| CliError::Usage(format!("no map named `{name}`")))
    }

    /// The named factorisation, or the only one when no name is given.
    pub fn pick(&self, name: Option<&str>) -> CliResult<&NamedFactorisation> {
        match name {
            Some(n) => self.named(n),
            None if self.factorisations.len() == 1 => Ok(&self.factorisations[0]),
            None => Err(CliError::Usage(format!(
                "document holds {} factorisations; name one",
                self.factorisations.len()
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const K: &str = "mf-format: 1\n\n[ring]\nvariables: x, u, v\norder: degrevlex\ncharacteristic: 0\n\n[potential]\nu*v\n\n[factorisation K]\nranks: 1, 1\nd0: [[v]]\nd1: [[u]]\n\n[map one]\nsource: K\ntarget: K\nparity: even\nmatrix: [[1, 0], [0, 1]]\n";

    #[test]
    fn canonical_text_round_trips() {
        let doc = MFDocument::parse(K, RingOverrides::default()).unwrap();
        assert_eq!(doc.to_text(), K);
        let again = MFDocument::parse(&doc.to_json(), RingOverrides::default()).unwrap();
        assert_eq!(again.to_text(), K);
    }

    #[test]
    fn tolerant_input_becomes_canonical() {
        let messy = "# a comment\nmf-format: 1\n[ring]\nvariables: x,u,v\n[potential]\nv*u + 0\n[factorisation K]\nranks: 1,1\nd0: [[ v ]]\nd1: [\n  [u]\n]\n[map one]\nsource: K\ntarget: K\nmatrix: [[1,0],[0,1]]\n";
        let doc = MFDocument::parse(messy, RingOverrides::default()).unwrap();
        assert_eq!(doc.to_text(), K);
    }

    #[test]
    fn errors_name_their_place() {
        let bad = K.replace("d1: [[u]]", "d1: [[1]]");
        let e = MFDocument::parse(&bad, RingOverrides::default()).unwrap_err();
        assert_eq!(e.exit_code(), 4);
        assert!(e.to_string().contains("factorisation `K` (line 11)"), "{e}");
        let e = MFDocument::parse(&K.replace("[[v]]", "[[v +]]"), RingOverrides::default()).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("d0[0][0]"), "{e}");
        let e = MFDocument::parse(&K.replace("[[v]]", "[[v, u]]"), RingOverrides::default()).unwrap_err();
        assert!(e.to_string().contains("expected a 1x1 matrix"), "{e}");
        let e = MFDocument::parse(&K.replace("mf-format: 1", "mf-format: 2"), RingOverrides::default()).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn arrays() {
        assert_eq!(parse_matrix_text("[]").unwrap(), Vec::<Vec<String>>::new());
        assert_eq!(parse_matrix_text("[[(x+1)^2, -y]]").unwrap(), vec![vec!["(x+1)^2".to_string(), "-y".to_string()]]);
        assert!(parse_matrix_text("[[x], y]").is_err());
        assert!(parse_matrix_text("[[x,]]").is_err());
    }
}
