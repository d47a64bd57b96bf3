//! Planar-diagram codes: parsing, validation, orientation and arc extraction.
//!
//! A crossing `X[a,b,c,d]` lists its four edges counterclockwise starting at
//! the incoming under-edge `a`, so `c = a + 1` is the outgoing under-edge and
//! `{b, d}` are the two halves of the over-strand. Edges are numbered
//! `1..=2n` along the knot; arithmetic wraps with representatives `1..=2n`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::presentation::Relation;

/// Identifies the orientation convention used to turn crossings into
/// relations. Reports echo it so outputs are comparable across builds.
pub const SIGN_CONVENTION: &str = "pd-ccw-from-under-in; sign=+1 iff d=b+1; +1 -> (in,over,out); v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input")]
    EmptyInput,
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}

impl ParseError {
    fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        ParseError::Syntax { pos, msg: msg.into() }
    }
}

/// Raw crossing 4-tuples, as read from text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdCode {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(rename = "pd")]
    pub crossings: Vec<[u32; 4]>,
}

impl PdCode {
    pub fn new(crossings: Vec<[u32; 4]>) -> Self {
        PdCode { name: None, crossings }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn n_crossings(&self) -> usize {
        self.crossings.len()
    }

    fn n_edges(&self) -> u32 {
        2 * self.crossings.len() as u32
    }

    /// `e + 1` with representatives `1..=2n`.
    fn succ(&self, e: u32) -> u32 {
        e % self.n_edges() + 1
    }
}

impl fmt::Display for PdCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PD[")?;
        for (idx, [a, b, c, d]) in self.crossings.iter().enumerate() {
            if idx > 0 {
                write!(f, ", ")?;
            }
            write!(f, "X[{a},{b},{c},{d}]")?;
        }
        write!(f, "]")
    }
}

/// Parses either `PD[X[a,b,c,d], ...]` or `{"name": ..., "pd": [[a,b,c,d], ...]}`.
pub fn parse_pd(text: &str) -> Result<PdCode, ParseError> {
    let trimmed = text.trim_start();
    if trimmed.is_empty() {
        return Err(ParseError::EmptyInput);
    }
    let code = if trimmed.starts_with('{') {
        parse_json(text)?
    } else {
        BracketParser::new(text).parse()?
    };
    if code.crossings.is_empty() {
        return Err(ParseError::EmptyInput);
    }
    Ok(code)
}

fn parse_json(text: &str) -> Result<PdCode, ParseError> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Raw {
        #[serde(default)]
        name: Option<String>,
        pd: Vec<Vec<serde_json::Value>>,
    }
    let raw: Raw = serde_json::from_str(text)
        .map_err(|e| ParseError::syntax(e.column(), e.to_string()))?;
    let mut crossings = Vec::with_capacity(raw.pd.len());
    for (idx, tuple) in raw.pd.iter().enumerate() {
        if tuple.len() != 4 {
            return Err(ParseError::syntax(0, format!("crossing {idx} has {} entries, expected 4", tuple.len())));
        }
        let mut out = [0u32; 4];
        for (slot, v) in out.iter_mut().zip(tuple) {
            *slot = v
                .as_u64()
                .and_then(|x| u32::try_from(x).ok())
                .filter(|&x| x > 0)
                .ok_or_else(|| ParseError::syntax(0, format!("crossing {idx}: {v} is not a positive integer")))?;
        }
        crossings.push(out);
    }
    Ok(PdCode { name: raw.name, crossings })
}

struct BracketParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> BracketParser<'a> {
    fn new(text: &'a str) -> Self {
        BracketParser { src: text.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            Ok(())
        } else {
            Err(ParseError::syntax(self.pos, format!("expected `{token}`")))
        }
    }

    fn number(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ParseError::syntax(start, "expected a positive integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        match digits.parse::<u32>() {
            Ok(0) | Err(_) => Err(ParseError::syntax(start, format!("`{digits}` is not a valid edge id"))),
            Ok(v) => Ok(v),
        }
    }

    fn crossing(&mut self) -> Result<[u32; 4], ParseError> {
        let start = self.pos;
        self.expect("X")?;
        self.expect("[")?;
        let mut entries = vec![self.number()?];
        while self.peek() == Some(b',') {
            self.pos += 1;
            entries.push(self.number()?);
        }
        self.expect("]")?;
        entries
            .try_into()
            .map_err(|v: Vec<u32>| ParseError::syntax(start, format!("crossing has {} entries, expected 4", v.len())))
    }

    fn parse(mut self) -> Result<PdCode, ParseError> {
        self.expect("PD")?;
        self.expect("[")?;
        let mut crossings = Vec::new();
        if self.peek() != Some(b']') {
            crossings.push(self.crossing()?);
            while self.peek() == Some(b',') {
                self.pos += 1;
                crossings.push(self.crossing()?);
            }
        }
        self.expect("]")?;
        if self.peek().is_some() {
            return Err(ParseError::syntax(self.pos, "trailing input"));
        }
        Ok(PdCode::new(crossings))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Violation {
    /// Edge id `edge` occurs `count` times; every id in `1..=2n` must occur
    /// exactly twice and no other id may occur.
    EdgeCountViolation { edge: u32, count: usize },
    /// The third entry is not the successor of the first.
    UnderOutMismatch { crossing: usize },
    /// The over-strand entries are not consecutive edges.
    OverStrandMismatch { crossing: usize },
    /// Following strands straight through crossings yields several closed
    /// components.
    MultiComponent { cycle_count: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EdgeCountViolation { edge, count } => {
                write!(f, "EdgeCountViolation: edge {edge} appears {count} time(s)")
            }
            Violation::UnderOutMismatch { crossing } => {
                write!(f, "UnderOutMismatch: crossing {crossing} has c != a+1")
            }
            Violation::OverStrandMismatch { crossing } => {
                write!(f, "OverStrandMismatch: crossing {crossing} has non-consecutive over edges")
            }
            Violation::MultiComponent { cycle_count } => {
                write!(f, "MultiComponent: {cycle_count} components")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate(pd: &PdCode) -> ValidationReport {
    let mut violations = Vec::new();
    if pd.crossings.is_empty() {
        return ValidationReport { violations };
    }
    let n_edges = pd.n_edges();
    let max_id = pd.crossings.iter().flatten().copied().max().unwrap_or(0).max(n_edges);
    let mut counts = vec![0usize; max_id as usize + 1];
    for &e in pd.crossings.iter().flatten() {
        counts[e as usize] += 1;
    }
    for (edge, &count) in counts.iter().enumerate().skip(1) {
        let expected = if edge as u32 <= n_edges { 2 } else { 0 };
        if count != expected {
            violations.push(Violation::EdgeCountViolation { edge: edge as u32, count });
        }
    }
    let counts_ok = violations.is_empty();

    for (idx, &[a, b, c, d]) in pd.crossings.iter().enumerate() {
        if a > n_edges || c != pd.succ(a) {
            violations.push(Violation::UnderOutMismatch { crossing: idx });
        }
        if b > n_edges || d > n_edges || (d != pd.succ(b) && b != pd.succ(d)) {
            violations.push(Violation::OverStrandMismatch { crossing: idx });
        }
    }

    if counts_ok {
        let cycles = strand_components(pd);
        if cycles != 1 {
            violations.push(Violation::MultiComponent { cycle_count: cycles });
        }
    }
    ValidationReport { violations }
}

/// Number of closed strands obtained by passing straight through every
/// crossing (position p continues at p+2). Assumes every edge appears twice.
fn strand_components(pd: &PdCode) -> usize {
    let n_edges = pd.n_edges() as usize;
    let mut parent: Vec<usize> = (0..=n_edges).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for x in &pd.crossings {
        for (p, q) in [(0, 2), (1, 3)] {
            let (ra, rb) = (find(&mut parent, x[p] as usize), find(&mut parent, x[q] as usize));
            parent[ra] = rb;
        }
    }
    (1..=n_edges).filter(|&e| find(&mut parent, e) == e).count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flipped(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

/// Global choice of which over-strand orientation counts as positive.
/// `Flipped` yields the dual presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignConvention {
    #[default]
    Standard,
    Flipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Crossing {
    pub under_in_arc: usize,
    pub over_arc: usize,
    pub under_out_arc: usize,
    pub sign: Sign,
}

/// A validated knot diagram with arcs labelled `0..n_arcs` in order of
/// their smallest edge id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagram {
    pub name: Option<String>,
    pub n_crossings: usize,
    pub n_arcs: usize,
    /// `edge_to_arc[e - 1]` is the arc containing edge `e`.
    pub edge_to_arc: Vec<usize>,
    pub crossings: Vec<Crossing>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid PD code: {}", .0.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct InvalidCode(pub ValidationReport);

pub fn build_diagram(pd: &PdCode) -> Result<Diagram, InvalidCode> {
    if pd.crossings.is_empty() {
        return Err(InvalidCode(ValidationReport::default()));
    }
    let report = validate(pd);
    if !report.is_ok() {
        return Err(InvalidCode(report));
    }
    let n_edges = pd.n_edges() as usize;
    let mut is_under_in = vec![false; n_edges + 1];
    for x in &pd.crossings {
        is_under_in[x[0] as usize] = true;
    }
    // An arc runs from an under-out edge forward to the next under-in edge.
    // Walking from edge 1 and cutting after each under-in edge labels arcs in
    // order of their smallest edge, except that the run containing edge 1 may
    // also own the tail of the cycle.
    let mut raw = vec![usize::MAX; n_edges + 1];
    let mut label = 0;
    for e in 1..=n_edges {
        raw[e] = label;
        if is_under_in[e] {
            label += 1;
        }
    }
    let n_arcs = label;
    if !is_under_in[n_edges] {
        // Tail run (after the last under-in edge) wraps into arc 0.
        for e in (1..=n_edges).rev() {
            if raw[e] != n_arcs {
                break;
            }
            raw[e] = 0;
        }
    }
    let edge_to_arc: Vec<usize> = raw[1..].to_vec();
    let arc = |e: u32| edge_to_arc[e as usize - 1];

    let crossings = pd
        .crossings
        .iter()
        .map(|&[a, b, c, d]| {
            let sign = if d == pd.succ(b) { Sign::Positive } else { Sign::Negative };
            debug_assert_eq!(arc(b), arc(d));
            Crossing { under_in_arc: arc(a), over_arc: arc(b), under_out_arc: arc(c), sign }
        })
        .collect();

    Ok(Diagram {
        name: pd.name.clone(),
        n_crossings: pd.crossings.len(),
        n_arcs,
        edge_to_arc,
        crossings,
    })
}

impl Diagram {
    /// The edge ids making up each arc, in traversal order.
    pub fn arcs(&self) -> Vec<Vec<u32>> {
        let mut arcs = vec![Vec::new(); self.n_arcs];
        let n_edges = self.edge_to_arc.len();
        // Start the walk right after an under-in edge so every arc is
        // contiguous in the output.
        let start = (0..n_edges)
            .find(|&i| self.edge_to_arc[i] != self.edge_to_arc[(i + 1) % n_edges])
            .map(|i| (i + 1) % n_edges)
            .unwrap_or(0);
        for step in 0..n_edges {
            let i = (start + step) % n_edges;
            arcs[self.edge_to_arc[i]].push(i as u32 + 1);
        }
        arcs
    }
}

pub fn crossing_relations(d: &Diagram) -> Vec<Relation> {
    crossing_relations_with(d, SignConvention::Standard)
}

/// One relation per crossing: `(in, over, out)` for positive crossings and
/// `(out, over, in)` for negative ones under the given convention.
pub fn crossing_relations_with(d: &Diagram, convention: SignConvention) -> Vec<Relation> {
    d.crossings
        .iter()
        .map(|x| {
            let sign = match convention {
                SignConvention::Standard => x.sign,
                SignConvention::Flipped => x.sign.flipped(),
            };
            match sign {
                Sign::Positive => Relation::new(x.under_in_arc, x.over_arc, x.under_out_arc),
                Sign::Negative => Relation::new(x.under_out_arc, x.over_arc, x.under_in_arc),
            }
        })
        .collect()
}
