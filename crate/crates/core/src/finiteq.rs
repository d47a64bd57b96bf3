//! Finite quandles given by Cayley tables.
//!
//! Used as coloring targets for diagram presentations and for computing the
//! group of (anti)automorphisms of small quandles.

use std::collections::VecDeque;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::permgroup::Perm;
use crate::presentation::QuandlePresentation;
use crate::symmetry::Flags;

pub const DEFAULT_AUT_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuandleError {
    #[error("table shape error: {0}")]
    Shape(String),
    #[error("quandle axioms violated: {0:?}")]
    Axioms(Vec<AxiomViolation>),
    #[error("quandle size must be at least 1")]
    ZeroSize,
    #[error("multiplication table is not a group: {0}")]
    NotAGroup(String),
    #[error("element {0} out of range for size {1}")]
    IndexOutOfRange(usize, usize),
    #[error("size {size} exceeds the cap of {cap}")]
    SizeExceedsCap { size: usize, cap: usize },
    #[error("table text: {0}")]
    Format(String),
}

/// First counterexample found for an axiom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom")]
pub enum AxiomViolation {
    /// `x ⊳ x != x`
    Idempotence { x: usize },
    /// `(x ⊳ y) ⊲ y != x` or `(x ⊲ y) ⊳ y != x`
    RightInverse { x: usize, y: usize },
    /// `(x ⊳ y) ⊳ z != (x ⊳ z) ⊳ (y ⊳ z)`
    SelfDistributive { x: usize, y: usize, z: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct AxiomReport {
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn check_shape(size: usize, table: &[Vec<usize>], what: &str) -> Result<(), QuandleError> {
    if table.len() != size {
        return Err(QuandleError::Shape(format!("{what} has {} rows, expected {size}", table.len())));
    }
    for (x, row) in table.iter().enumerate() {
        if row.len() != size {
            return Err(QuandleError::Shape(format!("{what} row {x} has {} entries", row.len())));
        }
        if let Some(&v) = row.iter().find(|&&v| v >= size) {
            return Err(QuandleError::Shape(format!("{what} row {x} contains {v}")));
        }
    }
    Ok(())
}

/// Checks the three quandle axioms on `tr[x][y] = x ⊳ y`, `tl[x][y] = x ⊲ y`.
pub fn check_axioms(tr: &[Vec<usize>], tl: &[Vec<usize>]) -> Result<AxiomReport, QuandleError> {
    let size = tr.len();
    check_shape(size, tr, "⊳ table")?;
    check_shape(size, tl, "⊲ table")?;
    let mut violations = Vec::new();
    if let Some(x) = (0..size).find(|&x| tr[x][x] != x) {
        violations.push(AxiomViolation::Idempotence { x });
    }
    if let Some((x, y)) = (0..size)
        .cartesian_product(0..size)
        .find(|&(x, y)| tl[tr[x][y]][y] != x || tr[tl[x][y]][y] != x)
    {
        violations.push(AxiomViolation::RightInverse { x, y });
    }
    if let Some((x, y, z)) = (0..size)
        .cartesian_product(0..size)
        .cartesian_product(0..size)
        .map(|((x, y), z)| (x, y, z))
        .find(|&(x, y, z)| tr[tr[x][y]][z] != tr[tr[x][z]][tr[y][z]])
    {
        violations.push(AxiomViolation::SelfDistributive { x, y, z });
    }
    Ok(AxiomReport { violations })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteQuandle {
    size: usize,
    tr: Vec<Vec<usize>>,
    tl: Vec<Vec<usize>>,
}

impl FiniteQuandle {
    pub fn from_tables(tr: Vec<Vec<usize>>, tl: Vec<Vec<usize>>) -> Result<Self, QuandleError> {
        if tr.is_empty() {
            return Err(QuandleError::ZeroSize);
        }
        let report = check_axioms(&tr, &tl)?;
        if !report.is_ok() {
            return Err(QuandleError::Axioms(report.violations));
        }
        Ok(FiniteQuandle { size: tr.len(), tr, tl })
    }

    /// Builds the quandle from its ⊳ table, deriving ⊲ by inverting each
    /// right translation `x ↦ x ⊳ y`.
    pub fn from_tr(tr: Vec<Vec<usize>>) -> Result<Self, QuandleError> {
        let size = tr.len();
        check_shape(size, &tr, "⊳ table")?;
        let mut tl = vec![vec![usize::MAX; size]; size];
        for y in 0..size {
            for x in 0..size {
                let z = tr[x][y];
                if tl[z][y] != usize::MAX {
                    return Err(QuandleError::Axioms(vec![AxiomViolation::RightInverse { x, y }]));
                }
                tl[z][y] = x;
            }
        }
        Self::from_tables(tr, tl)
    }

    /// The trivial quandle `x ⊳ y = x`.
    pub fn trivial(size: usize) -> Result<Self, QuandleError> {
        let tr: Vec<Vec<usize>> = (0..size).map(|x| vec![x; size]).collect();
        Self::from_tables(tr.clone(), tr)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn op_tr(&self, x: usize, y: usize) -> usize {
        self.tr[x][y]
    }

    pub fn op_tl(&self, x: usize, y: usize) -> usize {
        self.tl[x][y]
    }

    pub fn tr_table(&self) -> &[Vec<usize>] {
        &self.tr
    }

    pub fn tl_table(&self) -> &[Vec<usize>] {
        &self.tl
    }

    pub fn is_self_dual_tables(&self) -> bool {
        self.tr == self.tl
    }

    pub fn dual(&self) -> FiniteQuandle {
        FiniteQuandle { size: self.size, tr: self.tl.clone(), tl: self.tr.clone() }
    }

    /// Parses the text table format: the size on the first line, `size`
    /// rows of the ⊳ table, then optionally a blank line and the ⊲ table.
    pub fn parse_table(text: &str) -> Result<Self, QuandleError> {
        let mut lines = text.lines().map(str::trim);
        let size: usize = lines
            .by_ref()
            .find(|l| !l.is_empty())
            .ok_or_else(|| QuandleError::Format("missing size line".into()))?
            .parse()
            .map_err(|e| QuandleError::Format(format!("size: {e}")))?;
        if size == 0 {
            return Err(QuandleError::ZeroSize);
        }
        let rest: Vec<&str> = lines.filter(|l| !l.is_empty()).collect();
        let parse_row = |l: &str| -> Result<Vec<usize>, QuandleError> {
            l.split_whitespace()
                .map(|t| t.parse().map_err(|e| QuandleError::Format(format!("`{t}`: {e}"))))
                .collect()
        };
        let rows: Vec<Vec<usize>> = rest.iter().map(|l| parse_row(l)).collect::<Result<_, _>>()?;
        match rows.len() {
            n if n == size => Self::from_tr(rows),
            n if n == 2 * size => {
                let (tr, tl) = rows.split_at(size);
                Self::from_tables(tr.to_vec(), tl.to_vec())
            }
            n => Err(QuandleError::Format(format!("expected {size} or {} rows, found {n}", 2 * size))),
        }
    }

    pub fn to_table_text(&self) -> String {
        let block = |t: &[Vec<usize>]| {
            t.iter()
                .map(|row| row.iter().map(|v| v.to_string()).join(" "))
                .join("\n")
        };
        format!("{}\n{}\n\n{}\n", self.size, block(&self.tr), block(&self.tl))
    }
}

/// The dihedral quandle `R_p`: `x ⊳ y = x ⊲ y = 2y - x mod p`.
pub fn dihedral_quandle(p: usize) -> Result<FiniteQuandle, QuandleError> {
    if p == 0 {
        return Err(QuandleError::ZeroSize);
    }
    let tr: Vec<Vec<usize>> = (0..p)
        .map(|x| (0..p).map(|y| (2 * y + p - x) % p).collect())
        .collect();
    FiniteQuandle::from_tables(tr.clone(), tr)
}

/// Validates a group multiplication table and returns `(identity, inverses)`.
fn check_group(mult: &[Vec<usize>]) -> Result<(usize, Vec<usize>), QuandleError> {
    let n = mult.len();
    if n == 0 {
        return Err(QuandleError::NotAGroup("empty table".into()));
    }
    check_shape(n, mult, "multiplication table").map_err(|e| QuandleError::NotAGroup(e.to_string()))?;
    for (a, b, c) in (0..n).cartesian_product(0..n).cartesian_product(0..n).map(|((a, b), c)| (a, b, c)) {
        if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
            return Err(QuandleError::NotAGroup(format!("({a}{b}){c} != {a}({b}{c})")));
        }
    }
    let e = (0..n)
        .find(|&e| (0..n).all(|x| mult[e][x] == x && mult[x][e] == x))
        .ok_or_else(|| QuandleError::NotAGroup("no identity".into()))?;
    let inverses = (0..n)
        .map(|x| {
            (0..n)
                .find(|&y| mult[x][y] == e && mult[y][x] == e)
                .ok_or_else(|| QuandleError::NotAGroup(format!("{x} has no inverse")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((e, inverses))
}

/// The conjugation quandle of a group: `a ⊳ b = b⁻¹ab`, `a ⊲ b = bab⁻¹`.
pub fn conjugation_quandle(mult: &[Vec<usize>]) -> Result<FiniteQuandle, QuandleError> {
    let (_, inv) = check_group(mult)?;
    let n = mult.len();
    let tr = (0..n)
        .map(|a| (0..n).map(|b| mult[mult[inv[b]][a]][b]).collect())
        .collect();
    let tl = (0..n)
        .map(|a| (0..n).map(|b| mult[mult[b][a]][inv[b]]).collect())
        .collect();
    FiniteQuandle::from_tables(tr, tl)
}

/// `S_y(x) = x ⊳ y`.
pub fn inner_automorphism(q: &FiniteQuandle, y: usize) -> Result<Perm, QuandleError> {
    if y >= q.size {
        return Err(QuandleError::IndexOutOfRange(y, q.size));
    }
    let images = (0..q.size).map(|x| q.tr[x][y]).collect();
    Ok(Perm::new(images).expect("right translations of a quandle are bijections"))
}

/// All bijections of `q` that are homomorphisms and/or antihomomorphisms.
pub fn aut_c(q: &FiniteQuandle, cap: usize) -> Result<Vec<(Perm, Flags)>, QuandleError> {
    if q.size > cap {
        return Err(QuandleError::SizeExceedsCap { size: q.size, cap });
    }
    let n = q.size;
    let mut out = Vec::new();
    for f in (0..n).permutations(n) {
        let pairs = || (0..n).cartesian_product(0..n);
        let flags = Flags {
            auto: pairs().all(|(x, y)| f[q.tr[x][y]] == q.tr[f[x]][f[y]]),
            anti: pairs().all(|(x, y)| f[q.tr[x][y]] == q.tl[f[x]][f[y]]),
        };
        if !flags.is_empty() {
            out.push((Perm::new(f).expect("permutation"), flags));
        }
    }
    Ok(out)
}

/// Number of assignments of elements of `q` to generators satisfying every
/// relation `x ⊳ y = z` of `p`.
pub fn count_colorings(p: &QuandlePresentation, q: &FiniteQuandle) -> u64 {
    let n = p.n_generators();
    if n == 0 {
        return 1;
    }
    let order = bfs_order(p);
    let mut position = vec![0; n];
    for (idx, &g) in order.iter().enumerate() {
        position[g] = idx;
    }
    // Relations become checkable once their last generator is assigned.
    let mut checks: Vec<Vec<[usize; 3]>> = vec![Vec::new(); n];
    for r in p.relations() {
        let last = [r.base, r.acting, r.result].iter().map(|&g| position[g]).max().unwrap();
        checks[last].push([r.base, r.acting, r.result]);
    }
    let mut coloring = vec![usize::MAX; n];
    count_from(0, &order, &checks, q, &mut coloring)
}

fn count_from(
    depth: usize,
    order: &[usize],
    checks: &[Vec<[usize; 3]>],
    q: &FiniteQuandle,
    coloring: &mut [usize],
) -> u64 {
    if depth == order.len() {
        return 1;
    }
    let g = order[depth];
    // A relation whose other two generators are already colored forces `g`.
    let forced = checks[depth].iter().find_map(|&[x, y, z]| {
        if z == g && x != g && y != g {
            Some(q.tr[coloring[x]][coloring[y]])
        } else if x == g && y != g && z != g {
            Some(q.tl[coloring[z]][coloring[y]])
        } else {
            None
        }
    });
    let candidates: Vec<usize> = match forced {
        Some(c) => vec![c],
        None => (0..q.size).collect(),
    };
    let mut total = 0;
    for c in candidates {
        coloring[g] = c;
        if checks[depth]
            .iter()
            .all(|&[x, y, z]| q.tr[coloring[x]][coloring[y]] == coloring[z])
        {
            total += count_from(depth + 1, order, checks, q, coloring);
        }
    }
    coloring[g] = usize::MAX;
    total
}

/// Breadth-first order from generator 0 over the graph joining the three
/// generators of each relation; unreached generators follow in index order.
fn bfs_order(p: &QuandlePresentation) -> Vec<usize> {
    let n = p.n_generators();
    let mut adj = vec![Vec::new(); n];
    for r in p.relations() {
        let g = [r.base, r.acting, r.result];
        for a in g {
            for b in g {
                if a != b {
                    adj[a].push(b);
                }
            }
        }
    }
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(g) = queue.pop_front() {
            order.push(g);
            for &h in &adj[g] {
                if !seen[h] {
                    seen[h] = true;
                    queue.push_back(h);
                }
            }
        }
    }
    order
}
