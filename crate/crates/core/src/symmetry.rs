//! Q-groups of diagram presentations.
//!
//! A Q-permutation is a permutation of the generators that maps the
//! relation set onto itself either directly (an automorphism) or with every
//! triple reversed (an antiautomorphism). Two routes compute the group: an
//! exhaustive scan of the symmetric group, and a seeded propagation search
//! that fixes the image of generator 0 and the mode, then lets the relation
//! triples force the remaining images.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::permgroup::{self, GroupLabel, Perm, PermError};
use crate::presentation::{QuandlePresentation, Relation};

pub const DEFAULT_BRUTE_CAP: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error("permutation has length {got}, presentation has {expected} generators")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{n} generators exceed the brute-force cap of {cap}")]
    SizeExceedsCap { n: usize, cap: usize },
    #[error("inconsistent propagation result: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Group(#[from] PermError),
}

/// Which of the two conditions a permutation satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Flags {
    pub auto: bool,
    pub anti: bool,
}

impl Flags {
    pub const AUTO: Flags = Flags { auto: true, anti: false };
    pub const ANTI: Flags = Flags { auto: false, anti: true };
    pub const BOTH: Flags = Flags { auto: true, anti: true };

    pub fn is_empty(self) -> bool {
        !self.auto && !self.anti
    }

    pub fn union(self, other: Flags) -> Flags {
        Flags { auto: self.auto || other.auto, anti: self.anti || other.anti }
    }

    pub fn swapped(self) -> Flags {
        Flags { auto: self.anti, anti: self.auto }
    }

    pub fn names(self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.auto {
            v.push("auto");
        }
        if self.anti {
            v.push("anti");
        }
        v
    }
}

impl fmt::Display for Flags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.names().join(", "))
    }
}

impl Serialize for Flags {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.names().serialize(serializer)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Auto,
    Anti,
}

impl Mode {
    /// Generator positions whose images must form a relation, in order.
    fn pattern(self, r: &Relation) -> [usize; 3] {
        match self {
            Mode::Auto => [r.base, r.acting, r.result],
            Mode::Anti => [r.result, r.acting, r.base],
        }
    }

    fn flags(self) -> Flags {
        match self {
            Mode::Auto => Flags::AUTO,
            Mode::Anti => Flags::ANTI,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QPermutation {
    pub images: Perm,
    pub flags: Flags,
}

/// All Q-permutations of a presentation, sorted by image sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QGroup {
    elements: Vec<QPermutation>,
    presentation: QuandlePresentation,
}

impl QGroup {
    fn from_map(presentation: &QuandlePresentation, map: BTreeMap<Vec<usize>, Flags>) -> Self {
        let elements = map
            .into_iter()
            .map(|(images, flags)| QPermutation {
                images: Perm::new(images).expect("search yields bijections"),
                flags,
            })
            .collect();
        QGroup { elements, presentation: presentation.clone() }
    }

    pub fn elements(&self) -> &[QPermutation] {
        &self.elements
    }

    pub fn presentation(&self) -> &QuandlePresentation {
        &self.presentation
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn perms(&self) -> BTreeSet<Perm> {
        self.elements.iter().map(|e| e.images.clone()).collect()
    }

    pub fn flags_of(&self, p: &Perm) -> Option<Flags> {
        self.elements
            .binary_search_by(|e| e.images.cmp(p))
            .ok()
            .map(|idx| self.elements[idx].flags)
    }

    pub fn label(&self) -> Result<GroupLabel, PermError> {
        permgroup::identify(&self.perms())
    }
}

/// The subset of {auto, anti} whose defining condition `images` satisfies.
pub fn is_q_permutation(p: &QuandlePresentation, images: &[usize]) -> Result<Flags, SymmetryError> {
    if images.len() != p.n_generators() {
        return Err(SymmetryError::LengthMismatch { expected: p.n_generators(), got: images.len() });
    }
    Ok(flags_unchecked(p, images))
}

fn flags_unchecked(p: &QuandlePresentation, images: &[usize]) -> Flags {
    let holds = |mode: Mode| {
        p.relations().iter().all(|r| {
            let [x, y, z] = mode.pattern(r);
            p.contains(&Relation::new(images[x], images[y], images[z]))
        })
    };
    Flags { auto: holds(Mode::Auto), anti: holds(Mode::Anti) }
}

/// Scans every permutation of the generators.
pub fn brute_force_qgroup(p: &QuandlePresentation, cap: usize) -> Result<QGroup, SymmetryError> {
    let n = p.n_generators();
    if n > cap {
        return Err(SymmetryError::SizeExceedsCap { n, cap });
    }
    let mut found = BTreeMap::new();
    for images in (0..n).permutations(n) {
        let flags = flags_unchecked(p, &images);
        if !flags.is_empty() {
            found.insert(images, flags);
        }
    }
    Ok(QGroup::from_map(p, found))
}

struct Search<'a> {
    p: &'a QuandlePresentation,
    mode: Mode,
    /// `(x, y) -> z` for every relation `x ⊳ y = z`.
    forward: HashMap<(usize, usize), usize>,
    /// `(z, y) -> x` for every relation `x ⊳ y = z`.
    backward: HashMap<(usize, usize), usize>,
}

#[derive(Clone)]
struct Partial {
    image: Vec<Option<usize>>,
    used: Vec<bool>,
}

impl Partial {
    fn assign(&mut self, g: usize, t: usize) -> bool {
        match self.image[g] {
            Some(cur) => cur == t,
            None if self.used[t] => false,
            None => {
                self.image[g] = Some(t);
                self.used[t] = true;
                true
            }
        }
    }
}

impl<'a> Search<'a> {
    fn new(p: &'a QuandlePresentation, mode: Mode) -> Self {
        let mut forward = HashMap::new();
        let mut backward = HashMap::new();
        for r in p.relations() {
            forward.insert((r.base, r.acting), r.result);
            backward.insert((r.result, r.acting), r.base);
        }
        Search { p, mode, forward, backward }
    }

    /// Applies forced images until a fixed point. Returns false on conflict.
    fn propagate(&self, state: &mut Partial) -> bool {
        loop {
            let mut changed = false;
            for r in self.p.relations() {
                let [x, y, z] = self.mode.pattern(r);
                match (state.image[x], state.image[y], state.image[z]) {
                    (Some(sx), Some(sy), Some(sz)) => {
                        if self.forward.get(&(sx, sy)) != Some(&sz) {
                            return false;
                        }
                    }
                    (Some(sx), Some(sy), None) => match self.forward.get(&(sx, sy)) {
                        Some(&t) if state.assign(z, t) => changed = true,
                        _ => return false,
                    },
                    (None, Some(sy), Some(sz)) => match self.backward.get(&(sz, sy)) {
                        Some(&t) if state.assign(x, t) => changed = true,
                        _ => return false,
                    },
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn run(&self, mut state: Partial, out: &mut Vec<Vec<usize>>) {
        if !self.propagate(&mut state) {
            return;
        }
        let Some(g) = state.image.iter().position(Option::is_none) else {
            out.push(state.image.iter().map(|x| x.expect("complete")).collect());
            return;
        };
        for t in 0..state.used.len() {
            if state.used[t] {
                continue;
            }
            let mut next = state.clone();
            next.assign(g, t);
            self.run(next, out);
        }
    }
}

/// Seeds the image of generator 0 and the mode (`2n` seeds), propagates
/// forced images through the relation triples, and backtracks on any
/// generator left undetermined.
pub fn solve_qgroup(p: &QuandlePresentation) -> Result<QGroup, SymmetryError> {
    let n = p.n_generators();
    if n == 0 {
        return Ok(QGroup::from_map(p, BTreeMap::new()));
    }
    let seeds: Vec<(Mode, usize)> = [Mode::Auto, Mode::Anti]
        .into_iter()
        .flat_map(|m| (0..n).map(move |t| (m, t)))
        .collect();
    let branches: Vec<(Mode, Vec<Vec<usize>>)> = seeds
        .into_par_iter()
        .map(|(mode, t)| {
            let search = Search::new(p, mode);
            let mut state = Partial { image: vec![None; n], used: vec![false; n] };
            state.assign(0, t);
            let mut out = Vec::new();
            search.run(state, &mut out);
            (mode, out)
        })
        .collect();

    let mut found: BTreeMap<Vec<usize>, Flags> = BTreeMap::new();
    for (mode, perms) in branches {
        for images in perms {
            let flags = flags_unchecked(p, &images);
            let expected = mode.flags();
            if !(flags.auto && expected.auto || flags.anti && expected.anti) {
                return Err(SymmetryError::Inconsistent(format!(
                    "{images:?} passed propagation as {expected} but checks as {flags}"
                )));
            }
            let entry = found.entry(images).or_default();
            *entry = entry.union(expected);
        }
    }
    // Both searches are complete, so merged flags equal the direct checks.
    for (images, flags) in &found {
        if *flags != flags_unchecked(p, images) {
            return Err(SymmetryError::Inconsistent(format!("flags of {images:?} disagree")));
        }
    }
    Ok(QGroup::from_map(p, found))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub order: usize,
    pub label: GroupLabel,
    pub auto_only: usize,
    pub anti_only: usize,
    pub both: usize,
    /// Order of each element, in canonical element order.
    pub element_orders: Vec<usize>,
    pub conclusions: Vec<String>,
}

pub const ANTI_CONCLUSION: &str =
    "an antiautomorphism exists, so the knot satisfies K=rK or K=mK";

pub fn symmetry_conclusion(order: usize) -> String {
    format!("the knot admits a symmetry of order {order}")
}

pub fn symmetry_report(g: &QGroup) -> Result<Report, SymmetryError> {
    let label = g.label()?;
    let count = |f: Flags| g.elements.iter().filter(|e| e.flags == f).count();
    let element_orders: Vec<usize> = g.elements.iter().map(|e| e.images.order()).collect();

    let mut conclusions = Vec::new();
    if g.elements.iter().any(|e| e.flags.anti) {
        conclusions.push(ANTI_CONCLUSION.to_string());
    }
    let distinct: BTreeSet<usize> = element_orders.iter().copied().filter(|&m| m > 1).collect();
    conclusions.extend(distinct.into_iter().map(symmetry_conclusion));

    Ok(Report {
        order: g.order(),
        label,
        auto_only: count(Flags::AUTO),
        anti_only: count(Flags::ANTI),
        both: count(Flags::BOTH),
        element_orders,
        conclusions,
    })
}
