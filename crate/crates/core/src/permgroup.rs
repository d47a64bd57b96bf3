//! Small permutation groups: composition, closure and isomorphism-type
//! identification for the groups that arise as Q-groups of knot diagrams.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("image sequence {0:?} is not a bijection")]
    NotBijection(Vec<usize>),
    #[error("permutation lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("closure exceeded the cap of {0} elements")]
    CapExceeded(usize),
    #[error("element set is not a group: {0}")]
    NotAGroup(String),
}

/// A permutation of `0..n`, stored as its image sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Perm(Vec<usize>);

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_string())
    }
}

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Self, PermError> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || seen[x] {
                return Err(PermError::NotBijection(images));
            }
            seen[x] = true;
        }
        Ok(Perm(images))
    }

    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// Builds a permutation of `0..n` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..n).collect();
        for cycle in cycles {
            for (idx, &x) in cycle.iter().enumerate() {
                if x >= n {
                    return Err(PermError::NotBijection(images));
                }
                images[x] = cycle[(idx + 1) % cycle.len()];
            }
        }
        Perm::new(images)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Perm(inv)
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Perm) -> Result<Perm, PermError> {
        if self.len() != other.len() {
            return Err(PermError::LengthMismatch(self.len(), other.len()));
        }
        Ok(self.compose_unchecked(other))
    }

    fn compose_unchecked(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn pow(&self, mut e: usize) -> Perm {
        let mut base = self.clone();
        let mut acc = Perm::identity(self.len());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose_unchecked(&base);
            }
            base = base.compose_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    /// Order as the lcm of the cycle lengths.
    pub fn order(&self) -> usize {
        let mut seen = vec![false; self.len()];
        let mut order = 1;
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x];
                len += 1;
            }
            order = lcm(order, len);
        }
        order
    }

    /// Conjugate `rho ∘ self ∘ rho⁻¹`.
    pub fn conjugate_by(&self, rho: &Perm) -> Result<Perm, PermError> {
        rho.compose(self)?.compose(&rho.inverse())
    }

    /// Cycle notation with disjoint non-trivial cycles, e.g. `(0 2 1)(3 4)`.
    pub fn cycle_string(&self) -> String {
        let mut seen = vec![false; self.len()];
        let mut out = String::new();
        for start in 0..self.len() {
            if seen[start] || self.0[start] == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x.to_string());
                x = self.0[x];
            }
            out.push('(');
            out.push_str(&cycle.join(" "));
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Free-function form of [`Perm::compose`].
pub fn compose(a: &Perm, b: &Perm) -> Result<Perm, PermError> {
    a.compose(b)
}

/// Smallest group of degree `degree` containing `gens`.
///
/// Aborts with [`PermError::CapExceeded`] once more than `cap` elements
/// have been generated.
pub fn closure(degree: usize, gens: &[Perm], cap: usize) -> Result<BTreeSet<Perm>, PermError> {
    for g in gens {
        if g.len() != degree {
            return Err(PermError::LengthMismatch(degree, g.len()));
        }
    }
    let mut group = BTreeSet::new();
    let mut queue = VecDeque::new();
    let id = Perm::identity(degree);
    group.insert(id.clone());
    queue.push_back(id);
    // Right multiplication by generators reaches every product; finite order
    // makes inverses products of generators as well.
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = p.compose_unchecked(g);
            if !group.contains(&q) {
                if group.len() >= cap {
                    return Err(PermError::CapExceeded(cap));
                }
                group.insert(q.clone());
                queue.push_back(q);
            }
        }
    }
    Ok(group)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Trivial,
    Cyclic,
    Dihedral,
    KleinFour,
    Other,
}

/// Isomorphism type of a small group.
///
/// `parameter` is `m` for `Z_m` and `D_m`, and the group order otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupLabel {
    pub kind: GroupKind,
    pub parameter: usize,
    pub abelian: bool,
}

impl GroupLabel {
    pub fn trivial() -> Self {
        GroupLabel { kind: GroupKind::Trivial, parameter: 1, abelian: true }
    }

    pub fn cyclic(m: usize) -> Self {
        GroupLabel { kind: GroupKind::Cyclic, parameter: m, abelian: true }
    }

    pub fn dihedral(m: usize) -> Self {
        GroupLabel { kind: GroupKind::Dihedral, parameter: m, abelian: false }
    }

    pub fn klein_four() -> Self {
        GroupLabel { kind: GroupKind::KleinFour, parameter: 4, abelian: true }
    }

    pub fn other(order: usize, abelian: bool) -> Self {
        GroupLabel { kind: GroupKind::Other, parameter: order, abelian }
    }

    pub fn order(&self) -> usize {
        match self.kind {
            GroupKind::Trivial => 1,
            GroupKind::Cyclic | GroupKind::KleinFour | GroupKind::Other => self.parameter,
            GroupKind::Dihedral => 2 * self.parameter,
        }
    }

    /// Sorted multiset of element orders of the labelled group, when the
    /// label determines it.
    pub fn element_orders(&self) -> Option<Vec<usize>> {
        let mut orders = match self.kind {
            GroupKind::Trivial => vec![1],
            GroupKind::Cyclic => (0..self.parameter)
                .map(|k| self.parameter / gcd(k, self.parameter))
                .collect(),
            GroupKind::KleinFour => vec![1, 2, 2, 2],
            GroupKind::Dihedral => {
                let m = self.parameter;
                let mut v: Vec<usize> = (0..m).map(|k| m / gcd(k, m)).collect();
                v.extend(std::iter::repeat_n(2, m));
                v
            }
            GroupKind::Other => return None,
        };
        orders.sort_unstable();
        Some(orders)
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GroupKind::Trivial => write!(f, "trivial"),
            GroupKind::Cyclic => write!(f, "Z_{}", self.parameter),
            GroupKind::Dihedral => write!(f, "D_{}", self.parameter),
            GroupKind::KleinFour => write!(f, "Z_2xZ_2"),
            GroupKind::Other => {
                write!(f, "other(order={}, abelian={})", self.parameter, self.abelian)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unrecognized group label {0:?}")]
pub struct LabelParseError(pub String);

impl FromStr for GroupLabel {
    type Err = LabelParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || LabelParseError(s.to_string());
        let s = s.trim();
        if s == "trivial" {
            return Ok(GroupLabel::trivial());
        }
        if s == "Z_2xZ_2" {
            return Ok(GroupLabel::klein_four());
        }
        if let Some(m) = s.strip_prefix("Z_") {
            let m: usize = m.parse().map_err(|_| err())?;
            return match m {
                0 => Err(err()),
                1 => Ok(GroupLabel::trivial()),
                m => Ok(GroupLabel::cyclic(m)),
            };
        }
        if let Some(m) = s.strip_prefix("D_") {
            let m: usize = m.parse().map_err(|_| err())?;
            return if m >= 3 { Ok(GroupLabel::dihedral(m)) } else { Err(err()) };
        }
        if let Some(body) = s.strip_prefix("other(").and_then(|b| b.strip_suffix(')')) {
            let mut order = None;
            let mut abelian = None;
            for part in body.split(',') {
                let (key, value) = part.split_once('=').ok_or_else(err)?;
                match key.trim() {
                    "order" => order = value.trim().parse().ok(),
                    "abelian" => abelian = value.trim().parse().ok(),
                    _ => return Err(err()),
                }
            }
            return match (order, abelian) {
                (Some(o), Some(a)) => Ok(GroupLabel::other(o, a)),
                _ => Err(err()),
            };
        }
        Err(err())
    }
}

impl Serialize for GroupLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Checks that `elements` is a permutation group: common degree, contains
/// the identity, closed under composition and inverses.
pub fn verify_group(elements: &BTreeSet<Perm>) -> Result<(), PermError> {
    let first = elements
        .iter()
        .next()
        .ok_or_else(|| PermError::NotAGroup("empty set".into()))?;
    let n = first.len();
    if let Some(p) = elements.iter().find(|p| p.len() != n) {
        return Err(PermError::LengthMismatch(n, p.len()));
    }
    if !elements.contains(&Perm::identity(n)) {
        return Err(PermError::NotAGroup("identity missing".into()));
    }
    for a in elements {
        if !elements.contains(&a.inverse()) {
            return Err(PermError::NotAGroup(format!("inverse of {} missing", a.cycle_string())));
        }
        for b in elements {
            let ab = a.compose_unchecked(b);
            if !elements.contains(&ab) {
                return Err(PermError::NotAGroup(format!(
                    "{} ∘ {} = {} missing",
                    a.cycle_string(),
                    b.cycle_string(),
                    ab.cycle_string()
                )));
            }
        }
    }
    Ok(())
}

/// Identifies the isomorphism type of a small permutation group.
///
/// Precedence: trivial, cyclic, Klein four, dihedral, other.
pub fn identify(elements: &BTreeSet<Perm>) -> Result<GroupLabel, PermError> {
    verify_group(elements)?;
    let order = elements.len();
    if order == 1 {
        return Ok(GroupLabel::trivial());
    }
    if elements.iter().any(|g| g.order() == order) {
        return Ok(GroupLabel::cyclic(order));
    }
    let abelian = elements.iter().all(|a| {
        elements
            .iter()
            .all(|b| a.compose_unchecked(b) == b.compose_unchecked(a))
    });
    if order == 4 && elements.iter().all(|g| g.order() <= 2) {
        return Ok(GroupLabel::klein_four());
    }
    if order % 2 == 0 && order >= 6 {
        let m = order / 2;
        let rotations: Vec<&Perm> = elements.iter().filter(|g| g.order() == m).collect();
        let reflections: Vec<&Perm> = elements.iter().filter(|g| g.order() == 2).collect();
        for r in &rotations {
            let r_inv = r.inverse();
            for s in &reflections {
                if s.compose_unchecked(r).compose_unchecked(s) != r_inv {
                    continue;
                }
                let generated = closure(r.len(), &[(*r).clone(), (*s).clone()], order)
                    .map(|g| g.len())
                    .unwrap_or(0);
                if generated == order {
                    return Ok(GroupLabel::dihedral(m));
                }
            }
        }
    }
    Ok(GroupLabel::other(order, abelian))
}
