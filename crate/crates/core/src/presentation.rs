//! Quandle presentations as finite sets of relation triples, their duals,
//! and the associated-group (Wirtinger) export.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pdcode::{crossing_relations, Diagram};

/// The relation `base ⊳ acting = result` between generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[usize; 3]", into = "[usize; 3]")]
pub struct Relation {
    pub base: usize,
    pub acting: usize,
    pub result: usize,
}

impl Relation {
    pub const fn new(base: usize, acting: usize, result: usize) -> Self {
        Relation { base, acting, result }
    }

    /// `result ⊲ acting = base`, read as a ⊳-relation of the dual quandle.
    pub fn reversed(self) -> Self {
        Relation::new(self.result, self.acting, self.base)
    }

    pub fn map(self, f: impl Fn(usize) -> usize) -> Self {
        Relation::new(f(self.base), f(self.acting), f(self.result))
    }
}

impl From<[usize; 3]> for Relation {
    fn from([i, j, k]: [usize; 3]) -> Self {
        Relation::new(i, j, k)
    }
}

impl From<Relation> for [usize; 3] {
    fn from(r: Relation) -> Self {
        [r.base, r.acting, r.result]
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}>{}={}", self.base, self.acting, self.result)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("relation {relation} references a generator outside 0..{n}")]
    IndexOutOfRange { relation: Relation, n: usize },
    #[error("relations {first} and {second} are not functional")]
    FunctionalityViolation { first: Relation, second: Relation },
}

/// Generators `0..n` and a functional set of relations, stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct QuandlePresentation {
    n_generators: usize,
    relations: Vec<Relation>,
}

impl QuandlePresentation {
    pub fn from_relations(
        n: usize,
        relations: impl IntoIterator<Item = Relation>,
    ) -> Result<Self, PresentationError> {
        let mut relations: Vec<Relation> = relations.into_iter().collect();
        relations.sort_unstable();
        relations.dedup();
        let mut forward: HashMap<(usize, usize), Relation> = HashMap::new();
        let mut backward: HashMap<(usize, usize), Relation> = HashMap::new();
        for &r in &relations {
            if r.base >= n || r.acting >= n || r.result >= n {
                return Err(PresentationError::IndexOutOfRange { relation: r, n });
            }
            for (index, key) in [(&mut forward, (r.base, r.acting)), (&mut backward, (r.result, r.acting))] {
                if let Some(&prev) = index.get(&key) {
                    return Err(PresentationError::FunctionalityViolation { first: prev, second: r });
                }
                index.insert(key, r);
            }
        }
        Ok(QuandlePresentation { n_generators: n, relations })
    }

    pub fn from_diagram(d: &Diagram) -> Self {
        Self::from_relations(d.n_arcs, crossing_relations(d))
            .expect("diagram relations are in range and functional")
    }

    pub fn n_generators(&self) -> usize {
        self.n_generators
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn contains(&self, r: &Relation) -> bool {
        self.relations.binary_search(r).is_ok()
    }

    pub fn dual(&self) -> Self {
        let mut relations: Vec<Relation> = self.relations.iter().map(|r| r.reversed()).collect();
        relations.sort_unstable();
        QuandlePresentation { n_generators: self.n_generators, relations }
    }

    /// Renames generator `g` to `rho[g]`.
    pub fn relabel(&self, rho: &[usize]) -> Result<Self, PresentationError> {
        Self::from_relations(self.n_generators, self.relations.iter().map(|r| r.map(|g| rho[g])))
    }

    /// Whether the graph with an edge `{base, result}` per relation is
    /// connected. Holds for every knot-diagram presentation.
    pub fn is_connected(&self) -> bool {
        let n = self.n_generators;
        if n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); n];
        for r in &self.relations {
            adj[r.base].push(r.result);
            adj[r.result].push(r.base);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(g) = queue.pop_front() {
            for &h in &adj[g] {
                if !seen[h] {
                    seen[h] = true;
                    queue.push_back(h);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn wirtinger_group(&self) -> GroupPresentation {
        wirtinger_group(self)
    }
}

impl fmt::Display for QuandlePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relations.iter().map(|r| r.to_string()).collect();
        write!(f, "Q = <{} | {}>", self.n_generators, rels.join("; "))
    }
}

pub fn from_relations(
    n: usize,
    relations: impl IntoIterator<Item = Relation>,
) -> Result<QuandlePresentation, PresentationError> {
    QuandlePresentation::from_relations(n, relations)
}

pub fn dual(p: &QuandlePresentation) -> QuandlePresentation {
    p.dual()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    fn pos(generator: usize) -> Self {
        Letter { generator, inverse: false }
    }

    fn neg(generator: usize) -> Self {
        Letter { generator, inverse: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupPresentation {
    pub n_generators: usize,
    pub relators: Vec<Vec<Letter>>,
}

/// One relator `x_i x_j x_k⁻¹ x_j⁻¹` per relation `i ⊳ j = k`, i.e.
/// `x_k = x_j⁻¹ x_i x_j`.
pub fn wirtinger_group(p: &QuandlePresentation) -> GroupPresentation {
    let relators = p
        .relations()
        .iter()
        .map(|r| {
            vec![
                Letter::pos(r.base),
                Letter::pos(r.acting),
                Letter::neg(r.result),
                Letter::neg(r.acting),
            ]
        })
        .collect();
    GroupPresentation { n_generators: p.n_generators(), relators }
}

/// Invariant factors of a finitely generated abelian group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Abelianization {
    pub free_rank: usize,
    /// Torsion coefficients greater than 1, each dividing the next.
    pub torsion: Vec<u64>,
}

impl GroupPresentation {
    /// Exponent-sum matrix: one row per relator, one column per generator.
    pub fn relation_matrix(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|word| {
                let mut row = vec![0i64; self.n_generators];
                for l in word {
                    row[l.generator] += if l.inverse { -1 } else { 1 };
                }
                row
            })
            .collect()
    }

    pub fn abelianization(&self) -> Abelianization {
        let diag = smith_diagonal(self.relation_matrix(), self.n_generators);
        let rank = diag.len();
        Abelianization {
            free_rank: self.n_generators - rank,
            torsion: diag.into_iter().filter(|&d| d > 1).collect(),
        }
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = (0..self.n_generators).map(|g| format!("x{g}")).collect();
        let rels: Vec<String> = self
            .relators
            .iter()
            .map(|w| {
                w.iter()
                    .map(|l| {
                        if l.inverse {
                            format!("x{}^-1", l.generator)
                        } else {
                            format!("x{}", l.generator)
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("*")
            })
            .collect();
        write!(f, "<{} | {}>", gens.join(","), rels.join(", "))
    }
}

/// Nonzero diagonal entries of the Smith normal form of an integer matrix
/// with `cols` columns.
fn smith_diagonal(mut m: Vec<Vec<i64>>, cols: usize) -> Vec<u64> {
    let rows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: smallest nonzero absolute value in the remaining block.
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| m[i][j] != 0)
            .min_by_key(|&(i, j)| m[i][j].abs());
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                let q = m[i][t] / m[t][t];
                if q != 0 {
                    for j in t..cols {
                        m[i][j] -= q * m[t][j];
                    }
                }
                if m[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = m[t][j] / m[t][t];
                if q != 0 {
                    for row in m.iter_mut() {
                        row[j] -= q * row[t];
                    }
                }
                if m[t][j] != 0 {
                    clean = false;
                }
            }
            if clean {
                // Enforce divisibility of the remaining block by the pivot.
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| m[i][j] % m[t][t] != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..cols {
                            m[t][j] += m[i][j];
                        }
                        continue;
                    }
                }
            }
            // Move the smallest remaining entry of row/column t to the pivot.
            let best = (t..rows)
                .map(|i| (i, t))
                .chain((t..cols).map(|j| (t, j)))
                .filter(|&(i, j)| m[i][j] != 0)
                .min_by_key(|&(i, j)| m[i][j].abs())
                .expect("pivot row/column is nonzero");
            if best.0 != t {
                m.swap(t, best.0);
            } else if best.1 != t {
                for row in m.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        diag.push(m[t][t].unsigned_abs());
        t += 1;
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rels(v: &[[usize; 3]]) -> Vec<Relation> {
        v.iter().copied().map(Relation::from).collect()
    }

    fn trefoil() -> QuandlePresentation {
        from_relations(3, rels(&[[0, 1, 2], [1, 2, 0], [2, 0, 1]])).unwrap()
    }

    fn figure_eight() -> QuandlePresentation {
        // c>a=b, a>d=b, a>c=d, c>b=d with a..d = 0..3
        from_relations(4, rels(&[[2, 0, 1], [0, 3, 1], [0, 2, 3], [2, 1, 3]])).unwrap()
    }

    #[test]
    fn accepts_trefoil() {
        assert_eq!(trefoil().relations().len(), 3);
        assert!(trefoil().is_connected());
    }

    #[test]
    fn accepts_free_generator() {
        let p = from_relations(1, []).unwrap();
        assert_eq!(p.n_generators(), 1);
        assert!(p.relations().is_empty());
    }

    #[test]
    fn rejects_two_images() {
        let err = from_relations(3, rels(&[[0, 1, 2], [0, 1, 1]])).unwrap_err();
        assert!(matches!(err, PresentationError::FunctionalityViolation { .. }));
    }

    #[test]
    fn rejects_two_preimages() {
        let err = from_relations(3, rels(&[[0, 1, 2], [1, 1, 2]])).unwrap_err();
        assert!(matches!(err, PresentationError::FunctionalityViolation { .. }));
    }

    #[test]
    fn rejects_out_of_range() {
        let err = from_relations(2, rels(&[[0, 1, 2]])).unwrap_err();
        assert!(matches!(err, PresentationError::IndexOutOfRange { n: 2, .. }));
    }

    #[test]
    fn dual_of_trefoil() {
        let d = trefoil().dual();
        let expected = from_relations(3, rels(&[[2, 1, 0], [0, 2, 1], [1, 0, 2]])).unwrap();
        assert_eq!(d, expected);
    }

    #[test]
    fn dual_is_involution() {
        assert_eq!(figure_eight().dual().dual(), figure_eight());
        let single = from_relations(1, rels(&[[0, 0, 0]])).unwrap();
        assert_eq!(single.dual(), single);
    }

    #[test]
    fn text_exports() {
        assert_eq!(trefoil().to_string(), "Q = <3 | 0>1=2; 1>2=0; 2>0=1>");
        assert_eq!(
            trefoil().wirtinger_group().to_string(),
            "<x0,x1,x2 | x0*x1*x2^-1*x1^-1, x1*x2*x0^-1*x2^-1, x2*x0*x1^-1*x0^-1>"
        );
    }

    #[test]
    fn trefoil_wirtinger_matches_conjugation_form() {
        // (∂b)^-1 (∂a) (∂b) = ∂c: the relator for a>b=c must be a b c^-1 b^-1.
        let g = trefoil().wirtinger_group();
        assert_eq!(
            g.relators[0],
            vec![Letter::pos(0), Letter::pos(1), Letter::neg(2), Letter::neg(1)]
        );
    }

    #[test]
    fn unknot_group_is_infinite_cyclic() {
        let p = from_relations(1, rels(&[[0, 0, 0]])).unwrap();
        let g = p.wirtinger_group();
        assert_eq!(g.relation_matrix(), vec![vec![0]]);
        assert_eq!(g.abelianization(), Abelianization { free_rank: 1, torsion: vec![] });
    }

    #[test]
    fn knot_abelianizations_are_infinite_cyclic() {
        for p in [trefoil(), figure_eight()] {
            let expected = Abelianization { free_rank: 1, torsion: vec![] };
            assert_eq!(p.wirtinger_group().abelianization(), expected);
            assert_eq!(p.dual().wirtinger_group().abelianization(), expected);
        }
    }

    #[test]
    fn smith_form_torsion() {
        // Z^2 / <(2,0),(0,4)> plus a free generator.
        let diag = smith_diagonal(vec![vec![2, 0, 0], vec![0, 4, 0]], 3);
        assert_eq!(diag, vec![2, 4]);
        let diag = smith_diagonal(vec![vec![2, 0], vec![0, 3]], 2);
        assert_eq!(diag, vec![1, 6]);
    }

    #[test]
    fn relation_serializes_as_triple() {
        let json = serde_json::to_string(&Relation::new(0, 2, 1)).unwrap();
        assert_eq!(json, "[0,2,1]");
    }
}
