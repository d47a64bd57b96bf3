//! Fundamental quandle presentations of knot diagrams given as PD codes,
//! the Q-group of generator permutations inducing quandle
//! (anti)automorphisms, and finite-quandle coloring counts.

pub mod catalog;
pub mod cli;
pub mod finiteq;
pub mod pdcode;
pub mod permgroup;
pub mod presentation;
pub mod symmetry;

pub use catalog::{Catalog, CatalogEntry};
pub use finiteq::FiniteQuandle;
pub use pdcode::{build_diagram, crossing_relations, parse_pd, validate, Diagram, PdCode};
pub use permgroup::{GroupLabel, Perm};
pub use presentation::{QuandlePresentation, Relation};
pub use symmetry::{brute_force_qgroup, solve_qgroup, symmetry_report, Flags, QGroup};

/// Parses, validates and presents a PD code in one step.
pub fn presentation_of(pd: &PdCode) -> Result<(Diagram, QuandlePresentation), pdcode::InvalidCode> {
    let d = build_diagram(pd)?;
    let p = QuandlePresentation::from_diagram(&d);
    Ok((d, p))
}
