//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use itertools::Itertools;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use serde_json::Value;

use knotsym::catalog::{Catalog, CatalogEntry};
use knotsym::cli::{run, Command, Format, Method, RunConfig};
use knotsym::finiteq::{check_axioms, conjugation_quandle, count_colorings, dihedral_quandle, FiniteQuandle};
use knotsym::pdcode::{build_diagram, parse_pd, ParseError, PdCode, Violation};
use knotsym::permgroup::{closure, GroupKind, Perm};
use knotsym::presentation::{QuandlePresentation, Relation};
use knotsym::symmetry::{brute_force_qgroup, solve_qgroup, Flags, QGroup};

const TABLE: [(&str, &str); 12] = [
    ("3_1", "D_3"),
    ("4_1", "Z_4"),
    ("5_1", "D_5"),
    ("5_2", "Z_2"),
    ("6_1", "Z_2"),
    ("6_2", "trivial"),
    ("6_3", "trivial"),
    ("7_1", "D_7"),
    ("7_2", "Z_2"),
    ("7_3", "Z_2"),
    ("7_4", "Z_2"),
    ("9_40", "Z_6"),
];

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: Vec<String>, ok_detail: impl Into<String>) -> Outcome {
    if failures.is_empty() {
        Outcome { pass: true, detail: ok_detail.into() }
    } else {
        Outcome { pass: false, detail: failures.join("; ") }
    }
}

fn presentation(entry: &CatalogEntry) -> QuandlePresentation {
    let d = build_diagram(&entry.pd_code()).expect("bundled code builds");
    QuandlePresentation::from_diagram(&d)
}

fn catalog_presentations() -> Vec<(String, QuandlePresentation)> {
    Catalog::bundled().entries().iter().map(|e| (e.name.clone(), presentation(e))).collect()
}

fn lookup(name: &str) -> QuandlePresentation {
    presentation(Catalog::bundled().lookup(name).expect("catalog entry"))
}

fn flag_set(g: &QGroup) -> BTreeSet<(Vec<usize>, (bool, bool))> {
    g.elements()
        .iter()
        .map(|e| (e.images.images().to_vec(), (e.flags.auto, e.flags.anti)))
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (name, expected) in TABLE {
        let config = RunConfig {
            command: Command::Qgroup { input: name.into(), method: Method::Both, max_brute: 9 },
            format: Format::Json,
            catalog_file: None,
        };
        let out = run(&config);
        if out.status != 0 {
            failures.push(format!("{name}: exit {} ({})", out.status, out.stderr.trim()));
            continue;
        }
        let v: Value = serde_json::from_str(&out.stdout).expect("json report");
        let label = v["qgroup"]["label"].as_str().unwrap_or_default().to_string();
        if label != expected {
            failures.push(format!(
                "{name}: got {label} (order {}), expected {expected}",
                v["qgroup"]["order"]
            ));
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 5.0 {
        failures.push(format!("runtime {:.2}s exceeds 5s", elapsed.as_secs_f64()));
    }
    outcome(failures, format!("12 labels reproduced in {:.2}s", elapsed.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let mut failures = Vec::new();
    for (name, order) in [("5_1", 5), ("9_40", 3), ("3_1", 3), ("4_1", 2)] {
        let g = solve_qgroup(&lookup(name)).expect("solver");
        let found = g.elements().iter().any(|e| e.images.order() == order && e.flags.auto);
        if !found {
            failures.push(format!("{name}: no automorphism of order {order}"));
        }
    }
    outcome(failures, "orders 5, 3, 3, 2 found with flag auto")
}

fn criterion_3() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (name, p) in catalog_presentations() {
        if p.n_generators() > 9 {
            continue;
        }
        let brute = brute_force_qgroup(&p, 9).expect("brute force within cap");
        let solve = solve_qgroup(&p).expect("solver");
        if flag_set(&brute) != flag_set(&solve) {
            failures.push(format!("{name}: brute {} vs solve {}", brute.order(), solve.order()));
        }
        checked += 1;
    }
    outcome(failures, format!("{checked} presentations agree"))
}

fn criterion_4() -> Outcome {
    let mut failures = Vec::new();
    for (name, p) in catalog_presentations() {
        let g = solve_qgroup(&p).expect("solver");
        let n = p.n_generators();
        if g.order() > 2 * n {
            failures.push(format!("{name}: order {} > {}", g.order(), 2 * n));
        }
        if ["3_1", "5_1", "7_1"].contains(&name.as_str()) && g.order() != 2 * n {
            failures.push(format!("{name}: order {} does not saturate {}", g.order(), 2 * n));
        }
    }
    outcome(failures, "bound holds; 3_1, 5_1, 7_1 saturate it")
}

fn criterion_5() -> Outcome {
    let mut failures = Vec::new();
    for (name, p) in catalog_presentations() {
        let g = solve_qgroup(&p).expect("solver");
        let gd = solve_qgroup(&p.dual()).expect("solver");
        if g.perms() != gd.perms() {
            failures.push(format!("{name}: permutation sets differ"));
            continue;
        }
        let mismatched = g
            .elements()
            .iter()
            .filter(|e| gd.flags_of(&e.images) != Some(e.flags.swapped()))
            .count();
        if mismatched > 0 {
            failures.push(format!("{name}: {mismatched}/{} elements without swapped flags", g.order()));
        }
    }
    outcome(failures, "dual flags swapped elementwise")
}

/// auto*auto and anti*anti are automorphisms; mixed products are antiautomorphisms.
fn product_flags(a: Flags, b: Flags) -> Flags {
    Flags {
        auto: (a.auto && b.auto) || (a.anti && b.anti),
        anti: (a.auto && b.anti) || (a.anti && b.auto),
    }
}

fn criterion_6() -> Outcome {
    let mut failures = Vec::new();
    for (name, p) in catalog_presentations() {
        let g = solve_qgroup(&p).expect("solver");
        let n = p.n_generators();
        if g.flags_of(&Perm::identity(n)).is_none_or(|f| !f.auto) {
            failures.push(format!("{name}: identity missing or not auto"));
        }
        for a in g.elements() {
            match g.flags_of(&a.images.inverse()) {
                Some(f) if f == a.flags => {}
                _ => failures.push(format!("{name}: inverse of {} missing or flags differ", a.images)),
            }
            for b in g.elements() {
                let c = a.images.compose(&b.images).expect("same degree");
                match g.flags_of(&c) {
                    None => failures.push(format!("{name}: not closed at {} * {}", a.images, b.images)),
                    Some(fc) => {
                        let need = product_flags(a.flags, b.flags);
                        if (need.auto && !fc.auto) || (need.anti && !fc.anti) {
                            failures.push(format!("{name}: flags of {c} are {fc}, need {need}"));
                        }
                    }
                }
            }
        }
    }
    outcome(failures, "closure and flag products verified")
}

/// Tries every assignment of quandle elements to generators.
fn enumerate_colorings(p: &QuandlePresentation, q: &FiniteQuandle) -> u64 {
    (0..p.n_generators())
        .map(|_| 0..q.size())
        .multi_cartesian_product()
        .filter(|c| p.relations().iter().all(|r| q.op_tr(c[r.base], c[r.acting]) == c[r.result]))
        .count() as u64
}

fn criterion_7() -> Outcome {
    let mut failures = Vec::new();
    let trefoil = lookup("3_1");
    let figure_eight = lookup("4_1");
    for (label, p, size, expected) in
        [("3_1/R_3", &trefoil, 3, 9), ("4_1/R_3", &figure_eight, 3, 3), ("4_1/R_5", &figure_eight, 5, 25)]
    {
        let q = dihedral_quandle(size).unwrap();
        let fast = count_colorings(p, &q);
        let oracle = enumerate_colorings(p, &q);
        if fast != expected || oracle != expected {
            failures.push(format!("{label}: count {fast}, oracle {oracle}, expected {expected}"));
        }
    }
    let kinked = lookup("trefoil_kinked");
    for size in 1..=12 {
        let q = dihedral_quandle(size).unwrap();
        let (a, b) = (count_colorings(&trefoil, &q), count_colorings(&kinked, &q));
        if a != b {
            failures.push(format!("R_{size}: minimal {a} vs kinked {b}"));
        }
    }
    outcome(failures, "9, 3, 25 confirmed; kinked trefoil agrees on R_1..R_12")
}

fn table_of(elements: &[Perm]) -> Vec<Vec<usize>> {
    elements
        .iter()
        .map(|a| {
            elements
                .iter()
                .map(|b| {
                    let c = a.compose(b).unwrap();
                    elements.iter().position(|e| *e == c).unwrap()
                })
                .collect()
        })
        .collect()
}

fn perm_group(degree: usize, gens: &[&[&[usize]]]) -> Vec<Vec<usize>> {
    let gens: Vec<Perm> = gens.iter().map(|c| Perm::from_cycles(degree, c).unwrap()).collect();
    let elements: Vec<Perm> = closure(degree, &gens, 64).unwrap().into_iter().collect();
    table_of(&elements)
}

/// Quaternion group on (sign, unit) pairs with units 1, i, j, k.
fn quaternion_table() -> Vec<Vec<usize>> {
    const UNIT: [[(bool, usize); 4]; 4] = [
        [(false, 0), (false, 1), (false, 2), (false, 3)],
        [(false, 1), (true, 0), (false, 3), (true, 2)],
        [(false, 2), (true, 3), (true, 0), (false, 1)],
        [(false, 3), (false, 2), (true, 1), (true, 0)],
    ];
    let index = |neg: bool, u: usize| u + if neg { 4 } else { 0 };
    (0..8)
        .map(|a| {
            (0..8)
                .map(|b| {
                    let (na, ua) = (a >= 4, a % 4);
                    let (nb, ub) = (b >= 4, b % 4);
                    let (nu, u) = UNIT[ua][ub];
                    index(na ^ nb ^ nu, u)
                })
                .collect()
        })
        .collect()
}

fn small_groups() -> Vec<(String, Vec<Vec<usize>>)> {
    let mut groups: Vec<(String, Vec<Vec<usize>>)> = (1..=8)
        .map(|n| (format!("Z_{n}"), (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()))
        .collect();
    groups.push(("Z_2xZ_2".into(), perm_group(4, &[&[&[0, 1]], &[&[2, 3]]])));
    groups.push(("Z_4xZ_2".into(), perm_group(6, &[&[&[0, 1, 2, 3]], &[&[4, 5]]])));
    groups.push(("Z_2^3".into(), perm_group(6, &[&[&[0, 1]], &[&[2, 3]], &[&[4, 5]]])));
    groups.push(("S_3".into(), perm_group(3, &[&[&[0, 1, 2]], &[&[0, 1]]])));
    groups.push(("D_4".into(), perm_group(4, &[&[&[0, 1, 2, 3]], &[&[1, 3]]])));
    groups.push(("Q_8".into(), quaternion_table()));
    groups
}

/// Direct restatement of the three axioms, used to judge random tables.
fn naive_is_quandle(tr: &[Vec<usize>], tl: &[Vec<usize>]) -> bool {
    let n = tr.len();
    let idem = (0..n).all(|x| tr[x][x] == x && tl[x][x] == x);
    let inv = (0..n).all(|x| (0..n).all(|y| tl[tr[x][y]][y] == x && tr[tl[x][y]][y] == x));
    let dist = (0..n)
        .all(|x| (0..n).all(|y| (0..n).all(|z| tr[tr[x][y]][z] == tr[tr[x][z]][tr[y][z]])));
    idem && inv && dist
}

fn criterion_8() -> Outcome {
    let mut failures = Vec::new();
    for p in 1..=12 {
        let q = dihedral_quandle(p).unwrap();
        match check_axioms(q.tr_table(), q.tl_table()) {
            Ok(r) if r.is_ok() => {}
            other => failures.push(format!("R_{p}: {other:?}")),
        }
    }
    let groups = small_groups();
    for (name, mult) in &groups {
        match conjugation_quandle(mult) {
            Ok(q) => match check_axioms(q.tr_table(), q.tl_table()) {
                Ok(r) if r.is_ok() => {}
                other => failures.push(format!("Conj({name}): {other:?}")),
            },
            Err(e) => failures.push(format!("Conj({name}): {e}")),
        }
    }

    let mut runner = TestRunner::new(Config { cases: 400, failure_persistence: None, ..Config::default() });
    let random_tables = (1usize..=4).prop_flat_map(|n| {
        (
            proptest::collection::vec(proptest::collection::vec(0..n, n), n),
            proptest::collection::vec(proptest::collection::vec(0..n, n), n),
        )
    });
    if let Err(e) = runner.run(&random_tables, |(tr, tl)| {
        let report = check_axioms(&tr, &tl).expect("square tables");
        prop_assert_eq!(report.is_ok(), naive_is_quandle(&tr, &tl));
        Ok(())
    }) {
        failures.push(format!("random tables: {e}"));
    }
    let perturbed = (2usize..=9).prop_flat_map(|p| (Just(p), 0..p, 0..p, 1..p));
    if let Err(e) = runner.run(&perturbed, |(p, x, y, shift)| {
        let q = dihedral_quandle(p).unwrap();
        let mut tr = q.tr_table().to_vec();
        tr[x][y] = (tr[x][y] + shift) % p;
        let report = check_axioms(&tr, q.tl_table()).expect("square tables");
        prop_assert!(!report.is_ok());
        Ok(())
    }) {
        failures.push(format!("perturbed dihedral tables: {e}"));
    }
    outcome(
        failures,
        format!("R_1..R_12 and {} conjugation quandles pass; random tables judged correctly", groups.len()),
    )
}

fn criterion_9() -> Outcome {
    let mut failures = Vec::new();
    let entry = Catalog::bundled().lookup("unknot_kink").unwrap().clone();
    let d = build_diagram(&entry.pd_code()).unwrap();
    if d.n_arcs != 1 {
        failures.push(format!("kinked unknot has {} arcs", d.n_arcs));
    }
    let p = QuandlePresentation::from_diagram(&d);
    if p.relations() != [Relation::new(0, 0, 0)] {
        failures.push(format!("kinked unknot relations {:?}", p.relations()));
    }
    let g = solve_qgroup(&p).unwrap();
    let label = g.label().unwrap();
    if label.kind != GroupKind::Trivial || g.flags_of(&Perm::identity(1)) != Some(Flags::BOTH) {
        failures.push(format!("kinked unknot Q-group {label} with {:?}", g.elements()));
    }
    for text in ["", "   ", "PD[]"] {
        if !matches!(parse_pd(text), Err(ParseError::EmptyInput)) {
            failures.push(format!("{text:?} not rejected as empty"));
        }
    }
    let two_component = PdCode::new(vec![[1, 3, 2, 4], [3, 1, 4, 2]]);
    match build_diagram(&two_component) {
        Err(e) if e.0.violations.iter().any(|v| matches!(v, Violation::MultiComponent { .. })) => {}
        other => failures.push(format!("two-component code gave {other:?}")),
    }
    outcome(failures, "kinked unknot, empty input and two-component code handled")
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("table reproduction", criterion_1),
        ("fixture automorphisms", criterion_2),
        ("oracle equivalence", criterion_3),
        ("order bound 2n", criterion_4),
        ("duality swaps flags", criterion_5),
        ("flag algebra", criterion_6),
        ("coloring cross-checks", criterion_7),
        ("axiom suites", criterion_8),
        ("degenerate inputs", criterion_9),
    ];
    let mut failed = 0;
    for (idx, (name, check)) in criteria.iter().enumerate() {
        let result = check();
        let tag = if result.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {} {name}: {}", idx + 1, result.detail);
        if !result.pass {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
