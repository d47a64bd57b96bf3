//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when the input fails validation (or the
//! brute-force and propagation routes disagree), 2 on usage errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{Catalog, CatalogError};
use crate::finiteq::{count_colorings, dihedral_quandle, FiniteQuandle};
use crate::pdcode::{build_diagram, parse_pd, validate, Diagram, PdCode, SIGN_CONVENTION};
use crate::presentation::QuandlePresentation;
use crate::symmetry::{brute_force_qgroup, solve_qgroup, symmetry_report, QGroup, DEFAULT_BRUTE_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Method {
    Brute,
    #[default]
    Solve,
    Both,
}

#[derive(Debug, Parser)]
#[command(name = "knotsym", version, about = "Quandle presentations and Q-groups of knot diagrams")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// JSON catalog used instead of the bundled one to resolve names.
    #[arg(long, global = true, value_name = "PATH")]
    pub catalog_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Validate a PD code.
    Check { input: String },
    /// Print the quandle presentation and the Wirtinger presentation.
    Present { input: String },
    /// Compute the Q-group of the diagram.
    Qgroup {
        input: String,
        #[arg(long, value_enum, default_value_t = Method::Solve)]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_BRUTE_CAP, value_name = "N")]
        max_brute: usize,
    },
    /// Count colorings by a finite quandle (`dihedral:p` or `table:<path>`).
    Color {
        input: String,
        #[arg(long, value_name = "SPEC")]
        quandle: String,
    },
    /// List the catalog.
    Catalog,
}

/// Everything one invocation needs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    pub catalog_file: Option<PathBuf>,
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        RunConfig { command: cli.command, format: cli.global.format, catalog_file: cli.global.catalog_file }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { status: 0, stdout, stderr: String::new() }
    }

    fn invalid(stdout: String, stderr: String) -> Self {
        Outcome { status: 1, stdout, stderr }
    }

    fn usage(msg: impl Into<String>) -> Self {
        Outcome { status: 2, stdout: String::new(), stderr: msg.into() }
    }
}

enum Failure {
    Invalid(String),
    Usage(String),
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn load_catalog(config: &RunConfig) -> Result<Catalog, Failure> {
    match &config.catalog_file {
        None => Ok(Catalog::bundled()),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read catalog {}: {e}", path.display())))?;
            Ok(Catalog::from_json(&text)?)
        }
    }
}

/// A catalog name resolves to its entry; anything else is read as a file.
fn resolve_input(config: &RunConfig, input: &str) -> Result<PdCode, Failure> {
    let catalog = load_catalog(config)?;
    if let Ok(entry) = catalog.lookup(input) {
        return Ok(entry.pd_code());
    }
    let path = Path::new(input);
    if !path.is_file() {
        return Err(Failure::Usage(format!("{input:?} is neither a catalog entry nor a readable file")));
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut pd = parse_pd(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    if pd.name.is_none() {
        pd.name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
    }
    Ok(pd)
}

fn diagram_of(pd: &PdCode) -> Result<(Diagram, QuandlePresentation), Failure> {
    let diagram = build_diagram(pd).map_err(|e| Failure::Invalid(e.to_string()))?;
    let presentation = QuandlePresentation::from_diagram(&diagram);
    Ok((diagram, presentation))
}

fn header_json(pd: &PdCode, d: &Diagram, p: &QuandlePresentation) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("name".into(), json!(pd.name));
    m.insert("n_crossings".into(), json!(d.n_crossings));
    m.insert("n_arcs".into(), json!(d.n_arcs));
    m.insert("relations".into(), json!(p.relations()));
    m.insert("convention".into(), json!(SIGN_CONVENTION));
    m
}

fn header_text(pd: &PdCode, d: &Diagram) -> String {
    format!(
        "knot: {}\ncrossings: {}\narcs: {}\nconvention: {}\n",
        pd.name.as_deref().unwrap_or("-"),
        d.n_crossings,
        d.n_arcs,
        SIGN_CONVENTION
    )
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes") + "\n"
}

pub fn run(config: &RunConfig) -> Outcome {
    let result = match &config.command {
        Command::Check { input } => cmd_check(config, input),
        Command::Present { input } => cmd_present(config, input),
        Command::Qgroup { input, method, max_brute } => cmd_qgroup(config, input, *method, *max_brute),
        Command::Color { input, quandle } => cmd_color(config, input, quandle),
        Command::Catalog => cmd_catalog(config),
    };
    match result {
        Ok(outcome) => outcome,
        Err(Failure::Invalid(msg)) => Outcome::invalid(String::new(), msg + "\n"),
        Err(Failure::Usage(msg)) => Outcome::usage(msg + "\n"),
    }
}

fn cmd_check(config: &RunConfig, input: &str) -> Result<Outcome, Failure> {
    let pd = resolve_input(config, input)?;
    let report = validate(&pd);
    let stdout = match config.format {
        Format::Json => to_json(&json!({
            "name": pd.name,
            "n_crossings": pd.n_crossings(),
            "valid": report.is_ok(),
            "violations": report.violations,
        })),
        Format::Text => {
            let mut s = format!("knot: {}\n", pd.name.as_deref().unwrap_or("-"));
            if report.is_ok() {
                s.push_str("ok\n");
            }
            for v in &report.violations {
                let _ = writeln!(s, "{v}");
            }
            s
        }
    };
    if report.is_ok() {
        Ok(Outcome::ok(stdout))
    } else {
        Ok(Outcome::invalid(stdout, "validation failed\n".into()))
    }
}

fn cmd_present(config: &RunConfig, input: &str) -> Result<Outcome, Failure> {
    let pd = resolve_input(config, input)?;
    let (d, p) = diagram_of(&pd)?;
    let group = p.wirtinger_group();
    let stdout = match config.format {
        Format::Json => {
            let mut m = header_json(&pd, &d, &p);
            m.insert("arcs".into(), json!(d.arcs()));
            m.insert("quandle".into(), json!(p.to_string()));
            m.insert("wirtinger".into(), json!(group.to_string()));
            m.insert("abelianization".into(), json!(group.abelianization()));
            to_json(&m)
        }
        Format::Text => {
            let mut s = header_text(&pd, &d);
            for (idx, arc) in d.arcs().iter().enumerate() {
                let _ = writeln!(s, "arc {idx}: edges {arc:?}");
            }
            let _ = writeln!(s, "{p}");
            let _ = writeln!(s, "G = {group}");
            s
        }
    };
    Ok(Outcome::ok(stdout))
}

fn compute_qgroup(p: &QuandlePresentation, method: Method, cap: usize) -> Result<QGroup, Failure> {
    let brute = || brute_force_qgroup(p, cap).map_err(|e| Failure::Usage(e.to_string()));
    let solve = || solve_qgroup(p).map_err(|e| Failure::Invalid(e.to_string()));
    match method {
        Method::Brute => brute(),
        Method::Solve => solve(),
        Method::Both => {
            let b = brute()?;
            let s = solve()?;
            if b != s {
                return Err(Failure::Invalid(format!(
                    "brute force ({} elements) and propagation ({} elements) disagree",
                    b.order(),
                    s.order()
                )));
            }
            Ok(s)
        }
    }
}

fn cmd_qgroup(config: &RunConfig, input: &str, method: Method, cap: usize) -> Result<Outcome, Failure> {
    let pd = resolve_input(config, input)?;
    let (d, p) = diagram_of(&pd)?;
    let g = compute_qgroup(&p, method, cap)?;
    let report = symmetry_report(&g).map_err(|e| Failure::Invalid(e.to_string()))?;
    let stdout = match config.format {
        Format::Json => {
            let mut m = header_json(&pd, &d, &p);
            let elements: Vec<Value> = g
                .elements()
                .iter()
                .map(|e| json!({ "images": e.images, "flags": e.flags }))
                .collect();
            m.insert(
                "qgroup".into(),
                json!({
                    "order": report.order,
                    "label": report.label,
                    "elements": elements,
                    "conclusions": report.conclusions,
                    "auto_only": report.auto_only,
                    "anti_only": report.anti_only,
                    "both": report.both,
                }),
            );
            to_json(&m)
        }
        Format::Text => {
            let mut s = header_text(&pd, &d);
            let _ = writeln!(s, "{p}");
            let _ = writeln!(s, "Q-group order: {}", report.order);
            let _ = writeln!(s, "label: {}", report.label);
            let _ = writeln!(
                s,
                "flags: {} auto, {} anti, {} both",
                report.auto_only, report.anti_only, report.both
            );
            for (e, order) in g.elements().iter().zip(&report.element_orders) {
                let _ = writeln!(
                    s,
                    "  {:?} {} order {} {}",
                    e.images.images(),
                    e.images.cycle_string(),
                    order,
                    e.flags
                );
            }
            for c in &report.conclusions {
                let _ = writeln!(s, "- {c}");
            }
            s
        }
    };
    Ok(Outcome::ok(stdout))
}

/// `dihedral:p` or `table:<path>`.
pub fn parse_quandle_spec(spec: &str) -> Result<FiniteQuandle, String> {
    if let Some(p) = spec.strip_prefix("dihedral:") {
        let p: usize = p.trim().parse().map_err(|e| format!("dihedral order {p:?}: {e}"))?;
        return dihedral_quandle(p).map_err(|e| e.to_string());
    }
    if let Some(path) = spec.strip_prefix("table:") {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
        return FiniteQuandle::parse_table(&text).map_err(|e| format!("{path}: {e}"));
    }
    Err(format!("unrecognized quandle spec {spec:?}; expected dihedral:p or table:<path>"))
}

fn cmd_color(config: &RunConfig, input: &str, spec: &str) -> Result<Outcome, Failure> {
    let q = parse_quandle_spec(spec).map_err(Failure::Usage)?;
    let pd = resolve_input(config, input)?;
    let (d, p) = diagram_of(&pd)?;
    let count = count_colorings(&p, &q);
    let ratio = count as f64 / q.size() as f64;
    let stdout = match config.format {
        Format::Json => {
            let mut m = header_json(&pd, &d, &p);
            m.insert("quandle".into(), json!(spec));
            m.insert("quandle_size".into(), json!(q.size()));
            m.insert("colorings".into(), json!(count));
            m.insert("colorings_per_element".into(), json!(ratio));
            to_json(&m)
        }
        Format::Text => {
            let mut s = header_text(&pd, &d);
            let _ = writeln!(s, "quandle: {spec} (size {})", q.size());
            let _ = writeln!(s, "colorings: {count}");
            let _ = writeln!(s, "colorings / size: {ratio}");
            s
        }
    };
    Ok(Outcome::ok(stdout))
}

fn cmd_catalog(config: &RunConfig) -> Result<Outcome, Failure> {
    let catalog = load_catalog(config)?;
    let stdout = match config.format {
        Format::Json => to_json(
            &catalog
                .entries()
                .iter()
                .map(|e| {
                    json!({
                        "name": e.name,
                        "n_crossings": e.pd.len(),
                        "expected_label": e.expected_label,
                        "pd": PdCode::new(e.pd.clone()).to_string(),
                    })
                })
                .collect::<Vec<_>>(),
        ),
        Format::Text => {
            let mut s = String::new();
            for e in catalog.entries() {
                let label = e.expected_label.map(|l| l.to_string()).unwrap_or_else(|| "-".into());
                let _ = writeln!(s, "{:<16} {:>2} crossings  {:<8} {}", e.name, e.pd.len(), label, PdCode::new(e.pd.clone()));
            }
            s
        }
    };
    Ok(Outcome::ok(stdout))
}

/// Parses process arguments and runs; returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = run(&RunConfig::from(cli));
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    outcome.status
}
