//! Command-line surface of `lesem`: concept lattices, evaluation, validity, frame
//! conditions, countermodel search and the bundled worked examples.
//!
//! Every command renders to a [`Report`]; [`run_from`] turns parsed arguments into
//! standard output, standard error and an exit code, so the binary is a thin shell.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lesem::algebra::Valuation;
use lesem::correspondence::{
    approximation_space_check, countermodel_search, graph_condition, polarity_condition, valid_on_frame,
    weak_persistence_frame, AnyFrame, FrameKind, GraphCondition, PolarityCondition, SearchParams,
};
use lesem::io;
use lesem::syntax::{parse_formula, parse_sequent};
use lesem::{graph, ConceptAlgebra, ConceptLattice, Signature};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

pub const PLAYS_CSV: &str = include_str!("../fixtures/plays.csv");
pub const PLAYS_FRAME: &str = include_str!("../fixtures/plays.frame.json");
pub const PLAYS_VALUATION: &str = include_str!("../fixtures/plays.valuation.json");
pub const WITNESS_FRAME: &str = include_str!("../fixtures/witness.frame.json");
pub const WITNESS_VALUATION: &str = include_str!("../fixtures/witness.valuation.json");
pub const CRAIG_FRAME: &str = include_str!("../fixtures/craig.frame.json");

#[derive(Debug, Parser)]
#[command(name = "lesem", version, about = "Relational semantics for lattice-expansion logics on finite frames")]
pub struct Cli {
    /// Print machine-readable JSON instead of text
    #[arg(long, global = true)]
    pub json: bool,
    /// Exit with status 1 when the verdict is negative
    #[arg(long, global = true)]
    pub assert: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the concepts of a context or frame, optionally writing the Hasse diagram as DOT
    Lattice {
        #[arg(long, conflicts_with = "frame", required_unless_present = "frame")]
        context: Option<PathBuf>,
        #[arg(long)]
        frame: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Evaluate a formula and tabulate satisfaction and refutation per point
    Eval {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long)]
        valuation: Option<PathBuf>,
        #[arg(long)]
        formula: String,
    },
    /// Decide a sequent on a frame by enumerating valuations
    Valid {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long)]
        sequent: String,
        /// refuse sequents with more letters than this
        #[arg(long)]
        vars: Option<usize>,
    },
    /// Check frame conditions
    Check {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        properties: Vec<Property>,
    },
    /// Search random small frames for a countermodel to a sequent
    Countermodel {
        #[arg(long)]
        sequent: String,
        #[arg(long, value_enum, default_value_t = Kind::Polarity)]
        kind: Kind,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        /// keep box-like relations inside I (polarity) or above E (graph)
        #[arg(long)]
        factive: bool,
        /// directory for frame.json and valuation.json
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a bundled worked example
    Examples {
        #[arg(value_enum)]
        name: Example,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Polarity,
    Graph,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Example {
    Plays,
    Witnesses,
    Craig,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Property {
    Factivity,
    Omniscience,
    EReflexivity,
    EOmniscience,
    ETransitivity,
    ApproximationSpace,
    Compatibility,
    Distributivity,
    WeakPersistence,
    Transitive,
    Antisymmetric,
}

impl Property {
    fn name(self) -> String {
        self.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Lib(#[from] lesem::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(e) if e.is_resource_limit() => EXIT_CAP,
            _ => EXIT_USAGE,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Output of one command: text and JSON renderings plus an optional verdict.
#[derive(Debug, Clone)]
pub struct Report {
    pub text: String,
    pub json: Value,
    /// `Some(false)` for INVALID, a failing property, or no countermodel found
    pub verdict: Option<bool>,
    pub warnings: Vec<String>,
}

impl Report {
    fn new(text: String, json: Value, verdict: Option<bool>) -> Self {
        Self { text, json, verdict, warnings: vec![] }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (program name first) and runs the command.
pub fn run_from<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() { (String::new(), rendered) } else { (rendered, String::new()) };
            Outcome { code, stdout, stderr }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match execute(&cli.command) {
        Ok(rep) => {
            let mut stdout = if cli.json {
                serde_json::to_string_pretty(&rep.json).expect("reports serialize")
            } else {
                rep.text
            };
            if !stdout.ends_with('\n') {
                stdout.push('\n');
            }
            let stderr = rep.warnings.iter().map(|w| format!("warning: {w}\n")).collect();
            let code = if cli.assert && rep.verdict == Some(false) { EXIT_FALSE } else { EXIT_OK };
            Outcome { code, stdout, stderr }
        }
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

pub fn execute(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Lattice { context, frame, dot } => {
            let (l, warnings) = match (context, frame) {
                (Some(c), _) => (ConceptLattice::new(&io::load_context(&read(c)?)?)?, vec![]),
                (None, Some(f)) => {
                    let lf = io::load_frame_with(&read(f)?, false)?;
                    (lf.frame.complex_algebra_lattice()?, lf.warnings)
                }
                (None, None) => return Err(CliError::Usage("give --context or --frame".into())),
            };
            let mut rep = cmd_lattice(&l);
            if let Some(path) = dot {
                std::fs::write(path, l.to_dot()).map_err(|source| CliError::Read { path: path.clone(), source })?;
            }
            rep.warnings = warnings;
            Ok(rep)
        }
        Command::Eval { frame, valuation, formula } => {
            let lf = io::load_frame(&read(frame)?)?;
            let val = valuation.as_deref().map(read).transpose()?;
            let mut rep = cmd_eval(&lf.frame, val.as_deref(), formula)?;
            rep.warnings = lf.warnings;
            Ok(rep)
        }
        Command::Valid { frame, sequent, vars } => {
            let lf = io::load_frame(&read(frame)?)?;
            let mut rep = cmd_valid(&lf.frame, sequent, *vars)?;
            rep.warnings = lf.warnings;
            Ok(rep)
        }
        Command::Check { frame, properties } => {
            let lf = io::load_frame_with(&read(frame)?, false)?;
            let mut rep = cmd_check(&lf.frame, properties)?;
            rep.warnings = lf.warnings;
            Ok(rep)
        }
        Command::Countermodel { sequent, kind, max_size, seed, budget, factive, out } => {
            let params = SearchParams {
                kind: match kind {
                    Kind::Polarity => FrameKind::Polarity,
                    Kind::Graph => FrameKind::Graph,
                },
                max_size: *max_size,
                seed: *seed,
                budget: *budget,
                factive: *factive,
            };
            cmd_countermodel(sequent, &params, out.as_deref())
        }
        Command::Examples { name } => cmd_examples(*name),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })
}

trait FrameLattice {
    fn complex_algebra_lattice(&self) -> Result<ConceptLattice>;
}

impl FrameLattice for AnyFrame {
    fn complex_algebra_lattice(&self) -> Result<ConceptLattice> {
        let p = match self {
            AnyFrame::Polarity(f) => f.polarity().clone(),
            AnyFrame::Graph(g) => lesem::representation::graph_polarity(g.graph()),
        };
        Ok(ConceptLattice::new(&p)?)
    }
}

pub fn cmd_lattice(l: &ConceptLattice) -> Report {
    let mut text = format!("{} concepts\n", l.len());
    for c in 0..l.len() {
        let _ = writeln!(text, "{c:>3}  {}", l.pair_label(c));
    }
    let covers = l.hasse_edges();
    let _ = writeln!(text, "{} covers", covers.len());
    for (a, b) in &covers {
        let _ = writeln!(text, "  {a} < {b}");
    }
    let concepts: Vec<Value> = (0..l.len())
        .map(|c| {
            let p = l.polarity();
            json!({
                "index": c,
                "extent": p.object_names(l.extent(c)),
                "intent": p.attribute_names(l.intent(c)),
            })
        })
        .collect();
    let json = json!({
        "concepts": concepts,
        "covers": covers,
        "distributive": l.is_distributive(),
    });
    Report::new(text, json, None)
}

/// Unassigned letters are an error; with no valuation file only constants evaluate.
pub fn cmd_eval(fr: &AnyFrame, valuation: Option<&str>, formula: &str) -> Result<Report> {
    let phi = parse_formula(fr.signature(), formula)?;
    let alg = fr.complex_algebra()?;
    let l = alg.lattice();
    let v = match valuation {
        Some(text) => io::load_valuation(text, l)?,
        None => Valuation::new(),
    };
    let value = alg.eval(&v, &phi)?;
    let mut text = format!("{phi} = {}\n", l.pair_label(value));
    let mut rows = Vec::new();
    match fr {
        AnyFrame::Graph(gf) => {
            let _ = writeln!(text, "point  forces  refutes");
            for (z, name) in gf.graph().nodes().iter().enumerate() {
                let (f, r) = (graph::forces(&alg, &v, z, &phi)?, graph::refutes(&alg, &v, z, &phi)?);
                let _ = writeln!(text, "{name:<6} {f:<7} {r}");
                rows.push(json!({"point": name, "forces": f, "refutes": r}));
            }
        }
        AnyFrame::Polarity(pf) => {
            let p = pf.polarity();
            let _ = writeln!(text, "object  forces");
            for (a, name) in p.objects().iter().enumerate() {
                let f = alg.forces(&v, a, &phi)?;
                let _ = writeln!(text, "{name:<7} {f}");
                rows.push(json!({"point": name, "side": "object", "forces": f}));
            }
            let _ = writeln!(text, "attribute  refutes");
            for (x, name) in p.attributes().iter().enumerate() {
                let r = alg.refutes(&v, x, &phi)?;
                let _ = writeln!(text, "{name:<10} {r}");
                rows.push(json!({"point": name, "side": "attribute", "refutes": r}));
            }
        }
    }
    let p = l.polarity();
    let json = json!({
        "formula": phi.to_string(),
        "value": {"extent": p.object_names(l.extent(value)), "intent": p.attribute_names(l.intent(value))},
        "points": rows,
    });
    Ok(Report::new(text, json, None))
}

pub fn cmd_valid(fr: &AnyFrame, sequent: &str, vars: Option<usize>) -> Result<Report> {
    let s = parse_sequent(fr.signature(), sequent)?;
    let rep = valid_on_frame(fr, &s, vars)?;
    let mut text = format!(
        "{}: {} ({} valuations checked)\n",
        if rep.valid { "VALID" } else { "INVALID" },
        rep.sequent,
        rep.valuations_checked
    );
    if let Some(cm) = &rep.countermodel {
        text.push_str(&countermodel_text(cm));
    }
    let json = serde_json::to_value(&rep).expect("reports serialize");
    Ok(Report::new(text, json, Some(rep.valid)))
}

fn countermodel_text(cm: &lesem::correspondence::Countermodel) -> String {
    let mut text = String::from("countermodel:\n");
    for (letter, label) in &cm.assignment {
        let _ = writeln!(text, "  {letter} = {label}");
    }
    let _ = writeln!(text, "  lhs = {}\n  rhs = {}\n  lhs is not below rhs", cm.lhs, cm.rhs);
    text
}

fn wrong_kind(p: Property, kind: &str) -> CliError {
    CliError::Usage(format!("property `{}` applies to {kind} frames only", p.name()))
}

pub fn cmd_check(fr: &AnyFrame, properties: &[Property]) -> Result<Report> {
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut all = true;
    for &prop in properties {
        let mut detail = Value::Null;
        let holds = match (prop, fr) {
            (Property::Compatibility, _) => {
                let rep = fr.compatibility_check();
                detail = json!(rep.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>());
                rep.compatible
            }
            (Property::Distributivity, _) => fr.complex_algebra_lattice()?.is_distributive(),
            (Property::Factivity, AnyFrame::Polarity(pf)) => polarity_condition(pf, PolarityCondition::Factivity)?,
            (Property::Omniscience, AnyFrame::Polarity(pf)) => polarity_condition(pf, PolarityCondition::Omniscience)?,
            (Property::ApproximationSpace, AnyFrame::Polarity(pf)) => {
                let rep = approximation_space_check(pf)?;
                let ok = rep.axioms.iter().all(|a| a.valid)
                    && rep.box_interior.all()
                    && rep.dia_closure.all()
                    && rep.adjunction;
                detail = serde_json::to_value(&rep).expect("reports serialize");
                for a in &rep.axioms {
                    let _ = writeln!(text, "  {:<13} {:<22} {}", a.property, a.sequent, a.valid);
                }
                let _ = writeln!(
                    text,
                    "  interior {}  closure {}  adjunction {}",
                    rep.box_interior.all(),
                    rep.dia_closure.all(),
                    rep.adjunction
                );
                ok
            }
            (Property::EReflexivity, AnyFrame::Graph(gf)) => graph_condition(gf, GraphCondition::EReflexivity)?,
            (Property::EOmniscience, AnyFrame::Graph(gf)) => graph_condition(gf, GraphCondition::EOmniscience)?,
            (Property::ETransitivity, AnyFrame::Graph(gf)) => graph_condition(gf, GraphCondition::ETransitivity)?,
            (Property::WeakPersistence, AnyFrame::Graph(gf)) => weak_persistence_frame(gf.graph())?,
            (Property::Transitive, AnyFrame::Graph(gf)) => gf.graph().is_transitive(),
            (Property::Antisymmetric, AnyFrame::Graph(gf)) => gf.graph().is_antisymmetric(),
            (Property::Factivity | Property::Omniscience | Property::ApproximationSpace, _) => {
                return Err(wrong_kind(prop, "polarity"))
            }
            _ => return Err(wrong_kind(prop, "graph")),
        };
        all &= holds;
        let _ = writeln!(text, "{}: {holds}", prop.name());
        rows.push(json!({"property": prop.name(), "holds": holds, "detail": detail}));
    }
    Ok(Report::new(text, json!({"properties": rows, "all": all}), Some(all)))
}

/// Searches with the DML signature; the frame and valuation are written to `out` when given.
pub fn cmd_countermodel(sequent: &str, params: &SearchParams, out: Option<&Path>) -> Result<Report> {
    let sig = Signature::dml();
    let s = parse_sequent(&sig, sequent)?;
    let res = countermodel_search(&s, &sig, params)?;
    let head = format!(
        "{} frames examined, {} skipped over the valuation cap\n",
        res.frames_examined, res.frames_skipped
    );
    let Some((frame, cm)) = res.found else {
        let json = json!({
            "sequent": s.to_string(),
            "found": false,
            "frames_examined": res.frames_examined,
            "frames_skipped": res.frames_skipped,
        });
        return Ok(Report::new(format!("{head}none within budget\n"), json, Some(false)));
    };
    let alg: ConceptAlgebra = frame.complex_algebra()?;
    let frame_json = io::save_frame(&frame)?;
    let valuation_json = io::save_valuation(&cm.valuation, alg.lattice())?;
    if let Some(dir) = out {
        let write = |name: &str, body: &str| {
            let path = dir.join(name);
            std::fs::write(&path, body).map_err(|source| CliError::Read { path, source })
        };
        write("frame.json", &frame_json)?;
        write("valuation.json", &valuation_json)?;
    }
    let text = format!("{head}countermodel for {}\n{}frame:\n{frame_json}\n", s, countermodel_text(&cm));
    let json = json!({
        "sequent": s.to_string(),
        "found": true,
        "frames_examined": res.frames_examined,
        "frames_skipped": res.frames_skipped,
        "countermodel": cm,
        "frame": serde_json::from_str::<Value>(&frame_json).expect("frame JSON parses"),
        "valuation": serde_json::from_str::<Value>(&valuation_json).expect("valuation JSON parses"),
    });
    Ok(Report::new(text, json, Some(true)))
}

struct Checks {
    text: String,
    rows: Vec<Value>,
    ok: bool,
}

impl Checks {
    fn new() -> Self {
        Self { text: String::new(), rows: vec![], ok: true }
    }

    fn expect(&mut self, what: &str, got: impl ToString, want: impl ToString) {
        let (got, want) = (got.to_string(), want.to_string());
        let pass = got == want;
        self.ok &= pass;
        let mark = if pass { "ok" } else { "FAILED" };
        let _ = writeln!(self.text, "[{mark}] {what}: {got}{}", if pass { String::new() } else { format!(" (expected {want})") });
        self.rows.push(json!({"check": what, "got": got, "expected": want, "pass": pass}));
    }
}

/// Runs a bundled example and checks its reported outcomes.
pub fn cmd_examples(name: Example) -> Result<Report> {
    let mut c = Checks::new();
    let mut text = String::new();
    match name {
        Example::Plays => {
            let l = ConceptLattice::new(&io::load_context(PLAYS_CSV)?)?;
            text.push_str(&cmd_lattice(&l).text);
            let fr = io::load_frame(PLAYS_FRAME)?.frame;
            let alg = fr.complex_algebra()?;
            let l = alg.lattice();
            let v = io::load_valuation(PLAYS_VALUATION, l)?;
            let sig = fr.signature();
            let value = |f: &str| -> Result<String> { Ok(l.pair_label(alg.eval(&v, &parse_formula(sig, f)?)?)) };
            c.expect("concepts", l.len(), 5);
            c.expect("d /\\ (h \\/ r)", value("d /\\ (h \\/ r)")?, value("d")?);
            c.expect("(d /\\ h) \\/ (d /\\ r)", value("(d /\\ h) \\/ (d /\\ r)")?, value("h")?);
            c.expect("distributive", l.is_distributive(), false);
            let b = l.polarity().object_index("b")?;
            let hr = parse_formula(sig, "h \\/ r")?;
            c.expect("b forces h \\/ r", alg.forces(&v, b, &hr)?, true);
            c.expect("b forces h", alg.forces(&v, b, &parse_formula(sig, "h")?)?, false);
            c.expect("b forces r", alg.forces(&v, b, &parse_formula(sig, "r")?)?, false);
        }
        Example::Witnesses => {
            let fr = io::load_frame(WITNESS_FRAME)?.frame;
            let alg = fr.complex_algebra()?;
            let l = alg.lattice();
            text.push_str(&cmd_lattice(l).text);
            let v = io::load_valuation(WITNESS_VALUATION, l)?;
            let sig = fr.signature();
            let g = match &fr {
                AnyFrame::Graph(gf) => gf.graph(),
                AnyFrame::Polarity(_) => return Err(CliError::Usage("witness fixture is not a graph frame".into())),
            };
            let [p, q, pq] = ["p", "q", "p \\/ q"].map(|f| parse_formula(sig, f));
            let (p, q, pq) = (p?, q?, pq?);
            let (u, vv, z) = (g.node_index("u")?, g.node_index("v")?, g.node_index("z")?);
            c.expect("concepts", l.len(), 5);
            c.expect("transitive", g.is_transitive(), false);
            c.expect("antisymmetric", g.is_antisymmetric(), true);
            c.expect("v forces p \\/ q", graph::forces(&alg, &v, vv, &pq)?, true);
            c.expect("v forces p", graph::forces(&alg, &v, vv, &p)?, false);
            c.expect("v forces q", graph::forces(&alg, &v, vv, &q)?, false);
            c.expect("v refutes p", graph::refutes(&alg, &v, vv, &p)?, true);
            c.expect("v refutes q", graph::refutes(&alg, &v, vv, &q)?, false);
            c.expect("u forces q", graph::forces(&alg, &v, u, &q)?, true);
            c.expect("z refutes q", graph::refutes(&alg, &v, z, &q)?, true);
            c.expect("weak persistence", weak_persistence_frame(g)?, true);
        }
        Example::Craig => {
            let fr = io::load_frame(CRAIG_FRAME)?.frame;
            let AnyFrame::Graph(gf) = &fr else {
                return Err(CliError::Usage("Craig fixture is not a graph frame".into()));
            };
            let l = fr.complex_algebra_lattice()?;
            text.push_str(&cmd_lattice(&l).text);
            c.expect("transitive", gf.graph().is_transitive(), false);
            c.expect("antisymmetric", gf.graph().is_antisymmetric(), false);
            c.expect("concepts", l.len(), 3);
            c.expect("covers", l.hasse_edges().len(), 2);
            c.expect("distributive", l.is_distributive(), true);
        }
    }
    text.push_str(&c.text);
    let json = json!({"example": format!("{name:?}").to_lowercase(), "checks": c.rows, "all": c.ok});
    Ok(Report::new(text, json, Some(c.ok)))
}
