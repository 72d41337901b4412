//! Argument parsing, configuration, command dispatch, and exit-code
//! mapping.
//!
//! Exit codes: 0 when the checked property holds (or the input is valid),
//! 1 when it fails (a witness is printed), 2 for input errors, 3 when a
//! resource cap stops a computation.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::json;

use sheafcalc_core::corpus::{self, CriterionReport};
use sheafcalc_core::frames::{
    filter_generated, l_sublocale, nucleus_checks, quotient_by_filter, FiniteFrame, FrameElt,
};
use sheafcalc_core::logic::{
    frame_satisfies_logic, holds_in_frame, logic_by_name, parse_sequent, FrameWitness, HornSequent,
    LogicSpec,
};
use sheafcalc_core::ltop::{is_dense_over, l_topology, LtopError};
use sheafcalc_core::omega::{holds_internally, validates_logic, OmegaWitness, Site};
use sheafcalc_core::{CapExceeded, Caps, Verdict};

use crate::docs::{self, Document, FrameDocument, LoadError, SiteDocument};

/// The property holds or the document is valid.
pub const EXIT_HOLDS: i32 = 0;
/// The property fails or the document breaks its laws; a witness or
/// diagnostic accompanies the verdict.
pub const EXIT_FAILS: i32 = 1;
/// The input could not be read or understood.
pub const EXIT_INPUT: i32 = 2;
/// A resource cap stopped the computation.
pub const EXIT_CAP: i32 = 3;

/// Checks validity of intermediate propositional logics over finite sites
/// and finite frames.
#[derive(Debug, Parser)]
#[command(name = "sheafcalc", version, max_term_width = 100)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Largest allowed number of arrows into a single object (default 16).
    #[arg(long, global = true, value_name = "N")]
    max_fanin: Option<usize>,

    /// Largest total arrow count for whole-topology enumeration (default 5).
    #[arg(long, global = true, value_name = "N")]
    max_enum: Option<usize>,

    /// Largest allowed number of frame elements (default 12).
    #[arg(long, global = true, value_name = "N")]
    max_frame: Option<usize>,

    /// Print the machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load a site or frame document and report whether it is valid.
    Validate {
        /// Path to a site or frame document.
        path: PathBuf,
    },
    /// Decide a named logic or a Horn sequent over a site or frame.
    Check {
        /// A registry logic: classical, demorgan, goedel_dummett, or
        /// kreisel_putnam.
        #[arg(
            long,
            value_name = "NAME",
            required_unless_present = "sequent",
            conflicts_with = "sequent"
        )]
        logic: Option<String>,

        /// A Horn sequent such as "x & y = 0 |- y = y & ~x", or a bare term
        /// standing for the axiom "|- 1 = term".
        #[arg(long, value_name = "TEXT")]
        sequent: Option<String>,

        /// Path to a site or frame document.
        path: PathBuf,
    },
    /// Compute the least coverage refinement whose sheaves satisfy a logic,
    /// list its covering sieves, and report density and validity.
    Ltop {
        /// A registry logic (see `check --logic`).
        #[arg(long, value_name = "NAME")]
        logic: String,

        /// Path to a site document.
        path: PathBuf,

        /// Also write the refined site as a document to this path.
        #[arg(long, value_name = "OUT")]
        emit: Option<PathBuf>,
    },
    /// Quotient a frame by the filter generated by the given elements.
    FrameQuotient {
        /// Path to a frame document.
        path: PathBuf,

        /// Comma-separated generating elements, e.g. `--seeds a,b`.
        #[arg(long, value_name = "ELTS", value_delimiter = ',', required = true)]
        seeds: Vec<String>,
    },
    /// Compute the smallest sublocale of a frame satisfying a logic:
    /// nucleus table, fixset, and openness properties.
    Lsub {
        /// A registry logic (see `check --logic`).
        #[arg(long, value_name = "NAME")]
        logic: String,

        /// Path to a frame document.
        path: PathBuf,
    },
    /// Run the built-in cross-validation suites over the bundled corpus of
    /// categories, sites, and frames, and print a pass/fail matrix.
    Corpus {
        /// Only run suites whose name contains this string.
        suite: Option<String>,
    },
}

/// What a command produced: human text, the matching JSON report, and the
/// exit code.
struct Outcome {
    text: String,
    report: serde_json::Value,
    exit: i32,
}

/// A failure that aborts the command before any verdict is reached.
enum CmdError {
    Input(String),
    Cap(String),
}

impl From<CapExceeded> for CmdError {
    fn from(e: CapExceeded) -> Self {
        CmdError::Cap(e.to_string())
    }
}

/// Maps document-loading failures for commands that merely consume the
/// document (for those, an invalid document is an input error).
fn load_input(e: LoadError) -> CmdError {
    match e {
        LoadError::Cap(c) => CmdError::Cap(c.to_string()),
        other => CmdError::Input(other.to_string()),
    }
}

/// Parses the command line, runs the command, prints text or JSON, and
/// returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let caps = match effective_caps(&cli) {
        Ok(caps) => caps,
        Err(e) => return report_error(e),
    };
    match execute(&cli.command, &caps) {
        Ok(outcome) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&outcome.report).expect("reports serialize")
                );
            } else {
                print!("{}", outcome.text);
            }
            outcome.exit
        }
        Err(e) => report_error(e),
    }
}

fn report_error(e: CmdError) -> i32 {
    match e {
        CmdError::Input(msg) => {
            eprintln!("error: {msg}");
            EXIT_INPUT
        }
        CmdError::Cap(msg) => {
            eprintln!("error: {msg}");
            EXIT_CAP
        }
    }
}

/// Optional cap overrides read from the file named by `SHEAFCALC_CONFIG`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct ConfigFile {
    max_fanin: Option<usize>,
    max_enum: Option<usize>,
    max_frame: Option<usize>,
    max_nuclei: Option<usize>,
}

/// Resolves caps with precedence: command-line flag, then config file, then
/// built-in default.
fn effective_caps(cli: &Cli) -> Result<Caps, CmdError> {
    let mut caps = Caps::default();
    if let Ok(path) = std::env::var("SHEAFCALC_CONFIG") {
        let text = fs::read_to_string(&path)
            .map_err(|e| CmdError::Input(format!("cannot read config `{path}`: {e}")))?;
        let config: ConfigFile = serde_json::from_str(&text)
            .map_err(|e| CmdError::Input(format!("invalid config `{path}`: {e}")))?;
        if let Some(n) = config.max_fanin {
            caps.max_fanin = n;
        }
        if let Some(n) = config.max_enum {
            caps.max_enum_arrows = n;
        }
        if let Some(n) = config.max_frame {
            caps.max_frame = n;
        }
        if let Some(n) = config.max_nuclei {
            caps.max_nuclei_frame = n;
        }
    }
    if let Some(n) = cli.max_fanin {
        caps.max_fanin = n;
    }
    if let Some(n) = cli.max_enum {
        caps.max_enum_arrows = n;
    }
    if let Some(n) = cli.max_frame {
        caps.max_frame = n;
    }
    Ok(caps)
}

fn execute(command: &Command, caps: &Caps) -> Result<Outcome, CmdError> {
    match command {
        Command::Validate { path } => cmd_validate(path, caps),
        Command::Check {
            logic,
            sequent,
            path,
        } => cmd_check(path, logic.as_deref(), sequent.as_deref(), caps),
        Command::Ltop { logic, path, emit } => cmd_ltop(path, logic, emit.as_deref(), caps),
        Command::FrameQuotient { path, seeds } => cmd_frame_quotient(path, seeds, caps),
        Command::Lsub { logic, path } => cmd_lsub(path, logic, caps),
        Command::Corpus { suite } => cmd_corpus(caps, suite.as_deref()),
    }
}

fn read_text(path: &Path) -> Result<String, CmdError> {
    fs::read_to_string(path)
        .map_err(|e| CmdError::Input(format!("cannot read `{}`: {e}", path.display())))
}

fn read_document(path: &Path) -> Result<Document, CmdError> {
    docs::parse_document(&read_text(path)?).map_err(load_input)
}

fn read_site(path: &Path, caps: &Caps) -> Result<Site, CmdError> {
    match read_document(path)? {
        Document::Site(doc) => doc.to_site(caps).map_err(load_input),
        Document::Frame(_) => Err(CmdError::Input(format!(
            "`{}` is a frame document; this command needs a site",
            path.display()
        ))),
    }
}

fn read_frame(path: &Path, caps: &Caps) -> Result<FiniteFrame, CmdError> {
    match read_document(path)? {
        Document::Frame(doc) => doc.to_frame(caps).map_err(load_input),
        Document::Site(_) => Err(CmdError::Input(format!(
            "`{}` is a site document; this command needs a frame",
            path.display()
        ))),
    }
}

fn lookup_logic(name: &str) -> Result<LogicSpec, CmdError> {
    logic_by_name(name).map_err(|e| CmdError::Input(e.to_string()))
}

fn cmd_validate(path: &Path, caps: &Caps) -> Result<Outcome, CmdError> {
    let shown = path.display().to_string();
    let verdict = |kind: &str, exit: i32, summary: String, diagnostics: Vec<String>| {
        let mut text = format!("{summary}\n");
        for d in &diagnostics {
            text.push_str(&format!("  - {d}\n"));
        }
        Outcome {
            report: json!({
                "command": "validate",
                "path": shown,
                "kind": kind,
                "valid": exit == EXIT_HOLDS,
                "diagnostics": diagnostics,
            }),
            text,
            exit,
        }
    };
    let text = read_text(path)?;
    let document = match docs::parse_document(&text) {
        Ok(document) => document,
        Err(e) => {
            return Ok(verdict(
                "unknown",
                EXIT_INPUT,
                format!("malformed document `{shown}`"),
                vec![e.to_string()],
            ))
        }
    };
    Ok(match document {
        Document::Site(doc) => match doc.to_site(caps) {
            Ok(site) => {
                let cat = site.category();
                verdict(
                    "site",
                    EXIT_HOLDS,
                    format!(
                        "valid site `{shown}`: {} objects, {} arrows, {} covering sieves",
                        cat.object_count(),
                        cat.arrow_count(),
                        site.topology().total_covers(),
                    ),
                    Vec::new(),
                )
            }
            Err(LoadError::Invalid { diagnostics }) => verdict(
                "site",
                EXIT_FAILS,
                format!("invalid site `{shown}`"),
                diagnostics,
            ),
            Err(LoadError::Cap(c)) => return Err(c.into()),
            Err(LoadError::Malformed(m)) => return Err(CmdError::Input(m)),
        },
        Document::Frame(doc) => match doc.to_frame(caps) {
            Ok(frame) => verdict(
                "frame",
                EXIT_HOLDS,
                format!(
                    "valid frame `{shown}`: {} elements, bottom `{}`, top `{}`",
                    frame.element_count(),
                    frame.name(frame.bot()),
                    frame.name(frame.top()),
                ),
                Vec::new(),
            ),
            Err(LoadError::Invalid { diagnostics }) => verdict(
                "frame",
                EXIT_FAILS,
                format!("invalid frame `{shown}`"),
                diagnostics,
            ),
            Err(LoadError::Cap(c)) => return Err(c.into()),
            Err(LoadError::Malformed(m)) => return Err(CmdError::Input(m)),
        },
    })
}

/// What `check` decides: a registry logic or a one-off sequent.
enum Subject {
    Logic(LogicSpec),
    Sequent(HornSequent),
}

impl Subject {
    fn new(logic: Option<&str>, sequent: Option<&str>) -> Result<Subject, CmdError> {
        match (logic, sequent) {
            (Some(name), None) => Ok(Subject::Logic(lookup_logic(name)?)),
            (None, Some(text)) => parse_sequent(text)
                .map(Subject::Sequent)
                .map_err(|e| CmdError::Input(format!("cannot parse sequent: {e}"))),
            // clap enforces exactly one of the two flags.
            _ => unreachable!("clap requires exactly one of --logic/--sequent"),
        }
    }

    fn describe(&self) -> String {
        match self {
            Subject::Logic(spec) => spec.name.to_string(),
            Subject::Sequent(seq) => format!("`{seq}`"),
        }
    }

    fn report_key(&self) -> serde_json::Value {
        match self {
            Subject::Logic(spec) => json!({ "logic": spec.name }),
            Subject::Sequent(seq) => json!({ "sequent": seq.to_string() }),
        }
    }
}

fn omega_witness_json(site: &Site, w: &OmegaWitness) -> serde_json::Value {
    let cat = site.category();
    json!({
        "object": cat.object_name(w.object),
        "assignment": w
            .assignment
            .iter()
            .map(|(var, sieve)| json!([var, cat.sieve_to_string(*sieve)]))
            .collect::<Vec<_>>(),
    })
}

fn frame_witness_text(frame: &FiniteFrame, w: &FrameWitness) -> String {
    let bindings: Vec<String> = w
        .assignment
        .iter()
        .map(|(var, elt)| format!("{var} = {}", frame.name(*elt)))
        .collect();
    if bindings.is_empty() {
        "the empty assignment".to_string()
    } else {
        bindings.join(", ")
    }
}

fn frame_witness_json(frame: &FiniteFrame, w: &FrameWitness) -> serde_json::Value {
    json!({
        "assignment": w
            .assignment
            .iter()
            .map(|(var, elt)| json!([var, frame.name(*elt)]))
            .collect::<Vec<_>>(),
    })
}

fn cmd_check(
    path: &Path,
    logic: Option<&str>,
    sequent: Option<&str>,
    caps: &Caps,
) -> Result<Outcome, CmdError> {
    let subject = Subject::new(logic, sequent)?;
    let shown = path.display().to_string();
    let (kind, holds, witness_text, witness_json) = match read_document(path)? {
        Document::Site(doc) => {
            let site = doc.to_site(caps).map_err(load_input)?;
            let verdict = match &subject {
                Subject::Logic(spec) => validates_logic(&site, spec)?,
                Subject::Sequent(seq) => holds_internally(&site, seq)?,
            };
            match verdict {
                Verdict::Holds => ("site", true, None, serde_json::Value::Null),
                Verdict::Fails(w) => (
                    "site",
                    false,
                    Some(w.describe(site.category())),
                    omega_witness_json(&site, &w),
                ),
            }
        }
        Document::Frame(doc) => {
            let frame = doc.to_frame(caps).map_err(load_input)?;
            let verdict = match &subject {
                Subject::Logic(spec) => frame_satisfies_logic(&frame, spec),
                Subject::Sequent(seq) => holds_in_frame(&frame, seq),
            };
            match verdict {
                Verdict::Holds => ("frame", true, None, serde_json::Value::Null),
                Verdict::Fails(w) => (
                    "frame",
                    false,
                    Some(frame_witness_text(&frame, &w)),
                    frame_witness_json(&frame, &w),
                ),
            }
        }
    };
    let described = subject.describe();
    let text = if holds {
        format!("{described} holds in `{shown}`\n")
    } else {
        format!(
            "{described} fails in `{shown}`\nwitness: {}\n",
            witness_text.as_deref().unwrap_or("none")
        )
    };
    Ok(Outcome {
        text,
        report: json!({
            "command": "check",
            "path": shown,
            "kind": kind,
            "subject": subject.report_key(),
            "holds": holds,
            "witness": witness_json,
        }),
        exit: if holds { EXIT_HOLDS } else { EXIT_FAILS },
    })
}

fn ltop_error(e: LtopError) -> CmdError {
    match e {
        LtopError::Cap(c) => c.into(),
        other => CmdError::Input(other.to_string()),
    }
}

fn cmd_ltop(
    path: &Path,
    logic: &str,
    emit: Option<&Path>,
    caps: &Caps,
) -> Result<Outcome, CmdError> {
    let spec = lookup_logic(logic)?;
    let site = read_site(path, caps)?;
    let refined = site
        .with_topology(l_topology(&site, &spec.axiom)?)
        .expect("generated coverage refinements satisfy the topology axioms");
    let dense = is_dense_over(&site, refined.topology()).map_err(ltop_error)?;
    let verdict = validates_logic(&refined, &spec)?;
    let cat = site.category();
    let shown = path.display().to_string();

    let mut text = format!("least {} refinement of `{shown}`\n", spec.name);
    if !spec.admissible {
        text.push_str(
            "note: the axiom is not a join of |-free terms, so this refinement is \
             generated from its values but need not be the least one satisfying it\n",
        );
    }
    text.push_str("covering sieves:\n");
    let mut cover_report = Vec::new();
    for c in cat.objects() {
        let sieves: Vec<String> = refined
            .topology()
            .covers(c)
            .map(|s| cat.sieve_to_string(s))
            .collect();
        text.push_str(&format!(
            "  object `{}`: {}\n",
            cat.object_name(c),
            sieves.join("; ")
        ));
        cover_report.push(json!({
            "object": cat.object_name(c),
            "sieves": refined
                .topology()
                .covers(c)
                .map(|s| {
                    cat.sieve_arrows(s)
                        .iter()
                        .map(|&f| cat.arrow_name(f).to_string())
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>(),
        }));
    }
    text.push_str(&format!(
        "dense over the input coverage: {}\n",
        if dense { "yes" } else { "no" }
    ));
    let (holds, witness_text, witness_json) = match verdict {
        Verdict::Holds => (true, None, serde_json::Value::Null),
        Verdict::Fails(w) => (
            false,
            Some(w.describe(cat)),
            omega_witness_json(&refined, &w),
        ),
    };
    text.push_str(&format!(
        "{} holds on the refined site: {}\n",
        spec.name,
        if holds { "yes" } else { "no" }
    ));
    if let Some(w) = &witness_text {
        text.push_str(&format!("witness: {w}\n"));
    }

    let document = SiteDocument::from_site(&refined);
    if let Some(out) = emit {
        let serialized = serde_json::to_string_pretty(&document).expect("documents serialize");
        fs::write(out, serialized + "\n")
            .map_err(|e| CmdError::Input(format!("cannot write `{}`: {e}", out.display())))?;
        text.push_str(&format!("refined site written to `{}`\n", out.display()));
    }

    Ok(Outcome {
        text,
        report: json!({
            "command": "ltop",
            "path": shown,
            "logic": spec.name,
            "admissible": spec.admissible,
            "dense": dense,
            "holds": holds,
            "witness": witness_json,
            "covers": cover_report,
            "site": serde_json::to_value(&document).expect("documents serialize"),
        }),
        exit: if holds { EXIT_HOLDS } else { EXIT_FAILS },
    })
}

fn cmd_frame_quotient(path: &Path, seeds: &[String], caps: &Caps) -> Result<Outcome, CmdError> {
    let frame = read_frame(path, caps)?;
    let elements = seeds
        .iter()
        .map(|name| {
            frame
                .element_by_name(name)
                .ok_or_else(|| CmdError::Input(format!("frame has no element named `{name}`")))
        })
        .collect::<Result<Vec<FrameElt>, CmdError>>()?;
    let filter = filter_generated(&frame, &elements);
    let quotient = quotient_by_filter(&frame, &filter);
    let shown = path.display().to_string();
    let names = |elts: &[FrameElt]| -> Vec<String> {
        elts.iter().map(|&e| frame.name(e).to_string()).collect()
    };

    let mut text = format!(
        "filter generated by {{{}}} in `{shown}`: {{{}}}\n",
        seeds.join(", "),
        names(&filter.members()).join(", ")
    );
    if quotient.collapsed {
        text.push_str("warning: the filter is improper (contains 0); everything collapses to a single point\n");
    }
    text.push_str("quotient classes (class -> greatest representative):\n");
    for class in &quotient.classes {
        let representative = *class.last().expect("classes are nonempty");
        text.push_str(&format!(
            "  {{{}}} -> {}\n",
            names(class).join(", "),
            frame.name(representative)
        ));
    }
    let nucleus_pairs: Vec<(String, String)> = frame
        .elements()
        .map(|e| {
            (
                frame.name(e).to_string(),
                frame.name(quotient.nucleus.apply(e)).to_string(),
            )
        })
        .collect();
    text.push_str(&format!(
        "nucleus: {}\n",
        nucleus_pairs
            .iter()
            .map(|(a, b)| format!("{a} -> {b}"))
            .collect::<Vec<_>>()
            .join(", ")
    ));
    text.push_str(&format!(
        "quotient frame elements: {}\n",
        quotient
            .frame
            .elements()
            .map(|e| quotient.frame.name(e).to_string())
            .collect::<Vec<_>>()
            .join(", ")
    ));

    let document = FrameDocument::from_frame(&quotient.frame);
    Ok(Outcome {
        text,
        report: json!({
            "command": "frame-quotient",
            "path": shown,
            "seeds": seeds,
            "improper": quotient.collapsed,
            "filter": names(&filter.members()),
            "classes": quotient.classes.iter().map(|c| names(c)).collect::<Vec<_>>(),
            "nucleus": nucleus_pairs
                .iter()
                .map(|(a, b)| json!([a, b]))
                .collect::<Vec<_>>(),
            "frame": serde_json::to_value(&document).expect("documents serialize"),
        }),
        exit: EXIT_HOLDS,
    })
}

fn cmd_lsub(path: &Path, logic: &str, caps: &Caps) -> Result<Outcome, CmdError> {
    let spec = lookup_logic(logic)?;
    let frame = read_frame(path, caps)?;
    let sublocale = l_sublocale(&frame, &spec.axiom)?;
    let nucleus = &sublocale.quotient.nucleus;
    let checks = nucleus_checks(&frame, nucleus);
    let satisfied = frame_satisfies_logic(&sublocale.quotient.frame, &spec).holds();
    let shown = path.display().to_string();
    let names = |elts: &[FrameElt]| -> Vec<String> {
        elts.iter().map(|&e| frame.name(e).to_string()).collect()
    };

    let mut text = format!("smallest {} sublocale of `{shown}`\n", spec.name);
    if !spec.admissible {
        text.push_str(
            "note: the axiom is not a join of |-free terms, so this sublocale is \
             generated from its values but need not be the least one satisfying it\n",
        );
    }
    text.push_str(&format!(
        "axiom values: {{{}}}; filter: {{{}}}\n",
        names(&sublocale.seeds).join(", "),
        names(&sublocale.filter.members()).join(", ")
    ));
    let nucleus_pairs: Vec<(String, String)> = frame
        .elements()
        .map(|e| {
            (
                frame.name(e).to_string(),
                frame.name(nucleus.apply(e)).to_string(),
            )
        })
        .collect();
    text.push_str(&format!(
        "nucleus: {}\n",
        nucleus_pairs
            .iter()
            .map(|(a, b)| format!("{a} -> {b}"))
            .collect::<Vec<_>>()
            .join(", ")
    ));
    text.push_str(&format!(
        "fixset: {{{}}}\n",
        names(&nucleus.fixset()).join(", ")
    ));
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    text.push_str(&format!(
        "dense: {}; weakly open: {}; implicationally open: {}\n",
        yes_no(checks.dense),
        yes_no(checks.weakly_open),
        yes_no(checks.implicationally_open)
    ));
    text.push_str(&format!(
        "fixset satisfies {}: {}\n",
        spec.name,
        yes_no(satisfied)
    ));

    let document = FrameDocument::from_frame(&sublocale.quotient.frame);
    Ok(Outcome {
        text,
        report: json!({
            "command": "lsub",
            "path": shown,
            "logic": spec.name,
            "admissible": spec.admissible,
            "axiom_values": names(&sublocale.seeds),
            "filter": names(&sublocale.filter.members()),
            "nucleus": nucleus_pairs
                .iter()
                .map(|(a, b)| json!([a, b]))
                .collect::<Vec<_>>(),
            "fixset": names(&nucleus.fixset()),
            "dense": checks.dense,
            "weakly_open": checks.weakly_open,
            "implicationally_open": checks.implicationally_open,
            "satisfies": satisfied,
            "frame": serde_json::to_value(&document).expect("documents serialize"),
        }),
        exit: EXIT_HOLDS,
    })
}

/// The cross-validation suite names, in reporting order: the ten bundled
/// with the core corpus plus the document round trip owned by this crate.
pub const SUITE_NAMES: [&str; 11] = [
    "presheaf-oracle-matrix",
    "indecomposability-agreement",
    "heyting-fiber-laws",
    "l-topology-properties",
    "least-topology-and-openness",
    "relativization",
    "frame-site-bridge",
    "nucleus-enumeration",
    "direct-descriptions",
    "term-print-parse-round-trip",
    "document-round-trip",
];

/// Runs the cross-validation suites, optionally restricted to those whose
/// name contains `filter`.
pub fn corpus_suites(caps: &Caps, filter: Option<&str>) -> Vec<CriterionReport> {
    let caps = *caps;
    type Suite = Box<dyn Fn() -> CriterionReport + Send + Sync>;
    let suites: Vec<Suite> = vec![
        Box::new(move || corpus::presheaf_oracle_matrix(&caps)),
        Box::new(move || corpus::indecomposability_agreement(&caps)),
        Box::new(move || corpus::heyting_fiber_suite(&caps)),
        Box::new(move || corpus::l_topology_suite(&caps)),
        Box::new(move || corpus::minimality_suite(&caps)),
        Box::new(move || corpus::relativization_suite(&caps)),
        Box::new(move || corpus::frame_site_bridge_suite(&caps)),
        Box::new(move || corpus::nucleus_enumeration_suite(&caps)),
        Box::new(move || corpus::direct_description_suite(&caps)),
        Box::new(move || {
            corpus::term_round_trip(corpus::ROUND_TRIP_CASES, corpus::ROUND_TRIP_SEED)
        }),
        Box::new(move || docs::document_round_trip_suite(&caps)),
    ];
    let selected: Vec<&Suite> = SUITE_NAMES
        .iter()
        .zip(&suites)
        .filter(|(name, _)| filter.is_none_or(|f| name.contains(f)))
        .map(|(_, suite)| suite)
        .collect();
    // Suites share only immutable data; results come back in suite order.
    selected.par_iter().map(|suite| suite()).collect()
}

fn cmd_corpus(caps: &Caps, filter: Option<&str>) -> Result<Outcome, CmdError> {
    if let Some(f) = filter {
        if !SUITE_NAMES.iter().any(|name| name.contains(f)) {
            return Err(CmdError::Input(format!(
                "no suite name contains `{f}` (suites: {})",
                SUITE_NAMES.join(", ")
            )));
        }
    }
    let reports = corpus_suites(caps, filter);
    let mut text = String::new();
    for report in &reports {
        text.push_str(&report.line());
        text.push('\n');
        for failure in report.failures.iter().take(5) {
            text.push_str(&format!("    {failure}\n"));
        }
        if report.failures.len() > 5 {
            text.push_str(&format!("    ... and {} more\n", report.failures.len() - 5));
        }
    }
    let passed = reports.iter().all(|r| r.passed());
    text.push_str(&format!(
        "{}: {} of {} suites passed\n",
        if passed { "PASS" } else { "FAIL" },
        reports.iter().filter(|r| r.passed()).count(),
        reports.len()
    ));
    Ok(Outcome {
        text,
        report: json!({
            "command": "corpus",
            "passed": passed,
            "suites": reports
                .iter()
                .map(|r| {
                    json!({
                        "name": r.name,
                        "checks": r.checks,
                        "failures": r.failures,
                    })
                })
                .collect::<Vec<_>>(),
        }),
        exit: if passed { EXIT_HOLDS } else { EXIT_FAILS },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_match_the_reports() {
        let reports = corpus_suites(&Caps::default(), None);
        let names: Vec<&str> = reports.iter().map(|r| r.name).collect();
        assert_eq!(names, SUITE_NAMES);
    }

    #[test]
    fn suite_filter_selects_by_substring() {
        let reports = corpus_suites(&Caps::default(), Some("round-trip"));
        let names: Vec<&str> = reports.iter().map(|r| r.name).collect();
        assert_eq!(
            names,
            ["term-print-parse-round-trip", "document-round-trip"]
        );
        assert!(corpus_suites(&Caps::default(), Some("zzz")).is_empty());
    }
}
