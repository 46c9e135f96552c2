//! The `mrx` command-line driver. Commands return their exit code and output
//! instead of printing, so they can be tested in-process.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::harness::{soundness, SoundnessConfig};
use crate::kernel::eval::{eval, eval_counted};
use crate::kernel::nbe::normalise;
use crate::kernel::syntax::{Binders, Term, Ty};
use crate::kernel::value::{Env, Value};
use crate::logic::{
    ae_extract, ae_shape, extract_checked, trivial_assumption, Checker, LogicError, Sequent,
    DEFAULT_NAT_BOUND,
};
use crate::prop::tp;
use crate::realisability::{decide_inhabited, Variant};
use crate::surface::{
    parse, parse_term, print_program, print_prop, print_term, print_ty, print_value, PropDisplay,
    SourceFile,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_CHECK: i32 = 2;
pub const EXIT_EXTRACT: i32 = 3;
pub const EXIT_EVAL: i32 = 4;
pub const EXIT_SOUNDNESS: i32 = 5;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Program extraction by modified realisability with truth.
#[derive(Debug, Parser)]
#[command(name = "mrx", version)]
pub struct RunConfig {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every proof in a source file and print its conclusion.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_NAT_BOUND, value_parser = clap::value_parser!(u64).range(1..))]
        nat_bound: u64,
    },
    /// Extract realisers and write them to an artifact next to the source.
    Extract {
        file: PathBuf,
        #[arg(long, default_value = "mr")]
        variant: Variant,
        #[arg(long, default_value_t = DEFAULT_NAT_BOUND, value_parser = clap::value_parser!(u64).range(1..))]
        nat_bound: u64,
        /// Artifact path; defaults to the source path with extension `rsx`.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate a program from an artifact on arguments.
    Run {
        artifact: PathBuf,
        goal: String,
        args: Vec<String>,
    },
    /// Normalise a term definition from a source file.
    Normalise { file: PathBuf, name: String },
    /// Check that realised propositions are true, exhaustively.
    Soundness {
        #[arg(long, default_value = "mr")]
        variant: Variant,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        domain_size: u32,
        #[arg(long, default_value_t = DEFAULT_NAT_BOUND, value_parser = clap::value_parser!(u64).range(1..))]
        nat_bound: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 600)]
        propositions: usize,
    },
}

/// Exit code and captured output of a command.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stdout: String, message: impl std::fmt::Display) -> Outcome {
        Outcome {
            code,
            stdout,
            stderr: format!("error: {message}\n"),
        }
    }
}

/// Parse command-line arguments (including the program name) and run.
pub fn run_args<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(config) => run(&config),
        Err(e) if !e.use_stderr() => Outcome::ok(e.to_string()),
        Err(e) => Outcome {
            code: EXIT_PARSE,
            stdout: String::new(),
            stderr: e.to_string(),
        },
    }
}

pub fn run(config: &RunConfig) -> Outcome {
    let format = config.format;
    match &config.command {
        Command::Check { file, nat_bound } => cmd_check(file, *nat_bound, format),
        Command::Extract {
            file,
            variant,
            nat_bound,
            output,
        } => {
            let output = output.clone().unwrap_or_else(|| file.with_extension("rsx"));
            cmd_extract(file, *variant, *nat_bound, &output, format)
        }
        Command::Run {
            artifact,
            goal,
            args,
        } => cmd_run(artifact, goal, args, format),
        Command::Normalise { file, name } => cmd_normalise(file, name, format),
        Command::Soundness {
            variant,
            depth,
            domain_size,
            nat_bound,
            seed,
            propositions,
        } => cmd_soundness(
            &SoundnessConfig {
                variant: *variant,
                depth: *depth,
                domain_size: *domain_size,
                nat_bound: *nat_bound,
                seed: *seed,
                propositions: *propositions,
                ..SoundnessConfig::default()
            },
            format,
        ),
    }
}

fn load(path: &Path) -> Result<SourceFile, Outcome> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Outcome::fail(
            EXIT_PARSE,
            String::new(),
            format!("{}: {e}", path.display()),
        )
    })?;
    parse(&text)
        .map_err(|e| Outcome::fail(EXIT_PARSE, String::new(), format!("{}:{e}", path.display())))
}

fn json_out(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s
}

pub fn cmd_check(path: &Path, nat_bound: u64, format: Format) -> Outcome {
    let file = match load(path) {
        Ok(f) => f,
        Err(o) => return o,
    };
    let checker = Checker::new(nat_bound);
    let display = PropDisplay::new(&file.defs);
    let mut text = String::new();
    let mut rows = Vec::new();
    for (name, proof, expected, pos) in file.proofs() {
        let seq = match checker.check(proof) {
            Ok(seq) => seq,
            Err(e) => {
                return Outcome::fail(
                    EXIT_CHECK,
                    text,
                    format!("{}:{pos}: {name}: {e}", path.display()),
                )
            }
        };
        if let Some(expected) = expected {
            if *expected != seq {
                let msg = format!(
                    "{}:{pos}: {name}: proves {} instead of {}",
                    path.display(),
                    display.sequent(&seq),
                    display.sequent(expected)
                );
                return Outcome::fail(EXIT_CHECK, text, msg);
            }
        }
        let shown = display.sequent(&seq);
        let _ = writeln!(text, "{name}: {shown}");
        rows.push(json!({
            "name": name,
            "antecedent": print_prop(&seq.antecedent),
            "succedent": print_prop(&seq.succedent),
            "display": shown,
        }));
    }
    match format {
        Format::Text => Outcome::ok(text),
        Format::Json => Outcome::ok(json_out(&json!({ "proofs": rows }))),
    }
}

/// Canonical serialisation of the extracted programs of a source file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Artifact {
    pub variant: Variant,
    pub nat_bound: u64,
    pub entries: Vec<ArtifactEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryKind {
    /// The normalised realiser of a checked sequent.
    Realiser,
    /// The function projected from a realiser of a `∀∃` goal.
    Program,
    /// A term definition of the source file.
    Definition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtifactEntry {
    pub name: String,
    pub kind: EntryKind,
    /// Conclusion as `(antecedent succedent)`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sequent: Option<String>,
    #[serde(rename = "type")]
    pub ty: String,
    pub program: String,
}

impl Artifact {
    /// The entry `run` evaluates for `name`: a projected program first.
    pub fn lookup(&self, name: &str) -> Option<&ArtifactEntry> {
        [
            EntryKind::Program,
            EntryKind::Definition,
            EntryKind::Realiser,
        ]
        .iter()
        .find_map(|k| self.entries.iter().find(|e| e.name == name && e.kind == *k))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("artifact serialises");
        s.push('\n');
        s
    }
}

/// What one extraction directive produced.
#[derive(Clone, Debug)]
pub struct Extracted {
    pub goal: String,
    pub sequent: Sequent,
    pub realiser: Term,
    pub realiser_type: Ty,
    /// The projected function of a `∀∃` goal with its type and the number of
    /// domain points at which its specification was checked.
    pub program: Option<(Term, Ty, usize)>,
}

/// Extract every directive of a parsed source file (every proof when there
/// are none).
pub fn extract_file(
    file: &SourceFile,
    variant: Variant,
    nat_bound: u64,
) -> Result<Vec<Extracted>, (i32, String)> {
    let checker = Checker::new(nat_bound);
    let mut jobs: Vec<(String, String, Option<Term>)> = file
        .extractions()
        .map(|(g, p, a, _)| (g.to_string(), p.to_string(), a.cloned()))
        .collect();
    if jobs.is_empty() {
        jobs = file
            .proofs()
            .map(|(n, ..)| (n.to_string(), n.to_string(), None))
            .collect();
    }
    let mut out = Vec::new();
    for (goal, proof_name, assume) in jobs {
        let proof = &file.defs.proofs[&proof_name];
        let fail = |code: i32, e: &dyn std::fmt::Display| (code, format!("{goal}: {e}"));
        let res = extract_checked(proof, variant, &checker).map_err(|e| match e {
            LogicError::UsesFullAbsurd | LogicError::MissingDefault => fail(EXIT_EXTRACT, &e),
            e if checker.check(proof).is_err() => fail(EXIT_CHECK, &e),
            e => fail(EXIT_EXTRACT, &e),
        })?;
        let realiser_type = variant.crude(&res.sequent.as_implication());
        let realiser =
            normalise(&res.program, &realiser_type).map_err(|e| fail(EXIT_EXTRACT, &e))?;
        let truth = match &assume {
            Some(t) => Some(eval(t, &Env::new()).map_err(|e| fail(EXIT_EXTRACT, &e))?),
            None => decide_inhabited(&tp(&res.sequent.antecedent), nat_bound)
                .ok()
                .flatten(),
        };
        let mut program = None;
        if let (Some(truth), Ok(_)) = (truth, ae_shape(&res.sequent.succedent)) {
            match trivial_assumption(&res.sequent.antecedent, &truth, variant) {
                Ok(assumption) => {
                    if !assumption
                        .verify(nat_bound)
                        .map_err(|e| fail(EXIT_EXTRACT, &e))?
                        .valid
                    {
                        return Err(fail(EXIT_EXTRACT, &"the assumption is not true"));
                    }
                    let ae = ae_extract(&res, &assumption, nat_bound)
                        .map_err(|e| fail(EXIT_EXTRACT, &e))?;
                    if !ae.all_valid() {
                        return Err(fail(
                            EXIT_EXTRACT,
                            &"the program violates its specification",
                        ));
                    }
                    let ty = Ty::fun(ae.domain.clone(), ae.codomain.clone());
                    let normal = normalise(&ae.program, &ty).map_err(|e| fail(EXIT_EXTRACT, &e))?;
                    program = Some((normal, ty, ae.points.len()));
                }
                Err(e) if assume.is_some() => return Err(fail(EXIT_EXTRACT, &e)),
                Err(_) => {}
            }
        }
        out.push(Extracted {
            goal,
            sequent: res.sequent.clone(),
            realiser,
            realiser_type,
            program,
        });
    }
    Ok(out)
}

/// Build the artifact for a source file.
pub fn artifact(
    file: &SourceFile,
    extracted: &[Extracted],
    variant: Variant,
    nat_bound: u64,
) -> Artifact {
    let mut entries = Vec::new();
    for x in extracted {
        let sequent = format!(
            "({} {})",
            print_prop(&x.sequent.antecedent),
            print_prop(&x.sequent.succedent)
        );
        entries.push(ArtifactEntry {
            name: x.goal.clone(),
            kind: EntryKind::Realiser,
            sequent: Some(sequent.clone()),
            ty: print_ty(&x.realiser_type),
            program: print_term(&x.realiser),
        });
        if let Some((p, ty, _)) = &x.program {
            entries.push(ArtifactEntry {
                name: x.goal.clone(),
                kind: EntryKind::Program,
                sequent: Some(sequent),
                ty: print_ty(ty),
                program: print_term(p),
            });
        }
    }
    for decl in &file.decls {
        if let crate::surface::Decl::Term { name, ty, term } = decl {
            entries.push(ArtifactEntry {
                name: name.clone(),
                kind: EntryKind::Definition,
                sequent: None,
                ty: print_ty(ty),
                program: print_term(term),
            });
        }
    }
    Artifact {
        variant,
        nat_bound,
        entries,
    }
}

pub fn cmd_extract(
    path: &Path,
    variant: Variant,
    nat_bound: u64,
    output: &Path,
    format: Format,
) -> Outcome {
    let file = match load(path) {
        Ok(f) => f,
        Err(o) => return o,
    };
    let extracted = match extract_file(&file, variant, nat_bound) {
        Ok(x) => x,
        Err((code, msg)) => {
            return Outcome::fail(code, String::new(), format!("{}: {msg}", path.display()))
        }
    };
    let art = artifact(&file, &extracted, variant, nat_bound);
    if let Err(e) = std::fs::write(output, art.to_json()) {
        return Outcome::fail(
            EXIT_EXTRACT,
            String::new(),
            format!("{}: {e}", output.display()),
        );
    }
    let display = PropDisplay::new(&file.defs);
    let mut text = String::new();
    let mut rows = Vec::new();
    for x in &extracted {
        let _ = writeln!(text, "{}: {}", x.goal, display.sequent(&x.sequent));
        let _ = writeln!(text, "  realiser: {}", print_program(&x.realiser));
        let mut row = json!({
            "goal": x.goal,
            "sequent": display.sequent(&x.sequent),
            "realiser": print_program(&x.realiser),
        });
        if let Some((p, _, points)) = &x.program {
            let _ = writeln!(text, "  program: {}", print_program(p));
            let _ = writeln!(text, "  specification checked at {points} points");
            row["program"] = json!(print_program(p));
            row["checked_points"] = json!(points);
        }
        rows.push(row);
    }
    let _ = writeln!(text, "wrote {}", output.display());
    match format {
        Format::Text => Outcome::ok(text),
        Format::Json => Outcome::ok(json_out(&json!({
            "variant": variant,
            "artifact": output.display().to_string(),
            "extractions": rows,
        }))),
    }
}

/// Evaluate an artifact entry on arguments; returns the value and the
/// number of evaluation steps.
pub fn run_entry(entry: &ArtifactEntry, args: &[Term]) -> Result<(Value, u64), String> {
    let program = parse_term(&entry.program).map_err(|e| format!("corrupt artifact: {e}"))?;
    let applied = args.iter().fold(program, |f, a| Term::app(f, a.clone()));
    eval_counted(&applied).map_err(|e| e.to_string())
}

pub fn load_artifact(path: &Path) -> Result<Artifact, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn cmd_run(path: &Path, goal: &str, args: &[String], format: Format) -> Outcome {
    let art = match load_artifact(path) {
        Ok(a) => a,
        Err(e) => return Outcome::fail(EXIT_PARSE, String::new(), e),
    };
    let mut terms = Vec::new();
    for a in args {
        match parse_term(a) {
            Ok(t) if t.is_closed() => terms.push(t),
            Ok(_) => {
                return Outcome::fail(EXIT_PARSE, String::new(), format!("argument `{a}` is open"))
            }
            Err(e) => {
                return Outcome::fail(EXIT_PARSE, String::new(), format!("argument `{a}`: {e}"))
            }
        }
    }
    let Some(entry) = art.lookup(goal) else {
        return Outcome::fail(
            EXIT_EVAL,
            String::new(),
            format!("no program named `{goal}`"),
        );
    };
    let (value, steps) = match run_entry(entry, &terms) {
        Ok(r) => r,
        Err(e) => return Outcome::fail(EXIT_EVAL, String::new(), e),
    };
    let shown = print_value(&value);
    match format {
        Format::Text => Outcome::ok(format!("{shown}\nsteps: {steps}\n")),
        Format::Json => Outcome::ok(json_out(&json!({
            "goal": goal,
            "value": print_term(&Term::quote(&value)),
            "steps": steps,
        }))),
    }
}

pub fn cmd_normalise(path: &Path, name: &str, format: Format) -> Outcome {
    let file = match load(path) {
        Ok(f) => f,
        Err(o) => return o,
    };
    let Some((ty, term)) = file.defs.terms.get(name) else {
        return Outcome::fail(EXIT_PARSE, String::new(), format!("no term named `{name}`"));
    };
    let normal = match normalise(term, ty) {
        Ok(n) => n,
        Err(e) => return Outcome::fail(EXIT_EVAL, String::new(), e),
    };
    match format {
        Format::Text => Outcome::ok(format!("{}\n", print_program(&normal))),
        Format::Json => Outcome::ok(json_out(&json!({
            "name": name,
            "type": print_ty(ty),
            "normal_form": print_term(&normal),
            "listing": print_program(&normal),
        }))),
    }
}

pub fn cmd_soundness(config: &SoundnessConfig, format: Format) -> Outcome {
    let report = soundness(config);
    let failed = report.violations > 0
        || report.element_failures > 0
        || (config.variant == Variant::MrPrime && report.empty_crude_types > 0);
    let stdout = match format {
        Format::Text => report.to_text(),
        Format::Json => {
            let mut s = report.to_json();
            s.push('\n');
            s
        }
    };
    Outcome {
        code: if failed { EXIT_SOUNDNESS } else { EXIT_OK },
        stdout,
        stderr: String::new(),
    }
}
