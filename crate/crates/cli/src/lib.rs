//! Job parsing, command dispatch and report documents for the `tiltkit`
//! binary.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use tiltkit::context::Context;
use tiltkit::error::Error;
use tiltkit::strat::Verdict;
use tiltkit::text::{self, Document, DEFAULT_DEPTH};
use tiltkit::{Field, Presentation, StratOrder};

mod commands;

/// Bumped whenever a report field changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Validate,
    Stratify,
    StandardModules,
    Tilting,
    Classify,
    Ringel,
    Koszul,
    Commute,
    SimplesAsTilting,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Stratify => "stratify",
            Command::StandardModules => "standard-modules",
            Command::Tilting => "tilting",
            Command::Classify => "classify",
            Command::Ringel => "ringel",
            Command::Koszul => "koszul",
            Command::Commute => "commute",
            Command::SimplesAsTilting => "simples-as-tilting",
        }
    }
}

/// Outcome classes and their exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Computed,
    Violated,
    Undetermined,
    InputError,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Computed => 0,
            Status::Violated => 1,
            Status::Undetermined => 2,
            Status::InputError => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Computed => "computed",
            Status::Violated => "violated",
            Status::Undetermined => "undetermined",
            Status::InputError => "input-error",
        }
    }

    pub fn from_verdict(v: Verdict) -> Status {
        match v {
            Verdict::Holds => Status::Computed,
            Verdict::Violated => Status::Violated,
            Verdict::Undetermined => Status::Undetermined,
        }
    }
}

/// A fully resolved job.
#[derive(Clone, Debug)]
pub struct JobSpec {
    pub presentation: Presentation,
    pub order: StratOrder,
    pub truncation: usize,
    pub depth: usize,
    pub command: Command,
}

/// Overrides given on the command line; they win over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub truncation: Option<usize>,
    pub depth: Option<usize>,
    pub field: Option<Field>,
}

pub fn parse_input(text: &str, command: Command, ov: &Overrides) -> Result<JobSpec, Error> {
    let doc = Document::parse(text)?;
    if ov.truncation == Some(0) || ov.depth == Some(0) {
        return Err(Error::Usage("truncation and depth must be at least 1".into()));
    }
    let presentation = doc.presentation(ov.field, ov.truncation)?;
    Ok(JobSpec { truncation: presentation.truncation, depth: ov.depth.or(doc.depth).unwrap_or(DEFAULT_DEPTH), order: doc.order(), presentation, command })
}

/// Report body of one command: result fields, fields whose values do not
/// depend on the truncation, a status and a one-paragraph summary.
pub struct Body {
    pub result: Value,
    pub exact: BTreeMap<String, Value>,
    pub status: Status,
    pub summary: String,
}

pub struct Outcome {
    pub report: Value,
    pub summary: String,
    pub status: Status,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        self.status.code()
    }
}

fn input_section(job: &JobSpec) -> Value {
    let p = &job.presentation;
    let q = &p.quiver;
    let names = |c: &[usize]| c.iter().map(|&v| q.vertices[v].clone()).collect::<Vec<_>>();
    json!({
        "field": text::field_name(p.field),
        "vertices": q.vertices,
        "arrows": q.arrows.iter().map(|a| json!({"name": a.name, "src": q.vertices[a.src], "dst": q.vertices[a.dst], "degree": a.degree})).collect::<Vec<_>>(),
        "relations": p.relations.len(),
        "order": {
            "classes": job.order.classes().iter().map(|c| names(c)).collect::<Vec<_>>(),
            "relations": job.order.relations().iter().map(|&(a, b)| json!([names(&job.order.classes()[a]), names(&job.order.classes()[b])])).collect::<Vec<_>>(),
        },
        "truncation": job.truncation,
        "depth": job.depth,
    })
}

fn document(command: &str, input: Value, body: Body) -> Outcome {
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    m.insert("input".into(), input);
    m.insert("status".into(), json!(body.status.as_str()));
    m.insert("exit_code".into(), json!(body.status.code()));
    m.insert("summary".into(), json!(body.summary));
    m.insert("result".into(), body.result);
    m.insert("exact".into(), Value::Object(body.exact.into_iter().collect()));
    Outcome { report: Value::Object(m), summary: body.summary, status: body.status }
}

/// Report for an input that never reached the engine.
pub fn input_error(command: Option<Command>, err: &Error) -> Outcome {
    let body = Body { result: json!({ "error": err.to_string() }), exact: BTreeMap::new(), status: Status::InputError, summary: format!("input error: {err}") };
    document(command.map_or("unknown", Command::name), Value::Null, body)
}

/// Runs one job. Engine refusals become `violated` reports; malformed input
/// becomes an `input-error` report.
pub fn run(job: &JobSpec) -> Outcome {
    let input = input_section(job);
    let ctx = match Context::new(&job.presentation, job.order.clone(), job.depth) {
        Ok(c) => c,
        Err(e) => return input_error(Some(job.command), &e),
    };
    let body = match commands::dispatch(job, &ctx) {
        Ok(b) => b,
        Err(Error::Refused(msg)) => {
            Body { result: json!({ "refused": msg }), exact: BTreeMap::new(), status: Status::Violated, summary: format!("refused: {msg}") }
        }
        Err(e) => return input_error(Some(job.command), &e),
    };
    document(job.command.name(), input, body)
}

/// Parses and runs in one step.
pub fn run_text(text: &str, command: Command, ov: &Overrides) -> Outcome {
    match parse_input(text, command, ov) {
        Ok(job) => run(&job),
        Err(e) => input_error(Some(command), &e),
    }
}
