//! `qf`: command-line front end for qf-core.
//!
//! Element indices are 1-based on input and output. JSON is the default
//! format; `--text` renders the same report as an aligned key/value listing.
//! A directory argument expands to its files in sorted order, each processed
//! in isolation.

mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use qf_core::invariants::nilpotency_verdicts;
use qf_core::io::parse_table;
use qf_core::quandle::validate_quandle;
use qf_core::rep::{matrix_group_order, Separation};
use qf_core::{
    conj_quandle, core_quandle, enumerate_morphisms, envelope_report, faithfulness_probe, full_report, parse_group,
    parse_quandle, q_conj, qconj_isomorphism, quandle_rep, separating_finite_quotient, verify_rep, Axiom, Caps,
    EnvelopeModel, Error, FiniteGroup, FiniteQuandle, GroupWord,
};

#[derive(Parser, Debug)]
#[command(name = "qf", version, about = "Finite quandles and their enveloping groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    text: bool,
    /// Worker threads for multi-file input.
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u16).range(1..=256))]
    jobs: Option<u16>,
    /// Resource cap overrides, e.g. `inn=4096,closure=100000`; applied after QF_CAPS.
    #[arg(long, global = true, value_name = "LIST")]
    caps: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the quandle axioms.
    Validate(Inputs),
    /// Orbit count, abelianization, Betti numbers, nilpotency and related invariants.
    Invariants(Inputs),
    /// The central-extension model of the enveloping group.
    Envelope(Inputs),
    /// The image of Q in its enveloping group, and which elements it identifies.
    Qconj(Inputs),
    /// Faithful integral representation of the enveloping group.
    Represent {
        #[command(flatten)]
        inputs: Inputs,
        /// Emit nonzero blocks only.
        #[arg(long)]
        block_sparse: bool,
        /// Word length for the faithfulness probe.
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u16).range(0..=12))]
        length_bound: u16,
    },
    /// Smallest prime whose reduction keeps the elements of Q_conj distinct.
    Separate {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value_t = 97, value_parser = clap::value_parser!(u64).range(2..=100_000))]
        prime_cap: u64,
    },
    /// Structural verdicts: decomposition, injectivity, nilpotency, solvability.
    Classify(Inputs),
    /// All quandle morphisms into Conj(G) or Core(G) for a group table G.
    Homsearch {
        #[command(flatten)]
        inputs: Inputs,
        /// Group file (Cayley table).
        #[arg(long, value_name = "FILE")]
        target: PathBuf,
        #[arg(long, value_enum, default_value_t = TargetKind::Conj)]
        target_group: TargetKind,
    },
}

#[derive(clap::Args, Debug)]
struct Inputs {
    /// Quandle files or directories of them.
    #[arg(required = true, value_name = "PATH")]
    paths: Vec<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum TargetKind {
    Conj,
    Core,
}

/// Result of one input file: a report and the exit code it implies.
struct Outcome {
    report: Value,
    code: u8,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Malformed(_) => 2,
        _ => 1,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Malformed(_) => "malformed",
        Error::Axiom(_) => "axiom",
        Error::Resource { .. } => "resource",
        Error::Domain(_) => "domain",
        Error::Contract(_) => "contract",
        Error::Internal(_) => "internal",
    }
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

fn word_text(w: &GroupWord) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let parts: Vec<String> = w
        .letters()
        .iter()
        .map(|l| format!("{}{}", l.index + 1, if l.inverse { "^-1" } else { "" }))
        .collect();
    parts.join(" ")
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize to JSON")
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}

fn load_quandle(path: &Path) -> Result<FiniteQuandle, Error> {
    parse_quandle(&read(path)?)
}

fn witness_names(axiom: Axiom) -> &'static [&'static str] {
    match axiom {
        Axiom::Idempotence => &["x"],
        Axiom::SelfDistributivity => &["x", "y", "z"],
        Axiom::LeftInvertibility => &["x", "y1", "y2"],
    }
}

/// Error text with element indices shifted to 1-based.
fn message(e: &Error) -> String {
    match e {
        Error::Axiom(v) => {
            let parts: Vec<String> =
                witness_names(v.axiom).iter().zip(&v.witness).map(|(k, w)| format!("{k}={}", w + 1)).collect();
            format!("axiom {} violated at {}", v.axiom.label(), parts.join(", "))
        }
        other => other.to_string(),
    }
}

fn validate(path: &Path) -> Result<Outcome, Error> {
    let table = parse_table(&read(path)?)?;
    let n = table.len();
    match validate_quandle(table) {
        Ok(_) => Ok(Outcome { report: json!({ "valid": true, "n": n, "message": format!("valid quandle, n={n}") }), code: 0 }),
        Err(e @ Error::Axiom(_)) => {
            let Error::Axiom(v) = &e else { unreachable!() };
            let witness: serde_json::Map<String, Value> =
                witness_names(v.axiom).iter().zip(&v.witness).map(|(k, w)| ((*k).to_string(), json!(w + 1))).collect();
            Ok(Outcome {
                report: json!({
                    "valid": false,
                    "n": n,
                    "axiom": &v.axiom.label()[..1],
                    "witness": witness,
                    "message": message(&e),
                }),
                code: 1,
            })
        }
        Err(e) => Err(e),
    }
}

fn qconj_report(q: &FiniteQuandle, caps: &Caps) -> Result<Value, Error> {
    let qc = q_conj(q, caps)?;
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); qc.quandle.len()];
    for (x, &c) in qc.theta.iter().enumerate() {
        classes[c].push(x + 1);
    }
    let identified: Vec<[usize; 2]> =
        classes.iter().flat_map(|c| c.iter().skip(1).map(move |&y| [c[0], y])).collect();
    Ok(json!({
        "size": q.len(),
        "qconj_size": qc.quandle.len(),
        "injective": qc.is_injective(),
        "theta": one_based(&qc.theta),
        "classes": classes,
        "identified_pairs": identified,
        "qconj_table": qc.quandle.table().iter().map(|r| one_based(r)).collect::<Vec<_>>(),
    }))
}

fn represent_report(q: &FiniteQuandle, caps: &Caps, block_sparse: bool, length_bound: usize) -> Result<Value, Error> {
    let qr = quandle_rep(q, caps)?;
    let relation_failure = verify_rep(qr.model.quandle(), &qr.rep)?;
    let probe = faithfulness_probe(&qr.model, &qr.rep, length_bound)?;
    let first = &qr.rep.images[0];
    let matrices: Vec<Value> = qr
        .images
        .iter()
        .map(|m| if block_sparse { to_value(m) } else { to_value(&m.to_dense()) })
        .collect();
    Ok(json!({
        "size": q.len(),
        "qconj_size": qr.qconj.quandle.len(),
        "theta": one_based(&qr.qconj.theta),
        "K": qr.model.k_group(),
        "dim": qr.rep.dim,
        "block_dim": first.block_dim(),
        "block_count": first.perm.len(),
        "relations_hold": relation_failure.is_none(),
        "relation_failure": relation_failure.map(|(x, y)| [x + 1, y + 1]),
        "probe": {
            "length_bound": length_bound,
            "faithful": probe.faithful,
            "ball_size": probe.ball_size,
            "witness": probe.witness.map(|(a, b)| [word_text(&a), word_text(&b)]),
        },
        "format": if block_sparse { "block-sparse" } else { "dense" },
        "matrices": matrices,
    }))
}

fn separate_report(q: &FiniteQuandle, caps: &Caps, prime_cap: u64) -> Result<Value, Error> {
    let Separation { prime, used_qconj, qconj_size, dim, images } = separating_finite_quotient(q, caps, prime_cap)?;
    let order = match matrix_group_order(&images, caps.matrix_group) {
        Ok(o) => Some(o),
        Err(Error::Resource { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(json!({
        "size": q.len(),
        "prime": prime,
        "used_qconj": used_qconj,
        "qconj_size": qconj_size,
        "dim": dim,
        "quotient_order": order,
    }))
}

fn classify_report(q: &FiniteQuandle, caps: &Caps) -> Result<Value, Error> {
    let model = EnvelopeModel::build(q, caps)?;
    let iso = qconj_isomorphism(&model, caps)?;
    let verdicts = nilpotency_verdicts(&model, &iso.conj_model, caps)?;
    let blocks = |p: &qf_core::Partition| p.blocks().iter().map(|b| one_based(b)).collect::<Vec<_>>();
    let orbits = q.orbits();
    Ok(json!({
        "size": q.len(),
        "trivial": q.is_trivial(),
        "indecomposable": orbits.len() == 1,
        "orbits": blocks(&orbits),
        "components": blocks(&q.indecomposable_components(caps)?),
        "injective": iso.qconj.is_injective(),
        "qconj_size": iso.qconj.quandle.len(),
        "abelian_envelope": model.is_abelian(),
        "nilpotent": verdicts.inn,
        "nilpotency_verdicts": verdicts,
        "solvable": model.inn().is_solvable(caps.closure)?,
        "inn_order": model.inn_order(),
    }))
}

fn homsearch_report(q: &FiniteQuandle, g: &FiniteGroup, kind: TargetKind, caps: &Caps) -> Result<Value, Error> {
    let target = match kind {
        TargetKind::Conj => conj_quandle(g),
        TargetKind::Core => core_quandle(g),
    };
    let maps = enumerate_morphisms(q, &target, caps)?;
    let nilpotent = g.is_nilpotent();
    // Into Conj of a nilpotent group every morphism is constant on components.
    let component_constant = if kind == TargetKind::Conj && nilpotent {
        let comps = q.indecomposable_components(caps)?;
        Some(maps.iter().all(|f| comps.blocks().iter().all(|b| b.iter().all(|&x| f[x] == f[b[0]]))))
    } else {
        None
    };
    Ok(json!({
        "size": q.len(),
        "target_group": match kind { TargetKind::Conj => "conj", TargetKind::Core => "core" },
        "target_order": g.order(),
        "target_nilpotent": nilpotent,
        "count": maps.len(),
        "component_constant": component_constant,
        "morphisms": maps.iter().map(|f| one_based(f)).collect::<Vec<_>>(),
    }))
}

fn expand(paths: &[PathBuf]) -> Result<(Vec<PathBuf>, bool), Error> {
    let mut files = Vec::new();
    let mut multi = paths.len() > 1;
    for p in paths {
        if p.is_dir() {
            multi = true;
            let mut entries: Vec<PathBuf> = std::fs::read_dir(p)
                .map_err(|e| Error::Malformed(format!("{}: {e}", p.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file())
                .collect();
            entries.sort();
            files.extend(entries);
        } else {
            files.push(p.clone());
        }
    }
    Ok((files, multi))
}

fn run_one(cmd: &Command, path: &Path, caps: &Caps, target: Option<&FiniteGroup>) -> Result<Outcome, Error> {
    let ok = |report| Outcome { report, code: 0 };
    match cmd {
        Command::Validate(_) => validate(path),
        Command::Invariants(_) => Ok(ok(to_value(&full_report(&load_quandle(path)?, caps)?))),
        Command::Envelope(_) => {
            let model = EnvelopeModel::build(&load_quandle(path)?, caps)?;
            Ok(ok(to_value(&envelope_report(&model)?)))
        }
        Command::Qconj(_) => Ok(ok(qconj_report(&load_quandle(path)?, caps)?)),
        Command::Represent { block_sparse, length_bound, .. } => {
            Ok(ok(represent_report(&load_quandle(path)?, caps, *block_sparse, *length_bound as usize)?))
        }
        Command::Separate { prime_cap, .. } => Ok(ok(separate_report(&load_quandle(path)?, caps, *prime_cap)?)),
        Command::Classify(_) => Ok(ok(classify_report(&load_quandle(path)?, caps)?)),
        Command::Homsearch { target_group, .. } => {
            let g = target.expect("target group is loaded before dispatch");
            Ok(ok(homsearch_report(&load_quandle(path)?, g, *target_group, caps)?))
        }
    }
}

fn inputs(cmd: &Command) -> &[PathBuf] {
    match cmd {
        Command::Validate(i) | Command::Invariants(i) | Command::Envelope(i) | Command::Qconj(i) | Command::Classify(i) => {
            &i.paths
        }
        Command::Represent { inputs, .. } | Command::Separate { inputs, .. } | Command::Homsearch { inputs, .. } => {
            &inputs.paths
        }
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {}", message(e));
    ExitCode::from(exit_code(e))
}

/// Writes to stdout, tolerating a closed pipe.
fn emit(s: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{s}").and_then(|()| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let caps = match Caps::from_env().and_then(|c| match &cli.caps {
        Some(list) => c.with_overrides(list),
        None => Ok(c),
    }) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let target = match &cli.command {
        Command::Homsearch { target, .. } => match read(target).and_then(|t| parse_group(&t)) {
            Ok(g) => Some(g),
            Err(e) => return fail(&e),
        },
        _ => None,
    };
    let (files, multi) = match expand(inputs(&cli.command)) {
        Ok(f) => f,
        Err(e) => return fail(&e),
    };

    if !multi {
        return match run_one(&cli.command, &files[0], &caps, target.as_ref()) {
            Ok(out) => {
                emit(&render::report(&out.report, cli.text));
                ExitCode::from(out.code)
            }
            Err(e) => fail(&e),
        };
    }

    let work = || -> Vec<(Value, u8)> {
        files
            .par_iter()
            .map(|path| {
                let file = path.display().to_string();
                match run_one(&cli.command, path, &caps, target.as_ref()) {
                    Ok(out) => (json!({ "file": file, "report": out.report }), out.code),
                    Err(e) => (
                        json!({ "file": file, "error": { "kind": error_kind(&e), "message": message(&e) } }),
                        exit_code(&e),
                    ),
                }
            })
            .collect()
    };
    let results = match cli.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n as usize).build() {
            Ok(pool) => pool.install(work),
            Err(e) => {
                eprintln!("error: cannot start {n} worker threads: {e}");
                return ExitCode::from(1);
            }
        },
        None => work(),
    };
    let code = results.iter().map(|r| r.1).max().unwrap_or(0);
    let entries: Vec<Value> = results.into_iter().map(|r| r.0).collect();
    emit(&render::many(&entries, cli.text));
    ExitCode::from(code)
}
