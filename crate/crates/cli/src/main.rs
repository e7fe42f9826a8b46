//! Command-line workbench: construct, verify, analyze, bound, and export.
//!
//! Exit codes are part of the interface: 0 success or valid object,
//! 1 invalid object, 2 usage or parse error, 3 budget exceeded.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use qvsp::budget::Budget;
use qvsp::constructions::{
    all_t_subspaces, concat_sets, f27_construction, lift_set, lifted_mrd, mrd_partition,
    subfield_spread, F27Variant,
};
use qvsp::divisibility::{
    exclusion_check, min_card_bound, pair_profile, spectrum, tail_bound, Exclusion, SubspaceSet,
};
use qvsp::error::Error;
use qvsp::format::{field_for_order, CollectionFile, SpectrumFile};
use qvsp::lp::{
    build_ilp, export_lp, solve_ilp_small, solve_lp_with_deadline, IlpStatus, LpStatus,
    DEFAULT_ILP_NODE_BUDGET,
};
use qvsp::partition::verify_partition;

const EXIT_INVALID: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

/// Workbench for vector space t-partitions and divisible sets of
/// t-subspaces over small Galois fields.
#[derive(Parser)]
#[command(name = "qvsp", version, max_term_width = 100)]
struct Cli {
    /// Enumeration budget (max subspaces per enumeration); falls back to
    /// the QVSP_BUDGET environment variable, then to 10^7.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a registered construction and emit its JSON object.
    Construct(ConstructArgs),
    /// Check that a collection file is a vector space t-partition.
    Verify(VerifyArgs),
    /// Hyperplane spectrum and divisibility of a set file.
    Spectrum(SpectrumArgs),
    /// Bound calculators and literature fixtures.
    Bound(BoundArgs),
    /// Build, export, and optionally solve the plane-packing programs.
    Lp(LpArgs),
    /// Parse a previously emitted report and echo a summary.
    Replay(ReplayArgs),
}

#[derive(Args)]
struct ConstructArgs {
    /// One of: lifted-mrd, mrd-partition, f27-a, f27-b, spread, all-grid,
    /// lift, concat.
    name: String,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    v: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    t: Option<u32>,
    #[arg(long)]
    a: Option<u32>,
    /// Lift amount for `lift`.
    #[arg(long)]
    s: Option<u32>,
    /// Input file for `lift` and `concat`.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Second input file for `concat`.
    #[arg(long)]
    file2: Option<PathBuf>,
    /// Write the object here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    file: PathBuf,
    /// Cover dimension to verify against; defaults to the file's `t`.
    #[arg(long)]
    t: Option<u32>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    file: PathBuf,
    /// Also compute the pair-span profile.
    #[arg(long)]
    pairs: bool,
}

#[derive(Args)]
struct BoundArgs {
    #[command(subcommand)]
    which: BoundCommand,
}

#[derive(Subcommand)]
enum BoundCommand {
    /// Minimum cardinality of a q^r-divisible set of t-subspaces.
    MinCard {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        r: u32,
    },
    /// Minimum cardinality for pairwise disjoint k-subspaces.
    Tail {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        divisible: bool,
    },
    /// Small-cardinality exclusion for point sets.
    Exclusion {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        n: u64,
    },
    /// Plane-count bound from the solid count, dimension 7 over F_2.
    M3 {
        #[arg(long)]
        m4: u32,
    },
    /// The bound q^{2(v-k)} for one large member plus k-subspaces.
    MrdLike {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        v: u32,
        #[arg(long)]
        k: u32,
    },
    /// Literature value for the maximum code size A_q(v, d; k).
    Fixture {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        v: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        k: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveMode {
    /// Exact integer optimum by branch and bound.
    Small,
    /// Exact rational optimum of the LP relaxation.
    Relaxation,
}

#[derive(Args)]
struct LpArgs {
    /// Build the model over an empty solid set.
    #[arg(long, conflicts_with = "from_partition")]
    empty: bool,
    #[arg(long, requires = "empty")]
    q: Option<u32>,
    #[arg(long, requires = "empty")]
    v: Option<u32>,
    /// Take the solid members of a partition file as the fixed set.
    #[arg(long)]
    from_partition: Option<PathBuf>,
    /// Write the model in LP text format to this path.
    #[arg(long)]
    export: Option<PathBuf>,
    #[arg(long, value_enum)]
    solve: Option<SolveMode>,
    /// Allow solving models beyond the desk-scale variable limit.
    #[arg(long)]
    force_budget: bool,
    /// Node budget for `--solve small`.
    #[arg(long)]
    node_budget: Option<u64>,
    /// Wall-clock limit in seconds for forced relaxation solves.
    #[arg(long, default_value_t = 600)]
    time_limit: u64,
}

#[derive(Args)]
struct ReplayArgs {
    #[arg(long)]
    file: PathBuf,
}

#[derive(Serialize)]
struct CommandReport<'a> {
    command: &'a str,
    params: serde_json::Value,
    result: serde_json::Value,
    elapsed_ms: u128,
    version: &'a str,
}

fn emit_report(command: &str, params: serde_json::Value, result: serde_json::Value, started: Instant) {
    let report = CommandReport {
        command,
        params,
        result,
        elapsed_ms: started.elapsed().as_millis(),
        version: env!("CARGO_PKG_VERSION"),
    };
    println!("{}", serde_json::to_string(&report).expect("serializable report"));
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Budget(_) => EXIT_BUDGET,
        Error::Invalid(_) => EXIT_INVALID,
        _ => EXIT_USAGE,
    }
}

fn fail(err: Error) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(exit_code_for(&err))
}

/// Writes through a temporary file in the target directory and renames.
fn write_atomic(path: &Path, contents: &str) -> qvsp::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = match dir {
        Some(d) => tempfile::NamedTempFile::new_in(d)?,
        None => tempfile::NamedTempFile::new_in(".")?,
    };
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn load_collection(path: &Path) -> qvsp::Result<CollectionFile> {
    let text = std::fs::read_to_string(path)?;
    CollectionFile::from_json(&text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = Budget {
        max_subspaces: cli
            .budget
            .or_else(|| {
                std::env::var("QVSP_BUDGET")
                    .ok()
                    .and_then(|s| s.parse().ok())
            })
            .unwrap_or(qvsp::budget::DEFAULT_MAX_SUBSPACES),
        max_nodes: qvsp::budget::DEFAULT_MAX_NODES,
    };
    let result = match cli.command {
        Command::Construct(args) => cmd_construct(args, &budget),
        Command::Verify(args) => cmd_verify(args, &budget),
        Command::Spectrum(args) => cmd_spectrum(args, &budget),
        Command::Bound(args) => cmd_bound(args),
        Command::Lp(args) => cmd_lp(args, &budget),
        Command::Replay(args) => cmd_replay(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => fail(err),
    }
}

fn cmd_construct(args: ConstructArgs, budget: &Budget) -> qvsp::Result<ExitCode> {
    let need = |opt: Option<u32>, name: &str| {
        opt.ok_or_else(|| Error::Domain(format!("construction requires --{name}")))
    };
    let field_of = |q: Option<u32>| field_for_order(q.unwrap_or(2));
    let file: CollectionFile = match args.name.as_str() {
        "lifted-mrd" => {
            let field = field_of(args.q)?;
            let (v, k, d) = (need(args.v, "v")?, need(args.k, "k")?, need(args.d, "d")?);
            let code = lifted_mrd(&field, v, k, d, budget)?;
            CollectionFile::from_subspaces(field.order(), v, k, &code.codewords)
        }
        "mrd-partition" => {
            let field = field_of(args.q)?;
            let (v, k, t) = (need(args.v, "v")?, need(args.k, "k")?, need(args.t, "t")?);
            CollectionFile::from_partition(&mrd_partition(&field, v, k, t, budget)?)
        }
        "f27-a" | "f27-b" => {
            let field = field_of(args.q)?;
            let variant = if args.name == "f27-a" {
                F27Variant::A
            } else {
                F27Variant::B
            };
            CollectionFile::from_partition(&f27_construction(&field, variant, budget)?)
        }
        "spread" => {
            let field = field_of(args.q)?;
            let (t, a) = (need(args.t, "t")?, need(args.a, "a")?);
            let spread = subfield_spread(&field, t, a, budget)?;
            CollectionFile::from_set(&spread.to_set(&field)?)
        }
        "all-grid" => {
            let field = field_of(args.q)?;
            let (v, t) = (need(args.v, "v")?, need(args.t, "t")?);
            CollectionFile::from_set(&all_t_subspaces(&field, v, t, budget)?)
        }
        "lift" => {
            let path = args
                .file
                .ok_or_else(|| Error::Domain("lift requires --file".into()))?;
            let s = need(args.s, "s")?;
            let file = load_collection(&path)?;
            let (field, members) = file.decode()?;
            let set = SubspaceSet::new(&field, file.v, file.t, members)?;
            CollectionFile::from_set(&lift_set(&field, &set, s)?)
        }
        "concat" => {
            let p1 = args
                .file
                .ok_or_else(|| Error::Domain("concat requires --file".into()))?;
            let p2 = args
                .file2
                .ok_or_else(|| Error::Domain("concat requires --file2".into()))?;
            let f1 = load_collection(&p1)?;
            let f2 = load_collection(&p2)?;
            let (field, m1) = f1.decode()?;
            let (field2, m2) = f2.decode()?;
            if field.order() != field2.order() {
                return Err(Error::Domain("concat inputs use different fields".into()));
            }
            let s1 = SubspaceSet::new(&field, f1.v, f1.t, m1)?;
            let s2 = SubspaceSet::new(&field2, f2.v, f2.t, m2)?;
            CollectionFile::from_set(&concat_sets(&field, &s1, &s2)?)
        }
        other => {
            return Err(Error::Domain(format!(
                "unknown construction '{other}'; registered: lifted-mrd, mrd-partition, f27-a, f27-b, spread, all-grid, lift, concat"
            )))
        }
    };
    let json = file.to_json();
    match args.out {
        Some(path) => write_atomic(&path, &json)?,
        None => print!("{json}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs, budget: &Budget) -> qvsp::Result<ExitCode> {
    let started = Instant::now();
    let file = load_collection(&args.file)?;
    let (field, members) = file.decode()?;
    let t = args.t.unwrap_or(file.t);
    let report = verify_partition(&field, t, &members, budget)?;
    let result = match (&report.ptype, &report.witness) {
        (Some(ptype), _) => json!({
            "valid": true,
            "type": ptype.to_string(),
            "type_star": ptype.render_star(),
        }),
        (_, Some(w)) => json!({
            "valid": false,
            "witness": { "rows": w.subspace.text_rows(), "count": w.count },
        }),
        _ => unreachable!(),
    };
    emit_report(
        "verify",
        json!({ "file": args.file, "t": t }),
        result,
        started,
    );
    Ok(if report.valid {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_INVALID)
    })
}

fn cmd_spectrum(args: SpectrumArgs, budget: &Budget) -> qvsp::Result<ExitCode> {
    let started = Instant::now();
    let file = load_collection(&args.file)?;
    let (field, members) = file.decode()?;
    let set = SubspaceSet::new(&field, file.v, file.t, members)?;
    let spec = spectrum(&field, &set, budget)?;
    let mut result = serde_json::to_value(SpectrumFile::from_spectrum(&spec))
        .expect("serializable spectrum");
    if args.pairs {
        let prof = pair_profile(&field, &set, budget)?;
        let b: std::collections::BTreeMap<String, u64> = prof
            .counts
            .iter()
            .map(|(&i, &c)| (i.to_string(), c))
            .collect();
        result["b"] = serde_json::to_value(b).expect("serializable profile");
    }
    emit_report(
        "spectrum",
        json!({ "file": args.file, "pairs": args.pairs }),
        result,
        started,
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_bound(args: BoundArgs) -> qvsp::Result<ExitCode> {
    let started = Instant::now();
    let (params, result) = match args.which {
        BoundCommand::MinCard { q, t, r } => {
            let b = min_card_bound(q, t, r)?;
            (
                json!({ "q": q, "t": t, "r": r }),
                json!({
                    "method": "closed-form",
                    "divisible_case": b.divisible_case.to_string(),
                    "nondivisible_case": b.nondivisible_case.to_string(),
                    "kappa": b.kappa,
                    "kappa_term_applied": b.kappa_term_applied,
                }),
            )
        }
        BoundCommand::Tail { q, k, r, divisible } => {
            let b = tail_bound(q, k, r, divisible)?;
            (
                json!({ "q": q, "k": k, "r": r, "divisible": divisible }),
                json!({ "method": "closed-form", "bound": b.to_string() }),
            )
        }
        BoundCommand::Exclusion { q, r, n } => {
            let outcome = exclusion_check(q, r, n)?;
            let result = match outcome {
                Exclusion::Excluded => json!({ "method": "closed-form", "excluded": true }),
                Exclusion::Representable { a, b } => {
                    json!({ "method": "closed-form", "excluded": false, "witness": { "a": a, "b": b } })
                }
                Exclusion::BeyondRange => {
                    json!({ "method": "closed-form", "excluded": false, "beyond_range": true })
                }
            };
            (json!({ "q": q, "r": r, "n": n }), result)
        }
        BoundCommand::M3 { m4 } => {
            let bound = qvsp::bounds::closed_form_m3_bound(m4)?;
            let method = if m4 == 17 { "fixture" } else { "closed-form" };
            let mut result = json!({ "method": method, "bound": bound });
            if m4 == 17 {
                result["cite"] = json!(qvsp::bounds::m3_table(17).map(|r| r.cite.clone()));
            }
            (json!({ "m4": m4 }), result)
        }
        BoundCommand::MrdLike { q, v, k } => {
            let b = qvsp::bounds::mrd_like_bound(q, v, k)?;
            (
                json!({ "q": q, "v": v, "k": k }),
                json!({ "method": "closed-form", "bound": b.to_string() }),
            )
        }
        BoundCommand::Fixture { q, v, d, k } => match qvsp::bounds::known_values(q, v, d, k) {
            Some(entry) => (
                json!({ "q": q, "v": v, "d": d, "k": k }),
                json!({
                    "method": "fixture",
                    "lower": entry.lower,
                    "upper": entry.upper,
                    "cite": entry.cite,
                }),
            ),
            None => {
                return Err(Error::Domain(format!(
                    "no fixture entry for ({q}, {v}, {d}, {k})"
                )))
            }
        },
    };
    emit_report("bound", params, result, started);
    Ok(ExitCode::SUCCESS)
}

/// Variable count above which solving needs --force-budget; export always
/// works.
const SOLVE_VAR_LIMIT: usize = 5000;

fn cmd_lp(args: LpArgs, budget: &Budget) -> qvsp::Result<ExitCode> {
    let started = Instant::now();
    let (field, v, solids, source) = if let Some(path) = &args.from_partition {
        let file = load_collection(path)?;
        let (field, members) = file.decode()?;
        let solids: Vec<_> = members.into_iter().filter(|m| m.dim() == 4).collect();
        (field, file.v, solids, json!(path))
    } else if args.empty {
        let q = args.q.unwrap_or(2);
        let v = args
            .v
            .ok_or_else(|| Error::Domain("--empty requires --v".into()))?;
        (field_for_order(q)?, v, Vec::new(), json!("empty"))
    } else {
        return Err(Error::Domain(
            "pass either --empty with --q/--v or --from-partition".into(),
        ));
    };
    let model = build_ilp(&field, v, &solids, budget)?;
    let mut result = json!({
        "variables": model.var_count(),
        "constraints": model.constraint_count(),
        "solids": solids.len(),
    });
    if let Some(path) = &args.export {
        let text = export_lp(&model)?;
        write_atomic(path, &text)?;
        result["export"] = json!(path);
        result["bytes"] = json!(text.len());
    }
    if let Some(mode) = args.solve {
        if model.var_count() > SOLVE_VAR_LIMIT && !args.force_budget {
            return Err(Error::Budget(format!(
                "{} variables exceed the solve limit of {SOLVE_VAR_LIMIT}; export only, or pass --force-budget",
                model.var_count()
            )));
        }
        match mode {
            SolveMode::Small => {
                let node_budget = args.node_budget.unwrap_or(DEFAULT_ILP_NODE_BUDGET);
                let ilp = solve_ilp_small(&model, node_budget)?;
                result["solve"] = json!({
                    "method": "ilp",
                    "status": match ilp.status {
                        IlpStatus::Optimal => "optimal",
                        IlpStatus::BudgetExhausted => "budget-exhausted",
                    },
                    "optimum": ilp.objective.to_string(),
                    "upper_bound": ilp.upper_bound.to_string(),
                    "nodes": ilp.nodes,
                });
                if ilp.status == IlpStatus::BudgetExhausted {
                    emit_report("lp", json!({ "source": source, "v": v }), result, started);
                    return Ok(ExitCode::from(EXIT_BUDGET));
                }
            }
            SolveMode::Relaxation => {
                let deadline = Instant::now() + Duration::from_secs(args.time_limit);
                let sol = solve_lp_with_deadline(&model, Some(deadline))?;
                result["solve"] = json!({
                    "method": "lp",
                    "status": match sol.status {
                        LpStatus::Optimal => "optimal",
                        LpStatus::Infeasible => "infeasible",
                        LpStatus::Unbounded => "unbounded",
                    },
                    "optimum": sol.objective.to_string(),
                });
            }
        }
    }
    emit_report("lp", json!({ "source": source, "v": v }), result, started);
    Ok(ExitCode::SUCCESS)
}

fn cmd_replay(args: ReplayArgs) -> qvsp::Result<ExitCode> {
    let started = Instant::now();
    let text = std::fs::read_to_string(&args.file)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let kind = if value.get("command").is_some() {
        "report"
    } else if value.get("members").is_some() {
        "collection"
    } else {
        "json"
    };
    emit_report(
        "replay",
        json!({ "file": args.file }),
        json!({ "kind": kind, "command": value.get("command") }),
        started,
    );
    Ok(ExitCode::SUCCESS)
}
