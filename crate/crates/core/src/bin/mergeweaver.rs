use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use mergeweaver::eval::{evaluate_corpus, GoldenKey};
use mergeweaver::merge::{merge_scenario, write_version, MergeError};
use mergeweaver::pipeline::{diff_name, run_dirs, unified_diff, Analysis, PipelineError};

#[derive(Parser)]
#[command(name = "mergeweaver", version, about = "Detect and resolve build conflicts in three-way Java merges")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Textually merge the three versions and write the result to --out.
    Merge {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Report build conflicts of the merged version.
    Detect(RunArgs),
    /// Detect conflicts and propose resolutions under --out.
    Resolve(RunArgs),
    /// Evaluate both strategies over a corpus of scenarios.
    Eval {
        corpus: PathBuf,
        /// Hand-scored key to compare outcomes against.
        #[arg(long)]
        golden: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Inputs {
    #[arg(long)]
    base: PathBuf,
    #[arg(long)]
    left: PathBuf,
    #[arg(long)]
    right: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Write the four entity graphs under OUT/peg/.
    #[arg(long)]
    dump_peg: bool,
    /// Write both branch deltas under OUT/delta/.
    #[arg(long)]
    dump_delta: bool,
    /// Write each resolution's edit script next to its diff.
    #[arg(long)]
    dump_script: bool,
    /// Write match traces of example resolutions next to their diffs.
    #[arg(long)]
    trace: bool,
    /// Leave phase timings out of the report.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Debug)]
enum Failure {
    Pipeline(PipelineError),
    Other(String),
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        Failure::Pipeline(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

fn write_json(path: &Path, v: &impl Serialize) -> Result<(), Failure> {
    if let Some(p) = path.parent() {
        std::fs::create_dir_all(p)?;
    }
    std::fs::write(path, serde_json::to_string_pretty(v)? + "\n")?;
    Ok(())
}

fn emit(report: Option<&Path>, v: &impl Serialize) -> Result<(), Failure> {
    match report {
        Some(p) => write_json(p, v),
        None => {
            println!("{}", serde_json::to_string_pretty(v)?);
            Ok(())
        }
    }
}

fn dumps(a: &Analysis, args: &RunArgs) -> Result<(), Failure> {
    if !(args.dump_peg || args.dump_delta) {
        return Ok(());
    }
    let out = args
        .out
        .as_ref()
        .ok_or_else(|| Failure::Other("--dump-peg and --dump-delta need --out".into()))?;
    if args.dump_peg {
        let fw = &a.fw;
        for (name, g) in [("base", &fw.base), ("left", &fw.left), ("right", &fw.right), ("merged", &fw.merged)] {
            write_json(&out.join("peg").join(format!("{name}.json")), &g.to_dump())?;
        }
    }
    if args.dump_delta {
        write_json(&out.join("delta").join("left.json"), &a.fw.delta_l)?;
        write_json(&out.join("delta").join("right.json"), &a.fw.delta_r)?;
    }
    Ok(())
}

fn write_resolutions(a: &Analysis, out: &Path, args: &RunArgs) -> Result<(), Failure> {
    write_version(&out.join("merged"), a.scenario.am_version().iter())?;
    for (i, (c, rs)) in a.conflicts.iter().zip(&a.resolutions).enumerate() {
        for r in rs.iter() {
            let diff = out.join(diff_name(i, c, r));
            let stem = diff.with_extension("");
            let old = a.scenario.am.get(&r.target_file).map(|f| f.text.as_str()).unwrap_or("");
            std::fs::create_dir_all(&stem)?;
            std::fs::write(&diff, unified_diff(&r.target_file, old, &r.resolved_text))?;
            write_version(&stem, [(&r.target_file, &r.resolved_text)])?;
            if args.dump_script {
                write_json(&stem.with_extension("script.json"), &r.ops)?;
            }
            if let (true, Some(t)) = (args.trace, &r.trace) {
                write_json(&stem.with_extension("trace.json"), t)?;
            }
        }
    }
    Ok(())
}

fn run(args: &RunArgs, resolve: bool) -> Result<(), Failure> {
    let i = &args.inputs;
    let a = run_dirs(&i.base, &i.left, &i.right, resolve)?;
    dumps(&a, args)?;
    if resolve {
        let out = args
            .out
            .as_ref()
            .ok_or_else(|| Failure::Other("resolve needs --out".into()))?;
        write_resolutions(&a, out, args)?;
    }
    let id = i.base.parent().and_then(|p| p.file_name()).map(|s| s.to_string_lossy().into_owned());
    let report = a.report(id.as_deref().unwrap_or(""), !args.no_timing);
    emit(args.report.as_deref(), &report)
}

fn main_inner(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Merge { inputs, out } => {
            let s = merge_scenario(&inputs.base, &inputs.left, &inputs.right).map_err(PipelineError::from)?;
            write_version(&out, s.am_version().iter())?;
            Ok(())
        }
        Cmd::Detect(args) => run(&args, false),
        Cmd::Resolve(args) => run(&args, true),
        Cmd::Eval { corpus, golden, report } => {
            let summary = evaluate_corpus(&corpus).map_err(|e| Failure::Other(e.to_string()))?;
            emit(report.as_deref(), &summary)?;
            if let Some(g) = golden {
                let key = GoldenKey::load(&g).map_err(|e| Failure::Other(e.to_string()))?;
                let diffs = key.mismatches(&summary);
                for d in &diffs {
                    eprintln!("golden mismatch: {d}");
                }
                if !diffs.is_empty() {
                    return Err(Failure::Other(format!("{} golden mismatches", diffs.len())));
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Pipeline(e)) => {
            eprintln!("error: {e}");
            match e {
                PipelineError::Syntax(_) | PipelineError::Peg(_) => ExitCode::from(2),
                PipelineError::Merge(MergeError::TextualConflict { .. }) => ExitCode::from(3),
                _ => ExitCode::FAILURE,
            }
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
