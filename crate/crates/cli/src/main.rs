//! `opaug`: augment, verify, decompose, measure and generate outerplanar graphs.
//!
//! Exit codes: 0 success, 1 verification failure, 2 not outerplanar, 3 disconnected,
//! 4 unreadable or malformed input, 5 size guard, 64 usage error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use outerplanar_aug::decomposition::{validate_path_decomposition, validate_tree_decomposition};
use outerplanar_aug::oracle::{exact_pathwidth, forbidden_subdivision_search, SUBDIVISION_LIMIT};
use outerplanar_aug::pipeline::prepare;
use outerplanar_aug::stage1::run_stage1;
use outerplanar_aug::stage2::sequence_numbers;
use outerplanar_aug::{
    augment_with, check_outerplanar, generate, verify_pipeline, Attach, Error, GenSpec, Graph, Orientation,
    PathDecomposition, PipelineOptions, TieBreak, Trace, TreeDecomposition,
};

#[derive(Parser)]
#[command(name = "opaug", version, about = "Biconnected outerplanar augmentation with bounded pathwidth")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Augment a connected outerplanar graph to a 2-connected outerplanar supergraph.
    Augment(AugmentArgs),
    /// Check a decomposition, a trace or outerplanarity against a graph.
    Verify(VerifyArgs),
    /// Write the nice path decomposition of the input (and its sequence numbers).
    Decompose(DecomposeArgs),
    /// Print the exact pathwidth (small graphs) or the stage-1 witness width.
    Pathwidth(PathwidthArgs),
    /// Generate a random connected outerplanar graph.
    Gen(GenArgs),
}

#[derive(Args)]
struct AugmentArgs {
    /// Edge-list file, or `-` for standard input.
    input: PathBuf,
    /// Where to write the augmented graph (default: standard output).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Write the final path decomposition here.
    #[arg(long, value_name = "PATH")]
    emit_decomposition: Option<PathBuf>,
    /// Write the full trace here.
    #[arg(long, value_name = "PATH")]
    trace: Option<PathBuf>,
    /// Replay the run through the verifier and write the report here.
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Print stage timings to standard error and include them in the report.
    #[arg(long)]
    timings: bool,
    #[arg(long, value_enum, default_value_t = OrientationArg::Canonical)]
    orientation: OrientationArg,
    /// Break ties among equal sequence numbers pseudorandomly with this seed.
    #[arg(long, value_name = "SEED")]
    tie_break_seed: Option<u64>,
    /// Stage-3 start vertex (a non-cut vertex of the root block).
    #[arg(long)]
    start: Option<usize>,
}

#[derive(Args)]
#[group(id = "target", required = true, multiple = false)]
struct VerifyTarget {
    /// Path decomposition file, one bag per line.
    #[arg(long, value_name = "PATH", group = "target")]
    decomposition: Option<PathBuf>,
    /// Tree decomposition file (`node t: ...` and `edge a b` lines).
    #[arg(long, value_name = "PATH", group = "target")]
    tree_decomposition: Option<PathBuf>,
    /// Trace written by `augment --trace`.
    #[arg(long, value_name = "PATH", group = "target")]
    trace: Option<PathBuf>,
    /// Only test outerplanarity.
    #[arg(long, group = "target")]
    outerplanar: bool,
}

#[derive(Args)]
struct VerifyArgs {
    graph: PathBuf,
    #[command(flatten)]
    target: VerifyTarget,
    /// Include timings in a trace report.
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct DecomposeArgs {
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Write `block <id> seq <index>` lines here.
    #[arg(long, value_name = "PATH")]
    sequence: Option<PathBuf>,
}

#[derive(Args)]
struct PathwidthArgs {
    input: PathBuf,
    /// Compute the exact value (at most 20 vertices).
    #[arg(long)]
    exact: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.5)]
    chord_density: f64,
    #[arg(long, default_value_t = 8)]
    max_block: usize,
    /// 0 favours few large blocks, 1 many small ones.
    #[arg(long, default_value_t = 0.5)]
    block_bias: f64,
    #[arg(long, value_enum, default_value_t = AttachArg::Uniform)]
    attach: AttachArg,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrientationArg {
    Canonical,
    Reversed,
}

#[derive(Clone, Copy, ValueEnum)]
enum AttachArg {
    Uniform,
    Chain,
    Fan,
}

/// A failure with its exit code; the message goes to standard error.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

type Outcome = Result<(), Failure>;

fn from_error(e: Error, g: Option<&Graph>) -> Failure {
    match e {
        Error::Parse { .. } | Error::SelfLoop(_) | Error::VertexOutOfRange { .. } | Error::EmptyGraph => {
            Failure::new(4, e.to_string())
        }
        Error::NotOuterplanar(_) => {
            let mut message = e.to_string();
            if let Some(g) = g.filter(|g| g.n() <= SUBDIVISION_LIMIT) {
                if let Ok(Some(w)) = forbidden_subdivision_search(g) {
                    message.push_str(&format!("\nwitness: {w}"));
                }
            }
            Failure::new(2, message)
        }
        Error::Disconnected => Failure::new(3, e.to_string()),
        Error::SizeGuard { .. } => Failure::new(5, e.to_string()),
        _ => Failure::new(1, e.to_string()),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Failure::new(4, format!("cannot read {}: {e}", path.display())))?;
    Ok(text)
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    Graph::parse(&read_text(path)?).map_err(|e| from_error(e, None))
}

/// Writes through a temporary file in the target directory, then renames it into place.
fn write_atomic(path: &Path, contents: &str) -> Outcome {
    let fail = |e: io::Error| Failure::new(1, format!("cannot write {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(contents.as_bytes()).map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

fn emit(path: Option<&Path>, contents: &str) -> Outcome {
    match path {
        Some(p) if p.as_os_str() != "-" => write_atomic(p, contents),
        _ => io::stdout()
            .write_all(contents.as_bytes())
            .map_err(|e| Failure::new(1, format!("cannot write to standard output: {e}"))),
    }
}

fn cmd_augment(args: AugmentArgs) -> Outcome {
    let g = read_graph(&args.input)?;
    let options = PipelineOptions {
        orientation: match args.orientation {
            OrientationArg::Canonical => Orientation::Canonical,
            OrientationArg::Reversed => Orientation::Reversed,
        },
        root: None,
        tie_break: args.tie_break_seed.map_or(TieBreak::BlockId, TieBreak::Shuffled),
        start: args.start,
    };
    let a = augment_with(&g, options).map_err(|e| from_error(e, Some(&g)))?;
    let trace = a.trace();
    if args.timings {
        let t = &a.timings;
        eprintln!(
            "embed {:?}  stage1 {:?}  stage2 {:?}  stage3 {:?}  total {:?}",
            t.embed,
            t.stage1,
            t.stage2,
            t.stage3,
            t.total()
        );
    }
    let mut verified = true;
    if let Some(path) = &args.report {
        let parsed = Trace::parse(&trace).map_err(|e| Failure::new(1, format!("trace does not parse: {e}")))?;
        let mut report = verify_pipeline(&g, &parsed);
        report.add_timing("embed", a.timings.embed);
        report.add_timing("stage1", a.timings.stage1);
        report.add_timing("stage2", a.timings.stage2);
        report.add_timing("stage3", a.timings.stage3);
        verified = report.ok();
        write_atomic(path, &report.to_text(args.timings))?;
    }
    if let Some(path) = &args.emit_decomposition {
        write_atomic(path, &a.decomposition().to_text())?;
    }
    if let Some(path) = &args.trace {
        write_atomic(path, &trace)?;
    }
    emit(args.output.as_deref(), &a.graph().to_edge_list())?;
    if verified {
        Ok(())
    } else {
        Err(Failure::new(1, "verification of the run failed; see the report"))
    }
}

fn cmd_verify(args: VerifyArgs) -> Outcome {
    let g = read_graph(&args.graph)?;
    let t = args.target;
    if let Some(path) = t.decomposition {
        let pd = PathDecomposition::parse(&read_text(&path)?).map_err(|e| from_error(e, None))?;
        return verdict(
            "decomposition",
            validate_path_decomposition(&g, &pd).map_err(|v| v.to_string()),
            pd.width().ok(),
        );
    }
    if let Some(path) = t.tree_decomposition {
        let td = TreeDecomposition::parse(&read_text(&path)?).map_err(|e| from_error(e, None))?;
        return verdict(
            "tree_decomposition",
            validate_tree_decomposition(&g, &td).map_err(|v| v.to_string()),
            td.width().ok(),
        );
    }
    if let Some(path) = t.trace {
        let trace = Trace::parse(&read_text(&path)?).map_err(|e| from_error(e, None))?;
        let report = verify_pipeline(&g, &trace);
        print!("{}", report.to_text(args.timings));
        return if report.ok() { Ok(()) } else { Err(Failure::new(1, "verification failed")) };
    }
    if !g.is_connected() {
        return Err(from_error(Error::Disconnected, Some(&g)));
    }
    let cert = check_outerplanar(&g).map_err(|e| from_error(e, Some(&g)))?;
    match cert.witness() {
        None => {
            println!("verdict.outerplanar=yes");
            Ok(())
        }
        Some(w) => {
            println!("verdict.outerplanar=no");
            Err(from_error(Error::NotOuterplanar(w.clone()), Some(&g)))
        }
    }
}

fn verdict(key: &str, outcome: Result<(), String>, width: Option<usize>) -> Outcome {
    if let Some(w) = width {
        println!("width={w}");
    }
    match outcome {
        Ok(()) => {
            println!("verdict.{key}=yes");
            Ok(())
        }
        Err(why) => {
            println!("verdict.{key}=no");
            println!("detail={why}");
            Err(Failure::new(1, why))
        }
    }
}

fn cmd_decompose(args: DecomposeArgs) -> Outcome {
    let g = read_graph(&args.input)?;
    let bt = prepare(&g, Orientation::Canonical, None).map_err(|e| from_error(e, Some(&g)))?;
    let s1 = run_stage1(&g, &bt).map_err(|e| from_error(e, Some(&g)))?;
    if let Some(path) = &args.sequence {
        let seq = sequence_numbers(&s1.npd, &bt).map_err(|e| from_error(e, Some(&g)))?;
        write_atomic(path, &seq.to_text())?;
    }
    emit(args.output.as_deref(), &s1.npd.to_text())
}

fn cmd_pathwidth(args: PathwidthArgs) -> Outcome {
    let g = read_graph(&args.input)?;
    let value = if args.exact {
        exact_pathwidth(&g).map_err(|e| from_error(e, Some(&g)))?
    } else {
        let bt = prepare(&g, Orientation::Canonical, None).map_err(|e| from_error(e, Some(&g)))?;
        run_stage1(&g, &bt).map_err(|e| from_error(e, Some(&g)))?.width()
    };
    println!("{value}");
    Ok(())
}

fn cmd_gen(args: GenArgs) -> Outcome {
    if args.n == 0 {
        return Err(Failure::new(64, "--n must be at least 1"));
    }
    for (name, v) in [("--chord-density", args.chord_density), ("--block-bias", args.block_bias)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Failure::new(64, format!("{name} must lie in [0, 1]")));
        }
    }
    let spec = GenSpec {
        seed: args.seed,
        n: args.n,
        block_count_bias: args.block_bias,
        chord_density: args.chord_density,
        max_block_size: args.max_block,
        attach: match args.attach {
            AttachArg::Uniform => Attach::Uniform,
            AttachArg::Chain => Attach::Chain,
            AttachArg::Fan => Attach::Fan,
        },
    };
    emit(args.output.as_deref(), &generate(&spec).to_edge_list())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(64) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Augment(a) => cmd_augment(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Decompose(a) => cmd_decompose(a),
        Command::Pathwidth(a) => cmd_pathwidth(a),
        Command::Gen(a) => cmd_gen(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("opaug: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
