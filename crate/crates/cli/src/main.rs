use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mvmatch::batch::{run_batch, BatchItem};
use mvmatch::graph::{
    generate_random, matching_from_pairs, parse_dimacs, parse_matching_pairs, validate_matching,
    write_result, Graph,
};
use mvmatch::oracle::reference_blossom_max;
use mvmatch::{maximum_matching, Backend, InitialMatching, MatchOptions, PhaseStats};

/// Above this many vertices `--verify` only validates the matching.
const VERIFY_ORACLE_MAX_N: u32 = 20_000;

#[derive(Parser)]
#[command(
    name = "mvmatch",
    version,
    about = "Maximum-cardinality matching in general graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Match one graph and print the result.
    Match(MatchArgs),
    /// Run many instances and print a CSV summary.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Reference,
    Inctree,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Reference => Backend::Reference,
            BackendArg::Inctree => Backend::IncrementalTree,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum InitialArg {
    Greedy,
    None,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// DIMACS edge file.
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Random graph with N vertices and M edges (needs --seed).
    #[arg(long = "gen", num_args = 2, value_names = ["N", "M"], requires = "seed")]
    generate: Option<Vec<u64>>,
}

#[derive(Args)]
struct MatchArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "reference")]
    backend: BackendArg,
    #[arg(long, value_enum, default_value = "greedy")]
    initial: InitialArg,
    /// Initial matching as `m u v` lines; overrides --initial.
    #[arg(long, value_name = "PATH")]
    matching: Option<PathBuf>,
    /// Check the result against the reference matcher.
    #[arg(long)]
    verify: bool,
    /// Per-phase CSV.
    #[arg(long, value_name = "PATH")]
    stats: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Generated sizes; each gets `density * n` edges.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<u32>,
    #[arg(long, default_value_t = 4)]
    density: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// DIMACS files, run after the generated instances.
    #[arg(long, value_name = "PATH")]
    input: Vec<PathBuf>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "reference")]
    backend: Vec<BackendArg>,
    #[arg(long, value_enum, default_value = "greedy")]
    initial: InitialArg,
    /// Write the CSV here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_dimacs(&text).with_context(|| format!("parsing {}", path.display()))
}

fn initial(arg: InitialArg) -> InitialMatching {
    match arg {
        InitialArg::Greedy => InitialMatching::Greedy,
        InitialArg::None => InitialMatching::Empty,
    }
}

fn stats_csv(stats: &PhaseStats) -> String {
    let mut out = String::from("phase,l_m,aps,edge_scans,finds,unions,micros\n");
    for (i, p) in stats.phases.iter().enumerate() {
        let lm = p.l_m.map(|l| l.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            i + 1,
            lm,
            p.aps,
            p.edge_scans,
            p.finds,
            p.unions,
            p.micros
        );
    }
    out
}

fn cmd_match(args: MatchArgs) -> Result<()> {
    let g = match (&args.source.input, &args.source.generate) {
        (Some(path), _) => read_graph(path)?,
        (None, Some(nm)) => {
            let n = u32::try_from(nm[0]).context("N does not fit in 32 bits")?;
            generate_random(n, nm[1], args.seed.expect("clap requires --seed"))?
        }
        (None, None) => unreachable!("clap requires one source"),
    };
    let init = match &args.matching {
        Some(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let pairs = parse_matching_pairs(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            InitialMatching::Given(
                matching_from_pairs(&g, &pairs)
                    .with_context(|| format!("in {}", path.display()))?,
            )
        }
        None => initial(args.initial),
    };
    let opts = MatchOptions {
        backend: args.backend.into(),
        initial: init,
        trace: false,
    };
    let (m, stats) = maximum_matching(&g, &opts)?;
    if args.verify {
        let v = validate_matching(&g, &m);
        if !v.is_valid() {
            bail!("result is not a matching: {}", v.problems.join("; "));
        }
        if g.vertex_count() <= VERIFY_ORACLE_MAX_N {
            let want = reference_blossom_max(&g).size();
            if want != m.size() {
                bail!("size {} differs from the reference size {want}", m.size());
            }
        } else {
            eprintln!("note: n > {VERIFY_ORACLE_MAX_N}, size not cross-checked");
        }
    }
    if let Some(path) = &args.stats {
        fs::write(path, stats_csv(&stats))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    std::io::stdout().write_all(write_result(&m, None).as_bytes())?;
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let mut items = Vec::new();
    for &n in &args.sizes {
        let m = args.density * n as u64;
        let graph = generate_random(n, m, args.seed)?;
        items.push(BatchItem {
            name: format!("gen-{n}-{m}-{}", args.seed),
            graph,
        });
    }
    for path in &args.input {
        let name = path.file_stem().map_or_else(
            || path.display().to_string(),
            |s| s.to_string_lossy().into_owned(),
        );
        items.push(BatchItem {
            name,
            graph: read_graph(path)?,
        });
    }
    let mut csv = String::from("instance,n,m,backend,phases,size,max_scans_ratio,total_micros\n");
    let mut per_backend = Vec::new();
    for &b in &args.backend {
        let opts = MatchOptions {
            backend: b.into(),
            initial: initial(args.initial),
            trace: false,
        };
        per_backend.push((Backend::from(b), run_batch(&items, &opts)));
    }
    for i in 0..items.len() {
        for (backend, results) in &per_backend {
            let r = results[i]
                .as_ref()
                .map_err(|e| anyhow::anyhow!("{}: {e}", items[i].name))?;
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{:.4},{}",
                r.name,
                r.n,
                r.m,
                backend,
                r.stats.phases.len(),
                r.size(),
                r.max_scans_ratio(),
                r.total_micros()
            );
        }
    }
    match &args.out {
        Some(path) => {
            fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?
        }
        None => std::io::stdout().write_all(csv.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Match(a) => cmd_match(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
