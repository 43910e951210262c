use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ms2path::bench::{run_benchmark, write_csv, BenchmarkConfig, Method};
use ms2path::optimize::enumerate_simple_cycles;
use ms2path::trajectory::{render_json, render_text, TextHeader};
use ms2path::{
    build_conflict_digraph_with, coarse_digraph_of, detect_closed_2cycles, equivalence_classes,
    ms2_exact_report, partition_positions, Error, Ms2Options, StructurePair, DEFAULT_THETA,
};

#[derive(Parser)]
#[command(name = "ms2path", version, about = "Shortest add/remove/shift refolding paths between RNA secondary structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a folding trajectory and its length.
    Dist(DistArgs),
    /// Report or export the conflict digraph.
    Graph(GraphArgs),
    /// Run the random-instance benchmark and write CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Structure-pair file: optional '>' header, sequence or '-', s, t.
    #[arg(long)]
    input: PathBuf,
    /// Minimum hairpin size.
    #[arg(long, default_value_t = DEFAULT_THETA)]
    theta: usize,
    /// Abort cycle enumeration after this many cycles.
    #[arg(long, default_value_t = Ms2Options::default().max_cycles)]
    max_cycles: usize,
    /// Which shift pairs receive conflict edges.
    #[arg(long, value_enum, default_value_t = Relation::Strict)]
    relation: Relation,
}

#[derive(Args)]
struct DistArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    method: MethodArg,
    /// Only consider shifts moving a pair end by at most this many positions.
    #[arg(long = "locality-d")]
    locality_d: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct GraphArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value_t = Emit::Summary)]
    emit: Emit,
    /// Work on the digraph of equivalence classes instead of shift nodes.
    #[arg(long)]
    coarse: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Sequence lengths as START:STOP:STEP, inclusive.
    #[arg(long, value_parser = parse_lengths)]
    lengths: (usize, usize, usize),
    /// Sequences per length.
    #[arg(long)]
    seqs: usize,
    /// Structure pairs per sequence.
    #[arg(long)]
    structs: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated methods: exact, near, greedy, bnb, pk.
    #[arg(long, value_delimiter = ',', default_value = "exact")]
    methods: Vec<Method>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Fix the number of pairs per structure instead of drawing it.
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_THETA)]
    theta: usize,
    #[arg(long, default_value_t = Ms2Options::default().max_cycles)]
    max_cycles: usize,
    /// Record wall-clock microseconds per run; makes the file nondeterministic.
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Relation {
    /// Touching or crossing pairs, skipping shifts that share two positions.
    Strict,
    /// Touching or crossing pairs, no overlap filter.
    Unfiltered,
}

impl From<Relation> for ms2path::EdgeRelation {
    fn from(r: Relation) -> Self {
        match r {
            Relation::Strict => ms2path::EdgeRelation::Strict,
            Relation::Unfiltered => ms2path::EdgeRelation::Unfiltered,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Exact,
    Near,
    Greedy,
    Bnb,
    Pk,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Exact => Method::Exact,
            MethodArg::Near => Method::Near,
            MethodArg::Greedy => Method::Greedy,
            MethodArg::Bnb => Method::Bnb,
            MethodArg::Pk => Method::Pk,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Dot,
    Summary,
}

fn parse_lengths(text: &str) -> Result<(usize, usize, usize), String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, c] = parts[..] else {
        return Err(format!("expected START:STOP:STEP, got '{text}'"));
    };
    let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("'{x}': {e}"));
    Ok((num(a)?, num(b)?, num(c)?))
}

/// A failure carrying the process exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CycleCapExceeded { .. } | Error::BudgetExceeded { .. } => 3,
            Error::Parse(_)
            | Error::InvalidStructure(_)
            | Error::LengthMismatch { .. }
            | Error::IllegalMove(_)
            | Error::Unsupported(_)
            | Error::Infeasible(_) => 2,
            Error::Cyclic => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

fn read_input(args: &InputArgs) -> Result<StructurePair, Failure> {
    let text = fs::read_to_string(&args.input)
        .map_err(|e| Failure { code: 2, message: format!("{}: {e}", args.input.display()) })?;
    Ok(StructurePair::parse(&text, args.theta)?)
}

fn options(args: &InputArgs, locality: Option<usize>) -> Ms2Options {
    Ms2Options { locality, max_cycles: args.max_cycles, relation: args.relation.into(), ..Ms2Options::default() }
}

fn dist(args: &DistArgs) -> Result<String, Failure> {
    let input = read_input(&args.input)?;
    let opts = options(&args.input, args.locality_d);
    let (traj, graph) = match args.method {
        MethodArg::Exact => {
            let report = ms2_exact_report(&input.s, &input.t, &opts)?;
            (report.trajectory, Some(report.graph))
        }
        other => (Method::from(other).run(&input.s, &input.t, &opts)?, None),
    };
    Ok(match args.format {
        Format::Text => {
            let header = TextHeader { sequence: input.sequence.map(|s| s.to_string()), graph };
            render_text(&traj, &input.t, &header)?
        }
        Format::Json => render_json(&traj, &input.t, graph.as_ref())?,
    })
}

fn graph(args: &GraphArgs) -> Result<String, Failure> {
    let input = read_input(&args.input)?;
    let (s, t) = (&input.s, &input.t);
    let cap = args.input.max_cycles;
    if args.coarse {
        let coarse = coarse_digraph_of(s, t)?;
        return Ok(match args.emit {
            Emit::Dot => coarse.to_dot(),
            Emit::Summary => {
                let cycles = enumerate_simple_cycles(&coarse.adjacency(), cap).complete(cap)?;
                let mut out = format!(
                    "Number of classes: {}\nNumber of arcs: {}\nNumber of cycles: {}\n",
                    coarse.classes.len(),
                    coarse.arcs.len(),
                    cycles.len()
                );
                for class in &coarse.classes {
                    out.push_str(&format!("{class}\n"));
                }
                out
            }
        });
    }
    let g = build_conflict_digraph_with(s, t, args.input.relation.into(), None)?;
    Ok(match args.emit {
        Emit::Dot => g.to_dot(),
        Emit::Summary => {
            let cycles = enumerate_simple_cycles(g.adjacency(), cap).complete(cap)?;
            let closed = detect_closed_2cycles(s, t)?;
            let part = partition_positions(s, t)?;
            let mut out = format!(
                "Number of Nodes: {}\nNumber of edges: {}\nNumber of cycles: {}\nNumber of closed 2-cycles: {}\n",
                g.len(),
                g.edge_count(),
                cycles.len(),
                closed.len()
            );
            for class in equivalence_classes(s, t, &part.a_union_b0())? {
                out.push_str(&format!("{class}\n"));
            }
            out
        }
    })
}

fn bench(args: &BenchArgs) -> Result<String, Failure> {
    let (start, stop, step) = args.lengths;
    let config = BenchmarkConfig {
        start,
        stop,
        step,
        seqs_per_length: args.seqs,
        structs_per_seq: args.structs,
        pairs_per_structure: args.pairs,
        seed: args.seed,
        max_cycles: args.max_cycles,
        methods: args.methods.clone(),
        workers: args.workers,
        theta: args.theta,
        timing: args.timing,
    };
    config.validate()?;
    let records = run_benchmark(&config)?;
    write_records(&args.out, &records)?;
    let capped = records.iter().filter(|r| r.truncated).count();
    Ok(format!("wrote {} records to {} ({capped} hit the cycle cap)\n", records.len(), args.out.display()))
}

fn write_records(path: &Path, records: &[ms2path::bench::BenchmarkRecord]) -> Result<(), Failure> {
    let file = fs::File::create(path).map_err(|e| Failure { code: 1, message: format!("{}: {e}", path.display()) })?;
    write_csv(records, io::BufWriter::new(file))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Dist(args) => dist(args),
        Command::Graph(args) => graph(args),
        Command::Bench(args) => bench(args),
    };
    match result.and_then(|text| Ok(io::stdout().lock().write_all(text.as_bytes())?)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("ms2path: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
