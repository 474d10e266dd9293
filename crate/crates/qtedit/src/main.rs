use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, ValueEnum};

use qtedit::analysis::summarize;
use qtedit::graph::{Edit, Graph, VertexPair};
use qtedit::instance::{parse, InstanceFormat};
use qtedit::record::{ConfigEcho, RunRecord};
use qtedit::search::{solve, BoundKind, SearchConfig};
use qtedit::BranchKind;

#[derive(Parser, Debug)]
#[command(name = "qtedit", version, about = "Exact quasi-threshold edge editing")]
struct Args {
    /// Instance file
    input: PathBuf,

    #[arg(long, value_enum, default_value_t = FormatArg::EdgeList)]
    format: FormatArg,

    #[arg(long, value_enum, default_value_t = BoundArg::LocalSearch)]
    bound: BoundArg,

    #[arg(long, value_enum, default_value_t = BranchingArg::MostPruned)]
    branching: BranchingArg,

    /// Enumerate every optimal solution instead of stopping at the first
    #[arg(long)]
    all: bool,

    #[arg(long, default_value_t = 1)]
    threads: usize,

    /// Seed for the randomized parts of the lower bound
    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Relabel nodes by a seeded random permutation before solving;
    /// 0 keeps the input order. Reported edits use the input ids either way.
    #[arg(long, default_value_t = 0)]
    permutation_seed: u64,

    /// Stop after proving no solution with at most this many edits exists
    #[arg(long)]
    max_k: Option<usize>,

    /// Wall-clock budget in seconds
    #[arg(long, default_value_t = 1000.0)]
    time_limit: f64,

    /// Include the solutions themselves in the output record
    #[arg(long)]
    emit_solutions: bool,

    /// Include the solution-space summary in the output record
    #[arg(long)]
    analyze: bool,

    /// Write the record here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    EdgeList,
    SimilarityMatrix,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BoundArg {
    Basic,
    Update,
    LocalSearch,
    MinDegree,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BranchingArg {
    First,
    Most,
    MostPruned,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&args) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {}", msg);
            ExitCode::from(1)
        }
    }
}

fn run(args: &Args) -> Result<ExitCode, String> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| format!("cannot read {}: {}", args.input.display(), e))?;
    let format = match args.format {
        FormatArg::EdgeList => InstanceFormat::EdgeList,
        FormatArg::SimilarityMatrix => InstanceFormat::SimilarityMatrix,
    };
    let original = parse(&text, format).map_err(|e| e.to_string())?;

    let (working, mapping) = original.permute_nodes(args.permutation_seed);
    let inverse: Vec<usize> = {
        let mut inv = vec![0; mapping.len()];
        for (old, &new) in mapping.iter().enumerate() {
            inv[new] = old;
        }
        inv
    };

    let cfg = SearchConfig {
        bound: match args.bound {
            BoundArg::Basic => BoundKind::Basic,
            BoundArg::Update => BoundKind::Update,
            BoundArg::LocalSearch => BoundKind::LocalSearch,
            BoundArg::MinDegree => BoundKind::MinDegree,
        },
        branching: match args.branching {
            BranchingArg::First => BranchKind::First,
            BranchingArg::Most => BranchKind::Most,
            BranchingArg::MostPruned => BranchKind::MostPruned,
        },
        all_solutions: args.all,
        max_k: args.max_k,
        time_limit: Some(Duration::from_secs_f64(args.time_limit)),
        seed: args.seed,
        threads: args.threads.max(1),
        ..SearchConfig::default()
    };

    let result = solve(&working, &cfg);

    // translate edits back to input node ids
    let solutions: Vec<Vec<Edit>> = result
        .solutions
        .iter()
        .map(|sol| {
            let mut sol: Vec<Edit> = sol
                .iter()
                .map(|e| {
                    let pair = VertexPair::new(inverse[e.pair.u()], inverse[e.pair.v()]);
                    Edit { pair, kind: e.kind }
                })
                .collect();
            sol.sort();
            sol
        })
        .collect();
    debug_assert!(solutions
        .iter()
        .all(|sol| verify_solution(&original, sol)));

    let config = ConfigEcho {
        format: format!("{:?}", args.format),
        bound: format!("{:?}", args.bound),
        branching: format!("{:?}", args.branching),
        all_solutions: args.all,
        threads: cfg.threads,
        seed: args.seed,
        permutation_seed: args.permutation_seed,
        max_k: args.max_k,
        time_limit_seconds: Some(args.time_limit),
    };
    let instance = args
        .input
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| args.input.display().to_string());
    let mut record = RunRecord::new(instance, config, &result);
    record.solution_count = solutions.len();
    if args.emit_solutions {
        let mut sorted = solutions.clone();
        sorted.sort();
        record.solutions = Some(sorted);
    }
    if args.analyze && !solutions.is_empty() {
        record.analysis = Some(summarize(&original, &solutions));
    }

    let json = serde_json::to_string_pretty(&record).map_err(|e| e.to_string())?;
    match &args.output {
        Some(path) => std::fs::write(path, json + "\n")
            .map_err(|e| format!("cannot write {}: {}", path.display(), e))?,
        None => println!("{}", json),
    }

    match result.k_opt {
        Some(k) => {
            eprintln!(
                "solved: k_opt = {}, {} solution(s){}",
                k,
                solutions.len(),
                if result.timed_out { " (enumeration cut short by time limit)" } else { "" }
            );
            Ok(ExitCode::from(0))
        }
        None => {
            eprintln!(
                "budget exhausted: no solution with at most {} edits; proven lower bound {}",
                result.lower_bound.saturating_sub(1),
                result.lower_bound
            );
            Ok(ExitCode::from(2))
        }
    }
}

fn verify_solution(g: &Graph, sol: &[Edit]) -> bool {
    let mut h = g.clone();
    for e in sol {
        if h.toggle_edge(e.pair).kind != e.kind {
            return false;
        }
    }
    qtedit::counters::PairCounters::new(&h).total() == 0
}
