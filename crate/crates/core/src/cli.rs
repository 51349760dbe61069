//! Command-line interface: `gen`, `solve`, `bench`, `stats` and `count`.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on I/O errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{
    describe, empirical_rld, read_records, run_experiment, write_records, write_rld, write_stats,
    Algorithm, ExperimentConfig, Stats,
};
use crate::counting::{count_structures, stirling2_row};
use crate::exact::{
    brute_force_search, dp_optimal, idp_optimal, sandholm_anytime, splitting_counts, AnytimePhase,
};
use crate::grasp::{
    grasp_solve, rii_solve, GraspParams, DEFAULT_CUTOFF_OPS, DEFAULT_RII_STEPS,
    DEFAULT_WALK_PROBABILITY,
};
use crate::instance::Instance;
use crate::instances::{
    derive_seed, generate_instance, read_instance, write_instance, Distribution,
};
use crate::neighborhoods::NeighborhoodOp;
use crate::pathrelink::{grasp_pr_solve, GraspPrParams, RelinkStrategy, DEFAULT_MAX_ELITE};
use crate::structure::CoalitionStructure;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "csg",
    version,
    about = "Coalition structure generation solvers and benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a random instance file.
    Gen {
        #[arg(long)]
        agents: usize,
        /// Value distribution: U, US, N, NS or ND.
        #[arg(long)]
        dist: Distribution,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve one instance file and print the best structure.
    Solve {
        #[arg(long, value_enum)]
        algo: SolveAlgo,
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Node cap for the anytime search (unbounded if absent).
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Run a benchmark and write records, run-length and statistics CSVs.
    Bench {
        #[arg(long, value_enum)]
        algo: BenchAlgo,
        #[arg(long, default_value_t = 15)]
        agents: usize,
        /// Comma-separated distributions.
        #[arg(long, value_delimiter = ',', default_value = "U,US,N,NS,ND")]
        dists: Vec<Distribution>,
        /// Instances per distribution.
        #[arg(long, default_value_t = 100)]
        instances: usize,
        /// Runs per instance.
        #[arg(long, default_value_t = 10)]
        runs: usize,
        /// Master seed for instances and runs.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_prefix: String,
        /// Worker threads; the output does not depend on it.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Print statistics of a records CSV.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Print structure and split counts for `agents` agents.
    Count {
        #[arg(long)]
        agents: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveAlgo {
    Grasp,
    GraspPr,
    Rii,
    Dp,
    Idp,
    Sandholm,
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchAlgo {
    Grasp,
    GraspPr,
    Rii,
}

impl From<BenchAlgo> for Algorithm {
    fn from(a: BenchAlgo) -> Self {
        match a {
            BenchAlgo::Grasp => Algorithm::Grasp,
            BenchAlgo::GraspPr => Algorithm::GraspPr,
            BenchAlgo::Rii => Algorithm::Rii,
        }
    }
}

#[derive(Debug, Clone, Args)]
struct SolverArgs {
    /// RII walk parameter: a step is a random walk when u >= wp, so 0.7 walks 30% of the time.
    #[arg(long, default_value_t = DEFAULT_WALK_PROBABILITY)]
    wp: f64,
    /// Non-improving RII steps before local search stops.
    #[arg(long, default_value_t = DEFAULT_RII_STEPS)]
    rii_steps: u64,
    /// GRASP iteration cap (unbounded if absent).
    #[arg(long)]
    max_iter: Option<u64>,
    /// Operation budget per run.
    #[arg(long, default_value_t = DEFAULT_CUTOFF_OPS)]
    cutoff_ops: u64,
    /// Elite pool size for path-relinking.
    #[arg(long, default_value_t = DEFAULT_MAX_ELITE)]
    elite: usize,
    /// Relinking direction: f (forward), b (backward) or fb (both).
    #[arg(long, default_value_t = RelinkStrategy::Forward)]
    relink: RelinkStrategy,
    /// Neighbourhood: sm (split/merge) or s (shift).
    #[arg(long, default_value_t = NeighborhoodOp::SplitMerge)]
    neigh: NeighborhoodOp,
}

impl SolverArgs {
    fn params(&self) -> GraspPrParams {
        GraspPrParams {
            grasp: GraspParams {
                max_iter: self.max_iter,
                neigh_op: self.neigh,
                rii_steps: self.rii_steps,
                wp: self.wp,
                cutoff_ops: self.cutoff_ops,
                target_value: None,
            },
            max_elite: self.elite,
            strategy: self.relink,
        }
    }
}

/// Failure of a command, mapped to an exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) => m,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn io_at(path: &Path) -> impl Fn(&dyn std::fmt::Display) -> Failure + '_ {
    move |e| Failure::Io(format!("{}: {e}", path.display()))
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Gen {
            agents,
            dist,
            seed,
            out: path,
        } => {
            let inst = generate_instance(agents, dist, seed).map_err(usage)?;
            let file = File::create(&path).map_err(|e| io_at(&path)(&e))?;
            let mut w = BufWriter::new(file);
            write_instance(&inst, &mut w)
                .and_then(|_| w.flush())
                .map_err(|e| io_at(&path)(&e))?;
            Ok(())
        }
        Command::Solve {
            algo,
            input,
            solver,
            seed,
            budget,
        } => {
            let inst = load_instance(&input)?;
            solve(&inst, algo, &solver, seed, budget, out).map_err(|e| {
                if e.is::<UsageError>() {
                    Failure::Usage(e.to_string())
                } else {
                    Failure::Io(e.to_string())
                }
            })
        }
        Command::Bench {
            algo,
            agents,
            dists,
            instances,
            runs,
            seed,
            out_prefix,
            jobs,
            solver,
        } => bench(
            algo.into(),
            agents,
            &dists,
            instances,
            runs,
            seed,
            &out_prefix,
            jobs,
            &solver,
            out,
        ),
        Command::Stats { input } => {
            let file = File::open(&input).map_err(|e| io_at(&input)(&e))?;
            let records = read_records(BufReader::new(file)).map_err(|e| io_at(&input)(&e))?;
            let stats = describe(&records).map_err(usage)?;
            print_stats(out, &[("all".to_string(), stats)]).map_err(|e| Failure::Io(e.to_string()))
        }
        Command::Count { agents } => {
            if agents == 0 {
                return Err(usage("agent count must be at least 1"));
            }
            count(agents, out).map_err(|e| Failure::Io(e.to_string()))
        }
    }
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    let file = File::open(path).map_err(|e| io_at(path)(&e))?;
    read_instance(BufReader::new(file)).map_err(|e| io_at(path)(&e))
}

fn print_structure(
    out: &mut dyn Write,
    cs: &CoalitionStructure,
    value: f64,
) -> std::io::Result<()> {
    writeln!(out, "structure {} {}", cs, cs.to_block_string())?;
    writeln!(out, "value {value}")
}

fn solve(
    inst: &Instance,
    algo: SolveAlgo,
    solver: &SolverArgs,
    seed: u64,
    budget: Option<u64>,
    out: &mut dyn Write,
) -> Result<(), Box<dyn std::error::Error>> {
    let params = solver.params();
    let stochastic = match algo {
        SolveAlgo::Grasp => Some(grasp_solve(inst, &params.grasp, seed)),
        SolveAlgo::GraspPr => Some(grasp_pr_solve(inst, &params, seed)),
        SolveAlgo::Rii => Some(rii_solve(inst, &params.grasp, seed)),
        _ => None,
    };
    if let Some(res) = stochastic {
        let res = res.map_err(|e| usage_error(e.to_string()))?;
        print_structure(out, &res.best, res.best_value)?;
        writeln!(
            out,
            "ops construction={} local={} relink={} total={}",
            res.ops.construction,
            res.ops.local_search,
            res.ops.relink,
            res.ops.total()
        )?;
        writeln!(out, "iterations {}", res.iterations)?;
        return Ok(());
    }
    match algo {
        SolveAlgo::Dp | SolveAlgo::Idp | SolveAlgo::Brute => {
            let sol = match algo {
                SolveAlgo::Dp => dp_optimal(inst),
                SolveAlgo::Idp => idp_optimal(inst),
                _ => brute_force_search(inst),
            }
            .map_err(|e| usage_error(e.to_string()))?;
            print_structure(out, &sol.structure, sol.value)?;
            let what = if algo == SolveAlgo::Brute {
                "structures"
            } else {
                "splits"
            };
            writeln!(out, "evaluations {what}={}", sol.evaluations)?;
            writeln!(out, "optimal true")?;
        }
        SolveAlgo::Sandholm => {
            let r = sandholm_anytime(inst, budget);
            print_structure(out, &r.best, r.best_value)?;
            writeln!(out, "nodes {}", r.nodes_searched)?;
            match r.bound {
                Some(b) => writeln!(out, "bound {b}")?,
                None => writeln!(out, "bound none")?,
            }
            writeln!(out, "phase {}", r.phase)?;
            writeln!(out, "optimal {}", r.phase == AnytimePhase::Complete)?;
        }
        _ => unreachable!("stochastic solvers handled above"),
    }
    Ok(())
}

/// Parameter errors discovered while solving are usage errors.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage_error(m: String) -> Box<dyn std::error::Error> {
    Box::new(UsageError(m))
}

/// Seed of instance `index` of distribution `dist` under the bench master seed.
pub fn bench_instance_seed(master: u64, dist: Distribution, index: u64) -> u64 {
    derive_seed(derive_seed(master, dist_stream(dist)), index)
}

/// Master seed of the runs on distribution `dist`.
pub fn bench_run_seed(master: u64, dist: Distribution) -> u64 {
    derive_seed(derive_seed(master, dist_stream(dist)), u64::MAX)
}

fn dist_stream(dist: Distribution) -> u64 {
    let pos = Distribution::ALL
        .iter()
        .position(|&d| d == dist)
        .expect("listed distribution");
    u64::MAX - 1 - pos as u64
}

#[allow(clippy::too_many_arguments)]
fn bench(
    algo: Algorithm,
    agents: usize,
    dists: &[Distribution],
    instances: usize,
    runs: usize,
    seed: u64,
    prefix: &str,
    jobs: usize,
    solver: &SolverArgs,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let params = solver.params();
    params.grasp.validate().map_err(usage)?;
    if params.max_elite == 0 {
        return Err(usage("elite pool size must be at least 1"));
    }
    if instances == 0 || runs == 0 {
        return Err(usage("instances and runs must be at least 1"));
    }
    if let Some(dir) = Path::new(prefix)
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
    {
        std::fs::create_dir_all(dir).map_err(|e| io_at(dir)(&e))?;
    }
    let mut summary: Vec<(String, Stats)> = Vec::new();
    for &dist in dists {
        let insts = (0..instances as u64)
            .map(|i| generate_instance(agents, dist, bench_instance_seed(seed, dist, i)))
            .collect::<crate::error::Result<Vec<_>>>()
            .map_err(usage)?;
        let config = ExperimentConfig {
            algorithm: algo,
            params: params.clone(),
            runs_per_instance: runs,
            master_seed: bench_run_seed(seed, dist),
            jobs,
        };
        let records = run_experiment(&insts, &config).map_err(usage)?;
        let path = PathBuf::from(format!("{prefix}_{}_records.csv", dist.tag()));
        let file = File::create(&path).map_err(|e| io_at(&path)(&e))?;
        write_records(&records, BufWriter::new(file)).map_err(|e| io_at(&path)(&e))?;
        let curve = empirical_rld(&records, params.grasp.cutoff_ops);
        let path = PathBuf::from(format!("{prefix}_{}_rld.csv", dist.tag()));
        let file = File::create(&path).map_err(|e| io_at(&path)(&e))?;
        write_rld(&curve, BufWriter::new(file)).map_err(|e| io_at(&path)(&e))?;
        summary.push((dist.tag().to_string(), describe(&records).map_err(usage)?));
    }
    let path = PathBuf::from(format!("{prefix}_stats.csv"));
    let file = File::create(&path).map_err(|e| io_at(&path)(&e))?;
    write_stats(
        summary.iter().map(|(l, s)| (l.as_str(), s)),
        BufWriter::new(file),
    )
    .map_err(|e| io_at(&path)(&e))?;
    print_stats(out, &summary).map_err(|e| Failure::Io(e.to_string()))
}

fn print_stats(out: &mut dyn Write, rows: &[(String, Stats)]) -> std::io::Result<()> {
    writeln!(
        out,
        "{:<6} {:>6} {:>14} {:>12} {:>12} {:>14} {:>8} {:>8} {:>6}",
        "dist", "runs", "mean", "min", "max", "stddev", "vc", "q75/q25", "#opt"
    )?;
    for (label, s) in rows {
        writeln!(
            out,
            "{:<6} {:>6} {:>14.1} {:>12} {:>12} {:>14.1} {:>8.2} {:>8.2} {:>6}",
            label, s.runs, s.mean, s.min, s.max, s.stddev, s.vc, s.quantile_ratio, s.opt_count
        )?;
    }
    Ok(())
}

fn count(n: usize, out: &mut dyn Write) -> std::io::Result<()> {
    let row: Vec<String> = stirling2_row(n)
        .iter()
        .skip(1)
        .map(|z| z.to_string())
        .collect();
    let splits = splitting_counts(n);
    writeln!(out, "agents {n}")?;
    writeln!(out, "stirling {}", row.join(" "))?;
    writeln!(out, "bell {}", count_structures(n))?;
    writeln!(out, "s_dp {}", splits.dp)?;
    writeln!(out, "s_idp {}", splits.idp)
}
