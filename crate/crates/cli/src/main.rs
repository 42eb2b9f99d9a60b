use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use seating::constructions::{
    abf_cycle, abf_path, blockwise_euler, four_class_cycle, hamiltonian_cycle_profile,
    hamiltonian_path_profile, p4_loop, parse_digraph, pm1_path,
    three_class_two_valued_cycle_stable, two_class_stable,
};
use seating::dynamics::{self, expand_chain, Selection, SwapPolicy};
use seating::exact::{self, Limits};
use seating::profile::{
    detect_classes, emit_profile, expand_classes, parse_classes, parse_profile,
};
use seating::randomized::{estimate_expected_stable, lll_bound, Probability};
use seating::search::{self, Mode};
use seating::{judge, polyclass};
use seating::{Arrangement, ClassStructure, Criterion, PreferenceProfile, Topology, TopologyKind};

/// Exchange-stable and envy-free seating arrangements.
#[derive(Parser)]
#[command(name = "seating", version, about)]
struct Cli {
    /// Worker threads for enumerate and sample (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find an arrangement meeting the criterion; exits 2 when none exists.
    Solve(SolveArgs),
    /// Judge a given arrangement.
    Check(CheckArgs),
    /// Run swap dynamics.
    Dynamics(DynamicsArgs),
    /// Emit a named profile family.
    Construct(ConstructArgs),
    /// Build the seating instance of a digraph.
    Reduce(ReduceArgs),
    /// Scan all profiles over a value set for unstable instances.
    Enumerate(EnumerateArgs),
    /// Count stable cycle arrangements of random approval profiles (CSV).
    Sample(SampleArgs),
    /// Expand the exponential rewriting chain.
    Chain(ChainArgs),
}

#[derive(Args)]
struct Input {
    /// Profile as JSON or CSV.
    #[arg(long, conflicts_with = "classes")]
    profile: Option<PathBuf>,
    /// Class structure as JSON.
    #[arg(long)]
    classes: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Exact,
    Polyclass,
    Constructive,
    Auto,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, default_value = "path")]
    topology: TopologyKind,
    #[arg(long, default_value = "stable")]
    criterion: Criterion,
    #[arg(long, value_enum, default_value = "auto")]
    algo: Algo,
    /// Also run exact search and fail if the answers differ.
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, default_value = "path")]
    topology: TopologyKind,
    /// Agent at each seat, comma separated.
    #[arg(long)]
    arrangement: Arrangement,
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    Lexicographic,
    Random,
    MaxGain,
}

#[derive(Args)]
struct DynamicsArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, default_value = "path")]
    topology: TopologyKind,
    #[arg(long, value_enum, default_value = "lexicographic")]
    policy: Policy,
    /// Largest seat distance of a swap.
    #[arg(long)]
    distance: Option<usize>,
    /// Starting arrangement; drawn from the seed when absent.
    #[arg(long)]
    start: Option<Arrangement>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_steps: Option<usize>,
    /// Independent runs from random starts; prints one summary per run.
    #[arg(long)]
    runs: Option<u64>,
    /// Include every intermediate arrangement.
    #[arg(long)]
    trace: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    AbfCycle,
    AbfPath,
    FourClassCycle,
    Pm1Path,
    P4Loop,
    /// Copies of pm1_path(n) joined along an Euler tour.
    Euler,
    /// A stable arrangement of a two- or three-class structure.
    Stable,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(value_enum)]
    family: Family,
    #[arg(long)]
    n: Option<usize>,
    /// Class structure for `stable`.
    #[arg(long)]
    classes: Option<PathBuf>,
    #[arg(long, default_value = "cycle")]
    topology: TopologyKind,
}

#[derive(Clone, Copy, ValueEnum)]
enum Reduction {
    /// Hamiltonian cycle.
    Hc,
    /// Hamiltonian path ending at the last vertex.
    Hp,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(value_enum)]
    problem: Reduction,
    /// Edge list, one "u v" per line, 0-based.
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(
        long,
        default_value = "0,1",
        value_delimiter = ',',
        allow_hyphen_values = true
    )]
    values: Vec<i64>,
    #[arg(long, default_value = "cycle")]
    topology: TopologyKind,
    /// full, sharded or sampled (or a full mode string such as shard:0/4).
    #[arg(long, default_value = "full")]
    mode: String,
    /// Shard a/b for sharded mode.
    #[arg(long)]
    shard: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write each family as profile JSON into this directory.
    #[arg(long)]
    fixtures: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    /// Approval probability, as a fraction or decimal.
    #[arg(long)]
    p: Probability,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: u64,
}

#[derive(Args)]
struct ChainArgs {
    #[arg(long)]
    k: usize,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

enum Instance {
    Agents(PreferenceProfile),
    Classes(ClassStructure),
}

impl Input {
    fn load(&self) -> Result<Instance> {
        match (&self.profile, &self.classes) {
            (Some(p), None) => Ok(Instance::Agents(parse_profile(&read(p)?)?)),
            (None, Some(c)) => Ok(Instance::Classes(parse_classes(&read(c)?)?)),
            _ => bail!("give exactly one of --profile or --classes"),
        }
    }

    fn profile(&self) -> Result<PreferenceProfile> {
        Ok(match self.load()? {
            Instance::Agents(p) => p,
            Instance::Classes(c) => expand_classes(&c),
        })
    }
}

fn print(v: &Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

/// Maps an arrangement of `expand_classes(structure)` back to the agents of
/// the profile the classes were detected in.
fn to_original(members: &[Vec<usize>], expanded: &Arrangement) -> Result<Arrangement> {
    let order: Vec<usize> = members.iter().flatten().copied().collect();
    Ok(Arrangement::new(
        expanded.seats().iter().map(|&e| order[e]).collect(),
    )?)
}

struct Answer {
    arrangement: Option<Arrangement>,
    detail: Value,
}

fn run_algo(algo: Algo, c: &ClassStructure, t: &Topology, criterion: Criterion) -> Result<Answer> {
    match algo {
        Algo::Polyclass => {
            let r = polyclass::search(c, t, criterion, &polyclass::SearchOptions::default())?;
            Ok(Answer {
                arrangement: r.arrangement,
                detail: json!({ "visited": r.visited, "frontier_peak": r.frontier_peak }),
            })
        }
        Algo::Exact => {
            let limits = Limits::default();
            let outcome = if c.k() == c.n() {
                exact::solve_agents(&expand_classes(c), t, criterion, &limits)?
            } else {
                exact::solve_classes(c, t, criterion, &limits)?
            };
            let detail = match &outcome {
                exact::Outcome::None { examined } => json!({ "examined": examined }),
                exact::Outcome::Found(_) => json!({}),
            };
            Ok(Answer {
                arrangement: outcome.into_arrangement(),
                detail,
            })
        }
        Algo::Constructive => {
            if criterion != Criterion::Stable {
                bail!("the constructions only produce stable arrangements");
            }
            let built = match c.k() {
                2 => two_class_stable(c, t)?,
                3 if t.kind() == TopologyKind::Cycle => three_class_two_valued_cycle_stable(c)?,
                k => bail!("no construction covers {k} classes on a {}", t.kind()),
            };
            Ok(Answer {
                arrangement: Some(built.arrangement),
                detail: serde_json::to_value(built.route)?,
            })
        }
        Algo::Auto => unreachable!("resolved before dispatch"),
    }
}

fn solve(args: &SolveArgs) -> Result<ExitCode> {
    let (profile, c, members) = match args.input.load()? {
        Instance::Agents(p) => {
            let part = detect_classes(&p);
            (p, part.structure, Some(part.members))
        }
        Instance::Classes(c) => (expand_classes(&c), c, None),
    };
    let t = Topology::new(args.topology, profile.n())?;
    let algo = match args.algo {
        Algo::Auto if c.k() <= 5 => Algo::Polyclass,
        Algo::Auto => Algo::Exact,
        a => a,
    };
    let answer = run_algo(algo, &c, &t, args.criterion)?;
    let arrangement = match (&answer.arrangement, &members) {
        (Some(a), Some(m)) => Some(to_original(m, a)?),
        (a, _) => a.clone(),
    };
    if let Some(a) = &arrangement {
        if let Err(w) = judge::check(&profile, &t, a, args.criterion) {
            bail!("internal error: {a} fails {}: {w:?}", args.criterion);
        }
    }
    let mut verified = Value::Null;
    if args.verify && !matches!(algo, Algo::Exact) {
        let other = run_algo(Algo::Exact, &c, &t, args.criterion)?;
        if other.arrangement.is_some() != arrangement.is_some() {
            bail!("internal error: exact search disagrees with the selected algorithm");
        }
        verified = Value::Bool(true);
    }
    let algo_name = match algo {
        Algo::Exact => "exact",
        Algo::Polyclass => "polyclass",
        Algo::Constructive => "constructive",
        Algo::Auto => unreachable!(),
    };
    print(&json!({
        "exists": arrangement.is_some(),
        "arrangement": arrangement,
        "topology": args.topology,
        "criterion": args.criterion,
        "algo": algo_name,
        "classes": c.k(),
        "diagnostics": answer.detail,
        "verified": verified,
    }))?;
    Ok(if arrangement.is_some() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn check(args: &CheckArgs) -> Result<()> {
    let p = args.input.profile()?;
    let t = Topology::new(args.topology, p.n())?;
    let a = &args.arrangement;
    if a.len() != p.n() {
        bail!("arrangement has {} seats for {} agents", a.len(), p.n());
    }
    let blocking = judge::blocking_pairs(&p, &t, a);
    let envy = judge::envy_edges(&p, &t, a);
    print(&json!({
        "stable": blocking.is_empty(),
        "envy_free": envy.is_empty(),
        "welfare": judge::welfare(&p, &t, a),
        "blocking_pairs": blocking.iter().map(|w| w.agents).collect::<Vec<_>>(),
        "envy": envy.iter().map(|w| w.agents).collect::<Vec<_>>(),
    }))
}

fn run_dynamics(args: &DynamicsArgs) -> Result<()> {
    let p = args.input.profile()?;
    let n = p.n();
    let t = Topology::new(args.topology, n)?;
    let selection = match args.policy {
        Policy::Lexicographic => Selection::Lexicographic,
        Policy::Random => Selection::SeededRandom,
        Policy::MaxGain => Selection::MaxPotentialGain,
    };
    let policy = SwapPolicy {
        max_distance: args.distance,
        selection,
    };
    let max_steps = args
        .max_steps
        .unwrap_or_else(|| dynamics::default_max_steps(n));
    let needs_seed =
        args.runs.is_some() || args.start.is_none() || selection == Selection::SeededRandom;
    let seed = match (args.seed, needs_seed) {
        (Some(s), _) => s,
        (None, false) => 0,
        (None, true) => bail!("--seed is required for random starts or random selection"),
    };
    if let Some(runs) = args.runs {
        let summaries = dynamics::ensemble(&p, &t, &policy, runs, max_steps, seed)?;
        return print(&serde_json::to_value(summaries)?);
    }
    let start = match &args.start {
        Some(a) => a.clone(),
        None => dynamics::ensemble(&p, &t, &policy, 1, 1, seed)?[0]
            .start
            .clone(),
    };
    let report = dynamics::run(&p, &t, &start, &policy, max_steps, seed)?;
    let mut v = json!({
        "outcome": report.outcome,
        "steps": report.steps(),
        "start": report.start,
        "end": report.last(),
        "potential_increasing": if report.potentials.is_some() {
            Value::Bool(dynamics::audit_potential(&p, &report)?)
        } else {
            Value::Null
        },
    });
    if args.trace {
        v["trace"] = serde_json::to_value(&report.trace)?;
    }
    print(&v)
}

fn construct(args: &ConstructArgs) -> Result<()> {
    let n = || {
        args.n
            .ok_or_else(|| anyhow!("--n is required for this family"))
    };
    let profile = match args.family {
        Family::AbfCycle => abf_cycle(n()?)?,
        Family::AbfPath => abf_path(n()?)?,
        Family::FourClassCycle => four_class_cycle(n()?)?,
        Family::Pm1Path => pm1_path(n()?)?,
        Family::P4Loop => p4_loop(),
        Family::Euler => {
            let b = blockwise_euler(&pm1_path(n()?)?)?;
            return print(&json!({
                "profile": b.profile,
                "arrangement": b.arrangement,
                "components": b.components,
            }));
        }
        Family::Stable => {
            let path = args
                .classes
                .as_ref()
                .ok_or_else(|| anyhow!("--classes is required"))?;
            let c = parse_classes(&read(path)?)?;
            let t = Topology::new(args.topology, c.n())?;
            let built = match c.k() {
                2 => two_class_stable(&c, &t)?,
                3 if args.topology == TopologyKind::Cycle => {
                    three_class_two_valued_cycle_stable(&c)?
                }
                k => bail!("no construction covers {k} classes on a {}", args.topology),
            };
            return print(&serde_json::to_value(&built)?);
        }
    };
    print!("{}", emit_profile(&profile));
    Ok(())
}

fn reduce(args: &ReduceArgs) -> Result<()> {
    let g = parse_digraph(&read(&args.graph)?)?;
    let p = match args.problem {
        Reduction::Hc => hamiltonian_cycle_profile(&g),
        Reduction::Hp => hamiltonian_path_profile(&g)?,
    };
    print!("{}", emit_profile(&p));
    Ok(())
}

fn enumerate(args: &EnumerateArgs) -> Result<()> {
    let mode = match args.mode.as_str() {
        "sharded" => {
            let shard = args
                .shard
                .as_deref()
                .ok_or_else(|| anyhow!("--shard a/b is required"))?;
            format!("shard:{shard}").parse::<Mode>()?
        }
        "sampled" => {
            let trials = args.trials.ok_or_else(|| anyhow!("--trials is required"))?;
            let seed = args
                .seed
                .ok_or_else(|| anyhow!("--seed is required for sampling"))?;
            Mode::Sampled { trials, seed }
        }
        other => other.parse::<Mode>()?,
    };
    let t = Topology::new(args.topology, args.n)?;
    let report = search::exhaust(args.n, &args.values, &t, mode)?;
    if let Some(dir) = &args.fixtures {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (i, f) in report.families.iter().enumerate() {
            let path = dir.join(format!("{}-n{}-{i}.json", args.topology, args.n));
            fs::write(&path, emit_profile(f))
                .with_context(|| format!("writing {}", path.display()))?;
        }
    }
    print(&serde_json::to_value(&report)?)
}

fn sample(args: &SampleArgs) -> Result<()> {
    let est = estimate_expected_stable(args.n, args.p, args.trials, args.seed)?;
    println!("trial,stable_count");
    for (i, c) in est.counts.iter().enumerate() {
        println!("{i},{c}");
    }
    let bound = lll_bound(args.n, args.p);
    eprintln!(
        "mean {:.4}, standard error {:.4}, bound {}",
        est.mean,
        est.std_error,
        bound.map_or("n/a".to_string(), |b| format!("{b:.4}"))
    );
    Ok(())
}

fn chain(args: &ChainArgs) -> Result<()> {
    let trace = expand_chain(args.k)?;
    print(&json!({ "k": trace.k, "length": trace.len(), "steps": trace.steps }))
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("setting up the worker pool")?;
    }
    match &cli.command {
        Command::Solve(a) => return solve(a),
        Command::Check(a) => check(a)?,
        Command::Dynamics(a) => run_dynamics(a)?,
        Command::Construct(a) => construct(a)?,
        Command::Reduce(a) => reduce(a)?,
        Command::Enumerate(a) => enumerate(a)?,
        Command::Sample(a) => sample(a)?,
        Command::Chain(a) => chain(a)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
