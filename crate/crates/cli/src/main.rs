//! `choicelab`: command-line front end. Every verdict is printed as one
//! JSON record per line on stdout; warnings and progress go to stderr.
//!
//! Exit codes: 0 verdict reached, 1 a verification suite failed,
//! 2 budget exhausted, 3 invalid input, 4 internal invariant violated.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use choicelab::cache::{self, Cache, CacheRecord, Method};
use choicelab::catalog::{known_choice_number, ohba_bound_applies, shapes_with_vertices, ENTRIES};
use choicelab::enumerate::Checkpoint;
use choicelab::io::InstanceFile;
use choicelab::reduction::{common_color_part_reduction, maximal_deficient_subset, universe_bound_holds};
use choicelab::solver::{hall_check, sdr_coloring, solve};
use choicelab::strategy::{replay_quad_two_triples, replay_three_triples};
use choicelab::suites::{render_choice, run_suite, Suite, SuiteConfig};
use choicelab::verifier::{
    choice_number, find_counterexample_seeded, is_k_choosable_with, Outcome, Progress, SearchBudget, Verdict,
    VerifyOptions, VerifyStats,
};
use choicelab::{Coloring, Error, Graph, PartitionShape};

#[derive(Parser)]
#[command(name = "choicelab", version, about = "Exact list coloring and choosability for complete multipartite graphs")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Wall-clock budget in seconds.
    #[arg(long, global = true)]
    budget: Option<f64>,
    /// Stop after this many complete assignments.
    #[arg(long, global = true)]
    max_assignments: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// JSON-lines verdict cache.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Omit timestamps and wall-clock times so output is reproducible.
    #[arg(long, global = true)]
    no_timestamps: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    /// K_{3*3,2*(k-5),1*2}
    ThreeTriples,
    /// K_{4,3*2,2*(k-6),1*3}
    QuadTwoTriples,
}

#[derive(Subcommand)]
enum Command {
    /// Decide k-choosability by exhaustive canonical search.
    Check {
        /// Part sizes, e.g. 3,3,2 or 3*2,2
        #[arg(long)]
        shape: PartitionShape,
        /// List size
        #[arg(short = 'k')]
        k: usize,
        /// Keep the latest per-shard checkpoint in this file.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Continue from a checkpoint file written earlier.
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Skip assignments settled by cached (shape, k-1) verdicts.
        #[arg(long)]
        induction: bool,
        /// Disable orbit pruning.
        #[arg(long)]
        no_symmetry: bool,
        /// Print progress events to stderr.
        #[arg(long)]
        progress: bool,
    },
    /// Choice number, or bounds when the budget runs out.
    Ch {
        /// Part sizes, e.g. 3,3,2 or 3*2,2
        #[arg(long)]
        shape: PartitionShape,
    },
    /// Decide L-colorability of one instance.
    Solve {
        #[arg(long)]
        lists: PathBuf,
    },
    /// Hall's condition and a distinct-color coloring when it holds.
    Hall {
        #[arg(long)]
        lists: PathBuf,
    },
    /// Common-color reduction, maximal deficient set and universe bound.
    Reduce {
        #[arg(long)]
        lists: PathBuf,
    },
    /// Constructive coloring with a step trace.
    Replay {
        #[arg(long, value_enum)]
        strategy: Strategy,
        #[arg(long)]
        lists: PathBuf,
    },
    /// Search for an uncolorable k-list assignment.
    Counterexample {
        /// Part sizes, e.g. 3,3,2 or 3*2,2
        #[arg(long)]
        shape: PartitionShape,
        /// List size
        #[arg(short = 'k')]
        k: usize,
        /// Also write the witness as a list file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a batch verification suite: oracle, lemmas, strategy or enumeration.
    Verify {
        #[arg(long)]
        suite: Suite,
        /// Random samples per replayed shape.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Closed-form families and the shapes they cover.
    Catalog {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
    },
    /// Throughput of the exhaustive search, single worker and all workers.
    Bench {
        /// Part sizes, e.g. 3,3,2 or 3*2,2
        #[arg(long)]
        shape: PartitionShape,
        /// List size
        #[arg(short = 'k')]
        k: usize,
    },
}

const EXIT_SUITE_FAILED: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_INVARIANT: u8 = 4;

fn error_code(e: &Error) -> u8 {
    match e {
        Error::InvariantViolation(_) | Error::CatalogIntegrity(_) => EXIT_INVARIANT,
        _ => EXIT_INPUT,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INPUT) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            emit(json!({"error": e.to_string()}));
            ExitCode::from(error_code(&e))
        }
    }
}

fn emit(v: Value) {
    println!("{v}");
}

impl Global {
    fn budget(&self) -> SearchBudget {
        let mut b = SearchBudget {
            max_assignments: self.max_assignments,
            max_seconds: self.budget,
            ..SearchBudget::default()
        };
        if let Some(j) = self.jobs {
            b.workers = j;
        }
        b
    }

    fn timestamp(&self) -> Option<u64> {
        (!self.no_timestamps).then(cache::now)
    }

    fn open_cache(&self) -> choicelab::Result<Option<Cache>> {
        let Some(path) = &self.cache else { return Ok(None) };
        let c = Cache::open(path)?;
        for w in c.warnings() {
            eprintln!("warning: {w}");
        }
        Ok(Some(c))
    }

    /// Attaches the timestamp unless disabled.
    fn stamp(&self, mut v: Value) -> Value {
        if let Some(t) = self.timestamp() {
            v["timestamp"] = json!(t);
        }
        v
    }

    /// Search statistics. Without timestamps only the counts that do not
    /// depend on thread timing are kept.
    fn stats(&self, s: &VerifyStats, outcome: Outcome) -> Value {
        if self.no_timestamps && outcome != Outcome::Choosable {
            return Value::Null;
        }
        let mut v = json!({
            "assignments_tested": s.assignments_tested,
            "orbit_rejections": s.orbit_rejections,
            "colorable_prunes": s.colorable_prunes,
            "induction_prunes": s.induction_prunes,
            "nodes": s.nodes,
        });
        if !self.no_timestamps {
            v["wall_seconds"] = json!(s.wall_seconds);
        }
        v
    }
}

fn outcome_code(o: Outcome) -> u8 {
    match o {
        Outcome::BudgetExhausted => EXIT_BUDGET,
        _ => 0,
    }
}

fn load(path: &Path) -> choicelab::Result<(Graph, choicelab::ListAssignment)> {
    InstanceFile::read(path)?.instance()
}

fn coloring_json(c: &Coloring) -> Value {
    json!(c.assigned())
}

fn read_checkpoints(path: &Path) -> choicelab::Result<Vec<Checkpoint>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let cps = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(str::parse)
        .collect::<choicelab::Result<Vec<Checkpoint>>>()?;
    if cps.windows(2).any(|w| w[0].shard.count != w[1].shard.count) {
        return Err(Error::Parse("checkpoint lines disagree on the shard count".into()));
    }
    Ok(cps)
}

fn write_checkpoints(path: &Path, cps: &BTreeMap<usize, Checkpoint>) -> std::io::Result<()> {
    let body: String = cps.values().map(|c| format!("{c}\n")).collect();
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, body)?;
    std::fs::rename(tmp, path)
}

fn run(cli: &Cli) -> choicelab::Result<u8> {
    let g = &cli.global;
    match &cli.command {
        Command::Check {
            shape,
            k,
            checkpoint,
            resume,
            induction,
            no_symmetry,
            progress,
        } => check(g, shape, *k, checkpoint.as_deref(), resume.as_deref(), *induction, *no_symmetry, *progress),
        Command::Ch { shape } => {
            let known = known_choice_number(shape)?;
            let ch = choice_number(shape, g.budget())?;
            let exact = matches!(ch, choicelab::verifier::ChoiceNumber::Exact(_));
            emit(g.stamp(json!({
                "command": "ch",
                "shape": shape.sizes(),
                "choice_number": render_choice(ch),
                "chromatic_number": shape.parts(),
                "catalog": known.map(|k| json!({"value": k.value, "source": k.source})),
                "ohba_bound": ohba_bound_applies(shape),
            })));
            Ok(if exact { 0 } else { EXIT_BUDGET })
        }
        Command::Solve { lists } => {
            let (graph, l) = load(lists)?;
            let c = solve(&graph, &l);
            emit(json!({
                "command": "solve",
                "verdict": if c.is_some() { "colorable" } else { "no coloring" },
                "coloring": c.as_ref().map(coloring_json),
            }));
            Ok(0)
        }
        Command::Hall { lists } => {
            let (graph, l) = load(lists)?;
            let report = hall_check(&graph, &l)?;
            emit(json!({
                "command": "hall",
                "satisfied": report.satisfied,
                "violator": report.violator,
                "sdr": sdr_coloring(&graph, &l).as_ref().map(coloring_json),
            }));
            Ok(0)
        }
        Command::Reduce { lists } => {
            let (graph, l) = load(lists)?;
            let red = common_color_part_reduction(&graph, &l)?;
            let deficient = maximal_deficient_subset(&graph, &l)?;
            emit(json!({
                "command": "reduce",
                "universe_bound": universe_bound_holds(&l),
                "common_color_steps": red.steps,
                "residual_shape": red.residual.as_ref().map(|r| r.shape().sizes().to_vec()),
                "residual_lists": red.residual.as_ref().map(|_| &red.lists),
                "deficient": deficient,
            }));
            Ok(0)
        }
        Command::Replay { strategy, lists } => {
            let (graph, l) = load(lists)?;
            let (c, trace) = match strategy {
                Strategy::ThreeTriples => replay_three_triples(&graph, &l)?,
                Strategy::QuadTwoTriples => replay_quad_two_triples(&graph, &l)?,
            };
            let proper = choicelab::graph::is_proper_l_coloring(&graph, &l, &c)?;
            if !proper {
                return Err(Error::InvariantViolation("replay produced an improper coloring".into()));
            }
            let lines: Vec<String> = trace.to_string().lines().map(str::to_string).collect();
            emit(json!({
                "command": "replay",
                "strategy": strategy.to_possible_value().map(|v| v.get_name().to_string()),
                "coloring": coloring_json(&c),
                "proper": proper,
                "fallback": trace.fallback,
                "delegated": trace.delegated,
                "trace": lines,
            }));
            Ok(0)
        }
        Command::Counterexample { shape, k, out } => {
            let found = find_counterexample_seeded(shape, *k, g.budget(), g.seed)?;
            let graph = Graph::new(shape.clone());
            if let (Some((l, _)), Some(path)) = (&found, out) {
                InstanceFile::new(&graph, l).write(path)?;
            }
            if found.is_some() {
                if let Some(mut c) = g.open_cache()? {
                    c.put(CacheRecord {
                        shape: shape.clone(),
                        k: *k,
                        verdict: Outcome::NotChoosable,
                        method: Method::Sampled,
                        stats: VerifyStats::default(),
                        version: env!("CARGO_PKG_VERSION").into(),
                        timestamp: g.timestamp(),
                    })?;
                }
            }
            emit(g.stamp(json!({
                "command": "counterexample",
                "shape": shape.sizes(),
                "k": k,
                "verdict": if found.is_some() { "not-choosable" } else { "none-found" },
                "source": found.as_ref().map(|(_, s)| format!("{s:?}")),
                "lists": found.as_ref().map(|(l, _)| l),
            })));
            Ok(if found.is_some() { 0 } else { EXIT_BUDGET })
        }
        Command::Verify { suite, samples } => {
            let mut cfg = SuiteConfig {
                seed: g.seed,
                budget: g.budget(),
                timings: !g.no_timestamps,
                ..SuiteConfig::default()
            };
            if let Some(s) = samples {
                cfg.strategy_samples = *s;
                cfg.conditioned_samples = *s / 10;
                cfg.cross_check = cfg.cross_check.min(*s);
            }
            let lines = run_suite(*suite, &cfg)?;
            for l in &lines {
                emit(json!({"suite": suite.name(), "check": l.name, "passed": l.passed, "detail": l.detail}));
            }
            Ok(if lines.iter().all(|l| l.passed) { 0 } else { EXIT_SUITE_FAILED })
        }
        Command::Catalog { max_n } => {
            catalog(*max_n)?;
            Ok(0)
        }
        Command::Bench { shape, k } => bench(g, shape, *k),
    }
}

#[allow(clippy::too_many_arguments)]
fn check(
    g: &Global,
    shape: &PartitionShape,
    k: usize,
    checkpoint: Option<&Path>,
    resume: Option<&Path>,
    induction: bool,
    no_symmetry: bool,
    progress: bool,
) -> choicelab::Result<u8> {
    let mut cache = g.open_cache()?;
    if induction && cache.is_none() {
        return Err(Error::Precondition("--induction needs --cache".into()));
    }
    let resume_from = match resume {
        Some(p) => read_checkpoints(p)?,
        None => Vec::new(),
    };
    let latest: Mutex<BTreeMap<usize, Checkpoint>> =
        Mutex::new(resume_from.iter().map(|c| (c.shard.index, c.clone())).collect());
    let write_error: Mutex<Option<std::io::Error>> = Mutex::new(None);
    let on_checkpoint = |c: &Checkpoint| {
        let mut map = latest.lock().expect("checkpoint lock");
        map.insert(c.shard.index, c.clone());
        if let Some(path) = checkpoint {
            if let Err(e) = write_checkpoints(path, &map) {
                write_error.lock().expect("error lock").get_or_insert(e);
            }
        }
    };
    let on_progress = |p: &Progress| {
        eprintln!("progress shard {}/{} tested {}", p.shard.index, p.shard.count, p.assignments_tested);
    };
    let certified = |s: &PartitionShape, kk: usize| cache.as_ref().is_some_and(|c| c.is_certified(s, kk));
    let verdict: Verdict = {
        let options = VerifyOptions {
            symmetry: !no_symmetry,
            shards: resume_from.first().map(|c| c.shard.count),
            certified: induction.then_some(&certified as _),
            progress: progress.then_some(&on_progress as _),
            checkpoint: checkpoint.is_some().then_some(&on_checkpoint as _),
            resume: resume_from.clone(),
            ..VerifyOptions::default()
        };
        is_k_choosable_with(shape, k, g.budget(), &options)?
    };
    if let Some(e) = write_error.into_inner().expect("error lock") {
        return Err(e.into());
    }
    // a resumed run only covers part of the stream; it never certifies
    let settled = verdict.outcome != Outcome::BudgetExhausted;
    if let Some(c) = cache.as_mut() {
        if settled && (resume_from.is_empty() || verdict.outcome == Outcome::NotChoosable) {
            c.put(CacheRecord::exhaustive(shape, k, &verdict, g.timestamp()))?;
        }
    }
    emit(g.stamp(json!({
        "command": "check",
        "shape": shape.sizes(),
        "k": k,
        "verdict": verdict.outcome,
        "counterexample": verdict.counterexample,
        "stats": g.stats(&verdict.stats, verdict.outcome),
    })));
    Ok(outcome_code(verdict.outcome))
}

fn catalog(max_n: usize) -> choicelab::Result<()> {
    println!("{:<22} {:<30} caveats", "pattern", "choice number");
    for e in ENTRIES {
        println!("{:<22} {:<30} {}", e.pattern, e.formula, e.caveats);
    }
    println!();
    println!("{:<22} {:>3} {:>3} {:>5} {:<5} source", "shape", "n", "k", "ch", "ohba");
    for n in 1..=max_n {
        for s in shapes_with_vertices(n) {
            if let Some(known) = known_choice_number(&s)? {
                println!(
                    "{:<22} {:>3} {:>3} {:>5} {:<5} {}",
                    s.notation(),
                    n,
                    s.parts(),
                    known.value,
                    ohba_bound_applies(&s),
                    known.source
                );
            }
        }
    }
    Ok(())
}

fn bench(g: &Global, shape: &PartitionShape, k: usize) -> choicelab::Result<u8> {
    let mut runs = Vec::new();
    let all = g.budget();
    let mut code = 0;
    for budget in [SearchBudget { workers: 1, ..all }, all] {
        let t = Instant::now();
        let v = is_k_choosable_with(shape, k, budget, &VerifyOptions::default())?;
        let secs = t.elapsed().as_secs_f64();
        code = code.max(outcome_code(v.outcome));
        let mut r = json!({
            "workers": budget.workers,
            "verdict": v.outcome,
            "stats": g.stats(&v.stats, v.outcome),
        });
        if !g.no_timestamps {
            r["seconds"] = json!(secs);
            r["assignments_per_second"] = json!(v.stats.assignments_tested as f64 / secs.max(1e-9));
        }
        runs.push(r);
    }
    emit(g.stamp(json!({"command": "bench", "shape": shape.sizes(), "k": k, "runs": runs})));
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_failures_map_to_exit_4() {
        assert_eq!(error_code(&Error::InvariantViolation("x".into())), EXIT_INVARIANT);
        assert_eq!(error_code(&Error::CatalogIntegrity("x".into())), EXIT_INVARIANT);
        assert_eq!(error_code(&Error::InvalidShape("x".into())), EXIT_INPUT);
        assert_eq!(error_code(&Error::Io("x".into())), EXIT_INPUT);
    }
}
