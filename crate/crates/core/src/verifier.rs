//! Exact k-choosability by exhaustive search over canonical list
//! assignments on `n - 1` colors, plus targeted counterexample search.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::colorset::ColorSet;
use crate::enumerate::{AssignmentStream, Checkpoint, ShardSpec, StreamConfig, StreamStats};
use crate::error::{Error, Result};
use crate::graph::{chromatic_number, Graph, ListAssignment, PartitionShape};
use crate::solver::solve_parts;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Choosable,
    NotChoosable,
    BudgetExhausted,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyStats {
    /// Complete assignments checked (or skipped by induction).
    pub assignments_tested: u64,
    pub orbit_rejections: u64,
    pub colorable_prunes: u64,
    pub induction_prunes: u64,
    pub nodes: u64,
    pub wall_seconds: f64,
}

impl VerifyStats {
    fn absorb(&mut self, s: &StreamStats) {
        self.orbit_rejections += s.orbit_rejections;
        self.colorable_prunes += s.colorable_prunes;
        self.nodes += s.nodes;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub counterexample: Option<ListAssignment>,
    pub stats: VerifyStats,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchBudget {
    pub max_assignments: Option<u64>,
    pub max_seconds: Option<f64>,
    pub workers: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_assignments: None,
            max_seconds: None,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget::default()
    }

    pub fn single_threaded() -> Self {
        SearchBudget {
            workers: 1,
            ..SearchBudget::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = self.workers == 0
            || self.max_assignments == Some(0)
            || self.max_seconds.is_some_and(|s| !(s > 0.0 && s.is_finite()));
        if bad {
            return Err(Error::Precondition(format!("budget values must be positive: {self:?}")));
        }
        Ok(())
    }
}

/// Progress snapshot handed to an observer.
#[derive(Clone, Debug)]
pub struct Progress {
    pub shard: ShardSpec,
    pub assignments_tested: u64,
    pub prefix: Vec<ColorSet>,
}

/// Knobs beyond the budget. The defaults give a plain exhaustive check.
pub struct VerifyOptions<'a> {
    pub symmetry: bool,
    pub prune_colorable: bool,
    /// Shard count; `None` picks a multiple of the worker count.
    pub shards: Option<usize>,
    /// `(shape, k)` pairs already known to be k-choosable. When set, an
    /// assignment in which some part shares a color is skipped if the rest
    /// of the graph is known to be `(k-1)`-choosable.
    pub certified: Option<&'a (dyn Fn(&PartitionShape, usize) -> bool + Sync)>,
    pub progress: Option<&'a (dyn Fn(&Progress) + Sync)>,
    pub checkpoint: Option<&'a (dyn Fn(&Checkpoint) + Sync)>,
    pub resume: Vec<Checkpoint>,
}

impl Default for VerifyOptions<'_> {
    fn default() -> Self {
        VerifyOptions {
            symmetry: true,
            prune_colorable: true,
            shards: None,
            certified: None,
            progress: None,
            checkpoint: None,
            resume: Vec::new(),
        }
    }
}

const PROGRESS_EVERY: u64 = 1 << 16;

/// Decides k-choosability. Only assignments over `n - 1` colors are
/// visited: an assignment with `|L(V)| >= n` always has a coloring once
/// all smaller ones do.
pub fn is_k_choosable(shape: &PartitionShape, k: usize, budget: SearchBudget) -> Result<Verdict> {
    is_k_choosable_with(shape, k, budget, &VerifyOptions::default())
}

pub fn is_k_choosable_with(
    shape: &PartitionShape,
    k: usize,
    budget: SearchBudget,
    options: &VerifyOptions<'_>,
) -> Result<Verdict> {
    budget.validate()?;
    let start = Instant::now();
    let g = Graph::new(shape.clone());
    let n = g.vertex_count();
    if k >= n {
        return Ok(Verdict {
            outcome: Outcome::Choosable,
            counterexample: None,
            stats: VerifyStats::default(),
        });
    }
    if k < chromatic_number(&g) {
        return Ok(Verdict {
            outcome: Outcome::NotChoosable,
            counterexample: Some(ListAssignment::uniform(n, ColorSet::prefix(k))),
            stats: VerifyStats::default(),
        });
    }
    let shards = options.shards.unwrap_or(if budget.workers == 1 { 1 } else { budget.workers * 8 });
    if shards == 0 {
        return Err(Error::Precondition("shard count must be positive".into()));
    }
    let deadline = budget.max_seconds.map(|s| start + Duration::from_secs_f64(s));
    let shared = Shared {
        tested: AtomicU64::new(0),
        exhausted: AtomicBool::new(false),
        found_shard: AtomicUsize::new(usize::MAX),
        max_assignments: budget.max_assignments,
        deadline,
    };
    let results: Mutex<Vec<ShardResult>> = Mutex::new(Vec::new());
    let work = |index: usize| -> Result<()> {
        let spec = ShardSpec::new(index, shards)?;
        let res = run_shard(&g, k, spec, &shared, options)?;
        results.lock().expect("results lock").push(res);
        Ok(())
    };
    if budget.workers == 1 || shards == 1 {
        (0..shards).try_for_each(work)?;
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(budget.workers)
            .build()
            .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
        pool.install(|| (0..shards).into_par_iter().try_for_each(work))?;
    }
    let mut results = results.into_inner().expect("results lock");
    results.sort_by_key(|r| r.shard);
    let mut stats = VerifyStats::default();
    for r in &results {
        stats.absorb(&r.stream);
        stats.assignments_tested += r.tested;
        stats.induction_prunes += r.induction_prunes;
    }
    stats.wall_seconds = start.elapsed().as_secs_f64();
    let counterexample = results.into_iter().find_map(|r| r.counterexample);
    let outcome = if counterexample.is_some() {
        Outcome::NotChoosable
    } else if shared.exhausted.load(Ordering::Relaxed) {
        Outcome::BudgetExhausted
    } else {
        Outcome::Choosable
    };
    Ok(Verdict {
        outcome,
        counterexample,
        stats,
    })
}

struct Shared {
    tested: AtomicU64,
    exhausted: AtomicBool,
    found_shard: AtomicUsize,
    max_assignments: Option<u64>,
    deadline: Option<Instant>,
}

impl Shared {
    fn should_stop(&self, shard: usize) -> bool {
        if self.exhausted.load(Ordering::Relaxed) || self.found_shard.load(Ordering::Relaxed) < shard {
            return true;
        }
        let over = self.max_assignments.is_some_and(|m| self.tested.load(Ordering::Relaxed) >= m)
            || self.deadline.is_some_and(|d| Instant::now() >= d);
        if over {
            self.exhausted.store(true, Ordering::Relaxed);
        }
        over
    }
}

struct ShardResult {
    shard: usize,
    counterexample: Option<ListAssignment>,
    stream: StreamStats,
    tested: u64,
    induction_prunes: u64,
}

fn run_shard(g: &Graph, k: usize, spec: ShardSpec, shared: &Shared, options: &VerifyOptions<'_>) -> Result<ShardResult> {
    let n = g.vertex_count();
    let resume_after = options
        .resume
        .iter()
        .find(|c| c.shard == spec)
        .map(|c| c.prefix.clone());
    let config = StreamConfig {
        symmetry: options.symmetry,
        shard: spec,
        resume_after,
        prune_colorable: options.prune_colorable,
    };
    let mut stream = AssignmentStream::uniform(g, k, n - 1, config)?;
    let mut result = ShardResult {
        shard: spec.index,
        counterexample: None,
        stream: StreamStats::default(),
        tested: 0,
        induction_prunes: 0,
    };
    let mut last_checkpoint: Option<Checkpoint> = None;
    loop {
        if result.tested % 256 == 0 && shared.should_stop(spec.index) {
            break;
        }
        let Some(lists) = stream.next() else { break };
        result.tested += 1;
        shared.tested.fetch_add(1, Ordering::Relaxed);
        if result.tested % PROGRESS_EVERY == 0 {
            if let Some(cb) = options.progress {
                cb(&Progress {
                    shard: spec,
                    assignments_tested: result.tested,
                    prefix: stream.current_prefix(),
                });
            }
        }
        if let Some(cb) = options.checkpoint {
            let cp = stream.checkpoint();
            if cp.is_some() && cp != last_checkpoint {
                cb(cp.as_ref().expect("checked"));
                last_checkpoint = cp;
            }
        }
        if let Some(certified) = options.certified {
            if colorable_by_induction(g, &lists, k, certified) {
                result.induction_prunes += 1;
                continue;
            }
        }
        if solve_parts(g.part_of_all(), lists.lists()).is_none() {
            result.counterexample = Some(lists);
            shared.found_shard.fetch_min(spec.index, Ordering::Relaxed);
            break;
        }
    }
    if result.counterexample.is_none() && !shared.exhausted.load(Ordering::Relaxed) {
        if let (Some(cb), Some(cp)) = (options.checkpoint, stream.checkpoint()) {
            if Some(&cp) != last_checkpoint.as_ref() {
                cb(&cp);
            }
        }
    }
    result.stream = stream.stats();
    Ok(result)
}

/// Coloring a part of size >= 2 with a color all its lists share leaves the
/// other parts with lists of size >= k-1; if that smaller shape is known to
/// be (k-1)-choosable the assignment is colorable.
fn colorable_by_induction(
    g: &Graph,
    lists: &ListAssignment,
    k: usize,
    certified: &(dyn Fn(&PartitionShape, usize) -> bool + Sync),
) -> bool {
    (0..g.part_count()).any(|p| {
        if g.part_size(p) < 2 || k < 2 {
            return false;
        }
        let shared = g.part(p).fold(ColorSet::from_bits(u64::MAX), |acc, v| acc.intersection(lists[v]));
        if shared.is_empty() {
            return false;
        }
        match g.shape().without_part(g.part_size(p)) {
            Some(rest) => certified(&rest, k - 1),
            None => true,
        }
    })
}

/// Exact choice number, or bounds when the budget runs out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChoiceNumber {
    Exact(usize),
    Bounds { lower: usize, upper: usize },
}

/// Tries k = χ, χ+1, ... until the graph is k-choosable.
pub fn choice_number(shape: &PartitionShape, budget: SearchBudget) -> Result<ChoiceNumber> {
    budget.validate()?;
    let start = Instant::now();
    let n = shape.vertex_count();
    let smallest = *shape.sizes().last().expect("shapes are non-empty");
    // greedy coloring in any order needs at most max degree + 1 colors
    let upper = n - smallest + 1;
    let mut k = shape.parts();
    loop {
        let mut step = budget;
        if let Some(total) = budget.max_seconds {
            let left = total - start.elapsed().as_secs_f64();
            if left <= 0.0 {
                return Ok(ChoiceNumber::Bounds { lower: k, upper });
            }
            step.max_seconds = Some(left);
        }
        let verdict = is_k_choosable(shape, k, step)?;
        match verdict.outcome {
            Outcome::Choosable => return Ok(ChoiceNumber::Exact(k)),
            Outcome::NotChoosable => k += 1,
            Outcome::BudgetExhausted => return Ok(ChoiceNumber::Bounds { lower: k, upper: upper.max(k) }),
        }
    }
}

/// Which search produced a counterexample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessSource {
    TooFewColors,
    SharedPool,
    BalancedSplit,
    RandomSample,
    Exhaustive,
}

/// Looks for an uncolorable k-assignment: structured families first, then
/// random sampling, then the exhaustive stream. `None` is not a proof.
pub fn find_counterexample(shape: &PartitionShape, k: usize, budget: SearchBudget) -> Result<Option<ListAssignment>> {
    Ok(find_counterexample_seeded(shape, k, budget, 0)?.map(|(l, _)| l))
}

pub fn find_counterexample_seeded(
    shape: &PartitionShape,
    k: usize,
    budget: SearchBudget,
    seed: u64,
) -> Result<Option<(ListAssignment, WitnessSource)>> {
    budget.validate()?;
    let start = Instant::now();
    let g = Graph::new(shape.clone());
    let n = g.vertex_count();
    if k >= n {
        return Ok(None);
    }
    let bad = |l: &ListAssignment| solve_parts(g.part_of_all(), l.lists()).is_none();
    if k < chromatic_number(&g) {
        return Ok(Some((ListAssignment::uniform(n, ColorSet::prefix(k)), WitnessSource::TooFewColors)));
    }
    for pool in k + 1..n.min(64) {
        let l = shared_pool_assignment(&g, k, pool);
        if bad(&l) {
            return Ok(Some((l, WitnessSource::SharedPool)));
        }
    }
    for l in balanced_split_assignments(&g, k) {
        if bad(&l) {
            return Ok(Some((l, WitnessSource::BalancedSplit)));
        }
    }
    let universe = n - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = budget.max_assignments.map_or(20_000, |m| (m / 2).min(20_000));
    let deadline = budget.max_seconds.map(|s| start + Duration::from_secs_f64(s));
    for i in 0..samples {
        if i % 256 == 0 && deadline.is_some_and(|d| Instant::now() >= d) {
            return Ok(None);
        }
        let l = random_assignment(n, k, universe, &mut rng);
        if bad(&l) {
            return Ok(Some((l, WitnessSource::RandomSample)));
        }
    }
    let mut rest = budget;
    if let Some(total) = budget.max_seconds {
        let left = total - start.elapsed().as_secs_f64();
        if left <= 0.0 {
            return Ok(None);
        }
        rest.max_seconds = Some(left);
    }
    let verdict = is_k_choosable(shape, k, rest)?;
    Ok(verdict.counterexample.map(|l| (l, WitnessSource::Exhaustive)))
}

/// Every part receives the first `size` k-subsets of the pool `0..pool` in
/// colex order (cycling when the part is larger than the number of subsets).
fn shared_pool_assignment(g: &Graph, k: usize, pool: usize) -> ListAssignment {
    let subsets: Vec<ColorSet> = KSubsets::new(pool, k).take(g.vertex_count()).collect();
    let mut lists = Vec::with_capacity(g.vertex_count());
    for part in g.parts() {
        for (i, _) in part.enumerate() {
            lists.push(subsets[i % subsets.len()]);
        }
    }
    ListAssignment::new(lists)
}

/// Colors `0..2k` split into halves `S`, `T` and quarters `S1,S2,T1,T2`.
/// Big parts receive `S, T, S1∪T1, S2∪T2`, small parts receive the
/// crossing pairs `S1∪T2, S2∪T1`; a few arrangements are tried.
fn balanced_split_assignments(g: &Graph, k: usize) -> Vec<ListAssignment> {
    if k % 2 == 1 || 2 * k > 63 {
        return Vec::new();
    }
    let h = k / 2;
    let block = |from: usize, len: usize| ColorSet::from_bits(((1u64 << len) - 1) << from);
    let (s1, s2, t1, t2) = (block(0, h), block(h, h), block(k, h), block(k + h, h));
    let (s, t) = (s1.union(s2), t1.union(t2));
    let wide = [s, t, s1.union(t1), s2.union(t2)];
    let cross = [s1.union(t2), s2.union(t1)];
    let mut out = Vec::new();
    for threshold in [4usize, 3] {
        let mut lists = Vec::with_capacity(g.vertex_count());
        for part in g.parts() {
            let len = part.len();
            let pattern: &[ColorSet] = if len >= threshold { &wide } else { &cross };
            for i in 0..len {
                lists.push(pattern[i % pattern.len()]);
            }
        }
        out.push(ListAssignment::new(lists));
    }
    out
}

/// Each list uniform among k-subsets of `0..universe`.
pub fn random_assignment<R: rand::Rng + ?Sized>(n: usize, k: usize, universe: usize, rng: &mut R) -> ListAssignment {
    ListAssignment::new(
        (0..n)
            .map(|_| sample(rng, universe, k).into_iter().map(|c| c as u8).collect())
            .collect(),
    )
}

/// k-subsets of `0..universe` in colex order.
struct KSubsets {
    next: Option<u64>,
    bound: u64,
}

impl KSubsets {
    fn new(universe: usize, k: usize) -> Self {
        let bound = 1u64 << universe;
        let first = (1u64 << k) - 1;
        KSubsets {
            next: (first < bound).then_some(first),
            bound,
        }
    }
}

impl Iterator for KSubsets {
    type Item = ColorSet;

    fn next(&mut self) -> Option<ColorSet> {
        let cur = self.next?;
        self.next = crate::colorset::next_same_size(cur).filter(|&m| m < self.bound);
        Some(ColorSet::from_bits(cur))
    }
}

/// One shard of the canonical k-assignment stream over `universe` colors.
pub fn shard_stream(shape: &PartitionShape, k: usize, universe: usize, shard: ShardSpec) -> Result<AssignmentStream> {
    ShardSpec::new(shard.index, shard.count)?;
    let g = Graph::new(shape.clone());
    AssignmentStream::uniform(
        &g,
        k,
        universe,
        StreamConfig {
            shard,
            ..StreamConfig::default()
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::naive::{brute_force_colorable, naive_counterexample};

    fn shape(s: &[usize]) -> PartitionShape {
        PartitionShape::new(s.to_vec()).unwrap()
    }

    #[test]
    fn small_verdicts() {
        let b = SearchBudget::single_threaded();
        assert_eq!(is_k_choosable(&shape(&[2, 2]), 2, b).unwrap().outcome, Outcome::Choosable);
        assert_eq!(is_k_choosable(&shape(&[1]), 1, b).unwrap().outcome, Outcome::Choosable);
        let v = is_k_choosable(&shape(&[3, 3]), 2, b).unwrap();
        assert_eq!(v.outcome, Outcome::NotChoosable);
        let g = Graph::from_sizes(&[3, 3]).unwrap();
        assert!(!brute_force_colorable(&g, v.counterexample.as_ref().unwrap()));
    }

    #[test]
    fn too_few_colors() {
        let v = is_k_choosable(&shape(&[2, 1, 1]), 2, SearchBudget::single_threaded()).unwrap();
        assert_eq!(v.outcome, Outcome::NotChoosable);
        assert_eq!(v.counterexample.unwrap().lists()[0], ColorSet::prefix(2));
    }

    #[test]
    fn parallel_matches_serial() {
        for s in [&[3, 3][..], &[2, 2, 1], &[4, 2]] {
            for k in 2..4 {
                let a = is_k_choosable(&shape(s), k, SearchBudget::single_threaded()).unwrap();
                let b = is_k_choosable(&shape(s), k, SearchBudget { workers: 4, ..Default::default() }).unwrap();
                assert_eq!(a.outcome, b.outcome, "{s:?} k={k}");
                assert_eq!(a.counterexample, b.counterexample, "{s:?} k={k}");
            }
        }
    }

    #[test]
    fn budget_exhaustion_reported() {
        let b = SearchBudget {
            max_assignments: Some(5),
            ..SearchBudget::single_threaded()
        };
        let v = is_k_choosable(&shape(&[3, 2, 2]), 3, b).unwrap();
        assert_eq!(v.outcome, Outcome::BudgetExhausted);
        assert!(SearchBudget { workers: 0, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn choice_numbers() {
        let b = SearchBudget::default();
        assert_eq!(choice_number(&shape(&[2, 2, 2]), b).unwrap(), ChoiceNumber::Exact(3));
        assert_eq!(choice_number(&shape(&[4, 2]), b).unwrap(), ChoiceNumber::Exact(3));
        assert_eq!(choice_number(&shape(&[3, 3]), b).unwrap(), ChoiceNumber::Exact(3));
    }

    #[test]
    fn counterexample_families() {
        let b = SearchBudget::default();
        let l = find_counterexample(&shape(&[3, 3]), 2, b).unwrap().unwrap();
        assert!(!brute_force_colorable(&Graph::from_sizes(&[3, 3]).unwrap(), &l));
        assert!(find_counterexample(&shape(&[2, 2]), 2, b).unwrap().is_none());
        let (l, src) = find_counterexample_seeded(&shape(&[4, 2, 2, 2]), 4, b, 0).unwrap().unwrap();
        assert_eq!(src, WitnessSource::BalancedSplit);
        assert!(l.is_k_assignment(4));
        assert!(!brute_force_colorable(&Graph::from_sizes(&[4, 2, 2, 2]).unwrap(), &l));
    }

    #[test]
    fn shards_partition_the_stream() {
        let s = shape(&[2, 2]);
        let full: Vec<_> = shard_stream(&s, 2, 3, ShardSpec::whole()).unwrap().collect();
        let mut parts: Vec<ListAssignment> = Vec::new();
        for i in 0..4 {
            parts.extend(shard_stream(&s, 2, 3, ShardSpec::new(i, 4).unwrap()).unwrap());
        }
        assert_eq!(parts.len(), full.len());
        parts.sort();
        let mut sorted = full.clone();
        sorted.sort();
        assert_eq!(parts, sorted);
        assert!(ShardSpec::new(4, 4).is_err());
    }

    #[test]
    fn agrees_with_naive_on_tiny_shapes() {
        for s in [&[2, 1][..], &[2, 2], &[3, 1], &[2, 1, 1], &[3, 2]] {
            let g = Graph::from_sizes(s).unwrap();
            for k in 1..=2 {
                let v = is_k_choosable(&shape(s), k, SearchBudget::single_threaded()).unwrap();
                let naive = naive_counterexample(&g, k).is_none();
                assert_eq!(v.outcome == Outcome::Choosable, naive, "{s:?} k={k}");
            }
        }
    }

    #[test]
    fn induction_pruning_keeps_verdicts() {
        let certified = |s: &PartitionShape, k: usize| {
            is_k_choosable(s, k, SearchBudget::single_threaded()).unwrap().outcome == Outcome::Choosable
        };
        let opts = VerifyOptions {
            certified: Some(&certified),
            ..Default::default()
        };
        for (s, k) in [(&[2, 2, 2][..], 3), (&[3, 3], 2), (&[3, 2, 1], 3)] {
            let plain = is_k_choosable(&shape(s), k, SearchBudget::single_threaded()).unwrap();
            let pruned = is_k_choosable_with(&shape(s), k, SearchBudget::single_threaded(), &opts).unwrap();
            assert_eq!(plain.outcome, pruned.outcome, "{s:?} k={k}");
        }
    }
}
