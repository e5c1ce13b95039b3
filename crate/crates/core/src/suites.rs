//! Batch checks behind `verify --suite` and the acceptance test. Each check
//! yields one PASS/FAIL line; thresholds are fixed here, not by callers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::canon::canonicalize;
use crate::catalog::{known_choice_number, shapes_with_vertices};
use crate::colorset::ColorSet;
use crate::error::{Error, Result};
use crate::graph::{is_proper_l_coloring, Coloring, Graph, ListAssignment, PartitionShape};
use crate::naive::{brute_force_colorable, hall_holds, maximal_deficient_sets, naive_counterexample};
use crate::reduction::{compose_deficient, maximal_deficient_subset};
use crate::solver::{hall_check, sdr_coloring, solve};
use crate::strategy::{replay_quad_two_triples, replay_three_triples, select_two_pairs, StrategyTrace};
use crate::verifier::{
    choice_number, find_counterexample_seeded, is_k_choosable, is_k_choosable_with, random_assignment, ChoiceNumber,
    Outcome, SearchBudget, VerifyOptions,
};

/// Largest tolerated share of replays that needed the exact solver.
pub const MAX_FALLBACK_RATE: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Oracle,
    Lemmas,
    Strategy,
    Enumeration,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Oracle, Suite::Lemmas, Suite::Strategy, Suite::Enumeration];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Lemmas => "lemmas",
            Suite::Strategy => "strategy",
            Suite::Enumeration => "enumeration",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}; expected oracle, lemmas, strategy or enumeration")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random canonical assignments per replayed shape.
    pub strategy_samples: usize,
    /// Leading samples also colored by the exact solver.
    pub cross_check: usize,
    /// Samples with no part sharing a color, per shape.
    pub conditioned_samples: usize,
    pub lemma_instances: usize,
    pub oracle_max_n: usize,
    pub enum_max_n: usize,
    pub enum_max_k: usize,
    pub budget: SearchBudget,
    /// Include wall-clock times in check details.
    pub timings: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            strategy_samples: 100_000,
            cross_check: 1_000,
            conditioned_samples: 10_000,
            lemma_instances: 10_000,
            oracle_max_n: 7,
            enum_max_n: 6,
            enum_max_k: 3,
            budget: SearchBudget::default(),
            timings: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckLine {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        CheckLine {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{mark} {}: {}", self.name, self.detail)
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<CheckLine>> {
    match suite {
        Suite::Oracle => Ok(vec![exact_choice_numbers(cfg)?, lower_bound_witnesses(cfg)?, catalog_agreement(cfg)?]),
        Suite::Lemmas => Ok(vec![reduction_lemmas(cfg)?]),
        Suite::Strategy => strategy_checks(cfg),
        Suite::Enumeration => Ok(vec![pruned_verification(cfg)?, enumeration_soundness(cfg)?]),
    }
}

fn shape(s: &str) -> PartitionShape {
    s.parse().expect("literal shape")
}

fn secs(cfg: &SuiteConfig, t: Instant) -> String {
    if cfg.timings {
        format!("{:.2}s", t.elapsed().as_secs_f64())
    } else {
        "-".to_string()
    }
}

/// Small shapes whose choice numbers are classical, checked by exhaustive search.
pub const EXACT_TARGETS: [(&str, usize); 7] = [
    ("1", 1),
    ("1,1", 2),
    ("2,2", 2),
    ("2,2,2", 3),
    ("3,3", 3),
    ("4,2", 3),
    ("3,2", 2),
];

fn exact_choice_numbers(cfg: &SuiteConfig) -> Result<CheckLine> {
    let t = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for (s, want) in EXACT_TARGETS {
        let got = choice_number(&shape(s), cfg.budget)?;
        ok &= got == ChoiceNumber::Exact(want);
        parts.push(format!("Ch({s})={}", render_choice(got)));
    }
    // (3,2) is outside every closed-form family; only the search settles it
    let outside = known_choice_number(&shape("3,2"))?.is_none();
    parts.push(format!("3,2 outside catalog={outside}"));
    Ok(CheckLine::new("exact-choice-numbers", ok, format!("{} in {}", parts.join(" "), secs(cfg, t))))
}

pub fn render_choice(c: ChoiceNumber) -> String {
    match c {
        ChoiceNumber::Exact(k) => k.to_string(),
        ChoiceNumber::Bounds { lower, upper } => format!("[{lower},{upper}]"),
    }
}

fn lower_bound_witnesses(cfg: &SuiteConfig) -> Result<CheckLine> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (s, k) in [("3,3", 2), ("4,2,2,2", 4)] {
        let t = Instant::now();
        let sh = shape(s);
        let g = Graph::new(sh.clone());
        match find_counterexample_seeded(&sh, k, cfg.budget, cfg.seed)? {
            Some((l, source)) => {
                let bad = l.is_k_assignment(k) && !brute_force_colorable(&g, &l) && solve(&g, &l).is_none();
                ok &= bad;
                parts.push(format!(
                    "{} k={k} witness via {source:?} uncolorable={bad} in {}",
                    sh.notation(),
                    secs(cfg, t)
                ));
            }
            None => {
                ok = false;
                parts.push(format!("{} k={k} no witness", sh.notation()));
            }
        }
    }
    Ok(CheckLine::new("lower-bound-witnesses", ok, parts.join("; ")))
}

fn catalog_agreement(cfg: &SuiteConfig) -> Result<CheckLine> {
    let t = Instant::now();
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 1..=cfg.oracle_max_n {
        for s in shapes_with_vertices(n) {
            let Some(known) = known_choice_number(&s)? else { continue };
            checked += 1;
            let got = choice_number(&s, cfg.budget)?;
            if got != ChoiceNumber::Exact(known.value) {
                bad.push(format!("{s}: catalog {known} vs search {}", render_choice(got)));
            }
        }
    }
    let detail = format!(
        "{checked} catalog shapes with n<={}, {} disagreements in {}{}",
        cfg.oracle_max_n,
        bad.len(),
        secs(cfg, t),
        if bad.is_empty() { String::new() } else { format!(" [{}]", bad.join("; ")) }
    );
    Ok(CheckLine::new("catalog-agreement", bad.is_empty(), detail))
}

fn random_shape(n: usize, rng: &mut impl Rng) -> PartitionShape {
    let mut sizes = Vec::new();
    let mut left = n;
    while left > 0 {
        let s = rng.gen_range(1..=left);
        sizes.push(s);
        left -= s;
    }
    PartitionShape::new(sizes).expect("positive sizes")
}

fn random_lists(n: usize, rng: &mut impl Rng) -> ListAssignment {
    let universe = rng.gen_range(1..=6);
    ListAssignment::new(
        (0..n)
            .map(|_| {
                let size = rng.gen_range(1..=universe.min(3));
                rand::seq::index::sample(rng, universe, size).into_iter().map(|c| c as u8).collect()
            })
            .collect(),
    )
}

/// Colors `G[members]` with the exact solver; the rest stays uncolored.
fn color_subset(g: &Graph, lists: &ListAssignment, members: &[usize]) -> Option<Coloring> {
    let mut by_part: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &v in members {
        by_part.entry(g.part_of(v)).or_default().push(v);
    }
    let mut groups: Vec<Vec<usize>> = by_part.into_values().collect();
    groups.sort_by_key(|p| std::cmp::Reverse(p.len()));
    let sizes: Vec<usize> = groups.iter().map(Vec::len).collect();
    let sub = Graph::from_sizes(&sizes).ok()?;
    let order = groups.concat();
    let sub_lists = ListAssignment::new(order.iter().map(|&v| lists[v]).collect());
    let c = solve(&sub, &sub_lists)?;
    let mut out = Coloring::empty(g.vertex_count());
    for (i, &v) in order.iter().enumerate() {
        out.set(v, c.get(i).expect("solver colors every vertex"));
    }
    Some(out)
}

fn reduction_lemmas(cfg: &SuiteConfig) -> Result<CheckLine> {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut deficient_ok, mut composed, mut compose_ok, mut hall_ok, mut sdr_ok) = (0, 0, 0, 0, 0);
    let mut with_x = 0;
    let mut first_failure = None;
    for i in 0..cfg.lemma_instances {
        let n = rng.gen_range(1..=8);
        let g = Graph::new(random_shape(n, &mut rng));
        let l = random_lists(n, &mut rng);
        let raw = l.lists();

        let oracle = maximal_deficient_sets(raw).into_iter().min();
        let got = maximal_deficient_subset(&g, &l)?;
        if got.as_ref().map(|x| x.members.clone()) == oracle {
            deficient_ok += 1;
        } else {
            first_failure.get_or_insert(format!("deficient #{i}"));
        }
        if let Some(x) = &got {
            with_x += 1;
            if let Some(cx) = color_subset(&g, &l, &x.members) {
                composed += 1;
                match compose_deficient(&g, &l, x, &cx) {
                    Ok(c) if is_proper_l_coloring(&g, &l, &c)? => compose_ok += 1,
                    _ => {
                        first_failure.get_or_insert(format!("compose #{i}"));
                    }
                }
            }
        }

        let holds = hall_holds(raw);
        let report = hall_check(&g, &l)?;
        let violator_ok = match &report.violator {
            Some(x) => l.union_over(x.iter().copied()).len() < x.len(),
            None => true,
        };
        if report.satisfied == holds && violator_ok && report.violator.is_some() != holds {
            hall_ok += 1;
        } else {
            first_failure.get_or_insert(format!("hall #{i}"));
        }

        let sdr = sdr_coloring(&g, &l);
        let sdr_valid = sdr.as_ref().is_none_or(|c| {
            let colors = c.total().unwrap_or_default();
            let distinct: ColorSet = colors.iter().copied().collect();
            colors.len() == n && distinct.len() == n && colors.iter().enumerate().all(|(v, &col)| raw[v].contains(col))
        });
        if sdr.is_some() == holds && sdr_valid {
            sdr_ok += 1;
        } else {
            first_failure.get_or_insert(format!("sdr #{i}"));
        }
    }
    let m = cfg.lemma_instances;
    let ok = deficient_ok == m && compose_ok == composed && hall_ok == m && sdr_ok == m;
    let detail = format!(
        "deficient {deficient_ok}/{m}, compose {compose_ok}/{composed} (X present in {with_x}), hall {hall_ok}/{m}, sdr {sdr_ok}/{m} in {}{}",
        secs(cfg, t),
        first_failure.map_or(String::new(), |f| format!(", first failure {f}"))
    );
    Ok(CheckLine::new("reduction-lemmas", ok, detail))
}

type Replayer = fn(&Graph, &ListAssignment) -> Result<(Coloring, StrategyTrace)>;

struct Target {
    name: &'static str,
    shape: &'static str,
    k: usize,
    universe: usize,
    replay: Replayer,
}

const THREE_TRIPLES: Target = Target {
    name: "three-triples",
    shape: "3,3,3,1,1",
    k: 5,
    universe: 10,
    replay: replay_three_triples,
};
const QUAD_TWO_TRIPLES: Target = Target {
    name: "quad-two-triples",
    shape: "4,3,3,1,1,1",
    k: 6,
    universe: 12,
    replay: replay_quad_two_triples,
};
/// Larger members of both families, sampled only in the conditioned check.
const CONDITIONED: [Target; 4] = [
    THREE_TRIPLES,
    QUAD_TWO_TRIPLES,
    Target {
        name: "three-triples",
        shape: "3,3,3,2,1,1",
        k: 6,
        universe: 12,
        replay: replay_three_triples,
    },
    Target {
        name: "quad-two-triples",
        shape: "4,3,3,2,1,1,1",
        k: 7,
        universe: 14,
        replay: replay_quad_two_triples,
    },
];

#[derive(Default)]
struct Tally {
    samples: usize,
    proper: usize,
    fallbacks: usize,
    errors: usize,
    cross_checked: usize,
    cross_agree: usize,
    deterministic: usize,
    branches: BTreeMap<String, usize>,
    first_error: Option<String>,
}

impl Tally {
    fn passed(&self) -> bool {
        self.proper == self.samples
            && self.errors == 0
            && self.cross_agree == self.cross_checked
            && self.deterministic == self.cross_checked
            && (self.fallbacks as f64) <= MAX_FALLBACK_RATE * self.samples as f64
    }

    fn detail(&self, elapsed: String) -> String {
        let mut hist: Vec<(&String, &usize)> = self.branches.iter().collect();
        hist.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
        let hist: Vec<String> = hist.iter().map(|(k, v)| format!("{v} {k}")).collect();
        format!(
            "proper {}/{}, fallback {} ({:.3}%), cross-check {}/{}, deterministic {}/{}, branches [{}] in {elapsed}{}",
            self.proper,
            self.samples,
            self.fallbacks,
            100.0 * self.fallbacks as f64 / self.samples.max(1) as f64,
            self.cross_agree,
            self.cross_checked,
            self.deterministic,
            self.cross_checked,
            hist.join(", "),
            self.first_error.as_ref().map_or(String::new(), |e| format!(", first error: {e}"))
        )
    }
}

struct SampleResult {
    proper: bool,
    fallback: bool,
    error: Option<String>,
    cross: Option<(bool, bool)>,
    branch: String,
}

fn replay_one(target: &Target, g: &Graph, l: &ListAssignment, cross: bool) -> SampleResult {
    match (target.replay)(g, l) {
        Ok((c, trace)) => {
            let proper = is_proper_l_coloring(g, l, &c).unwrap_or(false) && trace.replay(g.vertex_count()) == c;
            let cross = cross.then(|| {
                let agree = solve(g, l).is_some();
                let again = (target.replay)(g, l).is_ok_and(|(c2, t2)| c2 == c && t2 == trace);
                (agree, again)
            });
            let branch = match trace.branches().as_slice() {
                [] if trace.fallback => "fallback".to_string(),
                [] => "no case split".to_string(),
                b => b.join(" / "),
            };
            SampleResult {
                proper,
                fallback: trace.fallback,
                error: None,
                cross,
                branch,
            }
        }
        Err(e) => SampleResult {
            proper: false,
            fallback: false,
            error: Some(e.to_string()),
            cross: None,
            branch: "error".into(),
        },
    }
}

fn tally(results: Vec<SampleResult>) -> Tally {
    let mut t = Tally::default();
    for r in results {
        t.samples += 1;
        t.proper += r.proper as usize;
        t.fallbacks += r.fallback as usize;
        if let Some(e) = r.error {
            t.errors += 1;
            t.first_error.get_or_insert(e);
        }
        if let Some((agree, again)) = r.cross {
            t.cross_checked += 1;
            t.cross_agree += agree as usize;
            t.deterministic += again as usize;
        }
        *t.branches.entry(r.branch).or_default() += 1;
    }
    t
}

fn sample_rng(seed: u64, stream: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(i as u128 * 4096);
    rng
}

/// Per-part rejection sampling until no part of size at least 2 shares a color.
fn conditioned_assignment(g: &Graph, k: usize, universe: usize, rng: &mut impl Rng) -> Result<ListAssignment> {
    let mut lists = Vec::with_capacity(g.vertex_count());
    for p in g.parts() {
        let mut tries = 0;
        loop {
            let part = random_assignment(p.len(), k, universe, rng);
            let common = part.lists().iter().fold(ColorSet::prefix(universe), |a, &l| a.intersection(l));
            if p.len() == 1 || common.is_empty() {
                lists.extend(part.into_lists());
                break;
            }
            tries += 1;
            if tries > 100_000 {
                return Err(Error::Precondition(format!(
                    "cannot draw {k}-lists over {universe} colors without a shared color on a part of size {}",
                    p.len()
                )));
            }
        }
    }
    Ok(ListAssignment::new(lists))
}

fn replay_target(target: &Target, cfg: &SuiteConfig, stream: u64) -> CheckLine {
    let t = Instant::now();
    let g = Graph::new(shape(target.shape));
    let results: Vec<SampleResult> = (0..cfg.strategy_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(cfg.seed, stream, i);
            let l = canonicalize(&g, &random_assignment(g.vertex_count(), target.k, target.universe, &mut rng));
            replay_one(target, &g, &l, i < cfg.cross_check)
        })
        .collect();
    let tally = tally(results);
    CheckLine::new(
        &format!("{}-replay", target.name),
        tally.passed(),
        format!("{} k={} universe {}: {}", g.shape().notation(), target.k, target.universe, tally.detail(secs(cfg, t))),
    )
}

fn conditioned_replay(cfg: &SuiteConfig) -> Result<CheckLine> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (j, target) in CONDITIONED.iter().enumerate() {
        let t = Instant::now();
        let g = Graph::new(shape(target.shape));
        let results: Vec<Result<SampleResult>> = (0..cfg.conditioned_samples)
            .into_par_iter()
            .map(|i| {
                let mut rng = sample_rng(cfg.seed, 100 + j as u64, i);
                let l = canonicalize(&g, &conditioned_assignment(&g, target.k, target.universe, &mut rng)?);
                Ok(replay_one(target, &g, &l, false))
            })
            .collect();
        let tally = tally(results.into_iter().collect::<Result<_>>()?);
        ok &= tally.passed();
        parts.push(format!("{} k={}: {}", g.shape().notation(), target.k, tally.detail(secs(cfg, t))));
    }
    Ok(CheckLine::new("conditioned-replay", ok, parts.join("; ")))
}

/// Exhaustive scan for two same-color pairs in two size-3 parts and a
/// vertex of the third size-3 part missing both colors.
pub fn pair_selection_exists(g: &Graph, lists: &ListAssignment) -> bool {
    let triples: Vec<Vec<usize>> = g.parts().filter(|p| p.len() == 3).map(|p| p.collect()).collect();
    let doubled = |p: &[usize], c: u8| p.iter().filter(|&&v| lists[v].contains(c)).count() >= 2;
    let colors: Vec<u8> = lists.union().iter().collect();
    for a in 0..3 {
        for b in 0..3 {
            let c = 3 - a - b;
            if a == b || c > 2 || c == a || c == b {
                continue;
            }
            for &c1 in &colors {
                for &c2 in &colors {
                    if c1 != c2
                        && doubled(&triples[a], c1)
                        && doubled(&triples[b], c2)
                        && triples[c].iter().any(|&z| !lists[z].contains(c1) && !lists[z].contains(c2))
                    {
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn pair_selection_totality(cfg: &SuiteConfig) -> Result<CheckLine> {
    let t = Instant::now();
    let target = THREE_TRIPLES;
    let g = Graph::new(shape(target.shape));
    let count = cfg.cross_check;
    let mut found = 0;
    let mut oracle = 0;
    let mut first_error = None;
    for i in 0..count {
        let mut rng = sample_rng(cfg.seed, 50, i);
        let l = conditioned_assignment(&g, target.k, target.universe, &mut rng)?;
        oracle += pair_selection_exists(&g, &l) as usize;
        match select_two_pairs(&g, &l) {
            Ok(s) if s.holds(|v| g.part_of(v), l.lists()) => found += 1,
            Ok(s) => {
                first_error.get_or_insert(format!("#{i}: selection {s:?} fails the predicate"));
            }
            Err(e) => {
                first_error.get_or_insert(format!("#{i}: {e}"));
            }
        }
    }
    let detail = format!(
        "{found}/{count} selections valid, exhaustive scan finds one in {oracle}/{count} in {}{}",
        secs(cfg, t),
        first_error.map_or(String::new(), |e| format!(", first error {e}"))
    );
    Ok(CheckLine::new("pair-selection-totality", found == count && oracle == count, detail))
}

fn strategy_checks(cfg: &SuiteConfig) -> Result<Vec<CheckLine>> {
    Ok(vec![
        replay_target(&THREE_TRIPLES, cfg, 1),
        replay_target(&QUAD_TWO_TRIPLES, cfg, 2),
        pair_selection_totality(cfg)?,
        conditioned_replay(cfg)?,
    ])
}

fn pruned_verification(cfg: &SuiteConfig) -> Result<CheckLine> {
    let mut ok = true;
    let mut parts = Vec::new();
    for s in ["3,2,2", "3,3,2"] {
        let t = Instant::now();
        let sh = shape(s);
        let v = is_k_choosable(&sh, 3, cfg.budget)?;
        ok &= v.outcome == Outcome::Choosable;
        let st = &v.stats;
        parts.push(format!(
            "{} k=3 universe {}: {:?}, tested {}, orbit rejections {}, colorable prunes {}, nodes {}, {}",
            sh.notation(),
            sh.vertex_count() - 1,
            v.outcome,
            st.assignments_tested,
            st.orbit_rejections,
            st.colorable_prunes,
            st.nodes,
            secs(cfg, t)
        ));
    }
    Ok(CheckLine::new("pruned-exhaustive-verification", ok, parts.join("; ")))
}

fn enumeration_soundness(cfg: &SuiteConfig) -> Result<CheckLine> {
    let t = Instant::now();
    let plain = VerifyOptions {
        symmetry: false,
        prune_colorable: false,
        ..VerifyOptions::default()
    };
    let mut compared = 0;
    let mut bad = Vec::new();
    let mut monotone_breaks = 0;
    for n in 1..=cfg.enum_max_n {
        for s in shapes_with_vertices(n) {
            let g = Graph::new(s.clone());
            let mut prev_choosable = false;
            for k in 1..=cfg.enum_max_k {
                let pruned = is_k_choosable(&s, k, cfg.budget)?.outcome;
                let unpruned = is_k_choosable_with(&s, k, cfg.budget, &plain)?.outcome;
                let naive = match naive_counterexample(&g, k) {
                    Some(_) => Outcome::NotChoosable,
                    None => Outcome::Choosable,
                };
                compared += 1;
                if pruned != naive || unpruned != naive {
                    bad.push(format!("{s} k={k}: pruned {pruned:?}, unpruned {unpruned:?}, naive {naive:?}"));
                }
                if prev_choosable && pruned != Outcome::Choosable {
                    monotone_breaks += 1;
                }
                prev_choosable = pruned == Outcome::Choosable;
            }
        }
    }
    let detail = format!(
        "{compared} (shape, k) pairs with n<={} k<={}, {} disagreements, {monotone_breaks} monotonicity breaks in {}{}",
        cfg.enum_max_n,
        cfg.enum_max_k,
        bad.len(),
        secs(cfg, t),
        if bad.is_empty() { String::new() } else { format!(" [{}]", bad.join("; ")) }
    );
    Ok(CheckLine::new("enumeration-soundness", bad.is_empty() && monotone_breaks == 0, detail))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> SuiteConfig {
        SuiteConfig {
            strategy_samples: 300,
            cross_check: 50,
            conditioned_samples: 100,
            lemma_instances: 300,
            oracle_max_n: 4,
            enum_max_n: 4,
            enum_max_k: 2,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        let cfg = tiny();
        for suite in [Suite::Lemmas, Suite::Strategy] {
            for line in run_suite(suite, &cfg).unwrap() {
                assert!(line.passed, "{line}");
            }
        }
    }

    #[test]
    fn subset_coloring_respects_lists() {
        let g = Graph::from_sizes(&[2, 2]).unwrap();
        let l = ListAssignment::from_colors(&[&[0], &[1], &[0], &[2]]);
        let c = color_subset(&g, &l, &[1, 3]).unwrap();
        assert_eq!(c.get(1), Some(1));
        assert_eq!(c.get(3), Some(2));
        assert_eq!(c.get(0), None);
    }

    #[test]
    fn selection_scan_on_forced_instance() {
        let g = Graph::from_sizes(&[3, 3, 3, 1, 1]).unwrap();
        let l = ListAssignment::from_colors(&[
            &[0, 2, 3, 4, 5],
            &[0, 6, 7, 8, 9],
            &[1, 2, 4, 6, 8],
            &[1, 3, 5, 7, 9],
            &[1, 2, 3, 4, 5],
            &[0, 6, 7, 8, 9],
            &[2, 3, 4, 5, 6],
            &[2, 3, 4, 5, 7],
            &[6, 7, 8, 9, 0],
            &[0, 1, 2, 3, 4],
            &[5, 6, 7, 8, 9],
        ]);
        assert!(pair_selection_exists(&g, &l));
    }
}
