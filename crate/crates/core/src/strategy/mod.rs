//! Deterministic constructive colorings for two complete multipartite
//! families, replaying a hand proof step by step instead of searching.
//!
//! Shared machinery lives here: a mutable board with per-vertex available
//! colors, the trace, and the "assume the color union is small" wrapper.
//! That wrapper is the operational form of the size-profile reduction: if
//! the uncolored set `S` already has `|L(S)| < |S|` the main argument runs
//! directly; if Hall's condition holds the set is finished with distinct
//! colors; otherwise the maximal deficient set `X` is kept, the other lists
//! are squeezed into a small palette, the main argument colors that
//! instance, and the coloring of `X` is extended outside `X` with colors
//! not in `L(X)`.

use std::fmt;

use serde::Serialize;

use crate::colorset::{Color, ColorSet};
use crate::error::{Error, Result};
use crate::graph::{is_proper_l_coloring, Coloring, Graph, ListAssignment};
use crate::reduction::maximal_deficient_mask;
use crate::solver::{sdr_lists, solve, solve_parts};

mod quad;
mod triples;

pub use quad::replay_quad_two_triples;
pub use triples::{replay_three_triples, select_two_pairs, PairSelection};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    /// A part whose lists share a color is colored with it.
    CommonColor,
    /// A padding vertex with fresh colors keeps the shape inside the family.
    Phantom,
    /// The rest is handed to the exact solver by design.
    Delegate,
    /// Vertices with more colors than neighbours are set aside for last.
    Peel,
    SmallUnion,
    /// Lists outside a deficient set squeezed into a small palette.
    Squeeze,
    /// The squeezed instance failed; the main argument reruns on real lists.
    Retry,
    Hall,
    Select,
    UseColor,
    Deficient,
    Greedy,
    Branch,
    Relabel,
    Compose,
    Fallback,
}

impl StepKind {
    fn label(self) -> &'static str {
        match self {
            StepKind::CommonColor => "common-color",
            StepKind::Phantom => "phantom",
            StepKind::Delegate => "delegate",
            StepKind::Peel => "peel",
            StepKind::SmallUnion => "small-union",
            StepKind::Squeeze => "squeeze",
            StepKind::Retry => "retry",
            StepKind::Hall => "hall",
            StepKind::Select => "select",
            StepKind::UseColor => "use",
            StepKind::Deficient => "deficient",
            StepKind::Greedy => "greedy",
            StepKind::Branch => "branch",
            StepKind::Relabel => "relabel",
            StepKind::Compose => "compose",
            StepKind::Fallback => "fallback",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub depth: usize,
    pub kind: StepKind,
    pub detail: String,
    /// Colors written by this step; later steps may overwrite them.
    pub assign: Vec<(usize, Color)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StrategyTrace {
    pub steps: Vec<TraceStep>,
    /// The argument got stuck and the exact solver produced the coloring.
    pub fallback: bool,
    /// Part of the instance was handed to the exact solver by design.
    pub delegated: bool,
}

impl StrategyTrace {
    /// Applies every step's writes in order; vertices `>= n` are padding.
    pub fn replay(&self, n: usize) -> Coloring {
        let mut out = Coloring::empty(n);
        for step in &self.steps {
            for &(v, c) in &step.assign {
                if v < n {
                    out.set(v, c);
                }
            }
        }
        out
    }

    /// Labels of the case branches taken, in order.
    pub fn branches(&self) -> Vec<&str> {
        self.steps
            .iter()
            .filter(|s| s.kind == StepKind::Branch)
            .map(|s| s.detail.as_str())
            .collect()
    }

    pub fn count(&self, kind: StepKind) -> usize {
        self.steps.iter().filter(|s| s.kind == kind).count()
    }
}

impl fmt::Display for StrategyTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            write!(f, "{}{}", "  ".repeat(s.depth), s.kind.label())?;
            if !s.detail.is_empty() {
                write!(f, " {}", s.detail)?;
            }
            if !s.assign.is_empty() {
                let pairs: Vec<String> = s.assign.iter().map(|(v, c)| format!("{v}={c}")).collect();
                write!(f, " [{}]", pairs.join(" "))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Why a replay step could not proceed.
#[derive(Clone, Debug)]
pub(crate) enum Fail {
    /// The argument's stated expectation did not hold here; recoverable.
    Step(String),
    /// A step the argument proves always succeeds did not.
    Invariant(String),
}

pub(crate) type Res<T> = std::result::Result<T, Fail>;

pub(crate) fn step<T>(msg: impl Into<String>) -> Res<T> {
    Err(Fail::Step(msg.into()))
}

pub(crate) struct Ctx {
    steps: Vec<TraceStep>,
    depth: usize,
    delegated: bool,
    /// Set while rerunning on real lists, so the next level goes straight
    /// to the main argument instead of wrapping itself again.
    force_main: bool,
}

impl Ctx {
    fn new() -> Self {
        Ctx {
            steps: Vec::new(),
            depth: 0,
            delegated: false,
            force_main: false,
        }
    }

    pub(crate) fn take_force_main(&mut self) -> bool {
        std::mem::take(&mut self.force_main)
    }

    pub(crate) fn log(&mut self, kind: StepKind, detail: impl Into<String>, assign: Vec<(usize, Color)>) {
        self.steps.push(TraceStep {
            depth: self.depth,
            kind,
            detail: detail.into(),
            assign,
        });
    }
}

/// Working state: lists, partial coloring and which vertices take part.
/// Vertices past the real ones are padding added during the replay.
#[derive(Clone, Debug)]
pub(crate) struct Board {
    part_of: Vec<usize>,
    lists: Vec<ColorSet>,
    color: Vec<Option<Color>>,
    present: Vec<bool>,
}

impl Board {
    fn new(g: &Graph, lists: &ListAssignment) -> Self {
        let n = g.vertex_count();
        Board {
            part_of: g.part_of_all().to_vec(),
            lists: lists.lists().to_vec(),
            color: vec![None; n],
            present: vec![true; n],
        }
    }

    pub(crate) fn part_of(&self, v: usize) -> usize {
        self.part_of[v]
    }

    /// Present and still uncolored.
    pub(crate) fn is_open(&self, v: usize) -> bool {
        self.present[v] && self.color[v].is_none()
    }

    /// Listed colors not already used on another part.
    pub(crate) fn avail(&self, v: usize) -> ColorSet {
        let p = self.part_of[v];
        let blocked: ColorSet = (0..self.color.len())
            .filter(|&u| self.present[u] && self.part_of[u] != p)
            .filter_map(|u| self.color[u])
            .collect();
        self.lists[v].difference(blocked)
    }

    pub(crate) fn open(&self) -> Vec<usize> {
        (0..self.color.len()).filter(|&v| self.is_open(v)).collect()
    }

    /// Open vertices grouped by part, parts ascending.
    pub(crate) fn open_parts(&self) -> Vec<Vec<usize>> {
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        for v in self.open() {
            let p = self.part_of[v];
            match groups.iter_mut().find(|(q, _)| *q == p) {
                Some((_, vs)) => vs.push(v),
                None => groups.push((p, vec![v])),
            }
        }
        groups.sort_by_key(|(p, _)| *p);
        groups.into_iter().map(|(_, vs)| vs).collect()
    }

    pub(crate) fn set(&mut self, v: usize, c: Color) -> Res<()> {
        if !self.is_open(v) {
            return step(format!("vertex {v} is not open"));
        }
        if !self.avail(v).contains(c) {
            return step(format!("color {c} unavailable at vertex {v}"));
        }
        self.color[v] = Some(c);
        Ok(())
    }

    pub(crate) fn color(&self, v: usize) -> Option<Color> {
        self.color[v]
    }

    /// A fresh board on `s` alone with the given lists.
    fn sub(&self, s: &[usize], lists: &[ColorSet]) -> Board {
        let len = self.color.len();
        let mut b = Board {
            part_of: self.part_of.clone(),
            lists: vec![ColorSet::EMPTY; len],
            color: vec![None; len],
            present: vec![false; len],
        };
        for (&v, &l) in s.iter().zip(lists) {
            b.lists[v] = l;
            b.present[v] = true;
        }
        b
    }

    /// Same board with uncolored vertices outside `keep` switched off.
    pub(crate) fn restricted(&self, keep: &[usize]) -> Board {
        let mut b = self.clone();
        for v in 0..b.color.len() {
            if b.color[v].is_none() && !keep.contains(&v) {
                b.present[v] = false;
            }
        }
        b
    }

    fn add_phantom(&mut self, part: usize, list: ColorSet) -> usize {
        self.part_of.push(part);
        self.lists.push(list);
        self.color.push(None);
        self.present.push(true);
        self.color.len() - 1
    }

    fn all_listed(&self) -> ColorSet {
        self.lists.iter().fold(ColorSet::EMPTY, |a, &l| a.union(l))
    }
}

/// Colors `vs` with `c` and records it.
pub(crate) fn use_color(ctx: &mut Ctx, b: &mut Board, kind: StepKind, what: &str, c: Color, vs: &[usize]) -> Res<()> {
    for &v in vs {
        b.set(v, c)?;
    }
    ctx.log(kind, format!("{what}={c}"), vs.iter().map(|&v| (v, c)).collect());
    Ok(())
}

/// Colors the open members of `vs` in order of nondecreasing available
/// list size, each with its least available color.
pub(crate) fn greedy(ctx: &mut Ctx, b: &mut Board, vs: &[usize], avoid: ColorSet) -> Res<()> {
    let mut order: Vec<usize> = vs.iter().copied().filter(|&v| b.is_open(v)).collect();
    order.sort_by_key(|&v| (b.avail(v).len(), v));
    let mut assign = Vec::new();
    for v in order {
        let Some(c) = b.avail(v).difference(avoid).min() else {
            return step(format!("greedy stuck at vertex {v}"));
        };
        b.set(v, c)?;
        assign.push((v, c));
    }
    if !assign.is_empty() {
        ctx.log(StepKind::Greedy, "", assign);
    }
    Ok(())
}

/// Distinct colors on the open members of `vs`.
pub(crate) fn distinct(ctx: &mut Ctx, b: &mut Board, vs: &[usize]) -> Res<()> {
    let open: Vec<usize> = vs.iter().copied().filter(|&v| b.is_open(v)).collect();
    let lists: Vec<ColorSet> = open.iter().map(|&v| b.avail(v)).collect();
    let Some(reps) = sdr_lists(&lists) else {
        return step("Hall's condition fails");
    };
    let mut assign = Vec::new();
    for (&v, c) in open.iter().zip(reps) {
        b.set(v, c)?;
        assign.push((v, c));
    }
    ctx.log(StepKind::Hall, "", assign);
    Ok(())
}

/// Least color available at both open vertices, used on both. Skipped when
/// one of them is no longer open.
pub(crate) fn pair_common(ctx: &mut Ctx, b: &mut Board, what: &str, u: usize, v: usize) -> Res<()> {
    if !b.is_open(u) || !b.is_open(v) {
        return Ok(());
    }
    let Some(c) = b.avail(u).intersection(b.avail(v)).min() else {
        return step(format!("no common color for {what} on {u},{v}"));
    };
    use_color(ctx, b, StepKind::UseColor, what, c, &[u, v])
}

pub(crate) type Inner<'a> = dyn FnMut(&mut Ctx, &mut Board) -> Res<()> + 'a;

/// Colors the open set `s`, letting `inner` assume `|L(S)| < |S|`.
pub(crate) fn small_union(ctx: &mut Ctx, b: &mut Board, s: &[usize], inner: &mut Inner<'_>) -> Res<()> {
    let mut s: Vec<usize> = s.iter().copied().filter(|&v| b.is_open(v)).collect();
    let mut peeled = Vec::new();
    while let Some(i) = s.iter().position(|&v| b.avail(v).len() >= s.len()) {
        peeled.push(s.remove(i));
    }
    if !peeled.is_empty() {
        ctx.log(StepKind::Peel, format!("{peeled:?}"), Vec::new());
    }
    if !s.is_empty() {
        let l0: Vec<ColorSet> = s.iter().map(|&v| b.avail(v)).collect();
        let union = l0.iter().fold(ColorSet::EMPTY, |a, &l| a.union(l));
        let colors = if union.len() < s.len() {
            ctx.log(StepKind::SmallUnion, format!("|L(S)|={} |S|={}", union.len(), s.len()), Vec::new());
            run_sub(ctx, b, &s, &l0, inner)?
        } else if let Some(reps) = sdr_lists(&l0) {
            ctx.log(StepKind::Hall, format!("|L(S)|={} |S|={}", union.len(), s.len()), Vec::new());
            s.iter().copied().zip(reps).collect()
        } else {
            let mask = maximal_deficient_mask(&l0)
                .map_err(|e| Fail::Step(e.to_string()))?
                .ok_or_else(|| Fail::Invariant("no representatives yet no deficient set".into()))?;
            let (l1, a) = squeeze(&l0, mask);
            let x: Vec<usize> = (0..s.len()).filter(|&i| mask >> i & 1 == 1).map(|i| s[i]).collect();
            ctx.log(StepKind::Squeeze, format!("X={x:?} L(X)={a}"), Vec::new());
            match run_sub(ctx, b, &s, &l1, inner) {
                Ok(sub) => extend_deficient(&s, &l0, mask, a, &sub)?,
                Err(Fail::Step(why)) => {
                    ctx.log(StepKind::Retry, why, Vec::new());
                    ctx.force_main = true;
                    let r = run_sub(ctx, b, &s, &l0, inner);
                    ctx.force_main = false;
                    r?
                }
                Err(e) => return Err(e),
            }
        };
        for &(v, c) in &colors {
            b.set(v, c)?;
        }
        ctx.log(StepKind::Compose, "", colors);
    }
    if !peeled.is_empty() {
        let mut assign = Vec::new();
        for &v in peeled.iter().rev() {
            let Some(c) = b.avail(v).min() else {
                return step(format!("set-aside vertex {v} has no color left"));
            };
            b.set(v, c)?;
            assign.push((v, c));
        }
        ctx.log(StepKind::Greedy, "set-aside vertices", assign);
    }
    Ok(())
}

fn run_sub(ctx: &mut Ctx, b: &Board, s: &[usize], lists: &[ColorSet], inner: &mut Inner<'_>) -> Res<Vec<(usize, Color)>> {
    let mut sub = b.sub(s, lists);
    ctx.depth += 1;
    let r = inner(ctx, &mut sub);
    ctx.depth -= 1;
    r?;
    s.iter()
        .map(|&v| match sub.color(v) {
            Some(c) => Ok((v, c)),
            None => step(format!("vertex {v} left uncolored")),
        })
        .collect()
}

/// Lists with the same sizes whose union is small: members of the deficient
/// set keep their lists, everyone else draws from `L(X)` (plus a few colors
/// of the largest outside list when that list is longer than `L(X)`),
/// keeping their own colors first.
fn squeeze(l0: &[ColorSet], mask: u32) -> (Vec<ColorSet>, ColorSet) {
    let inside = |i: usize| mask >> i & 1 == 1;
    let a = (0..l0.len()).filter(|&i| inside(i)).fold(ColorSet::EMPTY, |acc, i| acc.union(l0[i]));
    let u = (0..l0.len())
        .filter(|&i| !inside(i))
        .max_by_key(|&i| (l0[i].len(), std::cmp::Reverse(i)))
        .expect("deficient set is not everything");
    let pool = if l0[u].len() <= a.len() {
        a
    } else {
        a.union(l0[u].difference(a).lowest(l0[u].len() - a.len()))
    };
    let l1 = (0..l0.len())
        .map(|i| {
            if inside(i) {
                return l0[i];
            }
            let own = l0[i].intersection(pool);
            own.union(pool.difference(own).lowest(l0[i].len() - own.len()))
        })
        .collect();
    (l1, a)
}

/// Keeps the coloring of the deficient set and gives every other vertex a
/// distinct color from `L(v) \ L(X)`.
fn extend_deficient(
    s: &[usize],
    l0: &[ColorSet],
    mask: u32,
    a: ColorSet,
    sub: &[(usize, Color)],
) -> Res<Vec<(usize, Color)>> {
    let outside: Vec<usize> = (0..s.len()).filter(|&i| mask >> i & 1 == 0).collect();
    let reduced: Vec<ColorSet> = outside.iter().map(|&i| l0[i].difference(a)).collect();
    let reps = sdr_lists(&reduced)
        .ok_or_else(|| Fail::Invariant("no representatives outside a maximal deficient set".into()))?;
    let mut out: Vec<(usize, Color)> = (0..s.len())
        .filter(|&i| mask >> i & 1 == 1)
        .map(|i| sub.iter().find(|(v, _)| *v == s[i]).copied().expect("sub colors all of S"))
        .collect();
    out.extend(outside.iter().zip(reps).map(|(&i, c)| (s[i], c)));
    Ok(out)
}

/// Hands the open vertices to the exact solver.
pub(crate) fn delegate(ctx: &mut Ctx, b: &mut Board, why: &str) -> Res<()> {
    let open = b.open();
    let parts: Vec<usize> = open.iter().map(|&v| b.part_of(v)).collect();
    let lists: Vec<ColorSet> = open.iter().map(|&v| b.avail(v)).collect();
    let Some(colors) = solve_parts(&parts, &lists) else {
        return Err(Fail::Invariant(format!("residual after {why} has no coloring")));
    };
    let mut assign = Vec::new();
    for (&v, c) in open.iter().zip(colors) {
        b.set(v, c)?;
        assign.push((v, c));
    }
    ctx.delegated = true;
    ctx.log(StepKind::Delegate, why, assign);
    Ok(())
}

/// Adds a padding vertex with `size` fresh colors to `part`.
pub(crate) fn add_phantom(ctx: &mut Ctx, b: &mut Board, part: usize, size: usize) -> Res<usize> {
    let fresh = ColorSet::from_bits(!b.all_listed().bits());
    if fresh.len() < size {
        return step("no fresh colors for a padding vertex");
    }
    let v = b.add_phantom(part, fresh.lowest(size));
    ctx.log(StepKind::Phantom, format!("vertex {v} in part {part}"), Vec::new());
    Ok(v)
}

/// Colors on at least two of `vs`, ascending.
pub(crate) fn doubled(b: &Board, vs: &[usize]) -> Vec<Color> {
    let all = vs.iter().fold(ColorSet::EMPTY, |a, &v| a.union(b.avail(v)));
    all.iter().filter(|&c| holders(b, vs, c).len() >= 2).collect()
}

pub(crate) fn holders(b: &Board, vs: &[usize], c: Color) -> Vec<usize> {
    vs.iter().copied().filter(|&v| b.avail(v).contains(c)).collect()
}

pub(crate) fn shared_color(b: &Board, vs: &[usize]) -> Option<Color> {
    vs.iter().fold(ColorSet::from_bits(u64::MAX), |a, &v| a.intersection(b.avail(v))).min()
}

pub(crate) fn union_of(b: &Board, vs: &[usize]) -> ColorSet {
    vs.iter().fold(ColorSet::EMPTY, |a, &v| a.union(b.avail(v)))
}

/// Colors a set `U` found mid-argument and then extends to everything else
/// open: `work` colored all of `u` (and possibly more); vertices outside
/// `u` are recolored from `L(v) \ L(U)` with distinct colors.
pub(crate) fn compose_with(
    ctx: &mut Ctx,
    b: &mut Board,
    u: &[usize],
    snapshot: &[(usize, ColorSet)],
    work: &Board,
) -> Res<()> {
    let lu = snapshot
        .iter()
        .filter(|(v, _)| u.contains(v))
        .fold(ColorSet::EMPTY, |a, (_, l)| a.union(*l));
    let mut assign = Vec::new();
    for &v in u {
        if !b.is_open(v) {
            continue;
        }
        let Some(c) = work.color(v) else {
            return step(format!("vertex {v} of U left uncolored"));
        };
        assign.push((v, c));
    }
    let rest: Vec<(usize, ColorSet)> = snapshot
        .iter()
        .filter(|(v, _)| !u.contains(v))
        .map(|&(v, l)| (v, l.difference(lu)))
        .collect();
    let lists: Vec<ColorSet> = rest.iter().map(|(_, l)| *l).collect();
    let reps = sdr_lists(&lists)
        .ok_or_else(|| Fail::Invariant("no representatives outside a maximal deficient set".into()))?;
    assign.extend(rest.iter().map(|(v, _)| *v).zip(reps));
    for &(v, c) in &assign {
        b.set(v, c)?;
    }
    ctx.log(StepKind::Compose, format!("U={u:?}"), assign);
    Ok(())
}

/// Computes the maximal deficient set among the open vertices. `None`
/// means the open vertices were finished with distinct colors.
pub(crate) fn deficient_or_finish(ctx: &mut Ctx, b: &mut Board) -> Res<Option<(Vec<usize>, Vec<(usize, ColorSet)>)>> {
    let open = b.open();
    let snapshot: Vec<(usize, ColorSet)> = open.iter().map(|&v| (v, b.avail(v))).collect();
    let lists: Vec<ColorSet> = snapshot.iter().map(|(_, l)| *l).collect();
    match maximal_deficient_mask(&lists).map_err(|e| Fail::Step(e.to_string()))? {
        None => {
            distinct(ctx, b, &open)?;
            Ok(None)
        }
        Some(mask) => {
            let u: Vec<usize> = (0..open.len()).filter(|&i| mask >> i & 1 == 1).map(|i| open[i]).collect();
            ctx.log(StepKind::Deficient, format!("U={u:?}"), Vec::new());
            Ok(Some((u, snapshot)))
        }
    }
}

/// If the uncolored set has at least as many colors as vertices and Hall's
/// condition holds, colors it with distinct colors; `None` means the caller
/// should continue with its main argument.
pub fn hall_complete_or_continue(g: &Graph, lists: &ListAssignment, uncolored: &[usize]) -> Result<Option<Coloring>> {
    lists.check_against(g)?;
    let n = g.vertex_count();
    if let Some(&v) = uncolored.iter().find(|&&v| v >= n) {
        return Err(Error::Precondition(format!("vertex {v} out of range")));
    }
    let sub: Vec<ColorSet> = uncolored.iter().map(|&v| lists[v]).collect();
    let union = sub.iter().fold(ColorSet::EMPTY, |a, &l| a.union(l));
    if union.len() < uncolored.len() {
        return Ok(None);
    }
    Ok(sdr_lists(&sub).map(|reps| {
        let mut c = Coloring::empty(n);
        for (&v, r) in uncolored.iter().zip(reps) {
            c.set(v, r);
        }
        c
    }))
}

/// Runs a replay, falling back to the exact solver when a step gets stuck.
pub(crate) fn run(
    g: &Graph,
    lists: &ListAssignment,
    body: impl FnOnce(&mut Ctx, &mut Board) -> Res<()>,
) -> Result<(Coloring, StrategyTrace)> {
    let n = g.vertex_count();
    let mut ctx = Ctx::new();
    let mut board = Board::new(g, lists);
    let outcome = body(&mut ctx, &mut board);
    let stuck = match outcome {
        Ok(()) => {
            let coloring = Coloring::from_partial(board.color[..n].to_vec());
            let mut trace = StrategyTrace {
                steps: ctx.steps,
                fallback: false,
                delegated: ctx.delegated,
            };
            if coloring.is_total() && is_proper_l_coloring(g, lists, &coloring)? {
                return Ok((coloring, trace));
            }
            ctx = Ctx::new();
            ctx.steps = std::mem::take(&mut trace.steps);
            ctx.delegated = trace.delegated;
            "replay produced an improper coloring".to_string()
        }
        Err(Fail::Step(why)) => why,
        Err(Fail::Invariant(why)) => return Err(Error::InvariantViolation(why)),
    };
    let coloring = solve(g, lists).ok_or_else(|| Error::InvariantViolation("instance has no coloring".into()))?;
    ctx.depth = 0;
    ctx.log(
        StepKind::Fallback,
        stuck,
        coloring.colored_vertices().collect(),
    );
    Ok((
        coloring,
        StrategyTrace {
            steps: ctx.steps,
            fallback: true,
            delegated: ctx.delegated,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hall_completion_examples() {
        let g = Graph::from_sizes(&[1, 1, 1, 1, 1, 1]).unwrap();
        let l = ListAssignment::from_colors(&[&[0, 1, 2], &[1, 2, 3], &[2, 3, 4], &[3, 4, 5], &[4, 5, 0], &[5, 0, 1]]);
        let all: Vec<usize> = (0..6).collect();
        let c = hall_complete_or_continue(&g, &l, &all).unwrap().unwrap();
        assert!(is_proper_l_coloring(&g, &l, &c).unwrap());

        let l = ListAssignment::uniform(6, ColorSet::prefix(3));
        assert!(hall_complete_or_continue(&g, &l, &all).unwrap().is_none());

        let c = hall_complete_or_continue(&g, &l, &[2]).unwrap().unwrap();
        assert!(c.get(2).is_some());
    }

    #[test]
    fn squeeze_keeps_sizes_and_shrinks_union() {
        // X = {0,1,2} deficient on {0,1}; the others are spread out
        let l0: Vec<ColorSet> = [&[0u8, 1][..], &[0, 1], &[0, 1], &[2, 3, 4], &[5, 6, 7], &[8, 9]]
            .iter()
            .map(|c| c.iter().copied().collect())
            .collect();
        let mask = maximal_deficient_mask(&l0).unwrap().unwrap();
        assert_eq!(mask, 0b111);
        let (l1, a) = squeeze(&l0, mask);
        assert_eq!(a, ColorSet::prefix(2));
        for (x, y) in l0.iter().zip(&l1) {
            assert_eq!(x.len(), y.len());
        }
        let union = l1.iter().fold(ColorSet::EMPTY, |a, &l| a.union(l));
        assert!(union.len() < l0.len());
        assert_eq!(l1[3], [0u8, 1, 2].into_iter().collect());
    }

    #[test]
    fn trace_text_is_line_per_step() {
        let mut ctx = Ctx::new();
        ctx.log(StepKind::UseColor, "c1=3", vec![(0, 3), (1, 3)]);
        ctx.depth = 1;
        ctx.log(StepKind::Branch, "case", vec![]);
        let t = StrategyTrace {
            steps: ctx.steps,
            fallback: false,
            delegated: false,
        };
        assert_eq!(t.to_string(), "use c1=3 [0=3 1=3]\n  branch case\n");
        assert_eq!(t.replay(2), Coloring::from_total(&[3, 3]));
    }
}
