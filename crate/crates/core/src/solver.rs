//! L-colorability of complete multipartite graphs.
//!
//! In a complete multipartite graph every color class lies inside a single
//! part, so the search assigns colors to parts: once a color is used in part
//! `P` it is banned everywhere else, and any other vertex of `P` that lists
//! it can take it for free.

use serde::Serialize;

use crate::colorset::{Color, ColorSet, MAX_COLORS};
use crate::error::{Error, Result};
use crate::graph::{is_proper_partial, Coloring, Graph, ListAssignment};

/// Largest vertex count for explicit subset enumeration.
pub const SUBSET_BOUND: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HallReport {
    pub satisfied: bool,
    pub violator: Option<Vec<usize>>,
}

/// A proper L-coloring if one exists.
pub fn solve(g: &Graph, lists: &ListAssignment) -> Option<Coloring> {
    assert_eq!(lists.len(), g.vertex_count(), "one list per vertex");
    solve_parts(g.part_of_all(), lists.lists()).map(|c| Coloring::from_total(&c))
}

/// Solver core over an arbitrary part labelling; `part_of[v]` may use any
/// labels below 64.
pub(crate) fn solve_parts(part_of: &[usize], lists: &[ColorSet]) -> Option<Vec<Color>> {
    solve_with(part_of, lists, &[])
}

/// Solver core with some vertices already colored.
pub(crate) fn solve_with(
    part_of: &[usize],
    lists: &[ColorSet],
    fixed: &[(usize, Color)],
) -> Option<Vec<Color>> {
    let n = lists.len();
    assert!(n <= 64, "solver supports at most 64 vertices");
    let parts = part_of.iter().copied().max().map_or(0, |m| m + 1);
    let mut search = Search {
        part_of,
        lists,
        color: vec![None; n],
        part_used: vec![0u64; parts],
        trail: Vec::with_capacity(n),
    };
    for &(v, c) in fixed {
        let p = part_of[v];
        let banned = search.all_used() & !search.part_used[p];
        if banned >> c & 1 == 1 {
            return None;
        }
        search.assign(v, c);
    }
    if search.run() {
        Some(search.color.iter().map(|c| c.expect("search colors every vertex")).collect())
    } else {
        None
    }
}

struct Search<'a> {
    part_of: &'a [usize],
    lists: &'a [ColorSet],
    color: Vec<Option<Color>>,
    part_used: Vec<u64>,
    trail: Vec<(usize, bool)>,
}

impl Search<'_> {
    fn all_used(&self) -> u64 {
        self.part_used.iter().fold(0, |acc, &m| acc | m)
    }

    fn assign(&mut self, v: usize, c: Color) {
        let p = self.part_of[v];
        let fresh = self.part_used[p] >> c & 1 == 0;
        self.part_used[p] |= 1u64 << c;
        self.color[v] = Some(c);
        self.trail.push((v, fresh));
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (v, fresh) = self.trail.pop().expect("trail above mark");
            let c = self.color[v].take().expect("trailed vertex is colored");
            if fresh {
                self.part_used[self.part_of[v]] &= !(1u64 << c);
            }
        }
    }

    fn run(&mut self) -> bool {
        let mark = self.trail.len();
        // free rides: a vertex whose own part already uses one of its colors
        loop {
            let mut progressed = false;
            for v in 0..self.lists.len() {
                if self.color[v].is_some() {
                    continue;
                }
                let shared = self.lists[v].bits() & self.part_used[self.part_of[v]];
                if shared != 0 {
                    self.assign(v, shared.trailing_zeros() as Color);
                    progressed = true;
                }
            }
            if !progressed {
                break;
            }
        }

        let all = self.all_used();
        let mut pick: Option<(usize, u64)> = None;
        for v in 0..self.lists.len() {
            if self.color[v].is_some() {
                continue;
            }
            let avail = self.lists[v].bits() & !all;
            if avail == 0 {
                self.undo_to(mark);
                return false;
            }
            if pick.map_or(true, |(_, a)| avail.count_ones() < a.count_ones()) {
                pick = Some((v, avail));
            }
        }
        let Some((v, avail)) = pick else {
            return true;
        };
        for c in ColorSet::from_bits(avail).iter() {
            let inner = self.trail.len();
            self.assign(v, c);
            if self.run() {
                return true;
            }
            self.undo_to(inner);
        }
        self.undo_to(mark);
        false
    }
}

/// Hall's condition `|L(X)| >= |X|` for all vertex subsets. On failure the
/// violator is a subset of maximum deficiency `|X| - |L(X)|`, ties broken by
/// the lexicographically least sorted member list.
pub fn hall_check(g: &Graph, lists: &ListAssignment) -> Result<HallReport> {
    lists.check_against(g)?;
    hall_check_lists(lists.lists())
}

pub(crate) fn hall_check_lists(lists: &[ColorSet]) -> Result<HallReport> {
    let n = lists.len();
    if n > SUBSET_BOUND {
        return Err(Error::Capacity { n, bound: SUBSET_BOUND });
    }
    // a perfect matching certifies the condition without enumeration
    if max_matching(lists).iter().all(Option::is_some) {
        return Ok(HallReport {
            satisfied: true,
            violator: None,
        });
    }
    let mut best: Option<(i64, u32)> = None;
    for_each_subset_union(lists, &mut |mask, union| {
        let deficiency = mask.count_ones() as i64 - union.count_ones() as i64;
        if deficiency <= 0 {
            return;
        }
        let better = match best {
            None => true,
            Some((d, m)) => deficiency > d || (deficiency == d && lex_less(mask, m)),
        };
        if better {
            best = Some((deficiency, mask));
        }
    });
    let (_, mask) = best.expect("no perfect matching implies a deficient subset");
    Ok(HallReport {
        satisfied: false,
        violator: Some(members(mask)),
    })
}

/// Visits every non-empty subset (as a bit mask) together with `L(X)`.
pub(crate) fn for_each_subset_union(lists: &[ColorSet], visit: &mut dyn FnMut(u32, u64)) {
    fn rec(lists: &[ColorSet], v: usize, mask: u32, union: u64, visit: &mut dyn FnMut(u32, u64)) {
        if v == lists.len() {
            if mask != 0 {
                visit(mask, union);
            }
            return;
        }
        rec(lists, v + 1, mask, union, visit);
        rec(lists, v + 1, mask | 1 << v, union | lists[v].bits(), visit);
    }
    rec(lists, 0, 0, 0, visit);
}

pub(crate) fn members(mask: u32) -> Vec<usize> {
    (0..32).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Lexicographic order on sorted member lists.
pub(crate) fn lex_less(a: u32, b: u32) -> bool {
    let diff = a ^ b;
    if diff == 0 {
        return false;
    }
    let d = diff.trailing_zeros();
    let above = if d >= 31 { 0 } else { u32::MAX << (d + 1) };
    if a >> d & 1 == 1 {
        // a continues with d, b continues with something larger or ends
        b & above != 0
    } else {
        a & above == 0
    }
}

/// Maximum bipartite matching vertices → colors (Kuhn's augmenting paths).
pub(crate) fn max_matching(lists: &[ColorSet]) -> Vec<Option<Color>> {
    let mut owner: [Option<usize>; MAX_COLORS] = [None; MAX_COLORS];
    let mut matched: Vec<Option<Color>> = vec![None; lists.len()];

    fn augment(
        v: usize,
        lists: &[ColorSet],
        seen: &mut u64,
        owner: &mut [Option<usize>; MAX_COLORS],
        matched: &mut [Option<Color>],
    ) -> bool {
        for c in lists[v].iter() {
            if *seen >> c & 1 == 1 {
                continue;
            }
            *seen |= 1u64 << c;
            let free = match owner[c as usize] {
                None => true,
                Some(w) => augment(w, lists, seen, owner, matched),
            };
            if free {
                owner[c as usize] = Some(v);
                matched[v] = Some(c);
                return true;
            }
        }
        false
    }

    for v in 0..lists.len() {
        let mut seen = 0u64;
        augment(v, lists, &mut seen, &mut owner, &mut matched);
    }
    matched
}

/// An L-coloring with pairwise distinct colors, if Hall's condition holds.
pub fn sdr_coloring(g: &Graph, lists: &ListAssignment) -> Option<Coloring> {
    assert_eq!(lists.len(), g.vertex_count(), "one list per vertex");
    sdr_lists(lists.lists()).map(|c| Coloring::from_total(&c))
}

pub(crate) fn sdr_lists(lists: &[ColorSet]) -> Option<Vec<Color>> {
    max_matching(lists).into_iter().collect()
}

/// Extends `precolored` greedily: uncolored vertices in nondecreasing list
/// size (ties by index), each taking the least listed color not already used
/// on another part. Never backtracks.
pub fn greedy_nondecreasing(g: &Graph, lists: &ListAssignment, precolored: &Coloring) -> Option<Coloring> {
    assert_eq!(lists.len(), g.vertex_count(), "one list per vertex");
    if precolored.len() != g.vertex_count() || !is_proper_partial(g, lists, precolored) {
        return None;
    }
    let mut assigned = precolored.assigned().to_vec();
    let order: Vec<usize> = (0..g.vertex_count()).filter(|&v| assigned[v].is_none()).collect();
    greedy_fill(g.part_of_all(), lists.lists(), &mut assigned, &order)?;
    Some(Coloring::from_partial(assigned))
}

/// Greedy core: colors `candidates` (sorted here by list size, then index).
pub(crate) fn greedy_fill(
    part_of: &[usize],
    lists: &[ColorSet],
    assigned: &mut [Option<Color>],
    candidates: &[usize],
) -> Option<()> {
    let mut order = candidates.to_vec();
    order.sort_by_key(|&v| (lists[v].len(), v));
    for v in order {
        let p = part_of[v];
        let blocked: ColorSet = assigned
            .iter()
            .enumerate()
            .filter(|&(u, c)| c.is_some() && part_of[u] != p)
            .map(|(_, c)| c.expect("filtered to colored"))
            .collect();
        let c = lists[v].difference(blocked).min()?;
        assigned[v] = Some(c);
    }
    Some(())
}
