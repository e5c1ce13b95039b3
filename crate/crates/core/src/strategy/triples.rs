//! Three parts of size 3, `k - 5` parts of size 2 and two singletons.

use serde::Serialize;

use super::{
    add_phantom, compose_with, deficient_or_finish, delegate, distinct, doubled, greedy, holders, pair_common, run,
    shared_color, small_union, step, union_of, use_color, Board, Ctx, Fail, Res, StepKind, StrategyTrace,
};
use crate::colorset::{Color, ColorSet};
use crate::error::{Error, Result};
use crate::graph::{Coloring, Graph, ListAssignment};

/// Colors for two pairs in two size-3 parts, and a vertex of the third
/// part missing both colors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairSelection {
    pub c1: Color,
    pub pair1: [usize; 2],
    pub c2: Color,
    pub pair2: [usize; 2],
    pub missed: usize,
    /// Parts holding `pair1`, `pair2` and `missed`.
    pub parts: [usize; 3],
}

impl PairSelection {
    /// Checks the defining predicate against `lists`.
    pub fn holds(&self, part_of: impl Fn(usize) -> usize, lists: &[ColorSet]) -> bool {
        let [a, b, c] = self.parts;
        self.c1 != self.c2
            && a != b
            && b != c
            && a != c
            && self.pair1[0] != self.pair1[1]
            && self.pair2[0] != self.pair2[1]
            && self.pair1.iter().all(|&v| part_of(v) == a && lists[v].contains(self.c1))
            && self.pair2.iter().all(|&v| part_of(v) == b && lists[v].contains(self.c2))
            && part_of(self.missed) == c
            && !lists[self.missed].contains(self.c1)
            && !lists[self.missed].contains(self.c2)
    }
}

fn family_shape(k: usize) -> Vec<usize> {
    let mut s = vec![3, 3, 3];
    s.extend(std::iter::repeat(2).take(k.saturating_sub(5)));
    s.extend([1, 1]);
    s
}

fn check_family(g: &Graph, lists: &ListAssignment) -> Result<usize> {
    lists.check_against(g)?;
    let k = g.part_count();
    if k < 5 || g.shape().sizes() != family_shape(k).as_slice() {
        return Err(Error::Precondition(format!(
            "shape {} is not three triples, k-5 pairs and two singletons",
            g.shape().notation()
        )));
    }
    if lists.min_size() < k {
        return Err(Error::Precondition(format!("lists must have at least {k} colors")));
    }
    Ok(k)
}

/// Finds the two pairs and the missed vertex on a k-list assignment with a
/// small color union and no part of size 2 or 3 sharing a color.
pub fn select_two_pairs(g: &Graph, lists: &ListAssignment) -> Result<PairSelection> {
    let k = check_family(g, lists)?;
    let n = g.vertex_count();
    if lists.union().len() >= n {
        return Err(Error::Precondition(format!("color union must have fewer than {n} colors")));
    }
    let board = Board::new(g, lists);
    let parts = board.open_parts();
    if parts.iter().any(|p| p.len() >= 2 && shared_color(&board, p).is_some()) {
        return Err(Error::Precondition("a part of size 2 or 3 shares a color".into()));
    }
    let triples: Vec<Vec<usize>> = parts.into_iter().filter(|p| p.len() == 3).collect();
    debug_assert!(k >= 5);
    select(&board, &triples).map_err(|f| match f {
        Fail::Invariant(m) | Fail::Step(m) => Error::InvariantViolation(m),
    })
}

fn pair_with(b: &Board, vs: &[usize], c: Color) -> [usize; 2] {
    let h = holders(b, vs, c);
    [h[0], h[1]]
}

/// Two colors doubled in both `p` and `q` that miss one vertex of `r`.
fn both_doubled(b: &Board, t: &[Vec<usize>], p: usize, q: usize, r: usize) -> Option<PairSelection> {
    let dq = doubled(b, &t[q]);
    let common: Vec<Color> = doubled(b, &t[p]).into_iter().filter(|c| dq.contains(c)).collect();
    for (i, &c1) in common.iter().enumerate() {
        for &c2 in &common[i + 1..] {
            for &z in &t[r] {
                let l = b.avail(z);
                if !l.contains(c1) && !l.contains(c2) {
                    return Some(PairSelection {
                        c1,
                        pair1: pair_with(b, &t[p], c1),
                        c2,
                        pair2: pair_with(b, &t[q], c2),
                        missed: z,
                        parts: [b.part_of(t[p][0]), b.part_of(t[q][0]), b.part_of(t[r][0])],
                    });
                }
            }
        }
    }
    None
}

/// Follows the counting argument: colors doubled in two parts first, then a
/// color doubled in the first part that the second part mostly lacks.
fn select(b: &Board, t: &[Vec<usize>]) -> Res<PairSelection> {
    if t.len() != 3 {
        return Err(Fail::Invariant("expected three parts of size 3".into()));
    }
    if let Some(s) = both_doubled(b, t, 0, 1, 2) {
        return Ok(s);
    }
    let dy = doubled(b, &t[1]);
    let Some(c1) = doubled(b, &t[0]).into_iter().find(|c| !dy.contains(c)) else {
        return Err(Fail::Invariant("no color doubled in X but not in Y".into()));
    };
    let on_y = holders(b, &t[1], c1);
    let pick = |c2: Color, y: usize| PairSelection {
        c1,
        pair1: pair_with(b, &t[0], c1),
        c2,
        pair2: pair_with(b, &t[2], c2),
        missed: y,
        parts: [b.part_of(t[0][0]), b.part_of(t[2][0]), b.part_of(t[1][0])],
    };
    let candidates: Vec<usize> = t[1].iter().copied().filter(|y| !on_y.contains(y)).collect();
    for c2 in doubled(b, &t[2]).into_iter().filter(|&c| c != c1) {
        if let Some(&y) = candidates.iter().find(|&&y| !b.avail(y).contains(c2)) {
            return Ok(pick(c2, y));
        }
    }
    if on_y.len() == 1 {
        if let Some(s) = both_doubled(b, t, 1, 2, 0) {
            return Ok(s);
        }
    }
    Err(Fail::Invariant("no pair selection exists".into()))
}

/// Colors a k-list assignment of `K_{3,3,3,2,...,2,1,1}` by replaying the
/// constructive argument; see the module docs of `strategy`.
pub fn replay_three_triples(g: &Graph, lists: &ListAssignment) -> Result<(Coloring, StrategyTrace)> {
    check_family(g, lists)?;
    run(g, lists, level)
}

fn level(ctx: &mut Ctx, b: &mut Board) -> Res<()> {
    let parts = b.open_parts();
    let k = parts.len();
    for p in &parts {
        if p.len() < 2 {
            continue;
        }
        let Some(c) = shared_color(b, p) else { continue };
        use_color(ctx, b, StepKind::CommonColor, "shared", c, p)?;
        if p.len() == 2 {
            return level(ctx, b);
        }
        if k >= 6 {
            // the rest fits inside the family one size smaller after padding a pair
            let pair = parts.iter().find(|q| q.len() == 2).expect("k >= 6 has a pair part");
            add_phantom(ctx, b, b.part_of(pair[0]), k - 1)?;
            return level(ctx, b);
        }
        return delegate(ctx, b, "rest is K_{3,3,1,1} with 4-lists");
    }
    let mut sizes: Vec<usize> = parts.iter().map(Vec::len).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    if k < 5 || sizes != family_shape(k) {
        return step(format!("open shape {sizes:?} left the family"));
    }
    let open = b.open();
    let forced = ctx.take_force_main();
    if forced || union_of(b, &open).len() < open.len() {
        main(ctx, b, &parts)
    } else {
        small_union(ctx, b, &open, &mut level)
    }
}

fn main(ctx: &mut Ctx, b: &mut Board, parts: &[Vec<usize>]) -> Res<()> {
    let triples: Vec<Vec<usize>> = parts.iter().filter(|p| p.len() == 3).cloned().collect();
    let pairs: Vec<usize> = parts.iter().filter(|p| p.len() == 2).flatten().copied().collect();
    let singles: Vec<usize> = parts.iter().filter(|p| p.len() == 1).flatten().copied().collect();
    let sel = select(b, &triples)?;
    ctx.log(
        StepKind::Select,
        format!(
            "c1={} on {:?}, c2={} on {:?}, missed {}",
            sel.c1, sel.pair1, sel.c2, sel.pair2, sel.missed
        ),
        Vec::new(),
    );
    let part_vs = |p: usize| triples.iter().find(|t| b.part_of(t[0]) == p).cloned().expect("role part");
    let (xs, ys, zs) = (part_vs(sel.parts[0]), part_vs(sel.parts[1]), part_vs(sel.parts[2]));
    let other = |vs: &[usize], not: &[usize]| vs.iter().copied().find(|v| !not.contains(v)).expect("third vertex");
    let x3 = other(&xs, &sel.pair1);
    let y3 = other(&ys, &sel.pair2);
    let z1 = sel.missed;
    let (z2, z3) = {
        let r: Vec<usize> = zs.iter().copied().filter(|&z| z != z1).collect();
        (r[0], r[1])
    };
    let (w1, w2) = (singles[0], singles[1]);

    use_color(ctx, b, StepKind::UseColor, "c1", sel.c1, &sel.pair1)?;
    let Some((u, snapshot)) = deficient_or_finish(ctx, b)? else {
        return Ok(());
    };
    let keep: Vec<usize> = [x3, y3, z1, z2, z3, w1, w2]
        .into_iter()
        .chain(sel.pair2)
        .chain(pairs.iter().copied().filter(|v| u.contains(v)))
        .collect();
    let mut work = b.restricted(&keep);
    let in_pairs: Vec<usize> = pairs.iter().copied().filter(|v| u.contains(v)).collect();
    greedy(ctx, &mut work, &in_pairs, ColorSet::singleton(sel.c2))?;

    let a = union_of(&work, &[x3, w1, w2]);
    if a.len() >= 6 {
        ctx.log(StepKind::Branch, "wide: |A|>=6", Vec::new());
        use_color(ctx, &mut work, StepKind::UseColor, "c2", sel.c2, &sel.pair2)?;
        // z1 misses c1 and c2 and has only four open neighbours: color it last
        small_union(ctx, &mut work, &[x3, y3, z2, z3, w1, w2], &mut |ctx, b| {
            pair_common(ctx, b, "c3", z2, z3)?;
            distinct(ctx, b, &[x3, y3, w1, w2])
        })?;
        greedy(ctx, &mut work, &[z1], ColorSet::EMPTY)?;
    } else {
        narrow(ctx, &mut work, a, [x3, w1, w2], [&ys, &zs])?;
    }
    compose_with(ctx, b, &u, &snapshot, &work)
}

/// `|A| <= 5`: look for a pair in one of the other two parts sharing a
/// color outside `A`.
fn narrow(ctx: &mut Ctx, b: &mut Board, a: ColorSet, [x3, w1, w2]: [usize; 3], roles: [&Vec<usize>; 2]) -> Res<()> {
    let mut found = None;
    'search: for (i, part) in roles.iter().enumerate() {
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            let (u, v) = (part[p], part[q]);
            if let Some(c) = b.avail(u).intersection(b.avail(v)).difference(a).min() {
                found = Some((i, [u, v], c));
                break 'search;
            }
        }
    }
    if let Some((i, pair, c3)) = found {
        ctx.log(StepKind::Branch, "narrow: pair color outside A", Vec::new());
        let (ys, zs) = (roles[i], roles[1 - i]);
        if i == 1 {
            ctx.log(StepKind::Relabel, "swap the two pair-bearing parts", Vec::new());
        }
        let y3 = ys.iter().copied().find(|v| !pair.contains(v)).expect("third vertex");
        use_color(ctx, b, StepKind::UseColor, "c3", c3, &pair)?;
        let Some((z1, c4)) = zs.iter().find_map(|&z| b.avail(z).difference(a).min().map(|c| (z, c))) else {
            return step("no color outside A on the last part");
        };
        use_color(ctx, b, StepKind::UseColor, "c4", c4, &[z1])?;
        let rest: Vec<usize> = zs.iter().copied().filter(|&z| z != z1).collect();
        let (z2, z3) = (rest[0], rest[1]);
        small_union(ctx, b, &[x3, y3, z2, z3, w1, w2], &mut |ctx, b| {
            pair_common(ctx, b, "c5", z2, z3)?;
            greedy(ctx, b, &[x3, y3, w1, w2], ColorSet::EMPTY)
        })
    } else {
        ctx.log(StepKind::Branch, "narrow: no pair color outside A", Vec::new());
        let (ys, zs) = (roles[0], roles[1]);
        let Some((y1, c4)) = ys.iter().find_map(|&y| b.avail(y).difference(a).min().map(|c| (y, c))) else {
            return step("no color outside A on the pair part");
        };
        use_color(ctx, b, StepKind::UseColor, "c4", c4, &[y1])?;
        let rest: Vec<usize> = ys.iter().copied().filter(|&y| y != y1).collect();
        let (y2, y3) = (rest[0], rest[1]);
        let zs = zs.clone();
        small_union(ctx, b, &[x3, y2, y3, zs[0], zs[1], zs[2], w1, w2], &mut |ctx, b| {
            pair_common(ctx, b, "c5", y2, y3)?;
            let mut open_z: Vec<usize> = zs.iter().copied().filter(|&z| b.is_open(z)).collect();
            open_z.sort_by_key(|&z| (std::cmp::Reverse(b.avail(z).len()), z));
            let Some((&z1, others)) = open_z.split_first() else {
                return greedy(ctx, b, &[x3, w1, w2], ColorSet::EMPTY);
            };
            let others = others.to_vec();
            small_union(ctx, b, &[x3, w1, w2].into_iter().chain(others.iter().copied()).collect::<Vec<_>>(), &mut |ctx, b| {
                if others.len() == 2 {
                    pair_common(ctx, b, "c6", others[0], others[1])?;
                }
                greedy(ctx, b, &[x3, w1, w2].into_iter().chain(others.iter().copied()).collect::<Vec<_>>(), ColorSet::EMPTY)
            })?;
            greedy(ctx, b, &[z1], ColorSet::EMPTY)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_proper_l_coloring;

    fn la(lists: &[&[Color]]) -> ListAssignment {
        ListAssignment::from_colors(lists)
    }

    #[test]
    fn forced_selection() {
        let g = Graph::from_sizes(&[3, 3, 3, 1, 1]).unwrap();
        // X: 0 on x1,x2; Y: 1 on y1,y2; z1 avoids 0 and 1
        let l = la(&[
            &[0, 2, 3, 4, 5],
            &[0, 6, 7, 8, 9],
            &[2, 3, 6, 7, 1],
            &[1, 2, 4, 6, 8],
            &[1, 3, 5, 7, 9],
            &[2, 4, 5, 8, 0],
            &[2, 3, 4, 5, 6],
            &[0, 1, 7, 8, 9],
            &[0, 1, 2, 3, 9],
            &[0, 1, 2, 3, 4],
            &[5, 6, 7, 8, 9],
        ]);
        let sel = select_two_pairs(&g, &l).unwrap();
        assert!(sel.holds(|v| g.part_of(v), l.lists()));
    }

    #[test]
    fn rejects_wrong_shape_and_short_lists() {
        let g = Graph::from_sizes(&[3, 3, 1, 1]).unwrap();
        let l = ListAssignment::uniform(8, ColorSet::prefix(5));
        assert!(matches!(replay_three_triples(&g, &l), Err(Error::Precondition(_))));
        let g = Graph::from_sizes(&[3, 3, 3, 1, 1]).unwrap();
        let l = ListAssignment::uniform(11, ColorSet::prefix(4));
        assert!(matches!(replay_three_triples(&g, &l), Err(Error::Precondition(_))));
    }

    #[test]
    fn disjoint_lists_finish_by_hall() {
        let g = Graph::from_sizes(&[3, 3, 3, 1, 1]).unwrap();
        let lists: Vec<ColorSet> = (0..11).map(|v| ColorSet::from_bits(0b11111 << (5 * v))).collect();
        let l = ListAssignment::new(lists);
        let (c, trace) = replay_three_triples(&g, &l).unwrap();
        assert!(is_proper_l_coloring(&g, &l, &c).unwrap());
        assert!(!trace.fallback);
        assert!(trace.steps.iter().any(|s| s.kind == StepKind::Hall));
    }

    #[test]
    fn shared_color_part_goes_first() {
        let g = Graph::from_sizes(&[3, 3, 3, 1, 1]).unwrap();
        let mut lists = vec![ColorSet::prefix(5); 11];
        for v in [3, 4, 5] {
            lists[v] = ColorSet::from_bits(0b11111 << 5);
        }
        let l = ListAssignment::new(lists);
        let (c, trace) = replay_three_triples(&g, &l).unwrap();
        assert!(is_proper_l_coloring(&g, &l, &c).unwrap());
        assert_eq!(trace.steps[0].kind, StepKind::CommonColor);
        assert_eq!(trace.replay(11), c);
    }
}
