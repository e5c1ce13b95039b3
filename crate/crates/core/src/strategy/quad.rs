//! One part of size 4, two of size 3, `k - 6` of size 2 and three singletons.

use super::{
    compose_with, deficient_or_finish, delegate, distinct, doubled, greedy, holders, pair_common, run, shared_color,
    small_union, step, union_of, use_color, Board, Ctx, Res, StepKind, StrategyTrace,
};
use crate::colorset::ColorSet;
use crate::error::{Error, Result};
use crate::graph::{Coloring, Graph, ListAssignment};

fn family_shape(k: usize) -> Vec<usize> {
    let mut s = vec![4, 3, 3];
    s.extend(std::iter::repeat(2).take(k.saturating_sub(6)));
    s.extend([1, 1, 1]);
    s
}

/// Colors a k-list assignment of `K_{4,3,3,2,...,2,1,1,1}` by replaying the
/// constructive argument; see the module docs of `strategy`.
pub fn replay_quad_two_triples(g: &Graph, lists: &ListAssignment) -> Result<(Coloring, StrategyTrace)> {
    lists.check_against(g)?;
    let k = g.part_count();
    if k < 6 || g.shape().sizes() != family_shape(k).as_slice() {
        return Err(Error::Precondition(format!(
            "shape {} is not one quadruple, two triples, k-6 pairs and three singletons",
            g.shape().notation()
        )));
    }
    if lists.min_size() < k {
        return Err(Error::Precondition(format!("lists must have at least {k} colors")));
    }
    run(g, lists, level)
}

fn level(ctx: &mut Ctx, b: &mut Board) -> Res<()> {
    let parts = b.open_parts();
    let k = parts.len();
    for p in parts.iter().filter(|p| p.len() >= 3) {
        if let Some(c) = shared_color(b, p) {
            use_color(ctx, b, StepKind::CommonColor, "shared", c, p)?;
            return delegate(ctx, b, "rest is a subgraph of K_{4,3,2,...,2,1,1} with (k-1)-lists");
        }
    }
    for p in parts.iter().filter(|p| p.len() == 2) {
        if let Some(c) = shared_color(b, p) {
            use_color(ctx, b, StepKind::CommonColor, "shared", c, p)?;
            return level(ctx, b);
        }
    }
    let mut sizes: Vec<usize> = parts.iter().map(Vec::len).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    if k < 6 || sizes != family_shape(k) {
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
    let quad = parts.iter().find(|p| p.len() == 4).cloned().expect("shape checked");
    let triples: Vec<Vec<usize>> = parts.iter().filter(|p| p.len() == 3).cloned().collect();
    let pairs: Vec<usize> = parts.iter().filter(|p| p.len() == 2).flatten().copied().collect();
    let singles: Vec<usize> = parts.iter().filter(|p| p.len() == 1).flatten().copied().collect();

    let tripled = union_of(b, &quad).iter().find(|&c| holders(b, &quad, c).len() >= 3);
    // roles: xs (three vertices), y3, zs
    let (xs, y3, zs, u, snapshot);
    if let Some(c) = tripled {
        let three = holders(b, &quad, c);
        use_color(ctx, b, StepKind::UseColor, "c1", c, &three)?;
        let lone = quad.iter().copied().find(|v| !three.contains(v)).expect("no color on all four");
        ctx.log(
            StepKind::Relabel,
            format!("first triple plays the quadruple, vertex {lone} plays its remnant"),
            Vec::new(),
        );
        let Some(found) = deficient_or_finish(ctx, b)? else {
            return Ok(());
        };
        (u, snapshot) = found;
        xs = triples[0].clone();
        y3 = lone;
        zs = triples[1].clone();
    } else {
        let Some((i, c1)) = (0..2).find_map(|i| doubled(b, &triples[i]).first().map(|&c| (i, c))) else {
            return step("no color doubled in a triple");
        };
        if i == 1 {
            ctx.log(StepKind::Relabel, "swap the two triples", Vec::new());
        }
        let ys = &triples[i];
        let pair = holders(b, ys, c1);
        use_color(ctx, b, StepKind::UseColor, "c1", c1, &pair[..2])?;
        y3 = ys.iter().copied().find(|v| !pair[..2].contains(v)).expect("third vertex");
        zs = triples[1 - i].clone();
        let Some(found) = deficient_or_finish(ctx, b)? else {
            return Ok(());
        };
        (u, snapshot) = found;
        let mut chosen: Vec<usize> = quad.iter().copied().filter(|v| u.contains(v)).collect();
        if chosen.len() > 3 {
            return step("U holds the whole quadruple");
        }
        let mut rest: Vec<usize> = quad.iter().copied().filter(|v| !u.contains(v)).collect();
        rest.sort_by_key(|&v| (std::cmp::Reverse(b.avail(v).len()), v));
        chosen.extend(rest.into_iter().take(3 - chosen.len()));
        chosen.sort_unstable();
        xs = chosen;
    }
    let in_pairs: Vec<usize> = pairs.iter().copied().filter(|v| u.contains(v)).collect();
    let uprime: Vec<usize> = xs
        .iter()
        .copied()
        .chain([y3])
        .chain(zs.iter().copied())
        .chain(singles.iter().copied())
        .collect();
    let keep: Vec<usize> = uprime.iter().copied().chain(in_pairs.iter().copied()).collect();
    let mut work = b.restricted(&keep);
    greedy(ctx, &mut work, &in_pairs, ColorSet::EMPTY)?;
    let w = [singles[0], singles[1], singles[2]];
    small_union(ctx, &mut work, &uprime, &mut |ctx, b| cases(ctx, b, &xs, y3, &zs, w))?;
    compose_with(ctx, b, &u, &snapshot, &work)
}

fn cases(ctx: &mut Ctx, b: &mut Board, xs: &[usize], y3: usize, zs: &[usize], w: [usize; 3]) -> Res<()> {
    let a = union_of(b, &[y3, w[0], w[1], w[2]]);
    let open_x: Vec<usize> = xs.iter().copied().filter(|&v| b.is_open(v)).collect();
    let dx = doubled(b, &open_x);
    let mut open_z: Vec<usize> = zs.iter().copied().filter(|&z| b.is_open(z)).collect();
    if a.len() >= 7 {
        ctx.log(StepKind::Branch, "wide: |A|>=7", Vec::new());
        open_z.sort_by_key(|&z| (std::cmp::Reverse(b.avail(z).len()), z));
        let z1 = open_z.first().copied();
        let avoid = z1.map_or(ColorSet::EMPTY, |z| b.avail(z));
        let c2 = match dx.iter().copied().find(|&c| !avoid.contains(c)) {
            Some(c) => Some(c),
            None => {
                ctx.log(StepKind::Branch, "every doubled color is at z1", Vec::new());
                dx.first().copied()
            }
        };
        let x3 = use_doubled(ctx, b, &open_x, c2)?;
        let rest: Vec<usize> = x3.iter().copied().chain([y3]).chain(open_z.iter().copied()).chain(w).collect();
        let zz: Vec<usize> = open_z.iter().skip(1).copied().collect();
        let tail: Vec<usize> = rest.iter().copied().filter(|v| !zz.contains(v)).collect();
        small_union(ctx, b, &rest, &mut |ctx, b| {
            if zz.len() == 2 {
                pair_common(ctx, b, "c3", zz[0], zz[1])?;
            }
            distinct(ctx, b, &tail)?;
            greedy(ctx, b, &zz, ColorSet::EMPTY)
        })
    } else {
        ctx.log(StepKind::Branch, "narrow: |A|<=6", Vec::new());
        let Some(c2) = dx.iter().copied().find(|&c| !a.contains(c)) else {
            return step("every doubled color of the quadruple role lies in A");
        };
        let x3 = use_doubled(ctx, b, &open_x, Some(c2))?;
        let rest: Vec<usize> = x3.iter().copied().chain([y3]).chain(open_z.iter().copied()).chain(w).collect();
        let zs = open_z.clone();
        small_union(ctx, b, &rest, &mut |ctx, b| {
            let open_z: Vec<usize> = zs.iter().copied().filter(|&z| b.is_open(z)).collect();
            if let Some(c3) = doubled(b, &open_z).into_iter().find(|&c| !a.contains(c)) {
                let pair = holders(b, &open_z, c3);
                use_color(ctx, b, StepKind::UseColor, "c3", c3, &pair[..2])?;
            } else if open_z.len() == 3 {
                return step("no doubled color outside A in the last triple");
            }
            greedy(ctx, b, &rest, ColorSet::EMPTY)
        })
    }
}

/// Uses `c` on the first two open vertices holding it; returns the rest.
fn use_doubled(ctx: &mut Ctx, b: &mut Board, xs: &[usize], c: Option<u8>) -> Res<Vec<usize>> {
    let Some(c) = c else {
        return step("no doubled color in the quadruple role");
    };
    let pair: Vec<usize> = holders(b, xs, c).into_iter().take(2).collect();
    use_color(ctx, b, StepKind::UseColor, "c2", c, &pair)?;
    Ok(xs.iter().copied().filter(|v| !pair.contains(v)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_proper_l_coloring;

    #[test]
    fn triple_color_in_quadruple_relabels() {
        let g = Graph::from_sizes(&[4, 3, 3, 1, 1, 1]).unwrap();
        let mut lists: Vec<ColorSet> = (0..13).map(|v| ColorSet::from_bits(0b111111 << (v % 2 * 6))).collect();
        // color 11 on three vertices of the quadruple, not the fourth
        lists[0] = [0u8, 1, 2, 3, 4, 11].into_iter().collect();
        lists[1] = [5u8, 6, 7, 8, 9, 11].into_iter().collect();
        lists[2] = [0u8, 2, 4, 6, 8, 11].into_iter().collect();
        lists[3] = [1u8, 3, 5, 7, 9, 10].into_iter().collect();
        let l = ListAssignment::new(lists);
        let (c, trace) = replay_quad_two_triples(&g, &l).unwrap();
        assert!(is_proper_l_coloring(&g, &l, &c).unwrap());
        assert!(trace.fallback || trace.count(StepKind::Relabel) >= 1, "{trace}");
    }

    #[test]
    fn shared_pair_colored_first() {
        let g = Graph::from_sizes(&[4, 3, 3, 2, 1, 1, 1]).unwrap();
        let mut lists: Vec<ColorSet> = (0..15).map(|v| ColorSet::from_bits(0b1111111 << (v % 2 * 7))).collect();
        lists[10] = ColorSet::prefix(7);
        lists[11] = ColorSet::prefix(7);
        let l = ListAssignment::new(lists);
        let (c, trace) = replay_quad_two_triples(&g, &l).unwrap();
        assert!(is_proper_l_coloring(&g, &l, &c).unwrap());
        assert_eq!(trace.steps[0].kind, StepKind::CommonColor);
    }
}
