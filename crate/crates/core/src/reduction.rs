//! Reductions: maximal deficient subsets and the colorings they compose,
//! the bounded color universe, size-profile witness streams, and coloring
//! whole parts that share a color.

use serde::{Deserialize, Serialize};

use crate::colorset::ColorSet;
use crate::enumerate::{AssignmentStream, StreamConfig};
use crate::error::{Error, Result};
use crate::graph::{Coloring, Graph, ListAssignment, PartitionShape};
use crate::solver::{for_each_subset_union, lex_less, max_matching, members, sdr_lists, SUBSET_BOUND};

/// A vertex set `X` with `|L(X)| < |X|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeficientSet {
    pub members: Vec<usize>,
    pub color_union: ColorSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionKind {
    CommonColorPart,
    DeficientSubset,
    UniverseBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub kind: ReductionKind,
    /// Partial coloring of the original instance produced by this step.
    pub colored: Coloring,
    pub removed_colors: ColorSet,
}

/// The inclusion-maximal deficient set with the lexicographically least
/// sorted member list, or `None` when Hall's condition holds.
pub fn maximal_deficient_subset(g: &Graph, lists: &ListAssignment) -> Result<Option<DeficientSet>> {
    lists.check_against(g)?;
    Ok(maximal_deficient_mask(lists.lists())?.map(|mask| {
        let members = members(mask);
        let color_union = lists.union_over(members.iter().copied());
        DeficientSet { members, color_union }
    }))
}

pub(crate) fn maximal_deficient_mask(lists: &[ColorSet]) -> Result<Option<u32>> {
    let n = lists.len();
    if n > SUBSET_BOUND {
        return Err(Error::Capacity { n, bound: SUBSET_BOUND });
    }
    if max_matching(lists).iter().all(Option::is_some) {
        return Ok(None);
    }
    let size = 1usize << n;
    let mut deficient = vec![false; size];
    for_each_subset_union(lists, &mut |mask, union| {
        if union.count_ones() < mask.count_ones() {
            deficient[mask as usize] = true;
        }
    });
    // reach[m]: some superset of m (m included) is deficient
    let mut reach = deficient.clone();
    for i in 0..n {
        let bit = 1usize << i;
        for m in 0..size {
            if m & bit == 0 && reach[m | bit] {
                reach[m] = true;
            }
        }
    }
    let mut best: Option<u32> = None;
    for m in 1..size {
        if !deficient[m] {
            continue;
        }
        let maximal = (0..n).all(|i| m >> i & 1 == 1 || !reach[m | 1 << i]);
        if maximal && best.map_or(true, |b| lex_less(m as u32, b)) {
            best = Some(m as u32);
        }
    }
    Ok(best)
}

/// Extends a coloring of a maximal deficient set `X` to the whole graph:
/// outside `X` the lists `L(v) \ L(X)` have distinct representatives, and
/// colors outside `L(X)` never clash with the coloring of `X`.
pub fn compose_deficient(g: &Graph, lists: &ListAssignment, x: &DeficientSet, cx: &Coloring) -> Result<Coloring> {
    lists.check_against(g)?;
    let n = g.vertex_count();
    if cx.len() != n {
        return Err(Error::Precondition(format!("coloring has {} entries for {n} vertices", cx.len())));
    }
    let mut inside = vec![false; n];
    for &v in &x.members {
        if v >= n || inside[v] {
            return Err(Error::Precondition(format!("bad member {v} in deficient set")));
        }
        inside[v] = true;
    }
    let union = lists.union_over(x.members.iter().copied());
    if x.members.is_empty() || union != x.color_union || union.len() >= x.members.len() {
        return Err(Error::Precondition("set is not deficient".into()));
    }
    for &u in &x.members {
        let Some(c) = cx.get(u) else {
            return Err(Error::Precondition(format!("vertex {u} of X is uncolored")));
        };
        if !lists[u].contains(c) {
            return Err(Error::Precondition(format!("vertex {u} colored {c} outside its list")));
        }
        if x.members.iter().any(|&w| g.adjacent(u, w) && cx.get(w) == Some(c)) {
            return Err(Error::Precondition(format!("coloring of X is improper at vertex {u}")));
        }
    }
    let rest: Vec<usize> = (0..n).filter(|&v| !inside[v]).collect();
    if rest.len() > SUBSET_BOUND {
        return Err(Error::Capacity { n: rest.len(), bound: SUBSET_BOUND });
    }
    let rest_lists: Vec<ColorSet> = rest.iter().map(|&v| lists[v]).collect();
    let mut grows = false;
    for_each_subset_union(&rest_lists, &mut |mask, bits| {
        let total = x.members.len() + mask.count_ones() as usize;
        if (bits | union.bits()).count_ones() < total as u32 {
            grows = true;
        }
    });
    if grows {
        return Err(Error::Precondition("deficient set is not maximal".into()));
    }
    let reduced: Vec<ColorSet> = rest_lists.iter().map(|l| l.difference(union)).collect();
    let reps = sdr_lists(&reduced)
        .ok_or_else(|| Error::InvariantViolation("no representatives outside a maximal deficient set".into()))?;
    let mut out = Coloring::empty(n);
    for &u in &x.members {
        out.set(u, cx.get(u).expect("checked above"));
    }
    for (&v, c) in rest.iter().zip(reps) {
        out.set(v, c);
    }
    Ok(out)
}

/// `|L(V)| < |V|`: the only assignments an exhaustive check has to visit.
pub fn universe_bound_holds(lists: &ListAssignment) -> bool {
    lists.union().len() < lists.len()
}

/// Outcome of coloring every part whose lists share a color.
#[derive(Clone, Debug)]
pub struct CommonColorReduction {
    /// `None` when every part was colored.
    pub residual: Option<Graph>,
    pub lists: ListAssignment,
    /// Residual vertex → original vertex.
    pub original_vertex: Vec<usize>,
    pub original_count: usize,
    pub steps: Vec<ReductionStep>,
}

impl CommonColorReduction {
    /// Combines a coloring of the residual with the colors fixed by the steps.
    pub fn lift(&self, residual: &Coloring) -> Coloring {
        let mut out = Coloring::empty(self.original_count);
        for step in &self.steps {
            for (v, c) in step.colored.colored_vertices() {
                out.set(v, c);
            }
        }
        for (r, &v) in self.original_vertex.iter().enumerate() {
            if let Some(c) = residual.get(r) {
                out.set(v, c);
            }
        }
        out
    }
}

/// Repeatedly colors a part of size at least two whose lists all contain a
/// color `c`, deletes the part and removes `c` from the remaining lists.
/// Lowest part first, lowest shared color first, until no part qualifies.
pub fn common_color_part_reduction(g: &Graph, lists: &ListAssignment) -> Result<CommonColorReduction> {
    lists.check_against(g)?;
    let n = g.vertex_count();
    let mut current: Vec<ColorSet> = lists.lists().to_vec();
    let mut alive: Vec<bool> = vec![true; g.part_count()];
    let mut steps = Vec::new();
    'outer: loop {
        for p in 0..g.part_count() {
            if !alive[p] || g.part_size(p) < 2 {
                continue;
            }
            let shared = g.part(p).fold(ColorSet::from_bits(u64::MAX), |acc, v| acc.intersection(current[v]));
            if let Some(c) = shared.min() {
                let mut colored = Coloring::empty(n);
                for v in g.part(p) {
                    colored.set(v, c);
                }
                alive[p] = false;
                for l in current.iter_mut() {
                    l.remove(c);
                }
                steps.push(ReductionStep {
                    kind: ReductionKind::CommonColorPart,
                    colored,
                    removed_colors: ColorSet::singleton(c),
                });
                continue 'outer;
            }
        }
        break;
    }
    let mut sizes = Vec::new();
    let mut original_vertex = Vec::new();
    for p in (0..g.part_count()).filter(|&p| alive[p]) {
        sizes.push(g.part_size(p));
        original_vertex.extend(g.part(p));
    }
    let residual = if sizes.is_empty() {
        None
    } else {
        // parts stay in non-increasing order, so numbering is preserved
        Some(Graph::new(PartitionShape::new(sizes)?))
    };
    let residual_lists = ListAssignment::new(original_vertex.iter().map(|&v| current[v]).collect());
    Ok(CommonColorReduction {
        residual,
        lists: residual_lists,
        original_vertex,
        original_count: n,
        steps,
    })
}

/// Every canonical assignment with the given per-vertex list sizes over the
/// colors `0..n-1`. All of them being colorable means the graph is colorable
/// from every assignment with this size profile.
pub fn size_choosable_witness_space(g: &Graph, sizes: &[usize]) -> Result<AssignmentStream> {
    let n = g.vertex_count();
    if sizes.len() != n {
        return Err(Error::Precondition(format!("{} sizes for {n} vertices", sizes.len())));
    }
    if let Some(&s) = sizes.iter().find(|&&s| s >= n) {
        return Err(Error::Precondition(format!("list size {s} is not below the vertex count {n}")));
    }
    AssignmentStream::new(g, sizes.to_vec(), n - 1, StreamConfig::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colorset::Color;
    use crate::graph::is_proper_l_coloring;
    use crate::naive::maximal_deficient_sets;
    use crate::solver::solve;

    fn la(lists: &[&[Color]]) -> ListAssignment {
        ListAssignment::from_colors(lists)
    }

    #[test]
    fn deficient_examples() {
        let g = Graph::from_sizes(&[3, 1]).unwrap();
        let l = la(&[&[0, 1], &[0, 1], &[0, 1], &[5, 6, 7]]);
        let x = maximal_deficient_subset(&g, &l).unwrap().unwrap();
        assert_eq!(x.members, vec![0, 1, 2]);
        assert_eq!(x.color_union, ColorSet::prefix(2));

        let l = la(&[&[0], &[1], &[2], &[3]]);
        assert_eq!(maximal_deficient_subset(&g, &l).unwrap(), None);

        let g = Graph::from_sizes(&[2, 2, 1]).unwrap();
        let l = la(&[&[0], &[0], &[0, 1], &[0, 1], &[7, 8, 9]]);
        let x = maximal_deficient_subset(&g, &l).unwrap().unwrap();
        assert_eq!(x.members, vec![0, 1, 2, 3]);
        assert_eq!(maximal_deficient_sets(l.lists()), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn deficient_capacity() {
        let g = Graph::from_sizes(&[25]).unwrap();
        let l = ListAssignment::uniform(25, ColorSet::singleton(0));
        assert!(matches!(maximal_deficient_subset(&g, &l), Err(Error::Capacity { .. })));
    }

    #[test]
    fn compose_examples() {
        let g = Graph::from_sizes(&[2, 1]).unwrap();
        let l = la(&[&[0], &[0], &[0, 1, 2]]);
        let x = maximal_deficient_subset(&g, &l).unwrap().unwrap();
        assert_eq!(x.members, vec![0, 1]);
        let mut cx = Coloring::empty(3);
        cx.set(0, 0);
        cx.set(1, 0);
        let out = compose_deficient(&g, &l, &x, &cx).unwrap();
        assert!(is_proper_l_coloring(&g, &l, &out).unwrap());
        assert_ne!(out.get(2), Some(0));

        let g = Graph::from_sizes(&[3]).unwrap();
        let l = la(&[&[0], &[0], &[0]]);
        let x = maximal_deficient_subset(&g, &l).unwrap().unwrap();
        let cx = Coloring::from_total(&[0, 0, 0]);
        assert_eq!(compose_deficient(&g, &l, &x, &cx).unwrap(), cx);
    }

    #[test]
    fn compose_rejects_bad_input() {
        let g = Graph::from_sizes(&[1, 1, 1]).unwrap();
        let l = la(&[&[0], &[0], &[0]]);
        // {0,1} is deficient but not maximal
        let x = DeficientSet {
            members: vec![0, 1],
            color_union: ColorSet::singleton(0),
        };
        let cx = Coloring::from_partial(vec![Some(0), Some(0), None]);
        assert!(matches!(compose_deficient(&g, &l, &x, &cx), Err(Error::Precondition(_))));

        let g = Graph::from_sizes(&[1, 1, 1]).unwrap();
        let l = la(&[&[0], &[0], &[1, 2]]);
        let x = maximal_deficient_subset(&g, &l).unwrap().unwrap();
        assert!(matches!(compose_deficient(&g, &l, &x, &cx), Err(Error::Precondition(_))));
    }

    #[test]
    fn universe_bound_examples() {
        assert!(universe_bound_holds(&ListAssignment::uniform(4, ColorSet::prefix(2))));
        assert!(!universe_bound_holds(&la(&[&[0], &[1], &[2]])));
    }

    #[test]
    fn common_color_examples() {
        let g = Graph::from_sizes(&[2, 2]).unwrap();
        let l = la(&[&[0, 1], &[0, 2], &[3, 4], &[3, 5]]);
        let r = common_color_part_reduction(&g, &l).unwrap();
        assert!(r.residual.is_none());
        assert_eq!(r.steps.len(), 2);
        let colors: Vec<ColorSet> = r.steps.iter().map(|s| s.removed_colors).collect();
        assert_eq!(colors, vec![ColorSet::singleton(0), ColorSet::singleton(3)]);
        let full = r.lift(&Coloring::empty(0));
        assert!(is_proper_l_coloring(&g, &l, &full).unwrap());

        let l = la(&[&[0, 1], &[2, 3], &[4, 5], &[6, 7]]);
        let r = common_color_part_reduction(&g, &l).unwrap();
        assert!(r.steps.is_empty());
        assert_eq!(r.lists, l);

        let g = Graph::from_sizes(&[3, 3]).unwrap();
        let l = la(&[&[0, 1], &[0, 2], &[0, 3], &[0, 1], &[0, 2], &[1, 2]]);
        let r = common_color_part_reduction(&g, &l).unwrap();
        assert_eq!(r.steps.len(), 1);
        assert_eq!(r.residual.as_ref().unwrap().shape().sizes(), &[3]);
        assert_eq!(r.lists, la(&[&[1], &[2], &[1, 2]]));
        assert_eq!(r.original_vertex, vec![3, 4, 5]);
        let rc = solve(r.residual.as_ref().unwrap(), &r.lists).unwrap();
        assert!(is_proper_l_coloring(&g, &l, &r.lift(&rc)).unwrap());
    }

    #[test]
    fn witness_space_examples() {
        let g = Graph::from_sizes(&[1, 1]).unwrap();
        let all: Vec<_> = size_choosable_witness_space(&g, &[1, 1]).unwrap().collect();
        assert_eq!(all, vec![la(&[&[0], &[0]])]);
        assert!(solve(&g, &all[0]).is_none());

        let g = Graph::from_sizes(&[2, 2]).unwrap();
        for l in size_choosable_witness_space(&g, &[2, 2, 2, 2]).unwrap() {
            assert!(universe_bound_holds(&l));
            assert!(l.is_k_assignment(2));
        }
        assert!(size_choosable_witness_space(&g, &[4, 2, 2, 2]).is_err());

        // {0}{0}{0}, {0}{0}{1} up to symmetry: two orbits
        let g = Graph::from_sizes(&[1, 1, 1]).unwrap();
        assert_eq!(size_choosable_witness_space(&g, &[1, 1, 1]).unwrap().count(), 2);
    }
}
