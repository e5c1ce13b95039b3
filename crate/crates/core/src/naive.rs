//! Deliberately naive reference implementations. Nothing here shares code
//! paths with the optimized routines they are compared against.

use crate::colorset::{Color, ColorSet};
use crate::graph::{Graph, ListAssignment};
use crate::solver::solve;

/// Tries every list-respecting vertex→color map.
pub fn brute_force_colorable(g: &Graph, lists: &ListAssignment) -> bool {
    let n = g.vertex_count();
    let options: Vec<Vec<Color>> = lists.lists().iter().map(|l| l.iter().collect()).collect();
    if options.iter().any(Vec::is_empty) {
        return false;
    }
    let mut index = vec![0usize; n];
    loop {
        let proper = (0..n).all(|u| {
            (u + 1..n).all(|v| !g.adjacent(u, v) || options[u][index[u]] != options[v][index[v]])
        });
        if proper {
            return true;
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == n {
                return false;
            }
            index[pos] += 1;
            if index[pos] < options[pos].len() {
                break;
            }
            index[pos] = 0;
            pos += 1;
        }
    }
}

fn union_of(lists: &[ColorSet], mask: u32) -> ColorSet {
    (0..lists.len())
        .filter(|&v| mask >> v & 1 == 1)
        .fold(ColorSet::EMPTY, |acc, v| acc.union(lists[v]))
}

fn is_deficient(lists: &[ColorSet], mask: u32) -> bool {
    mask != 0 && union_of(lists, mask).len() < mask.count_ones() as usize
}

/// Hall's condition by scanning every subset.
pub fn hall_holds(lists: &[ColorSet]) -> bool {
    (1u32..1 << lists.len()).all(|mask| !is_deficient(lists, mask))
}

/// Every inclusion-maximal deficient subset, by scanning all supersets.
pub fn maximal_deficient_sets(lists: &[ColorSet]) -> Vec<Vec<usize>> {
    let n = lists.len();
    let full = (1u32 << n) - 1;
    let mut out = Vec::new();
    for mask in 1..=full {
        if !is_deficient(lists, mask) {
            continue;
        }
        let maximal = (mask + 1..=full).all(|sup| sup & mask != mask || !is_deficient(lists, sup));
        if maximal {
            out.push((0..n).filter(|&v| mask >> v & 1 == 1).collect());
        }
    }
    out
}

/// Every k-subset of `0..universe`, ascending as bit patterns.
pub fn all_k_subsets(universe: usize, k: usize) -> Vec<ColorSet> {
    (0u64..1 << universe)
        .filter(|m| m.count_ones() as usize == k)
        .map(ColorSet::from_bits)
        .collect()
}

/// First uncolorable k-list assignment over `n-1` colors, enumerating the
/// full product without any symmetry reduction. `None` means k-choosable.
pub fn naive_counterexample(g: &Graph, k: usize) -> Option<ListAssignment> {
    let n = g.vertex_count();
    if k >= n {
        return None;
    }
    let universe = n - 1;
    let subsets = all_k_subsets(universe, k);
    let mut index = vec![0usize; n];
    loop {
        let lists = ListAssignment::new(index.iter().map(|&i| subsets[i]).collect());
        if solve(g, &lists).is_none() {
            return Some(lists);
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return None;
            }
            index[pos] += 1;
            if index[pos] < subsets.len() {
                break;
            }
            index[pos] = 0;
            pos += 1;
        }
    }
}
