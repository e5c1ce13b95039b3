//! Orbit minimization for list assignments.
//!
//! The group acting on an assignment is (all color permutations) ×
//! (automorphisms of the multipartite graph). Assignments are compared
//! vertex by vertex, each list compared as an integer bit pattern. For a
//! fixed vertex order the least color relabeling is obtained by ordered
//! partition refinement: every list splits each color cell into the part it
//! contains (lower labels) and the rest. The vertex orders are explored
//! level by level, keeping only branches that tie for the least image so far.

use std::cmp::Ordering;

use crate::colorset::ColorSet;
use crate::graph::{Graph, ListAssignment};

/// A run of consecutive positions forming one part (or one part's prefix).
/// Blocks sharing a `key` may be exchanged by the group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Block {
    pub start: usize,
    pub len: usize,
    pub key: u32,
}

/// Group description: vertex classes restrict which vertices may be
/// exchanged (used for fixed list-size profiles), blocks describe parts.
#[derive(Clone, Debug)]
pub(crate) struct Frame {
    pub class: Vec<u32>,
    pub blocks: Vec<Block>,
    block_of: Vec<usize>,
}

impl Frame {
    /// Full automorphism group of `g`, restricted to maps that preserve `class`.
    pub fn for_graph(g: &Graph, class: &[u32]) -> Frame {
        Frame::for_prefix(g, class, g.vertex_count())
    }

    /// The subgroup that maps the first `len` positions onto themselves:
    /// complete parts keep their exchange keys, a trailing partial part
    /// gets a key of its own.
    pub fn for_prefix(g: &Graph, class: &[u32], len: usize) -> Frame {
        let mut signatures: Vec<Vec<u32>> = Vec::new();
        let mut blocks = Vec::new();
        for range in g.parts() {
            if range.start >= len {
                break;
            }
            let end = range.end.min(len);
            let partial = end < range.end;
            let mut sig: Vec<u32> = class[range.start..end].to_vec();
            sig.sort_unstable();
            // partial blocks get a signature no complete block can share
            sig.insert(0, if partial { u32::MAX - range.start as u32 } else { 0 });
            let key = match signatures.iter().position(|s| *s == sig) {
                Some(i) => i as u32,
                None => {
                    signatures.push(sig);
                    (signatures.len() - 1) as u32
                }
            };
            blocks.push(Block {
                start: range.start,
                len: end - range.start,
                key,
            });
        }
        let mut block_of = vec![0; len];
        for (b, block) in blocks.iter().enumerate() {
            for slot in &mut block_of[block.start..block.start + block.len] {
                *slot = b;
            }
        }
        Frame {
            class: class[..len].to_vec(),
            blocks,
            block_of,
        }
    }

    fn len(&self) -> usize {
        self.block_of.len()
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Branch {
    used: u64,
    used_blocks: u64,
    src_block: usize,
    cells: Vec<u64>,
}

fn image(cells: &[u64], list: u64) -> u64 {
    let mut img = 0u64;
    let mut offset = 0u32;
    for &cell in cells {
        let hit = (cell & list).count_ones();
        if hit > 0 {
            img |= low_bits(hit) << offset;
        }
        offset += cell.count_ones();
    }
    img
}

fn low_bits(count: u32) -> u64 {
    if count >= 64 {
        u64::MAX
    } else {
        (1u64 << count) - 1
    }
}

fn refine(cells: &[u64], list: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(cells.len() + 2);
    for &cell in cells {
        let inside = cell & list;
        let outside = cell & !list;
        if inside != 0 {
            out.push(inside);
        }
        if outside != 0 {
            out.push(outside);
        }
    }
    out
}

enum Mode<'t> {
    Minimize,
    Check(&'t [u64]),
}

enum Outcome {
    Image(Vec<u64>),
    Canonical,
    NotCanonical,
}

fn search(lists: &[u64], frame: &Frame, mode: Mode<'_>) -> Outcome {
    let n = frame.len();
    let universe = lists[..n].iter().fold(0u64, |acc, &l| acc | l);
    let mut frontier = vec![Branch {
        used: 0,
        used_blocks: 0,
        src_block: usize::MAX,
        cells: if universe == 0 { Vec::new() } else { vec![universe] },
    }];
    let mut result = Vec::with_capacity(n);
    let mut candidates: Vec<(u64, usize, usize)> = Vec::new();

    for pos in 0..n {
        let slot = frame.block_of[pos];
        let block = frame.blocks[slot];
        let opening = pos == block.start;
        let mut best: Option<u64> = None;
        let mut next: Vec<Branch> = Vec::new();

        for branch in &frontier {
            candidates.clear();
            if opening {
                let mut seen_blocks: Vec<Vec<(u32, u64)>> = Vec::new();
                for (b, src) in frame.blocks.iter().enumerate() {
                    if branch.used_blocks >> b & 1 == 1 || src.key != block.key {
                        continue;
                    }
                    // blocks with identical contents lead to the same images
                    let mut content: Vec<(u32, u64)> = (src.start..src.start + src.len)
                        .map(|v| (frame.class[v], lists[v]))
                        .collect();
                    content.sort_unstable();
                    if seen_blocks.contains(&content) {
                        continue;
                    }
                    seen_blocks.push(content);
                    push_vertex_candidates(lists, frame, branch.used, b, pos, &mut candidates);
                }
            } else {
                push_vertex_candidates(lists, frame, branch.used, branch.src_block, pos, &mut candidates);
            }

            for &(list, v, b) in &candidates {
                let img = image(&branch.cells, list);
                match mode {
                    Mode::Check(target) => match img.cmp(&target[pos]) {
                        Ordering::Less => return Outcome::NotCanonical,
                        Ordering::Greater => continue,
                        Ordering::Equal => {}
                    },
                    Mode::Minimize => match best.map(|m| img.cmp(&m)) {
                        Some(Ordering::Greater) => continue,
                        Some(Ordering::Less) => next.clear(),
                        _ => {}
                    },
                }
                best = Some(img);
                next.push(Branch {
                    used: branch.used | 1u64 << v,
                    used_blocks: branch.used_blocks | 1u64 << b,
                    src_block: b,
                    cells: refine(&branch.cells, list),
                });
            }
        }

        match best {
            Some(m) => result.push(m),
            // the identity branch always matches in check mode
            None => return Outcome::NotCanonical,
        }
        if next.len() > 1 {
            next.sort_unstable();
            next.dedup();
        }
        frontier = next;
    }

    match mode {
        Mode::Minimize => Outcome::Image(result),
        Mode::Check(_) => Outcome::Canonical,
    }
}

fn push_vertex_candidates(
    lists: &[u64],
    frame: &Frame,
    used: u64,
    src_block: usize,
    pos: usize,
    out: &mut Vec<(u64, usize, usize)>,
) {
    let block = frame.blocks[src_block];
    let first = out.len();
    for v in block.start..block.start + block.len {
        if used >> v & 1 == 1 || frame.class[v] != frame.class[pos] {
            continue;
        }
        // two unused vertices of one part with equal lists are interchangeable
        if out[first..].iter().any(|&(l, _, _)| l == lists[v]) {
            continue;
        }
        out.push((lists[v], v, src_block));
    }
}

/// Least assignment in the orbit, as raw bit patterns per position.
pub(crate) fn min_image(lists: &[u64], frame: &Frame) -> Vec<u64> {
    match search(lists, frame, Mode::Minimize) {
        Outcome::Image(img) => img,
        _ => unreachable!("minimize mode always yields an image"),
    }
}

/// True when `lists` (restricted to the frame's positions) is already the
/// least member of its orbit.
pub(crate) fn is_min_image(lists: &[u64], frame: &Frame) -> bool {
    matches!(search(lists, frame, Mode::Check(lists)), Outcome::Canonical)
}

/// Lexicographically least assignment in the orbit of `lists` under color
/// permutations and graph automorphisms.
pub fn canonicalize(g: &Graph, lists: &ListAssignment) -> ListAssignment {
    let class = vec![0u32; g.vertex_count()];
    let frame = Frame::for_graph(g, &class);
    let raw: Vec<u64> = lists.lists().iter().map(|l| l.bits()).collect();
    ListAssignment::new(min_image(&raw, &frame).into_iter().map(ColorSet::from_bits).collect())
}

/// Orbit representative under the subgroup preserving a per-vertex class
/// (e.g. a list-size profile).
pub fn canonicalize_with_classes(g: &Graph, lists: &ListAssignment, class: &[u32]) -> ListAssignment {
    let frame = Frame::for_graph(g, class);
    let raw: Vec<u64> = lists.lists().iter().map(|l| l.bits()).collect();
    ListAssignment::new(min_image(&raw, &frame).into_iter().map(ColorSet::from_bits).collect())
}

pub fn is_canonical(g: &Graph, lists: &ListAssignment) -> bool {
    let class = vec![0u32; g.vertex_count()];
    let frame = Frame::for_graph(g, &class);
    let raw: Vec<u64> = lists.lists().iter().map(|l| l.bits()).collect();
    is_min_image(&raw, &frame)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colorset::Color;
    use crate::graph::{permute_lists, relabel_lists};

    fn la(lists: &[&[Color]]) -> ListAssignment {
        ListAssignment::from_colors(lists)
    }

    #[test]
    fn relabels_in_first_use_order() {
        let g = Graph::from_sizes(&[1, 1]).unwrap();
        assert_eq!(canonicalize(&g, &la(&[&[5], &[7]])), la(&[&[0], &[1]]));
    }

    #[test]
    fn idempotent() {
        let g = Graph::from_sizes(&[3, 2, 1]).unwrap();
        let l = la(&[&[4, 9], &[1, 2], &[2, 9], &[0, 7], &[7, 8], &[3, 4]]);
        let once = canonicalize(&g, &l);
        assert_eq!(canonicalize(&g, &once), once);
        assert!(is_canonical(&g, &once));
    }

    /// Brute-force orbit minimum on a 4-vertex instance: every automorphism of
    /// K_{2,2} times every permutation of the four colors.
    fn brute_min_k22(l: &ListAssignment) -> ListAssignment {
        let autos: Vec<[usize; 4]> = vec![
            [0, 1, 2, 3],
            [1, 0, 2, 3],
            [0, 1, 3, 2],
            [1, 0, 3, 2],
            [2, 3, 0, 1],
            [3, 2, 0, 1],
            [2, 3, 1, 0],
            [3, 2, 1, 0],
        ];
        let mut best: Option<ListAssignment> = None;
        let mut perm: Vec<Color> = vec![0, 1, 2, 3];
        let mut all_perms = Vec::new();
        heap_permutations(&mut perm, 4, &mut all_perms);
        for a in &autos {
            for map in &all_perms {
                let img = relabel_lists(&permute_lists(l, a), map);
                if best.as_ref().map_or(true, |b| img < *b) {
                    best = Some(img);
                }
            }
        }
        best.unwrap()
    }

    fn heap_permutations(p: &mut Vec<Color>, k: usize, out: &mut Vec<Vec<Color>>) {
        if k == 1 {
            out.push(p.clone());
            return;
        }
        for i in 0..k {
            heap_permutations(p, k - 1, out);
            if k % 2 == 0 {
                p.swap(i, k - 1);
            } else {
                p.swap(0, k - 1);
            }
        }
    }

    #[test]
    fn color_swap_orbit_on_k22() {
        let g = Graph::from_sizes(&[2, 2]).unwrap();
        let l = la(&[&[0, 1], &[2, 3], &[0, 2], &[1, 3]]);
        let swapped = la(&[&[3, 1], &[2, 0], &[3, 2], &[1, 0]]);
        let c = canonicalize(&g, &l);
        assert_eq!(c, canonicalize(&g, &swapped));
        assert_eq!(c, brute_min_k22(&l));
        assert_eq!(c, brute_min_k22(&swapped));
    }

    #[test]
    fn classes_restrict_the_group() {
        let g = Graph::from_sizes(&[2]).unwrap();
        let l = la(&[&[0, 1], &[0]]);
        // same class: vertices may swap, so the singleton list goes first
        assert_eq!(canonicalize(&g, &l), la(&[&[0], &[0, 1]]));
        // different classes pin the order
        assert_eq!(canonicalize_with_classes(&g, &l, &[2, 1]), la(&[&[0, 1], &[0]]));
    }
}
