//! Complete multipartite graphs, list assignments and colorings.
//!
//! Adjacency is never materialised: two vertices are adjacent exactly when
//! they sit in different parts. Vertices are numbered consecutively by part,
//! largest parts first.

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::colorset::{Color, ColorSet};
use crate::error::{Error, Result};

/// Part sizes of a complete multipartite graph, sorted non-increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct PartitionShape {
    sizes: Vec<usize>,
}

impl PartitionShape {
    pub fn new(mut sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidShape("no parts".into()));
        }
        if sizes.contains(&0) {
            return Err(Error::InvalidShape("part of size 0".into()));
        }
        // stable sort keeps input order among ties; the result is normalized anyway
        sizes.sort_by(|a, b| b.cmp(a));
        Ok(PartitionShape { sizes })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Number of parts.
    pub fn parts(&self) -> usize {
        self.sizes.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn count_of(&self, size: usize) -> usize {
        self.sizes.iter().filter(|&&s| s == size).count()
    }

    /// The shape with one part of the given size removed, if any remain.
    pub fn without_part(&self, size: usize) -> Option<PartitionShape> {
        let pos = self.sizes.iter().position(|&s| s == size)?;
        let mut sizes = self.sizes.clone();
        sizes.remove(pos);
        PartitionShape::new(sizes).ok()
    }

    /// Compact `K_{...}` notation with run-length groups, e.g. `K_{3*3,1*2}`.
    pub fn notation(&self) -> String {
        let mut groups = Vec::new();
        let mut i = 0;
        while i < self.sizes.len() {
            let s = self.sizes[i];
            let run = self.sizes[i..].iter().take_while(|&&x| x == s).count();
            if run == 1 {
                groups.push(s.to_string());
            } else {
                groups.push(format!("{s}*{run}"));
            }
            i += run;
        }
        format!("K_{{{}}}", groups.join(","))
    }
}

impl TryFrom<Vec<usize>> for PartitionShape {
    type Error = Error;

    fn try_from(sizes: Vec<usize>) -> Result<Self> {
        PartitionShape::new(sizes)
    }
}

impl From<PartitionShape> for Vec<usize> {
    fn from(shape: PartitionShape) -> Vec<usize> {
        shape.sizes
    }
}

/// Accepts `4,3,3,1` as well as the grouped form `3*3,2*2,1*2`.
impl FromStr for PartitionShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut sizes = Vec::new();
        for token in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let parse = |t: &str| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad shape token {token:?}")))
            };
            match token.split_once('*') {
                Some((size, count)) => {
                    let (size, count) = (parse(size)?, parse(count)?);
                    sizes.extend(std::iter::repeat(size).take(count));
                }
                None => sizes.push(parse(token)?),
            }
        }
        PartitionShape::new(sizes)
    }
}

impl fmt::Display for PartitionShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sizes.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A complete multipartite graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    shape: PartitionShape,
    part_of: Vec<usize>,
    part_start: Vec<usize>,
}

impl Graph {
    pub fn new(shape: PartitionShape) -> Self {
        let mut part_of = Vec::with_capacity(shape.vertex_count());
        let mut part_start = Vec::with_capacity(shape.parts() + 1);
        for (p, &size) in shape.sizes().iter().enumerate() {
            part_start.push(part_of.len());
            part_of.extend(std::iter::repeat(p).take(size));
        }
        part_start.push(part_of.len());
        Graph {
            shape,
            part_of,
            part_start,
        }
    }

    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        Ok(Graph::new(PartitionShape::new(sizes.to_vec())?))
    }

    pub fn shape(&self) -> &PartitionShape {
        &self.shape
    }

    pub fn vertex_count(&self) -> usize {
        self.part_of.len()
    }

    pub fn part_count(&self) -> usize {
        self.shape.parts()
    }

    pub fn part_of(&self, v: usize) -> usize {
        self.part_of[v]
    }

    pub fn part_of_all(&self) -> &[usize] {
        &self.part_of
    }

    pub fn part(&self, p: usize) -> std::ops::Range<usize> {
        self.part_start[p]..self.part_start[p + 1]
    }

    pub fn part_size(&self, p: usize) -> usize {
        self.part_start[p + 1] - self.part_start[p]
    }

    pub fn parts(&self) -> impl Iterator<Item = std::ops::Range<usize>> + '_ {
        (0..self.part_count()).map(|p| self.part(p))
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.part_of[u] != self.part_of[v]
    }
}

/// χ of a complete multipartite graph is its number of parts.
pub fn chromatic_number(g: &Graph) -> usize {
    g.part_count()
}

/// One color list per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ListAssignment {
    lists: Vec<ColorSet>,
}

impl ListAssignment {
    pub fn new(lists: Vec<ColorSet>) -> Self {
        ListAssignment { lists }
    }

    pub fn from_colors(lists: &[&[Color]]) -> Self {
        ListAssignment {
            lists: lists.iter().map(|l| l.iter().copied().collect()).collect(),
        }
    }

    pub fn uniform(n: usize, list: ColorSet) -> Self {
        ListAssignment {
            lists: vec![list; n],
        }
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn lists(&self) -> &[ColorSet] {
        &self.lists
    }

    pub fn into_lists(self) -> Vec<ColorSet> {
        self.lists
    }

    /// `L(V)`.
    pub fn union(&self) -> ColorSet {
        self.lists.iter().fold(ColorSet::EMPTY, |acc, &l| acc.union(l))
    }

    /// `L(X)` for a vertex subset.
    pub fn union_over<I: IntoIterator<Item = usize>>(&self, vertices: I) -> ColorSet {
        vertices
            .into_iter()
            .fold(ColorSet::EMPTY, |acc, v| acc.union(self.lists[v]))
    }

    pub fn min_size(&self) -> usize {
        self.lists.iter().map(|l| l.len()).min().unwrap_or(0)
    }

    /// True when every list has at least `k` colors.
    pub fn is_k_assignment(&self, k: usize) -> bool {
        self.lists.iter().all(|l| l.len() >= k)
    }

    /// `L \ A`: the given colors deleted from every list.
    pub fn without_colors(&self, colors: ColorSet) -> ListAssignment {
        ListAssignment {
            lists: self.lists.iter().map(|l| l.difference(colors)).collect(),
        }
    }

    pub fn set(&mut self, v: usize, list: ColorSet) {
        self.lists[v] = list;
    }

    pub fn check_against(&self, g: &Graph) -> Result<()> {
        if self.lists.len() != g.vertex_count() {
            return Err(Error::InvalidLists(format!(
                "{} lists for {} vertices",
                self.lists.len(),
                g.vertex_count()
            )));
        }
        Ok(())
    }
}

impl Index<usize> for ListAssignment {
    type Output = ColorSet;

    fn index(&self, v: usize) -> &ColorSet {
        &self.lists[v]
    }
}

/// A vertex-to-color map, possibly partial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coloring {
    assigned: Vec<Option<Color>>,
}

impl Coloring {
    pub fn empty(n: usize) -> Self {
        Coloring {
            assigned: vec![None; n],
        }
    }

    pub fn from_total(colors: &[Color]) -> Self {
        Coloring {
            assigned: colors.iter().map(|&c| Some(c)).collect(),
        }
    }

    pub fn from_partial(assigned: Vec<Option<Color>>) -> Self {
        Coloring { assigned }
    }

    pub fn len(&self) -> usize {
        self.assigned.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assigned.is_empty()
    }

    pub fn get(&self, v: usize) -> Option<Color> {
        self.assigned[v]
    }

    pub fn set(&mut self, v: usize, c: Color) {
        self.assigned[v] = Some(c);
    }

    pub fn clear(&mut self, v: usize) {
        self.assigned[v] = None;
    }

    pub fn is_total(&self) -> bool {
        self.assigned.iter().all(Option::is_some)
    }

    pub fn assigned(&self) -> &[Option<Color>] {
        &self.assigned
    }

    /// The colors in vertex order, if total.
    pub fn total(&self) -> Option<Vec<Color>> {
        self.assigned.iter().copied().collect()
    }

    pub fn colored_vertices(&self) -> impl Iterator<Item = (usize, Color)> + '_ {
        self.assigned
            .iter()
            .enumerate()
            .filter_map(|(v, c)| c.map(|c| (v, c)))
    }
}

/// Checks a total coloring. A partial coloring is an error, not `false`.
pub fn is_proper_l_coloring(g: &Graph, lists: &ListAssignment, coloring: &Coloring) -> Result<bool> {
    lists.check_against(g)?;
    if coloring.len() != g.vertex_count() {
        return Err(Error::InvalidLists(format!(
            "coloring has {} entries for {} vertices",
            coloring.len(),
            g.vertex_count()
        )));
    }
    if let Some(v) = (0..coloring.len()).find(|&v| coloring.get(v).is_none()) {
        return Err(Error::PartialColoring(v));
    }
    Ok(is_proper_partial(g, lists, coloring))
}

/// Properness of whatever is colored: every color class inside one part and
/// every assigned color drawn from the vertex's list.
pub fn is_proper_partial(g: &Graph, lists: &ListAssignment, coloring: &Coloring) -> bool {
    let mut owner: [Option<usize>; crate::colorset::MAX_COLORS] = [None; crate::colorset::MAX_COLORS];
    for (v, c) in coloring.colored_vertices() {
        if !lists[v].contains(c) {
            return false;
        }
        let p = g.part_of(v);
        match owner[c as usize] {
            Some(q) if q != p => return false,
            _ => owner[c as usize] = Some(p),
        }
    }
    true
}

/// Generators of the automorphism group of a complete multipartite graph:
/// adjacent transpositions inside each part and swaps of consecutive
/// equal-size parts. Each generator is an image array, `perm[v]` = image of `v`.
#[derive(Clone, Debug)]
pub struct AutomorphismGenerators {
    pub generators: Vec<Vec<usize>>,
}

impl AutomorphismGenerators {
    pub fn of(g: &Graph) -> Self {
        let n = g.vertex_count();
        let identity: Vec<usize> = (0..n).collect();
        let mut generators = Vec::new();
        for range in g.parts() {
            for v in range.start..range.end.saturating_sub(1) {
                let mut perm = identity.clone();
                perm.swap(v, v + 1);
                generators.push(perm);
            }
        }
        for p in 0..g.part_count().saturating_sub(1) {
            if g.part_size(p) == g.part_size(p + 1) {
                let mut perm = identity.clone();
                for (a, b) in g.part(p).zip(g.part(p + 1)) {
                    perm[a] = b;
                    perm[b] = a;
                }
                generators.push(perm);
            }
        }
        AutomorphismGenerators { generators }
    }

    pub fn is_automorphism(g: &Graph, perm: &[usize]) -> bool {
        let n = g.vertex_count();
        if perm.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &img in perm {
            if img >= n || std::mem::replace(&mut seen[img], true) {
                return false;
            }
        }
        (0..n).all(|u| (0..n).all(|v| g.adjacent(u, v) == g.adjacent(perm[u], perm[v])))
    }
}

/// A uniformly random automorphism: shuffle equal-size parts, then shuffle
/// vertices inside every part.
pub fn random_automorphism<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..g.vertex_count()).collect();
    let k = g.part_count();
    let mut p = 0;
    while p < k {
        let size = g.part_size(p);
        let run = (p..k).take_while(|&q| g.part_size(q) == size).count();
        let mut targets: Vec<usize> = (p..p + run).collect();
        targets.shuffle(rng);
        for (src, &dst) in (p..p + run).zip(&targets) {
            let mut inner: Vec<usize> = g.part(dst).collect();
            inner.shuffle(rng);
            for (v, w) in g.part(src).zip(inner) {
                perm[v] = w;
            }
        }
        p += run;
    }
    perm
}

/// `(σ·L)(σ(v)) = L(v)`.
pub fn permute_lists(lists: &ListAssignment, perm: &[usize]) -> ListAssignment {
    let mut out = vec![ColorSet::EMPTY; lists.len()];
    for (v, &img) in perm.iter().enumerate() {
        out[img] = lists[v];
    }
    ListAssignment::new(out)
}

pub fn permute_coloring(coloring: &Coloring, perm: &[usize]) -> Coloring {
    let mut out = vec![None; coloring.len()];
    for (v, &img) in perm.iter().enumerate() {
        out[img] = coloring.get(v);
    }
    Coloring::from_partial(out)
}

/// Applies a color relabeling `map[c]` to every list.
pub fn relabel_lists(lists: &ListAssignment, map: &[Color]) -> ListAssignment {
    ListAssignment::new(
        lists
            .lists()
            .iter()
            .map(|l| l.iter().map(|c| map[c as usize]).collect())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_graph_numbers_by_part() {
        let g = Graph::from_sizes(&[2, 3, 3]).unwrap();
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.shape().sizes(), &[3, 3, 2]);
        assert_eq!(g.part(0), 0..3);
        assert_eq!(g.part(1), 3..6);
        assert_eq!(g.part(2), 6..8);

        let single = Graph::from_sizes(&[1]).unwrap();
        assert_eq!(single.vertex_count(), 1);
        assert_eq!(chromatic_number(&single), 1);

        let g = Graph::from_sizes(&[4, 3, 3, 1, 1, 1]).unwrap();
        assert_eq!((g.vertex_count(), g.part_count()), (13, 6));
    }

    #[test]
    fn invalid_shapes_rejected() {
        assert!(matches!(PartitionShape::new(vec![]), Err(Error::InvalidShape(_))));
        assert!(matches!(PartitionShape::new(vec![2, 0]), Err(Error::InvalidShape(_))));
        assert!("2,x".parse::<PartitionShape>().is_err());
    }

    #[test]
    fn shape_parsing_and_notation() {
        let a: PartitionShape = "3*3,2*2,1*2".parse().unwrap();
        let b: PartitionShape = "1,2,3,3,2,1,3".parse().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "3,3,3,2,2,1,1");
        assert_eq!(a.notation(), "K_{3*3,2*2,1*2}");
        assert_eq!("4,3,3,1,1,1".parse::<PartitionShape>().unwrap().notation(), "K_{4,3*2,1*3}");
    }

    #[test]
    fn chromatic_number_is_part_count() {
        for (sizes, chi) in [(&[2, 2, 2][..], 3), (&[1], 1), (&[3, 3, 3, 1, 1], 5)] {
            assert_eq!(chromatic_number(&Graph::from_sizes(sizes).unwrap()), chi);
        }
    }

    #[test]
    fn proper_coloring_examples() {
        let g = Graph::from_sizes(&[2, 2]).unwrap();
        let all01 = ListAssignment::uniform(4, ColorSet::prefix(2));
        assert!(is_proper_l_coloring(&g, &all01, &Coloring::from_total(&[0, 0, 1, 1])).unwrap());
        assert!(!is_proper_l_coloring(&g, &all01, &Coloring::from_total(&[0, 1, 0, 1])).unwrap());
        let tight = ListAssignment::from_colors(&[&[0], &[0], &[1], &[1]]);
        assert!(is_proper_l_coloring(&g, &tight, &Coloring::from_total(&[0, 0, 1, 1])).unwrap());
        // color not in list
        assert!(!is_proper_l_coloring(&g, &tight, &Coloring::from_total(&[1, 1, 0, 0])).unwrap());
    }

    #[test]
    fn partial_coloring_is_an_error() {
        let g = Graph::from_sizes(&[2, 2]).unwrap();
        let lists = ListAssignment::uniform(4, ColorSet::prefix(2));
        let mut c = Coloring::empty(4);
        c.set(0, 0);
        assert_eq!(is_proper_l_coloring(&g, &lists, &c), Err(Error::PartialColoring(1)));
    }

    #[test]
    fn generators_are_automorphisms() {
        let g = Graph::from_sizes(&[3, 3, 2, 1, 1]).unwrap();
        let gens = AutomorphismGenerators::of(&g);
        // 2+2+1 in-part transpositions, two part swaps
        assert_eq!(gens.generators.len(), 7);
        for perm in &gens.generators {
            assert!(AutomorphismGenerators::is_automorphism(&g, perm));
        }
        let mut rng = rand::thread_rng();
        for _ in 0..20 {
            assert!(AutomorphismGenerators::is_automorphism(&g, &random_automorphism(&g, &mut rng)));
        }
    }
}
