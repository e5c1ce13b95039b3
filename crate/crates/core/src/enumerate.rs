//! Isomorph-free enumeration of list assignments.
//!
//! Lists are chosen vertex by vertex in canonical vertex order; candidate
//! lists at each vertex are visited in colex order. A prefix is rejected as
//! soon as some group element that maps the prefix positions onto themselves
//! sends it to a smaller prefix: every completion of such a prefix is
//! non-canonical too. Two cheap necessary conditions are applied before the
//! orbit test: the colors used so far always form an initial segment
//! `0..m`, and lists inside one part (same size class) never decrease.

use std::fmt;
use std::str::FromStr;

use crate::canon::{is_min_image, Frame};
use crate::colorset::{next_same_size, ColorSet};
use crate::error::{Error, Result};
use crate::graph::{Graph, ListAssignment};
use crate::solver::solve_parts;

/// Partition of a stream into `count` disjoint pieces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShardSpec {
    pub index: usize,
    pub count: usize,
}

impl ShardSpec {
    pub fn new(index: usize, count: usize) -> Result<Self> {
        if count == 0 || index >= count {
            return Err(Error::Precondition(format!("bad shard {index}/{count}")));
        }
        Ok(ShardSpec { index, count })
    }

    pub fn whole() -> Self {
        ShardSpec { index: 0, count: 1 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StreamStats {
    /// Candidate lists placed on the stack.
    pub nodes: u64,
    /// Prefixes rejected by the orbit test (each kills a whole subtree).
    pub orbit_rejections: u64,
    /// Subtrees skipped because every completion is colorable.
    pub colorable_prunes: u64,
    /// Prefixes handed to other shards.
    pub shard_skips: u64,
    pub emitted: u64,
}

impl std::ops::AddAssign for StreamStats {
    fn add_assign(&mut self, o: StreamStats) {
        self.nodes += o.nodes;
        self.orbit_rejections += o.orbit_rejections;
        self.colorable_prunes += o.colorable_prunes;
        self.shard_skips += o.shard_skips;
        self.emitted += o.emitted;
    }
}

/// Resume point: the last split-depth prefix whose subtree was finished.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub shard: ShardSpec,
    pub prefix: Vec<ColorSet>,
}

impl fmt::Display for Checkpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let masks: Vec<String> = self.prefix.iter().map(|m| m.bits().to_string()).collect();
        write!(f, "shard {}/{} prefix {}", self.shard.index, self.shard.count, masks.join(","))
    }
}

impl FromStr for Checkpoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad checkpoint line {s:?}"));
        let mut words = s.split_whitespace();
        if words.next() != Some("shard") {
            return Err(bad());
        }
        let (i, m) = words.next().and_then(|w| w.split_once('/')).ok_or_else(bad)?;
        let shard = ShardSpec::new(i.parse().map_err(|_| bad())?, m.parse().map_err(|_| bad())?)?;
        if words.next() != Some("prefix") {
            return Err(bad());
        }
        let prefix = match words.next() {
            None => Vec::new(),
            Some(list) => list
                .split(',')
                .map(|t| t.parse::<u64>().map(ColorSet::from_bits).map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?,
        };
        Ok(Checkpoint { shard, prefix })
    }
}

#[derive(Clone, Debug)]
pub struct StreamConfig {
    /// Orbit pruning; when off every raw assignment is produced.
    pub symmetry: bool,
    pub shard: ShardSpec,
    /// Skip split-depth prefixes up to and including this one.
    pub resume_after: Option<Vec<ColorSet>>,
    /// Skip subtrees in which every completion is provably colorable.
    pub prune_colorable: bool,
}

impl Default for StreamConfig {
    fn default() -> Self {
        StreamConfig {
            symmetry: true,
            shard: ShardSpec::whole(),
            resume_after: None,
            prune_colorable: false,
        }
    }
}

/// Depth at which the stream is split between shards.
pub fn split_depth(n: usize) -> usize {
    n.min(3)
}

/// Lazily produces list assignments with a fixed size profile over the
/// colors `0..universe`.
pub struct AssignmentStream {
    graph: Graph,
    sizes: Vec<usize>,
    universe: usize,
    config: StreamConfig,
    frames: Vec<Frame>,
    split: usize,
    stack: Vec<u64>,
    unions: Vec<u64>,
    started: bool,
    done: bool,
    stats: StreamStats,
    last_completed: Option<Vec<u64>>,
}

impl AssignmentStream {
    pub fn new(g: &Graph, sizes: Vec<usize>, universe: usize, config: StreamConfig) -> Result<Self> {
        let n = g.vertex_count();
        if sizes.len() != n {
            return Err(Error::Precondition(format!("{} sizes for {n} vertices", sizes.len())));
        }
        if universe > 63 || n > 64 {
            return Err(Error::Precondition("universe or vertex count too large".into()));
        }
        let class: Vec<u32> = sizes.iter().map(|&s| s as u32).collect();
        let frames = if config.symmetry {
            (1..=n).map(|len| Frame::for_prefix(g, &class, len)).collect()
        } else {
            Vec::new()
        };
        Ok(AssignmentStream {
            graph: g.clone(),
            sizes,
            universe,
            config,
            frames,
            split: split_depth(n),
            stack: Vec::with_capacity(n),
            unions: Vec::with_capacity(n),
            started: false,
            done: false,
            stats: StreamStats::default(),
            last_completed: None,
        })
    }

    /// All k-lists over `universe` colors.
    pub fn uniform(g: &Graph, k: usize, universe: usize, config: StreamConfig) -> Result<Self> {
        AssignmentStream::new(g, vec![k; g.vertex_count()], universe, config)
    }

    pub fn stats(&self) -> StreamStats {
        self.stats
    }

    pub fn checkpoint(&self) -> Option<Checkpoint> {
        self.last_completed.as_ref().map(|p| Checkpoint {
            shard: self.config.shard,
            prefix: p.iter().copied().map(ColorSet::from_bits).collect(),
        })
    }

    /// The current (partial) prefix, for progress reporting.
    pub fn current_prefix(&self) -> Vec<ColorSet> {
        self.stack.iter().copied().map(ColorSet::from_bits).collect()
    }

    fn n(&self) -> usize {
        self.sizes.len()
    }

    fn same_run(&self, d: usize) -> bool {
        d > 0 && self.graph.part_of(d) == self.graph.part_of(d - 1) && self.sizes[d] == self.sizes[d - 1]
    }

    /// Next admissible list at depth `d` strictly after `after` (or the first).
    fn next_candidate(&self, d: usize, after: Option<u64>) -> Option<u64> {
        let s = self.sizes[d];
        let (limit, used) = if self.config.symmetry {
            let used = if d == 0 { 0 } else { self.unions[d - 1] };
            let m = used.count_ones() as usize;
            ((m + s).min(self.universe), used)
        } else {
            (self.universe, 0)
        };
        if s > limit {
            return None;
        }
        let bound = 1u64 << limit;
        let first = low(s);
        let mut mask = match after {
            None => {
                if self.config.symmetry && self.same_run(d) {
                    first.max(self.stack[d - 1])
                } else {
                    first
                }
            }
            Some(prev) => {
                if s == 0 {
                    return None;
                }
                next_same_size(prev)?
            }
        };
        loop {
            if mask >= bound {
                return None;
            }
            if !self.config.symmetry || fresh_colors_contiguous(mask, used) {
                return Some(mask);
            }
            if s == 0 {
                return None;
            }
            mask = next_same_size(mask)?;
        }
    }

    /// Checks run on the freshly pushed prefix; `false` skips its subtree.
    fn accept_prefix(&mut self) -> bool {
        let len = self.stack.len();
        if self.config.symmetry && !is_min_image(&self.stack, &self.frames[len - 1]) {
            self.stats.orbit_rejections += 1;
            return false;
        }
        if len == self.split {
            if self.config.shard.count > 1
                && prefix_hash(&self.stack) % self.config.shard.count as u64 != self.config.shard.index as u64
            {
                self.stats.shard_skips += 1;
                return false;
            }
            if let Some(resume) = &self.config.resume_after {
                let resume: Vec<u64> = resume.iter().map(|c| c.bits()).collect();
                if self.stack <= resume {
                    return false;
                }
            }
        }
        if self.config.prune_colorable && len < self.n() && self.completions_all_colorable() {
            self.stats.colorable_prunes += 1;
            return false;
        }
        true
    }

    /// Sound test: color the prefix, then every remaining vertex has fewer
    /// forbidden colors than list entries no matter what lists it receives.
    fn completions_all_colorable(&self) -> bool {
        let len = self.stack.len();
        let n = self.n();
        let part_of = self.graph.part_of_all();
        let others_outside = |v: usize| (len..n).filter(|&u| u != v && part_of[u] != part_of[v]).count();
        if (len..n).any(|v| others_outside(v) >= self.sizes[v]) {
            return false;
        }
        let lists: Vec<ColorSet> = self.stack.iter().copied().map(ColorSet::from_bits).collect();
        let Some(colors) = solve_parts(&part_of[..len], &lists) else {
            return false;
        };
        (len..n).all(|v| {
            let foreign: ColorSet = (0..len).filter(|&u| part_of[u] != part_of[v]).map(|u| colors[u]).collect();
            foreign.len() + others_outside(v) < self.sizes[v]
        })
    }

    fn push(&mut self, mask: u64) {
        let union = self.unions.last().copied().unwrap_or(0) | mask;
        self.stack.push(mask);
        self.unions.push(union);
        self.stats.nodes += 1;
    }

    fn pop(&mut self) -> u64 {
        if self.stack.len() == self.split {
            self.last_completed = Some(self.stack.clone());
        }
        self.unions.pop();
        self.stack.pop().expect("pop on non-empty stack")
    }

    fn run(&mut self, mut after: Option<u64>) -> bool {
        let n = self.n();
        loop {
            let d = self.stack.len();
            if d == n {
                return true;
            }
            match self.next_candidate(d, after.take()) {
                Some(mask) => {
                    self.push(mask);
                    if !self.accept_prefix() {
                        after = Some(self.pop());
                    }
                }
                None => {
                    if d == 0 {
                        return false;
                    }
                    after = Some(self.pop());
                }
            }
        }
    }
}

impl Iterator for AssignmentStream {
    type Item = ListAssignment;

    fn next(&mut self) -> Option<ListAssignment> {
        if self.done {
            return None;
        }
        let found = if !self.started {
            self.started = true;
            self.n() > 0 && self.run(None)
        } else {
            let last = self.pop();
            self.run(Some(last))
        };
        if !found {
            self.done = true;
            return None;
        }
        self.stats.emitted += 1;
        Some(ListAssignment::new(self.stack.iter().copied().map(ColorSet::from_bits).collect()))
    }
}

fn low(count: usize) -> u64 {
    if count >= 64 {
        u64::MAX
    } else {
        (1u64 << count) - 1
    }
}

/// Colors outside `0..m` must be exactly `m..m+t` for some `t`.
fn fresh_colors_contiguous(mask: u64, used: u64) -> bool {
    let m = used.count_ones();
    let fresh = mask & !used;
    if fresh == 0 {
        return true;
    }
    let shifted = fresh >> m;
    shifted & (shifted + 1) == 0 && shifted << m == fresh
}

/// FNV-1a over the prefix masks.
pub fn prefix_hash(prefix: &[u64]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &m in prefix {
        for byte in m.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonicalize;
    use std::collections::BTreeSet;

    fn collect(g: &Graph, k: usize, universe: usize, config: StreamConfig) -> Vec<ListAssignment> {
        AssignmentStream::uniform(g, k, universe, config).unwrap().collect()
    }

    #[test]
    fn canonical_stream_is_one_per_orbit() {
        for sizes in [&[2, 2][..], &[3, 1], &[2, 1, 1], &[1, 1, 1]] {
            let g = Graph::from_sizes(sizes).unwrap();
            let n = g.vertex_count();
            for k in 1..n {
                let raw = collect(&g, k, n - 1, StreamConfig { symmetry: false, ..Default::default() });
                let orbits: BTreeSet<ListAssignment> = raw.iter().map(|l| canonicalize(&g, l)).collect();
                let canon = collect(&g, k, n - 1, StreamConfig::default());
                let canon_set: BTreeSet<ListAssignment> = canon.iter().cloned().collect();
                assert_eq!(canon.len(), canon_set.len(), "{sizes:?} k={k}: duplicates");
                assert_eq!(canon_set, orbits, "{sizes:?} k={k}");
            }
        }
    }

    #[test]
    fn raw_stream_counts() {
        let g = Graph::from_sizes(&[2, 2]).unwrap();
        // C(3,2)^4
        assert_eq!(collect(&g, 2, 3, StreamConfig { symmetry: false, ..Default::default() }).len(), 81);
    }

    #[test]
    fn fresh_color_rule() {
        assert!(fresh_colors_contiguous(0b0111, 0b0011));
        assert!(fresh_colors_contiguous(0b1101, 0b0011));
        assert!(!fresh_colors_contiguous(0b1001, 0b0011));
        assert!(fresh_colors_contiguous(0b0001, 0));
        assert!(!fresh_colors_contiguous(0b0010, 0));
    }

    #[test]
    fn checkpoint_text_round_trip() {
        let cp = Checkpoint {
            shard: ShardSpec::new(2, 4).unwrap(),
            prefix: vec![ColorSet::from_bits(3), ColorSet::from_bits(5)],
        };
        let text = cp.to_string();
        assert_eq!(text, "shard 2/4 prefix 3,5");
        assert_eq!(text.parse::<Checkpoint>().unwrap(), cp);
        assert!("shard 4/4 prefix 1".parse::<Checkpoint>().is_err());
        assert!("garbage".parse::<Checkpoint>().is_err());
    }

    #[test]
    fn resume_skips_completed_prefixes() {
        let g = Graph::from_sizes(&[2, 2, 1]).unwrap();
        let full = collect(&g, 2, 4, StreamConfig::default());
        let mut stream = AssignmentStream::uniform(&g, 2, 4, StreamConfig::default()).unwrap();
        let mut seen = Vec::new();
        // consume until a checkpoint exists, then stop mid-way
        while stream.checkpoint().is_none() {
            seen.push(stream.next().unwrap());
        }
        let cp = stream.checkpoint().unwrap();
        let done_prefix: Vec<ColorSet> = cp.prefix.clone();
        let resumed: Vec<ListAssignment> = AssignmentStream::uniform(
            &g,
            2,
            4,
            StreamConfig { resume_after: Some(done_prefix.clone()), ..Default::default() },
        )
        .unwrap()
        .collect();
        let before: Vec<ListAssignment> =
            full.iter().filter(|l| l.lists()[..3] <= done_prefix[..]).cloned().collect();
        assert_eq!(before.len() + resumed.len(), full.len());
        assert!(resumed.iter().all(|l| l.lists()[..3] > done_prefix[..]));
    }
}
