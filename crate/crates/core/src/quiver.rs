//! Simply-laced quivers with an opposite-arrow involution, node
//! partitions and dimension vectors, plus the cycle machinery: anchored
//! cycles in admissible-permutation canonical form, isomonodromy-cycle
//! enumeration, and potentials (formal combinations of cycles).

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::scalars::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArrowId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub source: NodeId,
    pub target: NodeId,
    pub opposite: ArrowId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid dimension for node {0}: dimensions must be >= 1")]
    InvalidDims(String),
    #[error("invalid arrow {0}")]
    InvalidArrow(String),
    #[error("unknown node label {0}")]
    UnknownNode(String),
    #[error("not a cycle: {0}")]
    NotACycle(String),
}

/// A simply-laced quiver: at most one arrow in each direction between two
/// distinct nodes, no loops, arrows paired by the opposite involution, the
/// node set partitioned into parts, and a dimension attached to each node.
///
/// Arrows are stored sorted lexicographically by `(source, target)`; this
/// order is the one used everywhere for canonical forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverData {
    labels: Vec<String>,
    parts: Vec<Vec<NodeId>>,
    part_of: Vec<PartId>,
    dims: Vec<usize>,
    arrows: Vec<Arrow>,
}

impl QuiverData {
    /// Complete k-partite quiver: exactly one opposite arrow pair between
    /// every pair of nodes in distinct parts, none within a part.
    pub fn k_partite(
        parts: &[Vec<String>],
        dims: &BTreeMap<String, usize>,
    ) -> Result<Self, QuiverError> {
        let skeleton = Self::skeleton(parts, dims)?;
        let mut edges = Vec::new();
        for i in 0..skeleton.labels.len() {
            for j in (i + 1)..skeleton.labels.len() {
                if skeleton.part_of[i] != skeleton.part_of[j] {
                    edges.push((NodeId(i), NodeId(j)));
                }
            }
        }
        skeleton.with_edge_list(edges)
    }

    /// General simply-laced quiver: one opposite arrow pair per listed
    /// edge. Edges must join nodes in distinct parts.
    pub fn with_edges(
        parts: &[Vec<String>],
        dims: &BTreeMap<String, usize>,
        edges: &[(String, String)],
    ) -> Result<Self, QuiverError> {
        let skeleton = Self::skeleton(parts, dims)?;
        let mut list = Vec::new();
        for (a, b) in edges {
            let a = skeleton
                .node_by_label(a)
                .ok_or_else(|| QuiverError::UnknownNode(a.clone()))?;
            let b = skeleton
                .node_by_label(b)
                .ok_or_else(|| QuiverError::UnknownNode(b.clone()))?;
            list.push((a, b));
        }
        skeleton.with_edge_list(list)
    }

    fn skeleton(parts: &[Vec<String>], dims: &BTreeMap<String, usize>) -> Result<Self, QuiverError> {
        if parts.is_empty() {
            return Err(QuiverError::InvalidPartition("no parts given".into()));
        }
        let mut labels = Vec::new();
        let mut part_vec = Vec::new();
        let mut part_of = Vec::new();
        for (pi, part) in parts.iter().enumerate() {
            if part.is_empty() {
                return Err(QuiverError::InvalidPartition(format!("part {pi} is empty")));
            }
            let mut ids = Vec::new();
            for label in part {
                if labels.contains(label) {
                    return Err(QuiverError::InvalidPartition(format!(
                        "duplicate node label {label}"
                    )));
                }
                ids.push(NodeId(labels.len()));
                labels.push(label.clone());
                part_of.push(PartId(pi));
            }
            part_vec.push(ids);
        }
        let mut dim_vec = Vec::with_capacity(labels.len());
        for label in &labels {
            match dims.get(label) {
                Some(&d) if d >= 1 => dim_vec.push(d),
                _ => return Err(QuiverError::InvalidDims(label.clone())),
            }
        }
        Ok(QuiverData {
            labels,
            parts: part_vec,
            part_of,
            dims: dim_vec,
            arrows: Vec::new(),
        })
    }

    fn with_edge_list(mut self, edges: Vec<(NodeId, NodeId)>) -> Result<Self, QuiverError> {
        let mut pairs: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
        for &(a, b) in &edges {
            if a == b {
                return Err(QuiverError::InvalidArrow(format!(
                    "loop at node {}",
                    self.labels[a.0]
                )));
            }
            if self.part_of[a.0] == self.part_of[b.0] {
                return Err(QuiverError::InvalidArrow(format!(
                    "{} and {} lie in the same part",
                    self.labels[a.0], self.labels[b.0]
                )));
            }
            let key = (a.min(b), a.max(b));
            if !pairs.insert(key) {
                return Err(QuiverError::InvalidArrow(format!(
                    "duplicate edge between {} and {}",
                    self.labels[a.0], self.labels[b.0]
                )));
            }
        }
        // both directions, sorted lexicographically by (source, target)
        let mut directed: Vec<(NodeId, NodeId)> =
            pairs.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
        directed.sort();
        let mut arrows: Vec<Arrow> = directed
            .iter()
            .map(|&(s, t)| Arrow {
                source: s,
                target: t,
                opposite: ArrowId(usize::MAX),
            })
            .collect();
        for i in 0..arrows.len() {
            let (s, t) = (arrows[i].source, arrows[i].target);
            let j = directed
                .binary_search(&(t, s))
                .expect("opposite direction present");
            arrows[i].opposite = ArrowId(j);
        }
        self.arrows = arrows;
        Ok(self)
    }

    pub fn num_nodes(&self) -> usize {
        self.labels.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.labels.len()).map(NodeId)
    }

    pub fn label(&self, n: NodeId) -> &str {
        &self.labels[n.0]
    }

    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        self.labels.iter().position(|l| l == label).map(NodeId)
    }

    pub fn dim(&self, n: NodeId) -> usize {
        self.dims[n.0]
    }

    pub fn part_of(&self, n: NodeId) -> PartId {
        self.part_of[n.0]
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    pub fn part_nodes(&self, p: PartId) -> &[NodeId] {
        &self.parts[p.0]
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrows(&self) -> impl Iterator<Item = ArrowId> {
        (0..self.arrows.len()).map(ArrowId)
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a.0]
    }

    pub fn source(&self, a: ArrowId) -> NodeId {
        self.arrows[a.0].source
    }

    pub fn target(&self, a: ArrowId) -> NodeId {
        self.arrows[a.0].target
    }

    pub fn opposite(&self, a: ArrowId) -> ArrowId {
        self.arrows[a.0].opposite
    }

    pub fn arrow_between(&self, s: NodeId, t: NodeId) -> Option<ArrowId> {
        self.arrows
            .iter()
            .position(|a| a.source == s && a.target == t)
            .map(ArrowId)
    }

    pub fn arrows_into(&self, n: NodeId) -> impl Iterator<Item = ArrowId> + '_ {
        self.arrows
            .iter()
            .enumerate()
            .filter(move |(_, a)| a.target == n)
            .map(|(i, _)| ArrowId(i))
    }

    pub fn arrow_label(&self, a: ArrowId) -> String {
        format!(
            "{}->{}",
            self.labels[self.arrows[a.0].source.0],
            self.labels[self.arrows[a.0].target.0]
        )
    }

    pub fn arrow_by_label(&self, label: &str) -> Option<ArrowId> {
        let (s, t) = label.split_once("->")?;
        let s = self.node_by_label(s.trim())?;
        let t = self.node_by_label(t.trim())?;
        self.arrow_between(s, t)
    }

    /// Checks that consecutive arrows compose and the sequence closes up.
    fn check_cycle(&self, arrows: &[ArrowId]) -> Result<(), QuiverError> {
        if arrows.is_empty() {
            return Err(QuiverError::NotACycle("empty arrow sequence".into()));
        }
        for w in 0..arrows.len() {
            let here = self.arrow(arrows[w]);
            let next = self.arrow(arrows[(w + 1) % arrows.len()]);
            if next.source != here.target {
                return Err(QuiverError::NotACycle(format!(
                    "{} does not compose with {}",
                    self.arrow_label(arrows[w]),
                    self.arrow_label(arrows[(w + 1) % arrows.len()])
                )));
            }
        }
        Ok(())
    }
}

/// An oriented cycle up to cyclic rotation, stored as the
/// lexicographically least rotation of its arrow sequence (application
/// order: the first arrow is traversed first).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cycle {
    arrows: Vec<ArrowId>,
}

impl Cycle {
    pub fn new(q: &QuiverData, arrows: Vec<ArrowId>) -> Result<Self, QuiverError> {
        q.check_cycle(&arrows)?;
        Ok(Self::new_unchecked(arrows))
    }

    fn new_unchecked(arrows: Vec<ArrowId>) -> Self {
        let min = (0..arrows.len())
            .map(|r| rotate(&arrows, r))
            .min()
            .expect("nonempty");
        Cycle { arrows: min }
    }

    pub fn arrows(&self) -> &[ArrowId] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

/// An oriented cycle with a chosen starting arrow, stored in
/// admissible-permutation canonical form.
///
/// The arrow sequence is in application order: `arrows[0]` is the anchor,
/// traversed first. An admissible permutation splits the sequence in two
/// blocks such that no arrow of one block has its opposite in the other,
/// and swaps the blocks; the canonical form is the lexicographically least
/// sequence reachable by such moves.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AnchoredCycle {
    arrows: Vec<ArrowId>,
}

impl AnchoredCycle {
    pub fn new(q: &QuiverData, arrows: Vec<ArrowId>) -> Result<Self, QuiverError> {
        q.check_cycle(&arrows)?;
        Ok(Self::new_unchecked(q, arrows))
    }

    fn new_unchecked(q: &QuiverData, arrows: Vec<ArrowId>) -> Self {
        AnchoredCycle {
            arrows: canonical_anchored(q, &arrows),
        }
    }

    pub fn arrows(&self) -> &[ArrowId] {
        &self.arrows
    }

    pub fn anchor(&self) -> ArrowId {
        self.arrows[0]
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Forget the anchor.
    pub fn unanchored(&self) -> Cycle {
        Cycle::new_unchecked(self.arrows.clone())
    }
}

fn rotate(arrows: &[ArrowId], r: usize) -> Vec<ArrowId> {
    let n = arrows.len();
    (0..n).map(|i| arrows[(i + r) % n]).collect()
}

/// One-step admissible moves from the given anchored sequence: rotations
/// at a split point such that no arrow at or after the split has its
/// opposite before it.
fn admissible_rotations(q: &QuiverData, arrows: &[ArrowId]) -> Vec<Vec<ArrowId>> {
    let n = arrows.len();
    let mut out = Vec::new();
    for split in 0..n {
        let tail: BTreeSet<ArrowId> = arrows[..split].iter().copied().collect();
        let head = &arrows[split..];
        if head.iter().all(|&a| !tail.contains(&q.opposite(a))) {
            out.push(rotate(arrows, split));
        }
    }
    out
}

/// Lexicographically least sequence reachable by admissible permutations
/// (closure under the moves, not a single pass, so the result is constant
/// on equivalence classes).
fn canonical_anchored(q: &QuiverData, arrows: &[ArrowId]) -> Vec<ArrowId> {
    let mut seen: BTreeSet<Vec<ArrowId>> = BTreeSet::new();
    let mut queue: VecDeque<Vec<ArrowId>> = VecDeque::new();
    seen.insert(arrows.to_vec());
    queue.push_back(arrows.to_vec());
    while let Some(cur) = queue.pop_front() {
        for next in admissible_rotations(q, &cur) {
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen.into_iter().next().expect("contains the input")
}

/// All isomonodromy cycles of a simply-laced quiver: 2-cycles, oriented
/// triangles, oriented simple 4-cycles, and degenerate 4-cycles (two
/// opposite-arrow loops sharing a centre node), each up to cyclic
/// rotation, deduplicated.
pub fn enumerate_isomonodromy_cycles(q: &QuiverData) -> Vec<Cycle> {
    let mut out: BTreeSet<Cycle> = BTreeSet::new();

    // 2-cycles: one per unordered opposite pair
    for a in q.arrows() {
        out.insert(Cycle::new_unchecked(vec![a, q.opposite(a)]));
    }

    // oriented triangles: distinct nodes, consecutive arrows
    let nodes: Vec<NodeId> = q.nodes().collect();
    for &x in &nodes {
        for &y in &nodes {
            for &z in &nodes {
                if x == y || y == z || x == z {
                    continue;
                }
                if let (Some(a), Some(b), Some(c)) = (
                    q.arrow_between(x, y),
                    q.arrow_between(y, z),
                    q.arrow_between(z, x),
                ) {
                    out.insert(Cycle::new_unchecked(vec![a, b, c]));
                }
            }
        }
    }

    // oriented simple 4-cycles: four distinct nodes
    for &x in &nodes {
        for &y in &nodes {
            for &z in &nodes {
                for &w in &nodes {
                    let mut distinct = vec![x, y, z, w];
                    distinct.sort();
                    distinct.dedup();
                    if distinct.len() != 4 {
                        continue;
                    }
                    if let (Some(a), Some(b), Some(c), Some(d)) = (
                        q.arrow_between(x, y),
                        q.arrow_between(y, z),
                        q.arrow_between(z, w),
                        q.arrow_between(w, x),
                    ) {
                        out.insert(Cycle::new_unchecked(vec![a, b, c, d]));
                    }
                }
            }
        }
    }

    // degenerate 4-cycles: centre c with two distinct neighbours
    for &c in &nodes {
        for &i in &nodes {
            for &j in &nodes {
                if i >= j || i == c || j == c {
                    continue;
                }
                if let (Some(ci), Some(ic), Some(cj), Some(jc)) = (
                    q.arrow_between(c, i),
                    q.arrow_between(i, c),
                    q.arrow_between(c, j),
                    q.arrow_between(j, c),
                ) {
                    out.insert(Cycle::new_unchecked(vec![ci, ic, cj, jc]));
                }
            }
        }
    }

    out.into_iter().collect()
}

/// A formal linear combination of cycles with [`Scalar`] coefficients; no
/// zero coefficients are stored. The key type is [`Cycle`] for classical
/// potentials and [`AnchoredCycle`] for quantum ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Potential<C: Ord> {
    terms: BTreeMap<C, Scalar>,
}

impl<C: Ord + Clone> Default for Potential<C> {
    fn default() -> Self {
        Potential {
            terms: BTreeMap::new(),
        }
    }
}

impl<C: Ord + Clone> Potential<C> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, cycle: C, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(cycle) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = &*e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&C, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}
