//! Iteration assignments, information graphs and the constructions built on
//! them.
//!
//! Agents are numbered `1..=n`. An undirected edge `{j, i}` with `j < i` means
//! agent `i` sees agent `j`'s decision; the in-neighbourhood of `i` is
//! `N_i = { j < i : {j, i} ∈ E }`.

use std::fmt;

use serde::Serialize;

use crate::{Error, Result};

pub fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// `n ≡ 1 (mod q)`, evaluated as `n mod q == 1 mod q` so that `q = 1` always
/// takes this branch.
pub fn is_one_mod(n: usize, q: usize) -> bool {
    n % q == 1 % q
}

fn check_nq(n: usize, q: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::input("n", "must be a positive integer"));
    }
    if q == 0 || q > n {
        return Err(Error::input(
            "q",
            format!("must satisfy 1 <= q <= n (n = {n}, q = {q})"),
        ));
    }
    Ok(())
}

/// Map from agents `1..=n` to iterations `1..=q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct IterationAssignment {
    q: usize,
    levels: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "kebab-case")]
pub enum AssignmentViolation {
    /// Agent `agent` is placed in an iteration outside `1..=q`.
    OutOfRange { agent: usize, iteration: usize },
    /// `first < second` but `P(first) > P(second)`.
    OrderPreservation { first: usize, second: usize },
}

impl fmt::Display for AssignmentViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AssignmentViolation::OutOfRange { agent, iteration } => {
                write!(f, "iteration range: agent {agent} is assigned iteration {iteration}")
            }
            AssignmentViolation::OrderPreservation { first, second } => {
                write!(f, "order preservation: agent {first} runs after agent {second}")
            }
        }
    }
}

impl IterationAssignment {
    /// Stores the assignment as given; use [`validate_assignment`] to check it.
    pub fn new(q: usize, levels: Vec<usize>) -> Self {
        IterationAssignment { q, levels }
    }

    pub fn n(&self) -> usize {
        self.levels.len()
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    /// Iteration of agent `agent` (1-based).
    pub fn level(&self, agent: usize) -> usize {
        self.levels[agent - 1]
    }

    pub fn max_level(&self) -> usize {
        self.levels.iter().copied().max().unwrap_or(0)
    }

    /// Relabels the used iterations as `1, 2, ..` keeping their order.
    pub fn normalized(&self) -> IterationAssignment {
        let mut used: Vec<usize> = self.levels.clone();
        used.sort_unstable();
        used.dedup();
        let levels = self.levels.iter().map(|l| used.binary_search(l).unwrap() + 1).collect();
        IterationAssignment { q: self.q, levels }
    }

    /// Agents grouped by iteration, for iterations `1..=q`.
    pub fn rounds(&self) -> Vec<Vec<usize>> {
        let mut rounds = vec![Vec::new(); self.q.max(self.max_level())];
        for (i, &l) in self.levels.iter().enumerate() {
            rounds[l - 1].push(i + 1);
        }
        rounds
    }
}

pub fn validate_assignment(p: &IterationAssignment) -> std::result::Result<(), AssignmentViolation> {
    for (i, &l) in p.levels.iter().enumerate() {
        if l == 0 || l > p.q {
            return Err(AssignmentViolation::OutOfRange {
                agent: i + 1,
                iteration: l,
            });
        }
    }
    for (i, pair) in p.levels.windows(2).enumerate() {
        if pair[0] > pair[1] {
            return Err(AssignmentViolation::OrderPreservation {
                first: i + 1,
                second: i + 2,
            });
        }
    }
    Ok(())
}

/// Undirected graph on agents `1..=n` with a canonical sorted edge list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InformationGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    preds: Vec<Vec<usize>>,
}

impl InformationGraph {
    /// Accepts edges in either orientation; duplicates are merged.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut canon = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::input("edges", format!("self-loop at vertex {a}")));
            }
            if a == 0 || b == 0 || a > n || b > n {
                return Err(Error::input("edges", format!("edge [{a}, {b}] is outside 1..={n}")));
            }
            canon.push((a.min(b), a.max(b)));
        }
        canon.sort_unstable();
        canon.dedup();
        Ok(Self::from_canonical(n, canon))
    }

    fn from_canonical(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut preds = vec![Vec::new(); n];
        for &(j, i) in &edges {
            preds[i - 1].push(j);
        }
        for p in &mut preds {
            p.sort_unstable();
        }
        InformationGraph { n, edges, preds }
    }

    pub fn edgeless(n: usize) -> Self {
        Self::from_canonical(n, Vec::new())
    }

    pub fn complete(n: usize) -> Self {
        let edges = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
        Self::from_canonical(n, edges)
    }

    pub fn path(n: usize) -> Self {
        Self::from_canonical(n, (1..n).map(|i| (i, i + 1)).collect())
    }

    /// Star whose centre is the last vertex `n`.
    pub fn star(leaves: usize) -> Self {
        let n = leaves + 1;
        Self::from_canonical(n, (1..n).map(|i| (i, n)).collect())
    }

    /// Graph whose edges are the set bits of `code`, in the order of
    /// [`InformationGraph::pairs`].
    pub fn from_code(n: usize, code: u64) -> Self {
        let edges = Self::pairs(n)
            .enumerate()
            .filter(|(k, _)| code >> k & 1 == 1)
            .map(|(_, e)| e)
            .collect();
        Self::from_canonical(n, edges)
    }

    /// All vertex pairs `(i, j)`, `i < j`, in lexicographic order.
    pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
        (1..=n).flat_map(move |i| (i + 1..=n).map(move |j| (i, j)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    /// `N_i`: the earlier agents whose decisions agent `i` sees.
    pub fn in_neighbors(&self, i: usize) -> &[usize] {
        &self.preds[i - 1]
    }

    pub fn complement(&self) -> Self {
        let edges = Self::pairs(self.n).filter(|&(i, j)| !self.has_edge(i, j)).collect();
        Self::from_canonical(self.n, edges)
    }

    pub fn is_subgraph_of(&self, other: &InformationGraph) -> bool {
        self.n == other.n && self.edges.iter().all(|&(i, j)| other.has_edge(i, j))
    }
}

/// Iteration assignment respecting every edge of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Schedule {
    pub assignment: IterationAssignment,
    pub depth: usize,
}

/// Earliest iteration for every agent: 1 with no in-neighbours, otherwise one
/// more than the latest in-neighbour.
pub fn earliest_schedule(g: &InformationGraph) -> Schedule {
    let mut levels = vec![0usize; g.n()];
    for i in 1..=g.n() {
        levels[i - 1] = 1 + g.in_neighbors(i).iter().map(|&j| levels[j - 1]).max().unwrap_or(0);
    }
    let depth = levels.iter().copied().max().unwrap_or(0);
    Schedule {
        assignment: IterationAssignment::new(depth, levels),
        depth,
    }
}

pub fn is_feasible(g: &InformationGraph, q: usize) -> bool {
    earliest_schedule(g).depth <= q
}

/// Edges `{i, j}` for every pair with `P(i) < P(j)`.
pub fn induced_graph(p: &IterationAssignment) -> Result<InformationGraph> {
    validate_assignment(p).map_err(|v| Error::input("assignment", v.to_string()))?;
    let n = p.n();
    let edges = InformationGraph::pairs(n)
        .filter(|&(i, j)| p.level(i) < p.level(j))
        .collect();
    Ok(InformationGraph::from_canonical(n, edges))
}

/// An optimal iteration assignment for `n` agents and `q` iterations.
///
/// With `r = ⌈n/q⌉`: if `n ≡ 1 (mod q)` agents `i < n` go to `⌈i/(r−1)⌉` and
/// agent `n` to `q`; otherwise agent `i` goes to `⌈i/r⌉`.
pub fn optimal_assignment(n: usize, q: usize) -> Result<IterationAssignment> {
    check_nq(n, q)?;
    if n == 1 {
        return Ok(IterationAssignment::new(q, vec![1]));
    }
    let r = ceil_div(n, q);
    let levels = if is_one_mod(n, q) {
        (1..=n).map(|i| if i < n { ceil_div(i, r - 1) } else { q }).collect()
    } else {
        (1..=n).map(|i| ceil_div(i, r)).collect()
    };
    Ok(IterationAssignment::new(q, levels))
}

/// A sparsest-known optimal information graph for `n` agents and `q`
/// iterations.
///
/// If `n ≡ 1 (mod q)`: edges `{i, j}` for `i < j < n` with `i ≡ j (mod r−1)`,
/// plus `{i, n}` for `i ≤ (q−1)(r−1)`. Otherwise the complement Turán graph
/// with `r` residue classes.
pub fn optimal_graph(n: usize, q: usize) -> Result<InformationGraph> {
    check_nq(n, q)?;
    if n == 1 {
        return Ok(InformationGraph::edgeless(1));
    }
    let r = ceil_div(n, q);
    if !is_one_mod(n, q) {
        return complement_turan(n, r);
    }
    let m = r - 1;
    let mut edges: Vec<(usize, usize)> = InformationGraph::pairs(n - 1)
        .filter(|&(i, j)| i % m == j % m)
        .collect();
    edges.extend((1..=(q - 1) * m).map(|i| (i, n)));
    edges.sort_unstable();
    Ok(InformationGraph::from_canonical(n, edges))
}

fn check_nr(n: usize, r: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::input("n", "must be a positive integer"));
    }
    if r == 0 || r > n {
        return Err(Error::input(
            "r",
            format!("must satisfy 1 <= r <= n (n = {n}, r = {r})"),
        ));
    }
    Ok(())
}

/// Turán graph `T(n, r)`: vertices split into `r` residue classes mod `r`,
/// edges between different classes.
pub fn turan_graph(n: usize, r: usize) -> Result<InformationGraph> {
    check_nr(n, r)?;
    let edges = InformationGraph::pairs(n).filter(|&(i, j)| i % r != j % r).collect();
    Ok(InformationGraph::from_canonical(n, edges))
}

/// Complement of `T(n, r)`: `r` disjoint cliques, one per residue class.
pub fn complement_turan(n: usize, r: usize) -> Result<InformationGraph> {
    check_nr(n, r)?;
    let edges = InformationGraph::pairs(n).filter(|&(i, j)| i % r == j % r).collect();
    Ok(InformationGraph::from_canonical(n, edges))
}
