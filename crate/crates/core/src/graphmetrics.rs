//! Exact combinatorial invariants of information graphs.
//!
//! Everything here is exhaustive branch-and-bound on bitmask adjacency, so the
//! vertex count is capped (20 by default). Vertices in results are 1-based and
//! every reported set is sorted; when several optimal sets exist the
//! lexicographically smallest one is returned.

use serde::Serialize;

use crate::structure::InformationGraph;
use crate::{Error, Result};

pub const DEFAULT_GRAPH_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Witness {
    Vertices(Vec<usize>),
    Partition(Vec<Vec<usize>>),
}

/// An invariant value together with a structure realising it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantWitness {
    pub value: usize,
    pub witness: Witness,
}

impl InvariantWitness {
    pub fn vertices(&self) -> &[usize] {
        match &self.witness {
            Witness::Vertices(v) => v,
            Witness::Partition(_) => &[],
        }
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        match &self.witness {
            Witness::Partition(p) => p,
            Witness::Vertices(_) => &[],
        }
    }
}

/// Vertex `w` sees a member `member` of the maximum independent set `set`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SiblingWitness {
    pub w: usize,
    pub set: Vec<usize>,
    pub member: usize,
}

/// Vertex `w` outside the maximum `p`-pseudo-independent set `set` sees the
/// members listed in `seen` (at least `p` of them).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PSiblingWitness {
    pub w: usize,
    pub set: Vec<usize>,
    pub seen: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum DisjointCheck {
    /// The graph has the p-sibling property, so there is nothing to check.
    NotApplicable,
    /// Every two maximum p-pseudo-independent sets intersect.
    Holds,
    /// Two disjoint maximum sets were found.
    Counterexample { first: Vec<usize>, second: Vec<usize> },
}

impl DisjointCheck {
    pub fn passed(&self) -> bool {
        !matches!(self, DisjointCheck::Counterexample { .. })
    }
}

fn to_vertices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

fn lowest(mask: u64) -> usize {
    mask.trailing_zeros() as usize
}

/// Bitmask view of a graph: `adj[v]` and `preds[v]` over 0-based vertices.
struct Bits {
    n: usize,
    adj: Vec<u64>,
    preds: Vec<u64>,
}

impl Bits {
    fn new(g: &InformationGraph) -> Self {
        let n = g.n();
        let mut adj = vec![0u64; n];
        let mut preds = vec![0u64; n];
        for &(a, b) in g.edges() {
            let (a, b) = (a - 1, b - 1);
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
            preds[b] |= 1 << a;
        }
        Bits { n, adj, preds }
    }

    fn complement(&self) -> Self {
        let full = full_mask(self.n);
        let adj = (0..self.n).map(|v| full & !self.adj[v] & !(1 << v)).collect();
        let preds = (0..self.n).map(|v| ((1u64 << v) - 1) & !self.preds[v]).collect();
        Bits { n: self.n, adj, preds }
    }

    fn vertices(&self) -> u64 {
        full_mask(self.n)
    }
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Maximum clique, lexicographically smallest among the maximum ones.
fn max_clique(bits: &Bits) -> u64 {
    fn grow(bits: &Bits, chosen: u64, size: usize, candidates: u64, best: &mut (usize, u64)) {
        if candidates == 0 {
            if size > best.0 {
                *best = (size, chosen);
            }
            return;
        }
        let mut rest = candidates;
        while rest != 0 {
            if size + rest.count_ones() as usize <= best.0 {
                return;
            }
            let v = lowest(rest);
            rest &= rest - 1;
            grow(bits, chosen | 1 << v, size + 1, rest & bits.adj[v], best);
        }
        if size > best.0 {
            *best = (size, chosen);
        }
    }

    let mut best = (0usize, 0u64);
    grow(bits, 0, 0, bits.vertices(), &mut best);
    best.1
}

/// All cliques of exactly `size` vertices, in lexicographic order.
fn cliques_of_size(bits: &Bits, size: usize) -> Vec<u64> {
    fn grow(bits: &Bits, chosen: u64, have: usize, candidates: u64, size: usize, out: &mut Vec<u64>) {
        if have == size {
            out.push(chosen);
            return;
        }
        let mut rest = candidates;
        while rest != 0 {
            if have + (rest.count_ones() as usize) < size {
                return;
            }
            let v = lowest(rest);
            rest &= rest - 1;
            grow(bits, chosen | 1 << v, have + 1, rest & bits.adj[v], size, out);
        }
    }

    let mut out = Vec::new();
    grow(bits, 0, 0, bits.vertices(), size, &mut out);
    out
}

/// Proper colouring with at most `k` colours, or `None`. DSATUR branching.
fn colour_with(bits: &Bits, k: usize) -> Option<Vec<usize>> {
    fn search(bits: &Bits, k: usize, colour: &mut [Option<usize>], used: usize) -> bool {
        let mut pick: Option<(usize, usize, usize)> = None;
        for v in 0..bits.n {
            if colour[v].is_some() {
                continue;
            }
            let mut seen = 0u64;
            let mut degree = 0;
            for (u, c) in colour.iter().enumerate() {
                if bits.adj[v] >> u & 1 == 1 {
                    match c {
                        Some(c) => seen |= 1 << c,
                        None => degree += 1,
                    }
                }
            }
            let sat = seen.count_ones() as usize;
            if pick.is_none_or(|(_, s, d)| (sat, degree) > (s, d)) {
                pick = Some((v, sat, degree));
            }
        }
        let Some((v, _, _)) = pick else {
            return true;
        };
        let forbidden = (0..bits.n)
            .filter(|&u| bits.adj[v] >> u & 1 == 1)
            .filter_map(|u| colour[u])
            .fold(0u64, |acc, c| acc | 1 << c);
        for c in 0..(used + 1).min(k) {
            if forbidden >> c & 1 == 1 {
                continue;
            }
            colour[v] = Some(c);
            if search(bits, k, colour, used.max(c + 1)) {
                return true;
            }
        }
        colour[v] = None;
        false
    }

    let mut colour = vec![None; bits.n];
    search(bits, k, &mut colour, 0).then(|| colour.into_iter().map(|c| c.unwrap()).collect())
}

/// Exact solver with a vertex-count cap.
#[derive(Debug, Clone, Copy)]
pub struct ExactSearch {
    pub cap: usize,
}

impl Default for ExactSearch {
    fn default() -> Self {
        ExactSearch { cap: DEFAULT_GRAPH_CAP }
    }
}

impl ExactSearch {
    pub fn new(cap: usize) -> Self {
        ExactSearch { cap: cap.min(64) }
    }

    fn bits(&self, g: &InformationGraph) -> Result<Bits> {
        if g.n() > self.cap {
            return Err(Error::capacity("graph", g.n(), self.cap));
        }
        Ok(Bits::new(g))
    }

    pub fn clique_number(&self, g: &InformationGraph) -> Result<InvariantWitness> {
        let clique = max_clique(&self.bits(g)?);
        Ok(InvariantWitness {
            value: clique.count_ones() as usize,
            witness: Witness::Vertices(to_vertices(clique)),
        })
    }

    pub fn independence_number(&self, g: &InformationGraph) -> Result<InvariantWitness> {
        let set = max_clique(&self.bits(g)?.complement());
        Ok(InvariantWitness {
            value: set.count_ones() as usize,
            witness: Witness::Vertices(to_vertices(set)),
        })
    }

    /// Every maximum independent set, in lexicographic order.
    pub fn maximum_independent_sets(&self, g: &InformationGraph) -> Result<Vec<Vec<usize>>> {
        let co = self.bits(g)?.complement();
        let alpha = max_clique(&co).count_ones() as usize;
        Ok(cliques_of_size(&co, alpha).into_iter().map(to_vertices).collect())
    }

    /// Minimum partition of the vertices into cliques, found as a minimum
    /// colouring of the complement.
    pub fn clique_cover_number(&self, g: &InformationGraph) -> Result<InvariantWitness> {
        let bits = self.bits(g)?;
        if g.n() == 0 {
            return Ok(InvariantWitness {
                value: 0,
                witness: Witness::Partition(Vec::new()),
            });
        }
        let co = bits.complement();
        // Cliques of G pairwise share at most one vertex of an independent set.
        let lower = max_clique(&co).count_ones() as usize;
        let colouring = (lower..=g.n())
            .find_map(|k| colour_with(&co, k))
            .expect("n colours always suffice");
        let k = colouring.iter().max().map_or(0, |c| c + 1);
        let mut parts = vec![Vec::new(); k];
        for (v, c) in colouring.into_iter().enumerate() {
            parts[c].push(v + 1);
        }
        parts.sort();
        Ok(InvariantWitness {
            value: k,
            witness: Witness::Partition(parts),
        })
    }

    /// Is there a vertex `w` and a maximum independent set `I` with some
    /// member of `I` in `N_w`? All maximum independent sets are examined.
    pub fn has_sibling_condition(&self, g: &InformationGraph) -> Result<Option<SiblingWitness>> {
        for set in self.maximum_independent_sets(g)? {
            for w in 1..=g.n() {
                if let Some(&member) = g.in_neighbors(w).iter().find(|j| set.contains(j)) {
                    return Ok(Some(SiblingWitness { w, set, member }));
                }
            }
        }
        Ok(None)
    }

    fn pseudo_bits(&self, g: &InformationGraph, p: usize) -> Result<Bits> {
        if p == 0 {
            return Err(Error::input("p", "must be a positive integer"));
        }
        self.bits(g)
    }

    /// Size of the largest `J` with `|N_j ∩ J| < p` for every `j ∈ J`.
    pub fn pseudo_independence_number(&self, g: &InformationGraph, p: usize) -> Result<InvariantWitness> {
        let bits = self.pseudo_bits(g, p)?;
        let best = max_pseudo_independent(&bits, p);
        Ok(InvariantWitness {
            value: best.count_ones() as usize,
            witness: Witness::Vertices(to_vertices(best)),
        })
    }

    pub fn maximum_pseudo_independent_sets(&self, g: &InformationGraph, p: usize) -> Result<Vec<Vec<usize>>> {
        let bits = self.pseudo_bits(g, p)?;
        let size = max_pseudo_independent(&bits, p).count_ones() as usize;
        Ok(pseudo_independent_of_size(&bits, p, size)
            .into_iter()
            .map(to_vertices)
            .collect())
    }

    /// Does some maximum `p`-pseudo-independent set have a `p`-sibling, i.e. a
    /// vertex outside it whose in-neighbourhood holds at least `p` members?
    pub fn has_p_sibling(&self, g: &InformationGraph, p: usize) -> Result<Option<PSiblingWitness>> {
        let bits = self.pseudo_bits(g, p)?;
        let size = max_pseudo_independent(&bits, p).count_ones() as usize;
        for set in pseudo_independent_of_size(&bits, p, size) {
            for w in 0..bits.n {
                if set >> w & 1 == 1 {
                    continue;
                }
                let seen = bits.preds[w] & set;
                if seen.count_ones() as usize >= p {
                    return Ok(Some(PSiblingWitness {
                        w: w + 1,
                        set: to_vertices(set),
                        seen: to_vertices(seen),
                    }));
                }
            }
        }
        Ok(None)
    }

    /// Checks that a graph without the `p`-sibling property has no two
    /// disjoint maximum `p`-pseudo-independent sets.
    pub fn verify_no_disjoint_max_sets(&self, g: &InformationGraph, p: usize) -> Result<DisjointCheck> {
        if self.has_p_sibling(g, p)?.is_some() {
            return Ok(DisjointCheck::NotApplicable);
        }
        let bits = self.pseudo_bits(g, p)?;
        let size = max_pseudo_independent(&bits, p).count_ones() as usize;
        let sets = pseudo_independent_of_size(&bits, p, size);
        for (k, &a) in sets.iter().enumerate() {
            if let Some(&b) = sets[k + 1..].iter().find(|&&b| a & b == 0) {
                return Ok(DisjointCheck::Counterexample {
                    first: to_vertices(a),
                    second: to_vertices(b),
                });
            }
        }
        Ok(DisjointCheck::Holds)
    }
}

/// Vertices are added in increasing order, so adding `v` can only break the
/// condition at `v` itself: earlier members never see later ones.
fn max_pseudo_independent(bits: &Bits, p: usize) -> u64 {
    fn go(bits: &Bits, p: usize, v: usize, chosen: u64, size: usize, best: &mut (usize, u64)) {
        if v == bits.n {
            if size > best.0 {
                *best = (size, chosen);
            }
            return;
        }
        if size + (bits.n - v) <= best.0 {
            return;
        }
        if ((bits.preds[v] & chosen).count_ones() as usize) < p {
            go(bits, p, v + 1, chosen | 1 << v, size + 1, best);
        }
        go(bits, p, v + 1, chosen, size, best);
    }

    let mut best = (0, 0);
    go(bits, p, 0, 0, 0, &mut best);
    best.1
}

fn pseudo_independent_of_size(bits: &Bits, p: usize, size: usize) -> Vec<u64> {
    fn go(bits: &Bits, p: usize, v: usize, chosen: u64, have: usize, size: usize, out: &mut Vec<u64>) {
        if have == size {
            out.push(chosen);
            return;
        }
        if v == bits.n || have + (bits.n - v) < size {
            return;
        }
        if ((bits.preds[v] & chosen).count_ones() as usize) < p {
            go(bits, p, v + 1, chosen | 1 << v, have + 1, size, out);
        }
        go(bits, p, v + 1, chosen, have, size, out);
    }

    let mut out = Vec::new();
    go(bits, p, 0, 0, 0, size, &mut out);
    out
}

pub fn clique_number(g: &InformationGraph) -> Result<InvariantWitness> {
    ExactSearch::default().clique_number(g)
}

pub fn independence_number(g: &InformationGraph) -> Result<InvariantWitness> {
    ExactSearch::default().independence_number(g)
}

pub fn clique_cover_number(g: &InformationGraph) -> Result<InvariantWitness> {
    ExactSearch::default().clique_cover_number(g)
}

pub fn has_sibling_condition(g: &InformationGraph) -> Result<Option<SiblingWitness>> {
    ExactSearch::default().has_sibling_condition(g)
}

pub fn pseudo_independence_number(g: &InformationGraph, p: usize) -> Result<InvariantWitness> {
    ExactSearch::default().pseudo_independence_number(g, p)
}

pub fn has_p_sibling(g: &InformationGraph, p: usize) -> Result<Option<PSiblingWitness>> {
    ExactSearch::default().has_p_sibling(g, p)
}

pub fn verify_no_disjoint_max_sets(g: &InformationGraph, p: usize) -> Result<DisjointCheck> {
    ExactSearch::default().verify_no_disjoint_max_sets(g, p)
}

pub fn is_independent_set(g: &InformationGraph, set: &[usize]) -> bool {
    set.iter()
        .enumerate()
        .all(|(k, &a)| set[k + 1..].iter().all(|&b| !g.has_edge(a, b)))
}

pub fn is_clique(g: &InformationGraph, set: &[usize]) -> bool {
    set.iter()
        .enumerate()
        .all(|(k, &a)| set[k + 1..].iter().all(|&b| g.has_edge(a, b)))
}

/// Parts are cliques and partition `1..=n`.
pub fn is_clique_cover(g: &InformationGraph, parts: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; g.n()];
    for part in parts {
        if part.is_empty() || !is_clique(g, part) {
            return false;
        }
        for &v in part {
            if v == 0 || v > g.n() || std::mem::replace(&mut seen[v - 1], true) {
                return false;
            }
        }
    }
    seen.into_iter().all(|s| s)
}
