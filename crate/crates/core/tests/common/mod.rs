//! Naive reference implementations. Nothing here shares code with the
//! library beyond reading its inputs; every routine is plain enumeration.

#![allow(dead_code)]

use std::collections::BTreeSet;

use pargreedy::objective::{AgentSpace, SetFunction};
use pargreedy::rational::int;
use pargreedy::structure::InformationGraph;
use pargreedy::{ElementSet, Rational};

pub fn adjacent(g: &InformationGraph, a: usize, b: usize) -> bool {
    g.edges().contains(&(a.min(b), a.max(b)))
}

fn members(n: usize, mask: u32) -> Vec<usize> {
    (1..=n).filter(|v| mask >> (v - 1) & 1 == 1).collect()
}

pub fn is_independent(g: &InformationGraph, set: &[usize]) -> bool {
    set.iter()
        .enumerate()
        .all(|(k, &a)| set[k + 1..].iter().all(|&b| !adjacent(g, a, b)))
}

pub fn is_clique(g: &InformationGraph, set: &[usize]) -> bool {
    set.iter()
        .enumerate()
        .all(|(k, &a)| set[k + 1..].iter().all(|&b| adjacent(g, a, b)))
}

pub fn alpha(g: &InformationGraph) -> usize {
    (0..1u32 << g.n())
        .map(|m| members(g.n(), m))
        .filter(|s| is_independent(g, s))
        .map(|s| s.len())
        .max()
        .unwrap_or(0)
}

pub fn omega(g: &InformationGraph) -> usize {
    (0..1u32 << g.n())
        .map(|m| members(g.n(), m))
        .filter(|s| is_clique(g, s))
        .map(|s| s.len())
        .max()
        .unwrap_or(0)
}

/// Fewest cliques partitioning the vertices, by enumerating every set
/// partition (restricted growth strings).
pub fn theta(g: &InformationGraph) -> usize {
    fn go(g: &InformationGraph, v: usize, blocks: &mut Vec<Vec<usize>>, best: &mut usize) {
        if blocks.len() >= *best {
            return;
        }
        if v > g.n() {
            *best = blocks.len();
            return;
        }
        for k in 0..blocks.len() {
            if blocks[k].iter().all(|&u| adjacent(g, u, v)) {
                blocks[k].push(v);
                go(g, v + 1, blocks, best);
                blocks[k].pop();
            }
        }
        blocks.push(vec![v]);
        go(g, v + 1, blocks, best);
        blocks.pop();
    }
    let mut best = g.n() + 1;
    go(g, 1, &mut Vec::new(), &mut best);
    best.min(g.n())
}

pub fn in_neighbors(g: &InformationGraph, i: usize) -> Vec<usize> {
    (1..i).filter(|&j| adjacent(g, j, i)).collect()
}

/// Longest chain of edges ending at each vertex, plus one.
pub fn earliest_levels(g: &InformationGraph) -> Vec<usize> {
    fn level(g: &InformationGraph, i: usize) -> usize {
        1 + in_neighbors(g, i).into_iter().map(|j| level(g, j)).max().unwrap_or(0)
    }
    (1..=g.n()).map(|i| level(g, i)).collect()
}

/// Sets with every member having fewer than `p` earlier neighbours inside.
pub fn pseudo_independent(g: &InformationGraph, set: &[usize], p: usize) -> bool {
    set.iter()
        .all(|&v| set.iter().filter(|&&u| u < v && adjacent(g, u, v)).count() < p)
}

pub fn max_pseudo_independent_sets(g: &InformationGraph, p: usize) -> Vec<Vec<usize>> {
    let all: Vec<Vec<usize>> = (0..1u32 << g.n())
        .map(|m| members(g.n(), m))
        .filter(|s| pseudo_independent(g, s, p))
        .collect();
    let best = all.iter().map(Vec::len).max().unwrap_or(0);
    all.into_iter().filter(|s| s.len() == best).collect()
}

/// Some maximum p-pseudo-independent `J` and `w ∉ J` with `|N_w ∩ J| ≥ p`.
pub fn has_p_sibling(g: &InformationGraph, p: usize) -> bool {
    max_pseudo_independent_sets(g, p).iter().any(|set| {
        (1..=g.n())
            .filter(|w| !set.contains(w))
            .any(|w| in_neighbors(g, w).iter().filter(|j| set.contains(j)).count() >= p)
    })
}

/// Direct cover evaluation from the objective's own description.
pub fn cover_value(f: &SetFunction, set: ElementSet) -> Option<Rational> {
    match f.objective() {
        pargreedy::objective::Objective::Cover { weights, covers, .. } => {
            let mut covered = 0u128;
            for (e, c) in covers.iter().enumerate().take(f.len()) {
                if set.0 >> e & 1 == 1 {
                    covered |= c;
                }
            }
            Some(
                weights
                    .iter()
                    .enumerate()
                    .filter(|(t, _)| covered >> t & 1 == 1)
                    .map(|(_, w)| *w)
                    .sum(),
            )
        }
        _ => None,
    }
}

fn subsets(m: usize) -> impl Iterator<Item = ElementSet> {
    (0..1u64 << m).map(ElementSet)
}

/// Literal axioms: `f(∅)=0`, `A ⊆ B ⇒ f(A) ≤ f(B)` and
/// `f(e|A) ≥ f(e|B)` for all `A ⊆ B`, `e ∉ B`.
pub fn literal_axioms(f: &SetFunction) -> (bool, bool, bool) {
    let m = f.len();
    let normalized = f.evaluate(ElementSet::EMPTY) == int(0);
    let mut monotone = true;
    let mut submodular = true;
    for b in subsets(m) {
        let fb = f.evaluate(b);
        // Enumerate subsets of b.
        let mut a = b.0;
        loop {
            let sub = ElementSet(a);
            let fa = f.evaluate(sub);
            monotone &= fa <= fb;
            for e in (0..m).filter(|&e| b.0 >> e & 1 == 0) {
                let gain_a = f.evaluate(sub.with(e)) - fa;
                let gain_b = f.evaluate(b.with(e)) - fb;
                submodular &= gain_a >= gain_b;
            }
            if a == 0 {
                break;
            }
            a = (a - 1) & b.0;
        }
    }
    (normalized, monotone, submodular)
}

/// `max_e (1 − min_A f(e|A)/f(e))` over elements with `f(e) > 0`.
pub fn curvature(f: &SetFunction) -> Rational {
    let mut worst = int(0);
    for e in 0..f.len() {
        let single = f.evaluate(ElementSet::singleton(e));
        if single <= int(0) {
            continue;
        }
        for a in subsets(f.len()).filter(|a| !a.contains(e)) {
            let gain = f.evaluate(a.with(e)) - f.evaluate(a);
            worst = worst.max(int(1) - gain / single);
        }
    }
    worst
}

fn options(x: &AgentSpace, agent: usize) -> Vec<Option<usize>> {
    let d = x.decisions(agent);
    if d.is_empty() {
        vec![None]
    } else {
        d.iter().copied().map(Some).collect()
    }
}

fn as_set(profile: &[Option<usize>]) -> ElementSet {
    profile.iter().flatten().fold(ElementSet::EMPTY, |s, &e| s.with(e))
}

/// Every greedy run, following each tie separately with no memoization.
/// Returns the distinct final decision sets.
pub fn greedy_finals(f: &SetFunction, x: &AgentSpace, g: &InformationGraph) -> BTreeSet<ElementSet> {
    fn go(
        f: &SetFunction,
        x: &AgentSpace,
        g: &InformationGraph,
        profile: &mut Vec<Option<usize>>,
        out: &mut BTreeSet<ElementSet>,
    ) {
        let i = profile.len() + 1;
        if i > g.n() {
            out.insert(as_set(profile));
            return;
        }
        let seen: Vec<Option<usize>> = in_neighbors(g, i).iter().map(|&j| profile[j - 1]).collect();
        let base = as_set(&seen);
        let gains: Vec<(Option<usize>, Rational)> = options(x, i - 1)
            .into_iter()
            .map(|o| {
                let gain = o.map_or(int(0), |e| f.evaluate(base.with(e)) - f.evaluate(base));
                (o, gain)
            })
            .collect();
        let top = gains.iter().map(|(_, v)| *v).max().unwrap();
        for (o, v) in gains {
            if v == top {
                profile.push(o);
                go(f, x, g, profile, out);
                profile.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    go(f, x, g, &mut Vec::new(), &mut out);
    out
}

/// Maximum over the full product of decision sets.
pub fn optimum(f: &SetFunction, x: &AgentSpace) -> Rational {
    let choices: Vec<Vec<Option<usize>>> = (0..x.n()).map(|i| options(x, i)).collect();
    let mut index = vec![0usize; x.n()];
    let mut best = int(0);
    loop {
        let profile: Vec<Option<usize>> = index.iter().enumerate().map(|(i, &k)| choices[i][k]).collect();
        best = best.max(f.evaluate(as_set(&profile)));
        let mut i = 0;
        loop {
            if i == x.n() {
                return best;
            }
            index[i] += 1;
            if index[i] < choices[i].len() {
                break;
            }
            index[i] = 0;
            i += 1;
        }
    }
}
