//! The telescoping argument behind `f(opt) ≤ r·f(sol)` on the optimal graph
//! for `n ≡ 1 (mod q)`, evaluated term by term on a concrete instance.
//!
//! With `m = r − 1`, `T = {1, .., (q−1)m}` and classes
//! `C_j = {j, j+m, .., j+(q−1)m}`:
//!
//! ```text
//! L0 = f(opt)
//! L1 = f(opt ∪ sol_T)
//! L2 = f(sol_T) + Σ_i f(opt_i | opt_{1:i−1} ∪ sol_T)
//! L3 = f(sol_T) + Σ_i f(opt_i | sol_{N_i})
//! L4 = f(sol_T) + Σ_j Σ_{k ∈ C_j} f(opt_k | sol_{N_k}) + f(opt_n | sol_T)
//! L5 = f(sol_T) + Σ_j Σ_{k ∈ C_j} f(sol_k | sol_{N_k}) + f(sol_n | sol_T)
//! L6 = Σ_j f(sol_{C_j}) + f(sol_n ∪ sol_T)
//! L7 = r · f(sol)
//! ```

use serde::Serialize;

use crate::greedy::{brute_force_optimum_with, worst_greedy_with};
use crate::objective::{AgentSpace, SetFunction};
use crate::rational::{int, Exact, Rational};
use crate::structure::{ceil_div, is_one_mod, optimal_graph, InformationGraph};
use crate::{ElementSet, Error, Limits, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Le,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    /// Index of the right-hand line; the step compares `L{to−1}` with `L{to}`.
    pub to: usize,
    pub relation: Relation,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub lines: Vec<Exact>,
    pub steps: Vec<ChainStep>,
}

impl ChainReport {
    pub fn holds(&self) -> bool {
        self.steps.iter().all(|s| s.holds)
    }

    /// `L0 ≤ L7`, i.e. `f(opt) ≤ r·f(sol)`.
    pub fn end_to_end(&self) -> bool {
        self.lines[0].0 <= self.lines[7].0
    }
}

const RELATIONS: [Relation; 7] = [
    Relation::Le,
    Relation::Eq,
    Relation::Le,
    Relation::Eq,
    Relation::Le,
    Relation::Eq,
    Relation::Le,
];

/// Evaluates the chain for one greedy solution and one optimal profile, given
/// per agent as chosen element sets (empty for the null decision).
pub fn telescoping_chain(
    f: &SetFunction,
    g: &InformationGraph,
    q: usize,
    sol: &[ElementSet],
    opt: &[ElementSet],
) -> Result<ChainReport> {
    let n = g.n();
    if sol.len() != n || opt.len() != n {
        return Err(Error::input("profile", "one decision per agent is required"));
    }
    if q == 0 || q > n || !is_one_mod(n, q) {
        return Err(Error::input("q", "the chain applies only when n ≡ 1 (mod q)"));
    }
    let r = ceil_div(n, q);
    let m = r - 1;
    let union = |agents: &mut dyn Iterator<Item = usize>, of: &[ElementSet]| {
        agents.fold(ElementSet::EMPTY, |acc, i| acc.union(of[i - 1]))
    };
    let sol_t = union(&mut (1..=(q - 1) * m), sol);
    let sol_all = union(&mut (1..=n), sol);
    let opt_all = union(&mut (1..=n), opt);
    let seen = |i: usize| union(&mut g.in_neighbors(i).iter().copied(), sol);
    let classes: Vec<Vec<usize>> = (1..=m).map(|j| (0..q).map(|i| i * m + j).collect()).collect();

    let l0 = f.evaluate(opt_all);
    let l1 = f.evaluate(opt_all.union(sol_t));
    let mut l2 = f.evaluate(sol_t);
    let mut prefix = sol_t;
    for i in 1..=n {
        l2 += f.marginal(opt[i - 1], prefix);
        prefix = prefix.union(opt[i - 1]);
    }
    let l3 = f.evaluate(sol_t) + (1..=n).map(|i| f.marginal(opt[i - 1], seen(i))).sum::<Rational>();
    let grouped = |of: &[ElementSet]| {
        let mut total = f.evaluate(sol_t);
        for class in &classes {
            for &k in class {
                total += f.marginal(of[k - 1], seen(k));
            }
        }
        total + f.marginal(of[n - 1], sol_t)
    };
    let l4 = grouped(opt);
    let l5 = grouped(sol);
    let l6 = classes
        .iter()
        .map(|c| f.evaluate(union(&mut c.iter().copied(), sol)))
        .sum::<Rational>()
        + f.evaluate(sol[n - 1].union(sol_t));
    let l7 = int(r as i64) * f.evaluate(sol_all);

    let lines = [l0, l1, l2, l3, l4, l5, l6, l7];
    let steps = RELATIONS
        .iter()
        .enumerate()
        .map(|(k, &relation)| {
            let (a, b) = (lines[k], lines[k + 1]);
            ChainStep {
                to: k + 1,
                relation,
                holds: match relation {
                    Relation::Le => a <= b,
                    Relation::Eq => a == b,
                },
            }
        })
        .collect();
    Ok(ChainReport {
        lines: lines.iter().map(|&v| v.into()).collect(),
        steps,
    })
}

pub fn check_chain(f: &SetFunction, x: &AgentSpace, q: usize) -> Result<ChainReport> {
    check_chain_with(f, x, q, &Limits::default())
}

/// Runs worst-case greedy on the optimal graph for `(x.n(), q)`, finds an
/// optimum by enumeration and evaluates the chain on the pair.
pub fn check_chain_with(f: &SetFunction, x: &AgentSpace, q: usize, limits: &Limits) -> Result<ChainReport> {
    let n = x.n();
    let g = optimal_graph(n, q)?;
    let sol = worst_greedy_with(f, x, &g, limits)?;
    let opt = brute_force_optimum_with(f, x, limits)?;
    let sets = |profile: &[Option<usize>]| -> Vec<ElementSet> {
        profile
            .iter()
            .map(|d| d.map_or(ElementSet::EMPTY, ElementSet::singleton))
            .collect()
    };
    telescoping_chain(f, &g, q, &sets(&sol.profile), &sets(&opt.profile))
}
