//! The generalized greedy algorithm over an information graph.
//!
//! Agents decide in index order. Agent `i` picks a decision from `X_i` that
//! maximizes its marginal contribution with respect to the decisions of its
//! in-neighbours `N_i` only. Ties are compared exactly and resolved according
//! to a [`TiePolicy`]; the worst-case policy explores the whole tie tree.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;

use crate::objective::{AgentSpace, SetFunction};
use crate::rational::Rational;
use crate::structure::{earliest_schedule, validate_assignment, InformationGraph, IterationAssignment, Schedule};
use crate::{ElementSet, Error, Limits, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TiePolicy {
    /// Lowest-listed maximizing decision.
    First,
    /// Highest-listed maximizing decision.
    Last,
    /// Minimize the final value over all tie resolutions.
    Worst,
    /// Maximize the final value over all tie resolutions.
    Best,
    /// Every distinct final decision set reachable by some resolution.
    All,
}

impl FromStr for TiePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" => Ok(TiePolicy::First),
            "last" => Ok(TiePolicy::Last),
            "worst" => Ok(TiePolicy::Worst),
            "best" => Ok(TiePolicy::Best),
            "all" => Ok(TiePolicy::All),
            other => Err(Error::input("policy", format!("unknown tie policy `{other}`"))),
        }
    }
}

/// Result of one greedy resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyOutcome {
    /// Chosen ground-element index per agent; `None` for the null decision.
    pub profile: Vec<Option<usize>>,
    pub decisions: ElementSet,
    pub value: Rational,
    /// `f(x_i | x_{N_i})` for each agent.
    pub per_agent_marginal: Vec<Rational>,
    /// Tie-tree nodes expanded to produce this outcome.
    pub resolutions_explored: u64,
    pub schedule: Schedule,
}

/// Serializable view of a [`GreedyOutcome`] with element ids.
#[derive(Debug, Clone, Serialize)]
pub struct OutcomeRecord {
    pub profile: Vec<Option<String>>,
    #[serde(with = "crate::rational::serde_exact")]
    pub value: Rational,
    pub per_agent_marginal: Vec<crate::rational::Exact>,
    pub resolutions_explored: u64,
    pub schedule: Vec<usize>,
}

impl GreedyOutcome {
    pub fn record(&self, f: &SetFunction) -> OutcomeRecord {
        OutcomeRecord {
            profile: self.profile.iter().map(|d| d.map(|e| f.ground()[e].clone())).collect(),
            value: self.value,
            per_agent_marginal: self.per_agent_marginal.iter().map(|&m| m.into()).collect(),
            resolutions_explored: self.resolutions_explored,
            schedule: self.schedule.assignment.levels().to_vec(),
        }
    }
}

fn check_dimensions(f: &SetFunction, x: &AgentSpace, n: usize) -> Result<()> {
    if x.n() != n {
        return Err(Error::input(
            "agents",
            format!("{} agents in the decision space but {n} in the graph", x.n()),
        ));
    }
    if x.ground_len() != f.len() {
        return Err(Error::input(
            "agents",
            "decision space was built over a different ground set",
        ));
    }
    Ok(())
}

/// Maximizing decisions of `agent` given the visible decisions `seen`, in
/// listed order. `[None]` for an empty decision set.
fn argmax(f: &SetFunction, x: &AgentSpace, agent: usize, seen: ElementSet) -> Vec<Option<usize>> {
    let options = x.decisions(agent);
    if options.is_empty() {
        return vec![None];
    }
    let base = f.evaluate(seen);
    let gains: Vec<Rational> = options.iter().map(|&d| f.evaluate(seen.with(d)) - base).collect();
    let best = *gains.iter().max().unwrap();
    options
        .iter()
        .zip(&gains)
        .filter(|(_, g)| **g == best)
        .map(|(&d, _)| Some(d))
        .collect()
}

fn as_set(choice: Option<usize>) -> ElementSet {
    choice.map_or(ElementSet::EMPTY, ElementSet::singleton)
}

/// Builds an outcome from a final decision set. `views[i]` is the element
/// mask agent `i` observes.
fn outcome_from_set(
    f: &SetFunction,
    x: &AgentSpace,
    views: &[ElementSet],
    decisions: ElementSet,
    explored: u64,
    schedule: &Schedule,
) -> GreedyOutcome {
    let profile: Vec<Option<usize>> = (0..x.n())
        .map(|i| decisions.intersection(x.mask(i)).iter().next())
        .collect();
    let per_agent_marginal = profile
        .iter()
        .enumerate()
        .map(|(i, d)| f.marginal(as_set(*d), decisions.intersection(views[i])))
        .collect();
    GreedyOutcome {
        profile,
        decisions,
        value: f.evaluate(decisions),
        per_agent_marginal,
        resolutions_explored: explored,
        schedule: schedule.clone(),
    }
}

/// Picks outcomes from the reachable final sets according to the policy.
fn select(
    f: &SetFunction,
    finals: BTreeSet<ElementSet>,
    policy: TiePolicy,
    build: impl Fn(ElementSet) -> GreedyOutcome,
) -> Vec<GreedyOutcome> {
    match policy {
        TiePolicy::All => finals.into_iter().map(build).collect(),
        TiePolicy::Worst | TiePolicy::Best | TiePolicy::First | TiePolicy::Last => {
            let mut chosen: Option<(Rational, ElementSet)> = None;
            for set in finals {
                let v = f.evaluate(set);
                let better = match chosen {
                    None => true,
                    Some((cv, _)) => match policy {
                        TiePolicy::Best => v > cv,
                        _ => v < cv,
                    },
                };
                if better {
                    chosen = Some((v, set));
                }
            }
            chosen.map(|(_, s)| build(s)).into_iter().collect()
        }
    }
}

pub fn run_greedy(
    f: &SetFunction,
    x: &AgentSpace,
    g: &InformationGraph,
    policy: TiePolicy,
) -> Result<Vec<GreedyOutcome>> {
    run_greedy_with(f, x, g, policy, &Limits::default())
}

/// Runs the generalized greedy algorithm. Single-resolution policies return
/// one outcome; [`TiePolicy::All`] returns one per distinct final decision set,
/// ordered by that set.
pub fn run_greedy_with(
    f: &SetFunction,
    x: &AgentSpace,
    g: &InformationGraph,
    policy: TiePolicy,
    limits: &Limits,
) -> Result<Vec<GreedyOutcome>> {
    check_dimensions(f, x, g.n())?;
    let n = g.n();
    let schedule = earliest_schedule(g);
    let views: Vec<ElementSet> = (1..=n)
        .map(|i| x.mask_of(g.in_neighbors(i).iter().map(|j| j - 1)))
        .collect();

    if matches!(policy, TiePolicy::First | TiePolicy::Last) {
        let mut decisions = ElementSet::EMPTY;
        for (i, &view) in views.iter().enumerate() {
            let options = argmax(f, x, i, decisions.intersection(view));
            let pick = if policy == TiePolicy::First {
                options[0]
            } else {
                options[options.len() - 1]
            };
            decisions = decisions.union(as_set(pick));
        }
        return Ok(vec![outcome_from_set(f, x, &views, decisions, n as u64, &schedule)]);
    }

    // Decisions of agent j stay relevant while some later agent still sees j.
    let mut last_seen = vec![0usize; n];
    for i in 1..=n {
        for &j in g.in_neighbors(i) {
            last_seen[j - 1] = last_seen[j - 1].max(i - 1);
        }
    }
    let relevant: Vec<ElementSet> = (0..=n)
        .map(|i| x.mask_of((0..i).filter(|&j| last_seen[j] >= i)))
        .collect();

    let mut tree = TieTree {
        f,
        x,
        views: &views,
        relevant: &relevant,
        memo: HashMap::new(),
        nodes: 0,
        limit: limits.tie_nodes,
    };
    let futures = tree.futures(0, ElementSet::EMPTY)?;
    let explored = tree.nodes;
    let finals: BTreeSet<ElementSet> = futures.iter().copied().collect();
    Ok(select(f, finals, policy, |s| {
        outcome_from_set(f, x, &views, s, explored, &schedule)
    }))
}

/// Depth-first tie-tree exploration memoized on (agent, decisions still
/// visible to the remaining agents). Each node yields the set of decision
/// sets the remaining agents can end up choosing.
struct TieTree<'a> {
    f: &'a SetFunction,
    x: &'a AgentSpace,
    views: &'a [ElementSet],
    relevant: &'a [ElementSet],
    memo: HashMap<(usize, ElementSet), Rc<Vec<ElementSet>>>,
    nodes: u64,
    limit: u64,
}

impl TieTree<'_> {
    fn futures(&mut self, agent: usize, visible: ElementSet) -> Result<Rc<Vec<ElementSet>>> {
        if agent == self.x.n() {
            return Ok(Rc::new(vec![ElementSet::EMPTY]));
        }
        if let Some(hit) = self.memo.get(&(agent, visible)) {
            return Ok(hit.clone());
        }
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::capacity("greedy tie tree", self.nodes, self.limit));
        }
        let options = argmax(self.f, self.x, agent, visible.intersection(self.views[agent]));
        let mut out = Vec::new();
        for choice in options {
            let mine = as_set(choice);
            let next_visible = visible.union(mine).intersection(self.relevant[agent + 1]);
            let rest = self.futures(agent + 1, next_visible)?;
            out.extend(rest.iter().map(|s| s.union(mine)));
            if out.len() as u64 > self.limit {
                return Err(Error::capacity("greedy tie tree", out.len(), self.limit));
            }
        }
        out.sort_unstable();
        out.dedup();
        let out = Rc::new(out);
        self.memo.insert((agent, visible), out.clone());
        Ok(out)
    }
}

pub fn parallel_greedy(
    f: &SetFunction,
    x: &AgentSpace,
    p: &IterationAssignment,
    policy: TiePolicy,
) -> Result<Vec<GreedyOutcome>> {
    parallel_greedy_with(f, x, p, policy, &Limits::default())
}

/// Round-by-round parallel greedy: every agent of an iteration decides against
/// all decisions made in earlier iterations, blind to its own round.
///
/// This walks iterations breadth-first and shares no code with
/// [`run_greedy_with`], so the two can be checked against each other.
pub fn parallel_greedy_with(
    f: &SetFunction,
    x: &AgentSpace,
    p: &IterationAssignment,
    policy: TiePolicy,
    limits: &Limits,
) -> Result<Vec<GreedyOutcome>> {
    validate_assignment(p).map_err(|v| Error::input("assignment", v.to_string()))?;
    check_dimensions(f, x, p.n())?;
    let n = p.n();
    let views: Vec<ElementSet> = (1..=n)
        .map(|i| x.mask_of((1..=n).filter(|&j| p.level(j) < p.level(i)).map(|j| j - 1)))
        .collect();
    let normalized = p.normalized();
    let schedule = Schedule {
        depth: normalized.max_level(),
        assignment: IterationAssignment::new(normalized.max_level(), normalized.levels().to_vec()),
    };

    let mut states: BTreeSet<ElementSet> = BTreeSet::from([ElementSet::EMPTY]);
    let mut explored = 0u64;
    for round in p.rounds() {
        let mut next = BTreeSet::new();
        for &state in &states {
            let mut partial = vec![state];
            for &agent in &round {
                let mut options = argmax(f, x, agent - 1, state);
                match policy {
                    TiePolicy::First => options.truncate(1),
                    TiePolicy::Last => {
                        options.drain(..options.len() - 1);
                    }
                    _ => {}
                }
                partial = partial
                    .iter()
                    .flat_map(|s| options.iter().map(move |c| s.union(as_set(*c))))
                    .collect();
                explored += partial.len() as u64;
                if explored > limits.tie_nodes {
                    return Err(Error::capacity(
                        "parallel greedy resolutions",
                        explored,
                        limits.tie_nodes,
                    ));
                }
            }
            next.extend(partial);
        }
        states = next;
    }
    Ok(select(f, states, policy, |s| {
        outcome_from_set(f, x, &views, s, explored, &schedule)
    }))
}

/// Convenience: the worst-case greedy outcome.
pub fn worst_greedy(f: &SetFunction, x: &AgentSpace, g: &InformationGraph) -> Result<GreedyOutcome> {
    worst_greedy_with(f, x, g, &Limits::default())
}

pub fn worst_greedy_with(
    f: &SetFunction,
    x: &AgentSpace,
    g: &InformationGraph,
    limits: &Limits,
) -> Result<GreedyOutcome> {
    Ok(run_greedy_with(f, x, g, TiePolicy::Worst, limits)?.remove(0))
}

/// An optimal action profile and its value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optimum {
    pub profile: Vec<Option<usize>>,
    pub decisions: ElementSet,
    pub value: Rational,
}

pub fn brute_force_optimum(f: &SetFunction, x: &AgentSpace) -> Result<Optimum> {
    brute_force_optimum_with(f, x, &Limits::default())
}

/// Exact maximum over all action profiles. The first maximizer in listed
/// order is returned.
pub fn brute_force_optimum_with(f: &SetFunction, x: &AgentSpace, limits: &Limits) -> Result<Optimum> {
    if x.ground_len() != f.len() {
        return Err(Error::input(
            "agents",
            "decision space was built over a different ground set",
        ));
    }
    let count = x.profile_count();
    if count > limits.profiles {
        return Err(Error::capacity("action profile space", count, limits.profiles));
    }

    fn go(f: &SetFunction, x: &AgentSpace, agent: usize, chosen: ElementSet, best: &mut (Rational, ElementSet, bool)) {
        if agent == x.n() {
            let v = f.evaluate(chosen);
            if !best.2 || v > best.0 {
                *best = (v, chosen, true);
            }
            return;
        }
        let options = x.decisions(agent);
        if options.is_empty() {
            go(f, x, agent + 1, chosen, best);
        }
        for &d in options {
            go(f, x, agent + 1, chosen.with(d), best);
        }
    }

    let mut best = (Rational::zero(), ElementSet::EMPTY, false);
    go(f, x, 0, ElementSet::EMPTY, &mut best);
    let (value, decisions, _) = best;
    let profile = (0..x.n())
        .map(|i| decisions.intersection(x.mask(i)).iter().next())
        .collect();
    Ok(Optimum {
        profile,
        decisions,
        value,
    })
}

/// Worst-case greedy against the optimum on one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioEvaluation {
    pub greedy: GreedyOutcome,
    pub optimum: Optimum,
    pub ratio: Rational,
}

pub fn evaluate_ratio_with(
    f: &SetFunction,
    x: &AgentSpace,
    g: &InformationGraph,
    limits: &Limits,
) -> Result<RatioEvaluation> {
    let optimum = brute_force_optimum_with(f, x, limits)?;
    if optimum.value.is_zero() {
        return Err(Error::UndefinedRatio);
    }
    let greedy = worst_greedy_with(f, x, g, limits)?;
    let ratio = greedy.value / optimum.value;
    Ok(RatioEvaluation { greedy, optimum, ratio })
}

/// `f(x^sol) / f(x^opt)` with the worst tie resolution.
pub fn empirical_ratio(f: &SetFunction, x: &AgentSpace, g: &InformationGraph) -> Result<Rational> {
    Ok(evaluate_ratio_with(f, x, g, &Limits::default())?.ratio)
}
