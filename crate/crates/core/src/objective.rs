//! Exact set functions over a small ground set, agent decision spaces, and
//! exhaustive checks of the normalized / monotone / submodular axioms and of
//! total curvature.

use std::collections::HashMap;
use std::ops::Sub;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::rational::{int, Rational};
use crate::{ElementSet, Error, Limits, Result};

/// Largest ground set a tabular function may be defined on (it stores 2^m values).
pub const TABULAR_MAX_GROUND: usize = 20;
/// Largest target set of a weighted cover function.
pub const COVER_MAX_TARGETS: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectiveKind {
    Tabular,
    Cover,
    CurvatureWitness,
    PAdditiveWitness,
}

impl ObjectiveKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ObjectiveKind::Tabular => "tabular",
            ObjectiveKind::Cover => "cover",
            ObjectiveKind::CurvatureWitness => "curvature-witness",
            ObjectiveKind::PAdditiveWitness => "p-additive-witness",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Objective {
    /// One value per subset, indexed by the subset's bitmask.
    Tabular { values: Vec<Rational> },
    /// `f(A) = sum of w(y) over y covered by some element of A`.
    Cover {
        targets: Vec<String>,
        weights: Vec<Rational>,
        covers: Vec<u128>,
    },
    /// `min(1, |A∩U|)·λ + |A∩U|·(1−λ) + |A∩V|`.
    CurvatureWitness {
        lambda: Rational,
        u: ElementSet,
        v: ElementSet,
    },
    /// `min(1, |A∩U|/p) + |A∩V|/p`.
    PAdditiveWitness { p: u32, u: ElementSet, v: ElementSet },
}

/// A set function `f : 2^S -> Q>=0` with named ground elements.
#[derive(Debug, Clone, PartialEq)]
pub struct SetFunction {
    ground: Vec<String>,
    index: HashMap<String, usize>,
    objective: Objective,
}

fn index_ground(ground: &[String]) -> Result<HashMap<String, usize>> {
    if ground.len() > ElementSet::MAX_ELEMENTS {
        return Err(Error::capacity("ground set", ground.len(), ElementSet::MAX_ELEMENTS));
    }
    let mut index = HashMap::with_capacity(ground.len());
    for (i, id) in ground.iter().enumerate() {
        if index.insert(id.clone(), i).is_some() {
            return Err(Error::input("ground", format!("duplicate element id `{id}`")));
        }
    }
    Ok(index)
}

impl SetFunction {
    fn build(ground: Vec<String>, objective: Objective) -> Result<Self> {
        let index = index_ground(&ground)?;
        Ok(SetFunction {
            ground,
            index,
            objective,
        })
    }

    /// A function given by its full value table; `values[mask]` is `f` of the
    /// subset whose bitmask over `ground` is `mask`.
    pub fn tabular(ground: Vec<String>, values: Vec<Rational>) -> Result<Self> {
        if ground.len() > TABULAR_MAX_GROUND {
            return Err(Error::capacity("tabular ground set", ground.len(), TABULAR_MAX_GROUND));
        }
        let expected = 1usize << ground.len();
        if values.len() != expected {
            return Err(Error::input(
                "objective.values",
                format!("expected {expected} values (one per subset), got {}", values.len()),
            ));
        }
        if let Some(i) = values.iter().position(|v| *v < Rational::zero()) {
            return Err(Error::input(
                "objective.values",
                format!("value at index {i} is negative"),
            ));
        }
        Self::build(ground, Objective::Tabular { values })
    }

    /// Weighted set cover. `covers[i]` lists the targets covered by `ground[i]`.
    pub fn cover(ground: Vec<String>, targets: Vec<(String, Rational)>, covers: Vec<Vec<String>>) -> Result<Self> {
        if targets.len() > COVER_MAX_TARGETS {
            return Err(Error::capacity("target set", targets.len(), COVER_MAX_TARGETS));
        }
        if covers.len() != ground.len() {
            return Err(Error::input(
                "objective.covers",
                "one coverage list per ground element is required",
            ));
        }
        let mut target_index = HashMap::new();
        for (i, (id, w)) in targets.iter().enumerate() {
            if *w < Rational::zero() {
                return Err(Error::input(
                    "objective.weights",
                    format!("weight of `{id}` is negative"),
                ));
            }
            if target_index.insert(id.clone(), i).is_some() {
                return Err(Error::input("objective.weights", format!("duplicate target `{id}`")));
            }
        }
        let mut masks = Vec::with_capacity(covers.len());
        for (element, list) in ground.iter().zip(&covers) {
            let mut mask = 0u128;
            for y in list {
                let t = target_index.get(y).ok_or_else(|| {
                    Error::input(
                        "objective.covers",
                        format!("element `{element}` covers unknown target `{y}`"),
                    )
                })?;
                mask |= 1 << t;
            }
            masks.push(mask);
        }
        let (names, weights) = targets.into_iter().unzip();
        Self::build(
            ground,
            Objective::Cover {
                targets: names,
                weights,
                covers: masks,
            },
        )
    }

    pub fn curvature_witness(ground: Vec<String>, lambda: Rational, u: ElementSet, v: ElementSet) -> Result<Self> {
        if lambda < Rational::zero() || lambda > Rational::one() {
            return Err(Error::input("objective.lambda", "must lie in [0, 1]"));
        }
        check_witness_sets(&ground, u, v)?;
        Self::build(ground, Objective::CurvatureWitness { lambda, u, v })
    }

    pub fn p_additive_witness(ground: Vec<String>, p: u32, u: ElementSet, v: ElementSet) -> Result<Self> {
        if p == 0 {
            return Err(Error::input("objective.p", "must be a positive integer"));
        }
        check_witness_sets(&ground, u, v)?;
        Self::build(ground, Objective::PAdditiveWitness { p, u, v })
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn kind(&self) -> ObjectiveKind {
        match self.objective {
            Objective::Tabular { .. } => ObjectiveKind::Tabular,
            Objective::Cover { .. } => ObjectiveKind::Cover,
            Objective::CurvatureWitness { .. } => ObjectiveKind::CurvatureWitness,
            Objective::PAdditiveWitness { .. } => ObjectiveKind::PAdditiveWitness,
        }
    }

    pub fn full_set(&self) -> ElementSet {
        ElementSet::full(self.ground.len())
    }

    pub fn element_index(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::input("element", format!("unknown element id `{id}`")))
    }

    pub fn element_set<S: AsRef<str>>(&self, ids: &[S]) -> Result<ElementSet> {
        ids.iter()
            .try_fold(ElementSet::EMPTY, |s, id| Ok(s.with(self.element_index(id.as_ref())?)))
    }

    pub fn ids(&self, set: ElementSet) -> Vec<String> {
        set.iter().map(|i| self.ground[i].clone()).collect()
    }

    /// `f(A)`. `set` must be a subset of the ground set.
    pub fn evaluate(&self, set: ElementSet) -> Rational {
        debug_assert!(set.is_subset(self.full_set()), "set outside the ground set");
        match &self.objective {
            Objective::Tabular { values } => values[set.0 as usize],
            Objective::Cover { weights, covers, .. } => {
                let covered = set.iter().fold(0u128, |acc, i| acc | covers[i]);
                let mut total = Rational::zero();
                let mut bits = covered;
                while bits != 0 {
                    let t = bits.trailing_zeros() as usize;
                    total += weights[t];
                    bits &= bits - 1;
                }
                total
            }
            Objective::CurvatureWitness { lambda, u, v } => {
                let nu = set.intersection(*u).len() as i64;
                let nv = set.intersection(*v).len() as i64;
                int(nu.min(1)) * lambda + int(nu) * (Rational::one() - lambda) + int(nv)
            }
            Objective::PAdditiveWitness { p, u, v } => {
                let p = i64::from(*p);
                let nu = set.intersection(*u).len() as i64;
                let nv = set.intersection(*v).len() as i64;
                Rational::new(nu, p).min(Rational::one()) + Rational::new(nv, p)
            }
        }
    }

    /// `f(A | B) = f(A ∪ B) − f(B)`.
    pub fn marginal(&self, add: ElementSet, base: ElementSet) -> Rational {
        self.evaluate(add.union(base)) - self.evaluate(base)
    }

    pub fn evaluate_ids<S: AsRef<str>>(&self, ids: &[S]) -> Result<Rational> {
        Ok(self.evaluate(self.element_set(ids)?))
    }

    pub fn marginal_ids<S: AsRef<str>>(&self, add: &[S], base: &[S]) -> Result<Rational> {
        Ok(self.marginal(self.element_set(add)?, self.element_set(base)?))
    }

    /// Values of `f` on every subset, indexed by bitmask.
    pub fn tabulate(&self, limit: usize) -> Result<Vec<Rational>> {
        if self.len() > limit {
            return Err(Error::capacity("ground set", self.len(), limit));
        }
        if let Objective::Tabular { values } = &self.objective {
            return Ok(values.clone());
        }
        Ok((0..1u64 << self.len()).map(|m| self.evaluate(ElementSet(m))).collect())
    }
}

fn check_witness_sets(ground: &[String], u: ElementSet, v: ElementSet) -> Result<()> {
    let full = ElementSet::full(ground.len());
    if !u.is_subset(full) || !v.is_subset(full) {
        return Err(Error::input(
            "objective",
            "witness sets reference elements outside the ground set",
        ));
    }
    if !u.is_disjoint(v) {
        return Err(Error::input("objective", "witness sets U and V overlap"));
    }
    Ok(())
}

/// Per-agent decision sets `X_1, .., X_n`, stored as ground-element indices in
/// their listed order. An empty set is the null decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentSpace {
    ground_len: usize,
    decisions: Vec<Vec<usize>>,
    masks: Vec<ElementSet>,
}

impl AgentSpace {
    /// Builds the space and checks that the decision sets partition the
    /// ground set of `f` (empty sets allowed).
    pub fn new<S: AsRef<str>>(f: &SetFunction, decisions: &[Vec<S>]) -> Result<Self> {
        let indexed = decisions
            .iter()
            .map(|ids| {
                ids.iter()
                    .map(|id| f.element_index(id.as_ref()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(f.len(), indexed)
    }

    pub fn from_indices(ground_len: usize, decisions: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = ElementSet::EMPTY;
        let mut masks = Vec::with_capacity(decisions.len());
        for (agent, list) in decisions.iter().enumerate() {
            let mut mask = ElementSet::EMPTY;
            for &e in list {
                if e >= ground_len {
                    return Err(Error::input(
                        "agents",
                        format!("agent {} lists element index {e} outside the ground set", agent + 1),
                    ));
                }
                if seen.contains(e) {
                    return Err(Error::input(
                        "agents",
                        format!("partition violated: element {e} appears twice (agent {})", agent + 1),
                    ));
                }
                seen = seen.with(e);
                mask = mask.with(e);
            }
            masks.push(mask);
        }
        if seen != ElementSet::full(ground_len) {
            let missing = ElementSet::full(ground_len).difference(seen);
            return Err(Error::input(
                "agents",
                format!(
                    "partition violated: elements {:?} belong to no agent",
                    missing.iter().collect::<Vec<_>>()
                ),
            ));
        }
        Ok(AgentSpace {
            ground_len,
            decisions,
            masks,
        })
    }

    pub fn n(&self) -> usize {
        self.decisions.len()
    }

    pub fn ground_len(&self) -> usize {
        self.ground_len
    }

    /// Decisions of agent `agent` (0-based).
    pub fn decisions(&self, agent: usize) -> &[usize] {
        &self.decisions[agent]
    }

    pub fn mask(&self, agent: usize) -> ElementSet {
        self.masks[agent]
    }

    pub fn all(&self) -> &[Vec<usize>] {
        &self.decisions
    }

    /// Owner of each ground element.
    pub fn owner(&self, element: usize) -> Option<usize> {
        self.masks.iter().position(|m| m.contains(element))
    }

    /// Union of the decision sets of the given agents.
    pub fn mask_of<I: IntoIterator<Item = usize>>(&self, agents: I) -> ElementSet {
        agents
            .into_iter()
            .fold(ElementSet::EMPTY, |s, a| s.union(self.masks[a]))
    }

    pub fn profile_count(&self) -> u64 {
        self.decisions
            .iter()
            .map(|d| d.len().max(1) as u64)
            .fold(1u64, |acc, k| acc.saturating_mul(k))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "property", rename_all = "kebab-case")]
pub enum Violation {
    /// `f(∅) ≠ 0`.
    Normalized {
        #[serde(with = "crate::rational::serde_exact")]
        value: Rational,
    },
    /// `f(e | A) < 0`.
    Monotone { element: String, set: Vec<String> },
    /// `A ⊆ B` and `f(e | A) < f(e | B)`.
    Submodular {
        element: String,
        smaller: Vec<String>,
        larger: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub normalized: bool,
    pub monotone: bool,
    pub submodular: bool,
    /// Total curvature, present only when all three axioms hold.
    #[serde(with = "crate::rational::serde_exact_opt")]
    pub curvature: Option<Rational>,
    /// First violation found for each failed axiom.
    pub counterexamples: Vec<Violation>,
}

impl PropertyReport {
    pub fn all_hold(&self) -> bool {
        self.normalized && self.monotone && self.submodular
    }
}

pub fn check_properties(f: &SetFunction) -> Result<PropertyReport> {
    check_properties_with(f, &Limits::default())
}

/// Exhaustive axiom scan over all subsets.
///
/// Submodularity is checked in its local form `f(e|A) ≥ f(e|A+g)` for every
/// `A`, `g ∉ A`, `e ∉ A+g`; chaining single-element steps gives every pair
/// `A ⊆ B`, so the scan is exact. Witnesses are reported with `B = A+g`.
pub fn check_properties_with(f: &SetFunction, limits: &Limits) -> Result<PropertyReport> {
    let table = f.tabulate(limits.ground)?;
    let m = f.len();
    let (normalized, monotone, submodular) = match scale_to_integers(&table) {
        Some(scaled) => scan_axioms(&scaled, m, 0i128),
        None => scan_axioms(&table, m, Rational::zero()),
    };

    let mut counterexamples = Vec::new();
    let normalized_ok = normalized.is_none();
    if !normalized_ok {
        counterexamples.push(Violation::Normalized { value: table[0] });
    }
    let monotone_ok = monotone.is_none();
    if let Some((e, a)) = monotone {
        counterexamples.push(Violation::Monotone {
            element: f.ground[e].clone(),
            set: f.ids(a),
        });
    }
    let submodular_ok = submodular.is_none();
    if let Some((e, a, b)) = submodular {
        counterexamples.push(Violation::Submodular {
            element: f.ground[e].clone(),
            smaller: f.ids(a),
            larger: f.ids(b),
        });
    }
    let curvature = (normalized_ok && monotone_ok && submodular_ok).then(|| curvature_from_table(&table, m));
    Ok(PropertyReport {
        normalized: normalized_ok,
        monotone: monotone_ok,
        submodular: submodular_ok,
        curvature,
        counterexamples,
    })
}

type AxiomScan = (
    Option<()>,
    Option<(usize, ElementSet)>,
    Option<(usize, ElementSet, ElementSet)>,
);

fn scan_axioms<T>(table: &[T], m: usize, zero: T) -> AxiomScan
where
    T: Copy + Ord + Sub<Output = T>,
{
    let normalized = (table[0] != zero).then_some(());
    let mut monotone = None;
    let mut submodular = None;
    for a in 0..table.len() {
        let base = ElementSet(a as u64);
        for e in 0..m {
            if base.contains(e) {
                continue;
            }
            if monotone.is_none() && table[base.with(e).0 as usize] < table[a] {
                monotone = Some((e, base));
            }
        }
        if submodular.is_some() {
            if monotone.is_some() {
                break;
            }
            continue;
        }
        'outer: for g in 0..m {
            if base.contains(g) {
                continue;
            }
            let larger = base.with(g);
            for e in 0..m {
                if larger.contains(e) {
                    continue;
                }
                let small_gain = table[base.with(e).0 as usize] - table[a];
                let large_gain = table[larger.with(e).0 as usize] - table[larger.0 as usize];
                if small_gain < large_gain {
                    submodular = Some((e, base, larger));
                    break 'outer;
                }
            }
        }
    }
    (normalized, monotone, submodular)
}

/// Multiplies every value by the common denominator, if that fits in i128.
fn scale_to_integers(table: &[Rational]) -> Option<Vec<i128>> {
    let mut lcm: i128 = 1;
    for v in table {
        let d = i128::from(*v.denom());
        let g = lcm.gcd(&d);
        lcm = lcm.checked_mul(d / g)?;
        if lcm > 1 << 62 {
            return None;
        }
    }
    table
        .iter()
        .map(|v| i128::from(*v.numer()).checked_mul(lcm / i128::from(*v.denom())))
        .collect()
}

fn curvature_from_table(table: &[Rational], m: usize) -> Rational {
    let mut worst = Rational::zero();
    for e in 0..m {
        let single = table[1 << e];
        if single <= Rational::zero() {
            continue;
        }
        let mut least = single;
        for a in 0..table.len() {
            if a >> e & 1 == 1 {
                continue;
            }
            let gain = table[a | 1 << e] - table[a];
            if gain < least {
                least = gain;
            }
        }
        let lambda = Rational::one() - least / single;
        if lambda > worst {
            worst = lambda;
        }
    }
    worst
}

pub fn total_curvature(f: &SetFunction) -> Result<Rational> {
    total_curvature_with(f, &Limits::default())
}

/// Smallest λ with `f(e|A) ≥ (1−λ)·f(e)` for all `e` and `A ⊆ S∖{e}`;
/// zero when no element has positive value.
pub fn total_curvature_with(f: &SetFunction, limits: &Limits) -> Result<Rational> {
    let report = check_properties_with(f, limits)?;
    report.curvature.ok_or_else(|| {
        Error::input(
            "objective",
            "total curvature needs a normalized, monotone, submodular function",
        )
    })
}
