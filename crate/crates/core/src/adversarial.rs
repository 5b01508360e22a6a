//! Worst-case instances whose greedy-to-optimal ratio meets an upper bound
//! exactly.

use num_traits::One;
use serde::Serialize;

use crate::graphmetrics::ExactSearch;
use crate::objective::{AgentSpace, SetFunction};
use crate::rational::{int, ratio, Rational};
use crate::structure::InformationGraph;
use crate::{ElementSet, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundRef {
    /// `(α − (α−1)λ)/α` from a maximum independent set.
    CurvatureUpper,
    /// `p/(α_p + 1)` from a maximum p-pseudo-independent set with a sibling.
    PAdditiveSiblingUpper,
    /// `p/α_p` without a sibling.
    PAdditiveUpper,
    /// Two agents in sequence, ratio 1/2.
    SequentialHalf,
}

impl BoundRef {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundRef::CurvatureUpper => "curvature-upper",
            BoundRef::PAdditiveSiblingUpper => "p-additive-sibling-upper",
            BoundRef::PAdditiveUpper => "p-additive-upper",
            BoundRef::SequentialHalf => "sequential-half",
        }
    }
}

/// An instance together with the ratio its construction predicts.
#[derive(Debug, Clone)]
pub struct WitnessInstance {
    pub f: SetFunction,
    pub x: AgentSpace,
    pub g: InformationGraph,
    pub predicted_ratio: Rational,
    pub bound_ref: BoundRef,
}

fn names(prefix: &str, count: usize) -> impl Iterator<Item = String> + '_ {
    (1..=count).map(move |k| format!("{prefix}{k}"))
}

pub fn curvature_witness(g: &InformationGraph, lambda: Rational) -> Result<WitnessInstance> {
    curvature_witness_with(g, lambda, &ExactSearch::default())
}

/// `f(x) = min(1, |x∩U|)·λ + |x∩U|·(1−λ) + |x∩V|` with `X_i = {u_k, v_k}` for
/// the `k`-th member of a maximum independent set and `X_i = ∅` elsewhere.
pub fn curvature_witness_with(g: &InformationGraph, lambda: Rational, search: &ExactSearch) -> Result<WitnessInstance> {
    if lambda < int(0) || lambda > Rational::one() {
        return Err(Error::input("lambda", "must lie in [0, 1]"));
    }
    let independent = search.independence_number(g)?;
    let members = independent.vertices();
    let a = members.len();
    let ground: Vec<String> = names("u", a).chain(names("v", a)).collect();
    let u = ElementSet::full(a);
    let v = ElementSet::full(2 * a).difference(u);
    let mut decisions = vec![Vec::new(); g.n()];
    for (k, &agent) in members.iter().enumerate() {
        decisions[agent - 1] = vec![k, a + k];
    }
    let f = SetFunction::curvature_witness(ground, lambda, u, v)?;
    let x = AgentSpace::from_indices(f.len(), decisions)?;
    let a = a as i64;
    Ok(WitnessInstance {
        f,
        x,
        g: g.clone(),
        predicted_ratio: (int(a) - int(a - 1) * lambda) / int(a),
        bound_ref: BoundRef::CurvatureUpper,
    })
}

pub fn p_additive_witness(g: &InformationGraph, p: usize) -> Result<WitnessInstance> {
    p_additive_witness_with(g, p, &ExactSearch::default())
}

/// `f(A) = min(1, |A∩U|/p) + |A∩V|/p` over a maximum `p`-pseudo-independent
/// set `J`. Member `J_k` chooses between `u_k` and `v_k`; a `p`-sibling, when
/// one exists, chooses between `u_{a+1}` and a zero-value decision `t`.
pub fn p_additive_witness_with(g: &InformationGraph, p: usize, search: &ExactSearch) -> Result<WitnessInstance> {
    let a = search.pseudo_independence_number(g, p)?.value;
    if p > a {
        return Err(Error::input(
            "p",
            format!("p = {p} exceeds the p-pseudo-independence number {a}"),
        ));
    }
    let sibling = search.has_p_sibling(g, p)?;
    let (members, extra) = match &sibling {
        Some(s) => (s.set.clone(), Some(s.w)),
        None => (search.pseudo_independence_number(g, p)?.vertices().to_vec(), None),
    };
    let us = a + usize::from(extra.is_some());
    let mut ground: Vec<String> = names("u", us).chain(names("v", a)).collect();
    let u = ElementSet::full(us);
    let v = ElementSet::full(us + a).difference(u);
    let mut decisions = vec![Vec::new(); g.n()];
    for (k, &agent) in members.iter().enumerate() {
        decisions[agent - 1] = vec![k, us + k];
    }
    if let Some(w) = extra {
        ground.push("t".to_string());
        decisions[w - 1] = vec![a, us + a];
    }
    let p32 = u32::try_from(p).map_err(|_| Error::input("p", "too large"))?;
    let f = SetFunction::p_additive_witness(ground, p32, u, v)?;
    let x = AgentSpace::from_indices(f.len(), decisions)?;
    let (predicted_ratio, bound_ref) = match extra {
        Some(_) => (ratio(p as i64, a as i64 + 1), BoundRef::PAdditiveSiblingUpper),
        None => (ratio(p as i64, a as i64), BoundRef::PAdditiveUpper),
    };
    Ok(WitnessInstance {
        f,
        x,
        g: g.clone(),
        predicted_ratio,
        bound_ref,
    })
}

/// Unit-weight cover over targets `y1, y2`: `a` covers `y1`, `b` and `b'`
/// cover `y2`; `X_1 = {a, b}`, `X_2 = {b'}`, complete graph on two agents.
/// Agent 1 is indifferent between `a` and `b`; picking `b` leaves agent 2
/// nothing.
pub fn sequential_half_witness() -> WitnessInstance {
    let f = SetFunction::cover(
        vec!["a".into(), "b".into(), "b'".into()],
        vec![("y1".into(), int(1)), ("y2".into(), int(1))],
        vec![vec!["y1".into()], vec!["y2".into()], vec!["y2".into()]],
    )
    .expect("fixture is well formed");
    let x = AgentSpace::from_indices(3, vec![vec![0, 1], vec![2]]).expect("fixture is a partition");
    WitnessInstance {
        f,
        x,
        g: InformationGraph::complete(2),
        predicted_ratio: ratio(1, 2),
        bound_ref: BoundRef::SequentialHalf,
    }
}
