//! Closed-form competitive-ratio bounds.

mod certify;
mod chain;

pub use certify::{certify, certify_with, BoundsReport, ReportRow, SuiteEntry, Summary, Verdict};
pub use chain::{check_chain, check_chain_with, telescoping_chain, ChainReport, ChainStep, Relation};

use num_traits::One;
use serde::Serialize;

use crate::graphmetrics::ExactSearch;
use crate::rational::{int, ratio, Rational};
use crate::structure::{ceil_div, is_one_mod, InformationGraph};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundSource {
    /// `1/α` above, `1/(θ+1)` below, `1/(α+1)` above under the sibling condition.
    IndependenceCliqueCover,
    /// The curvature form of the graph bounds.
    CurvatureGraph,
    /// The curvature form in terms of `r = ⌈n/q⌉`.
    CurvatureParallel,
}

impl BoundSource {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundSource::IndependenceCliqueCover => "independence-clique-cover",
            BoundSource::CurvatureGraph => "curvature-graph",
            BoundSource::CurvatureParallel => "curvature-parallel",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatioBounds {
    #[serde(with = "crate::rational::serde_exact")]
    pub upper: Rational,
    #[serde(with = "crate::rational::serde_exact")]
    pub lower: Rational,
    #[serde(with = "crate::rational::serde_exact_opt")]
    pub refined_upper: Option<Rational>,
    pub source: BoundSource,
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

fn check_lambda(lambda: Rational) -> Result<()> {
    if lambda < int(0) || lambda > Rational::one() {
        return Err(Error::input("lambda", "must lie in [0, 1]"));
    }
    Ok(())
}

/// Best achievable competitive ratio with `n` agents and `q` iterations:
/// `1/r` if `n ≡ 1 (mod q)`, else `1/(r+1)`, where `r = ⌈n/q⌉`.
pub fn rho(n: usize, q: usize) -> Result<Rational> {
    check_nq(n, q)?;
    let r = ceil_div(n, q) as i64;
    Ok(if is_one_mod(n, q) { ratio(1, r) } else { ratio(1, r + 1) })
}

pub fn graph_ratio_bounds(g: &InformationGraph) -> Result<RatioBounds> {
    graph_ratio_bounds_with(g, &ExactSearch::default())
}

pub fn graph_ratio_bounds_with(g: &InformationGraph, search: &ExactSearch) -> Result<RatioBounds> {
    let alpha = search.independence_number(g)?.value as i64;
    let theta = search.clique_cover_number(g)?.value as i64;
    let refined_upper = search.has_sibling_condition(g)?.map(|_| ratio(1, alpha + 1));
    Ok(RatioBounds {
        upper: ratio(1, alpha),
        lower: ratio(1, theta + 1),
        refined_upper,
        source: BoundSource::IndependenceCliqueCover,
    })
}

/// Upper `(a − (a−1)λ)/a`, lower `(c − (c−1)λ)/(c + λ)`.
fn curvature_pair(a: i64, c: i64, lambda: Rational) -> (Rational, Rational) {
    let upper = (int(a) - int(a - 1) * lambda) / int(a);
    let lower = (int(c) - int(c - 1) * lambda) / (int(c) + lambda);
    (upper, lower)
}

pub fn curvature_graph_bounds(g: &InformationGraph, lambda: Rational) -> Result<RatioBounds> {
    curvature_graph_bounds_with(g, lambda, &ExactSearch::default())
}

/// Bounds for objectives of total curvature `lambda`, with `a = α(G)` above
/// and `c = θ(G)` below.
///
/// A β-strictly monotone objective is covered by `lambda = 1 − β`.
pub fn curvature_graph_bounds_with(
    g: &InformationGraph,
    lambda: Rational,
    search: &ExactSearch,
) -> Result<RatioBounds> {
    check_lambda(lambda)?;
    let alpha = search.independence_number(g)?.value as i64;
    let theta = search.clique_cover_number(g)?.value as i64;
    let (upper, lower) = curvature_pair(alpha, theta, lambda);
    Ok(RatioBounds {
        upper,
        lower,
        refined_upper: None,
        source: BoundSource::CurvatureGraph,
    })
}

/// Curvature bounds over all feasible graphs for `n` agents and `q`
/// iterations, both in terms of `r = ⌈n/q⌉`.
pub fn curvature_eta_bounds(n: usize, q: usize, lambda: Rational) -> Result<RatioBounds> {
    check_nq(n, q)?;
    check_lambda(lambda)?;
    let r = ceil_div(n, q) as i64;
    let (upper, lower) = curvature_pair(r, r, lambda);
    Ok(RatioBounds {
        upper,
        lower,
        refined_upper: None,
        source: BoundSource::CurvatureParallel,
    })
}

/// Fewest edges of a graph on `n` vertices whose guarantee is at least
/// `1/(k+1)`: `k` disjoint cliques of near-equal size, `n mod k` of them with
/// `⌈n/k⌉` vertices and the rest with `⌊n/k⌋`.
pub fn min_edges_bound(n: usize, k: usize) -> Result<u64> {
    if k < 2 {
        return Err(Error::input("k", "must be at least 2"));
    }
    let pairs = |m: u64| m * m.saturating_sub(1) / 2;
    let (n, k) = (n as u64, k as u64);
    let big = n % k;
    Ok(big * pairs(n.div_ceil(k)) + (k - big) * pairs(n / k))
}
