//! Checks theoretical bounds against brute-force ratios on a suite of
//! instances.

use rayon::prelude::*;
use serde::Serialize;

use crate::graphmetrics::ExactSearch;
use crate::greedy::evaluate_ratio_with;
use crate::objective::{check_properties_with, total_curvature_with, AgentSpace, SetFunction};
use crate::rational::{int, Rational};
use crate::structure::InformationGraph;
use crate::{Error, Limits, Result};

use super::{curvature_graph_bounds_with, graph_ratio_bounds_with};

/// One instance to certify. `predicted` is set for witness instances, whose
/// ratio must match it exactly.
#[derive(Debug, Clone)]
pub struct SuiteEntry {
    pub id: String,
    pub graph_id: String,
    pub f: SetFunction,
    pub x: AgentSpace,
    pub g: InformationGraph,
    pub predicted: Option<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The row could not be evaluated, e.g. an instance above a cap.
    Error,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Error => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub id: String,
    pub graph_id: String,
    #[serde(with = "crate::rational::serde_exact_opt")]
    pub empirical: Option<Rational>,
    #[serde(with = "crate::rational::serde_exact_opt")]
    pub curvature: Option<Rational>,
    #[serde(with = "crate::rational::serde_exact_opt")]
    pub lower: Option<Rational>,
    #[serde(with = "crate::rational::serde_exact_opt")]
    pub upper: Option<Rational>,
    #[serde(with = "crate::rational::serde_exact_opt")]
    pub refined_upper: Option<Rational>,
    #[serde(with = "crate::rational::serde_exact_opt")]
    pub predicted: Option<Rational>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub rows: usize,
    pub failures: usize,
    pub errors: usize,
    pub capacity_errors: usize,
    /// Witness rows whose empirical ratio equals the predicted one.
    pub witness_equalities: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub rows: Vec<ReportRow>,
    pub summary: Summary,
}

pub fn certify(suite: &[SuiteEntry]) -> BoundsReport {
    certify_with(suite, &Limits::default())
}

/// Certifies every entry. Rows are evaluated in parallel and reported in
/// input order. Only the lower bound and witness equality decide the verdict;
/// upper bounds are reported for reference.
pub fn certify_with(suite: &[SuiteEntry], limits: &Limits) -> BoundsReport {
    let outcomes: Vec<(ReportRow, bool)> = suite.par_iter().map(|e| certify_entry(e, limits)).collect();
    let mut summary = Summary {
        rows: outcomes.len(),
        ..Summary::default()
    };
    let mut rows = Vec::with_capacity(outcomes.len());
    for (row, capacity) in outcomes {
        match row.verdict {
            Verdict::Pass => {}
            Verdict::Fail => summary.failures += 1,
            Verdict::Error => {
                summary.errors += 1;
                summary.capacity_errors += usize::from(capacity);
            }
        }
        if row.predicted.is_some() && row.predicted == row.empirical {
            summary.witness_equalities += 1;
        }
        rows.push(row);
    }
    BoundsReport { rows, summary }
}

struct Measured {
    empirical: Rational,
    curvature: Rational,
    lower: Rational,
    upper: Rational,
    refined_upper: Option<Rational>,
    violation: Option<String>,
}

fn measure(e: &SuiteEntry, limits: &Limits) -> Result<Measured> {
    let search = ExactSearch::new(limits.graph);
    let properties = check_properties_with(&e.f, limits)?;
    if let Some(v) = properties.counterexamples.first() {
        return Err(Error::input(
            "objective",
            format!("not normalized, monotone and submodular: {v:?}"),
        ));
    }
    let curvature = total_curvature_with(&e.f, limits)?;
    let plain = graph_ratio_bounds_with(&e.g, &search)?;
    let curved = curvature_graph_bounds_with(&e.g, curvature, &search)?;
    let empirical = evaluate_ratio_with(&e.f, &e.x, &e.g, limits)?.ratio;
    let violation = if empirical < curved.lower {
        Some(format!(
            "empirical ratio {empirical} is below the lower bound {}",
            curved.lower
        ))
    } else if empirical > int(1) {
        Some(format!("empirical ratio {empirical} exceeds 1"))
    } else {
        match e.predicted {
            Some(p) if p != empirical => Some(format!("empirical ratio {empirical} differs from predicted {p}")),
            _ => None,
        }
    };
    Ok(Measured {
        empirical,
        curvature,
        lower: curved.lower,
        upper: curved.upper,
        refined_upper: plain.refined_upper,
        violation,
    })
}

fn certify_entry(e: &SuiteEntry, limits: &Limits) -> (ReportRow, bool) {
    let mut row = ReportRow {
        id: e.id.clone(),
        graph_id: e.graph_id.clone(),
        empirical: None,
        curvature: None,
        lower: None,
        upper: None,
        refined_upper: None,
        predicted: e.predicted,
        verdict: Verdict::Error,
        reason: None,
    };
    match measure(e, limits) {
        Ok(m) => {
            row.empirical = Some(m.empirical);
            row.curvature = Some(m.curvature);
            row.lower = Some(m.lower);
            row.upper = Some(m.upper);
            row.refined_upper = m.refined_upper;
            row.verdict = if m.violation.is_some() {
                Verdict::Fail
            } else {
                Verdict::Pass
            };
            row.reason = m.violation;
            (row, false)
        }
        Err(err) => {
            let capacity = err.is_capacity();
            row.reason = Some(err.to_string());
            (row, capacity)
        }
    }
}
