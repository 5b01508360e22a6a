//! Seeded instance generators for certification and testing.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::adversarial::{curvature_witness, p_additive_witness, sequential_half_witness, WitnessInstance};
use crate::bounds::SuiteEntry;
use crate::objective::{AgentSpace, SetFunction};
use crate::rational::{int, Rational};
use crate::structure::{complement_turan, optimal_graph, InformationGraph, IterationAssignment};
use crate::Result;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of random weighted-cover instances.
#[derive(Debug, Clone, Copy)]
pub struct CoverShape {
    pub max_decisions: usize,
    pub max_targets: usize,
    pub max_weight: i64,
    /// Probability that an agent has no decisions at all.
    pub empty_agent: f64,
}

impl Default for CoverShape {
    fn default() -> Self {
        CoverShape {
            max_decisions: 3,
            max_targets: 6,
            max_weight: 5,
            empty_agent: 0.05,
        }
    }
}

/// A random weighted cover over `n` agents. Elements are named `a{i}_{k}`
/// for the `k`-th decision of agent `i`.
pub fn random_cover(rng: &mut impl Rng, n: usize, shape: &CoverShape) -> (SetFunction, AgentSpace) {
    let targets: Vec<(String, Rational)> = (1..=rng.random_range(1..=shape.max_targets))
        .map(|t| (format!("y{t}"), int(rng.random_range(1..=shape.max_weight))))
        .collect();
    let mut ground = Vec::new();
    let mut covers = Vec::new();
    let mut decisions = Vec::with_capacity(n);
    for i in 1..=n {
        let count = if rng.random_bool(shape.empty_agent) {
            0
        } else {
            rng.random_range(1..=shape.max_decisions)
        };
        let mut mine = Vec::with_capacity(count);
        for k in 1..=count {
            mine.push(ground.len());
            ground.push(format!("a{i}_{k}"));
            let covered = targets
                .iter()
                .filter(|_| rng.random_bool(0.4))
                .map(|(id, _)| id.clone())
                .collect();
            covers.push(covered);
        }
        decisions.push(mine);
    }
    let len = ground.len();
    let f = SetFunction::cover(ground, targets, covers).expect("generated cover is well formed");
    let x = AgentSpace::from_indices(len, decisions).expect("generated decisions partition the ground set");
    (f, x)
}

/// Each pair is an edge with probability `density`.
pub fn random_graph(rng: &mut impl Rng, n: usize, density: f64) -> InformationGraph {
    let edges: Vec<(usize, usize)> = InformationGraph::pairs(n)
        .filter(|_| rng.random_bool(density))
        .collect();
    InformationGraph::new(n, edges).expect("generated pairs are canonical")
}

/// A uniformly random order-preserving assignment into `1..=q` (not
/// necessarily using every iteration).
pub fn random_assignment(rng: &mut impl Rng, n: usize, q: usize) -> IterationAssignment {
    let mut levels: Vec<usize> = (0..n).map(|_| rng.random_range(1..=q)).collect();
    levels.sort_unstable();
    IterationAssignment::new(q, levels)
}

fn witness_entry(id: String, graph_id: String, w: WitnessInstance) -> SuiteEntry {
    SuiteEntry {
        id,
        graph_id,
        f: w.f,
        x: w.x,
        g: w.g,
        predicted: Some(w.predicted_ratio),
    }
}

/// Graphs with independence number `a` used for witnesses.
fn witness_graphs(a: usize) -> Result<Vec<(String, InformationGraph)>> {
    let mut out = vec![
        (format!("edgeless-{a}"), InformationGraph::edgeless(a)),
        (format!("complement-turan-{}-{a}", 2 * a), complement_turan(2 * a, a)?),
    ];
    if a >= 2 {
        out.push((format!("star-{a}"), InformationGraph::star(a)));
    }
    Ok(out)
}

/// Curvature witnesses for every `α ≤ alpha_max` and listed `λ`, p-additive
/// witnesses for `p ≤ min(α, 3)`, and the two-agent 1/2 instance.
pub fn witness_suite(alpha_max: usize, lambdas: &[Rational]) -> Result<Vec<SuiteEntry>> {
    let mut suite = vec![witness_entry(
        "sequential-half".into(),
        "complete-2".into(),
        sequential_half_witness(),
    )];
    for a in 1..=alpha_max {
        for (gid, g) in witness_graphs(a)? {
            for &lambda in lambdas {
                let w = curvature_witness(&g, lambda)?;
                suite.push(witness_entry(
                    format!("curvature-{gid}-lambda-{lambda}"),
                    gid.clone(),
                    w,
                ));
            }
            for p in 1..=a.min(3) {
                let w = p_additive_witness(&g, p)?;
                suite.push(witness_entry(format!("p-additive-{gid}-p-{p}"), gid.clone(), w));
            }
        }
    }
    Ok(suite)
}

/// `count` random cover instances with `n ≤ n_max` agents and a positive
/// optimum, alternating between optimal graphs for a random `q` and random
/// graphs (feasible for their own depth).
pub fn random_suite(seed: u64, count: usize, n_max: usize) -> Result<Vec<SuiteEntry>> {
    let mut rng = rng(seed);
    let shape = CoverShape::default();
    let mut suite = Vec::with_capacity(count);
    for k in 0..count {
        let n = rng.random_range(1..=n_max.max(1));
        let (graph_id, g) = if k % 2 == 0 {
            let q = rng.random_range(1..=n);
            (format!("optimal-{n}-{q}"), optimal_graph(n, q)?)
        } else {
            let density = *[0.2, 0.5, 0.8].choose(&mut rng).expect("non-empty");
            (format!("random-{n}-{k}"), random_graph(&mut rng, n, density))
        };
        // Redraw until some element has value, so the ratio is defined.
        let (f, x) = loop {
            let (f, x) = random_cover(&mut rng, n, &shape);
            if f.evaluate(f.full_set()) > int(0) {
                break (f, x);
            }
        };
        suite.push(SuiteEntry {
            id: format!("random-{k}"),
            graph_id,
            f,
            x,
            g,
            predicted: None,
        });
    }
    Ok(suite)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::certify;
    use crate::objective::check_properties;
    use crate::rational::ratio;

    #[test]
    fn random_cover_is_deterministic() {
        let a = random_cover(&mut rng(7), 4, &CoverShape::default());
        let b = random_cover(&mut rng(7), 4, &CoverShape::default());
        assert_eq!(a, b);
        assert!(check_properties(&a.0).unwrap().all_hold());
    }

    #[test]
    fn random_assignments_are_valid() {
        let mut r = rng(3);
        for _ in 0..50 {
            let p = random_assignment(&mut r, 6, 3);
            assert!(crate::structure::validate_assignment(&p).is_ok());
        }
    }

    #[test]
    fn small_witness_suite_certifies() {
        let suite = witness_suite(2, &[int(0), ratio(1, 2), int(1)]).unwrap();
        let report = certify(&suite);
        assert_eq!(
            report.summary.failures,
            0,
            "{:?}",
            report.rows.iter().find(|r| r.reason.is_some())
        );
        assert_eq!(report.summary.errors, 0);
        assert_eq!(report.summary.witness_equalities, suite.len());
    }

    #[test]
    fn small_random_suite_certifies() {
        let report = certify(&random_suite(11, 30, 5).unwrap());
        assert_eq!(report.summary.failures, 0);
        assert_eq!(report.summary.rows, 30);
    }
}
