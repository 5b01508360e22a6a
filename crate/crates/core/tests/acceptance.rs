//! Acceptance run. Prints one line per criterion and exits non-zero if any
//! criterion fails or overruns its time budget.
//!
//! Every comparison is exact rational or integer equality; there are no
//! floating-point tolerances anywhere in this target.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;

use pargreedy::adversarial::{curvature_witness, p_additive_witness};
use pargreedy::bounds::{check_chain_with, curvature_eta_bounds, graph_ratio_bounds, min_edges_bound, rho};
use pargreedy::graphmetrics::{clique_cover_number, clique_number, independence_number};
use pargreedy::greedy::{
    empirical_ratio, evaluate_ratio_with, parallel_greedy_with, run_greedy_with, GreedyOutcome, TiePolicy,
};
use pargreedy::objective::{check_properties_with, total_curvature, AgentSpace, SetFunction};
use pargreedy::rational::{int, ratio};
use pargreedy::structure::{
    ceil_div, complement_turan, earliest_schedule, induced_graph, is_one_mod, optimal_assignment, optimal_graph,
    turan_graph, InformationGraph, IterationAssignment,
};
use pargreedy::suites::{random_assignment, random_cover, random_suite, rng, CoverShape};
use pargreedy::{Error, Limits, Rational};

const TOLERANCE: &str = "exact";

struct Check {
    pass: bool,
    detail: String,
}

impl Check {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Check {
            pass,
            detail: detail.into(),
        }
    }
}

type Criterion = (u32, &'static str, Duration, fn() -> Check);

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "rho formula", secs(1), c1_rho),
        (2, "optimal constructions", secs(1), c2_constructions),
        (3, "non-optimal assignments", secs(1), c3_non_optimal),
        (4, "equalities at small scale", secs(120), c4_small_scale),
        (5, "independence vs depth", secs(120), c5_independence_depth),
        (6, "curvature endpoints and witnesses", secs(60), c6_curvature),
        (7, "p-additive witnesses", secs(60), c7_p_additive),
        (8, "edge-count bound", secs(1), c8_min_edges),
        (9, "property suites", secs(300), c9_properties),
        (10, "Turan extremality", secs(120), c10_turan),
    ];
    println!("tolerance: {TOLERANCE} (rational equality)");
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let check = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let pass = check.pass && in_time;
        failed += usize::from(!pass);
        println!(
            "criterion {id:>2} {name:<34} {} [{:.2?} / {:?}{}] {}",
            if pass { "PASS" } else { "FAIL" },
            elapsed,
            budget,
            if in_time { "" } else { ", over budget" },
            check.detail,
        );
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn c1_rho() -> Check {
    let mut bad = Vec::new();
    let mut expect = |n: usize, q: usize, want: Rational| {
        let got = rho(n, q).unwrap();
        if got != want {
            bad.push(format!("rho({n},{q})={got}, want {want}"));
        }
    };
    expect(5, 2, ratio(1, 3));
    expect(5, 3, ratio(1, 3));
    for n in 2..=12 {
        expect(n, n, ratio(1, 2));
    }
    for n in 1..=12 {
        expect(n, 1, ratio(1, n as i64));
    }
    Check::new(
        bad.is_empty(),
        if bad.is_empty() {
            "24 values".into()
        } else {
            bad.join("; ")
        },
    )
}

fn c2_constructions() -> Check {
    let edges = |g: InformationGraph| g.edge_count();
    let got = [
        edges(optimal_graph(5, 2).unwrap()),
        edges(optimal_graph(5, 3).unwrap()),
        edges(induced_graph(&optimal_assignment(5, 2).unwrap()).unwrap()),
        edges(induced_graph(&optimal_assignment(5, 3).unwrap()).unwrap()),
    ];
    Check::new(
        got == [4, 4, 6, 8],
        format!(
            "optimal_graph(5,2)={} optimal_graph(5,3)={} induced(P*(5,2))={} induced(P*(5,3))={} edges",
            got[0], got[1], got[2], got[3]
        ),
    )
}

/// The required value is `upper = 1/4` reached through `α = 4`. Both listed
/// shapes put three agents in one iteration, so `α = 3` and `upper = 1/3`;
/// the ratio of 1/4 is only pinned by the sibling-refined upper bound meeting
/// the clique-cover lower bound, which is reported alongside.
fn c3_non_optimal() -> Check {
    let cases = [(2, vec![1, 1, 1, 2, 2]), (3, vec![1, 1, 1, 2, 3])];
    let mut pass = true;
    let mut parts = Vec::new();
    for (q, levels) in cases {
        let p = IterationAssignment::new(q, levels.clone());
        let g = induced_graph(&p).unwrap();
        let alpha = independence_number(&g).unwrap().value;
        let b = graph_ratio_bounds(&g).unwrap();
        pass &= alpha == 4 && b.upper == ratio(1, 4);
        let refined = b.refined_upper.map_or("none".to_string(), |r| r.to_string());
        parts.push(format!(
            "P={levels:?} q={q}: alpha={alpha} upper={} refined_upper={refined} lower={}",
            b.upper, b.lower
        ));
    }
    Check::new(pass, parts.join("; "))
}

fn chain_shape(n: usize) -> CoverShape {
    CoverShape {
        max_decisions: if n <= 8 { 3 } else { 2 },
        ..CoverShape::default()
    }
}

fn c4_small_scale() -> Check {
    let limits = Limits::default();
    let pairs: Vec<(usize, usize)> = (1..=12).flat_map(|n| (1..=n).map(move |q| (n, q))).collect();
    let results: Vec<Result<(usize, usize), String>> = pairs
        .par_iter()
        .map(|&(n, q)| {
            let r = ceil_div(n, q);
            if is_one_mod(n, q) {
                let alpha = independence_number(&optimal_graph(n, q).unwrap()).unwrap().value;
                if alpha != r {
                    return Err(format!("alpha(optimal_graph({n},{q}))={alpha}, want {r}"));
                }
                let mut gen = rng((n * 100 + q) as u64);
                let shape = chain_shape(n);
                let mut violations = 0;
                for _ in 0..100 {
                    let (f, x) = random_cover(&mut gen, n, &shape);
                    let report = check_chain_with(&f, &x, q, &limits).map_err(|e| format!("({n},{q}): {e}"))?;
                    violations += usize::from(!report.end_to_end() || !report.holds());
                }
                if violations > 0 {
                    return Err(format!("({n},{q}): {violations} chain violations"));
                }
                Ok((1, 0))
            } else {
                let g = complement_turan(n, r).unwrap();
                let alpha = independence_number(&g).unwrap().value;
                let theta = clique_cover_number(&g).unwrap().value;
                let lower = graph_ratio_bounds(&g).unwrap().lower;
                let want = ratio(1, r as i64 + 1);
                if alpha != r || theta != r || lower != want || rho(n, q).unwrap() != want {
                    return Err(format!("({n},{q}): alpha={alpha} theta={theta} lower={lower}, r={r}"));
                }
                Ok((0, 1))
            }
        })
        .collect();
    let errors: Vec<String> = results.iter().filter_map(|r| r.clone().err()).collect();
    let (chain, turan) = results.iter().flatten().fold((0, 0), |(a, b), (c, d)| (a + c, b + d));
    if errors.is_empty() {
        Check::new(
            true,
            format!("{chain} (n,q) pairs with 100 chain instances each, {turan} complement-Turan pairs"),
        )
    } else {
        Check::new(false, errors.join("; "))
    }
}

fn c5_independence_depth() -> Check {
    let mut total = 0u64;
    let mut counterexamples = Vec::new();
    for n in 1..=6usize {
        let codes = 1u64 << (n * (n - 1) / 2);
        let bad: Vec<u64> = (0..codes)
            .into_par_iter()
            .filter(|&code| {
                let g = InformationGraph::from_code(n, code);
                let q = earliest_schedule(&g).depth;
                independence_number(&g).unwrap().value < ceil_div(n, q)
            })
            .collect();
        total += codes;
        counterexamples.extend(bad.into_iter().map(|c| format!("n={n} code={c}")));
    }
    Check::new(
        counterexamples.is_empty(),
        format!(
            "{total} graphs, {} counterexamples {}",
            counterexamples.len(),
            counterexamples.join(" ")
        ),
    )
}

fn c6_curvature() -> Check {
    let mut bad = Vec::new();
    for n in 1..=12 {
        for q in 1..=n {
            let r = ceil_div(n, q) as i64;
            let zero = curvature_eta_bounds(n, q, int(0)).unwrap();
            let one = curvature_eta_bounds(n, q, int(1)).unwrap();
            if (zero.upper, zero.lower) != (int(1), int(1)) || one.lower != ratio(1, r + 1) {
                bad.push(format!("eta({n},{q})"));
            }
        }
    }
    let lambdas = [int(0), ratio(1, 4), ratio(1, 2), ratio(3, 4), int(1)];
    let mut witnesses = 0;
    for a in 1..=4usize {
        let mut graphs = vec![InformationGraph::edgeless(a), complement_turan(2 * a, a).unwrap()];
        if a >= 2 {
            graphs.push(InformationGraph::star(a));
        }
        for g in &graphs {
            for &lambda in &lambdas {
                let w = curvature_witness(g, lambda).unwrap();
                let want = (int(a as i64) - int(a as i64 - 1) * lambda) / int(a as i64);
                let got = empirical_ratio(&w.f, &w.x, &w.g).unwrap();
                let curvature = total_curvature(&w.f).unwrap();
                witnesses += 1;
                if got != want || curvature != lambda || w.predicted_ratio != want {
                    bad.push(format!(
                        "alpha={a} n={} lambda={lambda}: ratio {got} curvature {curvature}",
                        g.n()
                    ));
                }
            }
        }
    }
    Check::new(
        bad.is_empty(),
        format!("78 eta endpoint pairs, {witnesses} witnesses {}", bad.join("; ")),
    )
}

fn c7_p_additive() -> Check {
    let mut bad = Vec::new();
    let mut count = 0;
    for a in 1..=5usize {
        for p in 1..=a.min(3) {
            for (g, want) in [
                (InformationGraph::star(a), ratio(p as i64, a as i64 + 1)),
                (InformationGraph::edgeless(a), ratio(p as i64, a as i64)),
            ] {
                let w = p_additive_witness(&g, p).unwrap();
                let got = empirical_ratio(&w.f, &w.x, &w.g).unwrap();
                count += 1;
                if got != want || w.predicted_ratio != want {
                    bad.push(format!("a={a} p={p} n={}: {got}, want {want}", g.n()));
                }
            }
        }
    }
    Check::new(bad.is_empty(), format!("{count} witnesses {}", bad.join("; ")))
}

fn c8_min_edges() -> Check {
    let mut bad = Vec::new();
    let mut count = 0;
    for n in 2..=30 {
        for k in 2..=n {
            count += 1;
            let bound = min_edges_bound(n, k).unwrap();
            let edges = complement_turan(n, k).unwrap().edge_count() as u64;
            if bound != edges {
                bad.push(format!("({n},{k}): bound {bound}, graph {edges}"));
            }
        }
    }
    Check::new(bad.is_empty(), format!("{count} (n,k) pairs {}", bad.join("; ")))
}

/// Everything compared in the differential check; the count of explored
/// resolutions is bookkeeping and differs by construction.
type OutcomeKey = (Vec<Option<usize>>, u64, Rational, Vec<Rational>, Vec<usize>);

fn key(outcomes: &[GreedyOutcome]) -> Vec<OutcomeKey> {
    outcomes
        .iter()
        .map(|o| {
            (
                o.profile.clone(),
                o.decisions.0,
                o.value,
                o.per_agent_marginal.clone(),
                o.schedule.assignment.levels().to_vec(),
            )
        })
        .collect()
}

fn c9_properties() -> Check {
    // Property scans cover every generated objective; n = 6 with three
    // decisions per agent can reach 18 elements.
    let wide = Limits {
        ground: 18,
        ..Limits::default()
    };
    let limits = Limits::default();

    let suite = random_suite(2024, 1000, 6).unwrap();
    let lower_rows: Vec<Result<bool, String>> = suite
        .par_iter()
        .map(|e| {
            let lower = graph_ratio_bounds(&e.g).map_err(|err| err.to_string())?.lower;
            match evaluate_ratio_with(&e.f, &e.x, &e.g, &limits) {
                Ok(eval) => {
                    if eval.ratio < lower {
                        Err(format!("{} on {}: {} < {lower}", e.id, e.graph_id, eval.ratio))
                    } else {
                        Ok(true)
                    }
                }
                Err(Error::UndefinedRatio) => Ok(false),
                Err(err) => Err(format!("{}: {err}", e.id)),
            }
        })
        .collect();
    let below: Vec<String> = lower_rows.iter().filter_map(|r| r.clone().err()).collect();
    let evaluated = lower_rows.iter().filter(|r| matches!(r, Ok(true))).count();

    let mut gen = rng(4242);
    let mut differential: Vec<(SetFunction, AgentSpace, IterationAssignment)> = Vec::with_capacity(500);
    for _ in 0..500 {
        let n = gen.random_range(1..=6);
        let q = gen.random_range(1..=n);
        let p = random_assignment(&mut gen, n, q);
        let (f, x) = random_cover(&mut gen, n, &CoverShape::default());
        differential.push((f, x, p));
    }
    let policies = [
        TiePolicy::First,
        TiePolicy::Last,
        TiePolicy::Worst,
        TiePolicy::Best,
        TiePolicy::All,
    ];
    let mismatches: Vec<String> = differential
        .par_iter()
        .enumerate()
        .flat_map_iter(|(k, (f, x, p))| {
            let g = induced_graph(p).unwrap();
            policies.iter().filter_map(move |&policy| {
                let general = run_greedy_with(f, x, &g, policy, &limits).map(|o| key(&o));
                let rounds = parallel_greedy_with(f, x, p, policy, &limits).map(|o| key(&o));
                match (general, rounds) {
                    (Ok(a), Ok(b)) if a == b => None,
                    (a, b) => Some(format!("instance {k} {policy:?}: {:?} vs {:?}", a.is_ok(), b.is_ok())),
                }
            })
        })
        .collect();

    let objectives: Vec<&SetFunction> = suite
        .iter()
        .map(|e| &e.f)
        .chain(differential.iter().map(|(f, _, _)| f))
        .collect();
    let failing: Vec<String> = objectives
        .par_iter()
        .enumerate()
        .filter_map(|(k, f)| match check_properties_with(f, &wide) {
            Ok(report) if report.all_hold() => None,
            Ok(report) => Some(format!("objective {k}: {:?}", report.counterexamples)),
            Err(err) => Some(format!("objective {k}: {err}")),
        })
        .collect();

    let pass = below.is_empty() && mismatches.is_empty() && failing.is_empty();
    let mut detail = format!(
        "(a) {evaluated} rows evaluated, {} with f(opt)=0, {} below 1/(theta+1); \
         (b) 500 instances x 5 policies, {} mismatches; (c) {} objectives, {} failing",
        1000 - evaluated - below.len(),
        below.len(),
        mismatches.len(),
        objectives.len(),
        failing.len(),
    );
    for extra in below.iter().chain(&mismatches).chain(&failing).take(5) {
        detail.push_str("; ");
        detail.push_str(extra);
    }
    Check::new(pass, detail)
}

fn c10_turan() -> Check {
    let mut bad = Vec::new();
    let mut total = 0u64;
    for n in 1..=7usize {
        let codes = 1u64 << (n * (n - 1) / 2);
        total += codes;
        // Largest edge count among graphs with clique number at most r.
        let best = (0..codes)
            .into_par_iter()
            .map(|code| {
                let g = InformationGraph::from_code(n, code);
                let omega = clique_number(&g).unwrap().value;
                let mut best = [0usize; 4];
                for (r, slot) in best.iter_mut().enumerate().skip(1) {
                    if omega <= r {
                        *slot = g.edge_count();
                    }
                }
                best
            })
            .reduce(|| [0; 4], |a, b| std::array::from_fn(|r| a[r].max(b[r])));
        for (r, &extremal) in best.iter().enumerate().take(3.min(n) + 1).skip(1) {
            let t = turan_graph(n, r).unwrap();
            let omega = clique_number(&t).unwrap().value;
            if omega > r || t.edge_count() != extremal {
                bad.push(format!(
                    "T({n},{r}): {} edges, omega {omega}, extremal {extremal}",
                    t.edge_count()
                ));
            }
        }
    }
    Check::new(bad.is_empty(), format!("{total} graphs {}", bad.join("; ")))
}
