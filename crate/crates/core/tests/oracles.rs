mod common;

use rand::RngCore;

use pargreedy::adversarial::{curvature_witness, p_additive_witness, sequential_half_witness};
use pargreedy::bounds::{curvature_graph_bounds, graph_ratio_bounds, min_edges_bound, rho};
use pargreedy::graphmetrics::{
    clique_cover_number, clique_number, has_p_sibling, has_sibling_condition, independence_number, is_clique_cover,
    pseudo_independence_number,
};
use pargreedy::greedy::{brute_force_optimum, empirical_ratio, run_greedy, worst_greedy, TiePolicy};
use pargreedy::objective::{check_properties, total_curvature, AgentSpace, SetFunction, Violation};
use pargreedy::rational::{int, ratio};
use pargreedy::structure::{
    complement_turan, earliest_schedule, induced_graph, optimal_assignment, optimal_graph, turan_graph,
    InformationGraph, IterationAssignment,
};
use pargreedy::suites::{random_cover, random_graph, rng, CoverShape};
use pargreedy::ElementSet;

fn ids(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn edges(g: &InformationGraph) -> Vec<(usize, usize)> {
    g.edges().to_vec()
}

#[test]
fn cover_fixture_values() {
    let f = SetFunction::cover(
        ids(&["a", "b"]),
        vec![("y1".into(), int(1)), ("y2".into(), int(2))],
        vec![ids(&["y1"]), ids(&["y1", "y2"])],
    )
    .unwrap();
    assert_eq!(f.evaluate_ids(&["a", "b"]).unwrap(), int(3));
    assert_eq!(f.evaluate_ids(&["a"]).unwrap(), int(1));
    assert_eq!(f.marginal_ids(&["a"], &["b"]).unwrap(), int(0));
    assert_eq!(f.marginal_ids(&["b"], &[]).unwrap(), int(3));
}

#[test]
fn supermodular_table_witness() {
    let f = SetFunction::tabular(ids(&["a", "b"]), vec![int(0), int(1), int(1), int(3)]).unwrap();
    let report = check_properties(&f).unwrap();
    assert!(!report.submodular);
    assert!(report.counterexamples.contains(&Violation::Submodular {
        element: "b".into(),
        smaller: vec![],
        larger: ids(&["a"]),
    }));
    assert_eq!(common::literal_axioms(&f), (true, true, false));
}

#[test]
fn witness_curvature_recovers_parameter() {
    let w = curvature_witness(&InformationGraph::edgeless(3), ratio(1, 2)).unwrap();
    assert_eq!(total_curvature(&w.f).unwrap(), ratio(1, 2));
    assert_eq!(common::curvature(&w.f), ratio(1, 2));
}

#[test]
fn assignment_and_graph_examples() {
    assert_eq!(optimal_assignment(5, 2).unwrap().levels(), &[1, 1, 2, 2, 2]);
    assert_eq!(optimal_assignment(5, 3).unwrap().levels(), &[1, 1, 2, 2, 3]);
    let g = induced_graph(&IterationAssignment::new(2, vec![1, 1, 2, 2, 2])).unwrap();
    assert_eq!(edges(&g), vec![(1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]);
    assert_eq!(
        induced_graph(&IterationAssignment::new(3, vec![1, 1, 2, 2, 3]))
            .unwrap()
            .edge_count(),
        8
    );

    let g52 = optimal_graph(5, 2).unwrap();
    assert_eq!(edges(&g52), vec![(1, 3), (1, 5), (2, 4), (2, 5)]);
    assert_eq!(earliest_schedule(&g52).assignment.levels(), &[1, 1, 2, 2, 2]);
    let g53 = optimal_graph(5, 3).unwrap();
    assert_eq!(edges(&g53), vec![(1, 3), (1, 5), (2, 4), (3, 5)]);
    assert!(earliest_schedule(&g53).depth <= 3);
    assert_eq!(edges(&optimal_graph(3, 3).unwrap()), vec![(1, 2), (1, 3), (2, 3)]);

    assert_eq!(turan_graph(5, 2).unwrap().edge_count(), 6);
    assert_eq!(
        edges(&complement_turan(5, 2).unwrap()),
        vec![(1, 3), (1, 5), (2, 4), (3, 5)]
    );
}

#[test]
fn invariant_examples() {
    let ct = complement_turan(5, 2).unwrap();
    assert_eq!(clique_number(&ct).unwrap().value, 3);
    assert_eq!(independence_number(&ct).unwrap().value, 2);
    assert_eq!(independence_number(&optimal_graph(5, 2).unwrap()).unwrap().value, 3);
    // The induced graph of (1,1,2,2,2) is K_{2,3}: its cliques are edges, so
    // five vertices need three of them.
    let k23 = induced_graph(&IterationAssignment::new(2, vec![1, 1, 2, 2, 2])).unwrap();
    assert_eq!(clique_cover_number(&k23).unwrap().value, 3);
    assert_eq!(common::theta(&k23), 3);

    assert!(has_sibling_condition(&ct).unwrap().is_some());
    assert!(has_sibling_condition(&InformationGraph::path(2)).unwrap().is_some());
    assert_eq!(
        pseudo_independence_number(&InformationGraph::complete(4), 2)
            .unwrap()
            .value,
        2
    );
    assert!(has_p_sibling(&ct, 1).unwrap().is_some());
    let star = has_p_sibling(&InformationGraph::star(4), 2).unwrap().unwrap();
    assert_eq!((star.w, star.set.clone()), (5, vec![1, 2, 3, 4]));
}

#[test]
fn invariants_match_enumeration_on_all_small_graphs() {
    for n in 1..=5usize {
        for code in 0..1u64 << (n * (n - 1) / 2) {
            let g = InformationGraph::from_code(n, code);
            let a = independence_number(&g).unwrap();
            assert_eq!(a.value, common::alpha(&g), "{g:?}");
            assert!(common::is_independent(&g, a.vertices()));
            let w = clique_number(&g).unwrap();
            assert_eq!(w.value, common::omega(&g));
            assert!(common::is_clique(&g, w.vertices()));
            let t = clique_cover_number(&g).unwrap();
            assert_eq!(t.value, common::theta(&g), "{g:?}");
            assert!(is_clique_cover(&g, t.parts()));
            assert_eq!(
                earliest_schedule(&g).assignment.levels(),
                common::earliest_levels(&g).as_slice()
            );
            for p in 1..=2 {
                let expected = common::max_pseudo_independent_sets(&g, p)[0].len();
                assert_eq!(pseudo_independence_number(&g, p).unwrap().value, expected);
                assert_eq!(
                    has_p_sibling(&g, p).unwrap().is_some(),
                    common::has_p_sibling(&g, p),
                    "{g:?} p={p}"
                );
            }
        }
    }
}

#[test]
fn sibling_matches_enumeration() {
    let mut r = rng(5);
    for _ in 0..200 {
        let n = 1 + (r.next_u32() % 7) as usize;
        let g = random_graph(&mut r, n, 0.4);
        let expected = common::has_p_sibling(&g, 1);
        assert_eq!(has_sibling_condition(&g).unwrap().is_some(), expected, "{g:?}");
    }
}

#[test]
fn greedy_and_optimum_match_enumeration() {
    let mut r = rng(17);
    let shape = CoverShape::default();
    for k in 0..300 {
        let n = 1 + k % 6;
        let g = random_graph(&mut r, n, [0.2, 0.5, 0.8][k % 3]);
        let (f, x) = random_cover(&mut r, n, &shape);
        for s in 0..1u64 << f.len().min(10) {
            assert_eq!(Some(f.evaluate(ElementSet(s))), common::cover_value(&f, ElementSet(s)));
        }
        let finals = common::greedy_finals(&f, &x, &g);
        let all: Vec<ElementSet> = run_greedy(&f, &x, &g, TiePolicy::All)
            .unwrap()
            .iter()
            .map(|o| o.decisions)
            .collect();
        assert_eq!(all, finals.iter().copied().collect::<Vec<_>>());
        let worst = finals.iter().map(|&s| f.evaluate(s)).min().unwrap();
        let best = finals.iter().map(|&s| f.evaluate(s)).max().unwrap();
        assert_eq!(worst_greedy(&f, &x, &g).unwrap().value, worst);
        assert_eq!(run_greedy(&f, &x, &g, TiePolicy::Best).unwrap()[0].value, best);
        assert_eq!(brute_force_optimum(&f, &x).unwrap().value, common::optimum(&f, &x));
    }
}

#[test]
fn properties_and_curvature_match_literal_definitions() {
    let mut r = rng(23);
    let shape = CoverShape {
        max_decisions: 2,
        ..CoverShape::default()
    };
    for k in 0..60 {
        let (f, _) = random_cover(&mut r, 1 + k % 5, &shape);
        let report = check_properties(&f).unwrap();
        let literal = common::literal_axioms(&f);
        assert_eq!((report.normalized, report.monotone, report.submodular), literal);
        assert_eq!(total_curvature(&f).unwrap(), common::curvature(&f));
    }
    // Random tables are usually not submodular; both checks must agree.
    for _ in 0..200 {
        let values = (0..8)
            .map(|s| if s == 0 { int(0) } else { int((r.next_u32() % 5) as i64) })
            .collect();
        let f = SetFunction::tabular(ids(&["a", "b", "c"]), values).unwrap();
        let report = check_properties(&f).unwrap();
        assert_eq!(
            (report.normalized, report.monotone, report.submodular),
            common::literal_axioms(&f)
        );
    }
}

#[test]
fn greedy_tie_fixture() {
    let w = sequential_half_witness();
    assert_eq!(worst_greedy(&w.f, &w.x, &w.g).unwrap().value, int(1));
    assert_eq!(run_greedy(&w.f, &w.x, &w.g, TiePolicy::Best).unwrap()[0].value, int(2));
    let opt = brute_force_optimum(&w.f, &w.x).unwrap();
    assert_eq!(opt.value, int(2));
    assert_eq!(w.f.ids(opt.decisions), ids(&["a", "b'"]));
    assert_eq!(empirical_ratio(&w.f, &w.x, &w.g).unwrap(), ratio(1, 2));
    assert_eq!(total_curvature(&w.f).unwrap(), int(1));
}

#[test]
fn witness_examples() {
    let edgeless3 = InformationGraph::edgeless(3);
    let w = curvature_witness(&edgeless3, ratio(1, 2)).unwrap();
    assert_eq!(w.predicted_ratio, ratio(2, 3));
    assert_eq!(brute_force_optimum(&w.f, &w.x).unwrap().value, int(3));
    assert_eq!(empirical_ratio(&w.f, &w.x, &w.g).unwrap(), ratio(2, 3));

    let w = curvature_witness(&InformationGraph::edgeless(4), int(1)).unwrap();
    assert_eq!(empirical_ratio(&w.f, &w.x, &w.g).unwrap(), ratio(1, 4));

    let one = p_additive_witness(&edgeless3, 1).unwrap();
    let lambda_one = curvature_witness(&edgeless3, int(1)).unwrap();
    assert_eq!(empirical_ratio(&one.f, &one.x, &one.g).unwrap(), ratio(1, 3));
    assert_eq!(
        empirical_ratio(&lambda_one.f, &lambda_one.x, &lambda_one.g).unwrap(),
        ratio(1, 3)
    );

    let star = p_additive_witness(&InformationGraph::star(4), 2).unwrap();
    assert_eq!(star.predicted_ratio, ratio(2, 5));
    assert_eq!(empirical_ratio(&star.f, &star.x, &star.g).unwrap(), ratio(2, 5));
    let flat = p_additive_witness(&InformationGraph::edgeless(4), 2).unwrap();
    assert_eq!(empirical_ratio(&flat.f, &flat.x, &flat.g).unwrap(), ratio(1, 2));
}

#[test]
fn curvature_witness_agents_are_indifferent() {
    for lambda in [int(0), ratio(1, 3), int(1)] {
        let w = curvature_witness(&complement_turan(6, 3).unwrap(), lambda).unwrap();
        for agent in 1..=w.g.n() {
            let options = w.x.decisions(agent - 1);
            if options.len() != 2 {
                continue;
            }
            let seen: Vec<usize> = w.g.in_neighbors(agent).to_vec();
            let visible = w.x.mask_of(seen.iter().map(|j| j - 1));
            // Any subset of the visible decisions.
            let mut sub = visible.0;
            loop {
                let base = ElementSet(sub);
                let gains: Vec<_> = options
                    .iter()
                    .map(|&e| w.f.marginal(ElementSet::singleton(e), base))
                    .collect();
                assert_eq!(gains[0], gains[1]);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & visible.0;
            }
        }
    }
}

#[test]
fn bound_examples() {
    assert_eq!(rho(5, 2).unwrap(), ratio(1, 3));
    assert_eq!(rho(5, 3).unwrap(), ratio(1, 3));
    assert_eq!(rho(1, 1).unwrap(), int(1));
    let b = graph_ratio_bounds(&complement_turan(5, 2).unwrap()).unwrap();
    assert_eq!(
        (b.upper, b.lower, b.refined_upper),
        (ratio(1, 2), ratio(1, 3), Some(ratio(1, 3)))
    );
    let b = graph_ratio_bounds(&InformationGraph::edgeless(4)).unwrap();
    assert_eq!((b.upper, b.lower, b.refined_upper), (ratio(1, 4), ratio(1, 5), None));
    let b = curvature_graph_bounds(&complement_turan(6, 3).unwrap(), ratio(1, 2)).unwrap();
    assert_eq!((b.upper, b.lower), (ratio(2, 3), ratio(4, 7)));
    assert_eq!(
        min_edges_bound(5, 2).unwrap(),
        complement_turan(5, 2).unwrap().edge_count() as u64
    );
    assert_eq!(min_edges_bound(6, 3).unwrap(), 3);
}

#[test]
fn decision_space_rejects_shared_elements() {
    let f = SetFunction::tabular(ids(&["a", "b"]), vec![int(0), int(1), int(1), int(2)]).unwrap();
    assert!(AgentSpace::new(&f, &[vec!["a"], vec!["a", "b"]]).is_err());
    assert!(AgentSpace::new(&f, &[vec!["a"], vec!["b"]]).is_ok());
}
