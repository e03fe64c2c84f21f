mod common;

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symplan::generators::{self, corpus};
use symplan::pddl::{self, Proposition};
use symplan::tilg::*;

fn gripper(n: usize) -> pddl::LiftedProblem {
    pddl::load(generators::GRIPPER_DOMAIN, &generators::gripper(n)).unwrap()
}

#[test]
fn gripper_two_balls_hand_count() {
    let p = gripper(2);
    let g = build_tilg(&p, p.initial_state());
    // 6 objects + 7 initial propositions + 2 unachieved goals
    assert_eq!(g.num_vertices(), 15);
    // at-robby 1, adjacent 4, free 2, at 4, goal at 4
    assert_eq!(g.edges.len(), 15);
    assert_eq!((g.num_types, g.num_predicates), (4, 5));
    assert_eq!(g.feature_maxes(), (4, 9));
    let goal = p.prop_by_name("at", &["ball1", "roomb"]).unwrap();
    let v = g
        .vertices
        .iter()
        .find(|v| v.payload == Payload::Proposition(goal.clone()))
        .unwrap();
    assert_eq!(v.status, STATUS_UNACHIEVED_GOAL);
    // class of `at` is |T| + 1, color = status + 10 * class
    assert_eq!(v.class, 5);
    let colors = g.colors();
    let idx = g.vertices.iter().position(|x| x == v).unwrap();
    assert_eq!(colors[idx], 1 + 10 * 5);
    assert!(g.vertices[..6].iter().all(|v| v.status == STATUS_OBJECT));
}

#[test]
fn status_partition_matches_definition() {
    for fx in corpus() {
        let p = fx.load();
        let goal: BTreeSet<&Proposition> = p.goal().iter().collect();
        for s in common::reachable_states(&p, Some(3), 60) {
            let g = build_tilg(&p, &s);
            assert!(g.is_bipartite());
            let with = |status: u8| -> BTreeSet<&Proposition> {
                g.vertices
                    .iter()
                    .filter(|v| v.status == status)
                    .filter_map(|v| match &v.payload {
                        Payload::Proposition(q) => Some(q),
                        Payload::Object(_) => None,
                    })
                    .collect()
            };
            let state: BTreeSet<&Proposition> = s.props().iter().collect();
            assert_eq!(with(STATUS_NON_GOAL), state.difference(&goal).copied().collect());
            assert_eq!(with(STATUS_UNACHIEVED_GOAL), goal.difference(&state).copied().collect());
            assert_eq!(with(STATUS_ACHIEVED_GOAL), state.intersection(&goal).copied().collect());
            assert_eq!(with(STATUS_OBJECT).len(), 0);
            let objects = g.vertices.iter().filter(|v| v.status == STATUS_OBJECT).count();
            assert_eq!(objects, p.objects().len());
            for v in &g.vertices {
                match v.kind() {
                    VertexKind::Object => assert!(v.class < g.num_types),
                    VertexKind::Proposition => assert!(v.class >= g.num_types && v.class < g.num_classes()),
                }
            }
        }
    }
}

#[test]
fn all_goals_achieved_means_no_unachieved_vertices() {
    let p = gripper(1);
    let s: pddl::State = p.goal().iter().cloned().chain(p.static_state().props().iter().cloned()).collect();
    let g = build_tilg(&p, &s);
    assert!(g.vertices.iter().all(|v| v.status != STATUS_UNACHIEVED_GOAL));
    assert_eq!(g.vertices.iter().filter(|v| v.status == STATUS_ACHIEVED_GOAL).count(), 1);
}

#[test]
fn repeated_argument_gives_parallel_edges() {
    let domain = "(define (domain d) (:requirements :strips) (:predicates (eq ?a ?b)) )";
    let problem = "(define (problem p) (:domain d) (:objects a b) (:init (eq a a)) (:goal (and)))";
    let p = pddl::load(domain, problem).unwrap();
    let g = build_tilg(&p, p.initial_state());
    assert_eq!(g.num_vertices(), 3);
    let labels: Vec<(u32, u32, u32)> = g.edges.iter().map(|e| (e.object, e.proposition, e.label)).collect();
    assert_eq!(labels, vec![(0, 2, 1), (0, 2, 2)]);
    assert_eq!(g.to_colored_graph().num_edges(), 2);
}

#[test]
fn canonical_bytes_examples() {
    let p = gripper(2);
    let a = build_tilg(&p, p.initial_state());
    let b = build_tilg(&p, p.initial_state());
    assert_eq!(a.canonical_bytes(), b.canonical_bytes());
    let mut c = a.clone();
    c.edges[0].label += 1;
    assert_ne!(a.canonical_bytes(), c.canonical_bytes());
    let empty = TilgGraph {
        vertices: vec![],
        edges: vec![],
        num_types: 1,
        num_predicates: 0,
    };
    assert_eq!(empty.canonical_bytes(), vec![0u8; 8]);
    assert_eq!(a.canonical_bytes().len(), 8 + 8 * 15 + 12 * 15);
}

#[test]
fn color_packing_is_injective_on_random_tuples() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let spec = ColorEncodingSpec::new(vec![4, 137, 10, 1000]).unwrap();
    assert_eq!(spec.offsets(), &[0, 1, 4, 5]);
    let mut seen = std::collections::HashMap::new();
    let mut collisions = 0;
    for _ in 0..10_000 {
        let f: Vec<u64> = spec.maxima().iter().map(|&m| rng.gen_range(0..m)).collect();
        let c = spec.encode(0, &f).unwrap();
        if let Some(prev) = seen.insert(c, f.clone()) {
            if prev != f {
                collisions += 1;
            }
        }
    }
    assert_eq!(collisions, 0);
}

#[test]
fn identical_features_identical_colors() {
    let p = gripper(3);
    let g = build_tilg(&p, p.initial_state());
    let colors = g.colors();
    for (i, a) in g.vertices.iter().enumerate() {
        for (j, b) in g.vertices.iter().enumerate() {
            assert_eq!((a.status, a.class) == (b.status, b.class), colors[i] == colors[j]);
        }
    }
}

#[test]
fn statics_present_along_trajectories() {
    let p = pddl::load(generators::LOGISTICS_DOMAIN, &generators::logistics(2, 1)).unwrap();
    assert!(!p.static_state().is_empty());
    for s in common::reachable_states(&p, Some(4), 300) {
        // strip statics from the state; the graph must still carry them
        let fluent: pddl::State = s.props().iter().filter(|q| !p.is_static(q.predicate)).cloned().collect();
        let g = build_tilg(&p, &fluent);
        for q in p.static_state().props() {
            assert!(g.vertices.iter().any(|v| v.payload == Payload::Proposition(q.clone())));
        }
        assert_eq!(g, build_tilg(&p, &s));
    }
}

#[test]
fn permuted_graph_is_isomorphic() {
    let p = gripper(2);
    let g = build_tilg(&p, p.initial_state());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let perm = common::graphs::random_permutation(&mut rng, g.num_vertices());
    let h = g.permuted(&perm);
    assert!(symplan::symmetry::are_isomorphic(&g.to_colored_graph(), &h.to_colored_graph()));
    assert_eq!(h.to_colored_graph(), g.to_colored_graph().permuted(&perm));
}
