mod common;

use common::dense::{dense_oracle, oracle_cases, small_metadata};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symplan::generators::{self, corpus};
use symplan::gnn::*;
use symplan::pddl;
use symplan::pruning::make_state_key;
use symplan::symmetry::{are_isomorphic, color_refinement};
use symplan::tilg::{build_tilg, Payload, TilgEdge, TilgGraph, TilgVertex};

fn toy_graph() -> TilgGraph {
    TilgGraph {
        vertices: vec![
            TilgVertex {
                status: 3,
                class: 0,
                payload: Payload::Object(pddl::ObjId(0)),
            },
            TilgVertex {
                status: 0,
                class: 1,
                payload: Payload::Proposition(pddl::Proposition::new(pddl::PredId(0), vec![pddl::ObjId(0)])),
            },
        ],
        edges: vec![TilgEdge {
            object: 0,
            proposition: 1,
            label: 1,
        }],
        num_types: 1,
        num_predicates: 1,
    }
}

fn toy_weights() -> ModelWeights<f64> {
    ModelWeights::from_json_str(include_str!("data/toy_weights.json")).unwrap()
}

#[test]
fn featurize_examples() {
    let p = pddl::load(generators::GRIPPER_DOMAIN, &generators::gripper(1)).unwrap();
    let s: pddl::State = p.goal().iter().cloned().collect();
    let g = build_tilg(&p, &s);
    let f = featurize::<f64>(&g).unwrap();
    assert_eq!(f.d_in, 4 + 4 + 5);
    for v in 0..f.rows {
        assert_eq!(f.row(v).iter().sum::<f64>(), 2.0);
    }
    let ball = p.object_id("ball1").unwrap().index();
    let t = g.vertices[ball].class as usize;
    assert_eq!(f.row(ball)[3], 1.0);
    assert_eq!(f.row(ball)[4 + t], 1.0);
    let goal = g
        .vertices
        .iter()
        .position(|v| v.payload == Payload::Proposition(p.goal()[0].clone()))
        .unwrap();
    assert_eq!(g.vertices[goal].status, 2);
    assert_eq!(f.row(goal)[2], 1.0);
    assert_eq!(f.row(goal)[4 + 4 + p.goal()[0].predicate.index()], 1.0);

    let empty = TilgGraph {
        vertices: vec![],
        edges: vec![],
        num_types: 2,
        num_predicates: 3,
    };
    let f = featurize::<f32>(&empty).unwrap();
    assert_eq!((f.rows, f.d_in, f.data.len()), (0, 9, 0));

    let mut bad = toy_graph();
    bad.vertices[1].class = 7;
    assert!(matches!(featurize::<f64>(&bad), Err(FeatureError::ClassOutOfRange { vertex: 1, .. })));
}

#[test]
fn hand_written_weights_toy_graph() {
    // object row e3+e4, proposition row e0+e5:
    // h_obj = relu([1, 1] + [1, 0]) = [2, 1], h_prop = relu([0, 1] + [0, 0]) = [0, 1]
    let (z, h) = forward(&toy_weights(), &toy_graph()).unwrap();
    assert_eq!(z.0, vec![2.0, 2.0]);
    assert_eq!(h, 0.5);
}

#[test]
fn zero_weights() {
    let p = pddl::load(generators::GRIPPER_DOMAIN, &generators::gripper(2)).unwrap();
    let meta = ModelMetadata::for_domain(p.domain(), 8, 2);
    let mut w = ModelWeights::<f64>::random(meta, 0, 0.0);
    w.head_bias = 1.25;
    let g = build_tilg(&p, p.initial_state());
    let (z, h) = forward(&w, &g).unwrap();
    assert!(z.0.iter().all(|&x| x == 0.0));
    assert_eq!(h, 1.25);
    // bias alone propagates: relu(b) per vertex, summed
    for l in &mut w.layers {
        l.bias = vec![0.5; 8];
    }
    let (z, _) = forward(&w, &g).unwrap();
    assert!(z.0.iter().all(|&x| x == 0.5 * g.num_vertices() as f64));
}

#[test]
fn forward_matches_dense_oracle() {
    for (w, g) in oracle_cases(20) {
        let (z, h) = forward(&w, &g).unwrap();
        let (zo, ho) = dense_oracle(&w, &g);
        for (a, b) in z.0.iter().zip(&zo) {
            assert!((a - b).abs() <= 1e-10, "{a} vs {b}");
        }
        assert!((h - ho).abs() <= 1e-10);
    }
}

#[test]
fn weights_round_trip_and_validation() {
    let w = toy_weights();
    let text = w.to_json_string();
    assert_eq!(ModelWeights::<f64>::from_json_str(&text).unwrap(), w);

    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["format_version"] = 9.into();
    assert!(matches!(ModelWeights::<f64>::from_json_str(&v.to_string()), Err(WeightError::Version { found: 9, .. })));

    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["layers"][0]["self"][1] = serde_json::json!([0, 0, 1]);
    let err = ModelWeights::<f64>::from_json_str(&v.to_string()).unwrap_err();
    assert!(matches!(err, WeightError::Shape { layer: 0, .. }), "{err}");

    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["metadata"]["activation"] = "tanh".into();
    assert!(matches!(ModelWeights::<f64>::from_json_str(&v.to_string()), Err(WeightError::Convention { .. })));

    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["head"]["weight"] = serde_json::json!([1.0]);
    assert!(matches!(ModelWeights::<f64>::from_json_str(&v.to_string()), Err(WeightError::Head(_))));

    // the toy weights do not fit gripper
    let p = pddl::load(generators::GRIPPER_DOMAIN, &generators::gripper(1)).unwrap();
    assert!(matches!(w.check_domain(p.domain()), Err(WeightError::DomainMismatch { .. })));
    let fitted = ModelWeights::<f64>::random(ModelMetadata::for_domain(p.domain(), 4, 2), 1, 0.5);
    fitted.check_domain(p.domain()).unwrap();
    // f32 load of the same file
    let w32 = ModelWeights::<f32>::from_json_str(&text).unwrap();
    let (z, h) = forward(&w32, &toy_graph()).unwrap();
    assert_eq!((z.0, h), (vec![2.0f32, 2.0], 0.5f32));
}

#[test]
fn layer_dimension_mismatch_names_layer() {
    let mut w = toy_weights();
    w.layers.push(w.layers[0].clone());
    w.metadata.num_layers = 2;
    assert!(matches!(forward(&w, &toy_graph()), Err(ForwardError::Dimension { layer: 1, .. })));
}

#[test]
fn permutation_invariance_is_bitwise() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for fx in corpus().into_iter().step_by(3) {
        let p = fx.load();
        let w64 = ModelWeights::<f64>::random(ModelMetadata::for_domain(p.domain(), 16, 3), 3, 0.4);
        let w32 = ModelWeights::<f32>::from_json_str(&w64.to_json_string()).unwrap();
        let g = build_tilg(&p, p.initial_state());
        let (z64, h64) = forward(&w64, &g).unwrap();
        let (z32, _) = forward(&w32, &g).unwrap();
        assert!(h64.is_finite());
        for _ in 0..20 {
            let perm = common::graphs::random_permutation(&mut rng, g.num_vertices());
            let q = g.permuted(&perm);
            assert_eq!(forward(&w64, &q).unwrap().0, z64);
            assert_eq!(forward(&w32, &q).unwrap().0, z32);
            let (zu, _) = forward_with(&w64, &q, Accumulation::VertexOrder).unwrap();
            for (a, b) in zu.0.iter().zip(&z64.0) {
                assert!((a - b).abs() <= 1e-6);
            }
            assert_eq!(make_state_key(&zu.0, 3).unwrap(), make_state_key(&z64.0, 3).unwrap());
        }
    }
}

#[test]
fn heuristic_finite_on_every_fixture_state() {
    for fx in corpus() {
        let p = fx.load();
        let w = ModelWeights::<f64>::random(ModelMetadata::for_domain(p.domain(), 8, 2), 5, 0.5);
        for s in common::reachable_states(&p, Some(2), 30) {
            let (z, h) = forward(&w, &build_tilg(&p, &s)).unwrap();
            assert!(h.is_finite());
            assert_eq!(z.0.len(), 8);
        }
    }
}

const RING_DOMAIN: &str = "(define (domain ring) (:requirements :strips :typing) (:types node)
  (:predicates (next ?a - node ?b - node)))";

fn ring_problem(edges: &[(usize, usize)]) -> TilgGraph {
    let init: String = edges.iter().map(|(a, b)| format!("(next n{a} n{b}) ")).collect();
    let text = format!(
        "(define (problem r) (:domain ring) (:objects n1 n2 n3 n4 n5 n6 - node) (:init {init}) (:goal (and)))"
    );
    let p = pddl::load(RING_DOMAIN, &text).unwrap();
    build_tilg(&p, p.initial_state())
}

#[test]
fn wl_embedding_is_invariant_and_incomplete() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for fx in corpus().into_iter().step_by(2) {
        let p = fx.load();
        let g = build_tilg(&p, p.initial_state());
        let e = wl_embedding(&g, 3);
        assert_eq!(e.len(), WL_EMBEDDING_LEN);
        assert_eq!(e[0], g.num_vertices() as u64);
        for _ in 0..10 {
            let perm = common::graphs::random_permutation(&mut rng, g.num_vertices());
            assert_eq!(wl_embedding(&g.permuted(&perm), 3), e);
        }
    }
    // a directed 6-cycle and two directed triangles: 1-WL equivalent, not isomorphic
    let cycle = ring_problem(&[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1)]);
    let triangles = ring_problem(&[(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4)]);
    assert!(!are_isomorphic(&cycle.to_colored_graph(), &triangles.to_colored_graph()));
    assert_eq!(
        color_refinement(&cycle.to_colored_graph()).cell_sizes(),
        color_refinement(&triangles.to_colored_graph()).cell_sizes()
    );
    assert_eq!(wl_embedding(&cycle, 5), wl_embedding(&triangles, 5));
    // the network inherits the same blind spot
    let w = ModelWeights::<f64>::random(small_metadata(2, 1, 2, 8, 3), 9, 1.0);
    let w = ModelWeights {
        metadata: ModelMetadata {
            domain: "ring".into(),
            ..w.metadata
        },
        ..w
    };
    assert_eq!(forward(&w, &cycle).unwrap().0, forward(&w, &triangles).unwrap().0);
    // different vertex counts are separated
    let smaller = ring_problem(&[(1, 2), (2, 3), (3, 1)]);
    assert_ne!(wl_embedding(&smaller, 3), wl_embedding(&cycle, 3));
}
