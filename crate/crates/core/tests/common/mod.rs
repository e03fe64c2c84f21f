#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use symplan::pddl::{GroundAction, LiftedProblem, ObjId, SchemaId, State};

/// Every type-correct argument tuple, filtered by a direct precondition check.
pub fn brute_force_applicable(problem: &LiftedProblem, state: &State) -> Vec<GroundAction> {
    let domain = problem.domain();
    let mut out = Vec::new();
    for (si, schema) in domain.schemas.iter().enumerate() {
        let pools: Vec<&[ObjId]> = schema
            .params
            .iter()
            .map(|p| problem.objects_of_type(p.ty))
            .collect();
        let mut idx = vec![0usize; pools.len()];
        if pools.iter().any(|p| p.is_empty()) {
            continue;
        }
        'outer: loop {
            let args: Vec<ObjId> = idx.iter().zip(&pools).map(|(&i, p)| p[i]).collect();
            let action = problem.ground(SchemaId(si as u32), args);
            let ok = action.pre.iter().all(|p| {
                state.props().contains(p) || problem.static_state().props().contains(p)
            });
            if ok {
                out.push(action);
            }
            let mut k = pools.len();
            loop {
                if k == 0 {
                    break 'outer;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < pools[k].len() {
                    continue 'outer;
                }
                idx[k] = 0;
            }
        }
    }
    out
}

/// Breadth-first reachable states up to `depth` steps (or all when `None`),
/// capped at `limit` states.
pub fn reachable_states(problem: &LiftedProblem, depth: Option<usize>, limit: usize) -> Vec<State> {
    let mut seen: HashMap<State, usize> = HashMap::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    let init = problem.initial_state().clone();
    seen.insert(init.clone(), 0);
    order.push(init.clone());
    queue.push_back(init);
    while let Some(s) = queue.pop_front() {
        let d = seen[&s];
        if depth.is_some_and(|max| d >= max) {
            continue;
        }
        for a in problem.applicable_actions(&s) {
            let t = s.apply_unchecked(&a);
            if !seen.contains_key(&t) {
                if order.len() >= limit {
                    return order;
                }
                seen.insert(t.clone(), d + 1);
                order.push(t.clone());
                queue.push_back(t);
            }
        }
    }
    order
}

/// Optimal plan length by exhaustive breadth-first search.
pub fn bfs_optimal_length(problem: &LiftedProblem, limit: usize) -> Option<usize> {
    let init = problem.initial_state().clone();
    if problem.is_goal(&init) {
        return Some(0);
    }
    let mut seen: HashMap<State, usize> = HashMap::new();
    seen.insert(init.clone(), 0);
    let mut queue = VecDeque::from([init]);
    while let Some(s) = queue.pop_front() {
        let d = seen[&s];
        for a in problem.applicable_actions(&s) {
            let t = s.apply_unchecked(&a);
            if seen.contains_key(&t) {
                continue;
            }
            if problem.is_goal(&t) {
                return Some(d + 1);
            }
            assert!(seen.len() < limit, "state space exceeds {limit}");
            seen.insert(t.clone(), d + 1);
            queue.push_back(t);
        }
    }
    None
}

/// Number of states reachable from init, or `None` when above `limit`.
pub fn count_reachable(problem: &LiftedProblem, limit: usize) -> Option<usize> {
    let states = reachable_states(problem, None, limit + 1);
    (states.len() <= limit).then_some(states.len())
}

pub mod graphs {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use symplan::symmetry::ColoredGraph;

    /// All automorphisms by backtracking over vertex images; a partial map is
    /// extended only while colors and pairwise edge-label multisets agree.
    pub fn brute_force_automorphisms(g: &ColoredGraph) -> Vec<Vec<usize>> {
        let n = g.num_vertices();
        let mut between = vec![vec![Vec::new(); n]; n];
        for (u, v, l) in g.edges() {
            between[u][v].push(l);
            if u != v {
                between[v][u].push(l);
            }
        }
        for row in &mut between {
            for cell in row {
                cell.sort_unstable();
            }
        }
        let mut out = Vec::new();
        let mut perm = vec![usize::MAX; n];
        let mut used = vec![false; n];
        extend(g, &between, 0, &mut perm, &mut used, &mut out);
        out
    }

    fn extend(
        g: &ColoredGraph,
        between: &[Vec<Vec<u32>>],
        k: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = perm.len();
        if k == n {
            out.push(perm.clone());
            return;
        }
        for w in 0..n {
            if used[w] || g.color(w) != g.color(k) {
                continue;
            }
            perm[k] = w;
            if (0..=k).all(|i| between[k][i] == between[w][perm[i]]) {
                used[w] = true;
                extend(g, between, k + 1, perm, used, out);
                used[w] = false;
            }
        }
        perm[k] = usize::MAX;
    }

    /// `same[u][v]` iff some automorphism maps u to v.
    pub fn brute_force_orbit_relation(g: &ColoredGraph) -> Vec<Vec<bool>> {
        let n = g.num_vertices();
        let mut same = vec![vec![false; n]; n];
        for p in brute_force_automorphisms(g) {
            for (u, &v) in p.iter().enumerate() {
                same[u][v] = true;
            }
        }
        same
    }

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, colors: u64, labels: u32, p: f64) -> ColoredGraph {
        let cs = (0..n).map(|_| rng.gen_range(0..colors)).collect();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v, rng.gen_range(1..=labels)));
                }
            }
        }
        ColoredGraph::from_edges(cs, edges)
    }

    fn copies(base: &ColoredGraph, k: usize) -> ColoredGraph {
        let m = base.num_vertices();
        let colors = (0..k).flat_map(|_| base.colors().iter().copied()).collect();
        let edges = (0..k)
            .flat_map(|c| base.edges().into_iter().map(move |(u, v, l)| (u + c * m, v + c * m, l)))
            .collect::<Vec<_>>();
        ColoredGraph::from_edges(colors, edges)
    }

    /// Mixed suite of graphs with at most 9 vertices: random sparse and dense
    /// graphs, disjoint copies, labeled cycles and bipartite graphs. Each
    /// graph is randomly relabeled so structure does not follow vertex ids.
    pub fn suite(count: usize, seed: u64) -> Vec<ColoredGraph> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for i in 0..count {
            let g = match i % 6 {
                0 => {
                    let n = rng.gen_range(1..=9);
                    random_graph(&mut rng, n, 3, 3, 0.3)
                }
                1 => {
                    let m = rng.gen_range(2..=4);
                    let base = random_graph(&mut rng, m, 2, 2, 0.6);
                    copies(&base, if m <= 3 { 3 } else { 2 })
                }
                2 => {
                    let n = rng.gen_range(3..=9);
                    let period = rng.gen_range(1..=3usize);
                    ColoredGraph::from_edges(
                        (0..n).map(|v| (v % period) as u64).collect(),
                        (0..n).map(|v| (v, (v + 1) % n, 1 + (v % 2) as u32)),
                    )
                }
                3 => {
                    let n = rng.gen_range(4..=9);
                    random_graph(&mut rng, n, 1, 1, 0.5)
                }
                4 => {
                    let a = rng.gen_range(1..=4usize);
                    let b = rng.gen_range(1..=5usize);
                    let mut edges = Vec::new();
                    for u in 0..a {
                        for v in 0..b {
                            if u == 0 || v % 2 == 0 {
                                edges.push((u, a + v, 1 + (v % 2) as u32));
                            }
                        }
                    }
                    ColoredGraph::from_edges((0..a + b).map(|v| (v >= a) as u64).collect(), edges)
                }
                _ => {
                    let n = rng.gen_range(5..=9);
                    random_graph(&mut rng, n, 2, 2, 0.45)
                }
            };
            let mut perm: Vec<usize> = (0..g.num_vertices()).collect();
            for j in (1..perm.len()).rev() {
                perm.swap(j, rng.gen_range(0..=j));
            }
            out.push(g.permuted(&perm));
        }
        out
    }

    pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..n).collect();
        for j in (1..n).rev() {
            perm.swap(j, rng.gen_range(0..=j));
        }
        perm
    }
}

pub mod successors {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use symplan::pddl::{LiftedProblem, ObjId, State};
    use symplan::symmetry::{are_isomorphic, search_automorphisms, Automorphism, DEFAULT_ORBIT_BUDGET};
    use symplan::tilg::build_tilg;

    #[derive(Debug, Default)]
    pub struct Tally {
        pub triples: usize,
        pub non_identity: usize,
        pub applicable: usize,
        pub isomorphic: usize,
    }

    /// Samples `(state, exact automorphism, action)` triples and checks that
    /// the mapped action is applicable and yields an isomorphic successor
    /// graph. Automorphisms are random words over the search generators.
    pub fn sample(problems: &[LiftedProblem], count: usize, seed: u64) -> Tally {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pool: Vec<(usize, State, Vec<Automorphism>)> = Vec::new();
        for (i, p) in problems.iter().enumerate() {
            for s in super::reachable_states(p, Some(4), 60) {
                let g = build_tilg(p, &s).to_colored_graph();
                let search = search_automorphisms(&g, DEFAULT_ORBIT_BUDGET);
                assert!(search.exact);
                if !search.generators.is_empty() {
                    pool.push((i, s, search.generators));
                }
            }
        }
        assert!(!pool.is_empty());
        let mut tally = Tally::default();
        while tally.triples < count {
            let (i, s, gens) = pool.choose(&mut rng).expect("non-empty");
            let p = &problems[*i];
            let candidates: Vec<_> = p
                .applicable_actions(s)
                .into_iter()
                .filter(|a| a.has_distinct_args())
                .collect();
            let Some(a) = candidates.choose(&mut rng) else {
                continue;
            };
            let n = gens[0].perm.len();
            let mut sigma = Automorphism::identity(n);
            for _ in 0..rng.gen_range(1..=4) {
                let g = gens.choose(&mut rng).expect("non-empty");
                let g = if rng.gen_bool(0.5) { g.clone() } else { g.inverse() };
                sigma = g.compose(&sigma);
            }
            tally.triples += 1;
            if a.args.iter().any(|o| sigma.apply(o.index()) != o.index()) {
                tally.non_identity += 1;
            }
            let mapped: Vec<ObjId> = a.args.iter().map(|o| ObjId(sigma.apply(o.index()) as u32)).collect();
            let b = p.ground(a.schema, mapped);
            if !p.is_applicable(s, &b) {
                continue;
            }
            tally.applicable += 1;
            let ga = build_tilg(p, &s.apply_unchecked(a)).to_colored_graph();
            let gb = build_tilg(p, &s.apply_unchecked(&b)).to_colored_graph();
            if are_isomorphic(&ga, &gb) {
                tally.isomorphic += 1;
            }
        }
        tally
    }
}

pub mod dense {
    use nalgebra::{DMatrix, DVector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use symplan::gnn::{input_dim, Matrix, ModelMetadata, ModelWeights};
    use symplan::pddl;
    use symplan::tilg::{Payload, TilgEdge, TilgGraph, TilgVertex};

    /// Independent dense computation: per relation a row-normalized adjacency
    /// matrix, H' = relu(H Ws^T + sum_r A_r H Wr^T + 1 b^T), z = 1^T H.
    pub fn dense_oracle(w: &ModelWeights<f64>, g: &TilgGraph) -> (Vec<f64>, f64) {
        let n = g.num_vertices();
        let d_in = w.metadata.d_in;
        let mut h = DMatrix::<f64>::zeros(n, d_in);
        for (v, vert) in g.vertices.iter().enumerate() {
            h[(v, vert.status as usize)] = 1.0;
            h[(v, 4 + vert.class as usize)] = 1.0;
        }
        let mut adj = vec![DMatrix::<f64>::zeros(n, n); w.metadata.max_arity];
        for e in &g.edges {
            let r = e.label as usize - 1;
            adj[r][(e.object as usize, e.proposition as usize)] += 1.0;
            adj[r][(e.proposition as usize, e.object as usize)] += 1.0;
        }
        for a in &mut adj {
            for i in 0..n {
                let deg: f64 = a.row(i).sum();
                if deg > 0.0 {
                    for j in 0..n {
                        a[(i, j)] /= deg;
                    }
                }
            }
        }
        let to_dense = |m: &Matrix<f64>| DMatrix::from_row_slice(m.rows, m.cols, &m.data);
        for l in &w.layers {
            let mut next = &h * to_dense(&l.self_weight).transpose();
            for (r, wr) in l.relations.iter().enumerate() {
                next += &adj[r] * &h * to_dense(wr).transpose();
            }
            for i in 0..n {
                for j in 0..next.ncols() {
                    next[(i, j)] = (next[(i, j)] + l.bias[j]).max(0.0);
                }
            }
            h = next;
        }
        let z: Vec<f64> = (0..h.ncols()).map(|j| h.column(j).sum()).collect();
        let head = DVector::from_vec(w.head_weight.clone());
        let value = head.dot(&DVector::from_vec(z.clone())) + w.head_bias;
        (z, value)
    }

    /// Random bipartite TILG-shaped graph with at most `max_v` vertices.
    pub fn random_small_graph(rng: &mut ChaCha8Rng, max_v: usize, types: u32, preds: u32, arity: u32) -> TilgGraph {
        let n = rng.gen_range(1..=max_v);
        let objects = rng.gen_range(1..=n);
        let mut vertices = Vec::new();
        for i in 0..objects {
            vertices.push(TilgVertex {
                status: 3,
                class: rng.gen_range(0..types),
                payload: Payload::Object(pddl::ObjId(i as u32)),
            });
        }
        let mut edges = Vec::new();
        for v in objects..n {
            let pred = rng.gen_range(0..preds);
            let k = rng.gen_range(1..=arity);
            let args: Vec<usize> = (0..k).map(|_| rng.gen_range(0..objects)).collect();
            for (i, &o) in args.iter().enumerate() {
                edges.push(TilgEdge {
                    object: o as u32,
                    proposition: v as u32,
                    label: i as u32 + 1,
                });
            }
            vertices.push(TilgVertex {
                status: rng.gen_range(0..3),
                class: types + pred,
                payload: Payload::Proposition(pddl::Proposition::new(
                    pddl::PredId(pred),
                    args.iter().map(|&o| pddl::ObjId(o as u32)).collect(),
                )),
            });
        }
        TilgGraph {
            vertices,
            edges,
            num_types: types,
            num_predicates: preds,
        }
    }

    pub fn small_metadata(types: usize, preds: usize, arity: usize, hidden: usize, layers: usize) -> ModelMetadata {
        ModelMetadata {
            domain: "random".into(),
            d_in: input_dim(types, preds),
            hidden,
            max_arity: arity,
            num_layers: layers,
            normalization: "mean".into(),
            activation: "relu".into(),
            pooling: "add".into(),
            extra: Default::default(),
        }
    }

    pub fn oracle_cases(count: usize) -> Vec<(ModelWeights<f64>, TilgGraph)> {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        (0..count)
            .map(|i| {
                let g = random_small_graph(&mut rng, 6, 2, 3, 3);
                let meta = small_metadata(2, 3, 3, 3 + i % 5, 1 + i % 4);
                (ModelWeights::random(meta, i as u64, 1.0), g)
            })
            .collect()
    }
}
