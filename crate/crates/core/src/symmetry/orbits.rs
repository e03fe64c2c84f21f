use serde::{Deserialize, Serialize};

use super::graph::{Automorphism, ColoredGraph};
use super::refine::Partition;
use super::union_find::UnionFind;

/// Search-tree nodes allowed per orbit computation.
pub const DEFAULT_ORBIT_BUDGET: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitPartition {
    /// Dense ids numbered in order of first occurrence.
    pub orbit_id: Vec<u32>,
    pub num_orbits: u32,
}

impl OrbitPartition {
    pub fn from_union_find(uf: &mut UnionFind) -> Self {
        let n = uf.len();
        let mut id_of_root = vec![u32::MAX; n];
        let mut orbit_id = Vec::with_capacity(n);
        let mut next = 0;
        for v in 0..n {
            let r = uf.find(v);
            if id_of_root[r] == u32::MAX {
                id_of_root[r] = next;
                next += 1;
            }
            orbit_id.push(id_of_root[r]);
        }
        OrbitPartition {
            orbit_id,
            num_orbits: next,
        }
    }

    pub fn discrete(n: usize) -> Self {
        OrbitPartition {
            orbit_id: (0..n as u32).collect(),
            num_orbits: n as u32,
        }
    }

    pub fn same_orbit(&self, u: usize, v: usize) -> bool {
        self.orbit_id[u] == self.orbit_id[v]
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_orbits as usize];
        for (v, &o) in self.orbit_id.iter().enumerate() {
            out[o as usize].push(v);
        }
        out
    }
}

/// Result of an automorphism search.
#[derive(Debug, Clone)]
pub struct AutomorphismSearch {
    /// Verified generators, in discovery order.
    pub generators: Vec<Automorphism>,
    pub orbits: OrbitPartition,
    pub exact: bool,
    pub nodes: usize,
}

struct BudgetExhausted;

struct Searcher<'g> {
    graph: &'g ColoredGraph,
    budget: usize,
    nodes: usize,
    /// Cell sizes along the first path, used to prune non-equivalent nodes.
    invariants: Vec<Vec<u32>>,
    first_leaf: Vec<u32>,
}

impl Searcher<'_> {
    fn visit(&mut self) -> Result<(), BudgetExhausted> {
        if self.nodes >= self.budget {
            return Err(BudgetExhausted);
        }
        self.nodes += 1;
        Ok(())
    }

    fn child(&self, node: &Partition, v: usize) -> Partition {
        let mut c = node.individualize(v);
        c.refine(self.graph);
        c
    }

    /// Looks in the subtree of `node` for a leaf whose map from the first leaf
    /// is an automorphism.
    fn find_equivalent_leaf(&mut self, node: &Partition, depth: usize) -> Result<Option<Automorphism>, BudgetExhausted> {
        self.visit()?;
        if self.invariants.get(depth).is_none_or(|inv| *inv != node.cell_sizes()) {
            return Ok(None);
        }
        let Some(cell) = node.target_cell() else {
            let mut vertex_at = vec![0usize; node.len()];
            for (v, &pos) in node.cell_of.iter().enumerate() {
                vertex_at[pos as usize] = v;
            }
            let gamma = Automorphism {
                perm: self.first_leaf.iter().map(|&pos| vertex_at[pos as usize]).collect(),
            };
            return Ok(gamma.is_automorphism_of(self.graph).then_some(gamma));
        };
        for u in node.members(cell) {
            let c = self.child(node, u);
            if let Some(g) = self.find_equivalent_leaf(&c, depth + 1)? {
                return Ok(Some(g));
            }
        }
        Ok(None)
    }
}

/// Individualization-refinement search for automorphism generators.
///
/// Walks the first path of the search tree, then for each level from the
/// deepest up tries every sibling of the chosen vertex not already known to
/// share its orbit. On budget exhaustion the orbits found so far are returned
/// with `exact = false`; they are then a refinement of the true orbits.
pub fn search_automorphisms(graph: &ColoredGraph, budget: usize) -> AutomorphismSearch {
    let n = graph.num_vertices();
    let mut uf = UnionFind::new(n);
    let mut generators = Vec::new();

    let mut root = Partition::from_colors(graph.colors());
    root.refine(graph);
    let mut path = vec![root];
    let mut chosen = Vec::new();
    while let Some(cell) = path.last().and_then(Partition::target_cell) {
        let node = path.last().expect("non-empty");
        let v = node.members(cell)[0];
        let mut c = node.individualize(v);
        c.refine(graph);
        chosen.push(v);
        path.push(c);
    }
    let mut searcher = Searcher {
        graph,
        budget: budget.max(1),
        nodes: path.len(),
        invariants: path.iter().map(Partition::cell_sizes).collect(),
        first_leaf: path.last().map(|p| p.cell_of.clone()).unwrap_or_default(),
    };

    let mut exact = true;
    'levels: for k in (0..chosen.len()).rev() {
        let node = &path[k];
        let vk = chosen[k];
        let cell = node.cell_of[vk];
        let mut failed: Vec<usize> = Vec::new();
        for w in node.members(cell) {
            if w == vk || uf.same(w, vk) || failed.iter().any(|&f| uf.same(f, w)) {
                continue;
            }
            let c = searcher.child(node, w);
            match searcher.find_equivalent_leaf(&c, k + 1) {
                Ok(Some(gamma)) => {
                    for v in 0..n {
                        uf.union(v, gamma.perm[v]);
                    }
                    generators.push(gamma);
                }
                Ok(None) => failed.push(w),
                Err(BudgetExhausted) => {
                    exact = false;
                    break 'levels;
                }
            }
        }
    }
    AutomorphismSearch {
        generators,
        orbits: OrbitPartition::from_union_find(&mut uf),
        exact,
        nodes: searcher.nodes,
    }
}

/// Automorphism orbits and whether the search completed within `budget` nodes.
pub fn automorphism_orbits(graph: &ColoredGraph, budget: usize) -> (OrbitPartition, bool) {
    let s = search_automorphisms(graph, budget);
    (s.orbits, s.exact)
}
