use super::graph::{Automorphism, ColoredGraph};
use super::orbits::{search_automorphisms, DEFAULT_ORBIT_BUDGET};
use super::refine::Partition;
use super::union_find::UnionFind;

/// Relabeling-independent form of a graph: vertex colors by canonical
/// position and the sorted edge triples over positions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub colors: Vec<u64>,
    pub edges: Vec<(u32, u32, u32)>,
}

fn certificate(graph: &ColoredGraph, leaf: &[u32]) -> CanonicalForm {
    let mut colors = vec![0; leaf.len()];
    for (v, &pos) in leaf.iter().enumerate() {
        colors[pos as usize] = graph.color(v);
    }
    let mut edges: Vec<(u32, u32, u32)> = graph
        .edges()
        .into_iter()
        .map(|(u, v, l)| {
            let (a, b) = (leaf[u], leaf[v]);
            (a.min(b), a.max(b), l)
        })
        .collect();
    edges.sort_unstable();
    CanonicalForm { colors, edges }
}

struct Canonizer<'g> {
    graph: &'g ColoredGraph,
    generators: Vec<Automorphism>,
    best: Option<(CanonicalForm, Vec<u32>)>,
}

impl Canonizer<'_> {
    fn sibling_orbits(&self, prefix: &[usize]) -> UnionFind {
        let mut uf = UnionFind::new(self.graph.num_vertices());
        for g in &self.generators {
            if prefix.iter().all(|&v| g.perm[v] == v) {
                for (v, &w) in g.perm.iter().enumerate() {
                    uf.union(v, w);
                }
            }
        }
        uf
    }

    fn explore(&mut self, node: &Partition, prefix: &mut Vec<usize>) {
        let Some(cell) = node.target_cell() else {
            self.leaf(&node.cell_of);
            return;
        };
        let mut explored: Vec<usize> = Vec::new();
        let mut known = self.generators.len();
        let mut uf = self.sibling_orbits(prefix);
        for w in node.members(cell) {
            if self.generators.len() != known {
                known = self.generators.len();
                uf = self.sibling_orbits(prefix);
            }
            if explored.iter().any(|&e| uf.same(e, w)) {
                continue;
            }
            explored.push(w);
            let mut child = node.individualize(w);
            child.refine(self.graph);
            prefix.push(w);
            self.explore(&child, prefix);
            prefix.pop();
        }
    }

    fn leaf(&mut self, leaf: &[u32]) {
        let cert = certificate(self.graph, leaf);
        match &self.best {
            Some((best, best_leaf)) if *best == cert => {
                let mut vertex_at = vec![0usize; leaf.len()];
                for (v, &pos) in leaf.iter().enumerate() {
                    vertex_at[pos as usize] = v;
                }
                let gamma = Automorphism {
                    perm: best_leaf.iter().map(|&pos| vertex_at[pos as usize]).collect(),
                };
                if !gamma.is_identity() && gamma.is_automorphism_of(self.graph) {
                    self.generators.push(gamma);
                }
            }
            Some((best, _)) if *best < cert => {}
            _ => self.best = Some((cert, leaf.to_vec())),
        }
    }
}

/// Smallest leaf certificate of the refinement tree. Siblings are skipped
/// when a known automorphism fixing the current prefix maps one to another.
pub fn canonical_form(graph: &ColoredGraph) -> CanonicalForm {
    let generators = search_automorphisms(graph, DEFAULT_ORBIT_BUDGET).generators;
    let mut root = Partition::from_colors(graph.colors());
    root.refine(graph);
    let mut c = Canonizer {
        graph,
        generators,
        best: None,
    };
    c.explore(&root, &mut Vec::new());
    c.best.map(|(cert, _)| cert).unwrap_or(CanonicalForm {
        colors: Vec::new(),
        edges: Vec::new(),
    })
}

fn degree_profile(graph: &ColoredGraph) -> Vec<(u64, Vec<u32>)> {
    let mut out: Vec<(u64, Vec<u32>)> = (0..graph.num_vertices())
        .map(|v| {
            let mut labels: Vec<u32> = graph.neighbors(v).iter().map(|&(_, l)| l).collect();
            labels.sort_unstable();
            (graph.color(v), labels)
        })
        .collect();
    out.sort_unstable();
    out
}

/// Whether a color- and label-preserving bijection exists.
pub fn are_isomorphic(g1: &ColoredGraph, g2: &ColoredGraph) -> bool {
    if g1.num_vertices() != g2.num_vertices() || g1.num_edges() != g2.num_edges() {
        return false;
    }
    let mut c1 = g1.colors().to_vec();
    let mut c2 = g2.colors().to_vec();
    c1.sort_unstable();
    c2.sort_unstable();
    if c1 != c2 || degree_profile(g1) != degree_profile(g2) {
        return false;
    }
    canonical_form(g1) == canonical_form(g2)
}
