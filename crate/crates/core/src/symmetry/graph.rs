use std::fmt::Write;

use thiserror::Error;

/// Undirected graph with integer vertex colors and edge labels.
/// Adjacency lists are sorted and hold `(neighbor, label)` pairs; parallel
/// edges with different labels are kept.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColoredGraph {
    colors: Vec<u64>,
    adjacency: Vec<Vec<(u32, u32)>>,
}

impl ColoredGraph {
    pub fn from_edges(colors: Vec<u64>, edges: impl IntoIterator<Item = (usize, usize, u32)>) -> Self {
        let mut adjacency = vec![Vec::new(); colors.len()];
        for (u, v, label) in edges {
            adjacency[u].push((v as u32, label));
            adjacency[v].push((u as u32, label));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        ColoredGraph { colors, adjacency }
    }

    pub fn num_vertices(&self) -> usize {
        self.colors.len()
    }

    pub fn colors(&self) -> &[u64] {
        &self.colors
    }

    pub fn color(&self, v: usize) -> u64 {
        self.colors[v]
    }

    pub fn neighbors(&self, v: usize) -> &[(u32, u32)] {
        &self.adjacency[v]
    }

    /// Each undirected edge once as `(u, v, label)` with `u <= v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize, u32)> {
        let mut out = Vec::new();
        for (u, list) in self.adjacency.iter().enumerate() {
            let mut self_loops = 0usize;
            for &(v, l) in list {
                let v = v as usize;
                if u < v {
                    out.push((u, v, l));
                } else if u == v {
                    // a self-loop is stored twice
                    self_loops += 1;
                    if self_loops % 2 == 1 {
                        out.push((u, v, l));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Relabels vertices: old vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> ColoredGraph {
        let mut colors = vec![0; self.colors.len()];
        for (v, &c) in self.colors.iter().enumerate() {
            colors[perm[v]] = c;
        }
        ColoredGraph::from_edges(
            colors,
            self.edges().into_iter().map(|(u, v, l)| (perm[u], perm[v], l)),
        )
    }

    /// Vertex lines `id color`, then edge lines `u v label`, newline terminated.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (v, c) in self.colors.iter().enumerate() {
            let _ = writeln!(out, "{v} {c}");
        }
        for (u, v, l) in self.edges() {
            let _ = writeln!(out, "{u} {v} {l}");
        }
        out
    }

    /// Inverse of [`Self::to_text`]. Blank lines and `#` comments are skipped;
    /// vertex ids must be `0..n` in order and precede all edges.
    pub fn from_text(text: &str) -> Result<ColoredGraph, GraphTextError> {
        let mut colors = Vec::new();
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let nums = content
                .split_whitespace()
                .map(|t| t.parse::<u64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| GraphTextError::Malformed { line })?;
            match nums.as_slice() {
                [id, color] => {
                    if !edges.is_empty() || *id as usize != colors.len() {
                        return Err(GraphTextError::VertexOrder { line });
                    }
                    colors.push(*color);
                }
                [u, v, label] => {
                    let label = u32::try_from(*label).map_err(|_| GraphTextError::Malformed { line })?;
                    edges.push((*u as usize, *v as usize, label, line));
                }
                _ => return Err(GraphTextError::Malformed { line }),
            }
        }
        let n = colors.len();
        if let Some(&(_, _, _, line)) = edges.iter().find(|(u, v, _, _)| *u >= n || *v >= n) {
            return Err(GraphTextError::UnknownVertex { line });
        }
        Ok(ColoredGraph::from_edges(
            colors,
            edges.into_iter().map(|(u, v, l, _)| (u, v, l)),
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphTextError {
    #[error("line {line}: expected `id color` or `u v label`")]
    Malformed { line: usize },
    #[error("line {line}: vertex ids must be consecutive from 0 and precede edges")]
    VertexOrder { line: usize },
    #[error("line {line}: edge endpoint is not a declared vertex")]
    UnknownVertex { line: usize },
}

/// A vertex permutation `v ↦ perm[v]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Automorphism {
    pub perm: Vec<usize>,
}

impl Automorphism {
    pub fn identity(n: usize) -> Self {
        Automorphism {
            perm: (0..n).collect(),
        }
    }

    pub fn apply(&self, v: usize) -> usize {
        self.perm[v]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            perm: other.perm.iter().map(|&v| self.perm[v]).collect(),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut inv = vec![0; self.perm.len()];
        for (v, &w) in self.perm.iter().enumerate() {
            inv[w] = v;
        }
        Automorphism { perm: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(v, &w)| v == w)
    }

    /// Checks bijectivity, color preservation and labeled-edge preservation.
    pub fn is_automorphism_of(&self, graph: &ColoredGraph) -> bool {
        let n = graph.num_vertices();
        if self.perm.len() != n {
            return false;
        }
        let mut hit = vec![false; n];
        for &w in &self.perm {
            if w >= n || hit[w] {
                return false;
            }
            hit[w] = true;
        }
        let mut mapped = Vec::new();
        for v in 0..n {
            let w = self.perm[v];
            if graph.color(v) != graph.color(w) {
                return false;
            }
            mapped.clear();
            mapped.extend(graph.neighbors(v).iter().map(|&(u, l)| (self.perm[u as usize] as u32, l)));
            mapped.sort_unstable();
            if mapped.as_slice() != graph.neighbors(w) {
                return false;
            }
        }
        true
    }
}
