use super::graph::ColoredGraph;

/// Ordered partition of the vertex set. Cell indices are dense and derived
/// only from graph structure, so relabeling the graph relabels the cells the
/// same way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub cell_of: Vec<u32>,
    pub num_cells: u32,
}

impl Partition {
    /// Cells numbered by rank of initial color.
    pub fn from_colors(colors: &[u64]) -> Self {
        let mut distinct: Vec<u64> = colors.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let cell_of = colors
            .iter()
            .map(|c| distinct.binary_search(c).expect("present") as u32)
            .collect();
        Partition {
            cell_of,
            num_cells: distinct.len() as u32,
        }
    }

    pub fn len(&self) -> usize {
        self.cell_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cell_of.is_empty()
    }

    pub fn is_discrete(&self) -> bool {
        self.num_cells as usize == self.cell_of.len()
    }

    pub fn cell_sizes(&self) -> Vec<u32> {
        let mut sizes = vec![0; self.num_cells as usize];
        for &c in &self.cell_of {
            sizes[c as usize] += 1;
        }
        sizes
    }

    /// Members of every cell, in cell order, each sorted by vertex id.
    pub fn cells(&self) -> Vec<Vec<usize>> {
        let mut cells = vec![Vec::new(); self.num_cells as usize];
        for (v, &c) in self.cell_of.iter().enumerate() {
            cells[c as usize].push(v);
        }
        cells
    }

    /// First smallest cell with more than one vertex.
    pub fn target_cell(&self) -> Option<u32> {
        let sizes = self.cell_sizes();
        let mut best: Option<(u32, u32)> = None;
        for (c, &s) in sizes.iter().enumerate() {
            if s > 1 && best.is_none_or(|(_, bs)| s < bs) {
                best = Some((c as u32, s));
            }
        }
        best.map(|(c, _)| c)
    }

    pub fn members(&self, cell: u32) -> Vec<usize> {
        (0..self.cell_of.len()).filter(|&v| self.cell_of[v] == cell).collect()
    }

    /// Splits `v` off its cell, placing it just before the rest of the cell.
    pub fn individualize(&self, v: usize) -> Partition {
        let c = self.cell_of[v];
        let cell_of = self
            .cell_of
            .iter()
            .enumerate()
            .map(|(u, &cu)| if cu > c || (cu == c && u != v) { cu + 1 } else { cu })
            .collect();
        Partition {
            cell_of,
            num_cells: self.num_cells + 1,
        }
    }

    /// Refines to the coarsest equitable partition: two vertices stay together
    /// only if they share a cell and the multiset of `(neighbor cell, label)`.
    pub fn refine(&mut self, graph: &ColoredGraph) {
        self.refine_rounds(graph, usize::MAX);
    }

    /// At most `rounds` refinement rounds; returns the number performed that
    /// changed the partition.
    pub fn refine_rounds(&mut self, graph: &ColoredGraph, rounds: usize) -> usize {
        let n = self.cell_of.len();
        let mut order: Vec<usize> = (0..n).collect();
        let mut flat: Vec<(u32, u32)> = Vec::new();
        let mut offsets = vec![0usize; n + 1];
        let mut changed = 0;
        while changed < rounds {
            flat.clear();
            for v in 0..n {
                let start = flat.len();
                flat.extend(graph.neighbors(v).iter().map(|&(u, l)| (self.cell_of[u as usize], l)));
                flat[start..].sort_unstable();
                offsets[v + 1] = flat.len();
            }
            let cell_of = &self.cell_of;
            let key = |v: usize| (cell_of[v], &flat[offsets[v]..offsets[v + 1]]);
            order.sort_by(|&a, &b| key(a).cmp(&key(b)));
            let mut next = vec![0u32; n];
            let mut c = 0u32;
            for i in 0..n {
                if i > 0 && key(order[i]) != key(order[i - 1]) {
                    c += 1;
                }
                next[order[i]] = c;
            }
            let count = if n == 0 { 0 } else { c + 1 };
            // refinement only splits cells, so an equal count means no change
            if count == self.num_cells {
                break;
            }
            self.cell_of = next;
            self.num_cells = count;
            changed += 1;
        }
        changed
    }
}

/// Stable color refinement (1-WL with edge labels) from the vertex colors.
pub fn color_refinement(graph: &ColoredGraph) -> Partition {
    let mut p = Partition::from_colors(graph.colors());
    p.refine(graph);
    p
}
