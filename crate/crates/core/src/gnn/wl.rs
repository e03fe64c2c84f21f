use crate::tilg::TilgGraph;

/// Length of the vector returned by [`wl_embedding`].
pub const WL_EMBEDDING_LEN: usize = 8;

fn mix(mut x: u64) -> u64 {
    // splitmix64 finalizer
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn combine(h: u64, x: u64) -> u64 {
    mix(h ^ x.wrapping_mul(0x0100_0000_01b3))
}

fn hash_seq(seed: u64, items: impl IntoIterator<Item = u64>) -> u64 {
    items.into_iter().fold(mix(seed), combine)
}

/// Training-free permutation-invariant summary of a TILG.
///
/// Colors start from the packed vertex colors and are rehashed `rounds`
/// times from the own color and the sorted `(neighbor color, label)`
/// multiset. The result is `[|V|, |E|, h_1..h_6]` where each `h_i` hashes
/// the sorted final colors under a different seed.
pub fn wl_embedding(graph: &TilgGraph, rounds: usize) -> Vec<u64> {
    let n = graph.num_vertices();
    let mut adj = vec![Vec::new(); n];
    for e in &graph.edges {
        adj[e.object as usize].push((e.proposition as usize, e.label));
        adj[e.proposition as usize].push((e.object as usize, e.label));
    }
    let mut colors: Vec<u64> = graph.colors().into_iter().map(mix).collect();
    let mut sig = Vec::new();
    for _ in 0..rounds.max(1) {
        let next = (0..n)
            .map(|v| {
                sig.clear();
                sig.extend(adj[v].iter().map(|&(u, l)| combine(colors[u], l as u64)));
                sig.sort_unstable();
                hash_seq(colors[v], sig.iter().copied())
            })
            .collect();
        colors = next;
    }
    colors.sort_unstable();
    let mut out = Vec::with_capacity(WL_EMBEDDING_LEN);
    out.push(n as u64);
    out.push(graph.edges.len() as u64);
    for seed in 1..=(WL_EMBEDDING_LEN as u64 - 2) {
        out.push(hash_seq(seed, colors.iter().copied()));
    }
    out
}
