//! Brute-force oracles that share no code with the library routines they
//! check. Each one works straight from the definition.
#![allow(dead_code)]

use std::collections::BTreeMap;

use oneperc::{EdgeSubset, LabeledGraph, Measure, Rational, VertexBasedMeasure, VertexPermutation};

fn zero() -> Rational {
    Rational::from_integer(0.into())
}

/// Every labelled simple graph on `n` vertices with at most `max_edges` edges.
pub fn labelled_graphs(n: usize, max_edges: usize) -> Vec<LabeledGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u32..1 << pairs.len())
        .filter(|mask| mask.count_ones() as usize <= max_edges)
        .map(|mask| {
            let edges = (0..pairs.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| pairs[i])
                .collect();
            LabeledGraph::new(n, edges).unwrap()
        })
        .collect()
}

fn vertex_mask(g: &LabeledGraph, s: u32) -> u64 {
    let mut mask = 0u64;
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        if s >> i & 1 == 1 {
            mask |= 1 << u | 1 << v;
        }
    }
    mask
}

/// Double loop over nonempty edge sets, keeping `S < T` with disjoint supports.
pub fn disjoint_pairs(g: &LabeledGraph) -> Vec<(EdgeSubset, EdgeSubset)> {
    let full = 1u32 << g.m();
    let support: Vec<u64> = (0..full).map(|s| vertex_mask(g, s)).collect();
    let mut out = Vec::new();
    for s in 1..full {
        for t in s + 1..full {
            if support[s as usize] & support[t as usize] == 0 {
                out.push((EdgeSubset(s), EdgeSubset(t)));
            }
        }
    }
    out
}

/// All permutations of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..n {
            let mut q = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out
}

/// Every permutation in `perms` mapping the edge set onto itself, sorted.
pub fn automorphisms(g: &LabeledGraph, perms: &[Vec<usize>]) -> Vec<VertexPermutation> {
    let n = g.n();
    let mut adjacent = vec![false; n * n];
    for &(u, v) in g.edges() {
        adjacent[u * n + v] = true;
        adjacent[v * n + u] = true;
    }
    let mut out: Vec<VertexPermutation> = perms
        .iter()
        .filter(|sigma| g.edges().iter().all(|&(u, v)| adjacent[sigma[u] * n + sigma[v]]))
        .cloned()
        .map(VertexPermutation)
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Probability that the first column reaches the last, by enumerating every
/// joint vertex state and flooding from the first `k` vertices.
pub fn crossing_by_enumeration(vbm: &VertexBasedMeasure<Rational>, k: usize) -> Rational {
    let g = vbm.graph();
    let n = g.n();
    let len = n / k;
    let mut total = zero();
    let mut states = vec![0usize; n];
    loop {
        let w: Rational = (0..n).map(|v| vbm.dists()[v][states[v]].clone()).product();
        if w != zero() {
            let open = vbm.open_edges(&states);
            let mut reached: Vec<bool> = (0..n).map(|v| v < k).collect();
            let mut grew = true;
            while grew {
                grew = false;
                for (e, &(a, b)) in g.edges().iter().enumerate() {
                    if open[e] && reached[a] != reached[b] {
                        reached[a] = true;
                        reached[b] = true;
                        grew = true;
                    }
                }
            }
            if ((len - 1) * k..n).any(|v| reached[v]) {
                total += w;
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return total;
            }
            states[i] += 1;
            if states[i] < vbm.dists()[i].len() {
                break;
            }
            states[i] = 0;
            i += 1;
        }
    }
}

/// 1-independence from the definition: for every split of the vertices into
/// `U` and its complement `W`, the configuration on the edges inside `U` is
/// independent of the one inside `W`. Smaller disjoint pairs follow by
/// marginalising.
pub fn one_independent(measure: &Measure<Rational>) -> bool {
    let g = measure.graph();
    let n = g.n();
    let inside = |vs: u32| -> u32 {
        g.edges()
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| vs >> u & 1 == 1 && vs >> v & 1 == 1)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    };
    for u_set in 1u32..(1 << n) - 1 {
        let (eu, ew) = (inside(u_set), inside(((1u32 << n) - 1) & !u_set));
        if eu == 0 || ew == 0 {
            continue;
        }
        let mut joint: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
        let mut left: BTreeMap<u32, Rational> = BTreeMap::new();
        let mut right: BTreeMap<u32, Rational> = BTreeMap::new();
        for (mask, w) in measure.weights().iter().enumerate() {
            let mask = mask as u32;
            *joint.entry((mask & eu, mask & ew)).or_insert_with(zero) += w;
            *left.entry(mask & eu).or_insert_with(zero) += w;
            *right.entry(mask & ew).or_insert_with(zero) += w;
        }
        for (a, pa) in &left {
            for (b, pb) in &right {
                let pab = joint.get(&(*a, *b)).cloned().unwrap_or_else(zero);
                if pab != pa * pb {
                    return false;
                }
            }
        }
    }
    true
}

/// Connectivity of the spanning subgraph `mask` by repeated relaxation.
pub fn connected(g: &LabeledGraph, mask: usize) -> bool {
    if g.n() <= 1 {
        return true;
    }
    let mut reached = vec![false; g.n()];
    reached[0] = true;
    let mut grew = true;
    while grew {
        grew = false;
        for (i, &(u, v)) in g.edges().iter().enumerate() {
            if mask >> i & 1 == 1 && reached[u] != reached[v] {
                reached[u] = true;
                reached[v] = true;
                grew = true;
            }
        }
    }
    reached.into_iter().all(|r| r)
}
