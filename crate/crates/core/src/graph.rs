//! Finite simple graphs with a fixed edge indexing.
//!
//! Vertices are `0..n` internally and `1..=n` in every external format. An edge
//! subset is a bitmask over edge indices, so exhaustive work is capped at
//! [`MAX_EXHAUSTIVE_EDGES`] edges.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_EXHAUSTIVE_EDGES: usize = 24;
pub const MAX_AUTOMORPHISM_VERTICES: usize = 10;

/// Union-find with path compression; the smaller index becomes the root.
#[derive(Debug, Clone)]
pub(crate) struct Dsu(Vec<usize>);

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Bit `i` set means edge `i` is present (open).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeSubset(pub u32);

impl EdgeSubset {
    pub fn contains(self, other: EdgeSubset) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn edges(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |i| bits >> i & 1 == 1)
    }
}

/// `perm[v]` is the image of `v`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexPermutation(pub Vec<usize>);

impl VertexPermutation {
    pub fn identity(n: usize) -> Self {
        VertexPermutation((0..n).collect())
    }

    /// `(self ∘ other)(v) = self(other(v))`.
    pub fn compose(&self, other: &VertexPermutation) -> Self {
        VertexPermutation(other.0.iter().map(|&v| self.0[v]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (v, &w) in self.0.iter().enumerate() {
            inv[w] = v;
        }
        VertexPermutation(inv)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    index: HashMap<(usize, usize), usize>,
}

impl LabeledGraph {
    /// Edges are 0-based pairs; their order fixes the edge indexing.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize("a graph needs at least one vertex".into()));
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut index = HashMap::new();
        let mut normalised = Vec::with_capacity(edges.len());
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({}, {}) out of range", u + 1, v + 1)));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {}", u + 1)));
            }
            let key = (u.min(v), u.max(v));
            if index.insert(key, i).is_some() {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge ({}, {})",
                    key.0 + 1,
                    key.1 + 1
                )));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
            normalised.push(key);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(LabeledGraph {
            n,
            edges: normalised,
            adjacency,
            index,
        })
    }

    /// Same as [`LabeledGraph::new`] but with edges sorted lexicographically.
    pub fn with_sorted_edges(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut edges: Vec<_> = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        edges.sort_unstable();
        Self::new(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> (usize, usize) {
        self.edges[i]
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.index.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index(u, v).is_some()
    }

    pub fn full_subset(&self) -> EdgeSubset {
        EdgeSubset(((1u64 << self.m()) - 1) as u32)
    }

    pub fn require_exhaustive(&self) -> Result<()> {
        if self.m() > MAX_EXHAUSTIVE_EDGES {
            return Err(Error::ExhaustiveLimitExceeded {
                what: "edges",
                value: self.m(),
                limit: MAX_EXHAUSTIVE_EDGES,
            });
        }
        if self.n > 64 {
            return Err(Error::ExhaustiveLimitExceeded {
                what: "vertices",
                value: self.n,
                limit: 64,
            });
        }
        Ok(())
    }

    /// Vertex bitmask of the endpoints of `s`.
    pub fn support(&self, s: EdgeSubset) -> u64 {
        s.edges()
            .map(|i| (1u64 << self.edges[i].0) | (1u64 << self.edges[i].1))
            .fold(0, |a, b| a | b)
    }

    /// Edges with both endpoints in the vertex bitmask `vertices`.
    pub fn induced_edges(&self, vertices: u64) -> EdgeSubset {
        let mut mask = 0u32;
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if vertices >> u & 1 == 1 && vertices >> v & 1 == 1 {
                mask |= 1 << i;
            }
        }
        EdgeSubset(mask)
    }

    /// Whether the spanning subgraph `(V, s)` is connected.
    pub fn is_connected_subgraph(&self, s: EdgeSubset) -> bool {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut components = self.n;
        for i in s.edges() {
            let (u, v) = self.edges[i];
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        components == 1
    }

    /// Connectivity of every spanning subgraph, indexed by mask.
    pub fn connected_masks(&self) -> Result<Vec<bool>> {
        self.require_exhaustive()?;
        Ok((0..1u32 << self.m())
            .map(|mask| self.is_connected_subgraph(EdgeSubset(mask)))
            .collect())
    }

    /// Unordered pairs `(S, T)` of nonempty edge sets with vertex-disjoint
    /// supports, each reported once with `S < T`.
    pub fn disjoint_support_pairs(&self) -> Result<Vec<(EdgeSubset, EdgeSubset)>> {
        self.require_exhaustive()?;
        let mut out = Vec::new();
        self.for_each_disjoint_pair(|s, t| {
            if s < t {
                out.push((s, t));
            }
        });
        out.sort_unstable();
        Ok(out)
    }

    /// Visits every ordered pair of nonempty edge sets with disjoint supports.
    pub(crate) fn for_each_disjoint_pair(&self, mut visit: impl FnMut(EdgeSubset, EdgeSubset)) {
        let all_vertices = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        for s in 1..1u32 << self.m() {
            let s = EdgeSubset(s);
            let free = self.induced_edges(all_vertices & !self.support(s)).0;
            let mut t = free;
            while t != 0 {
                visit(s, EdgeSubset(t));
                t = (t - 1) & free;
            }
        }
    }

    /// All automorphisms, found by backtracking with adjacency pruning.
    pub fn automorphisms(&self) -> Result<Vec<VertexPermutation>> {
        if self.n > MAX_AUTOMORPHISM_VERTICES {
            return Err(Error::ExhaustiveLimitExceeded {
                what: "vertices",
                value: self.n,
                limit: MAX_AUTOMORPHISM_VERTICES,
            });
        }
        let mut out = Vec::new();
        let mut image = Vec::with_capacity(self.n);
        let mut used = vec![false; self.n];
        self.extend_automorphism(&mut image, &mut used, &mut out);
        Ok(out)
    }

    fn extend_automorphism(&self, image: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<VertexPermutation>) {
        let v = image.len();
        if v == self.n {
            out.push(VertexPermutation(image.clone()));
            return;
        }
        for w in 0..self.n {
            if used[w] || self.adjacency[w].len() != self.adjacency[v].len() {
                continue;
            }
            let consistent = (0..v).all(|u| self.has_edge(u, v) == self.has_edge(image[u], w));
            if !consistent {
                continue;
            }
            used[w] = true;
            image.push(w);
            self.extend_automorphism(image, used, out);
            image.pop();
            used[w] = false;
        }
    }

    /// Edge permutation induced by an automorphism: edge `i` maps to `result[i]`.
    pub fn edge_permutation(&self, sigma: &VertexPermutation) -> Result<Vec<usize>> {
        self.edges
            .iter()
            .map(|&(u, v)| {
                self.edge_index(sigma.0[u], sigma.0[v])
                    .ok_or_else(|| Error::InvalidGraph("permutation is not an automorphism".into()))
            })
            .collect()
    }

    /// Closure of `seed` under 2-neighbour bootstrap percolation.
    pub fn bootstrap_closure(&self, seed: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut inside = vec![false; self.n];
        let mut count = vec![0usize; self.n];
        let mut queue: Vec<usize> = Vec::new();
        for &v in seed {
            if !inside[v] {
                inside[v] = true;
                queue.push(v);
            }
        }
        while let Some(v) = queue.pop() {
            for &w in &self.adjacency[v] {
                count[w] += 1;
                if !inside[w] && count[w] >= 2 {
                    inside[w] = true;
                    queue.push(w);
                }
            }
        }
        (0..self.n).filter(|&v| inside[v]).collect()
    }

    /// Shells grown from a single vertex; see [`LabeledGraph::shell_partition_from`].
    pub fn shell_partition(&self, v0: usize) -> Result<Vec<BTreeSet<usize>>> {
        self.shell_partition_from(&BTreeSet::from([v0]))
    }

    /// `T_0 = seed` and `T_k = closure(N(T_{k-1})) \ (T_0 ∪ … ∪ T_{k-1})`.
    ///
    /// Every vertex of `T_k` must have at most one neighbour in `T_{k-1}`.
    pub fn shell_partition_from(&self, seed: &BTreeSet<usize>) -> Result<Vec<BTreeSet<usize>>> {
        let mut seen = vec![false; self.n];
        for &v in seed {
            seen[v] = true;
        }
        let mut shells = vec![seed.clone()];
        loop {
            let previous = shells.last().unwrap();
            let boundary: BTreeSet<usize> = previous
                .iter()
                .flat_map(|&v| self.adjacency[v].iter().copied())
                .collect();
            let next: BTreeSet<usize> = self
                .bootstrap_closure(&boundary)
                .into_iter()
                .filter(|&v| !seen[v])
                .collect();
            if next.is_empty() {
                break;
            }
            for &v in &next {
                let count = self.adjacency[v].iter().filter(|w| previous.contains(w)).count();
                if count > 1 {
                    return Err(Error::NotTwoPercolationCompatible {
                        shell: shells.len(),
                        vertex: v,
                        count,
                    });
                }
            }
            for &v in &next {
                seen[v] = true;
            }
            shells.push(next);
        }
        Ok(shells)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            n: self.n,
            edges: self.edges.iter().map(|&(u, v)| [u + 1, v + 1]).collect(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self> {
        let mut edges = Vec::with_capacity(json.edges.len());
        for &[u, v] in &json.edges {
            if u == 0 || v == 0 {
                return Err(Error::InvalidGraph("vertices are 1-based".into()));
            }
            edges.push((u - 1, v - 1));
        }
        Self::new(json.n, edges)
    }
}

/// `{"n": .., "edges": [[u, v], ..]}` with 1-based vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

/// Edgeless graph on `n` vertices.
pub fn make_empty(n: usize) -> Result<LabeledGraph> {
    LabeledGraph::new(n, vec![])
}

pub fn make_path(n: usize) -> Result<LabeledGraph> {
    if n < 2 {
        return Err(Error::InvalidSize(format!("path needs n >= 2, got {n}")));
    }
    LabeledGraph::new(n, (0..n - 1).map(|i| (i, i + 1)).collect())
}

pub fn make_cycle(n: usize) -> Result<LabeledGraph> {
    if n < 3 {
        return Err(Error::InvalidSize(format!("cycle needs n >= 3, got {n}")));
    }
    let mut edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
    edges.push((0, n - 1));
    LabeledGraph::with_sorted_edges(n, edges)
}

pub fn make_complete(n: usize) -> Result<LabeledGraph> {
    if n < 2 {
        return Err(Error::InvalidSize(format!("complete graph needs n >= 2, got {n}")));
    }
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    LabeledGraph::new(n, edges)
}

/// `G □ H` with vertex `(x, u)` at index `x * |V(H)| + u`.
pub fn cartesian_product(g: &LabeledGraph, h: &LabeledGraph) -> Result<LabeledGraph> {
    let k = h.n();
    let mut edges = Vec::new();
    for x in 0..g.n() {
        for &(u, v) in h.edges() {
            edges.push((x * k + u, x * k + v));
        }
    }
    for &(x, y) in g.edges() {
        for u in 0..k {
            edges.push((x * k + u, y * k + u));
        }
    }
    LabeledGraph::with_sorted_edges(g.n() * k, edges)
}

/// `P_len` for any `len >= 1`; a single vertex when `len == 1`.
pub fn path_or_point(len: usize) -> Result<LabeledGraph> {
    if len == 1 {
        make_empty(1)
    } else {
        make_path(len)
    }
}

/// Parses `P<n>`, `C<n>`, `K<n>` (with `K1` the single vertex).
pub fn builtin_graph(name: &str) -> Result<LabeledGraph> {
    let bad = || Error::Parse(format!("unknown graph {name:?}; expected P<n>, C<n> or K<n>"));
    let (kind, rest) = name.split_at(name.char_indices().nth(1).map_or(name.len(), |(i, _)| i));
    let n: usize = rest.parse().map_err(|_| bad())?;
    match kind {
        "P" | "p" => path_or_point(n),
        "C" | "c" => make_cycle(n),
        "K" | "k" if n == 1 => make_empty(1),
        "K" | "k" => make_complete(n),
        _ => Err(bad()),
    }
}
