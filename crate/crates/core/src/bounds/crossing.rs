//! Column-by-column dynamic programmes on `P_ℓ × G` for a small fiber `G`.
//!
//! A DP state records the vertex states of the current column and how its
//! vertices are joined through columns already processed: a set partition of
//! the fiber (labels in order of first appearance), plus a flag per block
//! saying whether it reaches the first column. Tracking full partitions keeps
//! the programme exact when the fiber has cycles.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{cartesian_product, path_or_point, Dsu, LabeledGraph};
use crate::scalar::Scalar;
use crate::vertex::VertexBasedMeasure;

/// Largest fiber handled by the programmes.
pub const MAX_CROSSING_FIBER: usize = 3;
/// Most states per vertex.
pub const MAX_CROSSING_STATES: usize = 4;
pub const MAX_CROSSING_LENGTH: usize = 10_000;

/// Edge indices of a `P_ℓ × G` vertex-based measure, grouped by column.
#[derive(Debug, Clone)]
pub struct CrossingLayout {
    pub k: usize,
    pub len: usize,
    /// Per column: `(edge, u, w)` for fiber edges inside it.
    fiber: Vec<Vec<(usize, usize, usize)>>,
    /// Per column `x < ℓ − 1`: edge joining `(x, u)` to `(x + 1, u)`.
    horizontal: Vec<Vec<usize>>,
}

impl CrossingLayout {
    pub fn new<T: Scalar>(vbm: &VertexBasedMeasure<T>, fiber: &LabeledGraph) -> Result<Self> {
        let k = fiber.n();
        if k == 0 || k > MAX_CROSSING_FIBER {
            return Err(Error::FiberTooLarge(format!(
                "fiber has {k} vertices, limit {MAX_CROSSING_FIBER}"
            )));
        }
        let g = vbm.graph();
        if !g.n().is_multiple_of(k) {
            return Err(Error::InvalidGraph(
                "vertex count is not a multiple of the fiber".into(),
            ));
        }
        let len = g.n() / k;
        if len > MAX_CROSSING_LENGTH {
            return Err(Error::ExhaustiveLimitExceeded {
                what: "columns",
                value: len,
                limit: MAX_CROSSING_LENGTH,
            });
        }
        if let Some(v) = (0..g.n()).find(|&v| vbm.state_count(v) > MAX_CROSSING_STATES) {
            return Err(Error::FiberTooLarge(format!(
                "vertex {} has {} states, limit {MAX_CROSSING_STATES}",
                v + 1,
                vbm.state_count(v)
            )));
        }
        if cartesian_product(&path_or_point(len)?, fiber)?.edges() != g.edges() {
            return Err(Error::InvalidGraph("graph is not P_len times the fiber".into()));
        }
        let fiber_edges = (0..len)
            .map(|x| {
                fiber
                    .edges()
                    .iter()
                    .map(|&(u, w)| (g.edge_index(x * k + u, x * k + w).unwrap(), u, w))
                    .collect()
            })
            .collect();
        let horizontal = (0..len.saturating_sub(1))
            .map(|x| {
                (0..k)
                    .map(|u| g.edge_index(x * k + u, (x + 1) * k + u).unwrap())
                    .collect()
            })
            .collect();
        Ok(CrossingLayout {
            k,
            len,
            fiber: fiber_edges,
            horizontal,
        })
    }
}

/// Small union-find over at most `2k` nodes.
/// Every joint state assignment of one column, with its index tuple.
fn column_assignments(counts: &[usize]) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for &c in counts {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..c).map(move |s| {
                    let mut next = prefix.clone();
                    next.push(s as u8);
                    next
                })
            })
            .collect();
    }
    out
}

/// Relabels roots in order of first appearance.
fn canonical(roots: &[usize]) -> Vec<u8> {
    let mut seen: Vec<usize> = Vec::new();
    roots
        .iter()
        .map(|r| match seen.iter().position(|s| s == r) {
            Some(i) => i as u8,
            None => {
                seen.push(*r);
                (seen.len() - 1) as u8
            }
        })
        .collect()
}

struct Step {
    /// Canonical labels of the new column.
    labels: Vec<u8>,
    /// For each old block, the new label it joined (if any).
    old_to_new: Vec<Option<u8>>,
    new_blocks: usize,
}

/// Merges column `x` (partition `labels`, states `a`) with column `x + 1`
/// (states `b`). Nodes `0..k` are old vertices, `k..2k` new ones.
fn advance<T: Scalar>(
    vbm: &VertexBasedMeasure<T>,
    layout: &CrossingLayout,
    x: usize,
    labels: &[u8],
    a: &[u8],
    b: &[u8],
) -> Step {
    let k = layout.k;
    let mut dsu = Dsu::new(2 * k);
    for u in 0..k {
        for w in u + 1..k {
            if labels[u] == labels[w] {
                dsu.union(u, w);
            }
        }
    }
    for (u, &e) in layout.horizontal[x].iter().enumerate() {
        if vbm.is_open(e, a[u] as usize, b[u] as usize) {
            dsu.union(u, k + u);
        }
    }
    for &(e, u, w) in &layout.fiber[x + 1] {
        if vbm.is_open(e, b[u] as usize, b[w] as usize) {
            dsu.union(k + u, k + w);
        }
    }
    let roots: Vec<usize> = (k..2 * k).map(|v| dsu.find(v)).collect();
    let labels_new = canonical(&roots);
    let blocks = labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
    let mut old_to_new = vec![None; blocks];
    for u in 0..k {
        let r = dsu.find(u);
        if let Some(i) = roots.iter().position(|&s| s == r) {
            old_to_new[labels[u] as usize] = Some(labels_new[i]);
        }
    }
    let new_blocks = labels_new.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
    Step {
        labels: labels_new,
        old_to_new,
        new_blocks,
    }
}

fn first_column_labels<T: Scalar>(vbm: &VertexBasedMeasure<T>, layout: &CrossingLayout, s: &[u8]) -> Vec<u8> {
    let mut dsu = Dsu::new(layout.k);
    for &(e, u, w) in &layout.fiber[0] {
        if vbm.is_open(e, s[u] as usize, s[w] as usize) {
            dsu.union(u, w);
        }
    }
    let roots: Vec<usize> = (0..layout.k).map(|v| dsu.find(v)).collect();
    canonical(&roots)
}

fn column_probability<T: Scalar>(vbm: &VertexBasedMeasure<T>, k: usize, x: usize, s: &[u8]) -> T {
    s.iter().enumerate().fold(T::one(), |acc, (u, &si)| {
        acc * vbm.dists()[x * k + u][si as usize].clone()
    })
}

/// Probability of an open path from the first column to the last.
pub fn exact_crossing_probability<T: Scalar>(vbm: &VertexBasedMeasure<T>, fiber: &LabeledGraph) -> Result<T> {
    let layout = CrossingLayout::new(vbm, fiber)?;
    let k = layout.k;
    let counts = |x: usize| (0..k).map(|u| vbm.state_count(x * k + u)).collect::<Vec<_>>();
    // Key: (column states, labels, left-face flag per block as a bitmask).
    type Key = (Vec<u8>, Vec<u8>, u8);
    let mut layer: BTreeMap<Key, T> = BTreeMap::new();
    for s in column_assignments(&counts(0)) {
        let w = column_probability(vbm, k, 0, &s);
        if w.is_zero_value() {
            continue;
        }
        let labels = first_column_labels(vbm, &layout, &s);
        let flags = (1u8 << k) - 1;
        let entry = layer.entry((s, labels, flags)).or_insert_with(T::zero);
        *entry = entry.clone() + w;
    }
    for x in 0..layout.len - 1 {
        let next_assignments: Vec<(Vec<u8>, T)> = column_assignments(&counts(x + 1))
            .into_iter()
            .map(|s| {
                let w = column_probability(vbm, k, x + 1, &s);
                (s, w)
            })
            .filter(|(_, w)| !w.is_zero_value())
            .collect();
        let mut next: BTreeMap<Key, T> = BTreeMap::new();
        for ((a, labels, flags), w) in &layer {
            for (b, wb) in &next_assignments {
                let step = advance(vbm, &layout, x, labels, a, b);
                let mut new_flags = 0u8;
                for (old, new) in step.old_to_new.iter().enumerate() {
                    if let Some(n) = new {
                        if flags >> old & 1 == 1 {
                            new_flags |= 1 << n;
                        }
                    }
                }
                // A crossing is dead once no block touches the left face.
                let entry = next.entry((b.clone(), step.labels, new_flags)).or_insert_with(T::zero);
                *entry = entry.clone() + w.clone() * wb.clone();
            }
        }
        layer = next;
    }
    Ok(layer
        .into_iter()
        .filter(|((_, _, flags), _)| *flags != 0)
        .fold(T::zero(), |acc, (_, w)| acc + w))
}

/// Largest open component over all configurations of positive probability.
pub fn max_component_size<T: Scalar>(vbm: &VertexBasedMeasure<T>, fiber: &LabeledGraph) -> Result<usize> {
    let layout = CrossingLayout::new(vbm, fiber)?;
    let k = layout.k;
    let counts = |x: usize| (0..k).map(|u| vbm.state_count(x * k + u)).collect::<Vec<_>>();
    let possible = |x: usize| -> Vec<Vec<u8>> {
        column_assignments(&counts(x))
            .into_iter()
            .filter(|s| !column_probability(vbm, k, x, s).is_zero_value())
            .collect()
    };
    // Key: (column states, labels, block sizes); value: largest finished component.
    type Key = (Vec<u8>, Vec<u8>, Vec<usize>);
    let mut layer: BTreeMap<Key, usize> = BTreeMap::new();
    for s in possible(0) {
        let labels = first_column_labels(vbm, &layout, &s);
        let blocks = labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
        let mut sizes = vec![0usize; blocks];
        for &l in &labels {
            sizes[l as usize] += 1;
        }
        layer.insert((s, labels, sizes), 0);
    }
    for x in 0..layout.len - 1 {
        let next_assignments = possible(x + 1);
        let mut next: BTreeMap<Key, usize> = BTreeMap::new();
        for ((a, labels, sizes), &closed) in &layer {
            for b in &next_assignments {
                let step = advance(vbm, &layout, x, labels, a, b);
                let mut new_sizes = vec![0usize; step.new_blocks];
                for &l in &step.labels {
                    new_sizes[l as usize] += 1;
                }
                let mut finished = closed;
                for (old, new) in step.old_to_new.iter().enumerate() {
                    match new {
                        Some(n) => new_sizes[*n as usize] += sizes[old],
                        None => finished = finished.max(sizes[old]),
                    }
                }
                let entry = next.entry((b.clone(), step.labels, new_sizes)).or_insert(0);
                *entry = (*entry).max(finished);
            }
        }
        layer = next;
    }
    Ok(layer
        .into_iter()
        .map(|((_, _, sizes), closed)| sizes.into_iter().max().unwrap_or(0).max(closed))
        .max()
        .unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{ladder_vbm, path_vbm};
    use crate::graph::{make_complete, make_empty, make_path};
    use crate::scalar::{int, ratio, Rational};

    /// Joint-state enumeration with a breadth-first search per configuration.
    fn crossing_oracle(vbm: &VertexBasedMeasure<Rational>, k: usize) -> Rational {
        let g = vbm.graph();
        let n = g.n();
        let len = n / k;
        let mut total = int(0);
        let mut states = vec![0usize; n];
        loop {
            let w = (0..n).fold(int(1), |acc, v| acc * &vbm.dists()[v][states[v]]);
            if w != int(0) {
                let open = vbm.open_edges(&states);
                let mut seen = vec![false; n];
                let mut stack: Vec<usize> = (0..k).collect();
                for &v in &stack {
                    seen[v] = true;
                }
                while let Some(v) = stack.pop() {
                    for (e, &(a, b)) in g.edges().iter().enumerate() {
                        let other = if a == v {
                            b
                        } else if b == v {
                            a
                        } else {
                            continue;
                        };
                        if open[e] && !seen[other] {
                            seen[other] = true;
                            stack.push(other);
                        }
                    }
                }
                if ((len - 1) * k..n).any(|v| seen[v]) {
                    total += w;
                }
            }
            let mut i = 0;
            loop {
                if i == n {
                    return total;
                }
                states[i] += 1;
                if states[i] < vbm.state_count(i) {
                    break;
                }
                states[i] = 0;
                i += 1;
            }
        }
    }

    fn triangle_line(len: usize, p: Rational) -> VertexBasedMeasure<Rational> {
        let fiber = make_complete(3).unwrap();
        let g = cartesian_product(&path_or_point(len).unwrap(), &fiber).unwrap();
        let d = vec![p.clone(), ratio(1, 3), int(1) - &p - ratio(1, 3)];
        VertexBasedMeasure::new(g, vec![d; 3 * len], |e, a, b| (a + b + e) % 3 != 0).unwrap()
    }

    #[test]
    fn matches_enumeration_on_triangle_fibers() {
        for len in 1..=3 {
            let vbm = triangle_line(len, ratio(1, 4));
            let fiber = make_complete(3).unwrap();
            assert_eq!(
                exact_crossing_probability(&vbm, &fiber).unwrap(),
                crossing_oracle(&vbm, 3)
            );
        }
    }

    #[test]
    fn path_crossing_is_connectivity() {
        let p = 0.8f64;
        let vbm = path_vbm(3, &ratio(79, 100)).unwrap().map(|x| x.to_f64());
        let c = exact_crossing_probability(&vbm, &make_empty(1).unwrap()).unwrap();
        let g3 = 2.0 * 0.79 - 1.0;
        assert!((c - g3).abs() < 1e-12, "{c} vs {g3} at p ≈ {p}");
    }

    #[test]
    fn ladder_blocks_never_cross() {
        let vbm = ladder_vbm(&ratio(3, 5)).unwrap();
        let rung = make_path(2).unwrap();
        assert_eq!(exact_crossing_probability(&vbm, &rung).unwrap(), int(0));
        assert!(max_component_size(&vbm, &rung).unwrap() < 60);
    }

    #[test]
    fn max_component_on_a_certain_path() {
        let g = make_path(4).unwrap();
        let vbm = VertexBasedMeasure::new(g, vec![vec![int(1)]; 4], |e, _, _| e != 1).unwrap();
        assert_eq!(max_component_size(&vbm, &make_empty(1).unwrap()).unwrap(), 2);
        assert!(matches!(
            CrossingLayout::new(&vbm, &make_path(4).unwrap()),
            Err(Error::FiberTooLarge(_))
        ));
    }
}
