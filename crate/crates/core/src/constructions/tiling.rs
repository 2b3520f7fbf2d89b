//! Tiling a block model on `P_N × F` along a longer path `P_L × F`.
//!
//! Consecutive blocks share a column. Each shared vertex must be
//! deterministic in both blocks, so the tiled model still has independent
//! vertex states: the left block sees its end state, the right block its
//! start state.

use super::check_probability;
use crate::error::{Error, Result};
use crate::graph::{cartesian_product, make_path, path_or_point, LabeledGraph};
use crate::scalar::Scalar;
use crate::vertex::VertexBasedMeasure;

/// Line model built from copies of a block of `block_length` vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct LineTiling<T> {
    pub block_length: usize,
    pub block: VertexBasedMeasure<T>,
    pub tiled: VertexBasedMeasure<T>,
}

/// Index of the unique positive-probability state, if there is one.
fn deterministic_state<T: Scalar>(dist: &[T]) -> Option<usize> {
    let mut positive = dist.iter().enumerate().filter(|(_, w)| !w.is_zero_value());
    match (positive.next(), positive.next()) {
        (Some((s, _)), None) => Some(s),
        _ => None,
    }
}

#[derive(Clone, Copy)]
enum Column {
    Interior {
        block: usize,
        x: usize,
    },
    /// Column shared by blocks `block - 1` (as its last) and `block` (as its first).
    Shared {
        block: usize,
    },
}

struct Layout {
    k: usize,
    n_block: usize,
    copies: usize,
}

impl Layout {
    fn columns(&self) -> usize {
        self.copies * (self.n_block - 1) + 1
    }

    fn column(&self, x: usize) -> Column {
        let span = self.n_block - 1;
        if x.is_multiple_of(span) && x > 0 && x < self.columns() - 1 {
            Column::Shared { block: x / span }
        } else {
            let block = (x / span).min(self.copies - 1);
            Column::Interior {
                block,
                x: x - block * span,
            }
        }
    }

    /// Block-local vertex and state for a tiled vertex seen from `block`.
    fn local<T: Scalar>(&self, v: usize, state: usize, block: usize, vbm: &VertexBasedMeasure<T>) -> (usize, usize) {
        let (x, u) = (v / self.k, v % self.k);
        match self.column(x) {
            Column::Interior { x, .. } => (x * self.k + u, state),
            Column::Shared { block: right } => {
                let lx = if block == right { 0 } else { self.n_block - 1 };
                let lv = lx * self.k + u;
                (lv, deterministic_state(&vbm.dists()[lv]).unwrap_or(0))
            }
        }
    }
}

/// `copies` blocks glued along shared columns. The block graph must be
/// `P_N × fiber` with the product labelling.
pub fn tile_blocks<T: Scalar>(
    block: &VertexBasedMeasure<T>,
    fiber: &LabeledGraph,
    copies: usize,
) -> Result<VertexBasedMeasure<T>> {
    let k = fiber.n();
    let n = block.graph().n();
    if copies == 0 || k == 0 || !n.is_multiple_of(k) || n / k < 2 {
        return Err(Error::InvalidSize(format!(
            "cannot tile {copies} copies of a {n}-vertex block over a {k}-vertex fiber"
        )));
    }
    let n_block = n / k;
    if cartesian_product(&make_path(n_block)?, fiber)?.edges() != block.graph().edges() {
        return Err(Error::InvalidGraph("block graph is not P_N times the fiber".into()));
    }
    let layout = Layout { k, n_block, copies };
    let first_and_last = [0, n_block - 1];
    if copies > 1 {
        for &x in &first_and_last {
            for u in 0..k {
                if deterministic_state(&block.dists()[x * k + u]).is_none() {
                    return Err(Error::InvalidGraph(format!(
                        "block vertex {} sits on a shared column but is random",
                        x * k + u + 1
                    )));
                }
            }
        }
        // A rung in a shared column must be decided the same way by both blocks.
        for &(u, w) in fiber.edges() {
            let left = block
                .graph()
                .edge_index((n_block - 1) * k + u, (n_block - 1) * k + w)
                .unwrap();
            let right = block.graph().edge_index(u, w).unwrap();
            let state = |v: usize| deterministic_state(&block.dists()[v]).unwrap();
            let from_left = block.is_open(left, state((n_block - 1) * k + u), state((n_block - 1) * k + w));
            let from_right = block.is_open(right, state(u), state(w));
            if from_left != from_right {
                return Err(Error::InvalidGraph(format!(
                    "shared fiber edge {{{}, {}}} is decided differently by adjacent blocks",
                    u + 1,
                    w + 1
                )));
            }
        }
    }
    let graph = cartesian_product(&path_or_point(layout.columns())?, fiber)?;
    let dists = (0..graph.n())
        .map(|v| match layout.column(v / k) {
            Column::Interior { x, .. } => block.dists()[x * k + v % k].clone(),
            Column::Shared { .. } => vec![T::one()],
        })
        .collect();
    let edges = graph.edges().to_vec();
    VertexBasedMeasure::new(graph, dists, |e, sa, sb| {
        let (a, b) = edges[e];
        let owner = match layout.column(a / k) {
            Column::Interior { block, .. } => block,
            Column::Shared { block } => block,
        };
        let (la, sa) = layout.local(a, sa, owner, block);
        let (lb, sb) = layout.local(b, sb, owner, block);
        let local_edge = block.graph().edge_index(la, lb).unwrap();
        block.is_open(local_edge, sa, sb)
    })
}

/// Block on `P_N` for `p < 3/4` with zero connectivity and all edge
/// marginals at least `p`, tiled to cover at least `window_length` vertices.
///
/// Vertex `k` is in state 0 with probability `q_k`, where `q_1 = 0` and
/// `q_k = min((1−p)/(1−q_{k−1}), 1)`; edges are open iff `S_k ≤ S_{k+1}`.
/// Since `1 − q_k = g_k/g_{k−1}` for the path recursion `g`, `q` first reaches
/// 1 at the first `N` with `g_N(p) ≤ 0`, and there the block stops.
pub fn line_tiling_vbm<T: Scalar>(p: &T, window_length: usize) -> Result<LineTiling<T>> {
    check_probability(p)?;
    if *p >= T::from_ratio(3, 4) {
        return Err(Error::AboveThreshold {
            p: p.to_f64(),
            threshold: 0.75,
        });
    }
    let q = T::one() - p.clone();
    let mut zero_probs = vec![T::zero()];
    while *zero_probs.last().unwrap() < T::one() {
        let last = T::one() - zero_probs.last().unwrap().clone();
        let next = if q >= last { T::one() } else { q.clone() / last };
        zero_probs.push(next);
    }
    let block_length = zero_probs.len();
    let dists = zero_probs.into_iter().map(|z| vec![z.clone(), T::one() - z]).collect();
    let block = VertexBasedMeasure::new(make_path(block_length)?, dists, |_, a, b| a <= b)?;
    let span = block_length - 1;
    let copies = window_length.saturating_sub(1).div_ceil(span).max(1);
    let tiled = tile_blocks(&block, &crate::graph::make_empty(1)?, copies)?;
    Ok(LineTiling {
        block_length,
        block,
        tiled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{ladder_vbm, path_g, path_threshold};
    use crate::scalar::{int, ratio, Rational};

    #[test]
    fn block_length_matches_path_thresholds() {
        // p_6 ≈ 0.6920 < 0.7 < p_7 ≈ 0.7071.
        let tiling = line_tiling_vbm(&ratio(7, 10), 20).unwrap();
        assert_eq!(tiling.block_length, 7);
        assert!(path_threshold(6).unwrap() < 0.7 && 0.7 < path_threshold(7).unwrap());
        for p in [ratio(3, 5), ratio(2, 3) + ratio(1, 100), ratio(73, 100)] {
            let n = line_tiling_vbm(&p, 5).unwrap().block_length;
            let g = path_g(n, &p);
            assert!(g[n] <= int(0) && g[..n].iter().all(|x| *x > int(0)));
        }
        assert!(matches!(
            line_tiling_vbm(&ratio(3, 4), 5),
            Err(Error::AboveThreshold { .. })
        ));
    }

    #[test]
    fn block_is_disconnected_with_large_marginals() {
        let p = ratio(7, 10);
        let tiling = line_tiling_vbm(&p, 30).unwrap();
        let mu = tiling.block.to_measure().unwrap();
        assert_eq!(mu.connectivity_probability().unwrap(), int(0));
        assert!(mu.marginals().iter().all(|x| *x >= p));
        let tiled = &tiling.tiled;
        assert!(tiled.graph().n() >= 30);
        assert!(tiled.edge_marginals().iter().all(|x| *x >= p));
    }

    #[test]
    fn single_copy_reproduces_the_block() {
        let tiling = line_tiling_vbm(&ratio(13, 20), 2).unwrap();
        assert_eq!(tiling.tiled, tiling.block);
    }

    #[test]
    fn tiled_ladder_keeps_marginals() {
        let p: Rational = ratio(3, 5);
        let block = ladder_vbm(&p).unwrap();
        let tiled = tile_blocks(&block, &make_path(2).unwrap(), 3).unwrap();
        assert_eq!(tiled.graph().n(), 2 * (3 * 29 + 1));
        assert!(tiled.edge_marginals().iter().all(|x| *x >= p));
    }

    #[test]
    fn random_shared_column_is_rejected() {
        let block = VertexBasedMeasure::new(
            make_path(3).unwrap(),
            vec![vec![ratio(1, 2), ratio(1, 2)]; 3],
            |_, a, b| a <= b,
        )
        .unwrap();
        assert!(tile_blocks(&block, &crate::graph::make_empty(1).unwrap(), 2).is_err());
        assert!(tile_blocks(&block, &crate::graph::make_empty(1).unwrap(), 1).is_ok());
    }
}
