//! Vertex-based measures: independent vertex states and per-edge predicates.

use crate::error::{Error, Result};
use crate::graph::LabeledGraph;
use crate::measure::Measure;
use crate::scalar::Scalar;

/// Cap on `∏ |Ω_v|` for exhaustive conversion to a [`Measure`].
pub const MAX_STATE_SPACE: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct VertexBasedMeasure<T> {
    graph: LabeledGraph,
    dists: Vec<Vec<T>>,
    /// Per edge `(u, v)` with `u < v`: row-major table over `Ω_u × Ω_v`.
    predicates: Vec<Vec<bool>>,
}

impl<T: Scalar> VertexBasedMeasure<T> {
    /// `open(e, s_u, s_v)` decides edge `e = (u, v)`, `u < v`.
    pub fn new(graph: LabeledGraph, dists: Vec<Vec<T>>, open: impl Fn(usize, usize, usize) -> bool) -> Result<Self> {
        if dists.len() != graph.n() {
            return Err(Error::InvalidSize(format!(
                "{} vertex distributions for {} vertices",
                dists.len(),
                graph.n()
            )));
        }
        if let Some(v) = dists.iter().position(|d| d.is_empty()) {
            return Err(Error::InvalidSize(format!("vertex {} has no states", v + 1)));
        }
        let predicates = graph
            .edges()
            .iter()
            .enumerate()
            .map(|(e, &(u, v))| {
                let (a, b) = (dists[u].len(), dists[v].len());
                (0..a * b).map(|i| open(e, i / b, i % b)).collect()
            })
            .collect();
        Ok(VertexBasedMeasure {
            graph,
            dists,
            predicates,
        })
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn dists(&self) -> &[Vec<T>] {
        &self.dists
    }

    pub fn state_count(&self, v: usize) -> usize {
        self.dists[v].len()
    }

    pub fn is_open(&self, edge: usize, su: usize, sv: usize) -> bool {
        let (_, v) = self.graph.edge(edge);
        self.predicates[edge][su * self.dists[v].len() + sv]
    }

    /// Every distribution is non-negative and sums to one.
    pub fn validate(&self) -> Result<()> {
        let tol = if T::EXACT { 0.0 } else { 1e-12 };
        for d in &self.dists {
            if let Some(w) = d.iter().find(|w| w.to_f64() < -tol || (T::EXACT && **w < T::zero())) {
                return Err(Error::NegativeWeight {
                    mask: 0,
                    value: w.to_f64(),
                });
            }
            let total = d.iter().cloned().fold(T::zero(), |a, b| a + b);
            if !total.approx_eq(&T::one(), tol) {
                return Err(Error::MassMismatch { total: total.to_f64() });
            }
        }
        Ok(())
    }

    pub fn edge_marginal(&self, edge: usize) -> T {
        let (u, v) = self.graph.edge(edge);
        let mut acc = T::zero();
        for (su, pu) in self.dists[u].iter().enumerate() {
            for (sv, pv) in self.dists[v].iter().enumerate() {
                if self.is_open(edge, su, sv) {
                    acc = acc + pu.clone() * pv.clone();
                }
            }
        }
        acc
    }

    pub fn edge_marginals(&self) -> Vec<T> {
        (0..self.graph.m()).map(|e| self.edge_marginal(e)).collect()
    }

    pub fn edge_probability(&self) -> T {
        self.edge_marginals()
            .into_iter()
            .reduce(T::min_value)
            .unwrap_or_else(T::one)
    }

    pub fn open_edges(&self, states: &[usize]) -> Vec<bool> {
        self.graph
            .edges()
            .iter()
            .enumerate()
            .map(|(e, &(u, v))| self.is_open(e, states[u], states[v]))
            .collect()
    }

    /// State of `v` for a uniform draw `x ∈ [0, 1)`.
    pub fn draw_state(&self, v: usize, x: f64) -> usize {
        let d = &self.dists[v];
        let mut acc = 0.0;
        for (s, w) in d.iter().enumerate() {
            acc += w.to_f64();
            if x < acc {
                return s;
            }
        }
        // Rounding can leave `acc` a hair below one; fall back to the last
        // state with positive weight.
        d.iter().rposition(|w| w.to_f64() > 0.0).unwrap_or(d.len() - 1)
    }

    /// Pushes the product of vertex laws through the predicates.
    pub fn to_measure(&self) -> Result<Measure<T>> {
        self.graph.require_exhaustive()?;
        let size = self
            .dists
            .iter()
            .try_fold(1u128, |acc, d| acc.checked_mul(d.len() as u128))
            .unwrap_or(u128::MAX);
        if size > MAX_STATE_SPACE {
            return Err(Error::StateSpaceTooLarge(size));
        }
        // Edges decided once their larger endpoint gets a state.
        let mut closing: Vec<Vec<usize>> = vec![Vec::new(); self.graph.n()];
        for (e, &(_, v)) in self.graph.edges().iter().enumerate() {
            closing[v].push(e);
        }
        let mut weights = vec![T::zero(); 1usize << self.graph.m()];
        let mut states = vec![0usize; self.graph.n()];
        self.accumulate(0, T::one(), 0, &mut states, &closing, &mut weights);
        let measure = Measure::new(self.graph.clone(), weights)?;
        Ok(if T::EXACT {
            measure
        } else {
            measure.with_tolerance(1e-12)
        })
    }

    fn accumulate(
        &self,
        v: usize,
        prob: T,
        mask: usize,
        states: &mut Vec<usize>,
        closing: &[Vec<usize>],
        weights: &mut [T],
    ) {
        if v == self.graph.n() {
            weights[mask] = weights[mask].clone() + prob;
            return;
        }
        for (s, w) in self.dists[v].iter().enumerate() {
            if w.is_zero_value() {
                continue;
            }
            states[v] = s;
            let mut next = mask;
            for &e in &closing[v] {
                let (u, _) = self.graph.edge(e);
                if self.is_open(e, states[u], s) {
                    next |= 1 << e;
                }
            }
            self.accumulate(v + 1, prob.clone() * w.clone(), next, states, closing, weights);
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> VertexBasedMeasure<U> {
        VertexBasedMeasure {
            graph: self.graph.clone(),
            dists: self.dists.iter().map(|d| d.iter().map(&f).collect()).collect(),
            predicates: self.predicates.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_complete, make_path};
    use crate::scalar::{int, ratio, Rational};

    fn red_blue(n: usize, theta: Rational) -> VertexBasedMeasure<Rational> {
        let g = make_complete(n).unwrap();
        let d = vec![theta.clone(), int(1) - theta];
        VertexBasedMeasure::new(g, vec![d; n], |_, a, b| a == b).unwrap()
    }

    #[test]
    fn red_blue_marginals_and_independence() {
        let theta = ratio(2, 3);
        let vbm = red_blue(4, theta.clone());
        let expected = theta.clone() * theta.clone() + (int(1) - &theta) * (int(1) - &theta);
        assert!(vbm.edge_marginals().iter().all(|x| *x == expected));
        let mu = vbm.to_measure().unwrap();
        mu.validate().unwrap();
        assert_eq!(mu.marginals(), vbm.edge_marginals());
        let ind = mu.check_one_independence().unwrap();
        assert!(ind.passed && ind.restriction_passed);
        // connected iff monochromatic
        let mono = theta.clone().powi(4) + (int(1) - theta).powi(4);
        assert_eq!(mu.connectivity_probability().unwrap(), mono);
    }

    #[test]
    fn state_space_cap() {
        let g = make_path(8).unwrap();
        let d: Vec<Rational> = (0..8).map(|_| ratio(1, 8)).collect();
        let vbm = VertexBasedMeasure::new(g, vec![d; 8], |_, a, b| a <= b).unwrap();
        assert!(matches!(vbm.to_measure(), Err(Error::StateSpaceTooLarge(_))));
    }

    #[test]
    fn draws_follow_cumulative_weights() {
        let g = make_path(2).unwrap();
        let d = vec![ratio(1, 4), int(0), ratio(3, 4)];
        let vbm = VertexBasedMeasure::new(g, vec![d.clone(), d], |_, a, b| a == b).unwrap();
        assert_eq!(vbm.draw_state(0, 0.1), 0);
        assert_eq!(vbm.draw_state(0, 0.3), 2);
        assert_eq!(vbm.draw_state(0, 0.999_999_999_999), 2);
    }
}
