//! Probability measures on the spanning subgraphs of a small graph.
//!
//! A measure stores one weight per edge mask, so `weights.len() == 2^m`.

use crate::error::{Error, Result};
use crate::graph::{EdgeSubset, LabeledGraph};
use crate::scalar::Scalar;

pub use crate::vertex::VertexBasedMeasure;

/// Tolerance used by float measures unless stated otherwise.
pub const DEFAULT_FLOAT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Measure<T> {
    graph: LabeledGraph,
    weights: Vec<T>,
    tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport<T> {
    pub total_mass: T,
    pub marginals: Vec<T>,
}

/// Verdict, worst violation, and a witness pair if the product law fails.
pub type KIndependence<T> = (bool, T, Option<(EdgeSubset, EdgeSubset)>);

#[derive(Debug, Clone, PartialEq)]
pub struct IndependenceReport<T> {
    /// Verdict of the upward product law over disjoint-support pairs.
    pub passed: bool,
    /// `max |μ↑(S ∪ T) − μ↑(S) μ↑(T)|` over the pairs checked.
    pub worst_violation: T,
    pub witness: Option<(EdgeSubset, EdgeSubset)>,
    /// Verdict of the induced-restriction law, computed independently.
    pub restriction_passed: bool,
    pub restriction_witness: Option<(EdgeSubset, EdgeSubset)>,
}

impl<T> IndependenceReport<T> {
    pub fn routes_agree(&self) -> bool {
        self.passed == self.restriction_passed
    }
}

impl<T: Scalar> Measure<T> {
    /// Wraps a weight vector without validating it; see [`Measure::validate`].
    pub fn new(graph: LabeledGraph, weights: Vec<T>) -> Result<Self> {
        graph.require_exhaustive()?;
        if weights.len() != 1usize << graph.m() {
            return Err(Error::InvalidSize(format!(
                "expected {} weights, got {}",
                1usize << graph.m(),
                weights.len()
            )));
        }
        let tolerance = if T::EXACT { 0.0 } else { DEFAULT_FLOAT_TOLERANCE };
        Ok(Measure {
            graph,
            weights,
            tolerance,
        })
    }

    /// Builds from `(mask, weight)` pairs; unspecified masks get zero.
    pub fn from_support(graph: LabeledGraph, support: Vec<(EdgeSubset, T)>) -> Result<Self> {
        graph.require_exhaustive()?;
        let mut weights = vec![T::zero(); 1usize << graph.m()];
        for (mask, w) in support {
            weights[mask.0 as usize] = weights[mask.0 as usize].clone() + w;
        }
        Self::new(graph, weights)
    }

    /// Independent edges, each open with probability `p`.
    pub fn product(graph: LabeledGraph, p: &T) -> Result<Self> {
        graph.require_exhaustive()?;
        let m = graph.m();
        let q = T::one() - p.clone();
        let weights = (0..1u32 << m)
            .map(|mask| {
                let k = mask.count_ones();
                p.powi(k) * q.powi(m as u32 - k)
            })
            .collect();
        Self::new(graph, weights)
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = if T::EXACT { 0.0 } else { tolerance };
        self
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn weight(&self, mask: EdgeSubset) -> &T {
        &self.weights[mask.0 as usize]
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn into_weights(self) -> Vec<T> {
        self.weights
    }

    fn negative_threshold(&self) -> T {
        -float_as::<T>(self.tolerance)
    }

    pub fn total_mass(&self) -> T {
        self.weights.iter().cloned().fold(T::zero(), |a, b| a + b)
    }

    pub fn validate(&self) -> Result<ValidationReport<T>> {
        let floor = self.negative_threshold();
        for (mask, w) in self.weights.iter().enumerate() {
            if *w < floor {
                return Err(Error::NegativeWeight {
                    mask: mask as u32,
                    value: w.to_f64(),
                });
            }
        }
        let total_mass = self.total_mass();
        if !total_mass.approx_eq(&T::one(), self.tolerance * self.weights.len() as f64) {
            return Err(Error::MassMismatch {
                total: total_mass.to_f64(),
            });
        }
        Ok(ValidationReport {
            total_mass,
            marginals: self.marginals(),
        })
    }

    pub fn marginal(&self, edge: usize) -> T {
        self.weights
            .iter()
            .enumerate()
            .filter(|(mask, _)| mask >> edge & 1 == 1)
            .fold(T::zero(), |a, (_, w)| a + w.clone())
    }

    pub fn marginals(&self) -> Vec<T> {
        (0..self.graph.m()).map(|e| self.marginal(e)).collect()
    }

    /// `μ(S ⊆ H)`.
    pub fn upward_marginal(&self, s: EdgeSubset) -> T {
        self.weights
            .iter()
            .enumerate()
            .filter(|(mask, _)| EdgeSubset(*mask as u32).contains(s))
            .fold(T::zero(), |a, (_, w)| a + w.clone())
    }

    /// Every upward marginal at once, by the superset-sum transform.
    pub fn upward_marginals(&self) -> Vec<T> {
        let mut up = self.weights.clone();
        for e in 0..self.graph.m() {
            let bit = 1usize << e;
            for mask in 0..up.len() {
                if mask & bit == 0 {
                    let above = up[mask | bit].clone();
                    up[mask] = up[mask].clone() + above;
                }
            }
        }
        up
    }

    /// Minimum edge marginal; `1` for an edgeless graph.
    pub fn edge_probability(&self) -> T {
        self.marginals().into_iter().reduce(T::min_value).unwrap_or_else(T::one)
    }

    /// Checks the product law `μ↑(S ∪ T) = μ↑(S) μ↑(T)` over every pair of
    /// edge sets at vertex distance at least `k`.
    pub fn check_k_independence(&self, k: usize) -> Result<KIndependence<T>> {
        if k == 0 {
            return Err(Error::OutOfRange("k must be at least 1".into()));
        }
        let g = &self.graph;
        let up = self.upward_marginals();
        let distance = all_pairs_distance(g);
        let all = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
        let mut worst = T::zero();
        let mut witness = None;
        for s in 1..1u32 << g.m() {
            let support = g.support(EdgeSubset(s));
            let mut blocked = 0u64;
            for v in 0..g.n() {
                if (0..g.n()).any(|u| support >> u & 1 == 1 && distance[u][v] < k) {
                    blocked |= 1 << v;
                }
            }
            let free = g.induced_edges(all & !blocked).0;
            let mut t = free;
            while t != 0 {
                if s < t {
                    let joint = up[(s | t) as usize].clone();
                    let product = up[s as usize].clone() * up[t as usize].clone();
                    let gap = (joint - product).abs_value();
                    if gap > worst {
                        worst = gap;
                        witness = Some((EdgeSubset(s), EdgeSubset(t)));
                    }
                }
                t = (t - 1) & free;
            }
        }
        let passed = worst <= float_as::<T>(self.tolerance);
        Ok((passed, worst, witness))
    }

    /// Runs both 1-independence formulations and reports each verdict.
    pub fn check_one_independence(&self) -> Result<IndependenceReport<T>> {
        let (passed, worst_violation, witness) = self.check_k_independence(1)?;
        let (restriction_passed, restriction_witness) = self.check_restriction_law();
        Ok(IndependenceReport {
            passed,
            worst_violation,
            witness: if passed { None } else { witness },
            restriction_passed,
            restriction_witness,
        })
    }

    /// `μ(H[A] = G1, H[B] = G2) = μ(H[A] = G1) μ(H[B] = G2)` for every split
    /// `V = A ⊔ B`. Smaller disjoint pairs follow by marginalising.
    fn check_restriction_law(&self) -> (bool, Option<(EdgeSubset, EdgeSubset)>) {
        let g = &self.graph;
        let n = g.n();
        let tol = float_as::<T>(self.tolerance);
        for rest in 0..1u64 << (n - 1) {
            let a = (rest << 1) | 1;
            let b = !a & if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            let ea: Vec<usize> = g.induced_edges(a).edges().collect();
            let eb: Vec<usize> = g.induced_edges(b).edges().collect();
            if ea.is_empty() || eb.is_empty() {
                continue;
            }
            let (na, nb) = (1usize << ea.len(), 1usize << eb.len());
            let mut joint = vec![T::zero(); na * nb];
            for (mask, w) in self.weights.iter().enumerate() {
                let ia = compress(mask, &ea);
                let ib = compress(mask, &eb);
                joint[ia * nb + ib] = joint[ia * nb + ib].clone() + w.clone();
            }
            let mut left = vec![T::zero(); na];
            let mut right = vec![T::zero(); nb];
            for ia in 0..na {
                for ib in 0..nb {
                    left[ia] = left[ia].clone() + joint[ia * nb + ib].clone();
                    right[ib] = right[ib].clone() + joint[ia * nb + ib].clone();
                }
            }
            for ia in 0..na {
                for ib in 0..nb {
                    let gap = (joint[ia * nb + ib].clone() - left[ia].clone() * right[ib].clone()).abs_value();
                    if gap > tol {
                        return (false, Some((expand(ia, &ea), expand(ib, &eb))));
                    }
                }
            }
        }
        (true, None)
    }

    /// Thins each edge independently so every marginal becomes `p_target`.
    pub fn sparsify(&self, p_target: &T) -> Result<Self> {
        let marginals = self.marginals();
        let mut weights = self.weights.clone();
        for (e, marginal) in marginals.iter().enumerate() {
            if *p_target > marginal.clone() + float_as::<T>(self.tolerance) {
                return Err(Error::TargetAboveMarginal {
                    edge: e,
                    target: p_target.to_f64(),
                    marginal: marginal.to_f64(),
                });
            }
            let keep = if marginal.is_zero_value() {
                T::zero()
            } else {
                p_target.clone() / marginal.clone()
            };
            let bit = 1usize << e;
            for mask in 0..weights.len() {
                if mask & bit != 0 {
                    let w = weights[mask].clone();
                    weights[mask] = w.clone() * keep.clone();
                    weights[mask ^ bit] = weights[mask ^ bit].clone() + w * (T::one() - keep.clone());
                }
            }
        }
        Ok(Measure {
            graph: self.graph.clone(),
            weights,
            tolerance: self.tolerance,
        })
    }

    /// `μ(H is connected)`.
    pub fn connectivity_probability(&self) -> Result<T> {
        let connected = self.graph.connected_masks()?;
        Ok(self
            .weights
            .iter()
            .zip(connected)
            .filter(|(_, c)| *c)
            .fold(T::zero(), |a, (w, _)| a + w.clone()))
    }

    /// Average of the measure over the automorphism group of the graph.
    pub fn symmetrize(&self) -> Result<Self> {
        let group = self.graph.automorphisms()?;
        let size = T::from_int(group.len() as i64);
        let mut weights = vec![T::zero(); self.weights.len()];
        for sigma in &group {
            let image = self.graph.edge_permutation(sigma)?;
            for (mask, w) in weights.iter_mut().enumerate() {
                let moved = permute_mask(mask, &image);
                *w = w.clone() + self.weights[moved].clone();
            }
        }
        for w in &mut weights {
            *w = w.clone() / size.clone();
        }
        Ok(Measure {
            graph: self.graph.clone(),
            weights,
            tolerance: self.tolerance,
        })
    }

    /// Law of the complementary subgraph `E \ H`.
    pub fn complement(&self) -> Self {
        let full = self.weights.len() - 1;
        let weights = (0..self.weights.len())
            .map(|mask| self.weights[full ^ mask].clone())
            .collect();
        Measure {
            graph: self.graph.clone(),
            weights,
            tolerance: self.tolerance,
        }
    }

    pub fn to_f64(&self) -> Measure<f64> {
        Measure {
            graph: self.graph.clone(),
            weights: self.weights.iter().map(Scalar::to_f64).collect(),
            tolerance: if T::EXACT {
                DEFAULT_FLOAT_TOLERANCE
            } else {
                self.tolerance
            },
        }
    }
}

impl<T: Scalar> Measure<T> {
    /// Clamps weights in `[-tolerance, 0)` to zero and renormalises. Exact
    /// types have zero tolerance, so any negative weight is an error.
    pub fn from_weights_clamped(graph: LabeledGraph, mut weights: Vec<T>, tolerance: f64) -> Result<Self> {
        let tolerance = if T::EXACT { 0.0 } else { tolerance };
        for (mask, w) in weights.iter_mut().enumerate() {
            if w.to_f64() < -tolerance || (T::EXACT && *w < T::zero()) {
                return Err(Error::NegativeWeight {
                    mask: mask as u32,
                    value: w.to_f64(),
                });
            }
            if *w < T::zero() {
                *w = T::zero();
            }
        }
        let total = weights.iter().cloned().fold(T::zero(), |a, b| a + b);
        if !total.approx_eq(&T::one(), tolerance * weights.len() as f64) {
            return Err(Error::MassMismatch { total: total.to_f64() });
        }
        if !T::EXACT {
            for w in &mut weights {
                *w = w.clone() / total.clone();
            }
        }
        Ok(Measure::new(graph, weights)?.with_tolerance(tolerance))
    }
}

fn float_as<T: Scalar>(x: f64) -> T {
    if T::EXACT {
        T::zero()
    } else {
        // Exact for f64 since the conversion goes through a dyadic rational.
        T::from_rational(&num::BigRational::from_float(x).unwrap_or_default())
    }
}

fn compress(mask: usize, positions: &[usize]) -> usize {
    positions
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &e)| acc | ((mask >> e & 1) << i))
}

fn expand(index: usize, positions: &[usize]) -> EdgeSubset {
    EdgeSubset(
        positions
            .iter()
            .enumerate()
            .fold(0u32, |acc, (i, &e)| acc | (((index >> i & 1) as u32) << e)),
    )
}

fn permute_mask(mask: usize, image: &[usize]) -> usize {
    image
        .iter()
        .enumerate()
        .fold(0, |acc, (e, &f)| acc | ((mask >> e & 1) << f))
}

fn all_pairs_distance(g: &LabeledGraph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut dist = vec![vec![usize::MAX; n]; n];
    for (s, row) in dist.iter_mut().enumerate() {
        row[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbours(v) {
                if row[w] == usize::MAX {
                    row[w] = row[v] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_complete, make_cycle, make_path};
    use crate::scalar::{int, ratio, Rational};

    fn all_or_nothing(g: LabeledGraph) -> Measure<Rational> {
        let full = g.full_subset();
        Measure::from_support(g, vec![(EdgeSubset(0), ratio(1, 2)), (full, ratio(1, 2))]).unwrap()
    }

    #[test]
    fn product_measure_is_one_independent() {
        let g = make_cycle(5).unwrap();
        let mu = Measure::product(g, &ratio(2, 7)).unwrap();
        let report = mu.validate().unwrap();
        assert_eq!(report.total_mass, int(1));
        assert!(report.marginals.iter().all(|x| *x == ratio(2, 7)));
        let ind = mu.check_one_independence().unwrap();
        assert!(ind.passed && ind.restriction_passed);
        assert_eq!(ind.worst_violation, int(0));
    }

    #[test]
    fn all_or_nothing_fails_on_p4() {
        let mu = all_or_nothing(make_path(4).unwrap());
        let ind = mu.check_one_independence().unwrap();
        assert!(!ind.passed && !ind.restriction_passed);
        assert_eq!(ind.witness, Some((EdgeSubset(0b001), EdgeSubset(0b100))));
        assert_eq!(ind.worst_violation, ratio(1, 4));
    }

    #[test]
    fn all_or_nothing_on_p3_is_vacuously_independent() {
        let mu = all_or_nothing(make_path(3).unwrap());
        let ind = mu.check_one_independence().unwrap();
        assert!(ind.passed && ind.restriction_passed);
    }

    #[test]
    fn negative_and_unnormalised_weights_are_reported() {
        let g = make_path(2).unwrap();
        let neg = Measure::new(g.clone(), vec![ratio(3, 2), ratio(-1, 2)]).unwrap();
        assert!(matches!(neg.validate(), Err(Error::NegativeWeight { mask: 1, .. })));
        let short = Measure::new(g, vec![ratio(1, 2), ratio(1, 4)]).unwrap();
        assert!(matches!(short.validate(), Err(Error::MassMismatch { .. })));
    }

    #[test]
    fn sparsify_hits_the_target_and_is_idempotent() {
        let g = make_path(3).unwrap();
        let mu = Measure::from_support(
            g,
            vec![
                (EdgeSubset(0b11), ratio(1, 2)),
                (EdgeSubset(0b01), ratio(1, 4)),
                (EdgeSubset(0), ratio(1, 4)),
            ],
        )
        .unwrap();
        let low = mu.edge_probability();
        assert_eq!(low, ratio(1, 2));
        let thin = mu.sparsify(&low).unwrap();
        assert_eq!(thin.marginals(), vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(thin.sparsify(&low).unwrap(), thin);
        assert!(matches!(
            mu.sparsify(&ratio(4, 5)),
            Err(Error::TargetAboveMarginal { .. })
        ));
    }

    #[test]
    fn connectivity_of_products_matches_reliability_polynomials() {
        let p = ratio(3, 5);
        let k3 = Measure::product(make_complete(3).unwrap(), &p).unwrap();
        let q = int(1) - &p;
        let expected = p.clone().powi(3) + int(3) * p.clone().powi(2) * q;
        assert_eq!(k3.connectivity_probability().unwrap(), expected);
    }

    #[test]
    fn complement_swaps_marginals() {
        let mu = Measure::product(make_cycle(4).unwrap(), &ratio(1, 3)).unwrap();
        assert!(mu.complement().marginals().iter().all(|x| *x == ratio(2, 3)));
    }

    #[test]
    fn float_measures_clamp_tiny_negatives() {
        let g = make_path(2).unwrap();
        let mu = Measure::from_weights_clamped(g.clone(), vec![1.0 + 1e-14, -1e-14], 1e-12).unwrap();
        assert_eq!(mu.weights()[1], 0.0);
        assert!(Measure::from_weights_clamped(g, vec![1.1, -0.1], 1e-12).is_err());
    }

    #[test]
    fn k_independence_skips_adjacent_pairs() {
        // On P4 the end edges are adjacent to a common middle edge, so they are
        // 1-distant but not 2-distant.
        let mu = all_or_nothing(make_path(4).unwrap());
        assert!(!mu.check_k_independence(1).unwrap().0);
        assert!(mu.check_k_independence(2).unwrap().0);
    }
}
