//! The path family: `g_1 = 1`, `g_2 = p`, `g_k = g_{k-1} − (1−p) g_{k-2}`.

use super::{check_probability, check_threshold, path_threshold, require_nonnegative};
use crate::error::{Error, Result};
use crate::graph::make_path;
use crate::measure::Measure;
use crate::scalar::Scalar;
use crate::vertex::VertexBasedMeasure;

/// `[g_0, g_1, …, g_n]` with `g_0 = g_1 = 1`.
pub fn path_g<T: Scalar>(n: usize, p: &T) -> Vec<T> {
    let q = T::one() - p.clone();
    let mut g = vec![T::one(), T::one()];
    for k in 2..=n {
        let next = g[k - 1].clone() - q.clone() * g[k - 2].clone();
        g.push(next);
    }
    g.truncate(n + 1);
    g
}

/// Measure on `P_n` with connectivity `g_n`, valid for `p ≥ p_n`.
///
/// A configuration with closed edges `j_1 < … < j_c` (edge `j` joins vertices
/// `j` and `j+1`) weighs `(1−p)^c ∏ g_s` over the open segments left after
/// deleting both endpoints of every closed edge. Adjacent closed edges weigh 0.
pub fn path_measure<T: Scalar>(n: usize, p: &T) -> Result<Measure<T>> {
    let graph = make_path(n)?;
    let threshold = path_threshold(n)?;
    check_threshold(p, threshold)?;
    let g = path_g(n, p);
    let q = T::one() - p.clone();
    let m = n - 1;
    let weights: Vec<T> = (0..1u32 << m)
        .map(|mask| {
            let closed: Vec<usize> = (0..m).filter(|j| mask >> j & 1 == 0).collect();
            if closed.windows(2).any(|w| w[1] == w[0] + 1) {
                return T::zero();
            }
            // Vertices 0..n; closed edge j removes vertices j and j+1.
            let mut acc = q.powi(closed.len() as u32);
            let mut start = 0usize;
            for &j in &closed {
                acc = acc * g[j - start].clone();
                start = j + 2;
            }
            acc * g[n - start].clone()
        })
        .collect();
    require_nonnegative(&weights, p, threshold)?;
    Measure::from_weights_clamped(graph, weights, 1e-12)
}

/// Two-state vertex model on `P_n` for `p ≥ 3/4`: state 0 with probability
/// `θ = (1 + √(4p − 3))/2`, and edge `{j, j+1}` is open iff `S_j ≤ S_{j+1}`.
pub fn path_vbm<T: Scalar>(n: usize, p: &T) -> Result<VertexBasedMeasure<T>> {
    check_probability(p)?;
    let graph = make_path(n)?;
    let disc = T::from_int(4) * p.clone() - T::from_int(3);
    if disc < T::zero() {
        return Err(Error::BelowValidityThreshold {
            p: p.to_f64(),
            threshold: 0.75,
        });
    }
    let root = disc
        .sqrt_value()
        .ok_or_else(|| Error::OutOfRange(format!("4p − 3 = {} has no exact square root", disc.to_f64())))?;
    let theta = (T::one() + root) / T::from_int(2);
    let dist = vec![theta.clone(), T::one() - theta];
    VertexBasedMeasure::new(graph, vec![dist; n], |_, a, b| a <= b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    /// `Σ_{j=0}^{n} θ^j (1−θ)^{n−j}` with `θ(1−θ) = 1 − p`.
    fn closed_form(n: usize, theta: f64) -> f64 {
        (0..=n)
            .map(|j| theta.powi(j as i32) * (1.0 - theta).powi((n - j) as i32))
            .sum()
    }

    #[test]
    fn recursion_matches_geometric_sum() {
        for &p in &[0.8, 0.9, 0.76] {
            let theta = (1.0 + (4.0 * p - 3.0f64).sqrt()) / 2.0;
            let g = path_g(9, &p);
            for n in 1..=9 {
                assert!((g[n] - closed_form(n, theta)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn small_cases_exact() {
        let p = ratio(3, 5);
        let g = path_g(4, &p);
        assert_eq!(g[2], p);
        assert_eq!(g[3], int(2) * &p - int(1));
        let mu = path_measure(3, &p).unwrap();
        mu.validate().unwrap();
        assert_eq!(mu.connectivity_probability().unwrap(), g[3]);
        assert!(mu.marginals().iter().all(|x| *x == p));
    }

    #[test]
    fn below_threshold_is_rejected() {
        assert!(matches!(
            path_measure(4, &ratio(1, 2)),
            Err(Error::BelowValidityThreshold { .. })
        ));
        // p_3 = 1/2 exactly, where the weights are still non-negative.
        let mu = path_measure(3, &ratio(1, 2)).unwrap();
        assert_eq!(mu.connectivity_probability().unwrap(), int(0));
    }

    #[test]
    fn float_measure_at_threshold_has_zero_connectivity() {
        let p = path_threshold(4).unwrap();
        let mu = path_measure(4, &p).unwrap();
        assert!(mu.connectivity_probability().unwrap().abs() < 1e-9);
        assert!(mu.check_one_independence().unwrap().passed);
    }

    #[test]
    fn vertex_model_matches_path_measure_exactly() {
        // 4p − 3 = 4/25 is a square, so θ = 7/10 is rational.
        let p = ratio(79, 100);
        for n in 2..=6 {
            let from_states = path_vbm(n, &p).unwrap().to_measure().unwrap();
            assert_eq!(from_states, path_measure(n, &p).unwrap());
        }
    }

    #[test]
    fn vertex_model_matches_path_measure_in_floats() {
        let p = 0.8f64;
        let root = (4.0 * p - 3.0f64).sqrt();
        let theta = (1.0 + root) / 2.0;
        let g = make_path(5).unwrap();
        let vbm = VertexBasedMeasure::new(g, vec![vec![theta, 1.0 - theta]; 5], |_, a, b| a <= b).unwrap();
        let a = vbm.to_measure().unwrap();
        let b = path_measure(5, &p).unwrap();
        for (x, y) in a.weights().iter().zip(b.weights()) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
