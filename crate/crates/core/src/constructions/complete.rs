//! The complete family: `g_n = θ^n + (1−θ)^n` with `θ(1−θ) = (1−p)/2`,
//! computed through power sums so every value is a polynomial in `p`.

use super::{check_probability, check_threshold, complete_threshold, require_nonnegative};
use crate::error::{Error, Result};
use crate::graph::make_complete;
use crate::measure::Measure;
use crate::scalar::{binomial, int, Rational, Scalar};
use crate::vertex::VertexBasedMeasure;

/// `[g_0, …, g_n]` with `g_0 = 2`, `g_1 = 1`, `g_k = g_{k-1} − ((1−p)/2) g_{k-2}`.
pub fn complete_g<T: Scalar>(n: usize, p: &T) -> Vec<T> {
    let c = (T::one() - p.clone()) / T::from_int(2);
    let mut g = vec![T::from_int(2), T::one()];
    for k in 2..=n {
        let next = g[k - 1].clone() - c.clone() * g[k - 2].clone();
        g.push(next);
    }
    g.truncate(n + 1);
    g
}

/// Weight of the two-clique graph `H_A` with `|A| = j`.
fn split_weight<T: Scalar>(g: &[T], c: &T, n: usize, j: usize) -> T {
    if n >= 2 * j {
        c.powi(j as u32) * g[n - 2 * j].clone()
    } else {
        c.powi((n - j) as u32) * g[2 * j - n].clone()
    }
}

/// Measure on `K_n` supported on graphs `H_A` (a clique on `A` plus a clique on
/// its complement), with `H_A` weighted `g_{n,|A|}`. Valid for `p ≥ p_n`.
pub fn complete_measure<T: Scalar>(n: usize, p: &T) -> Result<Measure<T>> {
    let graph = make_complete(n)?;
    graph.require_exhaustive()?;
    let threshold = complete_threshold(n)?;
    check_threshold(p, threshold)?;
    let g = complete_g(n, p);
    let c = (T::one() - p.clone()) / T::from_int(2);
    let mut weights = vec![T::zero(); 1usize << graph.m()];
    // A ranges over sets containing vertex 0, one per unordered split.
    for rest in 0..1u64 << (n - 1) {
        let a = (rest << 1) | 1;
        let mask = graph
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| (a >> u & 1) == (a >> v & 1))
            .fold(0usize, |acc, (i, _)| acc | 1 << i);
        weights[mask] = split_weight(&g, &c, n, a.count_ones() as usize);
    }
    require_nonnegative(&weights, p, threshold)?;
    Measure::from_weights_clamped(graph, weights, 1e-12)
}

/// Red-Blue model on `K_n` for `p ≥ 1/2`: colour Red with probability
/// `θ = (1 + √(2p − 1))/2`, and an edge is open iff its ends share a colour.
pub fn red_blue_vbm<T: Scalar>(n: usize, p: &T) -> Result<VertexBasedMeasure<T>> {
    check_probability(p)?;
    let graph = make_complete(n)?;
    let disc = T::from_int(2) * p.clone() - T::one();
    if disc < T::zero() {
        return Err(Error::BelowValidityThreshold {
            p: p.to_f64(),
            threshold: 0.5,
        });
    }
    let root = disc
        .sqrt_value()
        .ok_or_else(|| Error::OutOfRange(format!("2p − 1 = {} has no exact square root", disc.to_f64())))?;
    let theta = (T::one() + root) / T::from_int(2);
    let dist = vec![theta.clone(), T::one() - theta];
    VertexBasedMeasure::new(graph, vec![dist; n], |_, a, b| a == b)
}

/// `2^n g_n = Σ_j C(n, j) g_j g_{n−j} − 2`, checked exactly.
pub fn complete_identity_holds(n: usize, p: &Rational) -> bool {
    let g = complete_g(n, p);
    let lhs = int(2).powi(n as u32) * g[n].clone();
    let rhs = (0..=n).fold(int(0), |acc, j| {
        acc + binomial(n as u64, j as u64) * g[j].clone() * g[n - j].clone()
    }) - int(2);
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn small_complete_graphs() {
        let p = ratio(5, 7);
        let g = complete_g(4, &p);
        assert_eq!(g[3], (int(3) * &p - int(1)) / int(2));
        assert_eq!(g[4], (&p * &p + int(2) * &p - int(1)) / int(2));
        for n in 2..=5 {
            let mu = complete_measure(n, &p).unwrap();
            mu.validate().unwrap();
            assert!(mu.marginals().iter().all(|x| *x == p));
            assert_eq!(mu.connectivity_probability().unwrap(), complete_g(n, &p)[n]);
        }
    }

    #[test]
    fn power_sums_match_roots() {
        let p = 0.83f64;
        let theta = (1.0 + (2.0 * p - 1.0).sqrt()) / 2.0;
        let g = complete_g(10, &p);
        for (k, gk) in g.iter().enumerate() {
            assert!((gk - (theta.powi(k as i32) + (1.0 - theta).powi(k as i32))).abs() < 1e-12);
        }
    }

    #[test]
    fn red_blue_equals_complete_measure() {
        // 2p − 1 = 1/4, so θ = 3/4.
        let p = ratio(5, 8);
        for n in 2..=5 {
            assert_eq!(
                red_blue_vbm(n, &p).unwrap().to_measure().unwrap(),
                complete_measure(n, &p).unwrap()
            );
        }
    }

    #[test]
    fn threshold_behaviour() {
        assert!(complete_measure(4, &ratio(2, 5)).is_err());
        let mu = complete_measure(3, &ratio(1, 3)).unwrap();
        assert_eq!(mu.connectivity_probability().unwrap(), int(0));
        let p4 = complete_threshold(4).unwrap();
        let mu = complete_measure(4, &p4).unwrap();
        assert!(mu.connectivity_probability().unwrap().abs() < 1e-9);
    }

    #[test]
    fn identity_for_small_n() {
        for n in 2..=12 {
            assert!(complete_identity_holds(n, &ratio(3, 4)));
            assert!(complete_identity_holds(n, &ratio(1, 9)));
        }
    }
}
