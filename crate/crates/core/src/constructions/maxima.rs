//! Maximisers for paths and complete graphs, and the 2-independent star
//! deletion on `K_n`.

use super::{check_probability, complete_measure, complete_threshold};
use crate::error::{Error, Result};
use crate::graph::{make_complete, make_path, EdgeSubset};
use crate::measure::Measure;
use crate::scalar::Scalar;
use crate::vertex::VertexBasedMeasure;

/// Vertices `2, 4, …` (1-based) are On with probability `p`, others Off; an
/// edge is open iff an endpoint is On. Connectivity `p^⌊n/2⌋`.
pub fn pn_max<T: Scalar>(n: usize, p: &T) -> Result<Measure<T>> {
    check_probability(p)?;
    let graph = make_path(n)?;
    let dists = (0..n)
        .map(|v| {
            if v % 2 == 1 {
                vec![T::one() - p.clone(), p.clone()]
            } else {
                vec![T::one()]
            }
        })
        .collect();
    let vbm = VertexBasedMeasure::new(graph, dists, |_, a, b| a == 1 || b == 1)?;
    vbm.to_measure()
}

/// Complement of `complete_measure(n, 1 − p)`: connectivity `1 − g_n(1 − p)`.
/// Valid for `p ≤ 1 − p_n`.
pub fn kn_max<T: Scalar>(n: usize, p: &T) -> Result<Measure<T>> {
    check_probability(p)?;
    let dual = T::one() - p.clone();
    complete_measure(n, &dual)
        .map(|mu| mu.complement())
        .map_err(|e| match e {
            Error::BelowValidityThreshold { .. } => Error::OutOfPiece {
                p: p.to_f64(),
                lo: 0.0,
                hi: 1.0 - complete_threshold(n).unwrap_or(0.0),
            },
            other => other,
        })
}

/// With probability `λ = min(n(1−p)/2, 1)` delete the star of a uniform
/// vertex, otherwise keep `K_n`. 2-independent, connectivity `1 − λ`.
pub fn kn_k_indep<T: Scalar>(n: usize, p: &T) -> Result<Measure<T>> {
    check_probability(p)?;
    let graph = make_complete(n)?;
    let full = graph.full_subset();
    let lambda = T::min_value(
        T::from_int(n as i64) * (T::one() - p.clone()) / T::from_int(2),
        T::one(),
    );
    let per_vertex = lambda.clone() / T::from_int(n as i64);
    let mut support = vec![(full, T::one() - lambda)];
    for v in 0..n {
        let star = graph
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| a == v || b == v)
            .fold(0u32, |acc, (i, _)| acc | 1 << i);
        support.push((EdgeSubset(full.0 & !star), per_vertex.clone()));
    }
    let mu = Measure::from_support(graph, support)?;
    mu.validate()?;
    Ok(mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::complete_g;
    use crate::scalar::{int, ratio};

    #[test]
    fn path_maximiser() {
        let p = ratio(2, 3);
        for n in 2..=7 {
            let mu = pn_max(n, &p).unwrap();
            mu.validate().unwrap();
            assert!(mu.marginals().iter().all(|x| *x == p));
            assert!(mu.check_one_independence().unwrap().passed);
            assert_eq!(mu.connectivity_probability().unwrap(), p.powi((n / 2) as u32));
        }
    }

    #[test]
    fn complete_maximiser() {
        let p = ratio(1, 2);
        let mu = kn_max(4, &p).unwrap();
        assert!(mu.marginals().iter().all(|x| *x == p));
        let dual = int(1) - &p;
        assert_eq!(
            mu.connectivity_probability().unwrap(),
            int(1) - complete_g(4, &dual)[4].clone()
        );
        assert!(matches!(kn_max(4, &ratio(7, 10)), Err(Error::OutOfPiece { .. })));
    }

    #[test]
    fn star_deletion() {
        let p = ratio(4, 5);
        let mu = kn_k_indep(5, &p).unwrap();
        assert!(mu.marginals().iter().all(|x| *x == p));
        assert_eq!(mu.connectivity_probability().unwrap(), ratio(1, 2));
        assert!(mu.check_k_independence(2).unwrap().0);
        // At low p the deletion always happens and marginals exceed p.
        let mu = kn_k_indep(4, &ratio(1, 5)).unwrap();
        assert_eq!(mu.connectivity_probability().unwrap(), int(0));
        assert!(mu.edge_probability() >= ratio(1, 5));
    }
}
