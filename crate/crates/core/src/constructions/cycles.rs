//! Extremal measures on `C_4` and `C_5`.
//!
//! Each is supported on a few symmetry classes of subgraphs. Classes are
//! described by the open edges in cyclic position, where position `i` is the
//! edge `{i, i+1 mod n}`.

use super::piece_check;
use crate::error::Result;
use crate::graph::{make_cycle, LabeledGraph};
use crate::measure::Measure;
use crate::scalar::Scalar;

/// Open/closed edges of a cycle subgraph, by cyclic position.
struct CycleShape {
    n: usize,
    open: Vec<bool>,
}

impl CycleShape {
    fn open_count(&self) -> usize {
        self.open.iter().filter(|&&o| o).count()
    }

    fn positions(&self, open: bool) -> Vec<usize> {
        (0..self.n).filter(|&i| self.open[i] == open).collect()
    }

    fn adjacent(&self, i: usize, j: usize) -> bool {
        (i + 1) % self.n == j || (j + 1) % self.n == i
    }

    /// Exactly two edges with the given status, and they share a vertex.
    fn two_adjacent(&self, open: bool) -> Option<bool> {
        let ps = self.positions(open);
        (ps.len() == 2).then(|| self.adjacent(ps[0], ps[1]))
    }
}

fn cycle_position(g: &LabeledGraph, edge: usize) -> usize {
    let (u, v) = g.edge(edge);
    if v == u + 1 {
        u
    } else {
        g.n() - 1
    }
}

fn cycle_measure<T: Scalar>(n: usize, weight: impl Fn(&CycleShape) -> Option<T>) -> Result<Measure<T>> {
    let g = make_cycle(n)?;
    let positions: Vec<usize> = (0..g.m()).map(|e| cycle_position(&g, e)).collect();
    let weights = (0..1usize << n)
        .map(|mask| {
            let mut open = vec![false; n];
            for (e, &pos) in positions.iter().enumerate() {
                open[pos] = mask >> e & 1 == 1;
            }
            weight(&CycleShape { n, open }).unwrap_or_else(T::zero)
        })
        .collect();
    let mu = Measure::new(g, weights)?;
    mu.validate()?;
    Ok(mu)
}

fn half<T: Scalar>() -> T {
    T::from_ratio(1, 2)
}

/// Minimiser on `C_4`: connectivity `max(0, 2p − 1)`.
pub fn c4_min<T: Scalar>(p: &T) -> Result<Measure<T>> {
    piece_check(p, &T::zero(), &T::one())?;
    let one = T::one();
    let q = one.clone() - p.clone();
    let adjacent_pair = p.clone() * q.clone() / T::from_int(2);
    if *p >= half() {
        cycle_measure(4, |h| match (h.open_count(), h.two_adjacent(true)) {
            (4, _) => Some(T::from_int(2) * p.clone() - one.clone()),
            (2, Some(true)) => Some(adjacent_pair.clone()),
            (2, Some(false)) => Some(q.clone() * q.clone()),
            _ => None,
        })
    } else {
        cycle_measure(4, |h| match (h.open_count(), h.two_adjacent(true)) {
            (0, _) => Some(one.clone() - T::from_int(2) * p.clone()),
            (2, Some(true)) => Some(adjacent_pair.clone()),
            (2, Some(false)) => Some(p.clone() * p.clone()),
            _ => None,
        })
    }
}

/// Asymmetric minimiser on `C_4` for `p ≤ 1/2`: the two adjacent pairs
/// `{12, 14}` and `{23, 34}` carry all the adjacent-pair mass.
pub fn c4_min_asymmetric<T: Scalar>(p: &T) -> Result<Measure<T>> {
    piece_check(p, &T::zero(), &half())?;
    let q = T::one() - p.clone();
    cycle_measure(4, |h| match (h.open_count(), h.two_adjacent(true)) {
        (0, _) => Some(T::one() - T::from_int(2) * p.clone()),
        // positions 0 = {1,2} and 3 = {4,1}; positions 1 = {2,3} and 2 = {3,4}
        (2, Some(true)) if h.open == [true, false, false, true] || h.open == [false, true, true, false] => {
            Some(p.clone() * q.clone())
        }
        (2, Some(false)) => Some(p.clone() * p.clone()),
        _ => None,
    })
}

/// Minimiser on `C_5`: connectivity `p(3p² − 1)/(3p − 1)` for `3p² ≥ 1`, else 0.
pub fn c5_min<T: Scalar>(p: &T) -> Result<Measure<T>> {
    piece_check(p, &T::zero(), &T::one())?;
    let q = T::one() - p.clone();
    let three = T::from_int(3);
    if three.clone() * p.clone() * p.clone() >= T::one() {
        let den = three * p.clone() - T::one();
        let two_p_minus_one = T::from_int(2) * p.clone() - T::one();
        cycle_measure(5, |h| match (h.open_count(), h.two_adjacent(false)) {
            (5, _) => Some(p.clone() * (T::from_int(3) * p.clone() * p.clone() - T::one()) / den.clone()),
            (3, Some(true)) => Some(p.clone() * q.clone() * two_p_minus_one.clone() / den.clone()),
            (3, Some(false)) => Some(p.clone() * q.clone() * q.clone() / den.clone()),
            (0, _) => Some(two_p_minus_one.clone() * q.clone() * q.clone() / den.clone()),
            _ => None,
        })
    } else {
        let den = three * p.clone() + T::from_int(2);
        let p2 = p.clone() * p.clone();
        let p3 = p2.clone() * p.clone();
        cycle_measure(5, |h| {
            match (h.open_count(), h.two_adjacent(true), h.two_adjacent(false)) {
                (0, _, _) => Some(
                    (T::from_int(5) * p3.clone() - T::from_int(5) * p2.clone() - T::from_int(2) * p.clone()
                        + T::from_int(2))
                        / den.clone(),
                ),
                (2, Some(true), _) => Some(p.clone() * (T::one() - T::from_int(3) * p2.clone()) / den.clone()),
                (3, _, Some(true)) => Some(p3.clone() / den.clone()),
                (3, _, Some(false)) => Some(p2.clone() * (T::one() + p.clone()) / den.clone()),
                _ => None,
            }
        })
    }
}

/// Maximiser on `C_4`: connectivity `2p − p²` on `[2/3, 1]`, `2p²` on `[0, 2/3]`.
pub fn c4_max<T: Scalar>(p: &T) -> Result<Measure<T>> {
    piece_check(p, &T::zero(), &T::one())?;
    let q = T::one() - p.clone();
    if *p >= T::from_ratio(2, 3) {
        cycle_measure(4, |h| match h.open_count() {
            4 => Some(p.clone() * (T::from_int(3) * p.clone() - T::from_int(2))),
            3 => Some(p.clone() * q.clone()),
            0 => Some(q.clone() * q.clone()),
            _ => None,
        })
    } else {
        cycle_measure(4, |h| match h.open_count() {
            3 => Some(p.clone() * p.clone() / T::from_int(2)),
            1 => Some(p.clone() * (T::from_int(2) - T::from_int(3) * p.clone()) / T::from_int(2)),
            0 => Some(T::one() - T::from_int(4) * p.clone() * q.clone()),
            _ => None,
        })
    }
}

/// Maximiser on `C_5`, in three pieces split at `1/2` and `3/5`.
pub fn c5_max<T: Scalar>(p: &T) -> Result<Measure<T>> {
    piece_check(p, &T::zero(), &T::one())?;
    let q = T::one() - p.clone();
    let p2 = p.clone() * p.clone();
    let p3 = p2.clone() * p.clone();
    let int = |k: i64| T::from_int(k);
    if *p >= T::from_ratio(3, 5) {
        let den = int(5) - int(3) * p.clone();
        cycle_measure(5, |h| match (h.open_count(), h.two_adjacent(true)) {
            (5, _) => Some(p.clone() * (int(5) * p.clone() - int(3)) / den.clone()),
            (4, _) => Some(p.clone() * (T::one() - p2.clone()) / den.clone()),
            (2, Some(true)) => {
                Some((int(3) * p3.clone() - int(7) * p2.clone() + int(5) * p.clone() - T::one()) / den.clone())
            }
            (1, _) => Some(int(2) * q.clone() * q.clone() * q.clone() / den.clone()),
            _ => None,
        })
    } else if *p >= half() {
        cycle_measure(5, |h| match (h.open_count(), h.two_adjacent(true)) {
            (4, _) => Some(p2.clone() / int(3)),
            (2, Some(true)) => Some(p.clone() * (int(2) - int(3) * p.clone()) / int(3)),
            (1, _) => Some(p.clone() * (int(2) * p.clone() - T::one()) / int(3)),
            (0, _) => Some((int(3) - int(5) * p.clone()) / int(3)),
            _ => None,
        })
    } else {
        let den = p.clone() + int(4);
        cycle_measure(5, |h| {
            match (h.open_count(), h.two_adjacent(true), h.two_adjacent(false)) {
                (4, _, _) => Some(p2.clone() * (p.clone() + T::one()) / den.clone()),
                (3, _, Some(true)) => Some(p2.clone() * (T::one() - int(2) * p.clone()) / den.clone()),
                (2, Some(true), _) => Some(p.clone() * (p2.clone() - int(3) * p.clone() + int(2)) / den.clone()),
                (0, _, _) => Some((int(5) * p2.clone() - int(9) * p.clone() + int(4)) / den.clone()),
                _ => None,
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio, Rational};

    fn check(mu: &Measure<Rational>, p: &Rational, connectivity: Rational) {
        mu.validate().unwrap();
        assert!(mu.marginals().iter().all(|x| x == p), "marginals {:?}", mu.marginals());
        let ind = mu.check_one_independence().unwrap();
        assert!(ind.passed && ind.restriction_passed);
        assert_eq!(mu.connectivity_probability().unwrap(), connectivity);
    }

    #[test]
    fn c4_minimisers() {
        let p = ratio(7, 10);
        check(&c4_min(&p).unwrap(), &p, int(2) * &p - int(1));
        let p = ratio(3, 10);
        check(&c4_min(&p).unwrap(), &p, int(0));
        check(&c4_min_asymmetric(&p).unwrap(), &p, int(0));
    }

    #[test]
    fn asymmetric_c4_symmetrises_to_the_symmetric_minimiser() {
        let p = ratio(2, 5);
        let sym = c4_min_asymmetric(&p).unwrap().symmetrize().unwrap();
        assert_eq!(sym, c4_min(&p).unwrap());
    }

    #[test]
    fn c5_minimisers() {
        let p = ratio(4, 5);
        let three = int(3);
        let expected = &p * (&three * &p * &p - int(1)) / (&three * &p - int(1));
        assert_eq!(expected, ratio(92, 175));
        check(&c5_min(&p).unwrap(), &p, expected);
        check(&c5_min(&ratio(1, 2)).unwrap(), &ratio(1, 2), int(0));
    }

    #[test]
    fn c4_maximisers() {
        let p = ratio(4, 5);
        check(&c4_max(&p).unwrap(), &p, int(2) * &p - &p * &p);
        let p = ratio(1, 2);
        check(&c4_max(&p).unwrap(), &p, int(2) * &p * &p);
    }

    #[test]
    fn c5_maximisers() {
        let p = ratio(4, 5);
        let f = &p * (int(2) + int(5) * &p * (int(1) - &p)) / (int(5) - int(3) * &p);
        check(&c5_max(&p).unwrap(), &p, f);
        let p = ratio(11, 20);
        check(&c5_max(&p).unwrap(), &p, int(5) * &p * &p / int(3));
        let p = ratio(1, 3);
        check(
            &c5_max(&p).unwrap(),
            &p,
            int(5) * &p * &p * (&p + int(1)) / (&p + int(4)),
        );
    }
}
