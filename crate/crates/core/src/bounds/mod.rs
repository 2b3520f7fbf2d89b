//! Closed-form connectivity curves, the renormalisation bound along a line,
//! `p⋆` root finding, and exact crossing probabilities on thin products.

mod crossing;
mod renorm;

pub use crossing::{
    exact_crossing_probability, max_component_size, CrossingLayout, MAX_CROSSING_FIBER, MAX_CROSSING_LENGTH,
};
pub use renorm::{
    fiber_curve, k_indep_line_threshold, lattice_lower_bounds, line_product_bound, p_star, pstar_table,
    truncate_decimal, LineBound, PStarTable, RecursionStep,
};

use crate::constructions::{complete_g, path_g};
use crate::error::{Error, Result};
use crate::lp::Direction;
use crate::scalar::Scalar;

/// A connectivity curve with a closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curve {
    /// The single vertex: connected with probability 1.
    Point,
    Path {
        n: usize,
        direction: Direction,
    },
    Complete {
        n: usize,
        direction: Direction,
    },
    C4 {
        direction: Direction,
    },
    C5 {
        direction: Direction,
    },
    /// Least connectivity of `K_n` under `k`-independence, `k ≥ 2`.
    KIndepComplete {
        n: usize,
        k: usize,
    },
    /// Markov lower bound `(np − (n − 2))/2` for the cycle `C_n`.
    CycleMarkov {
        n: usize,
    },
    /// Best of the Markov bound and `−p³ + 3p² − 1` for `C_6`.
    C6Markov,
}

impl Curve {
    /// `family` is `f` (least) or `F` (greatest); `graph` is a builtin name.
    /// Cycles of length at least 6 only have lower bounds.
    pub fn parse(family: &str, graph: &str, k: usize) -> Result<Curve> {
        let direction = match family {
            "f" => Direction::Min,
            "F" => Direction::Max,
            other => return Err(Error::Parse(format!("family must be f or F, got {other:?}"))),
        };
        let bad = || Error::Parse(format!("no closed form for {family} on {graph} with k = {k}"));
        let (kind, rest) = graph.split_at(1.min(graph.len()));
        let n: usize = rest.parse().map_err(|_| bad())?;
        let curve = match (kind, n, direction, k) {
            ("K", 1, _, _) | ("P", 1, _, _) => Curve::Point,
            ("P", n, d, 1) if n >= 2 => Curve::Path { n, direction: d },
            ("K", n, d, 1) if n >= 2 => Curve::Complete { n, direction: d },
            ("K", n, Direction::Min, k) if n >= 2 && k >= 2 => Curve::KIndepComplete { n, k },
            ("C", 4, d, 1) => Curve::C4 { direction: d },
            ("C", 5, d, 1) => Curve::C5 { direction: d },
            ("C", 6, Direction::Min, 1) => Curve::C6Markov,
            ("C", n, Direction::Min, 1) if n >= 7 => Curve::CycleMarkov { n },
            _ => return Err(bad()),
        };
        Ok(curve)
    }

    /// Points where the formula changes branch, in increasing order.
    pub fn breakpoints(&self) -> Vec<f64> {
        use crate::constructions::{complete_threshold, path_threshold};
        match *self {
            Curve::Point => vec![],
            Curve::Path {
                n,
                direction: Direction::Min,
            } => vec![path_threshold(n).unwrap_or(0.0)],
            Curve::Path { .. } => vec![],
            Curve::Complete {
                n,
                direction: Direction::Min,
            } => vec![complete_threshold(n).unwrap_or(0.0)],
            Curve::Complete {
                n,
                direction: Direction::Max,
            } => vec![1.0 - complete_threshold(n).unwrap_or(0.0)],
            Curve::C4 {
                direction: Direction::Min,
            } => vec![0.5],
            Curve::C4 {
                direction: Direction::Max,
            } => vec![2.0 / 3.0],
            Curve::C5 {
                direction: Direction::Min,
            } => vec![1.0 / 3f64.sqrt()],
            Curve::C5 {
                direction: Direction::Max,
            } => vec![0.5, 0.6],
            Curve::KIndepComplete { n, .. } => vec![1.0 - 2.0 / n as f64],
            Curve::CycleMarkov { n } => vec![(n as f64 - 2.0) / n as f64],
            Curve::C6Markov => vec![],
        }
    }
}

/// `g_n` when `g_1, …, g_{n−1} > 0` and `g_n ≥ 0`, else 0.
///
/// The first index where `g_k(p) ≤ 0` is the least `k` with `p ≤ p_k`, so
/// this is exact: no threshold is ever evaluated in floating point.
fn above_threshold_value<T: Scalar>(g: &[T]) -> T {
    let n = g.len() - 1;
    let positive_before = g[1..n].iter().all(|x| *x > T::zero());
    if positive_before && g[n] >= T::zero() {
        g[n].clone()
    } else {
        T::zero()
    }
}

fn least_path<T: Scalar>(n: usize, p: &T) -> T {
    above_threshold_value(&path_g(n, p))
}

fn least_complete<T: Scalar>(n: usize, p: &T) -> T {
    above_threshold_value(&complete_g(n, p))
}

/// Evaluates `curve` at `p ∈ [0, 1]`; exact when `T` is rational.
pub fn eval_closed_form<T: Scalar>(curve: &Curve, p: &T) -> T {
    let int = |k: i64| T::from_int(k);
    let one = T::one();
    let zero = T::zero();
    let q = one.clone() - p.clone();
    let p2 = p.clone() * p.clone();
    match *curve {
        Curve::Point => one,
        Curve::Path {
            n,
            direction: Direction::Min,
        } => least_path(n, p),
        Curve::Path {
            n,
            direction: Direction::Max,
        } => p.powi((n / 2) as u32),
        Curve::Complete {
            n,
            direction: Direction::Min,
        } => least_complete(n, p),
        Curve::Complete {
            n,
            direction: Direction::Max,
        } => one - least_complete(n, &q),
        Curve::C4 {
            direction: Direction::Min,
        } => T::max_value(int(2) * p.clone() - one, zero),
        Curve::C4 {
            direction: Direction::Max,
        } => T::min_value(int(2) * p2.clone(), int(2) * p.clone() - p2),
        Curve::C5 {
            direction: Direction::Min,
        } => {
            if int(3) * p2.clone() >= one {
                p.clone() * (int(3) * p2 - one) / (int(3) * p.clone() - T::one())
            } else {
                zero
            }
        }
        Curve::C5 {
            direction: Direction::Max,
        } => {
            if *p >= T::from_ratio(3, 5) {
                p.clone() * (int(2) + int(5) * p.clone() * q) / (int(5) - int(3) * p.clone())
            } else if *p >= T::from_ratio(1, 2) {
                int(5) * p2 / int(3)
            } else {
                int(5) * p2 * (p.clone() + one) / (p.clone() + int(4))
            }
        }
        Curve::KIndepComplete { n, .. } => {
            let n = n as i64;
            if *p <= one.clone() - T::from_ratio(2, n) {
                zero
            } else {
                one - int(n) * q / int(2)
            }
        }
        Curve::CycleMarkov { n } => {
            let n = n as i64;
            T::max_value((int(n) * p.clone() - int(n - 2)) / int(2), zero)
        }
        Curve::C6Markov => {
            let cubic = int(3) * p2.clone() - p2 * p.clone() - one;
            let markov = int(3) * p.clone() - int(2);
            T::max_value(T::max_value(cubic, markov), zero)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio, Rational};

    #[test]
    fn spot_values() {
        let f = |c: Curve, p: f64| eval_closed_form(&c, &p);
        assert!((f(Curve::parse("f", "P3", 1).unwrap(), 0.8) - 0.6).abs() < 1e-12);
        assert!((f(Curve::parse("F", "C5", 1).unwrap(), 0.55) - 5.0 * 0.55 * 0.55 / 3.0).abs() < 1e-12);
        assert!((f(Curve::parse("f", "C6", 1).unwrap(), 0.9) - 0.701).abs() < 1e-12);
    }

    #[test]
    fn path_threshold_is_decided_exactly() {
        // p_3 = 1/2: g_3 = 2p − 1 vanishes there and is negative below.
        let c = Curve::Path {
            n: 3,
            direction: Direction::Min,
        };
        assert_eq!(eval_closed_form(&c, &ratio(1, 2)), int(0));
        assert_eq!(eval_closed_form(&c, &ratio(2, 5)), int(0));
        assert_eq!(eval_closed_form(&c, &ratio(3, 5)), ratio(1, 5));
        // At small p, g_7 is positive again, but an earlier g_k < 0 reveals p < p_7.
        let c7 = Curve::Path {
            n: 7,
            direction: Direction::Min,
        };
        let p = ratio(1, 20);
        assert!(path_g(7, &p)[7] > int(0));
        assert_eq!(eval_closed_form(&c7, &p), int(0));
    }

    #[test]
    fn complete_max_is_dual_of_min() {
        let p: Rational = ratio(7, 10);
        let f = eval_closed_form(
            &Curve::Complete {
                n: 4,
                direction: Direction::Min,
            },
            &(int(1) - &p),
        );
        let big_f = eval_closed_form(
            &Curve::Complete {
                n: 4,
                direction: Direction::Max,
            },
            &p,
        );
        assert_eq!(big_f, int(1) - f);
    }

    #[test]
    fn markov_bounds_sit_below_exact_cycle_curves() {
        for i in 0..=50 {
            let p = ratio(i, 50);
            for (n, exact) in [
                (
                    4,
                    Curve::C4 {
                        direction: Direction::Min,
                    },
                ),
                (
                    5,
                    Curve::C5 {
                        direction: Direction::Min,
                    },
                ),
            ] {
                let markov = (int(n) * &p - int(n - 2)) / int(2);
                assert!(markov <= eval_closed_form(&exact, &p));
            }
        }
    }

    #[test]
    fn parse_rejects_unknown() {
        assert!(Curve::parse("F", "C6", 1).is_err());
        assert!(Curve::parse("g", "P3", 1).is_err());
        assert_eq!(
            Curve::parse("f", "K5", 2).unwrap(),
            Curve::KIndepComplete { n: 5, k: 2 }
        );
    }
}
