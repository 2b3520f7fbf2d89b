//! The renormalisation bound for `P_ℓ × G`, its critical point `p⋆`, and
//! the lattice bound arithmetic.

use super::{eval_closed_form, Curve};
use crate::error::{Error, Result};
use crate::graph::builtin_graph;
use crate::scalar::{int, Rational, Scalar};

/// One step of the conditional-failure recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct RecursionStep<T> {
    pub n: usize,
    /// Bound on the chance that column `n` fails to attach.
    pub x: T,
    /// Bound on the chance that the first `n` columns fail to be connected
    /// given attachment.
    pub y: T,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LineBound<T> {
    /// `f_{P_ℓ × G}(p) ≥ ((1 − α) f)^ℓ`.
    Bound {
        value: T,
        trace: Vec<RecursionStep<T>>,
        /// `x_n ≤ α f` held at every step.
        cap_holds: bool,
        /// `∏ (1 − x_n)(1 − y_n)`, which dominates `value`.
        trace_product: T,
    },
    /// The hypothesis `f² ≥ (1 − p)^v / (α(1 − α))` fails.
    Unverified { lhs: T, rhs: T },
}

/// Lower bound on connectivity of `P_ℓ × G` from `f = f_G(p)` and `v = |V(G)|`.
pub fn line_product_bound<T: Scalar>(f: &T, v: usize, p: &T, alpha: &T, ell: usize) -> Result<LineBound<T>> {
    if *alpha <= T::zero() || *alpha > T::from_ratio(1, 2) {
        return Err(Error::OutOfRange(format!(
            "alpha = {} is not in (0, 1/2]",
            alpha.to_f64()
        )));
    }
    if ell == 0 {
        return Err(Error::OutOfRange("ell must be at least 1".into()));
    }
    let one = T::one();
    let isolated = (one.clone() - p.clone()).powi(v as u32);
    let lhs = f.clone() * f.clone();
    let rhs = isolated.clone() / (alpha.clone() * (one.clone() - alpha.clone()));
    if lhs < rhs || f.is_zero_value() {
        return Ok(LineBound::Unverified { lhs, rhs });
    }
    let cap = alpha.clone() * f.clone();
    let mut trace = Vec::with_capacity(ell);
    let mut x = T::zero();
    let mut cap_holds = true;
    let mut product = one.clone();
    for n in 1..=ell {
        cap_holds &= x <= cap;
        let y = (one.clone() - f.clone()) / (one.clone() - x.clone());
        product = product * (one.clone() - x.clone()) * (one.clone() - y.clone());
        trace.push(RecursionStep { n, x: x.clone(), y });
        x = isolated.clone() / (f.clone() - x);
    }
    Ok(LineBound::Bound {
        value: ((one - alpha.clone()) * f.clone()).powi(ell as u32),
        trace,
        cap_holds,
        trace_product: product,
    })
}

/// Root of `f(p)² = 4(1 − p)^v` on `[0, 1]` by bisection.
pub fn p_star(f: impl Fn(f64) -> f64, v: usize) -> Result<f64> {
    let h = |p: f64| f(p).powi(2) - 4.0 * (1.0 - p).powi(v as i32);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    if h(lo) >= 0.0 || h(hi) <= 0.0 {
        return Err(Error::NoSignChange);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Least-connectivity curve and vertex count of a builtin fiber.
pub fn fiber_curve(name: &str) -> Result<(Curve, usize)> {
    let n = builtin_graph(name)?.n();
    Ok((Curve::parse("f", name, 1)?, n))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PStarTable {
    pub entries: Vec<(String, f64)>,
    /// `p⋆(K_n)` strictly decreases over the complete fibers listed.
    pub complete_decreasing: bool,
    /// `5/9 < p⋆(K_n) < 0.5556` at the largest `n`.
    pub limit_consistent: bool,
}

/// `p⋆` for `K_3`, `C_4`, `C_5`, then `K_n` for `2 ≤ n ≤ n_max`.
pub fn pstar_table(n_max: usize) -> Result<PStarTable> {
    let mut entries = Vec::new();
    let named = ["K3", "C4", "C5"].into_iter().map(String::from);
    let complete = (2..=n_max).map(|n| format!("K{n}"));
    for name in named.chain(complete) {
        let (curve, v) = fiber_curve(&name)?;
        entries.push((name, p_star(|p| eval_closed_form(&curve, &p), v)?));
    }
    let ks: Vec<f64> = entries[3..].iter().map(|(_, x)| *x).collect();
    let complete_decreasing = ks.windows(2).all(|w| w[1] < w[0]);
    let limit_consistent = ks.last().is_some_and(|&x| x > 5.0 / 9.0 && x < 0.5556);
    Ok(PStarTable {
        entries,
        complete_decreasing,
        limit_consistent,
    })
}

/// `(θ² + (1−θ)², θ² + (1−θ)/2)`: the vertex-colouring bound and the
/// On/L/D bound on the square lattice for a site threshold `θ`.
pub fn lattice_lower_bounds(theta: f64) -> (f64, f64) {
    let t2 = theta * theta;
    (t2 + (1.0 - theta).powi(2), t2 + (1.0 - theta) / 2.0)
}

/// `x` cut to `digits` decimals, rounding down as lower bounds are quoted.
/// A `1e-9` nudge absorbs representation error in inputs like `0.531136`.
pub fn truncate_decimal(x: f64, digits: usize) -> String {
    let scale = 10f64.powi(digits as i32);
    format!("{:.*}", digits, (x * scale + 1e-9).floor() / scale)
}

/// `1 − k^k/(k+1)^{k+1}` with `0⁰ = 1`, so `k = 0` gives 0.
pub fn k_indep_line_threshold(k: u32) -> Rational {
    let kk = if k == 0 { int(1) } else { int(k as i64).powi(k) };
    int(1) - kk / int(k as i64 + 1).powi(k + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn truncation_rounds_down() {
        assert_eq!(truncate_decimal(0.506272, 4), "0.5062");
        assert_eq!(truncate_decimal(0.554974821, 6), "0.554974");
        assert_eq!(truncate_decimal(0.531136, 6), "0.531136");
    }

    #[test]
    fn bound_examples() {
        match line_product_bound(&1.0, 1, &0.8, &0.5, 3).unwrap() {
            LineBound::Bound {
                value,
                cap_holds,
                trace_product,
                ..
            } => {
                assert!((value - 0.125).abs() < 1e-12);
                assert!(cap_holds && trace_product >= value);
            }
            other => panic!("{other:?}"),
        }
        match line_product_bound(&0.7, 2, &0.7, &0.5, 4).unwrap() {
            LineBound::Bound { value, .. } => assert!((value - 0.35f64.powi(4)).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            line_product_bound(&0.6, 2, &0.6, &0.5, 2).unwrap(),
            LineBound::Unverified { .. }
        ));
        let exact = line_product_bound(&ratio(7, 10), 2, &ratio(7, 10), &ratio(1, 2), 2).unwrap();
        assert!(matches!(exact, LineBound::Bound { value, .. } if value == ratio(49, 400)));
    }

    #[test]
    fn pstar_small_fibers() {
        assert!((p_star(|_| 1.0, 1).unwrap() - 0.75).abs() < 1e-12);
        assert!((p_star(|p| p, 2).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        let (curve, v) = fiber_curve("K3").unwrap();
        let x = p_star(|p| eval_closed_form(&curve, &p), v).unwrap();
        assert!((x - 0.63154).abs() < 1e-4);
        assert!(p_star(|_| 0.0, 1).is_err());
    }

    #[test]
    fn lattice_arithmetic() {
        let (newman, onld) = lattice_lower_bounds(0.556);
        assert!((newman - 0.506272).abs() < 1e-9);
        assert!((onld - 0.531136).abs() < 1e-9);
        assert_eq!(lattice_lower_bounds(1.0), (1.0, 1.0));
    }

    #[test]
    fn line_thresholds() {
        assert_eq!(k_indep_line_threshold(0), int(0));
        assert_eq!(k_indep_line_threshold(1), ratio(3, 4));
        assert_eq!(k_indep_line_threshold(2), ratio(23, 27));
    }
}
