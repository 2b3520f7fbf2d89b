//! The left-down measure `ν_t` and its coupling to independent bond
//! percolation with parameter `z = 1 − √(1 − 2t)`.
//!
//! In the coupling every vertex `v` owns the edge `e1(v)` to its left and
//! `e2(v)` below it. Both are open independently with probability `z`; when
//! both are open a fair coin closes one. `v` is then `L` if `e1(v)` survives,
//! `D` if `e2(v)` does, and Off otherwise.

use std::collections::BTreeMap;

use super::{collect_stats, SampleStats, Trial, Window, WindowConfig};
use crate::error::{Error, Result};
use crate::scalar::{rational_sqrt, Rational, Scalar};
use crate::vertex::VertexBasedMeasure;

const OFF: usize = 0;
const L: usize = 1;
const D: usize = 2;

fn check_t(t: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&t) {
        return Err(Error::OutOfRange(format!("t = {t} is not in [0, 1/2]")));
    }
    Ok(())
}

/// States (Off, L, D) with probabilities `(1 − 2t, t, t)`.
pub fn left_down_vbm<T: Scalar>(window: &Window, t: &T) -> Result<VertexBasedMeasure<T>> {
    check_t(t.to_f64())?;
    let graph = window.graph().clone();
    let off = T::one() - T::from_int(2) * t.clone();
    let dists = vec![vec![off, t.clone(), t.clone()]; graph.n()];
    let horizontal: Vec<bool> = graph.edges().iter().map(|&(u, v)| window.is_horizontal(u, v)).collect();
    VertexBasedMeasure::new(graph, dists, |e, _, sv| sv == if horizontal[e] { L } else { D })
}

/// One vertex of the coupling: raw edge states and the resolved state.
fn resolve(e1: bool, e2: bool, close_e1: bool) -> usize {
    match (e1, e2) {
        (true, true) if close_e1 => D,
        (true, true) => L,
        (true, false) => L,
        (false, true) => D,
        (false, false) => OFF,
    }
}

/// Samples `ν_t` through the coupling and records the `domination`
/// certificate: every `ν_t`-open window edge is open in the percolation.
pub fn sample_left_down(cfg: &WindowConfig, t: f64) -> Result<SampleStats> {
    cfg.check()?;
    check_t(t)?;
    let z = 1.0 - (1.0 - 2.0 * t).sqrt();
    let window = Window::new(cfg.radius)?;
    let vbm = left_down_vbm(&window, &t)?;
    let graph = window.graph();
    let n = graph.n();
    Ok(collect_stats(
        "leftdown",
        *cfg,
        &window,
        vbm.edge_marginals(),
        &["domination"],
        |rng| {
            let mut states = vec![OFF; n];
            // Raw percolation states of e1(v) and e2(v).
            let mut raw = vec![(false, false); n];
            for v in 0..n {
                let (x, y) = window.coords(v);
                let [a, b, c] = rng.uniforms(x, y);
                raw[v] = (a < z, b < z);
                states[v] = resolve(a < z, b < z, c < 0.5);
            }
            let open = vbm.open_edges(&states);
            let dominated = graph.edges().iter().zip(&open).all(|(&(u, v), &o)| {
                let owned = if window.is_horizontal(u, v) { raw[v].0 } else { raw[v].1 };
                !o || owned
            });
            Trial {
                flags: vec![dominated],
                open,
            }
        },
    ))
}

/// Exact comparison of the two descriptions of `ν_t` on the 2×2 window.
#[derive(Debug, Clone, PartialEq)]
pub struct LeftDownEquivalence {
    pub t: Rational,
    pub z: f64,
    /// `z` was rational, so the comparison is in exact arithmetic.
    pub exact: bool,
    pub state_distributions_equal: bool,
    pub edge_distributions_equal: bool,
    pub max_abs_difference: f64,
}

impl LeftDownEquivalence {
    pub fn holds(&self) -> bool {
        self.state_distributions_equal && self.edge_distributions_equal
    }
}

/// Vertices `(0,0), (0,1), (1,0), (1,1)` as indices 0..4; the window edges
/// as `(owner, is_left_edge)`, where the owner is the right or upper end.
const SQUARE_EDGES: [(usize, bool); 4] = [(2, true), (3, true), (1, false), (3, false)];

fn edge_pattern(states: &[usize; 4]) -> u8 {
    SQUARE_EDGES
        .iter()
        .enumerate()
        .filter(|(_, &(owner, left))| states[owner] == if left { L } else { D })
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

type Laws<T> = (BTreeMap<[usize; 4], T>, BTreeMap<u8, T>);

fn direct_laws<T: Scalar>(t: &T) -> Laws<T> {
    let law = [T::one() - T::from_int(2) * t.clone(), t.clone(), t.clone()];
    let mut states_law = BTreeMap::new();
    let mut edges_law = BTreeMap::new();
    for code in 0..81usize {
        let s = [code % 3, code / 3 % 3, code / 9 % 3, code / 27];
        let w = s.iter().fold(T::one(), |acc, &si| acc * law[si].clone());
        add(&mut edges_law, edge_pattern(&s), w.clone());
        add(&mut states_law, s, w);
    }
    (states_law, edges_law)
}

/// Enumerates `(e1, e2, coin)` for all four vertices jointly.
fn coupled_laws<T: Scalar>(z: &T) -> Laws<T> {
    let bit = |on: bool| if on { z.clone() } else { T::one() - z.clone() };
    let half = T::from_ratio(1, 2);
    let mut states_law = BTreeMap::new();
    let mut edges_law = BTreeMap::new();
    for code in 0..(1usize << 12) {
        let mut s = [OFF; 4];
        let mut w = T::one();
        for (v, sv) in s.iter_mut().enumerate() {
            let bits = code >> (3 * v);
            let (e1, e2, coin) = (bits & 1 == 1, bits & 2 == 2, bits & 4 == 4);
            w = w * bit(e1) * bit(e2) * half.clone();
            *sv = resolve(e1, e2, coin);
        }
        add(&mut edges_law, edge_pattern(&s), w.clone());
        add(&mut states_law, s, w);
    }
    (states_law, edges_law)
}

fn add<K: Ord, T: Scalar>(law: &mut BTreeMap<K, T>, key: K, w: T) {
    let slot = law.entry(key).or_insert_with(T::zero);
    *slot = slot.clone() + w;
}

fn compare<K: Ord, T: Scalar>(a: &BTreeMap<K, T>, b: &BTreeMap<K, T>, tol: f64) -> (bool, f64) {
    let keys: std::collections::BTreeSet<&K> = a.keys().chain(b.keys()).collect();
    let mut equal = true;
    let mut diff = 0f64;
    for k in keys {
        let x = a.get(k).cloned().unwrap_or_else(T::zero);
        let y = b.get(k).cloned().unwrap_or_else(T::zero);
        equal &= x.approx_eq(&y, tol);
        diff = diff.max((x.to_f64() - y.to_f64()).abs());
    }
    (equal, diff)
}

fn equivalence<T: Scalar>(t: &T, z: &T, tol: f64) -> (bool, bool, f64) {
    let (ds, de) = direct_laws(t);
    let (cs, ce) = coupled_laws(z);
    let (states_eq, d1) = compare(&ds, &cs, tol);
    let (edges_eq, d2) = compare(&de, &ce, tol);
    (states_eq, edges_eq, d1.max(d2))
}

/// Compares the vertex-state and coupled descriptions on the 2×2 window by
/// full enumeration. Exact when `1 − 2t` is a rational square, otherwise in
/// `f64` with tolerance `1e-12`.
pub fn couple_left_down(t: &Rational) -> Result<LeftDownEquivalence> {
    check_t(t.to_f64())?;
    let one = Rational::one();
    let root = rational_sqrt(&(&one - Rational::from_int(2) * t));
    let (exact, z, (states_eq, edges_eq, diff)) = match root {
        Some(r) => {
            let z = &one - r;
            (true, z.to_f64(), equivalence(t, &z, 0.0))
        }
        None => {
            let tf = t.to_f64();
            let z = 1.0 - (1.0 - 2.0 * tf).sqrt();
            (false, z, equivalence(&tf, &z, 1e-12))
        }
    };
    Ok(LeftDownEquivalence {
        t: t.clone(),
        z,
        exact,
        state_distributions_equal: states_eq,
        edge_distributions_equal: edges_eq,
        max_abs_difference: diff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn exact_equivalence_at_three_eighths() {
        let report = couple_left_down(&ratio(3, 8)).unwrap();
        assert!(report.exact && report.holds());
        assert_eq!(report.z, 0.5);
        assert_eq!(report.max_abs_difference, 0.0);
    }

    #[test]
    fn float_equivalence_when_z_is_irrational() {
        let report = couple_left_down(&ratio(1, 5)).unwrap();
        assert!(!report.exact && report.holds());
    }

    #[test]
    fn wrong_coin_breaks_equivalence() {
        // Resolving double-open corners always towards L is not ν_t.
        let z = ratio(1, 2);
        let (direct, _) = direct_laws(&ratio(3, 8));
        let mut biased = BTreeMap::new();
        let bit = |on: bool| if on { z.clone() } else { Rational::one() - z.clone() };
        for code in 0..(1usize << 8) {
            let mut s = [OFF; 4];
            let mut w = Rational::one();
            for (v, sv) in s.iter_mut().enumerate() {
                let bits = code >> (2 * v);
                let (e1, e2) = (bits & 1 == 1, bits & 2 == 2);
                w = w * bit(e1) * bit(e2);
                *sv = resolve(e1, e2, false);
            }
            add(&mut biased, s, w);
        }
        assert!(!compare(&direct, &biased, 0.0).0);
    }

    #[test]
    fn sampler_dominated_and_reproducible() {
        let cfg = WindowConfig::new(6, 9, 50).unwrap();
        let a = sample_left_down(&cfg, 0.375).unwrap();
        assert!(a.certificates_hold());
        assert!(!a.frequency_report(4.0).flagged);
        assert_eq!(a, sample_left_down(&cfg, 0.375).unwrap());
    }

    #[test]
    fn t_zero_is_empty() {
        let cfg = WindowConfig::new(4, 0, 5).unwrap();
        let stats = sample_left_down(&cfg, 0.0).unwrap();
        assert!(stats.open_counts.iter().all(|&c| c == 0));
        assert_eq!(stats.component_sizes[&1], 5 * 81);
        assert!(sample_left_down(&cfg, 0.6).is_err());
    }
}
