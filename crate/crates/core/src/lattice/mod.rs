//! Finite-window samplers for the square-lattice constructions, with
//! deterministic per-sample certificates and exact per-edge marginals.
//!
//! Every sample is a pure function of `(seed, trial, vertex coordinates)`, so
//! results do not depend on iteration order or on the window radius.

mod ladder_window;
mod leftdown;
mod onld;
mod shell;

use std::collections::BTreeMap;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Dsu, LabeledGraph};

pub use ladder_window::{ladder_window_check, LadderWindowReport};
pub use leftdown::{couple_left_down, left_down_vbm, sample_left_down, LeftDownEquivalence};
pub use onld::{onld_vbm, sample_onld_construction};
pub use shell::{sample_shell_construction, shell_vbm, SHELL_Q};

pub const MIN_RADIUS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WindowConfig {
    /// The window is `{(x, y) : max(|x|, |y|) ≤ radius}`.
    pub radius: usize,
    pub seed: u64,
    pub trials: u64,
}

impl WindowConfig {
    pub fn new(radius: usize, seed: u64, trials: u64) -> Result<Self> {
        let cfg = WindowConfig { radius, seed, trials };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<()> {
        if self.radius < MIN_RADIUS {
            return Err(Error::OutOfRange(format!(
                "radius {} is below the minimum {MIN_RADIUS}",
                self.radius
            )));
        }
        if self.trials == 0 {
            return Err(Error::OutOfRange("trials must be positive".into()));
        }
        Ok(())
    }
}

/// The `ℓ∞` ball of radius `R` in `Z²`.
///
/// Vertex `(x, y)` has index `(x + R)(2R + 1) + (y + R)`, so in every edge
/// `(u, v)` with `u < v` the vertex `u` is to the left of or below `v`.
#[derive(Debug, Clone)]
pub struct Window {
    radius: i64,
    graph: LabeledGraph,
}

impl Window {
    pub fn new(radius: usize) -> Result<Self> {
        let r = radius as i64;
        let side = 2 * radius + 1;
        let mut edges = Vec::with_capacity(2 * side * (side - 1));
        for i in 0..side {
            for j in 0..side {
                let v = i * side + j;
                if i + 1 < side {
                    edges.push((v, v + side));
                }
                if j + 1 < side {
                    edges.push((v, v + 1));
                }
            }
        }
        Ok(Window {
            radius: r,
            graph: LabeledGraph::new(side * side, edges)?,
        })
    }

    pub fn radius(&self) -> usize {
        self.radius as usize
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    fn side(&self) -> i64 {
        2 * self.radius + 1
    }

    pub fn coords(&self, v: usize) -> (i64, i64) {
        let v = v as i64;
        (v / self.side() - self.radius, v % self.side() - self.radius)
    }

    pub fn index(&self, x: i64, y: i64) -> Option<usize> {
        let r = self.radius;
        (x.abs() <= r && y.abs() <= r).then(|| ((x + r) * self.side() + (y + r)) as usize)
    }

    /// `max(|x|, |y|)`.
    pub fn norm(&self, v: usize) -> usize {
        let (x, y) = self.coords(v);
        x.unsigned_abs().max(y.unsigned_abs()) as usize
    }

    /// True when `(u, v)` with `u < v` is horizontal, i.e. `v` is right of `u`.
    pub fn is_horizontal(&self, u: usize, v: usize) -> bool {
        v - u == self.side() as usize
    }
}

/// Uniform draws in `[0, 1)` for one vertex in one trial.
///
/// A ChaCha8 stream per trial, positioned by the vertex coordinates, so the
/// same vertex always reads the same words.
pub(crate) struct VertexRng {
    rng: ChaCha8Rng,
}

impl VertexRng {
    pub(crate) fn new(seed: u64, trial: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        VertexRng { rng }
    }

    pub(crate) fn uniforms<const K: usize>(&mut self, x: i64, y: i64) -> [f64; K] {
        const WORDS_PER_VERTEX: u128 = 8;
        let zigzag = |a: i64| ((a << 1) ^ (a >> 63)) as u32 as u128;
        let key = (zigzag(x) << 32) | zigzag(y);
        self.rng.set_word_pos(key * WORDS_PER_VERTEX);
        // 53 random bits per draw.
        std::array::from_fn(|_| (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64))
    }
}

/// Per-sample outcome of one certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateRecord {
    pub name: String,
    /// `flags[i]` is true when the certificate held in trial `i`.
    pub flags: Vec<bool>,
}

impl CertificateRecord {
    pub fn violations(&self) -> usize {
        self.flags.iter().filter(|&&ok| !ok).count()
    }

    pub fn holds(&self) -> bool {
        self.violations() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyReport {
    /// Edges whose frequency lies within `sigmas` binomial deviations.
    pub within: usize,
    pub edges: usize,
    pub min_frequency: f64,
    pub min_exact: f64,
    /// Fewer than 99% of edges fell within the band.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleStats {
    pub construction: String,
    pub config: WindowConfig,
    /// Window edges as coordinate pairs, in graph edge order.
    pub edges: Vec<((i64, i64), (i64, i64))>,
    pub open_counts: Vec<u64>,
    pub exact_marginals: Vec<f64>,
    pub certificates: Vec<CertificateRecord>,
    /// Component size to number of components, summed over trials.
    pub component_sizes: BTreeMap<usize, u64>,
}

impl SampleStats {
    pub fn frequencies(&self) -> Vec<f64> {
        let t = self.config.trials as f64;
        self.open_counts.iter().map(|&c| c as f64 / t).collect()
    }

    pub fn frequency_report(&self, sigmas: f64) -> FrequencyReport {
        let t = self.config.trials as f64;
        let freqs = self.frequencies();
        let within = freqs
            .iter()
            .zip(&self.exact_marginals)
            .filter(|(f, p)| (*f - *p).abs() <= sigmas * (*p * (1.0 - *p) / t).sqrt() + 1e-12)
            .count();
        let edges = freqs.len();
        FrequencyReport {
            within,
            edges,
            min_frequency: freqs.iter().copied().fold(f64::INFINITY, f64::min),
            min_exact: self.exact_marginals.iter().copied().fold(f64::INFINITY, f64::min),
            flagged: (within as f64) < 0.99 * edges as f64,
        }
    }

    pub fn certificate(&self, name: &str) -> Option<&CertificateRecord> {
        self.certificates.iter().find(|c| c.name == name)
    }

    pub fn certificates_hold(&self) -> bool {
        self.certificates.iter().all(CertificateRecord::holds)
    }
}

/// What one trial produces: open window edges and one flag per certificate.
pub(crate) struct Trial {
    pub(crate) open: Vec<bool>,
    pub(crate) flags: Vec<bool>,
}

/// Runs `trials` samples and aggregates counts. `run` sees the trial index
/// and a generator already keyed by `(seed, trial)`.
pub(crate) fn collect_stats(
    construction: &str,
    cfg: WindowConfig,
    window: &Window,
    exact_marginals: Vec<f64>,
    certificate_names: &[&str],
    mut run: impl FnMut(&mut VertexRng) -> Trial,
) -> SampleStats {
    let graph = window.graph();
    let mut open_counts = vec![0u64; graph.m()];
    let mut flags: Vec<Vec<bool>> = vec![Vec::with_capacity(cfg.trials as usize); certificate_names.len()];
    let mut component_sizes = BTreeMap::new();
    for trial in 0..cfg.trials {
        let mut rng = VertexRng::new(cfg.seed, trial);
        let outcome = run(&mut rng);
        debug_assert_eq!(outcome.flags.len(), certificate_names.len());
        for (count, &open) in open_counts.iter_mut().zip(&outcome.open) {
            *count += open as u64;
        }
        for (record, ok) in flags.iter_mut().zip(outcome.flags) {
            record.push(ok);
        }
        for size in component_census(graph, &outcome.open) {
            *component_sizes.entry(size).or_insert(0) += 1;
        }
    }
    SampleStats {
        construction: construction.to_string(),
        config: cfg,
        edges: graph
            .edges()
            .iter()
            .map(|&(u, v)| (window.coords(u), window.coords(v)))
            .collect(),
        open_counts,
        exact_marginals,
        certificates: certificate_names
            .iter()
            .zip(flags)
            .map(|(name, flags)| CertificateRecord {
                name: name.to_string(),
                flags,
            })
            .collect(),
        component_sizes,
    }
}

/// Union-find over the open edges; returns the root of every vertex.
pub(crate) fn component_roots(graph: &LabeledGraph, open: &[bool]) -> Vec<usize> {
    let mut dsu = Dsu::new(graph.n());
    for (&(u, v), _) in graph.edges().iter().zip(open).filter(|(_, &o)| o) {
        dsu.union(u, v);
    }
    (0..graph.n()).map(|v| dsu.find(v)).collect()
}

/// Sizes of all open components, isolated vertices included.
pub fn component_census(graph: &LabeledGraph, open: &[bool]) -> Vec<usize> {
    let mut sizes = BTreeMap::new();
    for root in component_roots(graph, open) {
        *sizes.entry(root).or_insert(0usize) += 1;
    }
    sizes.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_layout() {
        let w = Window::new(4).unwrap();
        assert_eq!(w.graph().n(), 81);
        assert_eq!(w.graph().m(), 2 * 9 * 8);
        for v in 0..81 {
            let (x, y) = w.coords(v);
            assert_eq!(w.index(x, y), Some(v));
        }
        let (u, v) = (w.index(0, 0).unwrap(), w.index(1, 0).unwrap());
        assert!(w.graph().has_edge(u, v) && w.is_horizontal(u, v));
        let up = w.index(0, 1).unwrap();
        assert!(w.graph().has_edge(u, up) && !w.is_horizontal(u, up));
        assert_eq!(w.norm(w.index(-3, 2).unwrap()), 3);
        assert!(w.index(5, 0).is_none());
    }

    #[test]
    fn draws_are_keyed_by_coordinates() {
        let a: [f64; 2] = VertexRng::new(7, 3).uniforms(2, -5);
        let mut rng = VertexRng::new(7, 3);
        let _: [f64; 4] = rng.uniforms(0, 0);
        let b: [f64; 2] = rng.uniforms(2, -5);
        assert_eq!(a, b);
        let c: [f64; 2] = VertexRng::new(7, 4).uniforms(2, -5);
        assert_ne!(a, c);
        assert!(a.iter().all(|x| (0.0..1.0).contains(x)));
    }

    #[test]
    fn census_counts_every_vertex() {
        let w = Window::new(4).unwrap();
        let open: Vec<bool> = (0..w.graph().m()).map(|e| e % 3 == 0).collect();
        assert_eq!(component_census(w.graph(), &open).iter().sum::<usize>(), 81);
        assert_eq!(component_census(w.graph(), &vec![true; w.graph().m()]), vec![81]);
    }

    #[test]
    fn config_checks() {
        assert!(WindowConfig::new(3, 0, 1).is_err());
        assert!(WindowConfig::new(4, 0, 0).is_err());
        assert!(WindowConfig::new(4, 0, 1).is_ok());
    }
}
