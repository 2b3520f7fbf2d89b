//! Shell colouring: the state of a vertex depends on its `ℓ∞` sphere `T_k`
//! through `k mod 6`, and Blue and Red never meet along an open edge.

use super::{collect_stats, component_roots, SampleStats, Trial, Window, WindowConfig};
use crate::error::{Error, Result};
use crate::vertex::VertexBasedMeasure;

const BLUE: usize = 0;
const RED: usize = 1;
const INWARDS: usize = 2;

/// `√3 − 1`.
pub const SHELL_Q: f64 = 0.732_050_807_568_877_2;

/// Law of a vertex in `T_k` over (Blue, Red, Inwards).
fn shell_dist(k: usize) -> Vec<f64> {
    let q = SHELL_Q;
    match k % 6 {
        0 => vec![1.0, 0.0, 0.0],
        1 => vec![1.0 - q / 2.0, q / 2.0, 0.0],
        2 => vec![0.0, q, 1.0 - q],
        3 => vec![0.0, 1.0, 0.0],
        4 => vec![q / 2.0, 1.0 - q / 2.0, 0.0],
        _ => vec![q, 0.0, 1.0 - q],
    }
}

/// The colouring on the window of radius `R`.
///
/// An edge is open when both ends share a colour, or when it joins `T_k` to
/// `T_{k+1}` and the outer end is Inwards.
pub fn shell_vbm(window: &Window) -> Result<VertexBasedMeasure<f64>> {
    let graph = window.graph().clone();
    let shells: Vec<usize> = (0..graph.n()).map(|v| window.norm(v)).collect();
    let dists = shells.iter().map(|&k| shell_dist(k)).collect();
    let edges = graph.edges().to_vec();
    VertexBasedMeasure::new(graph, dists, |e, su, sv| {
        let (u, v) = edges[e];
        let same_colour = su == sv && su != INWARDS;
        let inward_u = shells[u] == shells[v] + 1 && su == INWARDS;
        let inward_v = shells[v] == shells[u] + 1 && sv == INWARDS;
        same_colour || inward_u || inward_v
    })
}

/// True when some component meets both `T_k` and `T_{k+3}` for some
/// `k ≡ 0 mod 3`. A path changes shell by at most one per step, so a
/// component meets every shell between its innermost and outermost ones.
fn crosses_three_shells(shells: &[usize], roots: &[usize]) -> bool {
    let mut span: std::collections::HashMap<usize, (usize, usize)> = std::collections::HashMap::new();
    for (v, &r) in roots.iter().enumerate() {
        let s = span.entry(r).or_insert((shells[v], shells[v]));
        s.0 = s.0.min(shells[v]);
        s.1 = s.1.max(shells[v]);
    }
    span.values().any(|&(lo, hi)| lo.div_ceil(3) * 3 + 3 <= hi)
}

/// Samples the colouring on the window and checks, in every sample:
/// `no_crossing` (no open path from `T_k` to `T_{k+3}`, `k ≡ 0 mod 3`),
/// `fixed_shells` (Blue on `k ≡ 0`, Red on `k ≡ 3 mod 6`) and
/// `inwards_dead_end` (an Inwards vertex has at most one open edge).
pub fn sample_shell_construction(cfg: &WindowConfig) -> Result<SampleStats> {
    cfg.check()?;
    if cfg.radius < 7 {
        return Err(Error::OutOfRange(format!(
            "the shell sampler needs radius at least 7, got {}",
            cfg.radius
        )));
    }
    let window = Window::new(cfg.radius)?;
    let vbm = shell_vbm(&window)?;
    let graph = window.graph();
    let shells: Vec<usize> = (0..graph.n()).map(|v| window.norm(v)).collect();
    let names = ["no_crossing", "fixed_shells", "inwards_dead_end"];
    Ok(collect_stats(
        "shell",
        *cfg,
        &window,
        vbm.edge_marginals(),
        &names,
        |rng| {
            let states: Vec<usize> = (0..graph.n())
                .map(|v| {
                    let (x, y) = window.coords(v);
                    let [u] = rng.uniforms(x, y);
                    vbm.draw_state(v, u)
                })
                .collect();
            let open = vbm.open_edges(&states);
            let roots = component_roots(graph, &open);
            let fixed = states.iter().zip(&shells).all(|(&s, &k)| match k % 6 {
                0 => s == BLUE,
                3 => s == RED,
                _ => true,
            });
            let mut degree = vec![0usize; graph.n()];
            for (&(u, v), _) in graph.edges().iter().zip(&open).filter(|(_, &o)| o) {
                degree[u] += 1;
                degree[v] += 1;
            }
            let dead_ends = (0..graph.n()).all(|v| states[v] != INWARDS || degree[v] <= 1);
            Trial {
                flags: vec![!crosses_three_shells(&shells, &roots), fixed, dead_ends],
                open,
            }
        },
    ))
}
