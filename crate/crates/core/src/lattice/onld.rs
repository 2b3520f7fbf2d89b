//! The On/L/D measure: On vertices join On neighbours, an `L` vertex opens
//! the edge to its left and a `D` vertex the edge below it.

use super::{collect_stats, component_roots, SampleStats, Trial, Window, WindowConfig};
use crate::error::{Error, Result};
use crate::graph::Dsu;
use crate::scalar::Scalar;
use crate::vertex::VertexBasedMeasure;

const ON: usize = 0;
const L: usize = 1;
const D: usize = 2;

/// States (On, L, D) with probabilities `(q, (1−q)/2, (1−q)/2)`. Every edge
/// is open with probability `q² + (1−q)/2`.
pub fn onld_vbm<T: Scalar>(window: &Window, q: &T) -> Result<VertexBasedMeasure<T>> {
    let graph = window.graph().clone();
    let half = (T::one() - q.clone()) / T::from_int(2);
    let dists = vec![vec![q.clone(), half.clone(), half]; graph.n()];
    let edges = graph.edges().to_vec();
    let horizontal: Vec<bool> = edges.iter().map(|&(u, v)| window.is_horizontal(u, v)).collect();
    // `v` is the right or upper end, so it is the one that can point back at `u`.
    VertexBasedMeasure::new(graph, dists, |e, su, sv| {
        (su == ON && sv == ON) || sv == if horizontal[e] { L } else { D }
    })
}

/// Orientation of open edges away from the `L`/`D` vertex that opened them.
/// Returns the tail of each open edge, or `None` for On-On edges.
fn orient(window: &Window, states: &[usize], open: &[bool]) -> Vec<Option<usize>> {
    window
        .graph()
        .edges()
        .iter()
        .zip(open)
        .map(|(&(u, v), &o)| {
            let points_back = if window.is_horizontal(u, v) { L } else { D };
            (o && states[v] == points_back).then_some(v)
        })
        .collect()
}

/// Certificate (a): every open edge is On-On or oriented; away from the
/// left and bottom boundary, `L`/`D` vertices have out-degree 1 and On
/// vertices out-degree 0.
fn out_degrees_hold(window: &Window, states: &[usize], open: &[bool], tails: &[Option<usize>]) -> bool {
    let graph = window.graph();
    let mut out = vec![0usize; graph.n()];
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        match (open[e], tails[e]) {
            (true, Some(t)) => out[t] += 1,
            (true, None) if states[u] != ON || states[v] != ON => return false,
            _ => {}
        }
    }
    let r = window.radius() as i64;
    (0..graph.n()).all(|v| {
        let (x, y) = window.coords(v);
        // The out-edge of a boundary vertex may leave the window.
        let outward_cut = (states[v] == L && x == -r) || (states[v] == D && y == -r);
        outward_cut || out[v] == usize::from(states[v] != ON)
    })
}

/// Certificate (b): each LD-section whose vertices all lie strictly inside
/// the window meets at most one On-section.
fn single_attachment_holds(window: &Window, states: &[usize], open: &[bool], tails: &[Option<usize>]) -> bool {
    let graph = window.graph();
    let n = graph.n();
    let on_open: Vec<bool> = (0..graph.m()).map(|e| open[e] && tails[e].is_none()).collect();
    let on_sections = component_roots(graph, &on_open);
    let mut ld = Dsu::new(n);
    let mut in_section = vec![false; n];
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        if tails[e].is_some() {
            ld.union(u, v);
            in_section[u] = true;
            in_section[v] = true;
        }
    }
    let inner = window.radius() - 1;
    // Per LD-section: (fully interior, attached On-section if any, conflict).
    let mut sections: std::collections::HashMap<usize, (bool, Option<usize>, bool)> = Default::default();
    for v in (0..n).filter(|&v| in_section[v]) {
        let entry = sections.entry(ld.find(v)).or_insert((true, None, false));
        entry.0 &= window.norm(v) <= inner;
        if states[v] == ON {
            match entry.1 {
                Some(s) if s != on_sections[v] => entry.2 = true,
                _ => entry.1 = Some(on_sections[v]),
            }
        }
    }
    sections.values().all(|&(interior, _, conflict)| !interior || !conflict)
}

/// Samples the On/L/D measure for `q ∈ (1/4, 1]` and records the
/// `out_degree` and `single_attachment` certificates per sample.
pub fn sample_onld_construction<T: Scalar>(cfg: &WindowConfig, q: &T) -> Result<SampleStats> {
    cfg.check()?;
    if *q <= T::from_ratio(1, 4) || *q > T::one() {
        return Err(Error::OutOfRange(format!("q = {} is not in (1/4, 1]", q.to_f64())));
    }
    let window = Window::new(cfg.radius)?;
    let vbm = onld_vbm(&window, q)?;
    let marginals = vbm.edge_marginals().iter().map(Scalar::to_f64).collect();
    let vbm = vbm.map(|w| w.to_f64());
    let n = window.graph().n();
    let names = ["out_degree", "single_attachment"];
    Ok(collect_stats("onld", *cfg, &window, marginals, &names, |rng| {
        let states: Vec<usize> = (0..n)
            .map(|v| {
                let (x, y) = window.coords(v);
                let [u] = rng.uniforms(x, y);
                vbm.draw_state(v, u)
            })
            .collect();
        let open = vbm.open_edges(&states);
        let tails = orient(&window, &states, &open);
        Trial {
            flags: vec![
                out_degrees_hold(&window, &states, &open, &tails),
                single_attachment_holds(&window, &states, &open, &tails),
            ],
            open,
        }
    }))
}
