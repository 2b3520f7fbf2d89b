//! The support method: solve once at a probe value, freeze the set `J` of
//! columns with zero weight, then at each grid point solve `Aw = q` with
//! `w_j = 0` on `J` and look for a dual point tight on the complement. A grid
//! point is valid iff both exist and are feasible, which certifies optimality.

use num::Zero;

use super::simplex::{dual_point, solve_full_rank};
use super::{build_lp, solve, Direction};
use crate::error::{Error, Result};
use crate::graph::LabeledGraph;
use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct SupportSample {
    pub p: Rational,
    /// Objective of the frozen-basis solution, when the system is solvable.
    pub value: Option<Rational>,
    pub valid: bool,
    /// The frozen support does not determine a unique primal at this `p`.
    pub singular: bool,
}

/// A maximal run of consecutive valid grid points.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePiece {
    pub lo: Rational,
    pub hi: Rational,
    pub values: Vec<(Rational, Rational)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupportMethodResult {
    pub probe: Rational,
    pub probe_optimum: Rational,
    /// Columns with positive weight at the probe.
    pub support: Vec<usize>,
    /// Columns with zero weight at the probe, fixed to zero across the grid.
    pub zero_set: Vec<usize>,
    pub samples: Vec<SupportSample>,
    pub pieces: Vec<CurvePiece>,
}

fn sample_at(graph: &LabeledGraph, p: &Rational, direction: Direction, support: &[usize]) -> Result<SupportSample> {
    let lp = build_lp(graph, p, direction)?;
    let restricted: Vec<Vec<Rational>> = lp
        .matrix
        .iter()
        .map(|row| support.iter().map(|&j| row[j].clone()).collect())
        .collect();
    let invalid = |singular: bool| SupportSample {
        p: p.clone(),
        value: None,
        valid: false,
        singular,
    };
    let ws = match solve_full_rank(restricted, lp.rhs.clone()) {
        Ok(Some(ws)) => ws,
        Ok(None) => return Ok(invalid(false)),
        Err(Error::SingularSystem(_)) => return Ok(invalid(true)),
        Err(e) => return Err(e),
    };
    let mut w = vec![Rational::zero(); lp.objective.len()];
    for (&j, v) in support.iter().zip(ws) {
        w[j] = v;
    }
    let value = lp
        .objective
        .iter()
        .zip(&w)
        .filter(|(c, _)| !c.is_zero())
        .fold(Rational::zero(), |acc, (c, wj)| acc + c * wj);
    let mut tight = vec![false; w.len()];
    for &j in support {
        tight[j] = true;
    }
    let valid = match dual_point(&lp.matrix, &lp.solver_cost(), &tight)? {
        Some(y) => {
            let y: Vec<Rational> = match direction {
                Direction::Min => y,
                Direction::Max => y.into_iter().map(|v| -v).collect(),
            };
            lp.certify(&w, &y).holds()
        }
        None => false,
    };
    Ok(SupportSample {
        p: p.clone(),
        value: Some(value),
        valid,
        singular: false,
    })
}

/// Runs the method on `grid` with the support found at `p_probe`.
pub fn support_method(
    graph: &LabeledGraph,
    p_probe: &Rational,
    grid: &[Rational],
    direction: Direction,
) -> Result<SupportMethodResult> {
    let lp = build_lp(graph, p_probe, direction)?;
    let sol = solve(&lp)?;
    let support: Vec<usize> = (0..sol.primal.len()).filter(|&j| !sol.primal[j].is_zero()).collect();
    let samples = grid
        .iter()
        .map(|p| sample_at(graph, p, direction, &support))
        .collect::<Result<Vec<_>>>()?;
    let mut pieces: Vec<CurvePiece> = Vec::new();
    let mut open = false;
    for s in &samples {
        match (s.valid, open) {
            (true, true) => {
                let piece = pieces.last_mut().unwrap();
                piece.hi = s.p.clone();
                piece.values.push((s.p.clone(), s.value.clone().unwrap()));
            }
            (true, false) => pieces.push(CurvePiece {
                lo: s.p.clone(),
                hi: s.p.clone(),
                values: vec![(s.p.clone(), s.value.clone().unwrap())],
            }),
            _ => {}
        }
        open = s.valid;
    }
    Ok(SupportMethodResult {
        probe: p_probe.clone(),
        probe_optimum: sol.optimum,
        support,
        zero_set: sol.zero_set,
        samples,
        pieces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::builtin_graph;
    use crate::scalar::{int, ratio, rational_grid};

    #[test]
    fn c4_minimum_is_one_piece() {
        let grid = rational_grid(&ratio(1, 2), &int(1), 11);
        let res = support_method(&builtin_graph("C4").unwrap(), &ratio(3, 4), &grid, Direction::Min).unwrap();
        assert_eq!(res.pieces.len(), 1);
        for (p, v) in &res.pieces[0].values {
            assert_eq!(*v, int(2) * p - int(1));
        }
    }

    #[test]
    fn c5_minimum_upper_piece() {
        let grid = rational_grid(&ratio(29, 50), &int(1), 22);
        let res = support_method(&builtin_graph("C5").unwrap(), &ratio(4, 5), &grid, Direction::Min).unwrap();
        let three = int(3);
        for s in &res.samples {
            assert!(s.valid, "invalid at {}", s.p);
            let p = &s.p;
            assert_eq!(
                s.value.clone().unwrap(),
                p * (&three * p * p - int(1)) / (&three * p - int(1))
            );
        }
        // Below √3/3 the frozen support loses feasibility.
        let low = support_method(
            &builtin_graph("C5").unwrap(),
            &ratio(4, 5),
            &[ratio(1, 2)],
            Direction::Min,
        )
        .unwrap();
        assert!(!low.samples[0].valid);
    }
}
