//! The connectivity linear programme of a small graph.
//!
//! Columns are the spanning subgraphs `H` (edge masks). Rows fix the total
//! mass, every edge marginal at `p`, and the product law `μ↑(S ∪ T) = p μ↑(S)`
//! for each disjoint-support pair whose side `T` is a single edge. When some
//! pair has two sides of size at least two, independence is not linear in
//! `μ` and the programme is refused.

mod simplex;
mod support;

pub use simplex::solve_square;
pub use support::{support_method, CurvePiece, SupportMethodResult, SupportSample};

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeSubset, LabeledGraph};
use crate::measure::Measure;
use crate::scalar::{int, Rational};

/// Largest edge count accepted by [`build_lp`].
pub const MAX_LP_EDGES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Min,
    Max,
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(Direction::Min),
            "max" => Ok(Direction::Max),
            other => Err(Error::Parse(format!("direction must be min or max, got {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Mass,
    Edge(usize),
    /// `1(S ∪ T ⊆ H) − p·1(S ⊆ H) = 0` with `T` a single edge.
    Pair {
        s: EdgeSubset,
        t: EdgeSubset,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub graph: LabeledGraph,
    pub p: Rational,
    pub direction: Direction,
    pub rows: Vec<RowKind>,
    /// Dense `rows × 2^m` constraint matrix.
    pub matrix: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
    /// 1 on connected spanning subgraphs, 0 elsewhere.
    pub objective: Vec<Rational>,
}

/// Outcome of each certification check on a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub primal_feasible: bool,
    pub dual_feasible: bool,
    pub strong_duality: bool,
    pub complementary_slackness: bool,
}

impl Certificate {
    pub fn holds(&self) -> bool {
        self.primal_feasible && self.dual_feasible && self.strong_duality && self.complementary_slackness
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub optimum: Rational,
    pub primal: Vec<Rational>,
    /// One multiplier per row; dropped redundant rows get 0.
    pub dual: Vec<Rational>,
    pub basis: Vec<usize>,
    /// Rows kept after redundancy removal.
    pub kept_rows: Vec<usize>,
    /// Columns `j` with `w_j = 0`.
    pub zero_set: Vec<usize>,
    pub certificate: Certificate,
}

impl LpSolution {
    pub fn measure(&self, lp: &LinearProgram) -> Result<Measure<Rational>> {
        Measure::new(lp.graph.clone(), self.primal.clone())
    }
}

/// Builds the programme for `G` at edge probability `p`.
pub fn build_lp(graph: &LabeledGraph, p: &Rational, direction: Direction) -> Result<LinearProgram> {
    if graph.m() > MAX_LP_EDGES {
        return Err(Error::ExhaustiveLimitExceeded {
            what: "edges",
            value: graph.m(),
            limit: MAX_LP_EDGES,
        });
    }
    if p.is_negative() || *p > int(1) {
        return Err(Error::OutOfRange(format!("p = {p} is not a probability")));
    }
    let cols = 1usize << graph.m();
    let mut rows = vec![RowKind::Mass];
    rows.extend((0..graph.m()).map(RowKind::Edge));
    for (s, t) in graph.disjoint_support_pairs()? {
        // Pairs come with s < t; with two singletons the larger mask is T.
        let (s, t) = match (s.len(), t.len()) {
            (_, 1) => (s, t),
            (1, _) => (t, s),
            _ => return Err(Error::NonLinearProgramme { s: s.0, t: t.0 }),
        };
        rows.push(RowKind::Pair { s, t });
    }
    let one = int(1);
    let zero = int(0);
    let indicator = |b: bool| if b { one.clone() } else { zero.clone() };
    let matrix = rows
        .iter()
        .map(|row| {
            (0..cols)
                .map(|h| {
                    let h = EdgeSubset(h as u32);
                    match *row {
                        RowKind::Mass => one.clone(),
                        RowKind::Edge(e) => indicator(h.0 >> e & 1 == 1),
                        RowKind::Pair { s, t } => {
                            let both = indicator(h.contains(EdgeSubset(s.0 | t.0)));
                            if h.contains(s) {
                                both - p
                            } else {
                                both
                            }
                        }
                    }
                })
                .collect()
        })
        .collect();
    let rhs = rows
        .iter()
        .map(|row| match row {
            RowKind::Mass => one.clone(),
            RowKind::Edge(_) => p.clone(),
            RowKind::Pair { .. } => zero.clone(),
        })
        .collect();
    let objective = graph.connected_masks()?.into_iter().map(indicator).collect();
    Ok(LinearProgram {
        graph: graph.clone(),
        p: p.clone(),
        direction,
        rows,
        matrix,
        rhs,
        objective,
    })
}

impl LinearProgram {
    /// Objective as handed to the minimising solver.
    pub(crate) fn solver_cost(&self) -> Vec<Rational> {
        match self.direction {
            Direction::Min => self.objective.clone(),
            Direction::Max => self.objective.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn residual(&self, w: &[Rational]) -> Vec<Rational> {
        self.matrix
            .iter()
            .zip(&self.rhs)
            .map(|(row, q)| dot(row, w) - q)
            .collect()
    }

    /// Checks `w` and `x` against every optimality condition.
    pub fn certify(&self, w: &[Rational], x: &[Rational]) -> Certificate {
        let cost = self.solver_cost();
        // Work in the minimising orientation: x' = ±x.
        let flip = self.direction == Direction::Max;
        let x_min: Vec<Rational> = x.iter().map(|v| if flip { -v.clone() } else { v.clone() }).collect();
        let reduced: Vec<Rational> = (0..cost.len())
            .map(|j| {
                let column_dot = self.matrix.iter().zip(&x_min).fold(int(0), |acc, (row, xi)| {
                    if row[j].is_zero() {
                        acc
                    } else {
                        acc + &row[j] * xi
                    }
                });
                &cost[j] - column_dot
            })
            .collect();
        Certificate {
            primal_feasible: self.residual(w).iter().all(Zero::is_zero) && w.iter().all(|v| !v.is_negative()),
            dual_feasible: reduced.iter().all(|r| !r.is_negative()),
            strong_duality: dot(&self.objective, w) == dot(&self.rhs, x),
            complementary_slackness: w.iter().zip(&reduced).all(|(wj, rj)| wj.is_zero() || rj.is_zero()),
        }
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(int(0), |acc, (x, y)| acc + x * y)
}

/// Dual multipliers from `B^T y = c_B` on the kept rows.
pub(crate) fn basis_dual(
    lp: &LinearProgram,
    basis: &[usize],
    kept_rows: &[usize],
    cost: &[Rational],
) -> Result<Vec<Rational>> {
    let bt: Vec<Vec<Rational>> = basis
        .iter()
        .map(|&j| kept_rows.iter().map(|&i| lp.matrix[i][j].clone()).collect())
        .collect();
    let cb: Vec<Rational> = basis.iter().map(|&j| cost[j].clone()).collect();
    let y = solve_square(bt, cb)?;
    let mut full = vec![int(0); lp.rows.len()];
    for (&i, v) in kept_rows.iter().zip(y) {
        full[i] = v;
    }
    Ok(full)
}

/// Exact optimum with primal, dual and a certificate.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution> {
    let cost = lp.solver_cost();
    let basic = simplex::simplex(&lp.matrix, &lp.rhs, &cost)?;
    let y_min = basis_dual(lp, &basic.basis, &basic.kept_rows, &cost)?;
    let dual: Vec<Rational> = match lp.direction {
        Direction::Min => y_min,
        Direction::Max => y_min.into_iter().map(|v| -v).collect(),
    };
    let optimum = dot(&lp.objective, &basic.x);
    let certificate = lp.certify(&basic.x, &dual);
    let zero_set = (0..basic.x.len()).filter(|&j| basic.x[j].is_zero()).collect();
    Ok(LpSolution {
        optimum,
        primal: basic.x,
        dual,
        basis: basic.basis,
        kept_rows: basic.kept_rows,
        zero_set,
        certificate,
    })
}

/// Least connectivity over measures in the programme.
pub fn f_lp(graph: &LabeledGraph, p: &Rational) -> Result<Rational> {
    Ok(solve(&build_lp(graph, p, Direction::Min)?)?.optimum)
}

/// Greatest connectivity over measures in the programme.
pub fn big_f_lp(graph: &LabeledGraph, p: &Rational) -> Result<Rational> {
    Ok(solve(&build_lp(graph, p, Direction::Max)?)?.optimum)
}

/// True iff `measure` is a valid 1-independent measure with every marginal
/// exactly `p` whose connectivity equals the programme optimum.
pub fn certify_extremal(
    graph: &LabeledGraph,
    p: &Rational,
    measure: &Measure<Rational>,
    direction: Direction,
) -> Result<bool> {
    if measure.graph().edges() != graph.edges() || measure.graph().n() != graph.n() {
        return Err(Error::InvalidGraph("measure lives on a different graph".into()));
    }
    measure.validate()?;
    if measure.marginals().iter().any(|x| x != p) {
        return Ok(false);
    }
    let independence = measure.check_one_independence()?;
    if !independence.passed || !independence.restriction_passed {
        return Ok(false);
    }
    let optimum = solve(&build_lp(graph, p, direction)?)?.optimum;
    Ok(measure.connectivity_probability()? == optimum)
}
