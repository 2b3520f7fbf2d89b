//! Two ladder blocks glued along a shared rung, checked exactly.

use crate::bounds::{exact_crossing_probability, max_component_size};
use crate::constructions::{ladder_length, ladder_vbm, tile_blocks};
use crate::error::Result;
use crate::graph::make_path;
use crate::scalar::{Rational, Scalar};
use crate::vertex::VertexBasedMeasure;

#[derive(Debug, Clone, PartialEq)]
pub struct LadderWindowReport {
    pub p: Rational,
    /// Block length `N`.
    pub block_length: usize,
    /// Columns in the tiled window, `2N − 1`.
    pub window_length: usize,
    /// Both end rungs of a block are open with probability 1.
    pub end_rungs_open: bool,
    /// The rung in the shared column of the tiled window is open with probability 1.
    pub shared_rung_open: bool,
    pub block_crossing: Rational,
    pub max_component: usize,
    /// `4N − 6`.
    pub component_bound: usize,
    /// Every edge of the tiled window has marginal at least `p`.
    pub marginals_hold: bool,
}

impl LadderWindowReport {
    pub fn holds(&self) -> bool {
        self.end_rungs_open
            && self.shared_rung_open
            && self.block_crossing.is_zero_value()
            && self.max_component <= self.component_bound
            && self.marginals_hold
    }
}

fn rung_marginal(vbm: &VertexBasedMeasure<Rational>, column: usize) -> Rational {
    // Product labelling over `P_2`: column `x` holds vertices `2x` and `2x + 1`.
    let e = vbm.graph().edge_index(2 * column, 2 * column + 1).expect("rung edge");
    vbm.edge_marginal(e)
}

/// Builds the ladder block for `p ∈ (1/2, 2/3)`, tiles two copies, and checks
/// the rung, crossing and component-size claims by exact computation.
pub fn ladder_window_check(p: &Rational) -> Result<LadderWindowReport> {
    let n = ladder_length(p)?;
    let block = ladder_vbm(p)?;
    let fiber = make_path(2)?;
    let tiled = tile_blocks(&block, &fiber, 2)?;
    let window_length = tiled.graph().n() / 2;
    let one = Rational::one();
    Ok(LadderWindowReport {
        p: p.clone(),
        block_length: n,
        window_length,
        end_rungs_open: rung_marginal(&block, 0) == one && rung_marginal(&block, n - 1) == one,
        shared_rung_open: rung_marginal(&tiled, n - 1) == one,
        block_crossing: exact_crossing_probability(&block, &fiber)?,
        max_component: max_component_size(&tiled, &fiber)?,
        component_bound: 4 * n - 6,
        marginals_hold: tiled.edge_marginals().iter().all(|m| m >= p),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn three_fifths() {
        let report = ladder_window_check(&ratio(3, 5)).unwrap();
        assert_eq!(report.block_length, 30);
        assert_eq!(report.window_length, 59);
        assert_eq!(report.component_bound, 114);
        assert!(report.holds(), "{report:?}");
    }

    #[test]
    fn out_of_range() {
        assert!(ladder_window_check(&ratio(7, 10)).is_err());
        assert!(ladder_window_check(&ratio(1, 2)).is_err());
    }
}
