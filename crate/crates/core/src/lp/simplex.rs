//! Dense-tableau two-phase simplex over exact rationals, plus a square
//! linear solver for basis systems.
//!
//! Pivoting follows Bland's rule (lowest eligible index enters, ties in the
//! ratio test go to the lowest basic index), so every run is reproducible and
//! terminates.

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{int, Rational};

/// Optimal basic solution of `min cᵀx` subject to `Ax = b`, `x ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct BasicSolution {
    pub x: Vec<Rational>,
    /// `basis[i]` is the column basic in the `i`-th kept row.
    pub basis: Vec<usize>,
    /// Original row indices that survive redundancy removal, in order.
    pub kept_rows: Vec<usize>,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    cost: Vec<Rational>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = int(1) / self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = self.rows[r].clone();
        let nonzero: Vec<usize> = (0..=self.width).filter(|&j| !pivot_row[j].is_zero()).collect();
        let eliminate = |row: &mut Vec<Rational>| {
            let factor = row[c].clone();
            if factor.is_zero() {
                return;
            }
            for &j in &nonzero {
                row[j] -= &factor * &pivot_row[j];
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.cost);
        self.basis[r] = c;
    }

    /// Bland iterations over columns `< allowed`. Errors on an unbounded ray.
    fn optimise(&mut self, allowed: usize) -> Result<()> {
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.cost[j].is_negative()) else {
                return Ok(());
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((k, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*k]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let (r, _) = leave.ok_or(Error::Unbounded)?;
            self.pivot(r, enter);
        }
    }
}

/// Two-phase simplex. Rows that are linear combinations of others are
/// detected after phase one and dropped.
pub(crate) fn simplex(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> Result<BasicSolution> {
    let m = a.len();
    let n = c.len();
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row: Vec<Rational> = a[i].iter().map(|v| if flip { -v.clone() } else { v.clone() }).collect();
        row.extend((0..m).map(|k| if k == i { int(1) } else { int(0) }));
        row.push(if flip { -b[i].clone() } else { b[i].clone() });
        rows.push(row);
    }
    // Phase one minimises the sum of artificials; reduced costs are minus the
    // column sums over the structural part.
    let mut cost = vec![int(0); width + 1];
    for row in &rows {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[width] -= &row[width];
    }
    let mut t = Tableau {
        rows,
        cost,
        basis: (n..n + m).collect(),
        width,
    };
    t.optimise(width)?;
    if !t.cost[width].is_zero() {
        return Err(Error::Infeasible);
    }

    let mut kept: Vec<usize> = Vec::with_capacity(m);
    for i in 0..m {
        if t.basis[i] < n {
            kept.push(i);
            continue;
        }
        // A row whose structural part vanishes is redundant and dropped.
        if let Some(j) = (0..n).find(|&j| !t.rows[i][j].is_zero()) {
            t.pivot(i, j);
            kept.push(i);
        }
    }
    // Tableau row i still corresponds to original row i, since pivots only
    // combine rows; dropping rows whose structural part is zero is safe.
    t.rows = kept.iter().map(|&i| t.rows[i].clone()).collect();
    t.basis = kept.iter().map(|&i| t.basis[i]).collect();

    let mut cost = vec![int(0); width + 1];
    cost[..n].clone_from_slice(c);
    for (i, &bv) in t.basis.iter().enumerate() {
        let cb = c[bv].clone();
        if cb.is_zero() {
            continue;
        }
        for j in 0..=width {
            if !t.rows[i][j].is_zero() {
                cost[j] -= &cb * &t.rows[i][j];
            }
        }
    }
    t.cost = cost;
    t.optimise(n)?;

    let mut x = vec![int(0); n];
    for (i, &bv) in t.basis.iter().enumerate() {
        x[bv] = t.rhs(i).clone();
    }
    Ok(BasicSolution {
        x,
        basis: t.basis,
        kept_rows: kept,
    })
}

/// Solves the square system `Mz = r` by Gaussian elimination.
pub fn solve_square(m: Vec<Vec<Rational>>, r: Vec<Rational>) -> Result<Vec<Rational>> {
    let n = m.len();
    if r.len() != n || m.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidSize(format!("system is not {n} by {n}")));
    }
    solve_full_rank(m, r)?.ok_or_else(|| Error::SingularSystem("square system is inconsistent".into()))
}

/// Unique solution of a possibly overdetermined system `Mz = r`: `None` when
/// inconsistent, `SingularSystem` when the columns are dependent.
pub fn solve_full_rank(mut m: Vec<Vec<Rational>>, mut r: Vec<Rational>) -> Result<Option<Vec<Rational>>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    for col in 0..cols {
        let pivot = (col..rows)
            .find(|&i| !m[i][col].is_zero())
            .ok_or_else(|| Error::SingularSystem(format!("column {col} is dependent on earlier columns")))?;
        m.swap(col, pivot);
        r.swap(col, pivot);
        let inv = int(1) / m[col][col].clone();
        for v in m[col].iter_mut() {
            *v *= &inv;
        }
        r[col] *= &inv;
        let (pivot_row, pivot_rhs) = (m[col].clone(), r[col].clone());
        for i in 0..rows {
            if i == col || m[i][col].is_zero() {
                continue;
            }
            let factor = m[i][col].clone();
            for j in col..cols {
                if !pivot_row[j].is_zero() {
                    m[i][j] -= &factor * &pivot_row[j];
                }
            }
            r[i] -= &factor * &pivot_rhs;
        }
    }
    if r[cols..].iter().any(|v| !v.is_zero()) {
        return Ok(None);
    }
    r.truncate(cols);
    Ok(Some(r))
}

/// Some `y` with `(Mᵀy)_j = c_j` for `j` in `equal` and `≤ c_j` elsewhere, or
/// `None` if no such `y` exists.
pub(crate) fn dual_point(m: &[Vec<Rational>], c: &[Rational], equal: &[bool]) -> Result<Option<Vec<Rational>>> {
    let rows = m.len();
    let slack: Vec<usize> = (0..c.len()).filter(|&j| !equal[j]).collect();
    let width = 2 * rows + slack.len();
    // Variables: y⁺ (rows), y⁻ (rows), then one slack per inequality.
    let a: Vec<Vec<Rational>> = (0..c.len())
        .map(|j| {
            let mut row = vec![int(0); width];
            for i in 0..rows {
                row[i] = m[i][j].clone();
                row[rows + i] = -m[i][j].clone();
            }
            if let Ok(k) = slack.binary_search(&j) {
                row[2 * rows + k] = int(1);
            }
            row
        })
        .collect();
    match simplex(&a, c, &vec![int(0); width]) {
        Ok(sol) => Ok(Some((0..rows).map(|i| &sol.x[i] - &sol.x[rows + i]).collect())),
        Err(Error::Infeasible) => Ok(None),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn rows(v: &[&[i64]]) -> Vec<Vec<Rational>> {
        v.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn small_programme() {
        // min -x - y  s.t. x + s1 = 2, y + s2 = 3, x + y + s3 = 4
        let a = rows(&[&[1, 0, 1, 0, 0], &[0, 1, 0, 1, 0], &[1, 1, 0, 0, 1]]);
        let b = vec![int(2), int(3), int(4)];
        let c = vec![int(-1), int(-1), int(0), int(0), int(0)];
        let sol = simplex(&a, &b, &c).unwrap();
        assert_eq!(&sol.x[0] + &sol.x[1], int(4));
        assert_eq!(sol.kept_rows, vec![0, 1, 2]);
    }

    #[test]
    fn redundant_row_is_dropped() {
        let a = rows(&[&[1, 1], &[2, 2]]);
        let b = vec![int(1), int(2)];
        let sol = simplex(&a, &b, &[int(1), int(0)]).unwrap();
        assert_eq!(sol.x, vec![int(0), int(1)]);
        assert_eq!(sol.kept_rows.len(), 1);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = rows(&[&[1, 1]]);
        assert!(matches!(
            simplex(&a, &[int(-1)], &[int(0), int(0)]),
            Err(Error::Infeasible)
        ));
        let a = rows(&[&[1, -1]]);
        assert!(matches!(
            simplex(&a, &[int(0)], &[int(0), int(-1)]),
            Err(Error::Unbounded)
        ));
    }

    #[test]
    fn square_solver() {
        let m = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        assert_eq!(
            solve_square(m, vec![int(3), int(5)]).unwrap(),
            vec![ratio(4, 5), ratio(7, 5)]
        );
        let singular = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert!(solve_square(singular, vec![int(1), int(2)]).is_err());
    }

    #[test]
    fn overdetermined_solver() {
        let m = rows(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(
            solve_full_rank(m.clone(), vec![int(1), int(2), int(3)]).unwrap(),
            Some(vec![int(1), int(2)])
        );
        assert_eq!(solve_full_rank(m, vec![int(1), int(2), int(4)]).unwrap(), None);
        let dependent = rows(&[&[1, 2], &[2, 4], &[0, 0]]);
        assert!(solve_full_rank(dependent, vec![int(1), int(2), int(0)]).is_err());
    }

    #[test]
    fn dual_point_respects_equalities() {
        // y·(1, 1) = 1 on column 0, y·(1, 2) <= 1 on column 1.
        let m = rows(&[&[1, 1], &[1, 2]]);
        let y = dual_point(&m, &[int(1), int(1)], &[true, false]).unwrap().unwrap();
        assert_eq!(&y[0] + &y[1], int(1));
        assert!(&y[0] + int(2) * &y[1] <= int(1));
        assert!(dual_point(&m, &[int(1), int(-1)], &[true, true]).unwrap().is_some());
        let m = rows(&[&[1, 1]]);
        assert!(dual_point(&m, &[int(1), int(2)], &[true, true]).unwrap().is_none());
    }
}
