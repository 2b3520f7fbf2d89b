//! The ladder construction on `P_N × P_2` for `p ∈ (1/2, 2/3)`.

use crate::error::{Error, Result};
use crate::graph::{cartesian_product, make_path};
use crate::scalar::{int, ratio, Rational, Scalar};
use crate::vertex::VertexBasedMeasure;

/// `p_n`, `r_n`, `s_n` for `n = 1..=len`; index 0 holds `n = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderSequences {
    pub p_input: Rational,
    pub p_seq: Vec<Rational>,
    pub r_seq: Vec<Rational>,
    pub s_seq: Vec<Rational>,
}

impl LadderSequences {
    /// 1-based accessors.
    pub fn p(&self, n: usize) -> &Rational {
        &self.p_seq[n - 1]
    }
    pub fn r(&self, n: usize) -> &Rational {
        &self.r_seq[n - 1]
    }
    pub fn s(&self, n: usize) -> &Rational {
        &self.s_seq[n - 1]
    }

    pub fn len(&self) -> usize {
        self.p_seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_seq.is_empty()
    }

    /// First index violating `p_n, r_n ∈ [0,1]`, `s_n ∈ [0, 1 − r_n]`, or
    /// monotonicity of `p`, `r` and `r + s`.
    pub fn first_invariant_violation(&self) -> Option<usize> {
        let zero = int(0);
        let one = int(1);
        for n in 1..=self.len() {
            let (p, r, s) = (self.p(n), self.r(n), self.s(n));
            let in_range = *p >= zero && *p <= one && *r >= zero && *r <= one && *s >= zero && *s <= &one - r;
            let monotone = n == 1 || {
                let (p0, r0, s0) = (self.p(n - 1), self.r(n - 1), self.s(n - 1));
                p <= p0 && r <= r0 && r + s <= r0 + s0
            };
            if !in_range || !monotone {
                return Some(n);
            }
        }
        None
    }
}

fn check_open_interval(p: &Rational) -> Result<()> {
    if *p <= ratio(1, 2) || *p >= ratio(2, 3) {
        return Err(Error::OutOfRange(format!(
            "ladder needs p in (1/2, 2/3), got {}",
            crate::scalar::format_rational(p)
        )));
    }
    Ok(())
}

/// Runs the three coupled recursions from `p_1 = r_1 = 1`, `s_1 = 0`.
pub fn ladder_sequences(p: &Rational, len: usize) -> Result<LadderSequences> {
    check_open_interval(p)?;
    let zero = int(0);
    let one = int(1);
    let q = &one - p;
    let mut seq = LadderSequences {
        p_input: p.clone(),
        p_seq: vec![one.clone()],
        r_seq: vec![one.clone()],
        s_seq: vec![zero.clone()],
    };
    for n in 1..len {
        let (pn, rn, sn) = (seq.p(n).clone(), seq.r(n).clone(), seq.s(n).clone());
        let p_next = if &rn + &sn >= q && &rn + &sn > zero {
            &one - &q / (&rn + &sn)
        } else {
            zero.clone()
        };
        let r_next = if pn >= q && pn > zero {
            &one - &q / &pn
        } else {
            zero.clone()
        };
        let s_next = if p_next > zero {
            let candidate = &one - int(2) * &r_next + (&r_next - &q) / &p_next;
            Scalar::max_value(candidate, zero.clone())
        } else {
            zero.clone()
        };
        seq.p_seq.push(p_next);
        seq.r_seq.push(r_next);
        seq.s_seq.push(s_next);
    }
    Ok(seq)
}

/// `N_ε = ⌈2/ε⌉` with `ε = 2/3 − p`.
pub fn ladder_length(p: &Rational) -> Result<usize> {
    check_open_interval(p)?;
    let eps = ratio(2, 3) - p;
    let n = (int(2) / eps).ceil();
    n.to_integer()
        .try_into()
        .map_err(|_| Error::OutOfRange("ladder length overflows".into()))
}

/// Vertex `(n, y)` (1-based) sits at index `2(n − 1) + (y − 1)`.
///
/// If `n + y` is even the state is 2 with probability `p_n`, else 0. If odd it
/// is 2, 1, 0 with probabilities `r_n`, `s_n`, `1 − r_n − s_n`. Horizontal
/// edges are open iff `S_left ≤ S_right`; rungs iff `S_1 = S_2` or either is 1.
pub fn ladder_vbm(p: &Rational) -> Result<VertexBasedMeasure<Rational>> {
    let n_len = ladder_length(p)?;
    let seq = ladder_sequences(p, n_len)?;
    let zero = int(0);
    if seq.p(n_len) != &zero || seq.r(n_len) != &zero || seq.s(n_len) != &zero {
        return Err(Error::OutOfRange("ladder sequences did not vanish at N".into()));
    }
    let graph = cartesian_product(&make_path(n_len)?, &make_path(2)?)?;
    let mut dists = Vec::with_capacity(2 * n_len);
    for n in 1..=n_len {
        for y in 1..=2 {
            let d = if (n + y) % 2 == 0 {
                vec![int(1) - seq.p(n), zero.clone(), seq.p(n).clone()]
            } else {
                vec![int(1) - seq.r(n) - seq.s(n), seq.s(n).clone(), seq.r(n).clone()]
            };
            dists.push(d);
        }
    }
    let edges = graph.edges().to_vec();
    VertexBasedMeasure::new(graph, dists, |e, a, b| {
        let (u, v) = edges[e];
        if v == u + 1 && u % 2 == 0 {
            a == b || a == 1 || b == 1
        } else {
            a <= b
        }
    })
}
