//! Explicit extremal measures and vertex-based models.
//!
//! Exact (`Rational`) calls must sit strictly inside a validity interval or
//! produce non-negative weights; `f64` calls may sit on a trigonometric
//! threshold, where tiny negative weights are clamped.

pub mod complete;
pub mod cycles;
pub mod ladder;
pub mod maxima;
pub mod path;
pub mod tiling;

pub use complete::{complete_g, complete_identity_holds, complete_measure, red_blue_vbm};
pub use cycles::{c4_max, c4_min, c4_min_asymmetric, c5_max, c5_min};
pub use ladder::{ladder_length, ladder_sequences, ladder_vbm, LadderSequences};
pub use maxima::{kn_k_indep, kn_max, pn_max};
pub use path::{path_g, path_measure, path_vbm};
pub use tiling::{line_tiling_vbm, tile_blocks, LineTiling};

use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::scalar::{Rational, Scalar};
use crate::vertex::VertexBasedMeasure;

/// Width of the band around an irrational threshold inside which float
/// comparisons cannot decide a side.
pub const GUARD_BAND: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Path,
    Complete,
}

/// `p_n` for `n = 2..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdTable {
    pub family: Family,
    pub entries: Vec<(usize, f64)>,
}

/// `(3 − tan²(π/(n+1))) / 4`, the least `p` with `g_n ≥ 0` on `[p, 1]`.
pub fn path_threshold(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidSize(format!("path threshold needs n >= 2, got {n}")));
    }
    let t = (std::f64::consts::PI / (n as f64 + 1.0)).tan();
    Ok((3.0 - t * t) / 4.0)
}

/// `(1 − tan²(π/(2n))) / 2`.
pub fn complete_threshold(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidSize(format!("complete threshold needs n >= 2, got {n}")));
    }
    let t = (std::f64::consts::PI / (2.0 * n as f64)).tan();
    Ok((1.0 - t * t) / 2.0)
}

pub fn threshold_table(family: Family, n_max: usize) -> Result<ThresholdTable> {
    let entries = (2..=n_max)
        .map(|n| {
            let t = match family {
                Family::Path => path_threshold(n)?,
                Family::Complete => complete_threshold(n)?,
            };
            Ok((n, t))
        })
        .collect::<Result<_>>()?;
    Ok(ThresholdTable { family, entries })
}

pub(crate) fn check_probability<T: Scalar>(p: &T) -> Result<()> {
    if *p < T::zero() || *p > T::one() {
        return Err(Error::OutOfRange(format!("p = {} is not a probability", p.to_f64())));
    }
    Ok(())
}

/// Where `p` sits relative to an irrational threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    Above,
    InBand,
}

pub(crate) fn check_threshold<T: Scalar>(p: &T, threshold: f64) -> Result<Side> {
    check_probability(p)?;
    let x = p.to_f64();
    if x < threshold - GUARD_BAND {
        return Err(Error::BelowValidityThreshold { p: x, threshold });
    }
    Ok(if x <= threshold + GUARD_BAND {
        Side::InBand
    } else {
        Side::Above
    })
}

/// Exact weights must be non-negative; inside the band this is the only
/// certificate available.
pub(crate) fn require_nonnegative<T: Scalar>(weights: &[T], p: &T, threshold: f64) -> Result<()> {
    if T::EXACT && weights.iter().any(|w| *w < T::zero()) {
        return Err(Error::BelowValidityThreshold {
            p: p.to_f64(),
            threshold,
        });
    }
    Ok(())
}

pub(crate) fn piece_check<T: Scalar>(p: &T, lo: &T, hi: &T) -> Result<()> {
    check_probability(p)?;
    if p < lo || p > hi {
        return Err(Error::OutOfPiece {
            p: p.to_f64(),
            lo: lo.to_f64(),
            hi: hi.to_f64(),
        });
    }
    Ok(())
}

/// Output of [`named_construction`].
#[derive(Debug, Clone, PartialEq)]
pub enum Construction {
    Measure(Measure<Rational>),
    Vertex(VertexBasedMeasure<Rational>),
}

/// Generator names accepted by [`named_construction`]; `:n` takes a size.
pub const CONSTRUCTION_NAMES: [&str; 14] = [
    "path:n",
    "path_vbm:n",
    "complete:n",
    "red_blue:n",
    "c4_min",
    "c4_min_asymmetric",
    "c5_min",
    "c4_max",
    "c5_max",
    "pn_max:n",
    "kn_max:n",
    "kn_2indep:n",
    "ladder",
    "line_tiling:n",
];

/// Whether the named generator targets the greatest connectivity.
pub fn is_maximiser(name: &str) -> bool {
    let family = name.split(':').next().unwrap_or(name);
    matches!(family, "c4_max" | "c5_max" | "pn_max" | "kn_max")
}

/// The `k` for which the named generator is `k`-independent (1 unless stated).
pub fn independence_order(name: &str) -> usize {
    if name.starts_with("kn_2indep") {
        2
    } else {
        1
    }
}

/// Looks up a generator by `family` or `family:n` and evaluates it at `p`.
/// For `line_tiling:n`, `n` is the window length.
pub fn named_construction(name: &str, p: &Rational) -> Result<Construction> {
    let (family, size) = match name.split_once(':') {
        Some((f, n)) => {
            let n: usize = n
                .parse()
                .map_err(|_| Error::Parse(format!("bad size in construction {name:?}")))?;
            (f, Some(n))
        }
        None => (name, None),
    };
    let need = || size.ok_or_else(|| Error::Parse(format!("construction {family:?} needs a size, as {family}:n")));
    use Construction::{Measure as M, Vertex as V};
    let built = match family {
        "path" => M(path_measure(need()?, p)?),
        "path_vbm" => V(path_vbm(need()?, p)?),
        "complete" => M(complete_measure(need()?, p)?),
        "red_blue" => V(red_blue_vbm(need()?, p)?),
        "c4_min" => M(c4_min(p)?),
        "c4_min_asymmetric" => M(c4_min_asymmetric(p)?),
        "c5_min" => M(c5_min(p)?),
        "c4_max" => M(c4_max(p)?),
        "c5_max" => M(c5_max(p)?),
        "pn_max" => M(pn_max(need()?, p)?),
        "kn_max" => M(kn_max(need()?, p)?),
        "kn_2indep" => M(kn_k_indep(need()?, p)?),
        "ladder" => V(ladder_vbm(p)?),
        "line_tiling" => V(line_tiling_vbm(p, need()?)?.tiled),
        _ => {
            return Err(Error::Parse(format!(
                "unknown construction {name:?}; expected one of {}",
                CONSTRUCTION_NAMES.join(", ")
            )))
        }
    };
    Ok(built)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds_match_known_values() {
        assert!((path_threshold(2).unwrap() - 0.0).abs() < 1e-15);
        assert!((path_threshold(3).unwrap() - 0.5).abs() < 1e-15);
        assert!((path_threshold(5).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        assert!((path_threshold(4).unwrap() - golden).abs() < 1e-15);
        assert!((complete_threshold(3).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((complete_threshold(4).unwrap() - (2f64.sqrt() - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn named_constructions() {
        use crate::scalar::ratio;
        let p = ratio(7, 10);
        for name in ["path:4", "complete:4", "c4_min", "c5_min", "kn_2indep:4"] {
            assert!(
                matches!(named_construction(name, &p).unwrap(), Construction::Measure(_)),
                "{name}"
            );
        }
        assert!(matches!(
            named_construction("line_tiling:12", &p).unwrap(),
            Construction::Vertex(_)
        ));
        assert!(matches!(
            named_construction("ladder", &ratio(3, 5)).unwrap(),
            Construction::Vertex(_)
        ));
        assert!(named_construction("path", &p).is_err());
        assert!(named_construction("c6_min", &p).is_err());
        assert!(is_maximiser("kn_max:4") && !is_maximiser("c4_min"));
        assert_eq!(independence_order("kn_2indep:5"), 2);
    }

    #[test]
    fn thresholds_increase() {
        for family in [Family::Path, Family::Complete] {
            let table = threshold_table(family, 12).unwrap();
            assert!(table.entries.windows(2).all(|w| w[0].1 < w[1].1));
        }
    }
}
