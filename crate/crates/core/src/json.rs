//! JSON interchange for measures.
//!
//! A measure is `{"graph": <graph JSON>, "weights": [...]}` with one entry per
//! edge mask, in mask order. Exact weights are `["num", "den"]` string pairs;
//! float weights are decimal strings with 30 significant digits, which is
//! more than enough to round-trip any `f64`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GraphJson, LabeledGraph};
use crate::measure::Measure;
use crate::scalar::{parse_rational, Rational, Scalar};
use crate::vertex::VertexBasedMeasure;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightJson {
    Exact([String; 2]),
    Decimal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureJson {
    pub graph: GraphJson,
    pub weights: Vec<WeightJson>,
}

/// A vertex-based measure too large to expand: per-vertex laws and, per
/// edge, the open `[s_u, s_v]` state pairs (0-based states, `u < v`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexMeasureJson {
    pub graph: GraphJson,
    pub states: Vec<Vec<WeightJson>>,
    pub open: Vec<Vec<[usize; 2]>>,
}

pub fn exact_weight(r: &Rational) -> WeightJson {
    WeightJson::Exact([r.numer().to_string(), r.denom().to_string()])
}

pub fn decimal_weight(x: f64) -> WeightJson {
    WeightJson::Decimal(format!("{x:.29e}"))
}

fn read_exact(w: &WeightJson) -> Result<Rational> {
    match w {
        WeightJson::Exact([n, d]) => parse_rational(&format!("{n}/{d}")),
        WeightJson::Decimal(s) => Err(Error::Parse(format!(
            "decimal weight {s:?} in an exact measure; use [\"num\", \"den\"]"
        ))),
    }
}

fn read_float(w: &WeightJson) -> Result<f64> {
    match w {
        WeightJson::Exact(_) => Ok(read_exact(w)?.to_f64()),
        WeightJson::Decimal(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad decimal weight {s:?}"))),
    }
}

impl Measure<Rational> {
    pub fn to_json(&self) -> MeasureJson {
        MeasureJson {
            graph: self.graph().to_json(),
            weights: self.weights().iter().map(exact_weight).collect(),
        }
    }

    /// Rejects decimal weights: exact pipelines never ingest floats.
    pub fn from_json(json: &MeasureJson) -> Result<Self> {
        let graph = LabeledGraph::from_json(&json.graph)?;
        let weights = json.weights.iter().map(read_exact).collect::<Result<_>>()?;
        Measure::new(graph, weights)
    }
}

impl Measure<f64> {
    pub fn to_json(&self) -> MeasureJson {
        MeasureJson {
            graph: self.graph().to_json(),
            weights: self.weights().iter().map(|&x| decimal_weight(x)).collect(),
        }
    }

    pub fn from_json(json: &MeasureJson) -> Result<Self> {
        let graph = LabeledGraph::from_json(&json.graph)?;
        let weights = json.weights.iter().map(read_float).collect::<Result<_>>()?;
        Measure::new(graph, weights)
    }
}

impl<T: Scalar> VertexBasedMeasure<T> {
    /// `weight` renders one state probability.
    pub fn to_json_with(&self, weight: impl Fn(&T) -> WeightJson) -> VertexMeasureJson {
        let graph = self.graph();
        let open = graph
            .edges()
            .iter()
            .enumerate()
            .map(|(e, &(u, v))| {
                let (a, b) = (self.state_count(u), self.state_count(v));
                (0..a * b)
                    .map(|i| (i / b, i % b))
                    .filter(|&(su, sv)| self.is_open(e, su, sv))
                    .map(|(su, sv)| [su, sv])
                    .collect()
            })
            .collect();
        VertexMeasureJson {
            graph: graph.to_json(),
            states: self.dists().iter().map(|d| d.iter().map(&weight).collect()).collect(),
            open,
        }
    }
}

impl VertexBasedMeasure<Rational> {
    pub fn from_json(json: &VertexMeasureJson) -> Result<Self> {
        let graph = LabeledGraph::from_json(&json.graph)?;
        if json.open.len() != graph.m() {
            return Err(Error::InvalidSize(format!(
                "{} predicate lists for {} edges",
                json.open.len(),
                graph.m()
            )));
        }
        let dists: Vec<Vec<Rational>> = json
            .states
            .iter()
            .map(|d| d.iter().map(read_exact).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let open = json.open.clone();
        VertexBasedMeasure::new(graph, dists, |e, su, sv| open[e].contains(&[su, sv]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{c4_min, ladder_vbm, path_vbm};
    use crate::scalar::ratio;

    #[test]
    fn exact_round_trip() {
        let m = c4_min(&ratio(7, 10)).unwrap();
        let text = serde_json::to_string(&m.to_json()).unwrap();
        assert!(text.starts_with(r#"{"graph":{"n":4,"edges":[[1,2],"#));
        let back = Measure::<Rational>::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn float_round_trip_and_exact_rejects_decimals() {
        let m = c4_min(&0.7f64).unwrap();
        let json = m.to_json();
        match &json.weights[0] {
            WeightJson::Decimal(s) => assert!(s.chars().filter(char::is_ascii_digit).count() >= 30),
            other => panic!("{other:?}"),
        }
        assert_eq!(Measure::<f64>::from_json(&json).unwrap(), m);
        assert!(Measure::<Rational>::from_json(&json).is_err());
    }

    #[test]
    fn vertex_measure_round_trip() {
        for vbm in [ladder_vbm(&ratio(3, 5)).unwrap(), path_vbm(4, &ratio(7, 9)).unwrap()] {
            let json = vbm.to_json_with(exact_weight);
            assert_eq!(VertexBasedMeasure::from_json(&json).unwrap(), vbm);
        }
    }
}
