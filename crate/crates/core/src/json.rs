//! JSON documents. Every document carries `"format": "echelon/1"`; pair
//! data is written as lower-triangular rows (row `i` has `i` entries) and
//! rationals as `"p/q"` strings.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::colgraph::{ColouredGraph, GraphError};
use crate::metrize::{Metric, MetricError};
use crate::ramsey::{OrderedEchelonedSpace, RamseyError};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::space::{EchelonedSpace, PointId, Rank, SpaceError};

pub const FORMAT: &str = "echelon/1";

#[derive(Debug, Error)]
pub enum DocError {
    #[error("malformed JSON: {0}")]
    Malformed(String),
    #[error("expected format {FORMAT:?}, found {0:?}")]
    Format(String),
    #[error("row {row} has {got} entries, expected {expected}")]
    Shape { row: usize, expected: usize, got: usize },
    #[error("{0}")]
    Rational(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Ramsey(#[from] RamseyError),
}

impl DocError {
    pub fn code(&self) -> &'static str {
        match self {
            DocError::Malformed(_) => "E_JSON",
            DocError::Format(_) => "E_FORMAT",
            DocError::Shape { .. } => "E_PAIR_COUNT",
            DocError::Rational(_) => "E_RATIONAL",
            DocError::Space(e) => e.code(),
            DocError::Metric(e) => e.code(),
            DocError::Graph(e) => e.code(),
            DocError::Ramsey(e) => e.code(),
        }
    }

    /// Whether the input failed to parse, as opposed to failing validation.
    pub fn is_malformed(&self) -> bool {
        matches!(self, DocError::Malformed(_))
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, DocError> {
    serde_json::from_str(text).map_err(|e| DocError::Malformed(e.to_string()))
}

fn check_format(found: &str) -> Result<(), DocError> {
    if found == FORMAT {
        Ok(())
    } else {
        Err(DocError::Format(found.to_string()))
    }
}

fn lower_rows<T: Clone>(flat: &[T], points: usize) -> Vec<Vec<T>> {
    let mut rest = flat;
    (0..points)
        .map(|i| {
            let (row, tail) = rest.split_at(i);
            rest = tail;
            row.to_vec()
        })
        .collect()
}

fn flatten_lower<T>(rows: Vec<Vec<T>>, points: usize) -> Result<Vec<T>, DocError> {
    if rows.len() != points {
        return Err(DocError::Shape { row: rows.len(), expected: points, got: rows.len() });
    }
    let mut flat = Vec::new();
    for (i, row) in rows.into_iter().enumerate() {
        if row.len() != i {
            return Err(DocError::Shape { row: i, expected: i, got: row.len() });
        }
        flat.extend(row);
    }
    Ok(flat)
}

#[derive(Serialize, Deserialize)]
struct SpaceDoc {
    format: String,
    points: usize,
    ranks: Rank,
    eta: Vec<Vec<Rank>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    order: Option<Vec<PointId>>,
}

pub fn space_to_value(x: &EchelonedSpace) -> Value {
    json!({
        "format": FORMAT,
        "points": x.len(),
        "ranks": x.rank_count(),
        "eta": x.rows(),
    })
}

pub fn space_from_str(text: &str) -> Result<EchelonedSpace, DocError> {
    let doc: SpaceDoc = parse(text)?;
    space_from_doc(doc)
}

fn space_from_doc(doc: SpaceDoc) -> Result<EchelonedSpace, DocError> {
    check_format(&doc.format)?;
    let eta = flatten_lower(doc.eta, doc.points)?;
    Ok(EchelonedSpace::new(doc.points, doc.ranks, eta)?)
}

pub fn ordered_to_value(x: &OrderedEchelonedSpace) -> Value {
    let mut v = space_to_value(x.space());
    v["order"] = json!(x.order());
    v
}

/// A space document; without an `"order"` field points are ordered by id.
pub fn ordered_from_str(text: &str) -> Result<OrderedEchelonedSpace, DocError> {
    let mut doc: SpaceDoc = parse(text)?;
    let order = doc.order.take();
    let space = space_from_doc(doc)?;
    Ok(match order {
        Some(order) => OrderedEchelonedSpace::new(space, order)?,
        None => OrderedEchelonedSpace::natural(space),
    })
}

#[derive(Deserialize)]
struct MetricDoc {
    format: String,
    points: usize,
    d: Vec<Vec<Value>>,
}

pub fn metric_to_value(d: &Metric) -> Value {
    let rows: Vec<Vec<String>> = d.rows().iter().map(|row| row.iter().map(format_rational).collect()).collect();
    json!({ "format": FORMAT, "points": d.len(), "d": rows })
}

/// Accepts lower-triangular rows or a full square matrix. Entries are
/// `"p/q"` strings or JSON integers.
pub fn metric_from_str(text: &str) -> Result<Metric, DocError> {
    let doc: MetricDoc = parse(text)?;
    check_format(&doc.format)?;
    let rows = doc
        .d
        .iter()
        .map(|row| row.iter().map(rational_entry).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    if doc.points > 1 && rows.len() == doc.points && rows.iter().all(|r| r.len() == doc.points) {
        return Ok(Metric::from_matrix(&rows)?);
    }
    Ok(Metric::from_lower(doc.points, flatten_lower(rows, doc.points)?)?)
}

fn rational_entry(v: &Value) -> Result<Rational, DocError> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| DocError::Rational(e.0)),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap_or_default().into())),
        other => Err(DocError::Malformed(format!("expected a rational string, found {other}"))),
    }
}

#[derive(Deserialize)]
struct GraphDoc {
    format: String,
    v: usize,
    colours: Vec<String>,
    chi: Vec<Vec<usize>>,
}

pub fn graph_to_value(g: &ColouredGraph) -> Value {
    json!({
        "format": FORMAT,
        "v": g.vertex_count(),
        "colours": g.colours(),
        "chi": lower_rows(g.edge_colours(), g.vertex_count()),
    })
}

/// `chi` entries are positions in `colours`, smallest colour first.
pub fn graph_from_str(text: &str) -> Result<ColouredGraph, DocError> {
    let doc: GraphDoc = parse(text)?;
    check_format(&doc.format)?;
    let chi = flatten_lower(doc.chi, doc.v)?;
    Ok(ColouredGraph::new(doc.v, doc.colours, chi)?)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MapDoc {
    Bare(Vec<PointId>),
    Tagged { format: String, map: Vec<PointId> },
}

pub fn map_to_value(map: &[PointId]) -> Value {
    json!({ "format": FORMAT, "map": map })
}

/// A point map, either `{"format": …, "map": [...]}` or a bare array.
pub fn map_from_str(text: &str) -> Result<Vec<PointId>, DocError> {
    match parse(text)? {
        MapDoc::Bare(map) => Ok(map),
        MapDoc::Tagged { format, map } => {
            check_format(&format)?;
            Ok(map)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn space_roundtrip() {
        let x = EchelonedSpace::from_weights(3, &[1, 2, 2]).unwrap();
        let text = space_to_value(&x).to_string();
        assert_eq!(text, r#"{"eta":[[],[1],[2,2]],"format":"echelon/1","points":3,"ranks":2}"#);
        assert_eq!(space_from_str(&text).unwrap(), x);
    }

    #[test]
    fn space_errors() {
        assert!(space_from_str("{").unwrap_err().is_malformed());
        assert!(space_from_str(r#"{"format":"echelon/1","points":"x"}"#).unwrap_err().is_malformed());
        let bad_format = r#"{"format":"echelon/2","points":1,"ranks":0,"eta":[[]]}"#;
        assert_eq!(space_from_str(bad_format).unwrap_err().code(), "E_FORMAT");
        let short = r#"{"format":"echelon/1","points":2,"ranks":1,"eta":[[]]}"#;
        assert_eq!(space_from_str(short).unwrap_err().code(), "E_PAIR_COUNT");
        let zero = r#"{"format":"echelon/1","points":2,"ranks":1,"eta":[[],[0]]}"#;
        assert_eq!(space_from_str(zero).unwrap_err().code(), "E_ZERO_OFF_DIAGONAL");
        let gap = r#"{"format":"echelon/1","points":2,"ranks":2,"eta":[[],[2]]}"#;
        assert_eq!(space_from_str(gap).unwrap_err().code(), "E_RANK_GAP");
    }

    #[test]
    fn ordered_documents() {
        let x = OrderedEchelonedSpace::new(EchelonedSpace::uniform(3), vec![2, 0, 1]).unwrap();
        let text = ordered_to_value(&x).to_string();
        assert_eq!(ordered_from_str(&text).unwrap(), x);
        let plain = space_to_value(&EchelonedSpace::uniform(2)).to_string();
        assert_eq!(ordered_from_str(&plain).unwrap().order(), &[0, 1]);
        let bad = r#"{"format":"echelon/1","points":2,"ranks":1,"eta":[[],[1]],"order":[1,1]}"#;
        assert_eq!(ordered_from_str(bad).unwrap_err().code(), "E_ORDER");
    }

    #[test]
    fn metric_roundtrip_and_square_input() {
        let d = Metric::from_lower(3, vec![ratio(4, 3), ratio(5, 3), ratio(5, 3)]).unwrap();
        let text = metric_to_value(&d).to_string();
        assert_eq!(text, r#"{"d":[[],["4/3"],["5/3","5/3"]],"format":"echelon/1","points":3}"#);
        assert_eq!(metric_from_str(&text).unwrap(), d);
        let square = r#"{"format":"echelon/1","points":2,"d":[[0,"3/2"],["3/2",0]]}"#;
        assert_eq!(metric_from_str(square).unwrap().dist(0, 1), &ratio(3, 2));
        let asym = r#"{"format":"echelon/1","points":2,"d":[[0,1],[2,0]]}"#;
        assert_eq!(metric_from_str(asym).unwrap_err().code(), "E_METRIC_SYMMETRY");
        let tri = r#"{"format":"echelon/1","points":3,"d":[[],[1],[1,3]]}"#;
        assert_eq!(metric_from_str(tri).unwrap_err().code(), "E_METRIC_TRIANGLE");
        let junk = r#"{"format":"echelon/1","points":2,"d":[[],["x/0"]]}"#;
        assert_eq!(metric_from_str(junk).unwrap_err().code(), "E_RATIONAL");
    }

    #[test]
    fn graph_roundtrip() {
        let g = ColouredGraph::new(3, vec!["a".into(), "b".into()], vec![0, 1, 1]).unwrap();
        let text = graph_to_value(&g).to_string();
        assert_eq!(graph_from_str(&text).unwrap(), g);
        let dup = r#"{"format":"echelon/1","v":2,"colours":["a","a"],"chi":[[],[0]]}"#;
        assert_eq!(graph_from_str(dup).unwrap_err().code(), "E_COLOUR_ORDER");
    }

    #[test]
    fn maps() {
        assert_eq!(map_from_str("[2, 0, 1]").unwrap(), vec![2, 0, 1]);
        let tagged = map_to_value(&[1, 0]).to_string();
        assert_eq!(map_from_str(&tagged).unwrap(), vec![1, 0]);
        assert!(map_from_str("[-1]").unwrap_err().is_malformed());
    }
}
