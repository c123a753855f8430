//! JSON document shapes for conditions, amalgamation traces, spaces, limit
//! structures and fuzz reports. Cell tables are keyed by `"alpha,i"` strings
//! so golden files stay human-diffable.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::amalgamation::{AmalgamationRequest, AmalgamationTrace, PairTable};
use crate::condition::{Condition, Level};
use crate::set::{PointSet, MAX_POINTS};
use crate::sim::LimitStructure;
use crate::topology::Decomposition;

#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("field {field}: {message}")]
pub struct DocError {
    pub field: String,
    pub message: String,
}

fn err(field: impl Into<String>, message: impl Into<String>) -> DocError {
    DocError {
        field: field.into(),
        message: message.into(),
    }
}

fn cell_key(alpha: u32, level: Level) -> String {
    format!("{alpha},{level}")
}

fn parse_cell_key(field: &str, key: &str) -> Result<(u32, Level), DocError> {
    let (a, i) = key
        .split_once(',')
        .ok_or_else(|| err(field, format!("key {key:?} is not of the form \"alpha,i\"")))?;
    let alpha = a
        .trim()
        .parse::<u32>()
        .map_err(|_| err(field, format!("key {key:?}: bad point {a:?}")))?;
    let level = i
        .trim()
        .parse::<Level>()
        .map_err(|_| err(field, format!("key {key:?}: bad level {i:?}")))?;
    Ok((alpha, level))
}

fn parse_points(field: &str, values: &[u32]) -> Result<PointSet, DocError> {
    PointSet::try_from_iter(values.iter().copied())
        .map_err(|p| err(field, format!("point {p} exceeds the capacity {MAX_POINTS}")))
}

/// `{"A": [...], "n": 2, "U": {"0,0": [...], ...}}`
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ConditionDoc {
    #[serde(rename = "A")]
    pub a: Vec<u32>,
    pub n: usize,
    #[serde(rename = "U")]
    pub u: BTreeMap<String, Vec<u32>>,
}

impl From<&Condition> for ConditionDoc {
    fn from(c: &Condition) -> Self {
        ConditionDoc {
            a: c.support().to_vec(),
            n: c.depth(),
            u: c
                .rows()
                .map(|((alpha, i), v)| (cell_key(alpha, i), v.to_vec()))
                .collect(),
        }
    }
}

impl ConditionDoc {
    pub fn to_condition(&self) -> Result<Condition, DocError> {
        let support = parse_points("A", &self.a)?;
        let mut cells = BTreeMap::new();
        for (key, values) in &self.u {
            let (alpha, level) = parse_cell_key("U", key)?;
            cells.insert((alpha, level), parse_points("U", values)?);
        }
        Condition::new(support, self.n, cells).map_err(|m| err("U", m.to_string()))
    }
}

/// `{"points": [...], "generators": [[...], ...]}`
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SpaceDoc {
    pub points: Vec<u32>,
    pub generators: Vec<Vec<u32>>,
}

impl SpaceDoc {
    pub fn to_parts(&self) -> Result<(PointSet, Vec<PointSet>), DocError> {
        let points = parse_points("points", &self.points)?;
        let generators = self
            .generators
            .iter()
            .map(|g| parse_points("generators", g))
            .collect::<Result<_, _>>()?;
        Ok((points, generators))
    }
}

/// An amalgamation input: the two conditions plus `xi0`, `k`, `m`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RequestDoc {
    pub p0: ConditionDoc,
    pub p1: ConditionDoc,
    pub xi0: u32,
    pub k: Level,
    pub m: Level,
}

impl From<&AmalgamationRequest> for RequestDoc {
    fn from(req: &AmalgamationRequest) -> Self {
        RequestDoc {
            p0: ConditionDoc::from(req.p0()),
            p1: ConditionDoc::from(req.p1()),
            xi0: req.xi0(),
            k: req.k(),
            m: req.m(),
        }
    }
}

fn pair_table_doc(table: &PairTable) -> BTreeMap<String, Vec<(u32, Level)>> {
    table
        .iter()
        .map(|(&(beta, j), pairs)| (cell_key(beta, j), pairs.iter().copied().collect()))
        .collect()
}

fn pair_table_from_doc(
    field: &str,
    doc: &BTreeMap<String, Vec<(u32, Level)>>,
) -> Result<PairTable, DocError> {
    let mut out = PairTable::new();
    for (key, pairs) in doc {
        let cell = parse_cell_key(field, key)?;
        out.insert(cell, pairs.iter().copied().collect::<BTreeSet<_>>());
    }
    Ok(out)
}

/// Every field of an amalgamation trace.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TraceDoc {
    #[serde(rename = "Astar")]
    pub a_star: Vec<u32>,
    #[serde(rename = "B")]
    pub block: Vec<u32>,
    pub rho: BTreeMap<String, u32>,
    #[serde(rename = "V")]
    pub v: [BTreeMap<String, Vec<(u32, Level)>>; 2],
    #[serde(rename = "W")]
    pub w: [BTreeMap<String, Vec<(u32, Level)>>; 2],
    #[serde(rename = "Uprime")]
    pub uprime: BTreeMap<String, Vec<u32>>,
    #[serde(rename = "Ufinal")]
    pub ufinal: BTreeMap<String, Vec<u32>>,
    pub p: ConditionDoc,
}

impl From<&AmalgamationTrace> for TraceDoc {
    fn from(trace: &AmalgamationTrace) -> Self {
        TraceDoc {
            a_star: trace.a_star.to_vec(),
            block: trace.block.to_vec(),
            rho: trace
                .rho
                .iter()
                .map(|(&(alpha, i), &b)| (cell_key(alpha, i), b))
                .collect(),
            v: [pair_table_doc(&trace.v[0]), pair_table_doc(&trace.v[1])],
            w: [pair_table_doc(&trace.w[0]), pair_table_doc(&trace.w[1])],
            uprime: trace
                .p_prime
                .rows()
                .map(|((alpha, i), v)| (cell_key(alpha, i), v.to_vec()))
                .collect(),
            ufinal: trace
                .p
                .rows()
                .map(|((alpha, i), v)| (cell_key(alpha, i), v.to_vec()))
                .collect(),
            p: ConditionDoc::from(&trace.p),
        }
    }
}

impl TraceDoc {
    pub fn to_trace(&self) -> Result<AmalgamationTrace, DocError> {
        let a_star = parse_points("Astar", &self.a_star)?;
        let block = parse_points("B", &self.block)?;
        let mut rho = BTreeMap::new();
        for (key, &b) in &self.rho {
            rho.insert(parse_cell_key("rho", key)?, b);
        }
        let p = self.p.to_condition()?;
        let mut uprime_cells = BTreeMap::new();
        for (key, values) in &self.uprime {
            uprime_cells.insert(parse_cell_key("Uprime", key)?, parse_points("Uprime", values)?);
        }
        let p_prime = Condition::new(a_star.union(&block), p.depth(), uprime_cells)
            .map_err(|m| err("Uprime", m.to_string()))?;
        Ok(AmalgamationTrace {
            a_star,
            block,
            rho,
            v: [
                pair_table_from_doc("V", &self.v[0])?,
                pair_table_from_doc("V", &self.v[1])?,
            ],
            w: [
                pair_table_from_doc("W", &self.w[0])?,
                pair_table_from_doc("W", &self.w[1])?,
            ],
            p_prime,
            p,
        })
    }
}

/// Limit structure with its witnessing chain.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LimitDoc {
    pub points: Vec<u32>,
    pub depth: usize,
    #[serde(rename = "U")]
    pub u: BTreeMap<String, Vec<u32>>,
    pub chain: Vec<ConditionDoc>,
}

impl From<&LimitStructure> for LimitDoc {
    fn from(limit: &LimitStructure) -> Self {
        LimitDoc {
            points: limit.points.to_vec(),
            depth: limit.depth,
            u: limit
                .cells
                .iter()
                .map(|(&(alpha, i), v)| (cell_key(alpha, i), v.to_vec()))
                .collect(),
            chain: limit.chain.iter().map(ConditionDoc::from).collect(),
        }
    }
}

/// Owner families keyed by the owning point.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DecompositionDoc {
    pub base: Vec<Vec<u32>>,
    pub owners: BTreeMap<String, Vec<Vec<u32>>>,
}

impl From<&Decomposition> for DecompositionDoc {
    fn from(dec: &Decomposition) -> Self {
        DecompositionDoc {
            base: dec.base.iter().map(|s| s.to_vec()).collect(),
            owners: dec
                .owners
                .iter()
                .map(|(x, f)| (x.to_string(), f.iter().map(|s| s.to_vec()).collect()))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    #[test]
    fn condition_round_trip() {
        for c in [fix_t(), fix_q(), fix_root_p0(), fix_amalg()] {
            let doc = ConditionDoc::from(&c);
            let back = doc.to_condition().unwrap();
            assert_eq!(back, c);
            let json = serde_json::to_string(&doc).unwrap();
            let doc2: ConditionDoc = serde_json::from_str(&json).unwrap();
            assert_eq!(doc2, doc);
        }
    }

    #[test]
    fn bad_key_names_the_field() {
        let json = r#"{"A": [0], "n": 1, "U": {"zero": [0]}}"#;
        let doc: ConditionDoc = serde_json::from_str(json).unwrap();
        let e = doc.to_condition().unwrap_err();
        assert_eq!(e.field, "U");
    }

    #[test]
    fn out_of_range_point_rejected() {
        let json = r#"{"A": [400], "n": 0, "U": {}}"#;
        let doc: ConditionDoc = serde_json::from_str(json).unwrap();
        let e = doc.to_condition().unwrap_err();
        assert_eq!(e.field, "A");
    }

    #[test]
    fn trace_round_trip() {
        let req = crate::amalgamation::AmalgamationRequest::new(
            fix_pair_p0(),
            fix_pair_p1(),
            0,
            0,
            1,
        )
        .unwrap();
        let trace = crate::amalgamation::amalgamate(&req).unwrap();
        let doc = TraceDoc::from(&trace);
        assert_eq!(doc.to_trace().unwrap(), trace);
    }
}
