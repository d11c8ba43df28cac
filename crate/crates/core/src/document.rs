//! Serializable forms of spaces and graphs. Every number is an exact
//! rational string (`"p/q"`, an integer, or a finite decimal on input).

use crate::graph::{GraphError, WeightedGraph};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::space::{FiniteMetricSpace, MetricError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("matrix entry ({row},{col}) `{text}` is not an exact rational")]
    BadEntry { row: usize, col: usize, text: String },
    #[error("edge {index} weight `{text}` is not an exact rational")]
    BadWeight { index: usize, text: String },
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDocument {
    pub points: Vec<String>,
    pub matrix: Vec<Vec<String>>,
}

impl SpaceDocument {
    pub fn from_space(space: &FiniteMetricSpace) -> Self {
        Self {
            points: space.labels().to_vec(),
            matrix: space
                .matrix()
                .iter()
                .map(|row| row.iter().map(format_rational).collect())
                .collect(),
        }
    }

    pub fn to_space(&self) -> Result<FiniteMetricSpace, DocumentError> {
        let matrix = parse_matrix(&self.matrix)?;
        Ok(FiniteMetricSpace::new(self.points.clone(), matrix)?)
    }
}

pub fn parse_matrix(rows: &[Vec<String>]) -> Result<Vec<Vec<Rational>>, DocumentError> {
    rows.iter()
        .enumerate()
        .map(|(row, r)| {
            r.iter()
                .enumerate()
                .map(|(col, text)| {
                    parse_rational(text).map_err(|_| DocumentError::BadEntry {
                        row,
                        col,
                        text: text.clone(),
                    })
                })
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String, String)>,
}

impl GraphDocument {
    pub fn from_graph(graph: &WeightedGraph) -> Self {
        Self {
            vertices: graph.vertices().to_vec(),
            edges: graph
                .edges()
                .iter()
                .map(|e| {
                    (
                        graph.vertex(e.u).to_string(),
                        graph.vertex(e.v).to_string(),
                        format_rational(&e.weight),
                    )
                })
                .collect(),
        }
    }

    pub fn to_graph(&self) -> Result<WeightedGraph, DocumentError> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for (index, (u, v, w)) in self.edges.iter().enumerate() {
            let weight = parse_rational(w).map_err(|_| DocumentError::BadWeight { index, text: w.clone() })?;
            edges.push((u.clone(), v.clone(), weight));
        }
        Ok(WeightedGraph::new(self.vertices.clone(), edges)?)
    }
}
