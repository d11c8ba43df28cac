//! Weighted graphs, their shortest-path metric (the canonical projection),
//! polygon inequalities, and subdivision of a metric space.

use crate::rational::{is_positive, Rational};
use crate::space::{FiniteMetricSpace, MetricError};
use num::Zero;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("vertex `{0}` is listed twice")]
    DuplicateVertex(String),
    #[error("edge mentions unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex index {0} is out of range")]
    VertexOutOfRange(usize),
    #[error("edge ({0},{0}) is a loop")]
    SelfLoop(String),
    #[error("edge ({0},{1}) is listed twice")]
    MultiEdge(String, String),
    #[error("edge ({0},{1}) has a non-positive weight")]
    NonPositiveWeight(String, String),
    #[error("no walk joins `{0}` and `{1}`")]
    Disconnected(String, String),
    #[error("walk needs at least two vertices")]
    WalkTooShort,
    #[error("walk steps between non-adjacent vertices `{0}` and `{1}`")]
    NotAdjacent(String, String),
    #[error("order is not a permutation of the points")]
    InvalidOrder,
    #[error("inner weight for pair ({0},{1}) must lie strictly between 0 and the pair distance")]
    InvalidInnerWeights(String, String),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: Rational,
}

/// A simple undirected graph with positive rational edge weights.
/// Connectivity is checked when the graph is projected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<Option<Rational>>>,
}

impl WeightedGraph {
    pub fn new(vertices: Vec<String>, edges: Vec<(String, String, Rational)>) -> Result<Self, GraphError> {
        let index: HashMap<&str, usize> =
            vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
        };
        let mut indexed = Vec::with_capacity(edges.len());
        for (u, v, w) in &edges {
            indexed.push((lookup(u)?, lookup(v)?, w.clone()));
        }
        Self::from_indexed(vertices, indexed)
    }

    pub fn from_indexed(vertices: Vec<String>, edges: Vec<(usize, usize, Rational)>) -> Result<Self, GraphError> {
        let n = vertices.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut seen = HashMap::with_capacity(n);
        for v in &vertices {
            if seen.insert(v.as_str(), ()).is_some() {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let mut adjacency = vec![vec![None; n]; n];
        let mut out = Vec::with_capacity(edges.len());
        for (u, v, weight) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange(u));
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v));
            }
            if u == v {
                return Err(GraphError::SelfLoop(vertices[u].clone()));
            }
            if adjacency[u][v].is_some() {
                return Err(GraphError::MultiEdge(vertices[u].clone(), vertices[v].clone()));
            }
            if !is_positive(&weight) {
                return Err(GraphError::NonPositiveWeight(vertices[u].clone(), vertices[v].clone()));
            }
            adjacency[u][v] = Some(weight.clone());
            adjacency[v][u] = Some(weight.clone());
            out.push(Edge { u, v, weight });
        }
        Ok(Self { vertices, edges: out, adjacency })
    }

    /// The complete graph of a metric space, weights equal to distances.
    pub fn complete(space: &FiniteMetricSpace) -> Self {
        let n = space.len();
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j, space.distance(i, j).clone()));
            }
        }
        Self::from_indexed(space.labels().to_vec(), edges).expect("metric distances give a simple positive graph")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &str {
        &self.vertices[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<&Rational> {
        self.adjacency[u][v].as_ref()
    }

    /// Exact all-pairs shortest paths (Floyd-Warshall) with next-hop
    /// tables for walk reconstruction.
    pub fn shortest_paths(&self) -> ShortestPaths {
        let n = self.vertex_count();
        let mut dist: Vec<Vec<Option<Rational>>> = self.adjacency.clone();
        let mut next: Vec<Vec<Option<usize>>> = (0..n)
            .map(|u| (0..n).map(|v| self.adjacency[u][v].as_ref().map(|_| v)).collect())
            .collect();
        for v in 0..n {
            dist[v][v] = Some(Rational::zero());
            next[v][v] = Some(v);
        }
        for k in 0..n {
            for i in 0..n {
                let Some(ik) = dist[i][k].clone() else { continue };
                for j in 0..n {
                    let Some(kj) = &dist[k][j] else { continue };
                    let through = &ik + kj;
                    if dist[i][j].as_ref().map_or(true, |d| through < *d) {
                        dist[i][j] = Some(through);
                        next[i][j] = next[i][k];
                    }
                }
            }
        }
        ShortestPaths { dist, next }
    }
}

#[derive(Debug, Clone)]
pub struct ShortestPaths {
    dist: Vec<Vec<Option<Rational>>>,
    next: Vec<Vec<Option<usize>>>,
}

impl ShortestPaths {
    pub fn distance(&self, u: usize, v: usize) -> Option<&Rational> {
        self.dist[u][v].as_ref()
    }

    /// Vertices of one shortest path from `u` to `v`, both included.
    pub fn path(&self, u: usize, v: usize) -> Option<Vec<usize>> {
        self.next[u][v]?;
        let mut out = vec![u];
        let mut at = u;
        while at != v {
            at = self.next[at][v]?;
            out.push(at);
        }
        Some(out)
    }
}

/// A generalized walk: consecutive vertices are equal or adjacent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    vertices: Vec<usize>,
    length: Rational,
}

impl Walk {
    pub fn new(graph: &WeightedGraph, vertices: Vec<usize>) -> Result<Self, GraphError> {
        if vertices.len() < 2 {
            return Err(GraphError::WalkTooShort);
        }
        let mut length = Rational::zero();
        for step in vertices.windows(2) {
            let (a, b) = (step[0], step[1]);
            for &x in &[a, b] {
                if x >= graph.vertex_count() {
                    return Err(GraphError::VertexOutOfRange(x));
                }
            }
            if a == b {
                continue;
            }
            match graph.weight(a, b) {
                Some(w) => length += w,
                None => {
                    return Err(GraphError::NotAdjacent(
                        graph.vertex(a).to_string(),
                        graph.vertex(b).to_string(),
                    ))
                }
            }
        }
        Ok(Self { vertices, length })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn labels(&self, graph: &WeightedGraph) -> Vec<String> {
        self.vertices.iter().map(|&v| graph.vertex(v).to_string()).collect()
    }

    pub fn length(&self) -> &Rational {
        &self.length
    }
}

/// The canonical projection: the shortest-walk metric on the vertices.
pub fn canonical_projection(graph: &WeightedGraph) -> Result<FiniteMetricSpace, GraphError> {
    let paths = graph.shortest_paths();
    let n = graph.vertex_count();
    let mut dist = vec![vec![Rational::zero(); n]; n];
    for (i, row) in dist.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = paths
                .distance(i, j)
                .ok_or_else(|| GraphError::Disconnected(graph.vertex(i).into(), graph.vertex(j).into()))?
                .clone();
        }
    }
    Ok(FiniteMetricSpace::new(graph.vertices().to_vec(), dist)?)
}

/// An edge together with a strictly shorter walk between its endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonViolation {
    pub edge: Edge,
    pub walk: Walk,
}

/// Whether the projection keeps every edge weight; when it does not, the
/// first edge (in listing order) with a shorter walk is returned.
pub fn preserves_weights(graph: &WeightedGraph) -> Result<(), PolygonViolation> {
    let paths = graph.shortest_paths();
    for edge in graph.edges() {
        let shortest = paths.distance(edge.u, edge.v).expect("edge endpoints are connected");
        if *shortest < edge.weight {
            let vertices = paths.path(edge.u, edge.v).expect("edge endpoints are connected");
            let walk = Walk::new(graph, vertices).expect("shortest path is a walk");
            return Err(PolygonViolation { edge: edge.clone(), walk });
        }
    }
    Ok(())
}

/// A total order on the points of a space, listed first to last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointOrder {
    rank: Vec<usize>,
}

impl PointOrder {
    pub fn new(sequence: &[usize]) -> Result<Self, GraphError> {
        let n = sequence.len();
        let mut rank = vec![usize::MAX; n];
        for (r, &p) in sequence.iter().enumerate() {
            if p >= n || rank[p] != usize::MAX {
                return Err(GraphError::InvalidOrder);
            }
            rank[p] = r;
        }
        Ok(Self { rank })
    }

    pub fn index_order(n: usize) -> Self {
        Self { rank: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    pub fn precedes(&self, a: usize, b: usize) -> bool {
        self.rank[a] < self.rank[b]
    }
}

/// A metric space's complete graph with one added vertex per pair of points.
///
/// Old points keep their indices `0..old_count`; added vertices follow in
/// pair order and are named `pair(i,j)` with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubdivisionGraph {
    graph: WeightedGraph,
    old_count: usize,
    inner: BTreeMap<(usize, usize), Vec<usize>>,
    roles: BTreeMap<usize, (usize, usize)>,
}

pub fn pair_label(i: usize, j: usize) -> String {
    format!("pair({i},{j})")
}

/// Subdivides every pair `{u, v}` with one new vertex joined to the right
/// endpoint (later in `order`) by `near_weight(d)` and to the left one by
/// `d - near_weight(d)`.
pub fn subdivide(
    space: &FiniteMetricSpace,
    near_weight: impl Fn(&Rational) -> Rational,
    order: &PointOrder,
) -> Result<SubdivisionGraph, GraphError> {
    let n = space.len();
    if order.len() != n {
        return Err(GraphError::InvalidOrder);
    }
    let mut vertices = space.labels().to_vec();
    let mut edges = Vec::new();
    let mut inner = BTreeMap::new();
    let mut roles = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j, space.distance(i, j).clone()));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let d = space.distance(i, j);
            let near = near_weight(d);
            if !is_positive(&near) || near >= *d {
                return Err(GraphError::InvalidInnerWeights(
                    space.label(i).to_string(),
                    space.label(j).to_string(),
                ));
            }
            let (left, right) = if order.precedes(i, j) { (i, j) } else { (j, i) };
            let added = vertices.len();
            vertices.push(pair_label(i, j));
            edges.push((left, added, d - &near));
            edges.push((added, right, near));
            inner.insert((i, j), vec![added]);
            roles.insert(added, (left, right));
        }
    }
    let graph = WeightedGraph::from_indexed(vertices, edges)?;
    Ok(SubdivisionGraph { graph, old_count: n, inner, roles })
}

impl SubdivisionGraph {
    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn old_count(&self) -> usize {
        self.old_count
    }

    pub fn is_old(&self, v: usize) -> bool {
        v < self.old_count
    }

    /// Added vertices for the unordered pair `{i, j}`.
    pub fn inner(&self, i: usize, j: usize) -> &[usize] {
        self.inner.get(&(i.min(j), i.max(j))).map_or(&[], Vec::as_slice)
    }

    /// `(left, right)` endpoints of an added vertex.
    pub fn roles(&self, added: usize) -> Option<(usize, usize)> {
        self.roles.get(&added).copied()
    }

    pub fn added_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.roles.keys().copied()
    }

    fn base(&self, u: usize, v: usize) -> Rational {
        if u == v {
            Rational::zero()
        } else {
            self.graph.weight(u, v).expect("old points form a complete graph").clone()
        }
    }

    fn arm(&self, added: usize, end: usize) -> &Rational {
        self.graph.weight(added, end).expect("added vertex is joined to its endpoints")
    }

    /// Distance given by the closed forms for the two pair types they
    /// cover: an added vertex and an old point outside its pair (minimum of
    /// two walks), or two added vertices over different pairs (minimum of
    /// four walks whose middle points may coincide). `None` otherwise.
    pub fn closed_form_distance(&self, x: usize, y: usize) -> Option<Rational> {
        let (x, y) = if self.is_old(x) { (y, x) } else { (x, y) };
        let (xl, xr) = self.roles(x)?;
        if self.is_old(y) {
            if y == xl || y == xr {
                return None;
            }
            return [xl, xr]
                .iter()
                .map(|&u| self.arm(x, u) + self.base(u, y))
                .min();
        }
        let (yl, yr) = self.roles(y)?;
        if (xl.min(xr), xl.max(xr)) == (yl.min(yr), yl.max(yr)) {
            return None;
        }
        let mut best: Option<Rational> = None;
        for &u in &[xl, xr] {
            for &v in &[yl, yr] {
                let len = self.arm(x, u) + self.base(u, v) + self.arm(y, v);
                if best.as_ref().map_or(true, |b| len < *b) {
                    best = Some(len);
                }
            }
        }
        best
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFormMismatch {
    pub x: usize,
    pub y: usize,
    pub closed_form: Rational,
    pub shortest: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFormCheck {
    pub pairs_checked: usize,
    pub mismatch: Option<ClosedFormMismatch>,
}

impl ClosedFormCheck {
    pub fn holds(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Compares the closed forms against all-pairs shortest paths on every
/// pair they cover.
pub fn closed_form_check(sub: &SubdivisionGraph) -> ClosedFormCheck {
    let paths = sub.graph.shortest_paths();
    let n = sub.graph.vertex_count();
    let mut pairs_checked = 0;
    for x in 0..n {
        for y in x + 1..n {
            let Some(closed_form) = sub.closed_form_distance(x, y) else { continue };
            pairs_checked += 1;
            let shortest = paths.distance(x, y).expect("subdivision is connected").clone();
            if closed_form != shortest {
                return ClosedFormCheck {
                    pairs_checked,
                    mismatch: Some(ClosedFormMismatch { x, y, closed_form, shortest }),
                };
            }
        }
    }
    ClosedFormCheck { pairs_checked, mismatch: None }
}
