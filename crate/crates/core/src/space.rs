//! Finite metric spaces with exact rational distances, and the scalar
//! invariants `diam`, `s` (separation), `t` (triangle slack) and `e`
//! (isometry defect).

use crate::rational::{is_positive, Rational};
use crate::search;
use num::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use thiserror::Error;

/// Largest point count for which [`isometry_defect`] runs by default.
pub const DEFAULT_PERMUTATION_BUDGET: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("matrix has {rows} rows but {labels} labels were given")]
    ShapeMismatch { labels: usize, rows: usize },
    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("a metric space needs at least one point")]
    EmptySpace,
    #[error("label `{0}` appears more than once")]
    DuplicateLabel(String),
    #[error("d({i},{j}) != d({j},{i})")]
    Asymmetry { i: usize, j: usize },
    #[error("d({i},{i}) is not zero")]
    NonzeroDiagonal { i: usize },
    #[error("d({i},{j}) is zero for distinct points")]
    ZeroOffDiagonal { i: usize, j: usize },
    #[error("d({i},{j}) is negative")]
    NegativeEntry { i: usize, j: usize },
    #[error("triangle inequality fails: d({i},{k}) > d({i},{j}) + d({j},{k})")]
    TriangleViolation { i: usize, j: usize, k: usize },
    #[error("operation needs at least {required} points, space has {actual}")]
    TooFewPoints { required: usize, actual: usize },
    #[error("permutation search over {points} points exceeds the budget of {budget} points")]
    SearchBudgetExceeded { points: usize, budget: usize },
    #[error("scale factor must be positive")]
    NonPositiveScale,
    #[error("a simplex needs at least one point")]
    EmptySimplex,
}

/// Labeled points with an exact distance matrix that satisfies every metric
/// axiom. Only constructible through [`FiniteMetricSpace::new`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Vec<Rational>>,
}

impl FiniteMetricSpace {
    /// Checks the matrix exactly and returns the space, or the first axiom
    /// violation found together with the offending indices.
    pub fn new(labels: Vec<String>, dist: Vec<Vec<Rational>>) -> Result<Self, MetricError> {
        let n = labels.len();
        if dist.len() != n {
            return Err(MetricError::ShapeMismatch { labels: n, rows: dist.len() });
        }
        if n == 0 {
            return Err(MetricError::EmptySpace);
        }
        for (row, r) in dist.iter().enumerate() {
            if r.len() != n {
                return Err(MetricError::NotSquare { row, len: r.len(), expected: n });
            }
        }
        let mut seen = HashSet::with_capacity(n);
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(MetricError::DuplicateLabel(label.clone()));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let v = &dist[i][j];
                if v.is_negative() {
                    return Err(MetricError::NegativeEntry { i, j });
                }
                if i == j && !v.is_zero() {
                    return Err(MetricError::NonzeroDiagonal { i });
                }
                if i != j && v.is_zero() {
                    return Err(MetricError::ZeroOffDiagonal { i, j });
                }
                if dist[j][i] != *v {
                    return Err(MetricError::Asymmetry { i: i.min(j), j: i.max(j) });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if dist[i][k] > &dist[i][j] + &dist[j][k] {
                        return Err(MetricError::TriangleViolation { i, j, k });
                    }
                }
            }
        }
        Ok(Self { labels, dist })
    }

    /// Builds a space whose labels are `"0"`, `"1"`, ...
    pub fn from_matrix(dist: Vec<Vec<Rational>>) -> Result<Self, MetricError> {
        let labels = (0..dist.len()).map(|i| i.to_string()).collect();
        Self::new(labels, dist)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn distance(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i][j]
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.dist
    }

    /// The same space with its points listed in a different order:
    /// point `k` of the result is point `order[k]` of `self`.
    pub fn reordered(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.len(), "order must list every point");
        let labels = order.iter().map(|&i| self.labels[i].clone()).collect();
        let dist = order
            .iter()
            .map(|&i| order.iter().map(|&j| self.dist[i][j].clone()).collect())
            .collect();
        Self { labels, dist }
    }

    /// Off-diagonal entries, each unordered pair once.
    pub fn pair_distances(&self) -> impl Iterator<Item = &Rational> + '_ {
        let n = self.len();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| &self.dist[i][j]))
    }

    /// Maps every off-diagonal entry through `f`. The caller is responsible
    /// for `f` preserving the metric axioms; the result is re-validated.
    pub(crate) fn map_distances(
        &self,
        mut f: impl FnMut(&Rational) -> Rational,
    ) -> Result<Self, MetricError> {
        let n = self.len();
        let mut dist = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v = f(&self.dist[i][j]);
                dist[i][j] = v.clone();
                dist[j][i] = v;
            }
        }
        Self::new(self.labels.clone(), dist)
    }
}

pub fn validate(labels: Vec<String>, matrix: Vec<Vec<Rational>>) -> Result<FiniteMetricSpace, MetricError> {
    FiniteMetricSpace::new(labels, matrix)
}

pub fn diam(space: &FiniteMetricSpace) -> Rational {
    space.pair_distances().max().cloned().unwrap_or_else(Rational::zero)
}

/// `s(X)`: the smallest distance between distinct points.
pub fn separation(space: &FiniteMetricSpace) -> Result<Rational, MetricError> {
    space
        .pair_distances()
        .min()
        .cloned()
        .ok_or(MetricError::TooFewPoints { required: 2, actual: space.len() })
}

/// `t(X)`: the smallest excess `d(x,y) + d(y,z) - d(x,z)` over ordered
/// triples of pairwise distinct points.
pub fn triangle_slack(space: &FiniteMetricSpace) -> Result<Rational, MetricError> {
    let n = space.len();
    if n < 3 {
        return Err(MetricError::TooFewPoints { required: 3, actual: n });
    }
    let mut best: Option<Rational> = None;
    for x in 0..n {
        for y in 0..n {
            if y == x {
                continue;
            }
            for z in 0..n {
                if z == x || z == y {
                    continue;
                }
                let slack = space.distance(x, y) + space.distance(y, z) - space.distance(x, z);
                if best.as_ref().map_or(true, |b| slack < *b) {
                    best = Some(slack);
                }
            }
        }
    }
    Ok(best.expect("n >= 3 yields at least one triple"))
}

/// Result of the exhaustive isometry-defect search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsometryDefect {
    pub value: Rational,
    /// A non-identity permutation attaining `value`; point `i` maps to
    /// `permutation[i]`.
    pub permutation: Vec<usize>,
}

/// `e(X)`: the minimum distortion of a non-identity self-bijection, found by
/// exhaustive branch and bound. Refuses spaces with more than `budget`
/// points.
pub fn isometry_defect(space: &FiniteMetricSpace, budget: usize) -> Result<IsometryDefect, MetricError> {
    let n = space.len();
    if n < 2 {
        return Err(MetricError::TooFewPoints { required: 2, actual: n });
    }
    if n > budget {
        return Err(MetricError::SearchBudgetExceeded { points: n, budget });
    }
    let (value, permutation) = match search::to_common_integers(&[space.matrix()]) {
        Some((scaled, denom)) => {
            let (v, p) = search::min_nonidentity_distortion(&scaled[0]);
            (search::from_scaled(v, &denom), p)
        }
        None => search::min_nonidentity_distortion(space.matrix()),
    };
    Ok(IsometryDefect { value, permutation })
}

/// The `n`-point simplex: all distances between distinct points equal 1.
pub fn simplex(n: usize) -> Result<FiniteMetricSpace, MetricError> {
    if n == 0 {
        return Err(MetricError::EmptySimplex);
    }
    let one = Rational::from_integer(1.into());
    let dist = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::zero() } else { one.clone() })
                .collect()
        })
        .collect();
    let labels = (0..n).map(|i| format!("p{i}")).collect();
    FiniteMetricSpace::new(labels, dist)
}

/// `aX`: every distance multiplied by `factor > 0`.
pub fn scale(space: &FiniteMetricSpace, factor: &Rational) -> Result<FiniteMetricSpace, MetricError> {
    if !is_positive(factor) {
        return Err(MetricError::NonPositiveScale);
    }
    space.map_distances(|d| d * factor)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub points: usize,
    #[serde(with = "crate::rational::serde_str")]
    pub diam: Rational,
    #[serde(with = "crate::rational::serde_str::option")]
    pub s: Option<Rational>,
    #[serde(with = "crate::rational::serde_str::option")]
    pub t: Option<Rational>,
    #[serde(with = "crate::rational::serde_str::option")]
    pub e: Option<Rational>,
    pub e_exact: bool,
    /// `None` when some invariant could not be decided.
    pub generic: Option<bool>,
}

pub fn report(space: &FiniteMetricSpace, budget: usize) -> InvariantReport {
    let s = separation(space).ok();
    let t = triangle_slack(space).ok();
    let e = isometry_defect(space, budget).ok().map(|d| d.value);
    let present = [&s, &t, &e];
    let generic = if present.iter().any(|v| matches!(v, Some(x) if !is_positive(x))) {
        Some(false)
    } else if present.iter().all(|v| v.is_some()) {
        Some(true)
    } else {
        None
    };
    InvariantReport {
        points: space.len(),
        diam: diam(space),
        e_exact: e.is_some(),
        s,
        t,
        e,
        generic,
    }
}
