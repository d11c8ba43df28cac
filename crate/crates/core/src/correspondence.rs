//! Correspondences, distortion, Hausdorff distance inside one space, and
//! exact Gromov-Hausdorff distance of small spaces.
//!
//! The GH distance is computed through `2 d_GH(A, B) = min dis R` over all
//! correspondences `R`, so everything here reduces to distortion of
//! boolean relation matrices.

use crate::rational::{half, Rational};
use crate::search;
use crate::space::{diam, FiniteMetricSpace};
use num::Zero;
use thiserror::Error;

/// Largest `#A * #B` for which [`gh_exact`] runs by default.
pub const DEFAULT_GH_BUDGET: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorrespondenceError {
    #[error("a correspondence needs at least one row and one column")]
    Empty,
    #[error("row {row} has {len} entries, expected {expected}")]
    Ragged { row: usize, len: usize, expected: usize },
    #[error("row {0} is related to nothing")]
    UncoveredRow(usize),
    #[error("column {0} is related to nothing")]
    UncoveredColumn(usize),
    #[error("pair ({row},{col}) is outside a {rows}x{cols} relation")]
    PairOutOfRange { row: usize, col: usize, rows: usize, cols: usize },
    #[error("correspondence is {rows}x{cols} but the spaces have {left} and {right} points")]
    DimensionMismatch { rows: usize, cols: usize, left: usize, right: usize },
    #[error("mapping is not a permutation of the space's points")]
    NotAPermutation,
    #[error("subset is empty")]
    EmptySubset,
    #[error("point index {index} is out of range for a space of {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("search over {cells} relation cells exceeds the budget of {budget}")]
    SearchBudgetExceeded { cells: usize, budget: usize },
}

/// A relation between `rows` points of one space and `cols` points of
/// another in which every point on each side is related to something.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Correspondence {
    rel: Vec<Vec<bool>>,
}

impl Correspondence {
    pub fn new(rel: Vec<Vec<bool>>) -> Result<Self, CorrespondenceError> {
        let rows = rel.len();
        let cols = rel.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(CorrespondenceError::Empty);
        }
        for (row, r) in rel.iter().enumerate() {
            if r.len() != cols {
                return Err(CorrespondenceError::Ragged { row, len: r.len(), expected: cols });
            }
            if !r.iter().any(|&x| x) {
                return Err(CorrespondenceError::UncoveredRow(row));
            }
        }
        if let Some(col) = (0..cols).find(|&c| !rel.iter().any(|r| r[c])) {
            return Err(CorrespondenceError::UncoveredColumn(col));
        }
        Ok(Self { rel })
    }

    pub fn from_pairs(
        rows: usize,
        cols: usize,
        pairs: &[(usize, usize)],
    ) -> Result<Self, CorrespondenceError> {
        let mut rel = vec![vec![false; cols]; rows];
        for &(row, col) in pairs {
            if row >= rows || col >= cols {
                return Err(CorrespondenceError::PairOutOfRange { row, col, rows, cols });
            }
            rel[row][col] = true;
        }
        Self::new(rel)
    }

    pub fn identity(n: usize) -> Self {
        let pairs: Vec<_> = (0..n).map(|i| (i, i)).collect();
        Self::from_pairs(n, n, &pairs).expect("identity on a non-empty set")
    }

    pub fn full(rows: usize, cols: usize) -> Self {
        Self::new(vec![vec![true; cols]; rows]).expect("full relation on non-empty sets")
    }

    pub fn rows(&self) -> usize {
        self.rel.len()
    }

    pub fn cols(&self) -> usize {
        self.rel[0].len()
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.rel[row][col]
    }

    /// Related pairs in row-major order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, r) in self.rel.iter().enumerate() {
            for (b, &x) in r.iter().enumerate() {
                if x {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn matrix(&self) -> &[Vec<bool>] {
        &self.rel
    }
}

fn check_dims(
    r: &Correspondence,
    a: &FiniteMetricSpace,
    b: &FiniteMetricSpace,
) -> Result<(), CorrespondenceError> {
    if r.rows() != a.len() || r.cols() != b.len() {
        return Err(CorrespondenceError::DimensionMismatch {
            rows: r.rows(),
            cols: r.cols(),
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

/// `dis R`: the largest `|d_A(a,a') - d_B(b,b')|` over related pairs
/// `(a,b)` and `(a',b')`.
pub fn distortion(
    r: &Correspondence,
    a: &FiniteMetricSpace,
    b: &FiniteMetricSpace,
) -> Result<Rational, CorrespondenceError> {
    check_dims(r, a, b)?;
    let pairs = r.pairs();
    let mut worst = Rational::zero();
    for (k, &(x, y)) in pairs.iter().enumerate() {
        for &(x2, y2) in &pairs[k + 1..] {
            let diff = crate::rational::abs_diff(a.distance(x, x2), b.distance(y, y2));
            if diff > worst {
                worst = diff;
            }
        }
    }
    Ok(worst)
}

/// Distortion of the self-map `i -> perm[i]`.
pub fn functional_distortion(perm: &[usize], space: &FiniteMetricSpace) -> Result<Rational, CorrespondenceError> {
    let n = space.len();
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(CorrespondenceError::NotAPermutation);
    }
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(CorrespondenceError::NotAPermutation);
        }
    }
    let mut worst = Rational::zero();
    for i in 0..n {
        for j in i + 1..n {
            let diff = crate::rational::abs_diff(space.distance(i, j), space.distance(perm[i], perm[j]));
            if diff > worst {
                worst = diff;
            }
        }
    }
    Ok(worst)
}

/// Hausdorff distance between two index subsets of one space. For finite
/// sets the infimum in the definition is attained and equals the larger of
/// the two directed max-min distances.
pub fn hausdorff(
    a: &[usize],
    b: &[usize],
    space: &FiniteMetricSpace,
) -> Result<Rational, CorrespondenceError> {
    if a.is_empty() || b.is_empty() {
        return Err(CorrespondenceError::EmptySubset);
    }
    let len = space.len();
    if let Some(&index) = a.iter().chain(b).find(|&&i| i >= len) {
        return Err(CorrespondenceError::IndexOutOfRange { index, len });
    }
    let directed = |from: &[usize], to: &[usize]| {
        from.iter()
            .map(|&x| to.iter().map(|&y| space.distance(x, y)).min().expect("non-empty"))
            .max()
            .expect("non-empty")
            .clone()
    };
    Ok(directed(a, b).max(directed(b, a)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GHResult {
    /// Twice the Gromov-Hausdorff distance.
    pub two_dgh: Rational,
    /// A correspondence whose distortion equals `two_dgh`.
    pub optimal: Correspondence,
    /// Search-tree nodes visited.
    pub explored: u64,
}

impl GHResult {
    pub fn dgh(&self) -> Rational {
        half(&self.two_dgh)
    }
}

/// Exact `2 d_GH(A, B)` by branch and bound over all correspondences.
pub fn gh_exact(
    a: &FiniteMetricSpace,
    b: &FiniteMetricSpace,
    budget: usize,
) -> Result<GHResult, CorrespondenceError> {
    let cells = a.len() * b.len();
    if cells > budget {
        return Err(CorrespondenceError::SearchBudgetExceeded { cells, budget });
    }
    let (two_dgh, relation, explored) = match search::to_common_integers(&[a.matrix(), b.matrix()]) {
        Some((scaled, denom)) => {
            let opt = search::min_correspondence_distortion(&scaled[0], &scaled[1]);
            (search::from_scaled(opt.value, &denom), opt.relation, opt.explored)
        }
        None => {
            let opt = search::min_correspondence_distortion(a.matrix(), b.matrix());
            (opt.value, opt.relation, opt.explored)
        }
    };
    let optimal = Correspondence::new(relation).expect("search only yields correspondences");
    Ok(GHResult { two_dgh, optimal, explored })
}

/// `d_GH` to the one-point space, `diam(X) / 2`.
pub fn gh_to_point(space: &FiniteMetricSpace) -> Rational {
    half(&diam(space))
}

/// `dis R / 2`, an upper bound for `d_GH(A, B)`.
pub fn gh_upper(
    r: &Correspondence,
    a: &FiniteMetricSpace,
    b: &FiniteMetricSpace,
) -> Result<Rational, CorrespondenceError> {
    distortion(r, a, b).map(|d| half(&d))
}

/// Visits every correspondence between a `rows`-set and a `cols`-set
/// exactly once, in row-major enumeration order.
pub fn for_each_correspondence(rows: usize, cols: usize, mut visit: impl FnMut(&Correspondence)) {
    search::for_each_relation(rows, cols, &mut |rel| {
        visit(&Correspondence { rel: rel.to_vec() });
    });
}

pub fn count_correspondences(rows: usize, cols: usize) -> u64 {
    let mut n = 0u64;
    search::for_each_relation(rows, cols, &mut |_| n += 1);
    n
}
