//! Exhaustive search kernels shared by the isometry-defect and exact
//! Gromov-Hausdorff computations.
//!
//! Both searches only compare absolute differences of distances, so the
//! matrices are first brought to a common denominator. When every scaled
//! entry fits comfortably in an `i64` the search runs on machine integers;
//! otherwise it falls back to `Rational`. The result is the same either way.

use crate::rational::Rational;
use num::{BigInt, Integer, One, ToPrimitive, Zero};

pub(crate) trait Weight: Clone + Ord {
    fn zero() -> Self;
    fn abs_diff(&self, other: &Self) -> Self;
}

impl Weight for i64 {
    fn zero() -> Self {
        0
    }
    fn abs_diff(&self, other: &Self) -> Self {
        (self - other).abs()
    }
}

impl Weight for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn abs_diff(&self, other: &Self) -> Self {
        crate::rational::abs_diff(self, other)
    }
}

const INT_LIMIT: i64 = 1 << 61;

/// Rescales every matrix by the lcm of all denominators. Returns `None` if
/// some entry would not fit below `INT_LIMIT`.
pub(crate) fn to_common_integers(mats: &[&[Vec<Rational>]]) -> Option<(Vec<Vec<Vec<i64>>>, BigInt)> {
    let mut lcm = BigInt::one();
    for m in mats {
        for row in m.iter() {
            for v in row {
                lcm = lcm.lcm(v.denom());
            }
        }
    }
    let mut out = Vec::with_capacity(mats.len());
    for m in mats {
        let mut scaled = Vec::with_capacity(m.len());
        for row in m.iter() {
            let mut r = Vec::with_capacity(row.len());
            for v in row {
                let n = v.numer() * (&lcm / v.denom());
                let n = n.to_i64()?;
                if n.abs() >= INT_LIMIT {
                    return None;
                }
                r.push(n);
            }
            scaled.push(r);
        }
        out.push(scaled);
    }
    Some((out, lcm))
}

pub(crate) fn from_scaled(value: i64, denom: &BigInt) -> Rational {
    Rational::new(BigInt::from(value), denom.clone())
}

/// Minimum distortion over all non-identity permutations of `0..n`,
/// together with one minimizer. `n` must be at least 2.
pub(crate) fn min_nonidentity_distortion<W: Weight>(dist: &[Vec<W>]) -> (W, Vec<usize>) {
    let n = dist.len();
    debug_assert!(n >= 2);
    let mut search = PermSearch {
        dist,
        perm: vec![usize::MAX; n],
        used: vec![false; n],
        best: None,
        best_perm: Vec::new(),
    };
    search.descend(0, W::zero(), true);
    let best = search.best.expect("a non-identity permutation exists for n >= 2");
    (best, search.best_perm)
}

struct PermSearch<'a, W> {
    dist: &'a [Vec<W>],
    perm: Vec<usize>,
    used: Vec<bool>,
    best: Option<W>,
    best_perm: Vec<usize>,
}

impl<W: Weight> PermSearch<'_, W> {
    fn done(&self) -> bool {
        matches!(&self.best, Some(b) if *b == W::zero())
    }

    fn descend(&mut self, depth: usize, current: W, identity_so_far: bool) {
        let n = self.dist.len();
        if depth == n {
            if !identity_so_far {
                self.best = Some(current);
                self.best_perm = self.perm.clone();
            }
            return;
        }
        for target in 0..n {
            if self.used[target] {
                continue;
            }
            let mut worst = current.clone();
            let mut pruned = false;
            for prev in 0..depth {
                let diff = self.dist[depth][prev].abs_diff(&self.dist[target][self.perm[prev]]);
                if diff > worst {
                    worst = diff;
                }
                if matches!(&self.best, Some(b) if worst >= *b) {
                    pruned = true;
                    break;
                }
            }
            if pruned {
                continue;
            }
            self.used[target] = true;
            self.perm[depth] = target;
            self.descend(depth + 1, worst, identity_so_far && target == depth);
            self.used[target] = false;
            self.perm[depth] = usize::MAX;
            if self.done() {
                return;
            }
        }
    }
}

pub(crate) struct CorrespondenceOptimum<W> {
    pub value: W,
    pub relation: Vec<Vec<bool>>,
    pub explored: u64,
}

/// Branch and bound over boolean relation matrices in row-major order.
///
/// Each cell is first excluded, then included. A branch is cut when a row
/// or column can no longer be covered, or when its partial distortion is
/// already no better than the incumbent.
pub(crate) fn min_correspondence_distortion<W: Weight>(
    left: &[Vec<W>],
    right: &[Vec<W>],
) -> CorrespondenceOptimum<W> {
    let rows = left.len();
    let cols = right.len();
    let mut search = CorrSearch {
        left,
        right,
        rel: vec![vec![false; cols]; rows],
        included: Vec::new(),
        row_has: vec![false; rows],
        col_count: vec![0; cols],
        best: None,
        best_rel: Vec::new(),
        explored: 0,
    };
    search.descend(0, W::zero());
    CorrespondenceOptimum {
        value: search.best.expect("every pair of non-empty sets has a correspondence"),
        relation: search.best_rel,
        explored: search.explored,
    }
}

struct CorrSearch<'a, W> {
    left: &'a [Vec<W>],
    right: &'a [Vec<W>],
    rel: Vec<Vec<bool>>,
    included: Vec<(usize, usize)>,
    row_has: Vec<bool>,
    col_count: Vec<usize>,
    best: Option<W>,
    best_rel: Vec<Vec<bool>>,
    explored: u64,
}

impl<W: Weight> CorrSearch<'_, W> {
    fn beaten(&self, value: &W) -> bool {
        matches!(&self.best, Some(b) if value >= b)
    }

    fn done(&self) -> bool {
        matches!(&self.best, Some(b) if *b == W::zero())
    }

    fn descend(&mut self, cell: usize, current: W) {
        self.explored += 1;
        if self.beaten(&current) {
            return;
        }
        let cols = self.right.len();
        let rows = self.left.len();
        if cell == rows * cols {
            self.best = Some(current);
            self.best_rel = self.rel.clone();
            return;
        }
        let (a, b) = (cell / cols, cell % cols);

        let can_exclude =
            !(b == cols - 1 && !self.row_has[a]) && !(a == rows - 1 && self.col_count[b] == 0);
        if can_exclude {
            self.descend(cell + 1, current.clone());
            if self.done() {
                return;
            }
        }

        let mut worst = current;
        for &(pa, pb) in &self.included {
            let diff = self.left[a][pa].abs_diff(&self.right[b][pb]);
            if diff > worst {
                worst = diff;
            }
        }
        if self.beaten(&worst) {
            return;
        }
        let had_row = self.row_has[a];
        self.rel[a][b] = true;
        self.row_has[a] = true;
        self.col_count[b] += 1;
        self.included.push((a, b));
        self.descend(cell + 1, worst);
        self.included.pop();
        self.col_count[b] -= 1;
        self.row_has[a] = had_row;
        self.rel[a][b] = false;
    }
}

/// Calls `visit` once for every relation matrix with no empty row and no
/// empty column.
pub(crate) fn for_each_relation(rows: usize, cols: usize, visit: &mut dyn FnMut(&[Vec<bool>])) {
    fn go(
        cell: usize,
        rows: usize,
        cols: usize,
        rel: &mut Vec<Vec<bool>>,
        col_count: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[Vec<bool>]),
    ) {
        if cell == rows * cols {
            visit(rel);
            return;
        }
        let (a, b) = (cell / cols, cell % cols);
        let row_has = rel[a].iter().any(|&x| x);
        if !(b == cols - 1 && !row_has) && !(a == rows - 1 && col_count[b] == 0) {
            go(cell + 1, rows, cols, rel, col_count, visit);
        }
        rel[a][b] = true;
        col_count[b] += 1;
        go(cell + 1, rows, cols, rel, col_count, visit);
        col_count[b] -= 1;
        rel[a][b] = false;
    }
    if rows == 0 || cols == 0 {
        return;
    }
    let mut rel = vec![vec![false; cols]; rows];
    let mut col_count = vec![0; cols];
    go(0, rows, cols, &mut rel, &mut col_count, visit);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn common_denominator_scaling() {
        let m = vec![vec![rat(0, 1), rat(3, 4)], vec![rat(3, 4), rat(0, 1)]];
        let n = vec![vec![rat(0, 1), rat(1, 6)], vec![rat(1, 6), rat(0, 1)]];
        let (scaled, lcm) = to_common_integers(&[&m, &n]).unwrap();
        assert_eq!(lcm, BigInt::from(12));
        assert_eq!(scaled[0][0][1], 9);
        assert_eq!(scaled[1][1][0], 2);
        assert_eq!(from_scaled(9, &lcm), rat(3, 4));
    }

    #[test]
    fn huge_entries_fall_back() {
        let big = Rational::from_integer(BigInt::from(1u8) << 70);
        let m = vec![vec![rat(0, 1), big.clone()], vec![big, rat(0, 1)]];
        assert!(to_common_integers(&[&m]).is_none());
    }

    #[test]
    fn relation_counts_small() {
        let mut count = 0;
        for_each_relation(2, 2, &mut |_| count += 1);
        assert_eq!(count, 7);
        let mut count = 0;
        for_each_relation(1, 3, &mut |_| count += 1);
        assert_eq!(count, 1);
    }

    #[test]
    fn integer_and_exact_kernels_agree() {
        let d: Vec<Vec<i64>> = vec![vec![0, 9, 11], vec![9, 0, 12], vec![11, 12, 0]];
        let q: Vec<Vec<Rational>> = d
            .iter()
            .map(|r| r.iter().map(|&v| rat(v, 4)).collect())
            .collect();
        let (vi, _) = min_nonidentity_distortion(&d);
        let (vq, _) = min_nonidentity_distortion(&q);
        assert_eq!(rat(vi, 4), vq);
        assert_eq!(vi, 1);
    }
}
