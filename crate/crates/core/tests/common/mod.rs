//! Test corpus and brute-force oracles. Nothing here calls the search or
//! shortest-path code under test.
#![allow(dead_code)]

use gh_generic::rational::{int, rat};
use gh_generic::{simplex, FiniteMetricSpace, Rational};
use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn space(rows: &[&[Rational]]) -> FiniteMetricSpace {
    FiniteMetricSpace::from_matrix(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
}

/// Triangle with `d(a,b) = ab`, `d(b,c) = bc`, `d(a,c) = ac`.
pub fn triangle(ab: Rational, bc: Rational, ac: Rational) -> FiniteMetricSpace {
    let z = Rational::zero;
    FiniteMetricSpace::new(
        vec!["a".into(), "b".into(), "c".into()],
        vec![
            vec![z(), ab.clone(), ac.clone()],
            vec![ab, z(), bc.clone()],
            vec![ac, bc, z()],
        ],
    )
    .unwrap()
}

const DENOMS: [i64; 8] = [1, 2, 3, 4, 5, 6, 8, 12];

pub fn random_rational(rng: &mut impl Rng, lo: i64, hi: i64) -> Rational {
    let den = DENOMS[rng.gen_range(0..DENOMS.len())];
    rat(rng.gen_range(lo * den..=hi * den), den)
}

/// A random metric on `n` points. Three families, picked by `rng`:
/// entries in `[a, 2a]` (always metric), points on a line (degenerate
/// triangles), and the shortest-path closure of a random complete matrix.
pub fn random_space(rng: &mut impl Rng, n: usize) -> FiniteMetricSpace {
    let z = Rational::zero;
    let mut m = vec![vec![z(); n]; n];
    match rng.gen_range(0..3) {
        0 => {
            let base = random_rational(rng, 1, 3);
            for i in 0..n {
                for j in i + 1..n {
                    let f = rat(rng.gen_range(0..=12), 12) + int(1);
                    let v = &base * f;
                    m[i][j] = v.clone();
                    m[j][i] = v;
                }
            }
        }
        1 => {
            let mut xs: Vec<Rational> = Vec::new();
            while xs.len() < n {
                let x = random_rational(rng, 0, 6);
                if !xs.contains(&x) {
                    xs.push(x);
                }
            }
            for i in 0..n {
                for j in 0..n {
                    m[i][j] = (&xs[i] - &xs[j]).abs();
                }
            }
        }
        _ => {
            for i in 0..n {
                for j in i + 1..n {
                    let v = random_rational(rng, 1, 5);
                    m[i][j] = v.clone();
                    m[j][i] = v;
                }
            }
            m = oracle_closure(&m);
        }
    }
    FiniteMetricSpace::from_matrix(m).unwrap()
}

/// Δ1..Δ4 followed by 20 random spaces with 2, 3 or 4 points.
pub fn corpus() -> Vec<FiniteMetricSpace> {
    let mut out: Vec<_> = (1..=4).map(|n| simplex(n).unwrap()).collect();
    let mut r = rng(0x5eed);
    for k in 0..20 {
        out.push(random_space(&mut r, 2 + k % 3));
    }
    out
}

/// Min-plus relaxation to a fixed point (Bellman-Ford style) on a full
/// matrix; `None` entries are missing edges.
pub fn oracle_apsp(n: usize, edges: &[(usize, usize, Rational)]) -> Vec<Vec<Option<Rational>>> {
    let mut d: Vec<Vec<Option<Rational>>> = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(Rational::zero());
    }
    for (u, v, w) in edges {
        for (a, b) in [(*u, *v), (*v, *u)] {
            if d[a][b].as_ref().map_or(true, |x| w < x) {
                d[a][b] = Some(w.clone());
            }
        }
    }
    loop {
        let mut changed = false;
        for (u, v, w) in edges {
            for (a, b) in [(*u, *v), (*v, *u)] {
                for s in 0..n {
                    if let Some(sa) = d[s][a].clone() {
                        let cand = sa + w;
                        if d[s][b].as_ref().map_or(true, |x| cand < *x) {
                            d[s][b] = Some(cand);
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            return d;
        }
    }
}

pub fn oracle_closure(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = m.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j, m[i][j].clone()));
        }
    }
    oracle_apsp(n, &edges)
        .into_iter()
        .map(|r| r.into_iter().map(|x| x.unwrap()).collect())
        .collect()
}

pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub fn oracle_map_distortion(x: &FiniteMetricSpace, perm: &[usize]) -> Rational {
    let n = x.len();
    let mut worst = Rational::zero();
    for i in 0..n {
        for j in 0..n {
            let d = (x.distance(i, j) - x.distance(perm[i], perm[j])).abs();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// `e(X)` by trying every non-identity permutation.
pub fn oracle_defect(x: &FiniteMetricSpace) -> Rational {
    let n = x.len();
    let id: Vec<usize> = (0..n).collect();
    all_permutations(n)
        .into_iter()
        .filter(|p| *p != id)
        .map(|p| oracle_map_distortion(x, &p))
        .min()
        .unwrap()
}

pub fn oracle_slack(x: &FiniteMetricSpace) -> Rational {
    let n = x.len();
    let mut best: Option<Rational> = None;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if a != b && b != c && a != c {
                    let v = x.distance(a, b) + x.distance(b, c) - x.distance(a, c);
                    if best.as_ref().map_or(true, |w| v < *w) {
                        best = Some(v);
                    }
                }
            }
        }
    }
    best.unwrap()
}

/// Every relation matrix over `rows x cols` cells as a bitmask, keeping the
/// ones with no empty row or column.
pub fn oracle_correspondences(rows: usize, cols: usize) -> Vec<Vec<(usize, usize)>> {
    let cells = rows * cols;
    assert!(cells <= 24, "brute force limited to 24 cells");
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << cells) {
        let has = |a: usize, b: usize| mask >> (a * cols + b) & 1 == 1;
        if (0..rows).all(|a| (0..cols).any(|b| has(a, b))) && (0..cols).all(|b| (0..rows).any(|a| has(a, b))) {
            let mut pairs = Vec::new();
            for a in 0..rows {
                for b in 0..cols {
                    if has(a, b) {
                        pairs.push((a, b));
                    }
                }
            }
            out.push(pairs);
        }
    }
    out
}

pub fn oracle_relation_distortion(
    a: &FiniteMetricSpace,
    b: &FiniteMetricSpace,
    pairs: &[(usize, usize)],
) -> Rational {
    let mut worst = Rational::zero();
    for &(x, y) in pairs {
        for &(x2, y2) in pairs {
            let d = (a.distance(x, x2) - b.distance(y, y2)).abs();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// `2 d_GH` by brute force over every correspondence.
pub fn oracle_two_dgh(a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> Rational {
    oracle_correspondences(a.len(), b.len())
        .iter()
        .map(|p| oracle_relation_distortion(a, b, p))
        .min()
        .unwrap()
}

fn binomial(n: u64, k: u64) -> i128 {
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// Number of `m x n` boolean matrices without zero rows or columns.
pub fn inclusion_exclusion_count(m: u64, n: u64) -> i128 {
    let mut total = 0i128;
    for i in 0..=m {
        for j in 0..=n {
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            total += sign * binomial(m, i) * binomial(n, j) * (1i128 << ((m - i) * (n - j)));
        }
    }
    total
}

/// The subdivision graph of the perturbation, rebuilt from scratch: old
/// points first, then one vertex per pair `i < j`, with weights computed
/// directly from the ladder formula.
pub fn oracle_subdivision_edges(
    x: &FiniteMetricSpace,
    epsilon: &Rational,
) -> (usize, Vec<(usize, usize, Rational)>) {
    let n = x.len();
    let quarter = epsilon / int(4);
    let ladder = |d: &Rational| {
        let mut k = int(0);
        while &k * epsilon < *d {
            k += int(1);
        }
        k * epsilon
    };
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j, ladder(x.distance(i, j))));
        }
    }
    let mut next = n;
    for i in 0..n {
        for j in i + 1..n {
            let d = ladder(x.distance(i, j));
            edges.push((i, next, d - &quarter));
            edges.push((next, j, quarter.clone()));
            next += 1;
        }
    }
    (next, edges)
}
