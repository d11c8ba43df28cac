//! Metrically convex functions applied entrywise to distance matrices.
//!
//! A function `f` with `f(0) = 0` is metrically convex when `a <= b + c`
//! implies `f(a) <= f(b) + f(c)`; applying it to a metric gives a metric.
//! The built-in variants (ladder, shift, scale, and their compositions) are
//! all of this kind.

use crate::rational::{half, is_positive, parse_rational, Rational};
use crate::space::{FiniteMetricSpace, MetricError};
use num::{Signed, Zero};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("transform parameter must be positive")]
    NonPositiveParameter,
    #[error("cannot parse transform `{0}`; expected ladder:Q, shift:Q or scale:Q separated by commas")]
    Parse(String),
    #[error("operation needs at least {required} points, space has {actual}")]
    TooFewPoints { required: usize, actual: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MetricTransform {
    /// `x -> ceil(x / eps) * eps`.
    Ladder(Rational),
    /// `x -> x + c` for `x > 0`, `0 -> 0`.
    Shift(Rational),
    /// `x -> a * x`.
    Scale(Rational),
    /// `outer(inner(x))`.
    Compose(Box<MetricTransform>, Box<MetricTransform>),
}

impl MetricTransform {
    pub fn ladder(eps: Rational) -> Result<Self, TransformError> {
        positive(eps).map(Self::Ladder)
    }

    pub fn shift(c: Rational) -> Result<Self, TransformError> {
        positive(c).map(Self::Shift)
    }

    pub fn scale(a: Rational) -> Result<Self, TransformError> {
        positive(a).map(Self::Scale)
    }

    pub fn compose(outer: Self, inner: Self) -> Self {
        Self::Compose(Box::new(outer), Box::new(inner))
    }

    /// Applies `self` first, then `next`.
    pub fn then(self, next: Self) -> Self {
        Self::compose(next, self)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        debug_assert!(!x.is_negative(), "transforms act on non-negative reals");
        if x.is_zero() {
            return Rational::zero();
        }
        match self {
            Self::Ladder(eps) => (x / eps).ceil() * eps,
            Self::Shift(c) => x + c,
            Self::Scale(a) => x * a,
            Self::Compose(outer, inner) => outer.eval(&inner.eval(x)),
        }
    }

    /// Steps in application order.
    fn chain(&self) -> Vec<&MetricTransform> {
        match self {
            Self::Compose(outer, inner) => {
                let mut steps = inner.chain();
                steps.extend(outer.chain());
                steps
            }
            step => vec![step],
        }
    }
}

fn positive(value: Rational) -> Result<Rational, TransformError> {
    if is_positive(&value) {
        Ok(value)
    } else {
        Err(TransformError::NonPositiveParameter)
    }
}

/// Formats as the comma-separated chain accepted by `FromStr`, in
/// application order: `"ladder:1,shift:2"` is `shift . ladder`.
impl fmt::Display for MetricTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .chain()
            .into_iter()
            .map(|step| match step {
                Self::Ladder(v) => format!("ladder:{v}"),
                Self::Shift(v) => format!("shift:{v}"),
                Self::Scale(v) => format!("scale:{v}"),
                Self::Compose(..) => unreachable!("chain flattens compositions"),
            })
            .collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for MetricTransform {
    type Err = TransformError;

    fn from_str(spec: &str) -> Result<Self, Self::Err> {
        let mut result: Option<MetricTransform> = None;
        for part in spec.split(',') {
            let err = || TransformError::Parse(part.trim().to_string());
            let (kind, value) = part.trim().split_once(':').ok_or_else(err)?;
            let value = parse_rational(value).map_err(|_| err())?;
            let step = match kind.trim() {
                "ladder" => Self::ladder(value)?,
                "shift" => Self::shift(value)?,
                "scale" => Self::scale(value)?,
                _ => return Err(err()),
            };
            result = Some(match result {
                None => step,
                Some(prev) => prev.then(step),
            });
        }
        result.ok_or_else(|| TransformError::Parse(spec.to_string()))
    }
}

/// `f(X)`: every distance of `X` mapped through `f`.
pub fn apply(f: &MetricTransform, space: &FiniteMetricSpace) -> FiniteMetricSpace {
    space
        .map_distances(|d| f.eval(d))
        .unwrap_or_else(|e: MetricError| panic!("metrically convex image failed validation: {e}"))
}

/// A sampled witness that a function is not metrically convex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConvexityViolation {
    NonZeroAtZero(Rational),
    Decreasing { x: Rational, y: Rational },
    Superadditive { b: Rational, c: Rational },
}

/// Probes `f(0) = 0`, monotonicity on the sorted sample points, and
/// `f(b + c) <= f(b) + f(c)` on every sampled pair.
pub fn subadditivity_check(
    f: &MetricTransform,
    samples: &[(Rational, Rational)],
) -> Result<(), ConvexityViolation> {
    subadditivity_check_fn(|x| f.eval(x), samples)
}

/// [`subadditivity_check`] for an arbitrary function.
pub fn subadditivity_check_fn(
    f: impl Fn(&Rational) -> Rational,
    samples: &[(Rational, Rational)],
) -> Result<(), ConvexityViolation> {
    let at_zero = f(&Rational::zero());
    if !at_zero.is_zero() {
        return Err(ConvexityViolation::NonZeroAtZero(at_zero));
    }
    let mut points: Vec<Rational> = samples
        .iter()
        .flat_map(|(b, c)| [b.clone(), c.clone(), b + c])
        .collect();
    points.sort();
    points.dedup();
    let values: Vec<Rational> = points.iter().map(&f).collect();
    for k in 1..points.len() {
        if values[k] < values[k - 1] {
            return Err(ConvexityViolation::Decreasing {
                x: points[k - 1].clone(),
                y: points[k].clone(),
            });
        }
    }
    for (b, c) in samples {
        if f(&(b + c)) > f(b) + f(c) {
            return Err(ConvexityViolation::Superadditive { b: b.clone(), c: c.clone() });
        }
    }
    Ok(())
}

/// Half the largest `|x - f(x)|` over the distances attained in `X`. The
/// identity correspondence between `X` and `f(X)` has exactly this
/// distortion bound, so the value bounds `d_GH(X, f(X))` from above.
pub fn image_gh_bound(space: &FiniteMetricSpace, f: &MetricTransform) -> Result<Rational, TransformError> {
    if space.len() < 2 {
        return Err(TransformError::TooFewPoints { required: 2, actual: space.len() });
    }
    let worst = space
        .pair_distances()
        .map(|d| (d - f.eval(d)).abs())
        .max()
        .expect("at least one pair");
    Ok(half(&worst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::space::{scale, simplex};

    fn tri(ab: Rational, bc: Rational, ac: Rational) -> FiniteMetricSpace {
        let z = Rational::zero;
        FiniteMetricSpace::from_matrix(vec![
            vec![z(), ab.clone(), ac.clone()],
            vec![ab, z(), bc.clone()],
            vec![ac, bc, z()],
        ])
        .unwrap()
    }

    #[test]
    fn ladder_values() {
        let l = MetricTransform::ladder(int(1)).unwrap();
        assert_eq!(l.eval(&rat(1, 2)), int(1));
        assert_eq!(l.eval(&int(1)), int(1));
        assert_eq!(l.eval(&rat(51, 50)), int(2));
        assert_eq!(l.eval(&int(0)), int(0));
        let l = MetricTransform::ladder(rat(3, 4)).unwrap();
        assert_eq!(l.eval(&rat(3, 2)), rat(3, 2));
        assert_eq!(l.eval(&rat(7, 4)), rat(9, 4));
    }

    #[test]
    fn zero_is_fixed() {
        let all = [
            MetricTransform::ladder(rat(1, 3)).unwrap(),
            MetricTransform::shift(int(5)).unwrap(),
            MetricTransform::scale(int(2)).unwrap(),
            "ladder:1,shift:2".parse().unwrap(),
        ];
        for f in &all {
            assert_eq!(f.eval(&int(0)), int(0), "{f}");
        }
    }

    #[test]
    fn composition_order() {
        let f: MetricTransform = "ladder:1,shift:2".parse().unwrap();
        assert_eq!(f.eval(&rat(3, 2)), int(4));
        assert_eq!(
            f,
            MetricTransform::compose(
                MetricTransform::shift(int(2)).unwrap(),
                MetricTransform::ladder(int(1)).unwrap()
            )
        );
        assert_eq!(f.to_string(), "ladder:1,shift:2");
        let g: MetricTransform = "scale:1/2, ladder:0.25 ,shift:3".parse().unwrap();
        assert_eq!(g.to_string(), "scale:1/2,ladder:1/4,shift:3");
        assert_eq!(g.eval(&int(1)), rat(7, 2));
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "ladder", "ladder:x", "round:1", "ladder:1,", "ladder:0", "shift:-1"] {
            assert!(bad.parse::<MetricTransform>().is_err(), "{bad}");
        }
        assert_eq!(
            "scale:0".parse::<MetricTransform>().unwrap_err(),
            TransformError::NonPositiveParameter
        );
    }

    #[test]
    fn apply_examples() {
        let x = tri(rat(1, 2), rat(3, 2), rat(7, 4));
        let l = MetricTransform::ladder(int(1)).unwrap();
        let y = apply(&l, &x);
        assert_eq!(y, tri(int(1), int(2), int(2)));
        let c = rat(2, 3);
        let shifted = apply(&MetricTransform::shift(c.clone()).unwrap(), &simplex(3).unwrap());
        assert!(shifted.pair_distances().all(|d| *d == int(1) + &c));
        let s = MetricTransform::scale(rat(5, 2)).unwrap();
        assert_eq!(apply(&s, &x), scale(&x, &rat(5, 2)).unwrap());
    }

    #[test]
    fn gh_bound_examples() {
        let x = tri(rat(1, 2), rat(3, 2), rat(7, 4));
        let l = MetricTransform::ladder(int(1)).unwrap();
        assert_eq!(image_gh_bound(&x, &l).unwrap(), rat(1, 4));
        let shift = MetricTransform::shift(rat(3, 5)).unwrap();
        assert_eq!(image_gh_bound(&x, &shift).unwrap(), rat(3, 10));
        let id = MetricTransform::scale(int(1)).unwrap();
        assert_eq!(image_gh_bound(&x, &id).unwrap(), int(0));
        assert_eq!(
            image_gh_bound(&simplex(1).unwrap(), &id).unwrap_err(),
            TransformError::TooFewPoints { required: 2, actual: 1 }
        );
    }

    #[test]
    fn square_is_caught() {
        let samples = [(int(1), int(1))];
        assert_eq!(
            subadditivity_check_fn(|x| x * x, &samples).unwrap_err(),
            ConvexityViolation::Superadditive { b: int(1), c: int(1) }
        );
        assert!(matches!(
            subadditivity_check_fn(|x| x + int(1), &samples),
            Err(ConvexityViolation::NonZeroAtZero(_))
        ));
        assert!(matches!(
            subadditivity_check_fn(|x| if x.is_zero() { int(0) } else { int(10) - x }, &samples),
            Err(ConvexityViolation::Decreasing { .. })
        ));
        let l = MetricTransform::ladder(int(1)).unwrap();
        assert!(subadditivity_check(&l, &[(rat(1, 2), rat(1, 2)), (rat(3, 10), int(2))]).is_ok());
    }
}
