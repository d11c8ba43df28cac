//! Perturbing a finite metric space into a nearby generic one.
//!
//! For `#X >= 2` the construction is:
//!
//! 1. `Z' = l_eps(X)`, the eps-ladder image, with `eps = 4 delta / 3`;
//! 2. subdivide every pair `z1 < z2` (input order) with a new point at
//!    distance `eps/4` from `z2` (right) and `d(z1,z2) - eps/4` from `z1`
//!    (left);
//! 3. `Z` is the shortest-path metric of that graph;
//! 4. `U = Z + 2c`.
//!
//! Every distance of `Z` is a whole multiple of `eps/4`, so steps 2 and 3
//! run on integer weights in units of `eps/4` and are converted back only
//! at the end. A one-point `X` is handled by an explicit three-point space.

use crate::correspondence::{distortion, Correspondence};
use crate::graph::{canonical_projection, subdivide, GraphError, PointOrder, SubdivisionGraph};
use crate::rational::{half, int, is_positive, Rational};
use crate::space::{
    isometry_defect, scale, separation, triangle_slack, FiniteMetricSpace, MetricError,
};
use crate::transform::{apply, MetricTransform};
use num::{BigInt, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenericityError {
    #[error("delta and c must both be positive")]
    NonPositiveParameter,
    #[error("perturbation does not stem from this space: {0}")]
    ProvenanceMismatch(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("points must be distinct")]
    SamePoint,
    #[error("the distance classes are only defined for subdivided spaces (#X >= 2)")]
    NotSubdivided,
    #[error("pair ({p},{q}) at {units} x eps/4 matches no distance class")]
    Unclassifiable { p: String, q: String, units: String },
    #[error("`{0}` is not covered by the closed forms for this pair")]
    WrongRoles(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Label prefix for the two extra points of the one-point case.
const AUX_PREFIX: &str = "aux";

#[derive(Debug, Clone, PartialEq, Eq)]
struct Subdivided {
    /// `Z' = l_eps(X)`.
    ladder_image: FiniteMetricSpace,
    /// The subdivision of `Z'` in units of `eps/4`.
    graph: SubdivisionGraph,
    /// `Z` in units of `eps/4`.
    units: FiniteMetricSpace,
    /// `Z` itself.
    space: FiniteMetricSpace,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerturbationResult {
    space: FiniteMetricSpace,
    epsilon: Rational,
    delta: Rational,
    c: Rational,
    old_points: Vec<String>,
    new_points: BTreeMap<String, (String, String)>,
    subdivided: Option<Subdivided>,
}

impl PerturbationResult {
    /// The generic space `U`.
    pub fn space(&self) -> &FiniteMetricSpace {
        &self.space
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    /// Points of `U` that are images of points of `X`, in the order of `X`.
    pub fn old_points(&self) -> &[String] {
        &self.old_points
    }

    /// Added points with their `(left, right)` endpoints.
    pub fn new_points(&self) -> &BTreeMap<String, (String, String)> {
        &self.new_points
    }

    /// `Z' = l_eps(X)`; absent for a one-point `X`.
    pub fn ladder_image(&self) -> Option<&FiniteMetricSpace> {
        self.subdivided.as_ref().map(|s| &s.ladder_image)
    }

    /// `Z = U - 2c`; absent for a one-point `X`.
    pub fn unshifted(&self) -> Option<&FiniteMetricSpace> {
        self.subdivided.as_ref().map(|s| &s.space)
    }

    /// The subdivision graph in units of `eps/4`; absent for a one-point `X`.
    pub fn subdivision(&self) -> Option<&SubdivisionGraph> {
        self.subdivided.as_ref().map(|s| &s.graph)
    }

    fn quarter(&self) -> Rational {
        &self.epsilon / int(4)
    }

    fn index(&self, label: &str) -> Result<usize, GenericityError> {
        self.space
            .index_of(label)
            .ok_or_else(|| GenericityError::UnknownPoint(label.to_string()))
    }
}

/// Builds `U` within GH distance `delta + c` of `X` with
/// `s(U) >= delta/3 + 2c`, `t(U) >= 2c` and `e(U) >= delta/3`.
pub fn perturb(
    space: &FiniteMetricSpace,
    delta: &Rational,
    c: &Rational,
) -> Result<PerturbationResult, GenericityError> {
    if !is_positive(delta) || !is_positive(c) {
        return Err(GenericityError::NonPositiveParameter);
    }
    let epsilon = delta * int(4) / int(3);
    let two_c = c * int(2);

    if space.len() == 1 {
        let third = delta / int(3);
        let d12 = &third + &two_c;
        let d23 = &third * int(2) + &two_c;
        let d13 = delta + &two_c;
        let z = Rational::zero;
        let labels = vec![
            space.label(0).to_string(),
            format!("{AUX_PREFIX}(1)"),
            format!("{AUX_PREFIX}(2)"),
        ];
        let u = FiniteMetricSpace::new(
            labels,
            vec![
                vec![z(), d12.clone(), d13.clone()],
                vec![d12, z(), d23.clone()],
                vec![d13, d23, z()],
            ],
        )?;
        return Ok(PerturbationResult {
            space: u,
            epsilon,
            delta: delta.clone(),
            c: c.clone(),
            old_points: vec![space.label(0).to_string()],
            new_points: BTreeMap::new(),
            subdivided: None,
        });
    }

    let quarter = &epsilon / int(4);
    let ladder_image = apply(&MetricTransform::ladder(epsilon.clone()).expect("epsilon > 0"), space);
    let ladder_units = scale(&ladder_image, &(int(1) / &quarter))?;
    let graph = subdivide(&ladder_units, |_| int(1), &PointOrder::index_order(space.len()))?;
    let units = canonical_projection(graph.graph())?;
    let z = scale(&units, &quarter)?;
    let u = apply(&MetricTransform::shift(two_c).expect("c > 0"), &z);

    let new_points = graph
        .added_vertices()
        .map(|v| {
            let (l, r) = graph.roles(v).expect("added vertex has roles");
            (
                graph.graph().vertex(v).to_string(),
                (space.label(l).to_string(), space.label(r).to_string()),
            )
        })
        .collect();
    Ok(PerturbationResult {
        space: u,
        epsilon,
        delta: delta.clone(),
        c: c.clone(),
        old_points: space.labels().to_vec(),
        new_points,
        subdivided: Some(Subdivided { ladder_image, graph, units, space: z }),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericityCertificate {
    #[serde(with = "crate::rational::serde_str")]
    pub delta: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub c: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub epsilon: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub s: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub t: Rational,
    #[serde(with = "crate::rational::serde_str::option")]
    pub e: Option<Rational>,
    pub e_exact: bool,
    #[serde(with = "crate::rational::serde_str")]
    pub gh_upper: Rational,
    pub bounds_met: bool,
}

/// The correspondence between `X` (rows) and `U` (columns) used to bound
/// `d_GH(X, U)`: old points go to their preimage, new points to the
/// preimage of their right endpoint, auxiliary points to the single point.
pub fn witness_correspondence(
    space: &FiniteMetricSpace,
    result: &PerturbationResult,
) -> Result<Correspondence, GenericityError> {
    let mismatch = |why: &str| GenericityError::ProvenanceMismatch(why.to_string());
    if result.old_points.len() != space.len() {
        return Err(mismatch("old point count differs from #X"));
    }
    let mut covered = vec![false; space.len()];
    for label in &result.old_points {
        let i = space
            .index_of(label)
            .ok_or_else(|| mismatch(&format!("old point `{label}` is not in X")))?;
        if std::mem::replace(&mut covered[i], true) {
            return Err(mismatch(&format!("old point `{label}` is listed twice")));
        }
    }
    let u = &result.space;
    let mut pairs = Vec::with_capacity(u.len());
    for (col, label) in u.labels().iter().enumerate() {
        let preimage = if result.old_points.contains(label) {
            label
        } else if let Some((_, right)) = result.new_points.get(label) {
            right
        } else if space.len() == 1 {
            space.label(0)
        } else {
            return Err(mismatch(&format!("point `{label}` of U has no provenance")));
        };
        let row = space
            .index_of(preimage)
            .ok_or_else(|| mismatch(&format!("`{preimage}` is not in X")))?;
        pairs.push((row, col));
    }
    Correspondence::from_pairs(space.len(), u.len(), &pairs)
        .map_err(|e| GenericityError::ProvenanceMismatch(e.to_string()))
}

/// Computes `s(U)`, `t(U)`, `e(U)` (if `#U <= budget`) and the witness GH
/// bound, and checks them against the guaranteed bounds.
pub fn certify(
    space: &FiniteMetricSpace,
    result: &PerturbationResult,
    budget: usize,
) -> Result<GenericityCertificate, GenericityError> {
    let witness = witness_correspondence(space, result)?;
    let u = &result.space;
    let gh_upper = half(&distortion(&witness, space, u).expect("witness has matching dimensions"));
    let s = separation(u)?;
    let t = triangle_slack(u)?;
    let e = match isometry_defect(u, budget) {
        Ok(d) => Some(d.value),
        Err(MetricError::SearchBudgetExceeded { .. }) => None,
        Err(other) => return Err(other.into()),
    };
    let (delta, c) = (&result.delta, &result.c);
    let third = delta / int(3);
    let two_c = c * int(2);
    let bounds_met = s >= &third + &two_c
        && t >= two_c
        && e.as_ref().map_or(true, |e| *e >= third)
        && gh_upper <= delta + c;
    Ok(GenericityCertificate {
        delta: delta.clone(),
        c: c.clone(),
        epsilon: result.epsilon.clone(),
        s,
        t,
        e_exact: e.is_some(),
        e,
        gh_upper,
        bounds_met,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassTag {
    /// 1. `eps/4`: a new point and its right endpoint.
    NewRight,
    /// 2. `k eps`, `k >= 1`: two old points.
    OldOld,
    /// 3. `k eps - eps/4`, `k >= 1`: a new point and its left endpoint.
    NewLeft,
    /// 4. `k eps + eps/4`, `k >= 1`: a new point and a far point reached
    /// through its right endpoint.
    NewFarRight,
    /// 5. `k eps - eps/4`, `k >= 2`: a new point and a far point reached
    /// through its left endpoint.
    NewFarLeft,
    /// 6. `k eps`, `k >= 1`: two new points.
    NewNewWhole,
    /// 7. `k eps - eps/2`, `k >= 1`: two new points.
    NewNewHalf,
}

impl ClassTag {
    /// Position in the 1..=7 listing.
    pub fn number(self) -> u8 {
        self as u8 + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DistanceClass {
    pub tag: ClassTag,
    /// Multiplier of `eps`; 0 for [`ClassTag::NewRight`].
    pub k: u64,
}

impl DistanceClass {
    /// The distance in units of `eps/4` that `(tag, k)` stands for.
    pub fn quarter_units(&self) -> u64 {
        let k4 = 4 * self.k;
        match self.tag {
            ClassTag::NewRight => 1,
            ClassTag::OldOld | ClassTag::NewNewWhole => k4,
            ClassTag::NewLeft | ClassTag::NewFarLeft => k4 - 1,
            ClassTag::NewFarRight => k4 + 1,
            ClassTag::NewNewHalf => k4 - 2,
        }
    }

    /// The distance in `Z` that `(tag, k)` stands for.
    pub fn value(&self, epsilon: &Rational) -> Rational {
        Rational::from_integer(BigInt::from(self.quarter_units())) * epsilon / int(4)
    }

    fn from_units(tag: ClassTag, units: u64) -> Option<Self> {
        let (k, min_k) = match tag {
            ClassTag::NewRight => return (units == 1).then_some(Self { tag, k: 0 }),
            ClassTag::OldOld | ClassTag::NewNewWhole => (units % 4 == 0).then_some((units / 4, 1))?,
            ClassTag::NewLeft => (units % 4 == 3).then_some(((units + 1) / 4, 1))?,
            ClassTag::NewFarLeft => (units % 4 == 3).then_some(((units + 1) / 4, 2))?,
            ClassTag::NewFarRight => (units % 4 == 1).then_some(((units - 1) / 4, 1))?,
            ClassTag::NewNewHalf => (units % 4 == 2).then_some(((units + 2) / 4, 1))?,
        };
        (k >= min_k).then_some(Self { tag, k })
    }
}

/// Classifies the pair `{p, q}` of `Z` by the roles of its points and the
/// form of its distance.
pub fn classify(result: &PerturbationResult, p: &str, q: &str) -> Result<DistanceClass, GenericityError> {
    let sub = result.subdivided.as_ref().ok_or(GenericityError::NotSubdivided)?;
    let (pi, qi) = (result.index(p)?, result.index(q)?);
    if pi == qi {
        return Err(GenericityError::SamePoint);
    }
    let units = sub.units.distance(pi, qi);
    let unclassifiable = || GenericityError::Unclassifiable {
        p: p.to_string(),
        q: q.to_string(),
        units: units.to_string(),
    };
    let m = units
        .is_integer()
        .then(|| units.to_integer().to_u64())
        .flatten()
        .ok_or_else(unclassifiable)?;
    let graph = &sub.graph;
    let tag = match (graph.roles(pi), graph.roles(qi)) {
        (None, None) => ClassTag::OldOld,
        (Some(_), Some(_)) if m % 4 == 0 => ClassTag::NewNewWhole,
        (Some(_), Some(_)) => ClassTag::NewNewHalf,
        (Some((left, right)), None) | (None, Some((left, right))) => {
            let old = if graph.is_old(pi) { pi } else { qi };
            if old == right {
                ClassTag::NewRight
            } else if old == left {
                ClassTag::NewLeft
            } else if m % 4 == 1 {
                ClassTag::NewFarRight
            } else {
                ClassTag::NewFarLeft
            }
        }
    };
    DistanceClass::from_units(tag, m).ok_or_else(unclassifiable)
}

/// Distance in `Z` from the new point `p` to `q` by the closed forms: the
/// shorter of the two walks through `p`'s endpoints when `q` is a far old
/// point, or the shortest of the four walks through both points' endpoints
/// when `q` is new.
pub fn new_point_distance(result: &PerturbationResult, p: &str, q: &str) -> Result<Rational, GenericityError> {
    let sub = result.subdivided.as_ref().ok_or(GenericityError::NotSubdivided)?;
    let (pi, qi) = (result.index(p)?, result.index(q)?);
    if pi == qi {
        return Err(GenericityError::SamePoint);
    }
    if sub.graph.is_old(pi) {
        return Err(GenericityError::WrongRoles(p.to_string()));
    }
    let units = sub
        .graph
        .closed_form_distance(pi, qi)
        .ok_or_else(|| GenericityError::WrongRoles(q.to_string()))?;
    Ok(units * result.quarter())
}
