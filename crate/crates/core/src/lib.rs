//! Exact tooling for finite metric spaces under the Gromov-Hausdorff
//! distance: invariants, exact GH distance of small spaces, shortest-path
//! metrics of weighted graphs, metrically convex transforms, and a
//! constructive perturbation of any finite space into a nearby generic one
//! with a checkable certificate.
//!
//! All arithmetic is exact ([`Rational`]); nothing here uses floating point.

#![forbid(unsafe_code)]

pub mod correspondence;
pub mod document;
pub mod genericity;
pub mod graph;
pub mod rational;
mod search;
pub mod space;
pub mod transform;

pub use correspondence::{
    count_correspondences, distortion, for_each_correspondence, functional_distortion, gh_exact,
    gh_to_point, gh_upper, hausdorff, Correspondence, CorrespondenceError, GHResult, DEFAULT_GH_BUDGET,
};
pub use genericity::{
    certify, classify, new_point_distance, perturb, ClassTag, DistanceClass, GenericityCertificate,
    GenericityError, PerturbationResult,
};
pub use graph::{
    canonical_projection, closed_form_check, preserves_weights, subdivide, GraphError, PointOrder,
    SubdivisionGraph, Walk, WeightedGraph,
};
pub use rational::{format_rational, parse_rational, Rational};
pub use space::{
    diam, isometry_defect, report, scale, separation, simplex, triangle_slack, validate,
    FiniteMetricSpace, InvariantReport, MetricError, DEFAULT_PERMUTATION_BUDGET,
};
pub use transform::{apply, image_gh_bound, subadditivity_check, MetricTransform, TransformError};
