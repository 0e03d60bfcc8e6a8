//! Exact genus-zero enumerative invariants of split bundles over products of
//! projective spaces, computed from hypergeometric Euler data and checked
//! against fixed-point localization.

pub mod coh;
pub mod equivariant;
pub mod error;
pub mod euler;
pub mod geometry;
pub mod laurent;
pub mod mirror;
pub mod oracle;
pub mod rational;
pub mod report;
pub mod series;
pub mod verify;

pub use coh::{coh_mul, integrate, CohClass, Shape};
pub use equivariant::{linking_values, tangent_b_d, EquivariantClass, WeightSample};
pub use error::{Error, Result};
pub use euler::{b_d, b_series, euler_normal, omega, EulerData, Route};
pub use geometry::{
    c1_x, pairing, parse_spec, validate, BundleKind, GeometrySpec, LineBundleSpec, ValidatedSpec,
};
pub use laurent::{invert_linear_factor, LaurentBlock, Mono};
pub use mirror::{
    compute, extract_invariants, integrand, one_pointed, solve_mirror_map, two_pointed,
    Computation, InvariantTable, MirrorMap,
};
pub use oracle::{oracle_consensus, oracle_invariant, schubert_lines_quintic, FixedGraph};
pub use rational::{format_rat, parse_rat, Rat};
pub use report::{parse_report, RunReport};
pub use series::{Degree, QSeries, ScalarSeries};
