//! Optimal gapped alignment of random strings, viewed through the empirical
//! distribution of aligned letter pairs.
//!
//! The crate is organized bottom-up:
//!
//! * [`scalar`]: the numeric trait all tables and dynamic programs are generic over.
//! * [`alphabet`], [`scoring`], [`sequence`], [`dist`]: symbols, scoring tables,
//!   letter strings and distribution vectors.
//! * [`alignment`], [`engine`]: alignments, optimal scores, enumeration and
//!   uniform sampling of optimal alignments.
//! * [`geometry`]: convex hulls in vertex form, projections, Hausdorff distance
//!   and support-direction queries.
//! * [`lattice`]: the same alignment problem as a last-passage path on a grid
//!   with diagonal edges.
//! * [`experiments`], [`report`]: seeded Monte Carlo experiments and their
//!   CSV/JSON output.

pub mod alignment;
pub mod alphabet;
pub mod dist;
pub mod engine;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod lattice;
pub mod report;
pub mod scalar;
pub mod scoring;
pub mod sequence;

pub use alignment::{Alignment, Step};
pub use alphabet::{Alphabet, Symbol};
pub use dist::DistVector;
pub use engine::{enumerate_optimal, optimal_score, sample_optimal, OptimalAlignments, OptimalSet};
pub use error::{Error, Result};
pub use geometry::{hausdorff, hull_vertices, project_onto, support_argmax, HalfSpace, PointCloud, VPolytope};
pub use scalar::Scalar;
pub use scoring::ScoringFunction;
pub use sequence::{generate_iid_string, LetterDistribution, LetterString};

/// Exact rational scalar.
pub type Rational = num_rational::Rational64;

pub type Scoring = ScoringFunction<f64>;
pub type ScoringF32 = ScoringFunction<f32>;
pub type ScoringExact = ScoringFunction<Rational>;
pub type ScoringInt = ScoringFunction<i64>;
pub type OptimalSetF64 = OptimalSet<f64>;
pub type OptimalSetExact = OptimalSet<Rational>;
