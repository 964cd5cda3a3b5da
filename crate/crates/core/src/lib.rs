//! Discrete differential geometry on finite weighted point sets.

pub mod bounds;
pub mod calculus;
pub mod error;
pub mod generators;
pub mod identities;
pub mod geometry;
pub mod learning;
pub mod linalg;
pub mod random_walk;
pub mod spectral;

pub use bounds::{isoperimetric_constant, verify_bounds, BoundCheck, BoundsReport, Isoperimetric};
pub use calculus::{module_actions, pointwise_product, Basis, GraphSpace, OneForm, Partition, VertexFunction};
pub use error::{Error, Result};
pub use geometry::{CurvatureField, Embedding, SmoothingMethod};
pub use learning::{ClusterMode, ClusterResult};
pub use random_walk::{commute_distance, commute_distance_spectral, walk_operator, WalkOperator};
pub use spectral::{eigendecompose, laplacian_variant, FilterKind, FilterSpec, LaplacianVariant, Spectrum};
