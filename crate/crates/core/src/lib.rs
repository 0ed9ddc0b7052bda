//! Plane trees, the six bijections onto length-3 pattern avoidance classes,
//! Galton-Watson samplers (including the lazily grown size-biased tree), and
//! the Monte Carlo machinery used to compare finite-size permutation windows
//! against their infinite limits.

pub mod biject;
pub mod error;
pub mod experiment;
pub mod extnat;
pub mod law;
pub mod metric;
pub mod offspring;
pub mod pattern;
pub mod perm;
pub mod prefix;
pub mod rng;
pub mod sampler;
pub mod spine;
pub mod tree;
pub mod vertex;

pub use biject::{inverse_phi_321, leaf_stats, phi, LeafStats};
pub use error::{Error, Result};
pub use extnat::ExtendedNat;
pub use law::{Bucket, PrefixLaw};
pub use metric::{local_distance, TreeDistance};
pub use offspring::{geometric_half_pmf, size_biased_pmf, OffspringDistribution};
pub use pattern::{catalan, contains, enumerate_avoiders, ltr_maxima_indices, Pattern};
pub use perm::Permutation;
pub use rng::{SeededRng, RNG_ALGORITHM};
pub use sampler::{enumerate_trees, sample_gw, sample_uniform_tree, GwDraw, DEFAULT_GW_CAP};
pub use spine::{SpineStep, SpineTree};
pub use tree::OrderedTree;
pub use vertex::{lex_compare, Vertex};
