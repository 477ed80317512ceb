//! Free groups: reduced words, Stallings core graphs, the Delzant sufficient
//! condition for freeness, and the random-tuple experiment.

pub mod delzant;
mod experiment;
pub mod stallings;
pub mod word;

pub use delzant::{delzant_condition, delzant_walk_bound_check, four_point_condition, gromov_product};
pub use experiment::{genericity_experiment, genericity_sweep, GenericityResult};
pub use stallings::{core_graph, core_graph_shuffled, is_free_basis, stallings_rank, CoreGraph};
pub use word::{ball_size, sphere_size, FreeGroup, FreeWord};
