//! Multipartite relative entropy of entanglement (MRE) for small qubit
//! registers, with the assistant upper bound and a mixed-state optimizer.
//!
//! Qubit 0 is the most significant bit of a basis index.

pub mod bounds;
pub mod catalog;
pub mod entropy;
pub mod error;
pub mod io;
pub mod mixed_opt;
pub mod qlinalg;
pub mod qstates;
pub mod rdm_multi;
pub mod rdm_pair;
pub mod report;
pub mod sweep;
pub mod verify;

pub use bounds::{assistant_air, check_assistant_bound, three_qubit_bound, BoundReport, SurrogateMode};
pub use entropy::{binary_entropy, relative_entropy, von_neumann_entropy, RelEntropy};
pub use error::{MreError, Result};
pub use mixed_opt::{mre_mixed, MixedMre, OptimizerConfig};
pub use qlinalg::{ComplexMatrix, C64};
pub use qstates::{DensityMatrix, StateVector};
pub use rdm_multi::{kn, mre_pure, relative_density_n, Convention, PureMre};
pub use rdm_pair::{mre_pair_pure, pair_basis};
