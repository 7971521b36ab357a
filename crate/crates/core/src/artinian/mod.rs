//! Linear algebra in the truncations `M/m^N M` of a cyclic module `M = A/J`.

pub mod ctx;
pub mod engine;
pub mod stabilize;
pub mod subspace;
pub mod table;
pub mod truncated;

pub use ctx::{LocalRingCtx, ModulePresentation, TruncationPolicy};
pub use engine::{Engine, Ideal};
pub use stabilize::{stabilize, Certified, Stabilized};
pub use subspace::{quotient_dim, QuotientCoords, Subspace};
pub use table::MonomialTable;
pub use truncated::{PreparedPoly, TruncatedModule};
