pub mod bitset;
pub mod builders;
pub mod cut;
pub mod decomposition;
pub mod digraph;
pub mod distance;
mod dp;
pub mod error;
pub mod lcvp;
pub mod nbhd;
pub mod oracle;
pub mod par;
pub mod random;
pub mod sets;
pub mod representations;
pub mod sigma_rho;
mod text;

pub use bitset::{BitSet, VertexSet};
pub use cut::{cut_values, CutValues, Measure};
pub use builders::BuilderReport;
pub use decomposition::{decomposition_width, BranchDecomposition};
pub use dp::{DpStats, NodeStats};
pub use digraph::{Digraph, Direction, UndirectedGraph};
pub use error::{Error, Result};
pub use sets::FiniteOrCofinite;
pub use text::FORMAT_VERSION;
