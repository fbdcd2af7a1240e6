//! Kernelization for Signed Max Cut above its tight lower bound.
//!
//! Values of the bound are kept in quarter units so that all arithmetic is
//! exact: `4 pt(G) = 2m + n - t` for a graph with `t` components.

pub mod blocks;
pub mod decompose;
pub mod drivers;
pub mod error;
pub mod gen;
pub mod graph;
pub mod io;
pub mod mcwv;
pub mod oracle;
pub mod rules;
pub mod trace;

pub use blocks::{block_decomposition, Block, BlockDecomposition};
pub use error::*;
pub use graph::{Edge, Instance, Sign, SignedGraph};
pub use oracle::{Assignment, QuarterValue};
pub use trace::{GraphEdit, RuleId, RuleStep, RuleTrace};
