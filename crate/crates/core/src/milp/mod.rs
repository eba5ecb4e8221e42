//! The brown-energy-minimizing MILP: model construction, MPS emission,
//! solution parsing and plan extraction.
//!
//! Solver integration is process-and-file based: callers emit MPS text,
//! run any MILP solver that reads it, and feed the solution file back in.
//! The formulation is documented in `FORMULATION.md` at the repository root.

mod build;
mod extract;
mod model;
mod mps;
mod solution;

pub use build::{build_model, BuildError};
pub use extract::{extract_plan, ExtractError};
pub use model::{Constraint, Layout, MilpModel, ModelError, Sense, VarId, VarKind, Variable};
pub use mps::{emit_mps, MpsFile, NameKind, NameMapEntry};
pub use solution::{parse_solution, SolutionParseError, SolutionValues, SolveStatus};
