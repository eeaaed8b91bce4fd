//! Exact arithmetic over F_{p^m}, sparse linear algebra, and noncommutative
//! rewriting that turns finite presentations into finite-dimensional algebras.

pub mod algebra;
pub mod error;
pub mod expr;
pub mod field;
pub mod graded;
pub mod linalg;
pub mod presentation;
pub mod rewrite;
pub mod word;

pub use algebra::FinBasisAlgebra;
pub use error::{CoreError, Result};
pub use field::{Fe, Field, FieldSpec};
pub use linalg::{Accumulator, ColumnSolver, DenseMatrix, Echelon, SparseVec};
pub use presentation::{Generator, Presentation};
pub use rewrite::{Engine, RewriteSystem, Rule};
pub use word::{Letter, MonomialOrder, NcPoly, Word};
