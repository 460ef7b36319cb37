//! Convolution operators `Delta(A, f)`, their composition, the current
//! algebra map `tau`, the tensor action and the generation algorithm.

pub mod bruteforce;
mod generate;
mod operator;
mod schur;
mod tau;

pub use bruteforce::{compose_bruteforce, operator_matrix, SparseMatrix, State, StateSpace};
pub use generate::{express_in_generators, idempotent, Evaluator, Expression, GeneratorExpr, ITERATION_BUDGET};
pub use operator::{compose, compose_diagonal, ConvOperator};
pub use schur::{is_associative, schur_structure_constants, StructureConstants};
pub use tau::{apply_to_tensor, commutator, restrict_to_support, tau, tensor_matrix, uses_exactly, TensorState};
