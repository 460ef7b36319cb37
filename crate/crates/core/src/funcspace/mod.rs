//! Block-symmetric functions on products of symmetric powers, with
//! product, pullback along block merges and transfer.

mod function;
pub mod poly;
mod sampled;
mod shape;
mod table;

pub use function::{lift_pii, lift_pij, power_function, BlockSymFunction, Ground, Payload};
pub use poly::{power_sum_expansion, Poly, DEFAULT_DEGREE_CAP};
pub use sampled::{Rule, Sampled};
pub use shape::{combinations, BlockShape, Label, MergeMap};
pub use table::{configurations, is_distinct, Config, FinitePoints, Table};
