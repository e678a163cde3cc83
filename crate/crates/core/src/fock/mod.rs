//! The truncated deformed Fock space and its operators.

pub mod inner;
pub mod linalg;
pub mod operator;
pub mod ops;
pub mod space;
pub mod vector;
pub mod word;

pub use inner::{inner_t, inner_words, InnerVariant};
pub use operator::FockOperator;
pub use ops::{
    annihilate, create, field, fields, free_annihilate, op_matrix, t_adjoint, t_adjoint_apply, t_norm, vacuum_expectation, wick, wick_word,
    OpKind, WickTable,
};
pub use space::{build_space, build_space_with_budget, GramBlock, TruncatedFock, DEFAULT_DIM_BUDGET};
pub use vector::FockVector;
pub use word::{LevelIndex, Word};
