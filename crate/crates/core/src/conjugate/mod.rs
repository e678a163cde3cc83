//! Dual variables, conjugate variables and difference quotients.

pub mod diff;
pub mod dual;
pub mod poly;
pub mod series;

pub use diff::{diff_quotient, diff_quotient_poly, diff_quotient_word, wick_polynomial, MonomialTensor, TensorSum};
pub use dual::{dual_apply, dual_matrix};
pub use poly::{Polynomial, WickExpander};
pub use series::{conj_word, conjugate_series, lipschitz_partial, right_mult_matrix, tensor_norm, ConjugateSeries, LIPSCHITZ_DOMAIN_CAP};
