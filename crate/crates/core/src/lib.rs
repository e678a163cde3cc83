//! Numerical toolkit for mixed q-Gaussian algebras built from a real covariance.

pub mod bounds;
pub mod conjugate;
pub mod error;
pub mod fock;
pub mod model;
pub mod oracle;
pub mod partitions;
pub mod report;
pub mod scalar;
pub mod suite;

pub use error::{Error, Result};
pub use bounds::{bound_table, verify_bounds, BoundChecks, BoundTable};
pub use conjugate::{ConjugateSeries, Polynomial, TensorSum};
pub use fock::{build_space, FockOperator, FockVector, TruncatedFock, Word};
pub use oracle::{OracleReport, SeriesSign};
pub use model::{build_model, classify_type, Block, Mode, Model, ModelConfig, TypeLabel};
pub use report::{CheckResult, Status, Totals};
pub use suite::{run_suite, Suite, SuiteConfig};
pub use scalar::{parse_rational, Rational, Scalar};
