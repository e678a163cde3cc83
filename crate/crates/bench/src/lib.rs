//! Shared fixtures for the benchmarks.

use qfock_core::model::{build_model, Mode, ModelConfig};
use qfock_core::{build_space, Model, Rational, TruncatedFock};

pub fn demo_exact() -> Model<Rational> {
    build_model(&ModelConfig::demo()).expect("demo model")
}

pub fn demo_float() -> Model<f64> {
    build_model(&ModelConfig::demo().with_mode(Mode::Float)).expect("demo model")
}

pub fn demo_space(n: usize) -> TruncatedFock<Rational> {
    build_space(&demo_exact(), n).expect("demo space")
}
