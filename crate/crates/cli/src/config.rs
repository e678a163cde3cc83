//! The `qfock/config-v1` input format.

use std::path::Path;

use anyhow::{bail, Context, Result};
use qfock_core::{parse_rational, Block, Mode, ModelConfig, Rational, SuiteConfig};
use serde::{Deserialize, Serialize};

pub const CONFIG_SCHEMA: &str = "qfock/config-v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeSpec {
    Exact,
    Float,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum BlockSpec {
    Fixed {
        component: String,
    },
    Pair {
        component: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mu: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lambda: Option<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSpec {
    pub truncation: usize,
    pub terms: usize,
    pub enumeration_cap: usize,
    pub oracle_cap: usize,
    pub pair_samples: usize,
    pub haagerup_samples: usize,
    pub seed: u64,
}

impl Default for RunSpec {
    fn default() -> Self {
        let s = SuiteConfig::default();
        RunSpec {
            truncation: s.truncation,
            terms: s.terms,
            enumeration_cap: s.enumeration_cap,
            oracle_cap: s.oracle_cap,
            pair_samples: s.pair_samples,
            haagerup_samples: s.haagerup_samples,
            seed: s.seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub schema: String,
    #[serde(default = "default_mode")]
    pub mode: ModeSpec,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    pub components: Vec<String>,
    pub blocks: Vec<BlockSpec>,
    /// Symmetric matrix over components, entries as `p/q` or decimal strings.
    pub q: Vec<Vec<String>>,
    /// Overrides the block spectrum for `classify`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvalues: Option<Vec<String>>,
    #[serde(default)]
    pub run: RunSpec,
}

fn default_mode() -> ModeSpec {
    ModeSpec::Exact
}

fn default_tolerance() -> f64 {
    ModelConfig::DEFAULT_TOLERANCE
}

fn rational(field: &str, text: &str) -> Result<Rational> {
    parse_rational(text).with_context(|| format!("{field}: `{text}` is not a rational number"))
}

/// Parsed configuration ready for the engine.
#[derive(Clone, Debug)]
pub struct Config {
    pub file: ConfigFile,
    pub model: ModelConfig,
    pub run: SuiteConfig,
    pub eigenvalues: Option<Vec<Rational>>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let file: ConfigFile = serde_json::from_str(&text).with_context(|| format!("cannot parse {}", path.display()))?;
        Self::from_file(file)
    }

    pub fn from_file(file: ConfigFile) -> Result<Self> {
        if file.schema != CONFIG_SCHEMA {
            bail!("schema `{}` is not `{CONFIG_SCHEMA}`", file.schema);
        }
        let blocks = file
            .blocks
            .iter()
            .enumerate()
            .map(|(i, b)| match b {
                BlockSpec::Fixed { component } => Ok(Block::fixed(component)),
                BlockSpec::Pair { component, mu, lambda } => match (mu, lambda) {
                    (Some(m), None) => Ok(Block::pair(component, rational(&format!("blocks[{i}].mu"), m)?)),
                    (None, Some(l)) => Ok(Block::pair_lambda(component, rational(&format!("blocks[{i}].lambda"), l)?)),
                    _ => bail!("blocks[{i}]: a pair block needs exactly one of `mu` and `lambda`"),
                },
            })
            .collect::<Result<Vec<_>>>()?;
        let q = file
            .q
            .iter()
            .enumerate()
            .map(|(i, row)| row.iter().enumerate().map(|(j, x)| rational(&format!("q[{i}][{j}]"), x)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        let names: Vec<&str> = file.components.iter().map(String::as_str).collect();
        let mut model = ModelConfig::new(&names, blocks, q);
        model.mode = match file.mode {
            ModeSpec::Exact => Mode::Exact,
            ModeSpec::Float => Mode::Float,
        };
        model.tolerance = file.tolerance;
        let eigenvalues = file
            .eigenvalues
            .as_ref()
            .map(|v| v.iter().enumerate().map(|(i, x)| rational(&format!("eigenvalues[{i}]"), x)).collect())
            .transpose()?;
        let r = &file.run;
        if 2 * r.terms > r.truncation + 1 {
            bail!("run.terms = {} needs truncation at least {}", r.terms, 2 * r.terms - 1);
        }
        let run = SuiteConfig {
            truncation: r.truncation,
            terms: r.terms,
            enumeration_cap: r.enumeration_cap,
            oracle_cap: r.oracle_cap,
            pair_samples: r.pair_samples,
            haagerup_samples: r.haagerup_samples,
            seed: r.seed,
        };
        Ok(Config { file, model, run, eigenvalues })
    }
}
