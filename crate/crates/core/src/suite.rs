//! Verification suites: each runs a family of identities and bounds on one truncated space
//! and returns its check results in a fixed order.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{bound_table, verify_bounds, BoundChecks};
use crate::conjugate::{
    conjugate_series, diff_quotient_poly, diff_quotient_word, dual_matrix, lipschitz_partial, wick_polynomial,
    MonomialTensor,
};
use crate::error::{Error, Result};
use crate::fock::{
    annihilate, create, field, fields, inner_words, vacuum_expectation, FockOperator, InnerVariant,
    TruncatedFock, WickTable, Word,
};
use crate::oracle::{check_dual, check_gram, pairing_oracle, OracleReport, SeriesSign, ORACLE_CAP};
use crate::partitions::DEFAULT_ENUMERATION_CAP;
use crate::report::CheckResult;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Fock,
    Dual,
    Conjugate,
    Lipschitz,
    Bounds,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [Suite::Fock, Suite::Dual, Suite::Conjugate, Suite::Lipschitz, Suite::Bounds];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Fock => "fock",
            Suite::Dual => "dual",
            Suite::Conjugate => "conjugate",
            Suite::Lipschitz => "lipschitz",
            Suite::Bounds => "bounds",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// Sizes and seeds shared by every suite.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    /// Truncation level `N`.
    pub truncation: usize,
    /// Conjugate series terms `M`.
    pub terms: usize,
    /// Largest partition vertex count for the Wick and difference-quotient expansions.
    pub enumeration_cap: usize,
    /// Largest level or word length handed to the brute-force oracles.
    pub oracle_cap: usize,
    /// Random word pairs per level for the inner-product variants.
    pub pair_samples: usize,
    pub haagerup_samples: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            truncation: 6,
            terms: 3,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            oracle_cap: ORACLE_CAP,
            pair_samples: 100,
            haagerup_samples: 50,
            seed: 0,
        }
    }
}

fn timed(name: &str, f: impl FnOnce() -> Result<Vec<CheckResult>>) -> Vec<CheckResult> {
    let t = Instant::now();
    match f() {
        Ok(mut v) => {
            let ms = t.elapsed().as_millis() as u64;
            for c in &mut v {
                if c.elapsed_ms == 0 {
                    c.elapsed_ms = ms;
                }
            }
            v
        }
        Err(e) => vec![CheckResult::failed(name, e.to_string())],
    }
}

fn op_identity<S: Scalar>(name: String, space: &TruncatedFock<S>, diff: &FockOperator<S>, upto: isize) -> CheckResult {
    let residual = diff.max_abs_upto(&space.index, upto);
    let exact = S::EXACT.then(|| diff.is_zero_upto(&space.index, upto));
    CheckResult::identity(name, exact, residual, space.model.tolerance).with_degrees(upto)
}

fn scalar_identity<S: Scalar>(name: String, space: &TruncatedFock<S>, diffs: impl IntoIterator<Item = S>) -> CheckResult {
    let mut worst = S::zero();
    for d in diffs {
        let d = d.abs();
        if d > worst {
            worst = d;
        }
    }
    let exact = S::EXACT.then(|| worst.is_zero());
    CheckResult::identity(name, exact, worst.to_f64(), space.model.tolerance)
}

fn oracle_check(name: String, rep: &OracleReport, tol: f64) -> CheckResult {
    let mut c = CheckResult::compare(name, rep.max_discrepancy, tol).with_detail(rep.inputs.clone());
    c.status = if rep.pass { crate::report::Status::Pass } else { crate::report::Status::Fail };
    c
}

fn tolerance<S: Scalar>(space: &TruncatedFock<S>) -> f64 {
    if S::EXACT {
        0.0
    } else {
        space.model.tolerance
    }
}

/// Runs `suite` on `space`; `All` runs every suite in declaration order.
pub fn run_suite<S: Scalar>(space: &TruncatedFock<S>, suite: Suite, cfg: &SuiteConfig) -> Vec<CheckResult> {
    match suite {
        Suite::All => Suite::EACH.iter().flat_map(|&s| run_suite(space, s, cfg)).collect(),
        Suite::Fock => fock_suite(space, cfg),
        Suite::Dual => dual_suite(space, cfg),
        Suite::Conjugate => conjugate_suite(space, cfg),
        Suite::Lipschitz => lipschitz_suite(space, cfg),
        Suite::Bounds => bounds_suite(space, cfg),
    }
}

pub fn fock_suite<S: Scalar>(space: &TruncatedFock<S>, cfg: &SuiteConfig) -> Vec<CheckResult> {
    let n = space.n;
    let d = space.d();
    let model = &space.model;
    let mut out = Vec::new();

    for level in 0..=n.min(cfg.oracle_cap) {
        let name = format!("fock.gram_oracle[n={level}]");
        out.extend(timed(&name.clone(), || {
            let rep = check_gram(space, level, cfg.oracle_cap)?;
            Ok(vec![oracle_check(name, &rep, tolerance(space))])
        }));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for level in 0..=n.min(4) {
        let name = format!("fock.inner_variants[n={level}]");
        let dim = space.index.dim(level);
        let pairs: Vec<(usize, usize)> =
            (0..cfg.pair_samples).map(|_| (rng.gen_range(0..dim), rng.gen_range(0..dim))).collect();
        out.extend(timed(&name.clone(), || {
            let mut diffs = Vec::new();
            for &(i, j) in &pairs {
                let (u, v) = (space.index.word_at(level, i), space.index.word_at(level, j));
                let g = space.gram_entry(space.index.index(&u), space.index.index(&v));
                for variant in InnerVariant::ALL {
                    diffs.push(inner_words(model, &u, &v, variant) - g.clone());
                }
            }
            Ok(vec![scalar_identity(name, space, diffs).with_detail(format!("{} word pairs", pairs.len()))])
        }));
    }

    for level in 0..=n {
        let name = format!("fock.positivity[n={level}]");
        out.extend(timed(&name.clone(), || {
            let min = space.min_eigenvalue(level);
            let ok = min > 0.0 && (!S::EXACT || space.pivots_positive(level));
            let mut c = CheckResult::identity(name, Some(ok), min, 0.0).with_detail("minimum Gram eigenvalue");
            c.bound = 0.0;
            Ok(vec![c])
        }));
    }

    for a in 0..d {
        let name = format!("fock.adjointness[a={a}]");
        out.extend(timed(&name.clone(), || {
            let up = create(space, a)?;
            let down = annihilate(space, a)?;
            let diff = crate::fock::t_adjoint(space, &up).sub(&down);
            Ok(vec![op_identity(name, space, &diff, n as isize - 1)])
        }));
    }

    for a in 0..d {
        for b in 0..d {
            let name = format!("fock.commutation[a={a},b={b}]");
            out.extend(timed(&name.clone(), || {
                let (ca, cb) = (annihilate(space, a)?, create(space, b)?);
                let lhs = ca.compose(&cb);
                let rhs = cb.compose(&ca);
                let delta = if a == b { S::one() } else { S::zero() };
                let id = FockOperator::identity(space.total_dim(), n as isize);
                let diff = lhs.lincomb(&S::one(), &rhs, &-model.q_of(a, b).clone()).lincomb(&S::one(), &id, &-delta);
                Ok(vec![op_identity(name, space, &diff, n as isize - 1)])
            }));
        }
    }

    if n >= 2 {
        let name = "fock.covariance_moments".to_string();
        out.extend(timed(&name.clone(), || {
            let f = fields(space)?;
            let mut diffs = Vec::new();
            for a in 0..d {
                diffs.push(vacuum_expectation(space, &f[a]));
                for b in 0..d {
                    diffs.push(vacuum_expectation(space, &f[a].compose(&f[b])) - model.k[a][b].clone());
                }
            }
            Ok(vec![scalar_identity(name, space, diffs)])
        }));
    }

    if model.is_q_zero() {
        let name = "fock.q_zero_identity_gram".to_string();
        out.extend(timed(&name.clone(), || {
            let mut diffs = Vec::new();
            for level in 0..=n {
                for (i, row) in space.gram_dense(level).into_iter().enumerate() {
                    for (j, x) in row.into_iter().enumerate() {
                        diffs.push(if i == j { x - S::one() } else { x });
                    }
                }
            }
            Ok(vec![scalar_identity(name, space, diffs)])
        }));
    }
    out
}

fn vacuum_projection<S: Scalar>(space: &TruncatedFock<S>) -> FockOperator<S> {
    let mut cols = vec![Vec::new(); space.total_dim()];
    cols[0].push((0, S::one()));
    FockOperator::from_columns(cols, space.n as isize, vec![0])
}

pub fn dual_suite<S: Scalar>(space: &TruncatedFock<S>, cfg: &SuiteConfig) -> Vec<CheckResult> {
    let n = space.n;
    let d = space.d();
    let mut out = Vec::new();
    let proj = vacuum_projection(space);
    for a in 0..d {
        let name = format!("dual.commutator[a={a}]");
        out.extend(timed(&name.clone(), || {
            let dm = dual_matrix(space, a)?;
            let mut res = Vec::new();
            let vac = dm.apply(&space.vacuum());
            let exact = S::EXACT.then(|| vac.is_zero());
            res.push(CheckResult::identity(format!("dual.kills_vacuum[a={a}]"), exact, vac.max_abs(), space.model.tolerance));
            for b in 0..d {
                let fb = field(space, b)?;
                let comm = dm.compose(&fb).sub(&fb.compose(&dm));
                let diff = comm.lincomb(&S::one(), &proj, &-space.model.k[b][a].clone());
                res.push(op_identity(format!("{name}[b={b}]"), space, &diff, n as isize - 1));
            }
            Ok(res)
        }));
    }
    let top = n.min(cfg.oracle_cap);
    for a in 0..d {
        let name = format!("dual.oracle[a={a}]");
        out.extend(timed(&name.clone(), || {
            let rep = check_dual(space, a, top, cfg.oracle_cap)?;
            Ok(vec![oracle_check(name, &rep, tolerance(space)).with_degrees(top as isize)])
        }));
    }
    for a in 0..d {
        let name = format!("dual.even_parity[a={a}]");
        out.extend(timed(&name.clone(), || {
            let dm = dual_matrix(space, a)?;
            let diffs: Vec<S> = (0..=n)
                .step_by(2)
                .flat_map(|level| space.index.range(level))
                .map(|j| dm.entry(0, j))
                .collect();
            Ok(vec![scalar_identity(name, space, diffs)])
        }));
    }
    out
}

fn tensor_diff<S: Scalar>(a: &MonomialTensor<S>, b: &MonomialTensor<S>) -> Vec<S> {
    let mut out = Vec::new();
    for (k, x) in &a.terms {
        out.push(x.clone() - b.terms.get(k).cloned().unwrap_or_else(S::zero));
    }
    for (k, y) in &b.terms {
        if !a.terms.contains_key(k) {
            out.push(y.clone());
        }
    }
    out
}

pub fn conjugate_suite<S: Scalar>(space: &TruncatedFock<S>, cfg: &SuiteConfig) -> Vec<CheckResult> {
    let n = space.n;
    let d = space.d();
    let model = &space.model;
    let mut out = Vec::new();
    let degree = (2 * cfg.terms).saturating_sub(1);

    for a in 0..d {
        let name = format!("conjugate.pairing[a={a}]");
        out.extend(timed(&name.clone(), || {
            if degree > n {
                return Err(Error::TruncationTooSmall { needed: degree, have: n });
            }
            let rep = pairing_oracle(space, a, degree, SeriesSign::Alternating);
            Ok(vec![oracle_check(name, &rep, tolerance(space)).with_degrees(degree as isize)])
        }));
    }

    if !model.is_q_zero() && degree >= 3 && degree <= n {
        let name = "conjugate.sign_control".to_string();
        out.extend(timed(&name.clone(), || {
            let rejected = (0..d).any(|a| !pairing_oracle(space, a, degree, SeriesSign::Plain).pass);
            Ok(vec![CheckResult::identity(name, Some(rejected), 0.0, 0.0)
                .with_detail("the pairing must fail when the series is summed without alternating signs")])
        }));
    }

    let wick_len = n.min(4);
    let name = "conjugate.wick_polynomial".to_string();
    out.extend(timed(&name.clone(), || {
        let f = fields(space)?;
        let mut res = Vec::new();
        for len in 0..=wick_len {
            let mut worst = 0.0f64;
            let mut exact = true;
            let table = WickTable::build(space, len, n - len)?;
            for w in space.index.words(len) {
                let p = wick_polynomial(&w, model, cfg.enumeration_cap)?;
                let diff = p.eval_with(space, &f).sub(table.get(&w));
                let vd = (n - len) as isize;
                worst = worst.max(diff.max_abs_upto(&space.index, vd));
                exact &= diff.is_zero_upto(&space.index, vd);
            }
            res.push(
                CheckResult::identity(format!("{name}[n={len}]"), S::EXACT.then_some(exact), worst, model.tolerance)
                    .with_degrees((n - len) as isize),
            );
        }
        Ok(res)
    }));

    let dq_len = n.min(5);
    let name = "conjugate.difference_quotient".to_string();
    out.extend(timed(&name.clone(), || {
        let mut diffs = Vec::new();
        for len in 1..=dq_len {
            for w in space.index.words(len) {
                let poly = wick_polynomial(&w, model, cfg.enumeration_cap)?;
                for a in 0..d {
                    let formula = diff_quotient_word(model, &w, a)?.to_monomials(model);
                    let leibniz = diff_quotient_poly(model, &poly, a)?;
                    diffs.extend(tensor_diff(&formula, &leibniz));
                }
            }
        }
        Ok(vec![scalar_identity(name, space, diffs).with_detail(format!("words up to {dq_len} letters"))])
    }));

    if model.is_q_zero() {
        let name = "conjugate.q_zero_closed_form".to_string();
        out.extend(timed(&name.clone(), || {
            let terms = cfg.terms.min(n.div_ceil(2)).max(1);
            let mut diffs = Vec::new();
            for a in 0..d {
                let series = conjugate_series(space, a, terms)?;
                let mut expect = space.zero_vector();
                for b in 0..d {
                    expect.axpy(&model.k[b][a], &space.basis_vector(&Word::new(vec![b])));
                }
                diffs.extend(series.partial_sum.sub(&expect).coeffs);
                for t in &series.terms[1..] {
                    diffs.extend(t.coeffs.iter().cloned());
                }
            }
            Ok(vec![scalar_identity(name, space, diffs).with_detail("series stops at m = 1")])
        }));
    }
    out
}

pub fn lipschitz_suite<S: Scalar>(space: &TruncatedFock<S>, cfg: &SuiteConfig) -> Vec<CheckResult> {
    let d = space.d();
    let terms = cfg.terms.min(space.n.div_ceil(2));
    let mut out = Vec::new();
    let table = match bound_table(&space.model, space.n, terms.max(1)) {
        Ok(t) => t,
        Err(e) => return vec![CheckResult::failed("lipschitz", e.to_string())],
    };
    let slack = 1.0 + 1e-12;
    for a in 0..d {
        for b in 0..d {
            let name = format!("lipschitz.partial[b={b},a={a}]");
            out.extend(timed(&name.clone(), || {
                let values = lipschitz_partial(space, b, a, terms)?;
                let mut res = Vec::new();
                let first: f64 = (0..d).map(|g| space.model.k[g][a].to_f64() * space.model.k[g][b].to_f64()).sum();
                res.push(CheckResult::compare(format!("{name}[m=1,closed_form]"), (values[0] - first.abs()).abs(), 1e-10));
                for (m, v) in values.into_iter().enumerate() {
                    res.push(CheckResult::compare(format!("{name}[m={}]", m + 1), v, table.lipschitz_majorant_at(m + 1) * slack));
                }
                Ok(res)
            }));
        }
    }
    out
}

pub fn bounds_suite<S: Scalar>(space: &TruncatedFock<S>, cfg: &SuiteConfig) -> Vec<CheckResult> {
    let terms = cfg.terms.min(space.n.div_ceil(2));
    let table = match bound_table(&space.model, space.n, terms.max(1)) {
        Ok(t) => t,
        Err(e) => return vec![CheckResult::failed("bounds", e.to_string())],
    };
    let checks = BoundChecks {
        terms,
        haagerup_samples: cfg.haagerup_samples,
        haagerup_max_level: 4,
        wick_max_len: 4,
        lipschitz_terms: 0,
        seed: cfg.seed,
    };
    let mut out = verify_bounds(space, &table, &checks);
    out.extend(timed("bounds.xi_ratio", || {
        // The majorant series decreases ratio-wise from the onset on.
        let limit = 64;
        let Some(onset) = table.xi_ratio_onset(limit) else {
            return Ok(vec![CheckResult::failed("bounds.xi_ratio", format!("no onset below m = {limit}"))]);
        };
        let worst = (onset..=limit).map(|m| table.xi_ratio(m)).fold(0.0, f64::max);
        Ok(vec![CheckResult::identity("bounds.xi_ratio", Some(worst < 1.0), worst, 0.0).with_detail(format!("ratio < 1 from m = {onset}"))])
    }));
    out
}
