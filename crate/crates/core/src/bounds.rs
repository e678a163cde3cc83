//! Closed-form constants and majorants, and the checks that compare computed norms against them.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conjugate::{conjugate_series, lipschitz_partial};
use crate::error::{Error, Result};
use crate::fock::{annihilate, free_annihilate, t_norm, FockVector, TruncatedFock, WickTable};
use crate::model::Model;
use crate::partitions::q_factorial;
use crate::report::CheckResult;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct BoundTable {
    pub d: usize,
    pub q_max: f64,
    /// `max(1, max ||conj(e_g)||_U)`.
    pub b: f64,
    /// Bound on `||l(e_g)||`.
    pub c: f64,
    /// Bound on `||W(e_g)||`.
    pub a_wick: f64,
    /// Lower end of the `w(q)` enclosure.
    pub w_q: f64,
    /// Upper end of the `C_q` enclosure.
    pub c_q: f64,
    /// `||e_g||_U / sqrt(w(q))` per generator.
    pub l_bound: Vec<f64>,
    /// `(1 - q_max)^{-1/2}`.
    pub a_bound: f64,
    /// `haagerup[n] = C_q^{3/2} (n+1)`.
    pub haagerup: Vec<f64>,
    /// `xi_majorant[m-1]`.
    pub xi_majorant: Vec<f64>,
    /// `wick_word_bound[n] = n! B^n A^n`.
    pub wick_word_bound: Vec<f64>,
    /// `lipschitz_majorant[m-1]`.
    pub lipschitz_majorant: Vec<f64>,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn q_fact(n: usize, q: f64) -> f64 {
    q_factorial::<f64>(n, &q)
}

impl BoundTable {
    /// `d^m B^m C^m sqrt([m-1]_q!) q^{m(m-1)/2}`.
    pub fn xi_majorant_at(&self, m: usize) -> f64 {
        let (d, mf) = (self.d as f64, m as f64);
        (d * self.b * self.c).powi(m as i32) * q_fact(m - 1, self.q_max).sqrt() * self.q_max.powf(mf * (mf - 1.0) / 2.0)
    }

    /// `xi_majorant(m+1) / xi_majorant(m) = d B C sqrt([m]_q) q^m`.
    pub fn xi_ratio(&self, m: usize) -> f64 {
        let qn = crate::partitions::q_number::<f64>(m, &self.q_max);
        self.d as f64 * self.b * self.c * qn.sqrt() * self.q_max.powi(m as i32)
    }

    /// First `m` from which the majorant ratio drops below one.
    pub fn xi_ratio_onset(&self, limit: usize) -> Option<usize> {
        (1..=limit).find(|&m| self.xi_ratio(m) < 1.0)
    }

    pub fn wick_word_bound_at(&self, n: usize) -> f64 {
        factorial(n) * (self.b * self.a_wick).powi(n as i32)
    }

    /// `q^{m(m-1)/2} d^{3m-1} (2m)! C^{3m-1} B^{7m-4} C_q^3 (2m)^2 [2m-1]_q! sqrt([m-1]_q!)`.
    pub fn lipschitz_majorant_at(&self, m: usize) -> f64 {
        let (d, mf, q) = (self.d as f64, m as f64, self.q_max);
        let k = 3 * m as i32 - 1;
        q.powf(mf * (mf - 1.0) / 2.0)
            * d.powi(k)
            * factorial(2 * m)
            * self.c.powi(k)
            * self.b.powi(7 * m as i32 - 4)
            * self.c_q.powi(3)
            * (2.0 * mf).powi(2)
            * q_fact(2 * m - 1, q)
            * q_fact(m - 1, q).sqrt()
    }
}

/// Evaluates every constant for levels `0..=n_max` and series terms `1..=m_max`.
pub fn bound_table<S: Scalar>(model: &Model<S>, n_max: usize, m_max: usize) -> Result<BoundTable> {
    let k = &model.constants;
    if !(k.q_max < 1.0) {
        return Err(Error::DomainError(format!("q_max = {} must be below 1", k.q_max)));
    }
    let mut t = BoundTable {
        d: model.d,
        q_max: k.q_max,
        b: k.b,
        c: k.c,
        a_wick: k.a_wick,
        w_q: k.w_q,
        c_q: k.c_q,
        l_bound: vec![1.0 / k.w_q.sqrt(); model.d],
        a_bound: (1.0 - k.q_max).powf(-0.5),
        haagerup: (0..=n_max).map(|n| k.c_q.powf(1.5) * (n as f64 + 1.0)).collect(),
        xi_majorant: Vec::new(),
        wick_word_bound: Vec::new(),
        lipschitz_majorant: Vec::new(),
    };
    t.xi_majorant = (1..=m_max).map(|m| t.xi_majorant_at(m)).collect();
    t.wick_word_bound = (0..=n_max).map(|n| t.wick_word_bound_at(n)).collect();
    t.lipschitz_majorant = (1..=m_max).map(|m| t.lipschitz_majorant_at(m)).collect();
    Ok(t)
}

/// Which bound checks to run and at what size.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundChecks {
    pub terms: usize,
    pub haagerup_samples: usize,
    pub haagerup_max_level: usize,
    pub wick_max_len: usize,
    pub lipschitz_terms: usize,
    pub seed: u64,
}

impl Default for BoundChecks {
    fn default() -> Self {
        BoundChecks { terms: 3, haagerup_samples: 50, haagerup_max_level: 4, wick_max_len: 4, lipschitz_terms: 3, seed: 0 }
    }
}

/// Small random coefficients `k/8`, `|k| <= 8`, exact in either backend.
pub fn random_level_vector<S: Scalar>(space: &TruncatedFock<S>, level: usize, rng: &mut ChaCha8Rng) -> FockVector<S> {
    loop {
        let v = FockVector::from_terms(
            space.total_dim(),
            space.index.range(level).map(|i| (i, S::from_ratio(rng.gen_range(-8..=8), 8))),
        );
        if !v.is_zero() {
            return v;
        }
    }
}

fn timed(start: Instant, c: CheckResult) -> CheckResult {
    CheckResult { elapsed_ms: start.elapsed().as_millis() as u64, ..c }
}

fn guard(name: &str, r: Result<CheckResult>) -> CheckResult {
    r.unwrap_or_else(|e| CheckResult::failed(name, e.to_string()))
}

/// Compares computed norms against the table; every failure is reported, never raised.
pub fn verify_bounds<S: Scalar>(space: &TruncatedFock<S>, table: &BoundTable, checks: &BoundChecks) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let n = space.n;
    let d = space.d();
    let slack = 1.0 + 1e-12;

    for a in 0..d {
        let name = format!("bounds.free_annihilation[{a}]");
        let t = Instant::now();
        out.push(timed(
            t,
            guard(&name, (|| {
                let v = t_norm(space, &free_annihilate(space, a)?)?;
                Ok(CheckResult::compare(&name, v, table.l_bound[a] * slack).with_degrees(n as isize))
            })()),
        ));
        let name = format!("bounds.annihilation[{a}]");
        let t = Instant::now();
        out.push(timed(
            t,
            guard(&name, (|| {
                let v = t_norm(space, &annihilate(space, a)?)?;
                Ok(CheckResult::compare(&name, v, table.a_bound * slack).with_degrees(n as isize))
            })()),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(checks.seed);
    for level in 0..=checks.haagerup_max_level.min(n) {
        let name = format!("bounds.haagerup[n={level}]");
        let t = Instant::now();
        let r = (|| {
            let wick = WickTable::build(space, level, n - level)?;
            let (mut worst_ratio, mut lower_gap) = (0.0f64, f64::NEG_INFINITY);
            for _ in 0..checks.haagerup_samples {
                let xi = random_level_vector(space, level, &mut rng);
                let norm_xi = space.norm(&xi);
                let norm_w = t_norm(space, &wick.of_vector(space, &xi))?;
                worst_ratio = worst_ratio.max(norm_w / norm_xi);
                lower_gap = lower_gap.max((norm_xi - norm_w) / norm_xi);
            }
            let upper = table.c_q.powf(1.5) * (level as f64 + 1.0);
            let mut c = CheckResult::compare(&name, worst_ratio, upper * slack).with_degrees((n - level) as isize);
            if lower_gap > 1e-10 {
                c = CheckResult::failed(&name, format!("||W(xi)|| below ||xi||_T by relative {lower_gap:e}"));
            }
            Ok(c.with_detail(format!("max ||W(xi)||/||xi||_T over {} samples", checks.haagerup_samples)))
        })();
        out.push(timed(t, guard(&name, r)));
    }

    let max_len = checks.wick_max_len.min(n);
    let t = Instant::now();
    let r = (|| -> Result<Vec<CheckResult>> {
        let mut results = Vec::new();
        for len in 0..=max_len {
            let wick = WickTable::build(space, len, n - len)?;
            let mut worst = 0.0f64;
            for w in space.index.words(len) {
                worst = worst.max(t_norm(space, wick.get(&w))?);
            }
            results.push(
                CheckResult::compare(format!("bounds.wick_word[n={len}]"), worst, table.wick_word_bound_at(len) * slack)
                    .with_degrees((n - len) as isize),
            );
        }
        Ok(results)
    })();
    match r {
        Ok(rs) => out.extend(rs.into_iter().map(|c| timed(t, c))),
        Err(e) => out.push(CheckResult::failed("bounds.wick_word", e.to_string())),
    }

    let terms = checks.terms.min(n.div_ceil(2));
    for a in 0..d {
        let t = Instant::now();
        match conjugate_series(space, a, terms) {
            Ok(series) => {
                for (m, norm) in series.term_norms(space).into_iter().enumerate() {
                    out.push(timed(
                        t,
                        CheckResult::compare(format!("bounds.xi_majorant[a={a},m={}]", m + 1), norm, table.xi_majorant_at(m + 1) * slack),
                    ));
                }
            }
            Err(e) => out.push(CheckResult::failed(format!("bounds.xi_majorant[a={a}]"), e.to_string())),
        }
    }

    let lip_terms = checks.lipschitz_terms.min(terms);
    for a in (0..d).filter(|_| lip_terms > 0) {
        for b in 0..d {
            let name = format!("bounds.lipschitz[b={b},a={a}]");
            let t = Instant::now();
            match lipschitz_partial(space, b, a, lip_terms) {
                Ok(values) => {
                    for (m, v) in values.into_iter().enumerate() {
                        out.push(timed(
                            t,
                            CheckResult::compare(format!("{name}[m={}]", m + 1), v, table.lipschitz_majorant_at(m + 1) * slack),
                        ));
                    }
                }
                Err(e) => out.push(CheckResult::failed(name, e.to_string())),
            }
        }
    }
    out
}
