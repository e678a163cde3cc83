//! Model data: generators, blocks, the mixed q-matrix, conjugation and covariance
//! tables, and the type classifier.

use std::collections::HashSet;
use std::fmt;

use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::partitions::qcomb::{c_q, w_q};
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

/// Pair blocks are given by `mu` directly, or by `lambda = mu^2`.
#[derive(Clone, Debug, PartialEq)]
pub enum PairParam {
    Mu(Rational),
    Lambda(Rational),
}

#[derive(Clone, Debug, PartialEq)]
pub enum BlockKind {
    Fixed,
    Pair(PairParam),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub component: String,
    pub kind: BlockKind,
}

impl Block {
    pub fn fixed(component: &str) -> Self {
        Block { component: component.to_string(), kind: BlockKind::Fixed }
    }

    pub fn pair(component: &str, mu: Rational) -> Self {
        Block { component: component.to_string(), kind: BlockKind::Pair(PairParam::Mu(mu)) }
    }

    pub fn pair_lambda(component: &str, lambda: Rational) -> Self {
        Block {
            component: component.to_string(),
            kind: BlockKind::Pair(PairParam::Lambda(lambda)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelConfig {
    pub components: Vec<String>,
    pub blocks: Vec<Block>,
    pub q: Vec<Vec<Rational>>,
    pub mode: Mode,
    pub tolerance: f64,
}

impl ModelConfig {
    pub const DEFAULT_TOLERANCE: f64 = 1e-10;

    pub fn new(components: &[&str], blocks: Vec<Block>, q: Vec<Vec<Rational>>) -> Self {
        ModelConfig {
            components: components.iter().map(|c| c.to_string()).collect(),
            blocks,
            q,
            mode: Mode::Exact,
            tolerance: Self::DEFAULT_TOLERANCE,
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    /// The shipped demo: pair block `mu = 2` in one component, a fixed generator in another.
    pub fn demo() -> Self {
        let r = |p: i64, q: i64| Rational::new(p.into(), q.into());
        ModelConfig::new(
            &["a", "b"],
            vec![Block::pair("a", r(2, 1)), Block::fixed("b")],
            vec![vec![r(1, 3), r(1, 5)], vec![r(1, 5), r(1, 2)]],
        )
    }
}

/// Derived constants, all as upper bounds in double precision.
#[derive(Clone, Debug, PartialEq)]
pub struct Constants {
    /// `max |q_ij|`.
    pub q_max: f64,
    /// `max(1, max_a ||conj(e_a)||_U)`.
    pub b: f64,
    /// Bound on `||l(e_a)||`, namely `1/sqrt(w(q_max))`.
    pub c: f64,
    /// Bound on `||W(e_a)||`, namely `2 C_q^{3/2}`.
    pub a_wick: f64,
    /// Upper end of the `C_q` enclosure.
    pub c_q: f64,
    /// Lower end of the `w(q)` enclosure.
    pub w_q: f64,
}

#[derive(Clone, Debug)]
pub struct Model<S> {
    pub d: usize,
    pub component_ids: Vec<String>,
    /// Generator to component index.
    pub comp: Vec<usize>,
    /// Generator to the index of the block that produced it.
    pub block_of: Vec<usize>,
    q: Vec<Vec<S>>,
    /// `conj(e_a) = sum_b j[a][b] e_b`.
    pub j: Vec<Vec<S>>,
    /// `k[a][b] = <conj(e_a), e_b>_U`.
    pub k: Vec<Vec<S>>,
    /// Eigenvalue of the analytic generator on each basis vector.
    pub eigenvalues: Vec<S>,
    pub constants: Constants,
    pub mode: Mode,
    pub tolerance: f64,
}

impl<S: Scalar> Model<S> {
    pub fn q_of(&self, a: usize, b: usize) -> &S {
        &self.q[self.comp[a]][self.comp[b]]
    }

    pub fn q_component(&self, i: usize, j: usize) -> &S {
        &self.q[i][j]
    }

    pub fn components(&self) -> usize {
        self.q.len()
    }

    pub fn covariance(&self, a: usize, b: usize) -> &S {
        &self.k[a][b]
    }

    /// Exact `max |q_ij|` in the backend.
    pub fn q_max(&self) -> S {
        let mut m = S::zero();
        for row in &self.q {
            for x in row {
                if x.abs() > m {
                    m = x.abs();
                }
            }
        }
        m
    }

    pub fn is_q_zero(&self) -> bool {
        self.q.iter().flatten().all(|x| x.is_zero())
    }

    /// Coefficients of `conj(v)` for `v = sum_a coeffs[a] e_a` (all tables are real).
    pub fn conjugate(&self, coeffs: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.d];
        for (a, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (b, x) in self.j[a].iter().enumerate() {
                out[b] = out[b].clone() + c.clone() * x.clone();
            }
        }
        out
    }

    /// Largest deviation of `J∘J` from the identity (exact zero in exact mode).
    pub fn involution_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in 0..self.d {
            let mut unit = vec![S::zero(); self.d];
            unit[a] = S::one();
            let back = self.conjugate(&self.conjugate(&unit));
            for (x, y) in back.iter().zip(&unit) {
                worst = worst.max((x.clone() - y.clone()).abs().to_f64());
            }
        }
        worst
    }

    pub fn conj_norm(&self, a: usize) -> f64 {
        self.j[a].iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt()
    }

    pub fn check_generator(&self, a: usize) -> Result<()> {
        if a >= self.d {
            return Err(Error::InvalidGenerator { index: a, d: self.d });
        }
        Ok(())
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidModel(msg.into())
}

/// Assembles the model tables from a configuration.
pub fn build_model<S: Scalar>(cfg: &ModelConfig) -> Result<Model<S>> {
    let nc = cfg.components.len();
    if nc == 0 {
        return Err(invalid("no components"));
    }
    let mut seen = HashSet::new();
    for c in &cfg.components {
        if !seen.insert(c.as_str()) {
            return Err(invalid(format!("duplicate component id {c:?}")));
        }
    }
    if cfg.q.len() != nc || cfg.q.iter().any(|row| row.len() != nc) {
        return Err(invalid(format!("q must be {nc}x{nc}")));
    }
    let one = Rational::one();
    for i in 0..nc {
        for j in 0..nc {
            if cfg.q[i][j] != cfg.q[j][i] {
                return Err(invalid(format!("q is not symmetric at ({i},{j})")));
            }
            if cfg.q[i][j].abs() >= one {
                return Err(invalid(format!("|q[{i}][{j}]| >= 1")));
            }
        }
    }
    if !(cfg.tolerance >= 0.0) {
        return Err(invalid("tolerance must be nonnegative"));
    }
    if cfg.blocks.is_empty() {
        return Err(invalid("no blocks"));
    }

    let mut comp = Vec::new();
    let mut block_of = Vec::new();
    let mut eigenvalues = Vec::new();
    // (generator, partner, coefficient of the partner in the conjugate)
    let mut conj: Vec<(usize, usize, S)> = Vec::new();
    for (bi, block) in cfg.blocks.iter().enumerate() {
        let ci = cfg
            .components
            .iter()
            .position(|c| *c == block.component)
            .ok_or_else(|| invalid(format!("unknown component {:?}", block.component)))?;
        let base = comp.len();
        match &block.kind {
            BlockKind::Fixed => {
                comp.push(ci);
                block_of.push(bi);
                eigenvalues.push(S::one());
                conj.push((base, base, S::one()));
            }
            BlockKind::Pair(param) => {
                let mu: S = match param {
                    PairParam::Mu(mu) => {
                        if !mu.is_positive() {
                            return Err(invalid("mu must be positive"));
                        }
                        S::from_rational(mu)
                    }
                    PairParam::Lambda(lambda) => {
                        if !lambda.is_positive() {
                            return Err(invalid("lambda must be positive"));
                        }
                        S::from_rational(lambda).sqrt_exact().ok_or_else(|| {
                            invalid(format!(
                                "lambda = {} has no rational square root",
                                lambda.render()
                            ))
                        })?
                    }
                };
                let lambda = mu.clone() * mu.clone();
                comp.extend([ci, ci]);
                block_of.extend([bi, bi]);
                eigenvalues.push(lambda.clone());
                eigenvalues.push(S::one() / lambda);
                conj.push((base, base + 1, S::one() / mu.clone()));
                conj.push((base + 1, base, mu));
            }
        }
    }
    let d = comp.len();
    let mut j = vec![vec![S::zero(); d]; d];
    for (a, b, c) in conj {
        j[a][b] = c;
    }
    // <conj(e_a), e_b>_U is the conjugate of j[a][b]; every entry here is real.
    let k = j.clone();
    let q: Vec<Vec<S>> = cfg
        .q
        .iter()
        .map(|row| row.iter().map(S::from_rational).collect())
        .collect();

    let mut model = Model {
        d,
        component_ids: cfg.components.clone(),
        comp,
        block_of,
        q,
        j,
        k,
        eigenvalues,
        constants: Constants { q_max: 0.0, b: 1.0, c: 1.0, a_wick: 2.0, c_q: 1.0, w_q: 1.0 },
        mode: cfg.mode,
        tolerance: cfg.tolerance,
    };
    let q_max = model.q_max();
    let cq = c_q(&q_max)?.hi_f64();
    let wq = w_q(&q_max)?.lo_f64();
    let b = (0..d).map(|a| model.conj_norm(a)).fold(1.0f64, f64::max);
    model.constants = Constants {
        q_max: q_max.to_f64(),
        b,
        c: 1.0 / wq.sqrt(),
        a_wick: 2.0 * cq.powf(1.5),
        c_q: cq,
        w_q: wq,
    };
    Ok(model)
}

/// Type label from the closed multiplicative group generated by the spectrum.
#[derive(Clone, Debug, PartialEq)]
pub enum TypeLabel<S> {
    II1,
    IIILambda(S),
    III1,
}

impl<S: Scalar> fmt::Display for TypeLabel<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeLabel::II1 => write!(f, "II_1"),
            TypeLabel::IIILambda(l) => write!(f, "III_lambda({})", l.render()),
            TypeLabel::III1 => write!(f, "III_1"),
        }
    }
}

impl<S> TypeLabel<S> {
    pub fn name(&self) -> &'static str {
        match self {
            TypeLabel::II1 => "II_1",
            TypeLabel::IIILambda(_) => "III_lambda",
            TypeLabel::III1 => "III_1",
        }
    }
}

/// Denominator bound for the float-mode continued-fraction search.
pub const MAX_RATIO_DENOMINATOR: i64 = 1000;

/// Classifies eigenvalue data. Exact backends use a lattice-rank test over a
/// coprime factor base; float backends use a log-ratio heuristic.
pub fn classify_type<S: Scalar>(eigenvalues: &[S], tolerance: f64) -> Result<TypeLabel<S>> {
    for x in eigenvalues {
        if !x.is_positive() {
            return Err(Error::NonPositiveEigenvalue(x.render()));
        }
    }
    if S::EXACT {
        let rats: Vec<Rational> =
            eigenvalues.iter().map(|x| x.to_rational().expect("exact backend")).collect();
        Ok(match classify_rational(&rats) {
            TypeLabel::II1 => TypeLabel::II1,
            TypeLabel::III1 => TypeLabel::III1,
            TypeLabel::IIILambda(l) => TypeLabel::IIILambda(S::from_rational(&l)),
        })
    } else {
        let xs: Vec<f64> = eigenvalues.iter().map(|x| x.to_f64()).collect();
        Ok(match classify_float(&xs, tolerance)? {
            TypeLabel::II1 => TypeLabel::II1,
            TypeLabel::III1 => TypeLabel::III1,
            TypeLabel::IIILambda(l) => TypeLabel::IIILambda(S::from_f64_lossy(l)),
        })
    }
}

/// Pairwise coprime integers > 1 such that every input factors over them.
fn coprime_base(inputs: &[BigInt]) -> Vec<BigInt> {
    let mut base: Vec<BigInt> = Vec::new();
    let mut pending: Vec<BigInt> = inputs.iter().filter(|x| **x > BigInt::one()).cloned().collect();
    while let Some(x) = pending.pop() {
        if x <= BigInt::one() || base.contains(&x) {
            continue;
        }
        match base.iter().position(|b| !b.gcd(&x).is_one()) {
            None => base.push(x),
            Some(i) => {
                let b = base.swap_remove(i);
                let g = b.gcd(&x);
                pending.push(&b / &g);
                pending.push(&x / &g);
                pending.push(g);
            }
        }
    }
    base.sort();
    base
}

fn valuation(mut n: BigInt, p: &BigInt) -> (i64, BigInt) {
    let mut e = 0;
    while (&n % p).is_zero() {
        n /= p;
        e += 1;
    }
    (e, n)
}

fn classify_rational(eigenvalues: &[Rational]) -> TypeLabel<Rational> {
    let mut ints = Vec::new();
    for x in eigenvalues {
        ints.push(x.numer().clone());
        ints.push(x.denom().clone());
    }
    let base = coprime_base(&ints);
    let vectors: Vec<Vec<i64>> = eigenvalues
        .iter()
        .map(|x| {
            let (mut num, mut den) = (x.numer().clone(), x.denom().clone());
            let v: Vec<i64> = base
                .iter()
                .map(|p| {
                    let (a, rest) = valuation(num.clone(), p);
                    num = rest;
                    let (b, rest) = valuation(den.clone(), p);
                    den = rest;
                    a - b
                })
                .collect();
            debug_assert!(num.is_one() && den.is_one());
            v
        })
        .filter(|v| v.iter().any(|&e| e != 0))
        .collect();
    let Some(first) = vectors.first() else {
        return TypeLabel::II1;
    };
    let g0 = first.iter().fold(0i64, |g, &e| g.gcd(&e));
    let primitive: Vec<i64> = first.iter().map(|&e| e / g0).collect();
    let pivot = primitive.iter().position(|&e| e != 0).expect("nonzero vector");
    let mut g = 0i64;
    for v in &vectors {
        let (num, den) = (v[pivot], primitive[pivot]);
        if num % den != 0 {
            return TypeLabel::III1;
        }
        let m = num / den;
        if v.iter().zip(&primitive).any(|(&x, &p)| x != m * p) {
            return TypeLabel::III1;
        }
        g = g.gcd(&m);
    }
    let mut generator = Rational::one();
    for (p, &e) in base.iter().zip(&primitive) {
        let pow = Rational::from_integer(num::pow(p.clone(), (e.unsigned_abs() * g as u64) as usize));
        if e > 0 {
            generator *= pow;
        } else if e < 0 {
            generator /= pow;
        }
    }
    if generator > Rational::one() {
        generator = generator.recip();
    }
    TypeLabel::IIILambda(generator)
}

/// Best rational approximation with denominator at most `max_den` (continued fractions).
fn best_rational(x: f64, max_den: i64) -> (i64, i64) {
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    loop {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i64;
        let (h2, k2) = (a * h1 + h0, a * k1 + k0);
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    (h1, k1)
}

fn classify_float(eigenvalues: &[f64], tolerance: f64) -> Result<TypeLabel<f64>> {
    let tol = tolerance.max(1e-14);
    let logs: Vec<f64> = eigenvalues.iter().map(|x| x.ln()).filter(|l| l.abs() > tol).collect();
    let Some(r) = logs.iter().map(|l| l.abs()).min_by(f64::total_cmp) else {
        return Ok(TypeLabel::II1);
    };
    let mut fracs = Vec::new();
    for l in &logs {
        let x = l / r;
        let (p, q) = best_rational(x, MAX_RATIO_DENOMINATOR);
        let err = (x - p as f64 / q as f64).abs();
        if err <= tol {
            fracs.push((p, q));
        } else if err <= 100.0 * tol {
            return Err(Error::HeuristicInconclusive(format!(
                "log ratio {x} is within {err:e} of {p}/{q}"
            )));
        } else {
            return Ok(TypeLabel::III1);
        }
    }
    let lcm = fracs.iter().fold(1i64, |acc, &(_, q)| acc.lcm(&q));
    let g = fracs.iter().fold(0i64, |acc, &(p, q)| acc.gcd(&(p * (lcm / q))));
    let log_gen = r * g as f64 / lcm as f64;
    Ok(TypeLabel::IIILambda((-log_gen).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    #[test]
    fn fixed_block_model() {
        let cfg = ModelConfig::new(&["a"], vec![Block::fixed("a")], vec![vec![r(1, 2)]]);
        let m = build_model::<Rational>(&cfg).unwrap();
        assert_eq!(m.d, 1);
        assert_eq!(m.k, vec![vec![r(1, 1)]]);
        assert_eq!(m.eigenvalues, vec![r(1, 1)]);
    }

    #[test]
    fn pair_block_model() {
        let cfg = ModelConfig::new(&["a"], vec![Block::pair("a", r(2, 1))], vec![vec![r(3, 10)]]);
        let m = build_model::<Rational>(&cfg).unwrap();
        assert_eq!(m.d, 2);
        assert_eq!(m.k[0][1], r(1, 2));
        assert_eq!(m.k[1][0], r(2, 1));
        assert!(m.k[0][0].is_zero() && m.k[1][1].is_zero());
        assert_eq!(m.eigenvalues, vec![r(4, 1), r(1, 4)]);
        assert_eq!(m.involution_defect(), 0.0);
        assert_eq!(m.constants.b, 2.0);
    }

    #[test]
    fn lambda_parameter() {
        let ok = ModelConfig::new(&["a"], vec![Block::pair_lambda("a", r(9, 4))], vec![vec![r(0, 1)]]);
        let m = build_model::<Rational>(&ok).unwrap();
        assert_eq!(m.k[1][0], r(3, 2));
        let irrational =
            ModelConfig::new(&["a"], vec![Block::pair_lambda("a", r(2, 1))], vec![vec![r(0, 1)]]);
        assert!(matches!(build_model::<Rational>(&irrational), Err(Error::InvalidModel(_))));
        let m = build_model::<f64>(&irrational).unwrap();
        assert!((m.k[1][0] - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_configs() {
        let asym = ModelConfig::new(
            &["a", "b"],
            vec![Block::fixed("a")],
            vec![vec![r(1, 2), r(9, 10)], vec![r(4, 5), r(1, 2)]],
        );
        assert!(matches!(build_model::<Rational>(&asym), Err(Error::InvalidModel(_))));
        let big = ModelConfig::new(&["a"], vec![Block::fixed("a")], vec![vec![r(1, 1)]]);
        assert!(build_model::<f64>(&big).is_err());
        let unknown = ModelConfig::new(&["a"], vec![Block::fixed("z")], vec![vec![r(0, 1)]]);
        assert!(build_model::<f64>(&unknown).is_err());
        let neg = ModelConfig::new(&["a"], vec![Block::pair("a", r(-1, 1))], vec![vec![r(0, 1)]]);
        assert!(build_model::<f64>(&neg).is_err());
    }

    #[test]
    fn covariance_vanishes_across_components() {
        let m = build_model::<Rational>(&ModelConfig::demo()).unwrap();
        for a in 0..m.d {
            for b in 0..m.d {
                if m.comp[a] != m.comp[b] {
                    assert!(m.k[a][b].is_zero());
                }
            }
        }
    }

    fn classify(xs: &[Rational]) -> TypeLabel<Rational> {
        classify_type(xs, 0.0).unwrap()
    }

    #[test]
    fn classifier_cases() {
        assert_eq!(classify(&[r(1, 1), r(1, 1), r(1, 1)]), TypeLabel::II1);
        assert_eq!(classify(&[r(4, 1), r(1, 4)]), TypeLabel::IIILambda(r(1, 4)));
        assert_eq!(classify(&[r(4, 1), r(1, 4), r(8, 1), r(1, 8)]), TypeLabel::IIILambda(r(1, 2)));
        assert_eq!(classify(&[r(2, 1), r(1, 2), r(3, 1), r(1, 3)]), TypeLabel::III1);
        assert_eq!(classify(&[r(6, 1), r(1, 6), r(36, 1)]), TypeLabel::IIILambda(r(1, 6)));
        assert_eq!(classify(&[r(4, 9), r(9, 4), r(8, 27)]), TypeLabel::IIILambda(r(2, 3)));
        assert_eq!(classify(&[r(6, 1), r(12, 1)]), TypeLabel::III1);
        assert!(classify_type(&[r(0, 1)], 0.0).is_err());
    }

    #[test]
    fn float_classifier() {
        let t = 1e-10;
        assert_eq!(classify_type(&[1.0, 1.0], t).unwrap(), TypeLabel::II1);
        match classify_type(&[4.0, 0.25, 8.0, 0.125], t).unwrap() {
            TypeLabel::IIILambda(l) => assert!((l - 0.5).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        assert_eq!(classify_type(&[2.0, 0.5, 3.0, 1.0 / 3.0], t).unwrap(), TypeLabel::III1);
    }

    #[test]
    fn coprime_base_refines() {
        let base = coprime_base(&[BigInt::from(12), BigInt::from(18)]);
        assert_eq!(base, vec![BigInt::from(2), BigInt::from(3)]);
    }
}
