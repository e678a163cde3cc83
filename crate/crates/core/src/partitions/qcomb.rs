//! Scalar q-combinatorics: q-numbers, q-factorials, inversion counts and the
//! infinite products `C_q` and `w(q)` with certified enclosures.

use num::bigint::BigInt;
use num::One;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Products stop once the geometric tail bound drops below this.
pub const TAIL_TOLERANCE: f64 = 1e-16;

/// Exact-mode enclosure endpoints are rounded outward to multiples of `2^-GRID_BITS`.
const GRID_BITS: usize = 256;

/// Closed interval `[lo, hi]` certified to contain the true value.
#[derive(Clone, Debug, PartialEq)]
pub struct Enclosure<S> {
    pub lo: S,
    pub hi: S,
    /// Number of product factors evaluated before the tail bound was applied.
    pub factors: usize,
}

impl<S: Scalar> Enclosure<S> {
    pub fn exact(value: S) -> Self {
        Enclosure { lo: value.clone(), hi: value, factors: 0 }
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64()
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64()
    }

    pub fn midpoint_f64(&self) -> f64 {
        0.5 * (self.lo.to_f64() + self.hi.to_f64())
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        self.lo.to_f64() <= x && x <= self.hi.to_f64()
    }
}

/// `[n]_q = 1 + q + ... + q^{n-1}`, with `[0]_q = 1`.
pub fn q_number<S: Scalar>(n: usize, q: &S) -> S {
    if n == 0 {
        return S::one();
    }
    let mut sum = S::zero();
    let mut power = S::one();
    for _ in 0..n {
        sum = sum + power.clone();
        power = power * q.clone();
    }
    sum
}

/// `[n]_q! = [1]_q [2]_q ... [n]_q`, with `[0]_q! = 1`.
pub fn q_factorial<S: Scalar>(n: usize, q: &S) -> S {
    (1..=n).fold(S::one(), |acc, k| acc * q_number(k, q))
}

/// Number of pairs `u < v` with `perm[u] > perm[v]`.
pub fn inversions(perm: &[usize]) -> usize {
    let mut count = 0;
    for u in 0..perm.len() {
        for v in u + 1..perm.len() {
            if perm[u] > perm[v] {
                count += 1;
            }
        }
    }
    count
}

fn check_domain<S: Scalar>(q: &S) -> Result<()> {
    if q.is_negative() || *q >= S::one() {
        return Err(Error::DomainError(format!("need 0 <= q < 1, got {}", q.render())));
    }
    Ok(())
}

/// `C_q = prod_{n>=1} 1/(1-q^n)`.
pub fn c_q<S: Scalar>(q: &S) -> Result<Enclosure<S>> {
    check_domain(q)?;
    if q.is_zero() {
        return Ok(Enclosure::exact(S::one()));
    }
    if S::EXACT {
        let r = q.to_rational().expect("exact backend");
        let (lo, hi, k) = c_q_rational(&r);
        Ok(Enclosure { lo: S::from_rational(&lo), hi: S::from_rational(&hi), factors: k })
    } else {
        let (lo, hi, k) = c_q_float(q.to_f64());
        Ok(Enclosure { lo: S::from_f64_lossy(lo), hi: S::from_f64_lossy(hi), factors: k })
    }
}

/// `w(q) = (1-q^2)^{-1} prod_{k>=1} (1-q^k)/(1+q^k)`.
pub fn w_q<S: Scalar>(q: &S) -> Result<Enclosure<S>> {
    check_domain(q)?;
    if q.is_zero() {
        return Ok(Enclosure::exact(S::one()));
    }
    if S::EXACT {
        let r = q.to_rational().expect("exact backend");
        let (lo, hi, k) = w_q_rational(&r);
        Ok(Enclosure { lo: S::from_rational(&lo), hi: S::from_rational(&hi), factors: k })
    } else {
        let (lo, hi, k) = w_q_float(q.to_f64());
        Ok(Enclosure { lo: S::from_f64_lossy(lo), hi: S::from_f64_lossy(hi), factors: k })
    }
}

/// Bound on `sum_{n>k} q^n/(1-q^n)`, namely `q^{k+1}/((1-q)(1-q^{k+1}))`.
fn tail_bound_f64(q: f64, q_next: f64) -> f64 {
    q_next / ((1.0 - q) * (1.0 - q_next))
}

fn c_q_float(q: f64) -> (f64, f64, usize) {
    let mut prod = 1.0;
    let mut power = q;
    let mut k = 0;
    loop {
        k += 1;
        prod /= 1.0 - power;
        power *= q;
        let t = tail_bound_f64(q, power);
        if t <= TAIL_TOLERANCE {
            let slack = 4.0 * (k as f64 + 2.0) * f64::EPSILON;
            return (prod * (1.0 - slack), prod * (1.0 + slack) / (1.0 - t), k);
        }
    }
}

fn w_q_float(q: f64) -> (f64, f64, usize) {
    let mut prod = 1.0 / (1.0 - q * q);
    let mut power = q;
    let mut k = 0;
    loop {
        k += 1;
        prod *= (1.0 - power) / (1.0 + power);
        power *= q;
        let t = tail_bound_f64(q, power);
        if t <= TAIL_TOLERANCE {
            let slack = 4.0 * (k as f64 + 2.0) * f64::EPSILON;
            return (prod * (1.0 - 2.0 * t) * (1.0 - slack), prod * (1.0 + slack), k);
        }
    }
}

fn grid() -> BigInt {
    BigInt::one() << GRID_BITS
}

fn round_down(x: &Rational) -> Rational {
    let g = grid();
    Rational::new((x * Rational::from_integer(g.clone())).floor().to_integer(), g)
}

fn round_up(x: &Rational) -> Rational {
    let g = grid();
    Rational::new((x * Rational::from_integer(g.clone())).ceil().to_integer(), g)
}

fn tail_tolerance_rational() -> Rational {
    Rational::new(BigInt::one(), num::pow(BigInt::from(10), 16))
}

fn tail_bound_rational(q: &Rational, q_next: &Rational) -> Rational {
    let one = Rational::one();
    q_next / ((&one - q) * (&one - q_next))
}

fn c_q_rational(q: &Rational) -> (Rational, Rational, usize) {
    let one = Rational::one();
    let tol = tail_tolerance_rational();
    let (mut lo, mut hi) = (one.clone(), one.clone());
    let mut power = q.clone();
    let mut k = 0;
    loop {
        k += 1;
        let factor = &one / (&one - &power);
        lo = round_down(&(&lo * &factor));
        hi = round_up(&(&hi * &factor));
        power = &power * q;
        let t = tail_bound_rational(q, &power);
        if t <= tol {
            // exp(t) <= 1/(1-t)
            return (lo, round_up(&(&hi / (&one - &t))), k);
        }
    }
}

fn w_q_rational(q: &Rational) -> (Rational, Rational, usize) {
    let one = Rational::one();
    let two = Rational::from_integer(BigInt::from(2));
    let tol = tail_tolerance_rational();
    let pre = &one / (&one - q * q);
    let (mut lo, mut hi) = (round_down(&pre), round_up(&pre));
    let mut power = q.clone();
    let mut k = 0;
    loop {
        k += 1;
        let factor = (&one - &power) / (&one + &power);
        lo = round_down(&(&lo * &factor));
        hi = round_up(&(&hi * &factor));
        power = &power * q;
        let t = tail_bound_rational(q, &power);
        if t <= tol {
            // tail factor lies in [exp(-2t), 1] and exp(-2t) >= 1 - 2t
            return (round_down(&(&lo * (&one - &two * &t))), hi, k);
        }
    }
}

/// Selector for [`q_scalar`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QScalar {
    QNumber(usize),
    QFactorial(usize),
    Cq,
    Wq,
    Inversions(Vec<usize>),
}

/// Uniform entry point; exact quantities come back as degenerate enclosures.
pub fn q_scalar<S: Scalar>(kind: &QScalar, q: &S) -> Result<Enclosure<S>> {
    match kind {
        QScalar::QNumber(n) => Ok(Enclosure::exact(q_number(*n, q))),
        QScalar::QFactorial(n) => Ok(Enclosure::exact(q_factorial(*n, q))),
        QScalar::Cq => c_q(q),
        QScalar::Wq => w_q(q),
        QScalar::Inversions(perm) => {
            let mut seen = vec![false; perm.len()];
            for &p in perm {
                if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                    return Err(Error::DomainError("not a permutation".into()));
                }
            }
            Ok(Enclosure::exact(S::from_int(inversions(perm) as i64)))
        }
    }
}
