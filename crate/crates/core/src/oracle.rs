//! Brute-force references for the Gram matrices, the dual system and the conjugate pairing.
//!
//! Nothing here calls the partition enumerators, the Gram recursion or the operator
//! matrices: vectors are sparse maps from letter sequences to coefficients and the fields
//! act on them directly.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::conjugate::conjugate_series;
use crate::conjugate::dual_apply;
use crate::error::{Error, Result};
use crate::fock::{FockVector, TruncatedFock, Word};
use crate::model::Model;
use crate::scalar::Scalar;

/// Largest level or word length an oracle accepts by default.
pub const ORACLE_CAP: usize = 5;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub name: String,
    pub inputs: String,
    pub max_discrepancy: f64,
    pub pass: bool,
}

impl OracleReport {
    fn from_max<S: Scalar>(name: &str, inputs: String, max: &S, tol: f64) -> Self {
        OracleReport { name: name.to_string(), inputs, max_discrepancy: max.to_f64(), pass: max.is_negligible(tol) }
    }

    fn failed(name: &str, inputs: String) -> Self {
        OracleReport { name: name.to_string(), inputs, max_discrepancy: f64::INFINITY, pass: false }
    }
}

/// Sign convention used to sum the conjugate series in [`pairing_oracle`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SeriesSign {
    /// `sum_m (-1)^{m-1} xi_m`.
    #[default]
    Alternating,
    /// `sum_m xi_m`, kept as a negative control.
    Plain,
}

type Sparse<S> = HashMap<Vec<usize>, S>;

fn push<S: Scalar>(v: &mut Sparse<S>, key: Vec<usize>, c: S) {
    if c.is_zero() {
        return;
    }
    let e = v.entry(key).or_insert_with(S::zero);
    *e = e.clone() + c;
}

fn check_cap(what: &'static str, requested: usize, cap: usize) -> Result<()> {
    if requested > cap {
        return Err(Error::CapExceeded { what, requested, cap });
    }
    Ok(())
}

/// Every permutation of `0..n`, by Heap's algorithm.
fn heap_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0; n];
    let mut out = vec![p.clone()];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            out.push(p.clone());
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// All sequences of length `n` over `0..d`, first letter most significant.
fn sequences(d: usize, n: usize) -> Vec<Vec<usize>> {
    let count = d.pow(n as u32);
    (0..count)
        .map(|mut k| {
            let mut s = vec![0; n];
            for slot in s.iter_mut().rev() {
                *slot = k % d;
                k /= d;
            }
            s
        })
        .collect()
}

/// Level-`n` Gram matrix as a sum over `S_n`, rows and columns in lexicographic word order.
pub fn gram_oracle<S: Scalar>(model: &Model<S>, n: usize, cap: usize) -> Result<Vec<Vec<S>>> {
    check_cap("gram oracle level", n, cap)?;
    let perms = heap_permutations(n);
    let words = sequences(model.d, n);
    // Slot t carries the letter t places from the right.
    let slot = |w: &[usize], t: usize| w[n - 1 - t];
    let entry = |u: &[usize], v: &[usize]| {
        let mut total = S::zero();
        for s in &perms {
            if (0..n).any(|t| slot(u, t) != slot(v, s[t])) {
                continue;
            }
            let mut w = S::one();
            for a in 0..n {
                for b in a + 1..n {
                    if s[a] > s[b] {
                        w = w * model.q_of(slot(u, a), slot(u, b)).clone();
                    }
                }
            }
            total = total + w;
        }
        total
    };
    Ok(words.par_iter().map(|u| words.iter().map(|v| entry(u, v)).collect()).collect())
}

/// Compares [`gram_oracle`] with the recursion-built Gram of `space` at `level`.
pub fn check_gram<S: Scalar>(space: &TruncatedFock<S>, level: usize, cap: usize) -> Result<OracleReport> {
    if level > space.n {
        return Err(Error::LevelExceeded { level, max: space.n });
    }
    let brute = gram_oracle(&space.model, level, cap)?;
    let built = space.gram_dense(level);
    let mut max = S::zero();
    for (r, s) in brute.iter().zip(&built) {
        for (a, b) in r.iter().zip(s) {
            let e = (a.clone() - b.clone()).abs();
            if e > max {
                max = e;
            }
        }
    }
    let inputs = format!("d={}, n={}, dim={}", space.d(), level, brute.len());
    Ok(OracleReport::from_max("gram", inputs, &max, space.model.tolerance))
}

/// `A_b x = e_b ⊗ x + a(conj e_b) x`.
fn field_apply<S: Scalar>(model: &Model<S>, b: usize, x: &Sparse<S>) -> Sparse<S> {
    let mut out = Sparse::new();
    for (w, c) in x {
        let mut up = Vec::with_capacity(w.len() + 1);
        up.push(b);
        up.extend_from_slice(w);
        push(&mut out, up, c.clone());
        for p in 0..w.len() {
            let j = &model.j[b][w[p]];
            if j.is_zero() {
                continue;
            }
            let mut cross = S::one();
            for &left in &w[..p] {
                cross = cross * model.q_of(w[p], left).clone();
            }
            let mut rest = w.clone();
            rest.remove(p);
            push(&mut out, rest, c.clone() * j.clone() * cross);
        }
    }
    out
}

fn vacuum<S: Scalar>() -> Sparse<S> {
    let mut v = Sparse::new();
    v.insert(Vec::new(), S::one());
    v
}

/// `A_{m_0} ... A_{m_k} Omega`.
fn monomial_vacuum<S: Scalar>(model: &Model<S>, m: &[usize]) -> Sparse<S> {
    m.iter().rev().fold(vacuum(), |v, &b| field_apply(model, b, &v))
}

fn vacuum_part<S: Scalar>(x: &Sparse<S>) -> S {
    x.get(&Vec::new()).cloned().unwrap_or_else(S::zero)
}

/// `W(e_w)` as a field polynomial, from `A_b W(w') Omega = e_{bw'} + a(conj e_b) e_{w'}`.
fn wick_monomials<S: Scalar>(
    model: &Model<S>,
    w: &[usize],
    memo: &mut HashMap<Vec<usize>, BTreeMap<Vec<usize>, S>>,
) -> BTreeMap<Vec<usize>, S> {
    if let Some(p) = memo.get(w) {
        return p.clone();
    }
    let mut out = BTreeMap::new();
    if w.is_empty() {
        out.insert(Vec::new(), S::one());
    } else {
        let b = w[0];
        let rest = &w[1..];
        for (m, c) in wick_monomials(model, rest, memo) {
            let mut up = vec![b];
            up.extend(m);
            out.insert(up, c);
        }
        for p in 0..rest.len() {
            let j = model.j[b][rest[p]].clone();
            if j.is_zero() {
                continue;
            }
            let mut cross = S::one();
            for &left in &rest[..p] {
                cross = cross * model.q_of(rest[p], left).clone();
            }
            let mut smaller = rest.to_vec();
            smaller.remove(p);
            for (m, c) in wick_monomials(model, &smaller, memo) {
                let e = out.entry(m).or_insert_with(S::zero);
                *e = e.clone() - j.clone() * cross.clone() * c;
            }
        }
        out.retain(|_, c| !c.is_zero());
    }
    memo.insert(w.to_vec(), out.clone());
    out
}

/// `D_a` on a field monomial applied to the vacuum, from `D_a Omega = 0` and
/// `D_a A_b x = A_b D_a x + K[b][a] <Omega, x> Omega`.
fn dual_on_monomial<S: Scalar>(model: &Model<S>, alpha: usize, m: &[usize]) -> Sparse<S> {
    let mut x = vacuum::<S>();
    let mut dx = Sparse::new();
    for &b in m.iter().rev() {
        let mut next = field_apply(model, b, &dx);
        push(&mut next, Vec::new(), model.k[b][alpha].clone() * vacuum_part(&x));
        dx = next;
        x = field_apply(model, b, &x);
    }
    dx
}

fn to_fock<S: Scalar>(space: &TruncatedFock<S>, x: &Sparse<S>) -> Result<FockVector<S>> {
    let mut out = space.zero_vector();
    for (w, c) in x {
        if w.len() > space.n {
            return Err(Error::LevelExceeded { level: w.len(), max: space.n });
        }
        out.add_at(space.index.index(&Word::new(w.clone())), c.clone());
    }
    Ok(out)
}

/// `D_a e_w` from the defining commutation relations alone.
pub fn dual_oracle<S: Scalar>(space: &TruncatedFock<S>, alpha: usize, w: &Word, cap: usize) -> Result<FockVector<S>> {
    space.model.check_generator(alpha)?;
    check_cap("dual oracle word length", w.level(), cap)?;
    if w.level() > space.n {
        return Err(Error::LevelExceeded { level: w.level(), max: space.n });
    }
    let model = &space.model;
    let poly = wick_monomials(model, w.letters(), &mut HashMap::new());
    let mut total = Sparse::new();
    for (m, c) in &poly {
        for (k, v) in dual_on_monomial(model, alpha, m) {
            push(&mut total, k, c.clone() * v);
        }
    }
    to_fock(space, &total)
}

/// Compares [`dual_oracle`] with `dual_apply` on every word up to `max_len` letters.
pub fn check_dual<S: Scalar>(space: &TruncatedFock<S>, alpha: usize, max_len: usize, cap: usize) -> Result<OracleReport> {
    let top = max_len.min(space.n);
    check_cap("dual oracle word length", top, cap)?;
    let words: Vec<Word> = (0..=top).flat_map(|n| space.index.words(n)).collect();
    let diffs: Vec<Result<S>> = words
        .par_iter()
        .map(|w| {
            let a = dual_oracle(space, alpha, w, cap)?;
            let b = dual_apply(space, alpha, w)?;
            Ok(a.sub(&b).coeffs.into_iter().map(|c| c.abs()).fold(S::zero(), |m, c| if c > m { c } else { m }))
        })
        .collect();
    let mut max = S::zero();
    for d in diffs {
        let d = d?;
        if d > max {
            max = d;
        }
    }
    let inputs = format!("alpha={alpha}, |w|<={top}, words={}", words.len());
    Ok(OracleReport::from_max("dual", inputs, &max, space.model.tolerance))
}

/// Checks `<xi_a, x Omega>_T = <1⊗1, d_a(x) 1⊗1>` for every field monomial of degree
/// `<= degree_cap <= N`, with the series truncated at the `M = ceil(N / 2)` terms the space holds.
pub fn pairing_oracle<S: Scalar>(space: &TruncatedFock<S>, alpha: usize, degree_cap: usize, sign: SeriesSign) -> OracleReport {
    let terms = space.n.div_ceil(2);
    let inputs = format!("alpha={alpha}, degree<={degree_cap}, M={terms}, sign={sign:?}");
    if degree_cap > space.n {
        return OracleReport::failed("pairing", format!("{inputs}: degree exceeds truncation {}", space.n));
    }
    let series = match conjugate_series(space, alpha, terms) {
        Ok(s) => s,
        Err(e) => return OracleReport::failed("pairing", format!("{inputs}: {e}")),
    };
    let mut xi = space.zero_vector();
    for (i, t) in series.terms.iter().enumerate() {
        let s = match sign {
            SeriesSign::Alternating if i % 2 == 1 => -S::one(),
            _ => S::one(),
        };
        xi.axpy(&s, t);
    }
    let model = &space.model;
    let monomials: Vec<Vec<usize>> = (0..=degree_cap).flat_map(|k| sequences(model.d, k)).collect();
    let moments: HashMap<Vec<usize>, S> = (0..=degree_cap)
        .flat_map(|k| sequences(model.d, k))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|m| {
            let v = vacuum_part(&monomial_vacuum(model, &m));
            (m, v)
        })
        .collect();
    let diffs: Vec<Result<S>> = monomials
        .par_iter()
        .map(|m| {
            let lhs = space.inner(&xi, &to_fock(space, &monomial_vacuum(model, m))?);
            let mut rhs = S::zero();
            for (j, &b) in m.iter().enumerate() {
                let k = &model.k[b][alpha];
                if !k.is_zero() {
                    rhs = rhs + k.clone() * moments[&m[..j]].clone() * moments[&m[j + 1..]].clone();
                }
            }
            Ok((lhs - rhs).abs())
        })
        .collect();
    let mut max = S::zero();
    for d in diffs {
        match d {
            Ok(d) if d > max => max = d,
            Ok(_) => {}
            Err(e) => return OracleReport::failed("pairing", format!("{inputs}: {e}")),
        }
    }
    OracleReport::from_max("pairing", format!("{inputs}, monomials={}", monomials.len()), &max, model.tolerance)
}
