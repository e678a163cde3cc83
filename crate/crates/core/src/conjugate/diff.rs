//! Difference quotients `d_a` in the tensor square, and the Wick power series.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fock::Word;
use crate::model::Model;
use crate::partitions::{descending_labels, enumerate_partitions, partition_weight, Family, DEFAULT_ENUMERATION_CAP};
use crate::scalar::Scalar;

use super::dual::vertex_labels;
use super::poly::{Polynomial, WickExpander};

/// `sum c * W(e_left) ⊗ W(e_right)^op`, ordered by `(left, right)`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct TensorSum<S> {
    terms: BTreeMap<(Word, Word), S>,
}

impl<S: Scalar> TensorSum<S> {
    pub fn zero() -> Self {
        TensorSum { terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, left: Word, right: Word, c: S) {
        if c.is_zero() {
            return;
        }
        let key = (left, right);
        let v = self.terms.get(&key).cloned().unwrap_or_else(S::zero) + c;
        if v.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, v);
        }
    }

    pub fn axpy(&mut self, c: &S, other: &TensorSum<S>) {
        for ((l, r), v) in &other.terms {
            self.add_term(l.clone(), r.clone(), c.clone() * v.clone());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Word, &S)> {
        self.terms.iter().map(|((l, r), c)| (l, r, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `<1⊗1, x (1⊗1)>`: the vacuum state kills every nonempty Wick word.
    pub fn vacuum_pairing(&self) -> S {
        self.terms.get(&(Word::empty(), Word::empty())).cloned().unwrap_or_else(S::zero)
    }

    /// Rewrites both legs as polynomials in the fields.
    pub fn to_monomials(&self, model: &Model<S>) -> MonomialTensor<S> {
        let mut ex = WickExpander::new(model);
        let mut out = MonomialTensor::zero();
        for ((l, r), c) in &self.terms {
            let pl = ex.expand(l);
            let pr = ex.expand(r);
            for (ml, cl) in &pl.terms {
                for (mr, cr) in &pr.terms {
                    out.add_term(ml.clone(), mr.clone(), c.clone() * cl.clone() * cr.clone());
                }
            }
        }
        out
    }
}

/// `sum c * A_{left} ⊗ A_{right}^op` with monomial legs.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct MonomialTensor<S> {
    pub terms: BTreeMap<(Vec<usize>, Vec<usize>), S>,
}

impl<S: Scalar> MonomialTensor<S> {
    pub fn zero() -> Self {
        MonomialTensor { terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, left: Vec<usize>, right: Vec<usize>, c: S) {
        if c.is_zero() {
            return;
        }
        let key = (left, right);
        let v = self.terms.get(&key).cloned().unwrap_or_else(S::zero) + c;
        if v.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, v);
        }
    }
}

/// `d_a W(e_w)` by the C-partition formula.
pub fn diff_quotient_word<S: Scalar>(model: &Model<S>, w: &Word, alpha: usize) -> Result<TensorSum<S>> {
    model.check_generator(alpha)?;
    let mut out = TensorSum::zero();
    if w.is_empty() {
        return Ok(out);
    }
    let labels = vertex_labels(alpha, w);
    let parts = enumerate_partitions(Family::C, w.level(), DEFAULT_ENUMERATION_CAP.max(w.level() + 1))?;
    for pi in &parts {
        let value = partition_weight(pi, &labels, model)?.value();
        if value.is_zero() {
            continue;
        }
        let left = Word::new(descending_labels(&pi.s_left(), |v| labels[v]));
        let right = Word::new(descending_labels(&pi.s_right(), |v| labels[v]));
        out.add_term(left, right, value);
    }
    Ok(out)
}

/// `d_a W(e_w)` for a truncated word, with the truncation bound checked.
pub fn diff_quotient<S: Scalar>(model: &Model<S>, w: &Word, alpha: usize, max_level: usize) -> Result<TensorSum<S>> {
    if w.level() > max_level {
        return Err(Error::LevelExceeded { level: w.level(), max: max_level });
    }
    diff_quotient_word(model, w, alpha)
}

/// `d_a p` from `d_a(A_b) = K[b][a] 1⊗1` and the bimodule Leibniz rule
/// `d(xy) = d(x) y + x d(y)`, where `x` acts on the left leg and `y` on the right leg.
pub fn diff_quotient_poly<S: Scalar>(model: &Model<S>, p: &Polynomial<S>, alpha: usize) -> Result<MonomialTensor<S>> {
    model.check_generator(alpha)?;
    let mut out = MonomialTensor::zero();
    for (m, c) in &p.terms {
        for (j, &b) in m.iter().enumerate() {
            model.check_generator(b)?;
            let k = model.k[b][alpha].clone();
            if k.is_zero() {
                continue;
            }
            out.add_term(m[..j].to_vec(), m[j + 1..].to_vec(), c.clone() * k);
        }
    }
    Ok(out)
}

/// `W(e_w)` as a polynomial in the fields by the D-partition formula.
pub fn wick_polynomial<S: Scalar>(w: &Word, model: &Model<S>, cap: usize) -> Result<Polynomial<S>> {
    let n = w.level();
    if n == 0 {
        return Ok(Polynomial::constant(S::one()));
    }
    let parts = enumerate_partitions(Family::D, n, cap)?;
    let labels: Vec<usize> = (1..=n).map(|k| w.alpha(k)).collect();
    let mut out = Polynomial::zero();
    for pi in &parts {
        let value = partition_weight(pi, &labels, model)?.value();
        if value.is_zero() {
            continue;
        }
        out.add_term(descending_labels(&pi.singletons, |v| labels[v - 1]), value);
    }
    Ok(out)
}
