//! Noncommutative polynomials in the fields `A_1..A_d`.

use std::collections::{BTreeMap, HashMap};

use crate::error::Result;
use crate::fock::{fields, FockOperator, FockVector, TruncatedFock, Word};
use crate::model::Model;
use crate::scalar::Scalar;

/// `sum c * A_{m[0]} A_{m[1]} ...`, keyed by monomial.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Polynomial<S> {
    pub terms: BTreeMap<Vec<usize>, S>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn zero() -> Self {
        Polynomial { terms: BTreeMap::new() }
    }

    pub fn constant(c: S) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn monomial(letters: Vec<usize>) -> Self {
        let mut p = Self::zero();
        p.add_term(letters, S::one());
        p
    }

    pub fn add_term(&mut self, m: Vec<usize>, c: S) {
        if c.is_zero() {
            return;
        }
        let v = self.terms.get(&m).cloned().unwrap_or_else(S::zero) + c;
        if v.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, v);
        }
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: &S, other: &Polynomial<S>) {
        for (m, v) in &other.terms {
            self.add_term(m.clone(), c.clone() * v.clone());
        }
    }

    /// `A_a * self`.
    pub fn left_mul(&self, a: usize) -> Polynomial<S> {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            let mut k = Vec::with_capacity(m.len() + 1);
            k.push(a);
            k.extend_from_slice(m);
            out.add_term(k, v.clone());
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Evaluates on the field matrices of `space`, on input levels up to `N - degree`.
    pub fn eval(&self, space: &TruncatedFock<S>) -> Result<FockOperator<S>> {
        Ok(self.eval_with(space, &fields(space)?))
    }

    pub fn eval_with(&self, space: &TruncatedFock<S>, fields: &[FockOperator<S>]) -> FockOperator<S> {
        let dim = space.total_dim();
        let cap = space.n as isize - self.degree() as isize;
        let start = FockOperator::identity(dim, space.n as isize).restrict_columns(&space.index, cap);
        let mut out = FockOperator::zero(dim, cap);
        for (m, c) in &self.terms {
            let mut op = start.clone();
            for &a in m.iter().rev() {
                op = fields[a].compose(&op);
            }
            out = out.lincomb(&S::one(), &op, c);
        }
        out.with_valid_degree(cap)
    }

    /// `p(A) Omega`, computed by applying the fields to vectors.
    pub fn apply_vacuum(&self, space: &TruncatedFock<S>) -> Result<FockVector<S>> {
        Ok(self.apply_vacuum_with(space, &fields(space)?))
    }

    pub fn apply_vacuum_with(&self, space: &TruncatedFock<S>, fields: &[FockOperator<S>]) -> FockVector<S> {
        let mut out = space.zero_vector();
        for (m, c) in &self.terms {
            let mut v = space.vacuum();
            for &a in m.iter().rev() {
                v = fields[a].apply(&v);
            }
            out.axpy(c, &v);
        }
        out
    }
}

/// `W(e_w)` as a polynomial, from `W(b w') = A_b W(w') - sum_p K[b][w'_p] (crossings) W(w' without p)`.
pub struct WickExpander<'a, S> {
    model: &'a Model<S>,
    memo: HashMap<Word, Polynomial<S>>,
}

impl<'a, S: Scalar> WickExpander<'a, S> {
    pub fn new(model: &'a Model<S>) -> Self {
        WickExpander { model, memo: HashMap::new() }
    }

    pub fn expand(&mut self, w: &Word) -> Polynomial<S> {
        if let Some(p) = self.memo.get(w) {
            return p.clone();
        }
        let p = if w.is_empty() {
            Polynomial::constant(S::one())
        } else {
            let b = w.letters()[0];
            let rest = Word::new(w.letters()[1..].to_vec());
            let mut p = self.expand(&rest).left_mul(b);
            for pos in 0..rest.level() {
                let k = self.model.k[b][rest.letters()[pos]].clone();
                if k.is_zero() {
                    continue;
                }
                let mut c = k;
                for &x in &rest.letters()[..pos] {
                    c = c * self.model.q_of(rest.letters()[pos], x).clone();
                }
                let sub = self.expand(&rest.without(pos));
                p.axpy(&-c, &sub);
            }
            p
        };
        self.memo.insert(w.clone(), p.clone());
        p
    }
}
