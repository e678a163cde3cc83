//! Conjugate variables as Fock vectors, right multiplications and Lipschitz norms.

use std::collections::{BTreeMap, HashMap};

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::bounds::{bound_table, BoundTable};
use crate::error::{Error, Result};
use crate::fock::{fields, free_annihilate, t_adjoint_apply, FockOperator, FockVector, TruncatedFock, WickTable, Word};
use crate::scalar::Scalar;

use super::diff::diff_quotient_word;

#[derive(Clone, Debug)]
pub struct ConjugateSeries<S> {
    pub alpha: usize,
    /// `terms[m-1]` is `xi_{m,a}`, supported on level `2m-1`.
    pub terms: Vec<FockVector<S>>,
    /// `sum_m (-1)^{m-1} xi_{m,a}`.
    pub partial_sum: FockVector<S>,
    /// `majorants[m-1]` bounds `||xi_{m,a}||_T`.
    pub majorants: Vec<f64>,
}

impl<S: Scalar> ConjugateSeries<S> {
    pub fn term_norms(&self, space: &TruncatedFock<S>) -> Vec<f64> {
        self.terms.iter().map(|t| space.norm(t)).collect()
    }
}

/// `conj(e_w)` expanded in the word basis.
pub fn conj_word<S: Scalar>(space: &TruncatedFock<S>, w: &Word) -> FockVector<S> {
    let mut partial: Vec<(Vec<usize>, S)> = vec![(Vec::new(), S::one())];
    for &a in w.letters() {
        let mut next = Vec::new();
        for (letters, c) in &partial {
            for (g, j) in space.model.j[a].iter().enumerate() {
                if j.is_zero() {
                    continue;
                }
                let mut l = letters.clone();
                l.push(g);
                next.push((l, c.clone() * j.clone()));
            }
        }
        partial = next;
    }
    FockVector::from_terms(
        space.total_dim(),
        partial.into_iter().map(|(l, c)| (space.index.index(&Word::new(l)), c)),
    )
}

/// `prod_{pairs v<u in w} q * prod_t q(a, w_t)`.
fn series_coefficient<S: Scalar>(space: &TruncatedFock<S>, alpha: usize, w: &Word) -> S {
    let m = &space.model;
    let mut c = S::one();
    let l = w.letters();
    for i in 0..l.len() {
        c = c * m.q_of(alpha, l[i]).clone();
        for j in i + 1..l.len() {
            c = c * m.q_of(l[i], l[j]).clone();
        }
    }
    c
}

/// `L_{wb} = l(e_b) l(e_{a_1}) ... l(e_{a_n})` as a composition of free annihilations.
fn free_word_operator<S: Scalar>(w: &Word, b: usize, frees: &[FockOperator<S>]) -> FockOperator<S> {
    let mut op = frees[b].clone();
    for k in 1..=w.level() {
        op = op.compose(&frees[w.alpha(k)]);
    }
    op
}

/// `xi_{m,a}` for `m = 1..=terms`, each from the sum over `b` and words `w` of length `m-1`.
pub fn conjugate_series<S: Scalar>(space: &TruncatedFock<S>, alpha: usize, terms: usize) -> Result<ConjugateSeries<S>> {
    space.model.check_generator(alpha)?;
    let needed = (2 * terms).saturating_sub(1);
    if needed > space.n {
        return Err(Error::TruncationTooSmall { needed, have: space.n });
    }
    let d = space.d();
    let frees: Vec<FockOperator<S>> = (0..d).map(|a| free_annihilate(space, a)).collect::<Result<_>>()?;
    let table: BoundTable = bound_table(&space.model, space.n, terms.max(1))?;
    let mut out = Vec::with_capacity(terms);
    for m in 1..=terms {
        let words: Vec<Word> = space.index.words(m - 1).collect();
        let pieces: Vec<FockVector<S>> = words
            .par_iter()
            .map(|w| {
                let coef = series_coefficient(space, alpha, w);
                let mut acc = space.zero_vector();
                if coef.is_zero() {
                    return acc;
                }
                let bar = conj_word(space, w);
                for b in 0..d {
                    let k = space.model.k[b][alpha].clone();
                    if k.is_zero() {
                        continue;
                    }
                    let l = free_word_operator(w, b, &frees);
                    acc.axpy(&(coef.clone() * k), &t_adjoint_apply(space, &l, &bar));
                }
                acc
            })
            .collect();
        let mut xi = space.zero_vector();
        for p in &pieces {
            xi.axpy(&S::one(), p);
        }
        out.push(xi);
    }
    let mut partial = space.zero_vector();
    for (i, t) in out.iter().enumerate() {
        let sign = if i % 2 == 0 { S::one() } else { -S::one() };
        partial.axpy(&sign, t);
    }
    Ok(ConjugateSeries { alpha, terms: out, partial_sum: partial, majorants: table.xi_majorant.clone() })
}

/// Right multiplication by `W(e_v)`: `e_x -> W(e_x) W(e_v) Omega`, on input levels `<= N - |v|`.
pub fn right_mult_matrix<S: Scalar>(space: &TruncatedFock<S>, v: &Word) -> Result<FockOperator<S>> {
    if v.level() > space.n {
        return Err(Error::LevelExceeded { level: v.level(), max: space.n });
    }
    Ok(right_mult_with(space, v, space.n - v.level(), &fields(space)?))
}

/// [`right_mult_matrix`] with columns only on input levels `<= cap`.
fn right_mult_with<S: Scalar>(space: &TruncatedFock<S>, v: &Word, cap: usize, fields: &[FockOperator<S>]) -> FockOperator<S> {
    let dim = space.total_dim();
    let end = space.index.range_upto(cap).end;
    let mut cols: Vec<FockVector<S>> = Vec::with_capacity(end);
    cols.push(space.basis_vector(v));
    for j in 1..end {
        let x = space.index.word(j);
        let b = x.letters()[0];
        let rest = Word::new(x.letters()[1..].to_vec());
        let mut col = fields[b].apply(&cols[space.index.index(&rest)]);
        for p in 0..rest.level() {
            let k = space.model.k[b][rest.letters()[p]].clone();
            if k.is_zero() {
                continue;
            }
            let c = k * space.crossing_to_front(rest.letters(), p);
            col.axpy(&-c, &cols[space.index.index(&rest.without(p))]);
        }
        cols.push(col);
    }
    let mut sparse: Vec<Vec<(usize, S)>> = cols.iter().map(|c| c.nonzeros().map(|(i, x)| (i, x.clone())).collect()).collect();
    sparse.resize(dim, Vec::new());
    let shifts = (0..=v.level()).map(|j| v.level() as isize - 2 * j as isize).collect();
    FockOperator::from_columns(sparse, cap as isize, shifts)
}

/// Largest input level used on each leg of the tensor-square norm.
pub const LIPSCHITZ_DOMAIN_CAP: usize = 2;

/// `G`-weighted matrix `L^T X L_in^{-T}` of an operator restricted to input levels `<= cap`.
fn weighted_dense<S: Scalar>(space: &TruncatedFock<S>, x: &FockOperator<S>, cap: usize) -> Result<DMatrix<f64>> {
    let dim = space.total_dim();
    let cols = space.index.range_upto(cap).end;
    let mut m = DMatrix::<f64>::zeros(dim, cols);
    for j in 0..cols {
        for (i, v) in x.column(j) {
            m[(*i, j)] = v.to_f64();
        }
    }
    let mut y = DMatrix::<f64>::zeros(dim, cols);
    for b in space.all_blocks() {
        let l = b.cholesky().ok_or(Error::GramNotPositive { level: b.level })?;
        let rows = DMatrix::from_fn(b.size(), cols, |r, c| m[(b.members[r], c)]);
        let t = l.transpose() * rows;
        for (r, &g) in b.members.iter().enumerate() {
            for c in 0..cols {
                y[(g, c)] = t[(r, c)];
            }
        }
    }
    let mut yt = y.transpose();
    for level in 0..=cap {
        for b in space.blocks(level) {
            let l = b.cholesky().ok_or(Error::GramNotPositive { level: b.level })?;
            let rows = DMatrix::from_fn(b.size(), dim, |r, c| yt[(b.members[r], c)]);
            let solved = l.solve_lower_triangular(&rows).ok_or(Error::GramNotPositive { level: b.level })?;
            for (r, &g) in b.members.iter().enumerate() {
                for c in 0..dim {
                    yt[(g, c)] = solved[(r, c)];
                }
            }
        }
    }
    Ok(yt.transpose())
}

/// Truncated norm of `sum_u X_u ⊗ Y_u` on the tensor square with `G ⊗ G` weights.
pub fn tensor_norm<S: Scalar>(
    space: &TruncatedFock<S>,
    pairs: &[(FockOperator<S>, FockOperator<S>)],
    left_cap: usize,
    right_cap: usize,
) -> Result<f64> {
    if pairs.is_empty() {
        return Ok(0.0);
    }
    let xs: Vec<DMatrix<f64>> = pairs.iter().map(|(x, _)| weighted_dense(space, x, left_cap)).collect::<Result<_>>()?;
    let ys: Vec<DMatrix<f64>> = pairs.iter().map(|(_, y)| weighted_dense(space, y, right_cap)).collect::<Result<_>>()?;
    let (dl, dr) = (xs[0].ncols(), ys[0].ncols());
    let mut gram = DMatrix::<f64>::zeros(dl * dr, dl * dr);
    for i in 0..pairs.len() {
        for j in 0..pairs.len() {
            let p = xs[i].transpose() * &xs[j];
            let q = ys[i].transpose() * &ys[j];
            gram += p.kronecker(&q);
        }
    }
    let gram = (&gram + gram.transpose()) * 0.5;
    let top = gram.symmetric_eigenvalues().iter().copied().fold(0.0f64, f64::max);
    Ok(top.max(0.0).sqrt())
}

/// Truncated norms of `d_b W(xi_{m,a})` for `m = 1..=terms`.
pub fn lipschitz_partial<S: Scalar>(space: &TruncatedFock<S>, beta: usize, alpha: usize, terms: usize) -> Result<Vec<f64>> {
    space.model.check_generator(beta)?;
    let series = conjugate_series(space, alpha, terms)?;
    let fields = fields(space)?;
    let mut out = Vec::with_capacity(terms);
    for xi in &series.terms {
        let mut grouped: BTreeMap<Word, BTreeMap<Word, S>> = BTreeMap::new();
        for (g, c) in xi.nonzeros() {
            let w = space.index.word(g);
            for (l, r, v) in diff_quotient_word(&space.model, &w, beta)?.terms() {
                let e = grouped.entry(l.clone()).or_default().entry(r.clone()).or_insert_with(S::zero);
                *e = e.clone() + c.clone() * v.clone();
            }
        }
        grouped.retain(|_, row| {
            row.retain(|_, v| !v.is_zero());
            !row.is_empty()
        });
        if grouped.is_empty() {
            out.push(0.0);
            continue;
        }
        let max_left = grouped.keys().map(Word::level).max().unwrap_or(0);
        let max_right = grouped.values().flat_map(|r| r.keys().map(Word::level)).max().unwrap_or(0);
        if max_left > space.n || max_right > space.n {
            return Err(Error::TruncationTooSmall { needed: max_left.max(max_right), have: space.n });
        }
        let left_cap = LIPSCHITZ_DOMAIN_CAP.min(space.n - max_left);
        let right_cap = LIPSCHITZ_DOMAIN_CAP.min(space.n - max_right);
        let table = WickTable::build(space, max_left, left_cap)?;
        let mut rights: HashMap<&Word, FockOperator<S>> = HashMap::new();
        let mut pairs = Vec::new();
        for (l, row) in &grouped {
            let mut y = FockOperator::zero(space.total_dim(), right_cap as isize);
            for (r, v) in row {
                let op = rights.entry(r).or_insert_with(|| right_mult_with(space, r, right_cap, &fields));
                y = y.lincomb(&S::one(), op, v);
            }
            pairs.push((table.get(l).clone(), y));
        }
        out.push(tensor_norm(space, &pairs, left_cap, right_cap)?);
    }
    Ok(out)
}
