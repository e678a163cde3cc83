//! Creation, annihilation, field and Wick operators; adjoints and norms for `<.,.>_T`.

use std::collections::HashMap;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::linalg::spectral_norm;
use super::operator::FockOperator;
use super::space::TruncatedFock;
use super::vector::FockVector;
use super::word::Word;

#[derive(Clone, Debug)]
pub enum OpKind<S> {
    Create(usize),
    Annihilate(usize),
    FreeAnnihilate(usize),
    Field(usize),
    Wick(FockVector<S>),
}

pub fn op_matrix<S: Scalar>(space: &TruncatedFock<S>, kind: &OpKind<S>) -> Result<FockOperator<S>> {
    match kind {
        OpKind::Create(a) => create(space, *a),
        OpKind::Annihilate(a) => annihilate(space, *a),
        OpKind::FreeAnnihilate(a) => free_annihilate(space, *a),
        OpKind::Field(a) => field(space, *a),
        OpKind::Wick(xi) => wick(space, xi),
    }
}

fn build_columns<S: Scalar>(
    space: &TruncatedFock<S>,
    column: impl Fn(&Word) -> Vec<(usize, S)> + Sync,
) -> Vec<Vec<(usize, S)>> {
    (0..space.total_dim()).into_par_iter().map(|j| column(&space.index.word(j))).collect()
}

/// `a*(e_a)`: prepends `a`; the top level is mapped to zero.
pub fn create<S: Scalar>(space: &TruncatedFock<S>, a: usize) -> Result<FockOperator<S>> {
    space.model.check_generator(a)?;
    let n = space.n;
    let cols = build_columns(space, |w| {
        if w.level() >= n {
            Vec::new()
        } else {
            vec![(space.index.index(&w.prepend(a)), S::one())]
        }
    });
    Ok(FockOperator::from_columns(cols, n as isize - 1, vec![1]))
}

/// `a(sum_b c_b e_b)` with real coefficients: deletes a letter, weighted by the crossings it passes.
fn annihilate_combination<S: Scalar>(space: &TruncatedFock<S>, coeffs: &[S]) -> FockOperator<S> {
    let cols = build_columns(space, |w| {
        let mut out = Vec::new();
        for (p, &b) in w.letters().iter().enumerate() {
            if coeffs[b].is_zero() {
                continue;
            }
            let c = space.crossing_to_front(w.letters(), p);
            if !c.is_zero() {
                out.push((space.index.index(&w.without(p)), coeffs[b].clone() * c));
            }
        }
        out
    });
    FockOperator::from_columns(cols, space.n as isize, vec![-1])
}

/// `a(e_a)`.
pub fn annihilate<S: Scalar>(space: &TruncatedFock<S>, a: usize) -> Result<FockOperator<S>> {
    space.model.check_generator(a)?;
    let mut coeffs = vec![S::zero(); space.d()];
    coeffs[a] = S::one();
    Ok(annihilate_combination(space, &coeffs))
}

/// Free annihilation `l(e_a)*`: removes the leftmost letter when it is `a`.
pub fn free_annihilate<S: Scalar>(space: &TruncatedFock<S>, a: usize) -> Result<FockOperator<S>> {
    space.model.check_generator(a)?;
    let cols = build_columns(space, |w| match w.letters().first() {
        Some(&b) if b == a => vec![(space.index.index(&Word::new(w.letters()[1..].to_vec())), S::one())],
        _ => Vec::new(),
    });
    Ok(FockOperator::from_columns(cols, space.n as isize, vec![-1]))
}

/// `A_a = a*(e_a) + a(conj(e_a))`.
pub fn field<S: Scalar>(space: &TruncatedFock<S>, a: usize) -> Result<FockOperator<S>> {
    let up = create(space, a)?;
    let down = annihilate_combination(space, &space.model.j[a]);
    Ok(up.add(&down))
}

/// `A_0, ..., A_{d-1}`.
pub fn fields<S: Scalar>(space: &TruncatedFock<S>) -> Result<Vec<FockOperator<S>>> {
    (0..space.d()).map(|a| field(space, a)).collect()
}

/// Wick operators `W(e_w)` for every word up to `max_len`, with columns kept only on
/// input levels `<= cap`.
#[derive(Clone, Debug)]
pub struct WickTable<S> {
    pub cap: usize,
    pub max_len: usize,
    ops: HashMap<Word, FockOperator<S>>,
}

impl<S: Scalar> WickTable<S> {
    pub fn build(space: &TruncatedFock<S>, max_len: usize, cap: usize) -> Result<Self> {
        if max_len + cap > space.n {
            return Err(Error::LevelExceeded { level: max_len + cap, max: space.n });
        }
        let fields = fields(space)?;
        let mut ops: HashMap<Word, FockOperator<S>> = HashMap::new();
        let id = FockOperator::identity(space.total_dim(), space.n as isize).restrict_columns(&space.index, cap as isize);
        ops.insert(Word::empty(), id);
        for len in 1..=max_len {
            let words: Vec<Word> = space.index.words(len).collect();
            let built: Vec<(Word, FockOperator<S>)> = words
                .into_par_iter()
                .map(|w| {
                    let b = w.letters()[0];
                    let rest = Word::new(w.letters()[1..].to_vec());
                    let mut op = fields[b].compose(&ops[&rest]);
                    for p in 0..rest.level() {
                        let kc = space.model.k[b][rest.letters()[p]].clone();
                        if kc.is_zero() {
                            continue;
                        }
                        let c = kc * space.crossing_to_front(rest.letters(), p);
                        if !c.is_zero() {
                            op = op.lincomb(&S::one(), &ops[&rest.without(p)], &-c);
                        }
                    }
                    (w, op.with_valid_degree(cap as isize))
                })
                .collect();
            ops.extend(built);
        }
        Ok(WickTable { cap, max_len, ops })
    }

    pub fn get(&self, w: &Word) -> &FockOperator<S> {
        &self.ops[w]
    }

    /// `W(xi)` for a vector supported on levels `<= max_len`.
    pub fn of_vector(&self, space: &TruncatedFock<S>, xi: &FockVector<S>) -> FockOperator<S> {
        let mut out = FockOperator::zero(space.total_dim(), self.cap as isize);
        for (g, c) in xi.nonzeros() {
            out = out.lincomb(&S::one(), &self.ops[&space.index.word(g)], c);
        }
        out.with_valid_degree(self.cap as isize)
    }
}

/// `W(xi)`, the operator with `W(xi) Omega = xi`, valid up to input level `N - top(xi)`.
pub fn wick<S: Scalar>(space: &TruncatedFock<S>, xi: &FockVector<S>) -> Result<FockOperator<S>> {
    space.check_vector(xi)?;
    let top = xi.top_level(&space.index).unwrap_or(0);
    let table = WickTable::build(space, top, space.n - top)?;
    Ok(table.of_vector(space, xi))
}

pub fn wick_word<S: Scalar>(space: &TruncatedFock<S>, w: &Word) -> Result<FockOperator<S>> {
    if w.level() > space.n {
        return Err(Error::LevelExceeded { level: w.level(), max: space.n });
    }
    wick(space, &space.basis_vector(w))
}

/// `G^{-1} M^T G`, the adjoint for `<.,.>_T`.
pub fn t_adjoint<S: Scalar>(space: &TruncatedFock<S>, m: &FockOperator<S>) -> FockOperator<S> {
    let mt = m.transpose();
    let dim = space.total_dim();
    let cols: Vec<Vec<(usize, S)>> = (0..dim)
        .into_par_iter()
        .map(|j| {
            let (b, _) = space.block_of(j);
            let block = space.block(b);
            let gj = FockVector::from_terms(
                dim,
                block.members.iter().map(|&i| (i, space.gram_entry(i, j))),
            );
            let y = space.solve_gram(&mt.apply(&gj));
            y.nonzeros().map(|(i, c)| (i, c.clone())).collect()
        })
        .collect();
    FockOperator::from_columns(cols, m.valid_degree, mt.shifts().to_vec())
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Largest singular value of `G^{1/2} M G^{-1/2}` on input levels `<= valid_degree`.
pub fn t_norm<S: Scalar>(space: &TruncatedFock<S>, m: &FockOperator<S>) -> Result<f64> {
    if m.valid_degree < 0 {
        return Ok(0.0);
    }
    let nb = space.all_blocks().len();
    let max_in = space.index.range_upto(m.valid_degree.min(space.n as isize) as usize).end;
    let mut uf = UnionFind((0..2 * nb).collect());
    let mut active = vec![false; nb];
    for j in 0..max_in {
        let col = m.column(j);
        if col.is_empty() {
            continue;
        }
        let (bj, _) = space.block_of(j);
        active[bj] = true;
        for (i, _) in col {
            uf.union(bj, nb + space.block_of(*i).0);
        }
    }
    let mut comps: HashMap<usize, (Vec<usize>, Vec<usize>)> = HashMap::new();
    for b in 0..nb {
        if active[b] {
            let r = uf.find(b);
            comps.entry(r).or_default().0.push(b);
        }
    }
    for b in 0..nb {
        let r = uf.find(nb + b);
        if let Some(c) = comps.get_mut(&r) {
            c.1.push(b);
        }
    }
    let comps: Vec<(Vec<usize>, Vec<usize>)> = comps.into_values().collect();
    let norms: Vec<Result<f64>> = comps
        .par_iter()
        .map(|(ins, outs)| component_norm(space, m, ins, outs))
        .collect();
    let mut best = 0.0f64;
    for n in norms {
        best = best.max(n?);
    }
    Ok(best)
}

fn component_norm<S: Scalar>(space: &TruncatedFock<S>, m: &FockOperator<S>, ins: &[usize], outs: &[usize]) -> Result<f64> {
    let row_pos: HashMap<usize, usize> = outs
        .iter()
        .flat_map(|&b| space.block(b).members.iter().copied())
        .enumerate()
        .map(|(k, g)| (g, k))
        .collect();
    let in_members: Vec<usize> = ins.iter().flat_map(|&b| space.block(b).members.iter().copied()).collect();
    let (r, c) = (row_pos.len(), in_members.len());
    let mut y = DMatrix::<f64>::zeros(r, c);
    for (k, &j) in in_members.iter().enumerate() {
        for (i, v) in m.column(j) {
            y[(row_pos[i], k)] = v.to_f64();
        }
    }
    // y <- L_out^T y, blockwise.
    let mut offset = 0;
    for &b in outs {
        let blk = space.block(b);
        let l = blk.cholesky().ok_or(Error::GramNotPositive { level: blk.level })?;
        let s = blk.size();
        let rows = l.transpose() * y.rows(offset, s);
        y.rows_mut(offset, s).copy_from(&rows);
        offset += s;
    }
    // y^T <- L_in^{-1} y^T, blockwise.
    let mut yt = y.transpose();
    let mut offset = 0;
    for &b in ins {
        let blk = space.block(b);
        let l = blk.cholesky().ok_or(Error::GramNotPositive { level: blk.level })?;
        let s = blk.size();
        let part = l
            .solve_lower_triangular(&yt.rows(offset, s).into_owned())
            .ok_or(Error::GramNotPositive { level: blk.level })?;
        yt.rows_mut(offset, s).copy_from(&part);
        offset += s;
    }
    Ok(spectral_norm(&yt))
}

/// `<Omega, M Omega>_T`.
pub fn vacuum_expectation<S: Scalar>(_space: &TruncatedFock<S>, m: &FockOperator<S>) -> S {
    m.entry(0, 0)
}

/// `G^{-1} M^T G x`, the T-adjoint applied to a single vector.
pub fn t_adjoint_apply<S: Scalar>(space: &TruncatedFock<S>, m: &FockOperator<S>, x: &FockVector<S>) -> FockVector<S> {
    let gx = space.apply_gram(x);
    let mut y = space.zero_vector();
    for j in 0..m.dim() {
        for (i, v) in m.column(j) {
            let c = gx.get(*i);
            if !c.is_zero() {
                y.add_at(j, v.clone() * c.clone());
            }
        }
    }
    space.solve_gram(&y)
}
