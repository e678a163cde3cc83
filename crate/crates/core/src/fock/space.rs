//! The truncated Fock space and its block-diagonal Gram matrices.

use std::collections::HashMap;
use std::ops::Range;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::Model;
use crate::scalar::Scalar;

use super::linalg::{min_eigenvalue, to_dmatrix, Ldl};
use super::vector::FockVector;
use super::word::{LevelIndex, Word};

/// Default ceiling on the total dimension `sum_n d^n`.
pub const DEFAULT_DIM_BUDGET: usize = 250_000;

/// Gram entries vanish unless the two words are rearrangements of each other, so each
/// level splits into blocks indexed by letter multisets.
#[derive(Clone, Debug)]
pub struct GramBlock<S> {
    pub level: usize,
    /// Global indices, ascending.
    pub members: Vec<usize>,
    /// Row-major Gram entries among `members`.
    pub matrix: Vec<S>,
    ldl: Ldl<S>,
    /// Lower Cholesky factor of the double-precision Gram block.
    chol: Option<DMatrix<f64>>,
}

impl<S: Scalar> GramBlock<S> {
    fn new(level: usize, members: Vec<usize>, matrix: Vec<S>) -> Result<Self> {
        let k = members.len();
        let ldl = Ldl::factor(&matrix, k).ok_or(Error::GramNotPositive { level })?;
        if !ldl.is_positive() {
            return Err(Error::GramNotPositive { level });
        }
        let chol = to_dmatrix(&matrix, k).cholesky().map(|c| c.l());
        if !S::EXACT && chol.is_none() {
            return Err(Error::GramNotPositive { level });
        }
        Ok(GramBlock { level, members, matrix, ldl, chol })
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &S {
        &self.matrix[i * self.members.len() + j]
    }

    pub fn ldl_pivots(&self) -> &[S] {
        self.ldl.pivots()
    }

    pub fn cholesky(&self) -> Option<&DMatrix<f64>> {
        self.chol.as_ref()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&to_dmatrix(&self.matrix, self.members.len()))
    }
}

#[derive(Clone, Debug)]
pub struct TruncatedFock<S> {
    pub model: Model<S>,
    /// Truncation level `N`.
    pub n: usize,
    pub index: LevelIndex,
    blocks: Vec<GramBlock<S>>,
    level_blocks: Vec<Range<usize>>,
    /// Per global index: (block id, position inside the block).
    slot: Vec<(u32, u32)>,
}

pub fn build_space<S: Scalar>(model: &Model<S>, n: usize) -> Result<TruncatedFock<S>> {
    build_space_with_budget(model, n, DEFAULT_DIM_BUDGET)
}

/// Builds levels `0..=n`, computing each Gram entry from level `n-1` by peeling the
/// top letter of the second word with the annihilation expansion.
pub fn build_space_with_budget<S: Scalar>(model: &Model<S>, n: usize, budget: usize) -> Result<TruncatedFock<S>> {
    let d = model.d;
    let mut dim = 0usize;
    let mut level_dim = 1usize;
    for _ in 0..=n {
        dim = dim.saturating_add(level_dim);
        level_dim = level_dim.saturating_mul(d);
    }
    if dim > budget {
        return Err(Error::BudgetExceeded { dim, budget });
    }
    let index = LevelIndex::new(d, n);
    let mut space = TruncatedFock {
        model: model.clone(),
        n,
        index,
        blocks: Vec::new(),
        level_blocks: Vec::new(),
        slot: vec![(0, 0); dim],
    };
    let vacuum = GramBlock::new(0, vec![0], vec![S::one()])?;
    space.blocks.push(vacuum);
    space.level_blocks.push(0..1);
    for level in 1..=n {
        let groups = multiset_groups(&space.index, level);
        let built: Vec<Result<GramBlock<S>>> = groups
            .into_par_iter()
            .map(|members| {
                let matrix = space.gram_block_entries(level, &members);
                GramBlock::new(level, members, matrix)
            })
            .collect();
        let start = space.blocks.len();
        for b in built {
            let b = b?;
            let id = space.blocks.len() as u32;
            for (pos, &g) in b.members.iter().enumerate() {
                space.slot[g] = (id, pos as u32);
            }
            space.blocks.push(b);
        }
        space.level_blocks.push(start..space.blocks.len());
    }
    Ok(space)
}

fn multiset_groups(index: &LevelIndex, level: usize) -> Vec<Vec<usize>> {
    let mut key_to_group: HashMap<Vec<u16>, usize> = HashMap::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (local, w) in index.words(level).enumerate() {
        let mut counts = vec![0u16; index.d];
        for &a in w.letters() {
            counts[a] += 1;
        }
        let g = *key_to_group.entry(counts).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(index.range(level).start + local);
    }
    groups
}

impl<S: Scalar> TruncatedFock<S> {
    fn gram_block_entries(&self, level: usize, members: &[usize]) -> Vec<S> {
        let k = members.len();
        let words: Vec<Word> = members.iter().map(|&g| self.index.word(g)).collect();
        let mut matrix = vec![S::zero(); k * k];
        for (i, u) in words.iter().enumerate() {
            for (j, v) in words.iter().enumerate() {
                let top = v.letters()[0];
                let rest = self.index.index(&Word::new(v.letters()[1..].to_vec()));
                let mut sum = S::zero();
                for p in 0..level {
                    if u.letters()[p] != top {
                        continue;
                    }
                    let coef = self.crossing_to_front(u.letters(), p);
                    if coef.is_zero() {
                        continue;
                    }
                    let reduced = self.index.index(&u.without(p));
                    sum = sum + coef * self.gram_entry(reduced, rest);
                }
                matrix[i * k + j] = sum;
            }
        }
        matrix
    }

    /// `prod_{p' < p} q(w[p], w[p'])`: the weight for moving letter `p` past everything on its left.
    pub fn crossing_to_front(&self, letters: &[usize], p: usize) -> S {
        let mut c = S::one();
        for &b in &letters[..p] {
            c = c * self.model.q_of(letters[p], b).clone();
        }
        c
    }

    pub fn total_dim(&self) -> usize {
        self.index.total_dim()
    }

    pub fn d(&self) -> usize {
        self.model.d
    }

    /// `<e_u, e_v>_T` for global indices.
    pub fn gram_entry(&self, u: usize, v: usize) -> S {
        let (bu, pu) = self.slot[u];
        let (bv, pv) = self.slot[v];
        if bu != bv {
            return S::zero();
        }
        self.blocks[bu as usize].entry(pu as usize, pv as usize).clone()
    }

    pub fn blocks(&self, level: usize) -> &[GramBlock<S>] {
        &self.blocks[self.level_blocks[level].clone()]
    }

    pub fn all_blocks(&self) -> &[GramBlock<S>] {
        &self.blocks
    }

    pub fn block_of(&self, global: usize) -> (usize, usize) {
        let (b, p) = self.slot[global];
        (b as usize, p as usize)
    }

    pub fn block(&self, id: usize) -> &GramBlock<S> {
        &self.blocks[id]
    }

    /// Full `d^n x d^n` Gram matrix of level `n`.
    pub fn gram_dense(&self, level: usize) -> Vec<Vec<S>> {
        let r = self.index.range(level);
        r.clone().map(|u| r.clone().map(|v| self.gram_entry(u, v)).collect()).collect()
    }

    pub fn min_eigenvalue(&self, level: usize) -> f64 {
        self.blocks(level).iter().map(|b| b.min_eigenvalue()).fold(f64::INFINITY, f64::min)
    }

    /// `true` when every `L D L^T` pivot of the level is strictly positive.
    pub fn pivots_positive(&self, level: usize) -> bool {
        self.blocks(level).iter().all(|b| b.ldl.is_positive())
    }

    pub fn check_vector(&self, x: &FockVector<S>) -> Result<()> {
        if x.dim() != self.total_dim() {
            return Err(Error::LevelExceeded { level: self.index.level_of(x.dim().max(1) - 1), max: self.n });
        }
        Ok(())
    }

    /// `G x`.
    pub fn apply_gram(&self, x: &FockVector<S>) -> FockVector<S> {
        let mut out = FockVector::zeros(self.total_dim());
        for b in &self.blocks {
            let k = b.size();
            let xs: Vec<&S> = b.members.iter().map(|&g| x.get(g)).collect();
            if xs.iter().all(|c| c.is_zero()) {
                continue;
            }
            for i in 0..k {
                let mut s = S::zero();
                for j in 0..k {
                    if !xs[j].is_zero() {
                        s = s + b.entry(i, j).clone() * xs[j].clone();
                    }
                }
                out.coeffs[b.members[i]] = s;
            }
        }
        out
    }

    /// `G^{-1} x`.
    pub fn solve_gram(&self, x: &FockVector<S>) -> FockVector<S> {
        let mut out = FockVector::zeros(self.total_dim());
        for b in &self.blocks {
            let mut rhs: Vec<S> = b.members.iter().map(|&g| x.get(g).clone()).collect();
            if rhs.iter().all(|c| c.is_zero()) {
                continue;
            }
            b.ldl.solve_in_place(&mut rhs);
            for (&g, c) in b.members.iter().zip(rhs) {
                out.coeffs[g] = c;
            }
        }
        out
    }

    /// `<x, y>_T` (all data real).
    pub fn inner(&self, x: &FockVector<S>, y: &FockVector<S>) -> S {
        let gy = self.apply_gram(y);
        let mut s = S::zero();
        for (a, b) in x.coeffs.iter().zip(&gy.coeffs) {
            if !a.is_zero() && !b.is_zero() {
                s = s + a.clone() * b.clone();
            }
        }
        s
    }

    pub fn norm(&self, x: &FockVector<S>) -> f64 {
        self.inner(x, x).to_f64().max(0.0).sqrt()
    }

    pub fn zero_vector(&self) -> FockVector<S> {
        FockVector::zeros(self.total_dim())
    }

    pub fn basis_vector(&self, w: &Word) -> FockVector<S> {
        FockVector::basis(self.total_dim(), self.index.index(w))
    }

    pub fn vacuum(&self) -> FockVector<S> {
        FockVector::basis(self.total_dim(), 0)
    }

    /// Multiplies the Gram matrix of one level by `scale` and refactors it.
    /// Only meant for negative-control tests of the bound checks.
    pub fn perturb_gram(&mut self, level: usize, scale: &S) -> Result<()> {
        for id in self.level_blocks[level].clone() {
            let b = &self.blocks[id];
            let matrix: Vec<S> = b.matrix.iter().map(|x| x.clone() * scale.clone()).collect();
            self.blocks[id] = GramBlock::new(level, b.members.clone(), matrix)?;
        }
        Ok(())
    }
}
