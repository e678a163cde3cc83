use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::scalar::Scalar;

use super::vector::FockVector;
use super::word::LevelIndex;

/// An operator on the truncated space, stored column by column.
///
/// `valid_degree` is the largest input level on which the matrix agrees with the
/// untruncated operator (negative when there is none). `shifts` lists the level
/// changes `out - in` the operator may produce.
#[derive(Clone, Debug, PartialEq)]
pub struct FockOperator<S> {
    dim: usize,
    cols: Vec<Vec<(usize, S)>>,
    pub valid_degree: isize,
    shifts: Vec<isize>,
}

fn push_sorted<S: Scalar>(acc: BTreeMap<usize, S>) -> Vec<(usize, S)> {
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

impl<S: Scalar> FockOperator<S> {
    pub fn zero(dim: usize, valid_degree: isize) -> Self {
        FockOperator { dim, cols: vec![Vec::new(); dim], valid_degree, shifts: Vec::new() }
    }

    pub fn identity(dim: usize, valid_degree: isize) -> Self {
        let cols = (0..dim).map(|j| vec![(j, S::one())]).collect();
        FockOperator { dim, cols, valid_degree, shifts: vec![0] }
    }

    /// Builds from columns given as `(row, value)` lists; repeated rows are summed.
    pub fn from_columns(cols: Vec<Vec<(usize, S)>>, valid_degree: isize, shifts: Vec<isize>) -> Self {
        let dim = cols.len();
        let cols = cols
            .into_iter()
            .map(|c| {
                let mut acc = BTreeMap::new();
                for (i, v) in c {
                    let e = acc.entry(i).or_insert_with(S::zero);
                    *e = e.clone() + v;
                }
                push_sorted(acc)
            })
            .collect();
        let mut shifts = shifts;
        shifts.sort_unstable();
        shifts.dedup();
        FockOperator { dim, cols, valid_degree, shifts }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shifts(&self) -> &[isize] {
        &self.shifts
    }

    pub fn max_up_shift(&self) -> isize {
        self.shifts.iter().copied().max().unwrap_or(0)
    }

    pub fn column(&self, j: usize) -> &[(usize, S)] {
        &self.cols[j]
    }

    pub fn entry(&self, i: usize, j: usize) -> S {
        match self.cols[j].binary_search_by_key(&i, |(r, _)| *r) {
            Ok(k) => self.cols[j][k].1.clone(),
            Err(_) => S::zero(),
        }
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn apply(&self, x: &FockVector<S>) -> FockVector<S> {
        let mut out = FockVector::zeros(self.dim);
        for (j, c) in x.nonzeros() {
            for (i, v) in &self.cols[j] {
                out.add_at(*i, v.clone() * c.clone());
            }
        }
        out
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &FockOperator<S>) -> FockOperator<S> {
        let cols: Vec<Vec<(usize, S)>> = rhs
            .cols
            .par_iter()
            .map(|col| {
                let mut acc: BTreeMap<usize, S> = BTreeMap::new();
                for (k, b) in col {
                    for (i, a) in &self.cols[*k] {
                        let e = acc.entry(*i).or_insert_with(S::zero);
                        *e = e.clone() + a.clone() * b.clone();
                    }
                }
                push_sorted(acc)
            })
            .collect();
        let mut shifts: Vec<isize> =
            self.shifts.iter().flat_map(|a| rhs.shifts.iter().map(move |b| a + b)).collect();
        shifts.sort_unstable();
        shifts.dedup();
        let vd = rhs.valid_degree.min(self.valid_degree - rhs.max_up_shift());
        FockOperator { dim: self.dim, cols, valid_degree: vd, shifts }
    }

    /// `a * self + b * other`.
    pub fn lincomb(&self, a: &S, other: &FockOperator<S>, b: &S) -> FockOperator<S> {
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(x, y)| {
                let mut acc: BTreeMap<usize, S> = BTreeMap::new();
                for (i, v) in x {
                    acc.insert(*i, a.clone() * v.clone());
                }
                for (i, v) in y {
                    let e = acc.entry(*i).or_insert_with(S::zero);
                    *e = e.clone() + b.clone() * v.clone();
                }
                push_sorted(acc)
            })
            .collect();
        let mut shifts = self.shifts.clone();
        shifts.extend_from_slice(&other.shifts);
        shifts.sort_unstable();
        shifts.dedup();
        FockOperator { dim: self.dim, cols, valid_degree: self.valid_degree.min(other.valid_degree), shifts }
    }

    pub fn add(&self, other: &FockOperator<S>) -> FockOperator<S> {
        self.lincomb(&S::one(), other, &S::one())
    }

    pub fn sub(&self, other: &FockOperator<S>) -> FockOperator<S> {
        self.lincomb(&S::one(), other, &-S::one())
    }

    pub fn scaled(&self, c: &S) -> FockOperator<S> {
        self.lincomb(c, &FockOperator::zero(self.dim, self.valid_degree), &S::zero())
    }

    /// Plain matrix transpose in the word basis.
    pub fn transpose(&self) -> FockOperator<S> {
        let mut cols: Vec<Vec<(usize, S)>> = vec![Vec::new(); self.dim];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, v) in col {
                cols[*i].push((j, v.clone()));
            }
        }
        let shifts = self.shifts.iter().map(|s| -s).rev().collect();
        FockOperator { dim: self.dim, cols, valid_degree: self.valid_degree, shifts }
    }

    /// Drops every column above input level `cap` and lowers `valid_degree` to match.
    pub fn restrict_columns(&self, index: &LevelIndex, cap: isize) -> FockOperator<S> {
        let mut out = self.clone();
        for (j, col) in out.cols.iter_mut().enumerate() {
            if index.level_of(j) as isize > cap {
                col.clear();
            }
        }
        out.valid_degree = out.valid_degree.min(cap);
        out
    }

    pub fn with_valid_degree(mut self, vd: isize) -> Self {
        self.valid_degree = vd;
        self
    }

    /// `true` when every nonzero entry lies at a declared level shift.
    pub fn respects_grading(&self, index: &LevelIndex) -> bool {
        self.cols.iter().enumerate().all(|(j, col)| {
            let lj = index.level_of(j) as isize;
            col.iter().all(|(i, _)| self.shifts.contains(&(index.level_of(*i) as isize - lj)))
        })
    }

    /// Output levels reachable from each input level.
    pub fn grading(&self, index: &LevelIndex) -> Vec<Vec<usize>> {
        (0..=index.n_max as isize)
            .map(|n| {
                self.shifts
                    .iter()
                    .map(|s| n + s)
                    .filter(|m| *m >= 0 && *m <= index.n_max as isize)
                    .map(|m| m as usize)
                    .collect()
            })
            .collect()
    }

    /// Largest absolute entry among columns of level at most `max_level`.
    pub fn max_abs_upto(&self, index: &LevelIndex, max_level: isize) -> f64 {
        let mut worst = 0.0f64;
        for (j, col) in self.cols.iter().enumerate() {
            if index.level_of(j) as isize > max_level {
                continue;
            }
            for (_, v) in col {
                worst = worst.max(v.to_f64().abs());
            }
        }
        worst
    }

    /// Exact test that all columns of level at most `max_level` vanish.
    pub fn is_zero_upto(&self, index: &LevelIndex, max_level: isize) -> bool {
        self.cols.iter().enumerate().all(|(j, col)| index.level_of(j) as isize > max_level || col.is_empty())
    }
}
