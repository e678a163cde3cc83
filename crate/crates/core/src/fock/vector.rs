use crate::scalar::Scalar;

use super::word::LevelIndex;

/// Dense coefficient vector in the concatenated word basis.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector<S> {
    pub coeffs: Vec<S>,
}

impl<S: Scalar> FockVector<S> {
    pub fn zeros(dim: usize) -> Self {
        FockVector { coeffs: vec![S::zero(); dim] }
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.coeffs[i] = S::one();
        v
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (usize, S)>) -> Self {
        let mut v = Self::zeros(dim);
        for (i, c) in terms {
            v.coeffs[i] = v.coeffs[i].clone() + c;
        }
        v
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn get(&self, i: usize) -> &S {
        &self.coeffs[i]
    }

    pub fn add_at(&mut self, i: usize, c: S) {
        if !c.is_zero() {
            self.coeffs[i] = self.coeffs[i].clone() + c;
        }
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: &S, other: &FockVector<S>) {
        if c.is_zero() {
            return;
        }
        for (x, y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !y.is_zero() {
                *x = x.clone() + c.clone() * y.clone();
            }
        }
    }

    pub fn scaled(&self, c: &S) -> FockVector<S> {
        FockVector { coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect() }
    }

    pub fn sub(&self, other: &FockVector<S>) -> FockVector<S> {
        FockVector {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x.clone() - y.clone()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|x| x.is_zero())
    }

    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, &S)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    /// Highest level carrying a nonzero coefficient.
    pub fn top_level(&self, index: &LevelIndex) -> Option<usize> {
        self.nonzeros().map(|(i, _)| index.level_of(i)).max()
    }

    pub fn levels(&self, index: &LevelIndex) -> Vec<usize> {
        let mut ls: Vec<usize> = self.nonzeros().map(|(i, _)| index.level_of(i)).collect();
        ls.sort_unstable();
        ls.dedup();
        ls
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max)
    }

    /// Largest coefficient difference, computed exactly before conversion.
    pub fn max_abs_diff(&self, other: &FockVector<S>) -> f64 {
        self.sub(other).max_abs()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|x| x.to_f64()).collect()
    }
}
