//! Dense symmetric factorizations used on Gram blocks.

use nalgebra::DMatrix;

use crate::scalar::Scalar;

/// `A = L D L^T` with unit lower-triangular `L`.
#[derive(Clone, Debug)]
pub struct Ldl<S> {
    n: usize,
    l: Vec<S>,
    d: Vec<S>,
}

impl<S: Scalar> Ldl<S> {
    /// Factors the row-major symmetric matrix `a`; `None` on a zero pivot.
    pub fn factor(a: &[S], n: usize) -> Option<Self> {
        let mut l = vec![S::zero(); n * n];
        let mut d: Vec<S> = Vec::with_capacity(n);
        for j in 0..n {
            let mut djj = a[j * n + j].clone();
            for k in 0..j {
                let ljk = &l[j * n + k];
                if !ljk.is_zero() {
                    djj = djj - ljk.clone() * ljk.clone() * d[k].clone();
                }
            }
            if djj.is_zero() {
                return None;
            }
            l[j * n + j] = S::one();
            for i in j + 1..n {
                let mut s = a[i * n + j].clone();
                for k in 0..j {
                    let (lik, ljk) = (&l[i * n + k], &l[j * n + k]);
                    if !lik.is_zero() && !ljk.is_zero() {
                        s = s - lik.clone() * ljk.clone() * d[k].clone();
                    }
                }
                if !s.is_zero() {
                    l[i * n + j] = s / djj.clone();
                }
            }
            d.push(djj);
        }
        Some(Ldl { n, l, d })
    }

    pub fn pivots(&self) -> &[S] {
        &self.d
    }

    pub fn is_positive(&self) -> bool {
        self.d.iter().all(|x| x.is_positive())
    }

    pub fn solve_in_place(&self, b: &mut [S]) {
        let n = self.n;
        for i in 0..n {
            for k in 0..i {
                let lik = &self.l[i * n + k];
                if !lik.is_zero() && !b[k].is_zero() {
                    b[i] = b[i].clone() - lik.clone() * b[k].clone();
                }
            }
        }
        for i in 0..n {
            b[i] = b[i].clone() / self.d[i].clone();
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let lki = &self.l[k * n + i];
                if !lki.is_zero() && !b[k].is_zero() {
                    b[i] = b[i].clone() - lki.clone() * b[k].clone();
                }
            }
        }
    }
}

/// Row-major `n x n` scalars to a double-precision matrix.
pub fn to_dmatrix<S: Scalar>(a: &[S], n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| a[i * n + j].to_f64())
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return f64::INFINITY;
    }
    m.clone().symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

/// Largest singular value.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.singular_values().iter().copied().fold(0.0, f64::max)
}
