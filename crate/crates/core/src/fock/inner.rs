//! Direct symmetric-group evaluation of `<.,.>_T` in four equivalent forms.

use crate::error::{Error, Result};
use crate::model::Model;
use crate::scalar::Scalar;

use super::vector::FockVector;
use super::word::{LevelIndex, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InnerVariant {
    /// Crossings weighted by the components of the left word, pairing `xi_t` with `eta_sigma(t)`.
    One = 1,
    /// Crossings weighted by the permuted right word.
    Two = 2,
    /// Right-word crossings, pairing `xi_sigma(t)` with `eta_t`.
    Three = 3,
    /// Permuted left-word crossings, pairing `xi_sigma(t)` with `eta_t`.
    Four = 4,
}

impl InnerVariant {
    pub const ALL: [InnerVariant; 4] = [InnerVariant::One, InnerVariant::Two, InnerVariant::Three, InnerVariant::Four];

    pub fn from_number(k: u8) -> Option<Self> {
        Self::ALL.get((k as usize).wrapping_sub(1)).copied()
    }
}

/// Lexicographic successor; `false` after the last permutation.
fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// `<e_u, e_v>_T` for two words of equal length, by one of the four permutation sums.
///
/// Slots are numbered `1..=n` from the right, so slot `t` holds `letters[n - t]`.
pub fn inner_words<S: Scalar>(model: &Model<S>, u: &Word, v: &Word, variant: InnerVariant) -> S {
    let n = u.level();
    if v.level() != n {
        return S::zero();
    }
    let xi = |t: usize| u.letters()[n - 1 - t];
    let eta = |t: usize| v.letters()[n - 1 - t];
    let mut sigma: Vec<usize> = (0..n).collect();
    let mut total = S::zero();
    loop {
        let paired = match variant {
            InnerVariant::One | InnerVariant::Two => (0..n).all(|t| xi(t) == eta(sigma[t])),
            InnerVariant::Three | InnerVariant::Four => (0..n).all(|t| xi(sigma[t]) == eta(t)),
        };
        if paired {
            let mut w = S::one();
            for a in 0..n {
                for b in a + 1..n {
                    if sigma[a] <= sigma[b] {
                        continue;
                    }
                    let q = match variant {
                        InnerVariant::One => model.q_of(xi(a), xi(b)),
                        InnerVariant::Two => model.q_of(eta(sigma[a]), eta(sigma[b])),
                        InnerVariant::Three => model.q_of(eta(a), eta(b)),
                        InnerVariant::Four => model.q_of(xi(sigma[b]), xi(sigma[a])),
                    };
                    w = w * q.clone();
                }
            }
            total = total + w;
        }
        if !next_permutation(&mut sigma) {
            break;
        }
    }
    total
}

/// Bilinear extension of [`inner_words`] to vectors of the truncated space.
pub fn inner_t<S: Scalar>(
    model: &Model<S>,
    index: &LevelIndex,
    u: &FockVector<S>,
    v: &FockVector<S>,
    variant: InnerVariant,
) -> Result<S> {
    for x in [u, v] {
        if x.dim() != index.total_dim() {
            return Err(Error::LevelExceeded { level: index.n_max + 1, max: index.n_max });
        }
    }
    let mut total = S::zero();
    for (i, a) in u.nonzeros() {
        let wu = index.word(i);
        for (j, b) in v.nonzeros() {
            if index.level_of(j) != wu.level() {
                continue;
            }
            let s = inner_words(model, &wu, &index.word(j), variant);
            if !s.is_zero() {
                total = total + a.clone() * b.clone() * s;
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_are_enumerated_once() {
        let mut p = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 24);
        assert_eq!(p, vec![3, 2, 1, 0]);
    }
}
