//! The dual variables `D_a` through the B-partition formula.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{FockOperator, FockVector, TruncatedFock, Word};
use crate::partitions::{descending_labels, enumerate_partitions, partition_weight, Family, Partition, DEFAULT_ENUMERATION_CAP};
use crate::scalar::Scalar;

/// Vertex labels `(a, a_1, ..., a_n)` for the word `a_n ... a_1`.
pub(crate) fn vertex_labels(alpha: usize, w: &Word) -> Vec<usize> {
    let mut labels = Vec::with_capacity(w.level() + 1);
    labels.push(alpha);
    labels.extend((1..=w.level()).map(|k| w.alpha(k)));
    labels
}

fn dual_apply_with<S: Scalar>(
    space: &TruncatedFock<S>,
    alpha: usize,
    w: &Word,
    parts: &[Partition],
) -> Result<FockVector<S>> {
    let mut out = space.zero_vector();
    if w.is_empty() {
        return Ok(out);
    }
    let labels = vertex_labels(alpha, w);
    for pi in parts {
        let weight = partition_weight(pi, &labels, &space.model)?;
        let value = weight.value();
        if value.is_zero() {
            continue;
        }
        let s = Word::new(descending_labels(&pi.singletons, |v| labels[v]));
        out.add_at(space.index.index(&s), value);
    }
    Ok(out)
}

/// `D_a e_w`.
pub fn dual_apply<S: Scalar>(space: &TruncatedFock<S>, alpha: usize, w: &Word) -> Result<FockVector<S>> {
    space.model.check_generator(alpha)?;
    if w.level() > space.n {
        return Err(Error::LevelExceeded { level: w.level(), max: space.n });
    }
    if w.is_empty() {
        return Ok(space.zero_vector());
    }
    let parts = enumerate_partitions(Family::B, w.level(), DEFAULT_ENUMERATION_CAP.max(w.level() + 1))?;
    dual_apply_with(space, alpha, w, &parts)
}

/// Matrix of `D_a` on all words up to the truncation level.
pub fn dual_matrix<S: Scalar>(space: &TruncatedFock<S>, alpha: usize) -> Result<FockOperator<S>> {
    space.model.check_generator(alpha)?;
    let parts: Vec<Vec<Partition>> = (0..=space.n)
        .map(|n| {
            if n == 0 {
                Ok(Vec::new())
            } else {
                enumerate_partitions(Family::B, n, DEFAULT_ENUMERATION_CAP.max(n + 1))
            }
        })
        .collect::<Result<_>>()?;
    let cols: Vec<Result<Vec<(usize, S)>>> = (0..space.total_dim())
        .into_par_iter()
        .map(|j| {
            let w = space.index.word(j);
            let v = dual_apply_with(space, alpha, &w, &parts[w.level()])?;
            Ok(v.nonzeros().map(|(i, c)| (i, c.clone())).collect())
        })
        .collect();
    let cols = cols.into_iter().collect::<Result<Vec<_>>>()?;
    let shifts = (0..space.n.div_ceil(2)).map(|k| -(2 * k as isize + 1)).collect();
    Ok(FockOperator::from_columns(cols, space.n as isize, shifts))
}
