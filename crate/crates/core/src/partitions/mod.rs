//! The partition families `B(n+1)`, `C(n+1)`, `D(n)` with their signs and
//! closed-form crossing weights.

pub mod qcomb;

use crate::error::{Error, Result};
use crate::model::Model;
use crate::scalar::Scalar;

pub use qcomb::{c_q, inversions, q_factorial, q_number, q_scalar, w_q, Enclosure, QScalar};

/// Default bound on the number of vertices an enumeration may use.
pub const DEFAULT_ENUMERATION_CAP: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    B,
    C,
    D,
}

/// A pairing of the vertex set `{0..=n}` (families B, C) or `{1..=n}` (family D).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub family: Family,
    pub n_vertices: usize,
    /// Pairs `(k, l)` with `k > l`, sorted by `l`.
    pub pairs: Vec<(usize, usize)>,
    /// Ascending.
    pub singletons: Vec<usize>,
    /// Partner of vertex 0 (families B and C).
    pub pi0: Option<usize>,
    /// `mate[i]` is the partner of vertex `first + i`, or the vertex itself for singletons.
    mate: Vec<usize>,
}

impl Partition {
    fn from_mate(family: Family, mate: Vec<usize>) -> Self {
        let first = first_vertex(family);
        let mut pairs = Vec::new();
        let mut singletons = Vec::new();
        for (i, &m) in mate.iter().enumerate() {
            let v = i + first;
            if m == v {
                singletons.push(v);
            } else if m > v {
                pairs.push((m, v));
            }
        }
        let pi0 = match family {
            Family::D => None,
            _ => Some(mate[0]),
        };
        Partition { family, n_vertices: mate.len(), pairs, singletons, pi0, mate }
    }

    pub fn first_vertex(&self) -> usize {
        first_vertex(self.family)
    }

    pub fn last_vertex(&self) -> usize {
        self.first_vertex() + self.n_vertices - 1
    }

    /// Partner of `v`, or `v` itself when `v` is a singleton.
    pub fn mate(&self, v: usize) -> usize {
        self.mate[v - self.first_vertex()]
    }

    pub fn is_singleton(&self, v: usize) -> bool {
        self.mate(v) == v
    }

    pub fn is_paired(&self, v: usize) -> bool {
        !self.is_singleton(v)
    }

    /// The pairing map as a list indexed from the first vertex.
    pub fn pairing_map(&self) -> &[usize] {
        &self.mate
    }

    /// Singletons to the left of `pi0` (larger vertex numbers), ascending.
    pub fn s_left(&self) -> Vec<usize> {
        let p0 = self.pi0.unwrap_or(0);
        self.singletons.iter().copied().filter(|&v| v > p0).collect()
    }

    /// Singletons to the right of `pi0`, ascending.
    pub fn s_right(&self) -> Vec<usize> {
        let p0 = self.pi0.unwrap_or(0);
        self.singletons.iter().copied().filter(|&v| v < p0).collect()
    }
}

fn first_vertex(family: Family) -> usize {
    match family {
        Family::D => 1,
        _ => 0,
    }
}

/// Lists every partition of the family on `n+1` (B, C) or `n` (D) vertices,
/// ordered lexicographically by pairing map.
pub fn enumerate_partitions(family: Family, n: usize, cap: usize) -> Result<Vec<Partition>> {
    let n_vertices = match family {
        Family::D => n,
        _ => n + 1,
    };
    if n_vertices > cap {
        return Err(Error::CapExceeded { what: "partition enumeration", requested: n_vertices, cap });
    }
    let mut out = Vec::new();
    match family {
        Family::B | Family::C => {
            if n == 0 {
                return Ok(out);
            }
            for k in 1..=n {
                let mut mate: Vec<usize> = (0..=n).collect();
                mate[0] = k;
                mate[k] = 0;
                let mut used = vec![false; n + 1];
                attach_left(family, k, n, 1, &mut mate, &mut used, &mut out);
            }
        }
        Family::D => {
            let mut mate: Vec<usize> = (1..=n).collect();
            involutions(n, 1, &mut mate, &mut out);
        }
    }
    out.sort_by(|a, b| a.mate.cmp(&b.mate));
    Ok(out)
}

/// Assigns vertex `l` in `1..k` a partner in `k+1..=n` (or leaves it single for family C).
fn attach_left(
    family: Family,
    k: usize,
    n: usize,
    l: usize,
    mate: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Partition>,
) {
    if l == k {
        out.push(Partition::from_mate(family, mate.clone()));
        return;
    }
    if family == Family::C {
        attach_left(family, k, n, l + 1, mate, used, out);
    }
    for r in k + 1..=n {
        if used[r] {
            continue;
        }
        used[r] = true;
        mate[l] = r;
        mate[r] = l;
        attach_left(family, k, n, l + 1, mate, used, out);
        mate[l] = l;
        mate[r] = r;
        used[r] = false;
    }
}

fn involutions(n: usize, v: usize, mate: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if v > n {
        out.push(Partition::from_mate(Family::D, mate.clone()));
        return;
    }
    if mate[v - 1] != v {
        involutions(n, v + 1, mate, out);
        return;
    }
    involutions(n, v + 1, mate, out);
    for u in v + 1..=n {
        if mate[u - 1] == u {
            mate[v - 1] = u;
            mate[u - 1] = v;
            involutions(n, v + 1, mate, out);
            mate[v - 1] = v;
            mate[u - 1] = u;
        }
    }
}

/// Sign, crossing product and covariance product of one partition.
#[derive(Clone, Debug, PartialEq)]
pub struct Weight<S> {
    pub sign: i8,
    pub crossing: S,
    pub e_factor: S,
}

impl<S: Scalar> Weight<S> {
    /// `sign * crossing * e_factor`.
    pub fn value(&self) -> S {
        let v = self.crossing.clone() * self.e_factor.clone();
        if self.sign < 0 {
            -v
        } else {
            v
        }
    }
}

/// Evaluates the closed-form weight of `pi`. `labels` is indexed by vertex:
/// `labels[v]` for families B and C (with `labels[0] = alpha`), `labels[v-1]` for D.
pub fn partition_weight<S: Scalar>(pi: &Partition, labels: &[usize], model: &Model<S>) -> Result<Weight<S>> {
    if labels.len() != pi.n_vertices {
        return Err(Error::LabelMismatch { expected: pi.n_vertices, got: labels.len() });
    }
    for &a in labels {
        model.check_generator(a)?;
    }
    let first = pi.first_vertex();
    let lab = |v: usize| labels[v - first];
    let q = |v: usize, u: usize| model.q_of(lab(v), lab(u)).clone();
    let mut crossing = S::one();
    let mut mul = |x: S| crossing = crossing.clone() * x;

    let n = pi.last_vertex();
    let sign;
    match pi.family {
        Family::B => {
            let p0 = pi.pi0.expect("family B has pi0");
            for u in 0..p0 {
                for v in 0..u {
                    mul(q(v, u));
                }
            }
            for u in 1..p0 {
                for v in 1..u {
                    if pi.mate(v) > pi.mate(u) {
                        mul(q(pi.mate(v), pi.mate(u)));
                    }
                }
            }
            for v in p0 + 1..=n {
                for u in v + 1..=n {
                    if pi.is_singleton(v) && !pi.is_singleton(u) {
                        mul(q(v, u));
                    }
                }
            }
            sign = if (p0 - 1) % 2 == 0 { 1 } else { -1 };
        }
        Family::C => {
            let p0 = pi.pi0.expect("family C has pi0");
            let in_right = |v: usize| v > 0 && v < p0 && pi.is_singleton(v);
            let in_left = |v: usize| v > p0 && pi.is_singleton(v);
            for u in 0..p0 {
                for v in 0..u {
                    if pi.is_paired(v) && pi.is_paired(u) {
                        mul(q(v, u));
                    }
                }
            }
            // Nested pairs opened left of pi0 cross twice, as in family B.
            for u in 1..p0 {
                for v in 1..u {
                    if pi.is_paired(v) && pi.is_paired(u) && pi.mate(v) > pi.mate(u) {
                        mul(q(pi.mate(v), pi.mate(u)));
                    }
                }
            }
            for u in 1..p0 {
                for v in 1..u {
                    if !in_right(v) && in_right(u) {
                        mul(q(v, u));
                    }
                }
            }
            for v in p0 + 1..=n {
                for u in v + 1..=n {
                    if in_left(v) && !in_left(u) {
                        mul(q(v, u));
                    }
                }
            }
            sign = if (pi.pairs.len() - 1) % 2 == 0 { 1 } else { -1 };
        }
        Family::D => {
            for &(top, u) in &pi.pairs {
                for v in u + 1..top {
                    let mv = pi.mate(v);
                    if mv == v {
                        mul(q(u, v));
                    } else if mv > v && mv < top {
                        mul(q(u, v));
                        mul(q(top, mv));
                    } else if mv > top {
                        mul(q(u, v));
                    }
                }
            }
            sign = if pi.pairs.len() % 2 == 0 { 1 } else { -1 };
        }
    }
    let mut e_factor = S::one();
    for &(k, l) in &pi.pairs {
        e_factor = e_factor * model.covariance(lab(k), lab(l)).clone();
    }
    Ok(Weight { sign, crossing, e_factor })
}

/// Generator labels of a vertex set, listed from the largest vertex down
/// (the letter order of `e_{s}` for `s = {l_s > ... > l_1}`).
pub fn descending_labels(vertices: &[usize], label_of: impl Fn(usize) -> usize) -> Vec<usize> {
    let mut vs = vertices.to_vec();
    vs.sort_unstable_by(|a, b| b.cmp(a));
    vs.into_iter().map(label_of).collect()
}
