//! Dense machine-word vectors for the completion loops.
//!
//! Inputs arrive as arbitrary-precision [`IndexedVector`]s; the inner loops
//! run on `i64` with checked arithmetic and report [`Error::Overflow`]
//! rather than wrapping.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::indexvec::{IndexShape, IndexedVector, TermOrder};

pub(crate) type Dense = Vec<i64>;

pub(crate) fn to_dense(u: &IndexedVector) -> Result<Dense> {
    u.to_dense_i64()
}

pub(crate) fn to_vector(shape: IndexShape, d: &[i64]) -> IndexedVector {
    IndexedVector::from_dense_i64(shape, d).expect("dense width matches shape")
}

pub(crate) fn norm(d: &[i64]) -> i64 {
    d.iter().map(|x| x.abs()).sum()
}

pub(crate) fn neg(d: &[i64]) -> Dense {
    d.iter().map(|x| -x).collect()
}

pub(crate) fn add(a: &[i64], b: &[i64]) -> Result<Dense> {
    a.iter().zip(b).map(|(x, y)| x.checked_add(*y).ok_or(Error::Overflow)).collect()
}

pub(crate) fn sub(a: &[i64], b: &[i64]) -> Result<Dense> {
    a.iter().zip(b).map(|(x, y)| x.checked_sub(*y).ok_or(Error::Overflow)).collect()
}

pub(crate) fn is_zero(d: &[i64]) -> bool {
    d.iter().all(|&x| x == 0)
}

pub(crate) fn is_nonnegative(d: &[i64]) -> bool {
    d.iter().all(|&x| x >= 0)
}

/// Componentwise `a ≤ b`.
pub(crate) fn leq(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub(crate) fn plus_part(d: &[i64]) -> Dense {
    d.iter().map(|&x| x.max(0)).collect()
}

pub(crate) fn minus_part(d: &[i64]) -> Dense {
    d.iter().map(|&x| (-x).max(0)).collect()
}

/// A vector with its sign-support bitsets, for fast `⊑` prefiltering.
#[derive(Debug, Clone)]
pub(crate) struct Signed {
    pub(crate) values: Dense,
    pub(crate) norm: i64,
    pos: Vec<u64>,
    neg: Vec<u64>,
}

impl Signed {
    pub(crate) fn new(values: Dense) -> Self {
        let words = values.len().div_ceil(64).max(1);
        let mut pos = vec![0u64; words];
        let mut neg = vec![0u64; words];
        for (k, &x) in values.iter().enumerate() {
            if x > 0 {
                pos[k / 64] |= 1 << (k % 64);
            } else if x < 0 {
                neg[k / 64] |= 1 << (k % 64);
            }
        }
        Signed { norm: norm(&values), values, pos, neg }
    }

    /// `self ⊑ other`.
    pub(crate) fn conformal_leq(&self, other: &Signed) -> bool {
        if self.norm > other.norm {
            return false;
        }
        let masks_ok = self.pos.iter().zip(&other.pos).all(|(a, b)| a & !b == 0)
            && self.neg.iter().zip(&other.neg).all(|(a, b)| a & !b == 0);
        masks_ok && self.values.iter().zip(&other.values).all(|(a, b)| a.abs() <= b.abs())
    }

    /// Do the two vectors have opposite signs somewhere?
    pub(crate) fn clashes(&self, other: &Signed) -> bool {
        self.pos.iter().zip(&other.neg).any(|(a, b)| a & b != 0)
            || self.neg.iter().zip(&other.pos).any(|(a, b)| a & b != 0)
    }
}

/// Keeps the `⊑`-minimal vectors, dropping duplicates.
pub(crate) fn minimal(vectors: Vec<Dense>) -> Vec<Dense> {
    let mut signed: Vec<Signed> = vectors.into_iter().map(Signed::new).collect();
    signed.sort_by(|a, b| a.norm.cmp(&b.norm).then_with(|| a.values.cmp(&b.values)));
    signed.dedup_by(|a, b| a.values == b.values);
    let mut kept: Vec<Signed> = Vec::new();
    for s in signed {
        // Anything strictly below `s` has smaller norm and was seen already.
        if !kept.iter().any(|k| k.conformal_leq(&s)) {
            kept.push(s);
        }
    }
    kept.into_iter().map(|s| s.values).collect()
}

/// A term order evaluated on dense nonnegative vectors of one shape.
#[derive(Debug, Clone)]
pub(crate) struct DenseOrder {
    order: TermOrder,
    /// Dense positions listed in basis order.
    by_rank: Vec<usize>,
}

impl DenseOrder {
    pub(crate) fn new(order: TermOrder, shape: IndexShape) -> Self {
        DenseOrder { order, by_rank: shape.positions_in_basis_order() }
    }

    /// `Less` means `a ≺ b`.
    pub(crate) fn compare(&self, a: &[i64], b: &[i64]) -> Ordering {
        let diff = |p: usize| a[p] - b[p];
        let first = self.by_rank.iter().map(|&p| diff(p)).find(|&x| x != 0);
        let Some(first) = first else { return Ordering::Equal };
        let last = self.by_rank.iter().rev().map(|&p| diff(p)).find(|&x| x != 0).expect("nonzero difference");
        let by_norm = || norm(a).cmp(&norm(b));
        let sign = |x: i64| if x < 0 { Ordering::Less } else { Ordering::Greater };
        match self.order {
            TermOrder::Lex => sign(last),
            TermOrder::Dlex => by_norm().then_with(|| sign(last)),
            TermOrder::Revlex => by_norm().then_with(|| sign(first).reverse()),
        }
    }
}
