//! Sparse integer vectors over the index set `[n]^d × [c]`.
//!
//! Indices are ordered by the basis well-ordering used throughout the crate:
//! the bounded coordinate `j` first, then the largest unbounded coordinate,
//! then the unbounded coordinates lexicographically. For `d = 2, c = 1` this
//! reads `(1,1) < (1,2) < (2,1) < (2,2) < (1,3) < (2,3) < (3,1) < ...`.
//! The same order drives the first/last coefficients `f(u)`, `l(u)` and the
//! three term orders. For `c > 1` the bounded coordinate dominates, so every
//! `j`-block is ordered internally exactly as in the `c = 1` case.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// The finite index universe `[n]^d × [c]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawShape")]
pub struct IndexShape {
    d: u32,
    c: u32,
    n: u32,
}

#[derive(Deserialize)]
struct RawShape {
    d: u32,
    c: u32,
    n: u32,
}

impl TryFrom<RawShape> for IndexShape {
    type Error = Error;

    fn try_from(raw: RawShape) -> Result<Self> {
        IndexShape::new(raw.d, raw.c, raw.n)
    }
}

impl IndexShape {
    pub fn new(d: u32, c: u32, n: u32) -> Result<Self> {
        if d == 0 || c == 0 || n == 0 {
            return Err(Error::InvalidShape(format!("d={d}, c={c}, n={n}: all must be positive")));
        }
        let size = (n as u128).checked_pow(d).and_then(|s| s.checked_mul(c as u128));
        match size {
            Some(s) if s <= u32::MAX as u128 => Ok(IndexShape { d, c, n }),
            _ => Err(Error::InvalidShape(format!("universe [{n}]^{d}x[{c}] too large"))),
        }
    }

    /// Shape `d = c = 1`, i.e. plain `Z^n`.
    pub fn flat(n: u32) -> Result<Self> {
        IndexShape::new(1, 1, n)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Same `d` and `c` at another truncation level.
    pub fn with_n(&self, n: u32) -> Result<Self> {
        IndexShape::new(self.d, self.c, n)
    }

    /// `n^d · c`.
    pub fn size(&self) -> usize {
        (self.n as usize).pow(self.d) * self.c as usize
    }

    pub fn contains(&self, index: &Index) -> bool {
        index.coords.len() == self.d as usize
            && (1..=self.c).contains(&index.j)
            && index.coords.iter().all(|&i| (1..=self.n).contains(&i))
    }

    pub(crate) fn check(&self, index: &Index) -> Result<()> {
        if self.contains(index) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: index.to_tuple(), shape: *self })
        }
    }

    /// Dense mixed-radix position of an index (`j` most significant).
    /// This is a storage layout only; it does not follow the basis order.
    pub fn position(&self, index: &Index) -> usize {
        let n = self.n as usize;
        let mut pos = (index.j - 1) as usize;
        for &i in &index.coords {
            pos = pos * n + (i - 1) as usize;
        }
        pos
    }

    /// Inverse of [`IndexShape::position`].
    pub fn index_at(&self, mut pos: usize) -> Index {
        let n = self.n as usize;
        let mut coords = vec![0u32; self.d as usize];
        for slot in coords.iter_mut().rev() {
            *slot = (pos % n) as u32 + 1;
            pos /= n;
        }
        Index { coords, j: pos as u32 + 1 }
    }

    /// All indices of the universe in basis order.
    pub fn indices(&self) -> Vec<Index> {
        let mut all: Vec<Index> = (0..self.size()).map(|p| self.index_at(p)).collect();
        all.sort();
        all
    }

    /// Dense positions listed in basis order.
    pub(crate) fn positions_in_basis_order(&self) -> Vec<usize> {
        self.indices().iter().map(|ix| self.position(ix)).collect()
    }
}

impl fmt::Display for IndexShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]^{}x[{}]", self.n, self.d, self.c)
    }
}

/// An index `(i_1, …, i_d, j)`, all components 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Index {
    coords: Vec<u32>,
    j: u32,
}

impl Index {
    pub fn new(coords: Vec<u32>, j: u32) -> Self {
        Index { coords, j }
    }

    /// Parses the JSON tuple form `[i_1, …, i_d, j]`.
    pub fn from_tuple(tuple: &[u32]) -> Result<Self> {
        match tuple.split_last() {
            Some((&j, coords)) if !coords.is_empty() => Ok(Index { coords: coords.to_vec(), j }),
            _ => Err(Error::InvalidInput(format!("index tuple {tuple:?} needs d >= 1 coordinates plus j"))),
        }
    }

    pub fn to_tuple(&self) -> Vec<u32> {
        let mut t = self.coords.clone();
        t.push(self.j);
        t
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn max_coord(&self) -> u32 {
        self.coords.iter().copied().max().unwrap_or(0)
    }

    /// Applies `f` to every unbounded coordinate.
    pub fn map_coords(&self, mut f: impl FnMut(u32) -> u32) -> Index {
        Index { coords: self.coords.iter().map(|&i| f(i)).collect(), j: self.j }
    }
}

impl Ord for Index {
    fn cmp(&self, other: &Self) -> Ordering {
        self.j
            .cmp(&other.j)
            .then_with(|| self.max_coord().cmp(&other.max_coord()))
            .then_with(|| self.coords.cmp(&other.coords))
    }
}

impl PartialOrd for Index {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, i) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, ";{})", self.j)
    }
}

/// Compares two indices of `shape` in the basis well-ordering.
pub fn basis_index_compare(a: &Index, b: &Index, shape: &IndexShape) -> Result<Ordering> {
    shape.check(a)?;
    shape.check(b)?;
    Ok(a.cmp(b))
}

/// A finitely supported integer vector. No stored entry is zero.
///
/// The derived ordering compares shapes and then the entry lists sorted by
/// basis order, which is the comparison used for canonical orbit forms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexedVector {
    shape: IndexShape,
    entries: BTreeMap<Index, BigInt>,
}

/// `u = plus - minus` with disjoint supports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignSplit {
    pub plus: IndexedVector,
    pub minus: IndexedVector,
}

impl IndexedVector {
    pub fn zero(shape: IndexShape) -> Self {
        IndexedVector { shape, entries: BTreeMap::new() }
    }

    /// Builds a vector from `(index, value)` pairs; repeated indices add up.
    pub fn from_entries<I>(shape: IndexShape, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Index, BigInt)>,
    {
        let mut map: BTreeMap<Index, BigInt> = BTreeMap::new();
        for (index, value) in entries {
            shape.check(&index)?;
            *map.entry(index).or_insert_with(BigInt::zero) += value;
        }
        map.retain(|_, v| !v.is_zero());
        Ok(IndexedVector { shape, entries: map })
    }

    /// A plain sequence `(u_1, …, u_k)` as a vector of shape `d = c = 1, n = k`.
    pub fn from_seq(values: &[i64]) -> Result<Self> {
        let shape = IndexShape::flat(values.len().max(1) as u32)?;
        IndexedVector::from_dense_i64(shape, values)
    }

    /// Dense values by [`IndexShape::position`].
    pub fn from_dense_i64(shape: IndexShape, values: &[i64]) -> Result<Self> {
        if values.len() > shape.size() {
            return Err(Error::InvalidInput(format!(
                "{} values do not fit shape {shape}",
                values.len()
            )));
        }
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0)
            .map(|(p, v)| (shape.index_at(p), BigInt::from(*v)))
            .collect();
        Ok(IndexedVector { shape, entries })
    }

    pub fn from_dense(shape: IndexShape, values: &[BigInt]) -> Result<Self> {
        if values.len() != shape.size() {
            return Err(Error::InvalidInput(format!(
                "{} values for shape {shape} of size {}",
                values.len(),
                shape.size()
            )));
        }
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(p, v)| (shape.index_at(p), v.clone()))
            .collect();
        Ok(IndexedVector { shape, entries })
    }

    pub fn unit(shape: IndexShape, index: Index) -> Result<Self> {
        IndexedVector::from_entries(shape, [(index, BigInt::one())])
    }

    pub fn shape(&self) -> IndexShape {
        self.shape
    }

    pub fn get(&self, index: &Index) -> BigInt {
        self.entries.get(index).cloned().unwrap_or_default()
    }

    /// Nonzero entries in basis order.
    pub fn entries(&self) -> impl Iterator<Item = (&Index, &BigInt)> {
        self.entries.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Index> {
        self.entries.keys()
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn norm(&self) -> BigInt {
        self.entries.values().map(|v| v.abs()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.values().all(|v| v.is_positive())
    }

    /// The set of unbounded coordinate values used by the support.
    pub fn touched(&self) -> Vec<u32> {
        let mut t: Vec<u32> = self.entries.keys().flat_map(|ix| ix.coords.iter().copied()).collect();
        t.sort_unstable();
        t.dedup();
        t
    }

    pub fn to_dense(&self) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.shape.size()];
        for (ix, v) in &self.entries {
            out[self.shape.position(ix)] = v.clone();
        }
        out
    }

    pub fn to_dense_i64(&self) -> Result<Vec<i64>> {
        let mut out = vec![0i64; self.shape.size()];
        for (ix, v) in &self.entries {
            out[self.shape.position(ix)] = v.to_i64().ok_or(Error::Overflow)?;
        }
        Ok(out)
    }

    /// The same vector viewed in a shape with another `n`; fails if the
    /// support does not fit.
    pub fn reshape(&self, n: u32) -> Result<Self> {
        let shape = self.shape.with_n(n)?;
        for ix in self.entries.keys() {
            shape.check(ix)?;
        }
        Ok(IndexedVector { shape, entries: self.entries.clone() })
    }

    /// Reshapes to the smallest `n` containing the support (at least 1).
    pub fn compact(&self) -> Self {
        let n = self.entries.keys().map(Index::max_coord).max().unwrap_or(1).max(1);
        IndexedVector { shape: self.shape.with_n(n).expect("smaller shape is valid"), entries: self.entries.clone() }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.shape == other.shape {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(self.shape, other.shape))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut entries = self.entries.clone();
        for (ix, v) in &other.entries {
            *entries.entry(ix.clone()).or_insert_with(BigInt::zero) += v;
        }
        entries.retain(|_, v| !v.is_zero());
        Ok(IndexedVector { shape: self.shape, entries })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        IndexedVector {
            shape: self.shape,
            entries: self.entries.iter().map(|(ix, v)| (ix.clone(), -v)).collect(),
        }
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        if factor.is_zero() {
            return IndexedVector::zero(self.shape);
        }
        IndexedVector {
            shape: self.shape,
            entries: self.entries.iter().map(|(ix, v)| (ix.clone(), v * factor)).collect(),
        }
    }

    /// Applies an index map; colliding images add up.
    pub(crate) fn map_indices(&self, shape: IndexShape, mut f: impl FnMut(&Index) -> Index) -> Result<Self> {
        IndexedVector::from_entries(shape, self.entries.iter().map(|(ix, v)| (f(ix), v.clone())))
    }

    pub fn sign_split(&self) -> SignSplit {
        let mut plus = BTreeMap::new();
        let mut minus = BTreeMap::new();
        for (ix, v) in &self.entries {
            if v.is_positive() {
                plus.insert(ix.clone(), v.clone());
            } else {
                minus.insert(ix.clone(), -v);
            }
        }
        SignSplit {
            plus: IndexedVector { shape: self.shape, entries: plus },
            minus: IndexedVector { shape: self.shape, entries: minus },
        }
    }

    /// The conformal order: `self ⊑ other` iff at every index the entries do
    /// not have opposite signs and `|self_i| <= |other_i|`.
    pub fn conformal_leq(&self, other: &Self) -> Result<bool> {
        self.same_shape(other)?;
        Ok(self.entries.iter().all(|(ix, u)| match other.entries.get(ix) {
            Some(v) => u.signum() == v.signum() && u.abs() <= v.abs(),
            None => false,
        }))
    }

    /// Coefficients of the first and last nonzero terms in basis order.
    pub fn first_last_coeff(&self) -> Result<(BigInt, BigInt)> {
        let first = self.entries.values().next().ok_or(Error::ZeroVector)?;
        let last = self.entries.values().next_back().ok_or(Error::ZeroVector)?;
        Ok((first.clone(), last.clone()))
    }
}

impl fmt::Display for IndexedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        for (k, (ix, v)) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            if v.is_positive() && k > 0 {
                write!(f, "+")?;
            }
            write!(f, "{v}e{ix}")?;
        }
        Ok(())
    }
}

/// The `⊑`-minimal elements of `vectors`, duplicates collapsed, in input order.
pub fn conformal_minimal(vectors: &[IndexedVector]) -> Result<Vec<IndexedVector>> {
    let mut out: Vec<IndexedVector> = Vec::new();
    for (k, u) in vectors.iter().enumerate() {
        if out.contains(u) {
            continue;
        }
        let mut minimal = true;
        for (l, v) in vectors.iter().enumerate() {
            if k != l && v != u && v.conformal_leq(u)? {
                minimal = false;
                break;
            }
        }
        if minimal {
            out.push(u.clone());
        }
    }
    Ok(out)
}

// ---- JSON form ----------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonInt {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for JsonInt {
    fn from(v: &BigInt) -> Self {
        match v.to_i64() {
            Some(x) => JsonInt::Small(x),
            None => JsonInt::Big(v.to_string()),
        }
    }
}

impl TryFrom<JsonInt> for BigInt {
    type Error = String;

    fn try_from(v: JsonInt) -> std::result::Result<Self, String> {
        match v {
            JsonInt::Small(x) => Ok(BigInt::from(x)),
            JsonInt::Big(s) => s.parse().map_err(|_| format!("not an integer: {s}")),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct VectorRepr {
    shape: IndexShape,
    entries: Vec<(Vec<u32>, JsonInt)>,
}

impl Serialize for IndexedVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        VectorRepr {
            shape: self.shape,
            entries: self.entries.iter().map(|(ix, v)| (ix.to_tuple(), JsonInt::from(v))).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IndexedVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = VectorRepr::deserialize(deserializer)?;
        let mut entries = Vec::with_capacity(repr.entries.len());
        for (tuple, value) in repr.entries {
            let index = Index::from_tuple(&tuple).map_err(D::Error::custom)?;
            let value = BigInt::try_from(value).map_err(D::Error::custom)?;
            entries.push((index, value));
        }
        IndexedVector::from_entries(repr.shape, entries).map_err(D::Error::custom)
    }
}

// ---- term orders --------------------------------------------------------

/// One of the three term orders on nonnegative vectors, all built on the
/// basis well-ordering of indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TermOrder {
    /// `v ≺ w` iff `l(v - w) < 0`.
    Lex,
    /// Norm first, then as `Lex`.
    Dlex,
    /// Norm first, then `v ≺ w` iff `f(v - w) > 0`.
    Revlex,
}

impl TermOrder {
    pub const ALL: [TermOrder; 3] = [TermOrder::Lex, TermOrder::Dlex, TermOrder::Revlex];

    pub fn tag(&self) -> &'static str {
        match self {
            TermOrder::Lex => "lex",
            TermOrder::Dlex => "dlex",
            TermOrder::Revlex => "revlex",
        }
    }

    /// Compares nonnegative vectors; `Less` means `v ≺ w`.
    pub fn compare(&self, v: &IndexedVector, w: &IndexedVector) -> Result<Ordering> {
        if !v.is_nonnegative() || !w.is_nonnegative() {
            return Err(Error::NegativeVector);
        }
        let diff = v.sub(w)?;
        if diff.is_zero() {
            return Ok(Ordering::Equal);
        }
        let (first, last) = diff.first_last_coeff()?;
        let by_norm = v.norm().cmp(&w.norm());
        Ok(match self {
            TermOrder::Lex => sign_to_order(&last),
            TermOrder::Dlex => by_norm.then_with(|| sign_to_order(&last)),
            TermOrder::Revlex => by_norm.then_with(|| sign_to_order(&first).reverse()),
        })
    }
}

fn sign_to_order(x: &BigInt) -> Ordering {
    if x.is_negative() {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Free-function form of [`TermOrder::compare`].
pub fn term_compare(order: TermOrder, v: &IndexedVector, w: &IndexedVector) -> Result<Ordering> {
    order.compare(v, w)
}

impl fmt::Display for TermOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for TermOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lex" => Ok(TermOrder::Lex),
            "dlex" => Ok(TermOrder::Dlex),
            "revlex" => Ok(TermOrder::Revlex),
            other => Err(Error::InvalidInput(format!("unknown term order {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ix(t: &[u32]) -> Index {
        Index::from_tuple(t).unwrap()
    }

    fn seq(v: &[i64]) -> IndexedVector {
        IndexedVector::from_seq(v).unwrap()
    }

    fn d2(n: u32, terms: &[(&[u32], i64)]) -> IndexedVector {
        let shape = IndexShape::new(2, 1, n).unwrap();
        IndexedVector::from_entries(shape, terms.iter().map(|(t, v)| (ix(t), BigInt::from(*v)))).unwrap()
    }

    #[test]
    fn shape_rejects_zero_parameters() {
        assert!(IndexShape::new(0, 1, 1).is_err());
        assert!(IndexShape::new(1, 0, 1).is_err());
        assert!(IndexShape::new(1, 1, 0).is_err());
        assert_eq!(IndexShape::new(2, 3, 4).unwrap().size(), 48);
    }

    #[test]
    fn position_round_trips() {
        let shape = IndexShape::new(2, 3, 4).unwrap();
        for p in 0..shape.size() {
            assert_eq!(shape.position(&shape.index_at(p)), p);
        }
    }

    #[test]
    fn conformal_examples() {
        assert!(seq(&[0, 0, 0]).conformal_leq(&seq(&[2, -2, 5])).unwrap());
        assert!(seq(&[1, -1, 0]).conformal_leq(&seq(&[2, -2, 5])).unwrap());
        assert!(!seq(&[2, -2, 5]).conformal_leq(&seq(&[1, -1, 0])).unwrap());
        assert!(!seq(&[1, -1]).conformal_leq(&seq(&[1, 1])).unwrap());
        assert!(matches!(
            seq(&[1]).conformal_leq(&seq(&[1, 1])),
            Err(Error::ShapeMismatch(..))
        ));
    }

    #[test]
    fn sign_split_examples() {
        let s = seq(&[2, -3, 0]).sign_split();
        assert_eq!(s.plus, seq(&[2, 0, 0]));
        assert_eq!(s.minus, seq(&[0, 3, 0]));
        let z = seq(&[0, 0]).sign_split();
        assert!(z.plus.is_zero() && z.minus.is_zero());
        let s = seq(&[-1, -1]).sign_split();
        assert!(s.plus.is_zero());
        assert_eq!(s.minus, seq(&[1, 1]));
    }

    #[test]
    fn basis_order_d2_listing() {
        let shape = IndexShape::new(2, 1, 3).unwrap();
        let chain = [[1, 1, 1], [1, 2, 1], [2, 1, 1], [2, 2, 1], [1, 3, 1], [2, 3, 1], [3, 1, 1]];
        for w in chain.windows(2) {
            assert_eq!(basis_index_compare(&ix(&w[0]), &ix(&w[1]), &shape).unwrap(), Ordering::Less);
        }
        assert_eq!(basis_index_compare(&ix(&[2, 3, 1]), &ix(&[2, 3, 1]), &shape).unwrap(), Ordering::Equal);
        let listed: Vec<Vec<u32>> = shape.indices().iter().take(7).map(Index::to_tuple).collect();
        assert_eq!(listed, chain.iter().map(|t| t.to_vec()).collect::<Vec<_>>());
    }

    #[test]
    fn bounded_index_dominates() {
        let shape = IndexShape::new(1, 2, 5).unwrap();
        assert_eq!(basis_index_compare(&ix(&[5, 1]), &ix(&[1, 2]), &shape).unwrap(), Ordering::Less);
        assert!(basis_index_compare(&ix(&[6, 1]), &ix(&[1, 2]), &shape).is_err());
    }

    #[test]
    fn first_last_examples() {
        let u = d2(4, &[(&[1, 2, 1], 2), (&[1, 3, 1], 1), (&[3, 1, 1], 3), (&[2, 4, 1], -4)]);
        assert_eq!(u.first_last_coeff().unwrap(), (BigInt::from(2), BigInt::from(-4)));
        let e11 = d2(2, &[(&[1, 1, 1], 1)]);
        assert_eq!(e11.first_last_coeff().unwrap(), (BigInt::from(1), BigInt::from(1)));
        let u = d2(2, &[(&[1, 1, 1], -1), (&[2, 2, 1], 1)]);
        assert_eq!(u.first_last_coeff().unwrap(), (BigInt::from(-1), BigInt::from(1)));
        assert!(matches!(seq(&[0]).first_last_coeff(), Err(Error::ZeroVector)));
    }

    #[test]
    fn term_compare_basics() {
        let v = seq(&[1, 0, 0]);
        let w = seq(&[0, 2, 1]);
        for order in TermOrder::ALL {
            assert_eq!(order.compare(&v, &v).unwrap(), Ordering::Equal);
        }
        assert_eq!(TermOrder::Dlex.compare(&v, &w).unwrap(), Ordering::Less);
        // Under lex the later basis position dominates: e_1 ≺ e_2.
        assert_eq!(TermOrder::Lex.compare(&seq(&[0, 1]), &seq(&[1, 0])).unwrap(), Ordering::Greater);
        assert!(matches!(TermOrder::Lex.compare(&seq(&[-1]), &seq(&[0])), Err(Error::NegativeVector)));
    }

    #[test]
    fn json_form_is_sorted_by_basis_order() {
        let u = d2(3, &[(&[3, 1, 1], -2), (&[1, 2, 1], 5)]);
        let text = serde_json::to_string(&u).unwrap();
        assert_eq!(text, r#"{"shape":{"d":2,"c":1,"n":3},"entries":[[[1,2,1],5],[[3,1,1],-2]]}"#);
        let back: IndexedVector = serde_json::from_str(&text).unwrap();
        assert_eq!(back, u);
        let bad = r#"{"shape":{"d":2,"c":1,"n":3},"entries":[[[4,1,1],1]]}"#;
        assert!(serde_json::from_str::<IndexedVector>(bad).is_err());
    }

    #[test]
    fn big_entries_survive_json() {
        let shape = IndexShape::flat(1).unwrap();
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let u = IndexedVector::from_entries(shape, [(ix(&[1, 1]), big)]).unwrap();
        let back: IndexedVector = serde_json::from_str(&serde_json::to_string(&u).unwrap()).unwrap();
        assert_eq!(back, u);
    }

    #[test]
    fn minimal_elements_are_incomparable() {
        let set = vec![seq(&[1, -1, 0]), seq(&[2, -2, 1]), seq(&[0, 0, 1]), seq(&[1, -1, 0])];
        let min = conformal_minimal(&set).unwrap();
        assert_eq!(min, vec![seq(&[1, -1, 0]), seq(&[0, 0, 1])]);
    }
}
