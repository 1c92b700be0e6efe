//! Exact integer linear algebra over `Z`.
//!
//! The single canonical form is the row-style Hermite normal form: echelon,
//! positive pivots, entries above each pivot reduced into `[0, pivot)`.
//! Two lattices are equal exactly when their HNF bases are equal.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::budget::Meter;
use crate::error::{Error, Result};
use crate::indexvec::{IndexShape, IndexedVector};

/// Dense arbitrary-precision matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = IntMatrix::zeros(size, size);
        for i in 0..size {
            m.data[i * size + i] = BigInt::from(1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let count = rows.len();
        for (k, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::InvalidInput(format!("row {k} has {} entries, expected {cols}", row.len())));
            }
            data.extend(row);
        }
        Ok(IntMatrix { rows: count, cols, data })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(), cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: BigInt) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    /// `self · x`.
    pub fn apply(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.cols {
            return Err(Error::InvalidInput(format!("vector of length {} for {} columns", x.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn rank(&self) -> usize {
        let h = hnf(self);
        (0..h.rows).filter(|&r| h.row(r).iter().any(|x| !x.is_zero())).count()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// `row[target] -= q · row[source]`.
    fn sub_row_multiple(&mut self, target: usize, source: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let delta = q * &self.data[source * self.cols + c];
            self.data[target * self.cols + c] -= delta;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = std::mem::take(&mut self.data[r * self.cols + c]);
            self.data[r * self.cols + c] = -v;
        }
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            self.to_rows().iter().map(|r| r.iter().map(BigInt::to_string).collect()).collect();
        // Numbers, not strings, whenever they fit.
        let rows: Vec<Vec<serde_json::Value>> = rows
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|s| match s.parse::<i64>() {
                        Ok(x) => serde_json::Value::from(x),
                        Err(_) => serde_json::Value::from(s),
                    })
                    .collect()
            })
            .collect();
        rows.serialize(serializer)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(BigInt::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Row-style Hermite normal form. Zero rows are kept at the bottom so the
/// result has the input's dimensions.
pub fn hnf(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let mut r = 0;
    for col in 0..a.cols {
        if r == a.rows {
            break;
        }
        loop {
            let pivot = (r..a.rows)
                .filter(|&i| !a.get(i, col).is_zero())
                .min_by(|&x, &y| a.get(x, col).abs().cmp(&a.get(y, col).abs()));
            let Some(pivot) = pivot else { break };
            a.swap_rows(r, pivot);
            let mut clean = true;
            for i in r + 1..a.rows {
                if a.get(i, col).is_zero() {
                    continue;
                }
                let q = a.get(i, col).div_floor(a.get(r, col));
                a.sub_row_multiple(i, r, &q);
                if !a.get(i, col).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if a.get(r, col).is_zero() {
            continue;
        }
        if a.get(r, col).is_negative() {
            a.negate_row(r);
        }
        for i in 0..r {
            let q = a.get(i, col).div_floor(a.get(r, col));
            a.sub_row_multiple(i, r, &q);
        }
        r += 1;
    }
    a
}

fn leading_position(row: &[BigInt]) -> Option<usize> {
    row.iter().position(|x| !x.is_zero())
}

/// A basis of the saturated lattice `{x ∈ Z^cols : m·x = 0}`, in HNF.
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (rows, cols) = (m.rows, m.cols);
    let mut aug = IntMatrix::zeros(cols, rows + cols);
    for i in 0..cols {
        for r in 0..rows {
            aug.set(i, r, m.get(r, i).clone());
        }
        aug.set(i, rows + i, BigInt::from(1));
    }
    let h = hnf(&aug);
    (0..h.rows)
        .filter(|&i| matches!(leading_position(h.row(i)), Some(p) if p >= rows))
        .map(|i| h.row(i)[rows..].to_vec())
        .collect()
}

/// A lattice in `Z^([n]^d×[c])` given by generators, with its HNF basis cached.
#[derive(Debug, Clone)]
pub struct LatticeHandle {
    shape: IndexShape,
    generators: Vec<IndexedVector>,
    basis: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl PartialEq for LatticeHandle {
    /// Lattice equality, independent of the generator lists.
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape && self.basis == other.basis
    }
}

impl Eq for LatticeHandle {}

impl LatticeHandle {
    pub fn new(shape: IndexShape, generators: Vec<IndexedVector>) -> Result<Self> {
        for g in &generators {
            if g.shape() != shape {
                return Err(Error::ShapeMismatch(shape, g.shape()));
            }
        }
        let mut handle = LatticeHandle { shape, generators: Vec::new(), basis: Vec::new(), pivots: Vec::new() };
        for g in &generators {
            handle.absorb(g.to_dense());
        }
        handle.generators = generators;
        Ok(handle)
    }

    /// The full lattice `Z^(I_n)`.
    pub fn full(shape: IndexShape) -> Self {
        let gens = (0..shape.size())
            .map(|p| IndexedVector::unit(shape, shape.index_at(p)).expect("index in range"))
            .collect();
        LatticeHandle::new(shape, gens).expect("units share the shape")
    }

    pub fn zero(shape: IndexShape) -> Self {
        LatticeHandle { shape, generators: Vec::new(), basis: Vec::new(), pivots: Vec::new() }
    }

    fn absorb(&mut self, dense: Vec<BigInt>) {
        if self.reduce(dense.clone()).iter().all(Zero::is_zero) {
            return;
        }
        let mut rows = std::mem::take(&mut self.basis);
        rows.push(dense);
        let cols = self.shape.size();
        let h = hnf(&IntMatrix::from_rows(rows, cols).expect("rows share the width"));
        self.basis = (0..h.rows).map(|r| h.row(r).to_vec()).filter(|r| r.iter().any(|x| !x.is_zero())).collect();
        self.pivots = self.basis.iter().map(|r| leading_position(r).expect("nonzero row")).collect();
    }

    /// Reduces a dense vector against the echelon basis; the remainder is
    /// zero iff the vector lies in the lattice.
    fn reduce(&self, mut x: Vec<BigInt>) -> Vec<BigInt> {
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if x[p].is_zero() {
                continue;
            }
            let (q, rem) = x[p].div_rem(&row[p]);
            if !rem.is_zero() {
                return x;
            }
            for (xi, ri) in x.iter_mut().zip(row) {
                *xi -= &q * ri;
            }
        }
        x
    }

    pub fn shape(&self) -> IndexShape {
        self.shape
    }

    pub fn generators(&self) -> &[IndexedVector] {
        &self.generators
    }

    /// HNF rows as dense vectors (by [`IndexShape::position`]).
    pub fn hnf_rows(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_vectors(&self) -> Vec<IndexedVector> {
        self.basis
            .iter()
            .map(|r| IndexedVector::from_dense(self.shape, r).expect("row width matches shape"))
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Is `u` an integer combination of the generators?
    pub fn member(&self, u: &IndexedVector) -> Result<bool> {
        if u.shape() != self.shape {
            return Err(Error::ShapeMismatch(self.shape, u.shape()));
        }
        Ok(self.reduce(u.to_dense()).iter().all(Zero::is_zero))
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &LatticeHandle) -> Result<bool> {
        for v in other.basis_vectors() {
            if !self.member(&v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The lattice viewed inside a larger truncation `Z^(I_n)`, `n ≥ shape.n`.
    pub fn embed(&self, n: u32) -> Result<LatticeHandle> {
        if n < self.shape.n() {
            return Err(Error::Precondition(format!("cannot embed level {} into level {n}", self.shape.n())));
        }
        let gens = self.basis_vectors().iter().map(|v| v.reshape(n)).collect::<Result<Vec<_>>>()?;
        LatticeHandle::new(self.shape.with_n(n)?, gens)
    }
}

/// `L ∩ Z^(I_{n_small})`, computed exactly by forcing the coordinates
/// outside the smaller universe to zero.
pub fn intersect_truncation(lattice: &LatticeHandle, n_small: u32) -> Result<LatticeHandle> {
    let shape = lattice.shape();
    if n_small > shape.n() {
        return Err(Error::Precondition(format!("n_small={n_small} exceeds level {}", shape.n())));
    }
    let small = shape.with_n(n_small)?;
    let size = shape.size();
    let inside: Vec<bool> = (0..size).map(|p| shape.index_at(p).max_coord() <= n_small).collect();
    // Outside columns first, so echelon rows pivoting inside vanish outside.
    let order: Vec<usize> = (0..size).filter(|&p| !inside[p]).chain((0..size).filter(|&p| inside[p])).collect();
    let outside_count = inside.iter().filter(|b| !**b).count();
    let rows: Vec<Vec<BigInt>> =
        lattice.hnf_rows().iter().map(|r| order.iter().map(|&p| r[p].clone()).collect()).collect();
    if rows.is_empty() {
        return Ok(LatticeHandle::zero(small));
    }
    let h = hnf(&IntMatrix::from_rows(rows, size)?);
    let mut gens = Vec::new();
    for r in 0..h.rows() {
        let row = h.row(r);
        match leading_position(row) {
            Some(p) if p >= outside_count => {
                let entries = order
                    .iter()
                    .zip(row)
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(&pos, v)| (shape.index_at(pos), v.clone()));
                gens.push(IndexedVector::from_entries(small, entries)?);
            }
            _ => {}
        }
    }
    LatticeHandle::new(small, gens)
}

/// All `u ∈ L` with `0 < ‖u‖ ≤ bound`, sorted.
///
/// Depth-first search over HNF coefficients: once the coefficient of row `t`
/// is chosen, every column before the next pivot is final, which bounds the
/// admissible coefficients and prunes by norm.
pub fn lattice_ball(lattice: &LatticeHandle, bound: u64, node_budget: u64) -> Result<Vec<IndexedVector>> {
    let size = lattice.shape().size();
    let rows: Vec<Vec<i64>> = lattice
        .hnf_rows()
        .iter()
        .map(|r| r.iter().map(|x| x.to_i64().ok_or(Error::Overflow)).collect())
        .collect::<Result<_>>()?;
    let pivots = lattice.pivots().to_vec();
    let bound = i64::try_from(bound).map_err(|_| Error::Overflow)?;
    let mut meter = Meter::new("lattice_ball nodes", node_budget);
    let mut out = Vec::new();
    let mut acc = vec![0i64; size];
    ball_search(&rows, &pivots, 0, &mut acc, 0, bound, &mut meter, &mut out)?;
    let mut vectors = out
        .into_iter()
        .map(|d| IndexedVector::from_dense_i64(lattice.shape(), &d))
        .collect::<Result<Vec<_>>>()?;
    vectors.sort();
    Ok(vectors)
}

#[allow(clippy::too_many_arguments)]
fn ball_search(
    rows: &[Vec<i64>],
    pivots: &[usize],
    depth: usize,
    acc: &mut Vec<i64>,
    fixed_norm: i64,
    bound: i64,
    meter: &mut Meter,
    out: &mut Vec<Vec<i64>>,
) -> Result<()> {
    meter.tick()?;
    if depth == rows.len() {
        if acc.iter().any(|&x| x != 0) {
            out.push(acc.clone());
        }
        return Ok(());
    }
    let row = &rows[depth];
    let p = pivots[depth];
    let end = pivots.get(depth + 1).copied().unwrap_or(acc.len());
    let pivot = row[p];
    let room = bound - fixed_norm;
    let lo = -Integer::div_floor(&(room + acc[p]), &pivot);
    let hi = Integer::div_floor(&(room - acc[p]), &pivot);
    for coeff in lo..=hi {
        let mut added = 0i64;
        let mut ok = true;
        for col in p..end {
            let v = acc[col] + coeff * row[col];
            added += v.abs();
            if fixed_norm + added > bound {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        if coeff != 0 {
            for (a, r) in acc.iter_mut().zip(row) {
                *a += coeff * r;
            }
        }
        let result = ball_search(rows, pivots, depth + 1, acc, fixed_norm + added, bound, meter, out);
        if coeff != 0 {
            for (a, r) in acc.iter_mut().zip(row) {
                *a -= coeff * r;
            }
        }
        result?;
    }
    Ok(())
}

// ---- JSON form ----------------------------------------------------------

/// A generator given either as a canonical vector object or as a dense
/// array of integers by storage position.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum GeneratorRepr {
    Vector(IndexedVector),
    Dense(Vec<i64>),
}

#[derive(Serialize, Deserialize)]
struct LatticeRepr {
    shape: IndexShape,
    generators: Vec<GeneratorRepr>,
}

impl Serialize for LatticeHandle {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        LatticeRepr {
            shape: self.shape,
            generators: self.generators.iter().cloned().map(GeneratorRepr::Vector).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LatticeHandle {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = LatticeRepr::deserialize(deserializer)?;
        let gens = repr
            .generators
            .into_iter()
            .map(|g| match g {
                GeneratorRepr::Vector(v) => Ok(v),
                GeneratorRepr::Dense(d) => IndexedVector::from_dense_i64(repr.shape, &d),
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        LatticeHandle::new(repr.shape, gens).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big_rows(m: &IntMatrix) -> Vec<Vec<i64>> {
        m.to_rows().iter().map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect()).collect()
    }

    fn flat(gens: &[&[i64]], n: u32) -> LatticeHandle {
        let shape = IndexShape::flat(n).unwrap();
        LatticeHandle::new(shape, gens.iter().map(|g| IndexedVector::from_dense_i64(shape, g).unwrap()).collect())
            .unwrap()
    }

    fn seq(v: &[i64]) -> IndexedVector {
        IndexedVector::from_seq(v).unwrap()
    }

    #[test]
    fn hnf_examples() {
        let id = IntMatrix::identity(3);
        assert_eq!(hnf(&id), id);
        let m = IntMatrix::from_i64_rows(&[vec![2, 4], vec![1, 2]]).unwrap();
        assert_eq!(big_rows(&hnf(&m)), vec![vec![1, 2], vec![0, 0]]);
        let z = IntMatrix::from_i64_rows(&[vec![0]]).unwrap();
        assert_eq!(big_rows(&hnf(&z)), vec![vec![0]]);
    }

    #[test]
    fn hnf_reduces_above_pivots() {
        let m = IntMatrix::from_i64_rows(&[vec![3, 5, 7], vec![0, 4, 1], vec![6, 2, -3]]).unwrap();
        let h = hnf(&m);
        assert_eq!(hnf(&h), h);
        let rows = big_rows(&h);
        let mut last = None;
        for (r, row) in rows.iter().enumerate() {
            let Some(p) = row.iter().position(|&x| x != 0) else { continue };
            assert!(row[p] > 0);
            if let Some(prev) = last {
                assert!(p > prev);
            }
            for above in &rows[..r] {
                assert!((0..row[p]).contains(&above[p]));
            }
            last = Some(p);
        }
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&IntMatrix::from_i64_rows(&[vec![1, 1]]).unwrap());
        assert_eq!(k.len(), 1);
        let v: Vec<i64> = k[0].iter().map(|x| x.to_i64().unwrap()).collect();
        assert!(v == vec![1, -1] || v == vec![-1, 1]);
        assert!(kernel_basis(&IntMatrix::identity(2)).is_empty());
        // row margins then column margins of a 2x2 table, cells 11,12,21,22
        let margins = IntMatrix::from_i64_rows(&[
            vec![1, 1, 0, 0],
            vec![0, 0, 1, 1],
            vec![1, 0, 1, 0],
            vec![0, 1, 0, 1],
        ])
        .unwrap();
        let k = kernel_basis(&margins);
        assert_eq!(k.len(), 1);
        let v: Vec<i64> = k[0].iter().map(|x| x.to_i64().unwrap()).collect();
        assert!(v == vec![1, -1, -1, 1] || v == vec![-1, 1, 1, -1]);
    }

    #[test]
    fn member_examples() {
        let l = flat(&[&[2]], 1);
        assert!(!l.member(&seq(&[1])).unwrap());
        assert!(l.member(&seq(&[0])).unwrap());
        assert!(l.member(&seq(&[-4])).unwrap());
        assert!(matches!(l.member(&seq(&[1, 1])), Err(Error::ShapeMismatch(..))));
    }

    #[test]
    fn truncation_examples() {
        let l = flat(&[&[1, -1, 0], &[0, 1, -1]], 3);
        let t = intersect_truncation(&l, 2).unwrap();
        assert_eq!(t.rank(), 1);
        assert!(t.member(&seq(&[1, -1])).unwrap());
        assert!(!t.member(&seq(&[1, 0])).unwrap());
        let l = flat(&[&[0, 0, 1]], 3);
        assert!(intersect_truncation(&l, 2).unwrap().is_zero());
        let full = LatticeHandle::full(IndexShape::flat(3).unwrap());
        assert_eq!(intersect_truncation(&full, 2).unwrap(), LatticeHandle::full(IndexShape::flat(2).unwrap()));
        assert!(intersect_truncation(&full, 4).is_err());
    }

    #[test]
    fn ball_examples() {
        let l = flat(&[&[1, -1]], 2);
        let mut expected = vec![seq(&[-1, 1]), seq(&[1, -1])];
        expected.sort();
        assert_eq!(lattice_ball(&l, 2, 1000).unwrap(), expected);
        let full = LatticeHandle::full(IndexShape::flat(2).unwrap());
        let ball = lattice_ball(&full, 1, 1000).unwrap();
        let mut expected = vec![seq(&[-1, 0]), seq(&[0, -1]), seq(&[0, 1]), seq(&[1, 0])];
        expected.sort();
        assert_eq!(ball, expected);
        assert!(matches!(lattice_ball(&full, 50, 10), Err(Error::BudgetExceeded { .. })));
    }
}
