//! Fibers and fiber graphs, with the Markov and Gröbner verifiers built on
//! them.
//!
//! Fibers are enumerated by closing the root under `±` Graver moves, which
//! reaches the whole fiber because a Graver basis is a Markov basis. Fibers
//! are finite exactly when `L ∩ Z_{≥0} = {0}`, i.e. when the Hilbert basis is
//! empty; otherwise the verifiers refuse.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use super::dense::{self, Dense, DenseOrder};
use super::graver::graver_completion;
use crate::budget::{Budget, Meter};
use crate::error::{Error, Refusal, Result};
use crate::indexvec::{IndexShape, IndexedVector, TermOrder};
use crate::intlinalg::LatticeHandle;
use crate::symmetry::{act, canonical_form, is_sym_invariant, Permutation};

/// A fiber `F_L(u)` together with a move set. Two vertices are adjacent when
/// their difference lies in `±moves`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberGraph {
    pub root: IndexedVector,
    pub vertices: Vec<IndexedVector>,
    pub moves: Vec<IndexedVector>,
}

impl FiberGraph {
    /// Is the graph connected under `±moves`?
    pub fn is_connected(&self) -> Result<bool> {
        if self.vertices.is_empty() {
            return Ok(true);
        }
        let vertices: Vec<Dense> = self.vertices.iter().map(dense::to_dense).collect::<Result<_>>()?;
        let moves = signed_moves(&self.moves)?;
        let set: HashSet<Dense> = vertices.iter().cloned().collect();
        Ok(undirected_reach(&vertices[0], &moves, &set)?.len() == set.len())
    }
}

/// The outcome of a bounded verification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub result: bool,
    pub verified_up_to: u64,
    pub fibers_checked: u64,
    /// Only representatives of `Sym(n)`-orbits were tested.
    pub symmetric_quotient: bool,
    /// A root whose fiber fails the check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<IndexedVector>,
}

/// Holds the Graver moves of a lattice once its fibers are known to be finite.
#[derive(Debug, Clone)]
pub struct FiberOracle {
    shape: IndexShape,
    moves: Vec<Dense>,
    budget: Budget,
}

impl FiberOracle {
    /// Computes the Graver basis and refuses when it has a nonnegative element.
    pub fn new(lattice: &LatticeHandle, budget: &Budget) -> Result<Self> {
        let generators: Vec<Dense> = lattice.basis_vectors().iter().map(dense::to_dense).collect::<Result<_>>()?;
        let graver = graver_completion(&generators, budget)?;
        if graver.elements.iter().any(|g| dense::is_nonnegative(g)) {
            return Err(Error::Refused(Refusal::InfiniteFiber));
        }
        Ok(FiberOracle { shape: lattice.shape(), moves: graver.elements, budget: *budget })
    }

    pub fn shape(&self) -> IndexShape {
        self.shape
    }

    /// The Graver moves, as vectors.
    pub fn moves(&self) -> Vec<IndexedVector> {
        let mut out: Vec<IndexedVector> = self.moves.iter().map(|m| dense::to_vector(self.shape, m)).collect();
        out.sort();
        out
    }

    fn fiber_dense(&self, root: &Dense) -> Result<HashSet<Dense>> {
        let mut meter = Meter::new("fiber vertices", self.budget.fiber);
        let mut seen: HashSet<Dense> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(root.clone());
        queue.push_back(root.clone());
        while let Some(v) = queue.pop_front() {
            meter.tick()?;
            for m in &self.moves {
                let w = dense::add(&v, m)?;
                if dense::is_nonnegative(&w) && !seen.contains(&w) {
                    seen.insert(w.clone());
                    queue.push_back(w);
                }
            }
        }
        Ok(seen)
    }

    /// The full fiber of a nonnegative vector, sorted.
    pub fn fiber(&self, u: &IndexedVector) -> Result<Vec<IndexedVector>> {
        check_root(u, self.shape)?;
        let mut out: Vec<IndexedVector> =
            self.fiber_dense(&dense::to_dense(u)?)?.iter().map(|v| dense::to_vector(self.shape, v)).collect();
        out.sort();
        Ok(out)
    }
}

fn check_root(u: &IndexedVector, shape: IndexShape) -> Result<()> {
    if u.shape() != shape {
        return Err(Error::ShapeMismatch(u.shape(), shape));
    }
    if !u.is_nonnegative() {
        return Err(Error::NegativeVector);
    }
    Ok(())
}

/// `F_L(u)` with the Graver moves as edge set.
pub fn fiber(lattice: &LatticeHandle, u: &IndexedVector, budget: &Budget) -> Result<FiberGraph> {
    let oracle = FiberOracle::new(lattice, budget)?;
    Ok(FiberGraph { root: u.clone(), vertices: oracle.fiber(u)?, moves: oracle.moves() })
}

/// `moves ∪ −moves`, deduplicated.
fn signed_moves(moves: &[IndexedVector]) -> Result<Vec<Dense>> {
    let mut out = HashSet::new();
    for m in moves {
        let d = dense::to_dense(m)?;
        if !dense::is_zero(&d) {
            out.insert(dense::neg(&d));
            out.insert(d);
        }
    }
    let mut out: Vec<Dense> = out.into_iter().collect();
    out.sort();
    Ok(out)
}

fn undirected_reach(start: &Dense, moves: &[Dense], within: &HashSet<Dense>) -> Result<HashSet<Dense>> {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start.clone());
    while let Some(v) = queue.pop_front() {
        for m in moves {
            let w = dense::add(&v, m)?;
            if within.contains(&w) && !seen.contains(&w) {
                seen.insert(w.clone());
                queue.push_back(w);
            }
        }
    }
    Ok(seen)
}

/// Every nonnegative vector of the given length and norm at most `bound`,
/// in increasing norm.
fn nonnegative_up_to(len: usize, bound: u64) -> Vec<Dense> {
    fn fill(prefix: &mut Dense, len: usize, remaining: i64, out: &mut Vec<Dense>) {
        if prefix.len() + 1 == len {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for x in (0..=remaining).rev() {
            prefix.push(x);
            fill(prefix, len, remaining - x, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for total in 0..=bound as i64 {
        if len == 0 {
            break;
        }
        fill(&mut Vec::with_capacity(len), len, total, &mut out);
    }
    out
}

fn set_is_sym_invariant(elements: &[IndexedVector], n: u32) -> Result<bool> {
    if n == 1 {
        return Ok(true);
    }
    let mut sorted: Vec<IndexedVector> = elements.iter().filter(|v| !v.is_zero()).cloned().collect();
    sorted.sort();
    let swap = Permutation::transposition(n, 1, 2)?;
    let cycle = Permutation::from_images((2..=n).chain([1]).collect())?;
    for u in &sorted {
        for g in [&swap, &cycle] {
            if sorted.binary_search(&act(g, u)?).is_err() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Walks the roots of norm at most `bound`, one per fiber (and one per orbit
/// when `symmetric`), and calls `check` on each fiber. Stops at the first
/// failure and returns its root.
fn scan_fibers(
    oracle: &FiberOracle,
    bound: u64,
    symmetric: bool,
    mut check: impl FnMut(&Dense, &HashSet<Dense>) -> Result<bool>,
) -> Result<(Option<Dense>, u64)> {
    let shape = oracle.shape;
    let mut done: HashSet<Dense> = HashSet::new();
    let mut checked = 0;
    for root in nonnegative_up_to(shape.size(), bound) {
        if done.contains(&root) {
            continue;
        }
        if symmetric {
            let v = dense::to_vector(shape, &root);
            if canonical_form(&v, shape.n(), oracle.budget.orbit)? != v {
                continue;
            }
        }
        let fiber = oracle.fiber_dense(&root)?;
        checked += 1;
        if !check(&root, &fiber)? {
            return Ok((Some(root), checked));
        }
        let limit = bound as i64;
        done.extend(fiber.into_iter().filter(|v| dense::norm(v) <= limit));
    }
    Ok((None, checked))
}

fn check_moves(moves: &[IndexedVector], shape: IndexShape) -> Result<()> {
    for m in moves {
        if m.shape() != shape {
            return Err(Error::ShapeMismatch(m.shape(), shape));
        }
    }
    Ok(())
}

/// Checks that `G(u, B)` is connected for every nonnegative `u` with
/// `‖u‖ ≤ bound`. When both `L` and `B` are `Sym(n)`-invariant only orbit
/// representatives are tested.
pub fn verify_markov(lattice: &LatticeHandle, moves: &[IndexedVector], bound: u64, budget: &Budget) -> Result<Verification> {
    let shape = lattice.shape();
    check_moves(moves, shape)?;
    let oracle = FiberOracle::new(lattice, budget)?;
    let symmetric = is_sym_invariant(lattice)? && set_is_sym_invariant(moves, shape.n())?;
    let signed = signed_moves(moves)?;
    let (witness, checked) = scan_fibers(&oracle, bound, symmetric, |root, fiber| {
        Ok(undirected_reach(root, &signed, fiber)?.len() == fiber.len())
    })?;
    Ok(Verification {
        result: witness.is_none(),
        verified_up_to: bound,
        fibers_checked: checked,
        symmetric_quotient: symmetric,
        witness: witness.map(|w| dense::to_vector(shape, &w)),
    })
}

/// Checks that every nonnegative `u` with `‖u‖ ≤ bound` has a directed
/// `B`-path to the `≺`-minimum of its fiber, each step `v → v − b` lowering
/// `v`. The search runs backwards from the minimum.
pub fn verify_groebner(
    lattice: &LatticeHandle,
    moves: &[IndexedVector],
    order: TermOrder,
    bound: u64,
    budget: &Budget,
) -> Result<Verification> {
    let shape = lattice.shape();
    check_moves(moves, shape)?;
    let oracle = FiberOracle::new(lattice, budget)?;
    let dorder = DenseOrder::new(order, shape);
    // Each move oriented with its leading part positive.
    let directed: Vec<(Dense, Dense)> = signed_moves(moves)?
        .into_iter()
        .filter(|m| dorder.compare(&dense::plus_part(m), &dense::minus_part(m)) == Ordering::Greater)
        .map(|m| {
            let minus = dense::minus_part(&m);
            (m, minus)
        })
        .collect();
    let limit = bound as i64;
    let (witness, checked) = scan_fibers(&oracle, bound, false, |_, fiber| {
        let minimum = fiber.iter().min_by(|a, b| dorder.compare(a, b)).expect("fibers are nonempty");
        let mut reached: HashSet<Dense> = HashSet::new();
        let mut queue = VecDeque::new();
        reached.insert(minimum.clone());
        queue.push_back(minimum.clone());
        while let Some(w) = queue.pop_front() {
            for (m, minus) in &directed {
                // w = v − m needs m⁻ ≤ w.
                if !dense::leq(minus, &w) {
                    continue;
                }
                let v = dense::add(&w, m)?;
                if fiber.contains(&v) && !reached.contains(&v) {
                    reached.insert(v.clone());
                    queue.push_back(v);
                }
            }
        }
        Ok(fiber.iter().filter(|v| dense::norm(v) <= limit).all(|v| reached.contains(v)))
    })?;
    Ok(Verification {
        result: witness.is_none(),
        verified_up_to: bound,
        fibers_checked: checked,
        symmetric_quotient: false,
        witness: witness.map(|w| dense::to_vector(shape, &w)),
    })
}

/// Does `B` generate `L` as a group?
pub fn generating_set_check(lattice: &LatticeHandle, moves: &[IndexedVector]) -> Result<bool> {
    check_moves(moves, lattice.shape())?;
    Ok(LatticeHandle::new(lattice.shape(), moves.to_vec())? == *lattice)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::graver::{flat_lattice, graver_basis};

    fn independence() -> LatticeHandle {
        flat_lattice(&[vec![1, -1, -1, 1]]).unwrap()
    }

    fn seq(v: &[i64]) -> IndexedVector {
        IndexedVector::from_seq(v).unwrap()
    }

    #[test]
    fn enumerates_nonnegative_vectors() {
        assert_eq!(nonnegative_up_to(3, 2).len(), 10);
        assert_eq!(nonnegative_up_to(4, 6).len(), 210);
    }

    #[test]
    fn fiber_examples() {
        let b = Budget::default();
        let l = independence();
        let f = fiber(&l, &seq(&[1, 0, 0, 1]), &b).unwrap();
        assert_eq!(f.vertices, vec![seq(&[1, 0, 0, 1]), seq(&[0, 1, 1, 0])]);
        assert!(f.is_connected().unwrap());
        let f = fiber(&l, &seq(&[0, 0, 0, 0]), &b).unwrap();
        assert_eq!(f.vertices.len(), 1);
        let f = fiber(&l, &seq(&[1, 1, 0, 0]), &b).unwrap();
        assert_eq!(f.vertices, vec![seq(&[1, 1, 0, 0])]);
    }

    #[test]
    fn refuses_infinite_fibers() {
        let l = flat_lattice(&[vec![1, 1]]).unwrap();
        assert!(matches!(
            verify_markov(&l, &[], 2, &Budget::default()),
            Err(Error::Refused(Refusal::InfiniteFiber))
        ));
    }

    #[test]
    fn markov_examples() {
        let b = Budget::default();
        let l = independence();
        assert!(verify_markov(&l, &[seq(&[1, -1, -1, 1])], 6, &b).unwrap().result);
        let empty = verify_markov(&l, &[], 6, &b).unwrap();
        assert!(!empty.result);
        assert_eq!(empty.witness, Some(seq(&[1, 0, 0, 1])));
        let zero = LatticeHandle::zero(IndexShape::flat(2).unwrap());
        assert!(verify_markov(&zero, &[], 4, &b).unwrap().result);
        assert!(verify_groebner(&zero, &[], TermOrder::Lex, 4, &b).unwrap().result);
    }

    #[test]
    fn groebner_needs_orientation() {
        let b = Budget::default();
        let l = independence();
        for order in TermOrder::ALL {
            assert!(verify_groebner(&l, &[seq(&[1, -1, -1, 1])], order, 4, &b).unwrap().result);
            assert!(!verify_groebner(&l, &[], order, 4, &b).unwrap().result);
        }
    }

    #[test]
    fn generating_checks() {
        let l = flat_lattice(&[vec![1, 2]]).unwrap();
        assert!(generating_set_check(&l, &[seq(&[1, 2])]).unwrap());
        assert!(!generating_set_check(&l, &[seq(&[2, 4])]).unwrap());
        let g = graver_basis(&l, &Budget::default()).unwrap();
        assert!(generating_set_check(&l, &g.elements).unwrap());
    }
}
