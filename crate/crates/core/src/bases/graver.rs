//! Graver and Hilbert bases by completion, the brute-force oracle, and the
//! Lawrence doubling that relates the two.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use super::dense::{self, Dense, Signed};
use super::{BasisKind, BasisReport, Certificate};
use crate::budget::{Budget, Meter};
use crate::error::{Error, Result};
use crate::indexvec::{Index, IndexShape, IndexedVector};
use crate::intlinalg::{lattice_ball, LatticeHandle};

/// Outcome of a completion run on dense vectors.
pub(crate) struct Completion {
    pub(crate) elements: Vec<Dense>,
    pub(crate) pairs: u64,
}

/// Pottier-style completion: start from `±generators`, push every sum `f + g`
/// of sign-clashing pairs, take its conformal normal form against the current
/// set and keep nonzero remainders. Sums are processed by increasing norm.
/// At the fixpoint the `⊑`-minimal elements are exactly the Graver basis.
pub(crate) fn graver_completion(generators: &[Dense], budget: &Budget) -> Result<Completion> {
    let mut pairs = Meter::new("graver completion pairs", budget.pairs);
    let mut store: Vec<Signed> = Vec::new();
    let mut present: HashSet<Dense> = HashSet::new();
    let mut queue: BinaryHeap<Reverse<(i64, Dense)>> = BinaryHeap::new();
    let mut queued: HashSet<Dense> = HashSet::new();

    let push_sums = |new: &Signed,
                     store: &[Signed],
                     queue: &mut BinaryHeap<Reverse<(i64, Dense)>>,
                     queued: &mut HashSet<Dense>|
     -> Result<()> {
        for g in store {
            if !new.clashes(g) {
                // f ⊑ f + g, so the sum reduces to zero.
                continue;
            }
            let s = dense::add(&new.values, &g.values)?;
            if dense::is_zero(&s) || !queued.insert(s.clone()) {
                continue;
            }
            queue.push(Reverse((dense::norm(&s), s)));
        }
        Ok(())
    };

    for g in generators {
        for v in [g.clone(), dense::neg(g)] {
            if dense::is_zero(&v) || present.contains(&v) {
                continue;
            }
            let s = Signed::new(v.clone());
            push_sums(&s, &store, &mut queue, &mut queued)?;
            present.insert(v);
            store.push(s);
        }
    }

    while let Some(Reverse((_, s))) = queue.pop() {
        pairs.tick()?;
        let nf = normal_form(s, &store, &present)?;
        if dense::is_zero(&nf) || present.contains(&nf) {
            continue;
        }
        if store.len() as u64 >= budget.elements {
            return Err(Error::BudgetExceeded { what: "graver completion elements", limit: budget.elements });
        }
        let signed = Signed::new(nf.clone());
        push_sums(&signed, &store, &mut queue, &mut queued)?;
        present.insert(nf);
        store.push(signed);
    }
    let elements = dense::minimal(store.into_iter().map(|s| s.values).collect());
    Ok(Completion { elements, pairs: pairs.used() })
}

/// Subtracts elements `h ⊑ s` until none applies.
fn normal_form(s: Dense, store: &[Signed], present: &HashSet<Dense>) -> Result<Dense> {
    let mut current = Signed::new(s);
    loop {
        if dense::is_zero(&current.values) {
            return Ok(current.values);
        }
        if present.contains(&current.values) {
            return Ok(vec![0; current.values.len()]);
        }
        match store.iter().find(|h| h.conformal_leq(&current)) {
            Some(h) => current = Signed::new(dense::sub(&current.values, &h.values)?),
            None => return Ok(current.values),
        }
    }
}

fn dense_generators(lattice: &LatticeHandle) -> Result<Vec<Dense>> {
    lattice.basis_vectors().iter().map(dense::to_dense).collect()
}

fn sorted_vectors(shape: IndexShape, elements: &[Dense]) -> Vec<IndexedVector> {
    let mut out: Vec<IndexedVector> = elements.iter().map(|d| dense::to_vector(shape, d)).collect();
    out.sort();
    out
}

/// The Graver basis: all `⊑`-minimal elements of `L ∖ {0}`.
pub fn graver_basis(lattice: &LatticeHandle, budget: &Budget) -> Result<BasisReport> {
    let completion = graver_completion(&dense_generators(lattice)?, budget)?;
    let elements = sorted_vectors(lattice.shape(), &completion.elements);
    Ok(BasisReport::new(
        BasisKind::Graver,
        elements,
        None,
        Certificate { pairs_processed: completion.pairs, ..Certificate::default() },
    ))
}

/// Brute-force reference: the `⊑`-minimal elements of the norm ball.
pub fn graver_oracle(lattice: &LatticeHandle, bound: u64, budget: &Budget) -> Result<Vec<IndexedVector>> {
    let ball = lattice_ball(lattice, bound, budget.ball_nodes)?;
    let dense = ball.iter().map(dense::to_dense).collect::<Result<Vec<_>>>()?;
    Ok(sorted_vectors(lattice.shape(), &dense::minimal(dense)))
}

/// The Hilbert basis of `L ∩ Z_{≥0}`: the nonnegative Graver elements.
pub fn hilbert_basis(lattice: &LatticeHandle, budget: &Budget) -> Result<BasisReport> {
    let completion = orthant_completion(lattice, budget)?;
    let elements = sorted_vectors(lattice.shape(), &completion.elements);
    Ok(BasisReport::new(
        BasisKind::Hilbert,
        elements,
        None,
        Certificate { pairs_processed: completion.pairs, ..Certificate::default() },
    ))
}

/// `a ⊑ b` on the listed coordinates only.
fn conformal_on(a: &[i64], b: &[i64], coords: &[usize]) -> bool {
    coords.iter().all(|&k| a[k] == 0 || (a[k].signum() == b[k].signum() && a[k].abs() <= b[k].abs()))
}

fn clash_on(a: &[i64], b: &[i64], coords: &[usize]) -> bool {
    coords.iter().any(|&k| a[k].signum() * b[k].signum() < 0)
}

/// Project-and-lift over the nonnegative orthant. The pivot coordinates
/// project `L` injectively, so a completion that only looks at them yields
/// the `⊑`-minimal vectors there. Each further coordinate is lifted by
/// completing over pairs of opposite sign in it, then dropping the vectors
/// that are negative in it.
fn orthant_completion(lattice: &LatticeHandle, budget: &Budget) -> Result<Completion> {
    let mut meter = Meter::new("hilbert completion pairs", budget.pairs);
    let mut active: Vec<usize> = lattice.pivots().to_vec();
    let generators = dense_generators(lattice)?;
    let mut store: Vec<Dense> = Vec::new();
    for g in &generators {
        for v in [g.clone(), dense::neg(g)] {
            if !store.contains(&v) {
                store.push(v);
            }
        }
    }
    store = complete_on(store, &active, None, &mut meter, budget)?;
    store.retain(|v| active.iter().all(|&k| v[k] >= 0));

    let width = lattice.shape().size();
    let rest: Vec<usize> = (0..width).filter(|k| !active.contains(k)).collect();
    for j in rest {
        active.push(j);
        store = complete_on(store, &active, Some(j), &mut meter, budget)?;
        store.retain(|v| v[j] >= 0);
    }
    let elements = dense::minimal(store);
    Ok(Completion { elements, pairs: meter.used() })
}

/// Completion with conformality restricted to `coords`. With `lift = Some(j)`
/// only pairs of opposite sign in `j` are formed; otherwise any pair that
/// clashes on `coords`.
fn complete_on(
    start: Vec<Dense>,
    coords: &[usize],
    lift: Option<usize>,
    meter: &mut Meter,
    budget: &Budget,
) -> Result<Vec<Dense>> {
    let pairs_with = |f: &[i64], g: &[i64]| match lift {
        Some(j) => f[j].signum() * g[j].signum() < 0,
        None => clash_on(f, g, coords),
    };
    let mut store: Vec<Dense> = Vec::new();
    let mut present: HashSet<Dense> = HashSet::new();
    let mut queue: BinaryHeap<Reverse<(i64, Dense)>> = BinaryHeap::new();
    let mut queued: HashSet<Dense> = HashSet::new();
    let mut admit = |v: Dense,
                     store: &mut Vec<Dense>,
                     present: &mut HashSet<Dense>,
                     queue: &mut BinaryHeap<Reverse<(i64, Dense)>>|
     -> Result<()> {
        if store.len() as u64 >= budget.elements {
            return Err(Error::BudgetExceeded { what: "hilbert completion elements", limit: budget.elements });
        }
        for g in store.iter() {
            if !pairs_with(&v, g) {
                continue;
            }
            let s = dense::add(&v, g)?;
            if coords.iter().any(|&k| s[k] != 0) && queued.insert(s.clone()) {
                let key = coords.iter().map(|&k| s[k].abs()).sum();
                queue.push(Reverse((key, s)));
            }
        }
        present.insert(v.clone());
        store.push(v);
        Ok(())
    };
    for v in start {
        if coords.iter().any(|&k| v[k] != 0) && !present.contains(&v) {
            admit(v, &mut store, &mut present, &mut queue)?;
        }
    }
    while let Some(Reverse((_, s))) = queue.pop() {
        meter.tick()?;
        let mut current = s;
        loop {
            if coords.iter().all(|&k| current[k] == 0) || present.contains(&current) {
                break;
            }
            match store.iter().find(|h| conformal_on(h, &current, coords)) {
                Some(h) => current = dense::sub(&current, h)?,
                None => {
                    admit(current, &mut store, &mut present, &mut queue)?;
                    break;
                }
            }
        }
    }
    Ok(store)
}

/// Position of an index in the doubled shape: the second copy shifts `j` by `c`.
fn doubled(index: &Index, c: u32, second: bool) -> Index {
    Index::new(index.coords().to_vec(), if second { index.j() + c } else { index.j() })
}

/// The doubled shape `[n]^d × [2c]`.
pub fn lawrence_shape(shape: IndexShape) -> Result<IndexShape> {
    IndexShape::new(shape.d(), 2 * shape.c(), shape.n())
}

/// `(u, v)` as one vector of the doubled shape.
pub fn lawrence_pair(u: &IndexedVector, v: &IndexedVector) -> Result<IndexedVector> {
    if u.shape() != v.shape() {
        return Err(Error::ShapeMismatch(u.shape(), v.shape()));
    }
    let c = u.shape().c();
    let entries = u
        .entries()
        .map(|(ix, x)| (doubled(ix, c, false), x.clone()))
        .chain(v.entries().map(|(ix, x)| (doubled(ix, c, true), x.clone())));
    IndexedVector::from_entries(lawrence_shape(u.shape())?, entries)
}

/// `φ(u, v) = u − v`.
pub fn lawrence_project(w: &IndexedVector) -> Result<IndexedVector> {
    let shape = w.shape();
    if shape.c() % 2 != 0 {
        return Err(Error::Precondition(format!("{shape} is not a doubled shape")));
    }
    let c = shape.c() / 2;
    let target = IndexShape::new(shape.d(), c, shape.n())?;
    let entries = w.entries().map(|(ix, x)| {
        if ix.j() > c {
            (Index::new(ix.coords().to_vec(), ix.j() - c), -x.clone())
        } else {
            (ix.clone(), x.clone())
        }
    });
    IndexedVector::from_entries(target, entries)
}

/// `φ^{-1}(L)`: generated by `(b, 0)` for the generators `b` of `L` and by
/// the diagonal units `(e_i, e_i)`.
pub fn lawrence_lift(lattice: &LatticeHandle) -> Result<LatticeHandle> {
    let shape = lattice.shape();
    let zero = IndexedVector::zero(shape);
    let mut gens = Vec::new();
    for b in lattice.generators() {
        gens.push(lawrence_pair(b, &zero)?);
    }
    for ix in shape.indices() {
        let e = IndexedVector::unit(shape, ix)?;
        gens.push(lawrence_pair(&e, &e)?);
    }
    LatticeHandle::new(lawrence_shape(shape)?, gens)
}

/// Checks both directions of the Graver/Hilbert correspondence under
/// Lawrence doubling: `G = φ(H) ∖ {0}` and
/// `H = {(u⁺, u⁻) : u ∈ G} ∪ {(e_i, e_i)}`.
pub fn hilbert_graver_crosscheck(lattice: &LatticeHandle, budget: &Budget) -> Result<bool> {
    let graver = graver_basis(lattice, budget)?;
    let lifted = hilbert_basis(&lawrence_lift(lattice)?, budget)?;

    let mut projected: Vec<IndexedVector> = lifted
        .elements
        .iter()
        .map(lawrence_project)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|v| !v.is_zero())
        .collect();
    projected.sort();
    projected.dedup();
    if projected != graver.elements {
        return Ok(false);
    }

    let shape = lattice.shape();
    let mut expected = Vec::new();
    for u in &graver.elements {
        let split = u.sign_split();
        expected.push(lawrence_pair(&split.plus, &split.minus)?);
    }
    for ix in shape.indices() {
        let e = IndexedVector::unit(shape, ix)?;
        expected.push(lawrence_pair(&e, &e)?);
    }
    expected.sort();
    Ok(expected == lifted.elements)
}

/// Lattices given as plain integer rows (`d = c = 1`).
pub fn flat_lattice(rows: &[Vec<i64>]) -> Result<LatticeHandle> {
    let n = rows.first().map_or(1, |r| r.len().max(1)) as u32;
    let shape = IndexShape::flat(n)?;
    let gens = rows.iter().map(|r| IndexedVector::from_dense_i64(shape, r)).collect::<Result<Vec<_>>>()?;
    LatticeHandle::new(shape, gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[i64]) -> IndexedVector {
        IndexedVector::from_seq(v).unwrap()
    }

    fn sorted(mut v: Vec<IndexedVector>) -> Vec<IndexedVector> {
        v.sort();
        v
    }

    #[test]
    fn graver_of_a_line() {
        let l = flat_lattice(&[vec![1, -1]]).unwrap();
        let g = graver_basis(&l, &Budget::default()).unwrap();
        assert_eq!(g.elements, sorted(vec![seq(&[1, -1]), seq(&[-1, 1])]));
    }

    #[test]
    fn graver_of_zero_lattice_is_empty() {
        let l = LatticeHandle::zero(IndexShape::flat(3).unwrap());
        assert!(graver_basis(&l, &Budget::default()).unwrap().elements.is_empty());
    }

    #[test]
    fn oracle_examples() {
        let l = flat_lattice(&[vec![2]]).unwrap();
        assert_eq!(graver_oracle(&l, 3, &Budget::default()).unwrap(), sorted(vec![seq(&[2]), seq(&[-2])]));
        let full = LatticeHandle::full(IndexShape::flat(2).unwrap());
        assert_eq!(
            graver_oracle(&full, 2, &Budget::default()).unwrap(),
            sorted(vec![seq(&[1, 0]), seq(&[-1, 0]), seq(&[0, 1]), seq(&[0, -1])])
        );
    }

    #[test]
    fn hilbert_examples() {
        let full = LatticeHandle::full(IndexShape::flat(2).unwrap());
        assert_eq!(hilbert_basis(&full, &Budget::default()).unwrap().elements, sorted(vec![seq(&[1, 0]), seq(&[0, 1])]));
        let diag = flat_lattice(&[vec![1, 1]]).unwrap();
        assert_eq!(hilbert_basis(&diag, &Budget::default()).unwrap().elements, vec![seq(&[1, 1])]);
    }

    #[test]
    fn lawrence_lift_examples() {
        let zero = LatticeHandle::zero(IndexShape::flat(1).unwrap());
        let lift = lawrence_lift(&zero).unwrap();
        assert_eq!(lift.rank(), 1);
        let d = IndexShape::new(1, 2, 1).unwrap();
        let diag = IndexedVector::from_dense_i64(d, &[1, 1]).unwrap();
        assert!(lift.member(&diag).unwrap());

        let line = flat_lattice(&[vec![1, -1]]).unwrap();
        let lift = lawrence_lift(&line).unwrap();
        assert_eq!(lift.rank(), 3);
        for g in lift.generators() {
            assert!(line.member(&lawrence_project(g).unwrap()).unwrap());
        }
    }

    #[test]
    fn crosscheck_small_cases() {
        let b = Budget::default();
        assert!(hilbert_graver_crosscheck(&LatticeHandle::zero(IndexShape::flat(2).unwrap()), &b).unwrap());
        assert!(hilbert_graver_crosscheck(&flat_lattice(&[vec![1, -1]]).unwrap(), &b).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let l = flat_lattice(&[vec![1, 2, 3, -4], vec![0, 3, -1, 2]]).unwrap();
        let tiny = Budget { pairs: 3, ..Budget::default() };
        assert!(matches!(graver_basis(&l, &tiny), Err(Error::BudgetExceeded { .. })));
    }
}
