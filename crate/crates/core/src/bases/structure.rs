//! The structural elements `g_L(e_1 − e_2)` and `s_L e_1` of a
//! `Sym`-invariant lattice in `Z^n`, and the envelope they give the Graver
//! basis.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::graver::graver_basis;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::indexvec::{Index, IndexedVector};
use crate::intlinalg::LatticeHandle;
use crate::symmetry::{is_sym_invariant, orbit};

fn require_flat(lattice: &LatticeHandle) -> Result<()> {
    let shape = lattice.shape();
    if shape.d() != 1 || shape.c() != 1 {
        return Err(Error::Precondition(format!("structural elements need d = c = 1, got {shape}")));
    }
    Ok(())
}

fn unit(lattice: &LatticeHandle, i: u32) -> Result<IndexedVector> {
    IndexedVector::unit(lattice.shape(), Index::new(vec![i], 1))
}

/// `g_L (e_1 − e_2)`, where `g_L` is the gcd of all entries of `L`.
/// `None` for the zero lattice.
pub fn gl_element(lattice: &LatticeHandle) -> Result<Option<IndexedVector>> {
    require_flat(lattice)?;
    let g = lattice
        .basis_vectors()
        .iter()
        .flat_map(|b| b.entries().map(|(_, x)| x.clone()).collect::<Vec<_>>())
        .fold(BigInt::zero(), |acc, x| acc.gcd(&x));
    if g.is_zero() {
        return Ok(None);
    }
    if lattice.shape().n() < 2 {
        return Err(Error::Precondition("g_L (e_1 - e_2) needs n >= 2".into()));
    }
    let v = unit(lattice, 1)?.sub(&unit(lattice, 2)?)?.scale(&g);
    if !lattice.member(&v)? {
        return Err(Error::Precondition("g_L (e_1 - e_2) is not in the lattice; is it Sym-invariant?".into()));
    }
    Ok(Some(v))
}

/// `s_L e_1`, where `s_L` is the gcd of all coordinate sums of `L`. `None`
/// when every sum vanishes.
pub fn sl_element(lattice: &LatticeHandle) -> Result<Option<IndexedVector>> {
    require_flat(lattice)?;
    let s = lattice
        .basis_vectors()
        .iter()
        .map(|b| b.entries().map(|(_, x)| x.clone()).sum::<BigInt>())
        .fold(BigInt::zero(), |acc, x| acc.gcd(&x));
    if s.is_zero() {
        return Ok(None);
    }
    let e1 = unit(lattice, 1)?;
    let v = e1.scale(&s);
    if !lattice.member(&v)? {
        return Err(Error::Precondition("s_L e_1 is not in the lattice; is it Sym-invariant?".into()));
    }
    // ⊑-minimality in L ∖ {0}: no smaller multiple of e_1 lies in L.
    let mut t = BigInt::one();
    while t < s {
        if lattice.member(&e1.scale(&t))? {
            return Err(Error::Precondition(format!("{t} e_1 lies in the lattice below s_L e_1")));
        }
        t += 1;
    }
    Ok(Some(v))
}

/// Checks `Sym(n)(±H) ⊆ G ⊆ Sym(n)(±H ∪ {±g_L})` for the computed Graver
/// basis `G` and its nonnegative part `H`.
pub fn thm_graver_envelope_check(lattice: &LatticeHandle, budget: &Budget) -> Result<bool> {
    require_flat(lattice)?;
    if !is_sym_invariant(lattice)? {
        return Err(Error::Precondition("the lattice is not Sym(n)-invariant".into()));
    }
    let n = lattice.shape().n();
    let graver: BTreeSet<IndexedVector> = graver_basis(lattice, budget)?.elements.into_iter().collect();
    let mut inner = BTreeSet::new();
    for h in graver.iter().filter(|v| v.is_nonnegative()) {
        for w in [h.clone(), h.neg()] {
            inner.extend(orbit(&w, n, budget.orbit)?);
        }
    }
    let mut outer = inner.clone();
    if let Some(g) = gl_element(lattice)? {
        for w in [g.clone(), g.neg()] {
            outer.extend(orbit(&w, n, budget.orbit)?);
        }
    }
    Ok(inner.is_subset(&graver) && graver.is_subset(&outer))
}
