//! Gröbner bases of lattices, computed on exponent pairs.
//!
//! A lattice vector `u` stands for the binomial `x^{u⁺} − x^{u⁻}`. It is
//! directed so that `u⁺ ≻ u⁻`; a monomial `m` with `u⁺ ≤ m` rewrites to
//! `m − u⁺ + u⁻`. No polynomial ring is represented.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};

use super::dense::{self, Dense, DenseOrder};
use super::graver::graver_completion;
use super::{BasisKind, BasisReport, Certificate};
use crate::budget::{Budget, Meter};
use crate::error::{Error, Result};
use crate::indexvec::{IndexedVector, TermOrder};
use crate::intlinalg::LatticeHandle;

/// A nonzero lattice vector oriented so that its positive part leads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedVector {
    vector: IndexedVector,
}

impl DirectedVector {
    /// Orients `u` (possibly negating it) so that `u⁺ ≻ u⁻`.
    pub fn new(u: &IndexedVector, order: TermOrder) -> Result<Self> {
        if u.is_zero() {
            return Err(Error::ZeroVector);
        }
        let split = u.sign_split();
        let vector = match order.compare(&split.plus, &split.minus)? {
            Ordering::Greater => u.clone(),
            _ => u.neg(),
        };
        Ok(DirectedVector { vector })
    }

    pub fn vector(&self) -> &IndexedVector {
        &self.vector
    }

    /// Leading exponent `u⁺`.
    pub fn lead(&self) -> IndexedVector {
        self.vector.sign_split().plus
    }

    /// Trailing exponent `u⁻`.
    pub fn trail(&self) -> IndexedVector {
        self.vector.sign_split().minus
    }
}

/// The exponent pair `(a, b)` of a binomial `x^a − x^b`. Both sides are
/// nonnegative; a common factor is allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialPair {
    pub a: IndexedVector,
    pub b: IndexedVector,
}

impl MonomialPair {
    pub fn new(a: IndexedVector, b: IndexedVector) -> Result<Self> {
        if !a.is_nonnegative() || !b.is_nonnegative() {
            return Err(Error::NegativeVector);
        }
        if a.shape() != b.shape() {
            return Err(Error::ShapeMismatch(a.shape(), b.shape()));
        }
        Ok(MonomialPair { a, b })
    }

    /// The lattice vector `a − b`.
    pub fn difference(&self) -> IndexedVector {
        self.a.sub(&self.b).expect("shapes agree")
    }
}

#[derive(Debug, Clone)]
struct Rule {
    lead: Dense,
    trail: Dense,
}

impl Rule {
    fn vector(&self) -> Dense {
        dense::sub(&self.lead, &self.trail).expect("parts of one vector")
    }
}

fn orient(v: &[i64], order: &DenseOrder) -> Option<Rule> {
    if dense::is_zero(v) {
        return None;
    }
    let plus = dense::plus_part(v);
    let minus = dense::minus_part(v);
    match order.compare(&plus, &minus) {
        Ordering::Greater => Some(Rule { lead: plus, trail: minus }),
        _ => Some(Rule { lead: minus, trail: plus }),
    }
}

/// Rewrites `m` with the first applicable rule until none applies.
fn reduce(mut m: Dense, rules: &[Rule], meter: &mut Meter) -> Result<Dense> {
    loop {
        match rules.iter().find(|r| dense::leq(&r.lead, &m)) {
            Some(r) => {
                meter.tick()?;
                m = dense::add(&dense::sub(&m, &r.lead)?, &r.trail)?;
            }
            None => return Ok(m),
        }
    }
}

/// Drops rules whose leading term is divisible by another's, then reduces
/// every trailing term. The result is the reduced Gröbner basis.
fn interreduce(rules: Vec<Rule>, order: &DenseOrder, meter: &mut Meter) -> Result<Vec<Rule>> {
    let mut sorted = rules;
    sorted.sort_by(|a, b| order.compare(&a.lead, &b.lead).then_with(|| order.compare(&a.trail, &b.trail)));
    let mut minimal: Vec<Rule> = Vec::new();
    for r in sorted {
        if !minimal.iter().any(|k| dense::leq(&k.lead, &r.lead)) {
            minimal.push(r);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for (k, r) in minimal.iter().enumerate() {
        let others: Vec<Rule> =
            minimal.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, x)| x.clone()).collect();
        let trail = reduce(r.trail.clone(), &others, meter)?;
        out.push(Rule { lead: r.lead.clone(), trail });
    }
    Ok(out)
}

/// Buchberger completion on directed vectors.
///
/// The seed is the lattice generators together with the Graver basis. The
/// binomials of a bare lattice basis can generate a non-saturated ideal,
/// whereas the Graver basis is a Markov basis, which makes the completion
/// describe every fiber of `L`.
pub fn groebner_basis(lattice: &LatticeHandle, order: TermOrder, budget: &Budget) -> Result<BasisReport> {
    let shape = lattice.shape();
    let dorder = DenseOrder::new(order, shape);
    let generators: Vec<Dense> = lattice.basis_vectors().iter().map(dense::to_dense).collect::<Result<_>>()?;
    let graver = graver_completion(&generators, budget)?;

    let mut seen: HashSet<Dense> = HashSet::new();
    let mut rules: Vec<Rule> = Vec::new();
    for v in generators.iter().chain(&graver.elements) {
        if let Some(r) = orient(v, &dorder) {
            if seen.insert(r.vector()) {
                rules.push(r);
            }
        }
    }

    let mut pair_meter = Meter::new("buchberger pairs", budget.pairs);
    let mut step_meter = Meter::new("buchberger reduction steps", budget.pairs.saturating_mul(100));
    let mut pending: VecDeque<(usize, usize)> =
        (0..rules.len()).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    while let Some((i, j)) = pending.pop_front() {
        let (f, g) = (&rules[i], &rules[j]);
        if f.lead.iter().zip(&g.lead).all(|(a, b)| *a == 0 || *b == 0) {
            // Coprime leading terms: the S-pair reduces to zero.
            continue;
        }
        pair_meter.tick()?;
        let w: Dense = f.lead.iter().zip(&g.lead).map(|(a, b)| *a.max(b)).collect();
        let left = dense::add(&dense::sub(&w, &f.lead)?, &f.trail)?;
        let right = dense::add(&dense::sub(&w, &g.lead)?, &g.trail)?;
        let left = reduce(left, &rules, &mut step_meter)?;
        let right = reduce(right, &rules, &mut step_meter)?;
        if left == right {
            continue;
        }
        let new = orient(&dense::sub(&left, &right)?, &dorder).expect("distinct normal forms");
        if !seen.insert(new.vector()) {
            continue;
        }
        if rules.len() as u64 >= budget.elements {
            return Err(Error::BudgetExceeded { what: "buchberger elements", limit: budget.elements });
        }
        let k = rules.len();
        rules.push(new);
        pending.extend((0..k).map(|i| (i, k)));
    }

    let reduced = interreduce(rules, &dorder, &mut step_meter)?;
    let mut elements: Vec<IndexedVector> = reduced.iter().map(|r| dense::to_vector(shape, &r.vector())).collect();
    elements.sort();
    Ok(BasisReport::new(
        BasisKind::Groebner,
        elements,
        Some(order),
        Certificate {
            pairs_processed: graver.pairs + pair_meter.used(),
            ..Certificate::default()
        },
    ))
}

/// Normal form of a nonnegative vector under the directed elements of `basis`.
pub fn normal_form(u: &IndexedVector, basis: &[IndexedVector], order: TermOrder, budget: &Budget) -> Result<IndexedVector> {
    if !u.is_nonnegative() {
        return Err(Error::NegativeVector);
    }
    let dorder = DenseOrder::new(order, u.shape());
    let rules: Vec<Rule> = basis
        .iter()
        .map(|b| dense::to_dense(b).map(|d| orient(&d, &dorder)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let mut meter = Meter::new("normal form steps", budget.pairs);
    let nf = reduce(dense::to_dense(u)?, &rules, &mut meter)?;
    Ok(dense::to_vector(u.shape(), &nf))
}
