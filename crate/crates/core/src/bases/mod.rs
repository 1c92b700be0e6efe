//! Basis computations and verifiers for lattices.

pub(crate) mod dense;
pub mod fiber;
pub mod graver;
pub mod groebner;
pub mod structure;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::Result;
use crate::indexvec::{IndexedVector, TermOrder};
use crate::symmetry::canonical_form;

pub use fiber::{fiber, generating_set_check, verify_groebner, verify_markov, FiberGraph, FiberOracle, Verification};
pub use graver::{
    flat_lattice, graver_basis, graver_oracle, hilbert_basis, hilbert_graver_crosscheck, lawrence_lift,
    lawrence_pair, lawrence_project, lawrence_shape,
};
pub use groebner::{groebner_basis, normal_form, DirectedVector, MonomialPair};
pub use structure::{gl_element, sl_element, thm_graver_envelope_check};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisKind {
    Generating,
    Markov,
    Groebner,
    UniversalGroebnerCandidate,
    Graver,
    Hilbert,
}

/// What was done to obtain a basis, and under which limits.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub pairs_processed: u64,
    pub element_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<u64>,
    pub budget_exhausted: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisReport {
    pub kind: BasisKind,
    pub elements: Vec<IndexedVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<TermOrder>,
    /// Orbit representatives, filled in by [`BasisReport::with_representatives`].
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representatives: Option<Vec<IndexedVector>>,
    pub certificate: Certificate,
}

impl BasisReport {
    /// Sorts and deduplicates `elements`.
    pub fn new(kind: BasisKind, mut elements: Vec<IndexedVector>, order: Option<TermOrder>, mut certificate: Certificate) -> Self {
        elements.sort();
        elements.dedup();
        certificate.element_count = elements.len();
        BasisReport { kind, elements, order, representatives: None, certificate }
    }

    /// Adds one representative per `Sym(n)`-orbit, or per orbit under
    /// `Sym(n) × {±1}` when the element set is closed under negation.
    pub fn with_representatives(mut self, budget: &Budget) -> Result<Self> {
        self.representatives = Some(orbit_representatives(&self.elements, budget)?);
        Ok(self)
    }

    pub fn max_support(&self) -> usize {
        self.elements.iter().map(IndexedVector::support_size).max().unwrap_or(0)
    }
}

pub(crate) fn orbit_representatives(elements: &[IndexedVector], budget: &Budget) -> Result<Vec<IndexedVector>> {
    let signed = elements.iter().all(|u| elements.binary_search(&u.neg()).is_ok());
    let mut reps = Vec::new();
    for u in elements {
        let n = u.shape().n();
        let mut rep = canonical_form(u, n, budget.orbit)?;
        if signed {
            rep = rep.max(canonical_form(&u.neg(), n, budget.orbit)?);
        }
        reps.push(rep);
    }
    reps.sort();
    reps.dedup();
    Ok(reps)
}
