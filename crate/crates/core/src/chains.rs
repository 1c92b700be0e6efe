//! `Sym`-invariant chains of lattices `L_1 ⊆ L_2 ⊆ …` and stabilization
//! scans over their truncations.
//!
//! A scan computes a basis at each level, reduces every element to a small
//! canonical orbit representative, and reports the first level whose
//! representative set stays unchanged over a window of consecutive levels.
//! That is an observation over finitely many levels, never a proof.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bases::dense::{self, Dense};
use crate::bases::{graver_basis, groebner_basis, BasisReport, FiberOracle};
use crate::budget::{Budget, Meter};
use crate::error::{Error, Result};
use crate::indexvec::{IndexShape, IndexedVector, TermOrder};
use crate::intlinalg::{intersect_truncation, LatticeHandle};
use crate::symmetry::{act, canonical_form, orbit, reduce_width};

/// Produces the level-`n` lattice of a chain defined level by level.
pub type LevelFn = Arc<dyn Fn(u32, &Budget) -> Result<LatticeHandle> + Send + Sync>;

/// Extra probe levels tried before a saturated truncation is declared unstable.
const PROBE_LIMIT: u32 = 8;

#[derive(Clone)]
pub enum ChainMode {
    /// `L_n = Z·Sym(n)(seed)`.
    Span,
    /// `L_n ≈ L ∩ Z^(I_n)`, estimated by intersecting spans at growing levels.
    SaturatedProbe,
    /// Each level is produced directly.
    PerLevel(LevelFn),
}

impl fmt::Debug for ChainMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainMode::Span => write!(f, "Span"),
            ChainMode::SaturatedProbe => write!(f, "SaturatedProbe"),
            ChainMode::PerLevel(_) => write!(f, "PerLevel(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ChainSpec {
    d: u32,
    c: u32,
    seed: Vec<IndexedVector>,
    mode: ChainMode,
    start: u32,
}

impl ChainSpec {
    /// A chain generated by the orbits of `seed`. The seed vectors must
    /// share one shape; the chain starts at that shape's level.
    pub fn new(seed: Vec<IndexedVector>, mode: ChainMode) -> Result<Self> {
        let Some(first) = seed.first() else {
            return Err(Error::InvalidInput("a chain needs a nonempty seed".into()));
        };
        let shape = first.shape();
        if let Some(v) = seed.iter().find(|v| v.shape() != shape) {
            return Err(Error::ShapeMismatch(v.shape(), shape));
        }
        if matches!(mode, ChainMode::PerLevel(_)) {
            return Err(Error::InvalidInput("use ChainSpec::per_level for level-wise chains".into()));
        }
        Ok(ChainSpec { d: shape.d(), c: shape.c(), seed, mode, start: shape.n() })
    }

    /// A chain whose level `n ≥ start` is `level(n)`.
    pub fn per_level(d: u32, c: u32, start: u32, level: LevelFn) -> Result<Self> {
        IndexShape::new(d, c, start.max(1))?;
        Ok(ChainSpec { d, c, seed: Vec::new(), mode: ChainMode::PerLevel(level), start: start.max(1) })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn seed(&self) -> &[IndexedVector] {
        &self.seed
    }

    pub fn mode(&self) -> &ChainMode {
        &self.mode
    }

    /// The first level the chain is defined at.
    pub fn start(&self) -> u32 {
        self.start
    }

    fn shape(&self, n: u32) -> Result<IndexShape> {
        IndexShape::new(self.d, self.c, n)
    }

    /// `Z·{σ(u) : σ ∈ Sym, u ∈ seed, σ(u) ∈ Z^(I_n)}`.
    fn span(&self, n: u32, budget: &Budget) -> Result<LatticeHandle> {
        let shape = self.shape(n)?;
        let mut gens = Vec::new();
        for u in &self.seed {
            if u.touched().len() as u32 > n {
                continue;
            }
            let small = canonical_form(u, u.shape().n(), budget.orbit)?.compact();
            gens.extend(orbit(&small, n, budget.orbit)?);
        }
        LatticeHandle::new(shape, gens)
    }
}

/// The level-`n` lattice together with the probe level used, if any.
#[derive(Debug, Clone)]
pub struct Truncation {
    pub lattice: LatticeHandle,
    /// For saturated probes: the span level at which two consecutive
    /// intersections first agreed.
    pub probe_degree: Option<u32>,
}

/// The level-`n` lattice of the chain.
pub fn truncation(spec: &ChainSpec, n: u32, budget: &Budget) -> Result<LatticeHandle> {
    Ok(truncation_with_probe(spec, n, budget)?.lattice)
}

pub fn truncation_with_probe(spec: &ChainSpec, n: u32, budget: &Budget) -> Result<Truncation> {
    match &spec.mode {
        ChainMode::Span => Ok(Truncation { lattice: spec.span(n, budget)?, probe_degree: None }),
        ChainMode::PerLevel(level) => {
            if n < spec.start {
                return Err(Error::Precondition(format!("the chain starts at level {}", spec.start)));
            }
            Ok(Truncation { lattice: level(n, budget)?, probe_degree: None })
        }
        ChainMode::SaturatedProbe => {
            let first = n.max(spec.start);
            let mut previous = intersect_truncation(&spec.span(first, budget)?, n)?;
            for probe in first + 1..=first + PROBE_LIMIT {
                let next = intersect_truncation(&spec.span(probe, budget)?, n)?;
                if next == previous {
                    return Ok(Truncation { lattice: next, probe_degree: Some(probe) });
                }
                previous = next;
            }
            Err(Error::BudgetExceeded { what: "saturation probe levels", limit: PROBE_LIMIT as u64 })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanKind {
    Generating,
    Markov,
    Graver,
    GroebnerLex,
    GroebnerDlex,
    GroebnerRevlex,
}

impl ScanKind {
    pub const ALL: [ScanKind; 6] = [
        ScanKind::Generating,
        ScanKind::Markov,
        ScanKind::Graver,
        ScanKind::GroebnerLex,
        ScanKind::GroebnerDlex,
        ScanKind::GroebnerRevlex,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            ScanKind::Generating => "generating",
            ScanKind::Markov => "markov",
            ScanKind::Graver => "graver",
            ScanKind::GroebnerLex => "groebner-lex",
            ScanKind::GroebnerDlex => "groebner-dlex",
            ScanKind::GroebnerRevlex => "groebner-revlex",
        }
    }

    /// Whether stabilization of this kind is known to happen for every
    /// `Sym`-invariant chain. Scans of the other kinds are experiments.
    pub fn theorem_backed(&self) -> bool {
        !matches!(self, ScanKind::GroebnerDlex | ScanKind::GroebnerRevlex)
    }

    fn order(&self) -> Option<TermOrder> {
        match self {
            ScanKind::GroebnerLex => Some(TermOrder::Lex),
            ScanKind::GroebnerDlex => Some(TermOrder::Dlex),
            ScanKind::GroebnerRevlex => Some(TermOrder::Revlex),
            _ => None,
        }
    }
}

impl fmt::Display for ScanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl std::str::FromStr for ScanKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScanKind::ALL
            .into_iter()
            .find(|k| k.tag() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown scan kind {s:?}")))
    }
}

/// Moves `u` to small support with [`reduce_width`] when the level allows
/// it, then takes its canonical form in the smallest shape holding it.
fn small_representative(u: &IndexedVector, budget: &Budget) -> Result<IndexedVector> {
    let shape = u.shape();
    let support: Vec<_> = u.support().cloned().collect();
    let moved = if (shape.n() as u64) > shape.d() as u64 * support.len() as u64 {
        act(&reduce_width(&support, shape)?, u)?.reshape(shape.n())?
    } else {
        u.clone()
    };
    Ok(canonical_form(&moved, shape.n(), budget.orbit)?.compact())
}

fn representative(u: &IndexedVector, up_to_sign: bool, budget: &Budget) -> Result<IndexedVector> {
    let r = small_representative(u, budget)?;
    if up_to_sign {
        Ok(r.max(small_representative(&u.neg(), budget)?))
    } else {
        Ok(r)
    }
}

/// The basis at level `n` together with its orbit representatives.
struct LevelBasis {
    elements: Vec<IndexedVector>,
    representatives: Vec<IndexedVector>,
}

fn sorted_representatives(elements: &[IndexedVector], up_to_sign: bool, budget: &Budget) -> Result<Vec<IndexedVector>> {
    let reps: BTreeSet<IndexedVector> =
        elements.iter().map(|u| representative(u, up_to_sign, budget)).collect::<Result<_>>()?;
    Ok(reps.into_iter().collect())
}

/// Candidates in increasing norm, then degree, then representative order.
fn candidate_orbits(lattice: &LatticeHandle, budget: &Budget) -> Result<Vec<IndexedVector>> {
    let graver = graver_basis(lattice, budget)?;
    let mut reps = sorted_representatives(&graver.elements, true, budget)?;
    reps.sort_by_cached_key(|r| (r.norm(), r.sign_split().plus.norm(), r.clone()));
    Ok(reps)
}

fn expand(rep: &IndexedVector, n: u32, budget: &Budget) -> Result<Vec<IndexedVector>> {
    orbit(rep, n, budget.orbit)
}

/// Greedy equivariant generating set: Graver orbits in increasing norm,
/// keeping those not already in the span of the kept ones.
fn greedy_generating(lattice: &LatticeHandle, budget: &Budget) -> Result<LevelBasis> {
    let n = lattice.shape().n();
    let mut kept = Vec::new();
    let mut elements = Vec::new();
    let mut span = LatticeHandle::zero(lattice.shape());
    for rep in candidate_orbits(lattice, budget)? {
        if span == *lattice {
            break;
        }
        if span.member(&rep.reshape(n)?)? {
            continue;
        }
        let images = expand(&rep, n, budget)?;
        let mut gens = span.basis_vectors();
        gens.extend(images.iter().cloned());
        span = LatticeHandle::new(lattice.shape(), gens)?;
        elements.extend(images);
        kept.push(rep);
    }
    kept.sort();
    Ok(LevelBasis { elements, representatives: kept })
}

/// Are `a` and `b` joined by `moves` inside the nonnegative orthant?
fn joined(a: &Dense, b: &Dense, moves: &[Dense], meter: &mut Meter) -> Result<bool> {
    let mut seen: HashSet<Dense> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(a.clone());
    queue.push_back(a.clone());
    while let Some(v) = queue.pop_front() {
        if &v == b {
            return Ok(true);
        }
        meter.tick()?;
        for m in moves {
            let w = dense::add(&v, m)?;
            if dense::is_nonnegative(&w) && !seen.contains(&w) {
                seen.insert(w.clone());
                queue.push_back(w);
            }
        }
    }
    Ok(false)
}

/// Greedy equivariant Markov basis. The Graver basis is a Markov basis, so
/// a set of moves is Markov as soon as it connects `g⁺` with `g⁻` for every
/// Graver element `g`. Graver orbits are visited by increasing degree and
/// kept only when the kept moves do not already connect them.
fn greedy_markov(lattice: &LatticeHandle, budget: &Budget) -> Result<LevelBasis> {
    FiberOracle::new(lattice, budget)?;
    let n = lattice.shape().n();
    let mut candidates = candidate_orbits(lattice, budget)?;
    candidates.sort_by_cached_key(|r| (r.sign_split().plus.norm(), r.norm(), r.clone()));
    let mut kept = Vec::new();
    let mut elements = Vec::new();
    let mut moves: Vec<Dense> = Vec::new();
    let mut meter = Meter::new("markov connectivity search", budget.fiber);
    for rep in candidates {
        let g = dense::to_dense(&rep.reshape(n)?)?;
        if joined(&dense::plus_part(&g), &dense::minus_part(&g), &moves, &mut meter)? {
            continue;
        }
        for image in expand(&rep, n, budget)? {
            let d = dense::to_dense(&image)?;
            moves.push(dense::neg(&d));
            moves.push(d);
            elements.push(image);
        }
        kept.push(rep);
    }
    kept.sort();
    Ok(LevelBasis { elements, representatives: kept })
}

fn level_basis(lattice: &LatticeHandle, kind: ScanKind, budget: &Budget) -> Result<LevelBasis> {
    match kind {
        ScanKind::Generating => greedy_generating(lattice, budget),
        ScanKind::Markov => greedy_markov(lattice, budget),
        ScanKind::Graver | ScanKind::GroebnerLex | ScanKind::GroebnerDlex | ScanKind::GroebnerRevlex => {
            let report = match kind.order() {
                Some(order) => groebner_basis(lattice, order, budget)?,
                None => graver_basis(lattice, budget)?,
            };
            let representatives = sorted_representatives(&report.elements, false, budget)?;
            Ok(LevelBasis { elements: report.elements, representatives })
        }
    }
}

/// The basis of the given kind at one level, with its orbit representatives.
pub fn level_representatives(lattice: &LatticeHandle, kind: ScanKind, budget: &Budget) -> Result<(Vec<IndexedVector>, Vec<IndexedVector>)> {
    let b = level_basis(lattice, kind, budget)?;
    Ok((b.elements, b.representatives))
}

/// What a scan saw at one level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelRecord {
    pub n: u32,
    pub rank: usize,
    pub basis_size: usize,
    pub support_bound: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe_degree: Option<u32>,
    pub representatives: Vec<IndexedVector>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizationWitness {
    pub kind: ScanKind,
    /// First level of the stable window.
    pub level: u32,
    /// Canonical orbit representatives (up to sign for Markov and generating
    /// kinds), each in the smallest shape containing it.
    pub representatives: Vec<IndexedVector>,
    pub confirmed_through: u32,
    pub support_bound: usize,
    pub theorem_backed: bool,
    pub note: String,
}

/// Why a scan stopped before `n_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanFailure {
    pub level: u32,
    pub reason: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanOutcome {
    pub kind: ScanKind,
    pub window: u32,
    pub witness: Option<StabilizationWitness>,
    pub levels: Vec<LevelRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<ScanFailure>,
}

fn failure_reason(e: &Error) -> Option<&'static str> {
    match e {
        Error::BudgetExceeded { .. } => Some("budget-exceeded"),
        Error::Overflow => Some("overflow"),
        Error::Refused(r) => Some(r.reason()),
        _ => None,
    }
}

/// Scans levels `start..=n_max` and reports the first level whose
/// representative set is unchanged over `window` consecutive levels.
/// Budget exhaustion and refusals end the scan early with the levels seen
/// so far.
pub fn stabilization_scan(spec: &ChainSpec, kind: ScanKind, n_max: u32, window: u32, budget: &Budget) -> Result<ScanOutcome> {
    if window == 0 {
        return Err(Error::InvalidInput("window must be positive".into()));
    }
    let mut outcome = ScanOutcome { kind, window, witness: None, levels: Vec::new(), failure: None };
    for n in spec.start..=n_max {
        let level = truncation_with_probe(spec, n, budget).and_then(|t| {
            let basis = level_basis(&t.lattice, kind, budget)?;
            Ok(LevelRecord {
                n,
                rank: t.lattice.rank(),
                basis_size: basis.elements.len(),
                support_bound: basis.elements.iter().map(IndexedVector::support_size).max().unwrap_or(0),
                probe_degree: t.probe_degree,
                representatives: basis.representatives,
            })
        });
        let record = match level {
            Ok(r) => r,
            Err(e) => match failure_reason(&e) {
                Some(reason) => {
                    outcome.failure = Some(ScanFailure { level: n, reason: reason.into(), message: e.to_string() });
                    return Ok(outcome);
                }
                None => return Err(e),
            },
        };
        outcome.levels.push(record);
        let w = window as usize;
        if outcome.levels.len() >= w {
            let tail = &outcome.levels[outcome.levels.len() - w..];
            if tail.iter().all(|r| r.representatives == tail[0].representatives) {
                let first = &tail[0];
                let note = if kind.theorem_backed() {
                    format!("representatives unchanged over {window} consecutive levels; a finite-window observation, not a proof")
                } else {
                    format!(
                        "representatives unchanged over {window} consecutive levels; stabilization for this order is not known in general, so this is an experimental observation"
                    )
                };
                outcome.witness = Some(StabilizationWitness {
                    kind,
                    level: first.n,
                    representatives: first.representatives.clone(),
                    confirmed_through: n,
                    support_bound: first.representatives.iter().map(IndexedVector::support_size).max().unwrap_or(0),
                    theorem_backed: kind.theorem_backed(),
                    note,
                });
                return Ok(outcome);
            }
        }
    }
    Ok(outcome)
}

/// Small-support representatives `B'` with `basis ⊆ Sym(n)(B')`, one per
/// orbit.
pub fn equivariant_basis_extract(lattice: &LatticeHandle, basis: &BasisReport, budget: &Budget) -> Result<Vec<IndexedVector>> {
    let shape = lattice.shape();
    let mut reps = BTreeSet::new();
    for u in &basis.elements {
        if u.shape() != shape {
            return Err(Error::ShapeMismatch(u.shape(), shape));
        }
        let support: Vec<_> = u.support().cloned().collect();
        let moved = act(&reduce_width(&support, shape)?, u)?.reshape(shape.n())?;
        reps.insert(canonical_form(&moved, shape.n(), budget.orbit)?.compact());
    }
    Ok(reps.into_iter().collect())
}

/// The largest support size among the basis elements.
pub fn support_bound_report(basis: &BasisReport) -> usize {
    basis.max_support()
}

// ---- JSON form ----------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SeedMode {
    #[default]
    Span,
    SaturatedProbe,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SeedRepr {
    Vector(IndexedVector),
    Sequence(Vec<i64>),
}

/// `{"seed": [...], "mode": "span" | "saturated-probe"}`. Seed entries are
/// canonical vector objects or plain integer sequences (`d = c = 1`).
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpecRepr {
    seed: Vec<SeedRepr>,
    #[serde(default)]
    mode: SeedMode,
}

impl TryFrom<ChainSpecRepr> for ChainSpec {
    type Error = Error;

    fn try_from(repr: ChainSpecRepr) -> Result<Self> {
        let seed = repr
            .seed
            .into_iter()
            .map(|s| match s {
                SeedRepr::Vector(v) => Ok(v),
                SeedRepr::Sequence(v) => IndexedVector::from_seq(&v),
            })
            .collect::<Result<Vec<_>>>()?;
        let mode = match repr.mode {
            SeedMode::Span => ChainMode::Span,
            SeedMode::SaturatedProbe => ChainMode::SaturatedProbe,
        };
        ChainSpec::new(seed, mode)
    }
}

impl ChainSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let repr: ChainSpecRepr = serde_json::from_str(text)?;
        repr.try_into()
    }
}
