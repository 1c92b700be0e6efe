//! Hierarchical models: simplicial complexes with level vectors, their
//! marginal maps and kernel lattices, and chains obtained by letting the
//! levels of an independent set of coordinates grow.
//!
//! Coordinates and levels are 1-based throughout. Cells of `∏[r_i]` are
//! listed lexicographically with the first coordinate most significant.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::chains::ChainSpec;
use crate::error::{Error, Refusal, Result};
use crate::indexvec::{Index, IndexShape, IndexedVector};
use crate::intlinalg::{kernel_basis, IntMatrix, LatticeHandle};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplicialComplex {
    m: usize,
    facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Facets are sorted and must be nonempty, inside `[m]`, and pairwise
    /// incomparable under inclusion.
    pub fn new(m: usize, facets: Vec<Vec<usize>>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("the ground set must be nonempty".into()));
        }
        let mut clean = Vec::with_capacity(facets.len());
        for mut f in facets {
            f.sort_unstable();
            f.dedup();
            if f.is_empty() {
                return Err(Error::InvalidInput("facets must be nonempty".into()));
            }
            if let Some(&x) = f.iter().find(|&&x| x == 0 || x > m) {
                return Err(Error::InvalidInput(format!("facet element {x} outside [1, {m}]")));
            }
            clean.push(f);
        }
        for (a, fa) in clean.iter().enumerate() {
            for (b, fb) in clean.iter().enumerate() {
                if a != b && fa.iter().all(|x| fb.contains(x)) {
                    return Err(Error::InvalidInput(format!("facet {fa:?} is contained in {fb:?}")));
                }
            }
        }
        Ok(SimplicialComplex { m, facets: clean })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HierModel {
    complex: SimplicialComplex,
    r: Vec<u32>,
}

impl HierModel {
    pub fn new(complex: SimplicialComplex, r: Vec<u32>) -> Result<Self> {
        if r.len() != complex.m {
            return Err(Error::InvalidInput(format!("level vector has length {}, expected {}", r.len(), complex.m)));
        }
        if r.contains(&0) {
            return Err(Error::InvalidInput("levels must be positive".into()));
        }
        Ok(HierModel { complex, r })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn levels(&self) -> &[u32] {
        &self.r
    }

    pub fn cell_count(&self) -> u64 {
        self.r.iter().map(|&x| x as u64).product()
    }

    /// All cells in lexicographic order.
    pub fn cells(&self) -> Vec<Vec<u32>> {
        product(&self.r)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: ModelRepr = serde_json::from_str(text)?;
        HierModel::new(SimplicialComplex::new(repr.m, repr.facets)?, repr.r)
    }
}

fn product(levels: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &r in levels {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<u32>| {
                (1..=r).map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

/// Position of `cell` in the lexicographic list of `∏[levels]`.
fn lex_position(cell: &[u32], levels: &[u32]) -> usize {
    cell.iter().zip(levels).fold(0, |acc, (&x, &r)| acc * r as usize + (x - 1) as usize)
}

fn check_cells(model: &HierModel, budget: &Budget) -> Result<()> {
    let cells = model.cell_count();
    if cells > budget.cells {
        return Err(Error::BudgetExceeded { what: "model cells", limit: budget.cells });
    }
    Ok(())
}

/// The 0/1 matrix of all facet marginals: one row per facet and marginal
/// cell, one column per cell.
pub fn marginal_matrix(model: &HierModel, budget: &Budget) -> Result<IntMatrix> {
    check_cells(model, budget)?;
    let cells = model.cells();
    let mut rows = Vec::new();
    for facet in &model.complex.facets {
        let levels: Vec<u32> = facet.iter().map(|&k| model.r[k - 1]).collect();
        let marginal_cells: usize = levels.iter().map(|&x| x as usize).product();
        let mut block = vec![vec![BigInt::from(0); cells.len()]; marginal_cells];
        for (col, cell) in cells.iter().enumerate() {
            let projected: Vec<u32> = facet.iter().map(|&k| cell[k - 1]).collect();
            block[lex_position(&projected, &levels)][col] = BigInt::from(1);
        }
        rows.extend(block);
    }
    IntMatrix::from_rows(rows, cells.len())
}

/// Builds the kernel lattice of `model` with each cell placed at `place(cell)`.
fn kernel_in_shape(model: &HierModel, shape: IndexShape, place: impl Fn(&[u32]) -> Index, budget: &Budget) -> Result<LatticeHandle> {
    let matrix = marginal_matrix(model, budget)?;
    let cells = model.cells();
    let positions: Vec<Index> = cells.iter().map(|c| place(c)).collect();
    let gens = kernel_basis(&matrix)
        .into_iter()
        .map(|v| {
            IndexedVector::from_entries(shape, positions.iter().cloned().zip(v).filter(|(_, x)| *x != BigInt::from(0)))
        })
        .collect::<Result<Vec<_>>>()?;
    LatticeHandle::new(shape, gens)
}

/// `ker μ` in the flat labeling: `d = c = 1`, cells in lexicographic order.
pub fn kernel_lattice(model: &HierModel, budget: &Budget) -> Result<LatticeHandle> {
    check_cells(model, budget)?;
    let levels = model.r.clone();
    let shape = IndexShape::flat(model.cell_count() as u32)?;
    kernel_in_shape(model, shape, |cell| Index::new(vec![lex_position(cell, &levels) as u32 + 1], 1), budget)
}

/// A model whose coordinates in `T` all get level `n` while the others keep
/// fixed levels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndependentSetScenario {
    complex: SimplicialComplex,
    t: Vec<usize>,
    fixed: BTreeMap<usize, u32>,
}

impl IndependentSetScenario {
    /// Refuses when `T` meets some facet more than once.
    pub fn new(complex: SimplicialComplex, t: Vec<usize>, fixed: BTreeMap<usize, u32>) -> Result<Self> {
        let (t, fixed) = validate_split(&complex, t, fixed)?;
        if let Some(facet) = complex.facets.iter().find(|f| f.iter().filter(|x| t.contains(x)).count() > 1) {
            return Err(Error::Refused(Refusal::NotIndependent { facet: facet.clone() }));
        }
        Ok(IndependentSetScenario { complex, t, fixed })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn varying(&self) -> &[usize] {
        &self.t
    }

    pub fn fixed(&self) -> &BTreeMap<usize, u32> {
        &self.fixed
    }

    pub fn d(&self) -> u32 {
        self.t.len() as u32
    }

    pub fn c(&self) -> u32 {
        self.fixed.values().product()
    }

    /// The model at level `n`.
    pub fn model(&self, n: u32) -> Result<HierModel> {
        HierModel::new(self.complex.clone(), levels_at(self.complex.m, &self.t, &self.fixed, n))
    }

    /// `{"m", "facets", "T", "fixed"}`; a level vector `"r"` may supply the
    /// fixed levels instead.
    pub fn from_json(text: &str) -> Result<Self> {
        let repr: ScenarioRepr = serde_json::from_str(text)?;
        let complex = SimplicialComplex::new(repr.m, repr.facets)?;
        let mut fixed = BTreeMap::new();
        for (k, v) in repr.fixed {
            let key: usize = k.parse().map_err(|_| Error::InvalidInput(format!("fixed key {k:?} is not a coordinate")))?;
            fixed.insert(key, v);
        }
        if let Some(r) = repr.r {
            for (k, &level) in r.iter().enumerate() {
                if !repr.t.contains(&(k + 1)) {
                    fixed.entry(k + 1).or_insert(level);
                }
            }
        }
        IndependentSetScenario::new(complex, repr.t, fixed)
    }
}

fn validate_split(complex: &SimplicialComplex, mut t: Vec<usize>, fixed: BTreeMap<usize, u32>) -> Result<(Vec<usize>, BTreeMap<usize, u32>)> {
    t.sort_unstable();
    t.dedup();
    if t.is_empty() {
        return Err(Error::InvalidInput("the varying set T must be nonempty".into()));
    }
    for k in 1..=complex.m {
        match (t.contains(&k), fixed.get(&k)) {
            (true, Some(_)) => return Err(Error::InvalidInput(format!("coordinate {k} is both varying and fixed"))),
            (false, None) => return Err(Error::InvalidInput(format!("coordinate {k} needs a fixed level"))),
            (false, Some(0)) => return Err(Error::InvalidInput("levels must be positive".into())),
            _ => {}
        }
    }
    if let Some(&k) = t.iter().chain(fixed.keys()).find(|&&k| k == 0 || k > complex.m) {
        return Err(Error::InvalidInput(format!("coordinate {k} outside [1, {}]", complex.m)));
    }
    Ok((t, fixed))
}

fn levels_at(m: usize, t: &[usize], fixed: &BTreeMap<usize, u32>, n: u32) -> Vec<u32> {
    (1..=m).map(|k| if t.contains(&k) { n } else { fixed[&k] }).collect()
}

/// Places a cell at `(i_t for t ∈ T ascending; j)`, where `j` encodes the
/// fixed coordinates in mixed radix, smallest coordinate most significant.
fn place(cell: &[u32], t: &[usize], fixed: &BTreeMap<usize, u32>) -> Index {
    let coords = t.iter().map(|&k| cell[k - 1]).collect();
    let j = fixed.iter().fold(0u32, |acc, (&k, &r)| acc * r + (cell[k - 1] - 1));
    Index::new(coords, j + 1)
}

/// The shape `[n]^d × [c]` of a scenario and the position of every cell,
/// listed in the lexicographic cell order.
pub fn scenario_shape(s: &IndependentSetScenario, n: u32) -> Result<(IndexShape, Vec<Index>)> {
    let shape = IndexShape::new(s.d(), s.c(), n)?;
    let cells = s.model(n)?.cells();
    Ok((shape, cells.iter().map(|c| place(c, &s.t, &s.fixed)).collect()))
}

/// `ker μ` at level `n` in the scenario's shape.
pub fn scenario_kernel(s: &IndependentSetScenario, n: u32, budget: &Budget) -> Result<LatticeHandle> {
    let shape = IndexShape::new(s.d(), s.c(), n)?;
    kernel_in_shape(&s.model(n)?, shape, |c| place(c, &s.t, &s.fixed), budget)
}

/// The chain of scenario kernels, produced level by level.
pub fn scenario_chain(s: &IndependentSetScenario) -> Result<ChainSpec> {
    let scenario = s.clone();
    ChainSpec::per_level(s.d(), s.c(), 1, Arc::new(move |n, budget| scenario_kernel(&scenario, n, budget)))
}

fn no3way_complex() -> SimplicialComplex {
    SimplicialComplex::new(3, vec![vec![1, 2], vec![1, 3], vec![2, 3]]).expect("valid complex")
}

/// The kernel of the no-3-way interaction model with `r = (n, n, c)`, in
/// the shape `[n]^2 × [c]`. The first two coordinates meet in a facet, so
/// this chain is not covered by the independent-set construction.
pub fn no3way_lattice(n: u32, c: u32, budget: &Budget) -> Result<LatticeHandle> {
    let model = HierModel::new(no3way_complex(), vec![n, n, c])?;
    let shape = IndexShape::new(2, c, n)?;
    kernel_in_shape(&model, shape, |cell| Index::new(vec![cell[0], cell[1]], cell[2]), budget)
}

/// The chain `n ↦ ker μ` of no-3-way kernels with the third level fixed at `c`.
pub fn no3way_chain(c: u32) -> Result<ChainSpec> {
    if c < 2 {
        return Err(Error::Precondition("the no-3-way chain needs c >= 2".into()));
    }
    ChainSpec::per_level(2, c, 2, Arc::new(move |n, budget| no3way_lattice(n, c, budget)))
}

/// The move `Σ_i (e_{i,i,1} − e_{i,i,2}) + Σ_{i<n} (e_{i,i+1,2} − e_{i,i+1,1})
/// + (e_{n,1,2} − e_{n,1,1})`, which every Markov basis of the level-`n`
/// no-3-way kernel must contain. Membership is checked.
pub fn no3way_witness(n: u32, c: u32, budget: &Budget) -> Result<IndexedVector> {
    if n < 2 || c < 2 {
        return Err(Error::Precondition("the no-3-way witness needs n >= 2 and c >= 2".into()));
    }
    let shape = IndexShape::new(2, c, n)?;
    let e = |a: u32, b: u32, j: u32, x: i64| (Index::new(vec![a, b], j), BigInt::from(x));
    let mut entries = Vec::new();
    for i in 1..=n {
        entries.push(e(i, i, 1, 1));
        entries.push(e(i, i, 2, -1));
    }
    for i in 1..n {
        entries.push(e(i, i + 1, 2, 1));
        entries.push(e(i, i + 1, 1, -1));
    }
    entries.push(e(n, 1, 2, 1));
    entries.push(e(n, 1, 1, -1));
    let u = IndexedVector::from_entries(shape, entries)?;
    if !no3way_lattice(n, c, budget)?.member(&u)? {
        return Err(Error::Precondition("the witness is not in the no-3-way kernel".into()));
    }
    Ok(u)
}

// ---- JSON form ----------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelRepr {
    m: usize,
    facets: Vec<Vec<usize>>,
    r: Vec<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioRepr {
    m: usize,
    facets: Vec<Vec<usize>>,
    #[serde(rename = "T")]
    t: Vec<usize>,
    #[serde(default)]
    fixed: BTreeMap<String, u32>,
    #[serde(default)]
    r: Option<Vec<u32>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(m: usize, facets: Vec<Vec<usize>>, r: Vec<u32>) -> HierModel {
        HierModel::new(SimplicialComplex::new(m, facets).unwrap(), r).unwrap()
    }

    fn seq(v: &[i64]) -> IndexedVector {
        IndexedVector::from_seq(v).unwrap()
    }

    #[test]
    fn complex_validation() {
        assert!(SimplicialComplex::new(2, vec![vec![1], vec![1, 2]]).is_err());
        assert!(SimplicialComplex::new(2, vec![vec![3]]).is_err());
        assert!(SimplicialComplex::new(2, vec![vec![]]).is_err());
    }

    #[test]
    fn marginal_examples() {
        let b = Budget::default();
        let indep = model(2, vec![vec![1], vec![2]], vec![2, 2]);
        let m = marginal_matrix(&indep, &b).unwrap();
        assert_eq!((m.rows(), m.cols()), (4, 4));
        let one = model(1, vec![vec![1]], vec![3]);
        assert_eq!(marginal_matrix(&one, &b).unwrap(), IntMatrix::identity(3));
        let no3 = model(3, vec![vec![1, 2], vec![1, 3], vec![2, 3]], vec![2, 2, 2]);
        let m = marginal_matrix(&no3, &b).unwrap();
        assert_eq!((m.rows(), m.cols(), m.rank()), (12, 8, 7));
    }

    #[test]
    fn kernel_examples() {
        let b = Budget::default();
        let indep = kernel_lattice(&model(2, vec![vec![1], vec![2]], vec![2, 2]), &b).unwrap();
        assert_eq!(indep.rank(), 1);
        assert!(indep.member(&seq(&[1, -1, -1, 1])).unwrap());
        assert!(kernel_lattice(&model(2, vec![vec![1, 2]], vec![2, 3]), &b).unwrap().is_zero());
        let no3 = no3way_lattice(2, 2, &b).unwrap();
        assert_eq!(no3.rank(), 1);
        let w = no3way_witness(2, 2, &b).unwrap();
        assert!(no3.member(&w).unwrap());
    }

    #[test]
    fn witness_sizes() {
        let b = Budget::default();
        for n in 2..=4 {
            let w = no3way_witness(n, 2, &b).unwrap();
            assert_eq!(w.support_size(), 4 * n as usize);
            assert_eq!(w.norm(), BigInt::from(4 * n));
        }
    }

    #[test]
    fn scenarios() {
        let b = Budget::default();
        let complex = SimplicialComplex::new(2, vec![vec![1], vec![2]]).unwrap();
        let s = IndependentSetScenario::new(complex, vec![1, 2], BTreeMap::new()).unwrap();
        assert_eq!((s.d(), s.c()), (2, 1));
        let l = scenario_kernel(&s, 2, &b).unwrap();
        assert_eq!(l.rank(), 1);

        let err = IndependentSetScenario::new(no3way_complex(), vec![1, 2], BTreeMap::from([(3, 2)]));
        assert!(matches!(err, Err(Error::Refused(Refusal::NotIndependent { .. }))));
        assert!(IndependentSetScenario::new(no3way_complex(), vec![], BTreeMap::new()).is_err());

        let s = IndependentSetScenario::from_json(r#"{"m":3,"facets":[[1,2],[1,3],[2,3]],"T":[1],"fixed":{"2":3,"3":2}}"#)
            .unwrap();
        assert_eq!((s.d(), s.c()), (1, 6));
        let (shape, positions) = scenario_shape(&s, 2).unwrap();
        assert_eq!(shape, IndexShape::new(1, 6, 2).unwrap());
        assert_eq!(positions[1], Index::new(vec![1], 2));
        assert_eq!(positions[2], Index::new(vec![1], 3));
    }
}
