//! Finite permutations acting on the unbounded coordinates of indices.
//!
//! `Sym(∞)` is never materialized: a [`Permutation`] has a finite degree and
//! acts as the identity beyond it. The bounded coordinate `j` is never moved.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::budget::Meter;
use crate::error::{Error, Result};
use crate::indexvec::{Index, IndexShape, IndexedVector};
use crate::intlinalg::LatticeHandle;

/// A bijection of `[n]`, stored as its one-line image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation {
    images: Vec<u32>,
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<u32>) -> Result<Self> {
        Permutation::from_images(images)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl Permutation {
    pub fn identity(n: u32) -> Self {
        Permutation { images: (1..=n).collect() }
    }

    /// `images[i-1] = σ(i)`; must be a bijection of `[images.len()]`.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let k = x as usize;
            if k == 0 || k > n || seen[k - 1] {
                return Err(Error::InvalidInput(format!("{images:?} is not a permutation of [{n}]")));
            }
            seen[k - 1] = true;
        }
        Ok(Permutation { images })
    }

    /// The transposition `(a b)` as an element of `Sym(n)`.
    pub fn transposition(n: u32, a: u32, b: u32) -> Result<Self> {
        if a == 0 || b == 0 || a > n || b > n {
            return Err(Error::Precondition(format!("transposition ({a} {b}) outside [{n}]")));
        }
        let mut p = Permutation::identity(n);
        p.images.swap(a as usize - 1, b as usize - 1);
        Ok(p)
    }

    pub fn degree(&self) -> u32 {
        self.images.len() as u32
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// `σ(i)`, identity beyond the degree.
    pub fn apply(&self, i: u32) -> u32 {
        match i as usize {
            k if k >= 1 && k <= self.images.len() => self.images[k - 1],
            _ => i,
        }
    }

    /// The same permutation viewed in `Sym(n)`, `n ≥ degree`.
    pub fn extend(&self, n: u32) -> Self {
        let mut images = self.images.clone();
        images.extend(self.degree() + 1..=n.max(self.degree()));
        Permutation { images }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        let n = self.degree().max(other.degree());
        Permutation { images: (1..=n).map(|i| self.apply(other.apply(i))).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (k, &x) in self.images.iter().enumerate() {
            images[x as usize - 1] = k as u32 + 1;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &x)| x as usize == k + 1)
    }

    /// Smallest degree at which the permutation is represented faithfully.
    pub fn trimmed(&self) -> Permutation {
        let mut images = self.images.clone();
        while let Some(&last) = images.last() {
            if last as usize == images.len() {
                images.pop();
            } else {
                break;
            }
        }
        Permutation { images }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

/// `σ(e_{i,j}) = e_{σ(i),j}`, applied diagonally to every unbounded slot.
/// The result lives at degree `max(σ.degree, u.n)`.
pub fn act(sigma: &Permutation, u: &IndexedVector) -> Result<IndexedVector> {
    let n = sigma.degree().max(u.shape().n());
    let shape = u.shape().with_n(n)?;
    u.map_indices(shape, |ix| ix.map_coords(|i| sigma.apply(i)))
}

/// Applies `σ` to a set of indices.
pub fn act_on_indices(sigma: &Permutation, indices: &[Index]) -> Vec<Index> {
    indices.iter().map(|ix| ix.map_coords(|i| sigma.apply(i))).collect()
}

/// Calls `visit` with every injective map `touched → [n]`, as an image list.
fn for_each_placement(
    touched: usize,
    n: u32,
    meter: &mut Meter,
    visit: &mut dyn FnMut(&[u32]),
) -> Result<()> {
    fn rec(
        slot: usize,
        touched: usize,
        n: u32,
        used: &mut Vec<bool>,
        current: &mut Vec<u32>,
        meter: &mut Meter,
        visit: &mut dyn FnMut(&[u32]),
    ) -> Result<()> {
        if slot == touched {
            meter.tick()?;
            visit(current);
            return Ok(());
        }
        for target in 1..=n {
            if used[target as usize] {
                continue;
            }
            used[target as usize] = true;
            current.push(target);
            let r = rec(slot + 1, touched, n, used, current, meter, visit);
            current.pop();
            used[target as usize] = false;
            r?;
        }
        Ok(())
    }
    let mut used = vec![false; n as usize + 1];
    let mut current = Vec::with_capacity(touched);
    rec(0, touched, n, &mut used, &mut current, meter, visit)
}

fn relabel(u: &IndexedVector, shape: IndexShape, touched: &[u32], images: &[u32]) -> IndexedVector {
    u.map_indices(shape, |ix| {
        ix.map_coords(|i| {
            let k = touched.binary_search(&i).expect("coordinate is touched");
            images[k]
        })
    })
    .expect("relabeling is injective and stays in shape")
}

/// The orbit `Sym(n)·u`, sorted. Only the touched coordinate values are
/// placed, so the work is `n!/(n-w)!` for `w` touched values.
pub fn orbit(u: &IndexedVector, n: u32, placement_budget: u64) -> Result<Vec<IndexedVector>> {
    let u = u.reshape(n)?;
    let touched = u.touched();
    let mut meter = Meter::new("orbit placements", placement_budget);
    let mut out = BTreeSet::new();
    for_each_placement(touched.len(), n, &mut meter, &mut |images| {
        out.insert(relabel(&u, u.shape(), &touched, images));
    })?;
    Ok(out.into_iter().collect())
}

/// The smallest element of `Sym(n)·u` in entry-list order.
///
/// Shrinking the touched values order-preservingly onto `[w]` never
/// increases an index in basis order, so the minimum uses exactly the values
/// `1..=w` and only bijections `touched → [w]` need to be tried. The result
/// therefore does not depend on `n` beyond the shape tag.
pub fn canonical_form(u: &IndexedVector, n: u32, placement_budget: u64) -> Result<IndexedVector> {
    let u = u.reshape(n)?;
    let touched = u.touched();
    let mut meter = Meter::new("canonical-form placements", placement_budget);
    let mut best: Option<IndexedVector> = None;
    for_each_placement(touched.len(), touched.len() as u32, &mut meter, &mut |images| {
        let candidate = relabel(&u, u.shape(), &touched, images);
        if best.as_ref().is_none_or(|b| candidate < *b) {
            best = Some(candidate);
        }
    })?;
    Ok(best.unwrap_or(u))
}

/// Finds `σ ∈ Sym(n)` moving the index set `S` (`|S| = m`) into
/// `[dm+1]^d × [c]`, by repeatedly swapping a touched value `k > dm+1` with
/// an untouched `l ≤ dm+1`.
pub fn reduce_width(indices: &[Index], shape: IndexShape) -> Result<Permutation> {
    for ix in indices {
        shape.check(ix)?;
    }
    let distinct: BTreeSet<&Index> = indices.iter().collect();
    let m = distinct.len() as u64;
    let p = shape.d() as u64 * m + 1;
    if (shape.n() as u64) < p {
        return Err(Error::Precondition(format!(
            "reduce_width needs n >= d*m+1 = {p}, got n = {}",
            shape.n()
        )));
    }
    let p = p as u32;
    let mut touched: BTreeSet<u32> = distinct.iter().flat_map(|ix| ix.coords().iter().copied()).collect();
    let mut sigma = Permutation::identity(shape.n());
    while let Some(&k) = touched.iter().find(|&&k| k > p) {
        let l = (1..=p).find(|l| !touched.contains(l)).expect("|T_S| <= dm < p leaves a free slot");
        let swap = Permutation::transposition(shape.n(), k, l)?;
        sigma = swap.compose(&sigma);
        touched.remove(&k);
        touched.insert(l);
    }
    Ok(sigma)
}

/// Given `σ_1..σ_h` (finite permutations of any degree) with `n ≥ hm+1`,
/// returns `σ` and `τ_1..τ_h ∈ Sym(n)` such that `σ` fixes
/// `D = ∪σ_j([m]) ∩ [n]` pointwise and `σ∘σ_j = τ_j` on `[m]`.
pub fn pull_permutation(sigmas: &[Permutation], m: u32, n: u32) -> Result<(Permutation, Vec<Permutation>)> {
    let h = sigmas.len() as u64;
    if (n as u64) < h * m as u64 + 1 {
        return Err(Error::Precondition(format!("pull_permutation needs n >= h*m+1 = {}, got {n}", h * m as u64 + 1)));
    }
    let degree = sigmas.iter().map(Permutation::degree).max().unwrap_or(0).max(n).max(m);
    let mut current: Vec<Permutation> = sigmas.iter().map(|s| s.extend(degree)).collect();
    let mut sigma = Permutation::identity(degree);
    let image_set = |perms: &[Permutation]| -> BTreeSet<u32> {
        perms.iter().flat_map(|s| (1..=m).map(move |i| s.apply(i))).collect()
    };
    loop {
        let touched = image_set(&current);
        let Some(&k) = touched.iter().find(|&&k| k > n) else { break };
        let l = (1..=n).find(|l| !touched.contains(l)).expect("|T| <= hm < n leaves a free slot");
        let swap = Permutation::transposition(degree, k, l)?;
        sigma = swap.compose(&sigma);
        current = current.iter().map(|s| swap.compose(s)).collect();
    }
    let taus = current
        .iter()
        .map(|s| {
            let head: Vec<u32> = (1..=m).map(|i| s.apply(i)).collect();
            let rest = (1..=n).filter(|x| !head.contains(x));
            Permutation::from_images(head.iter().copied().chain(rest).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((sigma, taus))
}

/// A strictly increasing partial map `[p] → N`, the witness of `u ⊑_Inc v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncEmbedding {
    pub pairs: Vec<(u32, u32)>,
}

impl IncEmbedding {
    /// A permutation agreeing with the embedding on its domain, filling the
    /// remaining points in increasing order. Its degree covers `min_degree`.
    pub fn to_permutation(&self, min_degree: u32) -> Permutation {
        let top = self.pairs.iter().map(|&(a, b)| a.max(b)).max().unwrap_or(0).max(min_degree);
        let dom: Vec<u32> = self.pairs.iter().map(|p| p.0).collect();
        let img: Vec<u32> = self.pairs.iter().map(|p| p.1).collect();
        let mut free = (1..=top).filter(|x| !img.contains(x));
        let images = (1..=top)
            .map(|i| match dom.iter().position(|&a| a == i) {
                Some(k) => img[k],
                None => free.next().expect("bijection fills up"),
            })
            .collect();
        Permutation::from_images(images).expect("constructed bijection")
    }
}

fn column(u: &IndexedVector, i: u32) -> Vec<num_bigint::BigInt> {
    (1..=u.shape().c()).map(|j| u.get(&Index::new(vec![i], j))).collect()
}

fn last_nonzero_column(u: &IndexedVector) -> u32 {
    u.support().map(|ix| ix.coords()[0]).max().unwrap_or(0)
}

/// Higman embedding order on column sequences (`d = 1`): is there a strictly
/// increasing `π` with `column_u(i) ≤ column_v(π(i))` componentwise for every
/// column of `u` up to its last nonzero one? `v` is padded with zero columns.
/// Greedy leftmost matching decides this exactly.
pub fn higman_leq(u: &IndexedVector, v: &IndexedVector) -> Result<Option<IncEmbedding>> {
    for w in [u, v] {
        if w.shape().d() != 1 {
            return Err(Error::Precondition("the Higman order is defined for d = 1 only".into()));
        }
        if !w.is_nonnegative() {
            return Err(Error::NegativeVector);
        }
    }
    if u.shape().c() != v.shape().c() {
        return Err(Error::ShapeMismatch(u.shape(), v.shape()));
    }
    let v_len = last_nonzero_column(v);
    let mut pairs = Vec::new();
    let mut next = 1u32;
    for i in 1..=last_nonzero_column(u) {
        let cu = column(u, i);
        let target = if cu.iter().all(|x| x.sign() == num_bigint::Sign::NoSign) {
            Some(next)
        } else {
            (next..=v_len).find(|&k| cu.iter().zip(column(v, k)).all(|(a, b)| *a <= b))
        };
        match target {
            Some(k) => {
                pairs.push((i, k));
                next = k + 1;
            }
            None => return Ok(None),
        }
    }
    Ok(Some(IncEmbedding { pairs }))
}

/// Checks `Sym(n)`-invariance using the generators `(1 2)` and the `n`-cycle.
pub fn is_sym_invariant(lattice: &LatticeHandle) -> Result<bool> {
    let n = lattice.shape().n();
    if n == 1 {
        return Ok(true);
    }
    let swap = Permutation::transposition(n, 1, 2)?;
    let cycle = Permutation::from_images((2..=n).chain([1]).collect())?;
    for b in lattice.basis_vectors() {
        for g in [&swap, &cycle] {
            if !lattice.member(&act(g, &b)?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[i64]) -> IndexedVector {
        IndexedVector::from_seq(v).unwrap()
    }

    fn ix(t: &[u32]) -> Index {
        Index::from_tuple(t).unwrap()
    }

    #[test]
    fn act_examples() {
        let u = seq(&[1, -1, 0]);
        assert_eq!(act(&Permutation::identity(3), &u).unwrap(), u);
        let swap = Permutation::transposition(2, 1, 2).unwrap();
        assert_eq!(act(&swap, &seq(&[1, -1])).unwrap(), seq(&[-1, 1]));
        let shape = IndexShape::new(2, 1, 2).unwrap();
        let e12 = IndexedVector::unit(shape, ix(&[1, 2, 1])).unwrap();
        let e21 = IndexedVector::unit(shape, ix(&[2, 1, 1])).unwrap();
        assert_eq!(act(&swap, &e12).unwrap(), e21);
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(orbit(&seq(&[0]), 3, 100).unwrap(), vec![seq(&[0, 0, 0])]);
        let o = orbit(&seq(&[1]), 3, 100).unwrap();
        assert_eq!(o, vec![seq(&[1, 0, 0]), seq(&[0, 1, 0]), seq(&[0, 0, 1])]);
        let o = orbit(&seq(&[1, 2]), 3, 100).unwrap();
        let expected: BTreeSet<IndexedVector> =
            [[1, 2, 0], [2, 1, 0], [1, 0, 2], [2, 0, 1], [0, 1, 2], [0, 2, 1]].iter().map(|v| seq(v)).collect();
        assert_eq!(o, expected.into_iter().collect::<Vec<_>>());
        assert!(matches!(orbit(&seq(&[1, 2, 3]), 6, 10), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_form(&seq(&[0, 2, 1]), 3, 100).unwrap(), seq(&[1, 2, 0]));
        assert_eq!(canonical_form(&seq(&[0, 0]), 2, 100).unwrap(), seq(&[0, 0]));
        assert_eq!(canonical_form(&seq(&[0, 0, 0, 0, 1]), 5, 100).unwrap(), seq(&[1, 0, 0, 0, 0]));
    }

    #[test]
    fn reduce_width_examples() {
        let shape = IndexShape::flat(5).unwrap();
        let inside = [ix(&[2, 1])];
        assert!(reduce_width(&inside, shape).unwrap().is_identity());
        let s = [ix(&[5, 1])];
        let sigma = reduce_width(&s, shape).unwrap();
        assert!(sigma.apply(5) <= 2);
        let shape = IndexShape::new(2, 1, 4).unwrap();
        let s = [ix(&[3, 4, 1])];
        let sigma = reduce_width(&s, shape).unwrap();
        let moved = act_on_indices(&sigma, &s);
        assert!(moved[0].max_coord() <= 3);
        assert_eq!(sigma, Permutation::transposition(4, 1, 4).unwrap());
        let too_small = IndexShape::new(2, 1, 2).unwrap();
        assert!(matches!(reduce_width(&[ix(&[1, 2, 1])], too_small), Err(Error::Precondition(_))));
    }

    #[test]
    fn pull_permutation_trivial_case() {
        let s1 = Permutation::from_images(vec![2, 3, 1]).unwrap();
        let (sigma, taus) = pull_permutation(&[s1.clone()], 1, 3).unwrap();
        assert!(sigma.is_identity());
        assert_eq!(taus[0].apply(1), s1.apply(1));
    }

    #[test]
    fn pull_permutation_single_step() {
        let n = 3;
        let s1 = Permutation::transposition(n + 1, 1, n + 1).unwrap();
        let (sigma, taus) = pull_permutation(&[s1.clone()], 1, n).unwrap();
        let l = taus[0].apply(1);
        assert!(l <= n);
        assert_eq!(sigma.apply(n + 1), l);
        assert_eq!(sigma.compose(&s1).apply(1), l);
    }

    #[test]
    fn pull_permutation_two_steps() {
        let s1 = Permutation::transposition(4, 1, 4).unwrap();
        let s2 = Permutation::transposition(5, 1, 5).unwrap();
        let (sigma, taus) = pull_permutation(&[s1.clone(), s2.clone()], 1, 3).unwrap();
        for (s, t) in [s1, s2].iter().zip(&taus) {
            assert_eq!(sigma.compose(s).apply(1), t.apply(1));
            assert_eq!(t.degree(), 3);
        }
        assert!(pull_permutation(&[Permutation::identity(2)], 2, 2).is_err());
    }

    #[test]
    fn higman_examples() {
        let e = higman_leq(&seq(&[0]), &seq(&[1, 0])).unwrap().unwrap();
        assert!(e.pairs.is_empty());
        let e = higman_leq(&seq(&[1, 2]), &seq(&[1, 0, 3])).unwrap().unwrap();
        assert_eq!(e.pairs, vec![(1, 1), (2, 3)]);
        assert!(higman_leq(&seq(&[2, 1]), &seq(&[1, 2])).unwrap().is_none());
        assert!(matches!(higman_leq(&seq(&[-1]), &seq(&[1])), Err(Error::NegativeVector)));
    }

    #[test]
    fn permutation_json_is_image_array() {
        let p = Permutation::from_images(vec![3, 1, 2]).unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), "[3,1,2]");
        assert!(serde_json::from_str::<Permutation>("[1,1]").is_err());
    }
}
