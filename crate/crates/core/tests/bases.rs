use equilat::bases::{
    flat_lattice, generating_set_check, graver_basis, graver_oracle, groebner_basis, hilbert_basis, normal_form,
    verify_groebner, verify_markov, FiberOracle,
};
use equilat::chains::{truncation, ChainMode, ChainSpec};
use equilat::intlinalg::intersect_truncation;
use equilat::models::{kernel_lattice, scenario_chain, HierModel, IndependentSetScenario, SimplicialComplex};
use equilat::symmetry::act;
use equilat::{Budget, IndexShape, IndexedVector, LatticeHandle, Permutation, TermOrder};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng() -> ChaCha8Rng {
    let seed = std::env::var("EQUILAT_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(7);
    ChaCha8Rng::seed_from_u64(seed)
}

fn worked(n: u32) -> LatticeHandle {
    let seed = vec![IndexedVector::from_seq(&[1, 3, 5]).unwrap(), IndexedVector::from_seq(&[2, 4, 6]).unwrap()];
    truncation(&ChainSpec::new(seed, ChainMode::SaturatedProbe).unwrap(), n, &Budget::default()).unwrap()
}

fn zero_sum_chain() -> ChainSpec {
    ChainSpec::new(vec![IndexedVector::from_seq(&[1, -3, 2]).unwrap()], ChainMode::Span).unwrap()
}

fn zero_sum(n: u32) -> LatticeHandle {
    truncation(&zero_sum_chain(), n, &Budget::default()).unwrap()
}

fn independence() -> LatticeHandle {
    let model = HierModel::new(SimplicialComplex::new(2, vec![vec![1], vec![2]]).unwrap(), vec![2, 2]).unwrap();
    kernel_lattice(&model, &Budget::default()).unwrap()
}

fn random_lattice(rng: &mut ChaCha8Rng, k: usize, rank: usize) -> LatticeHandle {
    let rows: Vec<Vec<i64>> = (0..rank).map(|_| (0..k).map(|_| rng.gen_range(-3..=3)).collect()).collect();
    flat_lattice(&rows).unwrap()
}

#[test]
fn graver_output_is_an_antichain_closed_under_negation() {
    let mut rng = rng();
    let budget = Budget::default();
    for _ in 0..20 {
        let k = rng.gen_range(2..=4);
        let rank = rng.gen_range(1..=2);
        let l = random_lattice(&mut rng, k, rank);
        let g = graver_basis(&l, &budget).unwrap().elements;
        for u in &g {
            assert!(l.member(u).unwrap());
            assert!(g.binary_search(&u.neg()).is_ok());
            for v in &g {
                if u != v {
                    assert!(!u.conformal_leq(v).unwrap(), "{u} ⊑ {v}");
                }
            }
        }
        let oracle = graver_oracle(&l, 6, &budget).unwrap();
        let small: Vec<_> = g.iter().filter(|u| u.norm() <= 6.into()).cloned().collect();
        assert_eq!(small, oracle);
    }
}

#[test]
fn hilbert_elements_are_irreducible() {
    let budget = Budget::default();
    for l in [worked(3), worked(4)] {
        let h = hilbert_basis(&l, &budget).unwrap().elements;
        for u in &h {
            assert!(u.is_nonnegative() && l.member(u).unwrap());
            for v in &h {
                let rest = u.sub(v).unwrap();
                if u != v && rest.is_nonnegative() {
                    assert!(!l.member(&rest).unwrap(), "{u} = {v} + {rest}");
                }
            }
        }
    }
}

#[test]
fn hilbert_matches_nonnegative_graver() {
    let mut rng = rng();
    let budget = Budget::default();
    let mut lattices = vec![worked(3), worked(4), zero_sum(4), independence()];
    for _ in 0..30 {
        let k = rng.gen_range(2..=5);
        let rank = rng.gen_range(1..=3.min(k));
        lattices.push(random_lattice(&mut rng, k, rank));
    }
    for l in lattices {
        let nonneg: Vec<_> =
            graver_basis(&l, &budget).unwrap().elements.into_iter().filter(|u| u.is_nonnegative()).collect();
        assert_eq!(hilbert_basis(&l, &budget).unwrap().elements, nonneg);
    }
}

#[test]
fn implication_chain() {
    let budget = Budget::default();
    assert!(matches!(
        verify_markov(&worked(3), &[], 3, &budget),
        Err(equilat::Error::Refused(equilat::Refusal::InfiniteFiber))
    ));
    for l in [zero_sum(3), zero_sum(4), independence()] {
        let g = graver_basis(&l, &budget).unwrap().elements;
        assert!(verify_markov(&l, &g, 5, &budget).unwrap().result);
        assert!(generating_set_check(&l, &g).unwrap());
        for order in [TermOrder::Lex, TermOrder::Dlex, TermOrder::Revlex] {
            let gb = groebner_basis(&l, order, &budget).unwrap().elements;
            assert!(verify_groebner(&l, &gb, order, 4, &budget).unwrap().result, "{order}");
            assert!(verify_markov(&l, &gb, 4, &budget).unwrap().result, "{order}");
        }
    }
}

#[test]
fn truncation_preserves_graver() {
    let budget = Budget::default();
    for (n, big) in [(2, 3), (3, 4)] {
        let l_big = worked(big);
        let l_small = intersect_truncation(&l_big, n).unwrap();
        let inside: Vec<IndexedVector> = graver_basis(&l_big, &budget)
            .unwrap()
            .elements
            .into_iter()
            .filter(|u| u.touched().iter().all(|&i| i <= n))
            .map(|u| u.reshape(n).unwrap())
            .collect();
        let mut inside = inside;
        inside.sort();
        assert_eq!(inside, graver_basis(&l_small, &budget).unwrap().elements, "({n}, {big})");
    }
}

#[test]
fn lex_groebner_truncates() {
    let budget = Budget::default();
    let scenario = IndependentSetScenario::new(
        SimplicialComplex::new(2, vec![vec![1], vec![2]]).unwrap(),
        vec![1, 2],
        Default::default(),
    )
    .unwrap();
    let chains = [zero_sum_chain(), scenario_chain(&scenario).unwrap()];
    for spec in &chains {
        for (n, big) in [(2, 3), (3, 4)] {
            let l_big = truncation(spec, big, &budget).unwrap();
            let l_small = intersect_truncation(&l_big, n).unwrap();
            let inside: Vec<IndexedVector> = groebner_basis(&l_big, TermOrder::Lex, &budget)
                .unwrap()
                .elements
                .into_iter()
                .filter(|u| u.touched().iter().all(|&i| i <= n))
                .map(|u| u.reshape(n).unwrap())
                .collect();
            assert!(verify_groebner(&l_small, &inside, TermOrder::Lex, 4, &budget).unwrap().result, "({n}, {big})");
        }
    }
}

#[test]
fn graver_is_equivariant() {
    let mut rng = rng();
    let budget = Budget::default();
    let shape = IndexShape::new(1, 1, 4).unwrap();
    for _ in 0..10 {
        let gens: Vec<IndexedVector> = (0..2)
            .map(|_| {
                let d: Vec<i64> = (0..4).map(|_| rng.gen_range(-2..=2)).collect();
                IndexedVector::from_dense_i64(shape, &d).unwrap()
            })
            .collect();
        let mut images: Vec<u32> = (1..=4).collect();
        images.shuffle(&mut rng);
        let sigma = Permutation::from_images(images).unwrap();
        let l = LatticeHandle::new(shape, gens.clone()).unwrap();
        let moved = LatticeHandle::new(shape, gens.iter().map(|g| act(&sigma, g).unwrap()).collect()).unwrap();
        let mut expected: Vec<IndexedVector> =
            graver_basis(&l, &budget).unwrap().elements.iter().map(|g| act(&sigma, g).unwrap()).collect();
        expected.sort();
        assert_eq!(graver_basis(&moved, &budget).unwrap().elements, expected);
    }
    let l = worked(4);
    let g = graver_basis(&l, &budget).unwrap().elements;
    let sigma = Permutation::from_images(vec![3, 1, 4, 2]).unwrap();
    let mut moved: Vec<_> = g.iter().map(|u| act(&sigma, u).unwrap()).collect();
    moved.sort();
    assert_eq!(moved, g);
}

#[test]
fn independence_groebner_normal_forms() {
    let budget = Budget::default();
    let l = independence();
    let shape = l.shape();
    let v = |d: &[i64]| IndexedVector::from_dense_i64(shape, d).unwrap();
    for order in [TermOrder::Lex, TermOrder::Dlex, TermOrder::Revlex] {
        let gb = groebner_basis(&l, order, &budget).unwrap().elements;
        assert_eq!(gb.len(), 1);
        let diagonal = normal_form(&v(&[1, 0, 0, 1]), &gb, order, &budget).unwrap();
        let anti = normal_form(&v(&[0, 1, 1, 0]), &gb, order, &budget).unwrap();
        assert_eq!(diagonal, anti);
        let fiber = FiberOracle::new(&l, &budget).unwrap().fiber(&v(&[1, 0, 0, 1])).unwrap();
        let least = fiber.iter().min_by(|a, b| order.compare(a, b).unwrap()).unwrap();
        assert_eq!(&diagonal, least);
    }
}
