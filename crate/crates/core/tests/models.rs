use std::collections::BTreeMap;

use equilat::bases::graver_basis;
use equilat::models::{
    kernel_lattice, marginal_matrix, no3way_lattice, no3way_witness, scenario_kernel, scenario_shape, HierModel,
    IndependentSetScenario, SimplicialComplex,
};
use equilat::symmetry::act;
use equilat::{Budget, Error, Index, IndexedVector, IntMatrix, Permutation, Refusal};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng() -> ChaCha8Rng {
    let seed = std::env::var("EQUILAT_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(11);
    ChaCha8Rng::seed_from_u64(seed)
}

fn complex(m: usize, facets: &[&[usize]]) -> SimplicialComplex {
    SimplicialComplex::new(m, facets.iter().map(|f| f.to_vec()).collect()).unwrap()
}

fn models() -> Vec<HierModel> {
    vec![
        HierModel::new(complex(2, &[&[1], &[2]]), vec![2, 3]).unwrap(),
        HierModel::new(complex(3, &[&[1, 2], &[1, 3], &[2, 3]]), vec![2, 2, 3]).unwrap(),
        HierModel::new(complex(3, &[&[1, 2], &[3]]), vec![2, 2, 2]).unwrap(),
        HierModel::new(complex(4, &[&[1, 2], &[2, 3], &[3, 4]]), vec![2, 2, 2, 2]).unwrap(),
    ]
}

fn is_zero_image(m: &IntMatrix, v: &IndexedVector) -> bool {
    let x: Vec<BigInt> = (1..=m.cols() as u32).map(|i| v.get(&Index::new(vec![i], 1))).collect();
    m.apply(&x).unwrap().iter().all(|y| *y == BigInt::from(0))
}

#[test]
fn every_facet_marginal_preserves_the_total() {
    let mut rng = rng();
    let budget = Budget::default();
    for model in models() {
        let m = marginal_matrix(&model, &budget).unwrap();
        for _ in 0..20 {
            let u: Vec<BigInt> = (0..m.cols()).map(|_| BigInt::from(rng.gen_range(0..10))).collect();
            let total: BigInt = u.iter().sum();
            let image = m.apply(&u).unwrap();
            let mut offset = 0;
            for facet in model.complex().facets() {
                let size: usize = facet.iter().map(|&k| model.levels()[k - 1] as usize).product();
                let block: BigInt = image[offset..offset + size].iter().sum();
                assert_eq!(block, total);
                offset += size;
            }
            assert_eq!(offset, m.rows());
        }
    }
}

#[test]
fn kernel_and_graver_have_zero_marginals() {
    let budget = Budget::default();
    for model in models().into_iter().take(3) {
        let m = marginal_matrix(&model, &budget).unwrap();
        let l = kernel_lattice(&model, &budget).unwrap();
        assert_eq!(l.rank(), m.cols() - m.rank());
        for v in l.basis_vectors() {
            assert!(is_zero_image(&m, &v));
        }
        for g in graver_basis(&l, &budget).unwrap().elements {
            assert!(is_zero_image(&m, &g));
        }
    }
}

#[test]
fn scenario_kernels_are_equivariant() {
    let mut rng = rng();
    let budget = Budget::default();
    let scenarios = [
        IndependentSetScenario::new(complex(2, &[&[1], &[2]]), vec![1, 2], BTreeMap::new()).unwrap(),
        IndependentSetScenario::new(complex(3, &[&[1, 2], &[2, 3]]), vec![1, 3], BTreeMap::from([(2, 2)])).unwrap(),
        IndependentSetScenario::new(complex(3, &[&[1, 2], &[1, 3], &[2, 3]]), vec![1], BTreeMap::from([(2, 2), (3, 2)]))
            .unwrap(),
    ];
    for s in &scenarios {
        for n in 2..=4 {
            let l = scenario_kernel(s, n, &budget).unwrap();
            let (shape, cells) = scenario_shape(s, n).unwrap();
            assert_eq!(l.shape(), shape);
            assert_eq!(cells.len(), shape.size());
            for _ in 0..5 {
                let mut images: Vec<u32> = (1..=n).collect();
                images.shuffle(&mut rng);
                let sigma = Permutation::from_images(images).unwrap();
                for v in l.basis_vectors() {
                    assert!(l.member(&act(&sigma, &v).unwrap()).unwrap());
                }
            }
        }
    }
}

#[test]
fn independence_graver_elements_are_cycles() {
    let budget = Budget::default();
    let s = IndependentSetScenario::new(complex(2, &[&[1], &[2]]), vec![1, 2], BTreeMap::new()).unwrap();
    for n in 2..=4 {
        let l = scenario_kernel(&s, n, &budget).unwrap();
        for g in graver_basis(&l, &budget).unwrap().elements {
            let value = |i: u32, k: u32| g.get(&Index::new(vec![i, k], 1));
            let mut plus = 0;
            let mut minus = 0;
            for (_, x) in g.entries() {
                match i64::try_from(x).unwrap() {
                    1 => plus += 1,
                    -1 => minus += 1,
                    other => panic!("entry {other} in {g}"),
                }
            }
            assert_eq!(plus, minus);
            for i in 1..=n {
                assert_eq!((1..=n).map(|k| value(i, k)).sum::<BigInt>(), BigInt::from(0));
                assert_eq!((1..=n).map(|k| value(k, i)).sum::<BigInt>(), BigInt::from(0));
            }
        }
    }
}

#[test]
fn no3way_kernel_and_witness() {
    let budget = Budget::default();
    let model = HierModel::new(complex(3, &[&[1, 2], &[1, 3], &[2, 3]]), vec![2, 2, 2]).unwrap();
    assert_eq!(marginal_matrix(&model, &budget).unwrap().rank(), 7);
    let l = no3way_lattice(2, 2, &budget).unwrap();
    assert_eq!(l.rank(), 1);
    let w = no3way_witness(2, 2, &budget).unwrap();
    assert!(l.member(&w).unwrap());
    assert_eq!(l.basis_vectors().len(), 1);
    assert!(l.basis_vectors()[0] == w || l.basis_vectors()[0] == w.neg());
    for n in 2..=4 {
        let w = no3way_witness(n, 2, &budget).unwrap();
        assert_eq!(w.support_size(), 4 * n as usize);
        assert_eq!(w.norm(), BigInt::from(4 * n));
    }
}

#[test]
fn facet_meeting_t_twice_is_refused() {
    let refused = IndependentSetScenario::new(complex(3, &[&[1, 2], &[1, 3], &[2, 3]]), vec![1, 2], BTreeMap::from([(3, 2)]));
    assert!(matches!(refused, Err(Error::Refused(Refusal::NotIndependent { .. }))));
}

#[test]
fn single_facet_gives_zero_kernels() {
    let budget = Budget::default();
    let s = IndependentSetScenario::new(complex(2, &[&[1, 2]]), vec![1], BTreeMap::from([(2, 3)])).unwrap();
    for n in 1..=3 {
        assert!(scenario_kernel(&s, n, &budget).unwrap().is_zero());
    }
}
