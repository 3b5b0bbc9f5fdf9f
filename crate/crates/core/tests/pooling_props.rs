mod common;

use eep::pooling::{pool, pool_all, pool_max, pool_mean, reconstruct, sample_regular};
use eep::{BasisSet, BasisSource, FeatureSequence, Matrix};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sequence(d: usize, len: usize) -> impl Strategy<Value = FeatureSequence> {
    prop::collection::vec(-10.0f64..10.0, d * len)
        .prop_map(move |v| FeatureSequence::new(Matrix::new(d, len, v).unwrap()).unwrap())
}

fn shaped() -> impl Strategy<Value = (usize, usize)> {
    (1usize..6, 2usize..20)
}

fn pair() -> impl Strategy<Value = (FeatureSequence, FeatureSequence)> {
    shaped().prop_flat_map(|(d, len)| (sequence(d, len), sequence(d, len)))
}

fn bases(len: usize, seed: u64) -> Vec<BasisSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = (len / 2).max(1);
    vec![
        BasisSet::dct(len, len).unwrap(),
        BasisSet::rank(len).unwrap(),
        BasisSet::mean(len).unwrap(),
        BasisSet::new(
            common::random_orthonormal(&mut rng, len, k),
            BasisSource::Eigen,
            Some(vec![1.0; k]),
        )
        .unwrap(),
    ]
}

fn combine(a: &FeatureSequence, b: &FeatureSequence, alpha: f64, beta: f64) -> FeatureSequence {
    let m = a
        .matrix()
        .scale(alpha)
        .add(&b.matrix().scale(beta))
        .unwrap();
    FeatureSequence::new(m).unwrap()
}

fn permute_rows(seq: &FeatureSequence, perm: &[usize]) -> FeatureSequence {
    let rows: Vec<&[f64]> = perm.iter().map(|&i| seq.row(i)).collect();
    FeatureSequence::from_rows(&rows).unwrap()
}

proptest! {
    #[test]
    fn linearity((a, b) in pair(), alpha in -3.0f64..3.0, beta in -3.0f64..3.0, seed in any::<u64>()) {
        let mixed = combine(&a, &b, alpha, beta);
        for basis in bases(a.len(), seed) {
            for j in 1..=basis.count() {
                let lhs = pool(&mixed, &basis, j).unwrap().values;
                let pa = pool(&a, &basis, j).unwrap().values;
                let pb = pool(&b, &basis, j).unwrap().values;
                for i in 0..lhs.len() {
                    let rhs = alpha * pa[i] + beta * pb[i];
                    prop_assert!((lhs[i] - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()), "{} vs {}", lhs[i], rhs);
                }
            }
        }
    }

    #[test]
    fn feature_permutation_equivariance(
        seq in shaped().prop_flat_map(|(d, len)| sequence(d, len)),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..seq.dim()).collect();
        perm.shuffle(&mut rng);
        let permuted = permute_rows(&seq, &perm);
        let check = |orig: Vec<f64>, moved: Vec<f64>| {
            perm.iter().enumerate().all(|(i, &p)| moved[i] == orig[p])
        };
        prop_assert!(check(pool_max(&seq).values, pool_max(&permuted).values));
        prop_assert!(check(pool_mean(&seq).values, pool_mean(&permuted).values));
        for basis in bases(seq.len(), seed) {
            for j in 1..=basis.count() {
                prop_assert!(check(pool(&seq, &basis, j).unwrap().values, pool(&permuted, &basis, j).unwrap().values));
            }
        }
    }

    #[test]
    fn dct_time_reversal_parity(seq in shaped().prop_flat_map(|(d, len)| sequence(d, len))) {
        let basis = BasisSet::dct(seq.len(), seq.len()).unwrap();
        let rev = seq.reversed();
        for j in 1..=basis.count() {
            // 1-based index j is frequency j-1; odd frequencies flip sign.
            let sign = if (j - 1) % 2 == 1 { -1.0 } else { 1.0 };
            let a = pool(&seq, &basis, j).unwrap().values;
            let b = pool(&rev, &basis, j).unwrap().values;
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((sign * x - y).abs() <= 1e-9, "j={j}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn mean_weights_match_pool_mean(seq in shaped().prop_flat_map(|(d, len)| sequence(d, len))) {
        let via_basis = pool(&seq, &BasisSet::mean(seq.len()).unwrap(), 1).unwrap();
        prop_assert_eq!(via_basis.values, pool_mean(&seq).values);
    }

    #[test]
    fn mean_and_max_ignore_time_order(seq in shaped().prop_flat_map(|(d, len)| sequence(d, len)), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..seq.len()).collect();
        order.shuffle(&mut rng);
        let shuffled = seq.select_time_steps(&order).unwrap();
        prop_assert_eq!(pool_max(&seq).values, pool_max(&shuffled).values);
        prop_assert_eq!(pool_mean(&seq).values, pool_mean(&shuffled).values);
    }

    #[test]
    fn parseval_for_complete_bases(seq in shaped().prop_flat_map(|(d, len)| sequence(d, len)), seed in any::<u64>()) {
        let len = seq.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let eigen = BasisSet::new(common::random_orthonormal(&mut rng, len, len), BasisSource::Eigen, Some(vec![1.0; len])).unwrap();
        let total = seq.matrix().frobenius_norm().powi(2);
        for basis in [BasisSet::dct(len, len).unwrap(), eigen] {
            let energy: f64 = pool_all(&seq, &basis).unwrap()
                .iter()
                .map(|d| d.values.iter().map(|v| v * v).sum::<f64>())
                .sum();
            prop_assert!((energy - total).abs() <= 1e-8 * total.max(1e-300));
        }
    }

    #[test]
    fn full_dct_reconstruction_is_identity(seq in shaped().prop_flat_map(|(d, len)| sequence(d, len))) {
        let basis = BasisSet::dct(seq.len(), seq.len()).unwrap();
        let recon = reconstruct(&seq, &basis).unwrap();
        prop_assert!(recon.matrix().max_abs_diff(seq.matrix()) <= 1e-9);
    }

    #[test]
    fn resampling_keeps_endpoints(total in 1usize..200, len in 2usize..60) {
        let steps: Vec<Vec<f64>> = (0..total).map(|t| vec![t as f64]).collect();
        let seq = FeatureSequence::from_time_steps(&steps).unwrap();
        let out = sample_regular(&seq, len).unwrap();
        prop_assert_eq!(out.len(), len);
        prop_assert_eq!(out.row(0)[0], 0.0);
        prop_assert_eq!(out.row(0)[len - 1], (total - 1) as f64);
        prop_assert!(out.row(0).windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn order_sensitive_bases_see_some_permutation() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for len in [3usize, 8, 25] {
        let seq = common::gaussian_sequence(&mut rng, 4, len);
        let rank = BasisSet::rank(len).unwrap();
        let dct = BasisSet::dct(len, 2).unwrap();
        let base_rank = pool(&seq, &rank, 1).unwrap().values;
        let base_dct = pool(&seq, &dct, 2).unwrap().values;
        let mut changed = (false, false);
        for _ in 0..20 {
            let mut order: Vec<usize> = (0..len).collect();
            order.shuffle(&mut rng);
            let s = seq.select_time_steps(&order).unwrap();
            changed.0 |= pool(&s, &rank, 1).unwrap().values != base_rank;
            changed.1 |= pool(&s, &dct, 2).unwrap().values != base_dct;
        }
        assert!(changed.0 && changed.1, "len {len}: {changed:?}");
    }
}
