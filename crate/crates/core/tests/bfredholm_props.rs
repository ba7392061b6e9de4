mod common;

use common::naive_rank;
use fredkit::bfredholm::{bclassify, finite_dis, psi, BStatus, FinitePowers};
use fredkit::exactcore::{reduced_span, ExactMatrix, GaussianRational};
use fredkit::fredholm::{index, is_fredholm};
use fredkit::opmodel::{Block, BlockOperator};
use fredkit::random;
use num_traits::Zero;
use proptest::prelude::*;

fn direct_sum(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    let (n, m) = (a.rows(), b.rows());
    let rows = (0..n + m)
        .map(|i| {
            (0..n + m)
                .map(|j| match (i < n, j < n) {
                    (true, true) => a.get_or_zero(i, j),
                    (false, false) => b.get_or_zero(i - n, j - n),
                    _ => GaussianRational::zero(),
                })
                .collect()
        })
        .collect();
    ExactMatrix::from_rows(rows).unwrap()
}

/// Δ membership from ranks of explicit powers: dim N(M) ∩ R(Mᵏ) = rank Mᵏ − rank Mᵏ⁺¹.
fn delta_oracle(m: &ExactMatrix) -> Vec<bool> {
    let n = m.rows();
    let ranks: Vec<usize> = (0..=n + 2).map(|k| naive_rank(&m.pow(k))).collect();
    let meet: Vec<usize> = (0..=n + 1).map(|k| ranks[k] - ranks[k + 1]).collect();
    (0..=n)
        .map(|k| (k..=n + 1).all(|j| meet[j] == meet[k]))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn delta_is_upward_closed(seed in any::<u64>(), n in 1usize..=6) {
        let m = random::mixed_matrix(&mut random::rng(seed), n);
        let powers = FinitePowers::new(&m);
        let oracle = delta_oracle(&m);
        for (k, &member) in oracle.iter().enumerate() {
            prop_assert_eq!(powers.in_delta(k), member);
            if member {
                prop_assert!(powers.in_delta(k + 1));
            }
        }
    }

    #[test]
    fn restriction_to_stable_range_is_invertible(seed in any::<u64>(), n in 1usize..=6) {
        let m = random::mixed_matrix(&mut random::rng(seed), n);
        let powers = FinitePowers::new(&m);
        let d = powers.dis() as usize;
        let range = powers.range(d);
        prop_assert_eq!(range.len(), naive_rank(&m.pow(d)));
        let image: Vec<_> = range.iter().map(|v| m.mul_vec(v)).collect();
        if !image.is_empty() {
            prop_assert_eq!(naive_rank(&ExactMatrix::from_columns(&image, n)), range.len());
        }
    }

    #[test]
    fn classes_add_under_direct_sum(s1 in any::<u64>(), s2 in any::<u64>(), n in 1usize..=5, m in 1usize..=5) {
        let a = random::mixed_matrix(&mut random::rng(s1), n);
        let b = random::mixed_matrix(&mut random::rng(s2), m);
        let (pa, pb) = (FinitePowers::new(&a), FinitePowers::new(&b));
        let ab = direct_sum(&a, &b);
        let pab = FinitePowers::new(&ab);
        prop_assert_eq!(pab.dis(), pa.dis().max(pb.dis()));
        let k = pab.dis() as usize;
        let (ca, cb, cab) = (pa.class_at(k), pb.class_at(k), pab.class_at(k));
        prop_assert_eq!((cab.dim, cab.codim), (ca.dim + cb.dim, ca.codim + cb.codim));
        prop_assert_eq!(psi(cab), psi(ca) + psi(cb));
        prop_assert_eq!(psi(cab), 0);
    }

    #[test]
    fn fredholm_operators_are_b_fredholm(seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let sig = random::signature(&mut r, 3);
        let a = random::any_operator(&mut r, &sig);
        if is_fredholm(&a).is_fredholm {
            let v = bclassify(&a);
            prop_assert_eq!(v.status, BStatus::BFredholm);
            prop_assert_eq!(v.index, Some(index(&a).unwrap()));
        }
    }

    #[test]
    fn reduced_span_keeps_the_span(seed in any::<u64>(), n in 1usize..=6) {
        let m = random::mixed_matrix(&mut random::rng(seed), n);
        let cols: Vec<_> = (0..n).map(|j| m.column(j)).collect();
        let basis = reduced_span(&cols, n);
        prop_assert_eq!(basis.len(), naive_rank(&m));
        let mut both = basis.clone();
        both.extend(cols);
        prop_assert_eq!(naive_rank(&ExactMatrix::from_columns(&both, n)), basis.len());
    }
}

#[test]
fn nilpotent_and_zero_blocks() {
    let jordan = ExactMatrix::from_int_rows(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
    assert_eq!(finite_dis(&jordan), 3);
    let s = BlockOperator::new(vec![
        Block::Finite(ExactMatrix::identity(1)),
        Block::Finite(ExactMatrix::zeros(2, 2)),
    ])
    .unwrap();
    let v = bclassify(&s);
    assert_eq!((v.status, v.index), (BStatus::BFredholm, Some(0)));
}
