mod common;

use common::{naive_rank, sampled_min_abs, truncated_product};
use fredkit::bfredholm::{bclassify, finite_dis, stabilization_check, BStatus, FinitePowers};
use fredkit::exactcore::{ExactMatrix, GaussianRational, LaurentPoly};
use fredkit::fredholm::{
    finite_section_toeplitz, fredholm_margin, index, is_fredholm, nullity_defect,
    symbol_min_lower_bound, FiniteSection, NullityMode, MARGIN_DEPTH_CAP,
};
use fredkit::opmodel::{self, Block, BlockOperator, BlockShape, ToeplitzBlock};
use fredkit::random;
use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;
use rand::Rng;

const TOEPLITZ: [BlockShape; 1] = [BlockShape::Toeplitz];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compose_matches_truncated_product(seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let a = random::any_operator(&mut r, &TOEPLITZ);
        let b = random::any_operator(&mut r, &TOEPLITZ);
        let ab = opmodel::compose(&a, &b).unwrap();
        let n = 12;
        let expected = truncated_product(&a.blocks()[0], &b.blocks()[0], n, 8);
        let Block::Toeplitz(t) = &ab.blocks()[0] else { unreachable!() };
        prop_assert_eq!(t.dense(n, n), expected);
    }

    #[test]
    fn finite_compose_is_matrix_product(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = random::rng(seed);
        let sig = [BlockShape::Finite(n)];
        let a = random::any_operator(&mut r, &sig);
        let b = random::any_operator(&mut r, &sig);
        let ab = opmodel::compose(&a, &b).unwrap();
        prop_assert_eq!(&ab.blocks()[0], &Block::Finite(truncated_product(&a.blocks()[0], &b.blocks()[0], n, 0)));
    }

    #[test]
    fn algebra_laws(seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let sig = random::signature(&mut r, 3);
        let a = random::any_operator(&mut r, &sig);
        let b = random::any_operator(&mut r, &sig);
        let c = random::any_operator(&mut r, &sig);
        prop_assert_eq!(opmodel::add(&a, &b).unwrap(), opmodel::add(&b, &a).unwrap());
        let ab_c = opmodel::compose(&opmodel::compose(&a, &b).unwrap(), &c).unwrap();
        let a_bc = opmodel::compose(&a, &opmodel::compose(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let id = BlockOperator::identity(&sig);
        prop_assert_eq!(opmodel::compose(&a, &id).unwrap(), a.clone());
        prop_assert_eq!(opmodel::adjoint(&opmodel::adjoint(&a)), a.clone());
        prop_assert!(opmodel::sub(&a, &a).unwrap().is_compact());
    }

    #[test]
    fn norm_bound_is_a_seminorm_surrogate(seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let sig = random::signature(&mut r, 3);
        let a = random::any_operator(&mut r, &sig);
        let b = random::any_operator(&mut r, &sig);
        let nb = opmodel::norm_bound;
        prop_assert!(nb(&opmodel::add(&a, &b).unwrap()) <= nb(&a) + nb(&b));
        let q = num_rational::BigRational::new(r.gen_range(-9i64..=9).into(), r.gen_range(1i64..=5).into());
        prop_assert_eq!(nb(&opmodel::scale(&a, &GaussianRational::real(q.clone()))), q.abs() * nb(&a));
        let z = GaussianRational::from_parts(r.gen_range(-9..=9), 2, r.gen_range(-9..=9), 3);
        prop_assert!(nb(&opmodel::scale(&a, &z)) <= (z.re().abs() + z.im().abs()) * nb(&a));
    }

    #[test]
    fn compact_iff_all_symbols_vanish(seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let sig = random::signature(&mut r, 3);
        let a = if r.gen_bool(0.5) { random::compact_operator(&mut r, &sig) } else { random::any_operator(&mut r, &sig) };
        let zero_symbols = a.blocks().iter().all(|b| match b {
            Block::Finite(_) => true,
            Block::Toeplitz(t) => t.symbol().is_zero(),
        });
        prop_assert_eq!(a.is_compact(), zero_symbols);
    }

    #[test]
    fn product_law(seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let sig = random::signature(&mut r, 3);
        let (s, is) = random::fredholm_operator(&mut r, &sig, 4);
        let (t, it) = random::fredholm_operator(&mut r, &sig, 4);
        prop_assert_eq!(index(&s).unwrap(), is);
        prop_assert_eq!(index(&opmodel::compose(&s, &t).unwrap()).unwrap(), is + it);
    }

    #[test]
    fn compact_perturbation_and_adjoint(seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let sig = random::signature(&mut r, 3);
        let (s, is) = random::fredholm_operator(&mut r, &sig, 5);
        let k = random::compact_operator(&mut r, &sig);
        prop_assert!(k.is_compact());
        prop_assert_eq!(index(&opmodel::add(&s, &k).unwrap()).unwrap(), is);
        prop_assert_eq!(index(&opmodel::adjoint(&s)).unwrap(), -is);
        let v = bclassify(&s);
        prop_assert_eq!(v.status, BStatus::BFredholm);
        prop_assert_eq!(v.index, Some(is));
    }

    #[test]
    fn power_index(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = random::rng(seed);
        let (s, is) = random::fredholm_operator(&mut r, &TOEPLITZ, 2);
        prop_assert_eq!(index(&opmodel::power(&s, n).unwrap()).unwrap(), is * n as i64);
    }

    #[test]
    fn margin_is_sound(seed in any::<u64>()) {
        let (f, _) = random::nonvanishing_symbol(&mut random::rng(seed), 5);
        if let Some(m) = symbol_min_lower_bound(&f, MARGIN_DEPTH_CAP) {
            prop_assert!(m.to_f64().unwrap() <= sampled_min_abs(&f, 4096) + 1e-12);
            prop_assert!(m > num_rational::BigRational::from_integer(0.into()));
        }
    }

    #[test]
    fn perturbations_below_margin_keep_index(seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let (s, is) = random::fredholm_operator(&mut r, &TOEPLITZ, 3);
        let m = fredholm_margin(&s).unwrap().unwrap();
        let p = random::any_operator(&mut r, &TOEPLITZ);
        let nb = opmodel::norm_bound(&p);
        prop_assume!(nb > num_rational::BigRational::from_integer(0.into()));
        let scale = GaussianRational::real(m * num_rational::BigRational::new(63.into(), 64.into()) / nb);
        let q = opmodel::add(&s, &opmodel::scale(&p, &scale)).unwrap();
        prop_assert_eq!(index(&q).unwrap(), is);
    }

    #[test]
    fn finite_section_agrees_with_index(seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let (f, w) = random::nonvanishing_symbol(&mut r, 3);
        let t = ToeplitzBlock::new(f, random::patch(&mut r, 2));
        let (n, d) = finite_section_toeplitz(&t, FiniteSection { size: 64, tol: 1e-8 });
        prop_assert_eq!(n as i64 - d as i64, -w);
    }

    #[test]
    fn stabilization_matches_rank_oracle(seed in any::<u64>(), n in 1usize..=6) {
        let m = random::mixed_matrix(&mut random::rng(seed), n);
        // dim N(M) ∩ R(Mᵏ) = rank Mᵏ − rank Mᵏ⁺¹, and codim R(M) + N(Mᵏ) is the same number
        let ranks: Vec<usize> = (0..=n + 2).map(|k| naive_rank(&m.pow(k))).collect();
        let descent = (0..=n).find(|&k| ranks[k] == ranks[k + 1]).unwrap();
        prop_assert_eq!(finite_dis(&m), descent as u64);
        let powers = FinitePowers::new(&m);
        for k in 0..=n {
            let c = powers.class_at(k);
            prop_assert_eq!((c.dim as usize, c.codim as usize), (ranks[k] - ranks[k + 1], ranks[k] - ranks[k + 1]));
        }
        prop_assert!(stabilization_check(&m).unwrap().passed);
    }
}

#[test]
fn exact_nullity_for_unpatched_blocks() {
    let a = BlockOperator::new(vec![
        Block::Finite(ExactMatrix::from_int_rows(&[&[0, 1], &[0, 0]])),
        Block::Toeplitz(ToeplitzBlock::pure(LaurentPoly::z_pow(-2))),
    ])
    .unwrap();
    let nd = nullity_defect(&a, NullityMode::default()).unwrap();
    assert_eq!((nd.nullity, nd.defect, nd.certified), (3, 1, true));
    assert_eq!(is_fredholm(&a).index, Some(2));
}
