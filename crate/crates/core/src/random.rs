//! Seeded generators for random instances of the representable class.
//!
//! Symbols are built as `c·z^k·Π(z − r)` with every root either in
//! `|r| ≤ 1/2` or `|r| ≥ 2`, so they stay well away from the circle and
//! their winding number is known from the construction.

use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

use crate::exactcore::{ExactMatrix, GaussianRational, LaurentPoly, Poly};
use crate::family::ParamComplex;
use crate::opmodel::{Block, BlockOperator, BlockShape, ToeplitzBlock};
use crate::weyl::{NormalDiagonalOperator, SpectralFamily, SpectralInput};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small Gaussian rational with numerators in `[-bound, bound]` and
/// denominators in `1..=4`; real with probability one half.
pub fn gauss<R: Rng>(rng: &mut R, bound: i64) -> GaussianRational {
    let re = GaussianRational::from_ratio(rng.gen_range(-bound..=bound), rng.gen_range(1..=4));
    if rng.gen_bool(0.5) {
        re
    } else {
        let im = GaussianRational::from_ratio(rng.gen_range(-bound..=bound), rng.gen_range(1..=4));
        &re + &(&im * &GaussianRational::i())
    }
}

pub fn nonzero_gauss<R: Rng>(rng: &mut R, bound: i64) -> GaussianRational {
    loop {
        let g = gauss(rng, bound);
        if !g.is_zero() {
            return g;
        }
    }
}

pub fn matrix<R: Rng>(rng: &mut R, n: usize, bound: i64) -> ExactMatrix {
    let rows = (0..n)
        .map(|_| (0..n).map(|_| gauss(rng, bound)).collect())
        .collect();
    ExactMatrix::from_rows(rows).expect("square rows")
}

/// Sparse-ish integer matrix; sparsity makes nontrivial kernels and nilpotent
/// parts common, which is what stabilization tests need.
pub fn sparse_int_matrix<R: Rng>(rng: &mut R, n: usize) -> ExactMatrix {
    let density = rng.gen_range(0.15..0.6);
    let rows = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    if rng.gen_bool(density) {
                        GaussianRational::from_int(rng.gen_range(-2..=2))
                    } else {
                        GaussianRational::from_int(0)
                    }
                })
                .collect()
        })
        .collect();
    ExactMatrix::from_rows(rows).expect("square rows")
}

/// Random rational matrix of size `n`, either dense small entries, sparse
/// integers, or a product with a strictly upper triangular factor.
pub fn mixed_matrix<R: Rng>(rng: &mut R, n: usize) -> ExactMatrix {
    match rng.gen_range(0..3) {
        0 => matrix(rng, n, 3),
        1 => sparse_int_matrix(rng, n),
        _ => {
            let mut nil = sparse_int_matrix(rng, n);
            for i in 0..n {
                for j in 0..=i {
                    nil[(i, j)] = GaussianRational::from_int(0);
                }
            }
            let b = sparse_int_matrix(rng, n);
            nil.mul(&b).expect("square")
        }
    }
}

fn inner_root<R: Rng>(rng: &mut R) -> GaussianRational {
    // |re|, |im| ≤ 1/3 gives |r| ≤ √2/3 < 1/2
    let d = rng.gen_range(3..=6);
    GaussianRational::from_parts(rng.gen_range(-1..=1), d, rng.gen_range(-1..=1), d)
}

fn outer_root<R: Rng>(rng: &mut R) -> GaussianRational {
    loop {
        let re = rng.gen_range(-3..=3);
        let im = rng.gen_range(-3..=3);
        if re * re + im * im >= 4 {
            return GaussianRational::from_parts(re, 1, im, 1);
        }
    }
}

/// Circle-nonvanishing symbol with degree span at most `max_span`, returned
/// with its winding number.
pub fn nonvanishing_symbol<R: Rng>(rng: &mut R, max_span: usize) -> (LaurentPoly, i64) {
    let factors = rng.gen_range(0..=max_span);
    let mut p = Poly::constant(nonzero_gauss(rng, 3));
    let mut inside = 0;
    for _ in 0..factors {
        let r = if rng.gen_bool(0.5) {
            inside += 1;
            inner_root(rng)
        } else {
            outer_root(rng)
        };
        p = &p * &Poly::linear_root(&r);
    }
    let shift = rng.gen_range(-(factors as i64) - 1..=1);
    (LaurentPoly::from_poly(&p, shift), inside + shift)
}

/// Random patch of size `1..=max`, possibly `None`.
pub fn patch<R: Rng>(rng: &mut R, max: usize) -> Option<ExactMatrix> {
    if max == 0 || rng.gen_bool(0.3) {
        return None;
    }
    let n = rng.gen_range(1..=max);
    Some(matrix(rng, n, 4))
}

pub fn signature<R: Rng>(rng: &mut R, max_blocks: usize) -> Vec<BlockShape> {
    let n = rng.gen_range(1..=max_blocks);
    (0..n)
        .map(|_| {
            if rng.gen_bool(0.6) {
                BlockShape::Toeplitz
            } else {
                BlockShape::Finite(rng.gen_range(1..=3))
            }
        })
        .collect()
}

/// Fredholm operator with the given signature, plus its index computed from
/// the construction.
pub fn fredholm_operator<R: Rng>(
    rng: &mut R,
    sig: &[BlockShape],
    max_span: usize,
) -> (BlockOperator, i64) {
    let mut index = 0;
    let blocks = sig
        .iter()
        .map(|s| match s {
            BlockShape::Finite(n) => Block::Finite(matrix(rng, *n, 3)),
            BlockShape::Toeplitz => {
                let (f, w) = nonvanishing_symbol(rng, max_span);
                index -= w;
                Block::Toeplitz(ToeplitzBlock::new(f, patch(rng, 3)))
            }
        })
        .collect();
    (
        BlockOperator::new(blocks).expect("generated within limits"),
        index,
    )
}

/// Compact operator with the given signature: zero symbols, random patches
/// and random finite blocks.
pub fn compact_operator<R: Rng>(rng: &mut R, sig: &[BlockShape]) -> BlockOperator {
    let blocks = sig
        .iter()
        .map(|s| match s {
            BlockShape::Finite(n) => Block::Finite(matrix(rng, *n, 4)),
            BlockShape::Toeplitz => {
                Block::Toeplitz(ToeplitzBlock::new(LaurentPoly::zero(), patch(rng, 4)))
            }
        })
        .collect();
    BlockOperator::new(blocks).expect("generated within limits")
}

/// Arbitrary (not necessarily Fredholm) operator with the given signature;
/// symbol coefficients in `[-2, 2]` on degrees `[-2, 2]`.
pub fn any_operator<R: Rng>(rng: &mut R, sig: &[BlockShape]) -> BlockOperator {
    let blocks = sig
        .iter()
        .map(|s| match s {
            BlockShape::Finite(n) => Block::Finite(matrix(rng, *n, 2)),
            BlockShape::Toeplitz => {
                let mut terms = Vec::new();
                for k in -2..=2 {
                    if rng.gen_bool(0.5) {
                        terms.push((k, gauss(rng, 2)));
                    }
                }
                let f = LaurentPoly::from_pairs(terms);
                Block::Toeplitz(ToeplitzBlock::new(f, patch(rng, 2)))
            }
        })
        .collect();
    BlockOperator::new(blocks).expect("generated within limits")
}

/// Random graph on `n ≤ max_vertices` vertices named `v00, v01, …` with
/// between 1 and `max_components` components.
pub fn param_complex<R: Rng>(
    rng: &mut R,
    max_vertices: usize,
    max_components: usize,
) -> ParamComplex {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let k = rng.gen_range(1..=max_components.clamp(1, n));
    let names: Vec<String> = (0..n).map(|i| format!("v{i:02}")).collect();
    // vertex i belongs to planted group label[i]; each group is a random tree
    let mut label: Vec<usize> = (0..n)
        .map(|i| if i < k { i } else { rng.gen_range(0..k) })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
        label.swap(i, j);
    }
    let mut edges = Vec::new();
    for g in 0..k {
        let members: Vec<usize> = (0..n).filter(|&i| label[i] == g).collect();
        for (pos, &v) in members.iter().enumerate().skip(1) {
            let u = members[rng.gen_range(0..pos)];
            edges.push((names[order[u]].clone(), names[order[v]].clone()));
        }
        // a few extra edges inside the group
        for _ in 0..rng.gen_range(0..=members.len() / 2) {
            let (a, b) = (
                members[rng.gen_range(0..members.len())],
                members[rng.gen_range(0..members.len())],
            );
            if a != b {
                edges.push((names[order[a]].clone(), names[order[b]].clone()));
            }
        }
    }
    ParamComplex::new(names, edges).expect("generated complex is valid")
}

fn small_value<R: Rng>(rng: &mut R) -> GaussianRational {
    // a small pool, so values coincide across exceptional entries and tails
    const POOL: [(i64, i64); 7] = [(0, 0), (1, 0), (-1, 0), (2, 0), (0, 1), (1, -1), (1, 2)];
    let (re, im) = POOL[rng.gen_range(0..POOL.len())];
    GaussianRational::from_parts(re, if re % 2 == 0 { 1 } else { 2 }, im, 1)
}

pub fn normal_diagonal<R: Rng>(rng: &mut R) -> NormalDiagonalOperator {
    let exceptional = (0..rng.gen_range(0..=4))
        .map(|_| (small_value(rng), rng.gen_range(1..=3)))
        .collect();
    let tails: Vec<GaussianRational> = (0..rng.gen_range(1..=3))
        .map(|_| small_value(rng))
        .collect();
    NormalDiagonalOperator::new(exceptional, tails)
        .expect("nonempty tails, positive multiplicities")
}

pub fn normal_family<R: Rng>(rng: &mut R, c: &ParamComplex) -> SpectralFamily {
    let members = c
        .vertices()
        .map(|v| (v.clone(), SpectralInput::Normal(normal_diagonal(rng))))
        .collect();
    SpectralFamily::new(c.clone(), members).expect("covers every vertex")
}
