//! Oracles shared by the integration tests. Each one is computed by a route
//! that does not go through the code it checks.
#![allow(dead_code)]

use fredkit::exactcore::{ExactMatrix, GaussianRational, LaurentPoly, Poly};
use std::collections::BTreeMap;

use fredkit::family::{connected_components, OperatorFamily, ParamComplex};
use fredkit::opmodel::{self, Block, BlockOperator, BlockShape};
use fredkit::random::{self, SeededRng};
use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;

/// Argument-principle winding of `θ ↦ f(e^{iθ})` from `samples` points; also
/// returns the smallest sampled modulus.
pub fn numeric_winding(f: &LaurentPoly, samples: usize) -> (i64, f64) {
    let mut total = 0.0;
    let mut min_abs = f64::INFINITY;
    let at = |k: usize| {
        f.eval_f64(Complex64::from_polar(
            1.0,
            std::f64::consts::TAU * k as f64 / samples as f64,
        ))
    };
    let mut prev = at(0);
    for k in 1..=samples {
        let cur = at(k % samples);
        min_abs = min_abs.min(cur.norm());
        total += (cur / prev).arg();
        prev = cur;
    }
    ((total / std::f64::consts::TAU).round() as i64, min_abs)
}

/// Sampled minimum of `|f|` on the circle.
pub fn sampled_min_abs(f: &LaurentPoly, samples: usize) -> f64 {
    numeric_winding(f, samples).1
}

/// Roots from the eigenvalues of the companion matrix.
pub fn companion_roots(p: &Poly) -> Vec<Complex64> {
    let c: Vec<Complex64> = p
        .coeffs()
        .iter()
        .map(GaussianRational::to_complex64)
        .collect();
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let m = DMatrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -c[i] / lead
        } else if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::zero()
        }
    });
    m.schur()
        .eigenvalues()
        .expect("complex Schur form")
        .iter()
        .cloned()
        .collect()
}

/// Rank by plain Gaussian elimination, first nonzero pivot.
pub fn naive_rank(m: &ExactMatrix) -> usize {
    let mut rows = m.to_rows();
    let cols = m.cols();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][c].inv().expect("nonzero pivot");
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let factor = &rows[r][c] * &inv;
                let pivot_row = rows[rank].clone();
                for (x, p) in rows[r].iter_mut().zip(&pivot_row).skip(c) {
                    *x = &*x - &(&factor * p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// The `n×n` top-left truncation of a single-block operator.
pub fn dense_block(b: &Block, rows: usize, cols: usize) -> ExactMatrix {
    match b {
        Block::Finite(m) => m.clone(),
        Block::Toeplitz(t) => t.dense(rows, cols),
    }
}

/// `(AB)` truncated to `n×n`, computed as `A[n×(n+pad)]·B[(n+pad)×n]`.
/// Exact whenever `pad` covers the lower bandwidth of `A` and its patch.
pub fn truncated_product(a: &Block, b: &Block, n: usize, pad: usize) -> ExactMatrix {
    match (a, b) {
        (Block::Finite(x), Block::Finite(y)) => x.mul(y).expect("same size"),
        _ => dense_block(a, n, n + pad)
            .mul(&dense_block(b, n + pad, n))
            .expect("conformable"),
    }
}

pub fn single_block(op: &BlockOperator) -> &Block {
    &op.blocks()[0]
}

/// Per component a base Fredholm operator; every vertex adds its own compact
/// perturbation, so the index is constant on components.
pub fn fredholm_family(
    r: &mut SeededRng,
    c: &ParamComplex,
    sig: &[BlockShape],
) -> (OperatorFamily, Vec<i64>) {
    let mut ops = BTreeMap::new();
    let mut values = Vec::new();
    for members in connected_components(c) {
        let (base, i) = random::fredholm_operator(r, sig, 3);
        values.push(i);
        for v in members {
            ops.insert(
                v,
                opmodel::add(&base, &random::compact_operator(r, sig)).unwrap(),
            );
        }
    }
    (
        OperatorFamily::new(c.clone(), ops, BTreeMap::new()).unwrap(),
        values,
    )
}
