//! Fredholm predicate, index, nullity/defect and a certified stability margin.
//!
//! On the representable class a Toeplitz block `T_f + P` is Fredholm exactly
//! when `f` has no zero on the unit circle, with index `−winding(f)`; the
//! patch is compact and does not move the index. Finite blocks are always
//! Fredholm of index 0. An identically-zero symbol leaves a finite-rank
//! operator on an infinite-dimensional space, which has infinite defect.

use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactcore::{linear_data, winding, ExactMatrix, GaussianRational, LaurentPoly};
use crate::opmodel::{Block, BlockOperator, ToeplitzBlock};

pub const DEFAULT_FS_SIZE: usize = 256;
pub const DEFAULT_FS_TOL: f64 = 1e-8;
/// Number of grid doublings before the margin search gives up.
pub const MARGIN_DEPTH_CAP: u32 = 20;
const MARGIN_START_GRID: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VerdictReason {
    Ok,
    SymbolVanishesOnCircle,
    ZeroSymbolInfiniteDefect,
}

impl VerdictReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictReason::Ok => "ok",
            VerdictReason::SymbolVanishesOnCircle => "symbol_vanishes_on_circle",
            VerdictReason::ZeroSymbolInfiniteDefect => "zero_symbol_infinite_defect",
        }
    }
}

impl fmt::Display for VerdictReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FredholmVerdict {
    pub is_fredholm: bool,
    /// Present iff `is_fredholm`.
    pub index: Option<i64>,
    pub reason: VerdictReason,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FredholmError {
    #[error("operator is not Fredholm ({0})")]
    NotFredholm(VerdictReason),
    #[error("symbol minimum on the circle could not be certified after {depth} grid doublings")]
    MarginNotFound { depth: u32 },
}

impl FredholmError {
    pub fn code(&self) -> &'static str {
        match self {
            FredholmError::NotFredholm(_) => "NotFredholm",
            FredholmError::MarginNotFound { .. } => "MarginNotFound",
        }
    }
}

/// Contribution of one Toeplitz block: `Ok(index)` or the obstruction.
pub(crate) fn toeplitz_block_index(t: &ToeplitzBlock) -> Result<i64, VerdictReason> {
    if t.symbol().is_zero() {
        return Err(VerdictReason::ZeroSymbolInfiniteDefect);
    }
    winding(t.symbol())
        .map(|w| -w)
        .map_err(|_| VerdictReason::SymbolVanishesOnCircle)
}

pub fn is_fredholm(a: &BlockOperator) -> FredholmVerdict {
    let mut total = 0;
    for t in a.toeplitz_blocks() {
        match toeplitz_block_index(t) {
            Ok(i) => total += i,
            Err(reason) => {
                return FredholmVerdict {
                    is_fredholm: false,
                    index: None,
                    reason,
                }
            }
        }
    }
    FredholmVerdict {
        is_fredholm: true,
        index: Some(total),
        reason: VerdictReason::Ok,
    }
}

pub fn index(a: &BlockOperator) -> Result<i64, FredholmError> {
    let v = is_fredholm(a);
    v.index.ok_or(FredholmError::NotFredholm(v.reason))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiniteSection {
    pub size: usize,
    pub tol: f64,
}

impl Default for FiniteSection {
    fn default() -> Self {
        Self {
            size: DEFAULT_FS_SIZE,
            tol: DEFAULT_FS_TOL,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NullityMode {
    /// Exact where the class allows it; patched Toeplitz blocks fall back to
    /// the given finite section.
    Exact(FiniteSection),
    FiniteSection(FiniteSection),
}

impl Default for NullityMode {
    fn default() -> Self {
        NullityMode::Exact(FiniteSection::default())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NullityDefect {
    pub nullity: u64,
    pub defect: u64,
    pub certified: bool,
}

/// Nullity and defect.
///
/// Exact mode uses rank–nullity on finite blocks and, for unpatched Toeplitz
/// blocks with nonvanishing symbol, the fact that one of kernel and cokernel
/// is trivial, so `n = max(ind, 0)` and `d = max(−ind, 0)`. Any patched
/// Toeplitz block makes the whole answer a finite-section estimate, flagged
/// `certified = false`.
pub fn nullity_defect(
    a: &BlockOperator,
    mode: NullityMode,
) -> Result<NullityDefect, FredholmError> {
    let verdict = is_fredholm(a);
    if !verdict.is_fredholm {
        return Err(FredholmError::NotFredholm(verdict.reason));
    }
    let (fs, force_fs) = match mode {
        NullityMode::Exact(fs) => (fs, false),
        NullityMode::FiniteSection(fs) => (fs, true),
    };
    let mut out = NullityDefect {
        nullity: 0,
        defect: 0,
        certified: true,
    };
    for b in a.blocks() {
        match b {
            Block::Finite(m) => {
                let k = linear_data(m).kernel_basis.len() as u64;
                out.nullity += k;
                out.defect += k;
            }
            Block::Toeplitz(t) if !force_fs && !t.is_patched() => {
                let ind = toeplitz_block_index(t).expect("checked Fredholm");
                out.nullity += ind.max(0) as u64;
                out.defect += (-ind).max(0) as u64;
            }
            Block::Toeplitz(t) => {
                let (n, d) = finite_section_toeplitz(t, fs);
                out.nullity += n;
                out.defect += d;
                out.certified = false;
            }
        }
    }
    Ok(out)
}

fn to_dense_f64(m: &ExactMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)].to_complex64())
}

/// Numerical nullity of the restriction of `t` to the first `n` coordinates,
/// taken on the `(n + hi)×n` truncation that holds the full image of those
/// coordinates.
fn truncated_nullity(t: &ToeplitzBlock, fs: FiniteSection) -> u64 {
    let n = fs.size.max(t.patch_size() + 1);
    let rows = n + t.symbol().hi().max(0) as usize;
    let dense = to_dense_f64(&t.dense(rows, n));
    let sv = dense.singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let thresh = fs.tol * smax.max(1.0);
    let rank = sv.iter().filter(|&&s| s > thresh).count();
    (n - rank) as u64
}

/// Finite-section estimates of (nullity, defect) for one Toeplitz block; the
/// defect is the nullity of the adjoint.
pub fn finite_section_toeplitz(t: &ToeplitzBlock, fs: FiniteSection) -> (u64, u64) {
    let adj = ToeplitzBlock::new(
        t.symbol().adjoint(),
        t.patch().map(ExactMatrix::conj_transpose),
    );
    (truncated_nullity(t, fs), truncated_nullity(&adj, fs))
}

/// Certified lower bound on `min_{|z|=1} |f(z)|`, or `None` if the grid
/// search fails within the depth cap.
///
/// Grid points are the exact rational circle points
/// `±((1−s²) + 2si)/(1+s²)` for `s` on a uniform grid of `[−1, 1]`; every
/// circle point is within arc length `2/N` of one of them, and `t ↦ f(e^{it})`
/// is `Σ|n·a_n|`-Lipschitz, so `min_grid |f| − 2L/N` is a lower bound.
pub fn symbol_min_lower_bound(f: &LaurentPoly, depth_cap: u32) -> Option<BigRational> {
    if f.is_zero() {
        return None;
    }
    let lip = f.lipschitz_bound();
    if lip.is_zero() {
        let c = f.coeff(0);
        return Some(sqrt_lower(&c.norm_sqr())).filter(|m| m.is_positive());
    }
    let lip_f = lip.to_f64().unwrap_or(f64::INFINITY);
    let mut n = MARGIN_START_GRID;
    for _ in 0..=depth_cap {
        let slack_f = 2.0 * lip_f / n as f64;
        let float_min = circle_grid(n)
            .map(|(s, sign)| f.eval_f64(circle_point_f64(&s, sign)).norm())
            .fold(f64::INFINITY, f64::min);
        if float_min > slack_f * (1.0 + 1e-9) + 1e-12 {
            let exact_min_sqr = circle_grid(n)
                .map(|(s, sign)| {
                    let z = circle_point(&s, sign);
                    f.eval(&z).expect("circle point is nonzero").norm_sqr()
                })
                .min()
                .expect("grid is nonempty");
            let slack = &lip * BigRational::new(BigInt::from(2), BigInt::from(n));
            let m = sqrt_lower(&exact_min_sqr) - slack;
            if m.is_positive() {
                return Some(m);
            }
        }
        n *= 2;
    }
    None
}

fn circle_grid(n: u64) -> impl Iterator<Item = (BigRational, bool)> {
    (0..=n).flat_map(move |j| {
        let s = BigRational::new(BigInt::from(2 * j as i64 - n as i64), BigInt::from(n));
        [(s.clone(), false), (s, true)]
    })
}

fn circle_point(s: &BigRational, negate: bool) -> GaussianRational {
    let one = BigRational::one();
    let d = &one + s * s;
    let re = (&one - s * s) / &d;
    let im = (s + s) / &d;
    let z = GaussianRational::new(re, im);
    if negate {
        -z
    } else {
        z
    }
}

fn circle_point_f64(s: &BigRational, negate: bool) -> Complex64 {
    let s = s.to_f64().unwrap_or(0.0);
    let d = 1.0 + s * s;
    let z = Complex64::new((1.0 - s * s) / d, 2.0 * s / d);
    if negate {
        -z
    } else {
        z
    }
}

/// Largest dyadic `r = k/2^40` (or exact root when representable) with `r² ≤ q`.
pub fn sqrt_lower(q: &BigRational) -> BigRational {
    if !q.is_positive() {
        return BigRational::zero();
    }
    let bits = 40u32;
    let denom = BigInt::one() << bits;
    let approx = q.to_f64().unwrap_or(0.0).sqrt();
    let mut k = BigInt::from((approx * (1u64 << bits) as f64).floor() as i128);
    let mut r = BigRational::new(k.clone(), denom.clone());
    while &r * &r > *q {
        k -= 1;
        if k <= BigInt::zero() {
            return BigRational::zero();
        }
        r = BigRational::new(k.clone(), denom.clone());
    }
    r
}

/// Certified radius `m` such that any same-signature operator within
/// `norm_bound` distance `< m` of `a` is Fredholm with the same index.
/// `Ok(None)` means no Toeplitz block constrains the radius.
pub fn fredholm_margin(a: &BlockOperator) -> Result<Option<BigRational>, FredholmError> {
    fredholm_margin_with_depth(a, MARGIN_DEPTH_CAP)
}

pub fn fredholm_margin_with_depth(
    a: &BlockOperator,
    depth_cap: u32,
) -> Result<Option<BigRational>, FredholmError> {
    let verdict = is_fredholm(a);
    if !verdict.is_fredholm {
        return Err(FredholmError::NotFredholm(verdict.reason));
    }
    let mut best: Option<BigRational> = None;
    for t in a.toeplitz_blocks() {
        let m = symbol_min_lower_bound(t.symbol(), depth_cap)
            .ok_or(FredholmError::MarginNotFound { depth: depth_cap })?;
        best = Some(match best {
            Some(b) if b < m => b,
            _ => m,
        });
    }
    Ok(best)
}
