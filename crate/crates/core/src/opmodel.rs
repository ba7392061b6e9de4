//! The representable operator class.
//!
//! A [`BlockOperator`] is a block-diagonal direct sum of finite square
//! matrices and Toeplitz operators on ℓ²(ℕ) with a finite-rank patch in the
//! top-left corner. Toeplitz matrices follow `(T_f)_{j,k} = a_{j−k}`, so
//! `T_z` is the right shift (index −1) and `T_{z⁻¹}` the left shift (index 1).

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactcore::{ExactMatrix, GaussianRational, LaurentPoly};

/// Default cap on patch size accepted from documents.
pub const DEFAULT_PATCH_LIMIT: usize = 64;
/// Default cap on symbol band width accepted from documents.
pub const DEFAULT_BAND_LIMIT: u64 = 64;
/// Cap on the correction window produced by composition.
pub const DEFAULT_WINDOW_CAP: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error("operator has no blocks")]
    Empty,
    #[error("finite block {block} is {rows}x{cols}, not square")]
    NotSquare {
        block: usize,
        rows: usize,
        cols: usize,
    },
    #[error("{what} of size {size} exceeds limit {limit}")]
    LimitExceeded {
        what: &'static str,
        size: u64,
        limit: u64,
    },
    #[error("block signatures differ: {left} vs {right}")]
    ShapeMismatch { left: String, right: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Limits {
    pub patch: usize,
    pub band: u64,
    pub window: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            patch: DEFAULT_PATCH_LIMIT,
            band: DEFAULT_BAND_LIMIT,
            window: DEFAULT_WINDOW_CAP,
        }
    }
}

/// `T_symbol + patch` on one copy of ℓ²(ℕ).
///
/// The patch is stored trimmed to the smallest square window holding all of
/// its nonzero entries, and dropped when zero, so equal operators compare
/// equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ToeplitzBlock {
    symbol: LaurentPoly,
    patch: Option<ExactMatrix>,
}

impl ToeplitzBlock {
    pub fn new(symbol: LaurentPoly, patch: Option<ExactMatrix>) -> Self {
        let patch = patch.and_then(trim_patch);
        Self { symbol, patch }
    }

    pub fn pure(symbol: LaurentPoly) -> Self {
        Self {
            symbol,
            patch: None,
        }
    }

    pub fn symbol(&self) -> &LaurentPoly {
        &self.symbol
    }

    pub fn patch(&self) -> Option<&ExactMatrix> {
        self.patch.as_ref()
    }

    pub fn patch_size(&self) -> usize {
        self.patch.as_ref().map_or(0, ExactMatrix::rows)
    }

    pub fn is_patched(&self) -> bool {
        self.patch.is_some()
    }

    /// Entry `(j, k)` of the infinite matrix.
    pub fn entry(&self, j: usize, k: usize) -> GaussianRational {
        let base = self.symbol.coeff(j as i64 - k as i64);
        match &self.patch {
            Some(p) => &base + &p.get_or_zero(j, k),
            None => base,
        }
    }

    /// Dense `rows×cols` truncation.
    pub fn dense(&self, rows: usize, cols: usize) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(rows, cols);
        for j in 0..rows {
            for k in 0..cols {
                m[(j, k)] = self.entry(j, k);
            }
        }
        m
    }
}

/// Drops trailing all-zero rows/columns, keeping the matrix square.
fn trim_patch(p: ExactMatrix) -> Option<ExactMatrix> {
    let n = p.rows().max(p.cols());
    let mut keep = 0;
    for i in 0..p.rows() {
        for j in 0..p.cols() {
            if !p[(i, j)].is_zero() {
                keep = keep.max(i + 1).max(j + 1);
            }
        }
    }
    if keep == 0 {
        return None;
    }
    if keep == n && p.is_square() {
        return Some(p);
    }
    Some(p.resized(keep))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Block {
    Finite(ExactMatrix),
    Toeplitz(ToeplitzBlock),
}

/// Kind and size of a block; operators combine only with equal signatures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockShape {
    Finite(usize),
    Toeplitz,
}

impl std::fmt::Display for BlockShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BlockShape::Finite(n) => write!(f, "finite({n})"),
            BlockShape::Toeplitz => write!(f, "toeplitz"),
        }
    }
}

impl Block {
    pub fn shape(&self) -> BlockShape {
        match self {
            Block::Finite(m) => BlockShape::Finite(m.rows()),
            Block::Toeplitz(_) => BlockShape::Toeplitz,
        }
    }

    pub fn identity_like(shape: BlockShape) -> Block {
        match shape {
            BlockShape::Finite(n) => Block::Finite(ExactMatrix::identity(n)),
            BlockShape::Toeplitz => Block::Toeplitz(ToeplitzBlock::pure(LaurentPoly::one())),
        }
    }

    pub fn zero_like(shape: BlockShape) -> Block {
        match shape {
            BlockShape::Finite(n) => Block::Finite(ExactMatrix::zeros(n, n)),
            BlockShape::Toeplitz => Block::Toeplitz(ToeplitzBlock::pure(LaurentPoly::zero())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockOperator {
    blocks: Vec<Block>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineKind {
    Add,
    Compose,
}

impl BlockOperator {
    /// Checks the structural invariants and the default size limits.
    pub fn new(blocks: Vec<Block>) -> Result<Self, OperatorError> {
        Self::with_limits(blocks, &Limits::default())
    }

    pub fn with_limits(blocks: Vec<Block>, limits: &Limits) -> Result<Self, OperatorError> {
        if blocks.is_empty() {
            return Err(OperatorError::Empty);
        }
        for (i, b) in blocks.iter().enumerate() {
            match b {
                Block::Finite(m) if !m.is_square() => {
                    return Err(OperatorError::NotSquare {
                        block: i,
                        rows: m.rows(),
                        cols: m.cols(),
                    });
                }
                Block::Toeplitz(t) => {
                    if t.patch_size() > limits.patch {
                        return Err(OperatorError::LimitExceeded {
                            what: "patch",
                            size: t.patch_size() as u64,
                            limit: limits.patch as u64,
                        });
                    }
                    if t.symbol.band_width() > limits.band {
                        return Err(OperatorError::LimitExceeded {
                            what: "symbol band width",
                            size: t.symbol.band_width(),
                            limit: limits.band,
                        });
                    }
                }
                _ => {}
            }
        }
        Ok(Self { blocks })
    }

    /// Internal constructor for results of closed operations.
    fn from_blocks_unchecked(blocks: Vec<Block>) -> Self {
        debug_assert!(!blocks.is_empty());
        Self { blocks }
    }

    pub fn single_toeplitz(symbol: LaurentPoly) -> Self {
        Self::from_blocks_unchecked(vec![Block::Toeplitz(ToeplitzBlock::pure(symbol))])
    }

    pub fn single_finite(m: ExactMatrix) -> Result<Self, OperatorError> {
        Self::new(vec![Block::Finite(m)])
    }

    pub fn identity(signature: &[BlockShape]) -> Self {
        Self::from_blocks_unchecked(signature.iter().map(|&s| Block::identity_like(s)).collect())
    }

    pub fn zero(signature: &[BlockShape]) -> Self {
        Self::from_blocks_unchecked(signature.iter().map(|&s| Block::zero_like(s)).collect())
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn signature(&self) -> Vec<BlockShape> {
        self.blocks.iter().map(Block::shape).collect()
    }

    pub fn toeplitz_blocks(&self) -> impl Iterator<Item = &ToeplitzBlock> {
        self.blocks.iter().filter_map(|b| match b {
            Block::Toeplitz(t) => Some(t),
            Block::Finite(_) => None,
        })
    }

    /// Compact iff every Toeplitz symbol is identically zero.
    pub fn is_compact(&self) -> bool {
        self.toeplitz_blocks().all(|t| t.symbol.is_zero())
    }

    /// Direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut blocks = self.blocks.clone();
        blocks.extend(other.blocks.iter().cloned());
        Self::from_blocks_unchecked(blocks)
    }

    pub fn map_blocks(&self, f: impl FnMut(&Block) -> Block) -> Self {
        Self::from_blocks_unchecked(self.blocks.iter().map(f).collect())
    }
}

fn signature_string(sig: &[BlockShape]) -> String {
    let parts: Vec<String> = sig.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

fn check_signatures(a: &BlockOperator, b: &BlockOperator) -> Result<(), OperatorError> {
    let (sa, sb) = (a.signature(), b.signature());
    if sa != sb {
        return Err(OperatorError::ShapeMismatch {
            left: signature_string(&sa),
            right: signature_string(&sb),
        });
    }
    Ok(())
}

fn add_patches(p: Option<&ExactMatrix>, q: Option<&ExactMatrix>) -> Option<ExactMatrix> {
    match (p, q) {
        (None, None) => None,
        (Some(p), None) => Some(p.clone()),
        (None, Some(q)) => Some(q.clone()),
        (Some(p), Some(q)) => {
            let n = p.rows().max(q.rows());
            Some(p.resized(n).add(&q.resized(n)).expect("same size"))
        }
    }
}

/// `(T_f + P)(T_g + Q)` as `T_{fg}` plus a corner correction.
///
/// The correction `T_fT_g − T_{fg}` lives in rows `< max(hi_f, 0)` and columns
/// `< max(−lo_g, 0)`; the patch terms `PT_g`, `T_fQ`, `PQ` stay within
/// `max(p, q)` plus those same margins. The window `W` below covers all of it,
/// and each correction entry is computed exactly from the finitely many
/// nonzero inner-sum terms.
fn compose_toeplitz(
    a: &ToeplitzBlock,
    b: &ToeplitzBlock,
    window_cap: usize,
) -> Result<ToeplitzBlock, OperatorError> {
    let fg = a.symbol.mul(&b.symbol);
    let p = a.patch_size().max(b.patch_size());
    let margin_rows = a.symbol.hi().max(0) as usize;
    let margin_cols = (-b.symbol.lo()).max(0) as usize;
    let w = p + margin_rows + margin_cols;
    if w > window_cap {
        return Err(OperatorError::LimitExceeded {
            what: "composition window",
            size: w as u64,
            limit: window_cap as u64,
        });
    }
    if w == 0 {
        return Ok(ToeplitzBlock::pure(fg));
    }
    // B column k < w is supported on rows l < w + max(hi_g, 0) (or the patch).
    let inner = w + b.symbol.hi().max(0) as usize + b.patch_size();
    let da = a.dense(w, inner);
    let db = b.dense(inner, w);
    let prod = da.mul(&db).expect("inner dimensions agree");
    let mut corr = ExactMatrix::zeros(w, w);
    for j in 0..w {
        for k in 0..w {
            corr[(j, k)] = &prod[(j, k)] - &fg.coeff(j as i64 - k as i64);
        }
    }
    Ok(ToeplitzBlock::new(fg, Some(corr)))
}

/// Blockwise sum or product. Both operands must have the same signature.
pub fn combine(
    a: &BlockOperator,
    b: &BlockOperator,
    kind: CombineKind,
) -> Result<BlockOperator, OperatorError> {
    combine_with_cap(a, b, kind, DEFAULT_WINDOW_CAP)
}

pub fn combine_with_cap(
    a: &BlockOperator,
    b: &BlockOperator,
    kind: CombineKind,
    window_cap: usize,
) -> Result<BlockOperator, OperatorError> {
    check_signatures(a, b)?;
    let blocks = a
        .blocks
        .iter()
        .zip(&b.blocks)
        .map(|(x, y)| match (x, y, kind) {
            (Block::Finite(m), Block::Finite(n), CombineKind::Add) => {
                Ok(Block::Finite(m.add(n).expect("same shape")))
            }
            (Block::Finite(m), Block::Finite(n), CombineKind::Compose) => {
                Ok(Block::Finite(m.mul(n).expect("same shape")))
            }
            (Block::Toeplitz(s), Block::Toeplitz(t), CombineKind::Add) => Ok(Block::Toeplitz(
                ToeplitzBlock::new(s.symbol.add(&t.symbol), add_patches(s.patch(), t.patch())),
            )),
            (Block::Toeplitz(s), Block::Toeplitz(t), CombineKind::Compose) => {
                compose_toeplitz(s, t, window_cap).map(Block::Toeplitz)
            }
            _ => unreachable!("signatures checked"),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BlockOperator::from_blocks_unchecked(blocks))
}

pub fn add(a: &BlockOperator, b: &BlockOperator) -> Result<BlockOperator, OperatorError> {
    combine(a, b, CombineKind::Add)
}

pub fn compose(a: &BlockOperator, b: &BlockOperator) -> Result<BlockOperator, OperatorError> {
    combine(a, b, CombineKind::Compose)
}

pub fn sub(a: &BlockOperator, b: &BlockOperator) -> Result<BlockOperator, OperatorError> {
    add(a, &scale(b, &-GaussianRational::one()))
}

/// `a^n` by repeated composition; `a^0` is the identity.
pub fn power(a: &BlockOperator, n: usize) -> Result<BlockOperator, OperatorError> {
    let mut acc = BlockOperator::identity(&a.signature());
    for _ in 0..n {
        acc = compose(&acc, a)?;
    }
    Ok(acc)
}

pub fn adjoint(a: &BlockOperator) -> BlockOperator {
    a.map_blocks(|b| match b {
        Block::Finite(m) => Block::Finite(m.conj_transpose()),
        Block::Toeplitz(t) => Block::Toeplitz(ToeplitzBlock::new(
            t.symbol.adjoint(),
            t.patch.as_ref().map(ExactMatrix::conj_transpose),
        )),
    })
}

/// `α·a − λ·I`.
pub fn affine(
    a: &BlockOperator,
    alpha: &GaussianRational,
    lambda: &GaussianRational,
) -> BlockOperator {
    a.map_blocks(|b| match b {
        Block::Finite(m) => Block::Finite(m.scale(alpha).shift(lambda)),
        Block::Toeplitz(t) => {
            let shifted = t
                .symbol
                .scale(alpha)
                .sub(&LaurentPoly::constant(lambda.clone()));
            Block::Toeplitz(ToeplitzBlock::new(
                shifted,
                t.patch.as_ref().map(|p| p.scale(alpha)),
            ))
        }
    })
}

pub fn scale(a: &BlockOperator, alpha: &GaussianRational) -> BlockOperator {
    affine(a, alpha, &GaussianRational::zero())
}

/// Upper bound on the operator norm: the maximum over blocks of Σ|a_n| plus
/// Σ|patch entries| for Toeplitz blocks, Σ|entries| for finite blocks, with
/// `|·|` bounded by `|re|+|im|`.
pub fn norm_bound(a: &BlockOperator) -> BigRational {
    a.blocks
        .iter()
        .map(|b| match b {
            Block::Finite(m) => m.entry_abs_sum(),
            Block::Toeplitz(t) => {
                let p = t
                    .patch
                    .as_ref()
                    .map_or_else(BigRational::zero, ExactMatrix::entry_abs_sum);
                t.symbol.coeff_abs_sum() + p
            }
        })
        .max()
        .unwrap_or_else(BigRational::zero)
}

/// Makes two operators signature-compatible by padding with identity blocks:
/// returns `(a ⊕ I_b, I_a ⊕ b)` where `I_x` is the identity on `x`'s blocks.
pub fn pad_with_identity_blocks(
    a: &BlockOperator,
    b: &BlockOperator,
) -> (BlockOperator, BlockOperator) {
    let ia = BlockOperator::identity(&a.signature());
    let ib = BlockOperator::identity(&b.signature());
    (a.direct_sum(&ib), ia.direct_sum(b))
}

impl BlockOperator {
    /// Dense truncation of the whole operator, each Toeplitz block cut to
    /// `n×n` (finite blocks kept whole).
    pub fn dense_truncation(&self, n: usize) -> ExactMatrix {
        let sizes: Vec<usize> = self
            .blocks
            .iter()
            .map(|b| match b {
                Block::Finite(m) => m.rows(),
                Block::Toeplitz(_) => n,
            })
            .collect();
        let total = sizes.iter().sum();
        let mut out = ExactMatrix::zeros(total, total);
        let mut off = 0;
        for (b, &s) in self.blocks.iter().zip(&sizes) {
            let d = match b {
                Block::Finite(m) => m.clone(),
                Block::Toeplitz(t) => t.dense(s, s),
            };
            for i in 0..s {
                for j in 0..s {
                    out[(off + i, off + j)] = d[(i, j)].clone();
                }
            }
            off += s;
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.signature())
    }
}

pub fn one_half() -> GaussianRational {
    GaussianRational::from_ratio(1, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shift_right() -> BlockOperator {
        BlockOperator::single_toeplitz(LaurentPoly::z_pow(1))
    }

    fn shift_left() -> BlockOperator {
        BlockOperator::single_toeplitz(LaurentPoly::z_pow(-1))
    }

    #[test]
    fn right_shift_entries() {
        let t = ToeplitzBlock::pure(LaurentPoly::z_pow(1));
        assert!(t.entry(1, 0).is_one());
        assert!(t.entry(0, 1).is_zero());
    }

    #[test]
    fn compose_shifts() {
        // T_{z^-1} T_z = I (left after right); T_z T_{z^-1} = I - e0 e0*
        let lr = compose(&shift_left(), &shift_right()).unwrap();
        assert!(lr.is_identity());
        let rl = compose(&shift_right(), &shift_left()).unwrap();
        let Block::Toeplitz(t) = &rl.blocks()[0] else {
            panic!()
        };
        assert_eq!(t.symbol(), &LaurentPoly::one());
        assert_eq!(t.patch().unwrap(), &ExactMatrix::from_int_rows(&[&[-1]]));
        assert!(t.entry(0, 0).is_zero());
        let zz = compose(&shift_right(), &shift_right()).unwrap();
        assert_eq!(zz, BlockOperator::single_toeplitz(LaurentPoly::z_pow(2)));
    }

    #[test]
    fn additive_identity_and_shape_guard() {
        let a = shift_right();
        assert_eq!(add(&a, &BlockOperator::zero(&a.signature())).unwrap(), a);
        let f = BlockOperator::single_finite(ExactMatrix::identity(1)).unwrap();
        assert!(matches!(
            add(&a, &f),
            Err(OperatorError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn adjoint_and_affine() {
        assert_eq!(adjoint(&shift_right()), shift_left());
        let a = affine(
            &shift_right(),
            &GaussianRational::one(),
            &GaussianRational::from_int(2),
        );
        assert_eq!(
            a,
            BlockOperator::single_toeplitz(LaurentPoly::from_int_pairs(&[(1, 1), (0, -2)]))
        );
        let id = BlockOperator::identity(&[BlockShape::Finite(2), BlockShape::Toeplitz]);
        let z = affine(&id, &GaussianRational::one(), &GaussianRational::one());
        assert_eq!(z, BlockOperator::zero(&id.signature()));
    }

    #[test]
    fn norm_bounds() {
        assert!(norm_bound(&BlockOperator::zero(&[BlockShape::Toeplitz])).is_zero());
        assert!(norm_bound(&shift_right()).is_one());
        let f = BlockOperator::single_toeplitz(LaurentPoly::from_int_pairs(&[(1, 1), (-1, 1)]));
        assert_eq!(norm_bound(&f), BigRational::from_integer(2.into()));
    }

    #[test]
    fn limits() {
        let big = ExactMatrix::identity(100);
        let r = BlockOperator::new(vec![Block::Toeplitz(ToeplitzBlock::new(
            LaurentPoly::one(),
            Some(big),
        ))]);
        assert!(matches!(
            r,
            Err(OperatorError::LimitExceeded { what: "patch", .. })
        ));
        let wide = LaurentPoly::from_int_pairs(&[(0, 1), (65, 1)]);
        let r = BlockOperator::new(vec![Block::Toeplitz(ToeplitzBlock::pure(wide))]);
        assert!(matches!(r, Err(OperatorError::LimitExceeded { .. })));
        assert_eq!(BlockOperator::new(vec![]), Err(OperatorError::Empty));
    }

    #[test]
    fn patch_trimming() {
        let p = ExactMatrix::from_int_rows(&[&[0, 0, 0], &[0, 2, 0], &[0, 0, 0]]);
        let t = ToeplitzBlock::new(LaurentPoly::zero(), Some(p));
        assert_eq!(t.patch_size(), 2);
        let t = ToeplitzBlock::new(LaurentPoly::zero(), Some(ExactMatrix::zeros(4, 4)));
        assert!(!t.is_patched());
    }

    #[test]
    fn window_cap_is_an_error() {
        let wide =
            BlockOperator::single_toeplitz(LaurentPoly::from_int_pairs(&[(40, 1), (-40, 1)]));
        let r = combine_with_cap(&wide, &wide, CombineKind::Compose, 64);
        assert!(matches!(
            r,
            Err(OperatorError::LimitExceeded {
                what: "composition window",
                ..
            })
        ));
    }

    #[test]
    fn padding_aligns_signatures() {
        let f = BlockOperator::single_finite(ExactMatrix::identity(1)).unwrap();
        let (a, b) = pad_with_identity_blocks(&f, &shift_right());
        assert_eq!(a.signature(), b.signature());
    }
}
