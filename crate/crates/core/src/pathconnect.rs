//! Sampled paths of operators and their certification.
//!
//! A path is a strictly increasing grid on `[0, 1]` with one operator per
//! grid point. Only the samples are certified; nothing is claimed between
//! them.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::bfredholm::{bclassify, BStatus};
use crate::exactcore::{winding, ExactMatrix, GaussianRational, LaurentPoly};
use crate::fredholm::{index, is_fredholm};
use crate::opmodel::{self, Block, BlockOperator, OperatorError, ToeplitzBlock};

pub const DEFAULT_GRID: usize = 16;
pub const LAMBDA_DEPTH_CAP: u32 = 32;
const SNAP_BITS_START: u32 = 20;
const SNAP_BITS_CAP: u32 = 60;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("malformed path: {0}")]
    Malformed(String),
    #[error("endpoint signatures differ; pad with identity blocks first")]
    SignatureMismatch,
    #[error("endpoint {which} is not certified B-Fredholm")]
    EndpointNotCertified { which: &'static str },
    #[error("endpoint indices differ: {s} vs {t}")]
    IndexMismatch { s: i64, t: i64 },
    #[error("no Fredholm-preserving path in this class: {0}")]
    FredholmPathUnsupported(String),
    #[error("sample at t = {t} could not be certified")]
    CertificationFailed { t: String },
    #[error("snapped symbol at t = {t} failed exact re-certification")]
    SnapCertificationFailed { t: String },
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

impl PathError {
    pub fn code(&self) -> &'static str {
        match self {
            PathError::Malformed(_) => "MalformedDocument",
            PathError::SignatureMismatch => "SignatureMismatch",
            PathError::EndpointNotCertified { .. } => "EndpointNotCertified",
            PathError::IndexMismatch { .. } => "IndexMismatch",
            PathError::FredholmPathUnsupported(_) => "FredholmPathUnsupported",
            PathError::CertificationFailed { .. } => "CertificationFailed",
            PathError::SnapCertificationFailed { .. } => "SnapCertificationFailed",
            PathError::Operator(_) => "OperatorError",
        }
    }
}

fn ratio(n: usize, d: usize) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn fmt_t(t: &BigRational) -> String {
    GaussianRational::format_rational(t)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorPath {
    grid: Vec<BigRational>,
    samples: Vec<BlockOperator>,
}

impl OperatorPath {
    pub fn new(grid: Vec<BigRational>, samples: Vec<BlockOperator>) -> Result<Self, PathError> {
        if grid.len() != samples.len() {
            return Err(PathError::Malformed(format!(
                "{} grid points for {} samples",
                grid.len(),
                samples.len()
            )));
        }
        if grid.len() < 2 || !grid[0].is_zero() || !grid[grid.len() - 1].is_one() {
            return Err(PathError::Malformed(
                "grid must run from 0 to 1 with at least two points".into(),
            ));
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(PathError::Malformed(
                "grid must be strictly increasing".into(),
            ));
        }
        let sig = samples[0].signature();
        if samples.iter().any(|s| s.signature() != sig) {
            return Err(PathError::Malformed(
                "samples do not share one block signature".into(),
            ));
        }
        Ok(Self { grid, samples })
    }

    /// Uniform grid `k/n`, `k = 0..=n`, for `n + 1` samples.
    pub fn uniform(samples: Vec<BlockOperator>) -> Result<Self, PathError> {
        let n = samples.len().saturating_sub(1).max(1);
        Self::new((0..samples.len()).map(|k| ratio(k, n)).collect(), samples)
    }

    pub fn grid(&self) -> &[BigRational] {
        &self.grid
    }

    pub fn samples(&self) -> &[BlockOperator] {
        &self.samples
    }

    pub fn start(&self) -> &BlockOperator {
        &self.samples[0]
    }

    pub fn end(&self) -> &BlockOperator {
        self.samples.last().expect("nonempty")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SampleStatus {
    Fredholm,
    BFredholm,
    Indeterminate,
}

impl SampleStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SampleStatus::Fredholm => "fredholm",
            SampleStatus::BFredholm => "bfredholm",
            SampleStatus::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileEntry {
    pub t: BigRational,
    pub status: SampleStatus,
    pub index: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathReport {
    pub all_bfredholm: bool,
    pub all_fredholm: bool,
    pub index_profile: Vec<ProfileEntry>,
}

impl PathReport {
    pub fn indices(&self) -> Vec<Option<i64>> {
        self.index_profile.iter().map(|e| e.index).collect()
    }

    pub fn is_index_constant(&self) -> bool {
        self.index_profile
            .windows(2)
            .all(|w| w[0].index == w[1].index)
    }
}

pub fn classify_sample(op: &BlockOperator) -> (SampleStatus, Option<i64>) {
    let v = is_fredholm(op);
    if v.is_fredholm {
        return (SampleStatus::Fredholm, v.index);
    }
    let b = bclassify(op);
    match b.status {
        BStatus::BFredholm => (SampleStatus::BFredholm, b.index),
        _ => (SampleStatus::Indeterminate, None),
    }
}

pub fn verify_path(p: &OperatorPath) -> PathReport {
    let index_profile: Vec<ProfileEntry> = p
        .grid
        .iter()
        .zip(&p.samples)
        .map(|(t, op)| {
            let (status, index) = classify_sample(op);
            ProfileEntry {
                t: t.clone(),
                status,
                index,
            }
        })
        .collect();
    PathReport {
        all_bfredholm: index_profile
            .iter()
            .all(|e| e.status != SampleStatus::Indeterminate),
        all_fredholm: index_profile
            .iter()
            .all(|e| e.status == SampleStatus::Fredholm),
        index_profile,
    }
}

/// `[1] ⊕ T_{t·z⁻¹}`.
pub fn tbp_sample(t: &BigRational) -> BlockOperator {
    BlockOperator::new(vec![
        Block::Finite(ExactMatrix::identity(1)),
        Block::Toeplitz(ToeplitzBlock::pure(LaurentPoly::monomial(
            GaussianRational::real(t.clone()),
            -1,
        ))),
    ])
    .expect("two small blocks")
}

/// `[1] ⊕ 0`: B-Fredholm of index 0, not Fredholm.
pub fn tbp_start() -> BlockOperator {
    tbp_sample(&BigRational::zero())
}

/// `[1] ⊕ T_{z⁻¹}`: Fredholm of index 1.
pub fn tbp_end() -> BlockOperator {
    tbp_sample(&BigRational::one())
}

/// The path `t ↦ [1] ⊕ T_{t·z⁻¹}` on the uniform grid with `k` steps.
pub fn tbp_demo(k: usize) -> (OperatorPath, PathReport) {
    let k = k.max(1);
    let grid: Vec<BigRational> = (0..=k).map(|j| ratio(j, k)).collect();
    let samples = grid.iter().map(tbp_sample).collect();
    let path = OperatorPath::new(grid, samples).expect("uniform grid");
    let report = verify_path(&path);
    (path, report)
}

/// `(n, index(Tⁿ), index((T*)ⁿ))` for `T = [1] ⊕ T_{z⁻¹}` and `n = 1..=n_max`,
/// with powers formed by exact composition.
pub fn power_identities(n_max: usize) -> Result<Vec<(usize, i64, i64)>, PathError> {
    let t = tbp_end();
    let ts = opmodel::adjoint(&t);
    (1..=n_max)
        .map(|n| {
            let a = index(&opmodel::power(&t, n)?)
                .map_err(|_| PathError::CertificationFailed { t: n.to_string() })?;
            let b = index(&opmodel::power(&ts, n)?)
                .map_err(|_| PathError::CertificationFailed { t: n.to_string() })?;
            Ok((n, a, b))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConnectMode {
    FredholmPreserving,
    BFredholm,
}

impl ConnectMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConnectMode::FredholmPreserving => "fredholm_preserving",
            ConnectMode::BFredholm => "bfredholm",
        }
    }
}

fn real(t: &BigRational) -> GaussianRational {
    GaussianRational::real(t.clone())
}

fn lerp_matrix(a: &ExactMatrix, b: &ExactMatrix, t: &BigRational) -> ExactMatrix {
    let one_minus = BigRational::one() - t;
    a.scale(&real(&one_minus))
        .add(&b.scale(&real(t)))
        .expect("same size")
}

fn scaled_patch(p: Option<&ExactMatrix>, t: &BigRational) -> Option<ExactMatrix> {
    p.map(|m| m.scale(&real(t)))
}

/// Combines the blocks of two same-signature operators pairwise.
fn zip_blocks(
    a: &BlockOperator,
    b: &BlockOperator,
    mut f: impl FnMut(usize, &Block, &Block) -> Block,
) -> BlockOperator {
    let blocks = a
        .blocks()
        .iter()
        .zip(b.blocks())
        .enumerate()
        .map(|(i, (x, y))| f(i, x, y))
        .collect();
    BlockOperator::new(blocks).expect("blocks stay within limits")
}

fn finite_pair<'a>(x: &'a Block, y: &'a Block) -> Option<(&'a ExactMatrix, &'a ExactMatrix)> {
    match (x, y) {
        (Block::Finite(m), Block::Finite(n)) => Some((m, n)),
        _ => None,
    }
}

fn toeplitz_pair<'a>(x: &'a Block, y: &'a Block) -> (&'a ToeplitzBlock, &'a ToeplitzBlock) {
    match (x, y) {
        (Block::Toeplitz(s), Block::Toeplitz(t)) => (s, t),
        _ => unreachable!("signatures checked"),
    }
}

/// Samples `t = j/k` for `j = 1..=k` (the segment start is the previous end).
fn segment(k: usize, mut f: impl FnMut(&BigRational) -> BlockOperator) -> Vec<BlockOperator> {
    (1..=k).map(|j| f(&ratio(j, k))).collect()
}

fn through_zero_middle(s: &BlockOperator, t: &BlockOperator, k: usize) -> Vec<BlockOperator> {
    let mut out = Vec::new();
    // patches of s fade out
    out.extend(segment(k, |u| {
        zip_blocks(s, t, |_, x, y| match finite_pair(x, y) {
            Some((m, _)) => Block::Finite(m.clone()),
            None => {
                let (a, _) = toeplitz_pair(x, y);
                Block::Toeplitz(ToeplitzBlock::new(
                    a.symbol().clone(),
                    scaled_patch(a.patch(), &(BigRational::one() - u)),
                ))
            }
        })
    }));
    // symbols of s fade to zero; finite blocks move linearly
    out.extend(segment(k, |u| {
        zip_blocks(s, t, |_, x, y| match finite_pair(x, y) {
            Some((m, n)) => Block::Finite(lerp_matrix(m, n, u)),
            None => {
                let (a, _) = toeplitz_pair(x, y);
                Block::Toeplitz(ToeplitzBlock::pure(
                    a.symbol().scale(&real(&(BigRational::one() - u))),
                ))
            }
        })
    }));
    // symbols of t fade up
    out.extend(segment(k, |u| {
        zip_blocks(s, t, |_, x, y| match finite_pair(x, y) {
            Some((_, n)) => Block::Finite(n.clone()),
            None => {
                let (_, b) = toeplitz_pair(x, y);
                Block::Toeplitz(ToeplitzBlock::pure(b.symbol().scale(&real(u))))
            }
        })
    }));
    // patches of t fade in
    out.extend(segment(k, |u| {
        zip_blocks(s, t, |_, x, y| match finite_pair(x, y) {
            Some((_, n)) => Block::Finite(n.clone()),
            None => {
                let (_, b) = toeplitz_pair(x, y);
                Block::Toeplitz(ToeplitzBlock::new(
                    b.symbol().clone(),
                    scaled_patch(b.patch(), u),
                ))
            }
        })
    }));
    out
}

fn radial_middle(
    s: &BlockOperator,
    t: &BlockOperator,
    k: usize,
) -> Result<Vec<BlockOperator>, PathError> {
    let mut chains: Vec<Option<Vec<LaurentPoly>>> = Vec::new();
    for (x, y) in s.blocks().iter().zip(t.blocks()) {
        chains.push(match finite_pair(x, y) {
            Some(_) => None,
            None => {
                let (a, b) = toeplitz_pair(x, y);
                Some(root_radial_homotopy(a.symbol(), b.symbol(), k)?)
            }
        });
    }
    let mut out = Vec::new();
    out.extend(segment(k, |u| {
        zip_blocks(s, t, |_, x, y| match finite_pair(x, y) {
            Some((m, _)) => Block::Finite(m.clone()),
            None => {
                let (a, _) = toeplitz_pair(x, y);
                Block::Toeplitz(ToeplitzBlock::new(
                    a.symbol().clone(),
                    scaled_patch(a.patch(), &(BigRational::one() - u)),
                ))
            }
        })
    }));
    for j in 1..=k {
        let u = ratio(j, k);
        out.push(zip_blocks(s, t, |i, x, y| match finite_pair(x, y) {
            Some((m, n)) => Block::Finite(lerp_matrix(m, n, &u)),
            None => Block::Toeplitz(ToeplitzBlock::pure(
                chains[i].as_ref().expect("toeplitz chain")[j].clone(),
            )),
        }));
    }
    out.extend(segment(k, |u| {
        zip_blocks(s, t, |_, x, y| match finite_pair(x, y) {
            Some((_, n)) => Block::Finite(n.clone()),
            None => {
                let (_, b) = toeplitz_pair(x, y);
                Block::Toeplitz(ToeplitzBlock::new(
                    b.symbol().clone(),
                    scaled_patch(b.patch(), u),
                ))
            }
        })
    }));
    Ok(out)
}

fn shifted(a: &BlockOperator, lambda: &GaussianRational) -> BlockOperator {
    opmodel::affine(a, &GaussianRational::one(), lambda)
}

fn assemble(samples: Vec<BlockOperator>) -> OperatorPath {
    OperatorPath::uniform(samples).expect("same signature throughout")
}

/// First grid point whose sample fails `ok`, if any.
fn first_failure(
    path: &OperatorPath,
    ok: impl Fn(SampleStatus, Option<i64>) -> bool,
) -> Option<BigRational> {
    let report = verify_path(path);
    report
        .index_profile
        .into_iter()
        .find(|e| !ok(e.status, e.index))
        .map(|e| e.t)
}

fn toeplitz_windings(a: &BlockOperator) -> Vec<i64> {
    a.toeplitz_blocks()
        .map(|t| winding(t.symbol()).expect("Fredholm block"))
        .collect()
}

/// A sampled path from `s` to `t`, `k` steps per segment.
///
/// `BFredholm` mode shifts both ends by a small `λ` (found by halving), fades
/// patches and symbols of `s` to zero, then fades up those of `t`; every
/// sample is certified B-Fredholm. `FredholmPreserving` mode requires both
/// ends Fredholm with equal per-block windings and uses
/// [`root_radial_homotopy`] per block; every sample is certified Fredholm of
/// the common index.
pub fn connect_equal_index(
    s: &BlockOperator,
    t: &BlockOperator,
    k: usize,
    mode: ConnectMode,
) -> Result<OperatorPath, PathError> {
    let k = k.max(1);
    if s.signature() != t.signature() {
        return Err(PathError::SignatureMismatch);
    }
    let vs = bclassify(s);
    let vt = bclassify(t);
    let is = vs
        .index
        .ok_or(PathError::EndpointNotCertified { which: "S" })?;
    let it = vt
        .index
        .ok_or(PathError::EndpointNotCertified { which: "T" })?;
    if is != it {
        return Err(PathError::IndexMismatch { s: is, t: it });
    }
    match mode {
        ConnectMode::FredholmPreserving => {
            if !is_fredholm(s).is_fredholm || !is_fredholm(t).is_fredholm {
                return Err(PathError::FredholmPathUnsupported(
                    "an endpoint is not Fredholm".into(),
                ));
            }
            let (ws, wt) = (toeplitz_windings(s), toeplitz_windings(t));
            if ws != wt {
                return Err(PathError::FredholmPathUnsupported(format!(
                    "per-block windings differ: {ws:?} vs {wt:?}"
                )));
            }
            let mut samples = vec![s.clone()];
            samples.extend(radial_middle(s, t, k)?);
            *samples.last_mut().expect("nonempty") = t.clone();
            let path = assemble(samples);
            if let Some(bad) =
                first_failure(&path, |st, i| st == SampleStatus::Fredholm && i == Some(is))
            {
                return Err(PathError::CertificationFailed { t: fmt_t(&bad) });
            }
            Ok(path)
        }
        ConnectMode::BFredholm => {
            let mut last_bad = BigRational::zero();
            for depth in 1..=LAMBDA_DEPTH_CAP {
                let lambda = real(&BigRational::new(BigInt::one(), BigInt::one() << depth));
                let (s1, t1) = (shifted(s, &lambda), shifted(t, &lambda));
                if index(&s1).ok() != Some(is) || index(&t1).ok() != Some(is) {
                    continue;
                }
                let mut samples = vec![s.clone()];
                samples.extend(segment(k, |u| shifted(s, &(&lambda * &real(u)))));
                samples.extend(through_zero_middle(&s1, &t1, k));
                samples.extend(segment(k, |u| {
                    shifted(t, &(&lambda * &real(&(BigRational::one() - u))))
                }));
                let path = assemble(samples);
                match first_failure(&path, |st, _| st != SampleStatus::Indeterminate) {
                    None => return Ok(path),
                    Some(bad) => last_bad = bad,
                }
            }
            Err(PathError::CertificationFailed {
                t: fmt_t(&last_bad),
            })
        }
    }
}

fn poly_eval(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::zero(), |acc, &a| acc * z + a)
}

/// All roots of a polynomial with ascending coefficients and nonzero leading
/// term, by Aberth–Ehrlich iteration.
pub fn numeric_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let deriv: Vec<Complex64> = (1..=n).map(|i| monic[i] * i as f64).collect();
    let radius = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            Complex64::from_polar(
                radius * 0.5 + 0.1,
                0.4 + std::f64::consts::TAU * k as f64 / n as f64,
            )
        })
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let p = poly_eval(&monic, z[i]);
            let dp = poly_eval(&deriv, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::one() - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Factored form `C·z^lo·Π(z − r)·Π(1 − z/R)` with `|r| < 1 < |R|`.
struct Factored {
    lo: i64,
    constant: Complex64,
    inner: Vec<Complex64>,
    outer: Vec<Complex64>,
    winding: i64,
}

fn factor(f: &LaurentPoly) -> Option<Factored> {
    let w = winding(f).ok()?;
    let (p, lo) = f.normalized_poly();
    let coeffs: Vec<Complex64> = p
        .coeffs()
        .iter()
        .map(GaussianRational::to_complex64)
        .collect();
    let roots = numeric_roots(&coeffs);
    let (inner, outer): (Vec<Complex64>, Vec<Complex64>) =
        roots.into_iter().partition(|r| r.norm() < 1.0);
    if lo + inner.len() as i64 != w {
        return None;
    }
    let lead = *coeffs.last().expect("nonzero symbol");
    let constant = outer.iter().fold(lead, |acc, r| acc * (-r));
    Some(Factored {
        lo,
        constant,
        inner,
        outer,
        winding: w,
    })
}

fn mul_linear(c: &mut Vec<Complex64>, a: Complex64, b: Complex64) {
    // c ← c·(a + b z)
    c.push(Complex64::zero());
    for i in (0..c.len()).rev() {
        let prev = if i > 0 { c[i - 1] } else { Complex64::zero() };
        c[i] = c[i] * a + prev * b;
    }
}

/// Float coefficients (from degree `lo`) of the sample at radial parameter
/// `s ∈ [0, 1]`; `s = 1` is the canonical `C·z^winding`.
fn radial_sample(f: &Factored, s: f64) -> (i64, Vec<Complex64>) {
    let mut c = vec![f.constant];
    for r in &f.inner {
        mul_linear(&mut c, -(r * (1.0 - s)), Complex64::one());
    }
    for big_r in &f.outer {
        mul_linear(&mut c, Complex64::one(), -((1.0 - s) / big_r));
    }
    (f.lo, c)
}

fn snap_laurent(lo: i64, coeffs: &[Complex64], bits: u32) -> LaurentPoly {
    LaurentPoly::from_pairs(
        coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (lo + i as i64, GaussianRational::snap(*c, bits))),
    )
}

/// A chain of `k + 1` circle-nonvanishing symbols of constant winding from
/// `f` to `g`: inner roots shrink to 0 and outer roots recede to ∞, the
/// constant moves along a log-linear arc, then the same for `g` in reverse.
/// Interior samples are snapped to dyadic Gaussian rationals and re-certified
/// exactly; endpoints are `f` and `g` themselves.
pub fn root_radial_homotopy(
    f: &LaurentPoly,
    g: &LaurentPoly,
    k: usize,
) -> Result<Vec<LaurentPoly>, PathError> {
    let k = k.max(1);
    if f == g {
        return Ok(vec![f.clone(); k + 1]);
    }
    let t0 = || PathError::SnapCertificationFailed { t: "0".into() };
    let ff = factor(f).ok_or_else(t0)?;
    let gf = factor(g).ok_or_else(|| PathError::SnapCertificationFailed { t: "1".into() })?;
    if ff.winding != gf.winding {
        return Err(PathError::FredholmPathUnsupported(format!(
            "windings differ: {} vs {}",
            ff.winding, gf.winding
        )));
    }
    let w = ff.winding;
    let (lf, lg) = (ff.constant.ln(), gf.constant.ln());
    let mut out = vec![f.clone()];
    for j in 1..k {
        let u = j as f64 / k as f64;
        let (lo, coeffs) = if u <= 1.0 / 3.0 {
            radial_sample(&ff, 3.0 * u)
        } else if u < 2.0 / 3.0 {
            let v = 3.0 * u - 1.0;
            (w, vec![(lf * (1.0 - v) + lg * v).exp()])
        } else {
            radial_sample(&gf, 3.0 - 3.0 * u)
        };
        let mut bits = SNAP_BITS_START;
        let sample = loop {
            let h = snap_laurent(lo, &coeffs, bits);
            if winding(&h).ok() == Some(w) {
                break h;
            }
            bits += 8;
            if bits > SNAP_BITS_CAP {
                return Err(PathError::SnapCertificationFailed {
                    t: fmt_t(&ratio(j, k)),
                });
            }
        };
        out.push(sample);
    }
    out.push(g.clone());
    Ok(out)
}

/// Checks an externally supplied chain: every symbol circle-nonvanishing
/// with winding `w`.
pub fn chain_winding_constant(chain: &[LaurentPoly], w: i64) -> bool {
    chain.iter().all(|h| winding(h).ok() == Some(w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(pairs: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_int_pairs(pairs)
    }

    #[test]
    fn tbp_profiles() {
        let (path, report) = tbp_demo(10);
        let idx: Vec<i64> = report.indices().into_iter().map(Option::unwrap).collect();
        assert_eq!(idx, [0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]);
        assert_eq!(report.index_profile[0].status, SampleStatus::BFredholm);
        assert!(report.index_profile[1..]
            .iter()
            .all(|e| e.status == SampleStatus::Fredholm));
        assert!(report.all_bfredholm && !report.all_fredholm);
        assert_eq!(path.start(), &tbp_start());
        assert_eq!(path.end(), &tbp_end());
        let (_, r1) = tbp_demo(1);
        assert_eq!(r1.indices(), vec![Some(0), Some(1)]);
    }

    #[test]
    fn verify_path_guards() {
        let id = BlockOperator::single_toeplitz(LaurentPoly::one());
        let r = verify_path(&OperatorPath::uniform(vec![id.clone(); 4]).unwrap());
        assert!(r.all_fredholm && r.is_index_constant());
        let bad = BlockOperator::single_toeplitz(lp(&[(1, 1), (0, -1)]));
        let r = verify_path(&OperatorPath::uniform(vec![id.clone(), bad, id]).unwrap());
        assert_eq!(r.index_profile[1].status, SampleStatus::Indeterminate);
        assert!(!r.all_bfredholm);
    }

    #[test]
    fn path_invariants() {
        let id = BlockOperator::single_toeplitz(LaurentPoly::one());
        assert!(OperatorPath::new(vec![BigRational::zero()], vec![id.clone()]).is_err());
        let g = vec![BigRational::zero(), BigRational::one(), BigRational::one()];
        assert!(OperatorPath::new(g, vec![id.clone(); 3]).is_err());
    }

    #[test]
    fn powers() {
        for (n, a, b) in power_identities(5).unwrap() {
            assert_eq!((a, b), (n as i64, -(n as i64)));
        }
    }

    #[test]
    fn numeric_roots_of_known_polynomial() {
        // (z − 2)(z + 1/2)(z − i)
        let p = crate::exactcore::Poly::linear_root(&GaussianRational::from_int(2));
        let p = &p * &crate::exactcore::Poly::linear_root(&GaussianRational::from_ratio(-1, 2));
        let p = &p * &crate::exactcore::Poly::linear_root(&GaussianRational::i());
        let c: Vec<Complex64> = p
            .coeffs()
            .iter()
            .map(GaussianRational::to_complex64)
            .collect();
        let mut r = numeric_roots(&c);
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((r[0] - Complex64::new(-0.5, 0.0)).norm() < 1e-10);
        assert!((r[1] - Complex64::new(0.0, 1.0)).norm() < 1e-10);
        assert!((r[2] - Complex64::new(2.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn radial_homotopy_examples() {
        let f = lp(&[(1, 2), (0, -1)]);
        assert_eq!(root_radial_homotopy(&f, &f, 5).unwrap(), vec![f.clone(); 6]);
        let chain = root_radial_homotopy(&f, &LaurentPoly::z_pow(1), 8).unwrap();
        assert_eq!(chain.len(), 9);
        assert_eq!(chain[0], f);
        assert_eq!(chain[8], LaurentPoly::z_pow(1));
        assert!(chain_winding_constant(&chain, 1));
        let chain = root_radial_homotopy(&lp(&[(1, 1), (0, -2)]), &lp(&[(0, 3)]), 8).unwrap();
        assert!(chain_winding_constant(&chain, 0));
        assert!(matches!(
            root_radial_homotopy(&f, &lp(&[(0, 3)]), 4),
            Err(PathError::FredholmPathUnsupported(_))
        ));
    }

    #[test]
    fn connect_examples() {
        let id2 = BlockOperator::new(vec![
            Block::Finite(ExactMatrix::identity(1)),
            Block::Toeplitz(ToeplitzBlock::pure(LaurentPoly::one())),
        ])
        .unwrap();
        let p = connect_equal_index(&tbp_start(), &id2, 4, ConnectMode::BFredholm).unwrap();
        assert_eq!(p.start(), &tbp_start());
        assert_eq!(p.end(), &id2);
        assert!(verify_path(&p).all_bfredholm);

        let tz = BlockOperator::single_toeplitz(LaurentPoly::z_pow(1));
        let tzp = BlockOperator::new(vec![Block::Toeplitz(ToeplitzBlock::new(
            LaurentPoly::z_pow(1),
            Some(ExactMatrix::from_int_rows(&[&[1, 2], &[0, 3]])),
        ))])
        .unwrap();
        let p = connect_equal_index(&tz, &tzp, 4, ConnectMode::FredholmPreserving).unwrap();
        let r = verify_path(&p);
        assert!(r.all_fredholm && r.indices().iter().all(|i| *i == Some(-1)));

        let two = |a: i64, b: i64| {
            BlockOperator::new(vec![
                Block::Toeplitz(ToeplitzBlock::pure(LaurentPoly::z_pow(a))),
                Block::Toeplitz(ToeplitzBlock::pure(LaurentPoly::z_pow(b))),
            ])
            .unwrap()
        };
        let (s, t) = (two(-1, 1), two(0, 0));
        assert!(matches!(
            connect_equal_index(&s, &t, 4, ConnectMode::FredholmPreserving),
            Err(PathError::FredholmPathUnsupported(_))
        ));
        let p = connect_equal_index(&s, &t, 4, ConnectMode::BFredholm).unwrap();
        let r = verify_path(&p);
        assert!(r.all_bfredholm);
        assert_eq!(
            (
                r.index_profile[0].index,
                r.index_profile.last().unwrap().index
            ),
            (Some(0), Some(0))
        );

        assert!(matches!(
            connect_equal_index(
                &tz,
                &BlockOperator::single_toeplitz(LaurentPoly::one()),
                4,
                ConnectMode::BFredholm
            ),
            Err(PathError::IndexMismatch { .. })
        ));
    }

    #[test]
    fn fredholm_preserving_with_nontrivial_roots() {
        let s = BlockOperator::single_toeplitz(lp(&[(2, 1), (1, -5), (0, 2)])); // (z−2)(z−1/2)·…
        let t = BlockOperator::single_toeplitz(lp(&[(1, 3), (0, 1)]));
        let p = connect_equal_index(&s, &t, 6, ConnectMode::FredholmPreserving).unwrap();
        let r = verify_path(&p);
        assert!(r.all_fredholm && r.is_index_constant());
    }
}
