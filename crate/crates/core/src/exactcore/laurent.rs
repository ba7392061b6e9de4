//! Laurent polynomials: symbols of banded Toeplitz operators.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{circle_roots_exist, schur_cohn_count, ExactError, GaussianRational, Poly};

/// Finite-support map from degree to coefficient. Zero coefficients are never
/// stored, so the empty map is the zero symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, GaussianRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    /// `c·z^k`.
    pub fn monomial(c: GaussianRational, k: i64) -> Self {
        let mut s = Self::zero();
        s.set(k, c);
        s
    }

    /// `z^k`.
    pub fn z_pow(k: i64) -> Self {
        Self::monomial(GaussianRational::one(), k)
    }

    pub fn from_pairs<I: IntoIterator<Item = (i64, GaussianRational)>>(pairs: I) -> Self {
        let mut s = Self::zero();
        for (k, c) in pairs {
            let cur = s.coeff(k);
            s.set(k, &cur + &c);
        }
        s
    }

    pub fn from_int_pairs(pairs: &[(i64, i64)]) -> Self {
        Self::from_pairs(
            pairs
                .iter()
                .map(|&(k, c)| (k, GaussianRational::from_int(c))),
        )
    }

    /// `z^shift · p(z)`.
    pub fn from_poly(p: &Poly, shift: i64) -> Self {
        Self::from_pairs(
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| (k as i64 + shift, c.clone())),
        )
    }

    pub fn set(&mut self, k: i64, c: GaussianRational) {
        if c.is_zero() {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, c);
        }
    }

    pub fn coeff(&self, k: i64) -> GaussianRational {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &GaussianRational)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree range `[lo, hi]`, `None` for the zero symbol.
    pub fn range(&self) -> Option<(i64, i64)> {
        let lo = *self.coeffs.keys().next()?;
        let hi = *self.coeffs.keys().next_back()?;
        Some((lo, hi))
    }

    pub fn lo(&self) -> i64 {
        self.range().map_or(0, |r| r.0)
    }

    pub fn hi(&self) -> i64 {
        self.range().map_or(0, |r| r.1)
    }

    /// `hi - lo`, zero for the zero symbol.
    pub fn band_width(&self) -> u64 {
        self.range().map_or(0, |(lo, hi)| (hi - lo) as u64)
    }

    /// `z^{-lo}·f` as an ordinary polynomial, together with `lo`.
    pub fn normalized_poly(&self) -> (Poly, i64) {
        let lo = self.lo();
        let width = self.band_width() as usize;
        let mut v = vec![GaussianRational::zero(); width + 1];
        for (k, c) in self.iter() {
            v[(k - lo) as usize] = c.clone();
        }
        (Poly::from_coeffs(v), lo)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.iter() {
            let cur = out.coeff(k);
            out.set(k, &cur + c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }

    pub fn scale(&self, a: &GaussianRational) -> Self {
        Self::from_pairs(self.iter().map(|(k, c)| (k, c * a)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (i, a) in self.iter() {
            for (j, b) in other.iter() {
                let cur = out.coeff(i + j);
                out.set(i + j, &cur + &(a * b));
            }
        }
        out
    }

    /// Symbol of the adjoint Toeplitz operator: `a_n ↦ conj(a_{-n})`.
    pub fn adjoint(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&k, c)| (-k, c.conj())).collect(),
        }
    }

    pub fn eval(&self, z: &GaussianRational) -> Option<GaussianRational> {
        let zinv = z.inv();
        let mut acc = GaussianRational::zero();
        for (k, c) in self.iter() {
            let p = if k >= 0 {
                z.pow(k as u32)
            } else {
                zinv.as_ref()?.pow((-k) as u32)
            };
            acc += &(c * &p);
        }
        Some(acc)
    }

    pub fn eval_f64(&self, z: Complex64) -> Complex64 {
        self.iter()
            .map(|(k, c)| c.to_complex64() * z.powi(k as i32))
            .sum()
    }

    /// Σ|a_n| with the |re|+|im| surrogate.
    pub fn coeff_abs_sum(&self) -> BigRational {
        self.coeffs
            .values()
            .map(GaussianRational::abs_bound)
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// Σ|n|·|a_n|, a Lipschitz constant for `t ↦ f(e^{it})`.
    pub fn lipschitz_bound(&self) -> BigRational {
        self.iter()
            .map(|(k, c)| c.abs_bound() * BigRational::from_integer(k.abs().into()))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// True if the symbol has a zero on the unit circle (the zero symbol counts).
    pub fn vanishes_on_circle(&self) -> bool {
        let (p, _) = self.normalized_poly();
        circle_roots_exist(&p).unwrap_or(true)
    }
}

/// Winding number of `t ↦ f(e^{it})` about the origin.
///
/// Equals the number of roots of `z^{-lo}·f` in the open disk, plus `lo`.
pub fn winding(f: &LaurentPoly) -> Result<i64, ExactError> {
    if f.is_zero() {
        return Err(ExactError::ZeroSymbol);
    }
    let (p, lo) = f.normalized_poly();
    if circle_roots_exist(&p)? {
        return Err(ExactError::SymbolVanishesOnCircle);
    }
    Ok(schur_cohn_count(&p)? as i64 + lo)
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .iter()
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})z"),
                _ => format!("({c})z^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}
