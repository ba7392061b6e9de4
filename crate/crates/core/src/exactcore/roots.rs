//! Exact root location relative to the unit circle.

use num_traits::{One, Zero};

use super::{ExactError, GaussianRational, Poly};

/// Largest `k` tried for the Möbius parameter `ε = c/2^k` on degenerate
/// Schur–Cohn steps.
const MOBIUS_DEPTH: u32 = 24;

/// Decides exactly whether `p` has a root on `|z| = 1`.
///
/// Circle roots are common roots of `p` and its reciprocal conjugate, so the
/// search is restricted to `g = gcd(p, p*)`. The Cayley map `z = (w-i)/(w+i)`
/// sends the circle minus `z = 1` onto the real line, where a root of
/// `G = A + iB` (with `A`, `B` real) is a real root of `gcd(A, B)`, counted
/// with a Sturm sequence. The point `z = 1` is checked directly.
pub fn circle_roots_exist(p: &Poly) -> Result<bool, ExactError> {
    if p.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    let g = p.gcd(&p.reciprocal_conj());
    if g.degree() == Some(0) {
        return Ok(false);
    }
    if g.eval(&GaussianRational::one()).is_zero() {
        return Ok(true);
    }
    let cayley = cayley_transform(&g);
    let (a, b) = cayley.split_real_imag();
    let real_part = if b.is_zero() { a } else { a.gcd(&b) };
    Ok(real_part.count_distinct_real_roots() > 0)
}

/// `(w+i)^m · g((w-i)/(w+i))` for `m = deg g`.
fn cayley_transform(g: &Poly) -> Poly {
    let m = g.degree().unwrap_or(0);
    let i = GaussianRational::i();
    let minus = Poly::linear_root(&i);
    let plus = Poly::linear_root(&-&i);
    let mut acc = Poly::zero();
    for (k, c) in g.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = &minus.pow(k) * &plus.pow(m - k);
        acc = &acc + &term.scale(c);
    }
    acc
}

/// Number of roots of `p` in the open unit disk, with multiplicity.
///
/// Schur–Cohn reduction: with `n = deg p`, `a₀ = p(0)`, `aₙ` the leading
/// coefficient, `Tp = conj(a₀)·p − aₙ·p*` has degree below `n` and, by
/// Rouché on the circle (where `|p*| = |p|`), the same number of inner roots
/// as `p` when `|a₀| > |aₙ|`, and `n` minus that number when `|a₀| < |aₙ|`.
/// When `|a₀| = |aₙ|`: if `Tp ≡ 0` the polynomial is self-inversive and its
/// roots pair off across the circle (`n/2` inside); otherwise a disk
/// automorphism `z ↦ (z+ε)/(1+ε̄z)` with rational `ε` moves off the
/// degenerate locus without changing the inner count.
pub fn schur_cohn_count(p: &Poly) -> Result<usize, ExactError> {
    if p.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    if circle_roots_exist(p)? {
        return Err(ExactError::RootOnCircle);
    }
    schur_cohn_unchecked(p.clone())
}

fn schur_cohn_unchecked(mut p: Poly) -> Result<usize, ExactError> {
    // inner(p_original) = offset + sign * inner(p_current)
    let mut offset: i64 = 0;
    let mut sign: i64 = 1;
    loop {
        let n = p.degree().expect("nonzero");
        if n == 0 {
            return Ok(offset as usize);
        }
        let a0 = p.coeff(0);
        let an = p.leading().cloned().expect("nonzero");
        let lhs = a0.norm_sqr();
        let rhs = an.norm_sqr();
        if lhs == rhs {
            let t = schur_transform(&p, &a0, &an);
            if t.is_zero() {
                debug_assert!(
                    n.is_multiple_of(2),
                    "self-inversive without circle roots has even degree"
                );
                return Ok((offset + sign * (n as i64 / 2)) as usize);
            }
            p = mobius_escape(&p)?;
            continue;
        }
        let t = schur_transform(&p, &a0, &an);
        if lhs < rhs {
            offset += sign * n as i64;
            sign = -sign;
        }
        p = t.monic();
    }
}

fn schur_transform(p: &Poly, a0: &GaussianRational, an: &GaussianRational) -> Poly {
    &p.scale(&a0.conj()) - &p.reciprocal_conj().scale(an)
}

/// Finds `ε` with `|q(0)| ≠ |lead q|` for `q = (1+ε̄z)^n p((z+ε)/(1+ε̄z))`.
fn mobius_escape(p: &Poly) -> Result<Poly, ExactError> {
    let directions = [
        GaussianRational::from_int(1),
        GaussianRational::i(),
        GaussianRational::from_parts(1, 1, 1, 1),
        GaussianRational::from_parts(-1, 1, 2, 1),
        GaussianRational::from_parts(3, 1, -1, 1),
    ];
    for k in 1..=MOBIUS_DEPTH {
        let scale = GaussianRational::from_ratio(1, 1i64 << k.min(62));
        for d in &directions {
            let eps = &(d * &scale) * &GaussianRational::from_ratio(1, 4);
            let q = mobius(p, &eps);
            let n = match q.degree() {
                Some(n) => n,
                None => continue,
            };
            if n == 0 {
                return Ok(q);
            }
            let l = q.leading().expect("nonzero");
            if q.coeff(0).norm_sqr() != l.norm_sqr() {
                return Ok(q);
            }
        }
    }
    Err(ExactError::DegenerateSchurCohn)
}

/// Pullback of `p` along the disk automorphism `z ↦ (z+ε)/(1+ε̄z)`, cleared of
/// denominators. Requires `|ε| < 1`.
fn mobius(p: &Poly, eps: &GaussianRational) -> Poly {
    let n = p.degree().unwrap_or(0);
    let num = Poly::from_coeffs(vec![eps.clone(), GaussianRational::one()]);
    let den = Poly::from_coeffs(vec![GaussianRational::one(), eps.conj()]);
    let mut acc = Poly::zero();
    for (k, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = &num.pow(k) * &den.pow(n - k);
        acc = &acc + &term.scale(c);
    }
    acc
}
