//! Dense exact matrices and subspace arithmetic over ℚ(i).

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{ExactError, GaussianRational};

pub type ExactVector = Vec<GaussianRational>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussianRational>,
}

/// Rank together with exact bases for the kernel and the column space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearData {
    pub rank: usize,
    pub kernel_basis: Vec<ExactVector>,
    pub image_basis: Vec<ExactVector>,
}

/// Dimensions of two subspaces, their sum and their intersection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubspaceDims {
    pub dim_a: usize,
    pub dim_b: usize,
    pub dim_sum: usize,
    pub dim_intersection: usize,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![GaussianRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = GaussianRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Result<Self, ExactError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(ExactError::DimensionMismatch {
                expected: c,
                found: 0,
            });
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| GaussianRational::from_int(x)).collect())
                .collect(),
        )
        .expect("rectangular integer rows")
    }

    /// Matrix whose columns are the given vectors (`len` rows).
    pub fn from_columns(cols: &[ExactVector], len: usize) -> Self {
        let mut m = Self::zeros(len, cols.len());
        for (j, v) in cols.iter().enumerate() {
            for (i, x) in v.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn diagonal(values: &[GaussianRational]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[GaussianRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> ExactVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<GaussianRational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = &GaussianRational> {
        self.data.iter()
    }

    pub fn get_or_zero(&self, i: usize, j: usize) -> GaussianRational {
        if i < self.rows && j < self.cols {
            self[(i, j)].clone()
        } else {
            GaussianRational::zero()
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, ExactError> {
        if self.cols != rhs.rows {
            return Err(ExactError::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        let t = a * b;
                        out[(i, j)] += &t;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[GaussianRational]) -> ExactVector {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(GaussianRational::zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, ExactError> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, ExactError> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(
        &self,
        rhs: &Self,
        f: impl Fn(&GaussianRational, &GaussianRational) -> GaussianRational,
    ) -> Result<Self, ExactError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(ExactError::DimensionMismatch {
                expected: self.rows,
                found: rhs.rows,
            });
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    /// `M - λI`. Panics on a non-square matrix.
    pub fn shift(&self, lambda: &GaussianRational) -> Self {
        assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..self.rows {
            m[(i, i)] -= lambda;
        }
        m
    }

    pub fn conj_transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn pow(&self, e: usize) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self).expect("square");
        }
        acc
    }

    /// Top-left `n×n` window, zero-padded if `n` exceeds the size.
    pub fn resized(&self, n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n.min(self.rows) {
            for j in 0..n.min(self.cols) {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Σ over entries of |re|+|im|; an upper bound on the Frobenius norm.
    pub fn entry_abs_sum(&self) -> BigRational {
        self.data
            .iter()
            .map(GaussianRational::abs_bound)
            .fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self[(i, j)].is_zero()))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)].is_zero()))
    }

    pub fn rank(&self) -> usize {
        row_echelon(self).pivots.len()
    }
}

impl std::ops::Index<(usize, usize)> for ExactMatrix {
    type Output = GaussianRational;
    fn index(&self, (i, j): (usize, usize)) -> &GaussianRational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut GaussianRational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

struct Echelon {
    /// Reduced row echelon form.
    reduced: ExactMatrix,
    /// Pivot column of each nonzero row, in order.
    pivots: Vec<usize>,
}

/// Gauss–Jordan reduction. Among candidate pivots the one of largest
/// `|re|+|im|` is chosen.
fn row_echelon(m: &ExactMatrix) -> Echelon {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let best = (r..rows)
            .filter(|&i| !a[(i, c)].is_zero())
            .max_by(|&i, &j| a[(i, c)].abs_bound().cmp(&a[(j, c)].abs_bound()));
        let Some(p) = best else { continue };
        if p != r {
            for j in 0..cols {
                a.data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = a[(r, c)].inv().expect("pivot is nonzero");
        for j in c..cols {
            a[(r, j)] = &a[(r, j)] * &inv;
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let factor = a[(i, c)].clone();
            for j in c..cols {
                let t = &factor * &a[(r, j)];
                a[(i, j)] -= &t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    Echelon { reduced: a, pivots }
}

/// Rank, kernel basis and column-space basis of `m`.
///
/// The kernel basis is read off the reduced echelon form (one vector per free
/// column); the image basis is the set of pivot columns of `m` itself.
pub fn linear_data(m: &ExactMatrix) -> LinearData {
    let ech = row_echelon(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !ech.pivots.contains(c)).collect();
    let kernel_basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![GaussianRational::zero(); m.cols];
            v[f] = GaussianRational::one();
            for (row, &pc) in ech.pivots.iter().enumerate() {
                v[pc] = -&ech.reduced[(row, f)];
            }
            v
        })
        .collect();
    let image_basis = ech.pivots.iter().map(|&c| m.column(c)).collect();
    LinearData {
        rank: ech.pivots.len(),
        kernel_basis,
        image_basis,
    }
}

/// The nonzero rows of the reduced row echelon form: a canonical basis of
/// the row space, with the same kernel as `m`.
pub fn reduced_row_basis(m: &ExactMatrix) -> ExactMatrix {
    let ech = row_echelon(m);
    let rows = (0..ech.pivots.len())
        .map(|i| ech.reduced.row(i).to_vec())
        .collect::<Vec<_>>();
    if rows.is_empty() {
        return ExactMatrix::zeros(0, m.cols);
    }
    ExactMatrix::from_rows(rows).expect("rows of one matrix")
}

/// Canonical basis of `span(vectors)` in `len`-dimensional space.
pub fn reduced_span(vectors: &[ExactVector], len: usize) -> Vec<ExactVector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let as_rows = ExactMatrix::from_rows(vectors.to_vec()).expect("equal lengths");
    debug_assert_eq!(as_rows.cols, len);
    reduced_row_basis(&as_rows).to_rows()
}

fn span_rank(vectors: &[&ExactVector], len: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let cols: Vec<ExactVector> = vectors.iter().map(|v| (*v).clone()).collect();
    ExactMatrix::from_columns(&cols, len).rank()
}

/// Dimensions of `span(a)`, `span(b)`, their sum and intersection. The
/// intersection dimension follows from `dim(A∩B) = dim A + dim B − dim(A+B)`.
pub fn subspace_dims(a: &[ExactVector], b: &[ExactVector]) -> Result<SubspaceDims, ExactError> {
    let len = a.first().or_else(|| b.first()).map_or(0, Vec::len);
    if let Some(bad) = a.iter().chain(b).find(|v| v.len() != len) {
        return Err(ExactError::DimensionMismatch {
            expected: len,
            found: bad.len(),
        });
    }
    let ar: Vec<&ExactVector> = a.iter().collect();
    let br: Vec<&ExactVector> = b.iter().collect();
    let all: Vec<&ExactVector> = a.iter().chain(b).collect();
    let dim_a = span_rank(&ar, len);
    let dim_b = span_rank(&br, len);
    let dim_sum = span_rank(&all, len);
    Ok(SubspaceDims {
        dim_a,
        dim_b,
        dim_sum,
        dim_intersection: dim_a + dim_b - dim_sum,
    })
}

/// True when `span(a) ⊆ span(b)`.
pub fn subspace_contained(a: &[ExactVector], b: &[ExactVector]) -> Result<bool, ExactError> {
    let d = subspace_dims(a, b)?;
    Ok(d.dim_sum == d.dim_b)
}

pub fn unit_vector(n: usize, i: usize) -> ExactVector {
    let mut v = vec![GaussianRational::zero(); n];
    v[i] = GaussianRational::one();
    v
}
