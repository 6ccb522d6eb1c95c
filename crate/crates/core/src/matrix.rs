//! Dense matrices over any [`Scalar`].
//!
//! Field operations (`det`, `inverse`, Schur complements, characteristic
//! coefficients) use pivoted Gaussian elimination. Over rings without
//! division (polynomials) use [`Matrix::det_division_free`] and
//! [`Matrix::adjugate`].

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from row vectors; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::ShapeMismatch {
                op: "from_rows",
                left: (r, c),
                right: (1, bad.len()),
            });
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix of small integers, handy in tests and generators.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| T::from_i64(x)).collect())
                .collect(),
        )
        .expect("rectangular literal")
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                T::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.clone() * c)
    }

    pub fn trace(&self) -> T {
        let n = self.rows.min(self.cols);
        (0..n).fold(T::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "add")?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "sub")?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() - b)
                .collect(),
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                op: "mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    let cur = std::mem::replace(&mut out.data[idx], T::zero());
                    out.data[idx] = cur + &(a.clone() * b);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        self.require_square("pow")?;
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    /// Submatrix with the given row and column indices, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        for &r in rows {
            self.check_index(r, self.rows, "select")?;
        }
        for &c in cols {
            self.check_index(c, self.cols, "select")?;
        }
        Ok(Self::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        }))
    }

    /// Contiguous sub-block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        assert!(
            r0 + h <= self.rows && c0 + w <= self.cols,
            "block out of range"
        );
        Self::from_fn(h, w, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, m: &Self) {
        assert!(
            r0 + m.rows <= self.rows && c0 + m.cols <= self.cols,
            "set_block out of range"
        );
        for i in 0..m.rows {
            for j in 0..m.cols {
                self.set(r0 + i, c0 + j, m.get(i, j).clone());
            }
        }
    }

    /// Determinant by Bird's division-free algorithm; works over any
    /// commutative ring. O(n^4) ring operations.
    pub fn det_division_free(&self) -> Result<T> {
        self.require_square("det_division_free")?;
        let n = self.rows;
        if n == 0 {
            return Ok(T::one());
        }
        let mut x = self.clone();
        for _ in 1..n {
            // mu(X): strictly upper part of X, diagonal = -(sum of later diagonal entries)
            let mut mu = Self::zeros(n, n);
            let mut tail = T::zero();
            for i in (0..n).rev() {
                mu.set(i, i, -tail.clone());
                tail = tail + x.get(i, i);
                for j in i + 1..n {
                    mu.set(i, j, x.get(i, j).clone());
                }
            }
            x = mu.checked_mul(self)?;
        }
        let top = x.get(0, 0).clone();
        Ok(if n % 2 == 0 { -top } else { top })
    }

    /// Classical adjugate `adj(M)` with `M adj(M) = det(M) I`, division-free.
    pub fn adjugate(&self) -> Result<Self> {
        self.require_square("adjugate")?;
        let n = self.rows;
        if n == 0 {
            return Ok(Self::zeros(0, 0));
        }
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
                let cof = self.select(&rows, &cols)?.det_division_free()?;
                out.set(i, j, if (i + j) % 2 == 0 { cof } else { -cof });
            }
        }
        Ok(out)
    }

    pub(crate) fn require_square(&self, op: &'static str) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                op,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn same_shape(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.shape() == other.shape() {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            })
        }
    }

    fn check_index(&self, index: usize, size: usize, op: &'static str) -> Result<()> {
        if index < size {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { op, index, size })
        }
    }
}

/// Result of forward elimination: the echelon rows and the sign/scale data
/// needed for determinants.
struct Elimination<T> {
    det: T,
    singular: bool,
}

impl<T: Field> Matrix<T> {
    fn eliminate(&self) -> Elimination<T> {
        let n = self.rows;
        let mut a = self.clone();
        let mut det = T::one();
        for col in 0..n {
            let pivot = (col..n)
                .map(|r| (r, a.get(r, col).pivot_weight()))
                .filter(|&(_, w)| w > 0.0)
                .fold(None, |best: Option<(usize, f64)>, cur| match best {
                    Some(b) if b.1 >= cur.1 => Some(b),
                    _ => Some(cur),
                });
            let Some((p, _)) = pivot else {
                return Elimination {
                    det: T::zero(),
                    singular: true,
                };
            };
            if p != col {
                a.swap_rows(p, col);
                det = -det;
            }
            let pv = a.get(col, col).clone();
            det = det * &pv;
            for r in col + 1..n {
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                let f = f / &pv;
                for c in col..n {
                    let v = a.get(r, c).clone() - &(f.clone() * a.get(col, c));
                    a.set(r, c, v);
                }
            }
        }
        Elimination {
            det,
            singular: false,
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub fn det(&self) -> Result<T> {
        self.require_square("det")?;
        Ok(self.eliminate().det)
    }

    pub fn is_singular(&self) -> Result<bool> {
        self.require_square("is_singular")?;
        Ok(self.eliminate().singular)
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        self.require_square("inverse")?;
        self.solve(&Self::identity(self.rows)).map_err(|e| match e {
            Error::Singular(_) => Error::Singular(format!("{}x{} matrix", self.rows, self.cols)),
            other => other,
        })
    }

    /// Solves `self * X = rhs`.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        self.require_square("solve")?;
        if rhs.rows != self.rows {
            return Err(Error::ShapeMismatch {
                op: "solve",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let n = self.rows;
        let m = rhs.cols;
        let mut a = self.clone();
        let mut b = rhs.clone();
        for col in 0..n {
            let mut best: Option<(usize, f64)> = None;
            for r in col..n {
                let w = a.get(r, col).pivot_weight();
                if w > 0.0 && best.is_none_or(|(_, bw)| w > bw) {
                    best = Some((r, w));
                }
            }
            let Some((p, _)) = best else {
                return Err(Error::Singular("solve".into()));
            };
            a.swap_rows(p, col);
            b.swap_rows(p, col);
            let inv = a.get(col, col).recip().expect("nonzero pivot");
            for c in 0..n {
                let v = a.get(col, c).clone() * &inv;
                a.set(col, c, v);
            }
            for c in 0..m {
                let v = b.get(col, c).clone() * &inv;
                b.set(col, c, v);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let v = a.get(r, c).clone() - &(f.clone() * a.get(col, c));
                    a.set(r, c, v);
                }
                for c in 0..m {
                    let v = b.get(r, c).clone() - &(f.clone() * b.get(col, c));
                    b.set(r, c, v);
                }
            }
        }
        Ok(b)
    }

    /// Minor `Δ_{I,J}` with row set `rows` and column set `cols`; the empty
    /// minor is 1.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<T> {
        if rows.len() != cols.len() {
            return Err(Error::ShapeMismatch {
                op: "minor",
                left: (rows.len(), 0),
                right: (0, cols.len()),
            });
        }
        if rows.is_empty() {
            return Ok(T::one());
        }
        self.select(rows, cols)?.det()
    }

    /// Schur complement of the square sub-block `D = M[rows, cols]`:
    /// `M[rows^c, cols^c] - M[rows^c, cols] D^{-1} M[rows, cols^c]`.
    /// Remaining rows and columns keep their original order.
    pub fn schur_complement(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        if rows.len() != cols.len() {
            return Err(Error::NotSquare {
                op: "schur_complement",
                rows: rows.len(),
                cols: cols.len(),
            });
        }
        let rest_rows: Vec<usize> = (0..self.rows).filter(|r| !rows.contains(r)).collect();
        let rest_cols: Vec<usize> = (0..self.cols).filter(|c| !cols.contains(c)).collect();
        let a = self.select(&rest_rows, &rest_cols)?;
        let b = self.select(&rest_rows, cols)?;
        let c = self.select(rows, &rest_cols)?;
        let d = self.select(rows, cols)?;
        let d_inv_c = d
            .solve(&c)
            .map_err(|_| Error::Singular("Schur complement block".into()))?;
        a.checked_sub(&b.checked_mul(&d_inv_c)?)
    }

    /// Elementary symmetric functions `e_0..e_n` of the eigenvalues, from
    /// traces of powers via Newton's identities.
    pub fn char_coeffs(&self) -> Result<Vec<T>> {
        self.require_square("char_coeffs")?;
        let n = self.rows;
        let mut power_sums = Vec::with_capacity(n);
        let mut p = Self::identity(n);
        for _ in 0..n {
            p = p.checked_mul(self)?;
            power_sums.push(p.trace());
        }
        let mut e = vec![T::one()];
        for k in 1..=n {
            let mut acc = T::zero();
            for i in 1..=k {
                let term = e[k - i].clone() * &power_sums[i - 1];
                acc = if i % 2 == 1 { acc + term } else { acc - term };
            }
            e.push(acc / T::from_i64(k as i64));
        }
        Ok(e)
    }
}

impl<T: Scalar> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        self.get(i, j)
    }
}

impl<T: Scalar> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

// Operator forms panic on shape mismatch; the checked_* methods return errors.
impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.checked_add(rhs).expect("matrix add: shape mismatch")
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.checked_sub(rhs).expect("matrix sub: shape mismatch")
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.checked_mul(rhs).expect("matrix mul: shape mismatch")
    }
}

impl<T: Scalar> Neg for &Matrix<T> {
    type Output = Matrix<T>;

    fn neg(self) -> Matrix<T> {
        self.map(|x| -x.clone())
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}", self.rows, self.cols)?;
        if self.cols == 0 {
            return f.write_str("[]");
        }
        f.debug_list().entries(self.data.chunks(self.cols)).finish()
    }
}

impl<T: Scalar> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// A matrix partitioned into blocks of the given row and column sizes.
#[derive(Clone, PartialEq, Debug)]
pub struct BlockMatrix<T> {
    row_sizes: Vec<usize>,
    col_sizes: Vec<usize>,
    row_offsets: Vec<usize>,
    col_offsets: Vec<usize>,
    flat: Matrix<T>,
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(sizes.len() + 1);
    let mut acc = 0;
    out.push(0);
    for s in sizes {
        acc += s;
        out.push(acc);
    }
    out
}

impl<T: Scalar> BlockMatrix<T> {
    pub fn zeros(row_sizes: Vec<usize>, col_sizes: Vec<usize>) -> Self {
        let row_offsets = offsets(&row_sizes);
        let col_offsets = offsets(&col_sizes);
        let flat = Matrix::zeros(*row_offsets.last().unwrap(), *col_offsets.last().unwrap());
        BlockMatrix {
            row_sizes,
            col_sizes,
            row_offsets,
            col_offsets,
            flat,
        }
    }

    pub fn from_flat(
        row_sizes: Vec<usize>,
        col_sizes: Vec<usize>,
        flat: Matrix<T>,
    ) -> Result<Self> {
        let row_offsets = offsets(&row_sizes);
        let col_offsets = offsets(&col_sizes);
        let shape = (*row_offsets.last().unwrap(), *col_offsets.last().unwrap());
        if shape != flat.shape() {
            return Err(Error::ShapeMismatch {
                op: "BlockMatrix::from_flat",
                left: shape,
                right: flat.shape(),
            });
        }
        Ok(BlockMatrix {
            row_sizes,
            col_sizes,
            row_offsets,
            col_offsets,
            flat,
        })
    }

    pub fn flat(&self) -> &Matrix<T> {
        &self.flat
    }

    pub fn into_flat(self) -> Matrix<T> {
        self.flat
    }

    pub fn row_sizes(&self) -> &[usize] {
        &self.row_sizes
    }

    pub fn col_sizes(&self) -> &[usize] {
        &self.col_sizes
    }

    pub fn num_block_rows(&self) -> usize {
        self.row_sizes.len()
    }

    pub fn num_block_cols(&self) -> usize {
        self.col_sizes.len()
    }

    /// Flat indices covered by block row `i`.
    pub fn row_range(&self, i: usize) -> std::ops::Range<usize> {
        self.row_offsets[i]..self.row_offsets[i + 1]
    }

    pub fn col_range(&self, j: usize) -> std::ops::Range<usize> {
        self.col_offsets[j]..self.col_offsets[j + 1]
    }

    /// The `[i],[j]` block.
    pub fn block(&self, i: usize, j: usize) -> Matrix<T> {
        self.flat.block(
            self.row_offsets[i],
            self.col_offsets[j],
            self.row_sizes[i],
            self.col_sizes[j],
        )
    }

    pub fn set_block(&mut self, i: usize, j: usize, m: &Matrix<T>) -> Result<()> {
        if m.shape() != (self.row_sizes[i], self.col_sizes[j]) {
            return Err(Error::ShapeMismatch {
                op: "BlockMatrix::set_block",
                left: (self.row_sizes[i], self.col_sizes[j]),
                right: m.shape(),
            });
        }
        self.flat
            .set_block(self.row_offsets[i], self.col_offsets[j], m);
        Ok(())
    }

    pub fn add_to_block(&mut self, i: usize, j: usize, m: &Matrix<T>) -> Result<()> {
        let cur = self.block(i, j);
        let sum = cur.checked_add(m)?;
        self.set_block(i, j, &sum)
    }
}

impl<T: Field> BlockMatrix<T> {
    /// Schur complement with respect to the sub-block made of block rows
    /// `rows` and block columns `cols`.
    pub fn schur(&self, rows: &[usize], cols: &[usize]) -> Result<Matrix<T>> {
        let r: Vec<usize> = rows.iter().flat_map(|&i| self.row_range(i)).collect();
        let c: Vec<usize> = cols.iter().flat_map(|&j| self.col_range(j)).collect();
        self.flat.schur_complement(&r, &c)
    }
}
